import pytest

from skewjoin.datagen import WorkloadConfig, build_workload


@pytest.fixture(scope="session")
def small_workload():
    """Skewed 4-node workload small enough to materialize join pairs."""
    return build_workload(WorkloadConfig(
        n_nodes=4, s_count=3000, rs_ratio=0.8, universe=400, zipf_z=1.3,
        seed=42,
    ))


@pytest.fixture(scope="session")
def concentrated_workload():
    return build_workload(WorkloadConfig(
        n_nodes=3, s_count=4000, rs_ratio=0.7, universe=500, zipf_z=1.25,
        seed=9, placement="concentrated", skew_node=1,
    ))
