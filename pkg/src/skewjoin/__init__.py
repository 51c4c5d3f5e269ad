"""Skew-aware distributed hash join simulator and library."""

from .bppr import BpprState, CandidateSet, NodeSeq, balance_factor, gen_seq, update_u
from .datagen import (
    Tuple,
    Workload,
    WorkloadConfig,
    build_workload,
    gen_zipf_keys,
    load_workload_csv,
    save_workload_csv,
)
from .detector import SkewSketch
from .metrics import global_balance, throughput, verify_report
from .simulator import (
    ClusterSpec,
    CostModel,
    NodeLedger,
    SimReport,
    local_hash_join,
    oracle_join,
    run,
)
from .strategies import STRATEGY_NAMES, Destinations, RoutingContext

__version__ = "0.1.0"

__all__ = [
    "BpprState", "CandidateSet", "NodeSeq", "balance_factor", "gen_seq",
    "update_u", "Tuple", "Workload", "WorkloadConfig", "build_workload",
    "gen_zipf_keys", "load_workload_csv", "save_workload_csv", "SkewSketch",
    "global_balance", "throughput", "verify_report", "ClusterSpec",
    "CostModel", "NodeLedger", "SimReport", "local_hash_join", "oracle_join",
    "run", "STRATEGY_NAMES", "Destinations", "RoutingContext", "__version__",
]
