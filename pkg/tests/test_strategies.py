import pytest

from skewjoin.datagen import BUILD, PROBE, Tuple
from skewjoin.detector import NeverSkewedClassifier, OracleClassifier
from skewjoin.rng import hash_node, mix64
from skewjoin.strategies import (
    ROUTES,
    STRATEGY_NAMES,
    make_context,
    route_bppr,
    route_grahj,
    route_pnr,
    route_prpd,
    route_sfr,
    sfr_col_nodes,
    sfr_grid,
    sfr_row_nodes,
)


def ctx_for(strategy, n=3, origin=0, skew_keys=(), epsilon=0.2):
    return make_context(strategy, n, origin,
                        OracleClassifier(frozenset(skew_keys)), epsilon)


def t(key, node=0, seq=0, side=PROBE):
    return Tuple(key, node, seq, side)


def test_grahj_single_hash_destination():
    ctx = ctx_for("grahj")
    for key in range(20):
        d = route_grahj(PROBE, t(key), ctx)
        assert d.nodes == (hash_node(key, 3),)
        assert not d.replicate and not d.skew_path


def test_grahj_colocates_sides():
    ctx = ctx_for("grahj")
    for key in range(20):
        assert (route_grahj(BUILD, t(key, side=BUILD), ctx).nodes
                == route_grahj(PROBE, t(key), ctx).nodes)


def test_prpd_skewed_probe_kept_local():
    ctx = ctx_for("prpd", origin=2, skew_keys=(5,))
    d = route_prpd(PROBE, t(5, node=2), ctx)
    assert d.nodes == (2,) and d.skew_path


def test_prpd_skewed_build_broadcast():
    ctx = ctx_for("prpd", n=3, skew_keys=(5,))
    d = route_prpd(BUILD, t(5, side=BUILD), ctx)
    assert d.nodes == (0, 1, 2) and d.replicate


def test_prpd_non_skewed_hash_path():
    ctx = ctx_for("prpd", skew_keys=(5,))
    assert route_prpd(PROBE, t(6), ctx).nodes == (hash_node(6, 3),)


def test_sfr_grid_factorization():
    assert sfr_grid(4) == (2, 2)
    assert sfr_grid(6) == (2, 3)
    assert sfr_grid(12) == (3, 4)
    assert sfr_grid(3) == (1, 3)
    assert sfr_grid(7) == (1, 7)


def test_sfr_rows_and_columns_intersect_once():
    # 2x2 grid: row 0 = {0,1}, column 1 = {1,3}; intersection is node 1
    assert sfr_row_nodes(0, 2) == (0, 1)
    assert sfr_col_nodes(1, 2, 2) == (1, 3)
    assert set(sfr_row_nodes(0, 2)) & set(sfr_col_nodes(1, 2, 2)) == {1}


def test_sfr_skewed_tuples_follow_grid():
    ctx = ctx_for("sfr", n=4, skew_keys=(9,))
    b = route_sfr(BUILD, t(9, node=1, seq=3, side=BUILD), ctx)
    p = route_sfr(PROBE, t(9, node=2, seq=8), ctx)
    code_b = mix64((1 << 40) | 3)
    code_p = mix64((2 << 40) | 8)
    assert b.nodes == sfr_row_nodes(code_b % 2, 2)
    assert p.nodes == sfr_col_nodes(code_p % 2, 2, 2)
    assert len(set(b.nodes) & set(p.nodes)) == 1


def test_sfr_degenerate_grid_n3():
    # 1x3 grid: skewed builds replicate across the whole row, skewed
    # probes map to a single column node
    ctx = ctx_for("sfr", n=3, skew_keys=(9,))
    b = route_sfr(BUILD, t(9, side=BUILD), ctx)
    p = route_sfr(PROBE, t(9, node=1, seq=5), ctx)
    assert b.nodes == (0, 1, 2)
    assert len(p.nodes) == 1


def test_pnr_round_robin_cursor():
    ctx = ctx_for("pnr", n=3, skew_keys=(4,))
    dests = [route_pnr(PROBE, t(4, seq=i), ctx).nodes[0] for i in range(6)]
    assert dests == [0, 1, 2, 0, 1, 2]


def test_pnr_per_key_loads_within_one():
    ctx = ctx_for("pnr", n=4, skew_keys=(1, 2, 3))
    loads = [0, 0, 0, 0]
    for i in range(97):
        for key in (1, 2, 3):
            loads[route_pnr(PROBE, t(key, seq=i), ctx).nodes[0]] += 1
    assert max(loads) - min(loads) <= 3  # <= 1 per key


def test_pnr_skewed_build_broadcast():
    ctx = ctx_for("pnr", n=3, skew_keys=(4,))
    assert route_pnr(BUILD, t(4, side=BUILD), ctx).nodes == (0, 1, 2)


def test_bppr_builds_always_hash():
    ctx = ctx_for("bppr", skew_keys=(3,))
    d = route_bppr(BUILD, t(3, side=BUILD), ctx)
    assert d.nodes == (hash_node(3, 3),)
    assert not d.skew_path


def test_bppr_non_skewed_matches_grahj():
    ctx = ctx_for("bppr", skew_keys=())
    g = ctx_for("grahj")
    for key in range(30):
        assert route_bppr(PROBE, t(key), ctx).nodes == route_grahj(PROBE, t(key), g).nodes


def test_bppr_with_never_skewed_equals_grahj_everywhere():
    bctx = make_context("bppr", 5, 1, NeverSkewedClassifier())
    gctx = make_context("grahj", 5, 1, NeverSkewedClassifier())
    for key in range(200):
        for side in (BUILD, PROBE):
            assert (route_bppr(side, t(key, side=side), bctx)
                    == route_grahj(side, t(key, side=side), gctx))


def test_bppr_skewed_goes_through_state():
    ctx = ctx_for("bppr", skew_keys=(3,))
    d = route_bppr(PROBE, t(3), ctx)
    assert d.skew_path
    assert d.nodes[0] in ctx.bppr_state.candidate_members(3)


def test_route_table_complete():
    assert set(ROUTES) == set(STRATEGY_NAMES)


def test_make_context_rejects_unknown():
    with pytest.raises(ValueError):
        make_context("nope", 3, 0, NeverSkewedClassifier())
