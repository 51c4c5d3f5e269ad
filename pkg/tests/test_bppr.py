import random

import pytest

from skewjoin.bppr import (
    BpprState,
    CandidateSet,
    NodeSeq,
    balance_factor,
    gen_seq,
    update_u,
)
from skewjoin.rng import MASK64, hash_node, mix64


def full_sequence(key: int, n: int) -> list[int]:
    seq = NodeSeq(key)
    for _ in range(n):
        gen_seq(key, seq, n)
    return seq.nodes


def brute_force_sequence(key: int, n: int) -> list[int]:
    # independent re-implementation: walk epochs, dedup in encounter order
    out: list[int] = []
    epoch = 0
    while len(out) < n:
        c = mix64((key + epoch) & MASK64) % n
        if c not in out:
            out.append(c)
        epoch += 1
    return out


# -- balance factor -----------------------------------------------------------

def test_balance_factor_all_on_one_node():
    assert balance_factor([4, 0, 0]) == 1.0


def test_balance_factor_equal_loads():
    assert balance_factor([5, 5, 5]) == 0.0


def test_balance_factor_zero_guard():
    assert balance_factor([0, 0]) == 0.0


def test_balance_factor_direct():
    assert balance_factor([3, 2, 1]) == pytest.approx(2 / 3)


def test_balance_factor_empty_rejected():
    with pytest.raises(ValueError):
        balance_factor([])


# -- sequence generation ------------------------------------------------------

def test_first_element_is_hash_node():
    for key in (0, 1, 42, 99991):
        seq = gen_seq(key, NodeSeq(key), 5)
        assert seq.nodes[0] == hash_node(key, 5)


def test_full_sequence_is_permutation():
    for key in range(50):
        nodes = full_sequence(key, 7)
        assert sorted(nodes) == list(range(7))


def test_sequence_matches_brute_force():
    assert full_sequence(42, 4) == brute_force_sequence(42, 4)
    rng = random.Random(8)
    for _ in range(200):
        key = rng.randrange(1 << 63)
        n = rng.randint(2, 16)
        assert full_sequence(key, n) == brute_force_sequence(key, n)


def test_gen_seq_noop_when_saturated():
    seq = NodeSeq(3, full_sequence(3, 4))
    before = list(seq.nodes)
    gen_seq(3, seq, 4)
    assert seq.nodes == before


def test_update_u_grows_along_prefix():
    key, n = 17, 6
    seq = NodeSeq(key)
    u = CandidateSet(key)
    ref = brute_force_sequence(key, n)
    for size in range(1, n + 1):
        update_u(key, u, seq, n)
        assert u.members == ref[:size]
    update_u(key, u, seq, n)  # saturated: unchanged
    assert u.members == ref


# -- routing ------------------------------------------------------------------

def test_first_tuple_routes_to_hash_node():
    st = BpprState(4, 0.2)
    key = 1234
    assert st.route_skewed(key) == hash_node(key, 4)


def test_expansion_when_last_is_minimum():
    # state mirroring a worked trace: one key with 2 tuples already on its
    # default node, all other loads zero, next tuple must expand the set
    st = BpprState(3, 0.2)
    key = 7
    first = st.route_skewed(key)
    assert first == hash_node(key, 3)
    second = st.route_skewed(key)  # loads [1,0,0] -> tentative violates
    seq = brute_force_sequence(key, 3)
    assert second == seq[1]
    assert st.candidate_members(key) == seq[:2]


def test_epsilon_one_never_expands():
    st = BpprState(4, 1.0)
    key = 555
    q = hash_node(key, 4)
    for _ in range(500):
        assert st.route_skewed(key) == q
    assert st.candidate_members(key) == [q]


def test_single_key_stream_balances():
    # with reassignment recheck on, a lone key must spread until the
    # final load vector meets the threshold
    st = BpprState(4, 0.2, recheck=True)
    trace = [st.route_skewed(99) for _ in range(10_000)]
    loads = [0, 0, 0, 0]
    for node in trace:
        loads[node] += 1
    assert loads == st.loads
    assert balance_factor(loads) <= 0.2


def test_local_balance_fresh_state():
    assert BpprState(3, 0.2).local_balance() == 0.0


def test_local_balance_counts_empty_partitions():
    st = BpprState(3, 0.9)
    st.loads = [10, 8, 0]
    assert balance_factor(st.loads) == 1.0


def test_multi_key_stream_meets_threshold():
    rng = random.Random(31)
    for eps in (0.1, 0.3):
        st = BpprState(5, eps)
        keys = [rng.randrange(40) for _ in range(20_000)]
        for k in keys:
            st.route_skewed(k)
        assert st.local_balance() <= eps + 0.05
        assert st.extrema_consistent()


def test_cached_extrema_match_scan_every_step():
    rng = random.Random(12)
    st = BpprState(4, 0.15)
    for _ in range(3000):
        st.route_skewed(rng.randrange(12))
        assert st.extrema_consistent()


def test_routes_stay_inside_candidate_set():
    rng = random.Random(77)
    st = BpprState(6, 0.25)
    for _ in range(5000):
        key = rng.randrange(30)
        node = st.route_skewed(key)
        members = st.candidate_members(key)
        assert node in members
        assert members == brute_force_sequence(key, 6)[: len(members)]


def test_prefix_nesting_across_nodes():
    # independent per-node states over different streams of the same keys:
    # candidate sets for one key must always be nested prefixes
    rng = random.Random(4)
    states = [BpprState(5, 0.2) for _ in range(3)]
    keys = list(range(25))
    for _ in range(8000):
        st = states[rng.randrange(3)]
        st.route_skewed(rng.choice(keys))
        key = rng.choice(keys)
        sets = [tuple(s.candidate_members(key)) for s in states]
        nonempty = [s for s in sets if s]
        nonempty.sort(key=len)
        for a, b in zip(nonempty, nonempty[1:]):
            assert b[: len(a)] == a
        if nonempty:
            assert hash_node(key, 5) == nonempty[0][0]
            longest = max(nonempty, key=len)
            assert set().union(*map(set, nonempty)) == set(longest)


def test_ops_grow_linearly():
    def ops_for(m: int) -> int:
        rng = random.Random(1)
        st = BpprState(4, 0.2)
        for _ in range(m):
            st.route_skewed(rng.randrange(50))
        return st.ops

    ratio = ops_for(100_000) / ops_for(10_000)
    assert 8 <= ratio <= 12


def test_state_validation():
    with pytest.raises(ValueError):
        BpprState(0, 0.2)
    with pytest.raises(ValueError):
        BpprState(3, 0.0)
    with pytest.raises(ValueError):
        BpprState(3, 1.5)
