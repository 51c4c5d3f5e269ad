import random
from collections import Counter

import pytest

from skewjoin.datagen import gen_zipf_keys
from skewjoin.detector import OnlineClassifier, SkewSketch


def test_no_eviction_small_stream():
    s = SkewSketch(2)
    for k in ["a", "a", "b"]:
        s.observe(hash(k))
    assert s.estimate(hash("a")) == (2, 0)
    assert s.estimate(hash("b")) == (1, 0)


def test_eviction_inherits_min_count():
    # [a,a,b,c] at capacity 2: c replaces b with est 2, overestimate 1
    a, b, c = 1, 2, 3
    s = SkewSketch(2)
    for k in (a, a, b, c):
        s.observe(k)
    assert s.estimate(b) is None
    assert s.estimate(c) == (2, 1)
    assert s.estimate(a) == (2, 0)
    assert s.n_seen == 4


def test_overestimation_bound_zipf():
    keys = gen_zipf_keys(10_000, 500, 1.25, seed=21)
    s = SkewSketch(8)
    truth = Counter()
    for k in keys:
        s.observe(k)
        truth[k] += 1
    for key, est, over in s.items():
        assert truth[key] <= est <= truth[key] + 10_000 / 8
        assert est - truth[key] <= over <= 10_000 / 8


def test_frequent_keys_always_tracked():
    rng = random.Random(5)
    k = 50
    stream = [rng.randrange(2000) for _ in range(20_000)]
    stream += [7777] * 600  # frequency 600/20600 > 1/50
    rng.shuffle(stream)
    s = SkewSketch(k)
    for key in stream:
        s.observe(key)
    truth = Counter(stream)
    for key, cnt in truth.items():
        if cnt > len(stream) / k:
            assert s.estimate(key) is not None


def test_merge_identity():
    s = SkewSketch(4)
    for k in (1, 1, 2, 3):
        s.observe(k)
    merged = s.merge(SkewSketch(4))
    assert sorted(merged.items()) == sorted(s.items())
    assert merged.n_seen == s.n_seen


def test_merge_disjoint_union():
    a, b = SkewSketch(8), SkewSketch(8)
    for k in (1, 1, 2):
        a.observe(k)
    for k in (5, 6, 6, 6):
        b.observe(k)
    merged = a.merge(b)
    assert dict((k, c) for k, c, _ in merged.items()) == {1: 2, 2: 1, 5: 1, 6: 3}
    assert merged.n_seen == 7


def test_merge_split_stream_bound():
    keys = gen_zipf_keys(40_000, 1000, 1.2, seed=13)
    half = len(keys) // 2
    a, b = SkewSketch(32), SkewSketch(32)
    for k in keys[:half]:
        a.observe(k)
    for k in keys[half:]:
        b.observe(k)
    merged = a.merge(b)
    truth = Counter(keys)
    for key, est, _ in merged.items():
        assert est - truth[key] <= len(keys) / 32
    assert merged.n_seen == len(keys)


def test_merge_capacity_mismatch():
    with pytest.raises(ValueError):
        SkewSketch(4).merge(SkewSketch(8))


def test_merge_keeps_top_k():
    a, b = SkewSketch(2), SkewSketch(2)
    for k in (1, 1, 1, 2):
        a.observe(k)
    for k in (3, 3, 4):
        b.observe(k)
    merged = a.merge(b)
    assert len(merged) == 2
    kept = {k for k, _, _ in merged.items()}
    assert kept == {1, 3}


def test_is_skewed_untracked_false():
    s = SkewSketch(2)
    s.observe(1)
    assert not s.is_skewed(999, theta=0.001, warmup=0)


def test_warmup_gate():
    clf = OnlineClassifier(theta=0.001, capacity=100, warmup=1000)
    for _ in range(999):
        clf.observe(7)
    assert not clf.is_skewed(7)
    clf.observe(7)
    assert clf.is_skewed(7)


def test_latched_decision_is_monotone():
    clf = OnlineClassifier(theta=0.5, capacity=4, warmup=0)
    clf.observe(1)
    assert clf.is_skewed(1)  # frequency 1/1 passes theta
    # dilute far below theta; the latch must hold
    for k in range(2, 100):
        clf.observe(k)
    assert clf.is_skewed(1)


def test_threshold_detection_after_warmup():
    # key at ~5% true frequency, theta=1%: must be flagged after warm-up
    rng = random.Random(3)
    clf = OnlineClassifier(theta=0.01, capacity=100, warmup=1000)
    hot = 42
    for i in range(20_000):
        clf.observe(hot if rng.random() < 0.05 else 1000 + rng.randrange(5000))
    assert clf.is_skewed(hot)
    assert clf.observes == 20_000


def test_sketch_len_capped():
    s = SkewSketch(16)
    for k in range(10_000):
        s.observe(k % 977)
    assert len(s) <= 16
    assert s.n_seen == 10_000


def test_dump_csv(tmp_path):
    s = SkewSketch(4)
    for k in (1, 1, 2):
        s.observe(k)
    path = tmp_path / "sketch.csv"
    s.dump_csv(str(path))
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "key,est,overestimate"
    assert len(lines) == 3
