import threading

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from amdahl_k import DomainError, ParseError
from amdahl_k.algorithms import (
    PhaseTimings,
    apriori,
    cdf97_forward,
    cdf97_inverse,
    fft,
    knn_classify,
    nbc_classify,
    nbc_train,
    split_range,
)
from amdahl_k.algorithms import readers
from amdahl_k.decomposition import builtin
from oracles import (
    brute_force_itemsets,
    exhaustive_knn,
    lifting_reference,
    naive_dft,
    nbc_posterior_argmax,
)

WORKERS = [1, 2, 4, 8]


def rel_err(got, ref):
    return np.max(np.abs(got - ref)) / max(np.max(np.abs(ref)), 1e-300)


# -- lanes / timings ------------------------------------------------------

@given(st.integers(0, 500), st.integers(1, 16))
def test_split_range_covers(n, parts):
    chunks = split_range(n, parts)
    assert len(chunks) == parts
    assert [i for r in chunks for i in r] == list(range(n))
    sizes = [len(r) for r in chunks]
    assert max(sizes) - min(sizes) <= 1


def test_phase_timings_accumulate_and_serialize():
    t = PhaseTimings()
    t.add("a", "serial", 5)
    t.add("b", "parallel", 7)
    t.add("a", "serial", 3)
    assert t.labels == ["a", "b"]
    assert t["a"] == 8 and t.total_ns() == 15 and t.total_ns("parallel") == 7
    assert PhaseTimings.from_list(t.to_list()).to_list() == t.to_list()
    with pytest.raises(ValueError):
        t.add("a", "parallel", 1)
    with pytest.raises(ValueError):
        t.add("c", "serial", -1)


# -- apriori --------------------------------------------------------------

def test_apriori_single_item():
    result, _ = apriori([{"A"}], 1)
    assert result == {frozenset("A"): 1}


def test_apriori_small_example():
    db = [{"A", "B"}, {"A", "B"}, {"B", "C"}]
    result, _ = apriori(db, 2)
    # brute-force enumeration gives {A}:2, {B}:3, {A,B}:2
    assert result == {frozenset("A"): 2, frozenset("B"): 3, frozenset("AB"): 2}
    assert result == brute_force_itemsets(db, 2)


def test_apriori_support_above_db_size():
    result, timings = apriori([{"A", "B"}, {"B"}], 3)
    assert result == {}
    assert "gen-candidates" not in timings


transactions = st.lists(
    st.sets(st.sampled_from("abcdef"), min_size=1), min_size=1, max_size=15
)


@settings(max_examples=150, deadline=None)
@given(transactions, st.integers(1, 3), st.sampled_from(WORKERS))
def test_apriori_matches_brute_force(db, eps, workers):
    result, _ = apriori(db, eps, workers)
    assert result == brute_force_itemsets(db, eps)


def test_apriori_phase_labels_match_catalog():
    db = [{"a", "b", "c"}, {"a", "b"}, {"a", "c"}, {"b", "c"}, {"a", "b", "c"}]
    _, timings = apriori(db, 2, 3)
    assert set(timings.labels) == set(builtin("apriori").labels)
    for e in timings.entries:
        assert e.role == builtin("apriori").role_of(e.label)


@pytest.mark.parametrize("args", [([], 1), ([{"a"}, set()], 1), ([{"a"}], 0), ([{"a"}], 1.5)])
def test_apriori_errors(args):
    with pytest.raises(DomainError):
        apriori(*args)


# -- knn ------------------------------------------------------------------

def test_knn_nearest_point():
    train = [((0,), "A"), ((10,), "B"), ((11,), "B")]
    assert knn_classify(train, (0.5,), 1)[0] == "A"


def test_knn_majority():
    train = [((0,), "A"), ((1,), "A"), ((5,), "B"), ((6,), "B"), ((7,), "B")]
    # distances 4.4, 3.4, 0.6, 1.6, 2.6 -> nearest three are all B
    assert knn_classify(train, (4.4,), 3)[0] == "B"


def test_knn_all_points_one_class():
    train = [((float(i), 1.0), "only") for i in range(5)]
    assert knn_classify(train, (100.0, 0.0), 5)[0] == "only"


def test_knn_vote_tie_goes_to_first_seen_class():
    # k=3 over three classes, one vote each
    train = [((5,), "z"), ((1,), "y"), ((-1,), "x"), ((2,), "z")]
    label, _ = knn_classify(train, (0,), 3)
    assert label == "z"
    assert label == exhaustive_knn(train, (0,), 3)


def test_knn_equal_distances_break_by_index():
    train = [((1,), "late"), ((-1,), "early"), ((1,), "early"), ((-1,), "late"), ((9,), "late")]
    # four points at distance 1; the first three by index are late, early, early
    assert knn_classify(train, (0,), 3)[0] == "early"


@pytest.mark.parametrize("query, k", [((0.0, 0.0), 1), ((0.0,), 2), ((0.0,), 7), ((0.0,), 0)])
def test_knn_errors(query, k):
    train = [((0.0,), "a"), ((1.0,), "b"), ((2.0,), "a")]
    with pytest.raises(DomainError):
        knn_classify(train, query, k)


def test_knn_ragged_training():
    with pytest.raises(DomainError):
        knn_classify([((0.0,), "a"), ((1.0, 2.0), "b")], (0.0,), 1)


def random_knn_instance(rng):
    n = int(rng.integers(3, 40))
    dim = int(rng.integers(1, 5))
    n_classes = int(rng.integers(2, 4))
    # integer coordinates make exact distance ties common
    pts = rng.integers(-5, 6, size=(n, dim)).astype(float)
    labels = rng.integers(n_classes, size=n)
    train = [(tuple(p), f"c{lbl}") for p, lbl in zip(pts.tolist(), labels.tolist())]
    query = tuple(rng.integers(-5, 6, size=dim).astype(float).tolist())
    k = int(rng.choice([kk for kk in (1, 3, 5, 7) if kk <= n]))
    return train, query, k


def test_knn_matches_exhaustive_scan():
    rng = np.random.default_rng(1234)
    for _ in range(200):
        train, query, k = random_knn_instance(rng)
        for w in (1, 3):
            assert knn_classify(train, query, k, w)[0] == exhaustive_knn(train, query, k)


def test_knn_phase_labels_match_catalog():
    train = [((float(i),), "ab"[i % 2]) for i in range(20)]
    _, timings = knn_classify(train, (3.2,), 5, 4)
    assert timings.labels == builtin("knn").labels


# -- fft ------------------------------------------------------------------

def test_fft_impulse_and_constant():
    assert np.allclose(fft([1, 0, 0, 0])[0], [1, 1, 1, 1], atol=0, rtol=0)
    out = fft([1, 1, 1, 1])[0]
    assert np.max(np.abs(out - [4, 0, 0, 0])) < 1e-15


def test_fft_length_one():
    out, _ = fft([2 + 3j])
    assert out.tolist() == [2 + 3j]


@pytest.mark.parametrize("n", [2, 4, 64, 1024, 4096])
def test_fft_matches_naive_dft(n):
    rng = np.random.default_rng(n)
    x = rng.normal(size=n) + 1j * rng.normal(size=n)
    got, _ = fft(x, workers=3)
    assert rel_err(got, naive_dft(x)) <= 1e-9


@pytest.mark.parametrize("n", [0, 3, 6, 1000])
def test_fft_rejects_bad_length(n):
    with pytest.raises(DomainError):
        fft(np.ones(n))


def test_fft_does_not_modify_input():
    x = np.arange(8, dtype=complex)
    fft(x, 2)
    assert x.tolist() == list(range(8))


def test_fft_phase_labels():
    _, timings = fft(np.ones(16), 2)
    assert set(timings.labels) == {"twiddle", "butterfly", "complex-multiply", "other"}
    assert set(timings.labels) == set(builtin("fft").labels)


# -- cdf 9/7 --------------------------------------------------------------

def round_trip(x, levels, workers=1):
    c, _ = cdf97_forward(x, levels, workers)
    y, _ = cdf97_inverse(c, levels, workers)
    return c, y


def test_cdf97_constant_round_trip():
    x = np.full(8, 3.5)
    _, y = round_trip(x, 1)
    assert np.max(np.abs(y - x)) <= 1e-9


def test_cdf97_impulse_round_trip():
    x = np.zeros(16)
    x[0] = 1.0
    _, y = round_trip(x, 2)
    assert np.max(np.abs(y - x)) < 1e-9


def test_cdf97_ramp_high_pass_vanishes_inside():
    x = np.arange(32, dtype=float)
    c, y = round_trip(x, 3)
    assert np.max(np.abs(y - x)) < 1e-9
    # finest detail band is c[16:32]; edge coefficients feel the mirror kink
    assert np.max(np.abs(c[17:30])) < 1e-9
    assert np.max(np.abs(c - lifting_reference(x, 3))) < 1e-12


def test_cdf97_matches_scalar_reference():
    rng = np.random.default_rng(7)
    for n, levels in [(2, 1), (8, 3), (48, 2), (256, 5)]:
        x = rng.normal(size=n)
        c, _ = cdf97_forward(x, levels, 3)
        assert np.max(np.abs(c - lifting_reference(x, levels))) < 1e-12


@pytest.mark.parametrize("exp", [1, 4, 10, 14])
def test_cdf97_round_trip_sizes(exp):
    x = np.random.default_rng(exp).normal(size=1 << exp)
    levels = min(exp, 4)
    _, y = round_trip(x, levels, workers=4)
    assert np.max(np.abs(y - x)) < 1e-9


@pytest.mark.parametrize("n, levels", [(12, 3), (4, 3), (0, 1), (8, 0)])
def test_cdf97_bad_length(n, levels):
    with pytest.raises(DomainError):
        cdf97_forward(np.ones(n), levels)
    with pytest.raises(DomainError):
        cdf97_inverse(np.ones(n), levels)


def test_cdf97_phase_labels_cover_catalog():
    x = np.random.default_rng(0).normal(size=64)
    c, t_fwd = cdf97_forward(x, 2, 2)
    _, t_inv = cdf97_inverse(c, 2, 2)
    merged = t_fwd.merge(t_inv)
    assert set(merged.labels) == set(builtin("cdf97").labels)
    for e in merged.entries:
        assert e.role == builtin("cdf97").role_of(e.label)


# -- naive bayes ----------------------------------------------------------

def test_nbc_single_class():
    model, _ = nbc_train([(("x", "y"), "only"), (("z", "y"), "only")])
    for sample in [("x", "y"), ("q", "r")]:
        assert nbc_classify(model, sample)[0] == "only"


def test_nbc_hand_computed():
    train = [((0,), "A")] * 3 + [((1,), "B")] * 3
    model, _ = nbc_train(train)
    # A: 1/2 * 4/5 = 0.4 ; B: 1/2 * 1/5 = 0.1
    assert nbc_classify(model, (0,))[0] == "A"
    assert np.exp(model.log_score("A", (0,))) == pytest.approx(0.4)
    assert np.exp(model.log_score("B", (0,))) == pytest.approx(0.1)


def test_nbc_memo_table():
    model, _ = nbc_train([((0,), "A")] * 3 + [((1,), "B")] * 3)
    first, t1 = nbc_classify(model, (1,))
    second, t2 = nbc_classify(model, (1,))
    assert first == second == "B"
    assert t1.labels == ["table-lookup", "score-classes", "table-write"]
    assert t2.labels == ["table-lookup"]


def test_nbc_memo_concurrent():
    rows = random_nbc_instance(np.random.default_rng(3), n=60)
    model, _ = nbc_train(rows)
    samples = [x for x, _ in rows] * 5
    expected = [nbc_posterior_argmax(rows, s) for s in samples]
    results = [None] * len(samples)

    def worker(offset):
        for i in range(offset, len(samples), 4):
            results[i] = nbc_classify(model, samples[i], 2)[0]

    threads = [threading.Thread(target=worker, args=(o,)) for o in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert results == expected


def test_nbc_phase_labels_cover_catalog():
    model, t_train = nbc_train([(("a", "b"), "x"), (("b", "b"), "y")], 2)
    _, t_cls = nbc_classify(model, ("a", "a"), 2)
    assert set(t_train.merge(t_cls).labels) == set(builtin("nbc").labels)


def test_nbc_errors():
    with pytest.raises(DomainError):
        nbc_train([])
    with pytest.raises(DomainError):
        nbc_train([(("a",), "x"), (("a", "b"), "y")])
    model, _ = nbc_train([(("a",), "x")])
    with pytest.raises(DomainError):
        nbc_classify(model, ("a", "b"))


def random_nbc_instance(rng, n=None):
    n = n or int(rng.integers(1, 30))
    dim = int(rng.integers(1, 4))
    n_values = int(rng.integers(2, 4))
    n_classes = int(rng.integers(1, 4))
    return [
        (tuple(f"v{v}" for v in rng.integers(n_values, size=dim).tolist()), f"c{int(rng.integers(n_classes))}")
        for _ in range(n)
    ]


def test_nbc_matches_direct_posterior():
    rng = np.random.default_rng(99)
    for _ in range(100):
        rows = random_nbc_instance(rng)
        dim = len(rows[0][0])
        model, _ = nbc_train(rows, int(rng.integers(1, 5)))
        # training samples plus one with an unseen value
        samples = [x for x, _ in rows[:5]] + [tuple(["unseen"] * dim)]
        for s in samples:
            assert nbc_classify(model, s)[0] == nbc_posterior_argmax(rows, s)


# -- determinism across worker counts -------------------------------------

def test_determinism_across_workers():
    rng = np.random.default_rng(2024)
    db = [set(rng.choice(list("abcdefgh"), size=int(rng.integers(1, 6)), replace=False)) for _ in range(60)]
    pts = [(tuple(p), f"c{int(c)}") for p, c in zip(rng.normal(size=(300, 4)).tolist(), rng.integers(3, size=300))]
    q = tuple(rng.normal(size=4).tolist())
    sig = rng.normal(size=512)
    cx = rng.normal(size=512) + 1j * rng.normal(size=512)
    cat = random_nbc_instance(rng, n=80)

    ref = None
    for w in WORKERS:
        model, _ = nbc_train(cat, w)
        c, _ = cdf97_forward(sig, 3, w)
        out = (
            apriori(db, 5, w)[0],
            knn_classify(pts, q, 7, w)[0],
            fft(cx, w)[0],
            c,
            cdf97_inverse(c, 3, w)[0],
            [nbc_classify(model, x, w)[0] for x, _ in cat],
        )
        if ref is None:
            ref = out
            continue
        assert out[0] == ref[0]
        assert out[1] == ref[1]
        assert np.array_equal(out[2], ref[2])
        assert np.array_equal(out[3], ref[3])
        assert np.array_equal(out[4], ref[4])
        assert out[5] == ref[5]


# -- readers --------------------------------------------------------------

def test_read_transactions(tmp_path):
    p = tmp_path / "t.txt"
    p.write_text("a b c\nb  c\n\n")
    assert readers.read_transactions(p) == [["a", "b", "c"], ["b", "c"]]
    p.write_text("a b\n\nc\n")
    with pytest.raises(ParseError, match="line 2"):
        readers.read_transactions(p)


def test_parse_labeled_points():
    rows = readers.parse_labeled_points("1.0,2.0,A\n3,4,B\n")
    assert rows == [((1.0, 2.0), "A"), ((3.0, 4.0), "B")]
    with pytest.raises(ParseError, match="line 2"):
        readers.parse_labeled_points("1,2,A\n1,x,B\n")
    with pytest.raises(ParseError, match="line 2"):
        readers.parse_labeled_points("1,2,A\n1,B\n")
    with pytest.raises(ParseError, match="line 1"):
        readers.parse_labeled_points("A\n")
    with pytest.raises(ParseError, match="line 1"):
        readers.parse_labeled_points("nan,A\n")


def test_parse_categorical():
    rows = readers.parse_categorical("red,small,yes\nblue,big,no\n")
    assert rows == [(("red", "small"), "yes"), (("blue", "big"), "no")]
    with pytest.raises(ParseError, match="line 2"):
        readers.parse_categorical("red,small,yes\nblue,,no\n")


def test_parse_signal():
    assert readers.parse_signal("1\n2.5\n").tolist() == [1.0, 2.5]
    assert readers.parse_signal("1,2\n3\n", complex_values=True).tolist() == [1 + 2j, 3 + 0j]
    with pytest.raises(ParseError, match="line 1"):
        readers.parse_signal("1,2\n")
    with pytest.raises(ParseError, match="line 3"):
        readers.parse_signal("1\n2\nthree\n")
