from fractions import Fraction

import pytest

from coverage_depth.errors import InvalidParams, SearchTooLarge
from coverage_depth.expectation import GeneratorMatrix, all_expected_samples, t_ave
from coverage_depth.gf import field_new
from coverage_depth.search import composition_count, monotonicity_check, optimal_search, _compositions

# optimal values for q = 2, k = 3, keyed by (n, objective)
TABLE = {
    (4, "max"): Fraction(3), (4, "ave"): Fraction(3),
    (5, "max"): Fraction(37, 12), (5, "ave"): Fraction(53, 18),
    (6, "max"): Fraction(3), (6, "ave"): Fraction(89, 30),
    (7, "max"): Fraction(43, 15), (7, "ave"): Fraction(43, 15),
    (8, "max"): Fraction(313, 105), (8, "ave"): Fraction(299, 105),
}

# published witnesses as column counts, classes in the order
# e1, e2, e3, e1+e2, e2+e3, e1+e3, e1+e2+e3
WITNESSES = {
    (5, "max"): (1, 1, 1, 0, 0, 1, 1),
    (7, "ave"): (1, 2, 2, 1, 0, 1, 0),
    (8, "ave"): (2, 2, 2, 0, 1, 1, 0),
}
CLASSES = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (0, 1, 1), (1, 0, 1), (1, 1, 1)]


@pytest.mark.parametrize("n, objective", sorted(TABLE))
def test_small_table(n, objective):
    res = optimal_search(2, n, 3, objective)
    assert res.value == TABLE[(n, objective)]
    assert res.reevaluate() == res.value
    assert sum(res.counts) == n


@pytest.mark.parametrize("key", sorted(WITNESSES))
def test_published_witnesses_attain_optimum(key):
    n, objective = key
    cols = [c for c, m in zip(CLASSES, WITNESSES[key]) for _ in range(m)]
    G = GeneratorMatrix(field_new(2), tuple(cols))
    value = max(all_expected_samples(G)) if objective == "max" else t_ave(G)
    assert value == TABLE[key]


def test_jobs_do_not_change_result():
    a = optimal_search(2, 7, 3, "ave", jobs=1)
    b = optimal_search(2, 7, 3, "ave", jobs=4)
    assert (a.value, a.counts, a.candidates_examined) == (b.value, b.counts, b.candidates_examined)


def test_env_jobs(monkeypatch):
    monkeypatch.setenv("COVERAGE_DEPTH_JOBS", "2")
    assert optimal_search(2, 5, 3).value == Fraction(37, 12)


@pytest.mark.parametrize("q, k", [(2, 2), (3, 2), (3, 3), (4, 2)])
def test_average_at_k_plus_one_is_k(q, k):
    assert optimal_search(q, k + 1, k, "ave").value == k


@pytest.mark.parametrize("q, k", [(2, 2), (3, 2), (2, 3)])
def test_n_equals_k_is_coupon_free(q, k):
    # with n = k columns the matrix is invertible and every strand needs k draws
    assert optimal_search(q, k, k, "max").value == k


def test_monotone_under_divisibility():
    for objective in ("max", "ave"):
        rows = monotonicity_check(2, 3, 8, objective)
        by_n = {r.n: r for r in rows}
        assert by_n[8].checks == ((4, True),)
        assert by_n[6].checks == ((3, True),)
        for r in rows:
            assert all(ok for _, ok in r.checks)
            if r.n >= 4:
                assert r.value == TABLE[(r.n, objective)]


def test_compositions():
    comps = list(_compositions(3, 3))
    assert len(comps) == composition_count(3, 3) == 10
    assert len(set(comps)) == len(comps)
    assert all(sum(c) == 3 for c in comps)


def test_guards():
    with pytest.raises(SearchTooLarge):
        optimal_search(5, 40, 4)
    with pytest.raises(InvalidParams):
        optimal_search(2, 2, 3)
    with pytest.raises(InvalidParams):
        optimal_search(2, 4, 3, "median")
