import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import binomial_p_exact, rank_sum_p_bruteforce, signed_rank_p_bruteforce
from refcast.dataset import Dataset, ProjectRecord, read_dataset
from refcast.errors import DomainError
from refcast.hypotests import (
    TestResult,
    binomial_test,
    compare_groups,
    error_explanation_test,
    midranks,
    rank_sum_test,
    signed_rank_test,
    significance_stars,
)
from refcast.synth import SynthSpec, generate


@pytest.mark.parametrize(
    "p, stars",
    [(0.0005, "***"), (0.001, "**"), (0.005, "**"), (0.01, "*"), (0.03, "*"), (0.05, ""), (0.5, ""), (1.0, "")],
)
def test_stars(p, stars):
    assert significance_stars(p) == stars
    assert TestResult(0.0, p, "normal_approx").stars == stars


def test_midranks():
    assert midranks([10, 20, 20, 5]) == [2.0, 3.5, 3.5, 1.0]


def test_rank_sum_worked_example():
    r = rank_sum_test([1, 2], [3, 4])
    assert r.statistic == 0
    assert r.method == "exact_enumeration"
    assert r.p_value == pytest.approx(1 / 3, abs=1e-15)


def test_rank_sum_identical_samples():
    a = [0.1, 0.5, 0.9, 1.3, 2.0, 0.2, 0.7, 1.1]
    r = rank_sum_test(a, list(a))
    assert r.method == "normal_approx"
    assert r.p_value >= 0.99


def test_rank_sum_empty():
    with pytest.raises(DomainError):
        rank_sum_test([], [1.0])


def test_rank_sum_all_tied():
    r = rank_sum_test([1, 1, 1], [1, 1])
    assert r.p_value == 1.0 and r.ties


def test_rank_sum_large_tie_free_uses_normal():
    rng = random.Random(0)
    vals = rng.sample(range(1000), 15)
    assert rank_sum_test(vals[:7], vals[7:]).method == "normal_approx"


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(-50, 50), min_size=2, max_size=7, unique=True), st.data())
def test_rank_sum_exact_matches_bruteforce(values, data):
    na = data.draw(st.integers(1, len(values) - 1))
    a, b = values[:na], values[na:]
    r = rank_sum_test(a, b)
    assert r.method == "exact_enumeration"
    assert r.p_value == pytest.approx(rank_sum_p_bruteforce(a, b), abs=1e-12)


@given(st.lists(st.floats(-5, 5), min_size=1, max_size=20), st.lists(st.floats(-5, 5), min_size=1, max_size=20))
def test_rank_sum_symmetric(a, b):
    assert rank_sum_test(a, b).p_value == rank_sum_test(b, a).p_value


def test_rank_sum_normal_close_to_exact():
    # holds once the smaller group has 5+ members; see decisions on very unbalanced splits
    rng = random.Random(11)
    for _ in range(300):
        n = rng.randint(10, 14)
        na = rng.randint(5, n - 5)
        vals = rng.sample(range(10_000), n)
        a, b = vals[:na], vals[na:]
        exact = rank_sum_test(a, b, method="exact").p_value
        approx = rank_sum_test(a, b, method="normal").p_value
        assert abs(exact - approx) <= 0.02


def test_exact_rejects_ties():
    with pytest.raises(DomainError):
        rank_sum_test([1, 2], [2, 3], method="exact")
    with pytest.raises(DomainError):
        signed_rank_test([1, -1, 2], method="exact")


def test_signed_rank_examples():
    r = signed_rank_test([1, 2, 3])
    assert (r.statistic, r.method) == (6, "exact_enumeration")
    assert r.p_value == pytest.approx(0.25, abs=1e-15)
    assert signed_rank_test([-2, -1, 1, 2]).p_value == 1.0


def test_signed_rank_drops_zeros():
    r = signed_rank_test([0, 0, 1, 2, 3])
    assert r.n_dropped == 2 and r.n == 3
    assert r.p_value == pytest.approx(0.25, abs=1e-15)
    r = signed_rank_test([5, 6, 7], mu0=4)
    assert r.p_value == pytest.approx(0.25, abs=1e-15)


def test_signed_rank_degenerate():
    r = signed_rank_test([0.3, 0.3], mu0=0.3)
    assert (r.statistic, r.p_value, r.n_dropped) == (0.0, 1.0, 2)


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(1, 200), min_size=1, max_size=10, unique=True), st.data())
def test_signed_rank_exact_matches_bruteforce(mags, data):
    signs = data.draw(st.lists(st.sampled_from([1, -1]), min_size=len(mags), max_size=len(mags)))
    x = [s * m for s, m in zip(signs, mags)]
    r = signed_rank_test(x)
    assert r.method == "exact_enumeration"
    assert r.p_value == pytest.approx(signed_rank_p_bruteforce(x), abs=1e-12)


def test_signed_rank_normal_with_ties():
    r = signed_rank_test([1, 1, 2, 2, 3, 3, 4, 4, 5, 5, 6, 6, 7])
    assert r.method == "normal_approx" and r.ties
    assert r.p_value < 0.01


def test_binomial_examples():
    assert binomial_test(10, 10).p_value == pytest.approx(0.001953125, abs=1e-15)
    assert binomial_test(5, 10).p_value == 1.0
    assert binomial_test(8, 10).p_value == pytest.approx(0.109375, abs=1e-15)


@pytest.mark.parametrize("p0", [0.5, 0.3, 0.25, 0.9])
def test_binomial_matches_exact_sum(p0):
    for n in range(1, 31):
        for k in range(n + 1):
            assert binomial_test(k, n, p0).p_value == pytest.approx(binomial_p_exact(k, n, p0), abs=1e-12)


def test_binomial_reflection():
    for n in range(1, 60):
        for k in range(n + 1):
            assert binomial_test(k, n).p_value == pytest.approx(binomial_test(n - k, n).p_value, abs=1e-12)


def test_binomial_large_n():
    r = binomial_test(211, 274)
    assert 0 < r.p_value < 1e-15
    assert binomial_test(5000, 10000).p_value == pytest.approx(1.0)


@pytest.mark.parametrize("k, n", [(-1, 5), (6, 5), (0, 0)])
def test_binomial_domain(k, n):
    with pytest.raises(DomainError):
        binomial_test(k, n)


def test_binomial_degenerate_p0():
    assert binomial_test(0, 5, 0.0).p_value == 1.0
    assert binomial_test(1, 5, 0.0).p_value == 0.0


def test_p_shrinks_with_separation():
    rng = random.Random(4)
    base = [rng.gauss(0, 1) for _ in range(40)]
    noise = [rng.gauss(0, 1) for _ in range(40)]
    ps = [rank_sum_test(base, [v + shift for v in noise]).p_value for shift in (0.0, 0.5, 1.0, 2.0)]
    assert ps == sorted(ps, reverse=True) and ps[-1] < 1e-6
    ps = [signed_rank_test([v + shift for v in noise]).p_value for shift in (0.0, 0.5, 1.0, 2.0)]
    assert ps == sorted(ps, reverse=True) and ps[-1] < 1e-6


def test_error_explanation_biased():
    ds = generate(SynthSpec(n=200, location=0.6, scale=0.5, tail="heavy_right", seed=5, schedule=True))
    rep = error_explanation_test(ds)
    assert [r.variable for r in rep.rows] == ["cost", "schedule"]
    for row in rep.rows:
        assert row.signed_rank.p_value < 0.001
        assert row.binomial.p_value < 0.001


def test_error_explanation_symmetric():
    ds = generate(SynthSpec(n=200, location=0.0, scale=0.5, tail="symmetric", seed=5, schedule=True))
    for row in error_explanation_test(ds).rows:
        assert row.signed_rank.p_value > 0.05
        assert row.binomial.p_value > 0.05


def test_error_explanation_omits_missing_variable():
    ds = generate(SynthSpec(n=30, location=0.3, scale=0.3, seed=1))
    rep = error_explanation_test(ds)
    assert [r.variable for r in rep.rows] == ["cost"]
    assert any("schedule" in note for note in rep.notes)


def _group_ds():
    rng = random.Random(8)
    recs = []
    for i in range(25):
        recs.append(ProjectRecord(f"h{i}", "", "hydro", "CA" if i < 8 else "BR", 1990, 100.0, 100 * (1.8 + rng.random()), 10.0, 12.0))
    for i in range(25):
        recs.append(ProjectRecord(f"r{i}", "", "road", "US", 1990, 100.0, 100 * (0.9 + 0.3 * rng.random()), 10.0, 11.0))
    return Dataset(tuple(recs))


def test_compare_groups_separated():
    table = compare_groups(_group_ds(), "sector", "hydro", variables=("cost",))
    base, road = table.rows
    assert base.is_baseline and base.cells["cost"].test is None and base.cells["cost"].stars == ""
    assert road.cells["cost"].stars == "***"
    assert road.n_records == 25


def test_compare_group_with_itself():
    ds = _group_ds()
    hydro = Dataset(tuple(r for r in ds if r.sector == "hydro"))
    clone = Dataset(hydro.records + tuple(ProjectRecord("x" + r.id, "", "road", r.country, 1990, r.est_cost, r.act_cost, r.est_duration, r.act_duration) for r in hydro))
    table = compare_groups(clone, "sector", "hydro")
    cell = table.rows[1].cells["cost"]
    assert cell.test.p_value == pytest.approx(1.0) and cell.stars == ""


def test_compare_country_split(fixture_path):
    table = compare_groups(read_dataset(fixture_path), "country", "CA", split=True)
    assert [r.group for r in table.rows] == ["CA", "rest"]
    assert table.rows[0].n_records + table.rows[1].n_records == 38


def test_compare_errors(fixture_path):
    ds = read_dataset(fixture_path)
    with pytest.raises(DomainError, match="unknown baseline"):
        compare_groups(ds, "sector", "solar")
    hydro = Dataset(tuple(r for r in ds if r.sector == "hydro"))
    with pytest.raises(DomainError, match="only group"):
        compare_groups(hydro, "sector", "hydro")
