"""Mann-Whitney U against brute-force and scipy oracles; the grid."""

import itertools
import random

import pytest

from moltask.evalkit import mann_whitney_u, significance_grid

scipy_stats = pytest.importorskip("scipy.stats")


def _pairwise_u(x, y) -> float:
    """Independent U: direct pairwise wins with half-credit ties."""
    u = 0.0
    for xi in x:
        for yj in y:
            if xi > yj:
                u += 1.0
            elif xi == yj:
                u += 0.5
    return u


def _brute_force_p(x, y, alternative: str) -> float:
    """Permutation oracle over pooled values (independent of rank math)."""
    pooled = list(x) + list(y)
    n = len(x)
    u_obs = _pairwise_u(x, y)
    ge = le = total = 0
    for idx in itertools.combinations(range(len(pooled)), n):
        chosen = set(idx)
        xs = [pooled[i] for i in idx]
        ys = [pooled[i] for i in range(len(pooled)) if i not in chosen]
        u = _pairwise_u(xs, ys)
        total += 1
        if u >= u_obs - 1e-12:
            ge += 1
        if u <= u_obs + 1e-12:
            le += 1
    if alternative == "greater":
        return ge / total
    if alternative == "less":
        return le / total
    return min(1.0, 2 * min(ge, le) / total)


def test_constructed_example_exact():
    u, p = mann_whitney_u([3, 4, 5], [0, 1, 2], "greater")
    assert u == 9
    assert p == pytest.approx(0.05)


def test_u_statistic_matches_pairwise_definition():
    rng = random.Random(0)
    for _ in range(50):
        x = [rng.randint(0, 30) for _ in range(rng.randint(1, 8))]
        y = [rng.randint(0, 30) for _ in range(rng.randint(1, 8))]
        u, _ = mann_whitney_u(x, y, "greater")
        assert u == pytest.approx(_pairwise_u(x, y))


def test_exact_against_brute_force_tie_free():
    rng = random.Random(1)
    trials = 0
    while trials < 60:
        n = rng.randint(1, 7)
        m = rng.randint(1, 7)
        vals = rng.sample(range(1000), n + m)
        x, y = vals[:n], vals[n:]
        for alternative in ("greater", "less", "two-sided"):
            _, p = mann_whitney_u(x, y, alternative)
            assert p == pytest.approx(
                _brute_force_p(x, y, alternative)
            ), (x, y, alternative)
        trials += 1


def test_exact_against_scipy():
    rng = random.Random(2)
    for _ in range(30):
        n = rng.randint(2, 7)
        m = rng.randint(2, 7)
        vals = rng.sample(range(1000), n + m)
        x, y = vals[:n], vals[n:]
        for alternative in ("greater", "less", "two-sided"):
            u, p = mann_whitney_u(x, y, alternative)
            ref = scipy_stats.mannwhitneyu(
                x, y, alternative=alternative.replace("-", "-"),
                method="exact",
            )
            assert u == pytest.approx(float(ref.statistic))
            assert p == pytest.approx(float(ref.pvalue))


def test_normal_path_against_scipy():
    rng = random.Random(3)
    for _ in range(30):
        # ten folds per side with ties: the normal-approximation path
        x = [round(rng.uniform(0, 1), 2) for _ in range(10)]
        y = [round(rng.uniform(0, 1), 2) for _ in range(10)]
        for alternative in ("greater", "less", "two-sided"):
            u, p = mann_whitney_u(x, y, alternative)
            ref = scipy_stats.mannwhitneyu(
                x, y, alternative=alternative, method="asymptotic",
            )
            assert u == pytest.approx(float(ref.statistic))
            assert p == pytest.approx(float(ref.pvalue), abs=1e-10)


def test_identical_constant_lists():
    _, p = mann_whitney_u([0.5] * 10, [0.5] * 10, "greater")
    assert p >= 0.5


def test_complement_property():
    rng = random.Random(4)
    for _ in range(40):
        n = rng.randint(2, 10)
        m = rng.randint(2, 10)
        x = [rng.randint(0, 8) for _ in range(n)]
        y = [rng.randint(0, 8) for _ in range(m)]
        _, pg = mann_whitney_u(x, y, "greater")
        _, pg_rev = mann_whitney_u(y, x, "greater")
        assert pg + pg_rev >= 1.0 - 1e-12


def test_empty_sample_errors():
    with pytest.raises(ValueError):
        mann_whitney_u([], [1], "greater")


def test_bad_alternative():
    with pytest.raises(ValueError):
        mann_whitney_u([1], [2], "sideways")


# -- significance grid -------------------------------------------------------

def test_grid_separated_models():
    rng = random.Random(5)
    scores = {
        "strong": [0.9 + rng.uniform(0, 0.05) for _ in range(10)],
        "weak": [0.1 + rng.uniform(0, 0.05) for _ in range(10)],
    }
    grid = significance_grid(scores)
    i, j = grid.models.index("strong"), grid.models.index("weak")
    assert grid.significant[i][j] is True
    assert grid.significant[j][i] is False
    assert grid.p_values[i][i] is None
    assert grid.significant[j][j] is None
    assert 0 <= grid.p_values[i][j] < 0.05
    assert grid.p_values[j][i] > 0.95


def test_grid_not_symmetric():
    scores = {"a": [1, 2, 3, 4, 5], "b": [2, 3, 4, 5, 6]}
    grid = significance_grid(scores)
    assert grid.p_values[0][1] != grid.p_values[1][0]


def test_grid_rejects_uneven_folds():
    with pytest.raises(ValueError):
        significance_grid({"a": [1, 2], "b": [1, 2, 3]})


def test_grid_rejects_missing_scores():
    with pytest.raises(ValueError, match="ghost"):
        significance_grid({"a": [1, 2], "ghost": []})


def test_grid_rows_render():
    grid = significance_grid({"a": [1, 2, 3], "b": [4, 5, 6]})
    rows = grid.to_rows()
    assert rows[0] == ["model", "a", "b"]
    assert rows[1][1] == ""  # diagonal
    data = grid.to_plot_data()
    assert data["alpha"] == 0.05
    assert data["p_values"][0][0] is None


def test_metric_report_summary():
    from moltask.evalkit import MetricReport

    report = MetricReport.from_scores("f1", [0.2, 0.4, 0.6, 0.8, 1.0])
    assert report.median == pytest.approx(0.6)
    assert report.iqr == pytest.approx(0.4)
    assert report.to_json()["metric"] == "f1"
    single = MetricReport.from_scores("f1", [0.5])
    assert single.median == 0.5
    assert single.iqr == 0.0
    with pytest.raises(ValueError):
        MetricReport.from_scores("f1", [])
