"""Mann-Whitney U tests and the pairwise one-sided significance grid.

The U statistic comes from rank sums with midranks for ties.  P-values
are exact (full enumeration of rank assignments) for small tie-free
samples and otherwise use the normal approximation with tie and
continuity corrections, mirroring the auto policy of common statistics
packages.  ``greater`` tests whether x is stochastically greater than y.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

__all__ = ["mann_whitney_u", "significance_grid", "SignificanceGrid",
           "MetricReport", "EXACT_LIMIT"]

EXACT_LIMIT = 14  # exact enumeration when n + m <= this and no ties

_ALTERNATIVES = ("greater", "less", "two-sided")


def _quantile(sorted_vals: list[float], q: float) -> float:
    """Linear-interpolation quantile of pre-sorted values."""
    if len(sorted_vals) == 1:
        return sorted_vals[0]
    pos = q * (len(sorted_vals) - 1)
    lo = int(pos)
    hi = min(lo + 1, len(sorted_vals) - 1)
    frac = pos - lo
    return sorted_vals[lo] * (1 - frac) + sorted_vals[hi] * frac


@dataclass(frozen=True)
class MetricReport:
    """Per-fold scores of one metric with a median/IQR summary."""

    metric: str
    scores: tuple[float, ...]
    median: float
    iqr: float

    @classmethod
    def from_scores(cls, metric: str, scores) -> "MetricReport":
        vals = [float(s) for s in scores]
        if not vals:
            raise ValueError(f"no scores for metric {metric!r}")
        ordered = sorted(vals)
        return cls(
            metric=metric,
            scores=tuple(vals),
            median=_quantile(ordered, 0.5),
            iqr=_quantile(ordered, 0.75) - _quantile(ordered, 0.25),
        )

    def to_json(self) -> dict:
        return {
            "metric": self.metric,
            "scores": list(self.scores),
            "median": self.median,
            "iqr": self.iqr,
        }


def _midranks(values) -> list[float]:
    order = sorted(range(len(values)), key=values.__getitem__)
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        mid = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = mid
        i = j + 1
    return ranks


def _norm_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def _exact_p(u1: float, n1: int, n2: int, alternative: str) -> float:
    """Exact tail probability by enumerating all rank assignments."""
    total = 0
    ge = 0
    le = 0
    offset = n1 * (n1 + 1) / 2.0
    for ranks in combinations(range(1, n1 + n2 + 1), n1):
        u = sum(ranks) - offset
        total += 1
        if u >= u1:
            ge += 1
        if u <= u1:
            le += 1
    if alternative == "greater":
        return ge / total
    if alternative == "less":
        return le / total
    return min(1.0, 2.0 * min(ge, le) / total)


def mann_whitney_u(x, y, alternative: str = "greater") -> tuple[float, float]:
    """Mann-Whitney U test of x against y.

    Returns ``(U, p)`` where U is the statistic of the first sample.
    """
    if alternative not in _ALTERNATIVES:
        raise ValueError(f"alternative must be one of {_ALTERNATIVES}")
    x = [float(v) for v in x]
    y = [float(v) for v in y]
    if not x or not y:
        raise ValueError("both samples must be non-empty")
    n1, n2 = len(x), len(y)
    combined = x + y
    ranks = _midranks(combined)
    r1 = sum(ranks[:n1])
    u1 = r1 - n1 * (n1 + 1) / 2.0

    has_ties = len(set(combined)) != len(combined)
    if not has_ties and n1 + n2 <= EXACT_LIMIT:
        return u1, _exact_p(u1, n1, n2, alternative)

    n = n1 + n2
    mu = n1 * n2 / 2.0
    tie_term = 0.0
    seen: dict[float, int] = {}
    for v in combined:
        seen[v] = seen.get(v, 0) + 1
    for t in seen.values():
        tie_term += t ** 3 - t
    var = n1 * n2 / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
    if var <= 0:
        return u1, 1.0  # all values tied: no evidence either way
    sd = math.sqrt(var)
    if alternative == "greater":
        z = (u1 - mu - 0.5) / sd
        return u1, _norm_sf(z)
    if alternative == "less":
        z = (u1 - mu + 0.5) / sd
        return u1, 1.0 - _norm_sf(z)
    z = (abs(u1 - mu) - 0.5) / sd
    return u1, min(1.0, 2.0 * _norm_sf(z))


@dataclass
class SignificanceGrid:
    """One-sided p-values: ``p[y][x]`` tests row model y against column
    model x; the diagonal is undefined (None)."""

    models: tuple[str, ...]
    p_values: list  # list of rows; None on the diagonal
    significant: list  # booleans, None on the diagonal
    alpha: float = 0.05

    def to_rows(self) -> list[list]:
        """CSV-style rows with a header."""
        rows = [["model"] + list(self.models)]
        for name, prow in zip(self.models, self.p_values):
            rows.append(
                [name] + ["" if p is None else f"{p:.6g}" for p in prow]
            )
        return rows

    def to_plot_data(self) -> dict:
        return {
            "models": list(self.models),
            "p_values": [
                [None if p is None else float(p) for p in row]
                for row in self.p_values
            ],
            "significant": [list(row) for row in self.significant],
            "alpha": self.alpha,
        }


def significance_grid(scores: dict, alpha: float = 0.05) -> SignificanceGrid:
    """Pairwise one-sided Mann-Whitney grid over per-fold scores.

    ``scores`` maps model name to its list of fold scores; every model
    needs the same fold count.
    """
    models = tuple(scores)
    if not models:
        raise ValueError("no model scores given")
    fold_counts = {}
    for name in models:
        vals = scores[name]
        if vals is None or len(list(vals)) == 0:
            raise ValueError(f"missing scores for model {name!r}")
        fold_counts[name] = len(list(vals))
    counts = set(fold_counts.values())
    if len(counts) != 1:
        raise ValueError(f"fold counts differ across models: {fold_counts}")
    p_values = []
    significant = []
    for yname in models:
        prow: list = []
        srow: list = []
        for xname in models:
            if yname == xname:
                prow.append(None)
                srow.append(None)
                continue
            _, p = mann_whitney_u(
                list(scores[yname]), list(scores[xname]), "greater"
            )
            prow.append(p)
            srow.append(bool(p < alpha))
        p_values.append(prow)
        significant.append(srow)
    return SignificanceGrid(models, p_values, significant, alpha)
