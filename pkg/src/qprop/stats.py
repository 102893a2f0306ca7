"""Exact test kernels, Holm step-down correction and Spearman correlation."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Hashable, Sequence

import numpy as np
from scipy import stats as _st
from scipy.special import gammaln

# observed-table probability slack for the "at most as probable" rule
REL_SLACK = 1 + 1e-7


class UndefinedStatistic(ValueError):
    """Raised when a statistic has no value for the given data (e.g. constant input)."""


def _log_hypergeom(k: np.ndarray, row0: int, col0: int, n: int) -> np.ndarray:
    # P(a = k) with row sums (row0, n - row0) and first column sum col0
    return (
        gammaln(col0 + 1) - gammaln(k + 1) - gammaln(col0 - k + 1)
        + gammaln(n - col0 + 1) - gammaln(row0 - k + 1) - gammaln(n - col0 - row0 + k + 1)
        - (gammaln(n + 1) - gammaln(row0 + 1) - gammaln(n - row0 + 1))
    )


def fisher_exact_two_sided(table) -> float:
    """Two-sided Fisher exact p-value for ``[[a, b], [c, d]]``.

    Sums the hypergeometric probabilities (margins fixed) of every table no
    more probable than the observed one. Work is done in log space.
    """
    (a, b), (c, d) = table
    a, b, c, d = (int(v) for v in (a, b, c, d))
    if min(a, b, c, d) < 0:
        raise ValueError(f"contingency counts must be non-negative, got {table}")
    n = a + b + c + d
    if n == 0:
        raise ValueError("contingency table is all zeros")
    row0, col0 = a + b, a + c
    lo, hi = max(0, row0 + col0 - n), min(row0, col0)
    if lo == hi:
        return 1.0
    support = np.arange(lo, hi + 1, dtype=float)
    logp = _log_hypergeom(support, row0, col0, n)
    observed = logp[a - lo]
    keep = logp <= observed + math.log(REL_SLACK)
    top = logp.max()
    total = np.exp(logp - top).sum()
    p = np.exp(logp[keep] - top).sum() / total
    return float(min(1.0, p))


def binomial_two_sided(successes: int, trials: int, p0: float) -> float:
    """Exact two-sided binomial test: mass of outcomes no more probable than observed."""
    if not 0.0 <= p0 <= 1.0:
        raise ValueError(f"target probability {p0} outside [0, 1]")
    if trials < 1 or not 0 <= successes <= trials:
        raise ValueError(f"invalid binomial observation {successes}/{trials}")
    if p0 == 0.0:
        return 1.0 if successes == 0 else 0.0
    if p0 == 1.0:
        return 1.0 if successes == trials else 0.0
    k = np.arange(trials + 1, dtype=float)
    logp = (
        gammaln(trials + 1) - gammaln(k + 1) - gammaln(trials - k + 1)
        + k * math.log(p0) + (trials - k) * math.log1p(-p0)
    )
    observed = logp[successes]
    keep = logp <= observed + math.log(REL_SLACK)
    top = logp.max()
    p = np.exp(logp[keep] - top).sum() / np.exp(logp - top).sum()
    return float(min(1.0, p))


@dataclass
class HolmResult:
    rejected: set
    thresholds: dict
    alpha: float
    order: list = field(default_factory=list)

    def is_rejected(self, test_id) -> bool:
        return test_id in self.rejected


def holm_bonferroni(pvalues: Sequence[tuple[Hashable, float]] | dict, alpha: float) -> HolmResult:
    """Holm step-down: the k-th smallest p (1-based) faces ``alpha / (m - k + 1)``.

    Tests are rejected in order until the first one that exceeds its
    threshold. Ties in p are broken by input order.
    """
    items = list(pvalues.items()) if isinstance(pvalues, dict) else list(pvalues)
    for tid, p in items:
        if not 0.0 <= p <= 1.0 or math.isnan(p):
            raise ValueError(f"p-value for {tid!r} outside [0, 1]: {p}")
    m = len(items)
    order = sorted(range(m), key=lambda i: items[i][1])
    rejected: set = set()
    thresholds: dict = {}
    stopped = False
    for rank, i in enumerate(order):
        tid, p = items[i]
        thr = alpha / (m - rank)
        thresholds[tid] = thr
        if not stopped and p <= thr:
            rejected.add(tid)
        else:
            stopped = True
    return HolmResult(rejected, thresholds, alpha, [items[i][0] for i in order])


def rank_average(values: Sequence[float]) -> np.ndarray:
    """1-based ranks with ties given the mean of the positions they span."""
    x = np.asarray(values, dtype=float)
    order = np.argsort(x, kind="mergesort")
    ranks = np.empty(len(x), dtype=float)
    sx = x[order]
    i = 0
    while i < len(x):
        j = i
        while j + 1 < len(x) and sx[j + 1] == sx[i]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2 + 1
        i = j + 1
    return ranks


def spearman_rank(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float]:
    """Spearman r (Pearson on mid-ranks) and its t-approximation p-value."""
    if len(xs) != len(ys):
        raise ValueError("xs and ys differ in length")
    n = len(xs)
    if n < 3:
        raise ValueError("spearman_rank needs at least 3 pairs")
    rx, ry = rank_average(xs), rank_average(ys)
    dx, dy = rx - rx.mean(), ry - ry.mean()
    sx, sy = math.sqrt(float(dx @ dx)), math.sqrt(float(dy @ dy))
    if sx == 0 or sy == 0:
        raise UndefinedStatistic("spearman correlation is undefined for a constant input")
    r = float(dx @ dy) / (sx * sy)
    r = max(-1.0, min(1.0, r))
    if abs(r) == 1.0:
        return r, 0.0
    dof = n - 2
    t = r * math.sqrt(dof / ((1 - r) * (1 + r)))
    p = float(2 * _st.t.sf(abs(t), dof))
    return r, p
