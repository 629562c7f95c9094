"""Numerical routines backing the analytics: quantiles, Kruskal-Wallis, chi-square tail.

Only what the lifecycle analyses need, implemented directly so results are
reproducible without relying on a third-party statistics stack. Tests
cross-check each routine against an independent oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class StatsError(ValueError):
    pass


class DegenerateDataError(StatsError):
    """All observations identical; rank statistics are undefined."""


@dataclass(frozen=True, slots=True)
class SampleGroup:
    label: str
    values: tuple[float, ...]

    def __post_init__(self):
        if not self.values:
            raise StatsError(f"sample group {self.label!r} is empty")


def quantile(values: list[float] | tuple[float, ...], q: float) -> float:
    """Quantile by linear interpolation between order statistics.

    With the n values sorted ascending and h = (n-1)*q, returns
    x[floor(h)] + (h - floor(h)) * (x[floor(h)+1] - x[floor(h)]).
    """
    if not values:
        raise StatsError("quantile of empty sample")
    if not 0.0 <= q <= 1.0:
        raise StatsError(f"quantile level {q} outside [0, 1]")
    xs = sorted(values)
    h = (len(xs) - 1) * q
    lo = math.floor(h)
    if lo == len(xs) - 1:
        return float(xs[-1])
    frac = h - lo
    return xs[lo] + frac * (xs[lo + 1] - xs[lo])


def five_number_summary(values) -> dict[str, float]:
    return {
        "min": quantile(values, 0.0),
        "q1": quantile(values, 0.25),
        "median": quantile(values, 0.5),
        "q3": quantile(values, 0.75),
        "max": quantile(values, 1.0),
    }


def midranks(values: list[float]) -> list[float]:
    """Ranks 1..n with tied observations sharing their average rank."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2 + 1  # ranks are 1-based
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def kruskal_wallis(groups: list[SampleGroup]) -> tuple[float, float]:
    """Kruskal-Wallis H with tie correction and chi-square p-value.

    H = [12 / (N(N+1)) * sum(R_i^2 / n_i) - 3(N+1)] / (1 - sum(t^3 - t) / (N^3 - N))
    with R_i the rank sum of group i using midranks, then
    p = chi_square_upper_tail(H, k - 1).
    """
    if len(groups) < 2:
        raise StatsError("Kruskal-Wallis needs at least two groups")
    pooled: list[float] = []
    sizes: list[int] = []
    for g in groups:
        pooled.extend(g.values)
        sizes.append(len(g.values))
    n = len(pooled)
    if n < 3:
        raise StatsError("Kruskal-Wallis needs at least three observations")

    ranks = midranks(pooled)
    h = 0.0
    offset = 0
    for size in sizes:
        rank_sum = sum(ranks[offset : offset + size])
        h += rank_sum * rank_sum / size
        offset += size
    h = 12.0 / (n * (n + 1)) * h - 3.0 * (n + 1)

    tie_sum = 0
    i = 0
    xs = sorted(pooled)
    while i < n:
        j = i
        while j + 1 < n and xs[j + 1] == xs[i]:
            j += 1
        t = j - i + 1
        tie_sum += t * t * t - t
        i = j + 1
    correction = 1.0 - tie_sum / (n * n * n - n)
    if correction == 0.0:
        raise DegenerateDataError("all observations identical; H is undefined")
    h /= correction

    # H can land an ulp below zero through cancellation.
    h = max(h, 0.0)
    p = chi_square_upper_tail(h, len(groups) - 1)
    return h, p


def chi_square_upper_tail(x: float, df: int) -> float:
    """P(X >= x) for a chi-square variable with ``df`` degrees of freedom.

    Regularized upper incomplete gamma Q(df/2, x/2); series expansion for
    small x, Lentz continued fraction otherwise. Absolute error <= 1e-8.
    """
    if df < 1:
        raise StatsError("degrees of freedom must be positive")
    if x < 0:
        raise StatsError("chi-square statistic must be nonnegative")
    return _regularized_gamma_q(df / 2.0, x / 2.0)


_EPS = 1e-15
_MAX_ITER = 10_000


def _regularized_gamma_q(a: float, x: float) -> float:
    if x == 0.0:
        return 1.0
    if x < a + 1.0:
        return min(1.0, max(0.0, 1.0 - _gamma_p_series(a, x)))
    return min(1.0, max(0.0, _gamma_q_continued_fraction(a, x)))


def _gamma_p_series(a: float, x: float) -> float:
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_q_continued_fraction(a: float, x: float) -> float:
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h
