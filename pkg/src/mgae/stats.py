"""Welch two-sample t-tests over per-q anomaly counts.

The two-sided p-value comes from the regularized incomplete beta function,
evaluated with a continued fraction (modified Lentz) to 1e-12 in at most
300 iterations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import StatsError

_BETACF_TOL = 1e-12
_BETACF_MAX_ITER = 300
_TINY = 1e-300


@dataclass(frozen=True)
class TTestResult:
    pair: tuple[str, str]
    t_statistic: float
    degrees_of_freedom: float
    p_value: float


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta function (Lentz's method)."""
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _BETACF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _BETACF_TOL:
            return h
    raise StatsError(f"incomplete beta did not converge within {_BETACF_MAX_ITER} iterations")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if a <= 0.0 or b <= 0.0:
        raise StatsError(f"beta parameters must be positive, got a={a}, b={b}")
    if not 0.0 <= x <= 1.0:
        raise StatsError(f"x must lie in [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    log_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def t_sf_two_sided(t: float, df: float) -> float:
    """P(|T| >= |t|) for a Student t variable with df degrees of freedom."""
    if df <= 0.0:
        raise StatsError(f"degrees of freedom must be positive, got {df}")
    if t == 0.0:
        return 1.0
    x = df / (df + t * t)
    return regularized_incomplete_beta(df / 2.0, 0.5, x)


def welch_ttest(
    a: list[float] | np.ndarray,
    b: list[float] | np.ndarray,
    pair: tuple[str, str] = ("a", "b"),
) -> TTestResult:
    """Unequal-variance t-test with Welch-Satterthwaite degrees of freedom.

    Sample variances use divisor n-1.  Raises StatsError for samples shorter
    than 2 or when both variances are zero.
    """
    xa = np.asarray(a, dtype=float)
    xb = np.asarray(b, dtype=float)
    na, nb = xa.size, xb.size
    if na < 2 or nb < 2:
        raise StatsError(f"each sample needs at least 2 values, got {na} and {nb}")
    va = float(xa.var(ddof=1))
    vb = float(xb.var(ddof=1))
    if va == 0.0 and vb == 0.0:
        raise StatsError(f"both samples have zero variance for pair {pair}")
    sa, sb = va / na, vb / nb
    se = math.sqrt(sa + sb)
    t = (float(xa.mean()) - float(xb.mean())) / se
    df = (sa + sb) ** 2 / (sa * sa / (na - 1) + sb * sb / (nb - 1))
    return TTestResult(
        pair=pair,
        t_statistic=t,
        degrees_of_freedom=df,
        p_value=t_sf_two_sided(t, df),
    )


def compare_periods(counts: dict[str, list[float]]) -> list[TTestResult]:
    """One Welch test per unordered period pair, in declaration order."""
    names = list(counts)
    if len(names) < 2:
        raise StatsError(f"need at least 2 periods to compare, got {len(names)}")
    for name, values in counts.items():
        if len(values) < 2:
            raise StatsError(f"period {name!r} has {len(values)} counts; need at least 2")
    return [
        welch_ttest(counts[x], counts[y], pair=(x, y))
        for x, y in combinations(names, 2)
    ]
