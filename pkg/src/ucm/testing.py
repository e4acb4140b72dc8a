"""Likelihood-ratio tests on contingency tables."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from .core import ContingencyTable, Kind, UcmEstimate
from .errors import DegenerateTable
from .estimation import EstimationConfig, estimate_cuc, estimate_uc

_MAX_TERMS = 500
_EPS = 1e-16
_TINY = 1e-300


@dataclass(frozen=True)
class TestResult:
    g2: float
    df: int
    p_value: float
    direction_label: str
    kind: Kind | None = None
    estimate: UcmEstimate | None = None

    __test__ = False  # not a pytest class

    def to_dict(self):
        out = {
            "direction": self.direction_label,
            "g2": self.g2,
            "df": self.df,
            "p_value": self.p_value,
        }
        if self.kind is not None:
            out["kind"] = self.kind.value
        if self.estimate is not None:
            out["estimate"] = self.estimate.to_dict()
        return out


def _lower_series(a, x):
    """Regularised lower incomplete gamma P(a, x) by its power series."""
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_MAX_TERMS):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _upper_fraction(a, x):
    """Regularised upper incomplete gamma Q(a, x) by modified Lentz."""
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_TERMS + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        step = d * c
        h *= step
        if abs(step - 1.0) < _EPS:
            break
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h


def chi2_sf(x: float, df: int) -> float:
    """``P[chi2_df >= x]`` as the regularised upper incomplete gamma Q(df/2, x/2)."""
    if x < 0:
        raise ValueError("x must be nonnegative")
    if df < 1:
        raise ValueError("df must be a positive integer")
    if x == 0:
        return 1.0
    if math.isinf(x):
        return 0.0
    a, h = df / 2.0, x / 2.0
    if h == 0:
        return 1.0
    if h < a + 1.0:
        q = 1.0 - _lower_series(a, h)
    else:
        q = _upper_fraction(a, h)
    return min(1.0, max(0.0, q))


def _check_shape(counts):
    if counts.shape[0] < 2 or counts.shape[1] < 2:
        raise DegenerateTable(f"need at least 2x2 categories, got {counts.shape}")


def _deviance(observed, expected):
    """``2 sum N log(N / E)`` with empty cells contributing nothing."""
    pos = observed > 0
    with np.errstate(divide="ignore"):
        g2 = 2.0 * float(xlogy(observed[pos], observed[pos] / expected[pos]).sum())
    # nested fits can only lose a rounding error's worth
    return max(g2, 0.0)


def lrt_ucm(
    table,
    kind=Kind.GENERAL,
    config: EstimationConfig | None = None,
    label: str = "X->Y",
) -> TestResult:
    """Test whether the channel from rows to columns is a (cyclic) uniform channel.

    The table is smoothed with ``config.smoothing`` before fitting; the same
    smoothed counts enter the statistic.
    """
    config = config or EstimationConfig()
    kind = Kind(kind)
    raw = table if isinstance(table, ContingencyTable) else ContingencyTable(table)
    _check_shape(raw.counts)
    n = raw.smoothed(config.smoothing).counts
    est = estimate_uc(n) if kind is Kind.GENERAL else estimate_cuc(n, config)
    expected = np.asarray(est.channel()) * n.sum(axis=1, keepdims=True)
    g2 = _deviance(n, expected)
    df = (n.shape[0] - 1) * (n.shape[1] - 1)
    return TestResult(g2, df, chi2_sf(g2, df), label, kind, est)


def independence_test(table) -> TestResult:
    """G-test of independence on the table as given (no smoothing)."""
    n = np.asarray(table, dtype=float)
    _check_shape(n)
    expected = np.outer(n.sum(axis=1), n.sum(axis=0)) / n.sum()
    g2 = _deviance(n, expected)
    df = (n.shape[0] - 1) * (n.shape[1] - 1)
    return TestResult(g2, df, chi2_sf(g2, df), "independence")
