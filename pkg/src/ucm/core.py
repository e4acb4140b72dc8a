"""Domain types and channel algebra.

A channel matrix ``theta`` has one row per input category ``x`` holding the
conditional pmf of the output.  In a uniform channel every row is a
rearrangement of one shared pmf ``gamma``:

    theta[x, tau_x[j]] = gamma[j]

where ``tau_x`` is the inverse of the row permutation ``sigma_x``.  All
indices are 0-based.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.special import xlogy

from .errors import DimensionMismatch, ZeroEffectMarginal

SUM_TOL = 1e-12
TOTALS_TOL = 1e-9


class Kind(str, Enum):
    GENERAL = "general"
    CYCLIC = "cyclic"


def _frozen(a, dtype=float):
    arr = np.array(a, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class CategoricalDistribution:
    probs: np.ndarray

    def __post_init__(self):
        p = _frozen(self.probs)
        if p.ndim != 1 or p.size == 0:
            raise ValueError("probs must be a non-empty vector")
        if np.any(p < 0) or np.any(p > 1):
            raise ValueError("probabilities must lie in [0, 1]")
        if abs(p.sum() - 1.0) > SUM_TOL:
            raise ValueError(f"probabilities sum to {p.sum()!r}, not 1")
        object.__setattr__(self, "probs", p)

    def __array__(self, dtype=None, copy=None):
        return self.probs if dtype is None else self.probs.astype(dtype)

    def __len__(self):
        return self.probs.size

    def entropy(self) -> float:
        return float(-xlogy(self.probs, self.probs).sum())


@dataclass(frozen=True, eq=False)
class ChannelMatrix:
    rows: np.ndarray

    def __post_init__(self):
        m = _frozen(self.rows)
        if m.ndim != 2 or 0 in m.shape:
            raise ValueError("channel must be a non-empty 2-d array")
        if np.any(m < 0) or np.any(m > 1):
            raise ValueError("channel entries must lie in [0, 1]")
        if np.any(np.abs(m.sum(axis=1) - 1.0) > SUM_TOL):
            raise ValueError("channel rows must sum to 1")
        object.__setattr__(self, "rows", m)

    def __array__(self, dtype=None, copy=None):
        return self.rows if dtype is None else self.rows.astype(dtype)

    @property
    def shape(self):
        return self.rows.shape


@dataclass(frozen=True, eq=False)
class Permutation:
    """Bijection on ``range(n)``; ``mapping[i]`` is the image of ``i``."""

    mapping: tuple
    kind: Kind = Kind.GENERAL

    def __post_init__(self):
        mapping = tuple(int(i) for i in self.mapping)
        n = len(mapping)
        if sorted(mapping) != list(range(n)):
            raise ValueError(f"{mapping} is not a permutation of range({n})")
        kind = Kind(self.kind)
        if kind is Kind.CYCLIC and n and any(
            mapping[i] != (i + mapping[0]) % n for i in range(n)
        ):
            raise ValueError(f"{mapping} is not a cyclic shift")
        object.__setattr__(self, "mapping", mapping)
        object.__setattr__(self, "kind", kind)

    @classmethod
    def identity(cls, n, kind=Kind.GENERAL):
        return cls(tuple(range(n)), kind)

    @classmethod
    def shift(cls, n, s):
        """The cyclic permutation ``i -> (i + s) mod n``."""
        return cls(tuple((i + s) % n for i in range(n)), Kind.CYCLIC)

    @property
    def offset(self) -> int:
        if self.kind is not Kind.CYCLIC:
            raise ValueError("offset is only defined for cyclic permutations")
        return self.mapping[0] if self.mapping else 0

    def inverse(self) -> Permutation:
        inv = [0] * len(self.mapping)
        for i, j in enumerate(self.mapping):
            inv[j] = i
        return Permutation(tuple(inv), self.kind)

    def __len__(self):
        return len(self.mapping)

    def __call__(self, i):
        return self.mapping[i]

    def __eq__(self, other):
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.mapping == other.mapping

    def __hash__(self):
        return hash(self.mapping)

    def as_array(self) -> np.ndarray:
        return np.array(self.mapping, dtype=np.intp)


@dataclass(frozen=True, eq=False)
class ContingencyTable:
    """Joint counts ``counts[x, y]``; real-valued so smoothing can be applied."""

    counts: np.ndarray

    def __post_init__(self):
        c = _frozen(self.counts)
        if c.ndim != 2:
            raise ValueError("counts must be a 2-d array")
        if np.any(c < 0) or not np.all(np.isfinite(c)):
            raise ValueError("counts must be finite and nonnegative")
        object.__setattr__(self, "counts", c)

    def __array__(self, dtype=None, copy=None):
        return self.counts if dtype is None else self.counts.astype(dtype)

    @property
    def shape(self):
        return self.counts.shape

    @property
    def row_totals(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def col_totals(self) -> np.ndarray:
        return self.counts.sum(axis=0)

    @property
    def grand_total(self) -> float:
        return float(self.counts.sum())

    @property
    def T(self) -> ContingencyTable:
        return ContingencyTable(self.counts.T)

    def smoothed(self, pseudo_count: float) -> ContingencyTable:
        if pseudo_count < 0:
            raise ValueError("pseudo_count must be nonnegative")
        if pseudo_count == 0:
            return self
        return ContingencyTable(self.counts + pseudo_count)

    def nonzero_support(self):
        """Indices of rows and columns with positive totals."""
        return np.flatnonzero(self.row_totals > 0), np.flatnonzero(self.col_totals > 0)

    def pruned(self) -> ContingencyTable:
        rows, cols = self.nonzero_support()
        return ContingencyTable(self.counts[np.ix_(rows, cols)])

    def to_json(self):
        return self.counts.tolist()


@dataclass(frozen=True, eq=False)
class UcmEstimate:
    """Shared pmf ``gamma`` and per-row inverse permutations ``taus``.

    ``log_likelihood`` is the conditional log-likelihood
    ``sum_x sum_j N[x, tau_x(j)] * log(gamma[j])`` in nats.  ``trace`` holds the
    objective after every iteration of an iterative fit (empty otherwise).
    """

    gamma: CategoricalDistribution
    taus: tuple
    log_likelihood: float
    kind: Kind = Kind.GENERAL
    trace: tuple = field(default=())

    def __post_init__(self):
        if not isinstance(self.gamma, CategoricalDistribution):
            object.__setattr__(self, "gamma", CategoricalDistribution(self.gamma))
        object.__setattr__(self, "taus", tuple(self.taus))
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(self, "log_likelihood", float(self.log_likelihood))
        n = len(self.gamma)
        if any(len(t) != n for t in self.taus):
            raise DimensionMismatch("every tau must act on len(gamma) symbols")

    @property
    def sigmas(self):
        return tuple(t.inverse() for t in self.taus)

    def channel(self) -> ChannelMatrix:
        return uc_channel(self.gamma.probs, self.taus)

    def to_dict(self):
        return {
            "kind": self.kind.value,
            "gamma": self.gamma.probs.tolist(),
            "taus": [list(t.mapping) for t in self.taus],
            "log_likelihood": self.log_likelihood,
        }


def reverse_channel(forward, marginal):
    """Bayes inversion of a channel.

    Returns ``(theta_rev, effect_marginal)`` where
    ``theta_rev[y, x] = forward[x, y] * marginal[x] / A[y]`` and
    ``A[y] = sum_x forward[x, y] * marginal[x]``.
    """
    theta = np.asarray(forward, dtype=float)
    beta = np.asarray(marginal, dtype=float)
    if beta.shape != (theta.shape[0],):
        raise DimensionMismatch(
            f"marginal has length {beta.size}, channel has {theta.shape[0]} rows"
        )
    joint = theta * beta[:, None]
    effect = joint.sum(axis=0)
    if np.any(effect <= 0):
        zero = np.flatnonzero(effect <= 0).tolist()
        raise ZeroEffectMarginal(f"effect categories {zero} have zero probability")
    rev = joint.T / effect[:, None]
    # renormalise to absorb rounding in the division
    rev = rev / rev.sum(axis=1, keepdims=True)
    return ChannelMatrix(rev), CategoricalDistribution(effect / effect.sum())


def is_uniform_channel(channel, kind=Kind.GENERAL, tol=1e-9) -> bool:
    if tol <= 0:
        raise ValueError("tol must be positive")
    theta = np.asarray(channel, dtype=float)
    kind = Kind(kind)
    if kind is Kind.GENERAL:
        srt = -np.sort(-theta, axis=1)
        return bool(np.max(np.abs(srt - srt[0])) <= tol)
    first = theta[0]
    shifts = np.stack([np.roll(first, s) for s in range(first.size)])
    for row in theta[1:]:
        if np.min(np.max(np.abs(shifts - row), axis=1)) > tol:
            return False
    return True


def conditional_entropy(channel, marginal) -> float:
    """``H(Y|X)`` in nats for a channel driven by ``marginal``."""
    theta = np.asarray(channel, dtype=float)
    beta = np.asarray(marginal, dtype=float)
    if beta.shape != (theta.shape[0],):
        raise DimensionMismatch("marginal length must equal number of channel rows")
    row_h = -xlogy(theta, theta).sum(axis=1)
    return float(beta @ row_h)


def uc_channel(gamma, taus) -> ChannelMatrix:
    """Channel whose row ``x`` places ``gamma[j]`` at column ``taus[x](j)``."""
    g = np.asarray(gamma, dtype=float)
    rows = np.empty((len(taus), g.size))
    for x, tau in enumerate(taus):
        idx = tau.as_array() if isinstance(tau, Permutation) else np.asarray(tau)
        rows[x, idx] = g
    return ChannelMatrix(rows)
