"""Maximum-likelihood channel estimators.

Four settings are covered: an unconstrained channel, a uniform channel with
given permutations, a uniform channel with unknown permutations (closed form,
sort every row) and a cyclic uniform channel with unknown shifts (alternating
maximisation with restarts).  ``oracle_uc`` solves the last two by exhaustive
search and exists to check the fast paths on small tables.

None of the estimators smooth their input; callers apply
``ContingencyTable.smoothed`` once, beforehand.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from .core import (
    CategoricalDistribution,
    ChannelMatrix,
    Kind,
    Permutation,
    UcmEstimate,
)
from .errors import DimensionMismatch, EmptyRow, EmptyTable, TooLarge

ORACLE_CAP = 10**7


@dataclass(frozen=True)
class EstimationConfig:
    smoothing: float = 1e-3
    cuc_max_iters: int = 200
    cuc_restarts: int = 10
    rng_seed: int = 0

    def __post_init__(self):
        if self.smoothing < 0:
            raise ValueError("smoothing must be nonnegative")
        if self.cuc_max_iters < 1:
            raise ValueError("cuc_max_iters must be at least 1")
        if self.cuc_restarts < 0:
            raise ValueError("cuc_restarts must be nonnegative")


def derive_rng(seed, *keys) -> np.random.Generator:
    """PCG64 stream keyed by ``(seed, *keys)`` through ``SeedSequence``."""
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=tuple(keys)))


def _counts(table):
    return np.asarray(table, dtype=float)


def _require_rows(n):
    if np.any(n.sum(axis=1) <= 0):
        empty = np.flatnonzero(n.sum(axis=1) <= 0).tolist()
        raise EmptyRow(f"rows {empty} have no counts")


def _pooled_loglik(pooled):
    """``sum_j S_j log(S_j / N)``, the profile log-likelihood of pooled counts."""
    total = pooled.sum()
    return float(xlogy(pooled, pooled / total).sum())


def estimate_marginal(table) -> CategoricalDistribution:
    n = _counts(table)
    total = n.sum()
    if total <= 0:
        raise EmptyTable("table has no counts")
    return CategoricalDistribution(n.sum(axis=1) / total)


def estimate_arbitrary(table):
    """Row-wise relative frequencies and their conditional log-likelihood."""
    n = _counts(table)
    _require_rows(n)
    theta = n / n.sum(axis=1, keepdims=True)
    return ChannelMatrix(theta), float(xlogy(n, theta).sum())


def _as_perm(tau, n):
    perm = tau if isinstance(tau, Permutation) else Permutation(tuple(tau))
    if len(perm) != n:
        raise DimensionMismatch(f"permutation of size {len(perm)} for {n} columns")
    return perm


def estimate_uc_known(table, taus) -> UcmEstimate:
    n = _counts(table)
    if len(taus) != n.shape[0]:
        raise DimensionMismatch(f"{len(taus)} permutations for {n.shape[0]} rows")
    perms = [_as_perm(t, n.shape[1]) for t in taus]
    if n.sum() <= 0:
        raise EmptyTable("table has no counts")
    pooled = sum(row[p.as_array()] for row, p in zip(n, perms))
    kind = Kind.CYCLIC if all(p.kind is Kind.CYCLIC for p in perms) else Kind.GENERAL
    return UcmEstimate(pooled / pooled.sum(), perms, _pooled_loglik(pooled), kind)


def estimate_uc(table) -> UcmEstimate:
    """Global ML uniform channel: sort each row of counts non-increasingly.

    Ties are broken by a stable sort, so the lower column index comes first.
    The pooled sorted rows are non-increasing, hence so is ``gamma``.
    """
    n = _counts(table)
    _require_rows(n)
    order = np.argsort(-n, axis=1, kind="stable")
    pooled = np.take_along_axis(n, order, axis=1).sum(axis=0)
    taus = [Permutation(tuple(o)) for o in order]
    return UcmEstimate(pooled / pooled.sum(), taus, _pooled_loglik(pooled), Kind.GENERAL)


def _shift_index(k):
    # idx[s, j] = (j + s) mod k
    return (np.arange(k)[None, :] + np.arange(k)[:, None]) % k


def _cuc_run(n, rolled, gamma0, max_iters):
    """One alternating-maximisation run from ``gamma0``.

    Returns ``(shifts, pooled, trace)``; ``trace`` holds the objective after each
    pmf update.
    """
    total = n.sum()
    gamma = gamma0
    shifts = None
    trace = []
    rows = np.arange(n.shape[0])
    for _ in range(max_iters):
        with np.errstate(divide="ignore", invalid="ignore"):
            logg = np.log(gamma)
            scores = np.where(rolled > 0, rolled * logg, 0.0).sum(axis=2)
        new = np.argmax(scores, axis=1)
        if shifts is not None:
            # keep the current shift on ties so the iteration cannot cycle
            keep = scores[rows, shifts] >= scores[rows, new]
            new = np.where(keep, shifts, new)
        pooled = rolled[rows, new].sum(axis=0)
        gamma = pooled / total
        trace.append(_pooled_loglik(pooled))
        if shifts is not None and np.array_equal(new, shifts):
            break
        shifts = new
    return shifts if shifts is not None else new, pooled, trace


def _canonical_cyclic(pooled, shifts):
    """Rotate ``gamma`` so its first maximum leads; shifts absorb the rotation."""
    k = pooled.size
    r = int(np.argmax(pooled))
    return np.roll(pooled, -r), [(int(s) + r) % k for s in shifts]


def _cuc_runs(n, config):
    k = n.shape[1]
    rolled = n[:, _shift_index(k)]
    for restart in range(config.cuc_restarts + 1):
        if restart == 0:
            gamma0 = estimate_uc(n).gamma.probs
        else:
            gamma0 = derive_rng(config.rng_seed, restart).dirichlet(np.ones(k))
        yield _cuc_run(n, rolled, gamma0, config.cuc_max_iters)


def cuc_run_traces(table, config: EstimationConfig | None = None) -> list:
    """Objective traces of every restart ``estimate_cuc`` would perform."""
    config = config or EstimationConfig()
    n = _counts(table)
    _require_rows(n)
    return [tuple(trace) for _, _, trace in _cuc_runs(n, config)]


def estimate_cuc(table, config: EstimationConfig | None = None) -> UcmEstimate:
    """Cyclic uniform channel by alternating maximisation.

    Restart 0 starts from the sorted general-UC pmf; restarts ``1..R`` start
    from flat-Dirichlet draws keyed by ``(rng_seed, restart)``.  The best run
    wins, lowest restart index on ties.  The returned ``gamma`` is rotated so
    that its largest entry comes first.
    """
    config = config or EstimationConfig()
    n = _counts(table)
    _require_rows(n)
    k = n.shape[1]
    best = None
    for shifts, pooled, trace in _cuc_runs(n, config):
        if best is None or trace[-1] > best[2][-1]:
            best = (shifts, pooled, trace)
    shifts, pooled, trace = best
    pooled, shifts = _canonical_cyclic(pooled, shifts)
    taus = [Permutation.shift(k, s) for s in shifts]
    return UcmEstimate(pooled / pooled.sum(), taus, trace[-1], Kind.CYCLIC, tuple(trace))


def _candidate_perms(k, kind):
    if kind is Kind.GENERAL:
        return np.array(list(itertools.permutations(range(k))), dtype=np.intp)
    return _shift_index(k)


def oracle_uc(table, kind=Kind.GENERAL) -> UcmEstimate:
    """Exhaustive maximisation over every tuple of row permutations.

    For a fixed tuple the optimal pmf is the normalised pooled count vector, so
    each tuple is scored by the profile log-likelihood of its pooled counts.
    """
    kind = Kind(kind)
    n = _counts(table)
    _require_rows(n)
    nx, k = n.shape
    perms = _candidate_perms(k, kind)
    size = len(perms) ** nx
    if size > ORACLE_CAP:
        raise TooLarge(f"{size} permutation tuples exceed the cap of {ORACLE_CAP}")
    total = n.sum()
    # per-row candidate rearrangements, shape (nx, P, k)
    cand = np.stack([n[x][perms] for x in range(nx)])
    best_ll, best_idx = -math.inf, None
    # enumerate the first row explicitly to bound memory; vectorise the rest
    rest = np.zeros((1, k))
    for x in range(1, nx):
        rest = (rest[:, None, :] + cand[x][None, :, :]).reshape(-1, k)
    for i0 in range(len(perms)):
        pooled = cand[0][i0][None, :] + rest
        ll = xlogy(pooled, pooled / total).sum(axis=1)
        j = int(np.argmax(ll))
        if ll[j] > best_ll:
            best_ll, best_idx = float(ll[j]), (i0, j)
    i0, j = best_idx
    rest_idx = np.unravel_index(j, (len(perms),) * (nx - 1)) if nx > 1 else ()
    choice = [i0, *[int(r) for r in rest_idx]]
    taus = [Permutation(tuple(perms[c]), kind) for c in choice]
    pooled = sum(n[x][perms[c]] for x, c in enumerate(choice))
    return UcmEstimate(pooled / total, taus, best_ll, kind)
