"""Random uniform-channel models and samplers.

Random numbers come from numpy's PCG64 bit generator seeded through
``SeedSequence(seed, spawn_key=keys)``; ``RNG_ALGORITHM`` is echoed into
experiment configs.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .core import (
    CategoricalDistribution,
    ContingencyTable,
    Kind,
    Permutation,
    is_uniform_channel,
    uc_channel,
)
from .estimation import derive_rng

RNG_ALGORITHM = f"numpy-{np.__version__}/PCG64/SeedSequence"
MIN_MARGINAL = 1e-3


def _seed_parts(seed):
    """Accept an int or a tuple ``(seed, *keys)``."""
    if isinstance(seed, (tuple, list)):
        return int(seed[0]), tuple(int(k) for k in seed[1:])
    return int(seed), ()


def _rng(seed):
    base, keys = _seed_parts(seed)
    return derive_rng(base, *keys)


@dataclass(frozen=True, eq=False)
class UcmSpec:
    """Generative model ``X ~ marginal``, ``U ~ gamma``, ``Y = tau_X(U)``.

    ``sigmas[x]`` maps output categories to positions in ``gamma``, so the
    channel satisfies ``theta[x, y] = gamma[sigmas[x](y)]``.
    """

    marginal: CategoricalDistribution
    gamma: CategoricalDistribution
    sigmas: tuple
    kind: Kind = Kind.GENERAL
    seed: object = None

    def __post_init__(self):
        for name in ("marginal", "gamma"):
            value = getattr(self, name)
            if not isinstance(value, CategoricalDistribution):
                object.__setattr__(self, name, CategoricalDistribution(value))
        kind = Kind(self.kind)
        sigmas = tuple(
            s if isinstance(s, Permutation) else Permutation(tuple(s), kind) for s in self.sigmas
        )
        if len(sigmas) != len(self.marginal):
            raise ValueError("need one permutation per input category")
        object.__setattr__(self, "sigmas", sigmas)
        object.__setattr__(self, "kind", kind)

    @property
    def sizes(self):
        return len(self.marginal), len(self.gamma)

    @property
    def taus(self):
        return tuple(s.inverse() for s in self.sigmas)

    def channel(self):
        return uc_channel(self.gamma.probs, self.taus)

    def to_json(self) -> str:
        base, keys = _seed_parts(self.seed) if self.seed is not None else (None, ())
        doc = {
            "sizes": list(self.sizes),
            "kind": self.kind.value,
            "marginal": self.marginal.probs.tolist(),
            "gamma": self.gamma.probs.tolist(),
            "sigmas": [list(s.mapping) for s in self.sigmas],
            "seed": None if base is None else [base, *keys],
        }
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> UcmSpec:
        doc = json.loads(text)
        seed = doc.get("seed")
        spec = cls(doc["marginal"], doc["gamma"], doc["sigmas"], doc["kind"],
                   tuple(seed) if seed else None)
        if list(spec.sizes) != list(doc["sizes"]):
            raise ValueError(f"sizes {doc['sizes']} disagree with parameters {spec.sizes}")
        return spec


def _random_sigma(rng, k, kind):
    if kind is Kind.CYCLIC:
        return Permutation.shift(k, int(rng.integers(k)))
    return Permutation(tuple(rng.permutation(k)))


def random_ucm(sizes, kind=Kind.GENERAL, seed=0) -> UcmSpec:
    """Draw marginal and ``gamma`` from flat Dirichlets and uniform permutations.

    Draws with all channel rows equal (within 1e-9) or with a marginal entry
    below ``MIN_MARGINAL`` are rejected and redrawn from the same stream.
    """
    nx, ny = sizes
    if nx < 2 or ny < 2:
        raise ValueError("both supports need at least 2 categories")
    kind = Kind(kind)
    rng = _rng(seed)
    while True:
        beta = rng.dirichlet(np.ones(nx))
        gamma = rng.dirichlet(np.ones(ny))
        sigmas = [_random_sigma(rng, ny, kind) for _ in range(nx)]
        if beta.min() < MIN_MARGINAL:
            continue
        theta = np.asarray(uc_channel(gamma, [s.inverse() for s in sigmas]))
        if np.max(np.abs(theta - theta[0])) <= 1e-9:
            continue
        return UcmSpec(beta, gamma, sigmas, kind, seed)


def random_channel(sizes, seed=0):
    """Arbitrary channel with flat-Dirichlet rows; almost surely not uniform."""
    nx, ny = sizes
    rng = _rng(seed)
    return rng.dirichlet(np.ones(ny), size=nx)


def _tally(xs, ys, sizes):
    counts = np.zeros(sizes)
    np.add.at(counts, (xs, ys), 1)
    return ContingencyTable(counts)


def sample(spec: UcmSpec, n: int, seed=0) -> ContingencyTable:
    """Draw ``n`` pairs through the structural form ``y = tau_x(u)``."""
    if n < 1:
        raise ValueError("n must be positive")
    rng = _rng(seed)
    nx, ny = spec.sizes
    xs = rng.choice(nx, size=n, p=spec.marginal.probs)
    us = rng.choice(ny, size=n, p=spec.gamma.probs)
    tau = np.stack([t.as_array() for t in spec.taus])
    return _tally(xs, tau[xs, us], (nx, ny))


def sample_channel(marginal, channel, n: int, seed=0) -> ContingencyTable:
    """Draw ``n`` pairs by picking ``x`` then ``y`` from row ``x`` of ``channel``."""
    if n < 1:
        raise ValueError("n must be positive")
    rng = _rng(seed)
    beta = np.asarray(marginal, dtype=float)
    theta = np.asarray(channel, dtype=float)
    xs = rng.choice(beta.size, size=n, p=beta)
    cdf = np.cumsum(theta, axis=1)
    cdf[:, -1] = 1.0
    ys = (rng.random(n)[:, None] > cdf[xs]).sum(axis=1)
    return _tally(xs, ys, theta.shape)


def check_spec(spec: UcmSpec, tol=1e-12) -> bool:
    channel = spec.channel()
    rows = np.asarray(channel)
    distinct = np.max(np.abs(rows - rows[0])) > 1e-9
    return is_uniform_channel(channel, spec.kind, tol) and bool(distinct)
