import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ucm import Kind, conditional_entropy, independence_test
from ucm.synthetic import UcmSpec, check_spec, random_ucm, sample, sample_channel

seeds = st.integers(0, 2**32 - 1)


def test_random_ucm_is_deterministic():
    a = random_ucm((3, 4), "general", 42)
    b = random_ucm((3, 4), "general", 42)
    assert a.to_json() == b.to_json()
    assert a.to_json() != random_ucm((3, 4), "general", 43).to_json()


def test_cyclic_draws_are_shifts():
    spec = random_ucm((5, 5), "cyclic", 7)
    assert all(s.kind is Kind.CYCLIC for s in spec.sigmas)
    for s in spec.sigmas:
        assert s.mapping == tuple((i + s.offset) % 5 for i in range(5))


def test_no_independent_draws():
    for seed in range(1000):
        theta = np.asarray(random_ucm((3, 3), "general", seed).channel())
        assert np.max(np.abs(theta - theta[0])) > 1e-9


def test_rejects_tiny_marginals():
    for seed in range(200):
        assert random_ucm((4, 2), "general", seed).marginal.probs.min() >= 1e-3


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 5), st.integers(2, 5), seeds, st.sampled_from(["general", "cyclic"]))
def test_specs_are_valid(nx, ny, seed, kind):
    spec = random_ucm((nx, ny), kind, seed)
    assert check_spec(spec, 1e-12)
    h = spec.gamma.entropy()
    rng = np.random.default_rng(seed)
    for _ in range(3):
        assert conditional_entropy(spec.channel(), rng.dirichlet(np.ones(nx))) == pytest.approx(
            h, abs=1e-12)


def test_large_sample_matches_channel():
    spec = random_ucm((3, 4), "general", 5)
    counts = np.asarray(sample(spec, 10**6, 6))
    assert counts.sum() == 10**6
    emp = counts / counts.sum(axis=1, keepdims=True)
    assert np.max(np.abs(emp - np.asarray(spec.channel()))) < 0.01


def test_point_mass_gamma():
    spec = UcmSpec([0.5, 0.5], [1.0, 0.0, 0.0], [(0, 1, 2), (2, 0, 1)])
    counts = np.asarray(sample(spec, 500, 1))
    assert np.all((counts > 0).sum(axis=1) == 1)
    # row 1: sigma = (2, 0, 1) puts gamma[0] at column 1
    assert counts[1, 1] == counts[1].sum()


def test_single_draw():
    counts = np.asarray(sample(random_ucm((2, 3), "general", 1), 1, 2))
    assert counts.sum() == 1 and counts.max() == 1


def test_structural_and_direct_samplers_agree():
    spec = random_ucm((3, 3), "general", 17)
    n = 100_000
    scm = np.asarray(sample(spec, n, 1)).ravel()
    direct = np.asarray(sample_channel(spec.marginal, spec.channel(), n, 2)).ravel()
    res = independence_test(np.vstack([scm, direct]))
    assert res.p_value > 0.01


def test_json_round_trip():
    spec = random_ucm((3, 5), "cyclic", (9, 1, 2))
    doc = spec.to_json()
    back = UcmSpec.from_json(doc)
    assert back.to_json() == doc
    np.testing.assert_array_equal(np.asarray(back.channel()), np.asarray(spec.channel()))
