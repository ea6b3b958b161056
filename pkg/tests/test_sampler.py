from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

import oracles
from typicality_lab import Rank1Effect, StateVector, TypicalityError
from typicality_lab.linalg import DiagonalEffect, BasisProjector
from typicality_lab.montecarlo import expectation_samples, iter_state_chunks, resolve_method
from typicality_lab.sampler import (
    SeedSpec,
    dirichlet_block_masses,
    haar_first_coordinates,
    haar_states,
    haar_unitary,
    random_povm,
    sample_pair,
    sample_product_state,
    sample_uniform,
)


@settings(max_examples=50, deadline=None)
@given(d=st.integers(1, 64), seed=st.integers(0, 2**64 - 1), stream=st.integers(0, 2**40))
def test_unit_norm_and_determinism(d, seed, stream):
    a = sample_uniform(d, SeedSpec(seed, stream))
    b = sample_uniform(d, SeedSpec(seed, stream))
    assert np.linalg.norm(a.amplitudes) == pytest.approx(1.0, abs=1e-12)
    assert np.array_equal(a.amplitudes, b.amplitudes)


def test_d1_is_a_phase():
    a = sample_uniform(1, SeedSpec(7)).amplitudes
    assert abs(a[0]) == pytest.approx(1.0, abs=1e-15)


def test_batch_rows_equal_single_draws():
    states = haar_states(5, 11, range(3, 8))
    for row, s in zip(states, range(3, 8)):
        assert np.array_equal(row, sample_uniform(5, SeedSpec(11, s)).amplitudes)
    a, b = sample_pair(5, SeedSpec(11, 4))
    assert np.array_equal(haar_states(5, 11, [4], (0,))[0], a.amplitudes)
    assert np.array_equal(haar_states(5, 11, [4], (1,))[0], b.amplitudes)
    assert not np.allclose(a.amplitudes, b.amplitudes)


def test_chunking_does_not_change_samples():
    e = DiagonalEffect(np.linspace(0, 1, 300))
    full = expectation_samples(e, 20_000, 3, method="state")
    tail = expectation_samples(e, 5000, 3, method="state", start=15_000)
    assert np.array_equal(full[15_000:], tail)
    blocks = list(iter_state_chunks(300, 20_000, 3))
    assert len(blocks) > 1 and blocks[1][0] == blocks[0][1].shape[0]


def test_seed_validation():
    with pytest.raises(TypicalityError):
        SeedSpec(-1)
    with pytest.raises(TypicalityError):
        SeedSpec(2**64)


def test_d2_overlap_is_uniform():
    s = haar_states(2, 42, range(100_000))
    ks = stats.kstest(np.abs(s[:, 0]) ** 2, "uniform").statistic
    assert ks < 0.01


def test_mean_rank1_d64():
    p = expectation_samples(Rank1Effect(StateVector.basis(64, 0)), 100_000, 42, method="state")
    assert abs(p.mean() - 1 / 64) <= 3 * p.std(ddof=1) / np.sqrt(p.size)


def test_pair_overlap_mean_d1024():
    n = 10_000
    a = np.concatenate([s for _, s in iter_state_chunks(1024, n, 5, (0,))])
    b = np.concatenate([s for _, s in iter_state_chunks(1024, n, 5, (1,))])
    ov = np.abs(np.einsum("ij,ij->i", a.conj(), b)) ** 2
    sd = oracles.beta_overlap(1024).std()
    assert abs(ov.mean() - 1 / 1024) <= 3 * sd / np.sqrt(n)


def test_pair_d1_gap_is_zero():
    a, b = sample_pair(1, SeedSpec(3))
    e = DiagonalEffect([0.37])
    assert abs(e.expect_batch(a.amplitudes[None])[0] - e.expect_batch(b.amplitudes[None])[0]) < 1e-15


# --------------------------------------------------------------------------- exact-in-law routes


@pytest.mark.parametrize(
    "effect",
    [
        Rank1Effect(StateVector.basis(200, 0), 0.7),
        DiagonalEffect(np.resize([0.1, 0.5, 0.9], 200)),
        BasisProjector(range(50), 200),
    ],
    ids=["rank1", "diagonal", "projector"],
)
def test_spectral_route_matches_state_route(effect):
    n = 20_000
    a = expectation_samples(effect, n, 1, method="state")
    b = expectation_samples(effect, n, 2, method="spectral")
    assert stats.ks_2samp(a, b).pvalue > 1e-3


def test_spectral_route_matches_beta_oracle():
    p = expectation_samples(Rank1Effect(StateVector.basis(4096, 0)), 50_000, 8, method="spectral")
    assert stats.kstest(p, oracles.beta_overlap(4096).cdf).pvalue > 1e-3


def test_first_coordinate_sampler_matches_beta():
    c = haar_first_coordinates(300, 4, range(50_000))
    assert stats.kstest(np.abs(c) ** 2, oracles.beta_overlap(300).cdf).pvalue > 1e-3
    assert stats.kstest(np.angle(c), stats.uniform(-np.pi, 2 * np.pi).cdf).pvalue > 1e-3


def test_block_masses_are_dirichlet():
    m = dirichlet_block_masses([3, 5], 9, range(40_000))
    assert m.sum(axis=1) == pytest.approx(np.ones(40_000))
    assert stats.kstest(m[:, 0], stats.beta(3, 5).cdf).pvalue > 1e-3


def test_resolve_method():
    assert resolve_method("auto", 100, 1000) == "state"
    assert resolve_method("auto", 10**5, 10**5) == "spectral"
    with pytest.raises(TypicalityError):
        resolve_method("fast", 4, 4)


# --------------------------------------------------------------------------- products, unitaries, POVMs


def test_product_state_factorizes():
    psi = sample_product_state(2, SeedSpec(5)).amplitudes
    assert abs(psi[0] * psi[3] - psi[1] * psi[2]) < 1e-10
    with pytest.raises(TypicalityError):
        sample_product_state(21, SeedSpec(5))


def test_single_qubit_product_is_a_haar_spinor():
    psi = sample_product_state(1, SeedSpec(6)).amplitudes
    assert np.linalg.norm(psi) == pytest.approx(1.0)
    ups = np.array([abs(sample_product_state(1, SeedSpec(6, i)).amplitudes[0]) ** 2 for i in range(20_000)])
    assert stats.kstest(ups, "uniform").pvalue > 1e-3


def test_haar_unitary_is_unitary():
    u = haar_unitary(16, SeedSpec(1))
    assert u.conj().T @ u == pytest.approx(np.eye(16), abs=1e-12)


@pytest.mark.parametrize("d,L", [(2, 3), (16, 4)])
def test_random_povm_is_complete(d, L):
    povm = random_povm(d, L, SeedSpec(3))
    total = sum(e.to_dense() for e in povm)
    assert total == pytest.approx(np.eye(d), abs=1e-10)
    for e in povm:
        assert np.linalg.eigvalsh(e.to_dense()).min() >= -1e-10
