from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import seeds
from steinlab.channels import (
    IncompleteKrausError,
    KrausChannel,
    apply,
    depolarizing_channel,
    dilate,
    dual_apply,
    identity_channel,
    monotonicity_gap,
    random_channel,
    tilde_states,
    unitary_channel,
)
from steinlab.entropy import relative_entropy
from steinlab.operators import (
    DimensionMismatchError,
    max_abs,
    maximally_mixed,
    partial_trace,
    random_density,
    random_unitary,
)


def test_apply_examples():
    rho = random_density(3, 3, 1)
    assert max_abs(apply(identity_channel(3), rho) - rho) < 1e-15
    u = random_unitary(3, 2)
    assert max_abs(apply(unitary_channel(u), rho) - u @ rho @ u.conj().T) < 1e-14
    assert max_abs(apply(depolarizing_channel(3), rho) - maximally_mixed(3)) < 1e-14
    with pytest.raises(DimensionMismatchError):
        apply(identity_channel(2), rho)


@given(seeds, st.integers(1, 4), st.integers(1, 4))
def test_apply_preserves_states(seed, d, m):
    ch = random_channel(d, m, seed)
    out = apply(ch, random_density(d, d, seed + 1))
    assert abs(np.trace(out) - 1) < 1e-10
    assert np.linalg.eigvalsh(out).min() >= -1e-12


def test_dual_apply_examples():
    ch = random_channel(3, 2, 3)
    assert max_abs(dual_apply(ch, np.eye(3)) - np.eye(3)) < 1e-9
    u = random_unitary(3, 4)
    a = random_density(3, 3, 5)
    assert max_abs(dual_apply(unitary_channel(u), a) - u.conj().T @ a @ u) < 1e-14


@given(seeds, st.integers(1, 4), st.integers(1, 4))
def test_duality(seed, d, m):
    rng = np.random.default_rng(seed)
    ch = random_channel(d, m, rng)
    rho = random_density(d, d, rng)
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    a = g + g.conj().T
    assert abs(np.trace(apply(ch, rho) @ a) - np.trace(rho @ dual_apply(ch, a))) < 1e-9


def test_kraus_validation():
    with pytest.raises(IncompleteKrausError):
        KrausChannel((0.9 * np.eye(2),))
    with pytest.raises(IncompleteKrausError):
        KrausChannel(())
    with pytest.raises(DimensionMismatchError):
        KrausChannel((np.eye(2), np.zeros((3, 3))))


def test_random_channel_examples():
    ch = random_channel(2, 1, 5)
    assert ch.m == 1
    assert max_abs(ch.kraus[0] @ ch.kraus[0].conj().T - np.eye(2)) < 1e-12
    assert random_channel(3, 4, 6).completeness_residual() < 1e-10
    a, b = random_channel(3, 2, 7), random_channel(3, 2, 7)
    assert all(np.array_equal(x, y) for x, y in zip(a.kraus, b.kraus))


def test_dilate_examples():
    w = random_unitary(2, 1)
    dil = dilate(unitary_channel(w))
    assert dil.env_dim == 2
    rho = random_density(2, 2, 2)
    assert max_abs(dil.apply(rho) - w @ rho @ w.conj().T) < 1e-12
    dil = dilate(identity_channel(3))
    rho = random_density(3, 3, 3)
    assert max_abs(dil.apply(rho) - rho) < 1e-12
    ch = random_channel(2, 4, 4)
    dil = dilate(ch)
    assert dil.env_dim == 4
    rng = np.random.default_rng(5)
    for _ in range(20):
        rho = random_density(2, 2, rng)
        assert max_abs(dil.apply(rho) - apply(ch, rho)) < 1e-10


@given(seeds, st.integers(1, 4), st.integers(1, 4))
def test_dilation_invariants(seed, d, m):
    ch = random_channel(d, m, seed)
    dil = dilate(ch)
    u = dil.unitary
    assert max_abs(u.conj().T @ u - np.eye(u.shape[0])) < 1e-9
    assert np.linalg.matrix_rank(dil.sigma) == 1
    assert dil.env_dim == max(m, 2)
    rho = random_density(d, d, seed + 1)
    assert max_abs(dil.apply(rho) - apply(ch, rho)) < 1e-10


def test_dilation_is_deterministic():
    ch = random_channel(3, 3, 8)
    assert np.array_equal(dilate(ch).unitary, dilate(ch).unitary)


def test_tilde_examples():
    rho = random_density(2, 2, 9)
    dil = dilate(random_channel(2, 3, 10))
    pt, ft = tilde_states(rho, rho, dil)
    assert max_abs(pt - ft) < 1e-15
    assert relative_entropy(pt, ft).value == pytest.approx(0.0, abs=1e-10)
    dil = dilate(identity_channel(2))
    pt, _ = tilde_states(rho, rho, dil)
    assert max_abs(partial_trace(pt, (2, dil.env_dim)) - rho) < 1e-12


@given(seeds, st.integers(2, 4), st.integers(1, 4))
def test_tilde_contracts(seed, d, m):
    ch = random_channel(d, m, seed)
    psi, phi = random_density(d, d, seed + 1), random_density(d, d, seed + 2)
    dil = dilate(ch)
    pt, ft = tilde_states(psi, phi, dil)
    assert max_abs(partial_trace(pt, (d, dil.env_dim)) - apply(ch, psi)) < 1e-9
    assert relative_entropy(pt, ft).value == pytest.approx(relative_entropy(psi, phi).value, abs=1e-9)


def test_monotonicity_examples():
    psi, phi = random_density(3, 3, 11), random_density(3, 3, 12)
    assert abs(monotonicity_gap(psi, phi, unitary_channel(random_unitary(3, 13))).gap) < 1e-9
    rep = monotonicity_gap(psi, phi, depolarizing_channel(3))
    assert rep.s_out.value == pytest.approx(0.0, abs=1e-12)
    assert rep.gap == pytest.approx(rep.s_in.value, abs=1e-12)
    assert rep.holds


def test_monotonicity_infinite_branch():
    psi, phi = np.diag([0.5, 0.5]), np.diag([1.0, 0.0])
    rep = monotonicity_gap(psi, phi, depolarizing_channel(2))
    assert not rep.s_in.finite
    assert rep.holds


@given(seeds, st.integers(2, 4), st.integers(1, 4))
def test_monotonicity_property(seed, d, m):
    psi, phi = random_density(d, d, seed), random_density(d, d, seed + 1)
    assert monotonicity_gap(psi, phi, random_channel(d, m, seed + 2)).gap >= -1e-8
