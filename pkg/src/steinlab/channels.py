"""Channels in Kraus form, Stinespring dilations and the monotonicity gap."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .entropy import EntropyValue, relative_entropy
from .operators import (
    DimensionMismatchError,
    SeedLike,
    as_hermitian,
    dagger,
    max_abs,
    orthonormalize,
    partial_trace,
    random_unitary,
)

COMPLETENESS_ATOL = 1e-9
MONOTONICITY_SLACK = 1e-8


class IncompleteKrausError(ValueError):
    pass


@dataclass(frozen=True)
class KrausChannel:
    kraus: tuple[np.ndarray, ...]

    def __post_init__(self):
        ks = tuple(np.asarray(k, dtype=complex) for k in self.kraus)
        if not ks:
            raise IncompleteKrausError("a channel needs at least one Kraus operator")
        d = ks[0].shape[0]
        if any(k.shape != (d, d) for k in ks):
            raise DimensionMismatchError("Kraus operators must all be d x d")
        object.__setattr__(self, "kraus", ks)
        residual = self.completeness_residual()
        if residual > COMPLETENESS_ATOL:
            raise IncompleteKrausError(f"sum K^dag K deviates from identity by {residual:.3e}")

    @property
    def dim(self) -> int:
        return self.kraus[0].shape[0]

    @property
    def m(self) -> int:
        return len(self.kraus)

    def completeness_residual(self) -> float:
        s = sum(dagger(k) @ k for k in self.kraus)
        return max_abs(s - np.eye(self.kraus[0].shape[0]))


def _check_dim(channel: KrausChannel, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    if x.shape != (channel.dim, channel.dim):
        raise DimensionMismatchError(f"operator of shape {x.shape} on a {channel.dim}-dim channel")
    return x


def apply(channel: KrausChannel, d) -> np.ndarray:
    d = _check_dim(channel, d)
    out = sum(k @ d @ dagger(k) for k in channel.kraus)
    return (out + dagger(out)) / 2


def dual_apply(channel: KrausChannel, a) -> np.ndarray:
    """Heisenberg picture: sum K^dag A K (unital)."""
    a = _check_dim(channel, a)
    return sum(dagger(k) @ a @ k for k in channel.kraus)


def identity_channel(d: int) -> KrausChannel:
    return KrausChannel((np.eye(d),))


def unitary_channel(u) -> KrausChannel:
    return KrausChannel((np.asarray(u, dtype=complex),))


def depolarizing_channel(d: int) -> KrausChannel:
    """Completely depolarizing map, Kraus set {|i><j| / sqrt(d)}."""
    ks = []
    for i in range(d):
        for j in range(d):
            k = np.zeros((d, d), dtype=complex)
            k[i, j] = 1 / np.sqrt(d)
            ks.append(k)
    return KrausChannel(tuple(ks))


def random_channel(d: int, m: int, seed: SeedLike = None) -> KrausChannel:
    """Kraus blocks sliced from the first d columns of a random (d*m)-unitary."""
    if m < 1:
        raise ValueError(f"need at least one Kraus operator, got m={m}")
    v = random_unitary(d * m, seed)[:, :d]
    return KrausChannel(tuple(v[i * d:(i + 1) * d, :] for i in range(m)))


@dataclass(frozen=True)
class StinespringDilation:
    """U on H (x) H_a and a pure environment state sigma = |e_0><e_0|."""

    unitary: np.ndarray = field(repr=False)
    sigma: np.ndarray = field(repr=False)
    dim: int
    env_dim: int

    def apply(self, d) -> np.ndarray:
        big = self.unitary @ np.kron(d, self.sigma) @ dagger(self.unitary)
        return partial_trace(big, (self.dim, self.env_dim), traced=1)


def dilate(channel: KrausChannel) -> StinespringDilation:
    d, m = channel.dim, channel.m
    env = max(m, 2)
    n = d * env
    # isometry x -> sum_i (K_i x) (x) e_i, rows ordered (system, environment)
    iso = np.zeros((n, d), dtype=complex)
    for i, k in enumerate(channel.kraus):
        iso[i::env, :] = k
    # QR of [iso | 1]: columns after the first d span the orthogonal complement
    completion = orthonormalize(np.hstack([iso, np.eye(n)]))
    u = np.empty((n, n), dtype=complex)
    inputs = np.arange(d) * env
    others = np.setdiff1d(np.arange(n), inputs)
    u[:, inputs] = iso
    u[:, others] = completion[:, d:]
    sigma = np.zeros((env, env), dtype=complex)
    sigma[0, 0] = 1.0
    return StinespringDilation(u, sigma, d, env)


def tilde_states(psi, phi, dil: StinespringDilation) -> tuple[np.ndarray, np.ndarray]:
    u = dil.unitary
    psi_t = u @ np.kron(psi, dil.sigma) @ dagger(u)
    phi_t = u @ np.kron(phi, dil.sigma) @ dagger(u)
    return as_hermitian(psi_t, atol=1e-9), as_hermitian(phi_t, atol=1e-9)


@dataclass(frozen=True)
class MonotonicityReport:
    s_in: EntropyValue
    s_out: EntropyValue

    @property
    def gap(self) -> float:
        if not self.s_in.finite:
            return float("inf")
        return self.s_in.value - float(self.s_out)

    @property
    def holds(self) -> bool:
        return (not self.s_in.finite) or self.gap >= -MONOTONICITY_SLACK


def monotonicity_gap(psi, phi, channel: KrausChannel) -> MonotonicityReport:
    return MonotonicityReport(
        relative_entropy(psi, phi),
        relative_entropy(apply(channel, psi), apply(channel, phi)),
    )
