"""Entropies in nats: von Neumann, Umegaki relative entropy, Shannon, KL."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .operators import (
    SUPPORT_CUTOFF,
    DimensionMismatchError,
    as_hermitian,
    conjugate_legs,
    tensor_power,
)

SUPPORT_LEAK_ATOL = 1e-10
PROB_ATOL = 1e-9


@dataclass(frozen=True)
class EntropyValue:
    """A possibly infinite entropy; ``finite=False`` encodes +inf."""

    value: float
    finite: bool = True

    @classmethod
    def infinite(cls) -> EntropyValue:
        return cls(math.nan, False)

    def __float__(self) -> float:
        return self.value if self.finite else math.inf

    def to_dict(self) -> dict:
        return {"value": self.value if self.finite else None, "finite": self.finite}


def as_distribution(p) -> np.ndarray:
    p = np.asarray(p, dtype=float).reshape(-1)
    if np.any(p < -1e-12):
        raise ValueError(f"negative probability {p.min():.3e}")
    p = np.clip(p, 0.0, None)
    if abs(p.sum() - 1.0) > PROB_ATOL:
        raise ValueError(f"probabilities sum to {p.sum()!r}")
    return p


def _xlogx(w: np.ndarray) -> float:
    w = w[w > SUPPORT_CUTOFF]
    return float(np.sum(w * np.log(w)))


def von_neumann(rho) -> float:
    w = np.linalg.eigvalsh(as_hermitian(rho))
    return -_xlogx(w)


def relative_entropy(rho, sigma) -> EntropyValue:
    """Umegaki relative entropy S(rho || sigma), evaluated on supp(sigma)."""
    rho, sigma = as_hermitian(rho), as_hermitian(sigma)
    if rho.shape != sigma.shape:
        raise DimensionMismatchError(f"shapes {rho.shape} and {sigma.shape} differ")
    ws, vs = np.linalg.eigh(sigma)
    keep = ws > SUPPORT_CUTOFF
    vs, ws = vs[:, keep], ws[keep]
    # diagonal of rho in sigma's support eigenbasis
    rho_diag = np.einsum("ij,ik,kj->j", vs.conj(), rho, vs).real
    leak = float(np.trace(rho).real) - float(rho_diag.sum())
    if leak > SUPPORT_LEAK_ATOL:
        return EntropyValue.infinite()
    cross = float(np.dot(rho_diag, np.log(ws)))
    return EntropyValue(_xlogx(np.linalg.eigvalsh(rho)) - cross)


def shannon(p) -> float:
    p = as_distribution(p)
    p = p[p > 0]
    return float(-np.sum(p * np.log(p)))


def classical_kl(p, q) -> EntropyValue:
    p, q = as_distribution(p), as_distribution(q)
    if p.shape != q.shape:
        raise DimensionMismatchError(f"alphabet sizes {p.size} and {q.size} differ")
    on = p > 0
    if np.any(q[on] <= 0):
        return EntropyValue.infinite()
    return EntropyValue(float(np.sum(p[on] * np.log(p[on] / q[on]))))


def relative_entropy_to_power(rho, sigma, n: int) -> EntropyValue:
    """S(rho || sigma^(x)n) for a dense rho on n legs.

    The support of sigma^(x)n and its logarithm are taken leg-wise from the
    single-site spectrum, so products of small eigenvalues are never mistaken
    for kernel the way a dense eigendecomposition with a fixed cutoff would.
    """
    rho, sigma = as_hermitian(rho), as_hermitian(sigma)
    d = sigma.shape[0]
    ws, vs = np.linalg.eigh(sigma)
    on = ws > SUPPORT_CUTOFF
    log_w = np.where(on, np.log(np.where(on, ws, 1.0)), 0.0)
    diag = np.diagonal(conjugate_legs(rho, vs.conj().T, d, n)).real
    grid = np.indices((d,) * n).reshape(n, -1)
    support = np.all(on[grid], axis=0)
    if float(np.trace(rho).real) - float(diag[support].sum()) > SUPPORT_LEAK_ATOL:
        return EntropyValue.infinite()
    cross = float(np.dot(diag[support], log_w[grid].sum(axis=0)[support]))
    return EntropyValue(_xlogx(np.linalg.eigvalsh(rho)) - cross)


def mean_relative_entropy_rate(psi, phi, n: int) -> float:
    """(1/n) S(psi^(x)n || phi^(x)n) from the explicit tensor power of psi."""
    return float(relative_entropy_to_power(tensor_power(psi, n), phi, n)) / n
