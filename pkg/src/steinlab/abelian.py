"""Restriction of product states to the abelian algebra generated by the
type projections and the pinched state's spectral projections.

Each minimal projection q_i lives inside one type block and is stored as an
orthonormal set of columns in that block's product-eigenbasis coordinates.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .entropy import (
    EntropyValue,
    classical_kl,
    relative_entropy,
    relative_entropy_to_power,
    shannon,
    von_neumann,
)
from .operators import (
    as_density,
    cluster_sorted,
    dagger,
    support_leak,
    tensor_power,
)
from .type_classes import TypeDecomposition, build_type_decomposition, pinched_blocks

MINIMAL_RTOL = 1e-9
# Eigenvalues of a pinched block below this are numerically indistinguishable.
MINIMAL_ATOL = 1e-15
SLACK = 1e-8


def _pinched_close(a: float, b: float) -> bool:
    return abs(a - b) <= MINIMAL_RTOL * max(abs(a), abs(b)) + MINIMAL_ATOL


@dataclass(frozen=True)
class MinimalProjection:
    block: int
    vectors: np.ndarray  # block-local coordinates, orthonormal columns
    pinched_value: float  # eigenvalue of p psi p on this projection

    @property
    def rank(self) -> int:
        return self.vectors.shape[1]


@dataclass(frozen=True)
class AbelianRestriction:
    decomposition: TypeDecomposition
    minimal_projections: list[MinimalProjection] = field(repr=False)

    @property
    def a_n(self) -> int:
        return len(self.minimal_projections)

    @property
    def dims(self) -> np.ndarray:
        return np.array([q.rank for q in self.minimal_projections], dtype=np.int64)

    @property
    def block_of(self) -> list[int]:
        return [q.block for q in self.minimal_projections]

    @property
    def phi_kernel(self) -> bool:
        return any(b.eigenvalue == 0.0 for b in self.decomposition.blocks)

    def projection(self, i: int) -> np.ndarray:
        """Dense q_i in the computational basis."""
        dec = self.decomposition
        q = self.minimal_projections[i]
        idx = dec.blocks[q.block].indices
        z = np.zeros((dec.dim, dec.dim), dtype=complex)
        z[np.ix_(idx, idx)] = q.vectors @ dagger(q.vectors)
        return dec.from_eigenbasis(z)

    def phi_masses(self) -> np.ndarray:
        """Q_i = tr(phi^(x)n q_i); exact because q_i sits in an eigenspace."""
        lam = np.array([self.decomposition.blocks[q.block].eigenvalue for q in self.minimal_projections])
        return lam * self.dims


def build_abelian_restriction(psi, phi, n: int, decomp: TypeDecomposition | None = None) -> AbelianRestriction:
    psi = as_density(psi)
    decomp = decomp or build_type_decomposition(phi, n)
    minimal: list[MinimalProjection] = []
    for k, block in enumerate(pinched_blocks(decomp, psi)):
        w, v = np.linalg.eigh(block)
        w, v = w[::-1], v[:, ::-1]
        for idx in cluster_sorted(w, _pinched_close):
            minimal.append(MinimalProjection(k, v[:, idx], float(np.mean(w[idx]))))
    return AbelianRestriction(decomp, minimal)


def restrict_state(d, restriction: AbelianRestriction) -> np.ndarray:
    """(tr(D q_i))_i: the restricted density w.r.t. the unit-weight trace on B_n."""
    dec = restriction.decomposition
    y = dec.to_eigenbasis(np.asarray(d, dtype=complex))
    out = np.empty(restriction.a_n)
    for i, q in enumerate(restriction.minimal_projections):
        idx = dec.blocks[q.block].indices
        sub = y[np.ix_(idx, idx)]
        out[i] = float(np.einsum("ji,jk,ki->", q.vectors.conj(), sub, q.vectors).real)
    return out


def _restricted_product(psi: np.ndarray, restriction: AbelianRestriction) -> np.ndarray:
    dec = restriction.decomposition
    blocks = pinched_blocks(dec, psi)
    return np.array([
        float(np.einsum("ji,jk,ki->", q.vectors.conj(), blocks[q.block], q.vectors).real)
        for q in restriction.minimal_projections
    ])


def _clean(p: np.ndarray) -> np.ndarray:
    p = np.clip(p, 0.0, None)
    return p / p.sum()


def _clean_pair(p: np.ndarray, q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Normalize masses; rounding noise of p on phi's kernel is set to exact zero."""
    p = np.where((q == 0) & (p <= 1e-10), 0.0, p)
    return _clean(p), _clean(q)


@dataclass(frozen=True)
class HiaiPetzReport:
    n: int
    lhs: EntropyValue
    restricted: EntropyValue
    pinched_entropy: float
    state_entropy: float
    residual: float
    phi_kernel: bool = False

    @property
    def gap(self) -> float:
        return self.pinched_entropy - self.state_entropy

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lhs"] = self.lhs.to_dict()
        d["restricted"] = self.restricted.to_dict()
        return d


def hiai_petz_decomposition_check(psi, phi, n: int) -> HiaiPetzReport:
    """Evaluate the four terms of the exact decomposition independently."""
    psi, phi = as_density(psi), as_density(phi)
    restriction = build_abelian_restriction(psi, phi, n)
    psi_n = tensor_power(psi, n)

    lhs = relative_entropy_to_power(psi_n, phi, n)
    p, q = _clean_pair(restrict_state(psi_n, restriction), restriction.phi_masses())
    restricted = classical_kl(p, q)
    pinched = 0.0
    for block in pinched_blocks(restriction.decomposition, psi):
        w = np.linalg.eigvalsh(block)
        w = w[w > 1e-12]
        pinched -= float(np.sum(w * np.log(w)))
    state = von_neumann(psi_n)
    if lhs.finite and restricted.finite:
        residual = lhs.value - restricted.value - pinched + state
    else:
        residual = math.nan
    return HiaiPetzReport(n, lhs, restricted, pinched, state, residual, restriction.phi_kernel)


@dataclass(frozen=True)
class ClassicalReduction:
    """Reduced alphabet of B_l: P_i, Q_i and dimension weights w_i."""

    l: int
    P: np.ndarray
    Q: np.ndarray
    w: np.ndarray

    @property
    def size(self) -> int:
        return len(self.P)

    @property
    def D_M(self) -> EntropyValue:
        return classical_kl(self.P, self.Q)

    @property
    def h(self) -> float:
        return shannon(self.P)

    @property
    def E_l(self) -> float:
        return float(np.dot(self.P, np.log(self.w)))

    def to_dict(self) -> dict:
        return {
            "l": self.l,
            "a_l": self.size,
            "P": self.P.tolist(),
            "Q": self.Q.tolist(),
            "w": self.w.tolist(),
            "D_M": self.D_M.to_dict(),
            "h": self.h,
            "E_l": self.E_l,
        }


def classical_reduction(psi, phi, l: int) -> ClassicalReduction:
    psi = as_density(psi)
    restriction = build_abelian_restriction(psi, phi, l)
    p, q = _clean_pair(_restricted_product(psi, restriction), restriction.phi_masses())
    return ClassicalReduction(l, p, q, restriction.dims.astype(float))


def choose_block_length(psi, phi, eta: float, l_max: int) -> int | None:
    """Smallest l <= l_max with D_M(l)/l >= S(psi||phi) - eta, else None."""
    s = relative_entropy(psi, phi)
    if not s.finite:
        raise ValueError("relative entropy is infinite; block length is undefined")
    for l in range(1, l_max + 1):
        dm = classical_reduction(psi, phi, l).D_M
        # 1e-12 absorbs rounding when both sides vanish (psi = phi, eta = 0)
        if dm.finite and dm.value / l >= s.value - eta - 1e-12:
            return l
    return None


def restriction_convergence_curve(psi, phi, n_max: int) -> list[tuple[int, float]]:
    """(n, (1/n) S(psi^(n)|B_n, phi^(n)|B_n)) for n = 1..n_max."""
    return [(n, float(classical_reduction(psi, phi, n).D_M) / n) for n in range(1, n_max + 1)]


def supports_nested(psi, phi) -> bool:
    return support_leak(psi, phi) <= 1e-10
