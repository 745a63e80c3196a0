"""Type-class decomposition of product density operators and the pinching map.

Block projectors are stored as index sets over the product eigenbasis of the
single-site reference state, never as dense d^n x d^n matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .entropy import von_neumann
from .operators import (
    MAX_DIM,
    SUPPORT_CUTOFF,
    BudgetExceededError,
    DimensionMismatchError,
    as_density,
    conjugate_legs,
    dagger,
    tensor_power,
)

MAX_TYPES = 10**7
# Scale-aware tolerance for eigenvalue products, which span many decades.
PRODUCT_RTOL = 1e-9


def type_count(n: int, d: int) -> int:
    return math.comb(n + d - 1, d - 1)


def compositions(n: int, d: int) -> np.ndarray:
    """All (n_1..n_d) >= 0 with sum n, as rows in ascending lexicographic order."""
    if d == 1:
        return np.array([[n]], dtype=np.int64)
    rows = []
    for first in range(n + 1):
        rest = compositions(n - first, d - 1)
        rows.append(np.hstack([np.full((len(rest), 1), first, dtype=np.int64), rest]))
    return np.vstack(rows)


def enumerate_types(n: int, d: int, max_types: int = MAX_TYPES) -> list[tuple[int, ...]]:
    if n < 1 or d < 1:
        raise ValueError(f"need n >= 1 and d >= 1, got n={n}, d={d}")
    count = type_count(n, d)
    if count > max_types:
        raise BudgetExceededError(f"{count} types exceed cap {max_types}")
    return [tuple(int(c) for c in row) for row in compositions(n, d)]


def log_multinomial(counts: np.ndarray) -> np.ndarray:
    from scipy.special import gammaln

    counts = np.atleast_2d(counts)
    n = counts.sum(axis=1)
    return gammaln(n + 1) - gammaln(counts + 1).sum(axis=1)


def _products_close(a: float, b: float) -> bool:
    return abs(a - b) <= PRODUCT_RTOL * max(abs(a), abs(b))


@dataclass(frozen=True)
class TypeBlock:
    types: tuple[tuple[int, ...], ...]
    eigenvalue: float
    indices: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class TypeDecomposition:
    """Eigenspaces of phi^(x)n grouped by type, in phi's product eigenbasis.

    ``basis`` holds the single-site eigenvectors (columns, eigenvalues
    nonincreasing); product index ``i_1 ... i_n`` is the base-d number with
    ``i_1`` most significant, matching ``np.kron`` ordering.
    """

    n: int
    basis: np.ndarray
    single_site_eigenvalues: np.ndarray
    blocks: list[TypeBlock] = field(repr=False)

    @property
    def d(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.d**self.n

    def to_eigenbasis(self, x: np.ndarray) -> np.ndarray:
        """W^dag X W with W = basis^(x)n, applied leg by leg."""
        return conjugate_legs(x, dagger(self.basis), self.d, self.n)

    def from_eigenbasis(self, y: np.ndarray) -> np.ndarray:
        return conjugate_legs(y, self.basis, self.d, self.n)

    def block_projector(self, k: int) -> np.ndarray:
        """Dense projector of block k in the computational basis (tests only)."""
        z = np.zeros((self.dim, self.dim), dtype=complex)
        idx = self.blocks[k].indices
        z[idx, idx] = 1.0
        return self.from_eigenbasis(z)


def single_site_spectrum(phi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    w, v = np.linalg.eigh(phi)
    w, v = w[::-1], v[:, ::-1]
    return np.where(w > SUPPORT_CUTOFF, w, 0.0), v


def build_type_decomposition(phi, n: int, max_dim: int = MAX_DIM) -> TypeDecomposition:
    phi = as_density(phi)
    d = phi.shape[0]
    if d**n > max_dim:
        raise BudgetExceededError(f"dimension {d}^{n} = {d**n} exceeds cap {max_dim}")
    lam, basis = single_site_spectrum(phi)

    digits = np.indices((d,) * n).reshape(n, -1).T
    counts = np.stack([(digits == k).sum(axis=1) for k in range(d)], axis=1)
    by_type: dict[tuple[int, ...], list[int]] = {}
    for idx, row in enumerate(map(tuple, counts.tolist())):
        by_type.setdefault(row, []).append(idx)

    raw = []
    for t, idx in by_type.items():
        value = float(np.prod(lam ** np.array(t)))
        raw.append((value, t, np.array(idx, dtype=np.int64)))
    raw.sort(key=lambda r: (-r[0], r[1]))

    blocks: list[TypeBlock] = []
    group = [raw[0]]
    for item in raw[1:] + [None]:
        if item is not None and _products_close(group[0][0], item[0]):
            group.append(item)
            continue
        types = tuple(sorted(g[1] for g in group))
        idx = np.sort(np.concatenate([g[2] for g in group]))
        value = float(np.mean([g[0] for g in group]))
        blocks.append(TypeBlock(types, value, idx))
        group = [item]
    return TypeDecomposition(n, basis, lam, blocks)


def pinch(decomp: TypeDecomposition, x: np.ndarray) -> np.ndarray:
    """Sum over blocks of p X p."""
    y = decomp.to_eigenbasis(x)
    z = np.zeros_like(y)
    for block in decomp.blocks:
        ix = np.ix_(block.indices, block.indices)
        z[ix] = y[ix]
    return decomp.from_eigenbasis(z)


def pinched_blocks(decomp: TypeDecomposition, psi: np.ndarray) -> list[np.ndarray]:
    """Diagonal blocks p psi^(x)n p, each in the block's product eigenbasis."""
    local = dagger(decomp.basis) @ psi @ decomp.basis
    big = tensor_power(local, decomp.n)
    return [big[np.ix_(b.indices, b.indices)] for b in decomp.blocks]


def pinching_gap(psi, phi, n: int, decomp: TypeDecomposition | None = None) -> float:
    """S(E_n(psi^(x)n)) - S(psi^(x)n)."""
    psi = as_density(psi)
    decomp = decomp or build_type_decomposition(phi, n)
    pinched = 0.0
    for block in pinched_blocks(decomp, psi):
        w = np.linalg.eigvalsh(block)
        w = w[w > SUPPORT_CUTOFF]
        pinched -= float(np.sum(w * np.log(w)))
    return pinched - von_neumann(tensor_power(psi, n))
