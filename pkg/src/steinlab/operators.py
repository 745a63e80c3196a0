"""Dense Hermitian linear algebra on finite-dimensional Hilbert spaces.

Operators are plain complex ``numpy`` arrays. Validation helpers
(:func:`as_hermitian`, :func:`as_density`) enforce the invariants once at
the boundary; everything downstream treats arrays as immutable values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITIAN_ATOL = 1e-10
TRACE_ATOL = 1e-9
NEGATIVE_EIG_ATOL = 1e-10
SUPPORT_CUTOFF = 1e-12
CLUSTER_RTOL = 1e-9
MAX_DIM = 2**16


class DimensionMismatchError(ValueError):
    pass


class NotHermitianError(ValueError):
    pass


class InvalidStateError(ValueError):
    pass


class BudgetExceededError(RuntimeError):
    """Raised when a tensor power or enumeration exceeds its size cap."""


SeedLike = int | np.random.SeedSequence | np.random.Generator | None


def rng_from(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def derive_seed(root: int, *indices: int) -> np.random.SeedSequence:
    """Child seed for task ``indices`` under ``root``; independent of scheduling."""
    return np.random.SeedSequence(entropy=root, spawn_key=tuple(int(i) for i in indices))


def max_abs(x) -> float:
    x = np.asarray(x)
    return float(np.max(np.abs(x))) if x.size else 0.0


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def maximally_mixed(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex) / dim


def pure_state(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=complex).reshape(-1)
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())


def _square(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {a.shape}")
    return a


def as_hermitian(a, atol: float = HERMITIAN_ATOL) -> np.ndarray:
    """Validate Hermiticity entrywise and return the exactly symmetrized matrix."""
    a = _square(np.asarray(a, dtype=complex))
    err = max_abs(a - dagger(a))
    if err > atol:
        raise NotHermitianError(f"matrix is not Hermitian (max |A - A^dag| = {err:.3e})")
    return (a + dagger(a)) / 2


def as_density(a) -> np.ndarray:
    """Validate a density operator, clipping eigenvalues in [-1e-10, 0).

    Anything more negative, or a trace off by more than 1e-9, raises
    :class:`InvalidStateError`.
    """
    try:
        a = as_hermitian(a)
    except NotHermitianError as exc:
        raise InvalidStateError(f"state is not Hermitian: {exc}") from None
    tr = float(np.trace(a).real)
    if abs(tr - 1.0) > TRACE_ATOL:
        raise InvalidStateError(f"state trace is {tr!r}, expected 1 within {TRACE_ATOL}")
    w, v = np.linalg.eigh(a)
    if w[0] < -NEGATIVE_EIG_ATOL:
        raise InvalidStateError(f"state has negative eigenvalue {w[0]:.3e}")
    if w[0] < 0:
        w = np.clip(w, 0.0, None)
        w = w / w.sum()
        a = (v * w) @ dagger(v)
        a = (a + dagger(a)) / 2
    return a


def is_projection(q, atol: float = 1e-9) -> bool:
    q = np.asarray(q)
    return (
        max_abs(q - dagger(q)) <= atol
        and max_abs(q @ q - q) <= atol
        and abs(np.trace(q).real - round(np.trace(q).real)) <= 1e-6
    )


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(_square(a), _square(b))


def tensor_power(rho: np.ndarray, n: int, max_dim: int = MAX_DIM) -> np.ndarray:
    rho = _square(rho)
    if n < 1:
        raise ValueError(f"tensor power needs n >= 1, got {n}")
    d = rho.shape[0]
    if d**n > max_dim:
        raise BudgetExceededError(f"dimension {d}^{n} = {d**n} exceeds cap {max_dim}")
    out = rho
    for _ in range(n - 1):
        out = np.kron(out, rho)
    return out


def conjugate_legs(x: np.ndarray, v: np.ndarray, d: int, n: int) -> np.ndarray:
    """Compute V^(x)n X (V^(x)n)^dag without forming V^(x)n."""
    x = np.asarray(x, dtype=complex)
    if x.shape != (d**n, d**n):
        raise DimensionMismatchError(f"operator of shape {x.shape} is not {d}^{n} square")
    t = x.reshape((d,) * (2 * n))
    vc = v.conj()
    for leg in range(n):
        t = np.moveaxis(np.tensordot(v, t, axes=([1], [leg])), 0, leg)
        t = np.moveaxis(np.tensordot(vc, t, axes=([1], [n + leg])), 0, n + leg)
    return t.reshape(d**n, d**n)


def partial_trace(x: np.ndarray, dims: tuple[int, int], traced: int = 1) -> np.ndarray:
    """Trace out subsystem ``traced`` (0 or 1) of an operator on H_0 (x) H_1."""
    x = _square(x)
    d0, d1 = dims
    if x.shape[0] != d0 * d1:
        raise DimensionMismatchError(f"operator of size {x.shape[0]} does not match dims {dims}")
    t = x.reshape(d0, d1, d0, d1)
    if traced == 1:
        return np.einsum("ajbj->ab", t)
    if traced == 0:
        return np.einsum("iaib->ab", t)
    raise ValueError("traced must be 0 or 1")


def cluster_sorted(values: np.ndarray, close) -> list[np.ndarray]:
    """Group consecutive entries of an already sorted 1-D array.

    ``close(a, b)`` decides whether ``b`` joins the cluster opened by ``a``.
    Returns index arrays, one per cluster.
    """
    groups: list[np.ndarray] = []
    start = 0
    for k in range(1, len(values) + 1):
        if k == len(values) or not close(values[start], values[k]):
            groups.append(np.arange(start, k))
            start = k
    return groups


def spectral_close(a: float, b: float) -> bool:
    return abs(a - b) <= CLUSTER_RTOL * max(1.0, abs(a))


@dataclass(frozen=True)
class SpectralDecomposition:
    """Distinct eigenvalues (nonincreasing) with their eigenprojections."""

    eigenvalues: np.ndarray
    projectors: list[np.ndarray]
    multiplicities: list[int]
    eigenvectors: list[np.ndarray]

    def reconstruct(self) -> np.ndarray:
        return sum(lam * p for lam, p in zip(self.eigenvalues, self.projectors))


def eigendecompose(h) -> SpectralDecomposition:
    h = as_hermitian(h)
    w, v = np.linalg.eigh(h)
    w, v = w[::-1], v[:, ::-1]
    values, projectors, mults, vecs = [], [], [], []
    for idx in cluster_sorted(w, spectral_close):
        vs = v[:, idx]
        values.append(float(np.mean(w[idx])))
        projectors.append(vs @ dagger(vs))
        mults.append(len(idx))
        vecs.append(vs)
    return SpectralDecomposition(np.array(values), projectors, mults, vecs)


@dataclass(frozen=True)
class SupportLog:
    """Natural log of a PSD operator on its support; zero on the kernel."""

    log: np.ndarray
    support: np.ndarray
    kernel_dim: int


def operator_log(d: np.ndarray) -> SupportLog:
    d = as_hermitian(d)
    w, v = np.linalg.eigh(d)
    keep = w > SUPPORT_CUTOFF
    vs = v[:, keep]
    log = (vs * np.log(w[keep])) @ dagger(vs)
    return SupportLog(log, vs @ dagger(vs), int((~keep).sum()))


def support_projection(d: np.ndarray) -> np.ndarray:
    return operator_log(d).support


def support_leak(rho: np.ndarray, sigma: np.ndarray) -> float:
    """tr((1 - supp sigma) rho); at most 1e-10 means supp rho <= supp sigma."""
    supp = support_projection(sigma)
    return float(np.trace(rho).real - np.trace(supp @ rho).real)


def random_density(dim: int, rank: int | None = None, seed: SeedLike = None) -> np.ndarray:
    rank = dim if rank is None else rank
    if not 1 <= rank <= dim:
        raise ValueError(f"rank must lie in [1, {dim}], got {rank}")
    rng = rng_from(seed)
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ dagger(g)
    rho = rho / np.trace(rho).real
    return (rho + dagger(rho)) / 2


def orthonormalize(m: np.ndarray) -> np.ndarray:
    """QR with the diagonal of R made real positive (unique, deterministic)."""
    q, r = np.linalg.qr(m)
    diag = np.diagonal(r)
    phases = np.where(np.abs(diag) > 0, diag / np.where(np.abs(diag) > 0, np.abs(diag), 1), 1)
    return q * phases


def random_unitary(dim: int, seed: SeedLike = None) -> np.ndarray:
    rng = rng_from(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return orthonormalize(g)
