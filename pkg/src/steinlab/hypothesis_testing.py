"""Two-sided bounds on the optimal type-II error exponent beta_{eps,n}.

The minimum over projections is bracketed by

* a lower bound: the optimum over all tests 0 <= T <= 1 (quantum
  Neyman-Pearson), certified by its convex dual value, and
* an upper bound: the phi-mass of an explicit feasible projection obtained by
  rounding the Neyman-Pearson eigenbasis and improving it by swaps.

Tensor powers are handled through a *pencil*: a list of blocks
``(A_k, B_k, multiplicity_k)`` such that psi^(x)n and phi^(x)n are jointly
block diagonal, ``psi^(x)n = (+)_k A_k (x) 1_{m_k}`` and likewise for phi.
Three pencils are available: dense (one block), type classes (commuting
pairs, 1x1 blocks) and Schur-Weyl sectors (qubits).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .entropy import relative_entropy
from .operators import (
    MAX_DIM,
    BudgetExceededError,
    DimensionMismatchError,
    as_density,
    cluster_sorted,
    dagger,
    max_abs,
    partial_trace,
    spectral_close,
    support_leak,
    support_projection,
)
from .type_classes import MAX_TYPES, compositions, log_multinomial, type_count

FEAS_ATOL = 1e-12
THRESHOLD_RTOL = 1e-9
MAX_BISECTIONS = 200
LOG_T_RANGE = 700.0
COMMUTE_ATOL = 1e-12
MAX_ORACLE_ALPHABET = 24


def _check_eps(eps: float) -> None:
    if not 0.0 < eps < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {eps!r}")


def safe_log(x: float) -> float:
    return math.log(x) if x > 0 else -math.inf


# --------------------------------------------------------------------------
# pencils

# Dense generalized eigensolves beyond this size take minutes and tens of GB.
DENSE_PENCIL_MAX_DIM = 2**11


@dataclass(frozen=True)
class PencilBlock:
    a: np.ndarray
    b: np.ndarray
    multiplicity: float


def dense_pencil(psi, phi) -> list[PencilBlock]:
    psi, phi = np.asarray(psi, dtype=complex), np.asarray(phi, dtype=complex)
    if psi.shape != phi.shape:
        raise DimensionMismatchError(f"shapes {psi.shape} and {phi.shape} differ")
    return [PencilBlock(psi, phi, 1.0)]


def commutes(psi, phi) -> bool:
    return max_abs(psi @ phi - phi @ psi) <= COMMUTE_ATOL


def common_eigenbasis(psi: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Orthonormal basis diagonalizing two commuting Hermitian matrices."""
    w, v = np.linalg.eigh(phi)
    cols = []
    for idx in cluster_sorted(w, spectral_close):
        vs = v[:, idx]
        _, u = np.linalg.eigh(dagger(vs) @ psi @ vs)
        cols.append(vs @ u)
    return np.hstack(cols)


def commuting_pencil(p, q, n: int, max_types: int = MAX_TYPES) -> list[PencilBlock]:
    """Type-class blocks of p^(x)n versus q^(x)n for diagonal distributions."""
    p, q = np.asarray(p, dtype=float), np.asarray(q, dtype=float)
    d = len(p)
    if type_count(n, d) > max_types:
        raise BudgetExceededError(f"{type_count(n, d)} types exceed cap {max_types}")
    counts = compositions(n, d)
    with np.errstate(divide="ignore"):
        log_a = counts @ np.log(p) if np.all(p > 0) else _masked_log_products(counts, p)
        log_b = counts @ np.log(q) if np.all(q > 0) else _masked_log_products(counts, q)
    mult = np.exp(log_multinomial(counts))
    return [
        PencilBlock(np.array([[math.exp(la)]]), np.array([[math.exp(lb)]]), float(m))
        for la, lb, m in zip(log_a, log_b, mult)
    ]


def _masked_log_products(counts: np.ndarray, p: np.ndarray) -> np.ndarray:
    logs = np.where(p > 0, np.log(np.where(p > 0, p, 1.0)), 0.0)
    out = counts @ logs
    dead = (counts[:, p <= 0] > 0).any(axis=1)
    return np.where(dead, -np.inf, out)


def symmetric_power(a: np.ndarray, m: int) -> np.ndarray:
    """Action of a^(x)m on the symmetric subspace of (C^2)^(x)m, Dicke basis."""
    a = np.asarray(a, dtype=complex)
    out = np.zeros((m + 1, m + 1), dtype=complex)
    for r in range(m + 1):
        for s in range(m + 1):
            total = 0j
            for k in range(max(0, r + s - m), min(r, s) + 1):
                total += (
                    math.comb(r, k)
                    * math.comb(m - r, s - k)
                    * a[1, 1] ** k
                    * a[1, 0] ** (r - k)
                    * a[0, 1] ** (s - k)
                    * a[0, 0] ** (m - r - s + k)
                )
            out[r, s] = math.sqrt(math.comb(m, r) / math.comb(m, s)) * total
    return out


def schur_weyl_pencil(psi, phi, n: int) -> list[PencilBlock]:
    """Qubit sectors: Sym^(n-2k)(.) times det(.)^k with multiplicity C(n,k)-C(n,k-1)."""
    psi, phi = np.asarray(psi, dtype=complex), np.asarray(phi, dtype=complex)
    if psi.shape != (2, 2) or phi.shape != (2, 2):
        raise DimensionMismatchError("Schur-Weyl pencil is implemented for qubits only")
    det_psi = float(np.linalg.det(psi).real)
    det_phi = float(np.linalg.det(phi).real)
    blocks = []
    for k in range(n // 2 + 1):
        m = n - 2 * k
        mult = math.comb(n, k) - (math.comb(n, k - 1) if k else 0)
        a = det_psi**k * symmetric_power(psi, m)
        b = det_phi**k * symmetric_power(phi, m)
        blocks.append(PencilBlock((a + dagger(a)) / 2, (b + dagger(b)) / 2, float(mult)))
    return blocks


def check_pencil_budget(psi, phi, n: int, max_dim: int = MAX_DIM) -> None:
    """Raise BudgetExceededError before any work if the n-fold pencil is too large.

    Generic pairs need a dense generalized eigensolve, so their cap is the
    smaller of ``max_dim`` and :data:`DENSE_PENCIL_MAX_DIM`.
    """
    psi, phi = np.asarray(psi, dtype=complex), np.asarray(phi, dtype=complex)
    d = psi.shape[0]
    if commutes(psi, phi):
        if type_count(n, d) > MAX_TYPES:
            raise BudgetExceededError(f"{type_count(n, d)} types exceed cap {MAX_TYPES}")
        return
    if d == 2:
        return
    cap = min(max_dim, DENSE_PENCIL_MAX_DIM)
    if d**n > cap:
        raise BudgetExceededError(f"dense pencil dimension {d}^{n} = {d**n} exceeds cap {cap}")


def product_pencil(psi, phi, n: int, max_dim: int = MAX_DIM) -> list[PencilBlock]:
    """Pencil for (psi^(x)n, phi^(x)n), choosing the cheapest exact structure."""
    psi, phi = as_density(psi), as_density(phi)
    if psi.shape != phi.shape:
        raise DimensionMismatchError(f"shapes {psi.shape} and {phi.shape} differ")
    d = psi.shape[0]
    if commutes(psi, phi):
        v = common_eigenbasis(psi, phi)
        p = np.clip(np.diagonal(dagger(v) @ psi @ v).real, 0.0, None)
        q = np.clip(np.diagonal(dagger(v) @ phi @ v).real, 0.0, None)
        return commuting_pencil(p / p.sum(), q / q.sum(), n)
    if d == 2:
        return schur_weyl_pencil(psi, phi, n)
    check_pencil_budget(psi, phi, n, max_dim)
    big_psi, big_phi = psi, phi
    for _ in range(n - 1):
        big_psi, big_phi = np.kron(big_psi, psi), np.kron(big_phi, phi)
    return dense_pencil(big_psi, big_phi)


# --------------------------------------------------------------------------
# Neyman-Pearson relaxation


@dataclass
class _Group:
    """Pencil blocks of equal size stacked for batched eigensolves."""

    a: np.ndarray  # (k, s, s)
    b: np.ndarray
    mult: np.ndarray  # (k,)
    members: list[int]


def _group(pencil: list[PencilBlock]) -> list[_Group]:
    by_size: dict[int, list[int]] = {}
    for i, blk in enumerate(pencil):
        by_size.setdefault(blk.a.shape[0], []).append(i)
    return [
        _Group(
            np.stack([pencil[i].a for i in idx]),
            np.stack([pencil[i].b for i in idx]),
            np.array([pencil[i].multiplicity for i in idx], dtype=float),
            idx,
        )
        for _, idx in sorted(by_size.items())
    ]


@dataclass
class _Eig:
    w: np.ndarray  # (k, s)
    v: np.ndarray  # (k, s, s)
    a: np.ndarray  # psi-mass of each eigenvector
    b: np.ndarray  # phi-mass
    mult: np.ndarray  # (k, s) broadcast multiplicities


def _eig(group: _Group, t: float) -> _Eig:
    w, v = np.linalg.eigh(group.a - t * group.b)
    a = np.einsum("kji,kjl,kli->ki", v.conj(), group.a, v).real
    b = np.einsum("kji,kjl,kli->ki", v.conj(), group.b, v).real
    return _Eig(w, v, a, b, np.broadcast_to(group.mult[:, None], w.shape))


def _split(eigs: list[_Eig], t: float):
    """Masses on the strictly positive part and on the threshold eigenspace."""
    a_pos = b_pos = a_eq = b_eq = 0.0
    for e in eigs:
        scale = e.a + t * e.b
        eq = np.abs(e.w) <= THRESHOLD_RTOL * scale
        pos = (e.w > 0) & ~eq
        a_pos += float(np.sum(e.mult[pos] * e.a[pos]))
        b_pos += float(np.sum(e.mult[pos] * e.b[pos]))
        a_eq += float(np.sum(e.mult[eq] * e.a[eq]))
        b_eq += float(np.sum(e.mult[eq] * e.b[eq]))
    return a_pos, b_pos, a_eq, b_eq


def _positive_masses(eigs: list[_Eig]) -> tuple[float, float]:
    a = b = 0.0
    for e in eigs:
        pos = e.w > 0
        a += float(np.sum(e.mult[pos] * e.a[pos]))
        b += float(np.sum(e.mult[pos] * e.b[pos]))
    return a, b


@dataclass(frozen=True)
class NeymanPearsonResult:
    """Optimal test T = P_>(t) + x P_=(t) for the relaxed problem.

    ``beta`` is tr(phi T); ``dual_bound`` is a certified lower bound on the
    relaxed optimum (weak duality), equal to ``beta`` up to rounding.
    ``test`` is only materialized for dense inputs.
    """

    threshold: float
    x: float
    type1: float
    beta: float
    dual_bound: float
    test: np.ndarray | None = field(default=None, repr=False)
    iterations: int = 0

    @property
    def log_beta(self) -> float:
        return safe_log(self.beta)

    @property
    def beta_is_zero(self) -> bool:
        return self.beta <= 0.0


@dataclass(frozen=True)
class _Solved:
    result: NeymanPearsonResult
    eigs: list[_Eig]
    groups: list[_Group]


def _solve_pencil(pencil: list[PencilBlock], eps: float, kernel_mass: float = 0.0) -> _Solved:
    _check_eps(eps)
    target = 1.0 - eps
    groups = _group(pencil)
    if kernel_mass >= target:
        x = target / kernel_mass
        res = NeymanPearsonResult(math.inf, x, eps, 0.0, 0.0)
        return _Solved(res, [], groups)

    def f(log_t: float) -> tuple[float, list[_Eig]]:
        eigs = [_eig(g, math.exp(log_t)) for g in groups]
        return _positive_masses(eigs)[0], eigs

    lo, hi = -LOG_T_RANGE, LOG_T_RANGE
    f_hi, eigs = f(hi)
    if f_hi >= target:
        # phi is (numerically) blind to enough psi-mass: scale down P_>(t_max)
        t = math.exp(hi)
        a_pos, b_pos = _positive_masses(eigs)
        x = target / a_pos
        res = NeymanPearsonResult(t, x, eps, x * b_pos, max(0.0, b_pos + (target - a_pos) / t))
        return _Solved(res, eigs, groups)

    iterations = 0
    while iterations < MAX_BISECTIONS:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        fm, _ = f(mid)
        if fm >= target:
            lo = mid
        else:
            hi = mid
        iterations += 1

    t = math.exp(hi)
    _, eigs = f(hi)
    a_pos, b_pos, a_eq, b_eq = _split(eigs, t)
    x = min(1.0, max(0.0, (target - a_pos) / a_eq)) if a_eq > 0 else 0.0
    beta = b_pos + x * b_eq
    type1 = 1.0 - (a_pos + x * a_eq)

    # weak duality: g(mu) = mu (1-eps) - tr((mu psi - phi)_+) <= beta*, mu = 1/t
    dual = 0.0
    for log_t in (lo, hi):
        ap, bp = _positive_masses(f(log_t)[1])
        dual = max(dual, bp + (target - ap) / math.exp(log_t))
    dual = min(dual, beta)
    res = NeymanPearsonResult(t, x, type1, beta, dual, None, iterations)
    return _Solved(res, eigs, groups)


def relaxed_beta(psi, phi, eps: float) -> NeymanPearsonResult:
    """Minimize tr(phi T) over 0 <= T <= 1 with tr(psi T) >= 1 - eps."""
    psi, phi = as_density(psi), as_density(phi)
    if psi.shape != phi.shape:
        raise DimensionMismatchError(f"shapes {psi.shape} and {phi.shape} differ")
    leak = max(0.0, support_leak(psi, phi))
    solved = _solve_pencil(dense_pencil(psi, phi), eps, kernel_mass=leak if leak > 1e-10 else 0.0)
    res = solved.result
    if math.isinf(res.threshold):
        test = res.x * (np.eye(psi.shape[0]) - support_projection(phi))
    else:
        e = solved.eigs[0]
        t = res.threshold
        scale = e.a[0] + t * e.b[0]
        eq = np.abs(e.w[0]) <= THRESHOLD_RTOL * scale
        pos = (e.w[0] > 0) & ~eq
        v = e.v[0]
        test = v[:, pos] @ dagger(v[:, pos]) + res.x * (v[:, eq] @ dagger(v[:, eq]))
    return NeymanPearsonResult(
        res.threshold, res.x, res.type1, res.beta, res.dual_bound, test, res.iterations
    )


def relaxed_beta_pencil(pencil: list[PencilBlock], eps: float, kernel_mass: float = 0.0) -> NeymanPearsonResult:
    return _solve_pencil(pencil, eps, kernel_mass).result


# --------------------------------------------------------------------------
# projection rounding


@dataclass(frozen=True)
class ProjectionBound:
    """A feasible projection: ``count`` copies chosen from each candidate group."""

    value: float
    psi_mass: float
    chosen: np.ndarray
    a: np.ndarray = field(repr=False)
    b: np.ndarray = field(repr=False)
    vectors: list[np.ndarray] | None = field(default=None, repr=False)
    swaps: int = 0

    @property
    def log_value(self) -> float:
        return safe_log(self.value)

    @property
    def rank(self) -> float:
        return float(self.chosen.sum())


def _candidates(solved: _Solved, keep_vectors: bool):
    """Eigenvectors of A - tB per block; threshold ties rotated to diagonalize A."""
    t = solved.result.threshold
    a_list, b_list, m_list, vec_list = [], [], [], []
    for g, e in zip(solved.groups, solved.eigs):
        for k in range(g.a.shape[0]):
            w, v = e.w[k], e.v[k]
            scale = float(np.max(np.abs(w))) if w.size else 1.0
            tol = 1e-12 * max(scale, 1e-300)
            cols = []
            for idx in cluster_sorted(w, lambda x, y: abs(x - y) <= tol):
                vs = v[:, idx]
                if len(idx) > 1:
                    _, u = np.linalg.eigh(dagger(vs) @ g.a[k] @ vs)
                    vs = vs @ u
                cols.append(vs)
            vs = np.hstack(cols)
            a_list.append(np.einsum("ji,jl,li->i", vs.conj(), g.a[k], vs).real)
            b_list.append(np.einsum("ji,jl,li->i", vs.conj(), g.b[k], vs).real)
            m_list.append(np.full(vs.shape[1], g.mult[k]))
            if keep_vectors:
                vec_list.extend(vs[:, j] for j in range(vs.shape[1]))
    a = np.clip(np.concatenate(a_list), 0.0, None)
    b = np.clip(np.concatenate(b_list), 0.0, None)
    return a, b, np.concatenate(m_list), (vec_list if keep_vectors else None)


def round_to_projection(a: np.ndarray, b: np.ndarray, count: np.ndarray, target: float, max_swaps: int | None = None):
    """Smallest likelihood-ordered prefix reaching ``target``, then swap descent.

    Returns ``(chosen, swaps)`` with ``chosen[i] <= count[i]`` copies per group.
    """
    a, b, count = np.asarray(a, float), np.asarray(b, float), np.asarray(count, float)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(b > 0, a / np.where(b > 0, b, 1.0), np.where(a > 0, np.inf, 0.0))
    order = np.lexsort((-a, -ratio))
    chosen = np.zeros_like(count)
    cum = 0.0
    for i in order:
        if cum >= target - FEAS_ATOL:
            break
        if a[i] <= 0:
            continue
        need = target - cum
        k = min(count[i], math.ceil(need / a[i] - 1e-9))
        k = max(k, 1.0)
        chosen[i] = k
        cum += k * a[i]
    if cum < target - FEAS_ATOL:
        chosen = count.copy()

    if max_swaps is None:
        max_swaps = int(min(count.sum() ** 2, 10**6))
    swaps = 0
    while swaps < max_swaps:
        slack = float(np.dot(chosen, a)) - target + FEAS_ATOL
        best_gain, move = 0.0, None
        # drops
        with np.errstate(divide="ignore", invalid="ignore"):
            k_drop = np.where(a > 0, np.floor(slack / np.where(a > 0, a, 1.0)), np.inf)
        k_drop = np.minimum(k_drop, chosen)
        gain = k_drop * b
        i = int(np.argmax(gain))
        if gain[i] > best_gain and k_drop[i] >= 1:
            best_gain, move = float(gain[i]), (i, None, k_drop[i])
        # swaps i -> j
        avail = count - chosen
        da = a[:, None] - a[None, :]
        db = b[:, None] - b[None, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            k_feas = np.where(da > 0, np.floor(slack / np.where(da > 0, da, 1.0)), np.inf)
        k = np.minimum(np.minimum(chosen[:, None], avail[None, :]), k_feas)
        k = np.where((db > 0) & (k >= 1), k, 0.0)
        gain = k * db
        flat = int(np.argmax(gain))
        i, j = divmod(flat, len(a))
        if gain[i, j] > best_gain:
            best_gain, move = float(gain[i, j]), (i, j, k[i, j])
        if move is None or best_gain <= 0:
            break
        i, j, k = move
        chosen[i] -= k
        if j is not None:
            chosen[j] += k
        swaps += 1
    return chosen, swaps


def _projection_from_solved(solved: _Solved, eps: float, keep_vectors: bool) -> ProjectionBound:
    target = 1.0 - eps
    a, b, count, vecs = _candidates(solved, keep_vectors)
    chosen, swaps = round_to_projection(a, b, count, target)
    return ProjectionBound(float(np.dot(chosen, b)), float(np.dot(chosen, a)), chosen, a, b, vecs, swaps)


def projection_beta_upper(psi, phi, eps: float) -> ProjectionBound:
    """A feasible projection q with psi(q) >= 1 - eps; its phi-mass bounds beta above."""
    psi, phi = as_density(psi), as_density(phi)
    solved = _solve_pencil(dense_pencil(psi, phi), eps)
    return _projection_from_solved(solved, eps, keep_vectors=True)


def projection_matrix(bound: ProjectionBound) -> np.ndarray:
    """Dense projection for a bound computed on a dense (multiplicity-1) pencil."""
    cols = [v for v, c in zip(bound.vectors, bound.chosen) if c >= 1]
    if not cols:
        return np.zeros((len(bound.vectors[0]),) * 2, dtype=complex)
    m = np.stack(cols, axis=1)
    return m @ dagger(m)


@dataclass(frozen=True)
class BetaBounds:
    lower_log: float
    upper_log: float
    lower: NeymanPearsonResult = field(repr=False)
    upper: ProjectionBound = field(repr=False)
    feasible_projection: np.ndarray | None = field(default=None, repr=False)


def beta_bounds(psi, phi, eps: float) -> BetaBounds:
    np_res = relaxed_beta(psi, phi, eps)
    up = projection_beta_upper(psi, phi, eps)
    lower = min(safe_log(np_res.dual_bound), up.log_value)  # see stein_point
    return BetaBounds(lower, up.log_value, np_res, up, projection_matrix(up))


# --------------------------------------------------------------------------
# classical oracle


def _fractional_fill(p: np.ndarray, q: np.ndarray, need: float) -> float:
    """Least q-mass buying ``need`` p-mass from ratio-sorted items, fractions allowed."""
    total = 0.0
    for pi, qi in zip(p, q):
        if need <= FEAS_ATOL:
            return total
        take = min(1.0, need / pi) if pi > 0 else 0.0
        total += take * qi
        need -= take * pi
    return total if need <= FEAS_ATOL else math.inf


def exact_beta_commuting(p, q, eps: float) -> float:
    """log min{ q(A) : p(A) >= 1 - eps } over subsets A, by branch and bound."""
    _check_eps(eps)
    p, q = np.asarray(p, dtype=float), np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise DimensionMismatchError("alphabet sizes differ")
    if len(p) > MAX_ORACLE_ALPHABET:
        raise BudgetExceededError(f"alphabet {len(p)} exceeds oracle cap {MAX_ORACLE_ALPHABET}")
    target = 1.0 - eps
    keep = p > 0
    p, q = p[keep], q[keep]
    with np.errstate(divide="ignore"):
        ratio = np.where(q > 0, p / np.where(q > 0, q, 1.0), np.inf)
    order = np.argsort(-ratio, kind="stable")
    p, q = p[order], q[order]
    # tail suffix sums for feasibility pruning
    tail_p = np.concatenate([np.cumsum(p[::-1])[::-1], [0.0]])

    best = float(q[: int(np.searchsorted(np.cumsum(p), target - FEAS_ATOL)) + 1].sum())
    best = min(best, float(q.sum()))

    def search(i: int, mass: float, cost: float) -> None:
        nonlocal best
        if mass >= target - FEAS_ATOL:
            best = min(best, cost)
            return
        if i == len(p) or mass + tail_p[i] < target - FEAS_ATOL:
            return
        if cost + _fractional_fill(p[i:], q[i:], target - mass) >= best:
            return
        search(i + 1, mass + p[i], cost + q[i])
        search(i + 1, mass, cost)

    search(0, 0.0, 0.0)
    return safe_log(best)


def water_filling_beta(p, q, eps: float) -> float:
    """Relaxed classical optimum: ratio-sorted greedy with one fractional outcome."""
    p, q = np.asarray(p, dtype=float), np.asarray(q, dtype=float)
    with np.errstate(divide="ignore"):
        ratio = np.where(q > 0, p / np.where(q > 0, q, 1.0), np.where(p > 0, np.inf, 0.0))
    order = np.argsort(-ratio, kind="stable")
    return _fractional_fill(p[order], q[order], 1.0 - eps)


# --------------------------------------------------------------------------
# Stein curve and subalgebra comparison


@dataclass(frozen=True)
class SteinPoint:
    n: int
    lower_rate: float
    upper_rate: float
    reference: float

    def as_row(self) -> tuple:
        return (self.n, self.lower_rate, self.upper_rate, self.reference)


def stein_point(psi, phi, eps: float, n: int) -> SteinPoint:
    psi, phi = as_density(psi), as_density(phi)
    s = relative_entropy(psi, phi)
    if not s.finite:
        raise ValueError("support of psi is not contained in support of phi")
    pencil = product_pencil(psi, phi, n)
    solved = _solve_pencil(pencil, eps)
    up = _projection_from_solved(solved, eps, keep_vectors=False)
    # relaxed <= projection optimum, so the min is still a certified lower bound;
    # it removes ulp-level inversions when the relaxed optimum is a projection
    lower = min(safe_log(solved.result.dual_bound), up.log_value) / n
    upper = up.log_value / n
    return SteinPoint(n, lower, upper, 0.0 - s.value)


def stein_curve(psi, phi, eps: float, n_max: int) -> list[SteinPoint]:
    return [stein_point(psi, phi, eps, n) for n in range(1, n_max + 1)]


def subalgebra_beta_check(psi_t, phi_t, dims: tuple[int, int], eps: float) -> tuple[float, float]:
    """(relaxed beta over tests A (x) 1, relaxed beta over all tests)."""
    psi_t, phi_t = as_density(psi_t), as_density(phi_t)
    if psi_t.shape[0] != dims[0] * dims[1]:
        raise DimensionMismatchError(f"state of size {psi_t.shape[0]} does not match dims {dims}")
    restricted = relaxed_beta(partial_trace(psi_t, dims), partial_trace(phi_t, dims), eps)
    full = relaxed_beta(psi_t, phi_t, eps)
    return restricted.beta, full.beta


def brute_force_beta_commuting(p, q, eps: float) -> float:
    """Exhaustive subset minimum (test oracle, alphabet <= 16)."""
    target = 1.0 - eps
    best = math.inf
    n = len(p)
    for r in range(n + 1):
        for sub in itertools.combinations(range(n), r):
            idx = list(sub)
            if float(np.sum(np.asarray(p)[idx])) >= target - FEAS_ATOL:
                best = min(best, float(np.sum(np.asarray(q)[idx])))
    return safe_log(best)
