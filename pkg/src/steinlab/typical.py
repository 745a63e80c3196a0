"""Relative-entropy, entropy and dimension typical sets on a reduced alphabet.

Every membership statistic is additive over symbols, so membership depends
only on the type of a sequence.  All masses are computed by enumerating
types (never sequences) and accumulated in log space.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .operators import BudgetExceededError
from .type_classes import MAX_TYPES, compositions, log_multinomial, type_count

LOG_SLACK = 1e-12


class RelativeTypicalityUndefined(ValueError):
    """A symbol has Q_i = 0 < P_i, so D_M is infinite."""


@dataclass(frozen=True)
class ReducedAlphabet:
    P: np.ndarray
    Q: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        for name in ("P", "Q", "w"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        if not (self.P.shape == self.Q.shape == self.w.shape):
            raise ValueError("P, Q and w must have equal length")
        if np.any((self.Q <= 0) & (self.P > 0)):
            raise RelativeTypicalityUndefined("relative typicality undefined: Q_i = 0 < P_i")

    @classmethod
    def from_reduction(cls, reduction) -> ReducedAlphabet:
        return cls(reduction.P, reduction.Q, reduction.w)

    @property
    def size(self) -> int:
        return len(self.P)

    def _support(self):
        on = self.P > 0
        return self.P[on], self.Q[on], self.w[on]

    @property
    def D_M(self) -> float:
        p, q, _ = self._support()
        return float(np.sum(p * np.log(p / q)))

    @property
    def h(self) -> float:
        p, _, _ = self._support()
        return float(-np.sum(p * np.log(p)))

    @property
    def E_l(self) -> float:
        p, _, w = self._support()
        return float(np.sum(p * np.log(w)))


@dataclass(frozen=True)
class TypicalReport:
    n: int
    delta: float
    p_c: float
    q_c: float
    p_f: float
    p_l: float
    p_cfl: float
    bound_q_c: float
    log_q_c: float
    log_bound_q_c: float
    bound_per_outcome: float
    min_floor_margin: float  # min over C n F of log Q(w) + n(D_M + h + 2 delta)

    CSV_FIELDS = ("n", "delta", "p_c", "q_c", "p_f", "p_l", "p_cfl", "bound_q_c")

    @property
    def q_bound_holds(self) -> bool:
        return self.log_q_c < self.log_bound_q_c + LOG_SLACK

    @property
    def floor_holds(self) -> bool:
        return self.min_floor_margin > 0

    def csv_row(self) -> tuple:
        return tuple(getattr(self, f) for f in self.CSV_FIELDS)

    def to_dict(self) -> dict:
        return asdict(self)


def _log_sum(x: np.ndarray) -> float:
    """log sum exp with compensated summation; -inf for an empty set."""
    if x.size == 0:
        return -math.inf
    m = float(np.max(x))
    if m == -math.inf:
        return -math.inf
    return m + math.log(math.fsum(np.exp(np.sort(x - m))))


def type_table(alphabet: ReducedAlphabet, n: int, max_types: int = MAX_TYPES):
    """Type counts over the P-support with per-type log P- and Q-masses."""
    p, q, w = alphabet._support()
    count = type_count(n, len(p))
    if count > max_types:
        raise BudgetExceededError(f"{count} types exceed cap {max_types}")
    k = compositions(n, len(p))
    log_mult = log_multinomial(k)
    log_p_seq = k @ np.log(p)
    log_q_seq = k @ np.log(q)
    return k, log_mult, log_p_seq, log_q_seq, k @ np.log(w)


def typical_report(alphabet: ReducedAlphabet, n: int, delta: float) -> TypicalReport:
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    dm, h, el = alphabet.D_M, alphabet.h, alphabet.E_l
    _, log_mult, log_p, log_q, log_w = type_table(alphabet, n)

    ratio = log_p - log_q
    in_c = (ratio > n * (dm - delta)) & (ratio < n * (dm + delta))
    in_f = (log_p > -n * (h + delta)) & (log_p < -n * (h - delta))
    in_l = log_w < n * (el + delta)

    mass_p = log_mult + log_p
    mass_q = log_mult + log_q
    log_q_c = _log_sum(mass_q[in_c])
    log_bound = -n * (dm - delta)
    cf = in_c & in_f
    floor = log_q[cf] + n * (dm + h + 2 * delta)
    return TypicalReport(
        n=n,
        delta=delta,
        p_c=math.exp(_log_sum(mass_p[in_c])),
        q_c=math.exp(log_q_c),
        p_f=math.exp(_log_sum(mass_p[in_f])),
        p_l=math.exp(_log_sum(mass_p[in_l])),
        p_cfl=math.exp(_log_sum(mass_p[cf & in_l])),
        bound_q_c=math.exp(log_bound),
        log_q_c=log_q_c,
        log_bound_q_c=log_bound,
        bound_per_outcome=math.exp(-n * (dm + h + 2 * delta)),
        min_floor_margin=float(np.min(floor)) if floor.size else math.inf,
    )


def lln_convergence(alphabet: ReducedAlphabet, delta: float, n_list) -> list[TypicalReport]:
    return [typical_report(alphabet, n, delta) for n in sorted(n_list)]


def first_reaching(reports: list[TypicalReport], target: float) -> int | None:
    """Smallest recorded n with P(C n F n L) >= target."""
    for r in reports:
        if r.p_cfl >= target:
            return r.n
    return None
