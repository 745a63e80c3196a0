from __future__ import annotations

import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import seeds
from steinlab.abelian import classical_reduction
from steinlab.operators import BudgetExceededError, random_density
from steinlab.typical import (
    ReducedAlphabet,
    RelativeTypicalityUndefined,
    first_reaching,
    lln_convergence,
    type_table,
    typical_report,
)

HAND = ReducedAlphabet([0.7, 0.3], [0.5, 0.5], [1.0, 1.0])


def sequence_masses(alphabet: ReducedAlphabet, n: int, delta: float) -> dict:
    """Oracle: walk every sequence on the P-support."""
    on = alphabet.P > 0
    p, q, w = alphabet.P[on], alphabet.Q[on], alphabet.w[on]
    dm = float(np.sum(p * np.log(p / q)))
    h = float(-np.sum(p * np.log(p)))
    el = float(np.sum(p * np.log(w)))
    out = dict.fromkeys(("p_c", "q_c", "p_f", "p_l", "p_cfl"), 0.0)
    for seq in itertools.product(range(len(p)), repeat=n):
        lp = sum(math.log(p[i]) for i in seq)
        lq = sum(math.log(q[i]) for i in seq)
        lw = sum(math.log(w[i]) for i in seq)
        c = n * (dm - delta) < lp - lq < n * (dm + delta)
        f = -n * (h + delta) < lp < -n * (h - delta)
        l = lw < n * (el + delta)
        pp, qq = math.exp(lp), math.exp(lq)
        out["p_c"] += pp * c
        out["q_c"] += qq * c
        out["p_f"] += pp * f
        out["p_l"] += pp * l
        out["p_cfl"] += pp * (c and f and l)
    return out


def test_alphabet_quantities():
    assert HAND.D_M == pytest.approx(0.7 * math.log(1.4) + 0.3 * math.log(0.6))
    assert HAND.h == pytest.approx(0.6108643020548935)
    assert HAND.E_l == 0.0
    with pytest.raises(RelativeTypicalityUndefined):
        ReducedAlphabet([0.5, 0.5], [1.0, 0.0], [1, 1])
    with pytest.raises(ValueError):
        ReducedAlphabet([1.0], [0.5, 0.5], [1, 1])


def test_p_equals_q():
    a = ReducedAlphabet([0.2, 0.3, 0.5], [0.2, 0.3, 0.5], [1, 2, 1])
    for n in (1, 5, 20):
        r = typical_report(a, n, 0.05)
        assert r.p_c == pytest.approx(1.0, abs=1e-12)
        assert r.p_cfl == pytest.approx(min(r.p_f, r.p_cfl), abs=1e-12)


def test_single_symbol():
    a = ReducedAlphabet([1.0], [1.0], [1.0])
    r = typical_report(a, 7, 0.01)
    assert (r.p_c, r.p_f, r.p_l, r.p_cfl) == (1.0, 1.0, 1.0, 1.0)


def test_binomial_tail_oracle():
    n, delta = 50, 0.05
    r = typical_report(HAND, n, delta)
    dm = HAND.D_M
    p_c = q_c = 0.0
    for k in range(n + 1):
        ratio = k * math.log(1.4) + (n - k) * math.log(0.6)
        if n * (dm - delta) < ratio < n * (dm + delta):
            p_c += math.comb(n, k) * 0.7**k * 0.3 ** (n - k)
            q_c += math.comb(n, k) * 0.5**n
    assert r.p_c == pytest.approx(p_c, abs=1e-12)
    assert r.q_c == pytest.approx(q_c, abs=1e-15)


@pytest.mark.parametrize(
    "alphabet",
    [
        HAND,
        ReducedAlphabet([0.5, 0.3, 0.2], [0.2, 0.3, 0.5], [1, 2, 3]),
        ReducedAlphabet([0.6, 0.4, 0.0], [0.3, 0.3, 0.4], [2, 1, 1]),
    ],
)
def test_matches_sequence_enumeration(alphabet):
    for n in range(1, 11):
        for delta in (0.05, 0.2):
            r = typical_report(alphabet, n, delta)
            oracle = sequence_masses(alphabet, n, delta)
            for key, value in oracle.items():
                assert getattr(r, key) == pytest.approx(value, abs=1e-12), (n, delta, key)


@given(seeds, st.integers(2, 4), st.floats(0.01, 0.3))
def test_exact_bounds(seed, size, delta):
    rng = np.random.default_rng(seed)
    a = ReducedAlphabet(rng.dirichlet(np.ones(size)), rng.dirichlet(np.ones(size)), rng.integers(1, 4, size))
    for n in (1, 3, 10, 40):
        r = typical_report(a, n, delta)
        assert r.q_bound_holds
        assert r.floor_holds
        for x in (r.p_c, r.q_c, r.p_f, r.p_l, r.p_cfl):
            assert 0.0 <= x <= 1.0 + 1e-12
        assert r.p_cfl <= min(r.p_c, r.p_f, r.p_l) + 1e-12


def test_no_underflow_at_large_n():
    r = typical_report(HAND, 10_000, 0.05)
    assert r.p_c > 0.99
    assert math.isfinite(r.log_q_c) and r.log_q_c < r.log_bound_q_c


def test_budget():
    a = ReducedAlphabet(np.full(8, 1 / 8), np.full(8, 1 / 8), np.ones(8))
    with pytest.raises(BudgetExceededError):
        type_table(a, 200)


def test_hand_alphabet_pinned_first_n():
    reports = lln_convergence(HAND, 0.05, range(1, 501))
    assert [r.n for r in reports] == list(range(1, 501))
    assert first_reaching(reports, 0.9) == 156
    assert all(r.q_bound_holds for r in reports)


def test_from_reduction():
    psi, phi = random_density(2, 2, 3), random_density(2, 2, 4)
    red = classical_reduction(psi, phi, 2)
    a = ReducedAlphabet.from_reduction(red)
    assert a.size == red.size
    assert a.D_M == pytest.approx(red.D_M.value, abs=1e-12)
    assert a.E_l == pytest.approx(red.E_l, abs=1e-12)


def test_csv_row_fields():
    r = typical_report(HAND, 10, 0.05)
    assert len(r.csv_row()) == 8
    assert r.csv_row()[0] == 10
    assert set(r.to_dict()) >= set(r.CSV_FIELDS)
