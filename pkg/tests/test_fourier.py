import math
from fractions import Fraction

import numpy as np
import pytest

from euciso import catalog
from euciso.errors import IncompatibleShapes, IncompleteTable
from euciso.fourier import (FourierTable, PeriodicFunction, SummableFunction,
                            convolve, inner_product, inverse_transform,
                            plancherel_pairing, transform, translate)
from euciso.groups import NormalForm, build_quotient
from euciso.reps import quotient_irreps

from conftest import quotient, spec


def test_inner_product_delta_and_constant():
    q = quotient("pg", 3)
    d = PeriodicFunction.delta(q)
    assert inner_product(d, d) == pytest.approx(1 / q.order)
    one = PeriodicFunction.constant(q, 1.0)
    assert inner_product(one, one) == pytest.approx(1.0)


def test_inner_product_is_period_independent(rng):
    q = quotient("pg", 3)
    u = PeriodicFunction.random(q, (2, 2), rng)
    v = PeriodicFunction.random(q, (2, 2), rng)
    base = inner_product(u, v)
    lifted = inner_product(u.lift(6), v)
    assert abs(base - lifted) < 1e-12


def test_inner_product_shape_guard(rng):
    q = quotient("pg", 3)
    with pytest.raises(IncompatibleShapes):
        inner_product(PeriodicFunction.random(q, (1, 2), rng),
                      PeriodicFunction.random(q, (2, 1), rng))


def test_transform_of_constant_hits_only_the_trivial_class():
    q = quotient("pg", 3)
    t = transform(PeriodicFunction.constant(q, 1.0))
    reps = t.irreps()
    live = [i for i, m in t.entries.items() if np.abs(m).max() > 1e-10]
    assert len(live) == 1
    (i,) = live
    assert reps[i].dim == 1
    assert t.entries[i][0, 0] == pytest.approx(1.0)


def test_transform_of_delta_is_scaled_identity():
    q = quotient("pg", 3)
    t = transform(PeriodicFunction.delta(q))
    for i, rho in enumerate(t.irreps()):
        assert np.abs(t.entries[i] - np.eye(rho.dim) / q.order).max() < 1e-12


def test_round_trip_three_shapes(rng):
    for name, N in [("pg", 3), ("helix-C3", 2), ("twistE8", 2)]:
        q = quotient(name, N)
        for shape in [(1, 1), (2, 3), (3, 1)]:
            u = PeriodicFunction.random(q, shape, rng)
            assert u.max_abs_diff(inverse_transform(transform(u))) <= 1e-8


def test_incomplete_table_rejected():
    q = quotient("pg", 3)
    t = transform(PeriodicFunction.delta(q))
    del t.entries[0]
    with pytest.raises(IncompleteTable):
        inverse_transform(t)


def test_plancherel_random_pairs(rng):
    for name, N in [("pg", 3), ("screw-C4", 2), ("twistE8", 2)]:
        q = quotient(name, N)
        for _ in range(20):
            u = PeriodicFunction.random(q, (2, 2), rng)
            v = PeriodicFunction.random(q, (2, 2), rng)
            lhs = inner_product(u, v)
            rhs = plancherel_pairing(transform(u), transform(v))
            assert abs(lhs - rhs) <= 1e-8


def test_parseval_positivity(rng):
    q = quotient("pg", 3)
    u = PeriodicFunction.random(q, (2, 2), rng)
    t = transform(u)
    norm = plancherel_pairing(t, t).real
    assert norm == pytest.approx(inner_product(u, u).real)
    assert norm > 0
    zero = PeriodicFunction(q, (2, 2))
    assert plancherel_pairing(transform(zero), transform(zero)) == 0


def test_transform_shapes():
    q = quotient("pg", 3)
    u = PeriodicFunction.random(q, (2, 3), np.random.default_rng(0))
    t = transform(u)
    for i, rho in enumerate(t.irreps()):
        assert t.entries[i].shape == (2 * rho.dim, 3 * rho.dim)


def test_nesting_across_periods(rng):
    # a period-N function transformed at period 2N lives on lifted classes only
    s = spec("pg")
    q3, q6 = quotient("pg", 3), quotient("pg", 6)
    u = PeriodicFunction.random(q3, (1, 1), rng)
    lifted = u.lift(6)
    t6 = transform(lifted)
    block = [i for i in q6.elements
             if all(x % 3 == 0 for x in q6.nf(i).n)
             and q6.nf(i).f == s.f_identity and q6.nf(i).p == s.p_identity]
    from euciso.reps import trivial_on
    for i, rho in enumerate(t6.irreps()):
        if np.abs(t6.entries[i]).max() > 1e-8:
            assert trivial_on(rho, block)


def test_translation_identity_independent_sides(rng):
    q = quotient("pg", 3)
    u = PeriodicFunction.random(q, (2, 2), rng)
    for _ in range(5):
        g = int(rng.integers(q.order))
        shifted = translate(u, g)
        # direct check of the defining formula
        for h in list(q.elements)[::5]:
            assert np.abs(shifted[h] - u[q.mul(h, g)]).max() == 0
        lhs = transform(shifted)
        rhs = transform(u)
        for ri, rho in enumerate(lhs.irreps()):
            pred = rhs.entries[ri] @ np.kron(np.eye(2), rho.matrix(q.inv(g)))
            assert np.abs(lhs.entries[ri] - pred).max() <= 1e-8


def test_translate_identity_element(rng):
    q = quotient("pg", 3)
    u = PeriodicFunction.random(q, (2, 2), rng)
    assert translate(u, q.identity).max_abs_diff(u) == 0


def test_translate_moves_delta_support():
    q = quotient("pg", 3)
    d = PeriodicFunction.delta(q)
    g = 7
    moved = translate(d, g)
    support = [i for i in q.elements if np.abs(moved[i]).max() > 0]
    assert support == [q.inv(g)]


def test_convolution_unit_and_shift():
    q = quotient("pg", 3)
    v = PeriodicFunction.random(q, (2, 3), np.random.default_rng(5))
    unit = SummableFunction(q.spec, (2, 2))
    unit[NormalForm((0, 0), 0, 0)] = np.eye(2)
    assert convolve(unit, v).max_abs_diff(v) < 1e-14
    shift = SummableFunction(q.spec, (2, 2))
    shift[NormalForm((4, -3), 0, 1)] = np.eye(2)   # unbounded exponents allowed
    conv = convolve(shift, v)
    h = shift.project(q, NormalForm((4, -3), 0, 1))
    for g in q.elements:
        assert np.abs(conv[g] - v[q.mul(q.inv(h), g)]).max() < 1e-14


def test_convolution_transform_identity(rng):
    for name, N in [("pg", 3), ("twistE8", 2)]:
        q = quotient(name, N)
        u = SummableFunction.random(q.spec, (2, 2), terms=6, span=5, rng=rng)
        v = PeriodicFunction.random(q, (2, 3), rng)
        conv = convolve(u, v)
        lhs = transform(conv)
        rhs = transform(v)
        for ri, rho in enumerate(lhs.irreps()):
            pred = u.transform_at(rho, q) @ rhs.entries[ri]
            assert np.abs(lhs.entries[ri] - pred).max() <= 1e-8


def test_convolution_shape_guard(rng):
    q = quotient("pg", 3)
    u = SummableFunction.random(q.spec, (2, 3), terms=2, rng=rng)
    v = PeriodicFunction.random(q, (2, 3), rng)
    with pytest.raises(IncompatibleShapes):
        convolve(u, v)


def test_classical_dft_limit(rng):
    # the quotient transform of the plain lattice is the 2-D DFT
    q = quotient("p1", 4)
    u = PeriodicFunction.random(q, (1, 1), rng)
    grid = np.zeros((4, 4), dtype=complex)
    for i in q.elements:
        n = q.nf(i).n
        grid[n[0], n[1]] = u[i][0, 0]
    dft = np.fft.fft2(grid) / 16
    t = transform(u)
    for i, rho in enumerate(t.irreps()):
        # read the wave vector off the generator phases
        phases = [rho.matrix(q.index[NormalForm(tuple(int(r == j) for r in range(2)),
                                                0, 0)])[0, 0]
                  for j in range(2)]
        ks = [round(np.angle(ph) / (2 * np.pi) * 4) % 4 for ph in phases]
        assert abs(t.entries[i][0, 0] - dft[(-ks[0]) % 4, (-ks[1]) % 4]) <= 1e-10
