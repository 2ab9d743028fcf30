import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from euciso import catalog
from euciso import isometry as iso
from euciso.errors import BadModulus, NotAMember
from euciso.groups import (GroupSpec, NormalForm, automorphism_count,
                           build_quotient, find_m0, is_power_normal,
                           normal_form, power_section, reconstruct, tf_slice,
                           validate_spec)
from euciso.isometry import Isometry, rotation2

from conftest import quotient, spec


# -- oracle: independent membership and normality test -------------------------

def oracle_section_power_set(s, m, span):
    """All m-th section powers with exponents in a window, as isometries."""
    out = []
    for v in itertools.product(range(-span, span + 1), repeat=s.d2):
        out.append(iso.power(power_section(s, v), m))
    return out


def oracle_is_power_normal(s, m, span=2):
    """Brute-force closure and normality over an exponent window."""
    pool = oracle_section_power_set(s, m, 3 * span)

    def member(x):
        return any(iso.approx_equal(x, y, s.tol) for y in pool)

    window = list(itertools.product(range(-span, span + 1), repeat=s.d2))
    powers = {v: iso.power(power_section(s, v), m) for v in window}
    for a in window:
        for b in window:
            if not member(iso.compose(powers[a], powers[b])):
                return False
    for g in s.generators():
        gi = iso.inverse(g)
        for a in window:
            if not member(iso.compose(iso.compose(g, powers[a]), gi)):
                return False
    return True


def test_validate_catalog_specs():
    for name in catalog.names():
        assert validate_spec(catalog.get(name)) == []


def test_validation_catches_broken_kernel():
    # helix-C3 with one kernel element removed is no longer closed
    h = spec("helix-C3")
    broken = GroupSpec("broken", h.d1, h.d2, h.f_elements[:2], h.t_lifts,
                       h.p_reps, tol=h.tol)
    codes = {v.code for v in validate_spec(broken)}
    assert "f-closed" in codes


def test_validation_catches_bad_point_part():
    h = spec("pm")
    shear = Isometry(np.zeros((0, 0)), ((1, 1), (0, 1)), (0, 0))
    broken = GroupSpec("broken", 0, 2, h.f_elements, h.t_lifts,
                       h.p_reps + [shear])
    codes = {v.code for v in validate_spec(broken)}
    assert "p-order" in codes or "p-group" in codes


def test_normal_form_identity():
    s = spec("pg")
    nf = normal_form(s, iso.identity_isometry(0, 2))
    assert nf == NormalForm((0, 0), 0, 0)


def test_normal_form_glide_squared():
    s = spec("pg")
    glide = s.p_reps[1]
    nf = normal_form(s, iso.compose(glide, glide))
    assert nf == NormalForm((1, 0), 0, 0)


def test_normal_form_twist_commutator_witness():
    # twisted lifts t1' = g1*phi, t2' = g2 have commutator phi^2
    s = spec("twistE8")
    t1p = iso.compose(power_section(s, (1, 0)), s.f_iso(1))
    t2p = power_section(s, (0, 1))
    comm = iso.compose_all([t1p, t2p, iso.inverse(t1p), iso.inverse(t2p)])
    nf = normal_form(s, comm)
    assert nf == NormalForm((0, 0), 2, s.p_identity)
    want = iso.block_diag(np.eye(4), rotation2(math.pi))
    assert np.abs(s.f_elements[2] - want).max() < 1e-12


def test_normal_form_m4_commutator_witness():
    s = spec("twistE8-m4")
    g1, g2 = power_section(s, (1, 0)), power_section(s, (0, 1))
    comm = iso.compose_all([g1, g2, iso.inverse(g1), iso.inverse(g2)])
    assert normal_form(s, comm) == NormalForm((0, 0), 1, 0)


def test_normal_form_rejects_outsiders():
    s = spec("pg")
    with pytest.raises(NotAMember):
        normal_form(s, iso.translation_isometry(0, (Fraction(1, 3), 0)))
    rot = Isometry(np.zeros((0, 0)), ((0, -1), (1, 0)), (0, 0))
    with pytest.raises(NotAMember):
        normal_form(s, rot)
    helix = spec("helix-C3")
    alien = Isometry(rotation2(0.123), ((1,),), (0,))
    with pytest.raises(NotAMember):
        normal_form(helix, alien)


def test_power_section_examples():
    p1 = spec("p1")
    assert power_section(p1, (0, 0)).tau == (Fraction(0), Fraction(0))
    assert power_section(p1, (2, 3)).tau == (Fraction(2), Fraction(3))
    helix = spec("helix-C3")
    t5 = power_section(helix, (5,))
    assert t5.tau == (Fraction(5),)
    assert np.abs(t5.q - rotation2(5.0)).max() < 1e-12


def test_is_power_normal_examples():
    assert is_power_normal(spec("p1"), 1)
    assert not is_power_normal(spec("twistE8"), 1)
    assert is_power_normal(spec("twistE8"), 2)
    assert not is_power_normal(spec("twistE8-m4"), 1)
    assert not is_power_normal(spec("twistE8-m4"), 2)
    assert is_power_normal(spec("twistE8-m4"), 4)


def test_is_power_normal_matches_oracle():
    cases = [("p1", [1, 2]), ("pg", [1, 2]), ("helix-C3", [1, 2]),
             ("screw-C4", [1, 3]), ("twistE8", [1, 2, 3, 4]),
             ("twistE8-m4", [1, 2, 4])]
    for name, ms in cases:
        s = spec(name)
        for m in ms:
            assert is_power_normal(s, m) == oracle_is_power_normal(s, m), (name, m)


def test_find_m0_matches_divisor_scan_oracle():
    for name in catalog.names():
        s = spec(name)
        report = find_m0(s)
        bound = s.f_order ** 2 * automorphism_count(s)
        oracle = next(m for m in range(1, bound + 1)
                      if bound % m == 0 and oracle_is_power_normal(s, m))
        assert report.m0 == oracle, name
        assert report.m0 == catalog.CATALOG[name].expected["m0"]
        assert bound % report.m0 == 0
        assert report.m0_bound == bound


def test_good_exponents_form_a_ladder():
    for name in ("pg", "twistE8", "twistE8-m4"):
        s = spec(name)
        m0 = find_m0(s).m0
        for k in (1, 2, 3):
            assert is_power_normal(s, k * m0), (name, k)


def test_automorphism_counts():
    assert automorphism_count(spec("p1")) == 1          # trivial group
    assert automorphism_count(spec("screw-C4")) == 1    # Z2
    assert automorphism_count(spec("helix-C3")) == 2    # Z3
    assert automorphism_count(spec("twistE8")) == 2     # Z4


def test_quotient_orders_match_formula():
    for name in catalog.names():
        s = spec(name)
        for N, want in catalog.CATALOG[name].expected["orders"].items():
            q = build_quotient(s, N)
            assert q.order == want
            assert q.order == N ** s.d2 * s.f_order * s.rot_order


def test_quotient_rejects_bad_modulus():
    with pytest.raises(BadModulus):
        build_quotient(spec("twistE8"), 3)
    with pytest.raises(BadModulus):
        build_quotient(spec("twistE8-m4"), 2)


def test_section_bijectivity():
    for name, N in [("pg", 3), ("twistE8", 2), ("helix-C3", 4)]:
        s = spec(name)
        q = build_quotient(s, N)
        images = {q.reduce(normal_form(s, power_section(s, v)))
                  for v in itertools.product(range(N), repeat=s.d2)}
        assert len(images) == N ** s.d2


def test_mod_reduction_soundness(rng):
    # t(n + N e_j) and t(n) t(e_j)^N agree in the quotient
    for name, N in [("pg", 3), ("twistE8", 2), ("twistE8-m4", 4)]:
        s = spec(name)
        q = build_quotient(s, N)
        for _ in range(12):
            n = tuple(int(rng.integers(-N, 2 * N)) for _ in range(s.d2))
            j = int(rng.integers(s.d2))
            shifted = list(n)
            shifted[j] += N
            lhs = q.reduce(normal_form(s, power_section(s, shifted)))
            ej = [int(i == j) for i in range(s.d2)]
            rhs = q.mul(q.reduce(normal_form(s, power_section(s, n))),
                        q.reduce(normal_form(s, iso.power(power_section(s, ej), N))))
            assert lhs == rhs


def test_quotient_multiplication_matches_isometries(rng):
    for name, N in [("pg", 3), ("helix-C3", 2), ("twistE8", 2)]:
        s = spec(name)
        q = build_quotient(s, N)
        table = q.mult_table()
        for _ in range(60):
            i, j = int(rng.integers(q.order)), int(rng.integers(q.order))
            direct = q.reduce(normal_form(s, iso.compose(q.iso(i), q.iso(j))))
            assert table[i, j] == direct
        # identity and inverses
        assert (table[q.identity] == np.arange(q.order)).all()
        for _ in range(20):
            i = int(rng.integers(q.order))
            assert q.mul(i, q.inv(i)) == q.identity


def test_reconstruct_round_trip(rng):
    s = spec("twistE8")
    q = build_quotient(s, 2)
    for _ in range(25):
        i = int(rng.integers(q.order))
        assert normal_form(s, reconstruct(s, q.nf(i))) == q.nf(i)


def test_tf_slice_drops_point_group():
    s = tf_slice(spec("helix-C3"))
    assert s.rot_order == 1
    assert validate_spec(s) == []
    assert build_quotient(s, 2).order == 6
