from fractions import Fraction

import numpy as np
import pytest

from euciso import catalog
from euciso import isometry as iso
from euciso.dual import (dual_point_matrix, enumerate_dual, k_grid,
                         little_group, null_set_member, rep_set, wave_orbits)
from euciso.groups import build_quotient, find_m0
from euciso.reps import equivalent, induce, lift_representation, scale_by_character, chi

from conftest import quotient, spec


def brute_orbits(points, ops):
    """Oracle: orbit partition by repeated application of (D, s) pairs."""
    remaining = set(points)
    orbits = []
    while remaining:
        start = remaining.pop()
        orbit = {start}
        frontier = [start]
        while frontier:
            cur = frontier.pop()
            for d, s in ops:
                nxt = tuple((a + b) % 1 for a, b in
                            zip(iso.pmat_vec(d, cur), s))
                if nxt not in orbit:
                    orbit.add(nxt)
                    frontier.append(nxt)
        remaining -= orbit
        orbits.append(orbit)
    return orbits


def test_rep_set_sizes():
    assert len(rep_set(spec("p1")).classes) == 1
    assert len(rep_set(spec("pg")).classes) == 1
    rs = rep_set(spec("helix-C3"))
    assert len(rs.classes) == 2
    # the two nontrivial kernel characters were merged by the flip
    assert len(rs.provenance) == 1
    assert rs.provenance[0]["p_index"] == 1


def test_rep_set_members_pairwise_inequivalent_under_twist():
    s = spec("twistE8")
    rs = rep_set(s)
    q = rs.quotient
    from euciso.reps import dual_action, p_rep_element
    shifts = [chi(s, k) for k in
              [tuple(Fraction(a, rs.m0) for a in v)
               for v in [(0, 0), (1, 0), (0, 1), (1, 1)]]]
    for i, a in enumerate(rs.classes):
        for j, b in enumerate(rs.classes):
            if i >= j:
                continue
            for p in range(s.rot_order):
                moved = dual_action(q, p_rep_element(q, p), a)
                for wave in shifts:
                    assert not equivalent(moved, scale_by_character(wave, b))


def test_little_group_p1():
    s = spec("p1")
    rs = rep_set(s)
    lg = little_group(s, rs, 0)
    assert set(lg.pairs) == {0}
    assert lg.pairs[0] == [(Fraction(0), Fraction(0))]


def test_little_group_pg_trivial_class():
    s = spec("pg")
    rs = rep_set(s)
    lg = little_group(s, rs, 0)
    assert set(lg.pairs) == {0, 1}
    assert all(shifts == [(Fraction(0), Fraction(0))]
               for shifts in lg.pairs.values())
    assert lg.duals[1] == ((1, 0), (0, -1))


def test_little_group_translation_sandwich_twist():
    s = spec("twistE8")
    rs = rep_set(s)
    assert rs.m0 == 2
    for idx in range(len(rs.classes)):
        lg = little_group(s, rs, idx)
        for shift in lg.translation_shifts():
            assert all((x * rs.m0).denominator == 1 for x in shift)


def test_null_set_examples():
    s = spec("pg")
    assert null_set_member(s, (Fraction(1, 3), Fraction(0)))
    assert not null_set_member(s, (Fraction(1, 3), Fraction(1, 3)))
    assert null_set_member(s, (0, 0))
    # trivial point group: the quantifier is empty
    for name in ("p1", "screw-C4", "helix-C3-tf"):
        assert not null_set_member(spec(name), (Fraction(1, 7),) * spec(name).d2)
    # float variant agrees with the exact one near the grid
    assert null_set_member(s, (1 / 3, 0.0))
    assert not null_set_member(s, (1 / 3, 1 / 3))


def test_null_set_shift_relation(rng):
    # if D k - k' lies in L*/m0 the flags agree
    for name in ("pg", "helix-C3", "twistE8"):
        s = spec(name)
        m0 = find_m0(s).m0
        duals = [dual_point_matrix(p.p) for p in s.p_reps]
        for _ in range(300):
            k = tuple(Fraction(int(rng.integers(-10, 11)), int(rng.integers(1, 9)))
                      for _ in range(s.d2))
            d = duals[int(rng.integers(len(duals)))]
            shift = tuple(Fraction(int(rng.integers(-4, 5)), m0)
                          for _ in range(s.d2))
            k2 = tuple(a - b for a, b in zip(iso.pmat_vec(d, k), shift))
            assert null_set_member(s, k) == null_set_member(s, k2)


def test_wave_orbits_p1():
    s = spec("p1")
    rs = rep_set(s)
    labels = wave_orbits(s, rs, 0, 4)
    assert len(labels) == 16
    assert all(l.orbit_size == 1 for l in labels)
    assert not any(l.in_null_set for l in labels)


def test_wave_orbits_pg_against_oracle():
    s = spec("pg")
    rs = rep_set(s)
    labels = wave_orbits(s, rs, 0, 3)
    assert len(labels) == 6
    singles = [l for l in labels if l.orbit_size == 1]
    pairs = [l for l in labels if l.orbit_size == 2]
    assert len(singles) == 3 and len(pairs) == 3
    assert all(l.in_null_set for l in singles)
    assert all(l.k[1] == 0 for l in singles)
    assert not any(l.in_null_set for l in pairs)
    # brute-force oracle over the grid
    lg = little_group(s, rs, 0)
    oracle = brute_orbits(k_grid(s, 3), lg.operations())
    assert sorted(len(o) for o in oracle) == sorted(l.orbit_size for l in labels)
    assert {min(o) for o in oracle} == {l.k for l in labels}


def test_orbit_sizes_partition_the_grid():
    for name, N in [("pg", 3), ("pm", 2), ("helix-C3", 3), ("twistE8", 2)]:
        s = spec(name)
        rs = rep_set(s)
        for idx in range(len(rs.classes)):
            labels = wave_orbits(s, rs, idx, N)
            assert sum(l.orbit_size for l in labels) == N ** s.d2


def test_enumerate_dual_pg():
    atlas = enumerate_dual(spec("pg"), 3)
    assert len(atlas.labels) == 6
    irr = [r for r in atlas.labels if r.irreducible]
    red = [r for r in atlas.labels if not r.irreducible]
    assert len(irr) == 3 and all(r.induced_dim == 2 for r in irr)
    assert len(red) == 3
    for r in red:
        assert r.label.in_null_set
        assert sorted(m for m in r.decomposition.values()) == [1, 1]
    assert atlas.census_dims == [1, 1, 1, 1, 1, 1, 2, 2, 2]
    assert all(atlas.checks.values())


def test_enumerate_dual_p1():
    atlas = enumerate_dual(spec("p1"), 4)
    assert len(atlas.labels) == 16
    assert all(r.irreducible and r.induced_dim == 1 for r in atlas.labels)
    assert all(atlas.checks.values())


def test_enumerate_dual_helix():
    s = spec("helix-C3")
    atlas = enumerate_dual(s, 1)
    rs = atlas.rep_set
    want = sum(len(wave_orbits(s, rs, i, 1)) for i in range(len(rs.classes)))
    assert len(atlas.labels) == want
    assert sum(d * d for d in atlas.census_dims) == 6
    assert all(atlas.checks.values())
    # a label inside the null set may still induce irreducibly
    assert any(r.label.in_null_set and r.irreducible for r in atlas.labels)


def test_enumerate_dual_twist():
    for N in (2, 4):
        atlas = enumerate_dual(spec("twistE8"), N)
        assert all(atlas.checks.values()), (N, atlas.checks)
        q = quotient("twistE8", N)
        assert sum(d * d for d in atlas.census_dims) == q.order


def test_labels_give_inequivalent_induced_reps():
    # bijectivity at finite level, rechecked with actual characters
    s = spec("pg")
    rs = rep_set(s)
    q = quotient("pg", 3)
    reps = []
    for idx, rho in enumerate(rs.classes):
        lifted = lift_representation(rho, q)
        for label in wave_orbits(s, rs, idx, 3):
            reps.append(induce(q, scale_by_character(chi(s, label.k), lifted),
                               check=False))
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            assert not equivalent(reps[i], reps[j])


def test_atlas_surjectivity_onto_induced_duals(rng):
    # any induced rep of a random wave character lands on an emitted label
    s = spec("pg")
    N = 3
    atlas = enumerate_dual(s, N)
    q = quotient("pg", N)
    decomps = [tuple(sorted(r.decomposition.items())) for r in atlas.labels]
    from euciso.reps import quotient_irreps, multiplicity
    irr = quotient_irreps(q)
    for _ in range(6):
        k = tuple(Fraction(int(rng.integers(0, N)), N) for _ in range(2))
        ind = induce(q, chi(s, k).on(q), check=False)
        key = tuple(sorted((j, multiplicity(ind, sigma))
                           for j, sigma in enumerate(irr)
                           if multiplicity(ind, sigma)))
        assert key in decomps
