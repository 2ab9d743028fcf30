"""Cross-module invariant suite run by the `verify` command.

Each check re-derives one contract on the given group at desk scale and
reports pass/fail with a short detail string.  The first failure names
the violated invariant; the command exits nonzero if any check fails.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import isometry as iso
from .dual import dual_point_matrix, enumerate_dual, null_set_member
from .errors import EucisoError
from .fourier import (PeriodicFunction, SummableFunction, convolve,
                      inner_product, inverse_transform, plancherel_pairing,
                      transform, translate)
from .groups import (GroupSpec, build_quotient, find_m0, is_power_normal,
                     normal_form, power_section, validate_spec)
from .reps import char_inner, quotient_irreps
from .splitting import cocycle, split_quotient, verify_certificate


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class VerifyReport:
    spec_name: str
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def first_failure(self) -> CheckResult | None:
        for c in self.checks:
            if not c.passed:
                return c
        return None


def run_suite(spec: GroupSpec, seed: int = 0) -> VerifyReport:
    checks: list[CheckResult] = []
    rng = np.random.default_rng(seed)

    violations = validate_spec(spec)
    checks.append(CheckResult(
        "spec-valid", not violations,
        "; ".join(f"{v.code}: {v.message}" for v in violations[:3])))
    if violations:
        return VerifyReport(spec.name, checks)

    report = find_m0(spec)
    m0 = report.m0
    checks.append(CheckResult("m0-in-ladder",
                              is_power_normal(spec, m0) and is_power_normal(spec, 2 * m0),
                              f"m0 = {m0}"))

    # order formula and section bijectivity
    ok_orders, ok_section = True, True
    for N in (m0, 2 * m0):
        q = build_quotient(spec, N)
        if q.order != N ** spec.d2 * spec.f_order * spec.rot_order:
            ok_orders = False
        seen = set()
        for n in itertools.product(range(N), repeat=spec.d2):
            nf = q.reduce(normal_form(spec, power_section(spec, n)))
            seen.add(nf)
        if len(seen) != N ** spec.d2:
            ok_section = False
    checks.append(CheckResult("quotient-order-formula", ok_orders))
    checks.append(CheckResult("section-bijectivity", ok_section))

    # mod-N reduction soundness
    q = build_quotient(spec, m0)
    ok = True
    for _ in range(8):
        n = tuple(int(rng.integers(-2 * m0, 2 * m0 + 1)) for _ in range(spec.d2))
        j = int(rng.integers(spec.d2)) if spec.d2 else 0
        if not spec.d2:
            break
        shifted = list(n)
        shifted[j] += q.N
        lhs = q.reduce(normal_form(spec, power_section(spec, shifted)))
        rhs = q.mul(q.reduce(normal_form(spec, power_section(spec, n))),
                    q.reduce(normal_form(spec, iso.power(
                        power_section(spec, [int(i == j) for i in range(spec.d2)]), q.N))))
        if lhs != rhs:
            ok = False
    checks.append(CheckResult("mod-N-soundness", ok))

    # composition exactness and associativity
    gens = spec.generators()
    ok_assoc, ok_orth = True, True
    chain = iso.identity_isometry(spec.d1, spec.d2)
    for _ in range(30):
        g = gens[int(rng.integers(len(gens)))]
        chain = iso.compose(chain, g)
        if iso.orth_deviation(chain.q) > 100 * np.finfo(float).eps * 60:
            ok_orth = False
    for _ in range(8):
        a, b, c = (gens[int(rng.integers(len(gens)))] for _ in range(3))
        lhs = iso.compose(iso.compose(a, b), c)
        rhs = iso.compose(a, iso.compose(b, c))
        if not iso.approx_equal(lhs, rhs, 10 * spec.tol):
            ok_assoc = False
    checks.append(CheckResult("composition-associativity", ok_assoc))
    checks.append(CheckResult("orthogonality-drift", ok_orth))

    # irreducible decomposition at m0
    try:
        irr = quotient_irreps(q, seed=seed)
        complete = sum(r.dim ** 2 for r in irr) == q.order
        gram_ok = all(abs(char_inner(irr[a], irr[b]) - (1 if a == b else 0)) < 1e-6
                      for a in range(len(irr)) for b in range(len(irr)))
        checks.append(CheckResult("irrep-completeness", complete,
                                  f"sum d^2 = {sum(r.dim ** 2 for r in irr)} vs {q.order}"))
        checks.append(CheckResult("irrep-orthogonality", gram_ok))
    except EucisoError as exc:
        checks.append(CheckResult("irrep-completeness", False, str(exc)))
        return VerifyReport(spec.name, checks)

    # dual atlas at m0
    try:
        atlas = enumerate_dual(spec, m0, seed=seed)
        for name, okc in atlas.checks.items():
            checks.append(CheckResult(f"atlas-{name}", okc, f"N = {m0}"))
    except EucisoError as exc:
        checks.append(CheckResult("atlas", False, str(exc)))

    # null-set shift relation
    ok = True
    duals = [p for p in spec.p_reps]
    for _ in range(200):
        k = tuple(Fraction(int(rng.integers(-12, 13)), int(rng.integers(1, 13)))
                  for _ in range(spec.d2))
        p = duals[int(rng.integers(len(duals)))]
        d = dual_point_matrix(p.p)
        shift = tuple(Fraction(int(rng.integers(-3, 4)), m0)
                      for _ in range(spec.d2))
        k2 = tuple(a - b for a, b in zip(iso.pmat_vec(d, k), shift))
        if null_set_member(spec, k) != null_set_member(spec, k2):
            ok = False
    checks.append(CheckResult("null-set-shift-relation", ok))

    # Fourier: plancherel, round trip, translation, convolution
    rngf = np.random.default_rng(seed + 1)
    u = PeriodicFunction.random(q, (2, 2), rngf)
    v = PeriodicFunction.random(q, (2, 2), rngf)
    ut, vt = transform(u, seed=seed), transform(v, seed=seed)
    checks.append(CheckResult(
        "plancherel",
        abs(inner_product(u, v) - plancherel_pairing(ut, vt)) <= 1e-8))
    checks.append(CheckResult(
        "round-trip", u.max_abs_diff(inverse_transform(ut)) <= 1e-8))
    g = int(rngf.integers(q.order))
    tut = transform(translate(u, g), seed=seed)
    reps = ut.irreps()
    worst = max(float(np.abs(tut.entries[ri] - ut.entries[ri]
                             @ np.kron(np.eye(u.shape[1]), rho.matrix(q.inv(g)))).max())
                for ri, rho in enumerate(reps))
    checks.append(CheckResult("translation-identity", worst <= 1e-8, f"max err {worst:.2e}"))
    s = SummableFunction.random(spec, (2, 2), terms=4, span=3, rng=rngf)
    conv = convolve(s, v)
    convt = transform(conv, seed=seed)
    worst = max(float(np.abs(convt.entries[ri]
                             - s.transform_at(rho, q) @ vt.entries[ri]).max())
                for ri, rho in enumerate(reps))
    checks.append(CheckResult("convolution-identity", worst <= 1e-8, f"max err {worst:.2e}"))

    # splitting
    try:
        cocycle(spec)
        checks.append(CheckResult("cocycle-integrality", True))
    except EucisoError as exc:
        checks.append(CheckResult("cocycle-integrality", False, str(exc)))
    n = 2
    while math.gcd(n, m0 * spec.rot_order) != 1:
        n += 1
    try:
        cert = split_quotient(spec, m0, n)
        checks.append(CheckResult("split-certificate", cert.passed,
                                  f"m = {m0}, n = {n}"))
        checks.append(CheckResult("split-reverify", verify_certificate(spec, cert)))
    except EucisoError as exc:
        checks.append(CheckResult("split-certificate", False, str(exc)))

    return VerifyReport(spec.name, checks)
