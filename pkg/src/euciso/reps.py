"""Unitary representations of the finite quotients.

Irreducible representations come out of a random-commutant solver on the
regular representation: a random Hermitian matrix averaged over the group
lies in the commutant, its eigenspaces are invariant, and for a generic
choice each eigenspace carries a single irreducible.  Degenerate draws are
detected by the character norm and split recursively.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (CapExceeded, ConvergenceFailure, InternalInconsistency,
                     NotAMember)
from .groups import GroupSpec, NormalForm, QuotientGroup, SubgroupView

STRUCT_TOL = 1e-6       # character comparisons, multiplicities
LINALG_TOL = 1e-9       # unitarity, homomorphism residuals

DEFAULT_CAP = 4096
MAX_RESEEDS = 8


class Representation:
    """Matrix-valued homomorphism on a quotient group or a subgroup view.

    Matrices are keyed by the parent quotient's element ids.  `table` may
    be a dict (materialized) or a callable (lazy, cached on access).
    """

    def __init__(self, domain, dim, table, seed=None, label=None):
        self.domain = domain
        self.dim = int(dim)
        self.seed = seed
        self.label = label
        if callable(table):
            self._fn = table
            self._matrices: dict[int, np.ndarray] = {}
        else:
            self._fn = None
            self._matrices = dict(table)
        self._char: dict[int, complex] | None = None

    def matrix(self, i: int) -> np.ndarray:
        m = self._matrices.get(i)
        if m is None:
            if self._fn is None:
                raise KeyError(f"representation has no matrix for element {i}")
            m = np.asarray(self._fn(i), dtype=complex)
            self._matrices[i] = m
        return m

    def stack(self) -> np.ndarray:
        """All matrices as one (|H|, d, d) array, in element order."""
        if getattr(self, "_stack", None) is None:
            self._stack = np.array([self.matrix(i) for i in self.domain.elements])
        return self._stack

    @property
    def char(self) -> dict[int, complex]:
        if self._char is None:
            self._char = {i: complex(np.trace(self.matrix(i)))
                          for i in self.domain.elements}
        return self._char

    def charvec(self) -> np.ndarray:
        ch = self.char
        return np.array([ch[i] for i in self.domain.elements])

    def unitary_defect(self) -> float:
        worst = 0.0
        for i in self.domain.elements:
            m = self.matrix(i)
            worst = max(worst, float(np.abs(m.conj().T @ m - np.eye(self.dim)).max()))
        return worst

    def homomorphism_defect(self, pairs) -> float:
        worst = 0.0
        for i, j in pairs:
            lhs = self.matrix(i) @ self.matrix(j)
            rhs = self.matrix(self.domain.mul(i, j))
            worst = max(worst, float(np.abs(lhs - rhs).max()))
        return worst


@dataclass(frozen=True)
class Character:
    """Trace function of a representation, keyed by element id."""

    values: dict

    @classmethod
    def of(cls, rep: Representation) -> "Character":
        return cls(dict(rep.char))


def char_inner(r1: Representation, r2: Representation) -> complex:
    """(1/|H|) sum chi1(g) conj(chi2(g)) over the common domain."""
    ids = r1.domain.elements
    acc = 0j
    c1, c2 = r1.char, r2.char
    for i in ids:
        acc += c1[i] * c2[i].conjugate()
    return acc / len(ids)


def char_norm_sq(r: Representation) -> float:
    ids = r.domain.elements
    return sum(abs(r.char[i]) ** 2 for i in ids) / len(ids)


def equivalent(r1: Representation, r2: Representation, tol: float = STRUCT_TOL) -> bool:
    """Unitary equivalence via character comparison (finite groups)."""
    if r1.dim != r2.dim:
        return False
    c1, c2 = r1.char, r2.char
    return all(abs(c1[i] - c2[i]) <= tol for i in r1.domain.elements)


def multiplicity(container: Representation, irr: Representation,
                 tol: float = STRUCT_TOL) -> int:
    """How often `irr` occurs in `container`, from the character pairing."""
    m = char_inner(container, irr)
    k = round(m.real)
    if abs(m - k) > tol:
        raise InternalInconsistency(f"non-integral multiplicity {m}")
    return k


# -- irreducible decomposition ------------------------------------------------

def _perm_arrays(domain) -> tuple[np.ndarray, np.ndarray]:
    """Left-regular permutation table and inverse map, in local indices."""
    if isinstance(domain, QuotientGroup):
        table = domain.mult_table()
        inv_local = (table == domain.identity).argmax(axis=1)
        return table, inv_local
    local = {gid: k for k, gid in enumerate(domain.elements)}
    n = len(domain.elements)
    table = np.empty((n, n), dtype=np.int32)
    inv_local = np.empty(n, dtype=np.int32)
    for a, g in enumerate(domain.elements):
        for b, h in enumerate(domain.elements):
            table[a, b] = local[domain.mul(g, h)]
        inv_local[a] = local[domain.inv(g)]
    return table, inv_local


def _cluster(eigenvalues: np.ndarray, tol: float) -> list[slice]:
    breaks = [0]
    for k in range(1, len(eigenvalues)):
        if eigenvalues[k] - eigenvalues[k - 1] > tol:
            breaks.append(k)
    breaks.append(len(eigenvalues))
    return [slice(a, b) for a, b in zip(breaks, breaks[1:])]


def _split_dense(mats: list[np.ndarray], rng, depth: int = 0) -> list[list[np.ndarray]]:
    """Recursively split a dense unitary rep into irreducible blocks."""
    d = mats[0].shape[0]
    n = len(mats)
    norm_sq = sum(abs(np.trace(m)) ** 2 for m in mats) / n
    if abs(norm_sq - 1.0) < 1e-3:
        return [mats]
    if depth > 8:
        raise ConvergenceFailure("irreducible split did not terminate")
    x = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    x = x + x.conj().T
    h = sum(m @ x @ m.conj().T for m in mats) / n
    w, v = np.linalg.eigh(h)
    spread = max(w[-1] - w[0], 1.0)
    out = []
    for block in _cluster(w, 1e-8 * spread):
        basis = v[:, block]
        sub = [basis.conj().T @ m @ basis for m in mats]
        if sub[0].shape[0] == d:
            # eigenspace did not split; try a fresh random direction
            return _split_dense(mats, rng, depth + 1)
        out.extend(_split_dense(sub, rng, depth + 1))
    return out


def _orthonormalize(mats: list[np.ndarray]) -> list[np.ndarray]:
    """Symmetric orthogonalization nudge applied per matrix."""
    out = []
    for m in mats:
        g = m.conj().T @ m
        w, v = np.linalg.eigh(g)
        fix = v @ np.diag(w ** -0.5) @ v.conj().T
        out.append(m @ fix)
    return out


def irreps(domain, seed: int = 0, cap: int = DEFAULT_CAP,
           retries: int = MAX_RESEEDS) -> list[Representation]:
    """One representative per equivalence class of irreducibles.

    Decomposes the regular representation through eigenspaces of an
    averaged random Hermitian matrix; verifies sum d^2 = |H|, pairwise
    character orthogonality and the homomorphism property before
    returning.  Reseeds on bad random draws.
    """
    n = len(domain.elements)
    if n > cap:
        raise CapExceeded(f"group order {n} exceeds the solver cap {cap}")
    table, inv_local = _perm_arrays(domain)

    last_error = None
    for attempt in range(retries):
        rng = np.random.default_rng(seed + attempt)
        try:
            return _solve(domain, table, inv_local, rng, seed + attempt)
        except (ConvergenceFailure, InternalInconsistency) as exc:
            last_error = exc
    raise ConvergenceFailure(f"irrep solver failed after {retries} reseeds: {last_error}")


def _solve(domain, table, inv_local, rng, seed) -> list[Representation]:
    n = table.shape[0]
    ids = domain.elements
    inv_perms = table[inv_local]            # row g: h -> g^-1 h

    x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    x = x + x.conj().T
    h = np.zeros((n, n), dtype=complex)
    for g in range(n):
        pi = inv_perms[g]
        h += x[np.ix_(pi, pi)]
    h /= n
    w, v = np.linalg.eigh(h)
    spread = max(w[-1] - w[0], 1.0)

    kept_mats: list[np.ndarray] = []        # (n, d, d) stacks
    kept_chars: list[np.ndarray] = []

    def consider(mats: np.ndarray, ch: np.ndarray) -> None:
        for kc in kept_chars:
            if np.abs(ch - kc).max() < STRUCT_TOL:
                return
        kept_mats.append(mats)
        kept_chars.append(ch)

    for sl in _cluster(w, 1e-8 * spread):
        basis = v[:, sl]
        gathered = basis[inv_perms]                         # (n, n, d)
        ch = np.einsum("ak,gak->g", basis.conj(), gathered)
        if abs(float(np.mean(np.abs(ch) ** 2)) - 1.0) < 1e-3:
            if any(np.abs(ch - kc).max() < STRUCT_TOL for kc in kept_chars):
                continue
            mats = np.einsum("aj,gak->gjk", basis.conj(), gathered)
            consider(mats, ch)
        else:
            # eigenvalue collision joined several irreducibles; split densely
            mats = np.einsum("aj,gak->gjk", basis.conj(), gathered)
            for sub in _split_dense(list(mats), rng):
                stack = np.array(_orthonormalize(sub))
                consider(stack, np.einsum("gii->g", stack))

    if sum(m.shape[1] ** 2 for m in kept_mats) != n:
        raise InternalInconsistency("sum of squared dimensions misses the group order")

    order = sorted(range(len(kept_mats)),
                   key=lambda k: (kept_mats[k].shape[1],
                                  tuple(np.round(kept_chars[k], 6).view(float))))
    out = []
    for rank, k in enumerate(order):
        mats, ch = kept_mats[k], kept_chars[k]
        rep = Representation(domain, mats.shape[1],
                             {gid: mats[j] for j, gid in enumerate(ids)},
                             seed=seed, label=f"irr{rank}")
        rep._char = {gid: complex(ch[j]) for j, gid in enumerate(ids)}
        out.append(rep)

    _verify_irreps(domain, out,
                   [kept_mats[k] for k in order], [kept_chars[k] for k in order],
                   table, rng)
    return out


def _verify_irreps(domain, reps, stacks, chars, table, rng) -> None:
    n = table.shape[0]
    cmat = np.array(chars)
    gram = cmat @ cmat.conj().T / n
    if np.abs(gram - np.eye(len(reps))).max() > STRUCT_TOL:
        raise InternalInconsistency("character orthogonality failed")
    for mats in stacks:
        d = mats.shape[1]
        defect = np.abs(np.einsum("gji,gjk->gik", mats.conj(), mats)
                        - np.eye(d)).max()
        if defect > 1e-6:
            raise InternalInconsistency("a returned block is not unitary")
        for _ in range(8):
            a, b = int(rng.integers(n)), int(rng.integers(n))
            if np.abs(mats[a] @ mats[b] - mats[table[a, b]]).max() > 1e-6:
                raise InternalInconsistency("a returned block is not a homomorphism")


def quotient_irreps(q: QuotientGroup, seed: int = 0, cap: int = DEFAULT_CAP):
    """Cached irreps of the full quotient at a fixed seed."""
    cached = q._irreps_cache.get(seed)
    if cached is None:
        cached = irreps(q, seed=seed, cap=cap)
        q._irreps_cache[seed] = cached
    return cached


# -- wave characters ----------------------------------------------------------

@dataclass(frozen=True)
class WaveCharacter:
    """One-dimensional character of the translation-kernel subgroup.

    Evaluates as exp(2 pi i <k, n>) on the section exponent n; kernel
    elements map to 1.  k is held in dual-lattice coordinates.
    """

    k: tuple[Fraction, ...]

    def value(self, n) -> complex:
        phase = sum(a * Fraction(b) for a, b in zip(self.k, n))
        return cmath.exp(2j * cmath.pi * float(phase % 1))

    def kills_power(self, N: int) -> bool:
        """True iff the character is trivial on N-th section powers."""
        return all((a * N).denominator == 1 for a in self.k)

    def on(self, q: QuotientGroup) -> Representation:
        """The character as a 1-dim representation of the TF part of q."""
        if not self.kills_power(q.N):
            raise NotAMember(f"wave vector {self.k} does not kill T^{q.N}")
        sub = q.tf_subgroup()
        table = {i: np.array([[self.value(q.nf(i).n)]]) for i in sub.elements}
        return Representation(sub, 1, table, label=f"chi{self.k}")


def chi(spec: GroupSpec, k) -> WaveCharacter:
    return WaveCharacter(tuple(Fraction(x) for x in k))


def scale_by_character(wave: WaveCharacter, r: Representation) -> Representation:
    """Pointwise product chi_k * rho on the same domain."""
    q = r.domain.parent if isinstance(r.domain, SubgroupView) else r.domain
    table = {i: wave.value(q.nf(i).n) * r.matrix(i) for i in r.domain.elements}
    return Representation(r.domain, r.dim, table, seed=r.seed)


# -- the action of G on duals of TF -------------------------------------------

def dual_action(q: QuotientGroup, g: int, r: Representation) -> Representation:
    """(g . rho)(h) = rho(g^-1 h g) for rho on a normal subgroup view."""
    sub = r.domain
    g_inv = q.inv(g)
    table = {}
    for h in sub.elements:
        conj = q.mul(q.mul(g_inv, h), g)
        if conj not in sub.id_set:
            raise InternalInconsistency("conjugation left the subgroup")
        table[h] = r.matrix(conj)
    return Representation(sub, r.dim, table, seed=r.seed)


def p_rep_element(q: QuotientGroup, p_idx: int) -> int:
    return q.index[NormalForm((0,) * q.spec.d2, q.spec.f_identity, p_idx)]


def induce(q: QuotientGroup, r: Representation, check: bool = True) -> Representation:
    """Induction from the TF part to the full quotient, in block form.

    Coset representatives are the p_reps; block (i, j) of the induced
    matrix at g is rho(h_i^-1 g h_j) when that element lies in TF and
    zero otherwise.
    """
    sub = r.domain
    if not isinstance(sub, SubgroupView) or sub.parent is not q:
        raise InternalInconsistency("induce expects a representation on a TF view of q")
    cosets = [p_rep_element(q, p) for p in range(q.spec.rot_order)]
    coset_inv = [q.inv(c) for c in cosets]
    d = r.dim
    nblocks = len(cosets)

    def evaluate(g: int) -> np.ndarray:
        out = np.zeros((nblocks * d, nblocks * d), dtype=complex)
        for i in range(nblocks):
            left = q.mul(coset_inv[i], g)
            for j in range(nblocks):
                x = q.mul(left, cosets[j])
                if x in sub.id_set:
                    out[i * d:(i + 1) * d, j * d:(j + 1) * d] = r.matrix(x)
        return out

    rep = Representation(q, nblocks * d, evaluate, seed=r.seed)
    if check:
        gens = _quotient_generators(q)
        defect = rep.homomorphism_defect([(a, b) for a in gens for b in gens])
        if defect > 1e-8:
            raise InternalInconsistency(f"induced rep fails homomorphism: {defect}")
    return rep


def _quotient_generators(q: QuotientGroup) -> list[int]:
    spec = q.spec
    out = []
    for i in range(spec.d2):
        e = [0] * spec.d2
        e[i] = 1 % q.N
        out.append(q.index[NormalForm(tuple(e), spec.f_identity, spec.p_identity)])
    for f in range(spec.f_order):
        out.append(q.index[NormalForm((0,) * spec.d2, f, spec.p_identity)])
    for p in range(spec.rot_order):
        out.append(q.index[NormalForm((0,) * spec.d2, spec.f_identity, p)])
    return out


def mackey_irreducible(q: QuotientGroup, r: Representation) -> bool:
    """Irreducibility test for the induced representation of r.

    True iff no nontrivial coset moves r to an equivalent representation;
    cross-checked against the character norm of the induced rep.
    """
    verdict = True
    for p_idx in range(q.spec.rot_order):
        if p_idx == q.spec.p_identity:
            continue
        g = p_rep_element(q, p_idx)
        if equivalent(dual_action(q, g, r), r):
            verdict = False
            break
    norm = char_norm_sq(induce(q, r, check=False))
    if abs(norm - 1.0) < STRUCT_TOL:
        by_norm = True
    elif norm > 1.0 + STRUCT_TOL:
        by_norm = False
    else:
        raise InternalInconsistency(f"induced character norm {norm} below 1")
    if by_norm != verdict:
        raise InternalInconsistency(
            f"stabilizer test ({verdict}) disagrees with character norm ({norm})")
    return verdict


# -- lifting along quotient maps ----------------------------------------------

def lift_representation(r: Representation, fine: QuotientGroup) -> Representation:
    """Pull a representation of a coarse quotient back to a finer one."""
    coarse = r.domain if isinstance(r.domain, QuotientGroup) else r.domain.parent
    if isinstance(r.domain, SubgroupView):
        sub = fine.tf_subgroup()
        table = {i: r.matrix(fine.project_index(coarse, i)) for i in sub.elements}
        return Representation(sub, r.dim, table, seed=r.seed, label=r.label)
    table = {i: r.matrix(fine.project_index(coarse, i)) for i in fine.elements}
    return Representation(fine, r.dim, table, seed=r.seed, label=r.label)


def trivial_on(r: Representation, ids) -> bool:
    return all(np.abs(r.matrix(i) - np.eye(r.dim)).max() < STRUCT_TOL for i in ids)


def intertwiner(r1: Representation, r2: Representation, seed: int = 0):
    """Explicit intertwiner by group averaging, or None when inequivalent."""
    if r1.dim != r2.dim:
        return None
    rng = np.random.default_rng(seed)
    ids = r1.domain.elements
    x = rng.standard_normal((r1.dim, r2.dim)) + 1j * rng.standard_normal((r1.dim, r2.dim))
    t = sum(r1.matrix(g) @ x @ r2.matrix(g).conj().T for g in ids) / len(ids)
    if np.abs(t).max() < 1e-8:
        return None
    # scale to unitary via polar part
    u, s, vh = np.linalg.svd(t)
    if s.min() < 1e-8:
        return None
    return u @ vh
