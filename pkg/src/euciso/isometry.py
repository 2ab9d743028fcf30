"""Block arithmetic for Euclidean isometries.

An element of O(d1) + E(d2) is stored as three blocks:

  q    d1 x d1 float orthogonal matrix (tolerance-based equality),
  p    d2 x d2 integer matrix, the point part in lattice coordinates,
  tau  length-d2 tuple of Fractions, the translation in lattice coordinates.

The (p, tau) blocks are exact; all lattice and dual-lattice membership
tests downstream rely on that.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import DimensionMismatch, EucisoError

DEFAULT_TOL = 1e-9

IntMatrix = tuple[tuple[int, ...], ...]
FracVector = tuple[Fraction, ...]


def frac_vector(values) -> FracVector:
    return tuple(Fraction(v) for v in values)


def int_matrix(rows) -> IntMatrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def identity_int_matrix(d: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d))


def pmat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )


def pmat_vec(a: IntMatrix, v) -> FracVector:
    n = len(a)
    return tuple(sum(a[i][k] * v[k] for k in range(n)) for i in range(n))


def pmat_det(a: IntMatrix) -> int:
    n = len(a)
    if n == 0:
        return 1
    if n == 1:
        return a[0][0]
    if n == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    det = 0
    for j in range(n):
        minor = tuple(row[:j] + row[j + 1:] for row in a[1:])
        det += (-1) ** j * a[0][j] * pmat_det(minor)
    return det


def pmat_inv(a: IntMatrix) -> IntMatrix:
    """Exact inverse of a lattice point operation (determinant +-1)."""
    n = len(a)
    det = pmat_det(a)
    if det not in (1, -1):
        raise EucisoError(f"point part has determinant {det}, not a lattice map")
    if n == 0:
        return a
    # Gaussian elimination over the rationals; entries of the result are
    # integers because |det| = 1.
    work = [[Fraction(a[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
            for i in range(n)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if work[r][col] != 0)
        work[col], work[pivot] = work[pivot], work[col]
        pv = work[col][col]
        work[col] = [x / pv for x in work[col]]
        for r in range(n):
            if r != col and work[r][col] != 0:
                factor = work[r][col]
                work[r] = [x - factor * y for x, y in zip(work[r], work[col])]
    inv = tuple(tuple(int(work[i][n + j]) for j in range(n)) for i in range(n))
    return inv


def pmat_transpose(a: IntMatrix) -> IntMatrix:
    n = len(a)
    return tuple(tuple(a[j][i] for j in range(n)) for i in range(n))


def pmat_order(a: IntMatrix, bound: int = 48) -> int | None:
    """Multiplicative order of an integer matrix, or None past the bound."""
    ident = identity_int_matrix(len(a))
    power = a
    for k in range(1, bound + 1):
        if power == ident:
            return k
        power = pmat_mul(power, a)
    return None


def orth_deviation(q: np.ndarray) -> float:
    if q.size == 0:
        return 0.0
    return float(np.abs(q.T @ q - np.eye(q.shape[0])).max())


class Isometry:
    """One group element; immutable after construction."""

    __slots__ = ("q", "p", "tau")

    def __init__(self, q, p, tau):
        q = np.asarray(q, dtype=float)
        if q.ndim != 2 or q.shape[0] != q.shape[1]:
            raise DimensionMismatch(f"q block must be square, got {q.shape}")
        q.setflags(write=False)
        self.q = q
        self.p = int_matrix(p)
        self.tau = frac_vector(tau)
        if len(self.p) != len(self.tau):
            raise DimensionMismatch("p block and tau disagree on d2")

    @property
    def d1(self) -> int:
        return self.q.shape[0]

    @property
    def d2(self) -> int:
        return len(self.tau)

    def __repr__(self):
        taus = ",".join(str(t) for t in self.tau)
        return f"Isometry(d1={self.d1}, p={self.p}, tau=({taus}))"


def identity_isometry(d1: int, d2: int) -> Isometry:
    return Isometry(np.eye(d1), identity_int_matrix(d2), (Fraction(0),) * d2)


def translation_isometry(d1: int, v) -> Isometry:
    v = frac_vector(v)
    return Isometry(np.eye(d1), identity_int_matrix(len(v)), v)


def compose(g: Isometry, h: Isometry) -> Isometry:
    """Product g*h:  (A1,b1)(A2,b2) = (A1 A2, b1 + A1 b2), blockwise."""
    if g.d1 != h.d1 or g.d2 != h.d2:
        raise DimensionMismatch("cannot compose isometries of different block dims")
    q = g.q @ h.q
    p = pmat_mul(g.p, h.p)
    tau = tuple(a + b for a, b in zip(g.tau, pmat_vec(g.p, h.tau)))
    return Isometry(q, p, tau)


def inverse(g: Isometry) -> Isometry:
    """Inverse (A^-1, -A^-1 b); the q block inverts as a transpose."""
    p_inv = pmat_inv(g.p)
    tau = tuple(-t for t in pmat_vec(p_inv, g.tau))
    return Isometry(g.q.T.copy(), p_inv, tau)


def compose_all(factors) -> Isometry:
    factors = list(factors)
    acc = factors[0]
    for f in factors[1:]:
        acc = compose(acc, f)
    return acc


def power(g: Isometry, n: int) -> Isometry:
    if n < 0:
        return power(inverse(g), -n)
    acc = identity_isometry(g.d1, g.d2)
    for _ in range(n):
        acc = compose(acc, g)
    return acc


def approx_equal(g: Isometry, h: Isometry, tol: float = DEFAULT_TOL) -> bool:
    """Exact equality on (p, tau), max-norm tolerance on q."""
    if g.d1 != h.d1 or g.d2 != h.d2:
        raise DimensionMismatch("cannot compare isometries of different block dims")
    if g.p != h.p or g.tau != h.tau:
        return False
    if g.d1 == 0:
        return True
    return float(np.abs(g.q - h.q).max()) <= tol


def q_equal(a: np.ndarray, b: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    if a.size == 0:
        return True
    return float(np.abs(a - b).max()) <= tol


def rotation2(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])


def block_diag(*blocks) -> np.ndarray:
    mats = [np.asarray(b, dtype=float) for b in blocks]
    n = sum(m.shape[0] for m in mats)
    out = np.zeros((n, n))
    at = 0
    for m in mats:
        k = m.shape[0]
        out[at:at + k, at:at + k] = m
        at += k
    return out
