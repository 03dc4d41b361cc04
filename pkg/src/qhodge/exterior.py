"""Exact exterior algebra on the 16-dimensional complexified fiber of R^4.

Basis blades are indexed by 4-bit masks: bit a set means the covector
dxi^{a+1} is a factor, with factors ordered by increasing index.  All
products reduce to table lookups, so the fiber algebra is exact up to
float rounding.  The orientation is fixed once and for all by

    vol = dxi^1 ^ dxi^2 ^ dxi^3 ^ dxi^4   (mask 0b1111),

and every adjoint/sign convention downstream derives from it.
"""

from __future__ import annotations

import numpy as np

DIM = 4
N_BLADES = 16
VOL_MASK = 0b1111

_BLADE_NAMES = [
    "1", "dx1", "dx2", "dx1^dx2", "dx3", "dx1^dx3", "dx2^dx3", "dx1^dx2^dx3",
    "dx4", "dx1^dx4", "dx2^dx4", "dx1^dx2^dx4", "dx3^dx4", "dx1^dx3^dx4",
    "dx2^dx3^dx4", "dx1^dx2^dx3^dx4",
]

DEGREE = np.array([bin(m).count("1") for m in range(N_BLADES)], dtype=np.int64)


def _merge_sign(a: int, b: int) -> int:
    """Sign of e_a ^ e_b relative to the canonical ordering of e_{a|b}.

    Zero when the masks overlap.  Counts the transpositions needed to sort
    the concatenated index sequence.
    """
    if a & b:
        return 0
    s = 0
    t = a >> 1
    while t:
        s += bin(t & b).count("1")
        t >>= 1
    return 1 - 2 * (s & 1)


def _build_wedge_tensor() -> np.ndarray:
    w = np.zeros((N_BLADES, N_BLADES, N_BLADES))
    for i in range(N_BLADES):
        for j in range(N_BLADES):
            s = _merge_sign(i, j)
            if s:
                w[i, i | j, j] = s
    return w


# WEDGE[i, k, j] = sign  <=>  e_i ^ e_j = sign * e_k
WEDGE = _build_wedge_tensor()
WEDGE.setflags(write=False)


def _build_star() -> np.ndarray:
    s = np.zeros((N_BLADES, N_BLADES))
    for m in range(N_BLADES):
        mc = (~m) & VOL_MASK
        s[mc, m] = _merge_sign(m, mc)
    return s


# star(e_m) = sign * e_{complement(m)}, fixed by e_m ^ star(e_m) = vol
STAR = _build_star()
STAR.setflags(write=False)


class Multivector:
    """Element of Lambda^*(R^4) (x) C, stored as 16 complex blade coefficients."""

    __slots__ = ("c",)

    def __init__(self, coeffs=None):
        if coeffs is None:
            self.c = np.zeros(N_BLADES, dtype=complex)
        else:
            self.c = np.asarray(coeffs, dtype=complex).reshape(N_BLADES).copy()

    @classmethod
    def blade(cls, mask: int, coeff: complex = 1.0) -> "Multivector":
        m = cls()
        m.c[mask] = coeff
        return m

    @classmethod
    def scalar(cls, value: complex) -> "Multivector":
        return cls.blade(0, value)

    @classmethod
    def one_form(cls, v) -> "Multivector":
        """The covector v_1 dxi^1 + ... + v_4 dxi^4."""
        m = cls()
        for a in range(DIM):
            m.c[1 << a] = v[a]
        return m

    def copy(self) -> "Multivector":
        return Multivector(self.c)

    def __add__(self, other):
        return Multivector(self.c + other.c)

    def __sub__(self, other):
        return Multivector(self.c - other.c)

    def __neg__(self):
        return Multivector(-self.c)

    def __mul__(self, scalar):
        return Multivector(self.c * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return Multivector(self.c / scalar)

    def wedge(self, other: "Multivector") -> "Multivector":
        return Multivector(np.einsum("i,ikj,j->k", self.c, WEDGE, other.c))

    __xor__ = wedge

    def conjugate(self) -> "Multivector":
        return Multivector(np.conj(self.c))

    def degree_part(self, p: int) -> "Multivector":
        out = self.c.copy()
        out[DEGREE != p] = 0.0
        return Multivector(out)

    def degrees(self, tol: float = 0.0):
        """Degrees carrying a coefficient above tol (in absolute value)."""
        return sorted({int(DEGREE[m]) for m in range(N_BLADES) if abs(self.c[m]) > tol})

    def inner(self, other: "Multivector") -> complex:
        """Hermitian pairing <a, b>, linear in a, conjugate-linear in b.

        Equals the coefficient of vol in a ^ star(conj(b)); blades are
        orthonormal, so this is a plain coefficient contraction.
        """
        return complex(np.sum(self.c * np.conj(other.c)))

    def norm(self) -> float:
        return float(np.linalg.norm(self.c))

    def star(self) -> "Multivector":
        return Multivector(STAR @ self.c)

    def is_real(self, tol: float = 1e-12) -> bool:
        return float(np.abs(self.c.imag).max()) <= tol

    def __repr__(self):
        terms = []
        for m in range(N_BLADES):
            z = self.c[m]
            if z != 0:
                terms.append(f"({z:.6g})*{_BLADE_NAMES[m]}")
        return " + ".join(terms) if terms else "0"


VOL = Multivector.blade(VOL_MASK)


def wedge_matrix(x) -> np.ndarray:
    """16x16 matrix of left exterior multiplication by x.

    x may be a Multivector, a 16-vector of blade coefficients, or a
    4-vector of covector components.
    """
    if isinstance(x, Multivector):
        x = x.c
    x = np.asarray(x)
    if x.shape == (DIM,):
        full = np.zeros(N_BLADES, dtype=x.dtype if x.dtype.kind in "fc" else float)
        for a in range(DIM):
            full[1 << a] = x[a]
        x = full
    return np.einsum("i,ikj->kj", x, WEDGE)


# wedge/interior matrices for the four coordinate directions; interior is the
# metric adjoint of wedge, which in the orthonormal blade basis is the transpose
WEDGE_E = np.stack([wedge_matrix(np.eye(DIM)[a]) for a in range(DIM)])
WEDGE_E.setflags(write=False)
INTERIOR_E = np.stack([WEDGE_E[a].T.copy() for a in range(DIM)])
INTERIOR_E.setflags(write=False)


def interior_matrix(v) -> np.ndarray:
    """16x16 matrix of contraction with the real vector v in R^4."""
    v = np.asarray(v, dtype=float)
    return np.einsum("a,aij->ij", v, INTERIOR_E)


def wedge(a: Multivector, b: Multivector) -> Multivector:
    return a.wedge(b)


def interior(v, a: Multivector) -> Multivector:
    """Contraction of the multivector a with the vector v (degree -1 derivation)."""
    return Multivector(interior_matrix(v) @ a.c)


def hodge_star(a: Multivector) -> Multivector:
    return a.star()


def apply_matrix(mat: np.ndarray, a: Multivector) -> Multivector:
    return Multivector(mat @ a.c)


GRADING = np.diag(DEGREE.astype(float))
GRADING.setflags(write=False)
