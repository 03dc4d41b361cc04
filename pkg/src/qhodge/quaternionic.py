"""The hyperkahler package on the flat fiber: I, J, K and their form actions.

Coordinates (xi^1..xi^4) are identified with the quaternion
x^0 + x^1 i + x^2 j + x^3 k, and the three complex structures act on the
cotangent fiber by left quaternion multiplication.  Left multiplication is a
homomorphism, so I^2 = J^2 = K^2 = IJK = -1 holds exactly, and since the
matrices are orthogonal the induced cotangent action coincides with the
tangent one.

Kahler two-forms use the convention

    omega_C(u, v) = g(u, C v),

the unique sign for which the generalized Kodaira commutator identities
between twisted differentials, their adjoints and the Lefschetz operators
hold literally (see operators.kodaira_suite).  The multiplicative group
action on the 16-dimensional fiber is the exponential of the derivation
action, computed once per structure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm, null_space

from .exterior import (
    DEGREE,
    DIM,
    GRADING,
    INTERIOR_E,
    N_BLADES,
    Multivector,
    apply_matrix,
    wedge_matrix,
)

# left multiplication by i, j, k on quaternion coordinates (x0, x1, x2, x3)
I = np.array([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]], dtype=float)
J = np.array([[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]], dtype=float)
K = np.array([[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]], dtype=float)
for _m in (I, J, K):
    _m.setflags(write=False)

STRUCTURES = {"I": I, "J": J, "K": K}
STRUCTURE_NAMES = ("I", "J", "K")


@dataclass(frozen=True)
class Quaternion:
    """x = x0 + x1 i + x2 j + x3 k."""

    x0: float = 0.0
    x1: float = 0.0
    x2: float = 0.0
    x3: float = 0.0

    @classmethod
    def from_components(cls, v) -> "Quaternion":
        v = np.asarray(v, dtype=float).reshape(4)
        return cls(*v)

    @property
    def components(self) -> np.ndarray:
        return np.array([self.x0, self.x1, self.x2, self.x3])

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.x0, -self.x1, -self.x2, -self.x3)

    def __mul__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion.from_components(left_matrix(self) @ other.components)

    def __abs__(self) -> float:
        return float(np.linalg.norm(self.components))

    def normalized(self) -> "Quaternion":
        return Quaternion.from_components(self.components / abs(self))


ONE = Quaternion(1.0)


def left_matrix(x) -> np.ndarray:
    """4x4 matrix of left multiplication by the quaternion x."""
    v = x.components if isinstance(x, Quaternion) else np.asarray(x, dtype=float)
    return v[0] * np.eye(DIM) + v[1] * I + v[2] * J + v[3] * K


def structure_matrix(c) -> np.ndarray:
    """Resolve c to a 4x4 structure matrix.

    Accepts "I"/"J"/"K", a 3-vector sigma for sigma1*I + sigma2*J + sigma3*K,
    or an explicit 4x4 matrix.
    """
    if isinstance(c, str):
        return STRUCTURES[c]
    c = np.asarray(c, dtype=float)
    if c.shape == (3,):
        return c[0] * I + c[1] * J + c[2] * K
    if c.shape == (DIM, DIM):
        return c
    raise ValueError(f"cannot interpret {c!r} as a complex structure")


def kahler_form_coeffs(c) -> np.ndarray:
    """Blade coefficients of omega_C with omega_C(u, v) = g(u, C v)."""
    m = structure_matrix(c)
    out = np.zeros(N_BLADES)
    for a in range(DIM):
        for b in range(a + 1, DIM):
            out[(1 << a) | (1 << b)] = m[a, b]
    return out


def kahler_form(c) -> Multivector:
    """omega_C with omega_C(u, v) = g(u, C v); a real 2-form."""
    return Multivector(kahler_form_coeffs(c))


def ad_matrix(c) -> np.ndarray:
    """Degree-preserving derivation extension of c to the 16-dim fiber."""
    m = structure_matrix(c)
    out = np.zeros((N_BLADES, N_BLADES))
    for a in range(DIM):
        out += wedge_matrix(m[:, a]) @ INTERIOR_E[a]
    return out


def group_matrix(c) -> np.ndarray:
    """Multiplicative (algebra automorphism) extension of c to the fiber."""
    m = structure_matrix(c)
    out = np.zeros((N_BLADES, N_BLADES))
    out[0, 0] = 1.0
    for mask in range(1, N_BLADES):
        low = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << low)
        out[:, mask] = wedge_matrix(m[:, low]) @ out[:, rest]
    return out


AD = {name: ad_matrix(name) for name in STRUCTURE_NAMES}
GROUP = {name: group_matrix(name) for name in STRUCTURE_NAMES}
for _m in list(AD.values()) + list(GROUP.values()):
    _m.setflags(write=False)


def rotor_matrix(u) -> np.ndarray:
    """Fiber action of a unit quaternion u = exp(phi * n.(i,j,k)).

    Realized as the 16x16 exponential of the ad generators, which is the
    multiplicative extension of the corresponding SO(4) rotation.
    """
    q = u if isinstance(u, Quaternion) else Quaternion.from_components(u)
    n = abs(q)
    if abs(n - 1.0) > 1e-9:
        raise ValueError(f"rotor requires a unit quaternion, got |u| = {n}")
    vec = q.components[1:]
    s = np.linalg.norm(vec)
    phi = np.arctan2(s, q.x0)
    if s < 1e-300:
        if q.x0 < 0:
            # u = -1: rotate by pi about any axis
            return expm(np.pi * AD["I"])
        return np.eye(N_BLADES)
    axis = vec / s
    gen = axis[0] * AD["I"] + axis[1] * AD["J"] + axis[2] * AD["K"]
    return expm(phi * gen)


def ad_action(c, a: Multivector) -> Multivector:
    return apply_matrix(ad_matrix(c), a)


def group_action(c, a: Multivector) -> Multivector:
    """Multiplicative action of a structure (or any 4x4 matrix) on the fiber."""
    return apply_matrix(group_matrix(c), a)


def lefschetz_matrix(c) -> np.ndarray:
    return wedge_matrix(kahler_form_coeffs(c))


def lefschetz_dual_matrix(c) -> np.ndarray:
    # adjoint w.r.t. the blade Hermitian pairing; the matrix is real
    return lefschetz_matrix(c).T.copy()


def lefschetz(c, a: Multivector) -> Multivector:
    return apply_matrix(lefschetz_matrix(c), a)


def lefschetz_dual(c, a: Multivector) -> Multivector:
    return apply_matrix(lefschetz_dual_matrix(c), a)


def _type_eigenvalues(k: int):
    """(p, q) splittings of degree k on a fiber of complex dimension 2."""
    return [(p, k - p) for p in range(max(0, k - 2), min(k, 2) + 1)]


def type_projector_matrix(c, p: int, q: int) -> np.ndarray:
    """Projector onto the (p, q) eigenspace of ad_c inside degree p + q.

    Built by Lagrange interpolation on the (exact) ad_c eigenvalues
    i(p' - q') within the degree, composed with the degree projector.
    """
    if p < 0 or q < 0 or p > 2 or q > 2:
        return np.zeros((N_BLADES, N_BLADES), dtype=complex)
    k = p + q
    if k > DIM:
        raise ValueError("degree exceeds fiber dimension")
    ad = ad_matrix(c).astype(complex)
    target = 1j * (p - q)
    proj = np.eye(N_BLADES, dtype=complex)
    for (pp, qq) in _type_eigenvalues(k):
        lam = 1j * (pp - qq)
        if (pp, qq) == (p, q):
            continue
        proj = proj @ (ad - lam * np.eye(N_BLADES)) / (target - lam)
    deg = np.diag((DEGREE == k).astype(float))
    return deg @ proj


def type_projector(c, p: int, q: int, a: Multivector) -> Multivector:
    return apply_matrix(type_projector_matrix(c, p, q), a)


def invariance_defect(a) -> float:
    """max over C in {I, J, K} of ||ad_C a||; zero iff a is isotropy-invariant.

    Accepts a Multivector or any object with an ndarray attribute `coeffs`
    whose last axis indexes blades (e.g. a FormField).
    """
    if isinstance(a, Multivector):
        return max(float(np.linalg.norm(AD[n] @ a.c)) for n in STRUCTURE_NAMES)
    coeffs = a.coeffs
    return max(
        float(np.linalg.norm(coeffs @ AD[n].T)) for n in STRUCTURE_NAMES
    )


def _invariant_projector() -> np.ndarray:
    stacked = np.vstack([AD[n] for n in STRUCTURE_NAMES])
    basis = null_space(stacked, rcond=1e-12)
    return basis @ basis.T


# orthogonal projector onto the joint kernel of ad_I, ad_J, ad_K
# (scalars + anti-self-dual 2-forms + vol: a 5-dimensional subspace)
INVARIANT_PROJECTOR = _invariant_projector()
INVARIANT_PROJECTOR.setflags(write=False)


def xhat_matrix(x) -> np.ndarray:
    """x0 * N + x1 ad_I + x2 ad_J + x3 ad_K on the fiber."""
    v = x.components if isinstance(x, Quaternion) else np.asarray(x, dtype=float)
    return v[0] * GRADING + v[1] * AD["I"] + v[2] * AD["J"] + v[3] * AD["K"]
