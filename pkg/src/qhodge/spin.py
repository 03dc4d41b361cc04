"""Clifford algebra Cl(R^4) (x) C acting on the 4-dimensional spin module.

The module is S = Lambda^*(W) for W the +i eigenspace of I on complexified
covectors, spanned by w^1 = e^1 - i e^2 and w^2 = e^3 - i e^4.  S carries
the ordered orthonormal basis

    ( |1>,  w^1/sqrt2,  w^2/sqrt2,  (w^1 ^ w^2)/2 ),

in which Hermitian adjoints are plain conjugate transposes.  The Clifford
action is c(w) = sqrt2 eps(w) for w in W and c(wbar) = -sqrt2 iota(wbar)
for wbar in Wbar, iota contracting against the Hermitian pairing
<wbar^i, w^j> = 2 delta_ij of the unnormalized coframe.

Unlike the form-side operator algebra (see quaternionic.kahler_form), the
quantization map here uses omega^C = g(C., .): that is the sign for which
c(omega^C) realizes 2C under the commutator map on generators and grades S
with c(omega^I) = i(2q - 2) on Lambda^q(W).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.linalg import expm

from .exterior import Multivector, N_BLADES, wedge_matrix
from .quaternionic import I, J, K, STRUCTURE_NAMES, ad_action, structure_matrix

SQRT2 = np.sqrt(2.0)

# S basis parities under the form degree q = (0, 1, 1, 2)
_S_DEGREES = np.array([0, 1, 1, 2])

# holomorphic coframe: +i eigenvectors of I acting on covectors
W_COFRAME = np.array(
    [
        [1.0, -1j, 0.0, 0.0],  # w^1 = e^1 - i e^2
        [0.0, 0.0, 1.0, -1j],  # w^2 = e^3 - i e^4
    ]
)
W_COFRAME.setflags(write=False)


def _creation_matrices():
    """eps(w^1), eps(w^2) on the unnormalized basis (1, w1, w2, w1^w2)."""
    e1 = np.zeros((4, 4), complex)
    e1[1, 0] = 1.0
    e1[3, 2] = 1.0
    e2 = np.zeros((4, 4), complex)
    e2[2, 0] = 1.0
    e2[3, 1] = -1.0  # w2 ^ w1 = -(w1 ^ w2)
    return e1, e2


def _annihilation_matrices():
    """iota(wbar^1), iota(wbar^2): pairing <wbar^i, w^j> = 2 delta_ij."""
    i1 = np.zeros((4, 4), complex)
    i1[0, 1] = 2.0
    i1[2, 3] = 2.0
    i2 = np.zeros((4, 4), complex)
    i2[0, 2] = 2.0
    i2[1, 3] = -2.0
    return i1, i2


# change of basis: unnormalized (1, w1, w2, w1w2) -> orthonormal columns
_BASIS_NORMS = np.array([1.0, SQRT2, SQRT2, 2.0])
_TO_ORTHO = np.diag(_BASIS_NORMS)
_FROM_ORTHO = np.diag(1.0 / _BASIS_NORMS)


def _orthonormalize(mat: np.ndarray) -> np.ndarray:
    # coordinates transform with TO = diag(norms); operators conjugate accordingly
    return _TO_ORTHO @ mat @ _FROM_ORTHO


_EPS = [_orthonormalize(m) for m in _creation_matrices()]
_IOTA = [_orthonormalize(m) for m in _annihilation_matrices()]


@dataclass
class CliffordOp:
    """Operator on the spin module, with its Z_2 parity when defined."""

    matrix: np.ndarray
    parity: str = "mixed"  # "even", "odd", or "mixed"

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex).reshape(4, 4)
        if self.parity == "mixed":
            self.parity = _detect_parity(self.matrix)

    def __matmul__(self, other):
        return CliffordOp(self.matrix @ other.matrix)

    def commutator(self, other):
        return CliffordOp(self.matrix @ other.matrix - other.matrix @ self.matrix)

    def anticommutator(self, other):
        return CliffordOp(self.matrix @ other.matrix + other.matrix @ self.matrix)

    def adjoint(self):
        return CliffordOp(self.matrix.conj().T)


def _detect_parity(m: np.ndarray) -> str:
    par = _S_DEGREES % 2
    changing = float(np.abs(m[par[:, None] != par[None, :]]).max())
    preserving = float(np.abs(m[par[:, None] == par[None, :]]).max())
    if changing < 1e-12:
        return "even"
    if preserving < 1e-12:
        return "odd"
    return "mixed"


def _split_holomorphic(v: np.ndarray):
    """Components of a complexified covector along (w^1, w^2, wbar^1, wbar^2)."""
    v = np.asarray(v, dtype=complex).reshape(4)
    basis = np.vstack([W_COFRAME, W_COFRAME.conj()]).T  # columns are the coframe
    return np.linalg.solve(basis, v)


def clifford_action(v) -> CliffordOp:
    """c(v) for a complexified covector v (4 components in the e-basis)."""
    a1, a2, b1, b2 = _split_holomorphic(v)
    m = SQRT2 * (a1 * _EPS[0] + a2 * _EPS[1]) - SQRT2 * (b1 * _IOTA[0] + b2 * _IOTA[1])
    return CliffordOp(m)


GENERATORS = [clifford_action(np.eye(4)[a]) for a in range(4)]


def quantize(form: Multivector) -> CliffordOp:
    """Linear extension of e^{i_1} ^ ... ^ e^{i_k} -> c^{i_1} ... c^{i_k}."""
    out = np.zeros((4, 4), complex)
    for mask in range(N_BLADES):
        z = form.c[mask]
        if z == 0:
            continue
        m = np.eye(4, dtype=complex)
        for a in range(4):
            if mask >> a & 1:
                m = m @ GENERATORS[a].matrix
        out += z * m
    return CliffordOp(out)


def spin_kahler_form(c) -> Multivector:
    """omega^C = g(C., .), the spin-side sign convention (see module doc)."""
    m = structure_matrix(c)
    out = Multivector()
    for a in range(4):
        for b in range(a + 1, 4):
            out.c[(1 << a) | (1 << b)] = m[b, a]
    return out


def chirality() -> CliffordOp:
    """Gamma = i^2 c^1 c^2 c^3 c^4 for n = 4; squares to one, grades S."""
    g = np.eye(4, dtype=complex)
    for c in GENERATORS:
        g = g @ c.matrix
    return CliffordOp(-g)


def supertrace(op: CliffordOp) -> complex:
    return complex(np.trace(chirality().matrix @ op.matrix))


class Sl2Triple(NamedTuple):
    h: CliffordOp
    e: CliffordOp
    f: CliffordOp


def sl2_triple() -> Sl2Triple:
    """h = c(omega^I)/2i, e = (c(omega^J) - i c(omega^K))/4, f = -(..+..)/4."""
    cI = quantize(spin_kahler_form("I")).matrix
    cJ = quantize(spin_kahler_form("J")).matrix
    cK = quantize(spin_kahler_form("K")).matrix
    h = CliffordOp(cI / 2j)
    e = CliffordOp((cJ - 1j * cK) / 4)
    f = CliffordOp(-(cJ + 1j * cK) / 4)
    return Sl2Triple(h, e, f)


class NotClosed(Exception):
    pass


def sl2_table(tol: float = 1e-10) -> dict:
    """Measured commutator table of (h, e, f), expanded in that basis.

    Least squares over the 16-dimensional operator space; NotClosed if any
    commutator fails to lie in span(h, e, f).
    """
    h, e, f = sl2_triple()
    basis = np.stack([op.matrix.reshape(-1) for op in (h, e, f)], axis=1)
    out = {}
    for name, (a, b) in {"[h,e]": (h, e), "[h,f]": (h, f), "[e,f]": (e, f)}.items():
        comm = a.commutator(b).matrix.reshape(-1)
        coeffs, *_ = np.linalg.lstsq(basis, comm, rcond=None)
        resid = float(np.linalg.norm(basis @ coeffs - comm))
        if resid > tol:
            raise NotClosed(f"{name} leaves span(h,e,f): residual {resid:.3e}")
        cleaned = [complex(z) for z in coeffs]
        out[name] = {
            "h": _fmt(cleaned[0]),
            "e": _fmt(cleaned[1]),
            "f": _fmt(cleaned[2]),
            "residual": resid,
        }
    return out


def _fmt(z: complex) -> float | complex:
    return z.real if abs(z.imag) < 1e-12 else z


# ---------------------------------------------------------------------------
# identification with (q,0)-forms and the Dirac operator
# ---------------------------------------------------------------------------

def s_basis_forms() -> np.ndarray:
    """(4, 16) array: the orthonormal S basis as fiber multivectors."""
    w1 = Multivector.one_form(W_COFRAME[0])
    w2 = Multivector.one_form(W_COFRAME[1])
    top = w1.wedge(w2)
    rows = np.stack([
        Multivector.scalar(1.0).c,
        w1.c / SQRT2,
        w2.c / SQRT2,
        top.c / 2.0,
    ])
    return rows


def embed(op: CliffordOp) -> np.ndarray:
    """Conjugate an S-operator into the 16-dim fiber coordinates (16x16, rank <= 4)."""
    phi = s_basis_forms()  # rows: images of the S basis
    return phi.T @ op.matrix @ phi.conj()


def omega_operator_check() -> dict:
    """Prop-forms verification: e is (a multiple of) wedging with Omega.

    Omega = (omega^J - i omega^K)/4 is (2,0) for I; the measured
    normalization of the identification is reported rather than assumed.
    """
    h, e, f = sl2_triple()
    phi = s_basis_forms()
    omega = (spin_kahler_form("J") - 1j * spin_kahler_form("K")) * 0.25
    wedge_omega = wedge_matrix(omega)

    # restrict wedge(Omega) to the embedded S subspace
    e_on_forms = phi.T @ e.matrix @ phi.conj()
    target = wedge_omega @ (phi.T @ phi.conj())
    # fit e = lam * eps(Omega) on the subspace
    num = np.vdot(target, e_on_forms)
    den = np.vdot(target, target)
    lam = num / den
    e_defect = float(np.abs(e_on_forms - lam * target).max())

    f_on_forms = phi.T @ f.matrix @ phi.conj()
    f_target = wedge_omega.conj().T @ (phi.T @ phi.conj())
    numf = np.vdot(f_target, f_on_forms)
    denf = np.vdot(f_target, f_target)
    lamf = numf / denf
    f_defect = float(np.abs(f_on_forms - lamf * f_target).max())

    # pairing value: f applied to the embedded image of Omega, against <Omega, Omega>
    omega_in_s = phi.conj() @ omega.c  # S coordinates of Omega
    f_omega = f.matrix @ omega_in_s
    vac = np.zeros(4, complex)
    vac[0] = 1.0
    pairing = complex(np.vdot(vac, f_omega))
    gram = complex(omega.inner(omega))

    type_defect = (ad_action("I", omega) - 2j * omega).norm()

    return {
        "omega_is_20_type": float(type_defect),
        "e_normalization": _fmt(lam),
        "e_defect": e_defect,
        "f_normalization": _fmt(lamf),
        "f_defect": f_defect,
        "f_on_omega_vs_gram": _fmt(pairing / gram),
        "f_kills_vacuum": float(np.abs(f.matrix @ vac).max()),
    }


def dirac_block_check(theta=(0, 0, 0, 0), kmax: int = 3) -> dict:
    """Mode-level Dirac verification on (.,0)-forms.

    For each lattice mode k the operator sqrt2 (del' + del'^dagger), with
    del' the holomorphic part of the twisted flat connection symbol, must
    (a) coincide with i c(kappa) for kappa = 2 pi (k + theta), (b) square
    to 4 pi^2 |k+theta|^2 Id, and (c) swap the even and odd halves
    isomorphically off the kernel.
    """
    th = np.asarray(theta, dtype=float).reshape(4) % 1.0
    r = np.arange(-kmax, kmax + 1)
    modes = np.stack(np.meshgrid(r, r, r, r, indexing="ij"), axis=-1).reshape(-1, 4)

    max_c_defect = 0.0
    max_sq_defect = 0.0
    eig_even: dict[float, int] = {}
    eig_odd: dict[float, int] = {}
    lam_all = []
    proj_hol = 0.5 * (np.eye(4) - 1j * I)  # projector onto W components
    for k in modes:
        kappa = 2 * np.pi * (k + th)
        lam = float(kappa @ kappa)
        lam_all.append(lam)
        w = proj_hol @ kappa
        a1, a2, _, _ = _split_holomorphic(w)  # w lies in W, Wbar parts vanish
        dpr = 1j * SQRT2 * (a1 * _EPS[0] + a2 * _EPS[1])
        D = dpr + dpr.conj().T
        c_block = 1j * clifford_action(kappa).matrix
        max_c_defect = max(max_c_defect, float(np.abs(D - c_block).max()))
        max_sq_defect = max(
            max_sq_defect, float(np.abs(D @ D - lam * np.eye(4)).max())
        )
        key = round(lam, 9)
        if key > 0:
            eig_even[key] = eig_even.get(key, 0) + 2  # q = 0 and q = 2
            eig_odd[key] = eig_odd.get(key, 0) + 2  # two q = 1 states
    pairing_ok = eig_even == eig_odd

    # graded trace: per mode the ranks (1, 2, 1) cancel with alternating signs
    graded_rank = sum((-1) ** q * r for q, r in enumerate((1, 2, 1)))
    str_t1 = float(graded_rank * np.sum(np.exp(-np.array(lam_all))))

    return {
        "clifford_symbol_defect": max_c_defect,
        "square_defect_rel": max_sq_defect / (4 * np.pi**2 * max(1.0, 3 * kmax**2)),
        "square_defect": max_sq_defect,
        "even_odd_pairing": bool(pairing_ok),
        "graded_heat_trace_t1": str_t1,
    }


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------

def clifford_relation_defect() -> float:
    """max over ordered generator pairs of || {c^a, c^b} + 2 g_ab ||."""
    worst = 0.0
    for a in range(4):
        for b in range(4):
            anti = GENERATORS[a].anticommutator(GENERATORS[b]).matrix
            target = -2.0 * (a == b) * np.eye(4)
            worst = max(worst, float(np.abs(anti - target).max()))
    return worst


def conjugation_defect_sample(rng: np.random.Generator) -> float:
    """c(x) c(v) c(x)^{-1} = c(x(v)) for x = exp of a random isotropy generator."""
    phi = rng.standard_normal(3)
    gen_s = sum(p * quantize(spin_kahler_form(n)).matrix / 2 for p, n in zip(phi, STRUCTURE_NAMES))
    rot_s = expm(gen_s)
    gen_v = phi[0] * I + phi[1] * J + phi[2] * K
    rot_v = expm(gen_v)
    v = rng.standard_normal(4)
    lhs = rot_s @ clifford_action(v).matrix @ np.linalg.inv(rot_s)
    rhs = clifford_action(rot_v @ v).matrix
    return float(np.abs(lhs - rhs).max())


def vacuum_annihilation_defect() -> float:
    vac = np.zeros(4, complex)
    vac[0] = 1.0
    worst = 0.0
    for row in W_COFRAME.conj():
        worst = max(worst, float(np.abs(clifford_action(row).matrix @ vac).max()))
    return worst


def grading_eigenvalues() -> list[complex]:
    cI = quantize(spin_kahler_form("I")).matrix
    return [complex(z) for z in np.diag(cI)]


def spin_report(theta=(0, 0, 0, 0), kmax: int = 3, seed: int = 0) -> dict:
    rng = np.random.default_rng(seed)
    gamma = chirality()
    h = sl2_triple().h
    return {
        "clifford_relation_defect": clifford_relation_defect(),
        "chirality_defect": float(np.abs(gamma.matrix @ gamma.matrix - np.eye(4)).max()),
        "chirality_supertrace": _fmt(supertrace(gamma)),
        "vacuum_annihilation_defect": vacuum_annihilation_defect(),
        "conjugation_defect": max(conjugation_defect_sample(rng) for _ in range(10)),
        "sl2_table": sl2_table(),
        "grading_eigenvalues": [str(z) for z in grading_eigenvalues()],
        "h_spectrum": sorted(float(x.real) for x in np.diag(h.matrix)),
        "omega_operator": omega_operator_check(),
        "dirac_blocks": dirac_block_check(theta, kmax),
    }
