"""Constructive transgression solvers at orders one, two and four.

Given a target form satisfying the order-specific closedness and exactness
hypotheses, the potentials are built from Green-operator formulas:

    order 1:  phi =      d* G        target,   d phi                = target
    order 2:  chi = s2 * d* d_C* G^2 target,   d d_C chi            = target
    order 4:  tau = s4 * d* d_I* d_J* d_K* G^4 target,
              d d_I d_J d_K tau = target.

Reordering the product of the per-structure factors d_C d_C* G into the
iterated-differential normal form silently absorbs anticommutation signs;
the global signs s2 = -1 and s4 = +1 were calibrated once on construct-
then-solve round trips and are frozen here (regression-tested).

Preconditions are validated numerically with per-structure residual
reporting rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exterior import Multivector
from .fields import FormField, real_single_mode
from .operators import (
    d_star,
    exterior_d,
    green,
    harmonic_project,
    laplacian,
    twisted_d,
    twisted_d_star,
)
from .quaternionic import STRUCTURE_NAMES

ORDER2_SIGN = -1.0
ORDER4_SIGN = +1.0


class TransgressionError(Exception):
    """Violated precondition or inconsistent measurement."""


class NotClosed(TransgressionError):
    pass


class NotExact(TransgressionError):
    pass


class NotDCClosed(TransgressionError):
    def __init__(self, structure: str, residual: float):
        self.structure = structure
        self.residual = residual
        super().__init__(f"target is not d_{structure}-closed (residual {residual:.3e})")


class DegreeTooLow(TransgressionError):
    pass


class InconsistentConstant(TransgressionError):
    pass


@dataclass
class TransgressionResult:
    potential: FormField
    residual: float
    order: int
    sign: float
    precondition_residuals: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "order": self.order,
            "sign": self.sign,
            "residual": self.residual,
            "precondition_residuals": self.precondition_residuals,
            "potential": self.potential.to_dict(),
        }


def _rel(value: float, scale: float) -> float:
    return value / scale if scale > 0 else value


def _closedness(target: FormField) -> tuple[float, float, dict[str, float]]:
    """Relative d-closedness, harmonic content, and d_C-closedness of target."""
    scale = target.norm()
    # d multiplies coefficients by O(2 pi |k|); normalize the residual by the
    # same scale so "closed" means small relative to a generic derivative
    dscale = max(scale * 2 * np.pi, 1e-300)
    closed = exterior_d(target).norm() / dscale if scale else 0.0
    harm = _rel(harmonic_project(target).norm(), scale)
    dc = {
        name: twisted_d(target, name).norm() / dscale if scale else 0.0
        for name in STRUCTURE_NAMES
    }
    return closed, harm, dc


def transgress1(target: FormField, tol: float = 1e-9) -> TransgressionResult:
    """Solve target = d(phi) with phi = d* G target."""
    closed, harm, _ = _closedness(target)
    pre = {"d_closed": closed, "harmonic_part": harm}
    if closed > tol:
        raise NotClosed(f"target is not closed (residual {closed:.3e})")
    if harm > tol:
        raise NotExact(f"target has a harmonic part (residual {harm:.3e})")
    phi = d_star(green(target))
    rec = exterior_d(phi)
    residual = _rel((rec - target).norm(), target.norm())
    return TransgressionResult(phi, residual, 1, +1.0, pre)


def transgress2(target: FormField, c: str = "I", tol: float = 1e-9) -> TransgressionResult:
    """Solve target = d d_C(chi) with chi = s2 d* d_C* G^2 target."""
    closed, harm, dc = _closedness(target)
    pre = {"d_closed": closed, "harmonic_part": harm, f"d{c}_closed": dc[c]}
    if closed > tol:
        raise NotClosed(f"target is not closed (residual {closed:.3e})")
    if harm > tol:
        raise NotExact(f"target has a harmonic part (residual {harm:.3e})")
    if dc[c] > tol:
        raise NotDCClosed(c, dc[c])
    g2 = green(green(target))
    chi = ORDER2_SIGN * d_star(twisted_d_star(g2, c))
    rec = exterior_d(twisted_d(chi, c))
    residual = _rel((rec - target).norm(), target.norm())
    return TransgressionResult(chi, residual, 2, ORDER2_SIGN, pre)


def transgress4(target: FormField, tol: float = 1e-8) -> TransgressionResult:
    """Solve target = d d_I d_J d_K(tau), tau = s4 d* d_I* d_J* d_K* G^4 target."""
    closed, harm, dc = _closedness(target)
    pre = {"d_closed": closed, "harmonic_part": harm}
    pre.update({f"d{name}_closed": dc[name] for name in STRUCTURE_NAMES})
    if closed > tol:
        raise NotClosed(f"target is not closed (residual {closed:.3e})")
    if harm > tol:
        raise NotExact(f"target has a harmonic part (residual {harm:.3e})")
    for name in STRUCTURE_NAMES:
        if dc[name] > tol:
            raise NotDCClosed(name, dc[name])
    # admissible targets are pure top degree (the closedness conditions force
    # per-mode vol multiples); detect structural low-degree content sharply
    floor = 1e-13 * float(np.abs(target.coeffs).max(initial=0.0))
    degs = target.degrees(tol=floor)
    if degs and min(degs) < 4:
        raise DegreeTooLow(f"target has components of degree {degs}; need degree >= 4")
    g4 = target
    for _ in range(4):
        g4 = green(g4)
    tau = ORDER4_SIGN * d_star(twisted_d_star(twisted_d_star(twisted_d_star(g4, "K"), "J"), "I"))
    rec = exterior_d(twisted_d(twisted_d(twisted_d(tau, "K"), "J"), "I"))
    residual = _rel((rec - target).norm(), target.norm())
    return TransgressionResult(tau, residual, 4, ORDER4_SIGN, pre)


def quartic_differential(f: FormField) -> FormField:
    """d d_I d_J d_K applied to f."""
    return exterior_d(twisted_d(twisted_d(twisted_d(f, "K"), "J"), "I"))


def measure_lapl_constant(modes, kmax: int | None = None, tol: float = 1e-10):
    """Ratio c with d d_I d_J d_K(phi) = c * vol * Delta^2(phi), per mode.

    Each probe is the real single-mode function e^{2 pi i k.xi} + conjugate.
    The ratio is a quaternionic-isotropy scalar, so it must not depend on
    the mode; InconsistentConstant signals a sign error in the operator
    algebra if the measured spread exceeds tol.

    Returns (c, report) where report lists the per-mode ratios.
    """
    modes = [tuple(int(v) for v in np.asarray(k).reshape(4)) for k in modes]
    if any(k == (0, 0, 0, 0) for k in modes):
        raise ValueError("modes must be nonzero")
    if kmax is None:
        kmax = max(max(abs(v) for v in k) for k in modes)
    ratios = {}
    for k in modes:
        phi = real_single_mode(kmax, k, Multivector.scalar(1.0))
        lhs = quartic_differential(phi)
        rhs = laplacian(laplacian(phi))
        # both sides live on the vol blade times the same mode pair
        num = lhs.coeffs[:, 15]
        den = rhs.coeffs[:, 0]
        sel = np.abs(den) > 0
        vals = num[sel] / den[sel]
        spread_k = float(np.abs(vals - vals[0]).max())
        if spread_k > tol:
            raise InconsistentConstant(f"mode {k}: conjugate modes disagree by {spread_k:.3e}")
        ratios[k] = complex(vals[0])
    values = np.array(list(ratios.values()))
    c = complex(values.mean())
    spread = float(np.abs(values - c).max())
    if spread > tol or abs(c.imag) > tol:
        raise InconsistentConstant(
            f"constant varies across modes (spread {spread:.3e}, imag {c.imag:.3e})"
        )
    report = {
        "schema_version": 1,
        "constant": c.real,
        "spread": spread,
        "modes": [list(k) for k in ratios],
        "per_mode": {str(list(k)): v.real for k, v in ratios.items()},
        "note": (
            "published statements of this normalization constant disagree "
            "(16 in one display, 1 in the concluding line of its derivation); "
            "the value measured here against the exact mode-level oracle is "
            "authoritative for this convention"
        ),
    }
    return c.real, report
