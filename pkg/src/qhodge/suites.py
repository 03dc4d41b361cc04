"""Named verification suites aggregated by the command-line `verify`.

Each suite returns a flat dict of named residuals (floats, smaller is
better); the runner compares them against the configured tolerance.  All
randomness is drawn from generators seeded per (config seed, suite), so a
fixed config reproduces a byte-identical report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import spin, zeta
from .exterior import DEGREE, Multivector, N_BLADES, STAR, VOL, interior, wedge
from .fields import FormField, random_field, single_mode
from .operators import (
    cancellation_defect,
    conjugation_defect,
    d_star,
    exterior_d,
    grading,
    green,
    harmonic_project,
    kodaira_suite,
    laplacian,
    laplacian_hodge,
    quaternionic_d,
    quaternionic_d_star,
    rel_defect,
    twisted_d,
    twisted_d_star,
    xhat,
)
from .quaternionic import (
    AD,
    GROUP,
    I,
    J,
    K,
    Quaternion,
    STRUCTURE_NAMES,
    group_action,
    invariance_defect,
    kahler_form,
    lefschetz_dual,
    rotor_matrix,
    type_projector_matrix,
)
from .transgression import (
    NotDCClosed,
    NotExact,
    measure_lapl_constant,
    quartic_differential,
    transgress1,
    transgress2,
    transgress4,
)


@dataclass
class RunConfig:
    kmax: int = 4
    tolerance: float = 1e-10
    seed: int = 0
    theta: tuple = (0.0, 0.0, 0.0, 0.0)
    suites: tuple = ()
    out: str | None = None
    field_count: int = 20

    def __post_init__(self):
        if self.kmax < 1:
            raise ValueError("kmax must be >= 1")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        self.theta = tuple(float(v) % 1.0 for v in self.theta)


def _rng(cfg: RunConfig, tag: int) -> np.random.Generator:
    return np.random.default_rng([cfg.seed, tag])


def _random_quaternion(rng) -> Quaternion:
    return Quaternion.from_components(rng.standard_normal(4))


# ---------------------------------------------------------------------------

def suite_exterior(cfg: RunConfig) -> dict[str, float]:
    rng = _rng(cfg, 1)
    out: dict[str, float] = {}

    worst = 0.0
    for _ in range(1000):
        pa, pb = rng.integers(0, 5, size=2)
        a = Multivector((rng.standard_normal(N_BLADES) + 1j * rng.standard_normal(N_BLADES)) * (DEGREE == pa))
        b = Multivector((rng.standard_normal(N_BLADES) + 1j * rng.standard_normal(N_BLADES)) * (DEGREE == pb))
        lhs = wedge(a, b)
        rhs = (-1.0) ** (pa * pb) * wedge(b, a)
        scale = max(a.norm() * b.norm(), 1e-300)
        worst = max(worst, (lhs - rhs).norm() / scale)
    out["wedge_graded_commutativity"] = worst

    worst = 0.0
    for _ in range(300):
        v = rng.standard_normal(4)
        pa = int(rng.integers(0, 5))
        a = Multivector((rng.standard_normal(N_BLADES) + 1j * rng.standard_normal(N_BLADES)) * (DEGREE == pa))
        b = Multivector(rng.standard_normal(N_BLADES) + 1j * rng.standard_normal(N_BLADES))
        lhs = interior(v, wedge(a, b))
        rhs = wedge(interior(v, a), b) + (-1.0) ** pa * wedge(a, interior(v, b))
        scale = max(np.linalg.norm(v) * a.norm() * b.norm(), 1e-300)
        worst = max(worst, (lhs - rhs).norm() / scale)
    out["interior_derivation"] = worst

    worst = 0.0
    for m in range(N_BLADES):
        p = int(DEGREE[m])
        ss = STAR @ STAR[:, m]
        target = (-1.0) ** (p * (4 - p)) * np.eye(N_BLADES)[m]
        worst = max(worst, float(np.abs(ss - target).max()))
    out["star_involution_sign"] = worst

    gram = np.zeros((N_BLADES, N_BLADES), complex)
    for a in range(N_BLADES):
        for b in range(N_BLADES):
            ea = Multivector.blade(a)
            eb = Multivector.blade(b)
            gram[a, b] = wedge(ea, eb.conjugate().star()).c[15]
    out["blade_gram_identity"] = float(np.abs(gram - np.eye(N_BLADES)).max())
    return out


def suite_quaternionic(cfg: RunConfig) -> dict[str, float]:
    rng = _rng(cfg, 2)
    out: dict[str, float] = {}
    eye = np.eye(4)
    out["matrix_relations"] = float(
        max(
            np.abs(I @ I + eye).max(),
            np.abs(J @ J + eye).max(),
            np.abs(K @ K + eye).max(),
            np.abs(I @ J @ K + eye).max(),
        )
    )
    out["matrix_orthogonality"] = float(
        max(np.abs(m @ m.T - eye).max() for m in (I, J, K))
    )
    out["ad_commutators"] = float(
        max(
            np.abs(AD["I"] @ AD["J"] - AD["J"] @ AD["I"] - 2 * AD["K"]).max(),
            np.abs(AD["J"] @ AD["K"] - AD["K"] @ AD["J"] - 2 * AD["I"]).max(),
            np.abs(AD["K"] @ AD["I"] - AD["I"] @ AD["K"] - 2 * AD["J"]).max(),
        )
    )
    out["group_fourth_power"] = float(
        max(np.abs(np.linalg.matrix_power(GROUP[n], 4) - np.eye(16)).max() for n in STRUCTURE_NAMES)
    )

    worst = 0.0
    for n in STRUCTURE_NAMES:
        for _ in range(50):
            a = Multivector(rng.standard_normal(16) + 1j * rng.standard_normal(16))
            b = Multivector(rng.standard_normal(16) + 1j * rng.standard_normal(16))
            lhs = group_action(n, wedge(a, b))
            rhs = wedge(group_action(n, a), group_action(n, b))
            worst = max(worst, (lhs - rhs).norm() / max(a.norm() * b.norm(), 1e-300))
    out["group_multiplicativity"] = worst

    worst = 0.0
    for k in range(5):
        pairs = [(p, k - p) for p in range(max(0, k - 2), min(k, 2) + 1)]
        total = sum(type_projector_matrix("I", p, q) for p, q in pairs)
        deg = np.diag((DEGREE == k).astype(float))
        worst = max(worst, float(np.abs(total - deg).max()))
        for p, q in pairs:
            proj = type_projector_matrix("I", p, q)
            worst = max(worst, float(np.abs(proj @ proj - proj).max()))
    out["type_projector_completeness"] = worst

    omegas = {n: kahler_form(n) for n in STRUCTURE_NAMES}
    basis = np.stack([omegas[n].c for n in STRUCTURE_NAMES], axis=1)
    worst = 0.0
    for n in STRUCTURE_NAMES:
        for m in STRUCTURE_NAMES:
            image = AD[n] @ omegas[m].c
            coeff, *_ = np.linalg.lstsq(basis, image, rcond=None)
            worst = max(worst, float(np.linalg.norm(basis @ coeff - image)))
    out["kahler_triple_ad_invariant_span"] = worst

    out["kahler_selfdual_norm"] = float(
        max(
            (wedge(omegas[n], omegas[n]) - 2.0 * VOL).norm()
            for n in STRUCTURE_NAMES
        )
    )
    out["lefschetz_dual_omega"] = (
        lefschetz_dual("I", omegas["I"]) - Multivector.scalar(2.0)
    ).norm()
    out["vol_invariance"] = invariance_defect(VOL)

    worst = 0.0
    for _ in range(10):
        u = _random_quaternion(rng).normalized()
        rot = rotor_matrix(u)
        worst = max(worst, float(np.abs(rot @ VOL.c - VOL.c).max()))
        worst = max(worst, float(np.abs(rot @ rot.T - np.eye(16)).max()))
    out["rotor_preserves_vol"] = worst
    return out


def suite_operators(cfg: RunConfig) -> dict[str, float]:
    rng = _rng(cfg, 3)
    out: dict[str, float] = {}
    names = [
        "d_squared", "twisted_realizations_agree", "d_dI_anticommute",
        "relation_i_xhat_dy", "relation_ii_dx_dy", "relation_iii_dx_dy_star",
        "adjointness_d", "adjointness_dI", "adjointness_dx",
        "laplacian_vs_hodge", "hodge_decomposition", "grading_commutator",
        "conjugation_law", "realness_preserved", "laplacian_commutes_dC",
    ]
    worst = {n: 0.0 for n in names}
    for _ in range(cfg.field_count):
        f = random_field(cfg.kmax, rng)
        g = random_field(cfg.kmax, rng)
        x = _random_quaternion(rng)
        y = _random_quaternion(rng)
        u = _random_quaternion(rng).normalized()

        df = exterior_d(f)
        worst["d_squared"] = max(
            worst["d_squared"], exterior_d(df).norm() / max(df.norm(), 1e-300)
        )
        worst["twisted_realizations_agree"] = max(
            worst["twisted_realizations_agree"],
            rel_defect(twisted_d(f, "I", "group"), twisted_d(f, "I", "ad")),
        )
        a = exterior_d(twisted_d(f, "I"))
        b = twisted_d(df, "I")
        worst["d_dI_anticommute"] = max(
            worst["d_dI_anticommute"], cancellation_defect(a + b, a, b)
        )

        dyf = quaternionic_d(f, y)
        lhs = xhat(dyf, x) - quaternionic_d(xhat(f, x), y)
        worst["relation_i_xhat_dy"] = max(
            worst["relation_i_xhat_dy"], rel_defect(lhs, quaternionic_d(f, x * y))
        )
        a = quaternionic_d(quaternionic_d(f, y), x)
        b = quaternionic_d(quaternionic_d(f, x), y)
        worst["relation_ii_dx_dy"] = max(
            worst["relation_ii_dx_dy"], cancellation_defect(a + b, a, b)
        )
        a = quaternionic_d(quaternionic_d_star(f, y), x)
        b = quaternionic_d_star(quaternionic_d(f, x), y)
        rhs = (x.conjugate() * y).x0 * laplacian(f)
        worst["relation_iii_dx_dy_star"] = max(
            worst["relation_iii_dx_dy_star"],
            (a + b - rhs).norm() / max(a.norm() + b.norm(), rhs.norm(), 1e-300),
        )

        scale = max(f.norm() * g.norm(), 1e-300) * 2 * np.pi * cfg.kmax
        worst["adjointness_d"] = max(
            worst["adjointness_d"], abs(df.inner(g) - f.inner(d_star(g))) / scale
        )
        worst["adjointness_dI"] = max(
            worst["adjointness_dI"],
            abs(twisted_d(f, "I").inner(g) - f.inner(twisted_d_star(g, "I"))) / scale,
        )
        worst["adjointness_dx"] = max(
            worst["adjointness_dx"],
            abs(quaternionic_d(f, x).inner(g) - f.inner(quaternionic_d_star(g, x)))
            / (scale * abs(x)),
        )

        worst["laplacian_vs_hodge"] = max(
            worst["laplacian_vs_hodge"], rel_defect(laplacian(f), laplacian_hodge(f))
        )
        worst["hodge_decomposition"] = max(
            worst["hodge_decomposition"],
            rel_defect(harmonic_project(f) + laplacian(green(f)), f),
        )
        worst["grading_commutator"] = max(
            worst["grading_commutator"],
            rel_defect(grading(df) - exterior_d(grading(f)), df),
        )
        worst["conjugation_law"] = max(
            worst["conjugation_law"], conjugation_defect(f, u, x)
        )

        fr = random_field(cfg.kmax, rng, real=True)
        worst["realness_preserved"] = max(
            worst["realness_preserved"],
            max(
                op(fr).realness_defect()
                for op in (exterior_d, d_star, laplacian, green, harmonic_project)
            )
            / max(fr.norm(), 1e-300),
        )
        dc = twisted_d(f, "J")
        lapd = laplacian(dc)
        worst["laplacian_commutes_dC"] = max(
            worst["laplacian_commutes_dC"], rel_defect(lapd, twisted_d(laplacian(f), "J"))
        )
    out.update(worst)

    f = random_field(cfg.kmax, rng)
    doc = f.to_dict()
    back = FormField.from_dict(doc)
    out["serialization_roundtrip"] = float(np.abs(f.coeffs - back.coeffs).max())
    return out


def suite_kodaira(cfg: RunConfig, count: int | None = None) -> dict[str, float]:
    rng = _rng(cfg, 4)
    out: dict[str, float] = {}
    n = count if count is not None else cfg.field_count
    for _ in range(n):
        f = random_field(cfg.kmax, rng)
        for name, val in kodaira_suite(f).items():
            out[name] = max(out.get(name, 0.0), val)
    return out


def suite_transgression(cfg: RunConfig) -> dict[str, float]:
    rng = _rng(cfg, 5)
    out: dict[str, float] = {}
    kmax = min(cfg.kmax, 4)

    worst1 = worst2 = worst4 = worst4i = 0.0
    for _ in range(5):
        f = random_field(kmax, rng)
        worst1 = max(worst1, transgress1(exterior_d(f)).residual)
        worst2 = max(worst2, transgress2(exterior_d(twisted_d(f, "I")), "I").residual)
        sigma = random_field(kmax, rng, degree=0)
        worst4 = max(worst4, transgress4(quartic_differential(sigma)).residual)
        inv = random_field(kmax, rng, invariant=True)
        worst4i = max(worst4i, transgress4(quartic_differential(inv)).residual)
    out["transgress1_roundtrip"] = worst1
    out["transgress2_roundtrip"] = worst2
    out["transgress4_roundtrip"] = worst4
    out["transgress4_invariant_roundtrip"] = worst4i

    rejected = 0
    trials = 5
    for _ in range(trials):
        bad = exterior_d(random_field(kmax, rng, degree=1))
        try:
            transgress4(bad)
        except NotDCClosed:
            rejected += 1
    out["precondition_rejection"] = float(trials - rejected)

    harmonic = single_mode(kmax, (0, 0, 0, 0), VOL)
    try:
        transgress4(harmonic)
        out["exactness_detection"] = 1.0
    except NotExact:
        out["exactness_detection"] = 0.0

    probe_modes = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (1, 1, 1, 1), (2, -1, 0, 1)]
    c, report = measure_lapl_constant(probe_modes)
    out["lapl_constant_spread"] = report["spread"]
    return out


def suite_zeta(cfg: RunConfig) -> dict[str, float]:
    out: dict[str, float] = {}
    for h in (0.5, 2.0, 10.0):
        val, _ = zeta.regularized_integral(lambda t: math.exp(-h * t), {0: 1.0})
        out[f"regint_exp_h{h}"] = abs(val + math.log(h))
    val, _ = zeta.regularized_integral(lambda t: -t * math.exp(-t), {})
    out["regint_total_derivative"] = abs(val + 1.0)
    val, _ = zeta.regularized_integral(
        lambda t: 9 * t * t * math.exp(-3 * t) - 6 * t * math.exp(-3 * t), {}
    )
    out["regint_second_order"] = abs(val + 1.0)
    val, _ = zeta.regularized_integral(lambda t: math.exp(-t) - math.exp(-2 * t), {})
    out["regint_matches_convergent"] = abs(val - math.log(2.0))

    out["poisson_consistency_t0.1"] = abs(
        zeta.heat_trace_direct((0, 0, 0, 0), 0.1) - zeta.heat_trace_dual((0, 0, 0, 0), 0.1)
    )

    res = zeta.log_det_prime(theta=(0, 0, 0, 0), fiber_rank=1, method="both")
    out["zeta_method_agreement"] = res.details["method_gap"]
    r1 = zeta.log_det_prime(theta=(0, 0, 0, 0), method="mellin_split", split=0.5)
    r2 = zeta.log_det_prime(theta=(0, 0, 0, 0), method="mellin_split", split=2.0)
    out["zeta_split_independence"] = abs(r1.log_det_prime - r2.log_det_prime)
    rc = zeta.log_det_prime(theta=(0, 0, 0, 0), scale=2.0, method="mellin_split")
    out["zeta_scaling_identity"] = abs(
        rc.log_det_prime - (res.log_det_prime - math.log(2.0))
    )

    for label, th in (("untwisted", (0.0, 0.0, 0.0, 0.0)), ("twisted", cfg.theta)):
        rep = zeta.torsion_report(th)
        out[f"torsion_T_{label}"] = rep["identity_residuals"]["abs(T - 1)"]
        out[f"hyper_torsion_{label}"] = rep["identity_residuals"]["rel(T_h - det0^2)"]
        out[f"beta0_identity_{label}"] = rep["identity_residuals"]["abs(beta0 - 3 log T_h)"]
    for t in (0.1, 1.0, 10.0):
        out[f"susy_cancellation_t{t}"] = abs(zeta.alternating_heat_sum((0, 0, 0, 0), t))
    return out


def suite_clifford(cfg: RunConfig) -> dict[str, float]:
    rep = spin.spin_report(theta=cfg.theta, kmax=min(cfg.kmax, 3), seed=cfg.seed)
    out = {
        "clifford_relation": rep["clifford_relation_defect"],
        "chirality_squares_to_one": rep["chirality_defect"],
        "chirality_supertrace": abs(rep["chirality_supertrace"] - 4.0),
        "vacuum_annihilation": rep["vacuum_annihilation_defect"],
        "spin_conjugation_law": rep["conjugation_defect"],
        "sl2_closure": max(v["residual"] for v in rep["sl2_table"].values()),
        "sl2_ef_h": abs(rep["sl2_table"]["[e,f]"]["h"] - 1.0),
        "grading_eigenvalues": max(
            abs(complex(z) - 1j * (2 * q - 2))
            for z, q in zip(rep["grading_eigenvalues"], (0, 1, 1, 2))
        ),
        "h_spectrum": max(
            abs(a - b) for a, b in zip(rep["h_spectrum"], (-1.0, 0.0, 0.0, 1.0))
        ),
        "omega_is_20_type": rep["omega_operator"]["omega_is_20_type"],
        "prop_forms_e": rep["omega_operator"]["e_defect"],
        "prop_forms_f": rep["omega_operator"]["f_defect"],
        "vacuum_contraction": rep["omega_operator"]["f_kills_vacuum"],
        "dirac_symbol": rep["dirac_blocks"]["clifford_symbol_defect"],
        "dirac_square": rep["dirac_blocks"]["square_defect_rel"],
        "dirac_even_odd_pairing": 0.0 if rep["dirac_blocks"]["even_odd_pairing"] else 1.0,
        "dirac_graded_trace": abs(rep["dirac_blocks"]["graded_heat_trace_t1"]),
    }
    return out


SUITES = {
    "exterior": suite_exterior,
    "quaternionic": suite_quaternionic,
    "operators": suite_operators,
    "kodaira": suite_kodaira,
    "transgression": suite_transgression,
    "zeta": suite_zeta,
    "clifford": suite_clifford,
}


def run_suites(cfg: RunConfig) -> dict:
    """Run the selected suites and assemble the verification report."""
    selected = cfg.suites or tuple(SUITES)
    unknown = [s for s in selected if s not in SUITES]
    if unknown:
        raise KeyError(f"unknown suite(s): {', '.join(unknown)}")
    report = {
        "schema_version": 1,
        "config": {
            "kmax": cfg.kmax,
            "tolerance": cfg.tolerance,
            "seed": cfg.seed,
            "theta": list(cfg.theta),
            "suites": list(selected),
            "field_count": cfg.field_count,
        },
        "structure_matrices": {
            "I": I.tolist(),
            "J": J.tolist(),
            "K": K.tolist(),
        },
        "suites": {},
    }
    overall_max = 0.0
    all_pass = True
    first_failure = None
    for name in selected:
        residuals = SUITES[name](cfg)
        failures = sorted(k for k, v in residuals.items() if not (v <= cfg.tolerance))
        suite_max = max(residuals.values()) if residuals else 0.0
        overall_max = max(overall_max, suite_max)
        ok = not failures
        all_pass = all_pass and ok
        if failures and first_failure is None:
            first_failure = f"{name}:{failures[0]}"
        report["suites"][name] = {
            "checks": {
                k: {"residual": v, "pass": bool(v <= cfg.tolerance)}
                for k, v in residuals.items()
            },
            "max_residual": suite_max,
            "pass": ok,
        }
    report["max_residual"] = overall_max
    report["all_pass"] = all_pass
    if first_failure:
        report["first_failure"] = first_failure
    return report
