"""Named verification checks: certificates, oracles, invariances, tilings.

Each check returns a CheckResult; the CLI prints one PASS/FAIL line per
check and exits nonzero when anything fails.  The ``fast`` level keeps all
sweeps small; ``full`` runs the release-size sweeps (large certificate
samples, grid 1000 oracles, the ell = 400 density sweep).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .optimizer import (
    ApproximationKind,
    ApproximationSpec,
    TABLE_ORDER,
    area_sq_from_k,
    box_endpoints,
    brute_force_geometric,
    brute_force_reduced,
    optimal_triangle,
    type_a_objective,
)
from .quadform import (
    LinearPiece,
    QuadraticForm,
    axis_reflect_piece,
    evaluate,
    pe_motion,
    point_reflect_piece,
    quadratic_coefficients_in_standard,
    reduce_to_standard,
    translate_piece,
)
from .triangle_error import (
    Deviations,
    Triangle,
    edge_product,
    max_abs_error_triangle,
    plane_from_deviations,
)
from .tiling import build_tiling, continuity_report, density_estimate

DEFAULT_SEED = 20260810

#: Optimal area divided by epsilon, per approximation class.
AREA_FACTORS = {
    ApproximationKind.GENERAL: 32.0 * math.sqrt(3.0) / 9.0,
    ApproximationKind.CONTINUOUS: 8.0 * math.sqrt(3.0) / 3.0,
    ApproximationKind.INTERPOLATION: 2.0 * math.sqrt(5.0),
    ApproximationKind.OVERESTIMATION: 16.0 * math.sqrt(3.0) / 9.0,
    ApproximationKind.UNDERESTIMATION: 16.0 * math.sqrt(3.0) / 9.0,
    ApproximationKind.CONTINUOUS_OVERESTIMATION: 4.0 * math.sqrt(3.0) / 3.0,
    ApproximationKind.CONTINUOUS_UNDERESTIMATION: 4.0 * math.sqrt(3.0) / 3.0,
}

#: (k, d1, d23, lambda_ascending, lambda_descending) per epsilon.
PARAMETER_TABLE = {
    ApproximationKind.GENERAL: (32.0 / 9.0, -1.0, 7.0 / 9.0, 0.75, 0.5),
    ApproximationKind.CONTINUOUS: (8.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.5, 0.5),
    ApproximationKind.INTERPOLATION: (4.0, 0.0, 0.0, 0.5, 0.5),
    ApproximationKind.OVERESTIMATION: (16.0 / 9.0, 0.0, 8.0 / 9.0, 0.75, 0.5),
    ApproximationKind.CONTINUOUS_OVERESTIMATION:
        (4.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0, 0.5, 0.5),
    ApproximationKind.UNDERESTIMATION: (16.0 / 9.0, -1.0, -1.0 / 9.0, 0.75, 0.5),
    ApproximationKind.CONTINUOUS_UNDERESTIMATION:
        (4.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0, 0.5, 0.5),
}


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def _rel_err(value: float, expected: float) -> float:
    return abs(value - expected) / max(abs(expected), 1e-300)


def random_indefinite_form(rng: np.random.Generator) -> QuadraticForm:
    """A random form with strictly negative discriminant."""
    while True:
        a, b, c, d, e, g = rng.uniform(-2.0, 2.0, size=6)
        if a * c - b * b < -1e-3:
            return QuadraticForm(a, b, c, d, e, g)


def check_table1(tamper: str | None = None) -> CheckResult:
    worst = 0.0
    for kind in TABLE_ORDER:
        sol = optimal_triangle(ApproximationSpec(kind, 1.0))
        expected_area = AREA_FACTORS[kind]
        if tamper == "table1":
            expected_area *= 1.0 + 1e-6
        worst = max(worst, _rel_err(sol.area, expected_area),
                    _rel_err(sol.density, 1.0 / expected_area))
    return CheckResult("table1-areas-densities", worst <= 1e-12,
                       f"worst relative error {worst:.3e} (tol 1e-12)")


def check_table2() -> CheckResult:
    worst = 0.0
    for kind in TABLE_ORDER:
        sol = optimal_triangle(ApproximationSpec(kind, 1.0))
        k, d1, d23, lam1, lam3 = PARAMETER_TABLE[kind]
        for value, expected in ((sol.k_ascending, k), (sol.deviations.d1, d1),
                                (sol.deviations.d2, d23), (sol.deviations.d3, d23),
                                (sol.lambda_ascending, lam1),
                                (sol.lambda_descending, lam3)):
            worst = max(worst, abs(value - expected) / max(abs(expected), 1.0))
    return CheckResult("table2-parameters", worst <= 1e-12,
                       f"worst relative error {worst:.3e} (tol 1e-12)")


def check_tightness() -> CheckResult:
    worst = 0.0
    for kind in TABLE_ORDER:
        for eps in (1.0, 0.37):
            sol = optimal_triangle(ApproximationSpec(kind, eps))
            err = max_abs_error_triangle(sol.vertices, sol.deviations)
            worst = max(worst, abs(err - eps) / eps)
    return CheckResult("optimum-tightness", worst <= 1e-9,
                       f"worst |error - eps|/eps {worst:.3e} (tol 1e-9)")


def check_certificate_identity(n: int, seed: int) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst_rel = 0.0
    min_term = math.inf
    for sigma in (1.0, 2.0):
        root = math.sqrt(sigma)
        a = rng.uniform(0.0, root, n)
        b = rng.uniform(0.0, root, n)
        gap = 1024.0 * sigma ** 2 / 27.0 - 16.0 * (sigma - b ** 2) * (sigma + a ** 2 + 2 * a * b)
        term1 = (32.0 * root / 27.0) * (3.0 * b - root) ** 2 * (3.0 * b + 5.0 * root)
        term2 = 16.0 * (sigma - b ** 2) * (root - a) * (root + a + 2.0 * b)
        denom = np.maximum(np.abs(gap), sigma ** 2)
        worst_rel = max(worst_rel, float(np.max(np.abs(gap - term1 - term2) / denom)))
        min_term = min(min_term, float(term1.min()), float(term2.min()))
    ok = worst_rel <= 1e-10 and min_term >= -1e-12
    return CheckResult("certificate-identity", ok,
                       f"split residual {worst_rel:.3e}, min term {min_term:.3e}")


def check_combined_certificate(n: int, seed: int) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = -math.inf
    for sigma in (1.0, 2.0):
        root = math.sqrt(sigma)
        a1, a2, a3 = rng.uniform(0.0, root, size=(3, n))
        b2 = np.sqrt(sigma - a2 ** 2)
        b3 = np.sqrt(sigma - a3 ** 2)
        p12 = (a1 + a2) ** 2
        p13 = (a1 + a3) ** 2
        p23 = (a2 + a3) ** 2
        q = (b2 + b3) ** 2
        bound = 1024.0 * sigma ** 2 / 27.0
        top = -np.inf
        for k1 in (np.zeros(n), p12):
            for k2 in (np.zeros(n), p13):
                for k3 in (-q, p23):
                    top = np.maximum(top, (k1 + k2 - k3) ** 2 - 4.0 * k1 * k2)
        worst = max(worst, float(np.max(top - bound)))
    return CheckResult("combined-certificate", worst <= 1e-9,
                       f"max excess over 1024*sigma^2/27 is {worst:.3e} (tol 1e-9)")


def check_symmetry(n: int, seed: int) -> CheckResult:
    rng = np.random.default_rng(seed)
    sigma = 2.0
    root = math.sqrt(sigma)
    failures = 0
    for _ in range(n):
        a1 = rng.uniform(0.0, root)
        abar = rng.uniform(1e-6, root - 1e-9)
        hmax = min(abar, root - abar)
        h = rng.uniform(0.0, hmax)
        if h <= 0.0:
            continue
        skew = type_a_objective(a1, abar + h, abar - h, sigma)
        even = type_a_objective(a1, abar, abar, sigma)
        if not skew < even:
            failures += 1
    return CheckResult("symmetry-inequality", failures == 0,
                       f"{failures} of {n} skewed slack pairs beat the symmetric one")


def check_type_b_identity(n: int, seed: int) -> CheckResult:
    rng = np.random.default_rng(seed)
    sigma = 2.0
    a1, a2, a3 = rng.uniform(0.0, math.sqrt(sigma), size=(3, n))
    lhs = ((a1 + a2) ** 2 + (a1 + a3) ** 2 - (a2 + a3) ** 2) ** 2 \
        - 4.0 * (a1 + a2) ** 2 * (a1 + a3) ** 2
    rhs = -16.0 * a1 * a2 * a3 * (a1 + a2 + a3)
    rel = np.abs(lhs - rhs) / np.maximum(np.abs(rhs), 1.0)
    worst = float(np.max(rel))
    return CheckResult("type-b-closed-form", worst <= 1e-10,
                       f"worst relative mismatch {worst:.3e} (tol 1e-10)")


def check_reduced_oracle(grid_n: int, workers: int,
                         sigmas=(1.0, 2.0)) -> CheckResult:
    details = []
    ok = True
    cases = []
    for sigma in sigmas:
        cases.append((ApproximationKind.GENERAL, sigma / 2.0, sigma))
        cases.append((ApproximationKind.OVERESTIMATION, sigma, sigma))
        cases.append((ApproximationKind.UNDERESTIMATION, sigma, sigma))
    for kind, eps, sigma in cases:
        spec = ApproximationSpec(kind, eps)
        result = brute_force_reduced(spec, grid_n, workers=workers)
        closed = optimal_triangle(spec).area
        rel = _rel_err(result.area, closed)
        step = math.sqrt(sigma) / (grid_n - 1)
        target = (math.sqrt(sigma), math.sqrt(sigma) / 3.0, math.sqrt(sigma) / 3.0)
        arg_off = max(abs(x - t) for x, t in zip(result.argmax, target))
        ok = ok and rel <= 1e-4 and arg_off <= step + 1e-12
        details.append(f"{kind.value}@sigma={sigma}: rel {rel:.2e}, argmax off {arg_off:.2e}")
    # constant-deviation sweep finds delta* = eps/3
    res = brute_force_reduced(ApproximationSpec(ApproximationKind.CONTINUOUS, 1.0), 100001)
    ok = ok and abs(res.argmax[0] - 1.0 / 3.0) <= 1e-4
    details.append(f"continuous delta* {res.argmax[0]:.6f}")
    return CheckResult("reduced-space-oracle", ok, "; ".join(details))


def check_geometric_oracle(samples: int, seed: int, workers: int) -> CheckResult:
    spec = ApproximationSpec(ApproximationKind.GENERAL, 1.0)
    best = brute_force_geometric(spec, samples, seed, workers=workers)
    closed = optimal_triangle(spec).area
    ok = best <= closed + 1e-6 and best >= 0.95 * closed
    return CheckResult("geometric-oracle", ok,
                       f"best sampled area {best:.9f} vs closed form {closed:.9f}")


def check_invariance(n: int, seed: int) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        qf = QuadraticForm(*rng.uniform(-2.0, 2.0, size=6))
        piece = LinearPiece(*rng.uniform(-2.0, 2.0, size=3))
        t = rng.uniform(-3.0, 3.0, size=2)
        p = rng.uniform(-3.0, 3.0, size=2)
        scale = max(1.0, abs(evaluate(qf, p) - piece(p)))

        shifted = translate_piece(piece, qf, t)
        lhs = evaluate(qf, p + t) - shifted(p + t)
        rhs = evaluate(qf, p) - piece(p)
        worst = max(worst, abs(lhs - rhs) / scale)

        mirrored = point_reflect_piece(piece, qf)
        lhs = evaluate(qf, -p) - mirrored(-p)
        worst = max(worst, abs(lhs - rhs) / scale)

        reflected = axis_reflect_piece(piece, "x")
        err_orig = piece(p) - p[0] * p[1]
        err_refl = reflected((p[0], -p[1])) - p[0] * (-p[1])
        worst = max(worst, abs(abs(err_refl) - abs(err_orig)) / scale)

        m = math.exp(rng.uniform(-1.5, 1.5))
        q = pe_motion(pe_motion(p, m), 1.0 / m)
        worst = max(worst, abs(q[0] - p[0]) + abs(q[1] - p[1]))
    return CheckResult("invariance-identities", worst <= 1e-9,
                       f"worst identity residual {worst:.3e} (tol 1e-9)")


def check_pe_edge_products(n: int, seed: int) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        tri = Triangle(*(tuple(v) for v in rng.uniform(-3.0, 3.0, size=(3, 2))))
        if tri.is_degenerate:
            continue
        m = math.exp(rng.uniform(-1.0, 1.0))
        moved = Triangle(pe_motion(tri.v1, m), pe_motion(tri.v2, m),
                         pe_motion(tri.v3, m))
        for p, q in (((tri.v1, tri.v2), (moved.v1, moved.v2)),
                     ((tri.v1, tri.v3), (moved.v1, moved.v3)),
                     ((tri.v2, tri.v3), (moved.v2, moved.v3))):
            k0 = edge_product(*p)
            k1 = edge_product(*q)
            worst = max(worst, abs(k0 - k1) / max(abs(k0), 1.0))
        worst = max(worst, abs(tri.area - moved.area) / max(tri.area, 1.0))
    return CheckResult("pe-motion-preservation", worst <= 1e-12,
                       f"worst product/area drift {worst:.3e} (tol 1e-12)")


def transported_error_bound(qf: QuadraticForm, grid: int = 60) -> tuple[float, float]:
    """(sampled max |G - approximant|, |kappa| * eps_std) after transporting.

    Reduces the form, takes the general optimal triangle at the rescaled
    budget eps_std = eps / |kappa| with eps = 1, maps it back through the
    inverse change of variables and pairs it with the pulled-back piece plus
    the form's own linear terms.
    """
    red = reduce_to_standard(qf)
    eps_std = 1.0 / abs(red.kappa)
    sol = optimal_triangle(ApproximationSpec(ApproximationKind.GENERAL, eps_std))
    piece_std = plane_from_deviations(sol.vertices, sol.deviations)
    verts = [red.from_standard(v) for v in sol.vertices.vertices]
    lam = np.linspace(0.0, 1.0, grid)
    l1, l2 = np.meshgrid(lam, lam)
    keep = l1 + l2 <= 1.0
    l1, l2 = l1[keep], l2[keep]
    l0 = 1.0 - l1 - l2
    xs = l0 * verts[0][0] + l1 * verts[1][0] + l2 * verts[2][0]
    ys = l0 * verts[0][1] + l1 * verts[1][1] + l2 * verts[2][1]
    (p00, p01), (p10, p11) = red.phi
    us = p00 * xs + p01 * ys
    vs = p10 * xs + p11 * ys
    approx = (red.kappa * (piece_std.alpha * us + piece_std.beta * vs + piece_std.gamma)
              + qf.d * xs + qf.e * ys + qf.g)
    values = (qf.a * xs ** 2 + 2.0 * qf.b * xs * ys + qf.c * ys ** 2
              + qf.d * xs + qf.e * ys + qf.g)
    return float(np.max(np.abs(values - approx))), abs(red.kappa) * eps_std


def check_reduction(n_forms: int, seed: int) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst_coeff = 0.0
    worst_excess = -math.inf
    for _ in range(n_forms):
        qf = random_indefinite_form(rng)
        red = reduce_to_standard(qf)
        cu2, cuv, cv2 = quadratic_coefficients_in_standard(qf, red)
        scale = max(abs(qf.a), abs(qf.b), abs(qf.c))
        worst_coeff = max(worst_coeff, abs(cu2) / scale, abs(cv2) / scale)
        worst_coeff = max(worst_coeff, abs(cuv - red.kappa) / max(abs(red.kappa), scale))
        sampled, budget = transported_error_bound(qf)
        worst_excess = max(worst_excess, (sampled - budget) / budget)
    ok = worst_coeff <= 1e-12 and worst_excess <= 1e-8
    return CheckResult("standard-form-reduction", ok,
                       f"worst residual coefficient {worst_coeff:.3e}, "
                       f"worst transported excess {worst_excess:.3e}")


def check_tiling_density(ells: tuple[float, ...]) -> CheckResult:
    sol = optimal_triangle(ApproximationSpec(ApproximationKind.GENERAL, 1.0))
    tiling = build_tiling(sol, max(ells))
    target = sol.density
    residuals = [abs(density_estimate(tiling, ell) - target) / target for ell in ells]
    monotone = all(residuals[i + 1] <= residuals[i] for i in range(len(residuals) - 1))
    final_tol = 0.02 if max(ells) >= 400 else 0.10
    ok = residuals[-1] <= final_tol and monotone
    detail = ", ".join(f"ell={ell:g}: {r:.4f}" for ell, r in zip(ells, residuals))
    return CheckResult("tiling-density", ok, f"relative residuals {detail}")


def check_tiling_continuity() -> CheckResult:
    ok = True
    details = []
    for kind in (ApproximationKind.CONTINUOUS, ApproximationKind.INTERPOLATION,
                 ApproximationKind.CONTINUOUS_OVERESTIMATION,
                 ApproximationKind.CONTINUOUS_UNDERESTIMATION):
        sol = optimal_triangle(ApproximationSpec(kind, 1.0))
        vertex_jump, edge_jump = continuity_report(build_tiling(sol, 20.0))
        ok = ok and vertex_jump <= 1e-10 and edge_jump <= 1e-10
        details.append(f"{kind.value}: ({vertex_jump:.2e}, {edge_jump:.2e})")
    sol = optimal_triangle(ApproximationSpec(ApproximationKind.GENERAL, 1.0))
    vertex_jump, _ = continuity_report(build_tiling(sol, 20.0))
    expected = 16.0 / 9.0
    ok = ok and abs(vertex_jump - expected) <= 1e-9
    details.append(f"general vertex jump {vertex_jump:.12f} (expect {expected:.12f})")
    return CheckResult("tiling-continuity", ok, "; ".join(details))


def run_checks(level: str = "fast", seed: int = DEFAULT_SEED,
               workers: int = 1, tamper: str | None = None) -> list[CheckResult]:
    if level not in ("fast", "full"):
        raise ValueError(f"level must be 'fast' or 'full', got {level!r}")
    full = level == "full"
    results = [
        check_table1(tamper),
        check_table2(),
        check_tightness(),
        check_certificate_identity(1_000_000 if full else 100_000, seed),
        check_combined_certificate(100_000 if full else 10_000, seed + 1),
        check_symmetry(10_000 if full else 1_000, seed + 2),
        check_type_b_identity(100_000, seed + 3),
        check_reduced_oracle(1000 if full else 200, workers),
        check_geometric_oracle(1_000_000 if full else 100_000, seed + 4, workers),
        check_invariance(1_000, seed + 5),
        check_pe_edge_products(1_000, seed + 6),
        check_reduction(100 if full else 25, seed + 7),
        check_tiling_density((50.0, 100.0, 200.0, 400.0) if full else (50.0, 100.0)),
        check_tiling_continuity(),
    ]
    return results


def format_report(results: list[CheckResult]) -> str:
    lines = []
    for r in results:
        lines.append(f"{'PASS' if r.passed else 'FAIL'}  {r.name}: {r.detail}")
    failed = sum(1 for r in results if not r.passed)
    lines.append(f"{len(results) - failed}/{len(results)} checks passed")
    return "\n".join(lines)
