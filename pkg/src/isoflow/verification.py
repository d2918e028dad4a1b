"""Built-in verification grid and cross-checks.

The grid spans all nine families (about fifty instances, including flipped
orientations and minimal surfaces).  Checks cross-validate the closed-form
profiles against the numerical ODE engine, the collapse analysis against the
catalog's predicted focal dimensions, and the algebraic identities the
curvature parametrizations must satisfy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import catalog, closed_form, collapse, embedding, flow_ode
from .catalog import (
    make_euclidean_cylinder,
    make_horosphere,
    make_hyperbolic_cylinder,
    make_hyperbolic_umbilic,
    make_minimal,
    make_sphere_product,
    make_sphere_umbilic,
    sphere_curvature_ladder,
    sphere_curvatures_from_g,
    sphere_family_from_kappa1,
)
from .errors import UnsupportedEmbeddingError
from .spaceform import EUCLIDEAN, HYPERBOLIC, SPHERE, cs_eval

ORACLE_TOL = 1e-8
ODE_RESIDUAL_TOL = 1e-6
TSTAR_TOL = 1e-7
PYTHAGOREAN_TOL = 1e-10
XI_ZERO_TOL = 1e-12
# Evaluating xi at t* itself clamps q to its analytic zero, leaving an
# O(sqrt(eps)) ~ 1e-8 limit error; 1e-6 is the stated focal-residual bound.
FOCAL_LIMIT_TOL = 1e-6
ETERNAL_WINDOW = 10.0


@dataclass(frozen=True)
class CheckResult:
    check: str
    label: str
    passed: bool
    detail: str


def builtin_grid():
    """Labelled surfaces spanning every family, including flipped and minimal ones."""
    grid = []

    def add(label, surface):
        grid.append((label, surface))

    for m, n, k in [(2, 2, 1.0), (1, 2, 1.0), (1, 3, -2.0), (2, 3, 0.7),
                    (3, 3, 1.5), (1, 4, 0.5), (2, 5, -0.9)]:
        add(f"euclidean m={m} n={n} kappa={k}", make_euclidean_cylinder(m, n, k))
    for n, k in [(1, 1.0), (3, 1.0), (2, -1.0), (5, -1.0)]:
        add(f"horosphere n={n} kappa={k}", make_horosphere(n, k))
    for n, k in [(2, 2.0), (2, 0.5), (3, -0.8), (1, 0.3), (2, -3.0), (4, 1.5), (1, 1.2)]:
        add(f"hyperbolic umbilic n={n} kappa={k}", make_hyperbolic_umbilic(n, k))
    for m1, m2, k1 in [(1, 1, 2.0), (2, 3, 3.0), (1, 2, 1.5), (3, 1, 1.2), (2, 2, 2.5)]:
        add(f"hyperbolic cylinder m1={m1} m2={m2} kappa1={k1}",
            make_hyperbolic_cylinder(m1, m2, k1))
    for n, k in [(2, 1.0), (2, -1.0), (3, 2.0), (5, 0.3), (4, -0.7)]:
        add(f"sphere umbilic n={n} kappa={k}", make_sphere_umbilic(n, k))
    for l, n, k1 in [(1, 2, 2.0), (2, 5, 2.0), (1, 3, 1.5), (3, 7, 1.3), (2, 4, 1.1)]:
        add(f"sphere product l={l} n={n} kappa1={k1}", make_sphere_product(l, n, k1))
    add("sphere g2 flipped s=1.2 mults=(1,2)", sphere_curvatures_from_g(2, 1.2, [1, 2]))
    for m, k1 in [(1, 2.0), (2, 3.0), (4, 1.2), (8, 5.0), (1, 1.0)]:
        add(f"sphere g3 m={m} kappa1={k1}", sphere_family_from_kappa1(3, k1, [m] * 3))
    for m1, m2, k1 in [(1, 1, 3.0), (2, 1, 2.6), (1, 2, 4.0), (2, 2, 3.0),
                       (1, 1, 2.0), (3, 2, 3.2)]:
        add(f"sphere g4 m1={m1} m2={m2} kappa1={k1}",
            sphere_family_from_kappa1(4, k1, [m1, m2, m1, m2]))
    for m, k1 in [(1, 4.0), (2, 5.0), (1, 2.0), (2, 3.0), (1, 6.0)]:
        add(f"sphere g6 m={m} kappa1={k1}", sphere_family_from_kappa1(6, k1, [m] * 6))
    add("minimal clifford", make_minimal(SPHERE, [(1.0, 1), (-1.0, 1)]))
    add("minimal equator n=3", make_minimal(SPHERE, [(0.0, 3)]))
    add("minimal g3 kappa1=sqrt3",
        make_minimal(SPHERE, sphere_family_from_kappa1(3, math.sqrt(3.0)).blocks,
                     family="sphere_g3"))
    return grid


def _sample_window(profile, n_points):
    """Forward sample times: [0, 0.99 t*] or [0, 10] for eternal flows."""
    t_star = profile.t_star
    hi = 0.99 * t_star if math.isfinite(t_star) else ETERNAL_WINDOW
    return np.linspace(0.0, hi, n_points)


# ---------------------------------------------------------------------------
# per-instance checks

def check_validation(label, surface, opts):
    rebuilt = catalog.surface_from_dict(surface.to_dict())
    ok = rebuilt.to_dict() == surface.to_dict()
    return CheckResult("validation", label, ok, "JSON round-trip re-validates")


def check_oracle_agreement(label, surface, opts):
    profile = closed_form.resolve_profile(surface)
    ts = _sample_window(profile, 200)
    numeric = flow_ode.integrate(surface, float(ts[-1]), opts) if ts[-1] > 0 else None
    if numeric is None:
        return CheckResult("oracle-agreement", label, True, "degenerate window")
    diff = float(np.max(np.abs(profile.xi(ts) - numeric.xi(ts))))
    return CheckResult(
        "oracle-agreement", label, diff <= ORACLE_TOL,
        f"max |xi_closed - xi_ode| = {diff:.3e} (tol {ORACLE_TOL:g})",
    )


def check_ode_residual(label, surface, opts):
    profile = closed_form.resolve_profile(surface)
    t_star = profile.t_star
    hi = 0.99 * t_star if math.isfinite(t_star) else ETERNAL_WINDOW
    margin = hi / 200.0
    ts = np.linspace(margin, hi - margin, 100)
    worst = 0.0
    for t in ts:
        # Stencil step shrinks toward the collapse time, where the higher
        # derivatives of xi grow like (t* - t)^(1/2 - order).
        h = min(1e-5, (t_star - t) / 400.0)
        deriv = (
            -profile.xi(t + 2 * h) + 8 * profile.xi(t + h)
            - 8 * profile.xi(t - h) + profile.xi(t - 2 * h)
        ) / (12.0 * h)
        worst = max(worst, abs(deriv - flow_ode.rhs(surface, profile.xi(t))))
    return CheckResult(
        "ode-residual", label, worst <= ODE_RESIDUAL_TOL,
        f"max |d xi/dt - H| = {worst:.3e} (tol {ODE_RESIDUAL_TOL:g})",
    )


def check_tstar_consistency(label, surface, opts):
    profile = closed_form.resolve_profile(surface)
    t_num = flow_ode.estimate_tstar(surface, opts)
    if math.isinf(profile.t_star) or math.isinf(t_num):
        ok = math.isinf(profile.t_star) and math.isinf(t_num)
        return CheckResult("tstar-consistency", label, ok,
                           f"closed {profile.t_star}, ode {t_num}")
    diff = abs(profile.t_star - t_num)
    return CheckResult(
        "tstar-consistency", label, diff <= TSTAR_TOL,
        f"|t*_closed - t*_ode| = {diff:.3e} (tol {TSTAR_TOL:g})",
    )


def check_focal_dimension(label, surface, opts):
    profile = closed_form.resolve_profile(surface)
    report = collapse.analyze(surface, profile)
    expected = collapse.focal_dimension_expected(surface)
    if expected is None:
        return CheckResult("focal-dimension", label, True,
                           f"no stated claim (limit {report.limit_kind})")
    ok = report.focal_dimension == expected
    return CheckResult(
        "focal-dimension", label, ok,
        f"analyze {report.focal_dimension} vs predicted {expected}",
    )


def check_focal_condition(label, surface, opts):
    """Focal identity at the exact collapse limit: the degenerate block's
    curvature equals the cot/coth/1-over slope of xi(t*)."""
    profile = closed_form.resolve_profile(surface)
    if not math.isfinite(profile.t_star):
        return CheckResult("focal-condition", label, True, "eternal flow")
    report = collapse.analyze(surface, profile)
    xi_star = profile.xi_star
    k_deg = surface.blocks[report.degenerate_block_index].kappa
    residual = abs(collapse._inverse_slope(surface.space_form, xi_star) - k_deg)
    return CheckResult(
        "focal-condition", label, residual <= FOCAL_LIMIT_TOL,
        f"|slope(xi*) - kappa_deg| = {residual:.3e} (tol {FOCAL_LIMIT_TOL:g})",
    )


def check_pythagorean(label, surface, opts):
    profile = closed_form.resolve_profile(surface)
    pair_probe = profile.angle_pair(0.0)
    if pair_probe is None:
        return CheckResult("pythagorean", label, True, "family has no pair form")
    _, _, _, geometry = pair_probe
    t_star = profile.t_star
    hi = t_star if math.isfinite(t_star) else ETERNAL_WINDOW
    # Hyperbolic pairs grow exponentially backward in time; keep the sampled
    # window where the identity is representable in doubles.
    if geometry == "hyperbolic":
        lo = -2.0 / surface.n
    else:
        lo = -2.0
    ts = np.linspace(lo, hi, 1000)
    co, si, _, _ = profile.angle_pair(ts)
    if geometry == "circular":
        worst = float(np.max(np.abs(co * co + si * si - 1.0)))
    else:
        worst = float(np.max(np.abs(co * co - si * si - 1.0)))
    return CheckResult(
        "pythagorean", label, worst <= PYTHAGOREAN_TOL,
        f"max |pair identity residual| = {worst:.3e} (tol {PYTHAGOREAN_TOL:g})",
    )


def check_xi_zero(label, surface, opts):
    profile = closed_form.resolve_profile(surface)
    value = abs(profile.xi(0.0))
    return CheckResult(
        "xi-zero", label, value <= XI_ZERO_TOL,
        f"|xi(0)| = {value:.3e} (tol {XI_ZERO_TOL:g})",
    )


def check_embedding_constraints(label, surface, opts):
    try:
        embedding.get_embedding(surface)
    except UnsupportedEmbeddingError:
        return CheckResult("embedding-constraints", label, True, "no embedding")
    profile = closed_form.resolve_profile(surface)
    t_star = profile.t_star
    times = [0.0, 0.5, 1.0] if math.isinf(t_star) else [0.0, 0.5 * t_star, 0.9 * t_star]
    import warnings

    for t in times:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            # SampledSurface construction enforces the quadric constraints to 1e-10.
            embedding.sample(surface, 4, t, profile)
    return CheckResult("embedding-constraints", label, True,
                       f"frames on the quadric at {len(times)} times")


INSTANCE_CHECKS = {
    "validation": check_validation,
    "oracle-agreement": check_oracle_agreement,
    "ode-residual": check_ode_residual,
    "tstar-consistency": check_tstar_consistency,
    "focal-dimension": check_focal_dimension,
    "focal-condition": check_focal_condition,
    "pythagorean": check_pythagorean,
    "xi-zero": check_xi_zero,
    "embedding-constraints": check_embedding_constraints,
}


# ---------------------------------------------------------------------------
# global checks

def _g_param_grid(g, count=20):
    lo, hi = 0.02, math.pi / g - 0.02
    return np.linspace(lo, hi, count)


def a_formula(g: int, kappa1: float) -> float:
    """Closed-form sum of the g distinct curvatures in terms of kappa1."""
    k = kappa1
    if g == 2:
        return k - 1.0 / k
    if g == 3:
        return 3.0 * k * (k * k - 3.0) / (3.0 * k * k - 1.0)
    if g == 4:
        return (k**4 - 6.0 * k * k + 1.0) / (k * (k * k - 1.0))
    if g == 6:
        # The printed single-fraction form misses an overall factor 3; the
        # repaired expression below equals 6 cot(6 s), the true sum.
        return 3.0 * (k**6 - 15.0 * k**4 + 15.0 * k * k - 1.0) / (
            k * (k * k - 3.0) * (3.0 * k * k - 1.0)
        )
    raise ValueError(g)


def check_curvature_parametrization(opts):
    """Cotangent-ladder consistency across the spherical families."""
    worst = {"pair": 0.0, "kappa4": 0.0, "a": 0.0, "cyl": 0.0}
    for g in (2, 3, 4, 6):
        for s in _g_param_grid(g):
            ladder = sphere_curvature_ladder(g, float(s))
            k1 = ladder[0]
            if g == 2:
                worst["pair"] = max(worst["pair"], abs(ladder[0] * ladder[1] + 1.0))
            if g == 4:
                explicit = (k1, (k1 - 1.0) / (k1 + 1.0), -1.0 / k1,
                            -(k1 + 1.0) / (k1 - 1.0))
                worst["kappa4"] = max(
                    worst["kappa4"],
                    max(abs(x - y) for x, y in zip(ladder, explicit)),
                )
            if g in (3, 4, 6):
                worst["a"] = max(worst["a"], abs(sum(ladder) - a_formula(g, k1)))
    for k1 in np.linspace(1.1, 6.0, 25):
        worst["cyl"] = max(worst["cyl"], abs(k1 * (1.0 / k1) - 1.0))
    ok = (
        worst["pair"] <= 1e-12
        and worst["kappa4"] <= 1e-10
        and worst["a"] <= 1e-9
        and worst["cyl"] <= 1e-12
    )
    detail = (
        f"kappa1*kappa2+1: {worst['pair']:.2e}; g4 ladder vs explicit: "
        f"{worst['kappa4']:.2e}; sum vs a-formula: {worst['a']:.2e}; "
        f"cylinder product: {worst['cyl']:.2e}"
    )
    return CheckResult("curvature-parametrization", "global", ok, detail)


def check_typo_resolution(opts):
    """Recorded resolutions of the two printed collapse-time discrepancies.

    The hyperbolic-cylinder collapse time with the 1/(2n) prefactor must equal
    the value derived from ell(t*) = kappa1 - kappa2; the two printed forms of
    the g=4 collapse time must agree.
    """
    worst_cyl = 0.0
    for m1, m2 in [(1, 1), (2, 3), (1, 2), (3, 1), (2, 2)]:
        n = m1 + m2
        for k1 in np.linspace(1.1, 5.0, 15):
            k2 = 1.0 / k1
            stated = math.log((m1 * k1 * k1 + m2) / (m1 * (k1 * k1 - 1.0))) / (2 * n)
            derived = math.log((m1 * k1 + m2 * k2) / (m1 * (k1 - k2))) / (2 * n)
            worst_cyl = max(worst_cyl, abs(stated - derived))
    worst_g4 = 0.0
    for m1, m2 in [(1, 1), (2, 1), (1, 2), (3, 2), (2, 2)]:
        n = 2 * (m1 + m2)
        for k1 in np.linspace(2.6, 6.0, 15):
            a = a_formula(4, k1)
            b = 2.0 * (m1 - m2) * (k1 * k1 + 1.0) ** 2 / (n * k1 * (k1 * k1 - 1.0))
            if a + b <= 0:
                continue
            t_ab = math.log((b + math.sqrt(a * a + 16.0)) / (a + b)) / (4 * n)
            denom = m1 * (k1 * k1 + 1.0) ** 2 - 2.0 * n * k1 * k1
            t_prose = math.log(m1 * (k1 * k1 + 1.0) ** 2 / denom) / (4 * n)
            worst_g4 = max(worst_g4, abs(t_ab - t_prose))
    ok = worst_cyl <= 1e-12 and worst_g4 <= 1e-10
    return CheckResult(
        "typo-resolution", "global", ok,
        f"cylinder t* forms: {worst_cyl:.2e}; g4 t* forms: {worst_g4:.2e}",
    )


def check_cs_identity(opts, samples=10**6, seed=20240801):
    """c^2 + kbar s^2 = 1 within 4 ulp of the largest intermediate."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for kbar, sf in ((-1, HYPERBOLIC), (0, EUCLIDEAN), (1, SPHERE)):
        xi = rng.uniform(-10.0, 10.0, samples // 3)
        c, s = cs_eval(sf, xi)
        residual = np.abs(c * c + kbar * s * s - 1.0)
        scale = np.maximum(1.0, np.maximum(c * c, np.abs(kbar) * s * s))
        ulps = residual / np.spacing(scale)
        worst = max(worst, float(np.max(ulps)))
    return CheckResult(
        "identities", "global", worst <= 4.0,
        f"max identity residual = {worst:.2f} ulp (tol 4)",
    )


GLOBAL_CHECKS = {
    "curvature-parametrization": check_curvature_parametrization,
    "typo-resolution": check_typo_resolution,
    "identities": check_cs_identity,
}

ALL_CHECKS = tuple(INSTANCE_CHECKS) + tuple(GLOBAL_CHECKS)


def run_verification(surfaces=None, checks=None, opts=None):
    """Run the requested checks; returns a list of CheckResult."""
    if opts is None:
        opts = flow_ode.DEFAULT_OPTIONS
    if checks is None:
        checks = ALL_CHECKS
    unknown = [c for c in checks if c not in ALL_CHECKS]
    if unknown:
        raise ValueError(f"unknown checks {unknown}; available: {sorted(ALL_CHECKS)}")
    if surfaces is None:
        surfaces = builtin_grid()
    results = []
    for name in checks:
        if name in GLOBAL_CHECKS:
            results.append(GLOBAL_CHECKS[name](opts))
            continue
        fn = INSTANCE_CHECKS[name]
        for label, surface in surfaces:
            results.append(fn(label, surface, opts))
    return results
