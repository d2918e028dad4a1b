"""Exact flow profiles xi(t) and collapse times, one resolver per family.

Each resolver integrates the flow ODE in closed form.  The spherical families
with g distinct curvatures produce the pair (cos g xi, sin g xi) from an
auxiliary exponential q(t); the hyperbolic cylinder produces
(cosh 2 xi, sinh 2 xi).  The offset is recovered by atan2 (no unwrapping
needed: g*xi stays inside (-pi, pi) on the whole maximal domain) or arsinh.

Minimal surfaces short-circuit to the constant profile.  Surfaces whose mean
curvature is negative are resolved through their opposite orientation (all
curvatures negated, which restores the positive-mean-curvature convention the
closed forms assume); the produced profile negates its output so user-facing
signs match the orientation the surface was given in, and records the flip.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .catalog import IsoparametricSurface
from .errors import FamilyMismatchError, InvalidInputError

_INF = math.inf


@dataclass
class ClosedFormProfile:
    """A resolved evolution: evaluate xi(t) on the maximal domain (t_min, t_star].

    ``params`` holds the family constants (a, b) and auxiliaries (q, ell) when
    defined.  ``angle_pair(t)`` exposes the raw (cos g xi, sin g xi) or
    (cosh 2 xi, sinh 2 xi) pair of the resolved (positive mean curvature)
    orientation, for identity checks.  Evaluation at t = t_star returns the
    exact focal limit.
    """

    family: str
    surface: IsoparametricSurface
    t_star: float
    t_min: float = -_INF
    params: dict = field(default_factory=dict)
    orientation_flipped: bool = False
    _xi_resolved: callable = None
    _pair: callable = None  # t -> (co, si, multiplier, "circular"|"hyperbolic")

    kind = "closed-form"

    def xi(self, t):
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr > self.t_star) or np.any(t_arr <= self.t_min):
            raise InvalidInputError(
                f"time outside the profile domain ({self.t_min}, {self.t_star}]"
            )
        out = self._xi_resolved(t_arr)
        if self.orientation_flipped:
            out = -out
        if np.ndim(t) == 0:
            return float(out)
        return np.asarray(out, dtype=float)

    def angle_pair(self, t):
        """Raw closed-form pair at t, or None for families without one."""
        if self._pair is None:
            return None
        return self._pair(np.asarray(t, dtype=float))

    @property
    def xi_star(self):
        """The focal offset lim xi(t) as t -> t_star, for finite t_star."""
        if not math.isfinite(self.t_star):
            raise InvalidInputError("profile has no finite collapse time")
        return float(self.xi(self.t_star))


def _sqrt_clipped(x):
    return np.sqrt(np.maximum(x, 0.0))


# ---------------------------------------------------------------------------
# family builders (surface already non-minimal with positive mean curvature)

def _build_euclidean(surface):
    b0 = surface.blocks[0]
    m, kappa = b0.mult, b0.kappa
    t_star = 1.0 / (2.0 * m * kappa * kappa)

    def xi(t):
        return (1.0 - _sqrt_clipped(1.0 - 2.0 * m * kappa * kappa * t)) / kappa

    return {"t_star": t_star, "xi": xi, "params": {"m": m, "kappa": kappa}, "pair": None}


def _build_horosphere(surface):
    kappa = surface.blocks[0].kappa
    n = surface.n

    def xi(t):
        return kappa * n * t

    return {"t_star": _INF, "xi": xi, "params": {"kappa": kappa, "n": n}, "pair": None}


def _build_hyperbolic_umbilic(surface):
    kappa = surface.blocks[0].kappa
    n = surface.n
    k2 = kappa * kappa

    def q(t):
        return 1.0 - k2 + k2 * np.exp(-2.0 * n * np.asarray(t, dtype=float))

    if abs(kappa) > 1.0:
        t_star = math.log(k2 / (k2 - 1.0)) / (2.0 * n)
    else:
        t_star = _INF

    def xi(t):
        root = _sqrt_clipped(q(t))
        sh = kappa * (np.exp(-n * np.asarray(t, dtype=float)) - root) / (k2 - 1.0)
        return np.arcsinh(sh)

    def pair(t):
        root = _sqrt_clipped(q(t))
        e = np.exp(-n * np.asarray(t, dtype=float))
        ch = (k2 * e - root) / (k2 - 1.0)
        sh = kappa * (e - root) / (k2 - 1.0)
        return ch, sh, 1, "hyperbolic"

    return {"t_star": t_star, "xi": xi, "params": {"kappa": kappa, "n": n, "q": q}, "pair": pair}


def _build_hyperbolic_cylinder(surface):
    (b1, b2) = surface.blocks
    k1, m1 = b1.kappa, b1.mult
    k2, m2 = b2.kappa, b2.mult
    n = surface.n
    a = k1 + k2
    b = -((m1 - m2) / n) * (k1 - k2)
    t_star = math.log((m1 * k1 * k1 + m2) / (m1 * (k1 * k1 - 1.0))) / (2.0 * n)

    def ell(t):
        return (a - b) * np.exp(-2.0 * n * np.asarray(t, dtype=float)) + b

    def q(t):
        lv = ell(t)
        return lv * lv - a * a + 4.0

    def pair(t):
        lv = ell(t)
        root = _sqrt_clipped(lv * lv - a * a + 4.0)
        den = a * a - 4.0
        ch2 = (a * lv - 2.0 * root) / den
        sh2 = (2.0 * lv - a * root) / den
        return ch2, sh2, 2, "hyperbolic"

    def xi(t):
        _, sh2, _, _ = pair(t)
        # arsinh inverts sinh exactly (sign included); arccosh would lose half
        # the significant digits near xi = 0.
        return 0.5 * np.arcsinh(sh2)

    return {
        "t_star": t_star,
        "xi": xi,
        "params": {"a": a, "b": b, "q": q, "ell": ell},
        "pair": pair,
    }


def _build_sphere_umbilic(surface):
    kappa = surface.blocks[0].kappa
    n = surface.n
    k2 = kappa * kappa
    t_star = math.log1p(1.0 / k2) / (2.0 * n)

    def q(t):
        return k2 + 1.0 - k2 * np.exp(2.0 * n * np.asarray(t, dtype=float))

    def pair(t):
        root = _sqrt_clipped(q(t))
        e = np.exp(n * np.asarray(t, dtype=float))
        co = (k2 * e + root) / (k2 + 1.0)
        si = kappa * (e - root) / (k2 + 1.0)
        return co, si, 1, "circular"

    def xi(t):
        co, si, _, _ = pair(t)
        return np.arctan2(si, co)

    return {"t_star": t_star, "xi": xi, "params": {"kappa": kappa, "n": n, "q": q}, "pair": pair}


def _build_sphere_g2(surface):
    (b1, b2) = surface.blocks
    k1, l = b1.kappa, b1.mult
    k2 = b2.kappa
    n = surface.n
    a = k1 + k2
    b = -((n - 2.0 * l) / n) * (k1 - k2)
    t_star = math.log(l * (k1 * k1 + 1.0) / (l * (k1 * k1 + 1.0) - n)) / (2.0 * n)

    def q(t):
        return (a + b) * np.exp(2.0 * n * np.asarray(t, dtype=float)) - b

    def pair(t):
        qv = q(t)
        root = _sqrt_clipped(a * a + 4.0 - qv * qv)
        den = a * a + 4.0
        co = (a * qv + 2.0 * root) / den
        si = (2.0 * qv - a * root) / den
        return co, si, 2, "circular"

    def xi(t):
        co, si, _, _ = pair(t)
        return 0.5 * np.arctan2(si, co)

    return {"t_star": t_star, "xi": xi, "params": {"a": a, "b": b, "q": q}, "pair": pair}


def _build_sphere_g3(surface):
    m = surface.blocks[0].mult
    a = sum(b.kappa for b in surface.blocks)
    a2 = a * a
    t_star = math.log1p(9.0 / a2) / (18.0 * m)

    def q(t):
        return a2 + 9.0 - a2 * np.exp(18.0 * m * np.asarray(t, dtype=float))

    def pair(t):
        root = _sqrt_clipped(q(t))
        e = np.exp(9.0 * m * np.asarray(t, dtype=float))
        den = a2 + 9.0
        co = (a2 * e + 3.0 * root) / den
        si = a * (3.0 * e - root) / den
        return co, si, 3, "circular"

    def xi(t):
        co, si, _, _ = pair(t)
        return np.arctan2(si, co) / 3.0

    return {"t_star": t_star, "xi": xi, "params": {"a": a, "q": q}, "pair": pair}


def _build_sphere_g4(surface):
    blocks = surface.blocks
    k1 = blocks[0].kappa
    m1, m2 = blocks[0].mult, blocks[1].mult
    n = surface.n
    a = sum(b.kappa for b in blocks)
    b = 2.0 * (m1 - m2) * (k1 * k1 + 1.0) ** 2 / (n * k1 * (k1 * k1 - 1.0))
    if a + b <= 0.0:
        raise InvalidInputError(
            "g=4 profile needs positive mean curvature (a + b > 0); "
            "resolve through the flipped orientation"
        )
    t_star = math.log((b + math.sqrt(a * a + 16.0)) / (a + b)) / (4.0 * n)

    def q(t):
        return (a + b) * np.exp(4.0 * n * np.asarray(t, dtype=float)) - b

    def pair(t):
        qv = q(t)
        root = _sqrt_clipped(a * a + 16.0 - qv * qv)
        den = a * a + 16.0
        co = (a * qv + 4.0 * root) / den
        si = (4.0 * qv - a * root) / den
        return co, si, 4, "circular"

    def xi(t):
        co, si, _, _ = pair(t)
        return 0.25 * np.arctan2(si, co)

    return {"t_star": t_star, "xi": xi, "params": {"a": a, "b": b, "q": q}, "pair": pair}


def _build_sphere_g6(surface):
    m = surface.blocks[0].mult
    a = sum(b.kappa for b in surface.blocks)
    a2 = a * a
    t_star = math.log1p(36.0 / a2) / (72.0 * m)

    def q(t):
        return a2 + 36.0 - a2 * np.exp(72.0 * m * np.asarray(t, dtype=float))

    def pair(t):
        root = _sqrt_clipped(q(t))
        e = np.exp(36.0 * m * np.asarray(t, dtype=float))
        den = a2 + 36.0
        co = (a2 * e + 6.0 * root) / den
        si = a * (6.0 * e - root) / den
        return co, si, 6, "circular"

    def xi(t):
        co, si, _, _ = pair(t)
        return np.arctan2(si, co) / 6.0

    return {"t_star": t_star, "xi": xi, "params": {"a": a, "q": q}, "pair": pair}


_BUILDERS = {
    "euclidean_cylinder": _build_euclidean,
    "horosphere": _build_horosphere,
    "hyperbolic_umbilic": _build_hyperbolic_umbilic,
    "hyperbolic_cylinder": _build_hyperbolic_cylinder,
    "sphere_umbilic": _build_sphere_umbilic,
    "sphere_g2": _build_sphere_g2,
    "sphere_g3": _build_sphere_g3,
    "sphere_g4": _build_sphere_g4,
    "sphere_g6": _build_sphere_g6,
}


def _constant_profile(surface):
    def xi(t):
        return np.zeros_like(np.asarray(t, dtype=float))

    return ClosedFormProfile(
        family=surface.family,
        surface=surface,
        t_star=_INF,
        params={"constant": True},
        _xi_resolved=xi,
    )


def resolve_profile(surface: IsoparametricSurface) -> ClosedFormProfile:
    """Closed-form profile for any catalog surface.

    Minimal surfaces give the constant profile; negative-mean-curvature
    surfaces are resolved through the flipped orientation with output signs
    restored.
    """
    if surface.is_minimal:
        return _constant_profile(surface)
    flipped = surface.mean_curvature_at_zero < 0.0
    resolved = surface.flipped() if flipped else surface
    builder = _BUILDERS.get(resolved.family)
    if builder is None:
        raise FamilyMismatchError(
            f"no closed form available for family {surface.family!r}"
        )
    built = builder(resolved)
    return ClosedFormProfile(
        family=resolved.family,
        surface=surface,
        t_star=built["t_star"],
        params=built["params"],
        orientation_flipped=flipped,
        _xi_resolved=built["xi"],
        _pair=built["pair"],
    )


def _family_profile(surface, family):
    if surface.family != family:
        raise FamilyMismatchError(
            f"expected a {family!r} surface, got {surface.family!r}"
        )
    return resolve_profile(surface)


def profile_euclidean(surface):
    """Profile xi(t) = (1 - sqrt(1 - 2 m kappa^2 t)) / kappa, t* = 1/(2 m kappa^2)."""
    return _family_profile(surface, "euclidean_cylinder")


def profile_horosphere(surface):
    """Profile xi(t) = kappa n t on all of R; the flow stays a horosphere."""
    return _family_profile(surface, "horosphere")


def profile_hyperbolic_umbilic(surface):
    """Umbilic hyperbolic profile; eternal for |kappa| < 1, else collapses to a point."""
    return _family_profile(surface, "hyperbolic_umbilic")


def profile_hyperbolic_cylinder(surface):
    """Hyperbolic cylinder profile via (cosh 2 xi, sinh 2 xi)."""
    return _family_profile(surface, "hyperbolic_cylinder")


def profile_sphere_umbilic(surface):
    """Umbilic sphere profile; collapses to a point."""
    return _family_profile(surface, "sphere_umbilic")


def profile_sphere_g2(surface):
    """Product-of-spheres profile via (cos 2 xi, sin 2 xi)."""
    return _family_profile(surface, "sphere_g2")


def profile_sphere_g3(surface):
    """g = 3 spherical profile via (cos 3 xi, sin 3 xi)."""
    return _family_profile(surface, "sphere_g3")


def profile_sphere_g4(surface):
    """g = 4 spherical profile via (cos 4 xi, sin 4 xi)."""
    return _family_profile(surface, "sphere_g4")


def profile_sphere_g6(surface):
    """g = 6 spherical profile via (cos 6 xi, sin 6 xi)."""
    return _family_profile(surface, "sphere_g6")
