"""Higher-level studies combining the symbolic and numeric layers.

* critical_epsilon: locate the escape boundary.  The system is linear,
  so boundedness is governed by the Floquet multipliers of the
  one-period monodromy matrix M: orbits stay bounded iff |tr M| <= 2.
  The primary oracle therefore bisects g(eps) = |tr M(eps)| - 2, which
  is far cheaper than escape simulation; an escape run just above and
  below the boundary cross-checks the verdict.
* convergence_study: conservation quality of the truncated integral as
  a function of truncation order, measured on section points.
* cover_count: how many section points outline the invariant curve once.
* find_periodic_orbit: refine eps so the orbit through (x0, y0) closes
  after n periods.
* invariant_curve_points: sample the conic level set predicted by a
  formal integral, ellipse or hyperbola.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .builder import FormalIntegral, SystemParams, build_integral, conic_at_section
from .dynamics import (SectionPoint, _integration_points, _rhs_linear,
                       integrate_orbit, monodromy, stroboscopic_section)
from .errors import BracketFailure, DegenerateConic, NoRoot, Unbounded

#: tolerances for the escape cross-check runs (escape detection does not
#: need the orbit-accuracy tolerances and is much cheaper without them)
_CHECK_RTOL = 1e-9
_CHECK_ATOL = 1e-9

#: escape-oracle settings.  Bounded orbits just below the boundary can
#: themselves stretch to large radii (the section ellipses blow up along
#: x for omega1 > 1), so the threshold radius must sit well above that
#: envelope and the horizon must leave slowly growing orbits time to
#: cross it; these values keep the oracle's resolution near 3e-5.
_ORACLE_PERIODS = 2000
_ORACLE_R = 150.0


@dataclass(frozen=True)
class CriticalEpsResult:
    """Escape-boundary location with the bracket that pinned it."""

    eps_crit: float
    bracket: tuple[float, float]
    oracle: str  # "trace" or "escape"
    iterations: int
    escape_check: bool | None = None  # cross-check verdict, None if skipped


def _trace_excess(params: SystemParams, eps: float) -> float:
    return abs(monodromy(params, eps).trace) - 2.0


def _escapes(params: SystemParams, eps: float, n_periods: int, r_escape: float) -> bool:
    """Does the orbit from (0, 1) leave the radius within the horizon?

    Streams the integration one period at a time and stops at the first
    crossing, so deeply unstable runs cost almost nothing (and never
    overflow the state).
    """
    f = _rhs_linear(params, eps)
    T = params.period
    targets = [k * T for k in range(1, n_periods + 1)]
    for _t, (x, y) in _integration_points(f, 0.0, (0.0, 1.0), targets,
                                          _CHECK_RTOL, _CHECK_ATOL):
        if math.hypot(x, y) > r_escape:
            return True
    return False


def critical_epsilon(params: SystemParams, sign: int = 1, oracle: str = "trace",
                     tol: float = 1e-10, cross_check: bool = True,
                     check_periods: int = 700, check_r: float = 1e3) -> CriticalEpsResult:
    """Locate eps_crit by bisection on the chosen instability oracle.

    ``oracle="trace"`` bisects |tr M(eps)| - 2 = 0 over sign*[0, hi]
    with hi auto-expanded until instability is seen; ``oracle="escape"``
    bisects the escape verdict of the orbit from (0, 1) instead (slower;
    used as the independent cross-oracle in tests).  The returned
    bracket has width <= tol.  Raises BracketFailure if no instability
    is found up to |eps| = 10.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if oracle == "trace":
        unstable = lambda e: _trace_excess(params, sign * e) > 0.0
    elif oracle == "escape":
        unstable = lambda e: _escapes(params, sign * e, _ORACLE_PERIODS, _ORACLE_R)
    else:
        raise ValueError(f"unknown oracle {oracle!r}")

    lo, hi = 0.0, 0.05
    iterations = 0
    while not unstable(hi):
        lo, hi = hi, hi * 1.6
        iterations += 1
        if hi > 10.0:
            raise BracketFailure(f"no instability found up to |eps| = {hi:.3g}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if unstable(mid):
            hi = mid
        else:
            lo = mid
        iterations += 1
    eps_crit = sign * 0.5 * (lo + hi)

    check: bool | None = None
    if cross_check and 0.5 * (lo + hi) > 2e-3:
        above = _escapes(params, eps_crit + sign * 1e-3, check_periods, check_r)
        below = _escapes(params, eps_crit - sign * 1e-3, check_periods, check_r)
        check = above and not below
    return CriticalEpsResult(eps_crit=eps_crit, bracket=(sign * lo, sign * hi),
                             oracle=oracle, iterations=iterations, escape_check=check)


@dataclass(frozen=True)
class ConvergenceReport:
    """Relative section residual of the truncated integral per order."""

    orders: tuple[int, ...]
    residuals: tuple[float, ...]
    epsilon: float
    n_periods: int


def section_residual(phi: FormalIntegral, section: Sequence[SectionPoint],
                     epsilon: float) -> float:
    """max_k |Phi(x_k, y_k, kT) - Phi(x_0, y_0, 0)| / |Phi(x_0, y_0, 0)|.

    At section times the integral reduces to its t = 0 conic, so the
    evaluation is exact in the time direction.
    """
    a, b, d = conic_at_section(phi, epsilon)
    values = [a * p.x * p.x + b * p.y * p.y + 2.0 * d * p.x * p.y for p in section]
    level = values[0]
    return max(abs(v - level) for v in values) / abs(level)


def convergence_study(params: SystemParams, epsilon: float, orders: Sequence[int],
                      n_periods: int = 200, x0: float = 0.0, y0: float = 1.0) -> ConvergenceReport:
    """Residuals of the truncated integral over one orbit, per order."""
    orders = tuple(orders)
    if any(b <= a for a, b in zip(orders, orders[1:])):
        raise ValueError("orders must be strictly ascending")
    phi = build_integral(params, max(orders))
    traj = integrate_orbit(params, x0, y0, n_periods, samples_per_period=1, epsilon=epsilon)
    section = stroboscopic_section(traj, params)
    residuals = tuple(section_residual(phi.truncated(s), section, epsilon) for s in orders)
    return ConvergenceReport(orders=orders, residuals=residuals, epsilon=epsilon,
                             n_periods=n_periods)


def cover_count(section: Sequence[SectionPoint], omega1: float, r_limit: float = 1e3) -> int:
    """Points needed for the section sequence to outline its curve once.

    The section conics are centrally symmetric, so the polar angle of a
    point in the (omega1*x, y) plane matters modulo pi: each step
    advances the *direction line* through the origin by the fold of the
    angle increment into (-pi/2, pi/2].  The curve is covered once when
    the accumulated sweep reaches a half turn (equivalently 2*pi of
    winding counted at both antipodes); the count is taken at the step
    that lands nearest the half turn, matching how the recurrence of the
    maximum section distance d is read off.
    """
    if len(section) < 3:
        raise ValueError("need at least 3 section points")
    half_pi = math.pi / 2.0
    cum = 0.0
    prev = math.atan2(section[0].y, omega1 * section[0].x)
    for idx, pt in enumerate(section[1:], start=1):
        if pt.r > r_limit:
            raise Unbounded(f"section escapes at k = {pt.k} before covering the curve")
        theta = math.atan2(pt.y, omega1 * pt.x)
        step = (theta - prev + half_pi) % math.pi - half_pi
        prev = theta
        new = cum + abs(step)
        if new >= math.pi:
            steps = idx if abs(new - math.pi) < abs(cum - math.pi) else idx - 1
            return steps + 1
        cum = new
    raise Unbounded("section ended before covering the curve; integrate more periods")


@dataclass(frozen=True)
class PeriodicOrbitResult:
    """A refined periodic-orbit parameter and its closure quality."""

    epsilon: float
    n: int
    winding: int  # m in n*theta = 2*pi*m
    return_distance: float


def find_periodic_orbit(params: SystemParams, eps_guess: float, n: int,
                        x0: float = 0.0, y0: float = 1.0,
                        search_radius: float = 0.02,
                        return_tol: float = 1e-10) -> PeriodicOrbitResult:
    """Refine eps near eps_guess so the flow over nT closes the orbit.

    The flow map is linear, so the orbit through any (x0, y0) closes
    after n periods exactly when the one-period rotation number theta
    satisfies n*theta = 2*pi*m; the nearest integer m is taken from the
    guess and theta(eps) is solved for via the trace equation
    tr M(eps) = 2*cos(2*pi*m/n) (monotone through the root, so plain
    bisection applies).  A guess that already closes within
    ``return_tol`` is returned as is; this also covers tangent roots
    (e.g. eps = 0, where the trace is even in eps and a sign change
    cannot be bracketed).  Raises NoRoot when no sign change exists
    within the expanded search interval.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    tr_guess = monodromy(params, eps_guess).trace
    theta_guess = math.acos(max(-1.0, min(1.0, tr_guess / 2.0)))
    m = round(n * theta_guess / (2.0 * math.pi))
    target = 2.0 * math.cos(2.0 * math.pi * m / n)

    mono_guess = monodromy(params, eps_guess, n=n)
    gx, gy = mono_guess.apply(x0, y0)
    guess_distance = math.hypot(gx - x0, gy - y0)
    if guess_distance <= return_tol:
        return PeriodicOrbitResult(epsilon=eps_guess, n=n, winding=m,
                                   return_distance=guess_distance)

    def g(e: float) -> float:
        return monodromy(params, e).trace - target

    radius = search_radius
    lo = hi = None
    for _ in range(8):
        lo, hi = eps_guess - radius, eps_guess + radius
        if g(lo) * g(hi) <= 0.0:
            break
        radius *= 2.0
    else:
        raise NoRoot(f"no period-{n} orbit parameter within {radius:.3g} of {eps_guess}")
    glo = g(lo)
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if gm == 0.0:
            lo = hi = mid
            break
        if glo * gm <= 0.0:
            hi = mid
        else:
            lo, glo = mid, gm
        if hi - lo < 1e-13:
            break
    eps = 0.5 * (lo + hi)
    mono = monodromy(params, eps, n=n)
    x1, y1 = mono.apply(x0, y0)
    dist = math.hypot(x1 - x0, y1 - y0)
    return PeriodicOrbitResult(epsilon=eps, n=n, winding=m, return_distance=dist)


def invariant_curve_points(conic: tuple[float, float, float], level: float,
                           n_samples: int = 400) -> list[tuple[float, float]]:
    """Sample the level set A x^2 + B y^2 + 2 D xy = level.

    Returns the ellipse when A*B - D^2 > 0 and both hyperbola branches
    when A*B - D^2 < 0; raises DegenerateConic when the discriminant
    vanishes within 1e-12.  Pass the (A, B, D) triple produced by
    conic_at_section or resonant_section_form.
    """
    a, b, d = conic
    disc = a * b - d * d
    if abs(disc) <= 1e-12:
        raise DegenerateConic(f"A*B - D^2 = {disc:.3e}")
    # principal axes of the symmetric matrix [[A, D], [D, B]]
    half_sum = 0.5 * (a + b)
    half_diff = 0.5 * (a - b)
    root = math.hypot(half_diff, d)
    lam1 = half_sum + root
    lam2 = half_sum - root
    phi = 0.5 * math.atan2(2.0 * d, a - b) if (d or a != b) else 0.0
    cphi, sphi = math.cos(phi), math.sin(phi)

    # eigenvector for lam1 is (cos phi, sin phi) when using this angle convention
    pts_uv: list[tuple[float, float]] = []
    if disc > 0.0:
        if lam1 * level <= 0.0:
            raise DegenerateConic("level set is empty for this sign of level")
        ru = math.sqrt(level / lam1)
        rv = math.sqrt(level / lam2)
        for i in range(n_samples):
            ang = 2.0 * math.pi * i / n_samples
            pts_uv.append((ru * math.cos(ang), rv * math.sin(ang)))
    else:
        if level == 0.0:
            raise DegenerateConic("level 0 of a hyperbolic form is the asymptote pair")
        # order so that lam_pos > 0 > lam_neg; u along the positive eigenvector
        smax = 3.0
        half = max(2, n_samples // 2)
        for branch in (+1.0, -1.0):
            for i in range(half):
                s = -smax + 2.0 * smax * i / (half - 1)
                if level / lam1 > 0.0:
                    u = branch * math.sqrt(level / lam1) * math.cosh(s)
                    v = math.sqrt(-level / lam2) * math.sinh(s)
                else:
                    u = math.sqrt(-level / lam1) * math.sinh(s)
                    v = branch * math.sqrt(level / lam2) * math.cosh(s)
                pts_uv.append((u, v))
    return [(cphi * u - sphi * v, sphi * u + cphi * v) for u, v in pts_uv]


def section_semiaxis_x(section: Sequence[SectionPoint]) -> float:
    """The x-extent of the section curve, read from the point cloud."""
    return max(abs(p.x) for p in section)
