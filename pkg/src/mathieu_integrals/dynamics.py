"""Numerical integration, stroboscopic sections, monodromy, escapes.

The equations of motion are linear in (x, y):

    dx/dt = y,    dy/dt = -(omega1^2 - 2 eps cos(omega t)) x,

augmented with the conjugate momentum of time,

    dE/dt = -dH/dt = -eps * omega * x^2 * sin(omega t),

initialized at E(0) = -H(x0, y0, 0) so that H + E stays at zero to
integrator accuracy; tracking E as a state variable (instead of
recomputing -H) makes |H + E| a genuine independent accuracy check.

The stepper is an embedded Dormand-Prince 5(4) pair with standard error
control at tight default tolerances (1e-12).  Steps are clamped so the
solution lands *exactly* on requested sample times; section samples
therefore carry t = k*T with no interpolation involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .builder import SystemParams
from .errors import StepFailure

DEFAULT_RTOL = 1e-12
DEFAULT_ATOL = 1e-12

# Dormand-Prince 5(4) tableau.
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
# b5 - b4: weights of the embedded error estimate
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)

_MAX_STEPS = 5_000_000

_A21, = _A[1]
_A31, _A32 = _A[2]
_A41, _A42, _A43 = _A[3]
_A51, _A52, _A53, _A54 = _A[4]
_A61, _A62, _A63, _A64, _A65 = _A[5]
_B1, _B2, _B3, _B4, _B5W, _B6 = _A[6][0], _A[6][1], _A[6][2], _A[6][3], _A[6][4], _A[6][5]
_E1, _E2, _E3, _E4, _E5, _E6, _E7 = _E


def _integration_points(f: Callable, t0: float, y0: tuple, targets: Sequence[float],
                        rtol: float, atol: float):
    """Integrate y' = f(t, y), yielding the state at each target time.

    The step is clamped to land exactly on each target, and the time
    stamp is set to the target itself, so no landing error accumulates.
    The stage loop is unrolled: this is the hot path of every orbit,
    sweep and bisection in the package.  Implemented as a generator so
    escape probes can stop as soon as a threshold is crossed.
    """
    n = len(y0)
    rng = range(n)
    t = t0
    y = tuple(y0)
    k1 = f(t, y)
    if targets:
        span = abs(targets[-1] - t0) or 1.0
        h = min(1e-2 * span, 0.1)
    else:
        h = 0.1
    steps = 0
    for target in targets:
        while t < target:
            clamped = t + h >= target
            h_try = (target - t) if clamped else h
            k2 = f(t + _C[1] * h_try,
                   tuple(y[j] + h_try * (_A21 * k1[j]) for j in rng))
            k3 = f(t + _C[2] * h_try,
                   tuple(y[j] + h_try * (_A31 * k1[j] + _A32 * k2[j]) for j in rng))
            k4 = f(t + _C[3] * h_try,
                   tuple(y[j] + h_try * (_A41 * k1[j] + _A42 * k2[j] + _A43 * k3[j])
                         for j in rng))
            k5 = f(t + _C[4] * h_try,
                   tuple(y[j] + h_try * (_A51 * k1[j] + _A52 * k2[j] + _A53 * k3[j]
                                         + _A54 * k4[j]) for j in rng))
            k6 = f(t + h_try,
                   tuple(y[j] + h_try * (_A61 * k1[j] + _A62 * k2[j] + _A63 * k3[j]
                                         + _A64 * k4[j] + _A65 * k5[j]) for j in rng))
            y5 = tuple(y[j] + h_try * (_B1 * k1[j] + _B3 * k3[j] + _B4 * k4[j]
                                       + _B5W * k5[j] + _B6 * k6[j]) for j in rng)
            k7 = f(t + h_try, y5)  # first-same-as-last stage
            err = 0.0
            for j in rng:
                e = h_try * (_E1 * k1[j] + _E3 * k3[j] + _E4 * k4[j]
                             + _E5 * k5[j] + _E6 * k6[j] + _E7 * k7[j])
                scale = atol + rtol * max(abs(y[j]), abs(y5[j]))
                err += (e / scale) ** 2
            err = math.sqrt(err / n)
            if err <= 1.0:
                t = target if clamped else t + h_try
                y = y5
                k1 = k7
                factor = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
                h = h_try * factor
            else:
                h = h_try * max(0.2, 0.9 * err ** -0.2)
            if h < 1e-14 * max(1.0, abs(t)):
                raise StepFailure(f"step size underflow at t = {t}")
            steps += 1
            if steps > _MAX_STEPS:
                raise StepFailure("step budget exhausted")
        yield (t, y)


def _integrate_to_targets(f: Callable, t0: float, y0: tuple, targets: Sequence[float],
                          rtol: float, atol: float):
    return list(_integration_points(f, t0, y0, targets, rtol, atol))


@dataclass(frozen=True)
class PhaseState:
    """One orbit sample: position, momentum, time, and -energy."""

    x: float
    y: float
    t: float
    E: float


@dataclass(frozen=True)
class SectionPoint:
    """A stroboscopic sample at t = k*T with its two radius measures."""

    x: float
    y: float
    E: float
    k: int
    d: float  # sqrt(omega1^2 x^2 + y^2)
    r: float  # sqrt(x^2 + y^2)


@dataclass(frozen=True)
class Monodromy:
    """Fundamental-solution matrix of the linear flow over n periods."""

    m11: float
    m12: float
    m21: float
    m22: float
    n: int

    @property
    def trace(self) -> float:
        return self.m11 + self.m22

    @property
    def det(self) -> float:
        return self.m11 * self.m22 - self.m12 * self.m21

    def apply(self, x: float, y: float) -> tuple[float, float]:
        return self.m11 * x + self.m12 * y, self.m21 * x + self.m22 * y

    def eigenvalues(self) -> tuple[complex, complex]:
        tr = self.trace
        disc = tr * tr - 4.0 * self.det
        root = math.sqrt(abs(disc))
        if disc >= 0.0:
            return complex((tr + root) / 2.0), complex((tr - root) / 2.0)
        return complex(tr / 2.0, root / 2.0), complex(tr / 2.0, -root / 2.0)


def _rhs_extended(params: SystemParams, epsilon: float):
    om = float(params.omega)
    om1sq = float(params.omega1) ** 2
    two_eps = 2.0 * epsilon
    eps_om = epsilon * om

    def f(t, u):
        x, y, _ = u
        return (y,
                -(om1sq - two_eps * math.cos(om * t)) * x,
                -eps_om * x * x * math.sin(om * t))

    return f


def _rhs_linear(params: SystemParams, epsilon: float):
    om = float(params.omega)
    om1sq = float(params.omega1) ** 2
    two_eps = 2.0 * epsilon

    def f(t, u):
        x, y = u
        return (y, -(om1sq - two_eps * math.cos(om * t)) * x)

    return f


def _eps_arg(epsilon) -> float:
    if not math.isfinite(epsilon):
        raise ValueError("epsilon must be finite")
    return float(epsilon)


def integrate_orbit(params: SystemParams, x0: float, y0: float, n_periods: int,
                    samples_per_period: int = 1, epsilon: float | None = None,
                    rtol: float = DEFAULT_RTOL, atol: float = DEFAULT_ATOL) -> list[PhaseState]:
    """Integrate the extended system over n periods.

    Samples land on the uniform sub-period grid t = (k + i/spp) * T,
    always hitting the section times t = k*T exactly.  E is integrated
    alongside, initialized at -H(x0, y0, 0).
    """
    if n_periods < 1:
        raise ValueError("n_periods must be >= 1")
    if samples_per_period < 1:
        raise ValueError("samples_per_period must be >= 1")
    eps = params.epsilon if epsilon is None else _eps_arg(epsilon)
    T = params.period
    e0 = -params.hamiltonian(x0, y0, 0.0, eps)
    targets = [(j / samples_per_period) * T for j in range(1, n_periods * samples_per_period + 1)]
    f = _rhs_extended(params, eps)
    states = [PhaseState(x0, y0, 0.0, e0)]
    for t, (x, y, e) in _integrate_to_targets(f, 0.0, (x0, y0, e0), targets, rtol, atol):
        states.append(PhaseState(x, y, t, e))
    return states


def stroboscopic_section(trajectory: Sequence[PhaseState], params: SystemParams) -> list[SectionPoint]:
    """Extract the subsequence at t = k*T and attach d and r."""
    T = params.period
    om1 = float(params.omega1)
    out = []
    for state in trajectory:
        k = round(state.t / T) if state.t else 0
        if abs(state.t - k * T) <= 1e-12 * max(T, state.t):
            out.append(SectionPoint(
                x=state.x, y=state.y, E=state.E, k=k,
                d=math.sqrt(om1 * om1 * state.x * state.x + state.y * state.y),
                r=math.sqrt(state.x * state.x + state.y * state.y),
            ))
    return out


def monodromy(params: SystemParams, epsilon: float, n: int = 1,
              rtol: float = DEFAULT_RTOL, atol: float = DEFAULT_ATOL) -> Monodromy:
    """Fundamental matrix of the linear system over [0, n*T].

    Obtained by integrating the basis initial conditions (1,0) and
    (0,1); the system is linear, so this is the exact flow map, not a
    linearization.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    T = params.period
    f = _rhs_linear(params, _eps_arg(epsilon))
    cols = []
    for z0 in ((1.0, 0.0), (0.0, 1.0)):
        (_, z1), = _integrate_to_targets(f, 0.0, z0, [n * T], rtol, atol)
        cols.append(z1)
    return Monodromy(m11=cols[0][0], m12=cols[1][0], m21=cols[0][1], m22=cols[1][1], n=n)


@dataclass(frozen=True)
class EscapeReport:
    """Escape verdict plus the log-distance growth fit over the tail."""

    escaped: bool
    k_escape: int | None
    growth_rate: float | None
    r_squared: float | None


def escape_diagnostics(section: Sequence[SectionPoint], r_escape: float = 1e3,
                       period: float | None = None) -> EscapeReport:
    """Escape test and least-squares growth of log r(kT) over the tail.

    ``escaped`` is true iff r exceeds ``r_escape``; the growth rate is
    the slope of log r versus t fitted over the post-transient tail
    (the second half of the points up to the first threshold crossing).
    """
    if not section:
        raise ValueError("empty section")
    cut = len(section)
    k_escape = None
    for i, pt in enumerate(section):
        if pt.r > r_escape:
            cut = i + 1
            k_escape = pt.k
            break
    escaped = k_escape is not None
    tail = section[cut // 2: cut]
    if not escaped or len(tail) < 3:
        return EscapeReport(escaped, k_escape, None, None)
    T = period if period is not None else math.pi
    ts = [pt.k * T for pt in tail]
    ls = [math.log(pt.r) for pt in tail]
    n = len(ts)
    tbar = sum(ts) / n
    lbar = sum(ls) / n
    stt = sum((t - tbar) ** 2 for t in ts)
    stl = sum((t - tbar) * (l - lbar) for t, l in zip(ts, ls))
    slope = stl / stt
    ss_res = sum((l - lbar - slope * (t - tbar)) ** 2 for t, l in zip(ts, ls))
    ss_tot = sum((l - lbar) ** 2 for l in ls)
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return EscapeReport(True, k_escape, slope, r2)


def integrate_backward(params: SystemParams, x0: float, y0: float, n_periods: int,
                       epsilon: float | None = None, rtol: float = DEFAULT_RTOL,
                       atol: float = DEFAULT_ATOL) -> tuple[float, float]:
    """State n periods *before* (x0, y0) taken at t = 0.

    The driving is even in t, so time reversal is the conjugation
    (x, y) -> (x, -y) of the forward flow; no negative-step integration
    is needed.
    """
    eps = params.epsilon if epsilon is None else _eps_arg(epsilon)
    f = _rhs_linear(params, eps)
    (_, (x, my)), = _integrate_to_targets(f, 0.0, (x0, -y0), [n_periods * params.period],
                                          rtol, atol)
    return x, -my
