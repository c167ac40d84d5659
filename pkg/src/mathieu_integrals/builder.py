"""Construction of formal (truncated-series) integrals of motion.

The system is the driven oscillator

    H = H0 + eps*H1,   H0 = (y^2 + omega1^2 x^2)/2,   H1 = -x^2 cos(omega t)

whose equations of motion are a Mathieu equation.  A formal integral
``Phi = Phi_0 + eps Phi_1 + ... + eps^S Phi_S`` is produced order by
order: each new order is the time integral, along the unperturbed flow,
of ``K_s = -[Phi_s, H1]``,

    Phi_{s+1} = int_0^t K_s dt,

evaluated by substituting the zero-order solution

    x = sqrt(2 Phi_0)/omega1 * sin(omega1 (t - t0)),
    y = sqrt(2 Phi_0)   * cos(omega1 (t - t0)),

and converting the result back to a quadratic form in (x^2, y^2, xy)
with coefficients that are trigonometric polynomials in multiples of
omega*t.  Every order is homogeneous quadratic, so the substitution is
run at unit amplitude 2*Phi_0 = 1 and homogeneity is restored during
back-substitution; this avoids carrying a symbolic radical.

The phase offset t0 enters only through the generators
c0 = cos(2 omega1 t0), s0 = sin(2 omega1 t0) and is switched on with
``phased=True`` (needed by the resonant construction, which also allows
secular powers of t).  The plain non-resonant build runs unphased with
secular terms forbidden.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import MalformedSpectrum, ResonanceDetected, SecularTerm
from .trigseries import COS, SIN, FrequencyBase, TrigSeries, as_rational


@dataclass(frozen=True)
class SystemParams:
    """System parameters: driving frequency, unperturbed frequency, strength.

    ``omega`` and ``omega1`` are exact rationals (they feed the symbolic
    layer); ``epsilon`` is a float used only at evaluation time.  In
    Mathieu normalization the system corresponds to a = 4*omega1^2/omega^2
    and q = 4*epsilon/omega^2.
    """

    omega: Fraction
    omega1: Fraction
    epsilon: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "omega", as_rational(self.omega))
        object.__setattr__(self, "omega1", as_rational(self.omega1))
        if self.omega <= 0 or self.omega1 <= 0:
            raise ValueError("omega and omega1 must be positive")

    @property
    def base(self) -> FrequencyBase:
        return FrequencyBase(self.omega, self.omega1)

    @property
    def period(self) -> float:
        """Driving period T = 2*pi/omega."""
        return 2.0 * math.pi / float(self.omega)

    @property
    def mathieu_a(self) -> Fraction:
        return 4 * self.omega1 ** 2 / self.omega ** 2

    def mathieu_q(self, epsilon: float | None = None) -> float:
        eps = self.epsilon if epsilon is None else epsilon
        return 4.0 * eps / float(self.omega) ** 2

    def hamiltonian(self, x: float, y: float, t: float, epsilon: float | None = None) -> float:
        eps = self.epsilon if epsilon is None else epsilon
        om1 = float(self.omega1)
        return 0.5 * (y * y + om1 * om1 * x * x) - eps * x * x * math.cos(float(self.omega) * t)


@dataclass(frozen=True)
class QuadFormSeries:
    """Quadratic form cxx*x^2 + cyy*y^2 + cxy*xy with TrigSeries coefficients.

    The coefficients are envelopes in the driving frequency alone
    (m = 0 lattice terms); the omega1 content of the motion lives in the
    (x, y) variables themselves.
    """

    cxx: TrigSeries
    cyy: TrigSeries
    cxy: TrigSeries

    def __post_init__(self):
        if not (self.cxx.base == self.cyy.base == self.cxy.base):
            raise ValueError("coefficient series live over different bases")
        for series in (self.cxx, self.cyy, self.cxy):
            if series.m_values() - {0}:
                raise ValueError("quadratic-form coefficients must be pure "
                                 "driving-frequency envelopes (m = 0)")

    @property
    def base(self) -> FrequencyBase:
        return self.cxx.base

    @classmethod
    def zero(cls, base: FrequencyBase) -> "QuadFormSeries":
        z = TrigSeries.zero(base)
        return cls(z, z, z)

    @classmethod
    def constant(cls, base: FrequencyBase, cxx, cyy, cxy) -> "QuadFormSeries":
        return cls(TrigSeries.constant(base, cxx),
                   TrigSeries.constant(base, cyy),
                   TrigSeries.constant(base, cxy))

    def __add__(self, other: "QuadFormSeries") -> "QuadFormSeries":
        return QuadFormSeries(self.cxx + other.cxx, self.cyy + other.cyy, self.cxy + other.cxy)

    def __sub__(self, other: "QuadFormSeries") -> "QuadFormSeries":
        return QuadFormSeries(self.cxx - other.cxx, self.cyy - other.cyy, self.cxy - other.cxy)

    def __neg__(self) -> "QuadFormSeries":
        return QuadFormSeries(-self.cxx, -self.cyy, -self.cxy)

    def scale(self, factor) -> "QuadFormSeries":
        return QuadFormSeries(self.cxx.scale(factor), self.cyy.scale(factor), self.cxy.scale(factor))

    def mul_series(self, series: TrigSeries) -> "QuadFormSeries":
        """Multiply every coefficient by a TrigSeries (e.g. a constant-ring element)."""
        return QuadFormSeries(self.cxx * series, self.cyy * series, self.cxy * series)

    @property
    def is_zero(self) -> bool:
        return self.cxx.is_zero and self.cyy.is_zero and self.cxy.is_zero

    def secular_part(self) -> "QuadFormSeries":
        return QuadFormSeries(self.cxx.secular_part(), self.cyy.secular_part(), self.cxy.secular_part())

    def max_secular_degree(self) -> int:
        return max(self.cxx.max_secular_degree(), self.cyy.max_secular_degree(),
                   self.cxy.max_secular_degree())

    def max_harmonic(self) -> int:
        return max(self.cxx.max_harmonic(), self.cyy.max_harmonic(), self.cxy.max_harmonic())

    def evaluate(self, x: float, y: float, t: float, c0: float = 1.0, s0: float = 0.0) -> float:
        return (self.cxx.evaluate(t, c0, s0) * x * x
                + self.cyy.evaluate(t, c0, s0) * y * y
                + self.cxy.evaluate(t, c0, s0) * x * y)

    def value_at_zero(self) -> tuple[Fraction, Fraction, Fraction]:
        """Exact (cxx, cyy, cxy) at t = 0 for generator-free coefficients."""
        return (self.cxx.constant_at_zero(), self.cyy.constant_at_zero(),
                self.cxy.constant_at_zero())

    def to_json_obj(self) -> dict:
        return {"x2": self.cxx.to_json_terms(),
                "y2": self.cyy.to_json_terms(),
                "xy": self.cxy.to_json_terms()}

    def pretty(self) -> str:
        return (f"x^2: {self.cxx.pretty()}\n"
                f"y^2: {self.cyy.pretty()}\n"
                f"xy : {self.cxy.pretty()}")


def h0_form(params: SystemParams) -> QuadFormSeries:
    """H0 = (omega1^2/2) x^2 + (1/2) y^2 as a quadratic form."""
    return QuadFormSeries.constant(params.base, params.omega1 ** 2 / 2, Fraction(1, 2), 0)


def h1_form(params: SystemParams) -> QuadFormSeries:
    """H1 = -x^2 cos(omega t) as a quadratic form."""
    base = params.base
    return QuadFormSeries(TrigSeries.harmonic(base, -1, k=1, m=0, phase=COS),
                          TrigSeries.zero(base), TrigSeries.zero(base))


def poisson_bracket_with_h1(params: SystemParams, f: QuadFormSeries) -> QuadFormSeries:
    """K = -[f, H1] for H1 = -x^2 cos(omega t).

    With the bracket convention [f, H] = df/dx dH/dy - df/dy dH/dx and
    dH1/dy = 0 this collapses to K = -2 x cos(omega t) df/dy, which
    stays quadratic: the x^2 coefficient gains -2 cos(omega t) * cxy and
    the xy coefficient gains -4 cos(omega t) * cyy.
    """
    base = params.base
    env = TrigSeries.harmonic(base, -2, k=1, m=0, phase=COS)  # -2 cos(omega t)
    return QuadFormSeries(env * f.cxy, TrigSeries.zero(base), (env * f.cyy).scale(2))


def substitute_zero_order(params: SystemParams, f: QuadFormSeries, phased: bool = False) -> TrigSeries:
    """Evaluate a quadratic form on the zero-order orbit at unit amplitude.

    With 2*Phi_0 = 1 and psi = omega1*(t - t0):

        x^2 -> (1 - cos 2psi) / (2 omega1^2)
        y^2 -> (1 + cos 2psi) / 2
        xy  -> sin 2psi / (2 omega1)

    Unphased (t0 = 0) the 2psi harmonics are plain (0, +-2) lattice
    terms; phased they expand through the generators c0, s0.
    """
    base = params.base
    om1 = params.omega1
    if phased:
        # cos 2psi = c0 cos(2 w1 t) + s0 sin(2 w1 t); sin 2psi = c0 sin(2 w1 t) - s0 cos(2 w1 t)
        cos2psi = (TrigSeries.harmonic(base, 1, k=0, m=2, phase=COS, c0_pow=1)
                   + TrigSeries.harmonic(base, 1, k=0, m=2, phase=SIN, s0_pow=1))
        sin2psi = (TrigSeries.harmonic(base, 1, k=0, m=2, phase=SIN, c0_pow=1)
                   - TrigSeries.harmonic(base, 1, k=0, m=2, phase=COS, s0_pow=1))
    else:
        cos2psi = TrigSeries.harmonic(base, 1, k=0, m=2, phase=COS)
        sin2psi = TrigSeries.harmonic(base, 1, k=0, m=2, phase=SIN)
    one = TrigSeries.constant(base, 1)
    x2 = (one - cos2psi).scale(Fraction(1, 2) / om1 ** 2)
    y2 = (one + cos2psi).scale(Fraction(1, 2))
    xy = sin2psi.scale(Fraction(1, 2) / om1)
    return f.cxx * x2 + f.cyy * y2 + f.cxy * xy


def back_substitute(params: SystemParams, s: TrigSeries, phased: bool = False,
                    secular_allowed: bool = False) -> QuadFormSeries:
    """Invert the zero-order substitution.

    Every term must have m in {-2, 0, 2}.  At unit amplitude the m = 0
    content maps to (y^2 + omega1^2 x^2), cos 2psi to (y^2 - omega1^2 x^2)
    and sin 2psi to 2 omega1 xy; |m| = 2 harmonics are first split into
    products of the k*omega envelope with cos/sin(2 omega1 t) by the
    angle-addition identities, and in phased mode those convert through

        cos(2 w1 t) = c0 cos 2psi - s0 sin 2psi
        sin(2 w1 t) = s0 cos 2psi + c0 sin 2psi.

    The result has m = 0 envelopes only.
    """
    base = params.base
    om1sq = params.omega1 ** 2
    two_om1 = 2 * params.omega1
    raw_xx: list = []
    raw_yy: list = []
    raw_xy: list = []

    for (p, k, m, phase, a, b), coeff in s.terms():
        if p > 0 and not secular_allowed:
            raise SecularTerm(
                f"secular term of degree {p} at harmonic (k={k}, m={m}) "
                "is not allowed in this construction"
            )
        if m == 0:
            # envelope * (y^2 + om1^2 x^2)
            raw_yy.append(((p, k, 0, phase, a, b), coeff))
            raw_xx.append(((p, k, 0, phase, a, b), coeff * om1sq))
            continue
        if m not in (2, -2):
            raise MalformedSpectrum(
                f"term with m = {m} cannot be expressed back in (x^2, y^2, xy)"
            )
        # split trig((k w + m w1) t) into envelope(k w t) * trig(2 w1 t) products:
        #   cos((kw+2w1)t) = cos kwt cos 2w1t - sin kwt sin 2w1t
        #   sin((kw+2w1)t) = sin kwt cos 2w1t + cos kwt sin 2w1t
        # and with m = -2 the cross signs flip.
        sgn = 1 if m == 2 else -1
        if phase == COS:
            pieces = [(COS, "c", Fraction(1)), (SIN, "s", Fraction(-sgn))]
        else:
            pieces = [(SIN, "c", Fraction(1)), (COS, "s", Fraction(sgn))]
        for env_phase, osc, factor in pieces:
            c = coeff * factor
            if phased:
                # cos2w1t -> c0*C - s0*S ; sin2w1t -> s0*C + c0*S
                # with C the cos-2psi form and S the sin-2psi form
                if osc == "c":
                    combos = [("C", a + 1, b, c), ("S", a, b + 1, -c)]
                else:
                    combos = [("C", a, b + 1, c), ("S", a + 1, b, c)]
            else:
                combos = [("C" if osc == "c" else "S", a, b, c)]
            for form, aa, bb, cc in combos:
                key = (p, k, 0, env_phase, aa, bb)
                if form == "C":  # y^2 - om1^2 x^2
                    raw_yy.append((key, cc))
                    raw_xx.append((key, -cc * om1sq))
                else:  # 2 om1 xy
                    raw_xy.append((key, cc * two_om1))

    return QuadFormSeries(TrigSeries(base, raw_xx), TrigSeries(base, raw_yy),
                          TrigSeries(base, raw_xy))


def recursion_step(params: SystemParams, f: QuadFormSeries, phased: bool = False,
                   secular_allowed: bool = False) -> QuadFormSeries:
    """One order of the recursion: back_substitute(int(substitute(K)))."""
    k = poisson_bracket_with_h1(params, f)
    on_orbit = substitute_zero_order(params, k, phased=phased)
    return back_substitute(params, on_orbit.integrate(), phased=phased,
                           secular_allowed=secular_allowed)


@dataclass(frozen=True)
class FormalIntegral:
    """A truncated series integral: orders Phi_0 ... Phi_S plus metadata."""

    params: SystemParams
    orders: tuple[QuadFormSeries, ...]
    seed: str = "H0"
    secular_allowed: bool = False
    phased: bool = False

    @property
    def order(self) -> int:
        return len(self.orders) - 1

    def truncated(self, order: int) -> "FormalIntegral":
        if not 0 <= order <= self.order:
            raise ValueError(f"truncation order {order} outside [0, {self.order}]")
        return FormalIntegral(self.params, self.orders[: order + 1], self.seed,
                              self.secular_allowed, self.phased)

    def evaluate(self, x: float, y: float, t: float, epsilon: float | None = None,
                 c0: float = 1.0, s0: float = 0.0) -> float:
        """sum_s eps^s * Phi_s(x, y, t), via Horner in eps."""
        eps = self.params.epsilon if epsilon is None else epsilon
        acc = 0.0
        for q in reversed(self.orders):
            acc = acc * eps + q.evaluate(x, y, t, c0, s0)
        return acc

    def to_json_obj(self) -> dict:
        return {
            "omega": str(self.params.omega),
            "omega1": str(self.params.omega1),
            "seed": self.seed,
            "order": self.order,
            "phased": self.phased,
            "secular_allowed": self.secular_allowed,
            "orders": [q.to_json_obj() for q in self.orders],
        }

    def pretty(self) -> str:
        blocks = [f"-- order eps^{s} --\n{q.pretty()}" for s, q in enumerate(self.orders)]
        return "\n".join(blocks)


MAX_ORDER = 40


def check_nonresonant(params: SystemParams, order: int):
    """Raise ResonanceDetected(j) if j*omega = 2*omega1 for some j <= order + 1."""
    for j in range(1, order + 2):
        if j * params.omega == 2 * params.omega1:
            raise ResonanceDetected(j)


def build_integral(params: SystemParams, order: int = 10, seed: str = "H0") -> FormalIntegral:
    """Build the non-resonant formal integral seeded with H0 to the given order.

    Raises ResonanceDetected when j*omega = 2*omega1 for some j <= order+1
    (the recursion would divide by the vanishing frequency), and
    SecularTerm if a secular term survives despite non-resonance (an
    internal-consistency failure).
    """
    if seed != "H0":
        raise ValueError(f"unknown seed {seed!r}; the non-resonant build is seeded with H0")
    if order < 0:
        raise ValueError("order must be >= 0")
    if order > MAX_ORDER:
        raise ValueError(f"order {order} exceeds the hard cap {MAX_ORDER}")
    check_nonresonant(params, order)
    orders = [h0_form(params)]
    for s in range(order):
        nxt = recursion_step(params, orders[-1], phased=False, secular_allowed=False)
        if nxt.max_harmonic() > s + 1:
            raise AssertionError(
                f"order {s + 1} contains harmonics above {s + 1}*omega; recursion is broken"
            )
        orders.append(nxt)
    return FormalIntegral(params, tuple(orders), seed="H0")


def conic_at_section(phi: FormalIntegral, epsilon: float | None = None,
                     c0: float = 1.0, s0: float = 0.0) -> tuple[float, float, float]:
    """Quadratic-form coefficients (A, B, D) at section times t = kT.

    At t = kT every cos(j omega t) is 1 and every sin vanishes, so the
    coefficients equal the series evaluated at t = 0.  The form is read
    as A x^2 + B y^2 + 2 D xy, hence the xy coefficient is halved.
    """
    eps = phi.params.epsilon if epsilon is None else epsilon
    a = b = d = 0.0
    for q in reversed(phi.orders):
        a = a * eps + q.cxx.evaluate(0.0, c0, s0)
        b = b * eps + q.cyy.evaluate(0.0, c0, s0)
        d = d * eps + 0.5 * q.cxy.evaluate(0.0, c0, s0)
    return a, b, d


@dataclass(frozen=True)
class PsiSeries:
    """The companion integral in extended phase space, seeded with E.

    Psi_0 is the energy-momentum marker E itself (bound numerically at
    evaluation), Psi_1 = H1 - Phi_1 and Psi_s = -Phi_s for s >= 2, so
    Phi + Psi telescopes to H0 + eps*H1 + E = H + E.
    """

    params: SystemParams
    orders_from_one: tuple[QuadFormSeries, ...]

    def order(self) -> int:
        return len(self.orders_from_one)

    def evaluate(self, x: float, y: float, t: float, energy: float,
                 epsilon: float | None = None) -> float:
        eps = self.params.epsilon if epsilon is None else epsilon
        acc = 0.0
        for q in reversed(self.orders_from_one):
            acc = (acc + q.evaluate(x, y, t)) * eps
        return energy + acc


def psi_series(phi: FormalIntegral) -> PsiSeries:
    """Derive Psi from a built Phi by arithmetic, not by a second recursion."""
    if phi.order < 1:
        raise ValueError("psi_series needs Phi built through order >= 1")
    first = h1_form(phi.params) - phi.orders[1]
    rest = tuple(-q for q in phi.orders[2:])
    return PsiSeries(phi.params, (first,) + rest)
