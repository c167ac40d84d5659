"""Integrator, section, monodromy and escape tests.

The harmonic-oscillator limit (eps = 0) provides closed-form oracles;
the Hamiltonian structure provides det M = 1 and reversibility; the
extended energy provides an independent accuracy monitor.
"""

import math
import random
from fractions import Fraction as F

import pytest

from mathieu_integrals import (StepFailure, SystemParams, escape_diagnostics,
                               integrate_orbit, monodromy, stroboscopic_section)
from mathieu_integrals.dynamics import integrate_backward

P01 = SystemParams(F(2), F(9, 10), 0.1)


class TestHarmonicLimit:
    def test_closed_form_solution(self):
        params = SystemParams(F(2), F(9, 10), 0.0)
        traj = integrate_orbit(params, 0.0, 1.0, 10, samples_per_period=16)
        om1 = 0.9
        for s in traj:
            assert s.x == pytest.approx(math.sin(om1 * s.t) / om1, abs=1e-9)
            assert s.y == pytest.approx(math.cos(om1 * s.t), abs=1e-9)

    def test_energy_constant_without_driving(self):
        params = SystemParams(F(2), F(9, 10), 0.0)
        traj = integrate_orbit(params, 0.0, 1.0, 10, samples_per_period=4)
        assert all(s.E == traj[0].E for s in traj)  # dE/dt is identically zero

    def test_section_rotation_step(self):
        params = SystemParams(F(2), F(9, 10), 0.0)
        traj = integrate_orbit(params, 0.0, 1.0, 40)
        pts = stroboscopic_section(traj, params)
        # rigid rotation by 2 pi omega1/omega = 0.9 pi per period in (om1 x, y)
        step = 2 * math.pi * 0.9 / 2.0
        for a, b in zip(pts, pts[1:]):
            tha = math.atan2(a.y, 0.9 * a.x)
            thb = math.atan2(b.y, 0.9 * b.x)
            d = (thb - tha + math.pi) % (2 * math.pi) - math.pi
            assert abs(abs(d) - step) < 1e-9


class TestSampling:
    def test_section_times_exact(self, orbit_cache):
        params, traj, pts = orbit_cache("9/10", 0.1, 200)
        T = params.period
        for k, s in enumerate(traj):
            assert s.t == k * T  # bitwise: the stepper lands on targets
        assert [p.k for p in pts] == list(range(201))

    def test_subperiod_sampling_counts(self):
        traj = integrate_orbit(P01, 0.0, 1.0, 5, samples_per_period=8)
        assert len(traj) == 41
        pts = stroboscopic_section(traj, P01)
        assert len(pts) == 6

    def test_input_validation(self):
        with pytest.raises(ValueError):
            integrate_orbit(P01, 0.0, 1.0, 0)
        with pytest.raises(ValueError):
            integrate_orbit(P01, 0.0, 1.0, 1, samples_per_period=0)

    def test_step_failure_on_impossible_tolerance(self):
        # below the roundoff floor of the embedded error estimate the
        # controller shrinks the step into underflow
        with pytest.raises(StepFailure):
            integrate_orbit(P01, 0.0, 1.0, 1, rtol=1e-40, atol=1e-40)


class TestExtendedEnergy:
    def test_h_plus_e_bounded_by_1e8(self, orbit_cache):
        params, traj, _ = orbit_cache("9/10", 0.1, 200, 8)
        worst = max(abs(params.hamiltonian(s.x, s.y, s.t) + s.E) for s in traj)
        assert worst <= 1e-8

    def test_e_starts_at_minus_h0(self):
        traj = integrate_orbit(P01, 0.0, 1.0, 1)
        assert traj[0].E == -0.5  # H(0,1,0) = 1/2 at x0 = 0

    def test_bounded_energy_band_below_zero(self, orbit_cache):
        _, _, pts = orbit_cache("9/10", 0.18, 60)
        energies = [p.E for p in pts]
        assert max(energies) < 0.0
        assert min(energies) > -2.0  # oscillates in a band, no runaway


class TestOrbitGeometry:
    def test_ring_with_central_hole(self, orbit_cache):
        _, _, pts = orbit_cache("9/10", 0.1, 200)
        ds = [p.d for p in pts]
        assert max(ds) <= 1.0 + 1e-9
        assert 0.2 < min(ds) < 0.9  # spirals inward, leaving an empty hole
        assert max(ds[1:]) > 0.995  # and returns near d = 1 recurrently

    def test_negative_eps_outside_unperturbed_ellipse(self, orbit_cache):
        _, _, pts = orbit_cache("9/10", -0.1, 200)
        assert min(p.d for p in pts) >= 1.0 - 1e-9


class TestEscape:
    def test_bounded_run(self, orbit_cache):
        params, _, pts = orbit_cache("9/10", 0.1, 200)
        report = escape_diagnostics(pts, period=params.period)
        assert not report.escaped
        assert report.k_escape is None and report.growth_rate is None
        assert all(p.r <= 2.0 for p in pts)

    def test_escape_at_019_is_log_linear(self, orbit_cache):
        params, _, pts = orbit_cache("9/10", 0.19, 150)
        report = escape_diagnostics(pts, period=params.period)
        assert report.escaped and report.k_escape is not None
        assert report.growth_rate > 0
        assert report.r_squared > 0.999

    def test_growth_increases_with_eps(self, orbit_cache):
        params, _, p19 = orbit_cache("9/10", 0.19, 150)
        _, _, p20 = orbit_cache("9/10", 0.20, 150)
        r19 = escape_diagnostics(p19, period=params.period)
        r20 = escape_diagnostics(p20, period=params.period)
        assert r20.growth_rate > r19.growth_rate

    def test_empty_section_rejected(self):
        with pytest.raises(ValueError):
            escape_diagnostics([])


class TestMonodromy:
    def test_unperturbed_trace_analytic(self):
        m = monodromy(SystemParams(F(2), F(9, 10), 0.0), 0.0)
        assert abs(m.trace - 2 * math.cos(0.9 * math.pi)) < 1e-9

    def test_det_is_one_for_random_eps(self):
        rng = random.Random(42)
        for _ in range(20):
            eps = rng.uniform(-0.25, 0.25)
            m = monodromy(P01, eps)
            assert abs(m.det - 1.0) < 1e-9

    def test_flow_linearity(self):
        rng = random.Random(1)
        m = monodromy(P01, 0.1)
        for _ in range(5):
            x0, y0 = rng.uniform(-1, 1), rng.uniform(-1, 1)
            traj = integrate_orbit(P01, x0, y0, 1)
            mx, my = m.apply(x0, y0)
            assert math.hypot(traj[-1].x - mx, traj[-1].y - my) < 1e-9

    def test_stability_dichotomy(self):
        for eps in (0.05, 0.1, 0.15, 0.18):
            assert abs(monodromy(P01, eps).trace) < 2.0
        for eps in (0.19, 0.25):
            assert abs(monodromy(P01, eps).trace) > 2.0

    def test_multi_period_composition(self):
        m1 = monodromy(P01, 0.1, n=1)
        m3 = monodromy(P01, 0.1, n=3)
        # M(3T) = M(T)^3 for the periodic coefficient flow
        a, b = m1.m11, m1.m12
        c, d = m1.m21, m1.m22
        m2 = (a * a + b * c, a * b + b * d, c * a + d * c, c * b + d * d)
        m3x = (m2[0] * a + m2[1] * c, m2[0] * b + m2[1] * d,
               m2[2] * a + m2[3] * c, m2[2] * b + m2[3] * d)
        assert m3.m11 == pytest.approx(m3x[0], abs=1e-9)
        assert m3.m22 == pytest.approx(m3x[3], abs=1e-9)

    def test_elliptic_eigenvalues_unit_modulus(self):
        m = monodromy(P01, 0.1)
        e1, e2 = m.eigenvalues()
        assert abs(abs(e1) - 1.0) < 1e-9 and abs(abs(e2) - 1.0) < 1e-9

    def test_n_validation(self):
        with pytest.raises(ValueError):
            monodromy(P01, 0.1, n=0)


class TestReversibility:
    def test_forward_backward_round_trip(self):
        traj = integrate_orbit(P01, 0.0, 1.0, 50)
        xe, ye = traj[-1].x, traj[-1].y
        xb, yb = integrate_backward(P01, xe, ye, 50)
        assert math.hypot(xb - 0.0, yb - 1.0) < 1e-7
