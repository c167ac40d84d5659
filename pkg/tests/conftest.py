"""Shared fixtures: expensive orbits, builds and boundary locations are
computed once per session and reused across test modules."""

from fractions import Fraction

import pytest

from mathieu_integrals import (SystemParams, build_integral, critical_epsilon,
                               integrate_orbit, stroboscopic_section)


@pytest.fixture(scope="session")
def params09():
    return SystemParams(Fraction(2), Fraction(9, 10), 0.1)


@pytest.fixture(scope="session")
def phi28(params09):
    return build_integral(params09, 28)


@pytest.fixture(scope="session")
def orbit_cache():
    """Memoized orbits: key (omega1, eps, periods, spp, x0, y0) -> (traj, section)."""
    cache = {}

    def get(omega1, eps, periods, spp=1, x0=0.0, y0=1.0):
        key = (str(omega1), float(eps), periods, spp, x0, y0)
        if key not in cache:
            params = SystemParams(Fraction(2), Fraction(omega1), float(eps))
            traj = integrate_orbit(params, x0, y0, periods, samples_per_period=spp)
            cache[key] = (params, traj, stroboscopic_section(traj, params))
        return cache[key]

    return get


@pytest.fixture(scope="session")
def crit_cache():
    """Memoized critical-epsilon results: key (omega1, sign) -> CriticalEpsResult."""
    cache = {}

    def get(omega1, sign=1):
        key = (str(omega1), sign)
        if key not in cache:
            params = SystemParams(Fraction(2), Fraction(omega1), 0.0)
            cache[key] = critical_epsilon(params, sign=sign)
        return cache[key]

    return get
