import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from memspike.device import (DomainError, MemristorParams, MemristorState, PhysicalParams,
                             SaturationError, conductance, delta_conductance, hp_voltage,
                             integrate_interval, memristance, params_from_physical,
                             windowed_memristance)

P = MemristorParams()


@st.composite
def params(draw):
    k1 = draw(st.floats(1.0, 1e4))
    k2 = draw(st.floats(1e-3, 10.0))
    frac = draw(st.floats(0.01, 0.99))
    return MemristorParams(k1, k2, frac * k1 / k2)


def test_defaults_accepted():
    assert (P.k1, P.k2, P.dt_max) == (100.0, 1.0, 4.0)


@pytest.mark.parametrize("kw", [dict(k1=0), dict(k2=0), dict(k2=-1), dict(dt_max=100.0), dict(dt_max=0)])
def test_invalid_params_rejected(kw):
    with pytest.raises(ValueError):
        MemristorParams(**kw)


def test_physical_mapping():
    p = PhysicalParams(r_on=100, r_off=16000, mu_v=1e-10, d=1e-8)
    m = params_from_physical(p, dt_max=1e-9)
    # oracle: exact rational arithmetic on the same definitions
    k2 = Fraction(16000 - 100) * Fraction(1, 10**10) * 100 / Fraction(1, 10**8) ** 2
    assert m.k1 == 16000
    assert m.k2 == pytest.approx(float(k2), rel=1e-14)
    assert m.k2 == pytest.approx(1.59e12, rel=1e-12)


def test_physical_mapping_rejects_degenerate():
    with pytest.raises(ValueError):
        PhysicalParams(100, 100, 1e-10, 1e-8)
    with pytest.raises(ValueError):  # dt_max beyond k1/k2
        params_from_physical(PhysicalParams(100, 16000, 1e-10, 1e-8), dt_max=1.0)


def test_memristance_examples():
    assert memristance(P, 0) == 100
    assert memristance(P, 2) == 98
    with pytest.raises(DomainError):
        memristance(P, 150)
    with pytest.raises(DomainError):
        memristance(P, -0.1)


def test_conductance_examples():
    assert conductance(P, 0) == 0.01
    assert conductance(P, 2) == pytest.approx(1 / 98, abs=1e-12)
    assert conductance(P, 1) < conductance(P, 2) < conductance(P, 3)


def test_delta_conductance_examples():
    assert delta_conductance(P, 1.5, 1.5) == 0
    assert delta_conductance(P, 2, 1) == pytest.approx(1 / 98 - 1 / 99, abs=1e-15)
    assert delta_conductance(P, 2, 1) == pytest.approx(1.0307e-4, rel=1e-4)
    assert delta_conductance(P, 1, 2) == pytest.approx(-1.0307e-4, rel=1e-4)


@settings(max_examples=200, deadline=None)
@given(params(), st.lists(st.floats(0, 1), min_size=3, max_size=8, unique=True))
def test_linearity(p, fracs):
    assume(max(fracs) - min(fracs) > 0.1)  # a well-conditioned fit
    dts = np.array(fracs) * p.dt_max
    ms = np.array([memristance(p, d) for d in dts])
    slope, icpt = np.polyfit(dts, ms, 1)
    assert slope == pytest.approx(-p.k2, rel=1e-9, abs=1e-9)
    assert icpt == pytest.approx(p.k1, rel=1e-9)


@settings(max_examples=200, deadline=None)
@given(params(), st.floats(0, 1), st.floats(0, 1))
def test_monotone_antisymmetric_and_signed(p, fa, fb):
    a, b = fa * p.dt_max, fb * p.dt_max
    d = delta_conductance(p, a, b)
    assert d == -delta_conductance(p, b, a)
    if abs(a - b) > 1e-9 * p.dt_max:  # finer gaps are below double resolution
        assert (conductance(p, a) < conductance(p, b)) == (a < b)
        assert np.sign(d) == np.sign(a - b)
    elif a == b:
        assert d == 0


def test_integrate_interval():
    s = integrate_interval(MemristorState(P), 1.5)
    assert s.accumulated == 1.5
    one = integrate_interval(integrate_interval(MemristorState(P), 1.0), 1.0)
    two = integrate_interval(MemristorState(P), 2.0)
    assert one.memristance == two.memristance == one.read_voltage
    with pytest.raises(SaturationError):
        integrate_interval(MemristorState(P, 3.5), 1.0)
    with pytest.raises(DomainError):
        integrate_interval(MemristorState(P), -1.0)


HP = PhysicalParams(r_on=100, r_off=16000, mu_v=1e-10, d=1e-8)


def test_windowed_examples():
    assert windowed_memristance(HP, 0.0) == HP.r_off
    assert windowed_memristance(HP, 5e-9, window=0.0) == HP.r_off
    q = 3e-9
    assert windowed_memristance(HP, q, 1.0) == pytest.approx(hp_voltage(HP, q, current=1.0), abs=1e-12)
    with pytest.raises(SaturationError):
        windowed_memristance(HP, 1.0)
    with pytest.raises(ValueError):
        windowed_memristance(HP, q, window=1.5)


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 1))
def test_window_consistency(frac):
    dt_max = 0.9 * HP.r_off / HP.drift
    q = frac * dt_max
    lin = memristance(params_from_physical(HP, dt_max), q)
    assert windowed_memristance(HP, q) == pytest.approx(lin, abs=1e-12 * HP.r_off)
    assert math.isclose(hp_voltage(HP, q, 2.0), 2 * lin, rel_tol=1e-12)
