import itertools

import pytest
from hypothesis import given, settings, strategies as st

from memspike.codec import EventKind, SpikeEvent, TimingConfig
from memspike.device import MemristorParams, memristance
from memspike.timeunit import (IntervalPair, Phase, ProtocolError, WeightUpdate, new_unit,
                               normalized_gain, on_spike, read_intervals, run_unit, unit_bank,
                               weight_updates)

P, T = MemristorParams(), TimingConfig()


def ev(kind, tick):
    return SpikeEvent(tick, kind)


def test_walkthrough():
    u = new_unit(P, T)
    assert u.phase is Phase.IDLE and not (u.switch_k1 or u.switch_k2)
    u = on_spike(u, ev(EventKind.BLACK, 0))
    assert (u.phase, u.t_black, u.switch_k1, u.switch_k2) == (Phase.RECORDING_FIRST, 0, True, False)
    u = on_spike(u, ev(EventKind.OUTPUT, 300))
    assert (u.phase, u.t_out, u.switch_k1, u.switch_k2) == (Phase.RECORDING_SECOND, 300, False, True)
    u = on_spike(u, ev(EventKind.WHITE, 500))
    assert u.phase is Phase.DONE and not (u.switch_k1 or u.switch_k2)
    assert u.m1.accumulated == pytest.approx(1.2, abs=1e-12)
    assert u.m2.accumulated == pytest.approx(0.8, abs=1e-12)
    iv = read_intervals(u, T)
    assert (iv.dt1, iv.dt2) == (pytest.approx(1.2, abs=1e-12), pytest.approx(-0.8, abs=1e-12))
    # stored memristance agrees with the device law on the same interval
    assert u.m1.memristance == memristance(P, iv.dt1)


def test_protocol_errors():
    u = on_spike(new_unit(P, T), ev(EventKind.BLACK, 10))
    with pytest.raises(ProtocolError):
        on_spike(u, ev(EventKind.BLACK, 20))
    with pytest.raises(ProtocolError):
        on_spike(u, ev(EventKind.OUTPUT, 5))
    done = run_unit(P, T, 100)
    with pytest.raises(ProtocolError):
        on_spike(done, ev(EventKind.OUTPUT, 900))
    with pytest.raises(ProtocolError):
        read_intervals(u, T)


def test_no_fire_reads_none():
    assert read_intervals(run_unit(P, T, None), T) is None
    assert weight_updates(P, None, True, 30) == WeightUpdate(0.0, 0.0)


KINDS = (EventKind.BLACK, EventKind.OUTPUT, EventKind.WHITE)


def test_switch_exclusivity_exhaustive():
    # every delivery order of every subset of the three spikes, including
    # duplicates, on a small tick grid
    seen = 0
    for n in range(1, 5):
        for kinds in itertools.product(KINDS, repeat=n):
            for ticks in itertools.combinations_with_replacement(range(3), n):
                u = new_unit(P, T)
                for k, t in zip(kinds, ticks):
                    try:
                        u = on_spike(u, ev(k, t))
                    except ProtocolError:
                        break
                    seen += 1
                    assert not (u.switch_k1 and u.switch_k2)
                    assert u.switch_k1 == (u.phase is Phase.RECORDING_FIRST)
                    assert u.switch_k2 == (u.phase is Phase.RECORDING_SECOND)
    assert seen > 100


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 999))
def test_interval_gap_constant(t_out):
    iv = read_intervals(run_unit(P, T, t_out), T)
    assert iv.dt1 - iv.dt2 == pytest.approx(2.0, abs=1e-12)
    assert iv.dt1 == pytest.approx(t_out * 0.004, abs=1e-12)


def test_coincident_output():
    assert read_intervals(run_unit(P, T, 0), T).dt1 == 0.0


def test_update_examples():
    iv = IntervalPair(1.2, -0.8)
    win = weight_updates(P, iv, True, 30)
    # oracle: the conductance ratio written out directly
    assert win.dw_black == pytest.approx(30 * (100 / 98.8 - 1), abs=1e-12)
    assert win.dw_white == pytest.approx(-30 * (100 / 99.2 - 1), abs=1e-12)
    assert win.dw_black == pytest.approx(0.3644, abs=1e-4)
    assert win.dw_white == pytest.approx(-0.2419, abs=1e-4)
    lose = weight_updates(P, iv, False, 30)
    assert (lose.dw_black, lose.dw_white) == (-win.dw_black, -win.dw_white)
    assert weight_updates(P, IntervalPair(0.0, -2.0), True, 30).dw_black == 0.0


@settings(max_examples=300, deadline=None)
@given(st.floats(0, 4), st.floats(0, 4))
def test_gain_increasing_and_zero_at_zero(a, b):
    assert normalized_gain(P, 0.0) == 0.0
    if b - a > 1e-9:  # finer gaps are below double resolution
        assert normalized_gain(P, a) < normalized_gain(P, b)
    assert normalized_gain(P, -a) == normalized_gain(P, a)


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 499), st.floats(0.1, 500))
def test_winner_sign_contract(t_out, eta):
    iv = read_intervals(run_unit(P, T, t_out), T)
    w = weight_updates(P, iv, True, eta)
    lo = weight_updates(P, iv, False, eta)
    assert w.dw_black > 0 > w.dw_white
    assert lo.dw_black < 0 < lo.dw_white


def test_update_domain_error_propagates():
    with pytest.raises(ValueError):
        weight_updates(P, IntervalPair(5.0, 3.0), True, 30)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_bank_has_two_memristors_per_neuron(n):
    bank = unit_bank(P, T, n)
    memristors = [m for u in bank for m in (u.m1, u.m2)]
    switches = [s for u in bank for s in ("k1", "k2")]
    assert len(bank) == n and len(memristors) == 2 * n and len(switches) == 2 * n
