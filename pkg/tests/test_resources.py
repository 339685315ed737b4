import math

import numpy as np
import pytest

from memspike.resources import (LINEAR, PLATFORM_POINTS, POWER, ResourcePoint, fit, metric,
                                measured_points, predict, series)


def ols(x, y):
    """Textbook closed form, no linear algebra library."""
    n = len(x)
    mx, my = sum(x) / n, sum(y) / n
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = sum((a - mx) ** 2 for a in x)
    s = sxy / sxx
    return my - s * mx, s


def test_metric():
    assert metric(3, 3) == 27 and metric(9, 5) == 225 and metric(1, 1) == 1
    with pytest.raises(ValueError):
        metric(0, 3)


def test_measured_points():
    pts = measured_points()
    assert len(pts) == 6
    assert [(p.n_side, p.t_classes, p.alm_without, p.alm_with) for p in pts] == [
        (3, 3, 199, 122), (5, 3, 395, 214), (7, 3, 516, 237),
        (5, 5, 869, 428), (7, 5, 1309, 475), (9, 5, 1917, 540)]
    assert [metric(p.n_side, p.t_classes) for p in pts] == [27, 45, 63, 125, 175, 225]
    assert all(p.alm_with < p.alm_without for p in pts)
    assert {p["device"] for p in PLATFORM_POINTS} >= {"Stratix V"}
    with pytest.raises(ValueError):
        ResourcePoint(3, 3, 0, 1)


def test_two_points_fit_exactly():
    for model in (LINEAR, POWER):
        f = fit([(10, 20), (40, 50)], model)
        assert max(abs(r) for r in f.residuals) < 1e-12


def test_degenerate_abscissas():
    with pytest.raises(ValueError):
        fit([(5, 1), (5, 2)], LINEAR)
    with pytest.raises(ValueError):
        fit([(5, 1)], LINEAR)


@pytest.mark.parametrize("which", ["without", "with"])
def test_fits_match_closed_form(which):
    pts = series(measured_points(), which)
    x, y = [p[0] for p in pts], [p[1] for p in pts]
    lin = fit(pts, LINEAR)
    c0, c1 = ols(x, y)
    assert lin.coefficients == pytest.approx((c0, c1), rel=1e-10)
    pw = fit(pts, POWER)
    lc, s = ols([math.log(v) for v in x], [math.log(v) for v in y])
    assert pw.log_log_slope == pytest.approx(s, rel=1e-10)
    assert pw.coefficients[0] == pytest.approx(math.exp(lc), rel=1e-10)
    for f, xs in ((lin, np.array(x, float)), (pw, np.log(x))):
        r = np.array(f.residuals)
        assert len(r) == 6
        assert abs(r.sum()) < 1e-9 and abs(r @ xs) < 1e-9


def test_slope_ordering_and_endpoints():
    pts = measured_points()
    s_with = fit(series(pts, "with"), POWER).log_log_slope
    s_without = fit(series(pts, "without"), POWER).log_log_slope
    assert s_with < s_without
    assert s_with < 1.0
    # endpoint slopes
    assert math.log(1917 / 199) / math.log(225 / 27) == pytest.approx(1.07, abs=0.01)
    assert math.log(540 / 122) / math.log(225 / 27) == pytest.approx(0.70, abs=0.01)


def test_predict():
    pts = measured_points()
    for model in (LINEAR, POWER):
        f = fit(series(pts, "without"), model)
        for p, r in zip(pts, f.residuals):
            got = predict(f, p.n_side, p.t_classes)
            if model == LINEAR:
                assert got == pytest.approx(p.alm_without - r, abs=1e-9)
            else:
                assert math.log(got) == pytest.approx(math.log(p.alm_without) - r, abs=1e-9)
        grid = [predict(f, n, t) for n, t in [(3, 3), (5, 3), (7, 3), (5, 5), (7, 5), (9, 5)]]
        assert grid == sorted(grid)


def test_leave_one_out_prediction():
    pts = measured_points()
    f = fit(series(pts[:-1], "without"), POWER)
    assert abs(predict(f, 9, 5) - 1917) / 1917 < 0.25
