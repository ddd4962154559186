import numpy as np
import pytest
from scipy.interpolate import CubicSpline, PchipInterpolator

import ordscore as osc
from helpers import draw_spline_params
from ordscore.errors import DegenerateScores, InvalidKnots
from ordscore.monospline import _natural_cubic_tangents


def test_identity_spline_exact():
    spline = osc.build_spline(osc.SplineScoreParams(5, [2.0, 4.0], [2.0, 4.0]))
    assert np.allclose(spline.tangents, 1.0, atol=1e-14)
    grid = np.linspace(1.0, 5.0, 4001)
    assert np.max(np.abs(spline.evaluate(grid) - grid)) <= 1e-12
    assert np.array_equal(osc.eval_scores(spline, 4 + 1), [1.0, 2.0, 3.0, 4.0, 5.0])


@pytest.mark.parametrize("method", ["fritsch_carlson", "hyman"])
def test_single_knot_example(method):
    spline = osc.build_spline(osc.SplineScoreParams(5, [3.0], [2.0], method=method))
    scores = osc.eval_scores(spline, 5)
    assert scores[0] == 1.0
    assert scores[4] == 5.0
    assert spline.evaluate(3.0) == 2.0
    assert np.all(np.diff(scores) > 0)
    assert 1.0 < scores[1] < 2.0
    assert 2.0 < scores[3] < 5.0


def test_fritsch_carlson_matches_pchip_where_projection_inactive():
    # When every interval's tangent pair already lies inside the circle
    # alpha^2 + beta^2 <= 9, the construction coincides with PCHIP, so
    # scipy is an exact reference.
    rng = np.random.default_rng(99)
    matched = 0
    for _ in range(300):
        params = draw_spline_params(rng, lo=0.05, methods=("fritsch_carlson",))
        spline = osc.build_spline(params)
        pchip = PchipInterpolator(spline.x, spline.y)
        d_ref = pchip.derivative()(spline.x)
        delta = np.diff(spline.y) / np.diff(spline.x)
        alpha = d_ref[:-1] / delta
        beta = d_ref[1:] / delta
        if np.all(alpha**2 + beta**2 <= 9.0):
            grid = np.linspace(spline.x[0], spline.x[-1], 400)
            assert np.allclose(spline.tangents, d_ref, atol=1e-11)
            assert np.max(np.abs(spline.evaluate(grid) - pchip(grid))) <= 1e-11
            matched += 1
    assert matched >= 100


def test_natural_tangents_match_scipy():
    rng = np.random.default_rng(17)
    for _ in range(100):
        params = draw_spline_params(rng, lo=0.05)
        x = np.concatenate(([1.0], params.interior_x, [float(params.n_levels)]))
        y = np.concatenate(([1.0], params.interior_y, [float(params.n_levels)]))
        ref = CubicSpline(x, y, bc_type="natural").derivative()(x)
        assert np.allclose(_natural_cubic_tangents(x, y), ref, atol=1e-9)


@pytest.mark.parametrize("method", ["fritsch_carlson", "hyman"])
def test_interpolation_and_monotonicity(method):
    rng = np.random.default_rng(111)
    for _ in range(300):
        params = draw_spline_params(rng, lo=0.05, methods=(method,))
        spline = osc.build_spline(params)
        assert np.max(np.abs(spline.evaluate(params.interior_x) - params.interior_y)) <= 1e-12
        assert spline.evaluate(1.0) == 1.0
        assert spline.evaluate(float(params.n_levels)) == float(params.n_levels)
        grid = np.linspace(1.0, params.n_levels, 2000)
        vals = spline.evaluate(grid)
        assert np.min(np.diff(vals)) >= -1e-12


@pytest.mark.parametrize("method", ["fritsch_carlson", "hyman"])
def test_c1_at_interior_knots(method):
    rng = np.random.default_rng(222)
    h = 1e-6
    for _ in range(200):
        params = draw_spline_params(rng, lo=0.4, methods=(method,))
        spline = osc.build_spline(params)
        for t in params.interior_x:
            left = (spline.evaluate(t) - spline.evaluate(t - h)) / h
            right = (spline.evaluate(t + h) - spline.evaluate(t)) / h
            assert abs(left - right) <= 1e-4 * max(abs(left), abs(right))


@pytest.mark.parametrize("method", ["fritsch_carlson", "hyman"])
def test_near_flat_pair_gives_near_zero_tangents(method):
    params = osc.SplineScoreParams(
        5, [2.5, 2.7], [2.0, 2.0 + 1e-13], method=method
    )
    spline = osc.build_spline(params)
    # knots 1 and 2 of the full array are the near-tied pair
    assert abs(spline.tangents[1]) <= 1e-9
    assert abs(spline.tangents[2]) <= 1e-9


def test_tied_integer_evaluations_raise():
    params = osc.SplineScoreParams(5, [2.0, 3.0], [2.0, 2.0 + 1e-13])
    with pytest.raises(DegenerateScores):
        osc.eval_scores(osc.build_spline(params), 5)


def test_invalid_knots():
    with pytest.raises(InvalidKnots):
        osc.SplineScoreParams(5, [3.0, 2.0], [2.0, 3.0])  # x not increasing
    with pytest.raises(InvalidKnots):
        osc.SplineScoreParams(5, [1.0], [2.0])  # x at boundary
    with pytest.raises(InvalidKnots):
        osc.SplineScoreParams(5, [2.0], [5.0])  # y at boundary
    with pytest.raises(InvalidKnots):
        osc.SplineScoreParams(2, [1.5], [1.5])  # K too small
    with pytest.raises(InvalidKnots):
        osc.SplineScoreParams(5, [2.0], [2.0], method="other")


def test_evaluate_outside_domain_raises():
    spline = osc.build_spline(osc.SplineScoreParams(5, [3.0], [3.0]))
    with pytest.raises(ValueError):
        spline.evaluate(0.5)
    with pytest.raises(ValueError):
        spline.evaluate(np.array([2.0, 5.5]))
