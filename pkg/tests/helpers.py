"""Shared synthetic-data builders and independent oracles for the suite."""

import numpy as np

import ordscore as osc


def knot_axis(rng, k, m, lo=0.05):
    """Strictly ordered interior knot values in (1, k); lo bounds the width ratio."""
    w = rng.uniform(lo, 1.0, size=m + 1)
    return 1.0 + (k - 1) * (np.cumsum(w)[:m] / w.sum())


def draw_spline_params(rng, lo=0.05, methods=("fritsch_carlson", "hyman"), k_max=8):
    k = int(rng.integers(3, k_max + 1))
    m = int(rng.integers(1, min(4, k - 2) + 1))
    method = methods[int(rng.integers(len(methods)))]
    return osc.SplineScoreParams(
        k, knot_axis(rng, k, m, lo=lo), knot_axis(rng, k, m, lo=lo), method=method
    )


def one_knot_dataset(seed, n=300, k=5, sigma=0.5):
    """Response driven by scores from a random one-knot monotone curve."""
    rng = np.random.default_rng(seed)
    t0 = rng.uniform(2.0, 4.0)
    y0 = rng.uniform(1.5, 4.5)
    true = osc.eval_scores(
        osc.build_spline(osc.SplineScoreParams(k, [t0], [y0])), k
    )
    codes = rng.integers(1, k + 1, size=n)
    factor = osc.OrderedFactor("grade", tuple("abcdefghij"[:k]), codes)
    y = 1.0 + true[codes - 1] + rng.normal(0.0, sigma, size=n)
    return factor, y, true


def recovery_dataset():
    """n=300 observations over true scores (1, 1.2, 3, 4.6, 5), noise sd 0.5."""
    true = np.array([1.0, 1.2, 3.0, 4.6, 5.0])
    rng = np.random.default_rng(42)
    codes = rng.integers(1, 6, size=300)
    factor = osc.OrderedFactor("grade", tuple("abcde"), codes)
    y = 2.0 + 1.5 * true[codes - 1] + rng.normal(0.0, 0.5, size=300)
    return factor, y, true


def level_rss_oracle(factor, y):
    """Closed-form RSS of (intercept + one score column) from level aggregates.

    Independent of the QR fitting path: uses the textbook simple-regression
    identity RSS = Syy - Sxy^2/Sxx, with sums taken per factor level.
    """
    k = factor.n_levels
    codes = factor.codes
    n = y.size
    counts = np.bincount(codes, minlength=k + 1)[1:].astype(float)
    sums = np.array([y[codes == level].sum() for level in range(1, k + 1)])
    total = y.sum()
    syy = float((y * y).sum() - total * total / n)

    def rss(scores):
        scores = np.asarray(scores, dtype=float)
        xbar = (counts * scores).sum() / n
        sxx = (counts * scores * scores).sum() - n * xbar * xbar
        sxy = (scores * sums).sum() - xbar * total
        return syy - sxy * sxy / sxx

    return rss


def one_knot_grid_minimum(factor, y, grid):
    """Brute-force criterion minimum for a one-knot spline factor.

    Sweeps the gauge-fixed working plane: grid values are log-odds of the
    knot position and height fractions on (1, K).
    """
    rss = level_rss_oracle(factor, y)
    k = factor.n_levels
    positions = 1.0 + (k - 1) / (1.0 + np.exp(-np.asarray(grid)))
    best = np.inf
    for t0 in positions:
        for y0 in positions:
            spline = osc.build_spline(osc.SplineScoreParams(k, [t0], [y0]))
            best = min(best, rss(osc.eval_scores(spline, k)))
    return best
