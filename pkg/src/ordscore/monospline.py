"""Monotone cubic interpolation through pinned corner knots.

Score curves are piecewise cubic Hermite interpolants through the corner
points (1, 1) and (K, K) plus m strictly interior knots.  Two tangent
constructions are provided, both guaranteeing a C1, nondecreasing curve:

``fritsch_carlson``
    Shape-preserving tangent initialization (harmonic-mean three-point
    formula at interior knots, one-sided three-point formula at the ends),
    followed by rescaling of each interval's tangent pair into the circle
    alpha^2 + beta^2 <= 9 of the monotonicity region.

``hyman``
    Tangents of the natural C2 cubic spline, clipped interval-wise so the
    interpolant cannot overshoot between knots.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from .errors import DegenerateScores, InvalidKnots

__all__ = ["SplineScoreParams", "MonotoneCubic", "build_spline", "eval_scores"]

METHODS = ("fritsch_carlson", "hyman")


@dataclass(frozen=True)
class SplineScoreParams:
    """Interior knots of a score curve on [1, K].

    Both knot abscissae ``interior_x`` and ordinates ``interior_y`` must be
    strictly increasing and strictly inside (1, K).
    """

    n_levels: int
    interior_x: np.ndarray
    interior_y: np.ndarray
    method: str = "fritsch_carlson"

    def __post_init__(self):
        k = int(self.n_levels)
        if k < 3:
            raise InvalidKnots(f"spline scores require at least 3 levels, got {k}")
        if self.method not in METHODS:
            raise InvalidKnots(
                f"unknown method {self.method!r}; expected one of {METHODS}"
            )
        tx = np.asarray(self.interior_x, dtype=float)
        ty = np.asarray(self.interior_y, dtype=float)
        if tx.ndim != 1 or tx.shape != ty.shape or tx.size < 1:
            raise InvalidKnots("interior_x and interior_y must be equal-length 1-d arrays")
        for label, v in (("interior_x", tx), ("interior_y", ty)):
            if not np.all(np.isfinite(v)):
                raise InvalidKnots(f"{label} contains non-finite values")
            if np.any(np.diff(v) <= 0.0):
                raise InvalidKnots(f"{label} must be strictly increasing")
            if v[0] <= 1.0 or v[-1] >= k:
                raise InvalidKnots(f"{label} must lie strictly inside (1, {k})")
        tx = tx.copy()
        ty = ty.copy()
        tx.setflags(write=False)
        ty.setflags(write=False)
        object.__setattr__(self, "n_levels", k)
        object.__setattr__(self, "interior_x", tx)
        object.__setattr__(self, "interior_y", ty)

    @property
    def n_interior(self) -> int:
        return self.interior_x.size


@dataclass(frozen=True)
class MonotoneCubic:
    """Piecewise cubic Hermite interpolant; immutable, evaluation is reentrant."""

    x: np.ndarray
    y: np.ndarray
    tangents: np.ndarray

    def evaluate(self, u):
        """Evaluate at points inside [x[0], x[-1]] (vectorized)."""
        u_arr = np.asarray(u, dtype=float)
        x, y, d = self.x, self.y, self.tangents
        if u_arr.size and (np.any(u_arr < x[0]) or np.any(u_arr > x[-1])):
            raise ValueError(
                f"evaluation points must lie in [{x[0]}, {x[-1]}]"
            )
        idx = np.clip(np.searchsorted(x, u_arr, side="right") - 1, 0, x.size - 2)
        h = x[idx + 1] - x[idx]
        s = (y[idx + 1] - y[idx]) / h
        v = u_arr - x[idx]
        c3 = (d[idx] + d[idx + 1] - 2.0 * s) / (h * h)
        c2 = (3.0 * s - 2.0 * d[idx] - d[idx + 1]) / h
        out = ((c3 * v + c2) * v + d[idx]) * v + y[idx]
        # v == 0 already reproduces the left knot exactly; the right domain
        # endpoint is the one evaluation that needs snapping.
        out = np.where(u_arr == x[-1], y[-1], out)
        return float(out) if np.ndim(u) == 0 else out

    __call__ = evaluate


def _edge_tangent(h0, h1, d0, d1):
    # One-sided three-point estimate, shape-clipped (d0, d1 are the two
    # secant slopes adjacent to the boundary).
    d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1)
    if np.sign(d) != np.sign(d0):
        return 0.0
    if np.sign(d0) != np.sign(d1) and abs(d) > 3.0 * abs(d0):
        return 3.0 * d0
    return d


def _fritsch_carlson_tangents(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    h = np.diff(x)
    delta = np.diff(y) / h
    n = x.size
    d = np.zeros(n)

    w1 = 2.0 * h[1:] + h[:-1]
    w2 = h[1:] + 2.0 * h[:-1]
    same_sign = delta[:-1] * delta[1:] > 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        harmonic = (w1 + w2) / (w1 / delta[:-1] + w2 / delta[1:])
    d[1:-1] = np.where(same_sign, harmonic, 0.0)
    d[0] = _edge_tangent(h[0], h[1], delta[0], delta[1])
    d[-1] = _edge_tangent(h[-1], h[-2], delta[-1], delta[-2])

    # Rescale each interval's tangent pair into alpha^2 + beta^2 <= 9.
    for i in range(n - 1):
        if delta[i] == 0.0:
            d[i] = d[i + 1] = 0.0
            continue
        a = d[i] / delta[i]
        b = d[i + 1] / delta[i]
        r = a * a + b * b
        if r > 9.0:
            tau = 3.0 / np.sqrt(r)
            d[i] *= tau
            d[i + 1] *= tau
    return d


def _natural_cubic_tangents(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    # Slopes of the C2 interpolating spline with zero second derivative at
    # the ends, from the standard tridiagonal system.
    h = np.diff(x)
    delta = np.diff(y) / h
    n = x.size
    ab = np.zeros((3, n))
    rhs = np.empty(n)
    ab[1, 0] = 2.0
    ab[0, 1] = 1.0
    rhs[0] = 3.0 * delta[0]
    ab[1, -1] = 2.0
    ab[2, -2] = 1.0
    rhs[-1] = 3.0 * delta[-1]
    for i in range(1, n - 1):
        ab[2, i - 1] = h[i]
        ab[1, i] = 2.0 * (h[i - 1] + h[i])
        ab[0, i + 1] = h[i - 1]
        rhs[i] = 3.0 * (h[i] * delta[i - 1] + h[i - 1] * delta[i])
    return solve_banded((1, 1), ab, rhs)


def _hyman_tangents(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    h = np.diff(x)
    delta = np.diff(y) / h
    d = _natural_cubic_tangents(x, y)
    n = x.size
    for i in range(n):
        lo = delta[max(i - 1, 0)]
        hi = delta[min(i, n - 2)]
        if i in (0, n - 1):
            bound = 3.0 * abs(hi if i == 0 else lo)
        elif lo * hi <= 0.0:
            d[i] = 0.0
            continue
        else:
            bound = 3.0 * min(abs(lo), abs(hi))
        sign = np.sign(hi if i == 0 else lo)
        if np.sign(d[i]) != sign:
            d[i] = 0.0
        elif abs(d[i]) > bound:
            d[i] = sign * bound
    return d


def build_spline(params: SplineScoreParams) -> MonotoneCubic:
    """Monotone cubic through (1,1), the interior knots, and (K,K)."""
    k = params.n_levels
    x = np.concatenate(([1.0], params.interior_x, [float(k)]))
    y = np.concatenate(([1.0], params.interior_y, [float(k)]))
    if params.method == "fritsch_carlson":
        d = _fritsch_carlson_tangents(x, y)
    else:
        d = _hyman_tangents(x, y)
    for arr in (x, y, d):
        arr.setflags(write=False)
    return MonotoneCubic(x=x, y=y, tangents=d)


def eval_scores(spline: MonotoneCubic, n_levels: int) -> np.ndarray:
    """Scores s(1), ..., s(K); strictly increasing with s(1)=1, s(K)=K."""
    scores = spline.evaluate(np.arange(1, int(n_levels) + 1, dtype=float))
    if np.any(np.diff(scores) <= 1e-12):
        raise DegenerateScores("spline scores numerically tied at integer levels")
    return scores
