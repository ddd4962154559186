"""Nested optimization of score parameters.

Each score-mapped factor contributes a block of unconstrained working
parameters.  Evaluating a candidate block regenerates that factor's scores,
rebuilds the design matrix, and refits the inner model; the outer search
minimizes the resulting fit criterion over all blocks jointly with a
derivative-free simplex method.

Working-parameter conventions:

* quantile mapping: the skew parameter passes through unchanged; the tail
  parameter is kept nonnegative via softplus.
* spline mapping with m interior knots: m+1 log-weights per axis define
  cell widths on (1, K) whose cumulative fractions give strictly ordered
  knot positions, so every working vector maps to valid knots.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.optimize import minimize

from .errors import (
    DegenerateScores,
    InvalidDegree,
    InvalidKnots,
    IrlsDidNotConverge,
    SingularDesign,
)
from .factors import (
    OrderedFactor,
    contrast_names,
    expand_scores,
    integer_scores,
    polynomial_contrasts,
)
from .fitting import Family, FitResult, fit_glm
from .monospline import METHODS, SplineScoreParams, build_spline, eval_scores
from .quantiles import GHParams, gh_scores

__all__ = [
    "IntegerMapping",
    "PolyMapping",
    "GHMapping",
    "SplineMapping",
    "FactorTerm",
    "ModelSpec",
    "FactorPlan",
    "ModelPlan",
    "OptimizedFit",
    "OptimizerDiagnostics",
    "n_working",
    "start_working",
    "to_theta",
    "from_theta",
    "scores_for",
    "build_design",
    "fit_model",
    "optimize_scores",
    "variant_model",
    "compare_encodings",
]

START_TAIL = 0.05  # tail-weight value implied by the identity start point

_RECOVERABLE = (DegenerateScores, InvalidKnots, SingularDesign, IrlsDidNotConverge)


@dataclass(frozen=True)
class IntegerMapping:
    """Fixed scores 1..K; nothing to optimize."""


@dataclass(frozen=True)
class PolyMapping:
    """Orthonormal polynomial contrasts of the given degree."""

    degree: int


@dataclass(frozen=True)
class GHMapping:
    """Scores from the g-and-h quantile function; two free parameters."""


@dataclass(frozen=True)
class SplineMapping:
    """Scores from a monotone cubic with m interior knots."""

    m: int
    method: str = "fritsch_carlson"

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"spline mapping needs m >= 1 interior knots, got {self.m}")
        if self.method not in METHODS:
            raise ValueError(f"unknown spline method {self.method!r}")


Mapping = Union[IntegerMapping, PolyMapping, GHMapping, SplineMapping]


@dataclass(frozen=True)
class FactorTerm:
    """An ordered factor together with its design-matrix mapping."""

    factor: OrderedFactor
    mapping: Mapping

    def __post_init__(self):
        k = self.factor.n_levels
        m = self.mapping
        if isinstance(m, (GHMapping, SplineMapping)) and k < 3:
            raise ValueError(
                f"factor {self.factor.name!r} has {k} levels; score optimization "
                "requires K >= 3 (encode a binary factor directly, e.g. as 0/1)"
            )
        if isinstance(m, SplineMapping) and m.m > k - 2:
            raise ValueError(
                f"factor {self.factor.name!r}: at most K-2 = {k - 2} interior "
                f"knots are supported, got m = {m.m}"
            )
        if isinstance(m, PolyMapping) and not 1 <= m.degree <= k - 1:
            raise InvalidDegree(
                f"factor {self.factor.name!r}: contrast degree must be in "
                f"1..{k - 1}, got {m.degree}"
            )

    @property
    def optimized(self) -> bool:
        return isinstance(self.mapping, (GHMapping, SplineMapping))


@dataclass(frozen=True)
class ModelSpec:
    """Response, numeric covariates, factor terms, and the GLM family."""

    y: np.ndarray
    covariates: tuple[tuple[str, np.ndarray], ...]
    terms: tuple[FactorTerm, ...]
    family: Family = Family.GAUSSIAN_IDENTITY

    def __post_init__(self):
        y = np.asarray(self.y, dtype=float)
        object.__setattr__(self, "y", y)
        covs = tuple((str(n), np.asarray(c, dtype=float)) for n, c in self.covariates)
        object.__setattr__(self, "covariates", covs)
        object.__setattr__(self, "terms", tuple(self.terms))
        n = y.size
        names = [c for c, _ in covs] + [t.factor.name for t in self.terms]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate term names in model: {names}")
        for cname, col in covs:
            if col.shape != (n,):
                raise ValueError(f"covariate {cname!r} length mismatch")
        for t in self.terms:
            if t.factor.codes.shape != (n,):
                raise ValueError(f"factor {t.factor.name!r} length mismatch")


def _softplus(w: float) -> float:
    return float(np.logaddexp(0.0, w))


def _softplus_inv(h: float) -> float:
    if h <= 0.0:
        raise ValueError("softplus inverse requires a positive value")
    return float(np.log(np.expm1(h)))


def n_working(mapping: Mapping) -> int:
    """Length of the unconstrained block for one factor (0 if fixed)."""
    if isinstance(mapping, GHMapping):
        return 2
    if isinstance(mapping, SplineMapping):
        return 2 * (mapping.m + 1)
    return 0


def start_working(mapping: Mapping) -> np.ndarray:
    """Identity start: zero log-weights for splines, (0, softplus^-1(0.05))
    for the quantile mapping."""
    if isinstance(mapping, GHMapping):
        return np.array([0.0, _softplus_inv(START_TAIL)])
    if isinstance(mapping, SplineMapping):
        return np.zeros(2 * (mapping.m + 1))
    return np.zeros(0)


def _cumulative_fractions(logw: np.ndarray) -> np.ndarray:
    # Softmax-style cell widths; shift-invariant and always strictly ordered
    # up to floating-point underflow of individual cells.
    e = np.exp(logw - logw.max())
    return np.cumsum(e)[:-1] / e.sum()


def to_theta(w: np.ndarray, mapping: Mapping, n_levels: int) -> np.ndarray:
    """Map a working block to the constrained score parameters.

    Quantile: (g, h).  Spline: (t_1..t_m, y_1..y_m) with both axes strictly
    increasing inside (1, K).
    """
    w = np.asarray(w, dtype=float)
    if isinstance(mapping, GHMapping):
        if w.shape != (2,):
            raise ValueError(f"expected 2 working values, got {w.shape}")
        return np.array([w[0], _softplus(w[1])])
    if isinstance(mapping, SplineMapping):
        size = 2 * (mapping.m + 1)
        if w.shape != (size,):
            raise ValueError(f"expected {size} working values, got {w.shape}")
        half = mapping.m + 1
        t = 1.0 + (n_levels - 1) * _cumulative_fractions(w[:half])
        y = 1.0 + (n_levels - 1) * _cumulative_fractions(w[half:])
        return np.concatenate([t, y])
    raise ValueError(f"mapping {mapping!r} has no working parameters")


def from_theta(theta: np.ndarray, mapping: Mapping, n_levels: int) -> np.ndarray:
    """Canonical working block reproducing the given score parameters."""
    theta = np.asarray(theta, dtype=float)
    if isinstance(mapping, GHMapping):
        return np.array([theta[0], _softplus_inv(theta[1])])
    if isinstance(mapping, SplineMapping):
        m = mapping.m

        def logw(vals):
            frac = (vals - 1.0) / (n_levels - 1.0)
            widths = np.diff(np.concatenate([[0.0], frac, [1.0]]))
            if np.any(widths <= 0.0):
                raise ValueError("knot values must be strictly ordered inside (1, K)")
            return np.log(widths)

        return np.concatenate([logw(theta[:m]), logw(theta[m:])])
    raise ValueError(f"mapping {mapping!r} has no working parameters")


def scores_for(term: FactorTerm, theta: np.ndarray | None = None) -> np.ndarray:
    """Score vector of a term at the given constrained parameters."""
    k = term.factor.n_levels
    mapping = term.mapping
    if isinstance(mapping, IntegerMapping):
        return integer_scores(term.factor)
    if isinstance(mapping, GHMapping):
        theta = np.asarray(theta, dtype=float)
        return gh_scores(k, GHParams(g=float(theta[0]), h=float(theta[1])))
    if isinstance(mapping, SplineMapping):
        theta = np.asarray(theta, dtype=float)
        m = mapping.m
        params = SplineScoreParams(
            n_levels=k,
            interior_x=theta[:m],
            interior_y=theta[m:],
            method=mapping.method,
        )
        return eval_scores(build_spline(params), k)
    raise ValueError(f"{type(mapping).__name__} does not define a score vector")


def build_design(
    model: ModelSpec, thetas: dict[str, np.ndarray] | None = None
) -> tuple[np.ndarray, list[str]]:
    """Design matrix (intercept first) and column names at given parameters."""
    thetas = thetas or {}
    n = model.y.size
    cols: list[np.ndarray] = [np.ones(n)]
    names: list[str] = ["(Intercept)"]
    for cname, col in model.covariates:
        cols.append(col)
        names.append(cname)
    for term in model.terms:
        f = term.factor
        if isinstance(term.mapping, PolyMapping):
            contrasts = polynomial_contrasts(f.n_levels, term.mapping.degree)
            cols.extend(contrasts[f.codes - 1, j] for j in range(term.mapping.degree))
            names.extend(contrast_names(f.name, term.mapping.degree))
        else:
            theta = thetas.get(f.name)
            if term.optimized and theta is None:
                raise ValueError(f"no score parameters supplied for {f.name!r}")
            cols.append(expand_scores(f, scores_for(term, theta)))
            names.append(f"{f.name}.score")
    return np.column_stack(cols), names


def fit_model(model: ModelSpec, thetas: dict[str, np.ndarray] | None = None) -> FitResult:
    """Inner fit at fixed score parameters."""
    x, names = build_design(model, thetas)
    return fit_glm(x, model.y, model.family, names)


@dataclass
class OptimizerDiagnostics:
    n_parameters: int
    evaluations: int
    start_criterion: float
    best_criterion: float


@dataclass
class OptimizedFit:
    """Best fit found, with per-factor scores and score parameters."""

    fit: FitResult
    scores: dict[str, np.ndarray]
    theta: dict[str, np.ndarray]
    diagnostics: OptimizerDiagnostics | None = None


def _initial_simplex(x0: np.ndarray, step: float) -> np.ndarray:
    dim = x0.size
    simplex = np.tile(x0, (dim + 1, 1))
    for i in range(dim):
        simplex[i + 1, i] += step
    return simplex


def _score_result(model: ModelSpec, thetas: dict[str, np.ndarray]):
    scores = {}
    for term in model.terms:
        if isinstance(term.mapping, PolyMapping):
            continue
        scores[term.factor.name] = scores_for(term, thetas.get(term.factor.name))
    return scores


def optimize_scores(
    model: ModelSpec,
    *,
    max_evals: int = 2000,
    fatol: float = 1e-9,
    initial_step: float = 0.25,
) -> OptimizedFit:
    """Minimize the fit criterion over all factors' score parameters jointly.

    Runs a Nelder-Mead search from the identity start point (simplex step
    ``initial_step`` per coordinate, terminating when the simplex criterion
    spread drops below ``fatol`` or after ``max_evals`` evaluations), then
    restarts once from the incumbent with the step halved.  Candidate
    parameters whose scores or inner fit fail are treated as +inf; the
    returned criterion therefore never exceeds the start-point criterion.
    """
    free_terms = [t for t in model.terms if t.optimized]
    slices: dict[str, slice] = {}
    pos = 0
    for term in free_terms:
        width = n_working(term.mapping)
        slices[term.factor.name] = slice(pos, pos + width)
        pos += width

    def thetas_of(w: np.ndarray) -> dict[str, np.ndarray]:
        return {
            t.factor.name: to_theta(
                w[slices[t.factor.name]], t.mapping, t.factor.n_levels
            )
            for t in free_terms
        }

    if not free_terms:
        fit = fit_model(model)
        return OptimizedFit(
            fit=fit,
            scores=_score_result(model, {}),
            theta={},
            diagnostics=None,
        )

    evals = 0
    best_value = np.inf
    best_w: np.ndarray | None = None

    def objective(w: np.ndarray, strict: bool = False) -> float:
        nonlocal evals, best_value, best_w
        evals += 1
        try:
            value = fit_model(model, thetas_of(w)).criterion
        except _RECOVERABLE:
            if strict:
                raise
            return np.inf
        if value < best_value:
            best_value = value
            best_w = np.asarray(w, dtype=float).copy()
        return value

    w0 = np.concatenate([start_working(t.mapping) for t in free_terms])
    start_criterion = objective(w0, strict=True)

    step = initial_step
    x_from = w0
    for _ in range(2):  # initial run plus one halved-step restart
        minimize(
            objective,
            x_from,
            method="Nelder-Mead",
            options=dict(
                initial_simplex=_initial_simplex(x_from, step),
                maxfev=max_evals,
                maxiter=10**9,
                fatol=fatol,
                xatol=1e100,
                disp=False,
            ),
        )
        x_from = best_w
        step /= 2.0

    thetas = thetas_of(best_w)
    fit = fit_model(model, thetas)
    return OptimizedFit(
        fit=fit,
        scores=_score_result(model, thetas),
        theta=thetas,
        diagnostics=OptimizerDiagnostics(
            n_parameters=w0.size,
            evaluations=evals,
            start_criterion=start_criterion,
            best_criterion=best_value,
        ),
    )


@dataclass(frozen=True)
class FactorPlan:
    """How one factor is encoded across the comparison variants.

    Scored factors get polynomial contrasts of ``baseline_degree`` (default
    K-1) in the baseline variant, g-and-h scores in the quantile variant and
    a monotone spline with ``spline_m`` interior knots in the spline
    variant.  Unscored factors keep their fixed mapping everywhere.
    """

    factor: OrderedFactor
    scored: bool = True
    fixed: Mapping | None = None
    spline_m: int = 1
    spline_method: str = "fritsch_carlson"
    baseline_degree: int | None = None

    def __post_init__(self):
        k = self.factor.n_levels
        if self.scored:
            if k < 3:
                raise ValueError(
                    f"factor {self.factor.name!r} has {k} levels; score "
                    "optimization requires K >= 3 (encode a binary factor "
                    "directly, e.g. as 0/1)"
                )
            if not 1 <= self.spline_m <= k - 2:
                raise ValueError(
                    f"factor {self.factor.name!r}: spline_m must be in "
                    f"1..{k - 2}, got {self.spline_m}"
                )
            if self.spline_method not in METHODS:
                raise ValueError(f"unknown spline method {self.spline_method!r}")
            deg = self.baseline_degree
            if deg is not None and not 1 <= deg <= k - 1:
                raise ValueError(
                    f"factor {self.factor.name!r}: baseline_degree must be in "
                    f"1..{k - 1}, got {deg}"
                )
        elif self.fixed is None or isinstance(self.fixed, (GHMapping, SplineMapping)):
            raise ValueError(
                f"factor {self.factor.name!r}: an unscored factor needs a "
                "fixed integer or polynomial mapping"
            )


@dataclass(frozen=True)
class ModelPlan:
    """A model whose scored factors can be resolved per comparison variant."""

    y: np.ndarray
    covariates: tuple[tuple[str, np.ndarray], ...]
    factors: tuple[FactorPlan, ...]
    family: Family = Family.GAUSSIAN_IDENTITY


VARIANTS = ("baseline", "quantile", "spline")


def variant_model(plan: ModelPlan, variant: str) -> ModelSpec:
    """Resolve a plan into the concrete model of one comparison variant."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    terms = []
    for fp in plan.factors:
        if not fp.scored:
            mapping: Mapping = fp.fixed
        elif variant == "baseline":
            mapping = PolyMapping(fp.baseline_degree or fp.factor.n_levels - 1)
        elif variant == "quantile":
            mapping = GHMapping()
        else:
            mapping = SplineMapping(fp.spline_m, fp.spline_method)
        terms.append(FactorTerm(fp.factor, mapping))
    return ModelSpec(plan.y, plan.covariates, tuple(terms), plan.family)


def compare_encodings(plan: ModelPlan) -> dict[str, OptimizedFit]:
    """Fit the baseline, quantile, and spline variants of one model."""
    results: dict[str, OptimizedFit] = {}
    for variant in VARIANTS:
        model = variant_model(plan, variant)
        if any(t.optimized for t in model.terms):
            results[variant] = optimize_scores(model)
        else:
            fit = fit_model(model)
            results[variant] = OptimizedFit(
                fit=fit,
                scores=_score_result(model, {}),
                theta={},
                diagnostics=None,
            )
    return results
