"""Inner model fits: least squares and IRLS for GLMs.

The target criterion is the residual sum of squares for Gaussian models and
the residual deviance otherwise; in both cases lower is better, and the
criterion is what the outer score search minimizes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.stats
from scipy.special import expit, xlogy

from .errors import InsufficientData, IrlsDidNotConverge, SingularDesign

__all__ = ["Family", "FitResult", "fit_ols", "fit_glm"]

_RANK_TOL = 1e-10
_IRLS_TOL = 1e-10
_IRLS_MAX_ITER = 50


class Family(enum.Enum):
    GAUSSIAN_IDENTITY = "gaussian"
    BINOMIAL_LOGIT = "binomial"
    POISSON_LOG = "poisson"

    @classmethod
    def from_string(cls, s: str) -> "Family":
        for fam in cls:
            if fam.value == s:
                return fam
        raise ValueError(f"unknown family {s!r}; expected one of "
                         f"{[f.value for f in cls]}")


@dataclass
class FitResult:
    """Coefficient summary plus the fit criterion.

    ``criterion`` is the RSS for Gaussian fits and the residual deviance for
    other families.  ``residual_sd`` is sqrt(criterion/df) and only defined
    for Gaussian fits.  Standard errors treat the design as fixed.
    """

    names: list[str]
    coefficients: np.ndarray
    std_errors: np.ndarray
    t_values: np.ndarray
    p_values: np.ndarray
    criterion: float
    df_residual: int
    family: Family
    residual_sd: float | None = None
    n_obs: int = 0
    iterations: int = field(default=0, repr=False)

    def coefficient(self, name: str) -> float:
        return float(self.coefficients[self.names.index(name)])

    def t_value(self, name: str) -> float:
        return float(self.t_values[self.names.index(name)])


def _pivoted_qr_solve(x: np.ndarray, z: np.ndarray):
    """Least squares via column-pivoted QR with a rank check.

    Returns (beta, unscaled covariance (X'X)^-1).
    """
    n, p = x.shape
    q, r, piv = scipy.linalg.qr(x, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    if diag[0] == 0.0 or np.any(diag < _RANK_TOL * diag[0]):
        bad = int(np.argmax(diag < _RANK_TOL * max(diag[0], 1.0)))
        raise SingularDesign(
            f"design matrix is rank deficient (pivot column {piv[bad]})"
        )
    beta_piv = scipy.linalg.solve_triangular(r, q.T @ z)
    r_inv = scipy.linalg.solve_triangular(r, np.eye(p))
    cov_piv = r_inv @ r_inv.T
    inv = np.argsort(piv)
    return beta_piv[inv], cov_piv[np.ix_(inv, inv)]


def _default_names(p: int) -> list[str]:
    return ["(Intercept)"] + [f"x{j}" for j in range(1, p)]


def fit_ols(x: np.ndarray, y: np.ndarray, names: list[str] | None = None) -> FitResult:
    """Gaussian least-squares fit of y on a design matrix with intercept.

    Standard errors come from sigma^2 (X'X)^-1 with sigma^2 = RSS/(n-p);
    two-sided p-values from the t distribution on n-p degrees of freedom.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n, p = x.shape
    if n <= p:
        raise InsufficientData(f"need more observations ({n}) than columns ({p})")
    beta, cov_unscaled = _pivoted_qr_solve(x, y)
    resid = y - x @ beta
    rss = float(resid @ resid)
    df = n - p
    sigma2 = rss / df
    se = np.sqrt(sigma2 * np.diag(cov_unscaled))
    t = beta / se
    pvals = 2.0 * scipy.stats.t.sf(np.abs(t), df)
    return FitResult(
        names=list(names) if names is not None else _default_names(p),
        coefficients=beta,
        std_errors=se,
        t_values=t,
        p_values=pvals,
        criterion=rss,
        df_residual=df,
        family=Family.GAUSSIAN_IDENTITY,
        residual_sd=float(np.sqrt(sigma2)),
        n_obs=n,
        iterations=1,
    )


def _check_response(y: np.ndarray, family: Family) -> None:
    if family is Family.BINOMIAL_LOGIT:
        if not np.all((y == 0.0) | (y == 1.0)):
            raise ValueError("binomial responses must be coded 0/1")
    elif family is Family.POISSON_LOG:
        if np.any(y < 0.0) or np.any(y != np.floor(y)):
            raise ValueError("poisson responses must be nonnegative integers")


def _deviance(y: np.ndarray, mu: np.ndarray, family: Family) -> float:
    if family is Family.BINOMIAL_LOGIT:
        return float(2.0 * np.sum(xlogy(y, y / mu) + xlogy(1.0 - y, (1.0 - y) / (1.0 - mu))))
    return float(2.0 * np.sum(xlogy(y, y / mu) - (y - mu)))


def fit_glm(
    x: np.ndarray,
    y: np.ndarray,
    family: Family,
    names: list[str] | None = None,
    max_iter: int = _IRLS_MAX_ITER,
    tol: float = _IRLS_TOL,
) -> FitResult:
    """GLM fit by iteratively reweighted least squares (canonical links).

    Gaussian-identity delegates to :func:`fit_ols`.  The criterion is the
    residual deviance; standard errors come from the inverse Fisher
    information at convergence and p-values from the normal distribution.
    Convergence requires the relative deviance change to drop below ``tol``
    within ``max_iter`` iterations, otherwise :class:`IrlsDidNotConverge`
    is raised (separation-induced divergence included, with diagnostics).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if family is Family.GAUSSIAN_IDENTITY:
        return fit_ols(x, y, names)
    _check_response(y, family)
    n, p = x.shape
    if n <= p:
        raise InsufficientData(f"need more observations ({n}) than columns ({p})")

    binomial = family is Family.BINOMIAL_LOGIT
    if binomial:
        mu = (y + 0.5) / 2.0
    else:
        mu = np.maximum(y, 0.1)
    eta = np.log(mu / (1.0 - mu)) if binomial else np.log(mu)
    dev = _deviance(y, mu, family)

    beta = cov_unscaled = None
    for iteration in range(1, max_iter + 1):
        w = mu * (1.0 - mu) if binomial else mu
        if np.any(w < 1e-12):
            raise IrlsDidNotConverge(
                f"working weights collapsed at iteration {iteration} "
                f"(min weight {w.min():.3e}); data may be separated"
            )
        z = eta + (y - mu) / w
        sw = np.sqrt(w)
        try:
            beta, cov_unscaled = _pivoted_qr_solve(x * sw[:, None], z * sw)
        except SingularDesign:
            if iteration == 1:
                raise
            raise IrlsDidNotConverge(
                f"weighted design became singular at iteration {iteration}"
            ) from None
        eta = x @ beta
        if binomial:
            mu = np.clip(expit(eta), 1e-10, 1.0 - 1e-10)
        else:
            mu = np.exp(np.clip(eta, -700.0, 700.0))
        dev_new = _deviance(y, mu, family)
        if not np.isfinite(dev_new):
            raise IrlsDidNotConverge(
                f"deviance became non-finite at iteration {iteration} "
                f"(max |eta| = {np.abs(eta).max():.3e})"
            )
        converged = abs(dev_new - dev) / (0.1 + abs(dev_new)) < tol
        dev = dev_new
        if converged:
            break
    else:
        raise IrlsDidNotConverge(
            f"no convergence after {max_iter} iterations "
            f"(deviance {dev:.6g}, max |eta| = {np.abs(eta).max():.3e})"
        )

    if binomial and (np.any(mu <= 1e-8) or np.any(mu >= 1.0 - 1e-8)):
        raise IrlsDidNotConverge(
            "fitted probabilities numerically 0 or 1 "
            f"(max |eta| = {np.abs(eta).max():.3e}); data may be separated"
        )

    se = np.sqrt(np.diag(cov_unscaled))
    t = beta / se
    pvals = 2.0 * scipy.stats.norm.sf(np.abs(t))
    return FitResult(
        names=list(names) if names is not None else _default_names(p),
        coefficients=beta,
        std_errors=se,
        t_values=t,
        p_values=pvals,
        criterion=dev,
        df_residual=n - p,
        family=family,
        residual_sd=None,
        n_obs=n,
        iterations=iteration,
    )
