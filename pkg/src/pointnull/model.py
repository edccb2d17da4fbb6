"""Closed-form quantities for the point-null normal test.

The null fixes the mean of a unit-variance normal at zero; the alternative
puts a centred normal prior with standard deviation ``sigma`` on the mean.
Everything in this module is an elementary function of ``(x, sigma)``; the
care is in evaluating those functions so that sweeps over extreme ``sigma``
or ``x`` stay finite (log-domain posterior, no ratio of two underflowing
exponentials).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .numerics import DomainError, std_normal_pdf

__all__ = [
    "AlternativeSpread",
    "Observation",
    "PosteriorReport",
    "bayes_factor",
    "expected_kl",
    "kl_null_vs_alt",
    "log_marginal_variance",
    "marginal_alt",
    "posterior_h0",
    "posterior_report",
    "variance_ratio",
]


@dataclass(frozen=True, slots=True)
class Observation:
    """A single draw x from the unit-variance normal under test."""

    x: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.x):
            raise DomainError(f"observation must be finite, got {self.x}")


@dataclass(frozen=True, slots=True)
class AlternativeSpread:
    """Prior standard deviation of the mean under the alternative.

    Deliberately restricted to finite positive values: the degenerate
    infinite-spread prior is exactly the pathological choice this package
    exists to replace with a calibrated finite one.
    """

    sigma: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.sigma) and self.sigma > 0.0):
            raise DomainError(f"sigma must be finite and positive, got {self.sigma}")


@dataclass(frozen=True, slots=True)
class PosteriorReport:
    x: float
    sigma: float
    scheme: str
    bayes_factor: float
    m_value: float
    posterior_h0: float
    alpha_b: float
    rejected: bool


def variance_ratio(sigma: float) -> float:
    """sigma^2 / (1 + sigma^2), the alternative's share of the marginal variance.

    Also the shrinkage weight on x in the posterior mean of the alternative's
    location. Written so it never overflows for huge sigma.
    """
    if sigma > 1.0:
        return 1.0 / (1.0 + 1.0 / (sigma * sigma))
    s2 = sigma * sigma
    return s2 / (1.0 + s2)


def log_marginal_variance(sigma: float) -> float:
    """log(1 + sigma^2) without overflowing for huge sigma."""
    if sigma > 1.0:
        return 2.0 * math.log(sigma) + math.log1p(1.0 / (sigma * sigma))
    return math.log1p(sigma * sigma)


def _tau(sigma: float) -> float:
    """sqrt(1 + sigma^2), the marginal standard deviation, overflow-safe."""
    if sigma > 1.0:
        return sigma * math.sqrt(1.0 + 1.0 / (sigma * sigma))
    return math.sqrt(1.0 + sigma * sigma)


def _stable_inv_logistic(t: float) -> float:
    """1 / (1 + exp(t)), exact to a rounding in both tails."""
    if t >= 0.0:
        u = math.exp(-t)
        return u / (1.0 + u)
    return 1.0 / (1.0 + math.exp(t))


def _posterior_parts(spread: AlternativeSpread, rho0: float) -> tuple[float, float]:
    """Precompute (base, ratio) so the posterior is base + x^2-term only.

    Split out so bulk simulation can reuse the exact arithmetic of
    posterior_h0 per sample without recomputing the sigma-only pieces.
    """
    if not 0.0 < rho0 < 1.0:
        raise DomainError(f"rho0 must lie strictly between 0 and 1, got {rho0}")
    base = math.log1p(-rho0) - math.log(rho0) - 0.5 * log_marginal_variance(spread.sigma)
    return base, variance_ratio(spread.sigma)


def _posterior_from_parts(x_squared: float, base: float, ratio: float) -> float:
    return _stable_inv_logistic(base + 0.5 * x_squared * ratio)


def bayes_factor(obs: Observation, spread: AlternativeSpread) -> float:
    """Null-to-alternative marginal likelihood ratio.

    Equals sqrt(1 + sigma^2) * exp(-x^2 sigma^2 / (2 (1 + sigma^2))); always
    strictly positive, and exactly the prefactor when x = 0.
    """
    sigma = spread.sigma
    exponent = -0.5 * (obs.x * obs.x) * variance_ratio(sigma)
    return _tau(sigma) * math.exp(exponent)


def marginal_alt(obs: Observation, spread: AlternativeSpread) -> float:
    """Marginal density of x under the alternative: N(x | 0, 1 + sigma^2)."""
    tau = _tau(spread.sigma)
    return std_normal_pdf(obs.x / tau) / tau


def posterior_h0(obs: Observation, spread: AlternativeSpread, rho0: float) -> float:
    """Posterior probability of the null given x, spread sigma, and prior mass rho0.

    Evaluated in log-odds form: with m = ((1-rho0)/rho0) / sqrt(1+sigma^2),
    the posterior is 1 / (1 + m * exp(x^2 sigma^2 / (2(1+sigma^2)))), computed
    as a stable logistic so extreme x or sigma saturate to 0 or 1 instead of
    producing NaN.
    """
    base, ratio = _posterior_parts(spread, rho0)
    return _posterior_from_parts(obs.x * obs.x, base, ratio)


def kl_null_vs_alt(theta: float) -> float:
    """Kullback-Leibler divergence of N(theta, 1) from N(0, 1): theta^2 / 2."""
    if not math.isfinite(theta):
        raise DomainError(f"theta must be finite, got {theta}")
    return 0.5 * theta * theta


def expected_kl(spread: AlternativeSpread) -> float:
    """Mean KL divergence over theta ~ N(0, sigma^2): sigma^2 / 2."""
    return 0.5 * spread.sigma * spread.sigma


def posterior_report(
    obs: Observation,
    spread: AlternativeSpread,
    rho0: float,
    alpha_b: float,
    scheme: str = "fixed",
) -> PosteriorReport:
    """Bundle the headline quantities for one (x, sigma, rho0) evaluation."""
    if not 0.0 < alpha_b < 1.0:
        raise DomainError(f"alpha_b must lie strictly between 0 and 1, got {alpha_b}")
    base, _ = _posterior_parts(spread, rho0)
    posterior = posterior_h0(obs, spread, rho0)
    return PosteriorReport(
        x=obs.x,
        sigma=spread.sigma,
        scheme=scheme,
        bayes_factor=bayes_factor(obs, spread),
        m_value=math.exp(base),
        posterior_h0=posterior,
        alpha_b=alpha_b,
        rejected=posterior < alpha_b,
    )
