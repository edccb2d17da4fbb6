"""Matching the Bayesian rejection rule to a classical Type I error rate.

Rejecting the null when its posterior probability drops below alpha_b is,
for the normal point-null model, the same as rejecting when x^2 exceeds

    psi(sigma) = 2 (1 + sigma^2) / sigma^2 * (log(1/alpha_b - 1) - log m(sigma)),

so the Bayesian test is a classical two-sided test in disguise and its
Type I error is 2(1 - Phi(sqrt(psi))). That turns "choose sigma" into a
solvable equation: pick the spread whose induced Type I error equals a
target alpha. This module provides psi, the error curve, the sigma solver,
the edge of psi's positivity domain, and the decision rule checked both
ways.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import AlternativeSpread, Observation, posterior_h0, variance_ratio
from .numerics import (
    Bracket,
    DomainError,
    find_root_bracketed,
    std_normal_cdf,
    std_normal_quantile,
)
from .priors import ConsistencyError, CustomTablePrior, PriorScheme, log_m_of_sigma

__all__ = [
    "CalibrationResult",
    "CalibrationSpec",
    "Decision",
    "InfeasibleAlphaError",
    "PsiDomainError",
    "classical_threshold",
    "decide",
    "positivity_bound",
    "power_analytic",
    "psi",
    "solve_sigma",
    "type_i_error",
]

#: Boundary band inside which the two decision routes may disagree.
DECISION_BAND = 1e-12


class PsiDomainError(DomainError):
    """Raised where log m(sigma) >= log(1/alpha_b - 1), i.e. psi <= 0."""


class InfeasibleAlphaError(DomainError):
    """No sigma achieves the requested Type I error under this scheme."""

    def __init__(self, requested: float, achievable_lo: float, achievable_hi: float):
        self.requested = requested
        self.achievable_lo = achievable_lo
        self.achievable_hi = achievable_hi
        super().__init__(
            f"no sigma achieves Type I error {requested}; achievable range is "
            f"approximately ({achievable_lo!r}, {achievable_hi!r})"
        )


def _check_prob(name: str, value: float) -> float:
    if not (math.isfinite(value) and 0.0 < value < 1.0):
        raise DomainError(f"{name} must lie strictly between 0 and 1, got {value}")
    return value


@dataclass(frozen=True, slots=True)
class CalibrationSpec:
    """Target classical level alpha, Bayesian threshold alpha_b, and scheme."""

    alpha: float
    alpha_b: float
    scheme: PriorScheme

    def __post_init__(self) -> None:
        _check_prob("alpha", self.alpha)
        _check_prob("alpha_b", self.alpha_b)


@dataclass(frozen=True, slots=True)
class CalibrationResult:
    sigma_star: float
    psi_at_sigma: float
    achieved_alpha: float
    residual: float
    bracket_used: Bracket
    evaluations: int


@dataclass(frozen=True, slots=True)
class Decision:
    """Reject/retain, recorded through both equivalent routes."""

    reject: bool
    via_posterior: bool
    via_threshold: bool


def _log_rejection_odds(alpha_b: float) -> float:
    """log(1/alpha_b - 1), the log prior-odds level m must stay below."""
    _check_prob("alpha_b", alpha_b)
    return math.log1p(-alpha_b) - math.log(alpha_b)


def psi(sigma: float, alpha_b: float, scheme: PriorScheme) -> float:
    """Squared-observation rejection threshold equivalent to the posterior rule.

    Computed through log m so it stays usable where m itself overflows.
    Only positive values are meaningful: once m(sigma) reaches 1/alpha_b - 1
    the posterior rule rejects every observation and no threshold exists.
    """
    gap = _log_rejection_odds(alpha_b) - log_m_of_sigma(scheme, sigma)
    if gap <= 0.0:
        raise PsiDomainError(
            "psi nonpositive: Bayesian test rejects for all x "
            f"(sigma={sigma}, alpha_b={alpha_b}, scheme={scheme.scheme_id})"
        )
    return 2.0 * gap / variance_ratio(sigma)


def type_i_error(sigma: float, alpha_b: float, scheme: PriorScheme) -> float:
    """Null probability of rejection: 2(1 - Phi(sqrt(psi))), or 1 past the bound.

    Defined for every sigma > 0: where psi has no positive value the test
    rejects always, so the error rate is literally 1. That choice keeps the
    curve continuous and monotone for root-finding.
    """
    try:
        p = psi(sigma, alpha_b, scheme)
    except PsiDomainError:
        return 1.0
    return 2.0 * std_normal_cdf(-math.sqrt(p))


def power_analytic(theta: float, sigma: float, alpha_b: float, scheme: PriorScheme) -> float:
    """Rejection probability when x ~ N(theta, 1): 1 - Phi(r - theta) + Phi(-r - theta).

    r = sqrt(psi(sigma)); evaluated as Phi(theta - r) + Phi(-r - theta) so the
    theta = 0 case reduces bit-for-bit to type_i_error.
    """
    if not math.isfinite(theta):
        raise DomainError(f"theta must be finite, got {theta}")
    try:
        p = psi(sigma, alpha_b, scheme)
    except PsiDomainError:
        return 1.0
    r = math.sqrt(p)
    return std_normal_cdf(theta - r) + std_normal_cdf(-r - theta)


def classical_threshold(alpha: float) -> float:
    """c_alpha with P0(x^2 > c_alpha) = alpha: the squared two-sided z critical value."""
    _check_prob("alpha", alpha)
    q = std_normal_quantile(1.0 - 0.5 * alpha)
    return q * q


def positivity_bound(alpha_b: float, scheme: PriorScheme) -> float | None:
    """Upper end of the sigma domain on which psi is positive, if finite.

    Solves log m(sigma) = log(1/alpha_b - 1) when m is increasing and crosses
    that level (the divergent scheme always does for alpha_b < 1/2; the
    linear-odds scheme only when its ceiling sqrt(2 pi) exceeds the level).
    Returns None when m never reaches the level, so every sigma is usable:
    fixed-mass schemes (m decreasing) and the linear-odds scheme at small
    alpha_b. Returns 0.0 when even tiny sigma already sits past the level
    and the domain is empty.
    """
    level = _log_rejection_odds(alpha_b)
    if isinstance(scheme, CustomTablePrior):
        raise DomainError("positivity bound is undefined for tabulated schemes")

    def gap(sigma: float) -> float:
        return log_m_of_sigma(scheme, sigma) - level

    # m is decreasing for fixed-mass schemes: no finite upper bound ever.
    # (Their infeasible region, when rho0 < alpha_b, sits at small sigma and
    # is reported by psi itself.)
    lo, hi = 1e-8, 1.0
    if gap(lo) >= 0.0:
        # Already past the level arbitrarily close to sigma = 0.
        if gap(1e3) <= gap(lo) and gap(1e6) < 0.0:
            return None  # decreasing through the level: no upper bound
        return 0.0 if gap(1e6) >= 0.0 else None
    while gap(hi) < 0.0:
        hi *= 2.0
        if hi > 1e12:
            return None  # never reaches the level at any practical sigma
    root = find_root_bracketed(gap, Bracket(lo, hi), xtol=1e-15, ftol=1e-13)
    return root


def decide(obs: Observation, sigma: float, alpha_b: float, scheme: PriorScheme) -> Decision:
    """Evaluate the rejection decision via the posterior and via x^2 > psi.

    The two must agree; a disagreement is tolerated only while the posterior
    sits within DECISION_BAND of alpha_b, where the routes legitimately
    round in different directions. The reported decision follows the
    posterior route (rejection on strict inequality, ties retain the null).
    """
    spread = AlternativeSpread(sigma)
    _check_prob("alpha_b", alpha_b)
    r = scheme.rho0(sigma)
    if r > 0.0:
        post = posterior_h0(obs, spread, r)
    else:
        # Prior mass underflowed to zero (divergent scheme, huge sigma):
        # the true posterior is smaller than any float.
        post = 0.0
    via_posterior = post < alpha_b
    try:
        via_threshold = obs.x * obs.x > psi(sigma, alpha_b, scheme)
    except PsiDomainError:
        via_threshold = True
    if via_posterior != via_threshold and abs(post - alpha_b) >= DECISION_BAND:
        raise ConsistencyError(
            f"decision routes disagree outside the boundary band: x={obs.x}, "
            f"sigma={sigma}, posterior={post!r}, alpha_b={alpha_b}, "
            f"posterior route {via_posterior}, threshold route {via_threshold}"
        )
    return Decision(reject=via_posterior, via_posterior=via_posterior, via_threshold=via_threshold)


_SCAN_DECADES = range(-3, 4)


def _scan_points(per_decade: int) -> list[float]:
    """Log-spaced scan grid over 10^-3 .. 10^3 with per_decade points per decade."""
    pts = []
    for k in _SCAN_DECADES[:-1]:
        for j in range(per_decade):
            pts.append(10.0 ** (k + j / per_decade))
    pts.append(10.0 ** _SCAN_DECADES[-1])
    return pts


def solve_sigma(spec: CalibrationSpec) -> CalibrationResult:
    """Find sigma whose induced Type I error equals spec.alpha.

    Brackets a sign change of g(sigma) = type_i_error(sigma) - alpha on a
    geometric grid (decades 10^-3..10^3, refined 16 then 64 points per
    decade when the coarse pass misses), then polishes with the bracketed
    root finder to |achieved - alpha| <= 1e-10. When no sign change exists
    the target is unachievable under the scheme and the error carries the
    approximate achievable range.
    """
    evaluations = 0

    def g(sigma: float) -> float:
        nonlocal evaluations
        evaluations += 1
        return type_i_error(sigma, spec.alpha_b, spec.scheme) - spec.alpha

    bracket = None
    for per_decade in (1, 16, 64):
        pts = _scan_points(per_decade)
        values = [g(s) for s in pts]
        for (s_lo, g_lo), (s_hi, g_hi) in zip(zip(pts, values), zip(pts[1:], values[1:])):
            if g_lo == 0.0:
                return _result_at(s_lo, spec, Bracket(s_lo / 2.0, s_hi), evaluations)
            if g_hi == 0.0:
                return _result_at(s_hi, spec, Bracket(s_lo, s_hi * 2.0), evaluations)
            if (g_lo > 0.0) != (g_hi > 0.0):
                bracket = Bracket(s_lo, s_hi)
                break
        if bracket is not None:
            break
    if bracket is None:
        # Report what is achievable, probing beyond the scan range so
        # asymptotically flat schemes show their true ceiling.
        probes = _scan_points(64) + [1e6, 1e12]
        alphas = [type_i_error(s, spec.alpha_b, spec.scheme) for s in probes]
        raise InfeasibleAlphaError(spec.alpha, min(alphas), max(alphas))

    sigma_star = find_root_bracketed(g, bracket, xtol=1e-15, ftol=5e-12)
    return _result_at(sigma_star, spec, bracket, evaluations)


def _result_at(
    sigma_star: float, spec: CalibrationSpec, bracket: Bracket, evaluations: int
) -> CalibrationResult:
    achieved = type_i_error(sigma_star, spec.alpha_b, spec.scheme)
    return CalibrationResult(
        sigma_star=sigma_star,
        psi_at_sigma=psi(sigma_star, spec.alpha_b, spec.scheme),
        achieved_alpha=achieved,
        residual=achieved - spec.alpha,
        bracket_used=bracket,
        evaluations=evaluations,
    )
