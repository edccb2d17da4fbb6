"""Seeded Monte Carlo checks of the calibrated test's rejection rates.

Variates are counter-based: sample i of stream `seed` is a pure function
of (seed, i), a splitmix64 bit-mix fed through the package's own normal
quantile. There is no sequential generator state, so a simulation can be
split across any partition of its index range and reproduce bit-identical
counts — reports only ever depend on the plan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .calibration import power_analytic, type_i_error
from .model import AlternativeSpread, _posterior_from_parts, _posterior_parts
from .numerics import DomainError, std_normal_quantile
from .priors import PriorScheme

__all__ = [
    "MonteCarloReport",
    "SimulationPlan",
    "draw_standard_normal",
    "simulate_power",
    "simulate_type_i",
    "splitmix64",
    "uniform_unit",
]

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX_B = 0xBF58476D1CE4E5B9
_MIX_C = 0x94D049BB133111EB
_TWO_NEG53 = 2.0**-53


def splitmix64(seed: int, index: int) -> int:
    """Output i of the splitmix64 stream seeded at `seed`, as a 64-bit int."""
    z = (seed + (index + 1) * _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * _MIX_B) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX_C) & _MASK64
    return z ^ (z >> 31)

def uniform_unit(seed: int, index: int) -> float:
    """Uniform double strictly inside (0, 1): top 53 bits, centered on the grid."""
    return ((splitmix64(seed, index) >> 11) + 0.5) * _TWO_NEG53


def draw_standard_normal(seed: int, index: int) -> float:
    """Standard normal sample i of stream `seed` via the inverse CDF."""
    return std_normal_quantile(uniform_unit(seed, index))


@dataclass(frozen=True, slots=True)
class SimulationPlan:
    """Everything a run depends on; two equal plans give bit-identical reports."""

    n: int
    seed: int
    theta: float
    sigma: float
    alpha_b: float
    scheme: PriorScheme

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise DomainError(f"n must be an integer >= 1, got {self.n}")
        if not isinstance(self.seed, int) or not 0 <= self.seed <= _MASK64:
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if not math.isfinite(self.theta):
            raise DomainError(f"theta must be finite, got {self.theta}")
        if not (math.isfinite(self.sigma) and self.sigma > 0.0):
            raise DomainError(f"sigma must be finite and positive, got {self.sigma}")
        if not (math.isfinite(self.alpha_b) and 0.0 < self.alpha_b < 1.0):
            raise DomainError(
                f"alpha_b must lie strictly between 0 and 1, got {self.alpha_b}"
            )


@dataclass(frozen=True, slots=True)
class MonteCarloReport:
    n: int
    rejections: int
    estimate: float
    std_error: float
    ci95: tuple[float, float]
    analytic_value: float
    within_3se: bool


def _rejection_count(plan: SimulationPlan, lo: int, hi: int) -> int:
    """Rejections among sample indices [lo, hi) of the plan's stream.

    The per-sample decision is the posterior route of calibration.decide,
    using the same precomputed pieces as model.posterior_h0 so the counted
    event is bit-for-bit {P(H0|x) < alpha_b}.
    """
    rho = plan.scheme.rho0(plan.sigma)
    if rho <= 0.0:
        # Prior mass underflowed (divergent scheme at enormous sigma): the
        # posterior is below any threshold for every draw.
        return hi - lo
    base, ratio = _posterior_parts(AlternativeSpread(plan.sigma), rho)
    seed, theta, alpha_b = plan.seed, plan.theta, plan.alpha_b
    quantile = std_normal_quantile
    count = 0
    for i in range(lo, hi):
        z = (seed + (i + 1) * _GOLDEN) & _MASK64
        z = ((z ^ (z >> 30)) * _MIX_B) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX_C) & _MASK64
        z ^= z >> 31
        # Inlined draw_standard_normal(seed, i); keep in lockstep with it.
        x = theta + quantile(((z >> 11) + 0.5) * _TWO_NEG53)
        if _posterior_from_parts(x * x, base, ratio) < alpha_b:
            count += 1
    return count


def _report(plan: SimulationPlan, rejections: int, analytic: float) -> MonteCarloReport:
    estimate = rejections / plan.n
    std_error = math.sqrt(estimate * (1.0 - estimate) / plan.n)
    ci = (max(0.0, estimate - 1.96 * std_error), min(1.0, estimate + 1.96 * std_error))
    return MonteCarloReport(
        n=plan.n,
        rejections=rejections,
        estimate=estimate,
        std_error=std_error,
        ci95=ci,
        analytic_value=analytic,
        within_3se=abs(estimate - analytic) <= 3.0 * std_error,
    )


def simulate_type_i(plan: SimulationPlan) -> MonteCarloReport:
    """Empirical null rejection rate vs the analytic Type I error."""
    if plan.theta != 0.0:
        raise DomainError(f"Type I simulation draws under the null; got theta={plan.theta}")
    analytic = type_i_error(plan.sigma, plan.alpha_b, plan.scheme)
    return _report(plan, _rejection_count(plan, 0, plan.n), analytic)


def simulate_power(plan: SimulationPlan) -> MonteCarloReport:
    """Empirical rejection rate under x ~ N(theta, 1) vs the analytic power."""
    analytic = power_analytic(plan.theta, plan.sigma, plan.alpha_b, plan.scheme)
    return _report(plan, _rejection_count(plan, 0, plan.n), analytic)
