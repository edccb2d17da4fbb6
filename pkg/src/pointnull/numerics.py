"""Self-contained scalar numerics underpinning the rest of the package.

Standard-normal density, distribution, and quantile functions; adaptive
Gauss-Kronrod quadrature; and a bracket-safe root finder. Everything here is
pure Python over floats so the statistical modules can be cross-checked
against these routines as an independent computational route.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

__all__ = [
    "Bracket",
    "BracketError",
    "DomainError",
    "EvaluationError",
    "PANEL_CAP",
    "QuadratureAccuracyError",
    "QuadratureResult",
    "find_root_bracketed",
    "integrate_adaptive",
    "std_normal_cdf",
    "std_normal_pdf",
    "std_normal_quantile",
]

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_TWO_PI = 1.0 / math.sqrt(2.0 * math.pi)

#: Adaptive quadrature gives up once this many panels are in play.
PANEL_CAP = 1_000_000


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class BracketError(ValueError):
    """The supplied bracket does not straddle a sign change."""


class EvaluationError(ArithmeticError):
    """A user-supplied function returned a non-finite value."""


class QuadratureAccuracyError(ArithmeticError):
    """Subdivision cap hit before the error estimate met the tolerance.

    Carries the best estimate obtained so far in :attr:`result`.
    """

    def __init__(self, message: str, result: "QuadratureResult") -> None:
        super().__init__(message)
        self.result = result


@dataclass(frozen=True, slots=True)
class Bracket:
    """A finite interval [lo, hi] with lo < hi."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise DomainError(f"bracket endpoints must be finite, got [{self.lo}, {self.hi}]")
        if not self.lo < self.hi:
            raise DomainError(f"bracket requires lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True, slots=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    subdivisions: int


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value}")
    return value


def std_normal_pdf(z: float) -> float:
    """Density of the standard normal at z."""
    z = _require_finite("z", z)
    return _INV_SQRT_TWO_PI * math.exp(-0.5 * z * z)


def std_normal_cdf(z: float) -> float:
    """Distribution function of the standard normal at z.

    Evaluated through the complementary error function so both tails keep
    full relative accuracy (absolute error well below 1e-14 everywhere).
    """
    z = _require_finite("z", z)
    return 0.5 * math.erfc(-z / _SQRT2)


# Rational-approximation coefficients for the normal quantile (Acklam's
# minimax fit: ~1.15e-9 relative error before refinement).
_QUANT_A = (
    -3.969683028665376e01,
    2.209460984245205e02,
    -2.759285104469687e02,
    1.383577518672690e02,
    -3.066479806614716e01,
    2.506628277459239e00,
)
_QUANT_B = (
    -5.447609879822406e01,
    1.615858368580409e02,
    -1.556989798598866e02,
    6.680131188771972e01,
    -1.328068155288572e01,
)
_QUANT_C = (
    -7.784894002430293e-03,
    -3.223964580411365e-01,
    -2.400758277161838e00,
    -2.549732539343734e00,
    4.374664141464968e00,
    2.938163982698783e00,
)
_QUANT_D = (
    7.784695709041462e-03,
    3.224671290700398e-01,
    2.445134137142996e00,
    3.754408661907416e00,
)
_QUANT_SPLIT = 0.02425


def _quantile_tail(q: float) -> float:
    c = _QUANT_C
    d = _QUANT_D
    num = ((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]
    den = (((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0
    return num / den


def std_normal_quantile(p: float) -> float:
    """Inverse of std_normal_cdf on (0, 1).

    Rational initial guess refined by two Halley corrector steps against
    std_normal_cdf; the refined value satisfies |cdf(z) - p| <= 1e-12.
    The upper half is answered as -quantile(1 - p): for p >= 1/2 the
    subtraction 1 - p is exact, and the lower tail keeps full relative
    precision where the upper tail's residual would drown in the rounding
    of values near 1.
    """
    p = float(p)
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie strictly between 0 and 1, got {p}")
    if p > 0.5:
        return -std_normal_quantile(1.0 - p)

    if p < _QUANT_SPLIT:
        x = _quantile_tail(math.sqrt(-2.0 * math.log(p)))
    elif p <= 1.0 - _QUANT_SPLIT:
        q = p - 0.5
        r = q * q
        a = _QUANT_A
        b = _QUANT_B
        num = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q
        den = ((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0
        x = num / den
    else:
        x = -_quantile_tail(math.sqrt(-2.0 * math.log(1.0 - p)))

    for _ in range(2):
        density = std_normal_pdf(x)
        if density <= 0.0:
            break  # beyond double-precision tail resolution; keep the guess
        err = std_normal_cdf(x) - p
        if err == 0.0:
            break
        u = err / density
        x -= u / (1.0 + 0.5 * x * u)  # Halley step
    return x


# Gauss-Kronrod 7-15 nodes and weights on [-1, 1] (positive half; symmetric).
_GK_NODES = (
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
)
_GK_WEIGHTS_K = (
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
)
# Gauss-7 weights aligned with the odd-index Kronrod nodes plus the centre.
_GK_WEIGHTS_G = (
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
)


def _gk_panel(f: Callable[[float], float], lo: float, hi: float) -> tuple[float, float]:
    """15-point Kronrod value and |K15 - G7| error estimate on one panel."""
    centre = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    fc = f(centre)
    if not math.isfinite(fc):
        raise EvaluationError(f"integrand returned {fc} at {centre}")
    kronrod = _GK_WEIGHTS_K[7] * fc
    gauss = _GK_WEIGHTS_G[3] * fc
    for i in range(7):
        offset = half * _GK_NODES[i]
        f_lo = f(centre - offset)
        f_hi = f(centre + offset)
        if not (math.isfinite(f_lo) and math.isfinite(f_hi)):
            raise EvaluationError(f"integrand returned non-finite value near {centre - offset} or {centre + offset}")
        pair = f_lo + f_hi
        kronrod += _GK_WEIGHTS_K[i] * pair
        if i % 2 == 1:
            gauss += _GK_WEIGHTS_G[i // 2] * pair
    return kronrod * half, abs(kronrod - gauss) * half


def integrate_adaptive(f: Callable[[float], float], bracket: Bracket, tol: float) -> QuadratureResult:
    """Integrate f over the bracket until the error estimate drops below tol.

    Worst-panel-first bisection with an embedded Gauss-Kronrod 7-15 rule.
    Raises QuadratureAccuracyError (carrying the best estimate) if the panel
    cap is hit before convergence.
    """
    if not tol > 0.0:
        raise DomainError(f"tol must be positive, got {tol}")
    value, err = _gk_panel(f, bracket.lo, bracket.hi)
    heap = [(-err, 0, bracket.lo, bracket.hi, value, err)]
    counter = 1
    total_err = err
    while total_err > tol:
        if len(heap) >= PANEL_CAP:
            best = QuadratureResult(
                value=math.fsum(entry[4] for entry in heap),
                abs_error_estimate=math.fsum(entry[5] for entry in heap),
                subdivisions=len(heap),
            )
            raise QuadratureAccuracyError(
                f"quadrature did not reach tol={tol} within {PANEL_CAP} panels", best
            )
        _, _, lo, hi, v, e = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            # Panel narrowed to machine resolution; accept its estimate as is.
            heapq.heappush(heap, (0.0, counter, lo, hi, v, e))
            counter += 1
            if all(entry[0] == 0.0 for entry in heap):
                break
            continue
        v_left, e_left = _gk_panel(f, lo, mid)
        v_right, e_right = _gk_panel(f, mid, hi)
        heapq.heappush(heap, (-e_left, counter, lo, mid, v_left, e_left))
        heapq.heappush(heap, (-e_right, counter + 1, mid, hi, v_right, e_right))
        counter += 2
        total_err += e_left + e_right - e
    return QuadratureResult(
        value=math.fsum(entry[4] for entry in heap),
        abs_error_estimate=math.fsum(entry[5] for entry in heap),
        subdivisions=len(heap),
    )


def find_root_bracketed(
    f: Callable[[float], float],
    bracket: Bracket,
    xtol: float = 1e-13,
    ftol: float = 1e-12,
) -> float:
    """Brent's method on a sign-changing bracket.

    Returns x with |f(x)| <= ftol or enclosing-interval width <= xtol. Every
    iterate stays inside the initial bracket, so f is never evaluated outside
    it.
    """
    if not (xtol > 0.0 and ftol >= 0.0):
        raise DomainError(f"tolerances must be positive, got xtol={xtol}, ftol={ftol}")

    def checked(x: float) -> float:
        fx = f(x)
        if not math.isfinite(fx):
            raise EvaluationError(f"f returned {fx} at x={x}")
        return fx

    a, b = bracket.lo, bracket.hi
    fa, fb = checked(a), checked(b)
    if abs(fa) <= ftol:
        return a
    if abs(fb) <= ftol:
        return b
    if (fa > 0.0) == (fb > 0.0):
        raise BracketError(f"no sign change on [{a}, {b}]: f(lo)={fa}, f(hi)={fb}")

    if abs(fa) < abs(fb):
        a, b, fa, fb = b, a, fb, fa
    c, fc = a, fa
    d = a
    bisected = True
    while fb != 0.0 and abs(b - a) > xtol and abs(fb) > ftol:
        if fa != fc and fb != fc:
            # Inverse quadratic interpolation.
            s = (
                a * fb * fc / ((fa - fb) * (fa - fc))
                + b * fa * fc / ((fb - fa) * (fb - fc))
                + c * fa * fb / ((fc - fa) * (fc - fb))
            )
        else:
            s = b - fb * (b - a) / (fb - fa)  # secant
        lo_lim = 0.25 * (3.0 * a + b)
        conditions = (
            not (min(lo_lim, b) < s < max(lo_lim, b))
            or (bisected and abs(s - b) >= 0.5 * abs(b - c))
            or (not bisected and abs(s - b) >= 0.5 * abs(c - d))
            or (bisected and abs(b - c) < xtol)
            or (not bisected and abs(c - d) < xtol)
        )
        if conditions:
            s = 0.5 * (a + b)
            bisected = True
        else:
            bisected = False
        if s == a or s == b:
            # The bracket has collapsed to machine resolution; no new point
            # is representable between the endpoints, so stop here.
            break
        fs = checked(s)
        d, c, fc = c, b, fb
        if (fa > 0.0) != (fs > 0.0):
            b, fb = s, fs
        else:
            a, fa = s, fs
        if abs(fa) < abs(fb):
            a, b, fa, fb = b, a, fb, fa
    return b
