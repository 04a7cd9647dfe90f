"""Special functions: log-gamma, Pochhammer, Beta, Gauss 2F1 and Bessel J with its first zero."""

import math
from dataclasses import dataclass
from functools import lru_cache

import logfire
import numpy as np
from scipy import optimize, special

from ballgreen.errors import ConvergenceError, DomainError, ZeroSearchError

EPS = 2.220446049250313e-16
MAX_SERIES_TERMS = 1_000_000

# series arguments beyond this are rewritten through the connection formulas at t = 1 and
# t = inf, whose own series then run in an argument below 0.1
SERIES_ARGUMENT_LIMIT = 0.9

# Above this argument the alternating Bessel series loses more than ~6 digits to cancellation
BESSEL_SERIES_LIMIT = 12.0

ZERO_SCAN_STEP = 0.1
ZERO_SCAN_SPAN = 20.0


def ln_gamma(x: float) -> float:
    """Return ln Gamma(x) for x > 0."""
    if not x > 0:
        raise DomainError(f"ln_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def pochhammer(a: float, k: int) -> float:
    """Rising factorial (a)_k = a(a+1)...(a+k-1); (a)_0 = 1."""
    if k < 0:
        raise DomainError(f"pochhammer requires k >= 0, got {k}")
    return math.prod(a + i for i in range(k))


def beta(x: float, y: float) -> float:
    """Beta function Gamma(x)Gamma(y)/Gamma(x+y), evaluated in log space."""
    if not (x > 0 and y > 0):
        raise DomainError(f"beta requires positive arguments, got ({x}, {y})")
    return math.exp(ln_gamma(x) + ln_gamma(y) - ln_gamma(x + y))


def gamma_inequality(m: float, p: float, k: float) -> float:
    """Signed log-gap ln[Gamma(p)Gamma(m)] - ln[Gamma(p-k)Gamma(m+k)].

    Under m, p > 0 and p > k > -m the gap is >= 0 when k(p-m-k) >= 0 and <= 0 when
    k(p-m-k) <= 0.
    """
    if not (m > 0 and p > 0 and p > k > -m):
        raise DomainError(f"gamma_inequality requires m, p > 0 and p > k > -m, got {(m, p, k)}")
    return ln_gamma(p) + ln_gamma(m) - ln_gamma(p - k) - ln_gamma(m + k)


def _is_nonpositive_integer(c: float) -> bool:
    return c <= 0 and c == math.floor(c)


@dataclass(frozen=True)
class Hyp2F1Params:
    """Parameters (a, b, c) and argument t of F(a, b; c; t)."""

    a: float
    b: float
    c: float
    t: float

    def __post_init__(self):
        if _is_nonpositive_integer(self.c):
            raise DomainError(f"2F1 parameter c must not be a non-positive integer, got {self.c}")
        if not self.t < 1:
            raise DomainError(f"2F1 is evaluated only for t < 1, got {self.t}")


def _hyp2f1_series(a: float, b: float, c: float, t: float, max_terms: int) -> float:
    """Direct summation of the defining series; terminates for a or b a non-positive integer."""
    total = 1.0
    term = 1.0
    small = 0
    for k in range(max_terms):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * t
        total += term
        if term == 0.0:
            return total
        if abs(term) <= EPS * abs(total):
            # two consecutive negligible terms guard against a lone near-zero factor
            small += 1
            if small >= 2:
                return total
        else:
            small = 0
    raise ConvergenceError(
        f"2F1({a}, {b}; {c}; {t}) series did not converge within {max_terms} terms"
    )


def hyp2f1(a: float, b: float, c: float, t: float, max_terms: int = MAX_SERIES_TERMS) -> float:
    """Gauss hypergeometric function F(a, b; c; t) for real t < 1.

    Direct series for |t| <= 0.5, Pfaff's transformation t -> t/(t-1) on [-9, -0.5) and
    Euler's transformation on (0.5, 0.9] whenever it gives the faster decaying series.
    Non-terminating cases beyond those zones go through the connection formulas in
    1 - t (t > 0.9) and 1/(1 - t) (t < -9).
    """
    params = Hyp2F1Params(a, b, c, t)
    a, b, c, t = params.a, params.b, params.c, params.t

    if abs(t) <= 0.5:
        return _hyp2f1_series(a, b, c, t, max_terms)

    if t < -0.5:
        z = t / (t - 1.0)
        # inner coefficients decay like k^(a-b-1) in the first Pfaff form, k^(b-a-1) in the second
        first_terminates = _is_nonpositive_integer(a) or _is_nonpositive_integer(c - b)
        second_terminates = _is_nonpositive_integer(b) or _is_nonpositive_integer(c - a)
        if z > SERIES_ARGUMENT_LIMIT and not (first_terminates or second_terminates):
            return _hyp2f1_far_negative(a, b, c, t, max_terms)
        if first_terminates or (a <= b and not second_terminates):
            return (1.0 - t) ** (-a) * hyp2f1(a, c - b, c, z, max_terms)
        return (1.0 - t) ** (-b) * hyp2f1(c - a, b, c, z, max_terms)

    # 0.5 < t < 1: coefficients decay like k^(a+b-c-1) directly and k^(c-a-b-1) after Euler
    s = c - a - b
    if _is_nonpositive_integer(a) or _is_nonpositive_integer(b):
        return _hyp2f1_series(a, b, c, t, max_terms)
    if _is_nonpositive_integer(c - a) or _is_nonpositive_integer(c - b):
        return (1.0 - t) ** s * _hyp2f1_series(c - a, c - b, c, t, max_terms)
    if t > SERIES_ARGUMENT_LIMIT:
        return _hyp2f1_near_one(a, b, c, t, max_terms)
    if s < 0:
        return (1.0 - t) ** s * _hyp2f1_series(c - a, c - b, c, t, max_terms)
    return _hyp2f1_series(a, b, c, t, max_terms)


def _is_integer(x: float) -> bool:
    return x == math.floor(x)


def _hyp2f1_near_one(a: float, b: float, c: float, t: float, max_terms: int) -> float:
    """Connection formula at t = 1, both series in w = 1 - t.

    For integer c - a - b the two terms have poles that cancel into logarithms; that
    case is left to scipy.
    """
    s = c - a - b
    if _is_integer(s):
        return float(special.hyp2f1(a, b, c, t))
    w = 1.0 - t
    gc = special.gamma(c)
    first = gc * special.gamma(s) * special.rgamma(c - a) * special.rgamma(c - b)
    second = gc * special.gamma(-s) * special.rgamma(a) * special.rgamma(b)
    return float(
        first * _hyp2f1_series(a, b, 1.0 - s, w, max_terms)
        + second * w**s * _hyp2f1_series(c - a, c - b, 1.0 + s, w, max_terms)
    )


def _hyp2f1_far_negative(a: float, b: float, c: float, t: float, max_terms: int) -> float:
    """Connection formula at t = -inf, both series in w = 1/(1 - t).

    Integer b - a gives the logarithmic case, which is left to scipy.
    """
    d = b - a
    if _is_integer(d):
        return float(special.hyp2f1(a, b, c, t))
    w = 1.0 / (1.0 - t)
    gc = special.gamma(c)
    first = gc * special.gamma(d) * special.rgamma(b) * special.rgamma(c - a)
    second = gc * special.gamma(-d) * special.rgamma(a) * special.rgamma(c - b)
    return float(
        first * w**a * _hyp2f1_series(a, c - b, 1.0 - d, w, max_terms)
        + second * w**b * _hyp2f1_series(b, c - a, 1.0 + d, w, max_terms)
    )


def hyp2f1_derivative(
    a: float, b: float, c: float, t: float, max_terms: int = MAX_SERIES_TERMS
) -> float:
    """d/dt F(a, b; c; t) = (ab/c) F(a+1, b+1; c+1; t)."""
    Hyp2F1Params(a, b, c, t)
    if a * b == 0.0:
        return 0.0
    return a * b / c * hyp2f1(a + 1.0, b + 1.0, c + 1.0, t, max_terms)


def bessel_j(alpha: float, t: float) -> float:
    """Bessel function of the first kind J_alpha(t) for alpha >= 0, t >= 0.

    Sums the power series with term-ratio stopping; beyond BESSEL_SERIES_LIMIT the
    cancellation in the alternating series is too large and scipy's jv is used.
    """
    if alpha < 0 or t < 0:
        raise DomainError(f"bessel_j requires alpha >= 0 and t >= 0, got ({alpha}, {t})")
    if t == 0.0:
        return 1.0 if alpha == 0.0 else 0.0
    if t > BESSEL_SERIES_LIMIT:
        return float(special.jv(alpha, t))

    half = 0.5 * t
    term = math.exp(alpha * math.log(half) - ln_gamma(alpha + 1.0))
    terms = [term]
    peak = abs(term)
    quarter = half * half
    m = 0
    while True:
        m += 1
        term *= -quarter / (m * (m + alpha))
        terms.append(term)
        peak = max(peak, abs(term))
        if m > half and abs(term) <= 1e-2 * EPS * peak:
            break
        if m > MAX_SERIES_TERMS:
            raise ConvergenceError(f"Bessel series J_{alpha}({t}) did not converge")
    return math.fsum(terms)


def bessel_j_reduced(alpha: float, k: float, r: np.ndarray | float) -> np.ndarray:
    """r^(-alpha) J_alpha(k r) on an array of r >= 0, finite at r = 0.

    Sums the even power series in r directly; intended for k r below BESSEL_SERIES_LIMIT.
    """
    r = np.asarray(r, dtype=float)
    if alpha < 0 or not k > 0 or np.any(r < 0):
        raise DomainError("bessel_j_reduced requires alpha >= 0, k > 0 and r >= 0")
    half = 0.5 * k
    quarter = half * half * r * r
    term = np.full_like(r, math.exp(alpha * math.log(half) - ln_gamma(alpha + 1.0)))
    total = term.copy()
    peak = np.abs(term)
    reach = half * float(np.max(r, initial=0.0))
    m = 0
    while True:
        m += 1
        term = term * (-quarter / (m * (m + alpha)))
        total += term
        peak = np.maximum(peak, np.abs(term))
        if m > reach and np.all(np.abs(term) <= 1e-2 * EPS * peak):
            return total
        if m > MAX_SERIES_TERMS:
            raise ConvergenceError(f"reduced Bessel series for alpha={alpha} did not converge")


@lru_cache(maxsize=64)
def bessel_first_zero(alpha: float) -> float:
    """Smallest t > 0 with J_alpha(t) = 0.

    J_alpha has no zero in (0, alpha], so the sign-change scan starts just past alpha on
    a grid of step 0.1; the bracket is refined with Brent's method.
    """
    if alpha < 0:
        raise DomainError(f"bessel_first_zero requires alpha >= 0, got {alpha}")

    left = alpha + ZERO_SCAN_STEP
    f_left = bessel_j(alpha, left)
    steps = round(ZERO_SCAN_SPAN / ZERO_SCAN_STEP)
    for k in range(2, steps + 1):
        right = alpha + k * ZERO_SCAN_STEP
        f_right = bessel_j(alpha, right)
        if f_right == 0.0:
            return right
        if f_left * f_right < 0:
            root = optimize.brentq(
                lambda s: bessel_j(alpha, s), left, right, xtol=1e-15, rtol=4 * EPS, maxiter=200
            )
            logfire.debug(f"[specfun] first zero of J_{alpha} at {root:.15f}")
            return float(root)
        left, f_left = right, f_right

    raise ZeroSearchError(
        f"no sign change of J_{alpha} found in ({alpha}, {alpha + ZERO_SCAN_SPAN}]"
    )
