"""Operator norms of the Green operator: closed forms and their numerical counterparts.

The p -> inf norm is sup_x (∫ G(x,y)^q dy)^(1/q). After the Moebius change of variables
z = T_x y the inner integral depends on t = |x| only:

    I(x) = c_n^q (1-t^2)^a ∫_0^1 (1-r^(n-2))^q r^(a-1) S(r, t) dr,
    S(r, t) = ∫_S |r x + xi|^(-(n+a)) dxi,          a = n - q(n-2).

Radial integrals carrying r^(a-1) are computed after u = r^a, which turns the endpoint
weight into du/a.
"""

import math
from collections.abc import Callable
from enum import StrEnum

import logfire
import numpy as np

from ballgreen.errors import AdmissibilityError, DomainError
from ballgreen.geometry import BallDim, green_many
from ballgreen.models import (
    ExponentPair,
    NormQuantity,
    NormReport,
    QuadratureMethod,
    QuadratureSpec,
)
from ballgreen.quadrature import (
    IntegralEstimate,
    ball_zonal_integral,
    graded_breaks,
    integrate_interval,
    monte_carlo_ball_centered,
    half_angle_gaps,
    panel_rule,
    sphere_zonal_angles,
)
from ballgreen.specfun import bessel_first_zero, bessel_j, hyp2f1, ln_gamma
from ballgreen.workers import parallel_map

SUP_EPS = 1e-3
GOLDEN = 0.5 * (math.sqrt(5.0) - 1.0)


class GreenQRoute(StrEnum):
    REDUCED = "reduced"
    HYPERGEOMETRIC = "hypergeometric"
    RAW = "raw"


def _check_admissible(dim: BallDim, ep: ExponentPair) -> float:
    a = ep.a(dim.n)
    if not a > 0:
        raise AdmissibilityError(
            f"q = {ep.q} is not below n/(n-2) = {dim.n / (dim.n - 2)}; the norm is infinite"
        )
    return a


def _check_radius(t: float) -> None:
    if not 0.0 <= t < 1.0:
        raise DomainError(f"t = |x| must lie in [0, 1), got {t}")


def theorem1_norm(dim: BallDim, ep: ExponentPair) -> float:
    """Closed form of ||G: L^p -> L^inf|| for 1 <= q < n/(n-2), evaluated in log space."""
    a = _check_admissible(dim, ep)
    n, q = dim.n, ep.q
    log_inner = (
        0.5 * n * math.log(math.pi)
        + ln_gamma(1.0 + q)
        + ln_gamma(a / (n - 2))
        - ln_gamma(1.0 + 0.5 * n)
        - ln_gamma(n / (n - 2))
    )
    return dim.c_n * math.exp(log_inner / q)


def lemma2_closed_i0(dim: BallDim, ep: ExponentPair) -> float:
    """I(0) = Gamma(1+q) Gamma(a/(n-2)) / ((n-2) Gamma(1+q+a/(n-2)))."""
    a = _check_admissible(dim, ep)
    n, q = dim.n, ep.q
    return math.exp(
        ln_gamma(1.0 + q)
        + ln_gamma(a / (n - 2))
        - math.log(n - 2)
        - ln_gamma(1.0 + q + a / (n - 2))
    )


def lemma2_closed_i0_sine(q: float) -> float:
    """The n = 3 value of I(0) written as pi q (1-q)(2-q) / (6 sin(pi q)).

    The sine form has removable singularities at integer q, where its limit (the Gamma
    form) is returned.
    """
    if not 1.0 <= q < 3.0:
        raise AdmissibilityError(f"the n = 3 form needs 1 <= q < 3, got {q}")
    if abs(q - round(q)) < 1e-9:
        return lemma2_closed_i0(BallDim(3), ExponentPair.from_q(float(round(q))))
    return math.pi * q * (1.0 - q) * (2.0 - q) / (6.0 * math.sin(math.pi * q))


def _radial_rule(a: float, spec: QuadratureSpec) -> tuple[np.ndarray, np.ndarray]:
    """Nodes r and weights for ∫_0^1 f(r) r^(a-1) dr through u = r^a."""
    breaks = graded_breaks(0.0, 1.0, 2 * spec.subdivisions, grade_lo=True, grade_hi=True)
    u, w = panel_rule(breaks, spec.nodes_radial)
    return u ** (1.0 / a), w / a


def lemma2_profile(
    dim: BallDim, ep: ExponentPair, t: float, spec: QuadratureSpec | None = None
) -> float:
    """I(t) = (1-t^2)^a ∫_0^1 (1-r^(n-2))^q r^(a-1) (1-r^2 t^2)^(-(a+1)) dr."""
    a = _check_admissible(dim, ep)
    _check_radius(t)
    spec = spec or QuadratureSpec.from_settings()
    r, w = _radial_rule(a, spec)
    values = (1.0 - r ** (dim.n - 2)) ** ep.q * (1.0 - (r * t) ** 2) ** (-(a + 1.0))
    return float((1.0 - t * t) ** a * (w @ values))


def zonal_factor(dim: BallDim, ep: ExponentPair, s: float) -> float:
    """F(-a/2, (q(n-2)-2)/2; n/2; s^2), the sphere factor with its (1-s^2)^(-a-1) removed."""
    a = _check_admissible(dim, ep)
    if not 0.0 <= s < 1.0:
        raise DomainError(f"zonal factor argument must lie in [0, 1), got {s}")
    return hyp2f1(-0.5 * a, 0.5 * (ep.q * (dim.n - 2) - 2.0), 0.5 * dim.n, s * s)


def sphere_factor(
    dim: BallDim,
    ep: ExponentPair,
    r: np.ndarray,
    t: float,
    spec: QuadratureSpec,
    route: GreenQRoute = GreenQRoute.REDUCED,
) -> np.ndarray:
    """S(r, t) = ∫_S (r^2 t^2 + 2 r t xi_1 + 1)^(-(n+a)/2) dxi for an array of radii."""
    a = _check_admissible(dim, ep)
    r = np.asarray(r, dtype=float)
    if route == GreenQRoute.HYPERGEOMETRIC:
        rt = r * t
        factors = np.array([zonal_factor(dim, ep, float(v)) for v in rt])
        return dim.omega * (1.0 - rt * rt) ** (-a - 1.0) * factors
    theta, w = sphere_zonal_angles(dim, spec, spec.nodes_angular)
    _, plus = half_angle_gaps(theta)
    rt = (r * t)[:, None]
    # |r t e_1 + xi|^2 with 1 + s kept exact near s = -1
    base = (1.0 - rt) ** 2 + 2.0 * rt * plus[None, :]
    return base ** (-0.5 * (dim.n + a)) @ w


def _raw_integrand(dim: BallDim, ep: ExponentPair, t: float):
    """G(t e_1, y)^q as a function of (|y|, theta) for ball_zonal_integral(polar=True).

    Both squared distances are written with 1 - cos(theta) = 2 sin^2(theta/2), so they
    stay positive next to the pole y = t e_1.
    """
    power = 0.5 * (2 - dim.n)

    def h(r: np.ndarray, theta: np.ndarray) -> np.ndarray:
        minus, _ = half_angle_gaps(theta)
        d2 = (r - t) ** 2 + 2.0 * r * t * minus
        b2 = (1.0 - r * t) ** 2 + 2.0 * r * t * minus
        with np.errstate(divide="ignore"):
            g = dim.c_n * (d2**power - b2**power)
        return np.maximum(g, 0.0) ** ep.q

    return h


def resolve_route(route: GreenQRoute | None, spec: QuadratureSpec) -> GreenQRoute:
    """The route green_q_integral takes: Monte Carlo always samples the raw integrand."""
    if spec.method == QuadratureMethod.MONTE_CARLO:
        if route not in (None, GreenQRoute.RAW):
            raise DomainError(
                f"the {route.value} route is deterministic; Monte Carlo needs the raw route"
            )
        return GreenQRoute.RAW
    return route or GreenQRoute.REDUCED


def green_q_integral(
    dim: BallDim,
    ep: ExponentPair,
    t: float,
    spec: QuadratureSpec | None = None,
    route: GreenQRoute | None = None,
) -> IntegralEstimate:
    """I(x) = ∫_(B^n) G(x, y)^q dy at |x| = t.

    Routes: ``reduced`` (Moebius-reduced radial integral with the sphere factor by zonal
    quadrature), ``hypergeometric`` (sphere factor in closed 2F1 form) and ``raw``
    (the untransformed integrand, by tensor quadrature). Without a route, spec.method
    decides: Monte Carlo samples the raw integrand around x, the tensor rule takes the
    reduced route. All routes estimate the same quantity.
    """
    a = _check_admissible(dim, ep)
    _check_radius(t)
    spec = spec or QuadratureSpec.from_settings()
    route = resolve_route(route, spec)

    if route == GreenQRoute.RAW:
        if spec.method == QuadratureMethod.MONTE_CARLO:
            x = np.zeros(dim.n)
            x[0] = t

            def f(ys: np.ndarray) -> np.ndarray:
                return green_many(dim, x, ys) ** ep.q

            return monte_carlo_ball_centered(dim, f, x, order=ep.q * (dim.n - 2), spec=spec)
        h = _raw_integrand(dim, ep, t)
        return ball_zonal_integral(dim, h, spec, focus_r=t or None, polar=True)

    r, w = _radial_rule(a, spec)
    radial = (1.0 - r ** (dim.n - 2)) ** ep.q * sphere_factor(dim, ep, r, t, spec, route)
    value = dim.c_n**ep.q * (1.0 - t * t) ** a * float(w @ radial)
    return IntegralEstimate(value=value, std_error=0.0, nodes_or_samples=r.size)


def green_q_integral_n3(ep: ExponentPair, t: float, spec: QuadratureSpec | None = None) -> float:
    """I(x) for n = 3 through the series form

        c_3^q omega_2 (1-t^2)^(3-q) ∫ (1-r)^q r^(2-q) F((6-q)/2, (5-q)/2; 3/2; r^2 t^2) dr.
    """
    dim = BallDim(3)
    a = _check_admissible(dim, ep)
    _check_radius(t)
    spec = spec or QuadratureSpec.from_settings()
    q = ep.q
    r, w = _radial_rule(a, spec)
    hyp = np.array([hyp2f1(0.5 * (6 - q), 0.5 * (5 - q), 1.5, float(v) ** 2) for v in r * t])
    integral = float(w @ ((1.0 - r) ** q * hyp))
    return dim.c_n**q * dim.omega * (1.0 - t * t) ** a * integral


def holder_extremal_witness(
    dim: BallDim, ep: ExponentPair, spec: QuadratureSpec | None = None
) -> float:
    """G[g](0) for g = G(0, .)^(q-1) / ||G(0, .)^(q-1)||_p, the source attaining the sup.

    Equals I(0)^(1/q), hence the p -> inf norm, when Hoelder's inequality is sharp.
    """
    _check_admissible(dim, ep)
    if math.isinf(ep.p):
        raise AdmissibilityError("the extremal source needs q > 1")
    spec = spec or QuadratureSpec.from_settings()
    kernel = _raw_integrand(dim, ExponentPair.from_q(1.0), 0.0)
    q, p = ep.q, ep.p

    def pairing(r: np.ndarray, theta: np.ndarray) -> np.ndarray:
        green_value = kernel(r, theta)
        return green_value * green_value ** (q - 1.0)

    def source_power(r: np.ndarray, theta: np.ndarray) -> np.ndarray:
        return (kernel(r, theta) ** (q - 1.0)) ** p

    top = ball_zonal_integral(dim, pairing, spec, polar=True).value
    norm_p = ball_zonal_integral(dim, source_power, spec, polar=True).value ** (1.0 / p)
    return top / norm_p


def _golden_max(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-9):
    """Golden-section search for a maximum of a unimodal f on [lo, hi]."""
    x1 = hi - GOLDEN * (hi - lo)
    x2 = lo + GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > tol:
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - GOLDEN * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + GOLDEN * (hi - lo)
            f2 = f(x2)
    return (x1, f1) if f1 >= f2 else (x2, f2)


def sup_scan(
    f: Callable[[float], float], grid: int = 64, refine: bool = True
) -> tuple[float, float]:
    """(argmax, max) of f over [0, 1 - 1e-3]: uniform grid, then golden-section refinement.

    Grid values are computed on the shared pool; the result is independent of scheduling.
    """
    if grid < 2:
        raise DomainError(f"sup_scan needs at least 2 grid points, got {grid}")
    ts = np.linspace(0.0, 1.0 - SUP_EPS, grid)
    values = parallel_map(f, [float(t) for t in ts])
    best = int(np.argmax(values))
    arg, top = float(ts[best]), float(values[best])
    if refine:
        lo = float(ts[max(best - 1, 0)])
        hi = float(ts[min(best + 1, grid - 1)])
        x, fx = _golden_max(f, lo, hi)
        if fx > top:
            arg, top = x, fx
    return arg, top


def bessel_order(dim: BallDim, literal: bool = False) -> float:
    """Order of the Bessel function whose first zero gives lambda_1: n/2 - 1.

    literal=True returns the (n-1)/2 order that fails the eigenfunction residual test.
    """
    return 0.5 * (dim.n - 1) if literal else 0.5 * dim.n - 1.0


def lambda1(dim: BallDim) -> float:
    """First Dirichlet eigenvalue of the Laplacian on B^n: j_(n/2-1, 1)^2."""
    j = bessel_first_zero(bessel_order(dim))
    return j * j


def lambda1_rayleigh(dim: BallDim, spec: QuadratureSpec | None = None) -> float:
    """Rayleigh quotient ∫|grad phi_1|^2 / ∫ phi_1^2 of the radial eigenfunction.

    With nu = n/2 - 1, k = sqrt(lambda_1) and phi_1 = r^(-nu) J_nu(k r) the quotient
    reduces to k^2 ∫ J_(nu+1)(k r)^2 r dr / ∫ J_nu(k r)^2 r dr.
    """
    spec = spec or QuadratureSpec.from_settings()
    nu = bessel_order(dim)
    k = math.sqrt(lambda1(dim))

    def weighted(order: float) -> Callable[[np.ndarray], np.ndarray]:
        return lambda r: np.array([bessel_j(order, k * v) ** 2 * v for v in r])

    top = integrate_interval(weighted(nu + 1.0), 0.0, 1.0, spec.nodes_radial, levels=2)
    bottom = integrate_interval(weighted(nu), 0.0, 1.0, spec.nodes_radial, levels=2)
    return k * k * top / bottom


def riesz_thorin_bound(dim: BallDim, p: float, literal: bool = False) -> float:
    """Interpolated bound on ||G: L^p -> L^p|| between the endpoints 1/(2n), 1/lambda_1, 1/(2n).

    For 2 <= p <= inf the bound is (2n)^((2-p)/p) lambda_1^(-2/p). literal=True returns the
    printed (2n)^((p-2)/p) variant, which gives 2n instead of 1/(2n) at p = inf.
    """
    if not p >= 1:
        raise DomainError(f"riesz_thorin_bound requires p >= 1, got {p}")
    two_n = 2.0 * dim.n
    if math.isinf(p):
        return two_n if literal else 1.0 / two_n
    if p == 1.0:
        return 1.0 / two_n
    lam = lambda1(dim)
    if p == 2.0:
        return 1.0 / lam
    if p < 2.0:
        return two_n ** ((p - 2.0) / p) * lam ** (2.0 * (1.0 - p) / p)
    exponent = (p - 2.0) / p if literal else (2.0 - p) / p
    return two_n**exponent * lam ** (-2.0 / p)


def riesz_potential_bound(
    dim: BallDim, mu: float, p: float, q: float, volume: float | None = None
) -> float:
    """Bound on ||V_mu: L^p(Omega) -> L^q(Omega)|| for the Riesz potential kernel |x-y|^(n(mu-1)).

    ((1-delta)/(mu-delta))^(1-delta) (omega_(n-1)/n)^(1-mu) |Omega|^(mu-delta), delta = 1/p - 1/q;
    |Omega| defaults to the volume of the unit ball.
    """
    if not 0.0 < mu <= 1.0:
        raise DomainError(f"mu must lie in (0, 1], got {mu}")
    volume = dim.volume if volume is None else volume
    if not volume > 0:
        raise DomainError(f"|Omega| must be positive, got {volume}")
    delta = 1.0 / p - 1.0 / q
    if delta < 0:
        raise AdmissibilityError(f"delta = 1/p - 1/q must be nonnegative, got {delta}")
    if not delta < mu:
        raise AdmissibilityError(f"delta = {delta} must be below mu = {mu}")
    return (
        ((1.0 - delta) / (mu - delta)) ** (1.0 - delta)
        * dim.volume ** (1.0 - mu)
        * volume ** (mu - delta)
    )


def lp_lower_bound(dim: BallDim, p: float, g, spec: QuadratureSpec | None = None) -> float:
    """||G[g]||_p / ||g||_p for a radial test source, a lower bound for ||G||_(p -> p).

    g is a built-in source name (``const_one`` or ``phi1``) or a radial SourceField.
    """
    from ballgreen.potential import SourceField, radial_green_potential

    if not 1.0 < p < math.inf:
        raise DomainError(f"lp_lower_bound requires 1 < p < inf, got {p}")
    spec = spec or QuadratureSpec.from_settings()
    source = g if isinstance(g, SourceField) else SourceField.builtin(g, dim)
    if source.radial is None:
        raise DomainError(f"lp_lower_bound needs a radial source, got {source.kind}")

    breaks = graded_breaks(0.0, 1.0, spec.subdivisions, grade_lo=True, grade_hi=True)
    r, w = panel_rule(breaks, spec.nodes_radial)
    potential = np.array([radial_green_potential(dim, source.radial, float(v), spec) for v in r])
    weight = w * r ** (dim.n - 1)
    numerator = weight @ np.abs(potential) ** p
    denominator = weight @ np.abs(source.radial(r)) ** p
    ratio = float((numerator / denominator) ** (1.0 / p))
    logfire.debug(f"[norms] lp witness {source.kind} p={p}", n=dim.n, ratio=ratio)
    return ratio


def report_p_to_inf(
    dim: BallDim,
    ep: ExponentPair,
    spec: QuadratureSpec | None = None,
    grid: int = 64,
    route: GreenQRoute | None = None,
) -> NormReport:
    """Theorem-1 closed form against sup_t I(t)^(1/q) computed along |x| = t."""
    spec = spec or QuadratureSpec.from_settings()
    route = resolve_route(route, spec)
    closed = theorem1_norm(dim, ep)
    errors: dict[float, float] = {}

    def norm_at(t: float) -> float:
        estimate = green_q_integral(dim, ep, t, spec, route)
        errors[t] = estimate.std_error
        return estimate.value ** (1.0 / ep.q)

    with logfire.span("[norms] p -> inf norm", n=dim.n, q=ep.q, route=route.value):
        refine = spec.method != QuadratureMethod.MONTE_CARLO
        argmax, top = sup_scan(norm_at, grid=grid, refine=refine)
    # delta method: sigma(I^(1/q)) = I^(1/q - 1) sigma(I) / q
    sigma = errors.get(argmax, 0.0) * top ** (1.0 - ep.q) / ep.q
    return NormReport.compare(
        NormQuantity.P_TO_INF, closed, top, spec, std_error=sigma, argmax_t=argmax
    )


def report_endpoint(dim: BallDim, quantity: NormQuantity, spec: QuadratureSpec | None = None):
    """Endpoint norms of the L^p family: l1 and linf are 1/(2n), l2 is 1/lambda_1."""
    spec = spec or QuadratureSpec.from_settings()
    if quantity in (NormQuantity.L1, NormQuantity.LINF):
        # G* = G, so the L^1 norm equals the L^inf norm: sup_x ∫ G(x, y) dy at x = 0
        numeric = green_q_integral(dim, ExponentPair.from_q(1.0), 0.0, spec).value
        return NormReport.compare(quantity, riesz_thorin_bound(dim, 1.0), numeric, spec)
    if quantity == NormQuantity.L2:
        numeric = lp_lower_bound(dim, 2.0, "phi1", spec)
        return NormReport.compare(quantity, riesz_thorin_bound(dim, 2.0), numeric, spec)
    raise DomainError(f"{quantity} is not an endpoint norm")
