"""Property batteries, one per module; every check yields a PropertyResult."""

import math
from collections.abc import Callable
from enum import StrEnum

import logfire
import numpy as np

from ballgreen import norms, potential, quadrature, specfun
from ballgreen.config import get_settings
from ballgreen.errors import AdmissibilityError
from ballgreen.geometry import (
    BallDim,
    Point,
    bracket,
    green,
    mobius,
    mobius_jacobian_factor,
    mobius_many,
    poisson_kernel,
)
from ballgreen.models import ExponentPair, PropertyResult, QuadratureSpec

# First positive zeros of J_alpha: J_0, J_1 tabulated, J_(1/2) is sin, J_(3/2) solves tan t = t
KNOWN_BESSEL_ZEROS = {
    0.0: 2.404825557695773,
    0.5: math.pi,
    1.0: 3.8317059702075125,
    1.5: 4.493409457909064,
}
ADMISSIBLE_CASES = ((3, 1.5), (3, 2.0), (3, 2.5), (4, 1.25), (4, 1.5), (5, 1.2))
DRAWS = 200
# the centered sampler's weight varies most with direction when x is near the sphere
BOUNDARY_RADIUS = 0.9
BOUNDARY_SAMPLE_FACTOR = 4
PAIRS = 100


class Suite(StrEnum):
    SPECFUN = "specfun"
    GEOMETRY = "geometry"
    QUADRATURE = "quadrature"
    NORMS = "norms"
    POTENTIAL = "potential"
    ALL = "all"


def _result(
    suite: Suite,
    name: str,
    expected: float,
    measured: float,
    tol: float,
    n: int = 0,
    samples: int = 0,
    relative: bool = False,
) -> PropertyResult:
    abs_err = abs(measured - expected)
    err = abs_err / abs(expected) if relative and expected != 0 else abs_err
    return PropertyResult(
        suite=suite.value,
        name=name,
        expected=expected,
        measured=measured,
        abs_err=abs_err,
        passed=bool(err <= tol),
        n=n,
        samples=samples,
    )


def _flag(suite: Suite, name: str, ok: bool, measured: float, n: int = 0) -> PropertyResult:
    """A yes/no property; measured carries the quantity that decided it."""
    return PropertyResult(
        suite=suite.value,
        name=name,
        expected=0.0,
        measured=measured,
        abs_err=0.0 if ok else abs(measured),
        passed=bool(ok),
        n=n,
    )


def _within_sigma(
    suite: Suite,
    name: str,
    expected: float,
    estimate: float,
    sigma: float,
    rel_tol: float,
    n: int,
    samples: int,
) -> PropertyResult:
    abs_err = abs(estimate - expected)
    ok = abs_err <= 3.0 * sigma + 1e-12 and abs_err <= rel_tol * abs(expected) + 1e-12
    return PropertyResult(
        suite=suite.value,
        name=name,
        expected=expected,
        measured=estimate,
        abs_err=abs_err,
        passed=bool(ok),
        n=n,
        samples=samples,
    )


def _max_rel_gap(pairs: list[tuple[float, float]]) -> float:
    return max(abs(a - b) / max(1.0, abs(a)) for a, b in pairs)


def _random_interior(rng: np.random.Generator, n: int, radius: float = 0.95) -> np.ndarray:
    direction = rng.standard_normal(n)
    direction /= np.linalg.norm(direction)
    return direction * radius * rng.random() ** (1.0 / n)


def _random_unit(rng: np.random.Generator, n: int) -> np.ndarray:
    direction = rng.standard_normal(n)
    return direction / np.linalg.norm(direction)


# specfun -----------------------------------------------------------------------------------


def check_specfun(seed: int) -> list[PropertyResult]:
    suite = Suite.SPECFUN
    rng = np.random.default_rng(seed)
    results = []

    xs = np.linspace(0.1, 100.0, DRAWS)
    recurrence = max(
        abs(specfun.ln_gamma(x + 1.0) - specfun.ln_gamma(x) - math.log(x)) for x in xs
    )
    results.append(_result(suite, "ln_gamma_recurrence", 0.0, recurrence, 1e-12))
    results.append(
        _result(suite, "ln_gamma_half", 0.5 * math.log(math.pi), specfun.ln_gamma(0.5), 1e-12)
    )

    euler, pfaff = [], []
    for _ in range(DRAWS):
        b = rng.uniform(0.1, 3.0)
        c = b + rng.uniform(0.1, 4.0)
        a = rng.uniform(-3.0, 3.0)
        t = rng.uniform(0.0, 0.9)
        lhs = specfun.hyp2f1(a, b, c, t)
        euler.append((lhs, (1.0 - t) ** (c - a - b) * specfun.hyp2f1(c - a, c - b, c, t)))
        pfaff.append((lhs, (1.0 - t) ** (-a) * specfun.hyp2f1(a, c - b, c, t / (t - 1.0))))
    results.append(_result(suite, "euler_transformation", 0.0, _max_rel_gap(euler), 1e-9))
    results.append(_result(suite, "pfaff_transformation", 0.0, _max_rel_gap(pfaff), 1e-9))

    kummer = []
    for _ in range(DRAWS):
        a = rng.uniform(-2.0, 2.0)
        b = rng.uniform(0.3, 3.0)
        t = rng.uniform(0.0, 0.5)
        lhs = specfun.hyp2f1(a, b, 2.0 * b, 4.0 * t / (1.0 + t) ** 2)
        rhs = (1.0 + t) ** (2.0 * a) * specfun.hyp2f1(a, a + 0.5 - b, b + 0.5, t * t)
        kummer.append((lhs, rhs))
    results.append(_result(suite, "kummer_quadratic", 0.0, _max_rel_gap(kummer), 1e-9))

    step = 1e-6
    derivative = []
    for a, b, c, t in ((1.0, 1.0, 2.0, 0.5), (2.0, 3.0, 4.0, 0.25), (-1.5, 0.5, 2.5, -0.7)):
        fd = (specfun.hyp2f1(a, b, c, t + step) - specfun.hyp2f1(a, b, c, t - step)) / (2 * step)
        derivative.append((specfun.hyp2f1_derivative(a, b, c, t), fd))
    results.append(_result(suite, "derivative_identity", 0.0, _max_rel_gap(derivative), 1e-6))

    violations = 0
    for _ in range(DRAWS):
        m, p = rng.uniform(0.2, 5.0, size=2)
        k = rng.uniform(-m, p)
        gap = specfun.gamma_inequality(m, p, k)
        if gap * math.copysign(1.0, k * (p - m - k)) < -1e-12:
            violations += 1
    results.append(_flag(suite, "gamma_inequality", violations == 0, float(violations)))

    for alpha, zero in KNOWN_BESSEL_ZEROS.items():
        found = specfun.bessel_first_zero(alpha)
        results.append(_result(suite, f"bessel_zero_{alpha:g}", zero, found, 1e-12))
    results.append(
        _result(
            suite, "bessel_half_order", 2.0 / math.pi, specfun.bessel_j(0.5, 0.5 * math.pi), 1e-12
        )
    )
    return results


# geometry ----------------------------------------------------------------------------------


def _fd_laplacian(f: Callable[[np.ndarray], float], x: np.ndarray, h: float) -> float:
    total = -2.0 * x.size * f(x)
    for e in np.eye(x.size):
        total += f(x + h * e) + f(x - h * e)
    return total / (h * h)


def _trend(coarse: float, fine: float) -> float:
    """Ratio of residuals at step h and h/2; about 4 for second-order truncation."""
    return abs(coarse) / abs(fine) if fine != 0 else math.inf


def _fd_jacobian_det(x: np.ndarray, z: np.ndarray, h: float = 1e-6) -> float:
    columns = [
        (mobius_many(-x, z + h * e)[0] - mobius_many(-x, z - h * e)[0]) / (2 * h)
        for e in np.eye(z.size)
    ]
    return abs(float(np.linalg.det(np.column_stack(columns))))


def check_geometry(seed: int) -> list[PropertyResult]:
    suite = Suite.GEOMETRY
    rng = np.random.default_rng(seed)
    results = []

    for n in (3, 4, 5):
        dim = BallDim(n)
        norm_gap = boundary_gap = center = symmetry = jacobian = 0.0
        bracket_slack = tail_slack = math.inf
        for _ in range(PAIRS):
            x = Point(_random_interior(rng, n))
            y = Point(_random_interior(rng, n))
            eta = Point(_random_unit(rng, n))
            b = bracket(x, y)
            distance = float(np.linalg.norm(x.coords - y.coords))
            norm_gap = max(norm_gap, abs(mobius(x, y).norm - distance / b))
            boundary_gap = max(boundary_gap, abs(mobius(x, eta).norm - 1.0))
            center = max(center, mobius(x, x).norm)
            bracket_slack = min(bracket_slack, b - distance)
            tail_slack = min(tail_slack, b - (1.0 - x.norm * y.norm))
            g_xy, g_yx = green(dim, x, y), green(dim, y, x)
            symmetry = max(symmetry, abs(g_xy - g_yx) / max(g_xy, 1.0))

            xs = Point(_random_interior(rng, n, radius=0.7))
            zs = Point(_random_interior(rng, n, radius=0.7))
            factor = mobius_jacobian_factor(dim, xs, zs)
            jacobian = max(jacobian, abs(_fd_jacobian_det(xs.coords, zs.coords) - factor) / factor)

        results += [
            _result(suite, "mobius_norm_identity", 0.0, norm_gap, 1e-12, n=n),
            _result(suite, "mobius_boundary_to_boundary", 0.0, boundary_gap, 1e-12, n=n),
            _result(suite, "mobius_center_to_origin", 0.0, center, 1e-12, n=n),
            _flag(suite, "bracket_dominates_distance", bracket_slack >= -1e-15, bracket_slack, n),
            _flag(suite, "bracket_lower_bound", tail_slack >= -1e-15, tail_slack, n),
            _result(suite, "green_symmetry", 0.0, symmetry, 1e-12, n=n),
            _result(suite, "jacobian_vs_finite_difference", 0.0, jacobian, 1e-6, n=n),
        ]

        x = np.zeros(n)
        x[0] = 0.2
        y = np.zeros(n)
        y[1] = -0.4
        eta = np.zeros(n)
        eta[0] = 1.0

        def g_of(v: np.ndarray) -> float:
            return green(dim, Point(v), Point(y))

        def p_of(v: np.ndarray) -> float:
            return poisson_kernel(dim, Point(v), Point(eta))

        for name, f in (("green_harmonic", g_of), ("poisson_harmonic", p_of)):
            ratio = _trend(_fd_laplacian(f, x, 1e-2), _fd_laplacian(f, x, 5e-3))
            results.append(_flag(suite, name, 2.5 <= ratio <= 6.0, ratio, n))

        t = 0.5

        def zonal_poisson(s: np.ndarray) -> np.ndarray:
            return (1.0 - t * t) / (1.0 - 2.0 * t * s + t * t) ** (0.5 * n)

        mean = quadrature.sphere_zonal_integral(dim, zonal_poisson).value / dim.omega
        results.append(_result(suite, "poisson_mean_value", 1.0, mean, 1e-8, n=n))
    return results


# quadrature --------------------------------------------------------------------------------


def check_quadrature(seed: int, samples: int) -> list[PropertyResult]:
    suite = Suite.QUADRATURE
    results = []

    nodes, weights = quadrature.gauss_legendre_rule(2)
    results.append(_result(suite, "gauss_legendre_cubic", 0.25, float(weights @ nodes**3), 1e-15))
    nodes, weights = quadrature.gauss_legendre_rule(5)
    degree8 = float(weights @ nodes**8)
    results.append(_result(suite, "gauss_legendre_degree8", 1 / 9, degree8, 1e-14))
    nodes, weights = quadrature.gauss_legendre_rule(20)
    measured = float(weights @ (np.sqrt(nodes) * (1.0 - nodes) ** 2))
    results.append(
        _result(suite, "gauss_legendre_beta", specfun.beta(1.5, 3.0), measured, 1e-3, relative=True)
    )

    spec = QuadratureSpec.from_settings(seed=seed)
    for n in range(3, 9):
        dim = BallDim(n)
        total = quadrature.sphere_zonal_integral(dim, np.ones_like, spec).value
        results.append(
            _result(suite, "sphere_measure", dim.omega, total, 1e-10, n=n, relative=True)
        )

    mc = QuadratureSpec.from_settings(method="monte_carlo", mc_samples=samples, seed=seed)
    dim3 = BallDim(3)
    second = quadrature.monte_carlo_ball(dim3, lambda ys: np.sum(ys * ys, axis=1), mc)
    results.append(
        _within_sigma(
            suite, "mc_second_moment", 0.8 * math.pi, second.value, second.std_error, 1e-2, 3,
            samples,
        )
    )

    for n in (3, 4, 5):
        dim = BallDim(n)

        def h(r: np.ndarray, s: np.ndarray) -> np.ndarray:
            return np.exp(-r * r) * (1.0 + s)

        def f(ys: np.ndarray) -> np.ndarray:
            r = np.linalg.norm(ys, axis=1)
            return np.exp(-r * r) * (1.0 + ys[:, 0] / r)

        reference = quadrature.ball_zonal_integral(dim, h, spec).value
        estimate = quadrature.monte_carlo_ball(dim, f, mc)
        results.append(
            _within_sigma(
                suite, "zonal_vs_monte_carlo", reference, estimate.value, estimate.std_error,
                1e-2, n, samples,
            )
        )

    again = quadrature.monte_carlo_ball(dim3, lambda ys: np.sum(ys * ys, axis=1), mc)
    results.append(
        _flag(suite, "monte_carlo_deterministic", again == second, again.value - second.value, 3)
    )
    return results


# norms -------------------------------------------------------------------------------------


def _q_grid(n: int, count: int = 5) -> list[float]:
    top = n / (n - 2)
    return [1.0 + (top - 1.0) * (i + 1) / (count + 1) for i in range(count)]


def check_norms(seed: int, t_grid: int, samples: int) -> list[PropertyResult]:
    suite = Suite.NORMS
    spec = QuadratureSpec.from_settings(seed=seed)
    mc = QuadratureSpec.from_settings(method="monte_carlo", mc_samples=samples, seed=seed)
    results = []

    gap = 0.0
    for n in range(3, 7):
        dim = BallDim(n)
        for q in _q_grid(n):
            ep = ExponentPair.from_q(q)
            closed = norms.theorem1_norm(dim, ep)
            via_lemma = dim.c_n * (dim.omega * norms.lemma2_closed_i0(dim, ep)) ** (1.0 / q)
            gap = max(gap, abs(closed - via_lemma) / closed)
    results.append(_result(suite, "theorem1_lemma2_identity", 0.0, gap, 1e-10))

    for n in (3, 4, 5):
        dim = BallDim(n)
        ep1 = ExponentPair.from_q(1.0)
        results.append(
            _result(suite, "theorem1_q1", 1.0 / (2 * n), norms.theorem1_norm(dim, ep1), 1e-14, n=n)
        )

    for n, q in ADMISSIBLE_CASES:
        dim, ep = BallDim(n), ExponentPair.from_q(q)
        i0 = norms.lemma2_profile(dim, ep, 0.0, spec)
        results.append(
            _result(
                suite, f"lemma2_i0_q{q:g}", norms.lemma2_closed_i0(dim, ep), i0, 1e-9, n=n,
                relative=True,
            )
        )
        profile = [norms.lemma2_profile(dim, ep, float(t), spec) for t in np.linspace(0, 0.999, 64)]
        excess = max(profile[1:]) - profile[0]
        results.append(_flag(suite, f"lemma2_max_at_zero_q{q:g}", excess < 0, excess, n))

        closed = norms.theorem1_norm(dim, ep)
        numeric = norms.green_q_integral(dim, ep, 0.0, spec).value ** (1.0 / q)
        results.append(
            _result(suite, f"theorem1_numeric_q{q:g}", closed, numeric, 1e-3, n=n, relative=True)
        )
        sampled = norms.green_q_integral(dim, ep, 0.0, mc)
        # delta method: sigma(I^(1/q)) = I^(1/q - 1) sigma(I) / q
        root = sampled.value ** (1.0 / q)
        sigma = root / sampled.value * sampled.std_error / q
        results.append(
            _within_sigma(
                suite, f"theorem1_mc_q{q:g}", closed, root, sigma, get_settings().tol_mc, n,
                samples,
            )
        )

    dim3, ep2 = BallDim(3), ExponentPair.from_q(2.0)
    reduced = norms.green_q_integral(dim3, ep2, 0.5, spec).value
    hyper = norms.green_q_integral(dim3, ep2, 0.5, spec, norms.GreenQRoute.HYPERGEOMETRIC).value
    series = norms.green_q_integral_n3(ep2, 0.5, spec)
    raw = norms.green_q_integral(dim3, ep2, 0.5, spec, norms.GreenQRoute.RAW).value
    results += [
        _result(suite, "route_hypergeometric", reduced, hyper, 1e-8, n=3, relative=True),
        _result(suite, "route_n3_series", reduced, series, 1e-8, n=3, relative=True),
        _result(suite, "route_raw", reduced, raw, 1e-3, n=3, relative=True),
    ]

    center = norms.green_q_integral(dim3, ep2, 0.0, spec).value
    off_center = [
        norms.green_q_integral(dim3, ep2, float(t), spec).value
        for t in np.linspace(0.05, 0.95, max(t_grid // 4, 2))
    ]
    excess = max(off_center) - center
    results.append(_flag(suite, "green_q_max_at_zero", excess < 0, excess, 3))

    for n, q in ((3, 2.0), (3, 2.5), (4, 1.5), (5, 1.25)):
        dim, ep = BallDim(n), ExponentPair.from_q(q)
        values = [norms.zonal_factor(dim, ep, float(s)) for s in np.linspace(0.0, 0.99, 50)]
        increase = max(np.diff(values), default=0.0)
        ok = values[0] == 1.0 and increase <= 1e-14
        results.append(_flag(suite, f"zonal_factor_nonincreasing_q{q:g}", ok, increase, n))

    witness = norms.holder_extremal_witness(dim3, ep2, spec)
    results.append(
        _result(
            suite, "holder_extremal_witness", norms.theorem1_norm(dim3, ep2), witness, 1e-6, n=3,
            relative=True,
        )
    )

    for n in (3, 4):
        dim = BallDim(n)
        lam = norms.lambda1(dim)
        endpoints = (
            norms.riesz_thorin_bound(dim, 1.0) == 1.0 / (2 * n)
            and norms.riesz_thorin_bound(dim, 2.0) == 1.0 / lam
            and norms.riesz_thorin_bound(dim, math.inf) == 1.0 / (2 * n)
        )
        results.append(_flag(suite, "riesz_thorin_endpoints", endpoints, 0.0, n))
        below = norms.riesz_thorin_bound(dim, 2.0 - 1e-9)
        above = norms.riesz_thorin_bound(dim, 2.0 + 1e-9)
        results.append(
            _result(suite, "riesz_thorin_branches_meet", below, above, 1e-8, n=n, relative=True)
        )
        l1 = norms.green_q_integral(dim, ExponentPair.from_q(1.0), 0.0, spec).value
        results.append(
            _result(suite, "l1_equals_linf", 1.0 / (2 * n), l1, 1e-8, n=n, relative=True)
        )

        excess = -math.inf
        for p in (1.5, 2.0, 3.0, 4.0):
            bound = norms.riesz_thorin_bound(dim, p)
            for source in ("const_one", "phi1"):
                excess = max(excess, norms.lp_lower_bound(dim, p, source, spec) - bound)
        results.append(_flag(suite, "lp_witness_below_bound", excess <= 1e-12, excess, n))

    l2 = norms.lp_lower_bound(dim3, 2.0, "phi1", spec)
    results.append(_result(suite, "l2_eigen_witness", 1 / math.pi**2, l2, 1e-3, n=3, relative=True))
    results.append(_result(suite, "lambda1_n3", math.pi**2, norms.lambda1(dim3), 1e-10, n=3))

    for n in (3, 4, 5):
        dim = BallDim(n)
        lam = norms.lambda1(dim)
        rayleigh = norms.lambda1_rayleigh(dim, spec)
        results.append(_result(suite, "lambda1_rayleigh", lam, rayleigh, 1e-8, n=n, relative=True))

        nu, k = norms.bessel_order(dim), math.sqrt(lam)
        edge = float(specfun.bessel_j_reduced(nu, k, np.array([1.0]))[0])
        results.append(_result(suite, "phi1_boundary_zero", 0.0, edge, 1e-10, n=n))
        ratio = _trend(_radial_eigen_residual(dim, 1e-2), _radial_eigen_residual(dim, 5e-3))
        results.append(_flag(suite, "eigen_residual_trend", 2.5 <= ratio <= 6.0, ratio, n))

    for n in (3, 4):
        dim = BallDim(n)
        pole = n / (n - 2)
        values = [
            norms.theorem1_norm(dim, ExponentPair.from_q(pole - 10.0**-k)) for k in range(1, 6)
        ]
        growing = all(b > a for a, b in zip(values, values[1:], strict=False))
        results.append(_flag(suite, "theorem1_blows_up_at_pole", growing, values[-1], n))

    riesz = norms.riesz_potential_bound(dim3, 2.0 / 3.0, 2.0, 2.0, volume=dim3.volume)
    results.append(_result(suite, "riesz_potential_2pi", 2.0 * math.pi, riesz, 1e-12, n=3))
    try:
        norms.riesz_potential_bound(dim3, 0.2, 1.0, math.inf)
        rejected = False
    except AdmissibilityError:
        rejected = True
    results.append(_flag(suite, "riesz_potential_rejects_gap", rejected, 0.0, 3))
    return results


def _radial_eigen_residual(dim: BallDim, h: float) -> float:
    """max |u'' + (n-1)u'/r + lambda_1 u| over r in [0.1, 0.9] by central differences."""
    lam = norms.lambda1(dim)
    r = np.linspace(0.1, 0.9, 9)
    u = potential.eigenfunction_phi1
    left, mid, right = u(dim, r - h), u(dim, r), u(dim, r + h)
    second = (right - 2.0 * mid + left) / (h * h)
    first = (right - left) / (2.0 * h)
    return float(np.max(np.abs(second + (dim.n - 1) * first / r + lam * mid)))


# potential ---------------------------------------------------------------------------------


def check_potential(seed: int, samples: int) -> list[PropertyResult]:
    suite = Suite.POTENTIAL
    exact = QuadratureSpec.from_settings(seed=seed)
    mc = QuadratureSpec.from_settings(method="monte_carlo", mc_samples=samples, seed=seed)
    tol_mc = get_settings().tol_mc
    results = []

    for n in (3, 4, 5):
        dim = BallDim(n)
        one = potential.SourceField.builtin("const_one", dim)
        for t in (0.0, 0.3, 0.6, 0.9):
            x = Point.axis(n, t)
            expected = (1.0 - t * t) / (2 * n)
            row_samples = samples * (BOUNDARY_SAMPLE_FACTOR if t >= BOUNDARY_RADIUS else 1)
            row_mc = mc.model_copy(update={"mc_samples": row_samples})
            estimate = potential.apply_green(dim, one, x, row_mc)
            results.append(
                _within_sigma(
                    suite, f"const_one_mc_t{t:g}", expected, estimate.value, estimate.std_error,
                    tol_mc, n, row_samples,
                )
            )
            value = potential.apply_green(dim, one, x, exact).value
            results.append(
                _result(suite, f"const_one_t{t:g}", expected, value, 1e-10, n=n, relative=True)
            )

    dim3 = BallDim(3)
    coord = potential.SourceField.builtin("coord_1", dim3)
    value = potential.apply_green(dim3, coord, Point.axis(3, 0.5), exact).value
    results.append(_result(suite, "coord_1_axis", 0.0375, value, 1e-10, n=3, relative=True))

    rng = np.random.default_rng(seed)
    for n in (3, 4):
        dim = BallDim(n)
        phi = potential.SourceField.builtin("phi1", dim)
        misses = 0
        for index in range(10):
            x = Point(_random_interior(rng, n, radius=0.9))
            point_mc = mc.model_copy(update={"seed": seed + index})
            estimate = potential.apply_green(dim, phi, x, point_mc)
            if abs(estimate.value - phi.exact(x.coords)) > 3.0 * estimate.std_error + 1e-12:
                misses += 1
        results.append(_flag(suite, "eigen_relation_mc", misses == 0, float(misses), n))

        decay = [
            potential.apply_green(dim, phi, Point.axis(n, t), exact).value
            for t in (0.9, 0.99, 0.999)
        ]
        results.append(
            _flag(suite, "boundary_vanishing", decay[0] > decay[1] > decay[2] >= 0, decay[-1], n)
        )
        lowest = min(
            potential.apply_green(dim, phi, Point.axis(n, t), exact).value
            for t in np.linspace(0.0, 0.95, 12)
        )
        results.append(_flag(suite, "positivity", lowest >= 0, lowest, n))

    x = Point.axis(3, 0.3)
    for name in ("const_one", "coord_1"):
        source = potential.SourceField.builtin(name, dim3)
        residual = potential.laplacian_residual(dim3, source, x, 1e-2, exact, closed_form=True)
        results.append(_result(suite, f"residual_closed_{name}", 0.0, residual, 1e-8, n=3))
    residual = potential.laplacian_residual(dim3, coord, x, 1e-2, exact)
    results.append(_result(suite, "residual_coord_1", 0.0, residual, 1e-6, n=3))
    for n in (3, 4, 5):
        dim = BallDim(n)
        phi = potential.SourceField.builtin("phi1", dim)
        xn = Point.axis(n, 0.3)
        coarse = potential.laplacian_residual(dim, phi, xn, 2e-2, exact)
        fine = potential.laplacian_residual(dim, phi, xn, 1e-2, exact)
        ratio = _trend(coarse, fine)
        results.append(_flag(suite, "residual_phi1_trend", 2.5 <= ratio <= 6.0, ratio, n))

    one = potential.SourceField.builtin("const_one", dim3)
    mixed = one.combine(2.0, coord, -3.0)
    xm = Point.of(0.2, -0.1, 0.3)
    combined = potential.apply_green(dim3, mixed, xm, mc).value
    parts = 2.0 * potential.apply_green(dim3, one, xm, mc).value - 3.0 * potential.apply_green(
        dim3, coord, xm, mc
    ).value
    results.append(_result(suite, "linearity_shared_stream", parts, combined, 1e-12, n=3))

    grid = [Point.axis(3, t) for t in (0.0, 0.25, 0.5, 0.75)]
    solved = potential.solve_on_grid(dim3, one, grid, exact)
    worst = max(abs(s.value + (1.0 - s.point.norm**2) / 6.0) for s in solved)
    results.append(_result(suite, "solve_sign_convention", 0.0, worst, 1e-10, n=3))
    return results


def run_suite(suite: Suite, seed: int, samples: int, t_grid: int) -> list[PropertyResult]:
    """Run one battery (or all of them in module order)."""
    batteries: dict[Suite, Callable[[], list[PropertyResult]]] = {
        Suite.SPECFUN: lambda: check_specfun(seed),
        Suite.GEOMETRY: lambda: check_geometry(seed),
        Suite.QUADRATURE: lambda: check_quadrature(seed, samples),
        Suite.NORMS: lambda: check_norms(seed, t_grid, samples),
        Suite.POTENTIAL: lambda: check_potential(seed, samples),
    }
    chosen = list(batteries) if suite == Suite.ALL else [suite]
    results = []
    for name in chosen:
        with logfire.span(f"[verify] {name.value}", seed=seed):
            batch = batteries[name]()
        failed = [r.name for r in batch if not r.passed]
        if failed:
            logfire.warn(f"[verify] {name.value}: {len(failed)} properties failed", failed=failed)
        else:
            logfire.info(f"[verify] {name.value}: {len(batch)} properties passed")
        results += batch
    return results

