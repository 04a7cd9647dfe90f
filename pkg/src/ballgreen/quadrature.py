"""Deterministic and Monte-Carlo integration on [0,1], the sphere and the ball.

Deterministic rules are Gauss-Legendre on geometrically graded panels. Sphere and ball
integrals of zonal functions are reduced with s = cos(theta), so the weight
(1-s^2)^((n-3)/2) ds becomes sin(theta)^(n-2) dtheta and stays smooth for every n.
"""

import math
from collections.abc import Callable
from dataclasses import dataclass
from functools import lru_cache

import logfire
import numpy as np

from ballgreen.config import get_settings
from ballgreen.errors import ConvergenceError, DomainError
from ballgreen.geometry import BallDim
from ballgreen.models import QuadratureSpec

GRADING_RATIO = 0.15
REFINEMENT_RTOL = 1e-9
MAX_RESAMPLE_ROUNDS = 100

ArrayFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class IntegralEstimate:
    """Value of an integral with its error estimate.

    std_error is the Monte-Carlo standard error, or for deterministic rules the gap to a
    coarser rule when that gap exceeds the refinement tolerance (0 otherwise).
    """

    value: float
    std_error: float
    nodes_or_samples: int

    def __post_init__(self):
        if not self.std_error >= 0:
            raise DomainError(f"std_error must be nonnegative, got {self.std_error}")


@lru_cache(maxsize=64)
def _legendre_unit(k: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(k)
    nodes, weights = 0.5 * (x + 1.0), 0.5 * w
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_legendre_rule(k: int) -> tuple[np.ndarray, np.ndarray]:
    """k-point Gauss-Legendre nodes and weights on [0, 1]; exact to degree 2k-1."""
    if k < 2:
        raise DomainError(f"Gauss-Legendre rule needs k >= 2, got {k}")
    nodes, weights = _legendre_unit(k)
    return nodes.copy(), weights.copy()


def graded_breaks(
    lo: float,
    hi: float,
    levels: int,
    grade_lo: bool = False,
    grade_hi: bool = False,
    focus: float | None = None,
) -> np.ndarray:
    """Panel breakpoints on [lo, hi], geometrically refined toward the requested spots.

    Panels shrink by GRADING_RATIO per level toward graded ends and toward an interior
    focus point (which becomes a breakpoint itself).
    """
    if focus is not None and lo < focus < hi:
        left = graded_breaks(lo, focus, levels, grade_lo=grade_lo, grade_hi=True)
        right = graded_breaks(focus, hi, levels, grade_lo=True, grade_hi=grade_hi)
        return np.concatenate([left, right[1:]])
    if grade_lo and grade_hi:
        mid = 0.5 * (lo + hi)
        left = graded_breaks(lo, mid, levels, grade_lo=True)
        right = graded_breaks(mid, hi, levels, grade_hi=True)
        return np.concatenate([left, right[1:]])

    length = hi - lo
    offsets = GRADING_RATIO ** np.arange(1, levels + 1)
    if grade_hi:
        inner = hi - length * offsets
    elif grade_lo:
        inner = lo + length * offsets[::-1]
    else:
        inner = np.linspace(lo, hi, levels + 1)[1:-1]
    return np.concatenate([[lo], inner, [hi]])


def panel_rule(breaks: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite k-point Gauss-Legendre rule over consecutive panels."""
    unit_nodes, unit_weights = _legendre_unit(k)
    lo, hi = breaks[:-1, None], breaks[1:, None]
    nodes = lo + (hi - lo) * unit_nodes
    weights = (hi - lo) * unit_weights
    return nodes.ravel(), weights.ravel()


def integrate_interval(
    f: ArrayFn,
    lo: float,
    hi: float,
    k: int,
    levels: int = 0,
    grade_lo: bool = False,
    grade_hi: bool = False,
    focus: float | None = None,
) -> float:
    """∫_lo^hi f on graded panels; f is evaluated on a node array."""
    breaks = graded_breaks(lo, hi, levels, grade_lo=grade_lo, grade_hi=grade_hi, focus=focus)
    nodes, weights = panel_rule(breaks, k)
    return float(weights @ f(nodes))


def _coarse(k: int) -> int:
    return max(2, k // 2)


def _settle(fine: float, coarse: float, count: int, what: str) -> IntegralEstimate:
    gap = abs(fine - coarse)
    if math.isnan(gap):
        gap = math.inf
    elif gap <= REFINEMENT_RTOL * abs(fine) or gap == 0.0:
        return IntegralEstimate(value=fine, std_error=0.0, nodes_or_samples=count)
    logfire.warn(
        f"[quadrature] {what}: panel refinement not converged",
        value=fine,
        gap=gap,
        nodes=count,
    )
    return IntegralEstimate(value=fine, std_error=gap, nodes_or_samples=count)


def sphere_zonal_angles(
    dim: BallDim, spec: QuadratureSpec, k: int | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Polar angles theta in (0, pi) and weights omega_(n-2) sin^(n-2)(theta) dtheta."""
    k = k or spec.nodes_angular
    breaks = graded_breaks(0.0, math.pi, spec.subdivisions, grade_lo=True, grade_hi=True)
    theta, w = panel_rule(breaks, k)
    return theta, dim.omega_sub * w * np.sin(theta) ** (dim.n - 2)


def sphere_zonal_rule(
    dim: BallDim, spec: QuadratureSpec, k: int | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Nodes s = cos(theta) and the weights of sphere_zonal_angles.

    The graded panels put several nodes at s == 1.0 in floating point; integrands that
    need 1 - s should take the angles instead.
    """
    theta, w = sphere_zonal_angles(dim, spec, k)
    return np.cos(theta), w


def half_angle_gaps(theta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(1 - cos theta, 1 + cos theta) without cancellation at either pole."""
    return 2.0 * np.sin(0.5 * theta) ** 2, 2.0 * np.cos(0.5 * theta) ** 2


def sphere_zonal_integral(
    dim: BallDim, g: ArrayFn, spec: QuadratureSpec | None = None
) -> IntegralEstimate:
    """∫_(S^(n-1)) g(xi_1) dxi = omega_(n-2) ∫_(-1)^1 g(s)(1-s^2)^((n-3)/2) ds.

    g is evaluated on arrays of s = cos(theta).
    """
    spec = spec or QuadratureSpec.from_settings()
    k = spec.nodes_angular

    s, w = sphere_zonal_rule(dim, spec, k)
    fine = float(w @ g(s))
    s_c, w_c = sphere_zonal_rule(dim, spec, _coarse(k))
    coarse = float(w_c @ g(s_c))
    return _settle(fine, coarse, s.size, "sphere_zonal_integral")


def _ball_tensor(
    dim: BallDim,
    h: Callable[[np.ndarray, np.ndarray], np.ndarray],
    spec: QuadratureSpec,
    k_r: int,
    k_s: int,
    focus_r: float | None,
    polar: bool,
) -> tuple[float, int]:
    r_breaks = graded_breaks(
        0.0, 1.0, spec.subdivisions, grade_lo=True, grade_hi=True, focus=focus_r
    )
    r, w_r = panel_rule(r_breaks, k_r)
    theta, w_s = sphere_zonal_angles(dim, spec, k_s)
    angular = theta if polar else np.cos(theta)
    values = h(r[:, None], angular[None, :])
    radial = w_r * r ** (dim.n - 1)
    return float(radial @ values @ w_s), r.size * theta.size


def ball_zonal_integral(
    dim: BallDim,
    h: Callable[[np.ndarray, np.ndarray], np.ndarray],
    spec: QuadratureSpec | None = None,
    focus_r: float | None = None,
    polar: bool = False,
) -> IntegralEstimate:
    """∫_(B^n) h(|y|, cos angle(y, e_1)) dy by tensor Gauss-Legendre in (r, theta).

    Panels are graded toward r = 0, r = 1, s = +-1 and, when given, toward the radius
    focus_r where h concentrates (a point singularity at focus_r * e_1).
    h receives broadcastable arrays r of shape (Nr, 1) and s of shape (1, Ns); with
    polar=True it receives the angle theta in place of s = cos(theta).
    """
    spec = spec or QuadratureSpec.from_settings()
    fine, count = _ball_tensor(
        dim, h, spec, spec.nodes_radial, spec.nodes_angular, focus_r, polar
    )
    coarse, _ = _ball_tensor(
        dim, h, spec, _coarse(spec.nodes_radial), _coarse(spec.nodes_angular), focus_r, polar
    )
    return _settle(fine, coarse, count, "ball_zonal_integral")


def uniform_ball_points(dim: BallDim, count: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform points in B^n: normalized Gaussian direction times radius u^(1/n)."""
    directions = rng.standard_normal((count, dim.n))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    radii = rng.random(count) ** (1.0 / dim.n)
    return directions * radii[:, None]


def _block_sizes(total: int) -> list[int]:
    size = get_settings().block_size
    sizes = [size] * (total // size)
    if total % size:
        sizes.append(total % size)
    return sizes


def _sample_block(
    draw: Callable[[np.random.Generator, int], np.ndarray],
    count: int,
    rng: np.random.Generator,
) -> tuple[int, float, float]:
    """Draw count finite weights; returns (count, mean, sum of squared deviations)."""
    values = draw(rng, count)
    for _ in range(MAX_RESAMPLE_ROUNDS):
        bad = ~np.isfinite(values)
        if not bad.any():
            break
        values[bad] = draw(rng, int(bad.sum()))
    else:
        raise ConvergenceError("Monte-Carlo resampling kept hitting non-finite integrand values")
    mean = float(np.mean(values))
    return count, mean, float(np.sum((values - mean) ** 2))


def _monte_carlo(
    draw: Callable[[np.random.Generator, int], np.ndarray], spec: QuadratureSpec
) -> IntegralEstimate:
    sizes = _block_sizes(spec.mc_samples)
    streams = np.random.SeedSequence(spec.seed).spawn(len(sizes))

    # Chan's pairwise merge in block order keeps the reduction deterministic
    count, mean, m2 = 0, 0.0, 0.0
    for size, stream in zip(sizes, streams, strict=True):
        b_count, b_mean, b_m2 = _sample_block(draw, size, np.random.default_rng(stream))
        total = count + b_count
        delta = b_mean - mean
        mean += delta * b_count / total
        m2 += b_m2 + delta * delta * count * b_count / total
        count = total

    variance = m2 / (count - 1) if count > 1 else 0.0
    return IntegralEstimate(
        value=mean, std_error=math.sqrt(variance / count), nodes_or_samples=count
    )


def monte_carlo_ball(
    dim: BallDim, f: ArrayFn, spec: QuadratureSpec | None = None
) -> IntegralEstimate:
    """Volume-weighted mean of f over uniform samples in B^n, with its standard error.

    f maps an (N, n) array of points to N values; non-finite values (exact hits of an
    integrable point singularity) are resampled.
    """
    spec = spec or QuadratureSpec.from_settings(method="monte_carlo")

    def draw(rng: np.random.Generator, count: int) -> np.ndarray:
        return dim.volume * np.asarray(f(uniform_ball_points(dim, count, rng)), dtype=float)

    return _monte_carlo(draw, spec)


def monte_carlo_ball_centered(
    dim: BallDim,
    f: ArrayFn,
    center: np.ndarray,
    order: float,
    spec: QuadratureSpec | None = None,
) -> IntegralEstimate:
    """Monte Carlo over B^n in polar coordinates around an interior center.

    Suited to integrands with a point singularity |y - center|^(-order), order < n.
    Directions are uniform on the sphere and the distance rho in [0, rho_max] has
    density proportional to rho^(gamma-1), gamma = n - order, so every sample weight
    stays bounded near the center.
    """
    spec = spec or QuadratureSpec.from_settings(method="monte_carlo")
    center = np.asarray(center, dtype=float)
    gamma = dim.n - order
    if not gamma > 0:
        raise DomainError(f"singularity order {order} is not integrable in dimension {dim.n}")
    slack = 1.0 - center @ center
    if not slack > 0:
        raise DomainError("the sampling center must be interior")

    def draw(rng: np.random.Generator, count: int) -> np.ndarray:
        directions = rng.standard_normal((count, dim.n))
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
        proj = directions @ center
        rho_max = -proj + np.sqrt(proj * proj + slack)
        rho = rho_max * rng.random(count) ** (1.0 / gamma)
        points = center + rho[:, None] * directions
        values = np.asarray(f(points), dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            weights = dim.omega * values * rho ** (dim.n - gamma) * rho_max**gamma / gamma
        return np.where(rho > 0, weights, np.nan)

    return _monte_carlo(draw, spec)
