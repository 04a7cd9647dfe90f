"""Green potential G[g](x) = ∫ G(x, y) g(y) dy and the Dirichlet problem it solves.

u = -G[g] solves Δu = g in B^n with u = 0 on the sphere; G[g] itself is positive for
positive g, so G[phi_1] = +phi_1/lambda_1.

Sources that are finite sums f(|y|) Y(y/|y|) with Y a spherical harmonic of degree l
are integrated exactly in one radial variable with the kernel

    K_l(t, rho) = rho^(n-1) min(t, rho)^l (max(t, rho)^(-(l+n-2)) - max(t, rho)^l) / (2l+n-2);

anything else goes through Monte Carlo centered at x.
"""

import math
from collections.abc import Callable
from dataclasses import dataclass
from enum import StrEnum

import logfire
import numpy as np

from ballgreen.errors import DomainError
from ballgreen.geometry import BallDim, Point, green_many
from ballgreen.models import QuadratureMethod, QuadratureSpec
from ballgreen.quadrature import integrate_interval, monte_carlo_ball_centered
from ballgreen.specfun import bessel_j_reduced
from ballgreen.workers import parallel_map

RadialFn = Callable[[np.ndarray], np.ndarray]
PointsFn = Callable[[np.ndarray], np.ndarray]

MIN_STEP = 1e-3
MAX_STEP = 5e-2


class SourceKind(StrEnum):
    CONST_ONE = "const_one"
    COORD_1 = "coord_1"
    PHI1 = "phi1"
    CUSTOM = "custom"


def _ones(u: np.ndarray) -> np.ndarray:
    return np.ones(u.shape[0])


def _first_coord(u: np.ndarray) -> np.ndarray:
    return u[:, 0]


@dataclass(frozen=True)
class HarmonicTerm:
    """coefficient * profile(|y|) * harmonic(y/|y|), harmonic of the given degree."""

    degree: int
    profile: RadialFn
    harmonic: PointsFn = _ones
    coefficient: float = 1.0

    def scaled(self, factor: float) -> "HarmonicTerm":
        return HarmonicTerm(self.degree, self.profile, self.harmonic, self.coefficient * factor)


@dataclass(frozen=True, eq=False)
class SourceField:
    """Right-hand side g of the Poisson problem.

    ``values`` evaluates g on an (N, n) stack of points. ``terms`` is the harmonic
    decomposition when one is known, ``exact`` the closed-form potential G[g] when one is
    known.
    """

    kind: SourceKind
    values: PointsFn
    terms: tuple[HarmonicTerm, ...] = ()
    exact: Callable[[np.ndarray], float] | None = None

    def eval(self, point: Point) -> float:
        return float(self.values(point.coords[None, :])[0])

    __call__ = eval

    @property
    def radial(self) -> RadialFn | None:
        """g as a function of |y| when every term has degree 0, else None."""
        if not self.terms or any(term.degree for term in self.terms):
            return None
        terms = self.terms

        def profile(r: np.ndarray) -> np.ndarray:
            r = np.asarray(r, dtype=float)
            return sum(term.coefficient * term.profile(r) for term in terms)

        return profile

    @classmethod
    def builtin(cls, name: str | SourceKind, dim: BallDim) -> "SourceField":
        kind = SourceKind(name)
        n = dim.n
        if kind == SourceKind.CONST_ONE:
            return cls(
                kind=kind,
                values=_ones,
                terms=(HarmonicTerm(0, np.ones_like),),
                exact=lambda x: (1.0 - x @ x) / (2 * n),
            )
        if kind == SourceKind.COORD_1:
            return cls(
                kind=kind,
                values=_first_coord,
                terms=(HarmonicTerm(1, lambda r: np.asarray(r, dtype=float), _first_coord),),
                exact=lambda x: (1.0 - x @ x) * x[0] / (2 * n + 4),
            )
        if kind == SourceKind.PHI1:
            lam = _lambda1(dim)

            def profile(r: np.ndarray) -> np.ndarray:
                return eigenfunction_phi1(dim, np.asarray(r, dtype=float))

            return cls(
                kind=kind,
                values=lambda ys: profile(np.minimum(np.linalg.norm(ys, axis=1), 1.0)),
                terms=(HarmonicTerm(0, profile),),
                exact=lambda x: float(profile(np.linalg.norm(x))) / lam,
            )
        raise DomainError(f"{kind} is not a built-in source; use SourceField.custom")

    @classmethod
    def custom(cls, values: PointsFn) -> "SourceField":
        return cls(kind=SourceKind.CUSTOM, values=values)

    def combine(self, alpha: float, other: "SourceField", beta: float) -> "SourceField":
        """The source alpha * self + beta * other."""
        first, second = self.values, other.values
        terms: tuple[HarmonicTerm, ...] = ()
        if self.terms and other.terms:
            terms = tuple(t.scaled(alpha) for t in self.terms) + tuple(
                t.scaled(beta) for t in other.terms
            )
        exact = None
        if self.exact is not None and other.exact is not None:
            e1, e2 = self.exact, other.exact

            def exact(x: np.ndarray) -> float:
                return alpha * e1(x) + beta * e2(x)

        return SourceField(
            kind=SourceKind.CUSTOM,
            values=lambda ys: alpha * first(ys) + beta * second(ys),
            terms=terms,
            exact=exact,
        )


@dataclass(frozen=True)
class FieldSample:
    point: Point
    value: float
    std_error: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise DomainError(f"field value at {self.point} is not finite")
        if not self.std_error >= 0:
            raise DomainError(f"std_error must be nonnegative, got {self.std_error}")


def _lambda1(dim: BallDim) -> float:
    from ballgreen.norms import lambda1

    return lambda1(dim)


def eigenfunction_phi1(dim: BallDim, r: np.ndarray | float) -> np.ndarray | float:
    """phi_1(r) = r^(1-n/2) J_(n/2-1)(sqrt(lambda_1) r), unnormalized, with phi_1(1) = 0."""
    scalar = np.ndim(r) == 0
    r = np.asarray(r, dtype=float)
    if np.any((r < 0) | (r > 1)):
        raise DomainError("phi_1 is defined for 0 <= r <= 1")
    values = bessel_j_reduced(0.5 * dim.n - 1.0, math.sqrt(_lambda1(dim)), r)
    values = np.where(r == 1.0, 0.0, values)
    return float(values) if scalar else values


def radial_green_potential(
    dim: BallDim,
    profile: RadialFn,
    t: float,
    spec: QuadratureSpec | None = None,
    degree: int = 0,
) -> float:
    """u(t) with G[f(|y|) Y(y/|y|)](x) = u(|x|) Y(x/|x|) for Y of the given degree.

    For degree 0 this is the potential of a radial source,
    (1/(n-2)) ∫_0^1 f(rho) rho^(n-1) (max(t, rho)^(2-n) - 1) drho.
    """
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"radius must lie in [0, 1], got {t}")
    if degree < 0:
        raise DomainError(f"harmonic degree must be nonnegative, got {degree}")
    spec = spec or QuadratureSpec.from_settings()
    n, k = dim.n, spec.nodes_radial
    outer_power = -(degree + n - 2)

    inner = 0.0
    if t > 0.0:
        inner = integrate_interval(lambda r: r ** (n - 1 + degree) * profile(r), 0.0, t, k)
        inner *= t**outer_power - t**degree
    elif degree > 0:
        return 0.0

    outer = 0.0
    if t < 1.0:
        outer = t**degree * integrate_interval(
            lambda r: r ** (n - 1) * (r**outer_power - r**degree) * profile(r), t, 1.0, k
        )
    return (inner + outer) / (2 * degree + n - 2)


def _check_interior(dim: BallDim, x: Point) -> None:
    if x.dim != dim.n:
        raise DomainError(f"point has dimension {x.dim}, expected {dim.n}")
    if not x.norm < 1.0:
        raise DomainError(f"x must be interior, |x| = {x.norm}")


def _monte_carlo_green(
    dim: BallDim, g: SourceField, x: Point, spec: QuadratureSpec
) -> FieldSample:
    def f(ys: np.ndarray) -> np.ndarray:
        return green_many(dim, x.coords, ys) * g.values(ys)

    estimate = monte_carlo_ball_centered(dim, f, x.coords, order=dim.n - 2, spec=spec)
    return FieldSample(point=x, value=estimate.value, std_error=estimate.std_error)


def apply_green(
    dim: BallDim, g: SourceField, x: Point, spec: QuadratureSpec | None = None
) -> FieldSample:
    """G[g](x) = ∫ G(x, y) g(y) dy; the solution of Δu = g, u|_S = 0 is u = -G[g].

    Monte Carlo when spec.method asks for it; otherwise the radial reduction for sources
    with a harmonic decomposition, falling back to Monte Carlo for the rest.
    """
    spec = spec or QuadratureSpec.from_settings()
    _check_interior(dim, x)

    if spec.method == QuadratureMethod.MONTE_CARLO:
        return _monte_carlo_green(dim, g, x, spec)

    if not g.terms:
        logfire.info(
            f"[potential] no harmonic decomposition for {g.kind}; using Monte Carlo",
            n=dim.n,
        )
        fallback = QuadratureSpec(
            **{
                **spec.model_dump(),
                "method": QuadratureMethod.MONTE_CARLO,
                "mc_samples": max(spec.mc_samples, 1000),
            }
        )
        return _monte_carlo_green(dim, g, x, fallback)

    t = x.norm
    direction = x.coords / t if t > 0 else np.zeros(dim.n)
    value = 0.0
    for term in g.terms:
        if term.degree > 0 and t == 0.0:
            continue
        harmonic = float(term.harmonic(direction[None, :])[0]) if t > 0 else 1.0
        radial = radial_green_potential(dim, term.profile, t, spec, degree=term.degree)
        value += term.coefficient * harmonic * radial
    return FieldSample(point=x, value=value, std_error=0.0)


def laplacian_residual(
    dim: BallDim,
    g: SourceField,
    x: Point,
    h: float,
    spec: QuadratureSpec | None = None,
    closed_form: bool = False,
) -> float:
    """Δ_h G[g](x) + g(x) with the (2n+1)-point central-difference Laplacian.

    With closed_form=True the stencil is applied to the source's exact potential.
    """
    if not MIN_STEP <= h <= MAX_STEP:
        raise DomainError(f"step h must lie in [{MIN_STEP}, {MAX_STEP}], got {h}")
    _check_interior(dim, x)
    if not x.norm + 2.0 * h < 1.0:
        raise DomainError(f"stencil of step {h} around |x| = {x.norm} leaves the ball")
    spec = spec or QuadratureSpec.from_settings()

    shifts = h * np.eye(dim.n)
    stencil = [x.coords] + [x.coords + e for e in shifts] + [x.coords - e for e in shifts]
    if closed_form:
        if g.exact is None:
            raise DomainError(f"{g.kind} has no closed-form potential")
        values = [g.exact(np.asarray(p)) for p in stencil]
    else:
        samples = parallel_map(lambda p: apply_green(dim, g, Point(p), spec), stencil)
        values = [s.value for s in samples]

    center = values[0]
    laplacian = (sum(values[1:]) - 2 * dim.n * center) / (h * h)
    return float(laplacian + g.eval(x))


def _point_seed(seed: int, index: int) -> int:
    state = np.random.SeedSequence([seed, index]).generate_state(1, dtype=np.uint64)
    return int(state[0])


def solve_on_grid(
    dim: BallDim, g: SourceField, points: list[Point], spec: QuadratureSpec | None = None
) -> list[FieldSample]:
    """u = -G[g] at each point; point i draws from the stream (seed, i)."""
    spec = spec or QuadratureSpec.from_settings()
    for x in points:
        _check_interior(dim, x)
    if not points:
        return []

    def solve(item: tuple[int, Point]) -> FieldSample:
        index, x = item
        point_spec = spec.model_copy(update={"seed": _point_seed(spec.seed, index)})
        sample = apply_green(dim, g, x, point_spec)
        return FieldSample(point=x, value=-sample.value, std_error=sample.std_error)

    with logfire.span(
        "[potential] solve on grid", n=dim.n, source=g.kind.value, points=len(points)
    ):
        return parallel_map(solve, list(enumerate(points)))
