"""Geometry of the unit ball: points, the bracket [x,y], Moebius maps, Green and Poisson kernels.

Every kernel has an array form (``*_many``) working on stacks of points of shape (N, n);
the Point-based functions are thin scalar wrappers over them.
"""

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ballgreen.errors import DomainError, SingularityError
from ballgreen.specfun import ln_gamma

BOUNDARY_TOL = 1e-14


def sphere_measure(d: int) -> float:
    """Surface measure of the unit sphere S^(d-1) in R^d: 2 pi^(d/2) / Gamma(d/2)."""
    return 2.0 * math.exp(0.5 * d * math.log(math.pi) - ln_gamma(0.5 * d))


@dataclass(frozen=True)
class BallDim:
    """Dimension n >= 3 of the ball with its geometric constants."""

    n: int

    def __post_init__(self):
        if self.n < 3:
            raise DomainError(f"dimension must be at least 3, got {self.n}")

    @cached_property
    def omega(self) -> float:
        """omega_(n-1), the measure of S^(n-1)."""
        return sphere_measure(self.n)

    @cached_property
    def omega_sub(self) -> float:
        """omega_(n-2), the measure of S^(n-2); the zonal reduction constant."""
        return sphere_measure(self.n - 1)

    @cached_property
    def c_n(self) -> float:
        return 1.0 / ((self.n - 2) * self.omega)

    @cached_property
    def volume(self) -> float:
        return self.omega / self.n


@dataclass(frozen=True, eq=False)
class Point:
    """A point of R^n with its cached Euclidean norm."""

    coords: np.ndarray

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=float)
        if coords.ndim != 1:
            raise DomainError(f"a point needs a 1-d coordinate vector, got shape {coords.shape}")
        coords.setflags(write=False)
        object.__setattr__(self, "coords", coords)

    @classmethod
    def of(cls, *coords: float) -> "Point":
        return cls(np.array(coords, dtype=float))

    @classmethod
    def axis(cls, n: int, scale: float = 1.0, index: int = 0) -> "Point":
        """scale * e_(index+1) in R^n."""
        coords = np.zeros(n)
        coords[index] = scale
        return cls(coords)

    @classmethod
    def origin(cls, n: int) -> "Point":
        return cls(np.zeros(n))

    @cached_property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coords))

    @property
    def dim(self) -> int:
        return self.coords.shape[0]

    @property
    def is_interior(self) -> bool:
        return self.norm < 1.0 and not self.is_boundary

    @property
    def is_boundary(self) -> bool:
        return abs(self.norm - 1.0) <= BOUNDARY_TOL

    def __neg__(self) -> "Point":
        return Point(-self.coords)

    def __repr__(self) -> str:
        return f"Point({np.array2string(self.coords, precision=6)})"


def _as_stack(points) -> np.ndarray:
    return np.atleast_2d(np.asarray(points, dtype=float))


def bracket_sq_many(x: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """[x, y]^2 = |x|^2 |y|^2 - 2<x, y> + 1 for every row y of ys; x may be a stack too."""
    xs = _as_stack(x)
    ys = _as_stack(ys)
    x2 = np.einsum("ij,ij->i", xs, xs)
    y2 = np.einsum("ij,ij->i", ys, ys)
    xy = np.einsum("ij,ij->i", xs, ys) if xs.shape[0] == ys.shape[0] else ys @ xs[0]
    return np.maximum(x2 * y2 - 2.0 * xy + 1.0, 0.0)


def bracket(x: Point, y: Point) -> float:
    """[x, y] = | x|y| - y/|y| |, symmetric, equal to 1 when either point is the origin."""
    if x.norm == 0.0 and y.norm == 0.0:
        raise DomainError("[x, y] is undefined when both points are the origin")
    return float(np.sqrt(bracket_sq_many(x.coords, y.coords)[0]))


def mobius_many(x: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """T_x y = [(1-|x|^2)(y-x) - |y-x|^2 x] / [x,y]^2 for each row y."""
    x = np.asarray(x, dtype=float)
    ys = _as_stack(ys)
    diff = ys - x
    numerator = (1.0 - x @ x) * diff - np.einsum("ij,ij->i", diff, diff)[:, None] * x
    return numerator / bracket_sq_many(x, ys)[:, None]


def mobius(x: Point, y: Point) -> Point:
    """The ball automorphism T_x sending x to the origin."""
    if not x.norm < 1.0:
        raise DomainError(f"Moebius centre must be interior, |x| = {x.norm}")
    if y.norm > 1.0 + BOUNDARY_TOL:
        raise DomainError(f"Moebius argument must lie in the closed ball, |y| = {y.norm}")
    return Point(mobius_many(x.coords, y.coords)[0])


def mobius_jacobian_factor(dim: BallDim, x: Point, z: Point) -> float:
    """Volume factor dy/dz = ((1-|x|^2)/[z,-x]^2)^n of y = T_(-x) z."""
    if not (x.norm < 1.0 and z.norm < 1.0):
        raise DomainError("Jacobian factor needs interior x and z")
    b2 = bracket_sq_many(z.coords, -x.coords)[0]
    return float(((1.0 - x.norm**2) / b2) ** dim.n)


def green_many(dim: BallDim, x: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """G(x, y) = c_n (|x-y|^(2-n) - [x,y]^(2-n)) for each row y; inf where y == x."""
    x = np.asarray(x, dtype=float)
    ys = _as_stack(ys)
    diff = ys - x
    d2 = np.einsum("ij,ij->i", diff, diff)
    b2 = bracket_sq_many(x, ys)
    power = 0.5 * (2 - dim.n)
    with np.errstate(divide="ignore"):
        values = dim.c_n * (d2**power - b2**power)
    return np.where(d2 > 0, np.maximum(values, 0.0), np.inf)


def green(dim: BallDim, x: Point, y: Point) -> float:
    """Green function of the unit ball for the Laplacian; nonnegative and symmetric."""
    if np.array_equal(x.coords, y.coords):
        raise SingularityError("G(x, y) is singular at x = y")
    return float(green_many(dim, x.coords, y.coords)[0])


def poisson_kernel_many(dim: BallDim, xs: np.ndarray, eta: np.ndarray) -> np.ndarray:
    """P(x, eta) = (1-|x|^2)/|x-eta|^n for each row x."""
    xs = _as_stack(xs)
    diff = xs - np.asarray(eta, dtype=float)
    d2 = np.einsum("ij,ij->i", diff, diff)
    return (1.0 - np.einsum("ij,ij->i", xs, xs)) / d2 ** (0.5 * dim.n)


def poisson_kernel(dim: BallDim, x: Point, eta: Point) -> float:
    """Poisson kernel of the unit ball; strictly positive for interior x."""
    if not eta.is_boundary:
        raise DomainError(f"eta must lie on the unit sphere, |eta| = {eta.norm}")
    if not x.norm < 1.0:
        raise DomainError(f"x must be interior, |x| = {x.norm}")
    return float(poisson_kernel_many(dim, x.coords, eta.coords)[0])
