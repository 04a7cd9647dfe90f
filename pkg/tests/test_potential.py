"""Tests for the Green potential and the Dirichlet solver."""

import math
from unittest.mock import patch

import numpy as np
import pytest

from ballgreen.errors import DomainError
from ballgreen.geometry import BallDim, Point
from ballgreen.models import QuadratureSpec
from ballgreen.norms import lambda1
from ballgreen.potential import (
    FieldSample,
    SourceField,
    SourceKind,
    apply_green,
    eigenfunction_phi1,
    laplacian_residual,
    radial_green_potential,
    solve_on_grid,
)


@pytest.fixture
def const_one(dim3) -> SourceField:
    return SourceField.builtin("const_one", dim3)


@pytest.fixture
def coord_1(dim3) -> SourceField:
    return SourceField.builtin("coord_1", dim3)


def point(n: int, *coords: float) -> Point:
    values = np.zeros(n)
    values[: len(coords)] = coords
    return Point(values)


class TestApplyGreen:
    def test_constant_source_at_center(self, const_one, dim3):
        """Test G[1](0) = 1/6 in three dimensions."""
        sample = apply_green(dim3, const_one, Point.origin(3))
        assert sample.value == pytest.approx(1 / 6, rel=1e-12)
        assert sample.std_error == 0.0

    def test_constant_source_n4(self):
        """Test G[1](x) = (1 - 0.36)/8 at |x| = 0.6, n = 4."""
        dim = BallDim(4)
        g = SourceField.builtin("const_one", dim)
        assert apply_green(dim, g, Point.axis(4, 0.6)).value == pytest.approx(0.08, rel=1e-12)

    def test_first_coordinate_source(self, coord_1, dim3):
        """Test G[y_1](e1/2) = (1 - 0.25) 0.5 / 10."""
        sample = apply_green(dim3, coord_1, Point.axis(3, 0.5))
        assert sample.value == pytest.approx(0.0375, rel=1e-12)
        assert apply_green(dim3, coord_1, Point.origin(3)).value == 0.0

    @pytest.mark.parametrize("name", ["const_one", "coord_1", "phi1"])
    def test_matches_closed_forms(self, dim, rng, name):
        """Test the radial reduction against each built-in's exact potential."""
        g = SourceField.builtin(name, dim)
        for _ in range(5):
            direction = rng.standard_normal(dim.n)
            x = direction / np.linalg.norm(direction) * rng.uniform(0.0, 0.95)
            value = apply_green(dim, g, Point(x)).value
            assert value == pytest.approx(g.exact(x), rel=1e-9, abs=1e-14)

    def test_monte_carlo(self, const_one, dim3, mc_spec):
        """Test the centered Monte-Carlo estimate within 4 sigma."""
        x = point(3, 0.3, 0.1)
        sample = apply_green(dim3, const_one, x, mc_spec)
        assert sample.std_error > 0
        assert abs(sample.value - const_one.exact(x.coords)) <= 4 * sample.std_error

    def test_custom_source_falls_back_to_monte_carlo(self, dim3):
        """Test that a source without decomposition is integrated by Monte Carlo."""
        g = SourceField.custom(lambda ys: np.ones(len(ys)))
        x = Point.axis(3, 0.4)
        spec = QuadratureSpec(mc_samples=20_000)
        with patch("ballgreen.potential.logfire") as mock_logfire:
            sample = apply_green(dim3, g, x, spec)
        mock_logfire.info.assert_called_once()
        assert abs(sample.value - (1 - 0.16) / 6) <= 4 * sample.std_error

    def test_boundary_decay(self, const_one, dim3):
        """Test that G[1] decreases to 0 toward the sphere."""
        values = [apply_green(dim3, const_one, Point.axis(3, r)).value for r in (0.9, 0.99, 0.999)]
        assert values[0] > values[1] > values[2] > 0
        assert values[2] < 1e-3

    def test_positive_for_positive_source(self, dim, rng):
        """Test G[g] >= 0 for g = phi_1 >= 0."""
        g = SourceField.builtin("phi1", dim)
        for _ in range(10):
            x = rng.uniform(-0.4, 0.4, size=dim.n)
            assert apply_green(dim, g, Point(x)).value >= 0

    def test_exterior_point_rejected(self, const_one, dim3):
        """Test that |x| >= 1 is rejected."""
        with pytest.raises(DomainError):
            apply_green(dim3, const_one, Point.axis(3, 1.0))

    def test_dimension_mismatch(self, const_one, dim3):
        """Test that a point of the wrong dimension is rejected."""
        with pytest.raises(DomainError):
            apply_green(dim3, const_one, Point.origin(4))


class TestLinearity:
    def test_deterministic_route(self, const_one, coord_1, dim3):
        """Test G[2 g1 - 3 g2] = 2 G[g1] - 3 G[g2] on the radial route."""
        combined = const_one.combine(2.0, coord_1, -3.0)
        x = point(3, 0.2, -0.3, 0.4)
        first = apply_green(dim3, const_one, x).value
        second = apply_green(dim3, coord_1, x).value
        expected = 2 * first - 3 * second
        assert apply_green(dim3, combined, x).value == pytest.approx(expected, rel=1e-12)
        assert combined.exact(x.coords) == pytest.approx(expected, rel=1e-12)

    def test_shared_monte_carlo_stream(self, const_one, coord_1, dim3, mc_spec):
        """Test linearity to rounding when both sources see the same samples."""
        combined = const_one.combine(0.5, coord_1, 4.0)
        x = point(3, -0.1, 0.25)
        first = apply_green(dim3, const_one, x, mc_spec).value
        second = apply_green(dim3, coord_1, x, mc_spec).value
        value = apply_green(dim3, combined, x, mc_spec).value
        assert value == pytest.approx(0.5 * first + 4.0 * second, rel=1e-10)

    def test_combination_kind(self, const_one, coord_1):
        """Test that combinations are custom sources evaluating the linear form."""
        combined = const_one.combine(1.0, coord_1, 1.0)
        assert combined.kind == SourceKind.CUSTOM
        assert combined(Point.of(0.5, 0.0, 0.0)) == pytest.approx(1.5)


class TestEigenfunction:
    def test_vanishes_on_sphere(self, dim):
        """Test phi_1(1) = 0."""
        assert eigenfunction_phi1(dim, 1.0) == 0.0

    def test_n3_ratio(self, dim3):
        """Test phi_1(0.5)/phi_1(0.25) against sin(pi r)/r."""
        ratio = eigenfunction_phi1(dim3, 0.5) / eigenfunction_phi1(dim3, 0.25)
        expected = (math.sin(0.5 * math.pi) / 0.5) / (math.sin(0.25 * math.pi) / 0.25)
        assert ratio == pytest.approx(expected, rel=1e-12)
        assert ratio == pytest.approx(0.7071068, abs=1e-7)

    def test_radial_eigen_equation(self, dim):
        """Test u'' + (n-1)/r u' + lambda_1 u = 0 by central differences."""
        lam, h = lambda1(dim), 1e-4
        for r in np.linspace(0.1, 0.9, 9):
            up, mid, down = (eigenfunction_phi1(dim, float(v)) for v in (r + h, r, r - h))
            second = (up - 2 * mid + down) / h**2
            first = (up - down) / (2 * h)
            assert abs(second + (dim.n - 1) / r * first + lam * mid) < 1e-5

    def test_array_input(self, dim3):
        """Test that arrays map to arrays and scalars to floats."""
        values = eigenfunction_phi1(dim3, np.array([0.0, 0.5, 1.0]))
        assert values.shape == (3,)
        assert isinstance(eigenfunction_phi1(dim3, 0.5), float)

    def test_outside_unit_interval(self, dim3):
        """Test that r > 1 is rejected."""
        with pytest.raises(DomainError):
            eigenfunction_phi1(dim3, 1.5)

    def test_eigen_relation_monte_carlo(self, dim3, mc_spec):
        """Test G[phi_1](x) = phi_1(x)/lambda_1 by Monte Carlo within 4 sigma."""
        g = SourceField.builtin("phi1", dim3)
        x = point(3, 0.3, 0.2)
        sample = apply_green(dim3, g, x, mc_spec)
        expected = eigenfunction_phi1(dim3, x.norm) / lambda1(dim3)
        assert abs(sample.value - expected) <= 4 * sample.std_error


class TestRadialPotential:
    def test_degree_zero_formula(self, dim):
        """Test the constant-source potential (1 - t^2)/(2n)."""
        for t in (0.0, 0.3, 0.8, 1.0):
            value = radial_green_potential(dim, np.ones_like, t)
            assert value == pytest.approx((1 - t * t) / (2 * dim.n), abs=1e-14)

    def test_higher_degree_vanishes_at_center(self, dim3):
        """Test that degree > 0 potentials vanish at t = 0."""
        assert radial_green_potential(dim3, np.ones_like, 0.0, degree=2) == 0.0

    def test_radius_range(self, dim3):
        """Test that t outside [0, 1] is rejected."""
        with pytest.raises(DomainError):
            radial_green_potential(dim3, np.ones_like, 1.2)


class TestLaplacianResidual:
    def test_closed_form_quadratic(self, const_one, dim3):
        """Test that the stencil is exact on the quadratic solution."""
        residual = laplacian_residual(dim3, const_one, point(3, 0.2, 0.1), 1e-2, closed_form=True)
        assert abs(residual) < 1e-9

    def test_closed_form_cubic(self, coord_1, dim3):
        """Test that the stencil is exact on the cubic solution."""
        residual = laplacian_residual(dim3, coord_1, point(3, 0.3, -0.2), 2e-2, closed_form=True)
        assert abs(residual) < 1e-9

    def test_numeric_potential(self, coord_1, dim3):
        """Test the residual with potentials computed by the radial route."""
        residual = laplacian_residual(dim3, coord_1, point(3, 0.3, -0.2), 2e-2)
        assert abs(residual) < 1e-6

    def test_second_order_trend(self, dim3):
        """Test that halving h divides the phi_1 residual by about four."""
        g = SourceField.builtin("phi1", dim3)
        x = Point.axis(3, 0.3)
        coarse = laplacian_residual(dim3, g, x, 2e-2)
        fine = laplacian_residual(dim3, g, x, 1e-2)
        assert 3.0 < abs(coarse) / abs(fine) < 5.0

    @pytest.mark.parametrize("h", [1e-4, 0.1])
    def test_step_range(self, const_one, dim3, h):
        """Test that h outside [1e-3, 5e-2] is rejected."""
        with pytest.raises(DomainError):
            laplacian_residual(dim3, const_one, Point.origin(3), h)

    def test_stencil_leaves_ball(self, const_one, dim3):
        """Test that |x| + 2h >= 1 is rejected."""
        with pytest.raises(DomainError):
            laplacian_residual(dim3, const_one, Point.axis(3, 0.95), 5e-2)

    def test_closed_form_required(self, dim3):
        """Test that closed_form needs an exact potential."""
        g = SourceField.custom(lambda ys: ys[:, 0])
        with pytest.raises(DomainError):
            laplacian_residual(dim3, g, Point.origin(3), 1e-2, closed_form=True)


class TestSolveOnGrid:
    def test_radial_line(self, const_one, dim3):
        """Test u = -(1 - |x|^2)/6 along a radius, in input order."""
        radii = np.linspace(0.0, 0.9, 10)
        points = [Point.axis(3, float(r)) for r in radii]
        samples = solve_on_grid(dim3, const_one, points)
        assert [s.point for s in samples] == points
        for sample, r in zip(samples, radii, strict=True):
            assert sample.value == pytest.approx(-(1 - r * r) / 6, abs=1e-14)

    def test_eigen_source(self, dim3):
        """Test u = -phi_1/lambda_1."""
        g = SourceField.builtin("phi1", dim3)
        samples = solve_on_grid(dim3, g, [Point.axis(3, 0.5)])
        expected = -eigenfunction_phi1(dim3, 0.5) / lambda1(dim3)
        assert samples[0].value == pytest.approx(expected, rel=1e-9)

    def test_empty_grid(self, const_one, dim3):
        """Test that no points give no samples."""
        assert solve_on_grid(dim3, const_one, []) == []

    def test_monte_carlo_reproducible(self, const_one, dim3):
        """Test that per-point streams make MC grids reproducible."""
        spec = QuadratureSpec(method="monte_carlo", mc_samples=5_000, seed=11)
        points = [Point.axis(3, r) for r in (0.1, 0.4, 0.7)]
        first = solve_on_grid(dim3, const_one, points, spec)
        second = solve_on_grid(dim3, const_one, points, spec)
        assert [s.value for s in first] == [s.value for s in second]
        assert len({s.value for s in first}) == 3

    def test_exterior_point_rejected(self, const_one, dim3):
        """Test that every point must be interior."""
        with pytest.raises(DomainError):
            solve_on_grid(dim3, const_one, [Point.origin(3), Point.axis(3, 1.1)])


class TestSourceField:
    def test_custom_is_not_builtin(self, dim3):
        """Test that custom sources are built with SourceField.custom."""
        with pytest.raises(DomainError):
            SourceField.builtin("custom", dim3)

    def test_radial_profile(self, dim3, coord_1):
        """Test that only degree-zero sources expose a radial profile."""
        g = SourceField.builtin("const_one", dim3)
        assert g.radial(np.array([0.2, 0.7])) == pytest.approx([1.0, 1.0])
        assert coord_1.radial is None

    def test_field_sample_must_be_finite(self):
        """Test that a non-finite value is rejected."""
        with pytest.raises(DomainError):
            FieldSample(point=Point.origin(3), value=math.nan)
