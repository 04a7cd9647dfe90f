"""Tests for the verification batteries."""

from unittest.mock import patch

import pytest

from ballgreen.models import PropertyResult
from ballgreen.potential import FieldSample
from ballgreen.verify import (
    BOUNDARY_SAMPLE_FACTOR,
    Suite,
    check_geometry,
    check_potential,
    check_specfun,
    run_suite,
)


def result(name: str, passed: bool) -> PropertyResult:
    return PropertyResult(
        suite="specfun", name=name, expected=0.0, measured=0.0, abs_err=0.0, passed=passed
    )


class TestBatteries:
    def test_specfun_battery_passes(self):
        """Test that every special-function property holds for the default seed."""
        results = check_specfun(seed=7)
        assert results
        assert [r.name for r in results if not r.passed] == []
        assert {r.suite for r in results} == {"specfun"}

    def test_geometry_battery_passes(self):
        """Test that every geometry property holds in n = 3, 4, 5."""
        results = check_geometry(seed=7)
        assert [r.name for r in results if not r.passed] == []
        assert {r.n for r in results} == {3, 4, 5}

    def test_batteries_are_deterministic(self):
        """Test that a fixed seed reproduces the measured values."""
        first = [r.measured for r in check_specfun(seed=3)]
        second = [r.measured for r in check_specfun(seed=3)]
        assert first == second

    def test_boundary_rows_take_more_samples(self):
        """Test that the sampled const_one rows near the sphere use the larger sample count."""

        def fake_apply(dim, g, x, spec):
            return FieldSample(x, 0.0)

        with patch("ballgreen.verify.potential.apply_green", side_effect=fake_apply):
            results = check_potential(seed=7, samples=5_000)
        samples = {
            (r.n, r.name): r.samples for r in results if r.name.startswith("const_one_mc")
        }
        for n in (3, 4, 5):
            assert samples[n, "const_one_mc_t0.6"] == 5_000
            assert samples[n, "const_one_mc_t0.9"] == 5_000 * BOUNDARY_SAMPLE_FACTOR


class TestRunSuite:
    def test_single_suite(self):
        """Test that one suite runs only its own battery."""
        with (
            patch("ballgreen.verify.check_specfun", return_value=[result("a", True)]) as specfun,
            patch("ballgreen.verify.check_geometry") as geometry,
        ):
            results = run_suite(Suite.SPECFUN, seed=7, samples=1000, t_grid=8)
        specfun.assert_called_once_with(7)
        geometry.assert_not_called()
        assert [r.name for r in results] == ["a"]

    def test_all_runs_every_battery_in_order(self):
        """Test that 'all' concatenates the batteries in module order."""
        names = ["specfun", "geometry", "quadrature", "norms", "potential"]
        patches = [
            patch(f"ballgreen.verify.check_{name}", return_value=[result(name, True)])
            for name in names
        ]
        for p in patches:
            p.start()
        try:
            results = run_suite(Suite.ALL, seed=7, samples=1000, t_grid=8)
        finally:
            for p in patches:
                p.stop()
        assert [r.name for r in results] == names

    @pytest.mark.parametrize("passed", [True, False])
    def test_logs_outcome(self, passed):
        """Test that failures are logged as warnings and passes as info."""
        with (
            patch("ballgreen.verify.check_geometry", return_value=[result("x", passed)]),
            patch("ballgreen.verify.logfire") as mock_logfire,
        ):
            run_suite(Suite.GEOMETRY, seed=1, samples=1000, t_grid=8)
        if passed:
            mock_logfire.info.assert_called_once()
            mock_logfire.warn.assert_not_called()
        else:
            mock_logfire.warn.assert_called_once()
