"""Shared fixtures for the ballgreen test suite."""

import logfire
import numpy as np
import pytest

from ballgreen.geometry import BallDim
from ballgreen.models import QuadratureSpec

logfire.configure(send_to_logfire=False, console=False)


@pytest.fixture(params=[3, 4, 5], ids=lambda n: f"n{n}")
def dim(request) -> BallDim:
    return BallDim(request.param)


@pytest.fixture
def dim3() -> BallDim:
    return BallDim(3)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(7)


@pytest.fixture
def spec() -> QuadratureSpec:
    return QuadratureSpec()


@pytest.fixture
def mc_spec() -> QuadratureSpec:
    return QuadratureSpec(method="monte_carlo", mc_samples=100_000, seed=7)
