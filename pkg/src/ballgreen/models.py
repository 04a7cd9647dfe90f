"""Pydantic models shared across the library and the CLI."""

import math
from enum import StrEnum

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ballgreen.config import get_settings


class QuadratureMethod(StrEnum):
    GAUSS_LEGENDRE_TENSOR = "gauss_legendre_tensor"
    MONTE_CARLO = "monte_carlo"


class QuadratureSpec(BaseModel):
    """Everything that determines a numerical integral; equal specs give equal results."""

    model_config = ConfigDict(frozen=True)

    method: QuadratureMethod = QuadratureMethod.GAUSS_LEGENDRE_TENSOR
    nodes_radial: int = Field(default=48, ge=2, description="Gauss-Legendre nodes per radial panel")
    nodes_angular: int = Field(
        default=48, ge=2, description="Gauss-Legendre nodes per angular panel"
    )
    mc_samples: int = Field(default=200_000, ge=1, description="Monte-Carlo sample count")
    seed: int = Field(default=7, ge=0, lt=2**64)
    subdivisions: int = Field(default=8, ge=1, description="Graded panels toward singular ends")

    @model_validator(mode="after")
    def check_samples(self):
        if self.method == QuadratureMethod.MONTE_CARLO and self.mc_samples < 1000:
            raise ValueError("mc_samples must be at least 1000 for the monte_carlo method")
        return self

    @classmethod
    def from_settings(cls, **overrides) -> "QuadratureSpec":
        """Build a spec from the BALLGREEN_* defaults, with explicit overrides."""
        settings = get_settings()
        values = {
            "nodes_radial": settings.nodes_radial,
            "nodes_angular": settings.nodes_angular,
            "mc_samples": settings.samples,
            "seed": settings.seed,
            "subdivisions": settings.subdivisions,
        }
        values.update(overrides)
        return cls(**values)


class ExponentPair(BaseModel):
    """Conjugate exponents 1/p + 1/q = 1, with p = inf exactly when q = 1."""

    model_config = ConfigDict(frozen=True)

    p: float = Field(gt=1)
    q: float = Field(ge=1)

    @model_validator(mode="after")
    def check_conjugate(self):
        if math.isinf(self.p) != (self.q == 1.0):
            raise ValueError("p = inf if and only if q = 1")
        if not math.isinf(self.p) and abs(1.0 / self.p + 1.0 / self.q - 1.0) > 1e-14:
            raise ValueError(f"p={self.p} and q={self.q} are not conjugate")
        return self

    @classmethod
    def from_q(cls, q: float) -> "ExponentPair":
        return cls(p=math.inf if q == 1.0 else q / (q - 1.0), q=q)

    @classmethod
    def from_p(cls, p: float) -> "ExponentPair":
        return cls(p=p, q=1.0 if math.isinf(p) else p / (p - 1.0))

    def a(self, n: int) -> float:
        """a = n - q(n-2); positive exactly in the admissible range."""
        return n - self.q * (n - 2)

    def lambda_exp(self, n: int) -> float:
        """lambda = (n + a)/2, the power in the zonal sphere factor."""
        return 0.5 * (n + self.a(n))

    def is_admissible(self, n: int) -> bool:
        """p > n/2, equivalently q < n/(n-2), equivalently a > 0."""
        return self.a(n) > 0


class NormQuantity(StrEnum):
    P_TO_INF = "p_to_inf"
    P_TO_P = "p_to_p"
    L1 = "l1"
    L2 = "l2"
    LINF = "linf"


class NormReport(BaseModel):
    """Closed-form norm set against its numerical estimate."""

    quantity: NormQuantity
    closed_form: float
    numeric: float
    abs_err: float = Field(ge=0)
    rel_err: float = Field(ge=0)
    std_error: float = Field(default=0.0, ge=0)
    argmax_t: float = Field(default=0.0, ge=0, lt=1)
    spec: QuadratureSpec

    @classmethod
    def compare(
        cls,
        quantity: NormQuantity,
        closed_form: float,
        numeric: float,
        spec: QuadratureSpec,
        std_error: float = 0.0,
        argmax_t: float = 0.0,
    ) -> "NormReport":
        abs_err = abs(closed_form - numeric)
        rel_err = abs_err / abs(closed_form) if closed_form != 0 else abs_err
        return cls(
            quantity=quantity,
            closed_form=closed_form,
            numeric=numeric,
            abs_err=abs_err,
            rel_err=rel_err,
            std_error=std_error,
            argmax_t=argmax_t,
            spec=spec,
        )


class ReportRow(BaseModel):
    """One table row of a CLI artifact."""

    quantity: str
    n: int
    p: float
    q: float
    closed_form: float
    numeric: float
    abs_err: float
    rel_err: float
    argmax_t: float = 0.0
    samples: int = 0
    seed: int = 0
    runtime_ms: float = 0.0
    passed: bool | None = Field(default=None, description="Set for verify rows only")


class PropertyResult(BaseModel):
    """Outcome of one invariant check of a verification suite."""

    suite: str
    name: str
    expected: float
    measured: float
    abs_err: float = Field(ge=0)
    passed: bool
    n: int = 0
    samples: int = 0
