"""Command-line entry point: norm reports, Poisson solves and verification suites."""

import math
import re
import sys
import time
from collections.abc import Callable
from enum import StrEnum
from pathlib import Path

import logfire
import numpy as np
from pydantic import Field, ValidationError
from pydantic_settings import BaseSettings, CliPositionalArg, SettingsConfigDict, SettingsError

from ballgreen import norms
from ballgreen.config import get_settings
from ballgreen.errors import BallGreenError, ConvergenceError, DomainError
from ballgreen.geometry import BallDim, Point
from ballgreen.models import (
    ExponentPair,
    NormQuantity,
    NormReport,
    QuadratureMethod,
    QuadratureSpec,
    ReportRow,
)
from ballgreen.potential import SourceField, SourceKind, solve_on_grid
from ballgreen.report import OutputFormat, property_row, write_report
from ballgreen.verify import Suite, run_suite

DEFAULT_LP_EXPONENTS = (1.0, 1.5, 2.0, 3.0, 4.0, math.inf)
SOLVE_RADII = tuple(np.linspace(0.0, 0.9, 10))

EXIT_OK = 0
EXIT_TOLERANCE = 1
EXIT_INVALID = 2

# the settings CLI registers one-letter fields as -n, -p, -q and -t only
ONE_LETTER_FLAG = re.compile(r"--([a-z])(?:=(.*))?")


class Command(StrEnum):
    NORM_LINF = "norm-linf"
    NORM_LP = "norm-lp"
    LEMMA2 = "lemma2"
    GREEN_Q = "green-q"
    SOLVE = "solve"
    LAMBDA1 = "lambda1"
    VERIFY = "verify"


class RunConfig(BaseSettings):
    """One CLI invocation; flags win over BALLGREEN_* environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="BALLGREEN_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
        cli_prog_name="ballgreen",
        cli_kebab_case=True,
        cli_implicit_flags=True,
        cli_exit_on_error=False,
    )

    command: CliPositionalArg[Command]
    n: int = Field(default=3, ge=3, le=16, description="Ball dimension")
    p: float | None = Field(default=None, ge=1, description="Exponent p (inf allowed)")
    q: float | None = Field(default=None, ge=1, description="Conjugate exponent q")
    t: float = Field(default=0.0, ge=0, lt=1, description="Radius |x| for green-q")
    t_grid: int = Field(default_factory=lambda: get_settings().t_grid, ge=2)
    samples: int = Field(default_factory=lambda: get_settings().samples, ge=1000)
    seed: int = Field(default_factory=lambda: get_settings().seed, ge=0, lt=2**64)
    tol: float | None = Field(default=None, gt=0, description="Overrides the per-row tolerance")
    format: OutputFormat = OutputFormat.CSV
    out_path: Path | None = None
    suite: Suite = Suite.ALL
    method: QuadratureMethod = QuadratureMethod.GAUSS_LEGENDRE_TENSOR
    route: norms.GreenQRoute | None = Field(
        default=None, description="green-q/norm-linf route; monte_carlo implies raw"
    )
    source: SourceKind = SourceKind.CONST_ONE
    timings: bool = Field(default=False, description="Write measured runtime_ms")

    @classmethod
    def from_argv(cls, argv: list[str]) -> "RunConfig":
        return cls(_cli_parse_args=expand_flags(argv))

    @property
    def spec(self) -> QuadratureSpec:
        return QuadratureSpec.from_settings(
            method=self.method, mc_samples=self.samples, seed=self.seed
        )

    @property
    def stochastic(self) -> bool:
        return self.method == QuadratureMethod.MONTE_CARLO

    def tolerance(self, closed_form_only: bool = False) -> float:
        """Explicit --tol, else the closed-form or Monte-Carlo default."""
        if self.tol is not None:
            return self.tol
        settings = get_settings()
        if closed_form_only and not self.stochastic:
            return settings.tol_closed
        return settings.tol_mc

    def exponents(self) -> ExponentPair:
        if self.q is not None:
            return ExponentPair.from_q(self.q)
        if self.p is not None:
            return ExponentPair.from_p(self.p)
        raise DomainError(f"{self.command} needs --p or --q")



def expand_flags(argv: list[str]) -> list[str]:
    """Rewrite --n 3 and --n=3 into the -n 3 form for every one-letter option."""
    expanded: list[str] = []
    for index, arg in enumerate(argv):
        if arg == "--":
            return expanded + argv[index:]
        match = ONE_LETTER_FLAG.fullmatch(arg)
        if match is None:
            expanded.append(arg)
            continue
        expanded.append(f"-{match[1]}")
        if match[2] is not None:
            expanded.append(match[2])
    return expanded


Outcome = tuple[ReportRow, bool]


def _timed[T](compute: Callable[[], T]) -> tuple[T, float]:
    start = time.perf_counter()
    value = compute()
    return value, 1000.0 * (time.perf_counter() - start)


def _row(
    config: RunConfig,
    quantity: str,
    p: float,
    q: float,
    closed_form: float,
    numeric: float,
    runtime_ms: float,
    argmax_t: float = 0.0,
) -> ReportRow:
    abs_err = abs(closed_form - numeric)
    return ReportRow(
        quantity=quantity,
        n=config.n,
        p=p,
        q=q,
        closed_form=closed_form,
        numeric=numeric,
        abs_err=abs_err,
        rel_err=abs_err / abs(closed_form) if closed_form != 0 else abs_err,
        argmax_t=argmax_t,
        samples=config.samples if config.stochastic else 0,
        seed=config.seed,
        runtime_ms=runtime_ms if config.timings else 0.0,
    )


def _report_row(
    config: RunConfig, report: NormReport, p: float, q: float, runtime_ms: float
) -> ReportRow:
    return _row(
        config,
        report.quantity.value,
        p,
        q,
        report.closed_form,
        report.numeric,
        runtime_ms,
        argmax_t=report.argmax_t,
    )


def _conjugate(p: float) -> float:
    if p == 1.0:
        return math.inf
    return 1.0 if math.isinf(p) else p / (p - 1.0)


def run_norm_linf(config: RunConfig) -> list[Outcome]:
    dim, ep = BallDim(config.n), config.exponents()
    report, ms = _timed(
        lambda: norms.report_p_to_inf(dim, ep, config.spec, grid=config.t_grid, route=config.route)
    )
    row = _report_row(config, report, ep.p, ep.q, ms)
    return [(row, row.rel_err <= config.tolerance(closed_form_only=True))]


def run_norm_lp(config: RunConfig) -> list[Outcome]:
    dim, spec = BallDim(config.n), config.spec
    exponents = [config.p] if config.p is not None else list(DEFAULT_LP_EXPONENTS)
    if config.p is None and config.q is not None:
        exponents = [ExponentPair.from_q(config.q).p]
    endpoint = {1.0: NormQuantity.L1, 2.0: NormQuantity.L2, math.inf: NormQuantity.LINF}
    outcomes = []
    for p in exponents:
        q = _conjugate(p)
        if p in endpoint:
            report, ms = _timed(lambda p=p: norms.report_endpoint(dim, endpoint[p], spec))
            row = _report_row(config, report, p, q, ms)
            outcomes.append((row, row.rel_err <= config.tolerance(closed_form_only=p != 2.0)))
            continue
        bound = norms.riesz_thorin_bound(dim, p)
        for source in (SourceKind.CONST_ONE, SourceKind.PHI1):
            witness, ms = _timed(lambda p=p, s=source: norms.lp_lower_bound(dim, p, s, spec))
            quantity = f"{NormQuantity.P_TO_P.value}:{source.value}"
            row = _row(config, quantity, p, q, bound, witness, ms)
            outcomes.append((row, witness <= bound * (1.0 + config.tolerance())))
    return outcomes


def run_lemma2(config: RunConfig) -> list[Outcome]:
    dim, ep, spec = BallDim(config.n), config.exponents(), config.spec
    tol = config.tolerance(closed_form_only=True)
    closed = norms.lemma2_closed_i0(dim, ep)
    outcomes = []

    numeric, ms = _timed(lambda: norms.lemma2_profile(dim, ep, 0.0, spec))
    row = _row(config, "lemma2_i0", ep.p, ep.q, closed, numeric, ms)
    outcomes.append((row, row.rel_err <= tol))

    (argmax, top), ms = _timed(
        lambda: norms.sup_scan(lambda t: norms.lemma2_profile(dim, ep, t, spec), config.t_grid)
    )
    row = _row(config, "lemma2_sup", ep.p, ep.q, closed, top, ms, argmax_t=argmax)
    outcomes.append((row, row.rel_err <= tol and argmax == 0.0))

    if config.n == 3:
        sine, ms = _timed(lambda: norms.lemma2_closed_i0_sine(ep.q))
        row = _row(config, "lemma2_i0_sine", ep.p, ep.q, closed, sine, ms)
        outcomes.append((row, row.rel_err <= tol))
    return outcomes


def run_green_q(config: RunConfig) -> list[Outcome]:
    dim, ep, spec, t = BallDim(config.n), config.exponents(), config.spec, config.t
    if t == 0.0:
        reference = dim.c_n**ep.q * dim.omega * norms.lemma2_closed_i0(dim, ep)
    else:
        exact_spec = spec.model_copy(update={"method": QuadratureMethod.GAUSS_LEGENDRE_TENSOR})
        reference = norms.green_q_integral(dim, ep, t, exact_spec).value
    route = norms.resolve_route(config.route, spec)
    estimate, ms = _timed(lambda: norms.green_q_integral(dim, ep, t, spec, route))
    row = _row(config, f"green_q:{route.value}", ep.p, ep.q, reference, estimate.value, ms)
    closed_only = route != norms.GreenQRoute.RAW
    ok = row.rel_err <= config.tolerance(closed_form_only=closed_only)
    if config.stochastic:
        ok = ok or row.abs_err <= 3.0 * estimate.std_error
    return [(row, ok)]


def run_solve(config: RunConfig) -> list[Outcome]:
    dim, spec = BallDim(config.n), config.spec
    source = SourceField.builtin(config.source, dim)
    points = [Point.axis(config.n, float(t)) for t in SOLVE_RADII]
    solved, ms = _timed(lambda: solve_on_grid(dim, source, points, spec))
    per_point = ms / len(points)
    tol = config.tolerance(closed_form_only=True)
    outcomes = []
    for sample in solved:
        exact = -source.exact(sample.point.coords)
        quantity = f"u:{source.kind.value}@{sample.point.norm:g}"
        row = _row(config, quantity, math.nan, math.nan, exact, sample.value, per_point)
        ok = row.rel_err <= tol or row.abs_err <= 3.0 * sample.std_error
        outcomes.append((row, ok))
    return outcomes


def run_lambda1(config: RunConfig) -> list[Outcome]:
    dim = BallDim(config.n)
    closed, ms_closed = _timed(lambda: norms.lambda1(dim))
    numeric, ms = _timed(lambda: norms.lambda1_rayleigh(dim, config.spec))
    row = _row(config, "lambda1", 2.0, 2.0, closed, numeric, ms_closed + ms)
    return [(row, row.rel_err <= config.tolerance(closed_form_only=True))]


def run_verify(config: RunConfig) -> list[Outcome]:
    results, ms = _timed(
        lambda: run_suite(config.suite, config.seed, config.samples, config.t_grid)
    )
    logfire.info(f"[cli] verify {config.suite.value} took {ms:.0f} ms", properties=len(results))
    return [(property_row(result, config.seed), result.passed) for result in results]


COMMANDS: dict[Command, Callable[[RunConfig], list[Outcome]]] = {
    Command.NORM_LINF: run_norm_linf,
    Command.NORM_LP: run_norm_lp,
    Command.LEMMA2: run_lemma2,
    Command.GREEN_Q: run_green_q,
    Command.SOLVE: run_solve,
    Command.LAMBDA1: run_lambda1,
    Command.VERIFY: run_verify,
}


def run(config: RunConfig) -> int:
    """Execute the configured command, write its table and return the exit code."""
    with logfire.span(f"[cli] {config.command.value}", n=config.n, seed=config.seed):
        outcomes = COMMANDS[config.command](config)
    rows = [row for row, _ in outcomes]
    failed = [row.quantity for row, ok in outcomes if not ok]

    text = write_report(rows, config.format, config.out_path)
    if config.out_path is None:
        sys.stdout.write(text)

    if failed:
        logfire.warn(f"[cli] {len(failed)} of {len(rows)} rows outside tolerance", failed=failed)
        return EXIT_TOLERANCE
    logfire.info(f"[cli] {config.command.value}: {len(rows)} rows within tolerance")
    return EXIT_OK


def configure_logging() -> None:
    settings = get_settings()
    logfire.configure(
        send_to_logfire="if-token-present",
        token=settings.logfire_token,
        environment=settings.logfire_env,
        service_name="ballgreen",
        console=logfire.ConsoleOptions(output=sys.stderr, min_log_level="warn"),
    )


def _fail(message: str) -> int:
    logfire.error(f"[cli] {message}")
    sys.stderr.write(f"ballgreen: {message}\n")
    return EXIT_INVALID


def main(argv: list[str] | None = None) -> int:
    configure_logging()
    try:
        config = RunConfig.from_argv(sys.argv[1:] if argv is None else argv)
    except (ValidationError, SettingsError) as e:
        return _fail(f"invalid parameters: {e}".splitlines()[0])

    try:
        return run(config)
    except (DomainError, ValidationError) as e:
        return _fail(f"invalid parameters: {e}".splitlines()[0])
    except ConvergenceError as e:
        logfire.error(f"[cli] numerical failure: {e}")
        sys.stderr.write(f"ballgreen: {e}\n")
        return EXIT_TOLERANCE
    except BallGreenError as e:
        return _fail(str(e))


if __name__ == "__main__":
    sys.exit(main())
