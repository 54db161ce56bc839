from __future__ import annotations

import time
from collections.abc import Callable
from fractions import Fraction
from math import floor
from pathlib import Path
from typing import Annotated, Any

import typer
from pydantic import BaseModel, ConfigDict, Field, ValidationError
from rich.console import Console
from rich.table import Table

from padicwave.arith.absvalue import AbsValue
from padicwave.arith.scalar import PadicScalar
from padicwave.config import get_settings
from padicwave.core.enums import BuiltinOracle, ExitCode, Relation, SelftestScope
from padicwave.core.exceptions import (
    DepthInsufficientError,
    InvalidParametersError,
    PadicWaveError,
    PrecisionExhaustedError,
)
from padicwave.crnorm import RatioInterval, cr_norm
from padicwave.distribution import (
    DiracOracle,
    HaarOracle,
    MomentOracle,
    TableOracle,
    avv_check,
    counterexample_build,
    dual_norm,
    growth_table,
    tensor_check,
    uniform_check,
    validate_additivity,
)
from padicwave.fields.cosets import residue_system
from padicwave.fields.descriptor import FieldDescriptor
from padicwave.locpoly.documents import LocPolyDocument
from padicwave.locpoly.function import integer_part
from padicwave.logger import BoundLogger, LoggingConfig, bind_context, clear_context, configure_logging, get_logger
from padicwave.multiindex.index import index_set
from padicwave.sampling import make_rng, random_locpoly
from padicwave.selftest import ConstantLock, run_selftest
from padicwave.wavelet import analyze as analyze_fn
from padicwave.wavelet import basis_fn, synthesize

logger: BoundLogger = get_logger(__name__)

app = typer.Typer(
    name="padicwave",
    help="Exact C^r function spaces on p-adic rings of integers: norms, wavelet bases and distributions.",
    no_args_is_help=True,
    add_completion=False,
)
console = Console(stderr=True)

Verdict = bool | None


class RunReport(BaseModel):
    """Everything a command produced. ``wall_time`` is shown but never written to the report file."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    command: str = Field(..., description="Command name")
    field: FieldDescriptor | None = Field(default=None, description="Field the command ran over")
    parameters: dict[str, Any] = Field(default_factory=dict, description="Parsed command parameters")
    results: dict[str, Any] = Field(default_factory=dict, description="Command-specific payload")
    verdicts: dict[str, Verdict] = Field(default_factory=dict, description="Named pass/fail/inconclusive outcomes")
    seed: int = Field(default=0, description="Seed of every randomized step")
    wall_time: float = Field(default=0.0, exclude=True, description="Seconds spent, console only")

    @property
    def exit_code(self) -> ExitCode:
        values = list(self.verdicts.values())
        if any(v is False for v in values):
            return ExitCode.VIOLATION
        if any(v is None for v in values):
            return ExitCode.INCONCLUSIVE
        return ExitCode.OK

    def to_file(self, path: Path) -> None:
        path.write_text(self.model_dump_json(indent=2) + "\n")


# option types

FieldOption = Annotated[str, typer.Option("--field", help='Field as JSON, e.g. \'{"p": 3, "f": 1, "e": 1}\'')]
ROption = Annotated[str, typer.Option("--r", help="Regularity r as num/den")]
DepthOption = Annotated[int | None, typer.Option("--depth", min=0, help="Enumeration depth")]
PrecisionOption = Annotated[int | None, typer.Option("--precision", min=8, help="Working precision in digits")]
SeedOption = Annotated[int | None, typer.Option("--seed", help="Seed for randomized steps")]
JsonOption = Annotated[Path | None, typer.Option("--json", help="Write the report to this path")]


def parse_field(text: str, precision: int | None = None) -> FieldDescriptor:
    fd = FieldDescriptor.model_validate_json(text)
    if precision is not None:
        fd = FieldDescriptor.model_validate(fd.model_dump() | {"precision": precision})
    return fd


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidParametersError(f"not a rational number: {text!r}") from exc


def _fraction_json(x: Fraction) -> dict[str, int]:
    return {"num": x.numerator, "den": x.denominator}


def _emit(report: RunReport, json_out: Path | None) -> None:
    if json_out is not None:
        report.to_file(json_out)
    else:
        typer.echo(report.model_dump_json(indent=2))
    table = Table(title=f"padicwave {report.command}")
    table.add_column("verdict")
    table.add_column("outcome")
    for name, verdict in report.verdicts.items():
        label = {True: "[green]pass[/green]", False: "[red]fail[/red]", None: "[yellow]inconclusive[/yellow]"}[verdict]
        table.add_row(name, label)
    console.print(table)
    console.print(f"wall time {report.wall_time:.3f}s, exit {int(report.exit_code)}")


def _execute(command: str, seed: int, json_out: Path | None, body: Callable[[], RunReport]) -> None:
    bind_context(command=command, seed=seed)
    start = time.perf_counter()
    try:
        report = body()
    except (DepthInsufficientError, PrecisionExhaustedError) as exc:
        logger.warning("cli.inconclusive", error=type(exc).__name__, message=str(exc))
        console.print(f"[yellow]inconclusive:[/yellow] {exc}")
        raise typer.Exit(code=ExitCode.INCONCLUSIVE) from exc
    except (PadicWaveError, ValidationError, OSError) as exc:
        logger.warning("cli.input_error", error=type(exc).__name__, message=str(exc))
        console.print(f"[red]input error:[/red] {exc}")
        raise typer.Exit(code=ExitCode.INPUT_ERROR) from exc
    finally:
        clear_context()
    report = report.model_copy(update={"wall_time": time.perf_counter() - start})
    _emit(report, json_out)
    raise typer.Exit(code=report.exit_code)


@app.callback()
def main(verbose: Annotated[bool, typer.Option("--verbose", "-v", help="Debug logging on stderr")] = False) -> None:
    configure_logging(LoggingConfig.for_cli(verbose))


@app.command()
def basis(
    field: FieldOption = '{"p": 3}',
    r: ROption = "1",
    h_max: Annotated[int, typer.Option("--h-max", min=0, help="Largest coset level")] = 2,
    depth: DepthOption = None,
    precision: PrecisionOption = None,
    seed: SeedOption = None,
    json_out: JsonOption = None,
) -> None:
    """Certified norms of every e_{a,i,r} with l(a) <= h_max against the bound q^{-([lr] - lr + r - |i|)}."""
    run_seed = get_settings().seed if seed is None else seed

    def body() -> RunReport:
        fd = parse_field(field, precision)
        rr = parse_rational(r)
        extra = 2 if depth is None else depth
        elements: list[dict[str, Any]] = []
        bounds_ok = True
        units_ok = True
        reps = [a for level in range(h_max + 1) for a in residue_system(fd, level) if a.canonical() == a]
        for a in reps:
            for i in index_set(Relation.LE, integer_part(rr), fd.d):
                norm = cr_norm(basis_fn(fd, a, i, rr), rr, depth=a.level + extra).value
                exponent = fd.f * (floor(a.level * rr) - a.level * rr + rr - i.total)
                ok = norm.upper <= AbsValue.of(exponent)
                bounds_ok = bounds_ok and ok
                if a.level == 0:
                    units_ok = units_ok and norm.tight and norm.value == AbsValue.one()
                elements.append(
                    {"a": a.to_json(), "i": list(i), "norm": norm.to_json(), "bound": str(exponent), "ok": ok}
                )
        return RunReport(
            command="basis",
            field=fd,
            parameters={"r": _fraction_json(rr), "h_max": h_max, "depth": extra},
            results={"elements": elements},
            verdicts={"bounds": bounds_ok, "unit_norms": units_ok},
            seed=run_seed,
        )

    _execute("basis", run_seed, json_out, body)


@app.command()
def analyze(
    field: FieldOption = '{"p": 3}',
    r: ROption = "1",
    function: Annotated[Path | None, typer.Option("--function", help="Function document to analyze")] = None,
    level: Annotated[int, typer.Option("--level", min=0, help="Level of the random function")] = 2,
    depth: DepthOption = None,
    precision: PrecisionOption = None,
    seed: SeedOption = None,
    json_out: JsonOption = None,
) -> None:
    """Wavelet coefficients of a function, the synthesis round trip and the coefficient ratio."""
    run_seed = get_settings().seed if seed is None else seed

    def body() -> RunReport:
        rr = parse_rational(r)
        if function is not None:
            f = LocPolyDocument.model_validate_json(function.read_text()).to_function()
            source = str(function)
        else:
            fd = parse_field(field, precision)
            f = random_locpoly(make_rng(run_seed), fd, level, integer_part(rr))
            source = "random"
        coeffs = analyze_fn(f, rr)
        round_trip = synthesize(coeffs) == f
        ratio: RatioInterval | None = None
        if not f.is_zero:
            ratio = RatioInterval.exact(coeffs.sup_abs(), cr_norm(f, rr, depth).value)
        return RunReport(
            command="analyze",
            field=f.field,
            parameters={"r": _fraction_json(rr), "source": source, "level": f.level},
            results={
                "coefficients": coeffs.to_json()["entries"],
                "coefficient_ratio": None if ratio is None else ratio.to_json(),
            },
            verdicts={"round_trip": round_trip},
            seed=run_seed,
        )

    _execute("analyze", run_seed, json_out, body)


def _oracle(
    fd: FieldDescriptor, degree: int, builtin: BuiltinOracle, moments: Path | None, point: str | None
) -> MomentOracle:
    if moments is not None:
        return TableOracle.load(moments, fd, degree)
    if builtin is BuiltinOracle.DIRAC:
        return DiracOracle(fd, degree, None if point is None else PadicScalar.parse(fd, point))
    return HaarOracle(fd, degree)


@app.command()
def avv(
    field: FieldOption = '{"p": 3}',
    r: ROption = "1",
    degree: Annotated[int | None, typer.Option("--degree", min=0, help="Moment degree N, at least [r]")] = None,
    oracle: Annotated[BuiltinOracle, typer.Option("--oracle", help="Builtin distribution")] = BuiltinOracle.DIRAC,
    moments: Annotated[Path | None, typer.Option("--moments", help="Moment table file, overrides --oracle")] = None,
    point: Annotated[str | None, typer.Option("--point", help="Dirac point in scalar notation")] = None,
    depth: Annotated[int, typer.Option("--depth", min=0, help="Deepest moment level")] = 4,
    precision: PrecisionOption = None,
    seed: SeedOption = None,
    json_out: JsonOption = None,
) -> None:
    """Additivity, the moment growth criterion and the dual norm of a distribution."""
    run_seed = get_settings().seed if seed is None else seed

    def body() -> RunReport:
        fd = parse_field(field, precision)
        rr = parse_rational(r)
        n = integer_part(rr) if degree is None else degree
        mu = _oracle(fd, n, oracle, moments, point)
        additivity = validate_additivity(mu, depth)
        if not additivity.valid:
            return RunReport(
                command="avv",
                field=fd,
                parameters={"r": _fraction_json(rr), "degree": n, "depth": depth, "oracle": repr(mu)},
                results={"additivity": additivity.to_json()},
                verdicts={"additivity": False},
                seed=run_seed,
            )
        report = avv_check(mu, rr, n, depth)
        norm = dual_norm(mu, rr, n, depth)
        return RunReport(
            command="avv",
            field=fd,
            parameters={"r": _fraction_json(rr), "degree": n, "depth": depth, "oracle": repr(mu)},
            results={"additivity": additivity.to_json(), "avv": report.to_json(), "dual_norm": norm.to_json()},
            verdicts={"additivity": True, "avv": report.passed},
            seed=run_seed,
        )

    _execute("avv", run_seed, json_out, body)


@app.command()
def counterexample(
    p: Annotated[int, typer.Option("--p", help="Residue characteristic")] = 3,
    r_vec: Annotated[str, typer.Option("--r-vec", help="Coordinate orders, comma separated")] = "3/2,1/2",
    k: Annotated[int, typer.Option("--k", min=0, help="0-based growth coordinate, needs 0 < r_k < r")] = 1,
    d: Annotated[int | None, typer.Option("--d", help="Degree of the field, defaults to len(r_vec)")] = None,
    depth: Annotated[int, typer.Option("--depth", min=0, help="Deepest level checked")] = 3,
    seed: SeedOption = None,
    json_out: JsonOption = None,
) -> None:
    """The distribution separating C^r from the coordinate-wise C^{r_1,...,r_d}.

    The growth coordinate k needs 0 < r_k < r = sum(r_vec); with r_k = 0 there
    is no growth to detect, so p=5 with r_vec 1,0 is rejected. The self-test
    runs p=5 with r_vec 1,1 and k=0 in its place.
    """
    run_seed = get_settings().seed if seed is None else seed

    def body() -> RunReport:
        orders = tuple(parse_rational(x) for x in r_vec.split(","))
        if d is not None and d != len(orders):
            raise InvalidParametersError(f"--d {d} does not match {len(orders)} coordinate orders")
        mu = counterexample_build(p, orders, k)
        additivity = validate_additivity(mu, depth)
        uniform = uniform_check(mu, depth)
        tensor = tensor_check(mu, depth)
        rows = growth_table(mu, depth)
        separated: Verdict = None if tensor.passed is None else tensor.passed is False
        return RunReport(
            command="counterexample",
            field=mu.field,
            parameters={"p": p, "r_vec": [str(x) for x in orders], "k": k, "depth": depth, "alpha": list(mu.alpha)},
            results={
                "growth": [row.to_json() for row in rows],
                "uniform": uniform.to_json(),
                "tensor": tensor.to_json(),
                "inexact": mu.inexact,
            },
            verdicts={"additivity": additivity.valid, "uniform": uniform.passed, "separation": separated},
            seed=run_seed,
        )

    _execute("counterexample", run_seed, json_out, body)


@app.command()
def selftest(
    scope: Annotated[SelftestScope, typer.Option("--scope", help="fast or full")] = SelftestScope.FAST,
    only: Annotated[list[str] | None, typer.Option("--check", help="Run only these checks")] = None,
    lock: Annotated[Path | None, typer.Option("--lock", help="Constants file the run must reproduce")] = None,
    record: Annotated[Path | None, typer.Option("--record", help="Write the recorded constants to this file")] = None,
    seed: SeedOption = None,
    json_out: JsonOption = None,
) -> None:
    """Run the acceptance checks; exits 0 only if every check passes."""
    run_seed = get_settings().seed if seed is None else seed

    def body() -> RunReport:
        locked = None if lock is None else ConstantLock.load(lock)
        report = run_selftest(scope, run_seed, only, locked)
        if record is not None:
            ConstantLock.of(report).dump(record)
        return RunReport(
            command="selftest",
            parameters={"scope": scope.value, "checks": [r.name for r in report.results], "locked": lock is not None},
            results=report.to_json(),
            verdicts={r.name: r.passed for r in report.results},
            seed=run_seed,
        )

    _execute("selftest", run_seed, json_out, body)


def cli() -> None:
    app()


if __name__ == "__main__":
    cli()
