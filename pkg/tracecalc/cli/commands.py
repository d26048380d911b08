"""CLI commands for tracecalc."""

import json
import sys
import time
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterator, List, NoReturn

import typer
from filelock import Timeout
from loguru import logger
from rich.console import Console
from rich.table import Table

from tracecalc import __banner__, __logo__, __version__
from tracecalc.errors import BlockSizeError, PolynomialParseError, TraceCalcError

app = typer.Typer(
    name="tracecalc",
    help=f"{__logo__} tracecalc - trace polynomials and the large-N Segal-Bargmann transform",
    no_args_is_help=True,
)

console = Console()


def version_callback(value: bool):
    if value:
        console.print(f"{__logo__} tracecalc v{__version__}")
        raise typer.Exit()


def setup_logging(verbose: bool) -> None:
    logger.remove()
    logger.add(sys.stderr, level="DEBUG" if verbose else "WARNING")


@app.callback()
def main(
    version: bool = typer.Option(
        None, "--version", "-v", callback=version_callback, is_eager=True
    ),
    verbose: bool = typer.Option(False, "--verbose", "-V", help="Debug logging to stderr"),
):
    """tracecalc - trace polynomials and the large-N Segal-Bargmann transform."""
    setup_logging(verbose)


# ============================================================================
# Shared helpers
# ============================================================================


def fail(e: Exception) -> NoReturn:
    """Print an error and exit with its code (2 for plain bad input)."""
    console.print(f"[red]Error: {e}[/red]")
    raise typer.Exit(e.exit_code if isinstance(e, TraceCalcError) else 2)


def parse_time(text: str, allow_float: bool = False) -> Fraction | float:
    """Exact "p/q" or integer; decimals only with --float."""
    text = text.strip()
    if any(ch in text for ch in ".eE"):
        if not allow_float:
            raise PolynomialParseError(f"decimal time {text!r} needs --float (or write it as p/q)")
        try:
            value: Fraction | float = float(text)
        except ValueError:
            raise PolynomialParseError(f"not a number: {text!r}") from None
    else:
        try:
            value = Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise PolynomialParseError(f"not a rational number: {text!r}") from None
    if value < 0:
        raise PolynomialParseError(f"time must be non-negative, got {text}")
    return value


def check_grade(grade: int, max_grade: int) -> None:
    if grade > max_grade:
        raise BlockSizeError(
            f"grade {grade} exceeds heat.maxGrade = {max_grade} (set TRACECALC_HEAT__MAX_GRADE to raise it)"
        )


def read_polynomial(power: int | None, poly: str | None):
    from tracecalc.algebra.codec import parse_polynomial
    from tracecalc.algebra.monomial import u
    from tracecalc.algebra.polynomial import TracePolynomial

    if (power is None) == (poly is None):
        raise PolynomialParseError("give exactly one of --power or --poly")
    if power is not None:
        if power < 0:
            raise PolynomialParseError(f"--power must be non-negative, got {power}")
        return TracePolynomial.monomial(u(power), 1)
    text = poly
    try:
        if Path(poly).is_file():
            text = Path(poly).read_text(encoding="utf-8")
    except OSError:
        pass  # too long to be a path
    return parse_polynomial(text)


def exact_value(c: Any, t: Fraction) -> str:
    """An ExpTPoly coefficient at rational t, prefactors kept apart from bodies."""
    from tracecalc.algebra.rings import fraction_to_str

    parts = []
    for rate, body in sorted(c.terms.items(), reverse=True):
        value = fraction_to_str(body(t))
        exponent = rate * t
        parts.append(value if exponent == 0 else f"e^{{{fraction_to_str(exponent)}}}·({value})")
    return " + ".join(parts) or "0"


@contextmanager
def cached_semigroup(use_cache: bool = True) -> Iterator[Any]:
    """The shared heat semigroup, seeded from and flushed to the on-disk cache."""
    from tracecalc.cache.store import SemigroupCache
    from tracecalc.config.loader import load_config
    from tracecalc.heat.semigroup import default_semigroup

    semigroup = default_semigroup()
    if not use_cache:
        yield semigroup
        return
    cache = SemigroupCache(load_config().cache_path)
    try:
        loaded = cache.load_into(semigroup)
        logger.info(f"cache: {loaded} semigroup entries loaded from {cache.path}")
    except Timeout:
        logger.warning(f"cache {cache.path} is locked; computing from scratch")
    yield semigroup
    try:
        added = cache.flush(semigroup)
        logger.info(f"cache: {added} new entries saved to {cache.path}")
    except (OSError, Timeout) as e:
        logger.warning(f"Could not save cache {cache.path}: {e}")


def finish(
    out: Path | None,
    command: str,
    flags: dict[str, Any],
    outputs: list[Path],
    started: float,
    seed: int | None = None,
) -> None:
    from tracecalc.cli.output import RunManifest, write_manifest

    if out is None:
        return
    manifest = RunManifest(
        command=command,
        flags={k: str(v) if isinstance(v, (Path, Fraction)) else v for k, v in flags.items()},
        seed=seed,
        wall_time=time.perf_counter() - started,
        outputs=[str(p) for p in outputs],
    )
    path = write_manifest(out, manifest)
    for p in [*outputs, path]:
        console.print(f"[green]✓[/green] Wrote {p}")


# ============================================================================
# Transform
# ============================================================================


@app.command()
def transform(
    power: int = typer.Option(None, "--power", "-k", help="Transform u^k"),
    poly: str = typer.Option(None, "--poly", help="Trace polynomial as JSON, or a JSON file"),
    t: str = typer.Option(..., "--t", help="Time as p/q or an integer"),
    N: int = typer.Option(None, "--N", help="Finite matrix size"),
    limit: bool = typer.Option(False, "--limit", help="Large-N limit q_t"),
    use_float: bool = typer.Option(False, "--float", help="Accept a decimal --t"),
    out: Path = typer.Option(None, "--out", "-o", help="JSON output; CSV and manifest go beside it"),
    no_cache: bool = typer.Option(False, "--no-cache", help="Ignore the semigroup cache"),
):
    """Heat-transform a trace polynomial, exactly at large N or numerically at finite N."""
    from tracecalc.algebra.codec import polynomial_to_json
    from tracecalc.algebra.evaluate import pi_zero
    from tracecalc.algebra.rings import EXPTPOLY
    from tracecalc.cli.output import render_csv
    from tracecalc.config.loader import load_config
    from tracecalc.heat.finite import heat_finite_N
    from tracecalc.heat.semigroup import heat_limit

    started = time.perf_counter()
    try:
        if limit == (N is not None):
            raise PolynomialParseError("give exactly one of --N or --limit")
        p = read_polynomial(power, poly)
        heat = load_config().heat
        check_grade(p.max_grade, heat.max_grade)
        tt = parse_time(t, use_float)
        outputs: list[Path] = []

        if limit:
            with cached_semigroup(not no_cache) as semigroup:
                value = heat_limit(p, semigroup)
            q = pi_zero(value.to_exp_polynomial(), EXPTPOLY).with_variable("z")
            rows = []
            for j in reversed(range(q.degree + 1)):
                c = q.coefficient(j)
                if not c:
                    continue
                rows.append({
                    "power": j,
                    "coefficient": str(c),
                    "exact": exact_value(c, tt) if isinstance(tt, Fraction) else "",
                    "value": c.at(float(tt)),
                })
            table = Table(title=f"q_t(z) for t = {tt}")
            table.add_column("z^j", style="cyan", justify="right")
            table.add_column("Coefficient")
            table.add_column("At t")
            table.add_column("Value", justify="right")
            for row in rows:
                table.add_row(str(row["power"]), row["coefficient"], row["exact"], f"{row['value']:.12g}")
            console.print(table)
            document = {
                "command": "transform",
                "t": str(tt),
                "limit": True,
                "semigroup": value.to_json(),
                "q": [{"power": r["power"], "coeff": EXPTPOLY.encode(q.coefficient(r["power"]))} for r in rows],
            }
            columns = ("power", "coefficient", "exact", "value")
        else:
            result = heat_finite_N(p, float(tt), N, heat.block_cap)
            rows = [
                {"monomial": str(m), "re": c.real, "im": c.imag} for m, c in result
            ]
            table = Table(title=f"e^(t D_N/2) p for N = {N}, t = {tt}")
            table.add_column("Monomial", style="cyan")
            table.add_column("Re", justify="right")
            table.add_column("Im", justify="right")
            for row in rows:
                table.add_row(row["monomial"], f"{row['re']:.15g}", f"{row['im']:.3g}")
            console.print(table)
            document = {
                "command": "transform",
                "t": str(tt),
                "N": N,
                "polynomial": polynomial_to_json(result),
            }
            columns = ("monomial", "re", "im")

        if out is not None:
            from tracecalc.cli.output import write_json

            outputs.append(write_json(out, document))
            csv_path = out.with_suffix(".csv")
            csv_path.write_text(render_csv(columns, rows), encoding="utf-8")
            outputs.append(csv_path)
        finish(out, "transform", {"power": power, "poly": poly, "t": tt, "N": N, "limit": limit}, outputs, started)
    except (TraceCalcError, ValueError) as e:
        fail(e)


# ============================================================================
# Moments and inverse transform
# ============================================================================


@app.command()
def moments(
    kmax: int = typer.Option(8, "--kmax", help="Largest moment index"),
    t: str = typer.Option(None, "--t", help="Time as p/q or an integer (symbolic if omitted)"),
    N: str = typer.Option("inf", "--N", help="Matrix size, or 'inf' for the large-N limit"),
    use_float: bool = typer.Option(False, "--float", help="Accept a decimal --t"),
    out: Path = typer.Option(None, "--out", "-o", help="CSV output"),
    no_cache: bool = typer.Option(False, "--no-cache", help="Ignore the semigroup cache"),
):
    """Moments nu_k(t) = lim E[tr U^k], or their finite-N values."""
    from tracecalc.algebra.monomial import v
    from tracecalc.algebra.polynomial import TracePolynomial
    from tracecalc.cli.output import write_csv
    from tracecalc.config.loader import load_config
    from tracecalc.heat.finite import expect_finite
    from tracecalc.heat.moments import moment_table

    started = time.perf_counter()
    try:
        if kmax < 1:
            raise PolynomialParseError(f"--kmax must be at least 1, got {kmax}")
        check_grade(kmax, load_config().heat.max_grade)
        tt = parse_time(t, use_float) if t is not None else None
        outputs: list[Path] = []

        if N.lower() in ("inf", "infinity"):
            with cached_semigroup(not no_cache) as semigroup:
                moments_ = moment_table(kmax, semigroup)
            rows = moments_.rows(float(tt) if tt is not None else None)
            table = Table(title="Large-N moments nu_k(t)")
            table.add_column("k", style="cyan", justify="right")
            table.add_column("nu_k(t)")
            if tt is not None:
                table.add_column(f"At t = {tt}")
                table.add_column("Value", justify="right")
            for row in rows:
                cells = [str(row["k"]), str(moments_.value(row["k"]))]
                if tt is not None:
                    exact = exact_value(moments_.value(row["k"]), tt) if isinstance(tt, Fraction) else ""
                    cells += [exact, f"{row['value']:.12g}"]
                table.add_row(*cells)
            columns: tuple[str, ...] = ("k", "decay", "body") + (("value",) if tt is not None else ())
        else:
            if tt is None:
                raise PolynomialParseError("finite N needs --t")
            size = int(N)
            cap = load_config().heat.block_cap
            rows = []
            for k in range(1, kmax + 1):
                value = expect_finite(TracePolynomial.monomial(v(k), 1), float(tt), size, cap)
                rows.append({"k": k, "N": size, "t": float(tt), "value_re": value.real, "value_im": value.imag})
            table = Table(title=f"E[tr U^k] on U({size}) at t = {tt}")
            table.add_column("k", style="cyan", justify="right")
            table.add_column("Value", justify="right")
            for row in rows:
                table.add_row(str(row["k"]), f"{row['value_re']:.15g}")
            columns = ("k", "N", "t", "value_re", "value_im")
        console.print(table)

        if out is not None:
            outputs.append(write_csv(out, columns, rows))
        finish(out, "moments", {"kmax": kmax, "t": tt, "N": N}, outputs, started)
    except (TraceCalcError, ValueError) as e:
        fail(e)


@app.command()
def inverse(
    power: int = typer.Option(..., "--power", "-k", help="Invert z^k"),
    t: str = typer.Option(None, "--t", help="Time as p/q or an integer (symbolic if omitted)"),
    use_float: bool = typer.Option(False, "--float", help="Accept a decimal --t"),
    out: Path = typer.Option(None, "--out", "-o", help="CSV output"),
):
    """The polynomial in u whose free Hall transform is z^k."""
    from tracecalc.algebra.univariate import SingleVarPoly
    from tracecalc.cli.output import write_csv
    from tracecalc.heat.hall import inverse_free_hall

    started = time.perf_counter()
    try:
        if power < 0:
            raise PolynomialParseError(f"--power must be non-negative, got {power}")
        tt = parse_time(t, use_float) if t is not None else None
        p = inverse_free_hall(SingleVarPoly.monomial(power, 1, variable="z"))
        rows = []
        for j in reversed(range(p.degree + 1)):
            c = p.coefficient(j)
            if not c:
                continue
            row: dict[str, Any] = {"power": j, "coefficient": str(c)}
            if tt is not None:
                row["exact"] = exact_value(c, tt) if isinstance(tt, Fraction) else ""
                row["value"] = c.at(float(tt))
            rows.append(row)

        table = Table(title=f"Inverse free Hall transform of z^{power}")
        table.add_column("u^j", style="cyan", justify="right")
        table.add_column("Coefficient")
        if tt is not None:
            table.add_column(f"At t = {tt}")
            table.add_column("Value", justify="right")
        for row in rows:
            cells = [str(row["power"]), row["coefficient"]]
            if tt is not None:
                cells += [row["exact"], f"{row['value']:.12g}"]
            table.add_row(*cells)
        console.print(table)

        outputs: list[Path] = []
        if out is not None:
            columns = ("power", "coefficient") + (("exact", "value") if tt is not None else ())
            outputs.append(write_csv(out, columns, rows))
        finish(out, "inverse", {"power": power, "t": tt}, outputs, started)
    except (TraceCalcError, ValueError) as e:
        fail(e)


# ============================================================================
# Generating functions
# ============================================================================


@app.command()
def genfun(
    s: str = typer.Option(..., "--s", help="Heat time s of the unitary side"),
    t: str = typer.Option(..., "--t", help="Time t of the transform"),
    order: int = typer.Option(None, "--order", "-K", help="Truncation order (default from config)"),
    residual: bool = typer.Option(False, "--residual", help="Report PDE residuals"),
    use_float: bool = typer.Option(False, "--float", help="Accept decimal --s/--t"),
    out: Path = typer.Option(None, "--out", "-o", help="CSV output"),
):
    """Coefficients of p_k^{s,t}(u) from the generating function phi."""
    from tracecalc.cli.output import write_csv
    from tracecalc.config.loader import load_config
    from tracecalc.series.generating import expand_phi_st, expand_phi_tt, pde_residual

    started = time.perf_counter()
    try:
        config = load_config()
        K = order or config.series.order
        if K < 1:
            raise PolynomialParseError(f"--order must be at least 1, got {K}")
        ss, tt = parse_time(s, use_float), parse_time(t, use_float)
        polys = expand_phi_tt(float(tt), K) if ss == tt else expand_phi_st(float(ss), float(tt), K)

        rows = []
        table = Table(title=f"p_k^(s,t)(u) for s = {ss}, t = {tt}")
        table.add_column("k", style="cyan", justify="right")
        table.add_column("p_k(u)")
        for k, p in enumerate(polys, start=1):
            table.add_row(str(k), str(p))
            for j, c in enumerate(p.coeffs):
                rows.append({"k": k, "j": j, "coeff_re": c.real, "coeff_im": c.imag})
        console.print(table)

        if residual:
            report_table = Table(title="PDE residuals (diagnostic)")
            report_table.add_column("PDE", style="cyan")
            report_table.add_column("Max residual", justify="right")
            report_table.add_column("Initial condition", justify="right")
            report_table.add_column("Flagged orders")
            for kind in ("rho", "psi", "phi"):
                report = pde_residual(
                    kind, float(ss), float(tt), K, config.series.fd_step, config.series.residual_flag
                )
                report_table.add_row(
                    kind,
                    f"{report.max_residual:.3e}",
                    f"{report.max_initial_residual:.3e}",
                    ", ".join(map(str, report.flagged_orders)) or "-",
                )
            console.print(report_table)

        outputs: list[Path] = []
        if out is not None:
            outputs.append(write_csv(out, ("k", "j", "coeff_re", "coeff_im"), rows))
        finish(out, "genfun", {"s": ss, "t": tt, "order": K}, outputs, started)
    except (TraceCalcError, ValueError) as e:
        fail(e)


# ============================================================================
# Monte Carlo
# ============================================================================

mc_app = typer.Typer(help="Monte Carlo experiments on U(N) and GL(N; C)")
app.add_typer(mc_app, name="mc")

EXPERIMENTS = ("trace", "deviation", "l2")


@mc_app.command("run")
def mc_run(
    experiment: str = typer.Option("deviation", "--experiment", "-e", help="trace | deviation | l2"),
    group: str = typer.Option("gl", "--group", "-g", help="u (rho_t^N) or gl (mu_t^N)"),
    Ns: List[int] = typer.Option([4, 8, 16, 32], "--N", help="Matrix sizes (repeatable)"),
    t: str = typer.Option("1", "--t", help="Time as p/q or an integer"),
    k: int = typer.Option(2, "--k", help="Power for trace experiments, or u^k for l2"),
    poly: str = typer.Option(None, "--poly", help="Polynomial for l2 instead of u^k"),
    paths: int = typer.Option(None, "--paths", help="Paths per N (default from config)"),
    step: float = typer.Option(None, "--step", help="Time step h (default from config)"),
    seed: int = typer.Option(None, "--seed", help="Master seed (default from config, 0)"),
    workers: int = typer.Option(None, "--workers", "-w", help="Worker threads"),
    use_float: bool = typer.Option(False, "--float", help="Accept a decimal --t"),
    out: Path = typer.Option(None, "--out", "-o", help="CSV output (default: outputDir/mc-<experiment>-<group>-<time>.csv)"),
):
    """Sample endpoints of Brownian motion and estimate trace statistics."""
    from tracecalc.algebra.evaluate import pi_zero
    from tracecalc.cli.output import MC_COLUMNS, write_csv
    from tracecalc.config.loader import load_config
    from tracecalc.heat.finite import heat_finite_N
    from tracecalc.heat.moments import biane_moment, concentration_target
    from tracecalc.heat.semigroup import heat_limit
    from tracecalc.lab.estimators import mc_estimate, mc_l2_distance, trace_deviation, trace_power
    from tracecalc.lab.types import BrownianConfig
    from tracecalc.utils.helpers import run_stem

    started = time.perf_counter()
    try:
        if experiment not in EXPERIMENTS:
            raise PolynomialParseError(f"--experiment must be one of {EXPERIMENTS}, got {experiment!r}")
        config = load_config()
        lab = config.lab
        tt = float(parse_time(t, use_float))
        target = 1.0 if group == "gl" else biane_moment(k).at(tt)
        p = read_polynomial(None if poly else k, poly) if experiment == "l2" else None

        rows = []
        table = Table(title=f"{experiment} on {group}(N), t = {tt}")
        table.add_column("N", style="cyan", justify="right")
        table.add_column("Mean", justify="right")
        table.add_column("Std. error", justify="right")
        table.add_column("Variance", justify="right")
        for N in Ns:
            cfg = BrownianConfig(
                group,
                N,
                tt,
                step=step or lab.step,
                paths=paths or lab.paths,
                seed=lab.seed if seed is None else seed,
                workers=workers or lab.workers,
                chunk_size=lab.chunk_size,
                reorthonormalize_every=lab.reorthonormalize_every,
            )
            if experiment == "trace":
                stats = mc_estimate(cfg, trace_power(k))
            elif experiment == "deviation":
                stats = mc_estimate(cfg, trace_deviation(k, target))
            elif group == "gl":
                limit = pi_zero(heat_limit(p).at(tt)).to_trace_polynomial()
                stats = mc_l2_distance(heat_finite_N(p, tt, N), limit, cfg)
            else:
                stats = mc_l2_distance(p, concentration_target(p, tt).to_trace_polynomial(), cfg)
            rows.append({
                "experiment": experiment,
                "group": group,
                "N": N,
                "t": tt,
                "k": k,
                "n_paths": stats.n,
                "h": cfg.step,
                "mean_re": stats.mean.real,
                "mean_im": stats.mean.imag,
                "variance": stats.variance,
                "stderr": stats.stderr,
                "seed": cfg.seed,
            })
            table.add_row(str(N), f"{stats.mean.real:.6g}", f"{stats.stderr:.2g}", f"{stats.variance:.3g}")
        console.print(table)

        if out is None:
            out = config.output_path / f"{run_stem(f'mc-{experiment}-{group}')}.csv"
        outputs = [write_csv(out, MC_COLUMNS, rows)]
        flags = {"experiment": experiment, "group": group, "N": list(Ns), "t": tt, "k": k,
                 "poly": poly, "paths": paths, "step": step, "workers": workers}
        finish(out, "mc run", flags, outputs, started, seed=rows[0]["seed"] if rows else seed)
    except (TraceCalcError, ValueError) as e:
        fail(e)


# ============================================================================
# Verification
# ============================================================================


def print_report(report: Any) -> None:
    table = Table(title=f"{report.suite}")
    table.add_column("Check", style="cyan")
    table.add_column("Result", justify="center")
    table.add_column("Detail", style="dim")
    table.add_column("Time", justify="right")
    for check in report.checks:
        status = "[green]pass[/green]" if check.passed else "[red]FAIL[/red]"
        table.add_row(check.name, status, check.detail, f"{check.seconds:.2f}s")
    console.print(table)


@app.command()
def verify(
    suite: List[str] = typer.Option(None, "--suite", "-s", help="magic | laplacian | oracle | concentration"),
    seed: int = typer.Option(0, "--seed", help="Seed for random test matrices"),
):
    """Run verification suites; exit 1 if any check fails."""
    from tracecalc.verify.suites import SUITES, run_suite

    names = suite or list(SUITES)
    unknown = [name for name in names if name not in SUITES]
    if unknown:
        fail(PolynomialParseError(f"unknown suite(s) {', '.join(unknown)}; choose from {', '.join(SUITES)}"))

    failed = False
    for name in names:
        report = run_suite(name, seed)
        print_report(report)
        failed = failed or not report.passed
    if failed:
        console.print("[red]Verification failed[/red]")
        raise typer.Exit(1)
    console.print("[green]✓[/green] All checks passed")


@app.command()
def selftest(
    skip_mc: bool = typer.Option(False, "--skip-mc", help="Symbolic and deterministic checks only"),
    paths: int = typer.Option(None, "--paths", help="Monte Carlo paths per N for the decay run (default 100000)"),
    seed: int = typer.Option(0, "--seed", help="Master seed"),
    workers: int = typer.Option(None, "--workers", "-w", help="Worker threads"),
    no_cache: bool = typer.Option(False, "--no-cache", help="Ignore the semigroup cache"),
):
    """Run every check and print a pass/fail matrix."""
    from tracecalc.config.loader import load_config
    from tracecalc.verify.suites import selftest as run_selftest

    console.print(f"[cyan]{__banner__.format(version=__version__)}[/cyan]")
    lab = load_config().lab
    with cached_semigroup(not no_cache):
        report = run_selftest(
            skip_mc=skip_mc, paths=paths, seed=seed, workers=workers or lab.workers
        )
    print_report(report)
    passed = len(report.checks) - len(report.failures)
    if not report.passed:
        console.print(f"[red]{len(report.failures)} of {len(report.checks)} checks failed[/red]")
        raise typer.Exit(1)
    console.print(f"[green]✓[/green] {passed}/{len(report.checks)} checks passed")


# ============================================================================
# Config
# ============================================================================

config_app = typer.Typer(help="Show configuration")
app.add_typer(config_app, name="config")


@config_app.command("show")
def config_show():
    """Print the effective configuration (file + TRACECALC_* environment)."""
    from tracecalc.config.loader import convert_to_camel, get_config_path, load_config

    path = get_config_path()
    config = load_config()
    source = "" if path.exists() else " [dim](not found, using defaults)[/dim]"
    console.print(f"Config: {path}{source}")
    console.print(f"Cache: {config.cache_path}")
    console.print_json(json.dumps(convert_to_camel(config.model_dump())))


if __name__ == "__main__":
    app()
