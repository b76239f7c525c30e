"""Command-line harness.

Commands: perm, simulate, resources, reproduce, oracle.  Exit codes: 0 on
success, 2 on input errors, 3 on guard violations (dimension limits and the
oracle's state-space guard).
"""

from __future__ import annotations

import json
import time
from importlib import resources as importlib_resources
from pathlib import Path

import click

from . import __version__
from .fock import fock_oracle_probability
from .matrices import hpsm_from
from .permanent import DimensionLimitError, METHODS, permanent_exact
from .photonics import click_probability_interfering
from .reproduce import TARGETS, run_target
from .resources import FLAVORS, ResourceQuery, cost_comparison, resolve
from .sampling import SamplingPlan, estimate_permanent_thermal
from .serialization import (
    ConfigError,
    append_run_record,
    default_log_path,
    load_experiment_config,
    matrix_from_json,
    parse_experiment_config,
    run_record,
    write_csv,
)


class GuardViolation(click.ClickException):
    exit_code = 3


def _global_options(func):
    """Accept the global flags after the subcommand as well."""
    func = click.option("--seed", "seed_", type=int, default=None, hidden=True)(func)
    func = click.option("--partitions", "partitions_", type=int, default=None, hidden=True)(func)
    func = click.option(
        "--out", "out_", type=click.Path(file_okay=False, path_type=Path), default=None, hidden=True
    )(func)
    func = click.option(
        "--format", "fmt_", type=click.Choice(["json", "csv"]), default=None, hidden=True
    )(func)
    return func


def _apply_overrides(ctx, seed_, partitions_, out_, fmt_):
    if seed_ is not None:
        ctx.obj["seed"] = seed_
    if partitions_ is not None:
        ctx.obj["partitions"] = partitions_
    if out_ is not None:
        ctx.obj["out_dir"] = out_
    if fmt_ is not None:
        ctx.obj["fmt"] = fmt_


def _echo_payload(payload: dict, fmt: str, out_dir: Path, name: str):
    if fmt == "csv":
        flat = {k: v for k, v in payload.items() if not isinstance(v, (dict, list))}
        path = write_csv(out_dir / f"{name}.csv", list(flat.keys()), [flat])
        click.echo(f"wrote {path}")
    click.echo(json.dumps(payload, indent=2, default=str))


@click.group()
@click.version_option(version=__version__, prog_name="permoptics")
@click.option("--seed", type=int, default=None, help="Override the master seed.")
@click.option("--partitions", type=int, default=None, help="Override the partition count.")
@click.option(
    "--out",
    "out_dir",
    type=click.Path(file_okay=False, path_type=Path),
    default=Path("reports"),
    show_default=True,
    help="Output directory for reports and the run log.",
)
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["json", "csv"]),
    default="json",
    show_default=True,
    help="Output format for single results.",
)
@click.pass_context
def main(ctx, seed, partitions, out_dir, fmt):
    """Permanent estimation with simulated thermal-light interferometry."""
    ctx.ensure_object(dict)
    ctx.obj.update(seed=seed, partitions=partitions, out_dir=out_dir, fmt=fmt)


def _load_json_file(path: Path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"cannot parse {path}: {exc}")


@main.command()
@click.argument("matrix_file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--method", type=click.Choice(list(METHODS)), default="ryser", show_default=True)
@_global_options
@click.pass_context
def perm(ctx, matrix_file, method, seed_, partitions_, out_, fmt_):
    """Exact permanent of a matrix file ({"dim", "re", "im"})."""
    _apply_overrides(ctx, seed_, partitions_, out_, fmt_)
    obj = _load_json_file(matrix_file)
    try:
        matrix = matrix_from_json(obj)
    except ConfigError as exc:
        raise click.UsageError(str(exc))
    started = time.perf_counter()
    try:
        value = permanent_exact(matrix, method)
    except DimensionLimitError as exc:
        raise GuardViolation(str(exc))
    elapsed = time.perf_counter() - started
    payload = {
        "permanent_re": value.real,
        "permanent_im": value.imag,
        "abs": abs(value),
        "method": method,
        "dim": matrix.shape[0],
        "seconds": elapsed,
    }
    click.echo(f"permanent = {value:.12g} ({method}, {elapsed * 1e3:.2f} ms)")
    _echo_payload(payload, ctx.obj["fmt"], ctx.obj["out_dir"], "perm")


def _resolve_config(config_file: Path | None, bundled: str | None):
    if (config_file is None) == (bundled is None):
        raise click.UsageError("provide exactly one of CONFIG_FILE or --bundled NAME")
    if bundled is not None:
        ref = importlib_resources.files("permoptics.data").joinpath(f"{bundled}.json")
        if not ref.is_file():
            available = [p.stem for p in importlib_resources.files("permoptics.data").iterdir()]
            raise click.UsageError(f"no bundled config {bundled!r}; available: {available}")
        try:
            return parse_experiment_config(json.loads(ref.read_text()))
        except ConfigError as exc:
            raise click.UsageError(str(exc))
    try:
        return load_experiment_config(config_file)
    except ConfigError as exc:
        raise click.UsageError(str(exc))


@main.command()
@click.argument("config_file", required=False, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--bundled", default=None, help="Name of a bundled config (e.g. table1_row1).")
@_global_options
@click.pass_context
def simulate(ctx, config_file, bundled, seed_, partitions_, out_, fmt_):
    """Run the seeded coincidence simulation described by a config."""
    _apply_overrides(ctx, seed_, partitions_, out_, fmt_)
    config = _resolve_config(config_file, bundled)
    if config.plan is None:
        raise click.UsageError("config has no sampling plan")
    plan = config.plan
    if ctx.obj["seed"] is not None or ctx.obj["partitions"] is not None:
        plan = SamplingPlan(
            n_samples=plan.n_samples,
            seed=ctx.obj["seed"] if ctx.obj["seed"] is not None else plan.seed,
            partitions=ctx.obj["partitions"] if ctx.obj["partitions"] is not None else plan.partitions,
            confidence=plan.confidence,
        )
    started = time.perf_counter()
    result = estimate_permanent_thermal(config.unitary, config.bank, plan)
    elapsed = time.perf_counter() - started
    exact = hpsm_from(config.unitary, config.bank.mus).permanent()
    record = run_record(
        config.config_hash,
        {**result.as_record(config.config_hash), "exact_permanent": exact},
        elapsed,
        __version__,
    )
    log_path = default_log_path(ctx.obj["out_dir"])
    append_run_record(log_path, record)
    click.echo(
        f"permanent estimate = {result.perm_estimate:.6g} "
        f"(ci {result.perm_ci[0]:.6g} .. {result.perm_ci[1]:.6g}, "
        f"exact {exact:.6g}, k={result.k}, n={result.n})"
    )
    if result.small_count_warning:
        click.echo("warning: success count below the normal-approximation regime", err=True)
    click.echo(f"run appended to {log_path}")
    _echo_payload(record, ctx.obj["fmt"], ctx.obj["out_dir"], "simulate")


def _float_list(raw: str | None, name: str) -> list[float] | None:
    if raw is None:
        return None
    try:
        return [float(x) for x in raw.split(",")]
    except ValueError:
        raise click.UsageError(f"cannot parse {name} {raw!r}")


@main.command()
@click.option("--p", "p_value", default=None, help="Click probability (thermal flavors); comma list sweeps.")
@click.option("--perm-u2", default=None, help="|Perm U|^2 (unitary flavors); comma list sweeps.")
@click.option("--epsilon", default="0.1", show_default=True, help="Error target; comma list sweeps.")
@click.option("--delta", default="0.95", show_default=True, help="Confidence level; comma list sweeps.")
@click.option(
    "--flavor",
    type=click.Choice(list(FLAVORS)),
    default=None,
    help="Defaults to the multiplicative flavor matching the probability source.",
)
@click.option("--mus", default=None, help="Comma-separated spectrum for the almost-multiplicative thermal flavor.")
@click.option("--mu-max", type=float, default=None, help="Rescaling factor override (defaults to max of --mus).")
@click.option("--cost-dim", type=int, default=None, help="Also emit the cost comparison up to this dimension.")
@click.option("--eta", type=float, default=1.0, show_default=True, help="Channel efficiency for the cost comparison.")
@_global_options
@click.pass_context
def resources(ctx, p_value, perm_u2, epsilon, delta, flavor, mus, mu_max, cost_dim, eta, seed_, partitions_, out_, fmt_):
    """Required sample counts for an error target.

    Passing comma-separated values to --p/--perm-u2/--epsilon/--delta sweeps
    their grid and writes resources_sweep.csv instead of a single result.
    """
    _apply_overrides(ctx, seed_, partitions_, out_, fmt_)
    if (p_value is None) == (perm_u2 is None):
        raise click.UsageError("provide exactly one probability source: --p or --perm-u2")
    if flavor is None:
        flavor = "multiplicative_thermal" if p_value is not None else "multiplicative_unitary"
    probs = _float_list(p_value, "--p") or _float_list(perm_u2, "--perm-u2")
    epsilons = _float_list(epsilon, "--epsilon")
    deltas = _float_list(delta, "--delta")
    mus_tuple = tuple(_float_list(mus, "--mus")) if mus is not None else None

    def run_query(prob: float, eps: float, dlt: float):
        query = ResourceQuery(
            epsilon=eps,
            delta=dlt,
            flavor=flavor,
            p=prob if p_value is not None else None,
            perm_u2=prob if perm_u2 is not None else None,
            mus=mus_tuple,
            mu_max=mu_max,
        )
        return resolve(query)

    try:
        if len(probs) * len(epsilons) * len(deltas) > 1:
            rows = []
            for prob in probs:
                for eps in epsilons:
                    for dlt in deltas:
                        est = run_query(prob, eps, dlt)
                        rows.append(
                            {
                                "probability": prob,
                                "epsilon": eps,
                                "delta": dlt,
                                "flavor": flavor,
                                "n_required": int(est.n_required) if est.finite else "",
                                "n_raw": est.n_raw if est.finite else "",
                                "z_c": est.z_c,
                            }
                        )
            path = write_csv(
                Path(ctx.obj["out_dir"]) / "resources_sweep.csv",
                ["probability", "epsilon", "delta", "flavor", "n_required", "n_raw", "z_c"],
                rows,
            )
            click.echo(f"wrote {path} ({len(rows)} rows)")
            return
        estimate = run_query(probs[0], epsilons[0], deltas[0])
    except ValueError as exc:
        raise click.UsageError(str(exc))
    payload = estimate.as_dict()
    if estimate.finite:
        click.echo(f"required samples N = {int(estimate.n_required)} (z_c = {estimate.z_c:.5f})")
    else:
        click.echo(f"required samples N = infinite ({estimate.note})")
    if cost_dim is not None:
        comparison = cost_comparison(cost_dim, eta)
        payload["cost_comparison"] = comparison
        if ctx.obj["fmt"] == "csv":
            path = write_csv(
                Path(ctx.obj["out_dir"]) / "cost_comparison.csv",
                ["dim", "photonic_cost", "classical_cost", "ratio"],
                [
                    {
                        "dim": comparison["dims"][i],
                        "photonic_cost": comparison["photonic_cost"][i],
                        "classical_cost": comparison["classical_cost"][i],
                        "ratio": comparison["ratio"][i],
                    }
                    for i in range(len(comparison["dims"]))
                ],
            )
            click.echo(f"wrote {path}")
    _echo_payload(payload, ctx.obj["fmt"], ctx.obj["out_dir"], "resources")


@main.command()
@click.argument("target", type=click.Choice(list(TARGETS)))
@click.option("--fast", is_flag=True, help="Shrink the stochastic sweeps (smoke-test scale).")
@click.option("--no-figures", is_flag=True, help="Skip figure rendering, write CSV only.")
@_global_options
@click.pass_context
def reproduce(ctx, target, fast, no_figures, seed_, partitions_, out_, fmt_):
    """Regenerate a bundled report: table1, fig3, visibility, haar, or bounds."""
    _apply_overrides(ctx, seed_, partitions_, out_, fmt_)
    report = run_target(
        target,
        ctx.obj["out_dir"],
        seed=ctx.obj["seed"],
        fast=fast,
        render=not no_figures,
    )
    click.echo(f"{target}: {report.summary}")
    click.echo(f"wrote {report.csv_path}")
    for fig in report.figure_paths:
        click.echo(f"wrote {fig}")


@main.command()
@click.argument("config_file", required=False, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--bundled", default=None, help="Name of a bundled config.")
@_global_options
@click.pass_context
def oracle(ctx, config_file, bundled, seed_, partitions_, out_, fmt_):
    """Brute-force Fock evaluation of a config's click probability."""
    _apply_overrides(ctx, seed_, partitions_, out_, fmt_)
    config = _resolve_config(config_file, bundled)
    model = config.detection
    try:
        probability, truncation = fock_oracle_probability(config.unitary, config.bank, model)
    except ValueError as exc:
        raise GuardViolation(str(exc))
    reference = click_probability_interfering(config.unitary, config.bank)
    payload = {
        "oracle_probability": probability,
        "truncation_bound": truncation,
        "closed_form_probability": reference,
        "difference": abs(probability - reference),
        "detection": {"kind": model.kind, "cutoff": model.fock_cutoff},
        "config_hash": config.config_hash,
    }
    click.echo(
        f"oracle p = {probability:.9g} (+- {truncation:.3g} truncation), "
        f"closed form {reference:.9g}"
    )
    _echo_payload(payload, ctx.obj["fmt"], ctx.obj["out_dir"], "oracle")


if __name__ == "__main__":
    main()
