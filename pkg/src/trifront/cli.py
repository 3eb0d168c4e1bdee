"""Command-line entry points: ingest -> optimize -> filter/report -> serve.

Each subcommand is a thin wrapper over the library; all state moves through
the canonical files (instance JSON, run config, front JSON). Exit codes:
0 success, 1 failure, 2 usage error, 3 empty region of interest.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import numpy as np

from . import engine, frontio, market_data, reporting
from .portfolio import Bounds
from .preferences import ProfileConfig, UnknownProfileError

EXIT_EMPTY_REGION = 3


def _fail(message: str) -> "click.ClickException":
    return click.ClickException(message)


def _load_profiles(path: str | None) -> ProfileConfig:
    if path is None:
        return ProfileConfig()
    try:
        return ProfileConfig.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        raise _fail(f"cannot load profiles file {path}: {exc}") from None


@click.group()
@click.version_option(package_name="trifront")
def main() -> None:
    """Tri-criterion portfolio front toolkit."""


@main.command()
@click.option("--returns", "returns_csv", required=True, type=click.Path(), help="Returns CSV: header of asset ids, one row per period.")
@click.option("--carbon", "carbon_csv", required=True, type=click.Path(), help="Carbon CSV with header asset_id,carbon_score.")
@click.option("--out", "out_path", required=True, type=click.Path(), help="Instance JSON to write.")
@click.option("--period-label", default="monthly", show_default=True)
@click.option("--carbon-range", nargs=2, type=float, default=market_data.DEFAULT_CARBON_RANGE,
              show_default=True, help="Valid carbon score bounds (lo hi).")
def ingest(returns_csv: str, carbon_csv: str, out_path: str, period_label: str,
           carbon_range: tuple[float, float]) -> None:
    """Build the instance file from returns and carbon-score CSVs."""
    try:
        rets = market_data.load_returns(returns_csv, period_label=period_label)
        scores = market_data.load_carbon_scores(carbon_csv)
        carbon = market_data.align_carbon(rets, scores)
        universe = market_data.estimate_moments(rets, carbon, tuple(carbon_range))
        digest = market_data.save_instance(universe, out_path)
    except market_data.DataError as exc:
        raise _fail(str(exc)) from None
    click.echo(f"wrote {out_path}: {universe.n_assets} assets, "
               f"{rets.n_periods} periods, digest {digest}")


def _assemble_run(instance_path: str, config_path: str | None, overrides: dict):
    universe, digest = market_data.load_instance(instance_path)
    mapping: dict[str, str] = {}
    if config_path is not None:
        try:
            mapping = engine.parse_flat_config(Path(config_path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise _fail(f"cannot read config file: {exc}") from None
    lower = float(mapping.pop("lower_bound", 0.0))
    upper = float(mapping.pop("upper_bound", 1.0))
    for key in ("lower_bound", "upper_bound"):
        if overrides.get(key) is not None:
            value = overrides.pop(key)
            lower, upper = (value, upper) if key == "lower_bound" else (lower, value)
        else:
            overrides.pop(key, None)
    for key, value in overrides.items():
        if value is not None:
            mapping[key] = value
    cfg = engine.EvMogaConfig.from_mapping(mapping)
    bounds = Bounds(np.full(universe.n_assets, lower), np.full(universe.n_assets, upper))
    return universe, digest, cfg, bounds


def _echo_anchors(arch) -> None:
    for axis, label in enumerate(("min risk", "max ret", "min carbon")):
        a = arch.anchor_for_axis(axis)
        if a is not None:
            o = a.objectives
            click.echo(f"  anchor {label}: risk={o.risk:.6g} ret={o.ret:.6g} carbon={o.carbon:.6g}")


run_option_specs = [
    ("--seed", "seed", int),
    ("--nind-p", "nind_p", int),
    ("--nind-ga", "nind_ga", int),
    ("--k-max", "k_max", int),
    ("--p-cm", "p_cm", float),
    ("--n-box", "n_box", int),
    ("--recomb-extension", "recomb_extension", float),
    ("--mutation-scale", "mutation_scale", float),
    ("--checkpoint-every", "checkpoint_every", int),
    ("--lower-bound", "lower_bound", float),
    ("--upper-bound", "upper_bound", float),
]


def _with_run_options(cmd):
    for flag, name, kind in reversed(run_option_specs):
        cmd = click.option(flag, name, type=kind, default=None,
                           help="Override the config file value.")(cmd)
    return cmd


@main.command()
@click.option("--instance", "instance_path", required=True, type=click.Path())
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="Flat key = value run configuration.")
@click.option("--out", "out_path", required=True, type=click.Path())
@_with_run_options
def optimize(instance_path: str, config_path: str | None, out_path: str, **overrides) -> None:
    """Run the optimizer and write the front JSON."""
    try:
        universe, digest, cfg, bounds = _assemble_run(instance_path, config_path, overrides)
        result = engine.run(universe, bounds, cfg)
    except (market_data.DataError, engine.EngineError, ValueError) as exc:
        raise _fail(str(exc)) from None
    export = frontio.build_front_export(result, digest, universe.asset_ids)
    frontio.save_front(export, out_path)
    click.echo(f"wrote {out_path}: {len(result.archive)} archive entries, "
               f"{result.evaluations} evaluations in {result.wall_time_s:.1f}s")
    _echo_anchors(result.archive)


def _resolve_report(front_path: str, green: str | None, risk: str | None,
                    p_g: float | None, p_r: float | None, profiles_path: str | None):
    front = frontio.load_front(front_path)
    profiles = _load_profiles(profiles_path)
    if green is not None and risk is not None and p_g is None and p_r is None:
        try:
            result = reporting.analyze(front, profiles, green, risk)
        except UnknownProfileError as exc:
            raise _fail(str(exc)) from None
    elif p_g is not None and p_r is not None and green is None and risk is None:
        result = reporting.analyze_thresholds(front, p_g, p_r)
    else:
        raise click.UsageError("pass either --green and --risk labels, or --p-g and --p-r thresholds")
    return front, result


threshold_options = [
    click.option("--green", default=None, help="Green profile label (e.g. weak)."),
    click.option("--risk", default=None, help="Risk profile label (e.g. conservative)."),
    click.option("--p-g", type=float, default=None, help="Raw carbon aspiration threshold."),
    click.option("--p-r", type=float, default=None, help="Raw risk aspiration threshold."),
    click.option("--profiles", "profiles_path", type=click.Path(), default=None,
                 help="JSON file with label -> percentile maps."),
]


def _with_threshold_options(cmd):
    for opt in reversed(threshold_options):
        cmd = opt(cmd)
    return cmd


@main.command("filter")
@click.option("--front", "front_path", required=True, type=click.Path())
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="Write the region JSON here instead of stdout.")
@_with_threshold_options
def filter_cmd(front_path: str, out_path: str | None, green: str | None, risk: str | None,
               p_g: float | None, p_r: float | None, profiles_path: str | None) -> None:
    """Resolve thresholds and list the region-of-interest entry ids."""
    try:
        front, result = _resolve_report(front_path, green, risk, p_g, p_r, profiles_path)
    except frontio.FrontFormatError as exc:
        raise _fail(str(exc)) from None
    boxes = {e.box for e in result.region.entries}
    payload = {
        "status": "empty_region" if result.region.is_empty else "ok",
        "thresholds": {"p_g": result.filter.p_g, "p_r": result.filter.p_r},
        "entry_ids": [i for i, e in enumerate(front.entries) if e.box in boxes],
    }
    text = json.dumps(payload, indent=1)
    if out_path is not None:
        Path(out_path).write_text(text + "\n", encoding="utf-8")
    else:
        click.echo(text)
    if result.region.is_empty:
        click.echo("aspirations infeasible on this front", err=True)
        sys.exit(EXIT_EMPTY_REGION)


@main.command()
@click.option("--front", "front_path", required=True, type=click.Path())
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="Write the table here as well as stdout.")
@click.option("--plot-data", "plot_path", type=click.Path(), default=None,
              help="Write scatter points with region flags to this JSON file.")
@_with_threshold_options
def report(front_path: str, out_path: str | None, plot_path: str | None,
           green: str | None, risk: str | None, p_g: float | None, p_r: float | None,
           profiles_path: str | None) -> None:
    """Print the representatives table and emit plot data."""
    try:
        front, result = _resolve_report(front_path, green, risk, p_g, p_r, profiles_path)
    except frontio.FrontFormatError as exc:
        raise _fail(str(exc)) from None
    text = reporting.render_report(front, result, green, risk)
    click.echo(text, nl=False)
    if out_path is not None:
        Path(out_path).write_text(text, encoding="utf-8")
    if plot_path is not None:
        Path(plot_path).write_text(
            json.dumps(reporting.plot_data(front, result), indent=1) + "\n", encoding="utf-8")
    if result.region.is_empty:
        sys.exit(EXIT_EMPTY_REGION)


@main.command()
@click.option("--front", "front_path", type=click.Path(), default=None,
              help="Serve a precomputed front (read-only mode).")
@click.option("--instance", "instance_path", type=click.Path(), default=None,
              help="Live mode: optimize this instance in the background.")
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--profiles", "profiles_path", type=click.Path(), default=None)
@click.option("--ui-dir", type=click.Path(), default=None,
              help="Directory with the built explorer UI to mount at /ui.")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
@_with_run_options
def serve(front_path: str | None, instance_path: str | None, config_path: str | None,
          profiles_path: str | None, ui_dir: str | None, host: str, port: int,
          **overrides) -> None:
    """Serve the front-explorer HTTP API (and UI when built)."""
    import uvicorn

    from .service import LiveRunner, create_app

    profiles = _load_profiles(profiles_path)
    if (front_path is None) == (instance_path is None):
        raise click.UsageError("pass exactly one of --front or --instance")
    try:
        if front_path is not None:
            front = frontio.load_front(front_path)
            app = create_app(front, profiles=profiles, ui_dir=ui_dir)
        else:
            universe, digest, cfg, bounds = _assemble_run(instance_path, config_path, overrides)
            live = LiveRunner(universe, bounds, cfg, digest)
            app = create_app(None, profiles=profiles, live=live, ui_dir=ui_dir)
            live.start()
    except (market_data.DataError, engine.EngineError, frontio.FrontFormatError, ValueError) as exc:
        raise _fail(str(exc)) from None
    uvicorn.run(app, host=host, port=port, log_level="info")


if __name__ == "__main__":
    main()
