"""Command-line interface for the FrameLab package."""

# pylint: disable=no-value-for-parameter

import asyncio
import logging
from pathlib import Path
from typing import Iterable, Optional

import click

from FrameLab.builtin_frames import list_builtins
from FrameLab.config import REPORT_FILE_NAME
from FrameLab.config_parsing import build_config, load_batch_file
from FrameLab.entrypoint import run, run_batch
from FrameLab.schemas import RunReport
from FrameLab.utils.exceptions import ConfigError, ExperimentTimeoutError, FrameLabError

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

EXPERIMENT_HELP = {
    "carleson": "Carleson orbit frames: ratio test, Carleson infimum, bounds, excess and tails.",
    "represent": "Representation operator T f_k = f_(k+1) of a frame and its kernel test.",
    "approximate": "Approximate a frame by a suborbit of the scaled left shift.",
    "hypercyclic": "Plan a Rolewicz vector whose suborbit approximates a frame.",
    "diagnostics": "Frame inequality probes, dual reconstruction and decay trends.",
}


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Log debug output.")
def main(verbose: bool) -> None:
    """Frame and operator-orbit experiments with machine-readable reports."""
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING, format=LOG_FORMAT)


def _summarise(report: RunReport, output: Path) -> None:
    for verdict in report.verdicts:
        status = "pass" if verdict.passed else "FAIL"
        click.echo(f"  [{status}] {verdict.name}: {verdict.detail}")
    click.echo(f"Report written to: {output / REPORT_FILE_NAME}")


def _fail_on(reports: Iterable[RunReport]) -> None:
    failing = [f"{r.kind}: {name}" for r in reports for name in r.failing]
    if failing:
        click.echo("Failing invariants:", err=True)
        for line in failing:
            click.echo(f"  {line}", err=True)
        click.get_current_context().exit(1)


def _experiment_command(kind: str) -> click.Command:
    @click.command(name=kind, help=EXPERIMENT_HELP[kind])
    @click.option(
        "--config",
        "-c",
        "config_path",
        type=click.Path(exists=True, dir_okay=False, path_type=Path),
        default=None,
        help="JSON or TOML experiment configuration.",
    )
    @click.option("--out", "-o", type=click.Path(file_okay=False, path_type=Path), default=None,
                  help="Output directory (overrides the configuration).")
    @click.option("--seed", type=int, default=None, help="Seed for randomized checks (overrides the configuration).")
    def command(config_path: Optional[Path], out: Optional[Path], seed: Optional[int]) -> None:
        try:
            config = build_config(kind, config_path, out, seed)
        except ConfigError as exc:
            raise click.UsageError(str(exc)) from exc
        try:
            report = run(config)
        except (FrameLabError, ExperimentTimeoutError) as exc:
            click.echo(f"Error: {exc}", err=True)
            raise click.Abort() from exc
        click.echo(f"{kind}: {len(report.verdicts) - len(report.failing)}/{len(report.verdicts)} verdicts pass")
        _summarise(report, config.output)
        _fail_on([report])

    return command


for _kind in EXPERIMENT_HELP:
    main.add_command(_experiment_command(_kind))


@main.command("list-builtins")
def list_builtins_command() -> None:
    """List the builtin frames usable as frame_source."""
    for signature, description in list_builtins():
        click.echo(f"{signature:<24} {description}")


@main.command("batch")
@click.argument("batch_file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
def batch_command(batch_file: Path) -> None:
    """Run every experiment listed in BATCH_FILE concurrently."""
    try:
        configs = load_batch_file(batch_file)
    except ConfigError as exc:
        raise click.UsageError(str(exc)) from exc
    try:
        reports = asyncio.run(run_batch(configs))
    except (FrameLabError, ExperimentTimeoutError) as exc:
        click.echo(f"Error: {exc}", err=True)
        raise click.Abort() from exc
    for config, report in zip(configs, reports):
        click.echo(f"{config.kind} -> {config.output}")
        _summarise(report, config.output)
    _fail_on(reports)


if __name__ == "__main__":
    main()
