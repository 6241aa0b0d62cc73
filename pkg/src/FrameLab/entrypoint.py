"""Main entry point for running experiments and writing their output files."""

import asyncio
import logging
import time
from pathlib import Path
from typing import List, Sequence

from FrameLab.config import REPORT_FILE_NAME, TIMING_FILE_NAME
from FrameLab.experiments import run_experiment
from FrameLab.output_formatters import write_csv, write_json
from FrameLab.schemas import ExperimentConfig, RunReport
from FrameLab.utils.exceptions import ConfigError
from FrameLab.utils.timeout_wrapper import experiment_budget

logger = logging.getLogger(__name__)


def write_outputs(report: RunReport, output: Path) -> List[Path]:
    """
    Write report.json, timing.json, one CSV per table and one JSON per artifact under ``output``.

    report.json holds no wall time or output path, so it is identical for identical configurations.
    """
    written = [write_json(output / REPORT_FILE_NAME, report)]
    written.append(write_json(output / TIMING_FILE_NAME, {"kind": report.kind, "wall_time": report.wall_time}))
    for name, table in report.tables.items():
        written.append(write_csv(output / f"{name}.csv", table.header, table.rows))
    for name, artifact in report.artifacts.items():
        written.append(write_json(output / f"{name}.json", artifact))
    logger.debug("wrote %s", ", ".join(str(p) for p in written))
    return written


def _timed_run(config: ExperimentConfig) -> RunReport:
    start = time.perf_counter()
    report = run_experiment(config)
    report.wall_time = time.perf_counter() - start
    return report


@experiment_budget
async def run_async(config: ExperimentConfig, write: bool = True) -> RunReport:
    """
    Run one experiment in a worker thread and write its outputs.

    Parameters
    ----------
    config : ExperimentConfig
        Validated configuration.
    write : bool
        Write the output files under ``config.output`` (default True).

    Returns
    -------
    RunReport

    Raises
    ------
    ExperimentTimeoutError
        If the experiment runs longer than ``config.timeout`` seconds.
    """
    logger.info("running %s experiment (seed %d)", config.kind, config.seed)
    report = await asyncio.to_thread(_timed_run, config)
    if write:
        write_outputs(report, config.output)
    return report


def run(config: ExperimentConfig, write: bool = True) -> RunReport:
    """Synchronous version of `run_async`."""
    return asyncio.run(run_async(config, write))


async def run_batch(configs: Sequence[ExperimentConfig], write: bool = True) -> List[RunReport]:
    """
    Run several experiments concurrently, each writing to its own output directory.

    Raises
    ------
    ConfigError
        If two configurations share an output directory.
    """
    outputs = [c.output.resolve() for c in configs]
    if len(set(outputs)) != len(outputs):
        raise ConfigError("output", "batch experiments need distinct output directories")
    return list(await asyncio.gather(*(run_async(c, write) for c in configs)))
