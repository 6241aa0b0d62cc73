"""Wall-clock budget for experiment coroutines."""

import asyncio
import functools
import logging
from typing import Any, Awaitable, Callable, TypeVar

from FrameLab.schemas import ExperimentConfig
from FrameLab.utils.exceptions import ExperimentTimeoutError

T = TypeVar("T")

logger = logging.getLogger(__name__)


def experiment_budget(func: Callable[..., Awaitable[T]]) -> Callable[..., Awaitable[T]]:
    """
    Cancel an experiment coroutine once it exceeds the budget of its configuration.

    The wrapped coroutine takes the `ExperimentConfig` as its first argument; ``config.timeout`` (seconds) bounds
    the run, so experiments in one batch each keep their own budget.

    Raises
    ------
    ExperimentTimeoutError
        Naming the experiment kind and its budget, in place of ``asyncio.TimeoutError``.
    """

    @functools.wraps(func)
    async def wrapper(config: ExperimentConfig, *args: Any, **kwargs: Any) -> T:
        try:
            return await asyncio.wait_for(func(config, *args, **kwargs), timeout=config.timeout)
        except asyncio.TimeoutError as exc:
            logger.warning("%s experiment writing to %s exceeded %g s", config.kind, config.output, config.timeout)
            raise ExperimentTimeoutError(f"{config.kind} experiment exceeded its {config.timeout:g} s budget") from exc

    return wrapper
