"""Custom exceptions for the FrameLab package."""

from typing import Optional


class FrameLabError(ValueError):
    """Base class for every error raised by FrameLab's numerical layers."""


class SupportError(FrameLabError):
    """Exception raised when a vector's support does not fit the domain of a finite operator."""

    def __init__(self, max_index: int, dim: int) -> None:
        self.max_index = max_index
        self.dim = dim
        super().__init__(f"support exceeds matrix domain (index {max_index} > dim {dim})")


class FrameError(FrameLabError):
    """Exception raised for ill-posed frame computations (rank deficiency, mismatched lengths)."""


class CarlesonError(FrameLabError):
    """
    Exception raised when an eigenvalue sequence violates a Carleson-system precondition.

    Parameters
    ----------
    message : str
        Description of the violated condition.
    value : float, optional
        The numeric result attached to the failure, e.g. ``0.0`` for a Carleson infimum with a repeated eigenvalue.
    """

    def __init__(self, message: str, value: Optional[float] = None) -> None:
        self.value = value
        super().__init__(message)


class OrbitDivergenceError(FrameLabError):
    """Exception raised when an orbit element exceeds the overflow guard."""

    def __init__(self, step: int, norm: float) -> None:
        self.step = step
        self.norm = norm
        super().__init__(f"orbit diverges (norm {norm:.3e} at step {step})")


class RepresentationError(FrameLabError):
    """Exception raised when an orbit representation cannot be assembled."""


class HypercyclicError(FrameLabError):
    """Exception raised for invalid Rolewicz parameters or hypercyclic plan inputs."""


class ScheduleError(FrameLabError):
    """Exception raised when an alpha schedule cannot be built from its inputs."""


class FloatingRangeError(FrameLabError):
    """Exception raised when a construction needs scale factors outside double precision."""


class ConfigError(FrameLabError):
    """
    Exception raised for an invalid experiment configuration.

    Parameters
    ----------
    field : str
        Name of the offending configuration field.
    message : str
        What is wrong with it.
    """

    def __init__(self, field: str, message: str) -> None:
        self.field = field
        self.message = message
        super().__init__(f"Invalid value for '{field}': {message}")


class ExperimentTimeoutError(Exception):
    """
    Exception raised when an async experiment exceeds its wall-clock budget.

    Raised by the `experiment_budget` decorator in place of ``asyncio.TimeoutError``.
    """
