"""Reading experiment configuration files and merging them with command-line values."""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from FrameLab.config import DEFAULT_OUTPUT_DIR
from FrameLab.schemas import ExperimentConfig
from FrameLab.utils.exceptions import ConfigError

try:
    import tomllib  # type: ignore[import]
except ImportError:  # pragma: no cover
    import tomli as tomllib  # type: ignore[no-redef]

logger = logging.getLogger(__name__)

TOP_LEVEL_KEYS = ("kind", "output", "seed", "timeout", "parameters")


def _parse_json(text: str, path: Path) -> Dict[str, Any]:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"invalid JSON in {path}: {exc}") from exc


def _parse_toml(text: str, path: Path) -> Dict[str, Any]:
    try:
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError("config", f"invalid TOML in {path}: {exc}") from exc


def load_config_file(path: Path) -> Dict[str, Any]:
    """
    Read a JSON or TOML configuration file into a mapping.

    The format follows the extension; for any other extension JSON is tried first, then TOML.

    Raises
    ------
    ConfigError
        If the file cannot be read or parsed, or does not hold a table at the top level.
    """
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc.strerror or exc}") from exc

    suffix = path.suffix.lower()
    if suffix == ".json":
        data = _parse_json(text, path)
    elif suffix == ".toml":
        data = _parse_toml(text, path)
    else:
        try:
            data = json.loads(text)
        except json.JSONDecodeError:
            logger.debug("%s is not JSON, trying TOML", path)
            data = _parse_toml(text, path)

    if not isinstance(data, dict):
        raise ConfigError("config", f"{path} must hold a table of settings")
    return data


def _normalise(data: Dict[str, Any]) -> Dict[str, Any]:
    # flat parameter keys next to the top-level keys are folded into the parameter table
    flat = {k: v for k, v in data.items() if k not in TOP_LEVEL_KEYS}
    merged = {k: data[k] for k in TOP_LEVEL_KEYS if k in data}
    if flat:
        parameters = dict(merged.get("parameters") or {})
        clash = sorted(set(flat) & set(parameters))
        if clash:
            raise ConfigError(f"parameters.{clash[0]}", "given both at top level and in [parameters]")
        parameters.update(flat)
        merged["parameters"] = parameters
    return merged


def _config_error(exc: ValidationError, prefix: str = "") -> ConfigError:
    first = exc.errors()[0]
    field = ".".join(str(part) for part in first["loc"]) or "parameters"
    if prefix:
        field = f"{prefix}.{field}" if first["loc"] else prefix
    return ConfigError(field, first["msg"])


def validate_config(data: Dict[str, Any]) -> ExperimentConfig:
    """
    Validate a configuration mapping, including the parameters of its kind.

    Raises
    ------
    ConfigError
        Naming the first offending field, with parameter fields prefixed by ``parameters.``.
    """
    try:
        config = ExperimentConfig.model_validate(_normalise(data))
    except ValidationError as exc:
        raise _config_error(exc) from exc
    try:
        config.typed_parameters()
    except ValidationError as exc:
        raise _config_error(exc, "parameters") from exc
    return config


def build_config(
    kind: Optional[str] = None,
    config_path: Optional[Path] = None,
    output: Optional[Path] = None,
    seed: Optional[int] = None,
) -> ExperimentConfig:
    """
    Merge command-line values, the configuration file and the defaults, in that order of precedence.

    Parameters
    ----------
    kind : str, optional
        Experiment kind chosen by the subcommand.
    config_path : Path, optional
        JSON or TOML configuration file.
    output : Path, optional
        Output directory overriding the file's ``output``.
    seed : int, optional
        Seed overriding the file's ``seed``.

    Raises
    ------
    ConfigError
        If the file's kind contradicts ``kind`` or any value fails validation.
    """
    data: Dict[str, Any] = load_config_file(config_path) if config_path else {}
    data = dict(data)
    if kind is not None:
        if "kind" in data and data["kind"] != kind:
            raise ConfigError("kind", f"file declares {data['kind']!r} but the command runs {kind!r}")
        data["kind"] = kind
    if output is not None:
        data["output"] = output
    if seed is not None:
        data["seed"] = seed
    config = validate_config(data)
    logger.debug("resolved config: %s", config.model_dump(mode="json"))
    return config


def load_batch_file(path: Path) -> List[ExperimentConfig]:
    """
    Read a batch file holding an ``experiments`` list of configuration tables.

    Entries without ``output`` write to ``DEFAULT_OUTPUT_DIR/<position>-<kind>``. Output directories must be
    distinct.

    Raises
    ------
    ConfigError
        If the list is missing or empty, an entry is invalid (the field is prefixed with its position) or two
        entries share an output directory.
    """
    data = load_config_file(path)
    entries = data.get("experiments")
    if not isinstance(entries, list) or not entries:
        raise ConfigError("experiments", "a non-empty list of experiment tables is required")

    configs = []
    for position, entry in enumerate(entries):
        if not isinstance(entry, dict):
            raise ConfigError(f"experiments.{position}", "each experiment must be a table")
        entry = dict(entry)
        entry.setdefault("output", DEFAULT_OUTPUT_DIR / f"{position:02d}-{entry.get('kind', 'experiment')}")
        try:
            configs.append(validate_config(entry))
        except ConfigError as exc:
            raise ConfigError(f"experiments.{position}.{exc.field}", exc.message) from exc

    outputs = [c.output.resolve() for c in configs]
    if len(set(outputs)) != len(outputs):
        raise ConfigError("experiments", "output directories must be distinct")
    return configs
