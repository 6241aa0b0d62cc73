"""
Serialization of FrameLab results.

JSON is emitted by a small deterministic writer: keys keep insertion order, floats are printed with
``FLOAT_DIGITS`` significant digits so they round-trip exactly, and non-finite floats become ``null``.
"""

import csv
import dataclasses
import io
import json
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence

import numpy as np
from pydantic import BaseModel

from FrameLab.approxrep import PipelineResult
from FrameLab.config import FLOAT_DIGITS
from FrameLab.frames import ApproxReport, Frame, FrameBounds
from FrameLab.hypercyclic import HypercyclicPlan
from FrameLab.seqspace import SeqVec
from FrameLab.utils.exceptions import FrameError

_FLOAT_FORMAT = f".{FLOAT_DIGITS}g"


def format_float(value: float) -> str:
    if not math.isfinite(value):
        return "null"
    text = format(value, _FLOAT_FORMAT)
    # keep floats recognisable as floats in JSON readers
    if "e" not in text and "." not in text:
        text += ".0"
    return text


def to_plain(value: Any) -> Any:
    """Convert numpy scalars, complex numbers, dataclasses, pydantic models and paths into JSON-ready values."""
    if isinstance(value, BaseModel):
        return to_plain(value.model_dump(mode="python", by_alias=True))
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: to_plain(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, dict):
        return {str(k): to_plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_plain(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, SeqVec):
        return seqvec_to_list(value)
    if isinstance(value, Path):
        return str(value)
    return value


def _emit(value: Any, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{pad}{json.dumps(k, ensure_ascii=False)}: {_emit(v, indent, level + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(value, list):
        if not value:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in value):
            return "[" + ", ".join(_emit(v, indent, level + 1) for v in value) + "]"
        return "[\n" + ",\n".join(pad + _emit(v, indent, level + 1) for v in value) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps(value: Any, indent: int = 2) -> str:
    """Deterministic JSON text (with trailing newline) for ``value``."""
    return _emit(to_plain(value), indent, 0) + "\n"


def write_json(path: Path, value: Any) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(value), encoding="utf-8")
    return path


def format_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_float(float(v)) if isinstance(v, (float, np.floating)) else to_plain(v) for v in row])
    return buffer.getvalue()


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_csv(header, rows), encoding="utf-8")
    return path


def seqvec_to_list(v: SeqVec) -> List[List[Any]]:
    return [[int(i), float(z.real), float(z.imag)] for i, z in v.to_pairs()]


def seqvec_from_list(entries: Sequence[Sequence[Any]]) -> SeqVec:
    try:
        return SeqVec([int(e[0]) for e in entries], [complex(float(e[1]), float(e[2])) for e in entries])
    except (IndexError, TypeError, ValueError) as exc:
        raise FrameError(f"malformed sequence entries: {exc}") from exc


def frame_to_dict(frame: Frame) -> Dict[str, Any]:
    """``{label, ambient_dim, elements: [[[index, re, im], ...], ...]}``."""
    return {
        "label": frame.label,
        "ambient_dim": frame.ambient_dim,
        "elements": [seqvec_to_list(e) for e in frame.elements],
    }


def frame_from_dict(data: Dict[str, Any]) -> Frame:
    try:
        elements = tuple(seqvec_from_list(e) for e in data["elements"])
        return Frame(elements, int(data.get("ambient_dim", 0)), str(data.get("label", "")))
    except KeyError as exc:
        raise FrameError(f"frame JSON lacks {exc}") from exc


def bounds_to_dict(bounds: FrameBounds) -> Dict[str, Any]:
    return {
        "lower": bounds.lower,
        "upper": bounds.upper,
        "span_dim": bounds.span_dim,
        "ambient_dim": bounds.ambient_dim,
        "span_lower": bounds.span_lower,
        "subspace_frame": bounds.subspace_frame,
        "resolved": bounds.resolved,
    }


def approx_report_to_dict(report: ApproxReport) -> Dict[str, Any]:
    return {
        "epsilon": report.epsilon,
        "verdict": report.verdict,
        "synthesis_gap": report.synthesis_gap,
        "per_element_errors": list(report.per_element_errors),
        "bound_interval": list(report.bound_interval),
        "reference_bounds": bounds_to_dict(report.reference_bounds),
        "approx_bounds": bounds_to_dict(report.approx_bounds),
        "approx_bounds_full": bounds_to_dict(report.approx_bounds_full),
        "leakage_norm": report.leakage_norm,
        "bounds_within_interval": report.bounds_within_interval,
        "excess_match": report.excess_match,
        "reference_excess": report.reference_excess,
        "approx_excess": report.approx_excess,
        "approx_excess_full": report.approx_excess_full,
        "frame_op_gap": report.frame_op_gap,
        "frame_op_gap_bound": report.frame_op_gap_bound,
        "inv_frame_op_gap": report.inv_frame_op_gap,
        "inv_frame_op_gap_bound": report.inv_frame_op_gap_bound,
        "perturbation_applicable": report.perturbation_applicable,
        "flags": list(report.flags),
    }


def plan_to_dict(plan: HypercyclicPlan) -> Dict[str, Any]:
    return {
        "a": plan.a,
        "epsilon": plan.epsilon,
        "alphas": list(plan.alphas),
        "phi": seqvec_to_list(plan.phi),
        "certified_errors": list(plan.certified_errors),
    }


def pipeline_to_dict(result: PipelineResult) -> Dict[str, Any]:
    return {
        "schedule": {
            "alphas": list(result.schedule.alphas),
            "provenance": result.schedule.provenance,
            "rounding_adjustments": [list(a) for a in result.schedule.rounding_adjustments],
        },
        "phi": seqvec_to_list(result.phi),
        "errors": list(result.errors),
        "report": approx_report_to_dict(result.report),
    }


CERTIFICATE_HEADER = ("k", "alpha_k", "error_sq", "bound", "eps_over_2k", "tail_allowance")


def certificate_rows(result: PipelineResult) -> List[List[Any]]:
    return [[r.k, r.alpha_k, r.error_sq, r.bound, r.eps_over_2k, r.tail_allowance] for r in result.certificates]
