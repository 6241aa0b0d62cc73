"""Named test frames and parsing of frame sources (builtin spec strings or frame JSON files)."""

import json
import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Tuple, Union

from FrameLab.carleson import build_carleson_system, carleson_orbit, geometric_lambda
from FrameLab.frames import Frame
from FrameLab.output_formatters import frame_from_dict
from FrameLab.seqspace import SeqVec
from FrameLab.utils.exceptions import FrameError

logger = logging.getLogger(__name__)

BUILTIN_PATTERN = re.compile(r"^\s*([a-z_]+)\s*\(([^()]*)\)\s*$")
MAX_INTERLEAVED = 36  # 10**18 is the largest power of ten with an int64 index


@dataclass(frozen=True)
class Builtin:
    name: str
    signature: str
    description: str
    build: Callable[..., Frame]


def _positive(value: float, name: str) -> int:
    if int(value) != value or value < 1:
        raise FrameError(f"{name} must be a positive integer")
    return int(value)


def onb(d: float) -> Frame:
    d = _positive(d, "d")
    return Frame(tuple(SeqVec.basis(k) for k in range(1, d + 1)), d, f"onb({d})")


def doubled_onb(d: float) -> Frame:
    d = _positive(d, "d")
    return Frame(tuple(SeqVec.basis(k) for k in range(1, d + 1) for _ in range(2)), d, f"doubled_onb({d})")


def scaled_basis(d: float) -> Frame:
    d = _positive(d, "d")
    return Frame(tuple(SeqVec.basis(k, float(k)) for k in range(1, d + 1)), d, f"scaled_basis({d})")


def carleson(alpha: float, K: float, M: float = 0) -> Frame:
    K = _positive(K, "K")
    M = _positive(M, "M") if M else 8 * K
    system = build_carleson_system(geometric_lambda(float(alpha), K))
    orbit = carleson_orbit(system, M)
    return Frame(orbit.elements, K, f"carleson({alpha:g},{K},{M})")


def riesz_perturbed(d: float, delta: float) -> Frame:
    d = _positive(d, "d")
    if not abs(delta) < 1:
        raise FrameError("riesz_perturbed needs |delta| < 1")
    elements = [SeqVec([k, k + 1], [1.0, delta]) for k in range(1, d)] + [SeqVec.basis(d)]
    return Frame(tuple(elements), d, f"riesz_perturbed({d},{delta:g})")


def interleaved(M: float) -> Frame:
    """First ``M`` terms of ``k e_k`` reordered as ``1 e_1, 10 e_10, 2 e_2, 100 e_100, 3 e_3, ...``."""
    M = _positive(M, "M")
    if M > MAX_INTERLEAVED:
        raise FrameError(f"interleaved supports at most {MAX_INTERLEAVED} elements")
    powers = {10**p for p in range(1, 19)}
    small = (k for k in range(1, 10**6) if k not in powers)
    elements = []
    for position in range(M):
        if position % 2 == 0:
            k = next(small)
        else:
            k = 10 ** (position // 2 + 1)
        elements.append(SeqVec.basis(k, float(k)))
    return Frame(tuple(elements), 0, f"interleaved({M})")


BUILTINS: Dict[str, Builtin] = {
    b.name: b
    for b in (
        Builtin("onb", "onb(d)", "orthonormal basis e_1..e_d", onb),
        Builtin("doubled_onb", "doubled_onb(d)", "every basis vector twice: e_1, e_1, e_2, e_2, ...", doubled_onb),
        Builtin("scaled_basis", "scaled_basis(d)", "Riesz basis k e_k, k = 1..d (representation norm 2)",
                scaled_basis),
        Builtin("carleson", "carleson(alpha,K[,M])",
                "orbit of the Carleson system with lambda_k = 1 - alpha^-k, M elements (default 8K)", carleson),
        Builtin("riesz_perturbed", "riesz_perturbed(d,delta)", "e_k + delta e_{k+1} for k < d, then e_d",
                riesz_perturbed),
        Builtin("interleaved", "interleaved(M)",
                "k e_k reordered with 10^p e_{10^p} interleaved (no bounded representation)", interleaved),
    )
}


def list_builtins() -> List[Tuple[str, str]]:
    """``(signature, description)`` for every builtin frame."""
    return [(b.signature, b.description) for b in BUILTINS.values()]


def build_builtin(spec: str) -> Frame:
    """
    Build a builtin frame from a spec string such as ``onb(8)`` or ``carleson(2,10,80)``.

    Raises
    ------
    FrameError
        If the name is unknown or the arguments do not fit.
    """
    match = BUILTIN_PATTERN.match(spec)
    if not match:
        raise FrameError(f"not a builtin frame spec: {spec!r}")
    name, raw_args = match.groups()
    if name not in BUILTINS:
        raise FrameError(f"unknown builtin frame {name!r}; choose from {', '.join(BUILTINS)}")
    try:
        args = [float(a) for a in raw_args.split(",") if a.strip()]
    except ValueError as exc:
        raise FrameError(f"non-numeric argument in {spec!r}") from exc
    try:
        return BUILTINS[name].build(*args)
    except TypeError as exc:
        raise FrameError(f"wrong number of arguments for {BUILTINS[name].signature}") from exc


def parse_frame_source(source: Union[str, Path]) -> Frame:
    """
    Resolve a frame source: a builtin spec string or the path of a frame JSON file.

    Raises
    ------
    FrameError
        If ``source`` is neither a valid builtin spec nor a readable frame file.
    """
    if isinstance(source, str) and BUILTIN_PATTERN.match(source):
        return build_builtin(source)
    path = Path(source)
    if not path.is_file():
        raise FrameError(f"frame source {str(source)!r} is neither a builtin nor a file")
    logger.debug("reading frame from %s", path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FrameError(f"invalid frame JSON in {path}: {exc}") from exc
    return frame_from_dict(data)
