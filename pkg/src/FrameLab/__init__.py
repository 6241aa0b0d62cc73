"""FrameLab: frames, operator orbits and their approximation, as a numerical laboratory."""

from FrameLab.approxrep import alpha_schedule_dyadic, alpha_schedule_general, approx_suborbit_pipeline, assemble_phi
from FrameLab.builtin_frames import list_builtins, parse_frame_source
from FrameLab.carleson import (
    build_carleson_system,
    carleson_inf,
    carleson_orbit,
    geometric_lambda,
    harmonic_lambda,
    lambda_from_list,
    orbit_frame_bounds,
    ratio_test,
    section_bounds,
    settling_length,
)
from FrameLab.entrypoint import run, run_async, run_batch
from FrameLab.frames import Frame, canonical_dual, epsilon_approx_check, excess, frame_bounds, reconstruct
from FrameLab.hypercyclic import orbit_density_probe, plan_hypercyclic_vector, rolewicz, rolewicz_frame_diagnostic
from FrameLab.orbitrep import (
    decay_diagnostic,
    generate_orbit,
    hardy_intertwine_check,
    kernel_shift_invariance,
    representation_operator,
    riesz_orbit,
    span_representation,
)
from FrameLab.seqspace import (
    Composition,
    DenseMatrix,
    Diagonal,
    RightShift,
    ScaledLeftShift,
    ScaledRightShift,
    SeqVec,
    adjoint,
    apply,
    finite_section_norm,
    power_apply,
)

__all__ = [
    "Composition",
    "DenseMatrix",
    "Diagonal",
    "Frame",
    "RightShift",
    "ScaledLeftShift",
    "ScaledRightShift",
    "SeqVec",
    "adjoint",
    "alpha_schedule_dyadic",
    "alpha_schedule_general",
    "apply",
    "approx_suborbit_pipeline",
    "assemble_phi",
    "build_carleson_system",
    "canonical_dual",
    "carleson_inf",
    "carleson_orbit",
    "decay_diagnostic",
    "epsilon_approx_check",
    "excess",
    "finite_section_norm",
    "frame_bounds",
    "generate_orbit",
    "geometric_lambda",
    "hardy_intertwine_check",
    "harmonic_lambda",
    "kernel_shift_invariance",
    "lambda_from_list",
    "list_builtins",
    "orbit_density_probe",
    "orbit_frame_bounds",
    "parse_frame_source",
    "plan_hypercyclic_vector",
    "power_apply",
    "ratio_test",
    "reconstruct",
    "representation_operator",
    "riesz_orbit",
    "rolewicz",
    "rolewicz_frame_diagnostic",
    "run",
    "run_async",
    "run_batch",
    "section_bounds",
    "settling_length",
    "span_representation",
]
