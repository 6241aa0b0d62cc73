"""
Experiment runners behind the command-line kinds.

Each runner takes a validated `ExperimentConfig`, performs the computation and returns a `RunReport` holding the
measured quantities, one verdict per checked invariant, CSV tables and extra JSON artifacts. Runners are pure:
they never touch the filesystem beyond reading frame sources.
"""

import logging
import math
from typing import Callable, Dict, List

import numpy as np

from FrameLab.approxrep import approx_suborbit_pipeline
from FrameLab.builtin_frames import parse_frame_source
from FrameLab.carleson import (
    build_carleson_system,
    carleson_inf,
    carleson_orbit,
    geometric_lambda,
    harmonic_lambda,
    lambda_from_list,
    lower_bound_profile,
    orbit_frame_bounds,
    orbit_tail_bounds,
    ratio_test,
    section_bounds,
    seq_to_dict,
    settling_length,
)
from FrameLab.config import MAX_DENSE_DIM
from FrameLab.frames import (
    Frame,
    canonical_dual,
    epsilon_approx_check,
    excess,
    frame_bounds,
    frame_inequality_probe,
    reconstruct,
)
from FrameLab.hypercyclic import (
    bessel_sums,
    orbit_density_probe,
    plan_hypercyclic_vector,
    rolewicz,
    rolewicz_frame_diagnostic,
)
from FrameLab.orbitrep import (
    decay_diagnostic,
    generate_orbit,
    hardy_intertwine_check,
    representation_operator,
    riesz_orbit,
    span_representation,
)
from FrameLab.output_formatters import (
    CERTIFICATE_HEADER,
    approx_report_to_dict,
    bounds_to_dict,
    certificate_rows,
    frame_to_dict,
    pipeline_to_dict,
    plan_to_dict,
    seqvec_to_list,
)
from FrameLab.schemas import (
    ApproximateParameters,
    CarlesonParameters,
    DiagnosticsParameters,
    ExperimentConfig,
    HypercyclicParameters,
    RepresentParameters,
    RunReport,
    Table,
    Verdict,
)
from FrameLab.seqspace import RightShift, ScaledLeftShift, SeqVec
from FrameLab.utils.exceptions import FrameError
from FrameLab.utils.linalg_utils import roundoff_cut

logger = logging.getLogger(__name__)

RESIDUAL_TOLERANCE = 1e-9
HARDY_TOLERANCE = 1e-10
ROLEWICZ_GROWTH = 10.0


def _dense_frame(source: str) -> Frame:
    frame = parse_frame_source(source)
    if frame.ambient_dim > MAX_DENSE_DIM:
        raise FrameError(
            f"frame {frame.label or source} spans {frame.ambient_dim} coordinates; dense routines are limited to "
            f"{MAX_DENSE_DIM}"
        )
    return frame


def _random_vector(dim: int, seed: int) -> SeqVec:
    rng = np.random.default_rng(seed)
    return SeqVec.from_dense(rng.standard_normal(dim) + 1j * rng.standard_normal(dim))


def _report(config: ExperimentConfig, parameters) -> RunReport:
    return RunReport(kind=config.kind, seed=config.seed, parameters=parameters.model_dump(by_alias=True))


def run_carleson(config: ExperimentConfig) -> RunReport:
    """Ratio test, Carleson infimum, orbit frame bounds and excess, tail bounds and Hardy intertwining."""
    params: CarlesonParameters = config.typed_parameters()
    report = _report(config, params)
    if params.sequence == "geometric":
        seq = geometric_lambda(params.alpha, params.K)
    elif params.sequence == "harmonic":
        seq = harmonic_lambda(params.K)
    else:
        seq = lambda_from_list(complex(re, im) for re, im in params.lambdas)

    ratio = ratio_test(seq)
    infimum = carleson_inf(seq)
    system = build_carleson_system(seq, params.m_weights)
    orbit = carleson_orbit(system, params.orbit_length)
    bounds = section_bounds(system, params.orbit_length)
    orbit_excess = params.orbit_length - bounds.span_dim
    whole = orbit_frame_bounds(system)
    tail = orbit_tail_bounds(system, params.orbit_length, params.drop)
    # kernel of V cut at round-off level
    hardy = hardy_intertwine_check(
        orbit, params.orbit_length - 1, rel_tol=roundoff_cut((system.ambient_dim, params.orbit_length))
    )
    profile = lower_bound_profile(system, params.profile_lengths)

    report.measured.update(
        {
            "sequence": seq_to_dict(seq),
            "c_max": ratio.c_max,
            "ratio_test_passes": ratio.passes,
            "necessary_and_sufficient": ratio.necessary_and_sufficient,
            "asymptotic": ratio.asymptotic,
            "ratio_flag": ratio.flag,
            "carleson_inf": infimum,
            "phi": seqvec_to_list(system.phi),
            "orbit_certified": orbit.certified,
            "bounds": bounds_to_dict(bounds),
            "excess": orbit_excess,
            "orbit_bounds": bounds_to_dict(whole),
            "settling_length": settling_length(system) if whole.resolved else None,
            "tail_drop": params.drop,
            "tail_bounds": bounds_to_dict(tail),
            "hardy_residual": hardy.residual,
            "hardy_kernel_dim": hardy.kernel_dim,
        }
    )
    expected_kernel = params.orbit_length - system.ambient_dim
    report.verdicts += [
        Verdict(
            name="carleson_condition",
            invariant="ratio test passing implies a positive Carleson infimum",
            passed=not ratio.passes or infimum > 0,
            detail=f"c_max={ratio.c_max:.6g}, inf={infimum:.6g}",
        ),
        Verdict(
            name="orbit_frame",
            invariant="Carleson orbit has a positive lower frame bound",
            passed=bounds.lower > 0 and bounds.resolved and whole.lower > 0,
            detail=f"A={bounds.lower:.6g}, B={bounds.upper:.6g}, whole orbit A={whole.lower:.6g}",
        ),
        Verdict(
            name="orbit_excess",
            invariant="excess of the orbit section equals M - K",
            passed=orbit_excess == expected_kernel,
            detail=f"excess={orbit_excess}, expected={expected_kernel}",
        ),
        Verdict(
            name="tail_frame",
            invariant="every tail of a Carleson orbit is a frame",
            passed=tail.lower > 0 and tail.resolved,
            detail=f"A={tail.lower:.6g} after dropping {params.drop}",
        ),
        Verdict(
            name="hardy_intertwining",
            invariant="T V = V S on monomials and dim ker V = M - K",
            passed=hardy.residual <= HARDY_TOLERANCE and hardy.kernel_dim == expected_kernel,
            detail=f"residual={hardy.residual:.3e}, kernel_dim={hardy.kernel_dim}",
        ),
    ]
    report.tables["profile"] = Table(
        header=["length", "lower", "upper", "lowest_eigenvalue", "excess", "resolved"],
        rows=[[r.length, r.lower, r.upper, r.lowest_eigenvalue, r.excess, r.resolved] for r in profile],
    )
    report.tables["ratios"] = Table(header=["k", "ratio"], rows=[[k, r] for k, r in enumerate(ratio.ratios, 1)])
    report.artifacts["sequence"] = seq_to_dict(seq)
    return report


def run_represent(config: ExperimentConfig) -> RunReport:
    """Representation operator of a frame, its residual, norm and kernel shift-invariance."""
    params: RepresentParameters = config.typed_parameters()
    report = _report(config, params)
    frame = parse_frame_source(params.frame_source)

    if frame.ambient_dim > MAX_DENSE_DIM:
        # support-compressed route for widely spread indices
        logger.info("%s spans %d coordinates; using the span representation only", frame.label, frame.ambient_dim)
        span = span_representation(frame.elements)
        report.measured.update({"span_support": len(span.support), "span_norm": span.norm})
        report.verdicts.append(
            Verdict(
                name="span_representation",
                invariant="a linearly independent sequence has a representation on its span",
                passed=math.isfinite(span.norm),
                detail=f"norm={span.norm:.6g}",
            )
        )
        return report

    dual = parse_frame_source(params.dual_source) if params.dual_source else None
    result = representation_operator(frame, dual)
    represents = result.represents(RESIDUAL_TOLERANCE)
    report.measured.update(
        {
            "frame": frame.label,
            "bounds": bounds_to_dict(result.bounds),
            "excess": excess(frame),
            "dual_kind": result.dual_kind,
            "residual": result.residual,
            "represents": represents,
            "norm": result.norm,
            "norm_bounds": list(result.norm_bounds),
            "norm_at_least_one": result.norm >= 1 - RESIDUAL_TOLERANCE,
            "kernel_invariant": result.kernel_invariant,
            "kernel_dim": result.kernel.kernel_dim,
            "kernel_distance": result.kernel.distance,
            "tail_indicator": result.tail_indicator,
        }
    )
    report.verdicts.append(
        Verdict(
            name="kernel_equivalence",
            invariant="T f_k = f_(k+1) exactly when the synthesis kernel is shift-invariant",
            passed=represents == result.kernel_invariant,
            detail=f"residual={result.residual:.3e}, kernel_invariant={result.kernel_invariant}",
        )
    )
    if represents:
        report.verdicts.append(
            Verdict(
                name="norm_bound",
                invariant="||T|| <= sqrt(B/A)",
                passed=result.norm_below_upper_bound(RESIDUAL_TOLERANCE),
                detail=f"norm={result.norm:.6g}, bound={result.norm_bounds[1]:.6g}",
            )
        )
    if params.hardy_N and represents:
        orbit = generate_orbit(result.matrix, frame.elements[0], params.hardy_N + 1, frame.ambient_dim)
        hardy = hardy_intertwine_check(orbit, params.hardy_N)
        report.measured.update({"hardy_residual": hardy.residual, "hardy_kernel_dim": hardy.kernel_dim})
        report.verdicts.append(
            Verdict(
                name="hardy_intertwining",
                invariant="T V = V S on monomials",
                passed=hardy.residual <= HARDY_TOLERANCE * max(1.0, result.norm) ** params.hardy_N,
                detail=f"residual={hardy.residual:.3e}",
            )
        )

    u = frame.synthesis_padded(result.matrix.dim)
    mapped = result.matrix.entries @ u[:, :-1]
    report.tables["elements"] = Table(
        header=["k", "norm", "shift_residual"],
        rows=[
            [k + 1, float(np.linalg.norm(u[:, k])),
             float(np.linalg.norm(mapped[:, k] - u[:, k + 1])) if k + 1 < frame.size else 0.0]
            for k in range(frame.size)
        ],
    )
    return report


def run_approximate(config: ExperimentConfig) -> RunReport:
    """Approximate suborbit pipeline with scaled shifts and its per-element certificates."""
    params: ApproximateParameters = config.typed_parameters()
    report = _report(config, params)
    frame = _dense_frame(params.frame_source)
    result = approx_suborbit_pipeline(frame, params.lam, params.epsilon, params.schedule)
    approx = result.report

    report.measured.update(
        {
            "frame": frame.label,
            "epsilon": params.epsilon,
            "schedule": list(result.schedule.alphas),
            "provenance": result.schedule.provenance,
            "B_used": result.B_used,
            "tail_bound": result.tail_bound,
            "errors": list(result.errors),
            "blocks_disjoint": result.blocks_disjoint,
            "flags": list(result.flags),
            "report": approx_report_to_dict(approx),
        }
    )
    report.verdicts += [
        Verdict(
            name="certificates",
            invariant="per-element error within min(eps/2^k, gap bound) plus tail allowance",
            passed=result.certificates_pass,
            detail=f"{sum(not r.passed for r in result.certificates)} failing rows",
        ),
        Verdict(
            name="synthesis_gap",
            invariant="||U - U~|| <= sqrt(eps) plus tail allowance",
            passed=result.gap_within_sqrt_eps,
            detail=f"gap={approx.synthesis_gap:.6g}, sqrt(eps)={math.sqrt(params.epsilon):.6g}",
        ),
        Verdict(
            name="bounds_interval",
            invariant="approximating frame bounds lie in the perturbation interval",
            passed=approx.bounds_within_interval,
            detail=f"interval={approx.bound_interval}",
        ),
        Verdict(
            name="excess_preserved",
            invariant="excess of input and output agree when eps < A",
            passed=approx.excess_match is not False,
            detail=f"excess_match={approx.excess_match}",
        ),
        Verdict(
            name="epsilon_approximation",
            invariant="the suborbit family is an eps-approximation",
            passed=approx.verdict,
            detail=f"gap^2={approx.synthesis_gap ** 2:.6g}",
        ),
    ]
    report.tables["certificates"] = Table(header=list(CERTIFICATE_HEADER), rows=certificate_rows(result))
    report.artifacts["pipeline"] = pipeline_to_dict(result)
    return report


def run_hypercyclic(config: ExperimentConfig) -> RunReport:
    """Hypercyclic plan for a frame's elements, its suborbit check, density probes and Rolewicz sections."""
    params: HypercyclicParameters = config.typed_parameters()
    report = _report(config, params)
    frame = _dense_frame(params.frame_source)
    plan = plan_hypercyclic_vector(frame.elements, params.a, params.epsilon)
    measured_errors = plan.measured_errors()
    suborbit = Frame(plan.suborbit(), 0, "hypercyclic suborbit")
    approx = epsilon_approx_check(frame, suborbit, params.epsilon)

    probes = []
    for k, (alpha, target) in enumerate(zip(plan.alphas, plan.targets)):
        if alpha > params.budget:
            break
        probes.append((k, orbit_density_probe(plan.phi, params.a, target, params.budget)))

    certified_ok = all(
        c <= t * (1 + 1e-12) and abs(m - c) <= 1e-12 * max(1.0, c)
        for c, t, m in zip(plan.certified_errors, plan.tolerances, measured_errors)
    )
    deviation = plan.on_support_deviation()
    report.measured.update(
        {
            "frame": frame.label,
            "epsilon": params.epsilon,
            "alphas": list(plan.alphas),
            "certified_errors": list(plan.certified_errors),
            "measured_errors": list(measured_errors),
            "on_support_deviation": deviation,
            "suborbit_report": approx_report_to_dict(approx),
            "suborbit_excess": excess(suborbit),
            "probed_targets": len(probes),
        }
    )
    report.verdicts += [
        Verdict(
            name="certified_errors",
            invariant="||(aL)^alpha(k) phi - f_k||^2 <= eps/2^k",
            passed=certified_ok,
            detail=f"max error={max(measured_errors):.3e}",
        ),
        Verdict(
            name="on_support",
            invariant="suborbit reproduces each target exactly on its support",
            passed=deviation <= 1e-12,
            detail=f"deviation={deviation:.3e}",
        ),
        Verdict(
            name="suborbit_approximation",
            invariant="the planned suborbit is an eps-approximation of the targets",
            passed=approx.verdict,
            detail=f"gap^2={approx.synthesis_gap ** 2:.6g}",
        ),
        Verdict(
            name="density_probe",
            invariant="orbit search reaches every target within its tolerance",
            passed=all(p.dist_best**2 <= plan.tolerances[k] * (1 + 1e-9) for k, p in probes),
            detail=f"{len(probes)} targets probed",
        ),
    ]

    rows = []
    for k, (alpha, tol, cert, meas) in enumerate(zip(plan.alphas, plan.tolerances, plan.certified_errors,
                                                     measured_errors)):
        probe = dict(probes).get(k)
        rows.append([k + 1, alpha, tol, cert, meas, probe.n_best if probe else "", probe.dist_best if probe else ""])
    report.tables["plan"] = Table(
        header=["k", "alpha_k", "tolerance", "certified_error", "measured_error", "probe_n", "probe_dist"], rows=rows
    )

    if plan.phi.max_index > MAX_DENSE_DIM:
        logger.warning("phi reaches index %d; skipping Rolewicz sections", plan.phi.max_index)
    elif params.sections:
        sections = rolewicz_frame_diagnostic(plan.phi, params.a, params.sections)
        sums = bessel_sums(plan.phi, params.a, frame.elements[0], params.sections)
        report.measured["rolewicz_bessel_sums"] = list(sums)
        report.tables["rolewicz"] = Table(
            header=["N", "lower", "upper", "span_lower", "span_dim", "ratio", "bessel_f1"],
            rows=[[s.N, s.lower, s.upper, s.span_lower, s.span_dim, s.ratio, b] for s, b in zip(sections, sums)],
        )
        if len(sections) >= 2:
            growth = sections[-1].upper / sections[0].upper if sections[0].upper > 0 else math.inf
            report.measured["rolewicz_upper_growth"] = growth
            bessel_growth = sums[-1] / sums[0] if sums[0] > 0 else math.inf
            report.measured["rolewicz_bessel_growth"] = bessel_growth
            report.measured["rolewicz_divergence"] = "bessel" if bessel_growth >= ROLEWICZ_GROWTH else "upper_bound"
            report.verdicts.append(
                Verdict(
                    name="rolewicz_not_frame",
                    invariant="upper bounds of finite Rolewicz orbit sections grow without limit",
                    passed=growth >= ROLEWICZ_GROWTH,
                    detail=f"B({sections[-1].N})/B({sections[0].N})={growth:.6g}",
                )
            )
    report.artifacts["plan"] = plan_to_dict(plan)
    return report


def run_diagnostics(config: ExperimentConfig) -> RunReport:
    """Frame inequality probes, canonical-dual reconstruction, Riesz basis orbits and decay trends."""
    params: DiagnosticsParameters = config.typed_parameters()
    report = _report(config, params)
    frame = _dense_frame(params.frame_source)
    bounds = frame_bounds(frame)
    low, high = frame_inequality_probe(frame, params.probes, config.seed)
    slack = 1e-9 * max(1.0, bounds.upper)

    report.measured.update(
        {
            "frame": frame.label,
            "bounds": bounds_to_dict(bounds),
            "excess": excess(frame),
            "probe_min": low,
            "probe_max": high,
        }
    )
    report.verdicts.append(
        Verdict(
            name="frame_inequality",
            invariant="A ||f||^2 <= sum |<f, f_k>|^2 <= B ||f||^2",
            passed=bounds.lower - slack <= low and high <= bounds.upper + slack,
            detail=f"probes in [{low:.6g}, {high:.6g}], bounds [{bounds.lower:.6g}, {bounds.upper:.6g}]",
        )
    )

    if bounds.spans:
        f = _random_vector(frame.ambient_dim, config.seed)
        _, residual = reconstruct(frame, canonical_dual(frame), f)
        report.measured["reconstruction_residual"] = residual
        report.verdicts.append(
            Verdict(
                name="canonical_reconstruction",
                invariant="f = sum <f, S^-1 f_k> f_k",
                passed=residual <= RESIDUAL_TOLERANCE * max(1.0, f.norm()),
                detail=f"residual={residual:.3e}",
            )
        )
        if frame.size == frame.ambient_dim:
            riesz = riesz_orbit(frame)
            report.measured["riesz_orbit_deviation"] = riesz.deviation
            report.verdicts.append(
                Verdict(
                    name="riesz_basis_orbit",
                    invariant="a Riesz basis is the orbit of its first element",
                    passed=riesz.deviation <= RESIDUAL_TOLERANCE * max(1.0, math.sqrt(bounds.upper)),
                    detail=f"deviation={riesz.deviation:.3e}",
                )
            )

    start = frame.elements[0]
    isometry = decay_diagnostic(RightShift(), start, params.n_max)
    nilpotent = decay_diagnostic(ScaledLeftShift(1.0), start, params.n_max)
    scaled = decay_diagnostic(rolewicz(2.0), start, params.n_max)
    report.measured.update(
        {
            "right_shift_trend": isometry.trend,
            "left_shift_trend": nilpotent.trend,
            "right_shift_adjoint_trend": isometry.adjoint_trend,
            "rolewicz_adjoint_trend": scaled.adjoint_trend,
        }
    )
    report.verdicts.append(
        Verdict(
            name="isometry_constant",
            invariant="orbits of an isometry have constant norm",
            passed=isometry.constant,
            detail=isometry.trend,
        )
    )
    if params.n_max >= start.max_index and not start.is_zero():
        report.verdicts.append(
            Verdict(
                name="nilpotent_reaches_zero",
                invariant="the left shift annihilates finitely supported vectors",
                passed=nilpotent.reaches_zero,
                detail=nilpotent.trend,
            )
        )
        report.verdicts.append(
            Verdict(
                name="frame_orbit_adjoint_vanishes",
                invariant="the right shift has a frame orbit, so its adjoint orbits tend to 0",
                passed=isometry.adjoint_trend == "reaches_zero",
                detail=isometry.adjoint_trend,
            )
        )
    if not start.is_zero():
        report.verdicts.append(
            Verdict(
                name="rolewicz_adjoint_unbounded",
                invariant="(T*)^n f does not tend to 0, so 2L has no frame orbit",
                passed=scaled.adjoint_trend in ("increasing", "unbounded"),
                detail=scaled.adjoint_trend,
            )
        )
    report.tables["decay"] = Table(
        header=["n", "right_shift_norm", "left_shift_norm", "right_shift_adjoint_norm"],
        rows=[
            [n, a, b, c]
            for n, (a, b, c) in enumerate(zip(isometry.norms, nilpotent.norms, isometry.adjoint_norms))
        ],
    )
    report.artifacts["frame"] = frame_to_dict(frame)
    return report


RUNNERS: Dict[str, Callable[[ExperimentConfig], RunReport]] = {
    "carleson": run_carleson,
    "represent": run_represent,
    "approximate": run_approximate,
    "hypercyclic": run_hypercyclic,
    "diagnostics": run_diagnostics,
}


def run_experiment(config: ExperimentConfig) -> RunReport:
    report = RUNNERS[config.kind](config)
    failing: List[str] = report.failing
    if failing:
        logger.warning("%s: failing invariants %s", config.kind, ", ".join(failing))
    else:
        logger.info("%s: all %d verdicts pass", config.kind, len(report.verdicts))
    return report
