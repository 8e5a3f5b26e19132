"""Instance generation, subspace-angle measurement, and bound verification.

verify_instance evaluates every applicable bound against the measured
angles and records violations as data; it never raises on a violation,
so large randomized campaigns always run to completion.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import bounds
from .errors import DimensionMismatch, DomainError, GapConditionViolated, InvalidSpec
from .linalg import (
    PerturbationSplit,
    Projector,
    SpectralDecomposition,
    eigh,
    require_hermitian,
    sign_split,
    spectral_projector,
)
from .spectral import (
    PerturbedSeparation,
    SpectralPartition,
    gap_condition,
    partition_spectrum,
    perturbed_component,
    perturbed_component_at_t,
    spectral_enclosure_check,
)

GAP_SLACK = 1e-10
SIN_CHAIN_SLACK = 1e-10


class GeometryKind(enum.Enum):
    """Whether one component's convex hull misses the other component."""

    FAVOURABLE = "favourable"
    GENERIC = "generic"


@dataclass(frozen=True)
class AngleMeasurement:
    """Principal-angle data between the ranges of two projectors.

    `singular_values` are those of P - Q, descending, clipped to [0, 1];
    max_angle = arcsin of the largest one, and sin2theta_norm is the largest
    value of 2 s sqrt(1 - s^2) over them.
    """

    max_angle: float
    sin2theta_norm: float
    singular_values: np.ndarray


def measure_angles(p: Projector, q: Projector) -> AngleMeasurement:
    """Measure the maximal angle and the sin-2-Theta norm from P - Q."""
    if p.matrix.shape != q.matrix.shape:
        raise DimensionMismatch(
            f"projector shapes differ: {p.matrix.shape} vs {q.matrix.shape}"
        )
    s = np.linalg.svd(p.matrix - q.matrix, compute_uv=False)
    s = np.clip(s, 0.0, 1.0)
    return AngleMeasurement(
        max_angle=float(np.arcsin(s[0])),
        sin2theta_norm=float(np.max(2.0 * s * np.sqrt(1.0 - s * s))),
        singular_values=s,
    )


def geometry_kind(
    decomp: SpectralDecomposition, partition: SpectralPartition
) -> GeometryKind:
    """Favourable when the convex hull of one component contains none of the other."""
    comp = decomp.eigenvalues[list(partition.component_indices)]
    rest = decomp.eigenvalues[list(partition.rest_indices)]
    rest_in_comp_hull = np.any((rest >= comp.min()) & (rest <= comp.max()))
    comp_in_rest_hull = np.any((comp >= rest.min()) & (comp <= rest.max()))
    if not rest_in_comp_hull or not comp_in_rest_hull:
        return GeometryKind.FAVOURABLE
    return GeometryKind.GENERIC


@dataclass(frozen=True)
class Instance:
    """A problem: matrix pair (a, v) plus the intervals selecting the component."""

    a: np.ndarray
    v: np.ndarray
    component_intervals: tuple[tuple[float, float], ...]
    seed: int
    label: str


def sharp_example_2x2(v_plus: float, v_minus: float) -> tuple[Instance, float]:
    """Two-by-two pair attaining the favourable-geometry bound exactly.

    A = diag(1/2, -1/2), the perturbation has spectrum {-v_minus, v_plus},
    and the measured maximal angle equals (1/2) arcsin(v_plus + v_minus),
    which is returned as the expected angle.
    """
    if not (0.0 <= v_plus < 1.0 and 0.0 <= v_minus < 1.0):
        raise DomainError(f"need 0 <= v_plus, v_minus < 1, got ({v_plus!r}, {v_minus!r})")
    v = v_plus + v_minus
    if v >= 1.0:
        raise DomainError(f"need v_plus + v_minus < 1, got {v!r}")
    a = np.diag([0.5, -0.5])
    off = 0.5 * v * math.sqrt(1.0 - v * v)
    vmat = np.array(
        [
            [0.5 * (v_plus - v_minus - v * v), off],
            [off, 0.5 * (v * v + v_plus - v_minus)],
        ]
    )
    inst = Instance(
        a=a,
        v=vmat,
        component_intervals=((0.25, 0.75),),
        seed=0,
        label=f"sharp-2x2(v_plus={v_plus!r}, v_minus={v_minus!r})",
    )
    return inst, 0.5 * math.asin(v)


def _haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r).copy()
    diag[diag == 0.0] = 1.0
    return q * (diag / np.abs(diag))


def random_instance(
    n: int,
    d_target: float,
    component_split: int,
    scale: float,
    seed: int,
    interlaced: bool = False,
) -> Instance:
    """Random Hermitian pair with a prescribed spectral gap.

    A = Q diag(vals) Q* with Haar-random Q; the first `component_split`
    eigenvalues form the selected component, whose distance to the rest is
    exactly `d_target` (one eigenvalue pair is pinned to realize it).  V is
    a Gaussian Hermitian matrix rescaled so ||V+|| + ||V-|| equals
    scale * d_target.  With `interlaced`, each side is split into two
    clusters arranged alternately, so neither convex hull misses the other.
    Deterministic per seed.
    """
    if n < 2 or not 1 <= component_split < n:
        raise InvalidSpec(f"need n >= 2 and 1 <= component_split < n, got ({n}, {component_split})")
    if d_target <= 0.0 or scale < 0.0:
        raise InvalidSpec(f"need d_target > 0 and scale >= 0, got ({d_target!r}, {scale!r})")
    k, m = component_split, n - component_split
    if interlaced and (k < 2 or m < 2):
        raise InvalidSpec("interlaced layout needs at least two eigenvalues per side")
    rng = np.random.default_rng(seed)
    d = float(d_target)
    if interlaced:
        width = 0.25 * d
        k1 = int(rng.integers(1, k))
        m1 = int(rng.integers(1, m))
        comp_lo = np.concatenate([rng.uniform(-width, 0.0, size=k1 - 1), [0.0]])
        rest_lo = np.concatenate([[d], d + rng.uniform(0.0, width, size=m1 - 1)])
        comp_hi_start = d + width + d * (1.05 + rng.uniform(0.0, 1.0))
        comp_hi = comp_hi_start + rng.uniform(0.0, width, size=k - k1)
        rest_hi_start = comp_hi_start + width + d * (1.05 + rng.uniform(0.0, 1.0))
        rest_hi = rest_hi_start + rng.uniform(0.0, width, size=m - m1)
        comp_vals = np.concatenate([comp_lo, comp_hi])
        rest_vals = np.concatenate([rest_lo, rest_hi])
        margin = 0.45 * d
        intervals = (
            (float(-width - margin), float(margin)),
            (float(comp_hi_start - margin), float(comp_hi_start + width + margin)),
        )
    else:
        w_comp = d * rng.uniform(0.3, 1.5)
        w_rest = d * rng.uniform(0.3, 1.5)
        comp_vals = np.concatenate([rng.uniform(-w_comp, 0.0, size=k - 1), [0.0]])
        rest_vals = np.concatenate([[d], d + rng.uniform(0.0, w_rest, size=m - 1)])
        margin = 0.45 * d
        intervals = ((float(-w_comp - margin), float(margin)),)
    shift = d * rng.uniform(-2.0, 2.0)
    comp_vals = comp_vals + shift
    rest_vals = rest_vals + shift
    intervals = tuple((lo + shift, hi + shift) for lo, hi in intervals)
    q = _haar_unitary(n, rng)
    vals = np.concatenate([comp_vals, rest_vals])
    a = (q * vals) @ q.conj().T
    a = 0.5 * (a + a.conj().T)
    if scale == 0.0:
        v = np.zeros((n, n), dtype=complex)
    else:
        while True:
            g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            v0 = 0.5 * (g + g.conj().T)
            w0 = np.linalg.eigvalsh(v0)
            strength = max(float(w0[-1]), 0.0) + max(-float(w0[0]), 0.0)
            if strength > 0.0:
                break
        v = v0 * (scale * d / strength)
        v = 0.5 * (v + v.conj().T)
    return Instance(
        a=a,
        v=v,
        component_intervals=intervals,
        seed=int(seed),
        label=f"random(n={n}, split={component_split}, scale={scale!r}, "
        f"seed={seed}, interlaced={interlaced})",
    )


Violation = tuple[str, float]


@dataclass(frozen=True)
class BoundReport:
    """Per-instance record: measured angles, every applicable bound, violations.

    Bounds that do not apply are None with their flag False.  `violations`
    holds (check name, slack) pairs for every check that failed its tolerance.
    """

    measured_angle: Optional[float]
    favourable_applicable: bool
    favourable_bound: Optional[float]
    generic_applicable: bool
    generic_bound: Optional[float]
    half_arcsin_applicable: bool
    half_arcsin_bound: Optional[float]
    sin2theta_measured: Optional[float]
    sin2theta_bound: float
    integral_applicable: bool
    integral_bound: Optional[float]
    integral_below_threshold: Optional[bool]
    gap: float
    norm_plus: float
    norm_minus: float
    norm_v: float
    gap_condition: bool
    geometry: str
    measured_gap: Optional[float]
    gap_lower_bound: Optional[float]
    enclosure_ok: bool
    enclosure_excess: float
    violations: tuple[Violation, ...]


@dataclass(frozen=True)
class Analysis:
    """Everything verify_instance computes, kept for reporting and inspection."""

    instance: Instance
    decomp_a: SpectralDecomposition
    decomp_perturbed: SpectralDecomposition
    partition: SpectralPartition
    split: PerturbationSplit
    geometry: GeometryKind
    perturbed: Optional[PerturbedSeparation]
    angles: Optional[AngleMeasurement]
    report: BoundReport


def analyze_instance(inst: Instance, angle_tol: float = 1e-9) -> Analysis:
    """Run the full measurement pipeline on one instance.

    Hypotheses are evaluated and recorded, every bound whose precondition
    holds is compared against the measurement, and failures land in the
    report's violation list instead of raising.
    """
    a = require_hermitian(inst.a, name="a")
    v = require_hermitian(inst.v, name="v")
    if a.shape != v.shape:
        raise DimensionMismatch(f"a has shape {a.shape} but v has shape {v.shape}")
    decomp_a = eigh(a)
    partition = partition_spectrum(decomp_a, inst.component_intervals)
    split = sign_split(v)
    geometry = geometry_kind(decomp_a, partition)
    decomp_av = eigh(a + v)
    enclosure = spectral_enclosure_check(decomp_a, decomp_av, split)

    gap = partition.gap
    s = split.norm_sum
    gap_ok = gap_condition(split, gap)
    favourable = geometry is GeometryKind.FAVOURABLE

    violations: list[Violation] = []
    if not enclosure.ok:
        violations.append(("enclosure", enclosure.max_excess))

    perturbed = None
    angles = None
    measured = None
    if gap_ok:
        perturbed = perturbed_component(decomp_av, partition, split)
        p = spectral_projector(decomp_a, partition.component_indices)
        q = spectral_projector(decomp_av, perturbed.component_indices)
        angles = measure_angles(p, q)
        measured = angles.max_angle
        if perturbed.measured_gap < perturbed.gap_lower_bound - GAP_SLACK:
            violations.append(
                ("gap_lower_bound", perturbed.gap_lower_bound - perturbed.measured_gap)
            )
        if math.sin(2.0 * measured) > angles.sin2theta_norm + SIN_CHAIN_SLACK:
            violations.append(
                ("sin2theta_chain", math.sin(2.0 * measured) - angles.sin2theta_norm)
            )

    fav_applicable = gap_ok and favourable
    fav_bound = (
        bounds.favourable_angle_bound(split.norm_plus, split.norm_minus, gap)
        if fav_applicable
        else None
    )
    gen_applicable = s < 2.0 * bounds.critical_strength() * gap
    gen_bound = (
        bounds.generic_angle_bound(split.norm_plus, split.norm_minus, gap)
        if gen_applicable
        else None
    )
    half_applicable = s <= 2.0 * gap / math.pi
    half_bound = (
        bounds.half_arcsin_angle_bound(split.norm_plus, split.norm_minus, gap)
        if half_applicable
        else None
    )
    s2t_bound = bounds.sin2theta_bound(split.norm_plus, split.norm_minus, gap, favourable)
    integral = (
        bounds.integral_angle_bound(split.norm_plus, split.norm_minus, gap)
        if gap_ok
        else None
    )

    if measured is not None:
        for name, value in (
            ("favourable_bound", fav_bound),
            ("generic_bound", gen_bound),
            ("half_arcsin_bound", half_bound),
            ("integral_bound", integral.value if integral else None),
        ):
            if value is not None and measured > value + angle_tol:
                violations.append((name, measured - value))
        if angles.sin2theta_norm > s2t_bound + angle_tol:
            violations.append(("sin2theta_bound", angles.sin2theta_norm - s2t_bound))

    report = BoundReport(
        measured_angle=measured,
        favourable_applicable=fav_applicable,
        favourable_bound=fav_bound,
        generic_applicable=gen_applicable,
        generic_bound=gen_bound,
        half_arcsin_applicable=half_applicable,
        half_arcsin_bound=half_bound,
        sin2theta_measured=angles.sin2theta_norm if angles is not None else None,
        sin2theta_bound=s2t_bound,
        integral_applicable=gap_ok,
        integral_bound=integral.value if integral else None,
        integral_below_threshold=integral.below_threshold if integral else None,
        gap=gap,
        norm_plus=split.norm_plus,
        norm_minus=split.norm_minus,
        norm_v=split.norm_v,
        gap_condition=gap_ok,
        geometry=geometry.value,
        measured_gap=perturbed.measured_gap if perturbed else None,
        gap_lower_bound=perturbed.gap_lower_bound if perturbed else None,
        enclosure_ok=enclosure.ok,
        enclosure_excess=enclosure.max_excess,
        violations=tuple(violations),
    )
    return Analysis(
        instance=inst,
        decomp_a=decomp_a,
        decomp_perturbed=decomp_av,
        partition=partition,
        split=split,
        geometry=geometry,
        perturbed=perturbed,
        angles=angles,
        report=report,
    )


def verify_instance(inst: Instance, angle_tol: float = 1e-9) -> BoundReport:
    """Measure one instance and compare it against every applicable bound."""
    return analyze_instance(inst, angle_tol=angle_tol).report


@dataclass(frozen=True)
class PathPoint:
    """One stop of a homotopy scan: assignment, projector, and step data.

    step_delta is the operator-norm change of the projector since the
    previous grid point (0 at t=0), step_bound the corresponding guaranteed
    ceiling.
    """

    t: float
    separation: PerturbedSeparation
    projector: Projector
    step_delta: float
    step_bound: float


def path_scan(inst: Instance, steps: int) -> list[PathPoint]:
    """Track the perturbed component's projector along t -> A + tV.

    Uses a uniform grid with `steps` sub-intervals (so steps + 1 points).
    """
    if steps < 2:
        raise InvalidSpec(f"steps must be at least 2, got {steps!r}")
    a = require_hermitian(inst.a, name="a")
    v = require_hermitian(inst.v, name="v")
    decomp_a = eigh(a)
    partition = partition_spectrum(decomp_a, inst.component_intervals)
    split = sign_split(v)
    if not gap_condition(split, partition.gap):
        raise GapConditionViolated(
            f"||V+|| + ||V-|| = {split.norm_sum!r} must stay below gap {partition.gap!r}"
        )
    points: list[PathPoint] = []
    prev: Optional[PathPoint] = None
    for t in np.linspace(0.0, 1.0, steps + 1):
        t = float(t)
        dec_t = eigh(a + t * v)
        sep = perturbed_component_at_t(dec_t, partition, split, t)
        proj = spectral_projector(dec_t, sep.component_indices)
        if prev is None:
            delta, ceiling = 0.0, 0.0
        else:
            delta = float(
                np.linalg.svd(proj.matrix - prev.projector.matrix, compute_uv=False)[0]
            )
            ceiling = bounds.path_step_bound(
                prev.t, t, split.norm_v, split.norm_plus, split.norm_minus, partition.gap
            )
        point = PathPoint(
            t=t, separation=sep, projector=proj, step_delta=delta, step_bound=ceiling
        )
        points.append(point)
        prev = point
    return points
