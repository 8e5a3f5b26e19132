"""Scalar angle bounds for spectral subspace perturbation.

All angles are radians.  Arguments follow one convention: `norm_plus` and
`norm_minus` are the spectral norms of the positive and negative parts of
the perturbation, `gap` is the unperturbed spectral separation.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize

from .errors import (
    BracketFailure,
    DomainError,
    GapConditionViolated,
    InfeasibleConstraint,
)

# Largest admissible per-step normalized strength in the partition search;
# arcsin(pi * lam / 2) leaves its domain beyond it.
STEP_CAP = 2.0 / math.pi


def critical_strength() -> float:
    """Right endpoint of the piecewise bound's domain; the bound reaches pi/2 there."""
    return 0.5 - 0.5 * (1.0 - math.sqrt(3.0) / math.pi) ** 3


def first_branch_point() -> float:
    """Where the half-arcsin branch hands over to the square-root branch."""
    return 4.0 / (math.pi**2 + 4.0)


def second_branch_point() -> float:
    """Where the square-root branch hands over to the two-step branch."""
    return 4.0 * (math.pi**2 - 2.0) / math.pi**4


def kappa_bracket() -> tuple[float, float]:
    """Open-left bracket known to contain the two-step/three-step crossover."""
    return (second_branch_point(), 2.0 * (math.pi - 1.0) / math.pi**2)


def _clip1(x: float) -> float:
    return min(1.0, max(-1.0, x))


def _branch1(x: float) -> float:
    return 0.5 * math.asin(_clip1(math.pi * x))


def _branch2(x: float) -> float:
    ratio = (2.0 * math.pi**2 * x - 4.0) / (math.pi**2 - 4.0)
    return math.asin(_clip1(math.sqrt(max(0.0, ratio))))


def _branch3(x: float) -> float:
    return math.asin(_clip1(0.5 * math.pi * (1.0 - math.sqrt(max(0.0, 1.0 - 2.0 * x)))))


def _branch4(x: float) -> float:
    return 1.5 * math.asin(_clip1(0.5 * math.pi * (1.0 - float(np.cbrt(1.0 - 2.0 * x)))))


_BRANCHES = {1: _branch1, 2: _branch2, 3: _branch3, 4: _branch4}


def branch_formula(branch: int, x: float) -> float:
    """Evaluate one branch formula regardless of where x falls; used for continuity checks."""
    return _BRANCHES[branch](x)


def solve_kappa(tol: float = 1e-13) -> float:
    """Bisection for the crossover where the two-step and three-step formulas meet.

    The root is bracketed between the second branch point and 2(pi-1)/pi^2;
    the result lies strictly inside and satisfies
    |branch3(kappa) - branch4(kappa)| <= tol.
    """
    if tol <= 0.0:
        raise DomainError("tol must be positive")
    lo, hi = kappa_bracket()

    def f(k: float) -> float:
        return _branch3(k) - _branch4(k)

    flo, fhi = f(lo), f(hi)
    if not (flo < 0.0 < fhi or fhi < 0.0 < flo):
        raise BracketFailure(
            f"no sign change over ({lo!r}, {hi!r}): f = ({flo!r}, {fhi!r})"
        )
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        fm = f(mid)
        if fm == 0.0:
            lo = hi = mid
            break
        if (fm < 0.0) == (flo < 0.0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    root = 0.5 * (lo + hi)
    if abs(f(root)) > tol:
        raise BracketFailure(f"residual {abs(f(root)):.3e} exceeds tol {tol:.3e}")
    return root


@lru_cache(maxsize=1)
def kappa() -> float:
    """Interior crossover of the piecewise bound, solved once per process."""
    return solve_kappa(1e-13)


def integral_threshold() -> float:
    """Strength ratio up to which the logarithmic bound stays below pi/2: 2 sinh(1)/e."""
    return 2.0 * math.sinh(1.0) / math.e


@dataclass(frozen=True)
class BoundConstants:
    """The constants pinning down the piecewise bound and the log-bound threshold."""

    c_crit: float
    kappa: float
    branch_points: tuple[float, float, float]
    upper_validity: float
    integral_threshold: float


@lru_cache(maxsize=1)
def bound_constants() -> BoundConstants:
    c = critical_strength()
    k = kappa()
    return BoundConstants(
        c_crit=c,
        kappa=k,
        branch_points=(first_branch_point(), second_branch_point(), k),
        upper_validity=2.0 * c,
        integral_threshold=integral_threshold(),
    )


def piecewise_angle_bound_with_branch(x: float) -> tuple[float, int]:
    """Piecewise optimal angle bound together with the branch that produced it.

    Domain [0, critical_strength()].  At an exact branch point the lower
    branch is evaluated; the adjacent formulas agree there.
    """
    x = float(x)
    if not 0.0 <= x <= critical_strength():
        raise DomainError(
            f"x={x!r} outside [0, {critical_strength()!r}]"
        )
    if x <= first_branch_point():
        return _branch1(x), 1
    if x <= second_branch_point():
        return _branch2(x), 2
    if x <= kappa():
        return _branch3(x), 3
    return _branch4(x), 4


def piecewise_angle_bound(x: float) -> float:
    """Piecewise optimal angle bound on [0, critical_strength()]."""
    return piecewise_angle_bound_with_branch(x)[0]


def _require_norms(norm_plus: float, norm_minus: float, gap: float) -> float:
    if norm_plus < 0.0 or norm_minus < 0.0:
        raise DomainError("perturbation part norms must be nonnegative")
    if gap <= 0.0:
        raise DomainError(f"gap must be positive, got {gap!r}")
    return norm_plus + norm_minus


def favourable_angle_bound(norm_plus: float, norm_minus: float, gap: float) -> float:
    """Sharp bound (1/2) arcsin((||V+|| + ||V-||)/gap), below pi/4.

    Valid when one spectral component's convex hull misses the other component
    and the sum of the part norms stays below the gap.
    """
    s = _require_norms(norm_plus, norm_minus, gap)
    if s >= gap:
        raise GapConditionViolated(f"||V+|| + ||V-|| = {s!r} must stay below gap {gap!r}")
    return 0.5 * math.asin(s / gap)


def generic_angle_bound(norm_plus: float, norm_minus: float, gap: float) -> float:
    """Piecewise bound at (||V+|| + ||V-||)/(2 gap), below pi/2.

    Requires ||V+|| + ||V-|| < 2 * critical_strength() * gap; no geometry
    assumption beyond the separation itself.
    """
    s = _require_norms(norm_plus, norm_minus, gap)
    cap = 2.0 * critical_strength() * gap
    if s >= cap:
        raise DomainError(f"||V+|| + ||V-|| = {s!r} must stay below {cap!r}")
    # the division may round a hair past the endpoint; the precondition was
    # already checked on the un-divided sum
    return piecewise_angle_bound(min(s / (2.0 * gap), critical_strength()))


def half_arcsin_angle_bound(norm_plus: float, norm_minus: float, gap: float) -> float:
    """Bound (1/2) arcsin((pi/2)(||V+|| + ||V-||)/gap), at most pi/4.

    Valid for ||V+|| + ||V-|| <= 2 gap / pi; coincides with the piecewise
    bound's first branch.
    """
    s = _require_norms(norm_plus, norm_minus, gap)
    if s > (2.0 * gap / math.pi) * (1.0 + 1e-12):
        raise DomainError(f"||V+|| + ||V-|| = {s!r} exceeds 2*gap/pi = {2.0 * gap / math.pi!r}")
    return 0.5 * math.asin(_clip1(0.5 * math.pi * s / gap))


def sin2theta_bound(
    norm_plus: float, norm_minus: float, gap: float, favourable: bool = False
) -> float:
    """Bound on ||sin 2*Theta||: (pi/2)(||V+|| + ||V-||)/gap, constant 1 when favourable."""
    s = _require_norms(norm_plus, norm_minus, gap)
    return (1.0 if favourable else 0.5 * math.pi) * s / gap


def path_step_bound(
    s: float,
    t: float,
    norm_v: float,
    norm_plus: float,
    norm_minus: float,
    gap: float,
) -> float:
    """Norm bound on the projector change between path parameters s <= t.

    Evaluates (pi/2) |t - s| ||V|| / (gap - t(||V+|| + ||V-||)).
    """
    if not 0.0 <= s <= t <= 1.0:
        raise DomainError(f"need 0 <= s <= t <= 1, got s={s!r}, t={t!r}")
    if norm_v < 0.0:
        raise DomainError("norm_v must be nonnegative")
    total = _require_norms(norm_plus, norm_minus, gap)
    denom = gap - t * total
    if denom <= 0.0:
        raise DomainError(
            f"gap - t(||V+|| + ||V-||) = {denom!r} must be positive"
        )
    return 0.5 * math.pi * (t - s) * norm_v / denom


class IntegralBound(NamedTuple):
    value: float
    below_threshold: bool


def integral_angle_bound(norm_plus: float, norm_minus: float, gap: float) -> IntegralBound:
    """Logarithmic bound (pi/4) log(gap / (gap - ||V+|| - ||V-||)).

    Also reports whether the strength ratio stays within 2 sinh(1)/e, the
    regime in which this bound is strictly below pi/2.
    """
    s = _require_norms(norm_plus, norm_minus, gap)
    if s >= gap:
        raise GapConditionViolated(f"||V+|| + ||V-|| = {s!r} must stay below gap {gap!r}")
    value = 0.25 * math.pi * math.log(gap / (gap - s))
    return IntegralBound(value=value, below_threshold=s / gap <= integral_threshold())


def _step_sum(lam: np.ndarray) -> float:
    return float(0.5 * np.sum(np.arcsin(np.clip(0.5 * math.pi * lam, -1.0, 1.0))))


def _step_sum_grad(lam: np.ndarray) -> np.ndarray:
    return 0.25 * math.pi / np.sqrt(np.maximum(1e-300, 1.0 - (0.5 * math.pi * lam) ** 2))


def partition_infimum_bound(
    x: float,
    n_max: int = 64,
    tol: float = 1e-10,
    seed: int = 0,
) -> float:
    """Minimize the accumulated step bound over partitions of the homotopy path.

    Searches min over n <= n_max of (1/2) sum_j arcsin(pi lam_j / 2) subject to
    prod_j (1 - lam_j) = 1 - x and 0 <= lam_j <= 2/pi.  For each n the search
    covers the all-equal vector and multi-start local refinement over unequal
    vectors.  Equals piecewise_angle_bound(x/2) in exact arithmetic; kept free
    of the closed-form branches so it can serve as an independent cross-check.
    """
    x = float(x)
    if not 0.0 <= x <= 2.0 * critical_strength():
        raise DomainError(f"x={x!r} outside [0, {2.0 * critical_strength()!r}]")
    if n_max < 1:
        raise DomainError(f"n_max must be at least 1, got {n_max!r}")
    if tol <= 0.0:
        raise DomainError("tol must be positive")
    if x == 0.0:
        return 0.0
    log_target = math.log1p(-x)
    if n_max * math.log1p(-STEP_CAP) > log_target:
        raise InfeasibleConstraint(
            f"even {n_max} steps at the cap cannot reach the product 1-x = {1.0 - x!r}"
        )
    rng = np.random.default_rng(seed)
    ub = STEP_CAP * (1.0 - 1e-12)
    ftol = min(tol, 1e-11)
    best = np.inf
    for n in range(1, n_max + 1):
        lam_eq = -math.expm1(log_target / n)
        if lam_eq > STEP_CAP + 1e-15:
            continue  # this n cannot reach the product
        best = min(best, _step_sum(np.full(n, lam_eq)))
        if n < 2:
            continue
        constraint = {
            "type": "eq",
            "fun": lambda lam: float(np.sum(np.log1p(-np.minimum(lam, ub))) - log_target),
            "jac": lambda lam: -1.0 / (1.0 - np.minimum(lam, ub)),
        }
        box = [(0.0, ub)] * n
        starts = [np.full(n, min(lam_eq, ub))]
        for _ in range(2 if n <= 16 else 1):
            weights = rng.dirichlet(np.ones(n))
            starts.append(np.clip(-np.expm1(weights * log_target), 0.0, ub))
        for x0 in starts:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", RuntimeWarning)
                res = minimize(
                    _step_sum,
                    x0,
                    jac=_step_sum_grad,
                    method="SLSQP",
                    bounds=box,
                    constraints=[constraint],
                    options={"maxiter": 60, "ftol": ftol},
                )
            if res.x is None:
                continue
            lam = np.clip(res.x, 0.0, ub)
            if abs(float(np.sum(np.log1p(-lam))) - log_target) <= 1e-8:
                best = min(best, _step_sum(lam))
    return float(best)
