"""K-functionals, interpolation, BBM limits, sharpness and stability

Classes:
    KFunctionalCurve - K(t) from mollified decompositions
    InterpolationReport - empirical interpolation constant
    BbmSweep - (1 - s) [f]^p along a coupled (s, N) diagonal
    SharpnessTrace - E(f_delta) / S(f_delta) for shrinking bumps
    ShapeComparison - sharpness traces of several bump shapes
    StabilityTable - |E(f + eps g) - E(f)| against certified bounds
    AnisotropicSobolevReport - ||f||_{p*} / ||grad_A f||_p on a grid

Functions:
    mollify(space, f, delta): mu-weighted ball averages
    k_functional(space, f, s1, p1, p, t_grid)
    interpolation_inequality_report(space, f, s1, p1, theta)
    angular_constant(n, p): integral of |e . theta|^p over the unit sphere
    bbm_limit(sweep, rule, p)
    sharpness_trace(shape, x0, deltas, p) / compare_shapes(...)
    stability_test(space, f, g, epsilons, p)
    anisotropic_sobolev_report(space, f, anisotropy, p, n_a)
"""

from dataclasses import dataclass
from functools import partial
import logging
import math
from typing import Any, Optional, Sequence

import numpy as np
from scipy.special import gamma  # type: ignore

from .errors import FieldError, ParameterError
from .fields import (
    BUMP_SHAPES,
    FieldRule,
    bump_gradient_energy,
    check_field,
    evaluate_field,
    rule_number,
)
from .functionals import (
    AnisotropicGradient,
    anisotropic_gradient,
    anisotropic_weak_functional,
    bvy_weak_functional,
    check_dimension,
    fractional_energy,
    fractional_seminorm,
    lipschitz_energy,
    weak_profile,
)
from .space import AnisotropyMatrix, MetricMeasureSpace, ahlfors_constant, grid_space
from .sweep import sweep_map

logger = logging.getLogger(__name__)

# Acceptance sweep: N roughly proportional to 1 / (1 - s)
BBM_SWEEP = ((0.6, 256), (0.7, 512), (0.8, 1024), (0.9, 2048), (0.95, 4096))
BBM_TOLERANCE = 0.1
BBM_LIMITATION = (
    "finite grids carry a discretization bias at every s; no correction is applied, "
    "so pass only compares the last diagonal entry with the target"
)

# Points across the support of a rescaled bump
MIN_SUPPORT_POINTS = 32

SHARPNESS_TOLERANCE = 0.05

# Relative slack of the concavity and stability checks
CURVE_SLACK = 1e-12
STABILITY_SLACK = 1e-9

# Differences may exceed eps (||g||_inf + ||Lip g||_p) by at most this factor
STABILITY_TOLERANCE = 100.0


def mollify(space: MetricMeasureSpace, f: Any, delta: float) -> np.ndarray:
    """f_delta(i) = mu-weighted average of f over B(i, delta)

    delta <= the minimal distance returns f itself.
    """
    f = check_field(space, f, "mollify")
    if delta <= 0.0:
        raise ParameterError("mollification scale must be positive", "mollify")
    members = (space.distances < delta).astype(float)
    return (members @ (f * space.weights)) / (members @ space.weights)


@dataclass
class KFunctionalCurve:
    """K(t) = min over decompositions f = (f - f_delta) + f_delta

    Attributes:
        t: ascending positive grid
        values: K(t)
        scales: optimal delta per t (0 for f_1 = f, None for f_1 = 0)
        lipschitz_norm: ||Lip f||_{L^p}
        fractional_norm: [f]_{W^{s1,p1}}
        monotone: K nondecreasing on the grid
        concave: K passes the chord test on the grid
        bounded: K(t) <= min(||Lip f||, t [f]) on the grid
        degenerate_scales: deltas at which the mollifier is the identity
    """

    t: np.ndarray
    values: np.ndarray
    scales: list[Optional[float]]
    lipschitz_norm: float
    fractional_norm: float
    monotone: bool
    concave: bool
    bounded: bool
    degenerate_scales: list[float]


def _lipschitz_norm(space: MetricMeasureSpace, f: np.ndarray, p: float, h: Optional[float]) -> float:
    """||Lip f||_{L^p}"""
    return lipschitz_energy(space, f, p, h) ** (1.0 / p)


def k_functional(
    space: MetricMeasureSpace,
    f: Any,
    s1: float,
    p1: float,
    p: float,
    t_grid: Any,
    deltas: Any = None,
    h: Optional[float] = None,
) -> KFunctionalCurve:
    """Upper bound on K(t, f; LIP, W^{s1,p1}) over ball-average decompositions

    Candidates are f_1 = f_delta for every delta in `deltas`, plus
    f_1 = f and f_1 = 0, each costing ||Lip(f - f_1)||_p + t [f_1]_{s1,p1}.

    Args:
        space: the space
        f: the field
        s1, p1: order and exponent of the fractional seminorm
        p: exponent of the Lipschitz norm
        t_grid: positive ascending t values
        deltas: mollification scales (default: 12 log-spaced values
            from twice the minimal distance to the diameter)
        h: Lipschitz neighbourhood radius
    """
    f = check_field(space, f, "k_functional")
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.shape[0] == 0 or np.any(t_grid <= 0.0) or np.any(np.diff(t_grid) <= 0.0):
        raise ParameterError("t grid must be positive and ascending", "k_functional")

    if deltas is None:
        deltas = np.geomspace(2.0 * space.min_distance, space.diameter, 12)
    deltas = np.asarray(deltas, dtype=float)
    if deltas.shape[0] == 0:
        raise ParameterError("empty mollification grid", "k_functional")

    degenerate = [float(delta) for delta in deltas if delta <= space.min_distance]
    if degenerate:
        logger.warning("k_functional: %d scale(s) at or below the minimal distance", len(degenerate))

    lipschitz_norm = _lipschitz_norm(space, f, p, h)
    fractional_norm = fractional_seminorm(space, f, s1, p1)

    # (cost of f_0, cost of f_1, scale)
    candidates: list[tuple[float, float, Optional[float]]] = [
        (0.0, fractional_norm, 0.0),
        (lipschitz_norm, 0.0, None),
    ]
    for delta in deltas:
        smooth = mollify(space, f, float(delta))
        candidates.append(
            (
                _lipschitz_norm(space, f - smooth, p, h),
                fractional_seminorm(space, smooth, s1, p1),
                float(delta),
            )
        )

    first = np.array([candidate[0] for candidate in candidates])
    second = np.array([candidate[1] for candidate in candidates])
    costs = first[None, :] + t_grid[:, None] * second[None, :]
    best = np.argmin(costs, axis=1)
    values = costs[np.arange(t_grid.shape[0]), best]

    # Chord test in t: K(t_k) >= linear interpolation of its neighbours
    concave = True
    if t_grid.shape[0] >= 3:
        weight = (t_grid[1:-1] - t_grid[:-2]) / (t_grid[2:] - t_grid[:-2])
        chord = (1.0 - weight) * values[:-2] + weight * values[2:]
        concave = bool(np.all(values[1:-1] >= chord - CURVE_SLACK * np.abs(chord)))

    envelope = np.minimum(lipschitz_norm, t_grid * fractional_norm)
    return KFunctionalCurve(
        t=t_grid,
        values=values,
        scales=[candidates[index][2] for index in best],
        lipschitz_norm=lipschitz_norm,
        fractional_norm=fractional_norm,
        monotone=bool(np.all(np.diff(values) >= 0.0)),
        concave=concave,
        bounded=bool(np.all(values <= envelope)),
        degenerate_scales=degenerate,
    )


@dataclass(frozen=True)
class InterpolationReport:
    """[f]_{W^{s,p}} against ||Lip f||_p^theta [f]_{W^{s1,p1}}^(1 - theta)

    Attributes:
        s, p: interpolated order and exponent
        lhs: [f]_{W^{s,p}}
        rhs_core: ||Lip f||_p^theta (sum for [f]_{s1,p1}^p1)^((1 - theta) / p1)
        constant: lhs / rhs_core, None when rhs_core vanishes
    """

    s: float
    p: float
    lhs: float
    rhs_core: float
    constant: Optional[float]


def interpolation_parameters(s1: float, p1: float, theta: float) -> tuple[float, float]:
    """s = (1 - theta) s1 + theta and 1/p = (1 - theta)/p1 + theta"""
    if not 0.0 < theta < 1.0:
        raise ParameterError(f"theta={theta} must lie in (0, 1)", "interpolation")
    if not 0.0 < s1 < 1.0:
        raise ParameterError(f"s1={s1} must lie in (0, 1)", "interpolation")
    if p1 < 1.0:
        raise ParameterError(f"p1={p1} must be >= 1", "interpolation")
    return (1.0 - theta) * s1 + theta, 1.0 / ((1.0 - theta) / p1 + theta)


def interpolation_inequality_report(
    space: MetricMeasureSpace,
    f: Any,
    s1: float,
    p1: float,
    theta: float,
    h: Optional[float] = None,
) -> InterpolationReport:
    """Empirical constant of the interpolation inequality for one field"""
    s, p = interpolation_parameters(s1, p1, theta)
    f = check_field(space, f, "interpolation_inequality_report")

    lhs = fractional_seminorm(space, f, s, p)
    rhs_core = _lipschitz_norm(space, f, p, h) ** theta * fractional_energy(
        space, f, s1, p1
    ) ** ((1.0 - theta) / p1)
    constant = None if rhs_core == 0.0 else lhs / rhs_core
    return InterpolationReport(s, p, lhs, rhs_core, constant)


def angular_constant(n: int, p: float) -> float:
    """Integral over the unit sphere S^(n-1) of |e . theta|^p

    2 pi^((n-1)/2) Gamma((p+1)/2) / Gamma((n+p)/2); 2 for n = 1, pi for n = p = 2.
    """
    if n < 1:
        raise ParameterError("dimension must be >= 1", "angular_constant")
    return float(2.0 * math.pi ** ((n - 1) / 2.0) * gamma((p + 1.0) / 2.0) / gamma((n + p) / 2.0))


@dataclass(frozen=True)
class BbmRow:
    """One (s, N) entry of a BBM sweep"""

    s: float
    n_points: int
    value: float
    ahlfors: float


@dataclass
class BbmSweep:
    """(1 - s) [f]^p_{W^{s,p}} along a coupled (s, N) diagonal

    Attributes:
        rows: entries in sweep order
        target: (1 / (c_n p)) angular_constant(n, p) integral |f'|^p
        gradient_energy: integral |f'|^p of the continuum bump
        monotone: |value - target| nonincreasing along the diagonal
        within_tolerance: last entry within `tolerance` of the target
        tolerance: relative tolerance of the last entry
    """

    rows: list[BbmRow]
    target: float
    gradient_energy: float
    monotone: bool
    within_tolerance: bool
    tolerance: float = BBM_TOLERANCE

    @property
    def relative_errors(self) -> list[float]:
        """|value - target| / target per row"""
        return [abs(row.value - self.target) / self.target for row in self.rows]


def _bbm_row(rule: FieldRule, p: float, entry: tuple[float, int]) -> BbmRow:
    """One diagonal entry on a 1-D unit grid"""
    s, n_points = entry
    space = grid_space(int(n_points))
    f = evaluate_field(space, rule)
    value = (1.0 - s) * fractional_energy(space, f, s, p)
    return BbmRow(float(s), int(n_points), value, ahlfors_constant(space, 1))


def bbm_limit(
    sweep: Sequence[tuple[float, int]],
    rule: FieldRule,
    p: float = 2.0,
    workers: int = 1,
) -> BbmSweep:
    """BBM limit along a coupled sweep of 1-D unit grids

    Args:
        sweep: (s, N) pairs with s ascending to 1 and N ascending
        rule: a bump field rule (its continuum gradient energy is the target input)
        p: exponent
        workers: process count for the sweep

    c_1 is measured on the finest grid.
    Raises ParameterError for mismatched or unordered sweeps.
    """
    if len(sweep) == 0:
        raise ParameterError("empty BBM sweep", "bbm_limit")
    orders = np.array([entry[0] for entry in sweep], dtype=float)
    sizes = np.array([entry[1] for entry in sweep], dtype=int)
    if np.any(orders <= 0.0) or np.any(orders >= 1.0) or np.any(np.diff(orders) <= 0.0):
        raise ParameterError("s values must ascend inside (0, 1)", "bbm_limit")
    if np.any(np.diff(sizes) < 0):
        raise ParameterError("grid sizes must not decrease along the sweep", "bbm_limit")
    if rule.name != "bump":
        raise ParameterError("BBM targets are available for bump fields", "bbm_limit")

    params = rule.params
    width = rule_number(params, "width", 0.25, "bbm_limit")
    if width <= 0.0:
        raise FieldError(f"bump width must be positive, got {width}", "bbm_limit")
    gradient_energy = bump_gradient_energy(
        str(params.get("shape", "smooth")),
        p,
        width,
        rule_number(params, "amplitude", 1.0, "bbm_limit"),
    )

    rows = sweep_map(partial(_bbm_row, rule, p), list(zip(orders, sizes)), workers)
    ahlfors = rows[-1].ahlfors
    target = angular_constant(1, p) * gradient_energy / (ahlfors * p)

    errors = [abs(row.value - target) for row in rows]
    result = BbmSweep(
        rows=rows,
        target=target,
        gradient_energy=gradient_energy,
        monotone=bool(np.all(np.diff(errors) <= 0.0)),
        within_tolerance=errors[-1] <= BBM_TOLERANCE * target,
    )
    if not result.within_tolerance:
        logger.warning(
            "bbm_limit: last entry is %.1f%% from the target (tolerance %.0f%%); %s",
            100.0 * errors[-1] / target,
            100.0 * BBM_TOLERANCE,
            BBM_LIMITATION,
        )
    return result


@dataclass
class SharpnessTrace:
    """E(f_delta) / S(f_delta) for bumps rescaled around x0

    Attributes:
        shape: bump shape
        deltas: strictly decreasing half-widths
        n_points: grid size used per delta
        weak: E(f_delta)
        local: S(f_delta) = sum L_i^p mu_i
        ratios: weak / local
        estimate: last ratio
        converged: last two ratios within SHARPNESS_TOLERANCE
    """

    shape: str
    deltas: list[float]
    n_points: list[int]
    weak: list[float]
    local: list[float]
    ratios: list[float]
    estimate: float
    converged: bool


def _sharpness_entry(
    shape: str,
    x0: float,
    p: float,
    amplitude: float,
    n_points: Optional[int],
    delta: float,
) -> tuple[int, float, float]:
    """(N, E, S) for one rescaled bump"""
    size = math.ceil(MIN_SUPPORT_POINTS / (2.0 * delta)) if n_points is None else int(n_points)
    if 2.0 * delta * size < MIN_SUPPORT_POINTS:
        raise FieldError(
            f"bump of half-width {delta:g} is under-resolved on {size} points", "sharpness_trace"
        )

    space = grid_space(size)
    rule = FieldRule("bump", {"center": x0, "width": delta, "amplitude": amplitude, "shape": shape})
    f = evaluate_field(space, rule)
    return size, bvy_weak_functional(space, f, p), lipschitz_energy(space, f, p)


def sharpness_trace(
    shape: str,
    x0: float,
    deltas: Sequence[float],
    p: float = 2.0,
    amplitude: float = 1.0,
    n_points: Optional[int] = None,
    workers: int = 1,
) -> SharpnessTrace:
    """Ratio E / S along bumps f((x - x0) / delta) on [0, 1)

    The grid is refined with delta so the support holds at least
    MIN_SUPPORT_POINTS points, unless n_points fixes the grid.

    Raises ParameterError for unordered deltas, FieldError when a bump
    leaves the domain or is under-resolved.
    """
    if shape not in BUMP_SHAPES:
        raise FieldError(f"unknown bump shape '{shape}'", "sharpness_trace")
    deltas = [float(delta) for delta in deltas]
    if len(deltas) == 0 or any(delta <= 0.0 for delta in deltas):
        raise ParameterError("deltas must be positive", "sharpness_trace")
    if any(later >= earlier for earlier, later in zip(deltas, deltas[1:])):
        raise ParameterError("deltas must be strictly decreasing", "sharpness_trace")
    if any(x0 - delta <= 0.0 or x0 + delta >= 1.0 for delta in deltas):
        raise FieldError("bump support leaves the unit interval", "sharpness_trace")

    entries = sweep_map(partial(_sharpness_entry, shape, x0, p, amplitude, n_points), deltas, workers)

    sizes = [entry[0] for entry in entries]
    weak = [entry[1] for entry in entries]
    local = [entry[2] for entry in entries]
    ratios = [e / s for e, s in zip(weak, local)]

    converged = len(ratios) >= 2 and abs(ratios[-1] - ratios[-2]) < SHARPNESS_TOLERANCE * abs(ratios[-1])
    return SharpnessTrace(shape, deltas, sizes, weak, local, ratios, ratios[-1], converged)


@dataclass
class ShapeComparison:
    """Sharpness traces per shape and the smallest estimate"""

    traces: dict[str, SharpnessTrace]
    best_shape: str
    infimum: float


def compare_shapes(
    shapes: Sequence[str],
    x0: float,
    deltas: Sequence[float],
    p: float = 2.0,
    workers: int = 1,
) -> ShapeComparison:
    """Sharpness traces side by side; the infimum is an upper estimate of the optimal constant"""
    if len(shapes) == 0:
        raise ParameterError("no bump shapes given", "compare_shapes")
    traces = {shape: sharpness_trace(shape, x0, deltas, p, workers=workers) for shape in shapes}
    best_shape = min(traces, key=lambda shape: traces[shape].estimate)
    return ShapeComparison(traces, best_shape, traces[best_shape].estimate)


@dataclass
class StabilityTable:
    """|E(f + eps g) - E(f)| per eps

    Attributes:
        epsilons: strictly decreasing, >= 0
        values: E(f + eps g)
        differences: |E(f + eps g) - E(f)|
        bounds: certified bound on each difference
        scales: eps (||g||_inf + ||Lip g||_p)
        certified: every difference within its bound
        decreasing: the last three differences are nonincreasing
        within_scale: the last difference is at most tolerance * its scale
        tolerance: factor used for within_scale
    """

    epsilons: list[float]
    values: list[float]
    differences: list[float]
    bounds: list[float]
    scales: list[float]
    certified: bool
    decreasing: bool
    within_scale: bool
    tolerance: float


def stability_test(
    space: MetricMeasureSpace,
    f: Any,
    g: Any,
    epsilons: Sequence[float],
    p: float,
    tolerance: float = STABILITY_TOLERANCE,
) -> StabilityTable:
    """Weak functional under perturbations f + eps g

    Every pair ratio moves by at most eta = eps * (largest weak ratio of g),
    which bounds the change of the supremum through the level set profile of f.
    """
    f = check_field(space, f, "stability_test")
    g = check_field(space, g, "stability_test")
    epsilons = [float(epsilon) for epsilon in epsilons]
    if len(epsilons) == 0 or any(epsilon < 0.0 for epsilon in epsilons):
        raise ParameterError("epsilons must be nonnegative", "stability_test")
    if any(later >= earlier for earlier, later in zip(epsilons, epsilons[1:])):
        raise ParameterError("epsilons must be strictly decreasing", "stability_test")
    if tolerance <= 0.0:
        raise ParameterError("tolerance must be positive", "stability_test")

    profile = weak_profile(space, f, p)
    base = profile.supremum(p)
    perturbation = weak_profile(space, g, p)
    largest = 0.0 if perturbation.is_empty else float(perturbation.ratios[-1])
    size = float(np.max(np.abs(g))) + lipschitz_energy(space, g, p) ** (1.0 / p)

    values, differences, bounds, scales = [], [], [], []
    for epsilon in epsilons:
        value = bvy_weak_functional(space, f + epsilon * g, p)
        lower, upper = profile.shift_bounds(epsilon * largest, p)
        values.append(value)
        differences.append(abs(value - base))
        bounds.append(max(upper - base, base - lower))
        scales.append(epsilon * size)

    certified = all(
        difference <= bound + STABILITY_SLACK * max(base, bound)
        for difference, bound in zip(differences, bounds)
    )
    tail = differences[-3:]
    decreasing = all(later <= earlier for earlier, later in zip(tail, tail[1:]))
    within_scale = differences[-1] <= tolerance * scales[-1]
    return StabilityTable(
        epsilons, values, differences, bounds, scales, certified, decreasing, within_scale, tolerance
    )


@dataclass(frozen=True)
class AnisotropicSobolevReport:
    """Anisotropic Sobolev embedding data on a grid

    Attributes:
        critical_exponent: p* = n_A p / (n_A - p)
        lhs: ||f||_{L^p*}
        gradient_norm: ||grad_A f||_{L^p}
        ratio: lhs / gradient_norm, None when the gradient vanishes
        weak_ratio: anisotropic weak functional / sum |grad_A f|^p mu
    """

    critical_exponent: float
    lhs: float
    gradient_norm: float
    ratio: Optional[float]
    weak_ratio: Optional[float]


def anisotropic_sobolev_report(
    space: MetricMeasureSpace,
    f: Any,
    anisotropy: Optional[AnisotropyMatrix] = None,
    p: float = 1.0,
    n_a: Optional[int] = None,
) -> AnisotropicSobolevReport:
    """Empirical anisotropic Sobolev ratio

    n_a defaults to the coordinate dimension; it must be an integer above p.
    """
    gradient: AnisotropicGradient = anisotropic_gradient(space, f, anisotropy)
    f = check_field(space, f, "anisotropic_sobolev_report")
    if n_a is None:
        n_a = space.coords.shape[1]  # type: ignore
    n_a = check_dimension(n_a, "anisotropic_sobolev_report")
    if not 1.0 <= p < n_a:
        raise ParameterError(f"need 1 <= p < n_A (p={p}, n_A={n_a})", "anisotropic_sobolev_report")

    critical = n_a * p / (n_a - p)
    lhs = float(np.sum(np.abs(f) ** critical * space.weights)) ** (1.0 / critical)
    gradient_energy = gradient.energy(p)
    gradient_norm = gradient_energy ** (1.0 / p)

    weak = anisotropic_weak_functional(space, f, anisotropy, p, n_a)
    return AnisotropicSobolevReport(
        critical_exponent=critical,
        lhs=lhs,
        gradient_norm=gradient_norm,
        ratio=None if gradient_norm == 0.0 else lhs / gradient_norm,
        weak_ratio=None if gradient_energy == 0.0 else weak / gradient_energy,
    )