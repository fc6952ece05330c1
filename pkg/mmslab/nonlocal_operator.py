"""Nonlocal p-Laplacian, Dirichlet solver and Poincare checks

Classes:
    NonlocalOperatorParams - (s, p) of the operator
    SolverSettings - tolerances and caps of the Dirichlet solver
    DirichletProblem - energy and gradient of one Dirichlet problem
    SolveReport - outcome of solve_dirichlet
    PoincareReport - constructive Poincare bound on one ball
    EquivalenceReport - nonlocal / local energy ratios over a refinement family
    HolderProbe - empirical Hoelder seminorm and oscillation decay

Functions:
    apply_nonlocal_p_laplacian(space, f, params)
    energy(space, u, rhs, params) / energy_gradient(space, u, rhs, params)
    check_gradient(space, u, rhs, params): gradient against central differences
    dense_linear_oracle(space, rhs, boundary, s): direct solve for p = 2
    solve_dirichlet(space, rhs, boundary, params, settings)
    poincare_check(space, f, center, radius, params)
    energy_equivalence_report(spaces, rule, params)
    holder_probe(space, u, subdomain, alpha) / holder_sweep(...)

The operator kernel is K_ij = 1 / (rho(i, j)^(sp) V(i, rho(i, j))^((p - 1) / p))
with the diagonal omitted, so

    (L f)_i = sum_j |f_i - f_j|^(p - 2) (f_i - f_j) K_ij mu_j

and the Dirichlet energy is

    J(u) = (1/p) sum_{i != j} |u_i - u_j|^p K_ij mu_i mu_j - sum_i rhs_i u_i mu_i.

K is not symmetric, so the gradient of J pairs K with its transpose.
"""

from dataclasses import dataclass, field
from functools import partial
import logging
from typing import Any, Mapping, Optional, Sequence

import numpy as np
from scipy.linalg import solve  # type: ignore

from .errors import ConvergenceError, FieldError, NumericalError, ParameterError, PoincareViolation
from .fields import FieldRule, check_field, evaluate_field
from .functionals import fractional_energy, lipschitz_energy
from .space import MetricMeasureSpace
from .sweep import sweep_map

logger = logging.getLogger(__name__)

# Relative smoothing of |t|^(p-2) t for 1 < p < 2
SMOOTHING = 1e-8

# Relative rounding allowance when comparing energies
ENERGY_ROUNDING = 1e-13

MAX_HALVINGS = 60

# An energy stall only stops the solver once the gradient norm is within
# this factor of gradient_tol
ENERGY_STOP_FACTOR = 10.0

# Finite difference gradient check
GRADIENT_STEP = 1e-6
GRADIENT_TOLERANCE = 1e-4

# Relative slack of the Poincare bound
POINCARE_SLACK = 1e-12

HOLDER_EXPONENTS = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)


@dataclass(frozen=True)
class NonlocalOperatorParams:
    """Order s in (0, 1) and exponent p >= 1"""

    s: float = 0.5
    p: float = 2.0

    def __post_init__(self):
        if not 0.0 < self.s < 1.0:
            raise ParameterError(f"smoothness s={self.s} must lie in (0, 1)", "nonlocal")
        if not (np.isfinite(self.p) and self.p >= 1.0):
            raise ParameterError(f"exponent p={self.p} must be >= 1", "nonlocal")


@dataclass(frozen=True)
class SolverSettings:
    """Dirichlet solver settings

    Attributes:
        max_iter: iteration cap
        gradient_tol: stop when the interior gradient norm of J drops below this
        energy_tol: stop when the relative energy decrease stays below this
            for `patience` consecutive steps while the gradient norm is at most
            ENERGY_STOP_FACTOR * gradient_tol (0 disables)
        patience: see energy_tol
        armijo: sufficient decrease constant
        initial_step: first trial step
        check_gradient: validate the gradient by finite differences first
        seed: seed of the perturbed point used by the gradient check
    """

    max_iter: int = 20000
    gradient_tol: float = 1e-8
    energy_tol: float = 1e-10
    patience: int = 5
    armijo: float = 1e-4
    initial_step: float = 1.0
    check_gradient: bool = True
    seed: int = 0


def kernel_matrix(space: MetricMeasureSpace, params: NonlocalOperatorParams) -> np.ndarray:
    """K_ij = 1 / (rho^(sp) V(i, rho)^((p - 1) / p)), zero on the diagonal"""
    with np.errstate(divide="ignore", invalid="ignore"):
        kernel = 1.0 / (
            space.distances ** (params.s * params.p)
            * space.pair_volumes ** ((params.p - 1.0) / params.p)
        )
    return np.where(space.off_diagonal, kernel, 0.0)


def _flux(differences: np.ndarray, p: float, epsilon: float = 0.0) -> np.ndarray:
    """|t|^(p - 2) t, or (t^2 + eps^2)^((p - 2) / 2) t when smoothed"""
    if epsilon > 0.0:
        return (differences**2 + epsilon**2) ** ((p - 2.0) / 2.0) * differences
    return np.sign(differences) * np.abs(differences) ** (p - 1.0)


def _potential(differences: np.ndarray, p: float, epsilon: float = 0.0) -> np.ndarray:
    """Antiderivative of _flux vanishing at 0"""
    if epsilon > 0.0:
        return ((differences**2 + epsilon**2) ** (p / 2.0) - epsilon**p) / p
    return np.abs(differences) ** p / p


def apply_nonlocal_p_laplacian(
    space: MetricMeasureSpace, f: Any, params: NonlocalOperatorParams
) -> np.ndarray:
    """(L f)_i = sum_{j != i} |f_i - f_j|^(p-2) (f_i - f_j) K_ij mu_j

    The flux is 0 where f_i = f_j, for every p >= 1.
    Raises ParameterError for fewer than two points.
    """
    if space.n_points < 2:
        raise ParameterError("at least two points are required", "apply_nonlocal_p_laplacian")
    f = check_field(space, f, "apply_nonlocal_p_laplacian")
    flux = _flux(f[:, None] - f[None, :], params.p)
    return (flux * kernel_matrix(space, params)) @ space.weights


@dataclass
class DirichletProblem:
    """Energy J and its gradient for fixed (space, rhs, params)

    Attributes:
        space: the space
        rhs: right-hand side per point
        params: operator parameters
        epsilon: smoothing of the flux (0 for none)
    """

    space: MetricMeasureSpace
    rhs: np.ndarray
    params: NonlocalOperatorParams
    epsilon: float = 0.0
    pair_weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        weights = self.space.weights
        self.rhs = check_field(self.space, self.rhs, "dirichlet_problem")
        self.pair_weights = (
            kernel_matrix(self.space, self.params) * weights[:, None] * weights[None, :]
        )
        self._symmetric = self.pair_weights + self.pair_weights.T
        self._load = self.rhs * weights

    def energy_terms(self, u: np.ndarray) -> tuple[float, float]:
        """(J(u), magnitude of the summed terms)"""
        pairs = float(
            np.sum(_potential(u[:, None] - u[None, :], self.params.p, self.epsilon) * self.pair_weights)
        )
        load = float(np.sum(self._load * u))
        return pairs - load, pairs + abs(load)

    def energy(self, u: np.ndarray) -> float:
        """J(u)"""
        return self.energy_terms(u)[0]

    def gradient(self, u: np.ndarray) -> np.ndarray:
        """dJ/du_k = sum_j flux(u_k - u_j) (W_kj + W_jk) - rhs_k mu_k"""
        flux = _flux(u[:, None] - u[None, :], self.params.p, self.epsilon)
        return np.sum(flux * self._symmetric, axis=1) - self._load

    def symmetric_residual(self, u: np.ndarray, interior: np.ndarray) -> float:
        """Weighted l2 norm of the Euler-Lagrange residual on the interior"""
        weights = self.space.weights[interior]
        values = self.gradient(u)[interior] / weights
        return float(np.sqrt(np.sum(values**2 * weights)))


def energy(
    space: MetricMeasureSpace, u: Any, rhs: Any, params: NonlocalOperatorParams
) -> float:
    """Discrete Dirichlet energy J(u)"""
    u = check_field(space, u, "energy")
    return DirichletProblem(space, rhs, params).energy(u)


def energy_gradient(
    space: MetricMeasureSpace, u: Any, rhs: Any, params: NonlocalOperatorParams
) -> np.ndarray:
    """Gradient of J with respect to every u_k"""
    u = check_field(space, u, "energy_gradient")
    return DirichletProblem(space, rhs, params).gradient(u)


def _gradient_error(problem: DirichletProblem, u: np.ndarray, step: float) -> float:
    """Relative l2 gap between the analytic and central-difference gradients"""
    analytic = problem.gradient(u)
    numeric = np.empty_like(analytic)
    for index in range(u.shape[0]):
        forward = u.copy()
        backward = u.copy()
        forward[index] += step
        backward[index] -= step
        numeric[index] = (problem.energy(forward) - problem.energy(backward)) / (2.0 * step)

    scale = max(float(np.linalg.norm(analytic)), float(np.linalg.norm(numeric)))
    if scale == 0.0:
        return 0.0
    return float(np.linalg.norm(analytic - numeric)) / scale


def check_gradient(
    space: MetricMeasureSpace,
    u: Any,
    rhs: Any,
    params: NonlocalOperatorParams,
    step: float = GRADIENT_STEP,
) -> float:
    """Relative error of energy_gradient against central differences of J"""
    u = check_field(space, u, "check_gradient")
    return _gradient_error(DirichletProblem(space, rhs, params), u, step)


def _split_boundary(
    space: MetricMeasureSpace, boundary: Mapping[int, float], operation: str
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(boundary ids, boundary values, interior ids)"""
    if not boundary:
        raise ParameterError("boundary must not be empty", operation)
    ids = np.array(sorted(int(key) for key in boundary))
    if np.any(ids < 0) or np.any(ids >= space.n_points):
        raise FieldError("boundary id outside the space", operation)
    values = np.array([float(boundary[key]) for key in sorted(boundary, key=int)])
    if not np.all(np.isfinite(values)):
        raise FieldError("boundary values must be finite", operation)

    interior = np.setdiff1d(np.arange(space.n_points), ids)
    if interior.shape[0] == 0:
        raise ParameterError("empty interior", operation)
    return ids, values, interior


def dense_linear_oracle(
    space: MetricMeasureSpace, rhs: Any, boundary: Mapping[int, float], s: float
) -> np.ndarray:
    """Exact minimizer of J for p = 2 by a dense symmetric solve

    With S = W + W^T, the gradient of J is H u - rhs * mu for
    H = diag(row sums of S) - S, so the interior solves
    H_II u_I = (rhs * mu)_I - H_IB u_B.
    """
    problem = DirichletProblem(space, rhs, NonlocalOperatorParams(s, 2.0))
    ids, values, interior = _split_boundary(space, boundary, "dense_linear_oracle")

    symmetric = problem.pair_weights + problem.pair_weights.T
    hessian = np.diag(np.sum(symmetric, axis=1)) - symmetric

    u = np.empty(space.n_points)
    u[ids] = values
    load = problem.rhs * space.weights
    right = load[interior] - hessian[np.ix_(interior, ids)] @ values
    u[interior] = solve(hessian[np.ix_(interior, interior)], right, assume_a="sym")
    return u


@dataclass
class SolveReport:
    """Outcome of solve_dirichlet

    Attributes:
        solution: minimizer u (boundary values included)
        energy: final J(u)
        residual: weighted l2 norm of the Euler-Lagrange residual on the interior
        operator_residual: weighted l2 norm of (L u - rhs) on the interior
        gradient_norm: l2 norm of the interior gradient of J
        iterations: accepted steps
        converged: a stopping rule was met
        stop_reason: 'gradient', 'energy', 'line_search' or 'max_iter'
        step_sizes: accepted step per iteration
        energy_trace: J after every accepted step (first entry: initial guess)
        gradient_error: relative error of the finite-difference gradient check
        smoothing: flux smoothing used (0 for p >= 2)
    """

    solution: np.ndarray
    energy: float
    residual: float
    operator_residual: float
    gradient_norm: float
    iterations: int
    converged: bool
    stop_reason: str
    step_sizes: list[float]
    energy_trace: list[float]
    gradient_error: Optional[float] = None
    smoothing: float = 0.0

    def to_dict(self) -> dict[str, Any]:
        """JSON-ready summary"""
        return {
            "solution": self.solution.tolist(),
            "energy": self.energy,
            "residual": self.residual,
            "operator_residual": self.operator_residual,
            "gradient_norm": self.gradient_norm,
            "iterations": self.iterations,
            "converged": self.converged,
            "stop_reason": self.stop_reason,
            "gradient_error": self.gradient_error,
            "smoothing": self.smoothing,
        }


def solve_dirichlet(
    space: MetricMeasureSpace,
    rhs: Any,
    boundary: Mapping[int, float],
    params: NonlocalOperatorParams,
    settings: SolverSettings = SolverSettings(),
) -> SolveReport:
    """Minimize J over fields that match the boundary values

    Gradient descent on the interior values with a Barzilai-Borwein
    trial step and Armijo backtracking (halving).

    Args:
        space: the space
        rhs: right-hand side per point
        boundary: point id -> prescribed value
        params: operator parameters (p > 1; 1 < p < 2 uses a smoothed flux)
        settings: solver settings

    Returns:
        SolveReport; a run that hits the iteration cap is returned
        with converged=False and a logged warning.

    Raises ParameterError for an empty boundary or interior or p = 1,
    NumericalError when the gradient check fails.
    """
    if params.p <= 1.0:
        raise ParameterError("the solver needs p > 1", "solve_dirichlet")
    rhs = check_field(space, rhs, "solve_dirichlet")
    ids, values, interior = _split_boundary(space, boundary, "solve_dirichlet")

    epsilon = 0.0
    if params.p < 2.0:
        scale = max(float(np.max(np.abs(values))), float(np.max(np.abs(rhs))))
        epsilon = SMOOTHING * (scale if scale > 0.0 else 1.0)
    problem = DirichletProblem(space, rhs, params, epsilon)

    u = np.empty(space.n_points)
    u[ids] = values
    u[interior] = float(np.median(values))

    gradient_error = None
    if settings.check_gradient:
        rng = np.random.default_rng(settings.seed)
        spread = max(1.0, float(np.max(np.abs(u))))
        trial = u + 0.1 * spread * rng.standard_normal(space.n_points)
        gradient_error = _gradient_error(problem, trial, GRADIENT_STEP)
        if gradient_error >= GRADIENT_TOLERANCE:
            raise NumericalError(
                f"energy gradient fails the finite-difference check ({gradient_error:.3g})",
                "solve_dirichlet",
            )

    current, magnitude = problem.energy_terms(u)
    gradient = problem.gradient(u)[interior]
    gradient_norm = float(np.linalg.norm(gradient))
    energy_trace = [current]
    step_sizes: list[float] = []
    step = settings.initial_step
    stall = 0
    stop_reason = "max_iter"

    for _ in range(settings.max_iter):
        if gradient_norm <= settings.gradient_tol:
            stop_reason = "gradient"
            break

        # Backtracking from the trial step
        trial = step
        slack = ENERGY_ROUNDING * magnitude
        for _ in range(MAX_HALVINGS):
            candidate = u.copy()
            candidate[interior] -= trial * gradient
            value, candidate_magnitude = problem.energy_terms(candidate)
            if value <= current - settings.armijo * trial * gradient_norm**2 + slack:
                break
            trial *= 0.5
        else:
            stop_reason = "line_search"
            break

        new_gradient = problem.gradient(candidate)[interior]

        # Barzilai-Borwein step for the next trial
        moved = candidate[interior] - u[interior]
        change = new_gradient - gradient
        curvature = float(moved @ change)
        step = float(moved @ moved) / curvature if curvature > 0.0 else 2.0 * trial

        decrease = current - value
        u, current, magnitude = candidate, value, candidate_magnitude
        gradient = new_gradient
        gradient_norm = float(np.linalg.norm(gradient))
        energy_trace.append(current)
        step_sizes.append(trial)

        stalled = settings.energy_tol > 0.0 and (
            decrease <= settings.energy_tol * max(abs(current), 1e-300)
        )
        if stalled and gradient_norm <= ENERGY_STOP_FACTOR * settings.gradient_tol:
            stall += 1
            if stall >= settings.patience:
                stop_reason = "energy"
                break
        else:
            stall = 0
    else:
        if gradient_norm <= settings.gradient_tol:
            stop_reason = "gradient"

    converged = stop_reason in ("gradient", "energy")
    if not converged:
        logger.warning(
            "solve_dirichlet stopped (%s) after %d steps with gradient norm %.3g",
            stop_reason,
            len(step_sizes),
            gradient_norm,
        )

    weights = space.weights[interior]
    mismatch = apply_nonlocal_p_laplacian(space, u, params)[interior] - rhs[interior]
    if not np.all(np.isfinite(u)):
        raise NumericalError("solver produced non-finite values", "solve_dirichlet")

    return SolveReport(
        solution=u,
        energy=current,
        residual=problem.symmetric_residual(u, interior),
        operator_residual=float(np.sqrt(np.sum(mismatch**2 * weights))),
        gradient_norm=gradient_norm,
        iterations=len(step_sizes),
        converged=converged,
        stop_reason=stop_reason,
        step_sizes=step_sizes,
        energy_trace=energy_trace,
        gradient_error=gradient_error,
        smoothing=epsilon,
    )


def require_converged(report: SolveReport):
    """Raise ConvergenceError unless the solve converged"""
    if not report.converged:
        raise ConvergenceError(
            f"no convergence ({report.stop_reason}) after {report.iterations} steps",
            "solve_dirichlet",
        )


@dataclass(frozen=True)
class PoincareReport:
    """Constructive Poincare bound on one ball

    Attributes:
        lhs: sum over B of |f_i - f_B|^p mu_i
        rhs_raw: sum over i != j in B of |f_i - f_j|^p / (rho^(sp) V(i, rho)) mu_i mu_j
        c0: max over i in B of V(i, 2r) / mu(B)
        bound: c0 (2r)^(sp) rhs_raw
        n_points: points in the ball
    """

    lhs: float
    rhs_raw: float
    c0: float
    bound: float
    n_points: int

    @property
    def ratio(self) -> Optional[float]:
        """lhs / bound, None when the bound vanishes"""
        return None if self.bound == 0.0 else self.lhs / self.bound


def poincare_check(
    space: MetricMeasureSpace,
    f: Any,
    center: int,
    radius: float,
    params: NonlocalOperatorParams,
) -> PoincareReport:
    """Check sum_B |f - f_B|^p mu <= C0 (2r)^(sp) sum_{B x B} |f_i - f_j|^p / (rho^(sp) V) mu mu

    The inequality holds on every finite space, so a failure
    raises PoincareViolation.
    Raises ParameterError when the ball holds fewer than two points.
    """
    f = check_field(space, f, "poincare_check")
    members = np.flatnonzero(space.ball(center, radius))
    if members.shape[0] < 2:
        raise ParameterError("ball holds a single point", "poincare_check")

    s, p = params.s, params.p
    weights = space.weights[members]
    values = f[members]
    mass = float(np.sum(weights))

    average = float(np.sum(values * weights)) / mass
    lhs = float(np.sum(np.abs(values - average) ** p * weights))

    distances = space.distances[np.ix_(members, members)]
    volumes = space.pair_volumes[np.ix_(members, members)]
    off_diagonal = ~np.eye(members.shape[0], dtype=bool)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = (
            np.abs(values[:, None] - values[None, :]) ** p
            / (distances ** (s * p) * volumes)
            * weights[:, None]
            * weights[None, :]
        )
    rhs_raw = float(np.sum(np.where(off_diagonal, terms, 0.0)))

    c0 = float(np.max(space.ball_volumes([2.0 * radius])[members, 0])) / mass
    bound = c0 * (2.0 * radius) ** (s * p) * rhs_raw

    # Rounding allowance for fields that are constant on the ball
    floor = POINCARE_SLACK * float(np.max(np.abs(values))) ** p * mass
    if lhs > bound * (1.0 + POINCARE_SLACK) + floor:
        raise PoincareViolation(
            f"ball ({center}, {radius:g}): {lhs:.6g} > {bound:.6g}", "poincare_check"
        )

    return PoincareReport(lhs, rhs_raw, c0, bound, int(members.shape[0]))


@dataclass(frozen=True)
class EquivalenceRow:
    """One space of an energy equivalence sweep"""

    n_points: int
    nonlocal_energy: float
    local_energy: float
    ratio: Optional[float]


@dataclass
class EquivalenceReport:
    """Ratios [f]^p_{W^{s,p}} / sum L_i^p mu_i across a refinement family

    Attributes:
        rows: one row per space
        spread: max / min ratio, None if any ratio is indeterminate
        stable: spread below 2
    """

    rows: list[EquivalenceRow]
    spread: Optional[float]
    stable: Optional[bool]

    @property
    def indeterminate(self) -> bool:
        """Some ratio is 0 / 0"""
        return any(row.ratio is None for row in self.rows)


def _equivalence_row(
    rule: FieldRule,
    params: NonlocalOperatorParams,
    h: Optional[float],
    space: MetricMeasureSpace,
) -> EquivalenceRow:
    """Energies of one member of the family"""
    f = evaluate_field(space, rule)
    nonlocal_energy = fractional_energy(space, f, params.s, params.p)
    local_energy = lipschitz_energy(space, f, params.p, h)
    ratio = None if local_energy == 0.0 else nonlocal_energy / local_energy
    return EquivalenceRow(space.n_points, nonlocal_energy, local_energy, ratio)


def energy_equivalence_report(
    spaces: Sequence[MetricMeasureSpace],
    rule: FieldRule,
    params: NonlocalOperatorParams,
    h: Optional[float] = None,
    workers: int = 1,
) -> EquivalenceReport:
    """Nonlocal against local energy over a refinement family

    Raises ParameterError for fewer than two spaces.
    """
    if len(spaces) < 2:
        raise ParameterError("a refinement family needs at least two spaces", "equivalence")

    rows = sweep_map(partial(_equivalence_row, rule, params, h), spaces, workers)

    ratios = [row.ratio for row in rows]
    if any(ratio is None for ratio in ratios):
        logger.warning("equivalence: some ratios are indeterminate (0 / 0)")
        return EquivalenceReport(rows, None, None)

    spread = max(ratios) / min(ratios)  # type: ignore
    return EquivalenceReport(rows, spread, spread < 2.0)


@dataclass
class HolderProbe:
    """Empirical Hoelder data of a field on a subdomain

    Attributes:
        alpha: exponent
        seminorm: max over distinct subdomain pairs of |u_i - u_j| / rho^alpha
        oscillation: rows (r, osc on B_r, osc on B_2r, ratio or None)
        empirical_constant: seminorm / (||u||_p + ||rhs||_q), None if that vanishes
    """

    alpha: float
    seminorm: float
    oscillation: list[tuple[float, float, float, Optional[float]]]
    empirical_constant: Optional[float]


def holder_probe(
    space: MetricMeasureSpace,
    u: Any,
    subdomain: Any,
    alpha: float,
    rhs: Any = None,
    p: float = 2.0,
    q: float = 2.0,
) -> HolderProbe:
    """Hoelder seminorm on a subdomain with its dyadic oscillation decay

    Args:
        space: the space
        u: the field (typically a solution of solve_dirichlet)
        subdomain: point ids or a boolean mask
        alpha: exponent in (0, 1]
        rhs: right-hand side entering the empirical constant (default 0)
        p: exponent of ||u||
        q: exponent of ||rhs||

    Raises ParameterError when the subdomain holds fewer than two points.
    """
    u = check_field(space, u, "holder_probe")
    if not 0.0 < alpha <= 1.0:
        raise ParameterError(f"alpha={alpha} must lie in (0, 1]", "holder_probe")

    ids = np.asarray(subdomain)
    if ids.dtype == bool:
        ids = np.flatnonzero(ids)
    ids = np.unique(ids.astype(int))
    if ids.shape[0] < 2:
        raise ParameterError("subdomain holds fewer than two points", "holder_probe")

    distances = space.distances[np.ix_(ids, ids)]
    off_diagonal = ~np.eye(ids.shape[0], dtype=bool)
    with np.errstate(divide="ignore", invalid="ignore"):
        quotients = np.abs(u[ids][:, None] - u[ids][None, :]) / distances**alpha
    seminorm = float(np.max(np.where(off_diagonal, quotients, 0.0)))

    # Dyadic radii around the most central subdomain point
    center = int(ids[np.argmin(np.max(distances, axis=1))])
    radius = float(np.max(space.distances[center, ids]))
    oscillation = []
    while radius / 2.0 > space.min_distance:
        radius /= 2.0
        inner = u[space.ball(center, radius)]
        outer = u[space.ball(center, 2.0 * radius)]
        inner_osc = float(np.max(inner) - np.min(inner))
        outer_osc = float(np.max(outer) - np.min(outer))
        ratio = None if outer_osc == 0.0 else inner_osc / outer_osc
        oscillation.append((radius, inner_osc, outer_osc, ratio))

    weights = space.weights
    size = float(np.sum(np.abs(u) ** p * weights)) ** (1.0 / p)
    if rhs is not None:
        rhs = check_field(space, rhs, "holder_probe")
        size += float(np.sum(np.abs(rhs) ** q * weights)) ** (1.0 / q)

    return HolderProbe(
        alpha=float(alpha),
        seminorm=seminorm,
        oscillation=oscillation,
        empirical_constant=None if size == 0.0 else seminorm / size,
    )


def holder_sweep(
    space: MetricMeasureSpace,
    u: Any,
    subdomain: Any,
    rhs: Any = None,
    alphas: Sequence[float] = HOLDER_EXPONENTS,
    p: float = 2.0,
    q: float = 2.0,
) -> list[HolderProbe]:
    """holder_probe for every exponent in alphas"""
    return [holder_probe(space, u, subdomain, alpha, rhs, p, q) for alpha in alphas]
