"""Finite difference functionals on metric measure spaces

Classes:
    LipschitzField - discrete pointwise Lipschitz constants
    LevelSetProfile - exact level set engine for weak-type functionals
    YoungFunction - Young function with Delta_2 data
    ExponentField - variable exponent with its log-Hoelder certificate
    AnisotropicGradient - per-point A^T grad f on a regular grid

Functions:
    lipschitz_field(space, f, h): L_i = max quotient over the h-neighbourhood
    lipschitz_energy(space, f, p, h): sum of L_i^p mu_i
    bvy_weak_functional(space, f, p): sup of lambda^p times the level set weight
    fractional_energy / fractional_seminorm(space, f, s, p)
    luxemburg_norm(space, g, phi): Orlicz norm by bisection
    orlicz_fd_seminorm(space, f, s, phi)
    varexp_fd_seminorm(space, f, s, pfield)
    varexp_weak_functional(space, f, pfield, pstar)
    anisotropic_weak_functional(space, f, anisotropy, p, n)
    anisotropic_gradient(space, f, anisotropy)

Empirical ratio reports:
    weak_to_lipschitz_ratio, orlicz_weak_ratio, modular_ratio, poincare_qp_ratio

Pairs are ordered: (i, j) and (j, i) both count, with weight mu_i mu_j,
and the ball volume V(i, rho(i, j)) is centred at the first point.
The diagonal i = j never contributes.

Weak-type functionals are computed exactly. The level set weight
W(lam) = weight{R > lam} is a decreasing step function that only jumps
at the distinct ratios r_k, so sup_lam lam^p W(lam) is the largest
r_k^p * weight{R >= r_k} (approached as lam increases to r_k).
"""

from dataclasses import dataclass
import logging
from typing import Any, Callable, Iterator, Optional, Union

import numpy as np

from .errors import FieldError, NumericalError, ParameterError
from .fields import check_field
from .space import BLOCK_ROWS, AnisotropyMatrix, MetricMeasureSpace, pairwise_distances

logger = logging.getLogger(__name__)

# Default Lipschitz neighbourhood as a multiple of the minimal distance
LIPSCHITZ_SCALE_FACTOR = 1.5

# Luxemburg bisection
BISECTION_TOLERANCE = 1e-10
BISECTION_MAX_ITER = 200
BRACKET_MAX_STEPS = 2100

YOUNG_KINDS = ("power", "power_log")


def _check_space(space: MetricMeasureSpace, operation: str):
    """At least two points are needed for any pair functional"""
    if space.n_points < 2:
        raise ParameterError("at least two points are required", operation)


def _check_p(p: float, operation: str):
    """Exponents must satisfy 1 <= p < inf"""
    if not (np.isfinite(p) and p >= 1.0):
        raise ParameterError(f"exponent p={p} must be >= 1", operation)


def check_dimension(n: Any, operation: str) -> int:
    """Dimension exponents are positive integers; ParameterError otherwise"""
    try:
        value = float(n)
    except (TypeError, ValueError):
        value = float("nan")
    if isinstance(n, (bool, np.bool_)) or not value.is_integer() or value < 1.0:
        raise ParameterError(f"dimension n={n} must be a positive integer", operation)
    return int(value)


def _check_s(s: float, operation: str):
    """Smoothness must lie in (0, 1)"""
    if not 0.0 < s < 1.0:
        raise ParameterError(f"smoothness s={s} must lie in (0, 1)", operation)


def row_blocks(n_points: int) -> Iterator[tuple[int, int]]:
    """(start, stop) row ranges used by every pairwise kernel"""
    for start in range(0, n_points, BLOCK_ROWS):
        yield start, min(start + BLOCK_ROWS, n_points)


def _pair_weights(space: MetricMeasureSpace) -> np.ndarray:
    """mu_i mu_j with the diagonal set to zero"""
    weights = space.weights[:, None] * space.weights[None, :]
    return np.where(space.off_diagonal, weights, 0.0)


@dataclass(frozen=True)
class LipschitzField:
    """Discrete pointwise Lipschitz constants

    Attributes:
        values: L_i >= 0 per point
        scale: neighbourhood radius h used
        warning: set when h is below the minimal distance (all L_i = 0)
    """

    values: np.ndarray
    scale: float
    warning: Optional[str] = None

    def energy(self, weights: np.ndarray, p: float) -> float:
        """Sum of L_i^p mu_i"""
        return float(np.sum(self.values**p * weights))


def lipschitz_field(
    space: MetricMeasureSpace, f: Any, h: Optional[float] = None
) -> LipschitzField:
    """L_i = max over j != i with rho(i, j) <= h of |f_i - f_j| / rho(i, j)

    Args:
        space: the space
        f: field values
        h: neighbourhood radius (default 1.5 x the minimal distance)

    L_i = 0 where the neighbourhood is empty.
    Raises FieldError on a length mismatch.
    """
    f = check_field(space, f, "lipschitz_field")
    h = LIPSCHITZ_SCALE_FACTOR * space.min_distance if h is None else float(h)

    warning = None
    if h < space.min_distance:
        warning = f"scale h={h:g} is below the minimal distance {space.min_distance:g}"
        logger.warning("lipschitz_field: %s; every L_i is 0", warning)

    values = np.zeros(space.n_points)
    for start, stop in row_blocks(space.n_points):
        dist = space.distances[start:stop]
        near = (dist <= h) & space.off_diagonal[start:stop]
        with np.errstate(divide="ignore", invalid="ignore"):
            quotients = np.where(
                near, np.abs(f[start:stop, None] - f[None, :]) / dist, 0.0
            )
        values[start:stop] = np.max(quotients, axis=1)

    return LipschitzField(values, h, warning)


def lipschitz_energy(
    space: MetricMeasureSpace, f: Any, p: float, h: Optional[float] = None
) -> float:
    """Sum of L_i^p mu_i"""
    _check_p(p, "lipschitz_energy")
    return lipschitz_field(space, f, h).energy(space.weights, p)


@dataclass(frozen=True)
class LevelSetProfile:
    """Distinct ratios with their tail weights

    Attributes:
        ratios: distinct positive ratios r_1 < ... < r_K
        tail_weights: W_k = weight of pairs with ratio >= r_k (strictly decreasing)
        pair_weight: weight of all off-diagonal pairs, zero ratios included
    """

    ratios: np.ndarray
    tail_weights: np.ndarray
    pair_weight: float

    @classmethod
    def from_pairs(cls, ratios: np.ndarray, weights: np.ndarray) -> "LevelSetProfile":
        """Build from flat arrays of pair ratios and pair weights"""
        pair_weight = float(np.sum(weights))
        positive = ratios > 0.0
        ratios = ratios[positive]
        weights = weights[positive]

        order = np.argsort(ratios, kind="stable")
        ratios = ratios[order]
        suffix = np.cumsum(weights[order][::-1])[::-1]
        distinct, first = np.unique(ratios, return_index=True)

        return cls(distinct, suffix[first], pair_weight)

    @property
    def is_empty(self) -> bool:
        """True when every ratio is zero"""
        return self.ratios.shape[0] == 0

    def supremum(self, exponent: float) -> float:
        """sup over lam > 0 of lam^exponent * weight{R > lam}"""
        if self.is_empty:
            return 0.0
        return float(np.max(self.ratios**exponent * self.tail_weights))

    def maximizer(self, exponent: float) -> Optional[float]:
        """Ratio at which the supremum is approached"""
        if self.is_empty:
            return None
        return float(self.ratios[np.argmax(self.ratios**exponent * self.tail_weights)])

    def tail_weight(self, lam: float) -> float:
        """weight{R > lam}"""
        index = int(np.searchsorted(self.ratios, lam, side="right"))
        return float(self.tail_weights[index]) if index < self.ratios.shape[0] else 0.0

    def shift_bounds(self, eta: float, exponent: float) -> tuple[float, float]:
        """Bounds on the supremum after every ratio moves by at most eta

        Returns (lower, upper).
        """
        if self.is_empty:
            return 0.0, float(eta**exponent * self.pair_weight)
        lower = np.max(np.maximum(self.ratios - eta, 0.0) ** exponent * self.tail_weights)
        upper = np.max((self.ratios + eta) ** exponent * self.tail_weights)
        return float(lower), float(max(upper, eta**exponent * self.pair_weight))


def _weak_profile(
    space: MetricMeasureSpace,
    f: np.ndarray,
    distances: np.ndarray,
    denominator: np.ndarray,
) -> LevelSetProfile:
    """Profile of R_ij = |f_i - f_j| / denominator_ij over ordered pairs i != j"""
    mask = space.off_diagonal
    ratios = np.abs(f[:, None] - f[None, :])[mask] / denominator[mask]
    weights = (space.weights[:, None] * space.weights[None, :])[mask]
    if not np.all(np.isfinite(ratios)):
        raise NumericalError("non-finite difference quotient", "weak_profile")
    return LevelSetProfile.from_pairs(ratios, weights)


def weak_profile(
    space: MetricMeasureSpace, f: Any, exponents: Union[float, np.ndarray]
) -> LevelSetProfile:
    """Profile of R_ij = |f_i - f_j| / (rho(i, j) V(i, rho(i, j))^(1 / p_ij))

    Args:
        space: the space
        f: field values
        exponents: a single p or an N x N table of pair exponents
    """
    f = check_field(space, f, "weak_profile")
    inverse = 1.0 / np.broadcast_to(np.asarray(exponents, dtype=float), space.distances.shape)
    with np.errstate(divide="ignore", invalid="ignore"):
        denominator = space.distances * space.pair_volumes**inverse
    return _weak_profile(space, f, space.distances, denominator)


def bvy_weak_functional(space: MetricMeasureSpace, f: Any, p: float) -> float:
    """sup_lam lam^p * mu x mu{(i, j): |f_i - f_j| > lam rho(i, j) V(i, rho(i, j))^(1/p)}

    Exact: evaluated at the distinct ratios of the pairs.
    Raises ParameterError for p < 1 or fewer than two points.
    """
    _check_p(p, "bvy_weak_functional")
    _check_space(space, "bvy_weak_functional")
    return weak_profile(space, f, p).supremum(p)


def fractional_energy(space: MetricMeasureSpace, f: Any, s: float, p: float) -> float:
    """Sum over i != j of |f_i - f_j|^p / (rho^(sp) V(i, rho)) mu_i mu_j"""
    _check_s(s, "fractional_seminorm")
    _check_p(p, "fractional_seminorm")
    _check_space(space, "fractional_seminorm")
    f = check_field(space, f, "fractional_seminorm")

    volumes = space.pair_volumes
    block_sums = []
    for start, stop in row_blocks(space.n_points):
        mask = space.off_diagonal[start:stop]
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = (
                np.abs(f[start:stop, None] - f[None, :]) ** p
                / (space.distances[start:stop] ** (s * p) * volumes[start:stop])
                * space.weights[start:stop, None]
                * space.weights[None, :]
            )
        block_sums.append(np.sum(np.where(mask, terms, 0.0)))

    return float(np.sum(block_sums))


def fractional_seminorm(space: MetricMeasureSpace, f: Any, s: float, p: float) -> float:
    """[f]_{W^{s,p}} = fractional_energy ** (1 / p)"""
    return fractional_energy(space, f, s, p) ** (1.0 / p)


@dataclass(frozen=True)
class YoungFunction:
    """Young function from the builtin catalog

    Attributes:
        kind: 'power' for t^p, 'power_log' for t^p log(e + t)
        p: growth exponent (>= 1)
    """

    kind: str = "power"
    p: float = 2.0

    def __post_init__(self):
        if self.kind not in YOUNG_KINDS:
            raise ParameterError(f"unknown Young function '{self.kind}'", "young_function")
        _check_p(self.p, "young_function")

    def __call__(self, t: Any) -> Any:
        t = np.asarray(t, dtype=float)
        if self.kind == "power":
            return t**self.p
        return t**self.p * np.log(np.e + t)

    @staticmethod
    def sample_grid() -> np.ndarray:
        """Grid of positive arguments used for the certificates"""
        return np.logspace(-6.0, 6.0, 241)

    def delta2_constant(self) -> float:
        """max over the sample grid of phi(2t) / phi(t)"""
        t = self.sample_grid()
        return float(np.max(self(2.0 * t) / self(t)))

    def check(self):
        """Verify phi(0) = 0, monotonicity and midpoint convexity on the sample grid"""
        t = np.concatenate([[0.0], self.sample_grid()])
        values = self(t)
        if values[0] != 0.0:
            raise ParameterError("Young function must vanish at 0", "young_function")
        if np.any(np.diff(values) < 0.0):
            raise ParameterError("Young function must be nondecreasing", "young_function")
        midpoints = self(0.5 * (t[1:] + t[:-1]))
        if np.any(midpoints > 0.5 * (values[1:] + values[:-1]) * (1.0 + 1e-12)):
            raise ParameterError("Young function must be convex", "young_function")


def _luxemburg(modular: Callable[[float], float], scale: float, operation: str) -> float:
    """inf{lam > 0 : modular(lam) <= 1} for a nonincreasing modular

    Brackets the crossing by doubling / halving from `scale`,
    then bisects to BISECTION_TOLERANCE relative width.
    Returns the upper end of the bracket, where modular <= 1.
    """
    if scale <= 0.0:
        return 0.0

    lower = upper = scale
    if modular(scale) > 1.0:
        for _ in range(BRACKET_MAX_STEPS):
            lower, upper = upper, 2.0 * upper
            if not np.isfinite(upper):
                break
            if modular(upper) <= 1.0:
                break
        else:
            upper = float("inf")
        if not np.isfinite(upper):
            raise NumericalError("modular never drops to 1", operation)
    else:
        for _ in range(BRACKET_MAX_STEPS):
            upper, lower = lower, 0.5 * lower
            if lower == 0.0 or modular(lower) > 1.0:
                break
        if lower == 0.0:
            return 0.0

    for _ in range(BISECTION_MAX_ITER):
        if upper - lower <= BISECTION_TOLERANCE * upper:
            break
        middle = 0.5 * (lower + upper)
        if modular(middle) <= 1.0:
            upper = middle
        else:
            lower = middle

    return upper


def luxemburg_norm(space: MetricMeasureSpace, g: Any, phi: YoungFunction) -> float:
    """inf{lam > 0 : sum_i phi(|g_i| / lam) mu_i <= 1}

    Returns 0 for g = 0. Raises NumericalError if no lam satisfies the bound.
    """
    g = np.abs(check_field(space, g, "luxemburg_norm"))
    weights = space.weights

    def modular(lam: float) -> float:
        return float(np.sum(phi(g / lam) * weights))

    return _luxemburg(modular, float(np.max(g)), "luxemburg_norm")


def _fd_bases(space: MetricMeasureSpace, f: np.ndarray, s: float) -> tuple[np.ndarray, np.ndarray]:
    """Flat |f_i - f_j| / rho(i, j)^s and mu_i mu_j over ordered pairs i != j"""
    mask = space.off_diagonal
    bases = np.abs(f[:, None] - f[None, :])[mask] / space.distances[mask] ** s
    weights = (space.weights[:, None] * space.weights[None, :])[mask]
    return bases, weights


def orlicz_fd_seminorm(
    space: MetricMeasureSpace, f: Any, s: float, phi: YoungFunction
) -> float:
    """inf{lam > 0 : sum_{i != j} phi(|f_i - f_j| / (lam rho^s)) mu_i mu_j <= 1}"""
    _check_s(s, "orlicz_fd_seminorm")
    _check_space(space, "orlicz_fd_seminorm")
    f = check_field(space, f, "orlicz_fd_seminorm")
    bases, weights = _fd_bases(space, f, s)

    def modular(lam: float) -> float:
        return float(np.sum(phi(bases / lam) * weights))

    return _luxemburg(modular, float(np.max(bases)), "orlicz_fd_seminorm")


@dataclass(frozen=True)
class ExponentField:
    """Variable exponent p(.) on a space

    Attributes:
        values: p_i >= 1 per point
        log_holder: max over i != j of |p_i - p_j| log(e + 1 / rho(i, j))
    """

    values: np.ndarray
    log_holder: float

    @classmethod
    def on_space(cls, space: MetricMeasureSpace, values: Any) -> "ExponentField":
        """Validate exponents against a space and compute the log-Hoelder constant"""
        values = check_field(space, values, "exponent_field")
        if np.any(values < 1.0):
            raise ParameterError("exponents must be >= 1", "exponent_field")

        if space.n_points < 2:
            return cls(values, 0.0)
        mask = space.off_diagonal
        spread = np.abs(values[:, None] - values[None, :])[mask]
        log_holder = float(np.max(spread * np.log(np.e + 1.0 / space.distances[mask])))
        return cls(values, log_holder)

    @property
    def p_minus(self) -> float:
        """Smallest exponent"""
        return float(np.min(self.values))

    @property
    def p_plus(self) -> float:
        """Largest exponent"""
        return float(np.max(self.values))

    def pair_exponents(self) -> np.ndarray:
        """N x N table p_ij = (p_i + p_j) / 2"""
        return (self.values[:, None] + self.values[None, :]) / 2.0


def varexp_fd_seminorm(
    space: MetricMeasureSpace, f: Any, s: float, pfield: ExponentField
) -> float:
    """inf{lam > 0 : sum_{i != j} (|f_i - f_j| / (lam rho^s))^p_ij mu_i mu_j <= 1}"""
    _check_s(s, "varexp_fd_seminorm")
    _check_space(space, "varexp_fd_seminorm")
    f = check_field(space, f, "varexp_fd_seminorm")
    if pfield.values.shape[0] != space.n_points:
        raise FieldError("exponent field does not match the space", "varexp_fd_seminorm")

    bases, weights = _fd_bases(space, f, s)
    exponents = pfield.pair_exponents()[space.off_diagonal]

    def modular(lam: float) -> float:
        return float(np.sum((bases / lam) ** exponents * weights))

    return _luxemburg(modular, float(np.max(bases)), "varexp_fd_seminorm")


def varexp_weak_functional(
    space: MetricMeasureSpace,
    f: Any,
    pfield: ExponentField,
    pstar: Optional[float] = None,
) -> float:
    """sup_lam lam^pstar * weight{|f_i - f_j| > lam rho V(i, rho)^(1/p_ij)}

    Args:
        pstar: outer exponent, default p_minus; must lie in [p_minus, p_plus]
    """
    _check_space(space, "varexp_weak_functional")
    if pfield.values.shape[0] != space.n_points:
        raise FieldError("exponent field does not match the space", "varexp_weak_functional")

    pstar = pfield.p_minus if pstar is None else float(pstar)
    if not pfield.p_minus <= pstar <= pfield.p_plus:
        raise ParameterError(
            f"pstar={pstar} must lie in [{pfield.p_minus}, {pfield.p_plus}]",
            "varexp_weak_functional",
        )
    return weak_profile(space, f, pfield.pair_exponents()).supremum(pstar)


def _resolve_anisotropy(
    space: MetricMeasureSpace, anisotropy: Optional[AnisotropyMatrix], operation: str
) -> AnisotropyMatrix:
    """Explicit matrix, else the space's own, else the identity"""
    if space.coords is None:
        raise FieldError("points carry no coordinates", operation)
    if anisotropy is not None:
        return anisotropy
    if space.anisotropy is not None:
        return space.anisotropy
    return AnisotropyMatrix.identity(space.coords.shape[1])


def anisotropic_weak_functional(
    space: MetricMeasureSpace,
    f: Any,
    anisotropy: Optional[AnisotropyMatrix] = None,
    p: float = 2.0,
    n: Optional[int] = None,
) -> float:
    """sup_lam lam^p * weight{|f_i - f_j| / rho_A(i, j)^(1 + n/p) > lam}

    Args:
        space: space with coordinates; weights are cell volumes
        f: field values
        anisotropy: matrix A (default: the space's matrix, else the identity)
        p: exponent
        n: dimension in the exponent (default: coordinate dimension)
    """
    _check_p(p, "anisotropic_weak_functional")
    _check_space(space, "anisotropic_weak_functional")
    anisotropy = _resolve_anisotropy(space, anisotropy, "anisotropic_weak_functional")
    f = check_field(space, f, "anisotropic_weak_functional")
    if n is None:
        n = space.coords.shape[1]  # type: ignore
    n = check_dimension(n, "anisotropic_weak_functional")

    distances = pairwise_distances(space.coords, "anisotropic", anisotropy)  # type: ignore
    with np.errstate(divide="ignore"):
        denominator = distances ** (1.0 + n / p)
    return _weak_profile(space, f, distances, denominator).supremum(p)


@dataclass(frozen=True)
class AnisotropicGradient:
    """Per-point vectors A^T grad f on a grid

    Attributes:
        vectors: N x n array
        weights: cell volumes mu_i
    """

    vectors: np.ndarray
    weights: np.ndarray

    def energy(self, p: float) -> float:
        """Sum of |A^T grad f(i)|^p mu_i (Euclidean length)"""
        return float(np.sum(np.linalg.norm(self.vectors, axis=1) ** p * self.weights))

    def norm(self, p: float) -> float:
        """L^p norm of |A^T grad f|"""
        return self.energy(p) ** (1.0 / p)


def anisotropic_gradient(
    space: MetricMeasureSpace, f: Any, anisotropy: Optional[AnisotropyMatrix] = None
) -> AnisotropicGradient:
    """A^T grad f by finite differences on a regular grid

    Central differences in the interior, one-sided at the boundary.
    Raises FieldError if the space is not a regular grid.
    """
    if space.grid_shape is None or space.spacing is None:
        raise FieldError("anisotropic gradient needs a regular grid", "anisotropic_gradient")
    anisotropy = _resolve_anisotropy(space, anisotropy, "anisotropic_gradient")
    f = check_field(space, f, "anisotropic_gradient")

    grid = f.reshape(space.grid_shape)
    partials = np.gradient(grid, space.spacing)
    if len(space.grid_shape) == 1:
        partials = [partials]
    gradient = np.stack([partial.ravel() for partial in partials], axis=1)

    # Row i holds (A^T g_i)^T = g_i^T A
    return AnisotropicGradient(gradient @ anisotropy.matrix, space.weights)


def weak_to_lipschitz_ratio(
    space: MetricMeasureSpace, f: Any, p: float, h: Optional[float] = None
) -> Optional[float]:
    """E(f) / sum L_i^p mu_i, None when the Lipschitz energy vanishes"""
    weak = bvy_weak_functional(space, f, p)
    energy = lipschitz_energy(space, f, p, h)
    if energy == 0.0:
        return None
    return weak / energy


def orlicz_weak_ratio(
    space: MetricMeasureSpace,
    f: Any,
    p: float,
    phi: YoungFunction,
    h: Optional[float] = None,
) -> Optional[float]:
    """(sup_lam lam mu(E_lam)^(1/p)) / ||Lip f||_{L^phi}, None if the norm vanishes"""
    weak = bvy_weak_functional(space, f, p) ** (1.0 / p)
    norm = luxemburg_norm(space, lipschitz_field(space, f, h).values, phi)
    if norm == 0.0:
        return None
    return weak / norm


def modular_ratio(
    space: MetricMeasureSpace,
    f: Any,
    p: float,
    phi: YoungFunction,
    h: Optional[float] = None,
) -> Optional[float]:
    """sum phi(L_i) mu_i / sum_{i != j} phi(R_ij) mu_i mu_j

    R_ij is the weak-type ratio |f_i - f_j| / (rho V(i, rho)^(1/p)).
    None when the pair modular vanishes.
    """
    _check_p(p, "modular_ratio")
    _check_space(space, "modular_ratio")
    f = check_field(space, f, "modular_ratio")

    local = float(np.sum(phi(lipschitz_field(space, f, h).values) * space.weights))
    mask = space.off_diagonal
    ratios = np.abs(f[:, None] - f[None, :])[mask] / (
        space.distances[mask] * space.pair_volumes[mask] ** (1.0 / p)
    )
    pairs = float(np.sum(phi(ratios) * _pair_weights(space)[mask]))
    if pairs == 0.0:
        return None
    return local / pairs


def poincare_qp_ratio(
    space: MetricMeasureSpace,
    f: Any,
    center: int,
    radius: float,
    q: float = 1.0,
    p: float = 1.0,
    tau: float = 1.0,
    h: Optional[float] = None,
) -> Optional[float]:
    """Empirical (q, p)-Poincare constant on one ball, with l_B = ball average

    [avg_B |f - f_B|^q]^(1/q) / (r [avg_{tau B} L^p]^(1/p)),
    None when the right-hand side vanishes.
    """
    _check_p(q, "poincare_qp_ratio")
    _check_p(p, "poincare_qp_ratio")
    if not radius > 0.0:
        raise ParameterError(f"radius must be positive, got {radius}", "poincare_qp_ratio")
    if tau < 1.0:
        raise ParameterError("dilation tau must be >= 1", "poincare_qp_ratio")
    f = check_field(space, f, "poincare_qp_ratio")

    ball = space.ball(center, radius)
    dilated = space.ball(center, tau * radius)
    weights = space.weights

    mass = float(np.sum(weights[ball]))
    average = float(np.sum(f[ball] * weights[ball])) / mass
    lhs = (float(np.sum(np.abs(f[ball] - average) ** q * weights[ball])) / mass) ** (1.0 / q)

    lip = lipschitz_field(space, f, h).values
    dilated_mass = float(np.sum(weights[dilated]))
    rhs = radius * (
        float(np.sum(lip[dilated] ** p * weights[dilated])) / dilated_mass
    ) ** (1.0 / p)

    if rhs == 0.0:
        return None
    return lhs / rhs
