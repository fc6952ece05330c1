"""Finite metric measure spaces

Classes:
    AnisotropyMatrix - invertible matrix A defining the quasi-norm |A(x - y)|_inf
    MetricMeasureSpace - finite weighted point set with a dense metric
    SpaceConfig - JSON description of a space (generator name and parameters)
    GrowthDiagnostics - doubling and polynomial growth estimates for a space

Functions:
    build_space(config): build and validate a space from a SpaceConfig
    grid_space(...), segment_space(...), cloud_space(...): generator catalog
    pairwise_distances(coords, metric, anisotropy): dense distance matrix
    anisotropic_distance(anisotropy, x, y): distance between two points
    growth_diagnostics(space): doubling constant and growth fit
    ahlfors_constant(space, n): empirical c_n in V(x, r) ~ c_n r^n

Balls are open everywhere: B(i, r) = {j : rho(i, j) < r}.
So V(i, r) = sum of weights over that set, which is left-continuous in r
and only changes value at the pairwise distances of the space.

A space never changes after construction: its arrays are read-only
and derived tables (pair ball volumes) are cached on first use.
"""

from dataclasses import dataclass
from functools import cached_property
import logging
from typing import Any, Literal, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.stats import linregress  # type: ignore

from .errors import ParameterError, SpaceError

logger = logging.getLogger(__name__)

# Triangle inequality is checked on every triple up to this size
TRIANGLE_EXHAUSTIVE_LIMIT = 200

# Sample sizes (rows, middle points) above the exhaustive limit
TRIANGLE_SAMPLE_ROWS = 200
TRIANGLE_SAMPLE_MIDDLES = 50

# Smallest singular value relative to the largest for an invertible matrix
SINGULAR_TOLERANCE = 1e-12

# Rows processed together in pairwise kernels
BLOCK_ROWS = 256

# Relative gap below which two distances count as the same radius
RADIUS_MERGE_TOLERANCE = 1e-9

Metric = Literal["euclidean", "sup", "anisotropic"]
WeightRule = Literal["unit", "cell", "normalized"]


@dataclass(frozen=True, eq=False)
class AnisotropyMatrix:
    """Invertible n x n matrix A with its condition number

    Attributes:
        matrix: read-only n x n array
        condition: ratio of largest to smallest singular value
    """

    matrix: np.ndarray
    condition: float

    @classmethod
    def from_array(cls, values: Any) -> "AnisotropyMatrix":
        """Validate a square matrix and wrap it

        Raises SpaceError if the matrix is not square, not finite,
        or singular to within SINGULAR_TOLERANCE of its largest singular value.
        """
        matrix = np.array(values, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise SpaceError("anisotropy matrix must be square", "anisotropy")
        if not np.all(np.isfinite(matrix)):
            raise SpaceError("anisotropy matrix has non-finite entries", "anisotropy")

        singular = np.linalg.svd(matrix, compute_uv=False)
        if singular[0] == 0.0 or singular[-1] <= SINGULAR_TOLERANCE * singular[0]:
            raise SpaceError("anisotropy matrix is singular", "anisotropy")

        matrix.setflags(write=False)
        return cls(matrix, float(singular[0] / singular[-1]))

    @classmethod
    def identity(cls, dimension: int) -> "AnisotropyMatrix":
        """Identity matrix of the given dimension"""
        return cls.from_array(np.eye(dimension))

    @classmethod
    def diagonal(cls, values: Sequence[float]) -> "AnisotropyMatrix":
        """Diagonal matrix with the given entries"""
        return cls.from_array(np.diag(np.asarray(values, dtype=float)))

    @property
    def dimension(self) -> int:
        """Dimension n of the underlying space"""
        return self.matrix.shape[0]


def anisotropic_distance(
    anisotropy: AnisotropyMatrix, x: Sequence[float], y: Sequence[float]
) -> float:
    """Anisotropic distance max_k |(A(x - y))_k| between two points

    Args:
        anisotropy: the matrix A
        x, y: coordinates in R^n

    Raises SpaceError on a dimension mismatch.
    """
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    y_arr = np.atleast_1d(np.asarray(y, dtype=float))
    if x_arr.shape != y_arr.shape or x_arr.shape != (anisotropy.dimension,):
        raise SpaceError(
            f"points must have dimension {anisotropy.dimension}", "anisotropic_distance"
        )
    return float(np.max(np.abs(anisotropy.matrix @ (x_arr - y_arr))))


def pairwise_distances(
    coords: np.ndarray,
    metric: str = "euclidean",
    anisotropy: Optional[AnisotropyMatrix] = None,
) -> np.ndarray:
    """Dense N x N distance matrix for points given by coordinates

    Args:
        coords: N x n array (a 1-D array is read as N points on a line)
        metric: 'euclidean', 'sup' or 'anisotropic'
        anisotropy: required for the anisotropic metric

    Returns the distance matrix (exactly symmetric, zero diagonal).
    """
    coords = np.asarray(coords, dtype=float)
    if coords.ndim == 1:
        coords = coords[:, None]

    if metric == "anisotropic":
        if anisotropy is None:
            raise SpaceError("anisotropic metric needs a matrix", "pairwise_distances")
        if anisotropy.dimension != coords.shape[1]:
            raise SpaceError(
                "anisotropy matrix and coordinates differ in dimension",
                "pairwise_distances",
            )
    elif metric not in ("euclidean", "sup"):
        raise SpaceError(f"unknown metric '{metric}'", "pairwise_distances")

    n_points = coords.shape[0]
    distances = np.empty((n_points, n_points))

    # Row blocks keep the N x N x n difference tensor small
    for start in range(0, n_points, BLOCK_ROWS):
        stop = min(start + BLOCK_ROWS, n_points)
        diff = coords[start:stop, None, :] - coords[None, :, :]

        if metric == "euclidean":
            distances[start:stop] = np.sqrt(np.sum(diff**2, axis=-1))
        elif metric == "sup":
            distances[start:stop] = np.max(np.abs(diff), axis=-1)
        else:
            distances[start:stop] = np.max(
                np.abs(diff @ anisotropy.matrix.T), axis=-1  # type: ignore
            )

    return distances


@dataclass(frozen=True, eq=False)
class MetricMeasureSpace:
    """Finite metric measure space (X, rho, mu)

    Attributes:
        distances: N x N metric matrix rho (read-only)
        weights: measure mu_i > 0 of each point (read-only)
        coords: optional N x n coordinates the metric was computed from
        metric: 'euclidean', 'sup', 'anisotropic' or 'matrix'
        anisotropy: the matrix A for the anisotropic metric
        grid_shape: points per axis when the space is a regular grid
        spacing: grid spacing when the space is a regular grid
        generator: name of the generator that produced the space

    The constructor validates the metric axioms and the weights,
    raising SpaceError on any violation.
    """

    distances: np.ndarray
    weights: np.ndarray
    coords: Optional[np.ndarray] = None
    metric: str = "matrix"
    anisotropy: Optional[AnisotropyMatrix] = None
    grid_shape: Optional[tuple[int, ...]] = None
    spacing: Optional[float] = None
    generator: str = "custom"

    def __post_init__(self):
        distances = np.array(self.distances, dtype=float)
        weights = np.array(self.weights, dtype=float).ravel()
        _validate_weights(weights, distances)
        distances = _validate_metric(distances, check_triangle=self.metric == "matrix")

        distances.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "distances", distances)
        object.__setattr__(self, "weights", weights)

        if self.coords is not None:
            coords = np.array(self.coords, dtype=float)
            if coords.ndim == 1:
                coords = coords[:, None]
            if coords.shape[0] != weights.shape[0]:
                raise SpaceError("one coordinate row per point is required", "space")
            coords.setflags(write=False)
            object.__setattr__(self, "coords", coords)

    @classmethod
    def from_coordinates(
        cls,
        coords: Any,
        weights: Any,
        metric: str = "euclidean",
        anisotropy: Optional[AnisotropyMatrix] = None,
        **kwargs,
    ) -> "MetricMeasureSpace":
        """Build a space whose metric is a closed-form rule on coordinates"""
        coords = np.asarray(coords, dtype=float)
        distances = pairwise_distances(coords, metric, anisotropy)
        return cls(
            distances,
            weights,
            coords=coords,
            metric=metric,
            anisotropy=anisotropy,
            **kwargs,
        )

    @classmethod
    def from_matrix(
        cls, distances: Any, weights: Any, coords: Any = None
    ) -> "MetricMeasureSpace":
        """Build a space from a dense distance matrix"""
        return cls(distances, weights, coords=coords, metric="matrix")

    @property
    def n_points(self) -> int:
        """Number of points N"""
        return self.weights.shape[0]

    @property
    def dimension(self) -> Optional[int]:
        """Dimension of the coordinates, None for a bare matrix"""
        return None if self.coords is None else self.coords.shape[1]

    @property
    def total_mass(self) -> float:
        """mu(X)"""
        return float(np.sum(self.weights))

    @cached_property
    def off_diagonal(self) -> np.ndarray:
        """Boolean mask selecting pairs i != j"""
        mask = ~np.eye(self.n_points, dtype=bool)
        mask.setflags(write=False)
        return mask

    @cached_property
    def min_distance(self) -> float:
        """Smallest positive pairwise distance"""
        if self.n_points < 2:
            return float("inf")
        return float(np.min(self.distances[self.off_diagonal]))

    @cached_property
    def diameter(self) -> float:
        """Largest pairwise distance"""
        return float(np.max(self.distances))

    def check_point(self, center: Any, operation: str) -> int:
        """Point id in range(n_points), else ParameterError"""
        if isinstance(center, (bool, np.bool_)) or not isinstance(center, (int, np.integer)):
            raise ParameterError(f"point id must be an integer, got {center!r}", operation)
        if not 0 <= center < self.n_points:
            raise ParameterError(
                f"point {center} out of range for {self.n_points} points", operation
            )
        return int(center)

    def ball(self, center: int, radius: float) -> np.ndarray:
        """Boolean mask of the open ball B(center, radius)"""
        center = self.check_point(center, "ball")
        return self.distances[center] < radius

    def ball_volume(self, center: int, radius: Any) -> Any:
        """V(center, r) = mu(B(center, r)) for a radius or an array of radii"""
        center = self.check_point(center, "ball_volume")
        sorted_row, cumulative = self._sorted_row(center)
        index = np.searchsorted(sorted_row, radius, side="left")
        volume = cumulative[index]
        return float(volume) if np.ndim(volume) == 0 else volume

    def ball_volumes(self, radii: Any) -> np.ndarray:
        """N x R table of V(i, r_k) for every point i and radius r_k"""
        radii = np.asarray(radii, dtype=float)
        table = np.empty((self.n_points, radii.shape[0]))
        for center in range(self.n_points):
            sorted_row, cumulative = self._sorted_row(center)
            table[center] = cumulative[np.searchsorted(sorted_row, radii, side="left")]
        return table

    @cached_property
    def pair_volumes(self) -> np.ndarray:
        """N x N table V[i, j] = V(i, rho(i, j)) (the diagonal is zero)

        Computed with the same stable sort and cumulative sums as
        ball_volume(), so both always agree exactly.
        """
        n_points = self.n_points
        volumes = np.empty((n_points, n_points))
        columns = np.arange(n_points)[None, :]

        for start in range(0, n_points, BLOCK_ROWS):
            stop = min(start + BLOCK_ROWS, n_points)
            rows = self.distances[start:stop]

            order = np.argsort(rows, axis=1, kind="stable")
            sorted_rows = np.take_along_axis(rows, order, axis=1)
            cumulative = np.zeros((stop - start, n_points + 1))
            cumulative[:, 1:] = np.cumsum(self.weights[order], axis=1)

            # Open ball: volume counts points strictly closer, so every
            # run of tied distances looks up the start of its run
            new_run = np.ones(sorted_rows.shape, dtype=bool)
            new_run[:, 1:] = sorted_rows[:, 1:] != sorted_rows[:, :-1]
            positions = np.where(new_run, columns, 0)
            np.maximum.accumulate(positions, axis=1, out=positions)

            block = np.empty_like(rows)
            np.put_along_axis(
                block, order, np.take_along_axis(cumulative, positions, axis=1), axis=1
            )
            volumes[start:stop] = block

        volumes.setflags(write=False)
        return volumes

    def to_dict(self) -> dict[str, Any]:
        """Export as a custom SpaceConfig document (row-major distance matrix)"""
        return {
            "generator": "custom",
            "distances": self.distances.ravel().tolist(),
            "weights": self.weights.tolist(),
            "coords": None if self.coords is None else self.coords.tolist(),
        }

    def _sorted_row(self, center: int) -> tuple[np.ndarray, np.ndarray]:
        """Sorted distances from center and cumulative weights in that order"""
        row = self.distances[center]
        order = np.argsort(row, kind="stable")
        cumulative = np.zeros(self.n_points + 1)
        cumulative[1:] = np.cumsum(self.weights[order])
        return row[order], cumulative


def _validate_weights(weights: np.ndarray, distances: np.ndarray):
    """Raise SpaceError unless weights are finite, positive and sized to the metric"""
    if distances.ndim != 2 or distances.shape[0] != distances.shape[1]:
        raise SpaceError("metric matrix must be square", "space")
    if weights.shape[0] != distances.shape[0]:
        raise SpaceError("one weight per point is required", "space")
    if weights.shape[0] == 0:
        raise SpaceError("space has no points", "space")
    if not np.all(np.isfinite(weights)):
        raise SpaceError("weights must be finite", "space")
    if np.any(weights <= 0.0):
        raise SpaceError("nonpositive weight", "space")


def _validate_metric(distances: np.ndarray, check_triangle: bool) -> np.ndarray:
    """Check the metric axioms and return an exactly symmetric copy

    Raises SpaceError for non-finite or negative entries, a nonzero diagonal,
    asymmetry beyond round-off, coincident points or (for matrices given
    directly) a triangle inequality violation.
    """
    if not np.all(np.isfinite(distances)):
        raise SpaceError("metric matrix has non-finite entries", "space")
    if np.any(np.diag(distances) != 0.0):
        raise SpaceError("metric matrix must have a zero diagonal", "space")

    scale = float(np.max(np.abs(distances))) if distances.size else 0.0
    tolerance = 1e-12 * max(scale, 1.0)
    if not np.allclose(distances, distances.T, rtol=0.0, atol=tolerance):
        raise SpaceError("non-symmetric metric matrix", "space")
    distances = 0.5 * (distances + distances.T)

    off_diagonal = ~np.eye(distances.shape[0], dtype=bool)
    if np.any(distances[off_diagonal] <= 0.0):
        raise SpaceError("distinct points must have positive distance", "space")

    if check_triangle:
        _check_triangle(distances, tolerance)

    return distances


def _check_triangle(distances: np.ndarray, tolerance: float):
    """rho(i, k) <= rho(i, j) + rho(j, k), exhaustive for small spaces"""
    n_points = distances.shape[0]

    if n_points <= TRIANGLE_EXHAUSTIVE_LIMIT:
        rows = np.arange(n_points)
        middles = rows
    else:
        rng = np.random.default_rng(0)
        rows = rng.choice(n_points, TRIANGLE_SAMPLE_ROWS, replace=False)
        middles = rng.choice(n_points, TRIANGLE_SAMPLE_MIDDLES, replace=False)

    sub = distances[rows]
    for middle in middles:
        if np.any(sub > sub[:, middle, None] + distances[middle][None, :] + tolerance):
            raise SpaceError("triangle inequality violation", "space")


class SpaceConfig(BaseModel):
    """JSON description of a space

    generator:
        grid     - regular grid with n_points per axis on [0, 1)^dimension
        segment  - 1-D grid embedded along a line in the plane
        cloud    - uniform random points in [-1, 1]^dimension
                   with Gaussian density weights
        custom   - explicit distances (row-major, flat or nested) and weights,
                   or explicit coordinates with a closed-form metric
    """

    model_config = ConfigDict(extra="forbid")

    generator: Literal["grid", "segment", "cloud", "custom"] = "grid"
    dimension: int = Field(1, ge=1)
    n_points: int = Field(16, ge=1)
    spacing: Optional[float] = Field(None, gt=0)
    weight: WeightRule = "cell"
    metric: Metric = "euclidean"
    anisotropy: Optional[list[list[float]]] = None
    angle: float = 0.5
    sigma: float = Field(0.5, gt=0)
    seed: int = 0
    distances: Optional[Union[list[list[float]], list[float]]] = None
    weights: Optional[list[float]] = None
    coords: Optional[list[list[float]]] = None


def build_space(config: Union[SpaceConfig, dict[str, Any]]) -> MetricMeasureSpace:
    """Build a validated space from its configuration

    Args:
        config: SpaceConfig or a dict with the same fields

    Raises SpaceError for invalid metrics, weights or anisotropy matrices.
    """
    if isinstance(config, dict):
        config = SpaceConfig(**config)

    anisotropy = (
        None if config.anisotropy is None else AnisotropyMatrix.from_array(config.anisotropy)
    )
    if config.metric == "anisotropic" and anisotropy is None:
        raise SpaceError("anisotropic metric needs an 'anisotropy' matrix", "build_space")

    if config.generator == "grid":
        return grid_space(
            config.n_points,
            dimension=config.dimension,
            spacing=config.spacing,
            weight=config.weight,
            metric=config.metric,
            anisotropy=anisotropy,
        )

    if config.generator == "segment":
        return segment_space(
            config.n_points, angle=config.angle, spacing=config.spacing, weight=config.weight
        )

    if config.generator == "cloud":
        return cloud_space(
            config.n_points,
            dimension=config.dimension,
            sigma=config.sigma,
            seed=config.seed,
            metric=config.metric,
            anisotropy=anisotropy,
        )

    # Custom space
    if config.weights is None:
        raise SpaceError("custom space needs 'weights'", "build_space")

    if config.distances is not None:
        distances = np.asarray(config.distances, dtype=float)
        n_points = len(config.weights)
        if distances.ndim == 1:
            if distances.shape[0] != n_points * n_points:
                raise SpaceError("row-major distances must have N*N entries", "build_space")
            distances = distances.reshape(n_points, n_points)
        return MetricMeasureSpace.from_matrix(distances, config.weights, config.coords)

    if config.coords is None:
        raise SpaceError("custom space needs 'distances' or 'coords'", "build_space")

    return MetricMeasureSpace.from_coordinates(
        config.coords, config.weights, metric=config.metric, anisotropy=anisotropy
    )


def grid_space(
    n_points: int,
    dimension: int = 1,
    spacing: Optional[float] = None,
    weight: str = "cell",
    metric: str = "euclidean",
    anisotropy: Optional[AnisotropyMatrix] = None,
) -> MetricMeasureSpace:
    """Regular grid with n_points per axis

    Args:
        n_points: points per axis
        dimension: number of axes
        spacing: distance between neighbours (default 1 / n_points,
                 so the grid with 'cell' weights has unit total mass)
        weight: 'unit' (1), 'cell' (spacing ** dimension)
                or 'normalized' (1 / total number of points)
        metric: 'euclidean', 'sup' or 'anisotropic'
        anisotropy: matrix for the anisotropic metric

    Coordinates are index * spacing, flattened in C order so that
    coordinate k varies along axis k of grid_shape.
    """
    spacing = 1.0 / n_points if spacing is None else float(spacing)
    axes = [np.arange(n_points) * spacing] * dimension
    mesh = np.meshgrid(*axes, indexing="ij")
    coords = np.stack([axis.ravel() for axis in mesh], axis=1)

    return MetricMeasureSpace.from_coordinates(
        coords,
        _weights(weight, coords.shape[0], spacing**dimension),
        metric=metric,
        anisotropy=anisotropy,
        grid_shape=(n_points,) * dimension,
        spacing=spacing,
        generator="grid",
    )


def segment_space(
    n_points: int,
    angle: float = 0.5,
    spacing: Optional[float] = None,
    weight: str = "cell",
) -> MetricMeasureSpace:
    """1-D grid embedded in the plane along direction (cos angle, sin angle)

    Ball volumes grow linearly although the ambient dimension is 2.
    """
    spacing = 1.0 / n_points if spacing is None else float(spacing)
    positions = np.arange(n_points) * spacing
    coords = np.stack([positions * np.cos(angle), positions * np.sin(angle)], axis=1)

    return MetricMeasureSpace.from_coordinates(
        coords,
        _weights(weight, n_points, spacing),
        metric="euclidean",
        generator="segment",
    )


def cloud_space(
    n_points: int,
    dimension: int = 2,
    sigma: float = 0.5,
    seed: int = 0,
    metric: str = "euclidean",
    anisotropy: Optional[AnisotropyMatrix] = None,
) -> MetricMeasureSpace:
    """Uniform random points in [-1, 1]^dimension with Gaussian density weights

    Weights exp(-|x|^2 / (2 sigma^2)) / N decay rapidly away from the origin,
    which drives the doubling estimate up.
    """
    rng = np.random.default_rng(seed)
    coords = rng.uniform(-1.0, 1.0, size=(n_points, dimension))
    weights = np.exp(-np.sum(coords**2, axis=1) / (2.0 * sigma**2)) / n_points

    return MetricMeasureSpace.from_coordinates(
        coords, weights, metric=metric, anisotropy=anisotropy, generator="cloud"
    )


def _weights(rule: str, count: int, cell: float) -> np.ndarray:
    """Per-point weights for a weight rule"""
    if rule == "unit":
        return np.ones(count)
    if rule == "cell":
        return np.full(count, cell)
    if rule == "normalized":
        return np.full(count, 1.0 / count)
    raise SpaceError(f"unknown weight rule '{rule}'", "build_space")


@dataclass(frozen=True)
class GrowthDiagnostics:
    """Doubling and polynomial growth estimates

    Attributes:
        doubling_constant: max over (i, r) of V(i, 2r) / V(i, r)
        dimension: fitted exponent d (None if the fit is degenerate)
        growth_constant: fitted constant C_P (None if degenerate)
        growth_sup: max over the fit sample of V(i, r) / r^d
        bound_holds: whether growth_sup <= growth_constant on the sample
        residual: root mean square of the log-log fit residuals
        fit_degenerate: True when fewer than two scales are available
        n_radii: number of distinct radii used in the fit
        n_pairs: number of (point, radius) pairs in the fit
        envelope_dimension: exponent of the volume envelope max_i V(i, r)
            at midpoint radii (None if degenerate)
        envelope_constant: constant of the envelope fit (None if degenerate)
    """

    doubling_constant: float
    dimension: Optional[float]
    growth_constant: Optional[float]
    growth_sup: Optional[float]
    bound_holds: Optional[bool]
    residual: Optional[float]
    fit_degenerate: bool
    n_radii: int
    n_pairs: int = 0
    envelope_dimension: Optional[float] = None
    envelope_constant: Optional[float] = None


def distinct_radii(space: MetricMeasureSpace) -> np.ndarray:
    """Sorted distinct pairwise distances (near-ties merged)"""
    values = np.unique(space.distances[space.off_diagonal])
    if values.shape[0] < 2:
        return values
    keep = np.ones(values.shape[0], dtype=bool)
    keep[1:] = np.diff(values) > RADIUS_MERGE_TOLERANCE * values[1:]
    return values[keep]


def midpoint_radii(space: MetricMeasureSpace) -> np.ndarray:
    """Half the smallest distance plus midpoints between consecutive distances"""
    distances = distinct_radii(space)
    return np.concatenate([distances[:1] / 2.0, (distances[1:] + distances[:-1]) / 2.0])


def _envelope_fit(space: MetricMeasureSpace) -> tuple[Optional[float], Optional[float]]:
    """log-log fit of max_i V(i, r) at midpoint radii r <= diameter / 2"""
    radii = midpoint_radii(space)
    radii = radii[radii <= space.diameter / 2.0]
    if radii.shape[0] < 2:
        return None, None
    envelope = np.max(space.ball_volumes(radii), axis=0)
    fit = linregress(np.log(radii), np.log(envelope))
    return float(fit.slope), float(np.exp(fit.intercept))


def growth_diagnostics(space: MetricMeasureSpace) -> GrowthDiagnostics:
    """Doubling constant and polynomial growth fit of a space

    The doubling estimate scans every point against every distinct distance
    and midpoint radius. The growth fit is a least squares regression of
    log V(i, r) on log r over every point i and every distinct distance
    r <= diameter / 2; the fit residual is always reported. The fit of the
    volume envelope max_i V(i, r) is reported alongside.

    Raises SpaceError for spaces with fewer than two points.
    """
    if space.n_points < 2:
        raise SpaceError("growth diagnostics need at least two points", "growth_diagnostics")

    distances = distinct_radii(space)
    radii = np.union1d(distances, midpoint_radii(space))
    doubling = float(np.max(space.ball_volumes(2.0 * radii) / space.ball_volumes(radii)))

    fit_radii = distances[distances <= space.diameter / 2.0]
    if fit_radii.shape[0] < 2:
        logger.warning("growth fit is degenerate: %d scale(s) available", fit_radii.shape[0])
        return GrowthDiagnostics(
            doubling_constant=doubling,
            dimension=None,
            growth_constant=None,
            growth_sup=None,
            bound_holds=None,
            residual=None,
            fit_degenerate=True,
            n_radii=int(fit_radii.shape[0]),
        )

    # Every (point, radius) pair enters the regression
    volumes = space.ball_volumes(fit_radii)
    log_r = np.broadcast_to(np.log(fit_radii), volumes.shape).ravel()
    log_v = np.log(volumes).ravel()
    fit = linregress(log_r, log_v)

    dimension = float(fit.slope)
    growth_constant = float(np.exp(fit.intercept))
    growth_sup = float(np.max(volumes / fit_radii**dimension))
    residual = float(np.sqrt(np.mean((log_v - (fit.intercept + fit.slope * log_r)) ** 2)))
    envelope_dimension, envelope_constant = _envelope_fit(space)

    return GrowthDiagnostics(
        doubling_constant=doubling,
        dimension=dimension,
        growth_constant=growth_constant,
        growth_sup=growth_sup,
        bound_holds=bool(growth_sup <= growth_constant * (1.0 + 1e-9)),
        residual=residual,
        fit_degenerate=False,
        n_radii=int(fit_radii.shape[0]),
        n_pairs=int(log_v.shape[0]),
        envelope_dimension=envelope_dimension,
        envelope_constant=envelope_constant,
    )


def ahlfors_constant(space: MetricMeasureSpace, dimension: int, samples: int = 64) -> float:
    """Empirical c_n with max_i V(i, r) ~ c_n r^n

    Evaluated at up to `samples` midpoint radii no larger than a quarter
    of the diameter and reduced by the median.
    """
    radii = midpoint_radii(space)
    radii = radii[radii <= space.diameter / 4.0]
    if radii.shape[0] == 0:
        raise SpaceError("space too small to measure c_n", "ahlfors_constant")
    if radii.shape[0] > samples:
        radii = radii[np.linspace(0, radii.shape[0] - 1, samples).round().astype(int)]

    envelope = np.max(space.ball_volumes(radii), axis=0)
    return float(np.median(envelope / radii**dimension))
