"""Greedy Vitali-type ball selection

Classes:
    BallCollection - finite collection of balls (center id, radius)
    CoveringResult - selected disjoint balls with containment certificates

Functions:
    greedy_select(space, balls): largest-first disjoint selection
    random_collection(space, n_balls, radius_bound, rng): seeded test collection

Balls are compared as point sets of the finite space: two balls
intersect when they share a point, and a ball is contained in a
dilation when every one of its points is.
"""

from dataclasses import dataclass, field
import logging
from typing import Any, Optional

import numpy as np

from .errors import ParameterError
from .space import AnisotropyMatrix, MetricMeasureSpace, pairwise_distances

logger = logging.getLogger(__name__)

# Dilation grid scanned for the minimal certifying factor
DILATION_GRID = np.round(np.arange(2.0, 6.0 + 1e-9, 0.1), 1)

# Factors always checked
CERTIFIED_DILATIONS = (3.0, 5.0)


@dataclass(frozen=True)
class BallCollection:
    """Collection of balls B(center, radius)

    Attributes:
        centers: point ids of the centers
        radii: radii (> 0 and <= radius_bound)
        radius_bound: declared bound R (default: the largest radius)
        anisotropy: when set, balls are taken in the metric ||A(x - y)||_inf
    """

    centers: np.ndarray
    radii: np.ndarray
    radius_bound: Optional[float] = None
    anisotropy: Optional[AnisotropyMatrix] = None

    def __post_init__(self):
        centers = np.asarray(self.centers, dtype=int).ravel()
        radii = np.asarray(self.radii, dtype=float).ravel()
        if centers.shape != radii.shape:
            raise ParameterError("one radius per center is required", "ball_collection")
        if np.any(~np.isfinite(radii)) or np.any(radii <= 0.0):
            raise ParameterError("radii must be positive", "ball_collection")

        bound = self.radius_bound
        if bound is None and radii.shape[0] > 0:
            bound = float(np.max(radii))
        if bound is not None and np.any(radii > bound):
            raise ParameterError(f"radii exceed the declared bound {bound}", "ball_collection")

        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "radius_bound", bound)

    @classmethod
    def from_pairs(
        cls,
        balls: list[tuple[int, float]],
        radius_bound: Optional[float] = None,
        anisotropy: Optional[AnisotropyMatrix] = None,
    ) -> "BallCollection":
        """Build from (center, radius) pairs"""
        centers = [center for center, _ in balls]
        radii = [radius for _, radius in balls]
        return cls(np.array(centers, dtype=int), np.array(radii, dtype=float), radius_bound, anisotropy)

    def __len__(self) -> int:
        return self.centers.shape[0]

    @property
    def metric_tag(self) -> str:
        """'isotropic' or 'anisotropic'"""
        return "isotropic" if self.anisotropy is None else "anisotropic"


@dataclass
class CoveringResult:
    """Outcome of the greedy selection

    Attributes:
        selected: indices into the collection, in selection order
        dilation: dilation factor of the certificate (3)
        contained: every ball lies in some 3-dilated selected ball
        contained_at_5: the same check with factor 5
        minimal_dilation: smallest factor on DILATION_GRID that certifies
            containment, None if no grid value does
        certificate: per input ball, the selected ball whose 3-dilation contains it (-1 if none)
        removed_by: per input ball, the selected ball that removed it
        disjoint: no point lies in two selected balls
        maximal: every removed ball meets a selected ball of at least its radius
    """

    selected: list[int]
    dilation: float
    contained: bool
    contained_at_5: bool
    minimal_dilation: Optional[float]
    certificate: list[int]
    removed_by: list[int]
    disjoint: bool
    maximal: bool
    metric: str = "isotropic"
    extras: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        """JSON-ready summary including the full certificate"""
        return {
            "selected": self.selected,
            "dilation": self.dilation,
            "contained": self.contained,
            "contained_at_5": self.contained_at_5,
            "minimal_dilation": self.minimal_dilation,
            "certificate": self.certificate,
            "removed_by": self.removed_by,
            "disjoint": self.disjoint,
            "maximal": self.maximal,
            "metric": self.metric,
        }


def _ball_distances(space: MetricMeasureSpace, balls: BallCollection) -> np.ndarray:
    """Rows of the metric seen from each ball center"""
    if balls.anisotropy is None:
        return space.distances[balls.centers]
    if space.coords is None:
        raise ParameterError("anisotropic balls need point coordinates", "greedy_select")
    distances = pairwise_distances(space.coords, "anisotropic", balls.anisotropy)
    return distances[balls.centers]


def _containers(members: np.ndarray, dilated: np.ndarray) -> np.ndarray:
    """contains[b, k] is True when ball b lies inside dilated ball k"""
    outside = (~dilated).astype(np.int64)
    return members.astype(np.int64) @ outside.T == 0


def greedy_select(space: MetricMeasureSpace, balls: BallCollection) -> CoveringResult:
    """Largest-first disjoint selection with containment certificates

    Repeatedly picks the remaining ball of largest radius (ties go to the
    lowest center id) and discards every remaining ball that meets it.

    Args:
        space: the space
        balls: the collection

    Returns:
        CoveringResult with certificates at factors 3 and 5
        and the minimal certifying factor on DILATION_GRID.

    Raises ParameterError for an empty collection or a center outside the space.
    """
    if len(balls) == 0:
        raise ParameterError("empty ball collection", "greedy_select")
    if np.any(balls.centers < 0) or np.any(balls.centers >= space.n_points):
        raise ParameterError("ball center outside the space", "greedy_select")

    rows = _ball_distances(space, balls)
    members = rows < balls.radii[:, None]

    # Largest radius first, then lowest center id
    order = np.lexsort((balls.centers, -balls.radii))

    remaining = np.ones(len(balls), dtype=bool)
    removed_by = np.full(len(balls), -1)
    selected: list[int] = []
    for index in order:
        if not remaining[index]:
            continue
        selected.append(int(index))
        hits = remaining & np.any(members & members[index], axis=1)
        removed_by[hits] = index
        remaining &= ~hits

    chosen = np.array(selected)
    disjoint = bool(np.all(np.sum(members[chosen], axis=0) <= 1))
    maximal = bool(np.all(balls.radii <= balls.radii[removed_by]))

    def certify(factor: float) -> np.ndarray:
        dilated = rows[chosen] < factor * balls.radii[chosen][:, None]
        return _containers(members, dilated)

    # Certificate at factor 3
    contains = certify(CERTIFIED_DILATIONS[0])
    covered = np.any(contains, axis=1)
    certificate = np.where(covered, chosen[np.argmax(contains, axis=1)], -1)

    minimal_dilation = None
    for factor in DILATION_GRID:
        if np.all(np.any(certify(float(factor)), axis=1)):
            minimal_dilation = float(factor)
            break

    result = CoveringResult(
        selected=selected,
        dilation=CERTIFIED_DILATIONS[0],
        contained=bool(np.all(covered)),
        contained_at_5=bool(np.all(np.any(certify(CERTIFIED_DILATIONS[1]), axis=1))),
        minimal_dilation=minimal_dilation,
        certificate=[int(value) for value in certificate],
        removed_by=[int(value) for value in removed_by],
        disjoint=disjoint,
        maximal=maximal,
        metric=balls.metric_tag,
    )

    logger.info(
        "greedy_select: %d of %d balls selected, minimal dilation %s",
        len(selected),
        len(balls),
        minimal_dilation,
    )
    return result


def random_collection(
    space: MetricMeasureSpace,
    n_balls: int,
    radius_bound: float,
    rng: np.random.Generator,
    anisotropy: Optional[AnisotropyMatrix] = None,
) -> BallCollection:
    """Balls with seeded random centers and radii uniform on (0.1 R, R]"""
    centers = rng.integers(0, space.n_points, size=n_balls)
    radii = radius_bound * (1.0 - 0.9 * rng.random(n_balls))
    return BallCollection(centers, radii, radius_bound, anisotropy)
