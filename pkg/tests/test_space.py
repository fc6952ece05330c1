"""Tests for space module"""
# pylint: disable=no-self-use, too-few-public-methods, redefined-outer-name

import numpy as np
import pytest

from mmslab.errors import ParameterError, SpaceError
from mmslab.space import (
    AnisotropyMatrix,
    MetricMeasureSpace,
    SpaceConfig,
    ahlfors_constant,
    anisotropic_distance,
    build_space,
    cloud_space,
    grid_space,
    growth_diagnostics,
    pairwise_distances,
    segment_space,
)


@pytest.fixture
def unit_grid():
    "Ten points 0, 1, ..., 9 with unit weights"
    return grid_space(10, spacing=1.0, weight="unit")


@pytest.fixture
def cloud():
    "Twelve random points in the plane"
    return cloud_space(12, dimension=2, seed=3)


class TestAnisotropyMatrix:
    "Tests of AnisotropyMatrix"

    def test_condition(self):
        "condition number of a diagonal matrix"
        matrix = AnisotropyMatrix.diagonal([1.0, 4.0])
        assert matrix.condition == pytest.approx(4.0)
        assert matrix.dimension == 2

    def test_singular(self):
        "singular matrices are rejected"
        with pytest.raises(SpaceError):
            AnisotropyMatrix.from_array([[1.0, 2.0], [2.0, 4.0]])

    def test_not_square(self):
        "non-square matrices are rejected"
        with pytest.raises(SpaceError):
            AnisotropyMatrix.from_array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])

    def test_distance(self):
        "anisotropic_distance() is the sup norm of A(x - y)"
        matrix = AnisotropyMatrix.diagonal([2.0, 1.0])
        assert anisotropic_distance(matrix, [0.0, 0.0], [1.0, 1.0]) == 2.0
        assert anisotropic_distance(matrix, [0.0, 0.0], [0.0, 3.0]) == 3.0

        with pytest.raises(SpaceError):
            anisotropic_distance(matrix, [0.0], [1.0])


class TestPairwiseDistances:
    "Tests of pairwise_distances() function"

    def test_metrics(self):
        "euclidean and sup metrics"
        coords = np.array([[0.0, 0.0], [3.0, 4.0]])
        assert pairwise_distances(coords, "euclidean")[0, 1] == pytest.approx(5.0)
        assert pairwise_distances(coords, "sup")[0, 1] == 4.0

    def test_anisotropic_matches_pointwise(self, cloud):
        "dense anisotropic matrix agrees with anisotropic_distance()"
        matrix = AnisotropyMatrix.from_array([[1.0, 0.5], [0.0, 2.0]])
        distances = pairwise_distances(cloud.coords, "anisotropic", matrix)
        for i in range(cloud.n_points):
            for j in range(cloud.n_points):
                expected = anisotropic_distance(matrix, cloud.coords[i], cloud.coords[j])
                assert distances[i, j] == pytest.approx(expected, rel=1e-12, abs=1e-15)

    def test_unknown_metric(self):
        "unknown metric names are rejected"
        with pytest.raises(SpaceError):
            pairwise_distances(np.zeros((2, 1)), "manhattan")


class TestMetricMeasureSpace:
    "Tests of MetricMeasureSpace validation and balls"

    def test_weights(self):
        "weights must be positive and one per point"
        distances = [[0.0, 1.0], [1.0, 0.0]]
        with pytest.raises(SpaceError):
            MetricMeasureSpace.from_matrix(distances, [1.0, 0.0])
        with pytest.raises(SpaceError):
            MetricMeasureSpace.from_matrix(distances, [1.0])

    def test_metric_axioms(self):
        "symmetry, zero diagonal, separation and the triangle inequality"
        with pytest.raises(SpaceError):
            MetricMeasureSpace.from_matrix([[0.0, 1.0], [2.0, 0.0]], [1.0, 1.0])
        with pytest.raises(SpaceError):
            MetricMeasureSpace.from_matrix([[1.0, 1.0], [1.0, 0.0]], [1.0, 1.0])
        with pytest.raises(SpaceError):
            MetricMeasureSpace.from_matrix([[0.0, 0.0], [0.0, 0.0]], [1.0, 1.0])
        with pytest.raises(SpaceError):
            MetricMeasureSpace.from_matrix(
                [[0.0, 1.0, 5.0], [1.0, 0.0, 1.0], [5.0, 1.0, 0.0]], [1.0, 1.0, 1.0]
            )

    def test_read_only(self, unit_grid):
        "arrays cannot be modified after construction"
        with pytest.raises(ValueError):
            unit_grid.distances[0, 1] = 7.0

    def test_open_balls(self, unit_grid):
        "B(i, r) only holds points strictly closer than r"
        assert list(np.flatnonzero(unit_grid.ball(0, 1.0))) == [0]
        assert list(np.flatnonzero(unit_grid.ball(4, 2.0))) == [3, 4, 5]
        assert unit_grid.ball_volume(4, 2.0) == 3.0
        assert unit_grid.ball_volume(4, 2.0 + 1e-9) == 5.0

    def test_ball_center_range(self, unit_grid):
        "centers outside the space are parameter errors"
        for center in (-1, unit_grid.n_points, 2.0, True):
            with pytest.raises(ParameterError):
                unit_grid.ball(center, 1.0)
            with pytest.raises(ParameterError):
                unit_grid.ball_volume(center, 1.0)
        assert unit_grid.ball_volume(np.int64(4), 2.0) == 3.0

    def test_pair_volumes(self, cloud):
        "pair_volumes agrees exactly with ball_volume()"
        for i in range(cloud.n_points):
            for j in range(cloud.n_points):
                expected = cloud.ball_volume(i, cloud.distances[i, j])
                assert cloud.pair_volumes[i, j] == expected

    def test_ball_volumes(self, unit_grid):
        "N x R table of volumes"
        table = unit_grid.ball_volumes([0.5, 1.5, 100.0])
        assert table.shape == (10, 3)
        assert np.all(table[:, 0] == 1.0)
        assert table[0, 1] == 2.0
        assert table[5, 1] == 3.0
        assert np.all(table[:, 2] == 10.0)

    def test_properties(self, unit_grid):
        "derived quantities"
        assert unit_grid.n_points == 10
        assert unit_grid.dimension == 1
        assert unit_grid.total_mass == 10.0
        assert unit_grid.min_distance == 1.0
        assert unit_grid.diameter == 9.0


class TestGenerators:
    "Tests of the space generators"

    def test_grid_mass(self):
        "cell weights give a unit square total mass 1"
        space = grid_space(4, dimension=2)
        assert space.n_points == 16
        assert space.total_mass == pytest.approx(1.0)
        assert space.grid_shape == (4, 4)

    def test_segment(self):
        "segment in the plane keeps its 1-D spacing"
        space = segment_space(8, angle=0.3)
        assert space.dimension == 2
        assert space.min_distance == pytest.approx(1.0 / 8.0)

    def test_cloud_seeded(self):
        "same seed, same cloud"
        first = cloud_space(10, seed=5)
        second = cloud_space(10, seed=5)
        assert np.array_equal(first.coords, second.coords)
        assert np.array_equal(first.weights, second.weights)

    def test_build_custom(self):
        "row-major custom distances"
        space = build_space(
            SpaceConfig(generator="custom", distances=[0.0, 2.0, 2.0, 0.0], weights=[1.0, 3.0])
        )
        assert space.distances[0, 1] == 2.0
        assert space.total_mass == 4.0

        with pytest.raises(SpaceError):
            build_space(
                SpaceConfig(generator="custom", distances=[0.0, 2.0, 2.0], weights=[1.0, 3.0])
            )

    def test_build_anisotropic_needs_matrix(self):
        "anisotropic metric without a matrix"
        with pytest.raises(SpaceError):
            build_space({"generator": "grid", "dimension": 2, "metric": "anisotropic"})

    def test_export(self, cloud):
        "to_dict() rebuilds the same space"
        rebuilt = build_space(cloud.to_dict())
        assert np.array_equal(rebuilt.distances, cloud.distances)
        assert np.array_equal(rebuilt.weights, cloud.weights)


class TestGrowth:
    "Tests of growth_diagnostics() and ahlfors_constant()"

    def test_line(self):
        "a 1-D grid grows like r^1"
        diagnostics = growth_diagnostics(grid_space(64))
        assert not diagnostics.fit_degenerate
        assert diagnostics.dimension == pytest.approx(1.0, abs=0.1)
        assert diagnostics.n_radii == 31
        assert diagnostics.n_pairs == 64 * 31
        assert diagnostics.doubling_constant == pytest.approx(3.0)
        assert diagnostics.residual > 0.0

    def test_envelope(self):
        "the largest ball at each midpoint radius has volume exactly 2r"
        diagnostics = growth_diagnostics(grid_space(32))
        assert diagnostics.envelope_dimension == pytest.approx(1.0, abs=1e-9)
        assert diagnostics.envelope_constant == pytest.approx(2.0, rel=1e-9)

    def test_embedded_segment(self):
        "a segment in the plane still grows like r^1"
        diagnostics = growth_diagnostics(segment_space(64, angle=0.7))
        assert diagnostics.dimension == pytest.approx(1.0, abs=0.1)
        assert diagnostics.dimension == pytest.approx(growth_diagnostics(grid_space(64)).dimension)

    def test_square(self):
        "a 2-D grid grows faster than a line"
        square = growth_diagnostics(grid_space(12, dimension=2))
        line = growth_diagnostics(grid_space(144))
        assert square.dimension > line.dimension
        assert square.envelope_dimension > 1.5

    def test_degenerate(self):
        "two points leave a single scale"
        space = MetricMeasureSpace.from_matrix([[0.0, 1.0], [1.0, 0.0]], [1.0, 1.0])
        diagnostics = growth_diagnostics(space)
        assert diagnostics.fit_degenerate
        assert diagnostics.dimension is None

        with pytest.raises(SpaceError):
            growth_diagnostics(MetricMeasureSpace.from_matrix([[0.0]], [1.0]))

    def test_ahlfors(self):
        "c_1 = 2 on a unit interval grid"
        assert ahlfors_constant(grid_space(64), 1) == pytest.approx(2.0)
