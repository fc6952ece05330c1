"""Tests for nonlocal_operator module"""
# pylint: disable=no-self-use, redefined-outer-name

import numpy as np
import pytest

from mmslab.errors import ConvergenceError, FieldError, ParameterError
from mmslab.fields import FieldRule, evaluate_field
from mmslab.nonlocal_operator import (
    ENERGY_STOP_FACTOR,
    NonlocalOperatorParams,
    SolverSettings,
    apply_nonlocal_p_laplacian,
    check_gradient,
    dense_linear_oracle,
    energy,
    energy_equivalence_report,
    energy_gradient,
    holder_probe,
    holder_sweep,
    poincare_check,
    require_converged,
    solve_dirichlet,
)
from mmslab.space import cloud_space, grid_space


@pytest.fixture
def line():
    "Sixteen points with unit weights"
    return grid_space(16, weight="unit")


@pytest.fixture
def boundary(line):
    "Dirichlet data at both ends"
    return {0: 0.0, line.n_points - 1: 1.0}


class TestParams:
    "Tests of NonlocalOperatorParams"

    def test_invalid(self):
        "s in (0, 1), p >= 1"
        with pytest.raises(ParameterError):
            NonlocalOperatorParams(s=1.0)
        with pytest.raises(ParameterError):
            NonlocalOperatorParams(p=0.5)


class TestOperator:
    "Tests of apply_nonlocal_p_laplacian() function"

    def test_constant(self, line):
        "constants are in the kernel"
        values = apply_nonlocal_p_laplacian(line, np.full(16, 3.0), NonlocalOperatorParams())
        assert np.all(values == 0.0)

    def test_linear_at_p2(self):
        "p = 2 gives a linear operator"
        space = cloud_space(14, dimension=2, seed=9)
        rng = np.random.default_rng(9)
        f, g = rng.normal(size=14), rng.normal(size=14)
        params = NonlocalOperatorParams(0.4, 2.0)
        combined = apply_nonlocal_p_laplacian(space, 2.5 * f - 1.5 * g, params)
        lf = apply_nonlocal_p_laplacian(space, f, params)
        lg = apply_nonlocal_p_laplacian(space, g, params)
        expected = 2.5 * lf - 1.5 * lg
        assert np.max(np.abs(combined - expected)) <= 1e-10 * np.max(np.abs(expected))

    @pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
    def test_double_loop(self, p):
        "vectorized operator agrees with a literal double loop"
        space = cloud_space(9, seed=2)
        f = np.random.default_rng(5).normal(size=9)
        s = 0.4
        values = apply_nonlocal_p_laplacian(space, f, NonlocalOperatorParams(s, p))

        for i in range(9):
            expected = 0.0
            for j in range(9):
                if i != j:
                    rho = space.distances[i, j]
                    volume = space.ball_volume(i, rho)
                    difference = f[i] - f[j]
                    expected += (
                        abs(difference) ** (p - 2.0)
                        * difference
                        / (rho ** (s * p) * volume ** ((p - 1.0) / p))
                        * space.weights[j]
                    )
            assert values[i] == pytest.approx(expected, rel=1e-12)


class TestEnergy:
    "Tests of energy(), energy_gradient() and check_gradient()"

    def test_zero(self, line):
        "J(0) = 0"
        assert energy(line, np.zeros(16), np.ones(16), NonlocalOperatorParams()) == 0.0

    @pytest.mark.parametrize("p", [2.0, 3.0])
    def test_gradient_check(self, line, p):
        "analytic gradient against central differences"
        u = np.random.default_rng(1).normal(size=16)
        rhs = np.linspace(-1.0, 1.0, 16)
        assert check_gradient(line, u, rhs, NonlocalOperatorParams(0.5, p)) < 1e-6

    def test_linear_in_rhs(self, line):
        "the load term enters linearly"
        u = np.random.default_rng(2).normal(size=16)
        params = NonlocalOperatorParams(0.3, 2.0)
        difference = energy_gradient(line, u, np.ones(16), params) - energy_gradient(
            line, u, np.zeros(16), params
        )
        assert difference == pytest.approx(-line.weights)


class TestSolve:
    "Tests of solve_dirichlet() function"

    def test_linear_oracle(self, line, boundary):
        "p = 2 with default settings agrees with a dense linear solve"
        rhs = np.ones(16)
        report = solve_dirichlet(line, rhs, boundary, NonlocalOperatorParams(0.5, 2.0))
        require_converged(report)

        expected = dense_linear_oracle(line, rhs, boundary, 0.5)
        assert report.stop_reason in ("gradient", "energy")
        assert report.gradient_norm <= ENERGY_STOP_FACTOR * SolverSettings().gradient_tol
        assert np.max(np.abs(report.solution - expected)) < 1e-8
        assert report.solution[0] == 0.0
        assert report.solution[15] == 1.0
        assert report.gradient_error < 1e-6

    def test_energy_decreases(self, line, boundary):
        "accepted steps never raise the energy beyond rounding"
        settings = SolverSettings(gradient_tol=1e-8, energy_tol=0.0)
        report = solve_dirichlet(line, np.ones(16), boundary, NonlocalOperatorParams(0.5, 3.0), settings)
        assert report.converged
        trace = np.array(report.energy_trace)
        slack = 1e-10 * np.max(np.abs(trace))
        assert np.all(np.diff(trace) <= slack)
        assert len(report.step_sizes) == report.iterations == len(trace) - 1

    @pytest.mark.parametrize("p", [2.5, 3.0])
    def test_default_settings(self, p):
        "default settings reach a small gradient for p > 2"
        space = grid_space(8, weight="unit")
        rhs = np.random.default_rng(2).normal(size=8)
        report = solve_dirichlet(space, rhs, {0: 0.0, 7: 1.0}, NonlocalOperatorParams(0.5, p))
        assert report.converged
        assert report.gradient_norm < 1e-6
        trace = np.array(report.energy_trace)
        assert np.all(np.diff(trace) <= 1e-10 * (1.0 + np.max(np.abs(trace))))

    def test_energy_stall_needs_small_gradient(self, line, boundary):
        "a large energy tolerance cannot stop the solver early"
        settings = SolverSettings(energy_tol=0.5, patience=1)
        report = solve_dirichlet(line, np.ones(16), boundary, NonlocalOperatorParams(0.5, 2.0), settings)
        assert report.converged
        assert report.gradient_norm <= ENERGY_STOP_FACTOR * settings.gradient_tol

    def test_smoothing(self, line, boundary):
        "1 < p < 2 uses a smoothed flux"
        report = solve_dirichlet(
            line, np.zeros(16), boundary, NonlocalOperatorParams(0.5, 1.5), SolverSettings(max_iter=2000)
        )
        assert report.smoothing > 0.0
        assert report.energy <= report.energy_trace[0]

    def test_not_converged(self, line, boundary):
        "iteration cap"
        settings = SolverSettings(max_iter=1, check_gradient=False)
        report = solve_dirichlet(line, np.ones(16), boundary, NonlocalOperatorParams(), settings)
        assert not report.converged
        assert report.stop_reason == "max_iter"
        with pytest.raises(ConvergenceError):
            require_converged(report)

    def test_invalid(self, line):
        "boundary and exponent checks"
        params = NonlocalOperatorParams()
        with pytest.raises(ParameterError):
            solve_dirichlet(line, np.ones(16), {}, params)
        with pytest.raises(FieldError):
            solve_dirichlet(line, np.ones(16), {20: 0.0}, params)
        with pytest.raises(ParameterError):
            solve_dirichlet(line, np.ones(16), {index: 0.0 for index in range(16)}, params)
        with pytest.raises(ParameterError):
            solve_dirichlet(line, np.ones(16), {0: 0.0}, NonlocalOperatorParams(0.5, 1.0))


class TestPoincare:
    "Tests of poincare_check() function"

    @pytest.mark.parametrize("seed", range(8))
    def test_random_trials(self, seed):
        "the constructive bound holds for random fields and balls"
        rng = np.random.default_rng(seed)
        space = cloud_space(24, dimension=2, seed=seed)
        f = rng.normal(size=24)
        center = int(rng.integers(24))
        radius = float(rng.uniform(0.5, 1.0)) * space.diameter
        params = NonlocalOperatorParams(float(rng.uniform(0.1, 0.9)), float(rng.uniform(1.0, 3.0)))

        report = poincare_check(space, f, center, radius, params)
        assert report.lhs <= report.bound * (1.0 + 1e-12)
        assert report.c0 >= 1.0
        assert report.ratio <= 1.0 + 1e-12

    def test_many_trials(self):
        "the bound holds over a thousand random configurations"
        rng = np.random.default_rng(2024)
        checked = 0
        for _ in range(1000):
            n_points = int(rng.integers(4, 20))
            dimension = int(rng.integers(1, 4))
            space = cloud_space(n_points, dimension=dimension, seed=int(rng.integers(10**6)))
            f = rng.normal(size=n_points) * rng.uniform(0.1, 10.0)
            center = int(rng.integers(n_points))
            radius = float(rng.uniform(0.5, 1.1)) * space.diameter
            s, p = float(rng.uniform(0.1, 0.9)), float(rng.uniform(1.0, 3.0))
            params = NonlocalOperatorParams(s, p)
            if np.count_nonzero(space.ball(center, radius)) < 2:
                continue
            report = poincare_check(space, f, center, radius, params)
            assert report.lhs <= report.bound * (1.0 + 1e-12)
            checked += 1
        assert checked >= 500

    def test_center_out_of_range(self, line):
        "centers must be points of the space"
        with pytest.raises(ParameterError):
            poincare_check(line, np.ones(16), 99, 0.3, NonlocalOperatorParams())

    def test_constant(self, line):
        "constant fields give zero on both sides"
        report = poincare_check(line, np.ones(16), 5, 0.3, NonlocalOperatorParams())
        assert report.lhs == 0.0
        assert report.ratio is None

    def test_single_point(self, line):
        "balls need two points"
        with pytest.raises(ParameterError):
            poincare_check(line, np.ones(16), 5, 0.01, NonlocalOperatorParams())


class TestEquivalence:
    "Tests of energy_equivalence_report() function"

    def test_refinements(self):
        "one row per space"
        spaces = [grid_space(size) for size in (16, 32, 64)]
        report = energy_equivalence_report(spaces, FieldRule("sine"), NonlocalOperatorParams(0.5, 2.0))
        assert [row.n_points for row in report.rows] == [16, 32, 64]
        ratios = [row.ratio for row in report.rows]
        assert report.spread == pytest.approx(max(ratios) / min(ratios))
        assert not report.indeterminate

    @pytest.mark.parametrize("rule", [FieldRule("sine"), FieldRule("bump", {"width": 0.25})])
    def test_stable(self, rule):
        "ratios stay within a factor 2 from 16 to 128 points"
        spaces = [grid_space(size) for size in (16, 32, 64, 128)]
        report = energy_equivalence_report(spaces, rule, NonlocalOperatorParams(0.5, 2.0))
        assert report.spread < 2.0
        assert report.stable

    def test_indeterminate(self):
        "constant fields give 0 / 0"
        spaces = [grid_space(size) for size in (8, 16)]
        report = energy_equivalence_report(spaces, FieldRule("constant"), NonlocalOperatorParams())
        assert report.indeterminate
        assert report.spread is None

    def test_too_few(self):
        "a family needs two spaces"
        with pytest.raises(ParameterError):
            energy_equivalence_report([grid_space(8)], FieldRule("sine"), NonlocalOperatorParams())


class TestHolder:
    "Tests of holder_probe() and holder_sweep()"

    def test_linear(self):
        "alpha = 1 recovers the slope"
        space = grid_space(16)
        u = evaluate_field(space, FieldRule("linear", {"slope": 2.0}))
        estimate = holder_probe(space, u, np.arange(16), 1.0)
        assert estimate.seminorm == pytest.approx(2.0)
        assert estimate.empirical_constant > 0.0
        assert all(row[1] <= row[2] for row in estimate.oscillation)

    def test_sweep(self):
        "one estimate per exponent"
        space = grid_space(16)
        u = evaluate_field(space, FieldRule("sine"))
        estimates = holder_sweep(space, u, np.arange(2, 14))
        assert [estimate.alpha for estimate in estimates] == pytest.approx([0.1 * k for k in range(1, 10)])

    def test_invalid(self):
        "exponent range and subdomain size"
        space = grid_space(16)
        u = np.zeros(16)
        with pytest.raises(ParameterError):
            holder_probe(space, u, np.arange(16), 0.0)
        with pytest.raises(ParameterError):
            holder_probe(space, u, [3], 0.5)
