"""Experiment runner behind the mms-lab subcommands

Classes:
    ExperimentReport - named scalars, long-format tables and provenance
    Runner - builds the inputs of a configuration and dispatches a subcommand

Functions:
    write_report(report, directory): JSON summary and one CSV per table

A report is checked for non-finite numbers before anything is written,
and files are written only once the whole report exists.
"""

import csv
from dataclasses import asdict, dataclass, field
import io
import json
import logging
import math
import os
from pathlib import Path
import time
from typing import Any, Callable, Optional, Union

import numpy as np

from . import __version__
from .asymptotics import (
    BBM_LIMITATION,
    anisotropic_sobolev_report,
    bbm_limit,
    compare_shapes,
    interpolation_inequality_report,
    k_functional,
    stability_test,
)
from .config import COMMANDS, ExperimentConfig, config_digest
from .covering import BallCollection, greedy_select, random_collection
from .errors import ConfigError, NonFiniteError, OutputError, SpaceError
from .fields import evaluate_exponents, evaluate_field
from .functionals import (
    ExponentField,
    anisotropic_gradient,
    anisotropic_weak_functional,
    bvy_weak_functional,
    fractional_seminorm,
    lipschitz_energy,
    lipschitz_field,
    luxemburg_norm,
    modular_ratio,
    orlicz_fd_seminorm,
    orlicz_weak_ratio,
    poincare_qp_ratio,
    varexp_fd_seminorm,
    varexp_weak_functional,
    weak_profile,
    weak_to_lipschitz_ratio,
)
from .nonlocal_operator import (
    NonlocalOperatorParams,
    apply_nonlocal_p_laplacian,
    energy_equivalence_report,
    holder_sweep,
    poincare_check,
    require_converged,
    solve_dirichlet,
)
from .space import (
    AnisotropyMatrix,
    MetricMeasureSpace,
    ahlfors_constant,
    build_space,
    growth_diagnostics,
)

logger = logging.getLogger(__name__)

Table = list[dict[str, Any]]


@dataclass
class ExperimentReport:
    """Result of one subcommand

    Attributes:
        command: the subcommand
        scalars: named results (numbers, flags, small nested documents)
        tables: long-format tables, one dict per row
        provenance: config digest, library version and seed
        runtime: wall-clock seconds and worker count
    """

    command: str
    scalars: dict[str, Any]
    tables: dict[str, Table] = field(default_factory=dict)
    provenance: dict[str, Any] = field(default_factory=dict)
    runtime: dict[str, Any] = field(default_factory=dict)

    def summary(self, include_runtime: bool = True) -> dict[str, Any]:
        """JSON document of the report

        Without the runtime block two runs of the same configuration
        produce identical documents.
        """
        document = {
            "command": self.command,
            "scalars": self.scalars,
            "tables": {name: len(rows) for name, rows in self.tables.items()},
            "provenance": self.provenance,
        }
        if include_runtime:
            document["runtime"] = self.runtime
        return document

    def to_json(self, include_runtime: bool = True) -> str:
        """UTF-8 JSON with sorted keys"""
        return json.dumps(
            self.summary(include_runtime), sort_keys=True, indent=2, allow_nan=False, ensure_ascii=False
        )


def _plain(value: Any) -> Any:
    """Convert numpy scalars, arrays and tuples for JSON"""
    if isinstance(value, dict):
        return {str(key): _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def _check_finite(value: Any, operation: str, path: str = ""):
    """Raise NonFiniteError at the first inf or nan"""
    if isinstance(value, dict):
        for key, item in value.items():
            _check_finite(item, operation, f"{path}.{key}" if path else str(key))
    elif isinstance(value, list):
        for index, item in enumerate(value):
            _check_finite(item, operation, f"{path}[{index}]")
    elif isinstance(value, float) and not math.isfinite(value):
        raise NonFiniteError(f"non-finite value at {path}", operation)


class Runner:
    """Run mms-lab subcommands for one configuration

    Args:
        config: validated configuration
    """

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.rng = np.random.default_rng(0 if config.seed is None else config.seed)
        self._space: Optional[MetricMeasureSpace] = None

        self._handlers: dict[str, Callable[[], tuple[dict[str, Any], dict[str, Table]]]] = {
            "space-gen": self._space_gen,
            "bvy": self._bvy,
            "seminorm": self._seminorm,
            "orlicz": self._orlicz,
            "varexp": self._varexp,
            "anisotropic": self._anisotropic,
            "covering": self._covering,
            "nonlocal-apply": self._nonlocal_apply,
            "nonlocal-solve": self._nonlocal_solve,
            "poincare": self._poincare,
            "equivalence": self._equivalence,
            "kfunc": self._kfunc,
            "interp": self._interp,
            "bbm": self._bbm,
            "sharpness": self._sharpness,
            "stability": self._stability,
        }

    def run(self, command: str) -> ExperimentReport:
        """Run one subcommand

        Raises ConfigError for unknown commands, a command that conflicts
        with the configuration, or a randomized run without a seed.
        NonFiniteError when the report holds inf or nan.
        """
        if command not in COMMANDS:
            raise ConfigError(f"unknown subcommand '{command}'", "run")
        if self.config.command is not None and self.config.command != command:
            raise ConfigError(
                f"configuration is for '{self.config.command}', not '{command}'", "run"
            )
        if self.config.seed is None and self.config.randomized(command):
            raise ConfigError("a seed is required for randomized experiments", command)

        logger.info("running %s", command)
        start = time.perf_counter()
        scalars, tables = self._handlers[command]()
        elapsed = time.perf_counter() - start

        scalars = _plain(scalars)
        tables = _plain(tables)
        _check_finite(scalars, command)
        _check_finite(tables, command)

        return ExperimentReport(
            command=command,
            scalars=scalars,
            tables=tables,
            provenance={
                "config_sha256": config_digest(self.config),
                "version": __version__,
                "seed": self.config.seed,
            },
            runtime={"wall_clock_seconds": elapsed, "threads": self.config.threads},
        )

    # Inputs

    @property
    def space(self) -> MetricMeasureSpace:
        """The configured space, built once"""
        if self._space is None:
            self._space = build_space(self.config.space)
        return self._space

    def _field(self, space: Optional[MetricMeasureSpace] = None) -> np.ndarray:
        if space is None:
            space = self.space
        return evaluate_field(space, self.config.field.field_rule(), self.rng)

    def _params(self) -> NonlocalOperatorParams:
        return NonlocalOperatorParams(self.config.s, self.config.p)

    def _anisotropy(self) -> Optional[AnisotropyMatrix]:
        if self.config.anisotropy is None:
            return None
        return AnisotropyMatrix.from_array(self.config.anisotropy)

    def _family(self) -> list[MetricMeasureSpace]:
        """The configured space rebuilt at every refinement size"""
        return [
            build_space(self.config.space.model_copy(update={"n_points": size}))
            for size in self.config.sizes
        ]

    # Subcommands

    def _space_gen(self) -> tuple[dict[str, Any], dict[str, Table]]:
        space = self.space
        scalars: dict[str, Any] = {
            "space": space.to_dict(),
            "n_points": space.n_points,
            "total_mass": space.total_mass,
            "diameter": space.diameter,
            "min_distance": space.min_distance,
        }
        if space.n_points >= 2:
            scalars["growth"] = asdict(growth_diagnostics(space))
        if space.grid_shape is not None:
            try:
                scalars["ahlfors_constant"] = ahlfors_constant(space, len(space.grid_shape))
            except SpaceError:
                scalars["ahlfors_constant"] = None
        return scalars, {}

    def _bvy(self) -> tuple[dict[str, Any], dict[str, Table]]:
        space, p = self.space, self.config.p
        f = self._field()
        profile = weak_profile(space, f, p)
        value = bvy_weak_functional(space, f, p)
        local = lipschitz_energy(space, f, p, self.config.h)
        ratio = weak_to_lipschitz_ratio(space, f, p, self.config.h)
        return {
            "value": value,
            "p": p,
            "maximizing_ratio": profile.maximizer(p),
            "distinct_ratios": int(profile.ratios.shape[0]),
            "lipschitz_energy": local,
            "weak_to_lipschitz": ratio,
        }, {}

    def _seminorm(self) -> tuple[dict[str, Any], dict[str, Table]]:
        config = self.config
        value = fractional_seminorm(self.space, self._field(), config.s, config.p)
        return {"value": value, "s": config.s, "p": config.p}, {}

    def _orlicz(self) -> tuple[dict[str, Any], dict[str, Table]]:
        config, space = self.config, self.space
        phi = config.phi.young_function()
        phi.check()
        f = self._field()
        lipschitz = lipschitz_field(space, f, config.h)
        return {
            "young_function": {"kind": phi.kind, "p": phi.p},
            "delta2_constant": phi.delta2_constant(),
            "seminorm": orlicz_fd_seminorm(space, f, config.s, phi),
            "lipschitz_norm": luxemburg_norm(space, lipschitz.values, phi),
            "weak_ratio": orlicz_weak_ratio(space, f, config.p, phi, config.h),
            "modular_ratio": modular_ratio(space, f, config.p, phi, config.h),
        }, {}

    def _varexp(self) -> tuple[dict[str, Any], dict[str, Table]]:
        config, space = self.config, self.space
        pfield = ExponentField.on_space(
            space, evaluate_exponents(space, config.exponents.exponent_rule(), self.rng)
        )
        f = self._field()
        pstar = pfield.p_minus if config.pstar is None else config.pstar
        return {
            "seminorm": varexp_fd_seminorm(space, f, config.s, pfield),
            "weak_functional": varexp_weak_functional(space, f, pfield, pstar),
            "pstar": pstar,
            "p_minus": pfield.p_minus,
            "p_plus": pfield.p_plus,
            "log_holder": pfield.log_holder,
        }, {}

    def _anisotropic(self) -> tuple[dict[str, Any], dict[str, Table]]:
        config, space = self.config, self.space
        anisotropy = self._anisotropy()
        f = self._field()
        scalars: dict[str, Any] = {
            "weak_functional": anisotropic_weak_functional(
                space, f, anisotropy, config.p, config.n_a
            ),
            "p": config.p,
        }
        if space.grid_shape is not None:
            gradient = anisotropic_gradient(space, f, anisotropy)
            energy = gradient.energy(config.p)
            scalars["gradient_energy"] = energy
            scalars["weak_to_gradient"] = (
                None if energy == 0.0 else scalars["weak_functional"] / energy
            )
            dimension = len(space.grid_shape) if config.n_a is None else config.n_a
            if config.p < dimension:
                scalars["sobolev"] = asdict(
                    anisotropic_sobolev_report(space, f, anisotropy, config.p, config.n_a)
                )
        return scalars, {}

    def _covering(self) -> tuple[dict[str, Any], dict[str, Table]]:
        config, space = self.config, self.space
        anisotropy = self._anisotropy()
        if config.balls is not None:
            balls = BallCollection.from_pairs(config.balls, config.radius_bound, anisotropy)
        else:
            bound = config.radius_bound or space.diameter / 4.0
            balls = random_collection(space, config.n_balls, bound, self.rng, anisotropy)

        result = greedy_select(space, balls)
        chosen = set(result.selected)
        rows = [
            {
                "ball": index,
                "center": int(balls.centers[index]),
                "radius": float(balls.radii[index]),
                "selected": index in chosen,
                "removed_by": result.removed_by[index],
                "container": result.certificate[index],
            }
            for index in range(len(balls))
        ]
        return {"covering": result.to_dict()}, {"certificate": rows}

    def _nonlocal_apply(self) -> tuple[dict[str, Any], dict[str, Table]]:
        f = self._field()
        values = apply_nonlocal_p_laplacian(self.space, f, self._params())
        rows = [
            {"point": index, "f": float(f[index]), "Lf": float(values[index])}
            for index in range(values.shape[0])
        ]
        return {"max_abs": float(np.max(np.abs(values)))}, {"operator": rows}

    def _nonlocal_solve(self) -> tuple[dict[str, Any], dict[str, Table]]:
        config, space = self.config, self.space
        rhs = evaluate_field(space, config.rhs.field_rule(), self.rng)
        boundary = config.boundary
        if boundary is None:
            boundary = {0: 0.0, space.n_points - 1: 0.0}

        report = solve_dirichlet(
            space, rhs, boundary, self._params(), config.solver.settings(config.seed or 0)
        )
        require_converged(report)

        interior = [index for index in range(space.n_points) if index not in boundary]
        estimates = holder_sweep(space, report.solution, interior, rhs, config.alphas, config.p, config.q)

        tables = {
            "solution": [
                {"point": index, "rhs": float(rhs[index]), "u": float(report.solution[index])}
                for index in range(space.n_points)
            ],
            "energy_trace": [
                {"iteration": index, "energy": value, "step": report.step_sizes[index - 1] if index else None}
                for index, value in enumerate(report.energy_trace)
            ],
            "holder": [
                {"alpha": row.alpha, "seminorm": row.seminorm, "constant": row.empirical_constant}
                for row in estimates
            ],
        }
        scalars = report.to_dict()
        del scalars["solution"]
        return {"solve": scalars}, tables

    def _poincare(self) -> tuple[dict[str, Any], dict[str, Table]]:
        config, space = self.config, self.space
        f = self._field()
        radius = config.radius or space.diameter / 2.0
        report = poincare_check(space, f, config.center, radius, self._params())
        return {
            "lhs": report.lhs,
            "rhs_raw": report.rhs_raw,
            "c0": report.c0,
            "bound": report.bound,
            "holds": True,
            "n_points": report.n_points,
            "qp_ratio": poincare_qp_ratio(
                space, f, config.center, radius, config.q, config.p, config.tau, config.h
            ),
        }, {}

    def _equivalence(self) -> tuple[dict[str, Any], dict[str, Table]]:
        config = self.config
        result = energy_equivalence_report(
            self._family(), config.field.field_rule(), self._params(), config.h, config.threads
        )
        rows = [asdict(row) for row in result.rows]
        return {
            "spread": result.spread,
            "stable": result.stable,
            "indeterminate": result.indeterminate,
        }, {"ratios": rows}

    def _kfunc(self) -> tuple[dict[str, Any], dict[str, Table]]:
        config = self.config
        t_grid = config.t_grid or list(np.geomspace(1e-3, 1e3, 25))
        curve = k_functional(
            self.space, self._field(), config.s1, config.p1, config.p, t_grid, config.deltas, config.h
        )
        rows = [
            {"t": float(t), "K": float(value), "delta": scale}
            for t, value, scale in zip(curve.t, curve.values, curve.scales)
        ]
        return {
            "lipschitz_norm": curve.lipschitz_norm,
            "fractional_norm": curve.fractional_norm,
            "monotone": curve.monotone,
            "concave": curve.concave,
            "bounded": curve.bounded,
            "degenerate_scales": curve.degenerate_scales,
        }, {"curve": rows}

    def _interp(self) -> tuple[dict[str, Any], dict[str, Table]]:
        config = self.config
        rows = []
        for space in self._family():
            report = interpolation_inequality_report(
                space, self._field(space), config.s1, config.p1, config.theta, config.h
            )
            rows.append({"n_points": space.n_points, **asdict(report)})

        constants = [row["constant"] for row in rows if row["constant"] is not None]
        spread = max(constants) / min(constants) if constants else None
        return {
            "s": rows[0]["s"],
            "p": rows[0]["p"],
            "spread": spread,
            "bounded": None if spread is None else spread <= 4.0,
        }, {"constants": rows}

    def _bbm(self) -> tuple[dict[str, Any], dict[str, Table]]:
        config = self.config
        sweep = bbm_limit(config.sweep, config.field.field_rule(), config.p, config.threads)
        rows = [
            {**asdict(row), "relative_error": error}
            for row, error in zip(sweep.rows, sweep.relative_errors)
        ]
        return {
            "target": sweep.target,
            "gradient_energy": sweep.gradient_energy,
            "monotone": sweep.monotone,
            "pass": sweep.within_tolerance,
            "relative_error": sweep.relative_errors[-1],
            "tolerance": sweep.tolerance,
            "limitation": BBM_LIMITATION,
        }, {"diagonal": rows}

    def _sharpness(self) -> tuple[dict[str, Any], dict[str, Table]]:
        config = self.config
        comparison = compare_shapes(
            config.shapes, config.x0, config.bump_deltas, config.p, config.threads
        )
        rows = [
            {
                "shape": shape,
                "delta": delta,
                "n_points": size,
                "weak": weak,
                "local": local,
                "ratio": ratio,
            }
            for shape, trace in comparison.traces.items()
            for delta, size, weak, local, ratio in zip(
                trace.deltas, trace.n_points, trace.weak, trace.local, trace.ratios
            )
        ]
        return {
            "best_shape": comparison.best_shape,
            "infimum": comparison.infimum,
            "converged": {shape: trace.converged for shape, trace in comparison.traces.items()},
        }, {"ratios": rows}

    def _stability(self) -> tuple[dict[str, Any], dict[str, Table]]:
        config, space = self.config, self.space
        f = self._field()
        g = evaluate_field(space, config.perturbation.field_rule(), self.rng)
        table = stability_test(space, f, g, config.epsilons, config.p)
        rows = [
            {"epsilon": epsilon, "value": value, "difference": difference, "bound": bound, "scale": scale}
            for epsilon, value, difference, bound, scale in zip(
                table.epsilons, table.values, table.differences, table.bounds, table.scales
            )
        ]
        scalars = {
            "certified": table.certified,
            "decreasing": table.decreasing,
            "within_scale": table.within_scale,
            "tolerance": table.tolerance,
        }
        return scalars, {"differences": rows}


def _csv_text(rows: Table) -> str:
    """Long-format CSV with a header row"""
    buffer = io.StringIO()
    columns = list(rows[0]) if rows else []
    writer = csv.DictWriter(buffer, fieldnames=columns)
    writer.writeheader()
    writer.writerows(rows)
    return buffer.getvalue()


def write_report(report: ExperimentReport, directory: Union[str, Path]) -> list[Path]:
    """Write <command>.json and <command>_<table>.csv files

    All contents are rendered before the first file is written.
    Raises OutputError when the files cannot be written.
    """
    directory = Path(directory)
    prefix = report.command.replace("-", "_")
    contents = {directory / f"{prefix}.json": report.to_json() + "\n"}
    for name, rows in report.tables.items():
        contents[directory / f"{prefix}_{name}.csv"] = _csv_text(rows)

    # Files to remove if any step fails: partials, then renamed reports
    written: list[Path] = []
    try:
        directory.mkdir(parents=True, exist_ok=True)
        for path, text in contents.items():
            partial = path.with_name(path.name + ".partial")
            with open(partial, "w", encoding="utf-8", newline="") as handle:
                handle.write(text)
            written.append(partial)

        for path in contents:
            os.replace(path.with_name(path.name + ".partial"), path)
            written.append(path)
    except OSError as error:
        for stale in written:
            stale.unlink(missing_ok=True)
        raise OutputError(f"cannot write reports to {directory}: {error.strerror}", "write_report") from error

    return list(contents)
