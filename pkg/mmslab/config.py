"""Experiment configuration for the mms-lab command

Classes:
    RuleConfig - named field or exponent rule with parameters
    YoungConfig - Young function from the builtin catalog
    SolverConfig - Dirichlet solver settings
    ExperimentConfig - everything one subcommand needs

Functions:
    load_config(path): read and validate a JSON configuration file
    config_digest(config): SHA-256 of the canonical configuration JSON
    config_schema(): JSON schema of ExperimentConfig

Every model forbids unknown keys, so a typo in a configuration
file is reported rather than ignored.
"""

import hashlib
import json
from pathlib import Path
from typing import Any, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field
from pydantic import ValidationError as PydanticValidationError

from .asymptotics import BBM_SWEEP
from .errors import ConfigError, OutputError
from .fields import ExponentRule, FieldRule
from .functionals import YoungFunction
from .nonlocal_operator import SolverSettings
from .space import SpaceConfig

COMMANDS = (
    "space-gen",
    "bvy",
    "seminorm",
    "orlicz",
    "varexp",
    "anisotropic",
    "covering",
    "nonlocal-apply",
    "nonlocal-solve",
    "poincare",
    "equivalence",
    "kfunc",
    "interp",
    "bbm",
    "sharpness",
    "stability",
)


class RuleConfig(BaseModel):
    """Builtin rule name and its parameters"""

    model_config = ConfigDict(extra="forbid")

    name: str
    params: dict[str, Any] = Field(default_factory=dict)

    def field_rule(self) -> FieldRule:
        """As a scalar field rule"""
        return FieldRule(self.name, dict(self.params))

    def exponent_rule(self) -> ExponentRule:
        """As an exponent rule"""
        return ExponentRule(self.name, dict(self.params))


class YoungConfig(BaseModel):
    """Young function: t^p or t^p log(e + t)"""

    model_config = ConfigDict(extra="forbid")

    kind: Literal["power", "power_log"] = "power"
    p: float = Field(2.0, ge=1.0)

    def young_function(self) -> YoungFunction:
        """Build the Young function"""
        return YoungFunction(self.kind, self.p)


class SolverConfig(BaseModel):
    """Dirichlet solver settings"""

    model_config = ConfigDict(extra="forbid")

    max_iter: int = Field(20000, ge=1)
    gradient_tol: float = Field(1e-8, gt=0.0)
    energy_tol: float = Field(1e-10, ge=0.0)
    patience: int = Field(5, ge=1)
    check_gradient: bool = True

    def settings(self, seed: int) -> SolverSettings:
        """As SolverSettings"""
        return SolverSettings(
            max_iter=self.max_iter,
            gradient_tol=self.gradient_tol,
            energy_tol=self.energy_tol,
            patience=self.patience,
            check_gradient=self.check_gradient,
            seed=seed,
        )


class ExperimentConfig(BaseModel):
    """Configuration of one mms-lab run

    Parameters that a subcommand does not use are ignored by it.
    """

    model_config = ConfigDict(extra="forbid")

    command: Optional[str] = None
    seed: Optional[int] = Field(None, ge=0)
    threads: int = Field(1, ge=1)
    out: Optional[str] = None

    # Space and fields
    space: SpaceConfig = Field(default_factory=SpaceConfig)
    field: RuleConfig = Field(default_factory=lambda: RuleConfig(name="sine"))
    perturbation: RuleConfig = Field(default_factory=lambda: RuleConfig(name="random"))
    exponents: RuleConfig = Field(
        default_factory=lambda: RuleConfig(name="linear", params={"p0": 2.0, "slope": 1.0})
    )
    rhs: RuleConfig = Field(
        default_factory=lambda: RuleConfig(name="constant", params={"value": 1.0})
    )

    # Functional parameters
    s: float = Field(0.5, gt=0.0, lt=1.0)
    p: float = Field(2.0, ge=1.0)
    q: float = Field(2.0, ge=1.0)
    tau: float = Field(1.0, ge=1.0)
    pstar: Optional[float] = None
    h: Optional[float] = Field(None, gt=0.0)
    phi: YoungConfig = Field(default_factory=YoungConfig)
    anisotropy: Optional[list[list[float]]] = None
    n_a: Optional[int] = Field(None, ge=1)

    # Interpolation and K-functional
    s1: float = Field(0.3, gt=0.0, lt=1.0)
    p1: float = Field(2.0, ge=1.0)
    theta: float = Field(0.5, gt=0.0, lt=1.0)
    t_grid: Optional[list[float]] = Field(None, min_length=1)
    deltas: Optional[list[float]] = Field(None, min_length=1)

    # Balls
    center: int = Field(0, ge=0)
    radius: Optional[float] = Field(None, gt=0.0)
    balls: Optional[list[tuple[int, float]]] = Field(None, min_length=1)
    n_balls: int = Field(20, ge=1)
    radius_bound: Optional[float] = Field(None, gt=0.0)

    # Dirichlet problems
    boundary: Optional[dict[int, float]] = None
    solver: SolverConfig = Field(default_factory=SolverConfig)
    alphas: list[float] = Field(
        default_factory=lambda: [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9], min_length=1
    )

    # Sweeps
    sizes: list[int] = Field(default_factory=lambda: [16, 32, 64, 128], min_length=1)
    sweep: list[tuple[float, int]] = Field(
        default_factory=lambda: [tuple(entry) for entry in BBM_SWEEP], min_length=1
    )
    shapes: list[str] = Field(default_factory=lambda: ["smooth"], min_length=1)
    x0: float = 0.5
    bump_deltas: list[float] = Field(default_factory=lambda: [0.25, 0.125, 0.0625], min_length=1)
    epsilons: list[float] = Field(
        default_factory=lambda: [1e-1, 1e-2, 1e-3, 1e-4, 1e-5], min_length=1
    )

    def randomized(self, command: str) -> bool:
        """True when the command draws random numbers"""
        if self.field.name == "random":
            return True
        if command == "stability":
            return self.perturbation.name == "random"
        if command == "covering":
            return self.balls is None
        if command == "varexp":
            return self.exponents.name == "random"
        if command == "nonlocal-solve":
            return self.rhs.name == "random"
        return False


def validate_config(data: Union[dict[str, Any], ExperimentConfig]) -> ExperimentConfig:
    """Validate a configuration document

    Raises ConfigError naming the first offending key.
    """
    if isinstance(data, ExperimentConfig):
        return data
    try:
        return ExperimentConfig.model_validate(data)
    except PydanticValidationError as error:
        first = error.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise ConfigError(f"{location}: {first['msg']}", "config") from error


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    """Read and validate a JSON configuration file

    Raises OutputError when the file cannot be read,
    ConfigError when it is not valid JSON or fails validation.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as error:
        raise OutputError(f"cannot read {path}: {error.strerror}", "config") from error

    try:
        data = json.loads(text)
    except json.JSONDecodeError as error:
        raise ConfigError(f"malformed JSON at line {error.lineno}", "config") from error
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a JSON object", "config")

    return validate_config(data)


def config_digest(config: ExperimentConfig) -> str:
    """SHA-256 of the canonical JSON of the configuration

    Runtime settings (threads, output directory) are left out,
    so the digest identifies the experiment, not the run.
    """
    payload = json.dumps(
        config.model_dump(mode="json", exclude={"threads", "out"}),
        sort_keys=True,
        separators=(",", ":"),
        ensure_ascii=False,
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def config_schema() -> dict[str, Any]:
    """JSON schema of ExperimentConfig"""
    return ExperimentConfig.model_json_schema()
