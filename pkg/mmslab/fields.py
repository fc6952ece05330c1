"""Builtin scalar fields and exponent fields

Classes:
    FieldRule - named rule producing a ScalarField on a space
    ExponentRule - named rule producing per-point exponents p(x)

Functions:
    evaluate_field(space, rule): values of a field rule at the points of a space
    evaluate_exponents(space, rule): per-point exponents of an exponent rule
    bump_profile(shape, u): compactly supported bump shapes on [-1, 1]
    bump_gradient_energy(shape, p, width): exact integral of |f'|^p for a 1-D bump
    rule_number(params, key, default, operation): numeric rule parameter

A ScalarField is a plain 1-D float array aligned with the point ids.
Rules read coordinate `axis` (default 0) of the space, so a 1-D rule
applied to a 2-D grid gives a field that depends on x only.

Field rules:
    constant  value
    linear    slope * x + offset
    sine      amplitude * sin(2 pi frequency x)
    bump      amplitude * b((x - center) / width) for b in BUMP_SHAPES
    random    uniform on [low, high), seeded
    values    inline array
"""

from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np
from scipy.integrate import quad  # type: ignore

from .errors import FieldError
from .space import MetricMeasureSpace

BUMP_SHAPES = ("smooth", "triangle", "cosine")


@dataclass(frozen=True)
class FieldRule:
    """Named scalar field rule

    Attributes:
        name: one of constant, linear, sine, bump, random, values
        params: keyword parameters of the rule
    """

    name: str
    params: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class ExponentRule:
    """Named exponent rule

    Attributes:
        name: one of constant, linear, random, values
        params: keyword parameters of the rule
    """

    name: str
    params: dict[str, Any] = field(default_factory=dict)


def bump_profile(shape: str, u: np.ndarray) -> np.ndarray:
    """Bump shapes supported on [-1, 1]

    smooth:   (1 - u^2)^3   (twice continuously differentiable)
    triangle: 1 - |u|       (Lipschitz)
    cosine:   (1 + cos(pi u)) / 2
    """
    u = np.asarray(u, dtype=float)
    inside = np.abs(u) < 1.0

    if shape == "smooth":
        values = (1.0 - u**2) ** 3
    elif shape == "triangle":
        values = 1.0 - np.abs(u)
    elif shape == "cosine":
        values = 0.5 * (1.0 + np.cos(np.pi * u))
    else:
        raise FieldError(f"unknown bump shape '{shape}'", "bump_profile")

    return np.where(inside, values, 0.0)


def _bump_derivative(shape: str, u: float) -> float:
    """Derivative of the bump profile in u"""
    if abs(u) >= 1.0:
        return 0.0
    if shape == "smooth":
        return -6.0 * u * (1.0 - u * u) ** 2
    if shape == "triangle":
        return -float(np.sign(u))
    return -0.5 * np.pi * np.sin(np.pi * u)


def bump_gradient_energy(
    shape: str = "smooth", p: float = 2.0, width: float = 1.0, amplitude: float = 1.0
) -> float:
    """Integral of |f'|^p over R for f(x) = amplitude * b(x / width)

    For the smooth shape with p = 2 this is 9216 amplitude^2 / (3465 width).
    """
    if shape not in BUMP_SHAPES:
        raise FieldError(f"unknown bump shape '{shape}'", "bump_gradient_energy")
    integral, _ = quad(
        lambda u: abs(_bump_derivative(shape, u)) ** p, -1.0, 1.0, points=[0.0], limit=200
    )
    return float(abs(amplitude) ** p * width ** (1.0 - p) * integral)


def rule_number(params: dict[str, Any], key: str, default: float, operation: str) -> float:
    """Numeric rule parameter; FieldError when it is not a number"""
    value = params.get(key, default)
    if not isinstance(value, bool):
        try:
            return float(value)
        except (TypeError, ValueError):
            pass
    raise FieldError(f"parameter '{key}' must be a number, got {value!r}", operation)


def _axis(space: MetricMeasureSpace, params: dict[str, Any]) -> np.ndarray:
    """Coordinate column the rule depends on"""
    if space.coords is None:
        raise FieldError("field rule needs point coordinates", "evaluate_field")
    axis = params.get("axis", 0)
    if isinstance(axis, bool) or not isinstance(axis, int):
        raise FieldError(f"axis must be an integer, got {axis!r}", "evaluate_field")
    if not 0 <= axis < space.coords.shape[1]:
        raise FieldError(f"axis {axis} out of range", "evaluate_field")
    return space.coords[:, axis]


def evaluate_field(
    space: MetricMeasureSpace, rule: FieldRule, rng: Optional[np.random.Generator] = None
) -> np.ndarray:
    """Values of a field rule at every point of a space

    Args:
        space: space to evaluate on
        rule: the field rule
        rng: generator for the random rule (required for it)

    Raises FieldError for unknown rules, missing inputs, non-numeric
    parameters or non-finite values.
    """
    params = rule.params
    op = "evaluate_field"

    if rule.name == "constant":
        values = np.full(space.n_points, rule_number(params, "value", 1.0, op))

    elif rule.name == "values":
        values = params.get("values", [])

    elif rule.name == "random":
        if rng is None:
            raise FieldError("random field needs a seeded generator", op)
        low = rule_number(params, "low", 0.0, op)
        high = rule_number(params, "high", 1.0, op)
        values = rng.uniform(low, high, size=space.n_points)

    elif rule.name == "linear":
        x = _axis(space, params)
        values = rule_number(params, "slope", 1.0, op) * x + rule_number(params, "offset", 0.0, op)

    elif rule.name == "sine":
        x = _axis(space, params)
        amplitude = rule_number(params, "amplitude", 1.0, op)
        frequency = rule_number(params, "frequency", 1.0, op)
        values = amplitude * np.sin(2.0 * np.pi * frequency * x)

    elif rule.name == "bump":
        x = _axis(space, params)
        center = rule_number(params, "center", 0.5, op)
        width = rule_number(params, "width", 0.25, op)
        amplitude = rule_number(params, "amplitude", 1.0, op)
        if width <= 0.0:
            raise FieldError(f"bump width must be positive, got {width}", op)
        shape = str(params.get("shape", "smooth"))
        values = amplitude * bump_profile(shape, (x - center) / width)

    else:
        raise FieldError(f"unknown field rule '{rule.name}'", op)

    return check_field(space, values, op)


def evaluate_exponents(
    space: MetricMeasureSpace,
    rule: ExponentRule,
    rng: Optional[np.random.Generator] = None,
) -> np.ndarray:
    """Per-point exponents p_i of an exponent rule

    constant: p
    linear:   p0 + slope * x
    random:   uniform on [low, high), seeded
    values:   inline array
    """
    params = rule.params
    op = "evaluate_exponents"

    if rule.name == "constant":
        values = np.full(space.n_points, rule_number(params, "p", 2.0, op))

    elif rule.name == "values":
        values = params.get("values", [])

    elif rule.name == "random":
        if rng is None:
            raise FieldError("random exponents need a seeded generator", op)
        low = rule_number(params, "low", 1.5, op)
        high = rule_number(params, "high", 3.0, op)
        values = rng.uniform(low, high, size=space.n_points)

    elif rule.name == "linear":
        x = _axis(space, params)
        values = rule_number(params, "p0", 2.0, op) + rule_number(params, "slope", 1.0, op) * x

    else:
        raise FieldError(f"unknown exponent rule '{rule.name}'", op)

    return check_field(space, values, op)


def check_field(space: MetricMeasureSpace, values: Any, operation: str) -> np.ndarray:
    """Validate a field against its space

    Returns the values as a float array.
    Raises FieldError on non-numeric values, a length mismatch or non-finite values.
    """
    try:
        values = np.asarray(values, dtype=float)
    except (TypeError, ValueError):
        raise FieldError("field values must be numbers", operation) from None
    if values.ndim != 1 or values.shape[0] != space.n_points:
        raise FieldError(
            f"field has {values.size} values for {space.n_points} points", operation
        )
    if not np.all(np.isfinite(values)):
        raise FieldError("field values must be finite", operation)
    return values
