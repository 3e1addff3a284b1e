"""Experiment configuration: parse and validate structured config text.

The config format is TOML with three tables.  [model] describes either a
finite-state generator (dense ``rates`` rows or sparse ``transitions``
triples with inferred diagonal) or a named scaled ``family``.  [task]
names the computation and carries its numeric parameters.  [output]
selects the artifact path and format.  A top-level ``seed`` (default 0)
drives every random choice a task makes.

Example::

    seed = 0

    [model]
    labels = ["a", "b"]
    rates = [[-2.0, 2.0], [1.0, -1.0]]

    [task]
    name = "resolvent"
    lam = 0.5
    h = [0.0, 0.6931471805599453]

    [output]
    path = "out.csv"
    format = "csv"
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

from .chains import validate_generator
from .ldp import build_density_family

TASK_NAMES = (
    "resolvent",
    "semigroup",
    "iterate",
    "variational-scan",
    "check-identities",
    "ldp-hamiltonian",
    "ldp-rates",
    "path-rate",
)

# numeric task parameters with sign requirements; anything unlisted is
# passed through untouched
_POSITIVE_KEYS = ("lam", "alpha", "beta", "mean")
_NONNEGATIVE_KEYS = ("t", "c_max", "s")
_POSITIVE_INT_KEYS = ("m", "n", "n_ref", "order")
_NONNEGATIVE_INT_KEYS = ("depth",)
_VECTOR_KEYS = ("h", "f", "phi", "times", "points", "interval", "lam_grid")


class ConfigError(ValueError):
    """Invalid configuration; the message starts with the offending field."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


def _require_table(data, key):
    value = data.get(key, {})
    if not isinstance(value, dict):
        raise ConfigError(key, f"expected a table, got {type(value).__name__}")
    return value


def _float_param(field, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(field, f"expected a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(field, f"must be finite, got {value}")
    return value


def _int_param(field, value):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(field, f"expected an integer, got {value!r}")
    return value


def _vector_param(field, value):
    if not isinstance(value, list) or not value:
        raise ConfigError(field, "expected a nonempty array of numbers")
    return np.asarray([_float_param(f"{field}[{i}]", v) for i, v in enumerate(value)])


def _validated_params(table):
    params = {}
    for key, value in table.items():
        if key == "name":
            continue
        field = f"task.{key}"
        if key in _POSITIVE_KEYS:
            v = _float_param(field, value)
            if v <= 0:
                raise ConfigError(field, f"must be > 0, got {v:g}")
            params[key] = v
        elif key in _NONNEGATIVE_KEYS:
            v = _float_param(field, value)
            if v < 0:
                raise ConfigError(field, f"must be >= 0, got {v:g}")
            params[key] = v
        elif key in _POSITIVE_INT_KEYS:
            v = _int_param(field, value)
            if v < 1:
                raise ConfigError(field, f"must be >= 1, got {v}")
            params[key] = v
        elif key in _NONNEGATIVE_INT_KEYS:
            v = _int_param(field, value)
            if v < 0:
                raise ConfigError(field, f"must be >= 0, got {v}")
            params[key] = v
        elif key in _VECTOR_KEYS:
            vec = _vector_param(field, value)
            if key == "lam_grid" and (vec <= 0).any():
                raise ConfigError(field, "all entries must be > 0")
            params[key] = vec
        else:
            params[key] = value
    return params


def _parse_model(table):
    """Return (generator, family); either side may be None."""
    if not table:
        return None, None
    if "family" in table:
        kind = table["family"]
        n_list = table.get("n_list", [8, 16, 32, 64])
        if not isinstance(n_list, list):
            raise ConfigError("model.n_list", "expected an array of integers")
        try:
            family = build_density_family(kind=kind, n_list=n_list)
        except (ValueError, TypeError) as exc:
            raise ConfigError("model.family", str(exc)) from exc
        return None, family
    labels = table.get("labels")
    if labels is not None and not isinstance(labels, list):
        raise ConfigError("model.labels", "expected an array")
    if "rates" in table:
        rows = table["rates"]
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise ConfigError("model.rates", "expected an array of equal-length rows")
        try:
            rates = np.asarray(rows, dtype=float)
        except ValueError as exc:
            raise ConfigError("model.rates", str(exc)) from exc
        if rates.ndim != 2:
            raise ConfigError("model.rates", "rows must have equal length")
        try:
            return validate_generator(rates, tuple(labels) if labels else None), None
        except ValueError as exc:
            raise ConfigError("model.rates", str(exc)) from exc
    if "transitions" in table:
        triples = table["transitions"]
        if not isinstance(triples, list) or not all(
            isinstance(tr, list) and len(tr) == 3 for tr in triples
        ):
            raise ConfigError("model.transitions", "expected an array of [from, to, rate] triples")
        if labels:
            size = len(labels)
            index = {lab: k for k, lab in enumerate(labels)}
        else:
            size = 1 + max(max(int(a), int(b)) for a, b, _ in triples)
            index = {k: k for k in range(size)}
        rates = np.zeros((size, size))
        for a, b, rate in triples:
            try:
                i, j = index[a], index[b]
            except KeyError as exc:
                raise ConfigError("model.transitions", f"unknown state {exc.args[0]!r}") from None
            if i == j:
                raise ConfigError("model.transitions", f"self-transition on state {a!r}")
            rates[i, j] += _float_param("model.transitions.rate", rate)
        np.fill_diagonal(rates, -rates.sum(axis=1))
        try:
            return validate_generator(rates, tuple(labels) if labels else None), None
        except ValueError as exc:
            raise ConfigError("model.transitions", str(exc)) from exc
    raise ConfigError("model", "needs one of: rates, transitions, family")


@dataclass
class ExperimentConfig:
    task: str
    generator: object
    family: object
    params: dict
    out_path: str
    out_format: str
    seed: int


def parse_config(text, task=None, out_path=None, seed=None):
    """Parse config text into an ExperimentConfig; CLI flags override fields."""
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError("config", f"not valid TOML ({exc})") from exc

    task_table = _require_table(data, "task")
    name = task if task is not None else task_table.get("name")
    if name is None:
        raise ConfigError("task.name", "missing (set it in the config or pass --task)")
    if name not in TASK_NAMES:
        raise ConfigError("task.name", f"unknown task {name!r}; choose from {', '.join(TASK_NAMES)}")

    generator, family = _parse_model(_require_table(data, "model"))
    params = _validated_params(task_table)

    output = _require_table(data, "output")
    path = out_path if out_path is not None else output.get("path")
    fmt = output.get("format", "json" if name == "check-identities" else "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError("output.format", f"expected 'csv' or 'json', got {fmt!r}")

    if seed is None:
        seed = data.get("seed", 0)
    seed = _int_param("seed", seed)

    return ExperimentConfig(name, generator, family, params, path, fmt, seed)


def load_config(path, task=None, out_path=None, seed=None):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc}") from exc
    return parse_config(text, task=task, out_path=out_path, seed=seed)
