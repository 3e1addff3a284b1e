"""Batch front door: run one named computation from a config file.

Usage::

    markovexp --config experiment.toml [--task NAME] [--out PATH] [--seed N]

--task, --out and --seed override the corresponding config fields.  Every
task writes one artifact, CSV by default (17 significant digits, '.'
decimal separator), to --out or stdout.  check-identities needs no config
at all and defaults to a JSON report.

Exit codes: 0 success, 1 identity violation beyond tolerance, 2 config
parse or validation error, 3 numerical failure.

CSV headers by task:

    resolvent, semigroup, iterate   state,value
    variational-scan                lam,variational,resolvent
    ldp-hamiltonian                 n,error
    ldp-rates                       n,t,x,y,value
    path-rate                       depth,value
    check-identities (csv format)   name,residual,tolerance,passed
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys

import numpy as np

from .config import TASK_NAMES, ConfigError, load_config, parse_config
from .identities import run_battery
from .ldp import (
    PathSpec,
    build_density_family,
    check_hamiltonian_convergence,
    path_rate,
    rate_rows,
)
from .resolvent import ConvergenceError, fixed_point_resolvent, resolvent_iterate_semigroup, variational_value
from .semigroups import nonlinear_semigroup

EXIT_OK = 0
EXIT_IDENTITY = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

_OBSERVABLES = {
    "x": lambda x: x,
    "x2": lambda x: x * x,
    "sin2pix": lambda x: math.sin(2 * math.pi * x),
}


def _fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    return f"{float(value):.17g}"


def _render_csv(header, rows):
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def _emit(path, text):
    if path:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _need(cfg, key):
    if key not in cfg.params:
        raise ConfigError(f"task.{key}", f"required for task {cfg.task}")
    return cfg.params[key]


def _need_generator(cfg):
    if cfg.generator is None:
        raise ConfigError("model", f"task {cfg.task} needs a generator (rates or transitions)")
    return cfg.generator


def _need_vector(cfg, key, n):
    vec = np.asarray(_need(cfg, key), dtype=float)
    if vec.shape != (n,):
        raise ConfigError(f"task.{key}", f"expected {n} entries, got {vec.size}")
    return vec


def _family(cfg):
    # the birth-death ladder on {8,16,32,64} ships built in
    return cfg.family if cfg.family is not None else build_density_family()


def _task_resolvent(cfg):
    gen = _need_generator(cfg)
    sol = fixed_point_resolvent(gen, _need(cfg, "lam"), _need_vector(cfg, "h", gen.n))
    return ["state", "value"], list(zip(gen.space.labels, sol.f))


def _task_semigroup(cfg):
    gen = _need_generator(cfg)
    values = nonlinear_semigroup(gen, _need(cfg, "t"), _need_vector(cfg, "f", gen.n))
    return ["state", "value"], list(zip(gen.space.labels, values))


def _task_iterate(cfg):
    gen = _need_generator(cfg)
    values = resolvent_iterate_semigroup(
        gen, _need(cfg, "t"), _need(cfg, "m"), _need_vector(cfg, "h", gen.n))
    return ["state", "value"], list(zip(gen.space.labels, values))


def _task_variational_scan(cfg):
    gen = _need_generator(cfg)
    h = _need_vector(cfg, "h", gen.n)
    phi = _need_vector(cfg, "phi", gen.n)
    x = gen.space.index(_need(cfg, "x"))
    if "lam_grid" in cfg.params:
        lams = [float(v) for v in cfg.params["lam_grid"]]
    else:
        lams = [_need(cfg, "lam")]
    rows = []
    for lam in lams:
        cap = fixed_point_resolvent(gen, lam, h).f[x]
        rows.append((lam, variational_value(gen, lam, h, phi, x), cap))
    return ["lam", "variational", "resolvent"], rows


def _task_ldp_hamiltonian(cfg):
    fam = _family(cfg)
    name = cfg.params.get("observable", "sin2pix")
    if name not in _OBSERVABLES:
        raise ConfigError("task.observable", f"choose from {', '.join(sorted(_OBSERVABLES))}")
    interval = cfg.params.get("interval")
    interval = (0.1, 0.9) if interval is None else tuple(float(v) for v in interval)
    errors = check_hamiltonian_convergence(fam, _OBSERVABLES[name], interval)
    return ["n", "error"], sorted(errors.items())


def _task_ldp_rates(cfg):
    fam = _family(cfg)
    if "times" in cfg.params:
        ts = [float(t) for t in cfg.params["times"]]
    else:
        ts = [_need(cfg, "t")]
    pair = (float(_need(cfg, "x")), float(_need(cfg, "y")))
    return ["n", "t", "x", "y", "value"], rate_rows(fam, ts, [pair])


def _task_path_rate(cfg):
    fam = _family(cfg)
    cost = float(cfg.params.get("initial_cost", 0.0))
    path = PathSpec(tuple(_need(cfg, "times")), tuple(_need(cfg, "points")), lambda _: cost)
    depth = int(cfg.params.get("depth", 0))
    _, per_depth = path_rate(fam, _need(cfg, "n_ref"), path, refinement_depth=depth)
    return ["depth", "value"], list(enumerate(per_depth))


_TASKS = {
    "resolvent": _task_resolvent,
    "semigroup": _task_semigroup,
    "iterate": _task_iterate,
    "variational-scan": _task_variational_scan,
    "ldp-hamiltonian": _task_ldp_hamiltonian,
    "ldp-rates": _task_ldp_rates,
    "path-rate": _task_path_rate,
}


def _render_identity_report(results, cfg):
    if cfg.out_format == "csv":
        header = ["name", "residual", "tolerance", "passed"]
        rows = [(r.name, r.residual, r.tolerance, r.passed) for r in results]
        return _render_csv(header, rows)
    payload = {
        "seed": cfg.seed,
        "all_passed": all(r.passed for r in results),
        "checks": [
            {"name": r.name, "residual": r.residual,
             "tolerance": r.tolerance, "passed": r.passed}
            for r in results
        ],
    }
    return json.dumps(payload, indent=2) + "\n"


def run(cfg):
    """Execute one parsed config; returns the process exit code."""
    try:
        if cfg.task == "check-identities":
            results = run_battery(cfg.seed)
            _emit(cfg.out_path, _render_identity_report(results, cfg))
            if not all(r.passed for r in results):
                failed = ", ".join(r.name for r in results if not r.passed)
                print(f"identity violation: {failed}", file=sys.stderr)
                return EXIT_IDENTITY
            return EXIT_OK
        header, rows = _TASKS[cfg.task](cfg)
        _emit(cfg.out_path, _render_csv(header, rows))
        return EXIT_OK
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OverflowError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def build_parser():
    parser = argparse.ArgumentParser(
        prog="markovexp",
        description="Finite-state exponential semigroup and rate-function computations.")
    parser.add_argument("--config", help="path to a TOML experiment file")
    parser.add_argument("--task", choices=TASK_NAMES,
                        help="computation to run (overrides the config)")
    parser.add_argument("--out", help="artifact path (default: stdout)")
    parser.add_argument("--seed", type=int, help="random seed (overrides the config)")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.config:
            cfg = load_config(args.config, task=args.task, out_path=args.out, seed=args.seed)
        else:
            cfg = parse_config("", task=args.task, out_path=args.out, seed=args.seed)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
