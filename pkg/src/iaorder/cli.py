"""Command-line entry point.

Subcommands: ``validate`` (certify the grouping plan of a config),
``sweep`` (SNR sweep CSV), ``cdf`` (tested-design CDF CSV) and ``design``
(single-realization transceiver dump as JSON).

Exit codes: 0 success, 2 configuration/allocation errors, 1 internal
errors. Errors are reported as one JSON line on stderr:
``{"error": "<kind>", "detail": "..."}``.
"""

import argparse
import json
import sys

from .allocation import allocate_ici
from .channels import (
    Ordering,
    SimulationParams,
    SystemConfig,
    channel_set_to_jsonable,
    generate_channels,
    validate_config,
    _matrix_to_jsonable,
    _round9,
)
from .design import design_for_ordering
from .errors import (
    AllocationInfeasibleError,
    ConfigInvalidError,
    IAOrderError,
)
from .harness import ExperimentSpec, gain_db, run_cdf, run_sweep
from .search import alternating_search, exhaustive_search

_CONFIG_EXIT = 2
_INTERNAL_EXIT = 1


def _fail(kind: str, detail: str, code: int) -> int:
    print(json.dumps({"error": kind, "detail": detail}), file=sys.stderr)
    return code


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigInvalidError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigInvalidError(f"config file {path} is not valid JSON: {exc}") from exc


def _system_config(data: dict) -> SystemConfig:
    try:
        cfg = SystemConfig(
            cells=data["cells"],
            users_per_cell=data["users_per_cell"],
            streams=data["streams"],
            bs_antennas=data["bs_antennas"],
            ms_antennas=data["ms_antennas"],
        )
    except KeyError as exc:
        raise ConfigInvalidError(f"config file is missing key {exc.args[0]!r}") from exc
    return validate_config(cfg)


def _experiment_spec(data: dict, snr_override=None) -> ExperimentSpec:
    cfg = _system_config(data)
    snr = snr_override if snr_override is not None else data.get("snr_db")
    if not snr:
        raise ConfigInvalidError("config/flags must provide a nonempty snr_db list")
    return ExperimentSpec(
        config=cfg,
        snr_db=tuple(float(s) for s in snr),
        realizations=int(data.get("realizations", 200)),
        base_seed=int(data.get("base_seed", 1)),
        criterion=data.get("criterion", "max-sum"),
        algorithms=tuple(data.get("algorithms", ["natural", "alternating", "exhaustive"])),
        theta_cap_multiplier=int(data.get("theta_cap_multiplier", 10)),
    )


def _parse_snr_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip() != "")
    except ValueError as exc:
        raise ConfigInvalidError(f"--snr-db must be a comma-separated float list: {text!r}") from exc


def _cmd_validate(args) -> int:
    cfg = _system_config(_load_json(args.config))
    plan = allocate_ici(cfg)
    print(f"configuration OK: cells={cfg.cells} users={list(cfg.K)} streams={cfg.d}")
    print(f"effective directions per cell: {list(plan.s_per_cell)}")
    for (j, i) in sorted(plan.t_counts):
        sizes = [len(g) for g in plan.groups[(j, i)]]
        print(
            f"  cell {j + 1} <- BS {i + 1}: {plan.t_counts[(j, i)]} direction(s), "
            f"group sizes {sizes}"
        )
    for i in range(cfg.cells):
        load = plan.source_load(i)
        print(
            f"  BS {i + 1}: reserves {load} direction(s); antenna budget "
            f"{cfg.M[i]} >= {cfg.d * (cfg.K[i] + load)} required"
        )
    return 0


def _cmd_sweep(args) -> int:
    data = _load_json(args.config)
    spec = _experiment_spec(
        data, snr_override=_parse_snr_list(args.snr_db) if args.snr_db else None
    )
    result = run_sweep(spec)
    result.write_csv(args.out)
    print(f"wrote {len(result.rows)} rows to {args.out}")
    if args.metric_level is not None:
        base = "natural"
        for algo in spec.algorithms:
            if algo == base:
                continue
            try:
                g = gain_db(result, args.metric_level, baseline=base, improved=algo)
                print(
                    f"gain of {algo} over {base} at metric level "
                    f"{args.metric_level:g}: {g:.3f} dB"
                )
            except ValueError as exc:
                print(f"gain of {algo} over {base}: not readable ({exc})")
    return 0


def _cmd_cdf(args) -> int:
    data = _load_json(args.config)
    spec = _experiment_spec(
        data, snr_override=_parse_snr_list(args.snr_db) if args.snr_db else None
    )
    result = run_cdf(spec)
    result.write_csv(args.out)
    print(f"wrote {len(result.rows)} rows to {args.out}")
    return 0


def _design_jsonable(cfg, plan, ordering, design, evaluation, snr_db) -> dict:
    u = {
        f"U_{k + 1}_{j + 1}": _matrix_to_jsonable(design.U[j][k])
        for j in range(cfg.cells)
        for k in range(cfg.K[j])
    }
    v = {
        f"V_{k + 1}_{i + 1}": _matrix_to_jsonable(design.V[i][k])
        for i in range(cfg.cells)
        for k in range(cfg.K[i])
    }
    q = {
        f"Q_{j + 1}_{i + 1}_{s + 1}": _matrix_to_jsonable(design.Q[(j, i)][s])
        for (j, i) in sorted(design.Q)
        for s in range(design.Q[(j, i)].shape[0])
    }
    w = {
        f"W_{i + 1}_{k + 1}_{j + 1}": _matrix_to_jsonable(design.W[(i, j)][k])
        for (i, j) in sorted(design.W)
        for k in range(cfg.K[j])
    }
    rates = {
        f"R_{k + 1}_{i + 1}": _round9(evaluation.rate_of(k, i))
        for i in range(cfg.cells)
        for k in range(cfg.K[i])
    }
    inter = {
        f"I_{k + 1}_{i + 1}": [_round9(x) for x in evaluation.interference[i][k]]
        for i in range(cfg.cells)
        for k in range(cfg.K[i])
    }
    return {
        "snr_db": _round9(snr_db),
        "ordering": [[k + 1 for k in perm] for perm in ordering.perms],
        "plan": plan.to_jsonable(),
        "transceiver": {"U": u, "V": v, "Q": q, "W": w},
        "evaluation": {
            "rates": rates,
            "interference": inter,
            "leakage": _round9(evaluation.leakage),
        },
    }


def _cmd_design(args) -> int:
    data = _load_json(args.config)
    cfg = _system_config(data)
    plan = allocate_ici(cfg)
    snr_list = (
        _parse_snr_list(args.snr_db)
        if args.snr_db
        else tuple(float(s) for s in data.get("snr_db", [20.0]))
    )
    params = SimulationParams(snr_list[0])
    ch = generate_channels(cfg, args.seed)
    if args.ordering == "natural":
        ordering = Ordering.identity(cfg.users_per_cell)
    elif args.ordering == "alternating":
        cap = int(data.get("theta_cap_multiplier", 10)) * cfg.cells
        ordering = alternating_search(
            ch, plan, data.get("criterion", "max-sum"), params, theta_cap=cap
        ).ordering
    else:
        ordering = exhaustive_search(
            ch, plan, data.get("criterion", "max-sum"), params
        ).ordering
    design, evaluation = design_for_ordering(ch, plan, ordering, params)
    dump = {
        "config": {
            "cells": cfg.cells,
            "users_per_cell": list(cfg.users_per_cell),
            "streams": cfg.streams,
            "bs_antennas": list(cfg.bs_antennas),
            "ms_antennas": list(cfg.ms_antennas),
        },
        "seed": args.seed,
        "channels": channel_set_to_jsonable(ch),
    }
    dump.update(_design_jsonable(cfg, plan, ordering, design, evaluation, snr_list[0]))
    with open(args.dump, "w", newline="\n") as fh:
        json.dump(dump, fh, indent=1)
        fh.write("\n")
    print(
        f"wrote design for seed {args.seed} ({args.ordering} ordering, "
        f"{snr_list[0]:g} dB) to {args.dump}; leakage {evaluation.leakage:.3e}"
    )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="iaorder",
        description="Aligned multi-cell MIMO transceivers and user-ordering search",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="certify the grouping plan of a config")
    p.add_argument("--config", required=True, help="JSON config path")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("sweep", help="run an SNR sweep and write CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--snr-db", help="comma-separated SNR list overriding the config")
    p.add_argument(
        "--metric-level",
        type=float,
        help="metric level at which to report dB gains over the natural ordering",
    )
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("cdf", help="tested-design CDF of the alternating search")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--snr-db", help="comma-separated SNR list overriding the config")
    p.set_defaults(func=_cmd_cdf)

    p = sub.add_parser("design", help="dump one realization's transceiver as JSON")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", required=True, type=int, help="realization seed")
    p.add_argument(
        "--ordering",
        default="natural",
        choices=("natural", "alternating", "exhaustive"),
        help="how to choose the user ordering",
    )
    p.add_argument("--dump", required=True, help="output JSON path")
    p.add_argument("--snr-db", help="comma-separated SNR list; the first point is used")
    p.set_defaults(func=_cmd_design)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigInvalidError, AllocationInfeasibleError) as exc:
        return _fail(exc.kind, str(exc), _CONFIG_EXIT)
    except IAOrderError as exc:
        return _fail(exc.kind, str(exc), _INTERNAL_EXIT)
    except Exception as exc:  # pragma: no cover - defensive
        return _fail("internal-error", f"{type(exc).__name__}: {exc}", _INTERNAL_EXIT)


if __name__ == "__main__":
    sys.exit(main())
