"""Command-line front end.

Exit codes: 0 success, 1 simulation finished without reducing the error,
2 bad input, 3 internal invariant failure, 4 search budget exceeded,
5 infeasible configuration.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction

from .channel import c0_lower_profile, codebook_witness, confusability_graph, known_capacity, load_channel
from .coder import build_coder_estimator, simulate_disturbed
from .errors import (
    InfeasibleError,
    InputError,
    InsufficientMarginError,
    InvariantError,
    SearchBudgetExceeded,
)
from .estimation import feasibility_check, load_plant, necessity_witness
from .intervals import to_fraction
from .measures import (
    conditional_entropy0,
    family_from_json,
    hartley,
    klir_transmission,
    maximin_partitions,
    overlap_partition,
    partition_to_json,
    zero_info_uv,
)
from .uv import conditional_family, encode_value, ensemble_from_json, marginal_range, sorted_values, value_label

EXIT_USER, EXIT_INTERNAL, EXIT_BUDGET, EXIT_INFEASIBLE = 2, 3, 4, 5


def _sha256(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _encode_block(block) -> list:
    return [encode_value(v) for v in sorted_values(block)]


# ---------------------------------------------------------------- commands


def cmd_info(args) -> int:
    text = _read(args.file)
    doc = json.loads(text) if text.strip().startswith("{") else None
    inputs = {args.file: _sha256(args.file)}
    if isinstance(doc, dict) and "members" in doc:
        P = overlap_partition(family_from_json(text))
        report = json.loads(partition_to_json(P))
        report["inputs"] = inputs
        _emit(_dump(report), args.out)
        return 0
    if not args.x or not args.y:
        raise InputError("ensemble input needs --x and --y")
    E = ensemble_from_json(text)
    overlap, taxicab = maximin_partitions(E, args.x, args.y)
    report = {
        "x": args.x,
        "y": args.y,
        "Istar": overlap.bits,
        "overlap_blocks": [_encode_block(b) for b in overlap.blocks],
        "taxicab_blocks": [_encode_block(b) for b in taxicab.blocks],
        "provenance": {value_label(k): v for k, v in overlap.provenance.items()},
        "inputs": inputs,
    }
    if args.all_measures:
        report.update(
            H0_x=hartley(marginal_range(E, args.x)),
            H0_y=hartley(marginal_range(E, args.y)),
            H0_x_given_y=conditional_entropy0(conditional_family(E, args.x, args.y)),
            H0_y_given_x=conditional_entropy0(conditional_family(E, args.y, args.x)),
            # I0_yx: what observing y reveals about x; I0_xy the reverse
            I0_yx=zero_info_uv(E, args.x, args.y),
            I0_xy=zero_info_uv(E, args.y, args.x),
            T_klir=klir_transmission(E, args.x, args.y),
        )
    _emit(_dump(report), args.out)
    return 0


def _profile_rows(records) -> list:
    return [{"tau": r.tau, "alpha": r.alpha, "rate_bits": r.rate_bits} for r in records]


def _profile_report(records, C, args, partial=None) -> str:
    if args.format == "csv":
        lines = ["tau,alpha,rate_bits"] + [f"{r.tau},{r.alpha},{r.rate_bits!r}" for r in records]
        return "\n".join(lines) + "\n"
    doc = {
        "profile": _profile_rows(records),
        "best_rate_bits": max((r.rate_bits for r in records), default=None),
        "known_capacity_bits": known_capacity(C),
        "inputs": {args.channel: _sha256(args.channel)},
    }
    if args.witness:
        doc["codebooks"] = {str(r.tau): [encode_value(w) for w in r.witness] for r in records}
    if partial is not None:
        doc["partial"] = partial
    return _dump(doc)


def cmd_channel(args) -> int:
    C = load_channel(args.channel)
    if args.tmax < 1:
        raise InputError("--tmax must be >= 1")
    if args.graph_out:
        with open(args.graph_out, "w") as fh:
            fh.write(confusability_graph(C).to_adjacency_text())
    records: list = []
    try:
        c0_lower_profile(C, args.tmax, args.time_budget, on_record=records.append)
    except SearchBudgetExceeded as exc:
        partial = {"tau": len(records) + 1, "alpha_lower_bound": exc.best_size, "message": str(exc)}
        _emit(_profile_report(records, C, args, partial), args.out)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    if args.witness:
        for r in records:
            codebook_witness(C, r.tau)
    _emit(_profile_report(records, C, args), args.out)
    return 0


def cmd_estimate_check(args) -> int:
    plant = load_plant(args.plant)
    C = load_channel(args.channel)
    profile = c0_lower_profile(C, args.tmax, args.time_budget)
    verdict = feasibility_check(plant, args.rho, profile, known_capacity(C))
    doc = verdict.to_dict()
    doc["inputs"] = {args.plant: _sha256(args.plant), args.channel: _sha256(args.channel)}
    _emit(_dump(doc), args.out)
    return 0


def _parse_vector(text: str) -> list:
    return [to_fraction(v) for v in text.split(",")]


def cmd_estimate_run(args) -> int:
    plant = load_plant(args.plant)
    C = load_channel(args.channel)
    c = plant.c if args.noise is None else to_fraction(args.noise)
    coder = build_coder_estimator(plant, C, args.rho, args.tau_max, args.time_budget)
    trace = simulate_disturbed(
        coder,
        _parse_vector(args.x0),
        args.T,
        c=c,
        noise_policy=args.noise_policy,
        policy=args.policy,
        seed=args.seed,
    )
    _emit(trace.to_csv(), args.out)
    first, last = trace.exact_scaled_errors()[0], trace.exact_scaled_errors()[-1]
    return 0 if last < first or first == last == 0 else 1


def cmd_witness(args) -> int:
    eigs = []
    for item in args.eigs.split(","):
        item = item.strip()
        eigs.append(complex(item.replace("i", "j")) if ("j" in item or "i" in item) else to_fraction(item))
    W = necessity_witness(eigs, args.rho, args.eps, args.tau, args.l)
    doc = {"k": list(W.k), "count": W.count, "bound_bits": W.bound_bits, "eps": str(W.eps), "tau": W.tau}
    _emit(_dump(doc), args.out)
    return 0


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for randomized policies (default 0)")
    common.add_argument("--out", help="write the report here instead of stdout")

    ap = argparse.ArgumentParser(prog="uvinfo", description="Nonstochastic information theory toolkit.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", parents=[common], help="maximin information and related measures")
    p.add_argument("file", help="ensemble JSON (or a set-family JSON for a bare overlap partition)")
    p.add_argument("--x")
    p.add_argument("--y")
    p.add_argument("--all-measures", action="store_true")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("channel", parents=[common], help="zero-error capacity lower-bound profile")
    p.add_argument("channel")
    p.add_argument("--tmax", type=int, default=2)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--graph-out", help="write the confusability graph as an adjacency list")
    p.add_argument("--witness", action="store_true", help="include and verify maximum codebooks")
    p.add_argument("--time-budget", type=float, help="seconds per exact search")
    p.set_defaults(func=cmd_channel)

    p = sub.add_parser("estimate-check", parents=[common], help="feasibility verdict for a plant over a channel")
    p.add_argument("plant")
    p.add_argument("channel")
    p.add_argument("--rho", type=to_fraction, required=True)
    p.add_argument("--tmax", type=int, default=2)
    p.add_argument("--time-budget", type=float)
    p.set_defaults(func=cmd_estimate_check)

    p = sub.add_parser("estimate-run", parents=[common], help="simulate the constructed coder-estimator")
    p.add_argument("plant")
    p.add_argument("channel")
    p.add_argument("--rho", type=to_fraction, required=True)
    p.add_argument("--x0", required=True, help="initial state, comma separated")
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--policy", choices=("first", "adversarial", "uniform"), default="adversarial")
    p.add_argument("--noise", help="disturbance bound c (overrides the plant file)")
    p.add_argument("--noise-policy", choices=("zero", "adversarial", "uniform"), default="adversarial")
    p.add_argument("--tau-max", type=int, default=4)
    p.add_argument("--time-budget", type=float)
    p.set_defaults(func=cmd_estimate_run)

    p = sub.add_parser("witness", parents=[common], help="hypercuboid packing counts")
    p.add_argument("--eigs", required=True, help="comma-separated eigenvalues, e.g. 2,3 or 1+1j")
    p.add_argument("--rho", type=to_fraction, required=True)
    p.add_argument("--eps", type=to_fraction, required=True)
    p.add_argument("--tau", type=int, required=True)
    p.add_argument("--l", type=to_fraction, default=Fraction(1))
    p.set_defaults(func=cmd_witness)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_USER
    try:
        return args.func(args)
    except InvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except SearchBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InfeasibleError, InsufficientMarginError) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USER
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON: {exc}", file=sys.stderr)
        return EXIT_USER


if __name__ == "__main__":
    sys.exit(main())
