"""Command-line front end.

Exit codes: 0 success, 2 user/input error, 3 numerical failure.  All
numeric output is printed with 12 significant digits and all files are
written atomically.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .balancing import balance
from .balparam import CENSUS_KINDS, param_census
from .errors import BalredError, Inconclusive, SingularSystem, StepFailure
from .mbam import (
    GeodesicOptions,
    export_classification_json,
    export_trace_csv,
    run_geodesic,
)
from .models import (
    export_sample_csv,
    mmr_model,
    nearest_on_family,
    response_point,
    sample_manifold,
    two_exp_model,
    two_state_freq_model,
)
from .reduction import (
    balanced_truncate,
    bspa,
    error_system,
    interpolated_reduce,
)
from .statespace import StateSpace, atomic_write_text, random_stable_system
from .transfer import hinf_norm

USER_ERROR = 2
NUMERICAL_ERROR = 3


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _floats(text: str) -> np.ndarray:
    try:
        return np.array([float(tok) for tok in text.split(",") if tok.strip() != ""])
    except ValueError as exc:
        raise BalredError(f"expected comma-separated numbers, got {text!r}") from exc


def _axis(spec: str) -> np.ndarray:
    """Parse lo:hi:num[:log] into a sample axis."""
    parts = spec.split(":")
    if len(parts) not in (3, 4):
        raise BalredError(f"grid axis must be lo:hi:num[:log], got {spec!r}")
    lo, hi, num = float(parts[0]), float(parts[1]), int(parts[2])
    if len(parts) == 4 and parts[3] == "log":
        return np.geomspace(lo, hi, num)
    return np.linspace(lo, hi, num)


def _write_json(path: str, payload: dict) -> None:
    atomic_write_text(path, json.dumps(payload, indent=2) + "\n")


def cmd_balance(args) -> int:
    sys_in = StateSpace.load(args.input)
    bal = balance(sys_in)
    print("hsv: " + " ".join(_fmt(v) for v in bal.hsv))
    if args.output:
        payload = bal.sys.to_dict()
        payload["hsv"] = bal.hsv.tolist()
        payload["T"] = bal.T.tolist()
        payload["convention"] = "balanced = (T^-1 A T, T^-1 B, C T, D) of the input"
        _write_json(args.output, payload)
    return 0


def cmd_reduce(args) -> int:
    sys_in = StateSpace.load(args.input)
    bal = balance(sys_in)
    method = args.method.lower()
    if method == "bt":
        result = balanced_truncate(bal, args.k)
    elif method == "bspa":
        result = bspa(bal, args.k)
    elif method == "interp":
        if args.eta is None:
            raise BalredError("--method interp requires --eta")
        result = interpolated_reduce(bal, args.k, _floats(args.eta))
    else:
        raise BalredError(f"unknown method {args.method!r}")
    payload = result.to_dict()
    if args.verify:
        actual, _ = hinf_norm(error_system(sys_in, result.reduced))
        payload["achieved_error"] = actual
        print(
            f"hinf error: {_fmt(actual)}  bound: {_fmt(result.a_priori_bound)}  "
            f"satisfied: {actual <= result.a_priori_bound * (1 + 1e-4) + 1e-12}"
        )
    print(f"reduced order: {result.reduced.n}  bound: {_fmt(result.a_priori_bound)}")
    if args.output:
        _write_json(args.output, payload)
    return 0


def _builtin_model(args):
    name = args.model
    if name == "mmr":
        return mmr_model(args.x0, _floats(args.times))
    if name == "two-exp":
        return two_exp_model(_floats(args.x0_vec), _floats(args.times))
    if name == "two-state":
        return two_state_freq_model(
            args.theta1, args.r1, frequencies=_floats(args.frequencies)
        )
    raise BalredError(f"unknown model {name!r}; expected mmr, two-exp, or two-state")


def cmd_geodesic(args) -> int:
    model = _builtin_model(args)
    p0 = _floats(args.p0)
    if p0.shape[0] != model.n_params:
        raise BalredError(f"--p0 must have {model.n_params} entries")
    opts = GeodesicOptions(tau_max=args.tau_max, direction=args.direction)
    trace = run_geodesic(model, p0, opts)
    export_trace_csv(trace, args.output)
    sidecar = args.output.rsplit(".", 1)[0] + ".classification.json"
    payload = export_classification_json(trace, sidecar)
    print(f"termination: {trace.termination}")
    if payload.get("classification"):
        print("classification: " + " ".join(payload["classification"]["tags"]))
    return 0


def cmd_sample(args) -> int:
    model = _builtin_model(args)
    axes = [_axis(spec) for spec in args.grid.split(",")]
    sample = sample_manifold(model, axes)
    export_sample_csv(sample, args.output)
    print(f"sampled {sample.param_grid.shape[0]} points ({len(sample.failures)} failures)")
    return 0


def cmd_nearest(args) -> int:
    sys_in = StateSpace.load(args.input)
    bal = balance(sys_in)
    freqs = _floats(args.frequencies)
    target = response_point(sys_in, freqs)
    result = nearest_on_family(target, bal, k=1, frequencies=freqs)
    print(
        f"eta*: {_fmt(result.eta_star)}  distance: {_fmt(result.distance)}  "
        f"bt: {_fmt(result.bt_distance)}  bspa: {_fmt(result.bspa_distance)}"
    )
    if args.output:
        _write_json(args.output, result.to_dict())
    return 0


def cmd_census(args) -> int:
    census = param_census(args.kind, args.N, args.m, args.p)
    print(
        f"identifiable: {census.identifiable}  structural: {census.structural}  "
        f"conditionally_identifiable: {census.conditionally_identifiable}  "
        f"total: {census.total}"
    )
    return 0


def cmd_hinf(args) -> int:
    sys_in = StateSpace.load(args.input)
    norm, freq = hinf_norm(sys_in)
    print(f"{_fmt(norm)} @ {_fmt(freq)} rad/s")
    return 0


def cmd_random(args) -> int:
    rng = np.random.default_rng(args.seed)
    sys_out = random_stable_system(args.n, args.m, args.p, rng)
    sys_out.save(args.output)
    print(f"wrote stable {args.n}-state system to {args.output}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="balred",
        description="Balanced model reduction and model-manifold geodesics for LTI systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("balance", help="balance a state-space JSON file")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_balance)

    p = sub.add_parser("reduce", help="balanced truncation / BSPA / interpolated reduction")
    p.add_argument("input")
    p.add_argument("--method", required=True, choices=["bt", "bspa", "interp"])
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--eta", help="comma-separated knobs for --method interp")
    p.add_argument("--verify", action="store_true", help="also compute the achieved H-inf error")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_reduce)

    def add_model_args(p):
        p.add_argument("model", choices=["mmr", "two-exp", "two-state"])
        p.add_argument("--x0", type=float, default=1.0, help="mmr initial condition")
        p.add_argument("--x0-vec", default="1,1", help="two-exp initial condition")
        p.add_argument("--times", default="0.3,1.0,3.0")
        p.add_argument("--frequencies", default="0.01,1,100")
        p.add_argument("--theta1", type=float, default=1.0)
        p.add_argument("--r1", type=float, default=1.0)

    p = sub.add_parser("geodesic", help="run an MBAM geodesic on a built-in model")
    add_model_args(p)
    p.add_argument("--p0", required=True, help="comma-separated start parameters")
    p.add_argument("--direction", type=int, default=1, choices=[1, -1])
    p.add_argument("--tau-max", type=float, default=25.0)
    p.add_argument("-o", "--output", required=True, help="trace CSV path")
    p.set_defaults(func=cmd_geodesic)

    p = sub.add_parser("sample", help="sample a model manifold onto a grid")
    add_model_args(p)
    p.add_argument("--grid", required=True, help="per-parameter axes lo:hi:num[:log],...")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("nearest", help="nearest point on the BT<->BSPA family to a system")
    p.add_argument("input")
    p.add_argument("--frequencies", default="0.01,1,100")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_nearest)

    p = sub.add_parser("census", help="parameter census for a model-class parameterization")
    p.add_argument("kind", choices=list(CENSUS_KINDS))
    p.add_argument("N", type=int)
    p.add_argument("m", type=int)
    p.add_argument("p", type=int)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("hinf", help="H-infinity norm of a state-space JSON file")
    p.add_argument("input")
    p.set_defaults(func=cmd_hinf)

    p = sub.add_parser("random", help="generate a seeded random stable system")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_random)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USER_ERROR if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (SingularSystem, StepFailure, Inconclusive) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return NUMERICAL_ERROR
    except (BalredError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USER_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
