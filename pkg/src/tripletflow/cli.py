"""Batch entry points: the Robin demonstration, verification suites, and
family-index computation from fixture files.

Output is reproducible byte for byte: JSON is serialized with sorted keys,
CSV uses '.' decimals, '\\n' newlines and 17 significant digits, and all
randomness comes from the seeded generator named in the README.

Exit codes: 0 success, 1 verification failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import famindex as fi
from . import sturm
from . import verify as vf
from .relspace import is_self_adjoint, relation_from_json

__all__ = ["RunConfig", "main", "cmd_rellich", "cmd_verify", "cmd_index"]

_ENV_TOL = "TRIPLETFLOW_TOL"


@dataclass
class RunConfig:
    command: str
    samples: int = 720
    lambda_max: float = 400.0
    tol: float = 1e-9
    seed: int = 42
    trials: int = 50
    out: str = "."
    format: str = "json"
    suite: str = "all"
    family: str = "rellich"

    def __post_init__(self):
        if self.samples < 8:
            raise ValueError("samples must be at least 8")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.format not in ("json", "csv"):
            raise ValueError("format must be json or csv")


def _fmt(x):
    return "%.17g" % float(x)


def _json_bytes(obj):
    return (json.dumps(obj, sort_keys=True, indent=2) + "\n").encode()


def _write(path, data):
    with open(path, "wb") as handle:
        handle.write(data)


def _report_bytes(obj, fmt):
    if fmt == "json":
        return _json_bytes(obj)
    lines = ["key,value"]

    def flatten(path, value):
        if isinstance(value, dict):
            for key in sorted(value):
                flatten(f"{path}.{key}" if path else str(key), value[key])
        elif isinstance(value, (list, tuple)):
            for i, item in enumerate(value):
                flatten(f"{path}[{i}]", item)
        elif isinstance(value, float):
            lines.append(f"{path},{_fmt(value)}")
        else:
            lines.append(f"{path},{value}")

    flatten("", obj)
    return ("\n".join(lines) + "\n").encode()


def cmd_rellich(config):
    """Run the Robin family demonstration: branch CSV plus index report."""
    report = fi.verify_index_theorem(samples=config.samples,
                                     lambda_max=config.lambda_max)
    thetas = np.linspace(0.0, 2.0 * math.pi, config.samples, endpoint=False)
    kappas = [sturm.kappa_of_theta(t) for t in thetas]
    eigs = [sturm.secular_eigenvalues(k, lambda_max=config.lambda_max)
            for k in kappas]
    rows = fi.branch_table(thetas, kappas, eigs)
    os.makedirs(config.out, exist_ok=True)
    csv_lines = ["theta,kappa,branch_id,lambda"]
    csv_lines.extend(f"{_fmt(t)},{_fmt(k)},{b},{_fmt(lam)}"
                     for t, k, b, lam in rows)
    _write(os.path.join(config.out, "rellich_branches.csv"),
           ("\n".join(csv_lines) + "\n").encode())
    _write(os.path.join(config.out, "rellich_report.json"),
           _json_bytes(report.to_dict()))
    ok = report.consistent and abs(report.winding) == 1
    print(report.to_json())
    return 0 if ok else 1


def cmd_verify(config):
    """Run a verification suite and emit per-check residuals."""
    records = vf.run_suite(config.suite, trials=config.trials,
                           seed=config.seed, tol=None)
    payload = {"suite": config.suite, "seed": config.seed,
               "trials": config.trials, "checks": records,
               "all_pass": vf.all_pass(records)}
    data = _report_bytes(payload, config.format)
    if config.out not in (".", ""):
        os.makedirs(config.out, exist_ok=True)
        name = f"verify_{config.suite}.{config.format}"
        _write(os.path.join(config.out, name), data)
    sys.stdout.write(data.decode())
    return 0 if payload["all_pass"] else 1


def _load_family(spec_path):
    if spec_path == "rellich":
        loop = fi.rellich_boundary_family()
        return loop
    with open(spec_path, "r", encoding="utf-8") as handle:
        obj = json.load(handle)
    thetas = []
    rels = []
    for sample in obj["samples"]:
        thetas.append(float(sample["theta"]))
        rels.append(relation_from_json(sample["relation"]))
    return fi.FamilyLoop(thetas, rels)


def cmd_index(config):
    """Family index of a loop of self-adjoint relations from a fixture file."""
    loop = _load_family(config.family)
    for theta, rel in zip(loop.thetas, loop.payloads):
        if not is_self_adjoint(rel, tol=max(config.tol, 1e-8)):
            raise ValueError(f"sample at theta={theta} is not a self-adjoint "
                             "relation")
    winding = fi.relation_family_index(loop)
    report = fi.IndexReport(spectral_flow=None, winding=winding,
                            consistent=True)
    data = _report_bytes(report.to_dict(), config.format)
    if config.out not in (".", ""):
        os.makedirs(config.out, exist_ok=True)
        _write(os.path.join(config.out, f"index_report.{config.format}"),
               data)
    sys.stdout.write(data.decode())
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="tripletflow",
        description="Boundary-triplet verification suites and circle-family "
                    "indices on exact models.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--samples", type=int, default=720)
        p.add_argument("--lambda-max", type=float, default=400.0,
                       dest="lambda_max")
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--trials", type=int, default=50)
        p.add_argument("--out", type=str, default=".")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p_rellich = sub.add_parser(
        "rellich", help="spectral flow and Cayley winding of the Robin loop")
    common(p_rellich)
    p_verify = sub.add_parser("verify", help="run a verification suite")
    common(p_verify)
    p_verify.add_argument("--suite", default="all",
                          choices=sorted(vf.SUITES) + ["all"])
    p_index = sub.add_parser(
        "index", help="family index from a loop fixture file")
    common(p_index)
    p_index.add_argument("--family", default="rellich",
                         help="fixture path or the built-in name 'rellich'")
    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    tol = args.tol
    if tol is None:
        tol = float(os.environ.get(_ENV_TOL, 1e-9))
    try:
        config = RunConfig(
            command=args.command, samples=args.samples,
            lambda_max=args.lambda_max, tol=tol, seed=args.seed,
            trials=args.trials, out=args.out, format=args.format,
            suite=getattr(args, "suite", "all"),
            family=getattr(args, "family", "rellich"))
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    handlers = {"rellich": cmd_rellich, "verify": cmd_verify,
                "index": cmd_index}
    try:
        return handlers[config.command](config)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except fi.RefinementError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
