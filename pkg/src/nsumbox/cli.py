"""Command-line front end: construction, checking, simulation, demos.

Every invocation writes one JSON document to stdout.  Exit codes: 0 on
success/pass, 1 on a check failure (not SSO, infeasible, certification
fail, domain error), 2 on usage or format errors.  The --seed default can
be overridden with the NSUMBOX_SEED environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .apps import make_pir_instance, make_sdbmm_instance, pir_run, sdbmm_run
from .errors import NsumboxError
from . import jsonio
from .gf import make_field
from .matfq import MatrixFq
from .qcsa import over_the_air_decode, qcsa_box
from .qoracle import certify
from .sumbox import build_box, evaluate
from .symplectic import (
    Feasible,
    is_sso,
    lit_feasibility,
    symplectic_complete,
    to_standard_form,
)


def _default_seed() -> int:
    return int(os.environ.get("NSUMBOX_SEED", "0"))


def _emit(doc: dict) -> None:
    print(json.dumps(doc, indent=2))


def _load(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="nsumbox")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field", help="field utilities")
    fsub = p.add_subparsers(dest="field_cmd", required=True)
    info = fsub.add_parser("info", help="canonical field parameters")
    info.add_argument("p", type=int)
    info.add_argument("r", type=int, nargs="?", default=1)

    p = sub.add_parser("sso", help="SSO predicates")
    ssub = p.add_subparsers(dest="sso_cmd", required=True)
    chk = ssub.add_parser("check", help="strong self-orthogonality of a matrix")
    chk.add_argument("matrix", help="matrix JSON file")

    p = sub.add_parser("complete", help="symplectic completion of generators")
    p.add_argument("matrix", help="matrix JSON file (2N x kappa)")

    p = sub.add_parser("standard-form", help="standard form of a transfer matrix")
    p.add_argument("matrix", help="matrix JSON file (N x 2N)")

    p = sub.add_parser("feasible", help="LIT feasibility of a transfer matrix")
    p.add_argument("matrix", help="matrix JSON file (N x 2N)")

    p = sub.add_parser("box", help="sum-box construction and evaluation")
    bsub = p.add_subparsers(dest="box_cmd", required=True)
    bb = bsub.add_parser("build", help='input {"g": matrix, "h": matrix|null}')
    bb.add_argument("input")
    be = bsub.add_parser("eval", help='input {"spec":..., "x": [...], "seed"?}')
    be.add_argument("input")
    be.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("oracle", help="state-vector certification")
    osub = p.add_subparsers(dest="oracle_cmd", required=True)
    oc = osub.add_parser("certify")
    oc.add_argument("spec", help="box spec JSON file")
    mode = oc.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--trials", type=int, default=None)
    oc.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("qcsa", help="QCSA boxes and over-the-air decoding")
    qsub = p.add_subparsers(dest="qcsa_cmd", required=True)
    qb = qsub.add_parser("build", help="params JSON file")
    qb.add_argument("params")
    qd = qsub.add_parser("decode", help='input {"params":..., "a1": [...], "a2": [...]}')
    qd.add_argument("input")

    p = sub.add_parser("demo", help="rate demonstrations")
    dsub = p.add_subparsers(dest="demo_cmd", required=True)
    dp = dsub.add_parser("pir", help='params {"N","M","K","X","T","theta"?}')
    dp.add_argument("params")
    dp.add_argument("--seed", type=int, default=None)
    dp.add_argument("--symmetric", action="store_true")
    ds = dsub.add_parser("sdbmm", help='params {"N","X_A","X_B","lambda"?,"eta"?,"mu"?}')
    ds.add_argument("params")
    ds.add_argument("--seed", type=int, default=None)
    return top


def _seed_of(args) -> int:
    return args.seed if getattr(args, "seed", None) is not None else _default_seed()


def _dispatch(args) -> int:
    if args.command == "field":
        f = make_field(args.p, args.r)
        _emit({**jsonio.field_to_json(f), "q": f.q})
        return 0

    if args.command == "sso":
        m = jsonio.matrix_from_json(_load(args.matrix))
        ok = is_sso(m)
        _emit({"sso": ok})
        return 0 if ok else 1

    if args.command == "complete":
        g = jsonio.matrix_from_json(_load(args.matrix))
        _emit(jsonio.matrix_to_json(symplectic_complete(g)))
        return 0

    if args.command == "standard-form":
        mt = jsonio.matrix_from_json(_load(args.matrix))
        sf = to_standard_form(mt)
        _emit(
            {
                "s": jsonio.matrix_to_json(sf.s),
                "p": jsonio.matrix_to_json(sf.p),
                "lambda": {
                    "l1": list(sf.lam.l1),
                    "l2": list(sf.lam.l2),
                    "l3": list(sf.lam.l3),
                    "l4": list(sf.lam.l4),
                },
            }
        )
        return 0

    if args.command == "feasible":
        mt = jsonio.matrix_from_json(_load(args.matrix))
        res = lit_feasibility(mt)
        if isinstance(res, Feasible):
            diag = [int(res.delta.encodings()[i, i]) for i in range(res.delta.rows)]
            _emit({"feasible": True, "delta": diag})
            return 0
        _emit({"feasible": False})
        return 1

    if args.command == "box":
        doc = _load(args.input)
        if args.box_cmd == "build":
            field = jsonio.field_from_json(doc["g"]["field"])
            g = jsonio.matrix_from_json(doc["g"], field)
            h = jsonio.matrix_from_json(doc["h"], field) if doc.get("h") else None
            _emit(jsonio.spec_to_json(build_box(g, h)))
            return 0
        spec = jsonio.spec_from_json(doc["spec"])
        out = evaluate(spec, doc["x"], seed=_seed_of(args) if args.seed is not None else int(doc.get("seed", _default_seed())))
        _emit(
            {
                "digits": list(out.digits),
                "discarded": list(out.discarded),
                "seed": out.seed_used,
            }
        )
        return 0

    if args.command == "oracle":
        spec = jsonio.spec_from_json(_load(args.spec))
        if args.trials is not None:
            report = certify(spec, "random", trials=args.trials, seed=_seed_of(args))
        else:
            report = certify(spec, "exhaustive")
        _emit(report.to_json())
        return 0 if report.passed else 1

    if args.command == "qcsa":
        doc = _load(args.params if args.qcsa_cmd == "build" else args.input)
        if args.qcsa_cmd == "build":
            box = qcsa_box(jsonio.qcsa_params_from_json(doc))
            _emit(
                {
                    "spec": jsonio.spec_to_json(box.spec),
                    "pi": list(box.pi),
                    "m_qcsa": jsonio.matrix_to_json(box.m_qcsa),
                    "u": list(box.u),
                    "v": list(box.v),
                }
            )
            return 0
        box = qcsa_box(jsonio.qcsa_params_from_json(doc["params"]))
        res = over_the_air_decode(box, doc["a1"], doc["a2"], box.u, box.v)
        _emit(
            {
                "delta1": list(res.delta1),
                "delta2": list(res.delta2),
                "nu_tails": list(res.nu_tails),
            }
        )
        return 0

    if args.command == "demo":
        doc = _load(args.params)
        seed = _seed_of(args)
        if args.demo_cmd == "pir":
            inst = make_pir_instance(
                doc["N"], doc["M"], doc["K"], doc["X"], doc["T"],
                theta=int(doc.get("theta", 0)), seed=seed,
            )
            report = pir_run(inst, seed=seed, symmetric=args.symmetric)
        else:
            inst = make_sdbmm_instance(
                doc["N"], doc["X_A"], doc["X_B"],
                lam=int(doc.get("lambda", 2)), eta=int(doc.get("eta", 2)),
                mu=int(doc.get("mu", 2)), seed=seed,
            )
            report = sdbmm_run(inst, seed=seed)
        _emit(report.to_json())
        return 0 if report.recovered_ok else 1

    raise AssertionError("unreachable command")


def run(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return _dispatch(args)
    except (json.JSONDecodeError, FileNotFoundError, KeyError, jsonio.FormatError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except NsumboxError as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)})
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
