"""Command-line front end.

Exit codes: 0 when the checked property holds, 1 when it fails (the
report carries the residual), 2 on usage, schema or precondition errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import catalog, io
from .algebra import DimensionMismatch, check_associativity
from .bigraded import (
    Inhomogeneous,
    SplitContext,
    bidegree_of,
    check_proto_conditions,
    classify,
    decompose_structure,
)
from .cochain import derived_bracket, g_bracket
from .operators import (
    PreconditionError,
    check_aybe,
    check_grb,
    check_mc,
    check_nijenhuis,
    check_qmc,
    check_rb,
    check_tmc,
    induced_product,
    make_nijenhuis,
)
from .scalars import fmt
from .twisting import TwistSelfCheckError, check_twist_isomorphism, twist

IDENTITIES = ("rb", "grb", "mc", "tmc", "qmc", "aybe", "nijenhuis", "nijenhuis-chain", "induced")


class UsageError(Exception):
    pass


# -- rendering ---------------------------------------------------------------

def verdict_json(v) -> dict:
    out = {
        "identity": v.identity_name,
        "holds": v.holds,
        "restricted_to": v.restricted_to,
        "witness": list(v.witness) if v.witness is not None else None,
        "residual": io.cochain_to_json(v.residual),
    }
    if v.notes:
        out["notes"] = {k: (fmt(x) if not isinstance(x, (bool, int, str)) else x)
                        for k, x in v.notes.items()}
    if v.parts:
        out["parts"] = {k: verdict_json(p) for k, p in v.parts.items()}
    return out


def _text(doc, indent=0) -> str:
    pad = "  " * indent
    lines = []
    for k, v in doc.items():
        if isinstance(v, dict) and k != "residual":
            lines.append(f"{pad}{k}:")
            lines.append(_text(v, indent + 1))
        elif k == "residual" and isinstance(v, dict):
            lines.append(f"{pad}residual: {len(v['entries'])} nonzero entries")
            for e in v["entries"][:8]:
                lines.append(f"{pad}  {e}")
        else:
            lines.append(f"{pad}{k}: {v}")
    return "\n".join(x for x in lines if x)


def emit(doc: dict, args) -> None:
    text = json.dumps(doc, indent=1, ensure_ascii=False) if args.format == "json" else _text(doc)
    if getattr(args, "output", None):
        Path(args.output).write_text(text + "\n")
    else:
        print(text)


# -- loading -------------------------------------------------------------------

def load_algebra(path):
    return io.algebra_from_json(io.read_json(path))


def load_structure(args):
    """A split structure from --structure, or from --algebra plus a split."""
    if getattr(args, "structure", None):
        return io.proto_from_json(io.read_json(args.structure)), {"structure": args.structure}
    if not getattr(args, "algebra", None):
        raise UsageError("give --algebra (with a split) or --structure")
    alg = load_algebra(args.algebra)
    dim1 = args.split if getattr(args, "split", None) is not None else alg.split
    if dim1 is None:
        raise UsageError("the algebra file records no split; pass --split N1")
    if not 0 <= dim1 <= alg.dim:
        raise UsageError(f"split {dim1} out of range for dimension {alg.dim}")
    split = SplitContext(dim1, alg.dim - dim1)
    return decompose_structure(split, alg.structure, alg.degrees), {"algebra": args.algebra}


# -- verbs ---------------------------------------------------------------------

def cmd_check_assoc(args):
    alg = load_algebra(args.algebra)
    chk = check_associativity(alg)
    result = {"associative": chk.holds}
    if chk.witness is not None:
        w = chk.witness
        result["witness"] = {"indices": list(w.indices),
                             "lhs": [fmt(x) for x in w.lhs], "rhs": [fmt(x) for x in w.rhs]}
    return io.report("check-assoc", {"algebra": args.algebra}, chk.holds, result)


def cmd_decompose(args):
    ps, inputs = load_structure(args)
    result = io.proto_to_json(ps)
    return io.report("decompose", inputs, True, result)


def cmd_classify(args):
    ps, inputs = load_structure(args)
    cond = check_proto_conditions(ps)
    result = {"class": classify(ps).value, "conditions": cond.flags,
              "associative": cond.associative}
    return io.report("classify", inputs, cond.all_hold, result)


def cmd_bracket(args):
    f = io.cochain_from_json(io.read_json(args.f))
    g = io.cochain_from_json(io.read_json(args.g))
    inputs = {"f": args.f, "g": args.g}
    if args.derived:
        S = io.cochain_from_json(io.read_json(args.derived))
        inputs["S"] = args.derived
        out = derived_bracket(S, f, g)
    else:
        out = g_bracket(f, g)
    result = {"bracket": io.cochain_to_json(out)}
    if args.split is not None:
        bd = bidegree_of(SplitContext(args.split, out.dim - args.split), out)
        result["bidegree"] = (
            "inhomogeneous" if isinstance(bd, Inhomogeneous) else (None if bd is None else list(bd))
        )
    return io.report("bracket", inputs, True, result)


def cmd_twist(args):
    ps, inputs = load_structure(args)
    H = io.linear_op_from_json(io.read_json(args.map))
    inputs["map"] = args.map
    rep = twist(ps, H)
    result = {
        "agree": rep.agree,
        "classification": rep.classification.value,
        "structure": io.proto_to_json(rep.result),
        "curvature": io.cochain_to_json(rep.curvature),
        "isomorphism": check_twist_isomorphism(ps, H) if ps.is_associative() else None,
    }
    return io.report("twist", inputs, rep.agree, result)


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"verify {args.identity} needs " + ", ".join(f"--{m.replace('_', '-')}" for m in missing))


def cmd_verify(args):
    ident = args.identity
    _need(args, "algebra")
    inputs = {"algebra": args.algebra}
    for name in ("bimodule", "op", "op2"):
        if getattr(args, name):
            inputs[name] = getattr(args, name)
    sd = args.safe_degree
    op = io.linear_op_from_json(io.read_json(args.op)) if args.op else None
    op2 = io.linear_op_from_json(io.read_json(args.op2)) if args.op2 else None

    if ident in ("mc", "tmc", "qmc", "induced"):
        _need(args, "op")
        ps, _ = load_structure(args)
        if ident == "mc":
            v = check_mc(ps, op, strong=args.strong, safe_degree=sd)
        elif ident == "tmc":
            v = check_tmc(ps, op, safe_degree=sd)
        elif ident == "qmc":
            v = check_qmc(ps, op, safe_degree=sd)
        else:
            ip = induced_product(ps, op, safe_degree=sd)
            result = {"product": io.cochain_to_json(ip.product),
                      "associativity": verdict_json(ip.associative),
                      "check": verdict_json(ip.check)}
            return io.report(f"verify {ident}", inputs, ip.associative.holds, result)
        return io.report(f"verify {ident}", inputs, v.holds, verdict_json(v))

    alg = load_algebra(args.algebra)
    if ident == "rb":
        _need(args, "op")
        v = check_rb(alg, op, args.weight, safe_degree=sd)
    elif ident == "aybe":
        _need(args, "op")
        v = check_aybe(alg, op)
    elif ident == "nijenhuis":
        _need(args, "op")
        v = check_nijenhuis(alg, op, safe_degree=sd)
    elif ident in ("grb", "nijenhuis-chain"):
        _need(args, "bimodule", "op")
        mod = io.bimodule_from_json(io.read_json(args.bimodule), alg)
        if ident == "grb":
            v = check_grb(alg, mod, op, safe_degree=sd)
        else:
            _need(args, "op2")
            built = make_nijenhuis(alg, mod, op, op2, safe_degree=sd)
            result = {"N": io.linear_op_to_json(built.N, "N"),
                      "verdicts": {k: verdict_json(x) for k, x in built.verdicts.items()}}
            return io.report(f"verify {ident}", inputs, built.holds, result)
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown identity {ident}")
    return io.report(f"verify {ident}", inputs, v.holds, verdict_json(v))


def _params(pairs):
    out = {}
    for p in pairs or ():
        if "=" not in p:
            raise UsageError(f"parameter {p!r} is not key=value")
        k, v = p.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def emit_entry(entry, outdir: Path) -> dict:
    outdir.mkdir(parents=True, exist_ok=True)
    files = {}
    for key, alg in entry.algebras.items():
        io.write_json(outdir / catalog.alg_file(key), io.algebra_to_json(alg))
        files[key] = catalog.alg_file(key)
    for key, mod in entry.bimodules.items():
        io.write_json(outdir / catalog.mod_file(key), io.bimodule_to_json(mod))
        files[key] = catalog.mod_file(key)
    for key, op in entry.operators.items():
        io.write_json(outdir / catalog.op_file(key), io.linear_op_to_json(op, key))
        files[key] = catalog.op_file(key)
    for key, ps in entry.structures.items():
        name = f"{key}.structure.json"
        io.write_json(outdir / name, io.proto_to_json(ps))
        files[key] = name
    manifest = {
        "id": entry.id,
        "params": {k: str(v) for k, v in entry.params.items()},
        "safe_degree": entry.safe_degree,
        "files": files,
        "claims": entry.claims,
        "checks": [{"argv": list(argv), "expect_exit": code} for argv, code in entry.checks],
    }
    io.write_json(outdir / "manifest.json", manifest)
    return manifest


def cmd_catalog(args):
    if args.action == "list":
        result = {i: catalog.describe(i) for i in catalog.ids()}
        return {"schema_version": io.SCHEMA_VERSION, "command": "catalog list",
                "inputs": {}, "holds": True, "result": result}
    if not args.id:
        raise UsageError("catalog emit needs an entry id")
    if not args.dir:
        raise UsageError("catalog emit needs -o DIR")
    entry = catalog.build(args.id, **_params(args.param))
    manifest = emit_entry(entry, Path(args.dir))
    return {"schema_version": io.SCHEMA_VERSION, "command": "catalog emit",
            "inputs": {}, "holds": True, "result": manifest}


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="twilled", description=__doc__.splitlines()[0])
    p.add_argument("--format", choices=("json", "text"), default="json")
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("check-assoc", help="associativity on all basis triples")
    s.add_argument("algebra")
    s.add_argument("--output")
    s.set_defaults(func=cmd_check_assoc)

    def structure_args(s):
        s.add_argument("--algebra")
        s.add_argument("--structure")
        s.add_argument("--split", type=int, help="dimension of the first summand")
        s.add_argument("--output")

    s = sub.add_parser("decompose", help="split a product into its four parts")
    structure_args(s)
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("classify", help="twilled / quasi / proto and the five conditions")
    structure_args(s)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("bracket", help="Gerstenhaber or derived bracket of two cochains")
    s.add_argument("f")
    s.add_argument("g")
    s.add_argument("--derived", metavar="S", help="cochain file: compute [f,g]_S instead")
    s.add_argument("--split", type=int, help="report the bidegree for this split")
    s.add_argument("--output")
    s.set_defaults(func=cmd_bracket)

    s = sub.add_parser("twist", help="twist a split structure by a map between summands")
    structure_args(s)
    s.add_argument("--map", required=True)
    s.set_defaults(func=cmd_twist)

    s = sub.add_parser("verify", help="check an operator identity")
    s.add_argument("identity", choices=IDENTITIES)
    s.add_argument("--algebra")
    s.add_argument("--structure")
    s.add_argument("--split", type=int)
    s.add_argument("--bimodule")
    s.add_argument("--op")
    s.add_argument("--op2", help="second operator (Ω for nijenhuis-chain)")
    s.add_argument("--weight", default="0")
    s.add_argument("--safe-degree", type=int, dest="safe_degree")
    s.add_argument("--strong", action="store_true")
    s.add_argument("--output")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("catalog", help="list or emit built-in examples")
    s.add_argument("action", choices=("list", "emit"))
    s.add_argument("id", nargs="?")
    s.add_argument("--param", action="append", metavar="KEY=VALUE")
    s.add_argument("-o", "--dir")
    s.add_argument("--output")
    s.set_defaults(func=cmd_catalog)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        doc = args.func(args)
    except (UsageError, io.SchemaError, PreconditionError, DimensionMismatch,
            catalog.UnknownEntry, catalog.ParameterError, TwistSelfCheckError,
            FileNotFoundError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"twilled: error: {msg}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"twilled: error: {exc}", file=sys.stderr)
        return 2
    emit(doc, args)
    return 0 if doc["holds"] else 1


if __name__ == "__main__":
    sys.exit(main())
