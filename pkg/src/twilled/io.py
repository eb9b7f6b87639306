"""JSON documents for algebras, bimodules, linear maps, cochains and split
structures, validated against the shipped schemas."""
from __future__ import annotations

import hashlib
import json
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np
from referencing import Registry, Resource

from .algebra import Algebra, Bimodule, LinearOp
from .bigraded import ProtoStructure, SplitContext
from .cochain import Cochain
from .scalars import fmt, rational, zeros

SCHEMA_VERSION = "1.0"
SCHEMAS = ("algebra", "bimodule", "linear_op", "cochain", "proto_structure", "report")


class SchemaError(ValueError):
    """A document does not match its schema or is internally inconsistent."""


@lru_cache(maxsize=None)
def schema(name: str) -> dict:
    text = resources.files("twilled").joinpath(f"schemas/{name}.schema.json").read_text()
    return json.loads(text)


@lru_cache(maxsize=None)
def _registry() -> Registry:
    return Registry().with_resources(
        (schema(n)["$id"], Resource.from_contents(schema(n))) for n in SCHEMAS
    )


def validate(doc, name: str):
    validator = jsonschema.Draft202012Validator(schema(name), registry=_registry())
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        path = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise SchemaError(f"{name}: at {path}: {e.message}")


def _q(value):
    try:
        return rational(value)
    except (TypeError, ValueError) as exc:
        raise SchemaError(str(exc)) from None


def _check_index(name, idx, bound):
    if idx >= bound:
        raise SchemaError(f"{name}: index {idx} out of range for dimension {bound}")


# -- algebras ------------------------------------------------------------------

def algebra_to_json(alg: Algebra) -> dict:
    doc = {
        "kind": "algebra",
        "name": alg.name,
        "dim": alg.dim,
        "basis": list(alg.basis),
        "products": [[i, j, k, fmt(c)] for i, j, k, c in sorted(alg.products())],
    }
    if alg.split is not None:
        doc["split"] = {"dim1": alg.split}
    if alg.degrees is not None:
        doc["degrees"] = list(alg.degrees)
    if alg.truncation is not None:
        doc["truncation"] = alg.truncation
    return doc


def algebra_from_json(doc) -> Algebra:
    validate(doc, "algebra")
    d = doc["dim"]
    for i, j, k, _ in doc["products"]:
        for x in (i, j, k):
            _check_index("algebra", x, d)
    if "basis" in doc and len(doc["basis"]) != d:
        raise SchemaError(f"algebra: {len(doc['basis'])} basis labels for dimension {d}")
    if "degrees" in doc and len(doc["degrees"]) != d:
        raise SchemaError("algebra: one degree per basis vector is required")
    split = doc.get("split", {}).get("dim1")
    if split is not None and split > d:
        raise SchemaError(f"algebra: split {split} exceeds dimension {d}")
    return Algebra.from_products(
        doc["name"], d, [(i, j, k, _q(c)) for i, j, k, c in doc["products"]],
        basis=tuple(doc.get("basis", ())),
        degrees=tuple(doc["degrees"]) if "degrees" in doc else None,
        split=split, truncation=doc.get("truncation"),
    )


# -- bimodules -----------------------------------------------------------------

def _triples(arr):
    out = []
    for (k, i, j), c in sorted(((tuple(int(x) for x in idx), v) for idx, v in _nz(arr))):
        out.append([i, j, k, fmt(c)])
    return out


def _nz(arr):
    return ((idx, v) for idx, v in np.ndenumerate(arr) if v != 0)


def bimodule_to_json(mod: Bimodule) -> dict:
    doc = {
        "kind": "bimodule",
        "name": mod.name,
        "algebra": mod.algebra.name,
        "dim": mod.dim,
        "basis": list(mod.basis),
        "left_action": _triples(mod.left),
        "right_action": _triples(mod.right),
    }
    if mod.degrees is not None:
        doc["degrees"] = list(mod.degrees)
    return doc


def bimodule_from_json(doc, alg: Algebra) -> Bimodule:
    validate(doc, "bimodule")
    n, a = doc["dim"], alg.dim
    left, right = zeros((n, a, n)), zeros((n, n, a))
    for i, j, k, c in doc["left_action"]:
        _check_index("left_action", i, a)
        _check_index("left_action", j, n)
        _check_index("left_action", k, n)
        left[k, i, j] += _q(c)
    for i, j, k, c in doc["right_action"]:
        _check_index("right_action", i, n)
        _check_index("right_action", j, a)
        _check_index("right_action", k, n)
        right[k, i, j] += _q(c)
    return Bimodule(
        alg, left, right, tuple(doc.get("basis", ())), name=doc.get("name", "M"),
        degrees=tuple(doc["degrees"]) if "degrees" in doc else None,
    )


# -- linear maps ---------------------------------------------------------------

def linear_op_to_json(op: LinearOp, name: str | None = None) -> dict:
    doc = {
        "kind": "linear_op",
        "rows": op.rows,
        "cols": op.cols,
        "domain": op.domain,
        "codomain": op.codomain,
        "matrix": [[fmt(x) for x in row] for row in op.matrix],
    }
    if name:
        doc["name"] = name
    return doc


def linear_op_from_json(doc) -> LinearOp:
    validate(doc, "linear_op")
    rows, cols = doc["rows"], doc["cols"]
    m = doc["matrix"]
    if len(m) != rows or any(len(r) != cols for r in m):
        raise SchemaError(f"linear_op: matrix is not {rows}x{cols}")
    arr = zeros((rows, cols))
    for i, row in enumerate(m):
        for j, x in enumerate(row):
            arr[i, j] = _q(x)
    return LinearOp(arr, doc.get("domain", "A"), doc.get("codomain", "A"))


# -- cochains and split structures --------------------------------------------

def cochain_to_json(f: Cochain) -> dict:
    return {
        "kind": "cochain",
        "dim": f.dim,
        "arity": f.arity,
        "entries": [[*idx, fmt(v)] for *idx, v in f.entries()],
    }


def cochain_from_json(doc) -> Cochain:
    validate(doc, "cochain")
    d, n = doc["dim"], doc["arity"]
    entries = []
    for e in doc["entries"]:
        if len(e) != n + 2:
            raise SchemaError(f"cochain: entry {e} needs {n + 1} indices and a value")
        *idx, v = e
        for x in idx:
            if not isinstance(x, int) or x < 0:
                raise SchemaError(f"cochain: bad index {x!r}")
            _check_index("cochain", x, d)
        entries.append((*idx, _q(v)))
    return Cochain.from_entries(d, n, entries)


def proto_to_json(ps: ProtoStructure) -> dict:
    doc = {
        "kind": "proto_structure",
        "split": {"dim1": ps.split.dim1, "dim2": ps.split.dim2},
        **{name: cochain_to_json(c) for name, c in ps.parts.items()},
    }
    if ps.degrees is not None:
        doc["degrees"] = list(ps.degrees)
    return doc


def proto_from_json(doc) -> ProtoStructure:
    validate(doc, "proto_structure")
    split = SplitContext(doc["split"]["dim1"], doc["split"]["dim2"])
    parts = {k: cochain_from_json(doc[k]) for k in ("phi1", "mu1", "mu2", "phi2")}
    for k, c in parts.items():
        if c.dim != split.dim or c.arity != 2:
            raise SchemaError(f"proto_structure: {k} must be a 2-cochain on dimension {split.dim}")
    return ProtoStructure(split, parts["phi1"], parts["mu1"], parts["mu2"], parts["phi2"],
                          tuple(doc["degrees"]) if "degrees" in doc else None)


# -- files ---------------------------------------------------------------------

def read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from None


def write_json(path, doc):
    Path(path).write_text(json.dumps(doc, indent=1, ensure_ascii=False) + "\n")


def sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def report(command: str, inputs: dict, holds: bool, result) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": {k: {"path": str(p), "sha256": sha256(p)} for k, p in inputs.items()},
        "holds": bool(holds),
        "result": result,
    }
    validate(doc, "report")
    return doc
