"""JSON input/output.  Files use 1-based indices; everything inside is 0-based.

Algebra:         {"dim": 4, "bracket": [[1, 2, 3, 0, 0, 0, 1], ...]}
                 each entry is i, j, k (i < j < k) followed by the d output
                 coordinates, or by one list holding them.
Map:             {"rows": e, "cols": d, "matrix": [[...], ...]}  (row-major, f = matrix)
Representation:  {"module_dim": m, "pairs": [[[i, j], matrix], ...]}
Subspace:        {"basis": [[...], ...]}  optionally with "complement": [[...], ...]
Velocity:        {"matrix": [[...], ...]}  (same layout as a map)

Scalars may be integers, "p/q" strings or [num, den] pairs.
"""
from __future__ import annotations

import json
from fractions import Fraction

from .algebra import LinearMap, Subspace, ThreeLieAlgebra, make_algebra
from .errors import SchemaError
from .exact import dense_json, scalar, to_json
from .representations import Representation, make_representation


def load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}", path=path) from None
    return loads(text, path)


def loads(text: str, path: str = "<string>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON: {exc.msg}",
                          line=exc.lineno, column=exc.colno, path=path) from None


def _fail(msg, where):
    raise SchemaError(f"{where}: {msg}", path=where)


def _obj(doc, where, *keys):
    if not isinstance(doc, dict):
        _fail("expected a JSON object", where)
    for k in keys:
        if k not in doc:
            _fail(f"missing key {k!r}", where)
    return doc


def _int(x, where, lo=None, hi=None):
    if not isinstance(x, int) or isinstance(x, bool):
        _fail(f"expected an integer, got {x!r}", where)
    if (lo is not None and x < lo) or (hi is not None and x > hi):
        _fail(f"{x} out of range [{lo}, {hi}]", where)
    return x


def _scalar(x, where) -> Fraction:
    try:
        return scalar(x)
    except (TypeError, ValueError, ZeroDivisionError):
        _fail(f"not an exact scalar: {x!r}", where)


def _vector(v, n, where):
    if not isinstance(v, list) or len(v) != n:
        _fail(f"expected a list of {n} scalars", where)
    return [_scalar(x, f"{where}[{i}]") for i, x in enumerate(v)]


def _matrix(rows, nrows, ncols, where):
    if not isinstance(rows, list) or len(rows) != nrows:
        _fail(f"expected {nrows} rows", where)
    return [_vector(r, ncols, f"{where}[{i}]") for i, r in enumerate(rows)]


def algebra_entries(doc, where="$"):
    doc = _obj(doc, where, "dim")
    d = _int(doc["dim"], f"{where}.dim", 1)
    entries = []
    brackets = doc.get("bracket", [])
    if not isinstance(brackets, list):
        _fail("expected a list", f"{where}.bracket")
    for n, row in enumerate(brackets):
        at = f"{where}.bracket[{n}]"
        if not isinstance(row, list) or len(row) < 4:
            _fail("expected [i, j, k, coordinates...]", at)
        i, j, k = (_int(x, f"{at}[{p}]", 1, d) - 1 for p, x in enumerate(row[:3]))
        # brackets need d >= 3, so a nested list of d coordinates is never a [num, den] pair
        nested = len(row) == 4 and isinstance(row[3], list) and len(row[3]) == d and d != 2
        coords = row[3] if nested else row[3:]
        vec = _vector(coords, d, f"{at}[3:]")
        if not i < j < k:
            _fail(f"indices must satisfy i < j < k, got {(i + 1, j + 1, k + 1)}", at)
        entries.extend((i, j, k, l, v) for l, v in enumerate(vec) if v)
    return d, entries


def parse_algebra(doc, where="$", *, validate=True) -> ThreeLieAlgebra:
    d, entries = algebra_entries(doc, where)
    return make_algebra(d, entries, validate=validate)


def parse_map(doc, where="$") -> LinearMap:
    doc = _obj(doc, where, "matrix")
    rows = doc["matrix"]
    if not isinstance(rows, list) or not rows or not isinstance(rows[0], list):
        _fail("expected a non-empty list of rows", f"{where}.matrix")
    nr = _int(doc.get("rows", len(rows)), f"{where}.rows", 1)
    nc = _int(doc.get("cols", len(rows[0])), f"{where}.cols", 1)
    return LinearMap(nc, nr, _matrix(rows, nr, nc, f"{where}.matrix"))


def parse_representation(doc, A: ThreeLieAlgebra, where="$") -> Representation:
    doc = _obj(doc, where, "module_dim", "pairs")
    m = _int(doc["module_dim"], f"{where}.module_dim", 0)
    entries = {}
    if not isinstance(doc["pairs"], list):
        _fail("expected a list", f"{where}.pairs")
    for n, item in enumerate(doc["pairs"]):
        at = f"{where}.pairs[{n}]"
        if not isinstance(item, list) or len(item) != 2 or not isinstance(item[0], list) \
                or len(item[0]) != 2:
            _fail("expected [[i, j], matrix]", at)
        i, j = (_int(x, f"{at}[0]", 1, A.dim) - 1 for x in item[0])
        if not i < j:
            _fail("pair indices must satisfy i < j", at)
        entries[(i, j)] = _matrix(item[1], m, m, f"{at}[1]")
    return make_representation(A, m, entries)


def parse_subspace(doc, A: ThreeLieAlgebra, where="$"):
    """Returns (Subspace, complement vectors or None)."""
    doc = _obj(doc, where, "basis")
    if not isinstance(doc["basis"], list):
        _fail("expected a list of vectors", f"{where}.basis")
    basis = [_vector(v, A.dim, f"{where}.basis[{n}]") for n, v in enumerate(doc["basis"])]
    try:
        H = Subspace(A, basis)
    except ValueError as exc:
        _fail(str(exc), f"{where}.basis")
    comp = doc.get("complement")
    if comp is not None:
        if not isinstance(comp, list):
            _fail("expected a list of vectors", f"{where}.complement")
        comp = [_vector(v, A.dim, f"{where}.complement[{n}]") for n, v in enumerate(comp)]
    return H, comp


def parse_velocity(doc, nrows, ncols, where="$"):
    doc = _obj(doc, where, "matrix")
    return _matrix(doc["matrix"], nrows, ncols, f"{where}.matrix")


# -- output --------------------------------------------------------------------

scalar_json = to_json
vector_json = dense_json


def algebra_json(A: ThreeLieAlgebra) -> dict:
    rows = [[i + 1, j + 1, k + 1] + vector_json(v, A.dim)
            for (i, j, k), v in sorted(A.constants.items())]
    return {"dim": A.dim, "bracket": rows}


def map_json(f: LinearMap) -> dict:
    return {"rows": f.target_dim, "cols": f.source_dim,
            "matrix": [[scalar_json(x) for x in row] for row in f.matrix]}


def dumps(obj) -> str:
    """Deterministic JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, default=scalar_json) + "\n"
