"""Reading and writing instance files.

An instance file is JSON::

    {
      "version": 1,
      "dimension": 2,
      "functions": [
        {"name": "f", "kind": "polyhedral", "dim": 1,
         "epigraph": {"ineqs": [{"a": ["1", "-1"], "b": "0"}], "eqs": []}},
        {"name": "g", "kind": "catalog", "dim": 1, "tag": "..."}
      ],
      "constraint": {"type": "subspace", "generators": [["1", "1"]]},
      "queries": [{"name": "q1", "check": "duality"}]
    }

Every number that is not a count is an exact rational written as a string
``"p"`` or ``"p/q"`` (JSON integers are accepted too).  Floats and decimal
strings are rejected.  Cones may be given by ``generators`` or by ``rows``
(each row ``a`` meaning ``a . x <= 0``).  The canonical text of a document
is ``json.dumps(doc, sort_keys=True, indent=2)`` plus a newline, with every
rational in lowest terms.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

from .catalog import from_tag
from .duality import MonotropicInstance, PolyCone, Subspace, solve_primal
from .exact import INF, MalformedInput, rational
from .functions import ImproperFunction, PolyhedralFn
from .polyhedra import Polyhedron
from .regions import UnsupportedCombination

FORMAT_VERSION = 1

CHECKS = {
    "conjugate": {"y", "function", "expect"},
    "epssub": {"x", "eps", "function", "y", "expect"},
    "infconv": {"y", "expect"},
    "sumrule": {"x", "expect"},
    "duality": {"expect"},
    "condition_i": {"x", "eps", "K", "expect"},
    "condition_ii": {"duals", "expect"},
    "condition_iv": {"x", "eps", "eta", "expect"},
    "hup": {"x", "eta", "expect"},
    "interiority": {"expect"},
    "closed_epigraph": {"expect"},
    "transversality": {"expect"},
    "bertsekas": {"x", "eps", "expect"},
}
_RATIONAL_PARAMS = {"eps", "eta", "K"}
_VECTOR_PARAMS = {"x", "y"}


class InstanceError(Exception):
    """Base class; ``code`` is a stable identifier and ``path`` the offending field."""

    code = "E_INSTANCE"

    def __init__(self, path: str, message: str):
        super().__init__(f"{self.code} at {path or '<root>'}: {message}")
        self.path = path
        self.message = message


class ParseError(InstanceError):
    code = "E_PARSE"


class InvariantError(InstanceError):
    code = "E_INVARIANT"


class TagError(InstanceError):
    code = "E_TAG"


@dataclass(frozen=True)
class Query:
    name: str
    check: str
    params: dict[str, Any]


@dataclass(frozen=True)
class ParsedInstance:
    instance: MonotropicInstance
    names: tuple[str, ...]
    queries: tuple[Query, ...]
    document: dict
    feasible: bool | None = None


# -- field validation ------------------------------------------------------------

def _obj(v, path, required, optional=()):
    if not isinstance(v, dict):
        raise ParseError(path, "expected an object")
    unknown = sorted(set(v) - set(required) - set(optional))
    if unknown:
        raise ParseError(f"{path}.{unknown[0]}" if path else unknown[0], "unknown field")
    missing = [k for k in required if k not in v]
    if missing:
        raise ParseError(path, f"missing field {missing[0]!r}")
    return v


def _int(v, path, lo=None):
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError(path, "expected an integer")
    if lo is not None and v < lo:
        raise ParseError(path, f"must be at least {lo}")
    return v


def _str(v, path):
    if not isinstance(v, str):
        raise ParseError(path, "expected a string")
    return v


def _rat(v, path) -> str:
    if isinstance(v, float):
        raise ParseError(path, f"exact rational 'p/q' required, got float {v!r}")
    try:
        return str(rational(v))
    except MalformedInput as exc:
        raise ParseError(path, str(exc)) from None


def _vec(v, path, dim=None) -> list[str]:
    if not isinstance(v, list):
        raise ParseError(path, "expected a list of rationals")
    if dim is not None and len(v) != dim:
        raise InvariantError(path, f"expected length {dim}, got {len(v)}")
    return [_rat(c, f"{path}[{i}]") for i, c in enumerate(v)]


def _list(v, path):
    if not isinstance(v, list):
        raise ParseError(path, "expected a list")
    return v


def _rows(v, path, width):
    out = []
    for i, row in enumerate(_list(v, path)):
        p = f"{path}[{i}]"
        _obj(row, p, ("a", "b"))
        out.append({"a": _vec(row["a"], f"{p}.a", width), "b": _rat(row["b"], f"{p}.b")})
    return out


# -- canonical document ------------------------------------------------------------

def canonicalize(doc: Any) -> dict:
    """Validate ``doc`` and return it with every rational in canonical form."""
    _obj(doc, "", ("version", "dimension", "functions", "constraint"), ("queries", "description"))
    version = _int(doc["version"], "version")
    if version != FORMAT_VERSION:
        raise ParseError("version", f"unsupported version {version}; expected {FORMAT_VERSION}")
    N = _int(doc["dimension"], "dimension", 1)
    out: dict = {"version": version, "dimension": N}
    if "description" in doc:
        out["description"] = _str(doc["description"], "description")

    funcs = []
    names = set()
    total = 0
    for i, f in enumerate(_list(doc["functions"], "functions")):
        p = f"functions[{i}]"
        if not isinstance(f, dict):
            raise ParseError(p, "expected an object")
        kind = f.get("kind")
        if kind == "polyhedral":
            _obj(f, p, ("name", "kind", "dim", "epigraph"))
        elif kind == "catalog":
            _obj(f, p, ("name", "kind", "dim", "tag"))
        else:
            raise ParseError(f"{p}.kind", f"expected 'polyhedral' or 'catalog', got {kind!r}")
        name = _str(f["name"], f"{p}.name")
        if name in names:
            raise InvariantError(f"{p}.name", f"duplicate function name {name!r}")
        names.add(name)
        d = _int(f["dim"], f"{p}.dim", 1)
        total += d
        entry: dict = {"name": name, "kind": kind, "dim": d}
        if kind == "polyhedral":
            epi = _obj(f["epigraph"], f"{p}.epigraph", ("ineqs",), ("eqs",))
            entry["epigraph"] = {
                "ineqs": _rows(epi["ineqs"], f"{p}.epigraph.ineqs", d + 1),
                "eqs": _rows(epi.get("eqs", []), f"{p}.epigraph.eqs", d + 1),
            }
        else:
            entry["tag"] = _str(f["tag"], f"{p}.tag")
        funcs.append(entry)
    if not funcs:
        raise InvariantError("functions", "at least one function is required")
    if total != N:
        raise InvariantError("dimension", f"function dimensions add to {total}, not {N}")
    out["functions"] = funcs

    c = doc["constraint"]
    if not isinstance(c, dict):
        raise ParseError("constraint", "expected an object")
    ctype = c.get("type")
    if ctype == "subspace":
        _obj(c, "constraint", ("type", "generators"))
        out["constraint"] = {"type": ctype, "generators": [
            _vec(g, f"constraint.generators[{i}]", N) for i, g in enumerate(_list(c["generators"], "constraint.generators"))
        ]}
    elif ctype == "cone":
        _obj(c, "constraint", ("type",), ("generators", "rows"))
        if ("generators" in c) == ("rows" in c):
            raise ParseError("constraint", "a cone needs exactly one of 'generators' or 'rows'")
        key = "generators" if "generators" in c else "rows"
        out["constraint"] = {"type": ctype, key: [
            _vec(g, f"constraint.{key}[{i}]", N) for i, g in enumerate(_list(c[key], f"constraint.{key}"))
        ]}
    else:
        raise ParseError("constraint.type", f"expected 'subspace' or 'cone', got {ctype!r}")

    queries = []
    qnames = set()
    for i, q in enumerate(_list(doc.get("queries", []), "queries")):
        p = f"queries[{i}]"
        if not isinstance(q, dict):
            raise ParseError(p, "expected an object")
        check = q.get("check")
        if check not in CHECKS:
            raise ParseError(f"{p}.check", f"unknown check {check!r}; known: {sorted(CHECKS)}")
        _obj(q, p, ("name", "check"), CHECKS[check])
        name = _str(q["name"], f"{p}.name")
        if name in qnames:
            raise InvariantError(f"{p}.name", f"duplicate query name {name!r}")
        qnames.add(name)
        entry = {"name": name, "check": check}
        for k, v in q.items():
            if k in ("name", "check"):
                continue
            kp = f"{p}.{k}"
            if k in _RATIONAL_PARAMS:
                entry[k] = _rat(v, kp)
            elif k in _VECTOR_PARAMS:
                entry[k] = _vec(v, kp)
            elif k == "duals":
                entry[k] = [_vec(y, f"{kp}[{j}]") for j, y in enumerate(_list(v, kp))]
            elif k == "function":
                entry[k] = _str(v, kp)
                if v not in names:
                    raise InvariantError(kp, f"no function named {v!r}")
            elif k == "expect":
                entry[k] = _expect(v, kp)
        queries.append(entry)
    if "queries" in doc:
        out["queries"] = queries
    return out


def _expect(v, path):
    if isinstance(v, bool):
        return v
    if isinstance(v, dict):
        return {k: _expect(x, f"{path}.{k}") for k, x in v.items()}
    if isinstance(v, str) and v in ("+inf", "-inf"):
        return v
    return _rat(v, path)


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


# -- building objects ------------------------------------------------------------------

def _fractions(v):
    return tuple(Fraction(c) for c in v)


def build(doc: dict) -> ParsedInstance:
    """Turn a canonical document into an instance plus its queries."""
    blocks = []
    for i, f in enumerate(doc["functions"]):
        p = f"functions[{i}]"
        if f["kind"] == "catalog":
            try:
                g = from_tag(f["tag"])
            except UnsupportedCombination as exc:
                raise TagError(f"{p}.tag", str(exc)) from None
            if g.dim != f["dim"]:
                raise InvariantError(f"{p}.dim", f"catalog entry {f['tag']!r} lives on R^{g.dim}")
        else:
            epi = f["epigraph"]
            P = Polyhedron(
                f["dim"] + 1,
                [(_fractions(r["a"]), Fraction(r["b"])) for r in epi["ineqs"]],
                [(_fractions(r["a"]), Fraction(r["b"])) for r in epi["eqs"]],
            )
            try:
                g = PolyhedralFn(P)
            except ImproperFunction as exc:
                raise InvariantError(f"{p}.epigraph", str(exc)) from None
        blocks.append(g)
    c = doc["constraint"]
    N = doc["dimension"]
    if c["type"] == "subspace":
        constraint = Subspace(N, tuple(_fractions(g) for g in c["generators"]))
    elif "generators" in c:
        constraint = PolyCone(Polyhedron.cone(N, [_fractions(g) for g in c["generators"]]))
    else:
        constraint = PolyCone(Polyhedron(N, [(_fractions(r), 0) for r in c["rows"]]).canonical())
    try:
        inst = MonotropicInstance(tuple(blocks), constraint, doc.get("description", ""))
    except MalformedInput as exc:
        raise InvariantError("constraint", str(exc)) from None
    queries = []
    for q in doc.get("queries", []):
        params = {}
        for k, v in q.items():
            if k in ("name", "check"):
                continue
            if k in _RATIONAL_PARAMS:
                params[k] = Fraction(v)
            elif k in _VECTOR_PARAMS:
                params[k] = _fractions(v)
            elif k == "duals":
                params[k] = [_fractions(y) for y in v]
            else:
                params[k] = v
        queries.append(Query(q["name"], q["check"], params))
    names = tuple(f["name"] for f in doc["functions"])
    try:
        feasible = solve_primal(inst).value != INF
    except UnsupportedCombination:
        feasible = None
    return ParsedInstance(inst, names, tuple(queries), doc, feasible)


def loads(text: str) -> ParsedInstance:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    return build(canonicalize(raw))


def load(path: str | Path) -> ParsedInstance:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(str(path), f"cannot read file: {exc.strerror}") from None
    return loads(text)


def canonical_text(text: str) -> str:
    return dumps(canonicalize(json.loads(text)))


def packaged(name: str) -> str:
    """Text of a data file shipped with the package, e.g. ``"example33.json"``."""
    return resources.files("dualgap.data").joinpath(name).read_text(encoding="utf-8")


def packaged_corpus() -> list[tuple[str, str]]:
    folder = resources.files("dualgap.data").joinpath("corpus")
    return sorted((p.name, p.read_text(encoding="utf-8")) for p in folder.iterdir() if p.name.endswith(".json"))


def polyhedral_entry(name: str, f: PolyhedralFn) -> dict:
    """Document entry for a polyhedral function (used by generators and tests)."""
    return {
        "name": name, "kind": "polyhedral", "dim": f.dim,
        "epigraph": {
            "ineqs": [{"a": [str(c) for c in a], "b": str(b)} for a, b in f.epi.ineqs],
            "eqs": [{"a": [str(c) for c in e], "b": str(d)} for e, d in f.epi.eqs],
        },
    }
