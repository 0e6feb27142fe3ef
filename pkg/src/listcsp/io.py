"""JSON text formats for instances, assignments and set cover instances.

Every document is a JSON object with a ``version`` field and a ``kind``
(``csp``, ``setcover``, ``assignment`` or ``multiassignment``; optional on
input for ``csp`` and ``setcover``). Serialization is canonical: keys are
sorted, constraint pairs and set elements are sorted, and one top-level
entry (or one constraint, list, or set) is written per line.

Product multi-assignments key their lists by the sorted subset written as
``"i,j,k"``; each value is the array of values aligned with that subset.
"""

from __future__ import annotations

import json
from collections.abc import Mapping

from .core import Assignment, Constraint, CspInstance, MultiAssignment
from .errors import InvalidInput
from .reductions import SetCoverInstance

VERSION = 1


class FormatError(InvalidInput):
    """Malformed document; the message names the offending field or line."""


# -- writing ----------------------------------------------------------------


def _compact(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _render(doc: Mapping) -> str:
    """Top-level keys one per line; list items and mapping entries one per line."""
    lines = ["{"]
    keys = sorted(doc)
    for i, key in enumerate(keys):
        val = doc[key]
        end = "," if i < len(keys) - 1 else ""
        head = f"  {json.dumps(key)}: "
        if isinstance(val, list) and val and isinstance(val[0], (list, dict)):
            lines.append(head + "[")
            lines += [f"    {_compact(x)}" + ("," if j < len(val) - 1 else "") for j, x in enumerate(val)]
            lines.append("  ]" + end)
        elif isinstance(val, dict) and val:
            lines.append(head + "{")
            items = sorted(val.items(), key=lambda kv: _key_order(kv[0]))
            lines += [
                f"    {json.dumps(k)}: {_compact(v)}" + ("," if j < len(items) - 1 else "")
                for j, (k, v) in enumerate(items)
            ]
            lines.append("  }" + end)
        else:
            lines.append(head + _compact(val) + end)
    lines.append("}")
    return "\n".join(lines) + "\n"


def _key_order(key: str):
    # numeric subset keys sort numerically, other names as text
    try:
        return (0, tuple(int(p) for p in key.split(",")), "")
    except ValueError:
        return (1, (), key)


def _to_json(x):
    if isinstance(x, tuple):
        return [_to_json(y) for y in x]
    return x


def _sort_key(x):
    return json.dumps(_to_json(x))


def serialize_csp(inst: CspInstance) -> str:
    doc = {
        "version": VERSION,
        "kind": "csp",
        "variables": inst.var_count,
        "domains": [list(d) for d in inst.domains],
        "constraints": [
            {"u": c.u, "v": c.v, "pairs": [list(p) for p in sorted(c.pairs)]}
            for c in inst.constraints
        ],
    }
    if inst.comment is not None:
        doc["comment"] = inst.comment
    return _render(doc)


def serialize_setcover(sc: SetCoverInstance) -> str:
    doc = {
        "version": VERSION,
        "kind": "setcover",
        "universe": [_to_json(e) for e in sorted(sc.universe, key=_sort_key)],
        "sets": {name: [_to_json(e) for e in sorted(s, key=_sort_key)] for name, s in sc.sets.items()},
        "k": sc.k,
    }
    return _render(doc)


def serialize_assignment(a: Assignment) -> str:
    doc = {"version": VERSION, "kind": "assignment", "variables": list(a.vars), "values": list(a.values)}
    return _render(doc)


def serialize_multiassignment(m: MultiAssignment) -> str:
    keys = list(m)
    product = bool(keys) and isinstance(keys[0], tuple)
    lists = {}
    for key in keys:
        if product:
            lists[",".join(map(str, key))] = [list(x.values) for x in m.sorted_list(key)]
        else:
            lists[str(key)] = m.sorted_list(key)
    doc = {"version": VERSION, "kind": "multiassignment",
           "level": "product" if product else "base", "lists": lists}
    return _render(doc)


def serialize(obj) -> str:
    if isinstance(obj, CspInstance):
        return serialize_csp(obj)
    if isinstance(obj, SetCoverInstance):
        return serialize_setcover(obj)
    if isinstance(obj, Assignment):
        return serialize_assignment(obj)
    if isinstance(obj, MultiAssignment):
        return serialize_multiassignment(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


# -- reading ----------------------------------------------------------------


def _load(text: str, kind: str, fields: set, required: set) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise FormatError("top level: expected a JSON object")
    allowed = fields | {"version", "kind"}
    for key in doc:
        if key not in allowed:
            raise FormatError(f"unknown field {key!r}")
    for key in sorted(required | {"version"}):
        if key not in doc:
            raise FormatError(f"missing field {key!r}")
    if doc["version"] != VERSION:
        raise FormatError(f"version: unsupported version {doc['version']!r}")
    if doc.get("kind", kind) != kind:
        raise FormatError(f"kind: expected {kind!r}, got {doc['kind']!r}")
    return doc


def _int(x, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise FormatError(f"{where}: expected an integer, got {x!r}")
    return x


def _list(x, where: str) -> list:
    if not isinstance(x, list):
        raise FormatError(f"{where}: expected an array, got {type(x).__name__}")
    return x


def _ints(x, where: str) -> list[int]:
    return [_int(y, f"{where}[{i}]") for i, y in enumerate(_list(x, where))]


def _tag(x, where: str):
    if isinstance(x, list):
        return tuple(_tag(y, f"{where}[{i}]") for i, y in enumerate(x))
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise FormatError(f"{where}: expected an integer, string or array, got {x!r}")
    return x


def parse_csp(text: str) -> CspInstance:
    """Parse a csp document. Semantic checks are left to ``validate_instance``."""
    doc = _load(text, "csp", {"variables", "domains", "constraints", "comment"},
                {"variables", "domains", "constraints"})
    n = _int(doc["variables"], "variables")
    domains = [_ints(d, f"domains[{i}]") for i, d in enumerate(_list(doc["domains"], "domains"))]
    if len(domains) != n:
        raise FormatError(f"domains: {len(domains)} domains for {n} variables")
    cons = []
    for i, c in enumerate(_list(doc["constraints"], "constraints")):
        where = f"constraints[{i}]"
        if not isinstance(c, dict):
            raise FormatError(f"{where}: expected an object")
        extra = set(c) - {"u", "v", "pairs"}
        if extra:
            raise FormatError(f"{where}: unknown field {sorted(extra)[0]!r}")
        for key in ("u", "v", "pairs"):
            if key not in c:
                raise FormatError(f"{where}: missing field {key!r}")
        pairs = []
        for j, p in enumerate(_list(c["pairs"], f"{where}.pairs")):
            pair = _ints(p, f"{where}.pairs[{j}]")
            if len(pair) != 2:
                raise FormatError(f"{where}.pairs[{j}]: expected two values")
            pairs.append(tuple(pair))
        cons.append(Constraint(_int(c["u"], f"{where}.u"), _int(c["v"], f"{where}.v"), frozenset(pairs)))
    comment = doc.get("comment")
    if comment is not None and not isinstance(comment, str):
        raise FormatError("comment: expected a string")
    return CspInstance(tuple(tuple(d) for d in domains), tuple(cons), comment)


def parse_setcover(text: str) -> SetCoverInstance:
    doc = _load(text, "setcover", {"universe", "sets", "k"}, {"universe", "sets", "k"})
    universe = [_tag(e, f"universe[{i}]") for i, e in enumerate(_list(doc["universe"], "universe"))]
    if not isinstance(doc["sets"], dict):
        raise FormatError("sets: expected an object")
    sets = {}
    for name, elems in doc["sets"].items():
        where = f"sets[{name!r}]"
        sets[name] = [_tag(e, f"{where}[{i}]") for i, e in enumerate(_list(elems, where))]
    return SetCoverInstance(tuple(universe), sets, _int(doc["k"], "k"))


def parse_assignment(text: str) -> Assignment:
    doc = _load(text, "assignment", {"variables", "values"}, {"values"})
    values = _ints(doc["values"], "values")
    if "variables" not in doc:
        return Assignment.total(values)
    variables = _ints(doc["variables"], "variables")
    if len(variables) != len(values):
        raise FormatError("values: length differs from variables")
    try:
        return Assignment(tuple(variables), tuple(values))
    except InvalidInput as exc:
        raise FormatError(f"variables: {exc}") from None


def _subset_key(key: str) -> tuple[int, ...]:
    try:
        parts = tuple(int(p) for p in key.split(","))
    except ValueError:
        raise FormatError(f"lists[{key!r}]: key must be comma-separated variable indices") from None
    if list(parts) != sorted(set(parts)):
        raise FormatError(f"lists[{key!r}]: subset must be strictly increasing")
    return parts


def parse_multiassignment(text: str) -> MultiAssignment:
    doc = _load(text, "multiassignment", {"level", "lists"}, {"lists"})
    lists = doc["lists"]
    if not isinstance(lists, dict):
        raise FormatError("lists: expected an object")
    level = doc.get("level")
    if level is None:
        level = "product" if any("," in k for k in lists) else "base"
    if level not in ("base", "product"):
        raise FormatError(f"level: expected 'base' or 'product', got {level!r}")
    out = {}
    for key, vals in lists.items():
        where = f"lists[{key!r}]"
        if not _list(vals, where):
            raise FormatError(f"{where}: empty list")
        if level == "base":
            try:
                x = int(key)
            except ValueError:
                raise FormatError(f"{where}: key must be a variable index") from None
            out[x] = _ints(vals, where)
        else:
            subset = _subset_key(key)
            entries = []
            for i, v in enumerate(vals):
                row = _ints(v, f"{where}[{i}]")
                if len(row) != len(subset):
                    raise FormatError(f"{where}[{i}]: expected {len(subset)} values")
                entries.append(Assignment(subset, tuple(row)))
            out[subset] = entries
    return MultiAssignment(out)


def read_text(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
