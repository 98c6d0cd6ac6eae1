"""Graph and signing file formats.

* JSON: ``{"n": int, "edges": [[u, v], ...]}``; repeated pairs are parallel
  edges, ``[u, u]`` is a loop, edge ids follow file order.
* edge list: a header line ``n m`` followed by ``m`` lines ``u v``;
  ``#`` starts a comment.
* DOT: export only.
* signing JSON: ``{"signs": [+1 | -1, ...]}`` indexed by edge id.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import ParseError
from .graph import Graph

FORMATS = ("json", "edgelist", "dot")


def graph_to_dict(g: Graph) -> dict:
    return {"n": g.n, "edges": g.edges.tolist()}


def graph_from_dict(data) -> Graph:
    if not isinstance(data, dict) or "n" not in data or "edges" not in data:
        raise ParseError('graph JSON must be an object with "n" and "edges"')
    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ParseError('"n" must be a nonnegative integer')
    edges = data["edges"]
    if not isinstance(edges, list):
        raise ParseError('"edges" must be a list')
    for i, e in enumerate(edges):
        if (not isinstance(e, list) or len(e) != 2
                or not all(isinstance(x, int) and not isinstance(x, bool) for x in e)):
            raise ParseError(f"edge #{i} must be a pair of integers, got {e!r}")
    try:
        return Graph(n, edges)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def dumps_json(g: Graph) -> str:
    return json.dumps(graph_to_dict(g))


def loads_json(text: str) -> Graph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"malformed JSON at line {exc.lineno}, column {exc.colno} (offset {exc.pos}): {exc.msg}"
        ) from exc
    return graph_from_dict(data)


def dumps_edgelist(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges.tolist())
    return "\n".join(lines) + "\n"


def loads_edgelist(text: str) -> Graph:
    header = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            nums = [int(p) for p in parts]
        except ValueError:
            raise ParseError(f"line {lineno}: expected integers, got {raw.strip()!r}") from None
        if len(nums) != 2:
            raise ParseError(f"line {lineno}: expected two integers, got {len(nums)}")
        if header is None:
            header = nums
        else:
            edges.append(nums)
    if header is None:
        raise ParseError("empty edge list: missing 'n m' header")
    n, m = header
    if len(edges) != m:
        raise ParseError(f"header declares {m} edges but {len(edges)} were found")
    try:
        return Graph(n, edges)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def dumps_dot(g: Graph, name: str = "G") -> str:
    lines = [f"graph {name} {{"]
    lines.extend(f"  {v};" for v in range(g.n))
    lines.extend(f"  {u} -- {v};" for u, v in g.edges.tolist())
    lines.append("}")
    return "\n".join(lines) + "\n"


def detect_format(path) -> str:
    suffix = Path(path).suffix.lower()
    if suffix == ".json":
        return "json"
    if suffix == ".dot" or suffix == ".gv":
        return "dot"
    return "edgelist"


def dumps(g: Graph, fmt: str) -> str:
    if fmt == "json":
        return dumps_json(g)
    if fmt == "edgelist":
        return dumps_edgelist(g)
    if fmt == "dot":
        return dumps_dot(g)
    raise ValueError(f"unknown format {fmt!r}")


def loads(text: str, fmt: str) -> Graph:
    if fmt == "json":
        return loads_json(text)
    if fmt == "edgelist":
        return loads_edgelist(text)
    if fmt == "dot":
        raise ParseError("DOT is an export-only format")
    raise ValueError(f"unknown format {fmt!r}")


def read_graph(path, fmt: str | None = None) -> Graph:
    return loads(Path(path).read_text(), fmt or detect_format(path))


def write_graph(g: Graph, path, fmt: str | None = None) -> None:
    Path(path).write_text(dumps(g, fmt or detect_format(path)))


def convert(src, dst, fmt: str | None = None, src_fmt: str | None = None) -> Graph:
    """Read ``src`` and write it to ``dst`` in ``fmt`` (default: from suffix)."""
    g = read_graph(src, src_fmt)
    write_graph(g, dst, fmt)
    return g


def signing_to_dict(w) -> dict:
    return {"signs": [int(s) for s in np.asarray(w).tolist()]}


def signing_from_dict(data) -> np.ndarray:
    if not isinstance(data, dict) or not isinstance(data.get("signs"), list):
        raise ParseError('signing JSON must be an object with a "signs" list')
    signs = data["signs"]
    if any(s not in (1, -1) or isinstance(s, bool) for s in signs):
        raise ParseError("signs must be +1 or -1")
    return np.asarray(signs, dtype=np.int8)


def read_signing(path) -> np.ndarray:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON at offset {exc.pos}: {exc.msg}") from exc
    return signing_from_dict(data)


def write_signing(w, path) -> None:
    Path(path).write_text(json.dumps(signing_to_dict(w)))


def jsonable(value):
    """Recursively convert numpy scalars/arrays and infinities for ``json.dumps``."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        value = float(value)
    if isinstance(value, float) and math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value
