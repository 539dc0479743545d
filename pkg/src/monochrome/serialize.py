"""Reading and writing graphs, certificates and balancing results.

Graph JSON: {"n": int, "colours": ["red", "blue", ...], "edges": [[u, v, c], ...]}
with an optional "multigraph": true for reduced multigraphs.  The edge-list
text format has one "u v colour" per line (colour as index or name), '#'
comments, and an optional leading "n N" line.
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import GraphFormatError
from .exact_partition import CyclePartitionCertificate
from .graph_core import DEFAULT_COLOURS, ColouredGraph, ColouredMultiGraph


def _locate(text: str, needle: str, start: int = 0) -> tuple[int, int]:
    pos = text.find(needle, start)
    if pos < 0:
        return 1, 1
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def _load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(exc.msg, exc.lineno, exc.colno) from None


def _edge_position(text: str, index: int) -> tuple[int, int]:
    """Best-effort line/column of the index-th edge triple inside "edges"."""
    base = text.find('"edges"')
    if base < 0:
        return 1, 1
    pos = text.find("[", base)
    for _ in range(index + 1):
        pos = text.find("[", pos + 1)
        if pos < 0:
            return _locate(text, '"edges"')
    line = text.count("\n", 0, pos) + 1
    return line, pos - (text.rfind("\n", 0, pos) + 1) + 1


def graph_from_json_text(text: str):
    data = _load_json(text)
    if not isinstance(data, dict):
        raise GraphFormatError("top level must be an object", 1, 1)
    if "n" not in data or not isinstance(data["n"], int) or data["n"] < 0:
        raise GraphFormatError('"n" must be a non-negative integer', *_locate(text, '"n"'))
    colours = data.get("colours")
    if colours is not None and (not isinstance(colours, list) or not all(isinstance(c, str) for c in colours)):
        raise GraphFormatError('"colours" must be a list of names', *_locate(text, '"colours"'))
    edges = data.get("edges", [])
    if not isinstance(edges, list):
        raise GraphFormatError('"edges" must be a list', *_locate(text, '"edges"'))
    palette = list(colours) if colours else list(DEFAULT_COLOURS)
    triples = []
    for i, e in enumerate(edges):
        ok = isinstance(e, list) and len(e) == 3 and all(isinstance(x, int) and not isinstance(x, bool) for x in e[:2])
        if ok and isinstance(e[2], str):
            if e[2] not in palette:
                raise GraphFormatError(f"unknown colour {e[2]!r}", *_edge_position(text, i))
            e = [e[0], e[1], palette.index(e[2])]
        if not ok or not isinstance(e[2], int):
            raise GraphFormatError(f"edge {i} must be [u, v, colour]", *_edge_position(text, i))
        triples.append(tuple(e))
    cls = ColouredMultiGraph if data.get("multigraph") else ColouredGraph
    try:
        return cls(data["n"], triples, colours)
    except ValueError as exc:
        raise GraphFormatError(str(exc), *_locate(text, '"edges"')) from None


def graph_from_edge_list(text: str, colours=None):
    palette = list(colours or DEFAULT_COLOURS)
    n = None
    triples = []
    top = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        tokens = line.split()
        col_of = [raw.find(t) + 1 for t in tokens]
        if tokens[0] == "n" and n is None and not triples:
            if len(tokens) != 2 or not tokens[1].isdigit():
                raise GraphFormatError("expected 'n <count>'", lineno, col_of[0])
            n = int(tokens[1])
            continue
        if len(tokens) != 3:
            raise GraphFormatError(f"expected 'u v colour', got {len(tokens)} fields", lineno, col_of[0])
        vals = []
        for k in range(2):
            if not tokens[k].isdigit():
                raise GraphFormatError(f"vertex id {tokens[k]!r} is not a non-negative integer", lineno, col_of[k])
            vals.append(int(tokens[k]))
        c = tokens[2]
        if c.isdigit():
            vals.append(int(c))
        elif c in palette:
            vals.append(palette.index(c))
        else:
            raise GraphFormatError(f"unknown colour {c!r}", lineno, col_of[2])
        triples.append((tuple(vals), lineno))
        top = max(top, vals[0], vals[1])
    if n is None:
        n = top + 1
    for (u, v, _), lineno in triples:
        if u >= n or v >= n:
            raise GraphFormatError(f"vertex out of range for n={n}", lineno, 1)
    try:
        return ColouredGraph(n, [t for t, _ in triples], colours)
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from None


def graph_to_json(g) -> dict:
    out = {"n": g.n, "colours": list(g.colours), "edges": [list(e) for e in g.coloured_edges()]}
    if isinstance(g, ColouredMultiGraph):
        out["multigraph"] = True
    return out


def graph_to_edge_list(g) -> str:
    lines = [f"n {g.n}"] + [f"{u} {v} {g.colours[c]}" for u, v, c in g.coloured_edges()]
    return "\n".join(lines) + "\n"


def read_graph(path: str | Path):
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise GraphFormatError(f"cannot read {p}: {exc.strerror}") from None
    if p.suffix == ".json" or text.lstrip().startswith("{"):
        return graph_from_json_text(text)
    return graph_from_edge_list(text)


def certificate_from_json_text(text: str, colours=DEFAULT_COLOURS) -> CyclePartitionCertificate:
    data = _load_json(text)
    if isinstance(data, dict) and isinstance(data.get("certificate"), dict):
        data = data["certificate"]  # accept the full output of `solve`
    if not isinstance(data, dict) or not isinstance(data.get("parts"), list):
        raise GraphFormatError('certificate needs a "parts" list', 1, 1)
    parts = []
    for i, p in enumerate(data["parts"]):
        if not isinstance(p, dict) or not isinstance(p.get("vertices"), list):
            raise GraphFormatError(f"part {i} needs a vertex list", *_locate(text, '"parts"'))
        c = p.get("colour", 0)
        if isinstance(c, str):
            if c not in colours:
                raise GraphFormatError(f"unknown colour {c!r} in part {i}", *_locate(text, f'"{c}"'))
            c = list(colours).index(c)
        if not isinstance(c, int) or not all(isinstance(v, int) for v in p["vertices"]):
            raise GraphFormatError(f"part {i} has non-integer entries", *_locate(text, '"parts"'))
        parts.append((c, p["vertices"]))
    return CyclePartitionCertificate.from_parts(parts)


def read_certificate(path: str | Path, colours=DEFAULT_COLOURS) -> CyclePartitionCertificate:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise GraphFormatError(f"cannot read {path}: {exc.strerror}") from None
    return certificate_from_json_text(text, colours)


def dumps(obj) -> str:
    """Canonical JSON text: sorted keys, trailing newline."""
    return json.dumps(obj, sort_keys=True) + "\n"
