"""Graph file readers and JSON report helpers."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .graph import Graph, GraphError


class ParseError(ValueError):
    pass


def _edges_to_graph(n: int, edges: list[tuple[int, int]], where: str) -> Graph:
    try:
        return Graph(n, set(tuple(sorted(e)) for e in edges))
    except GraphError as exc:
        raise ParseError(f"{where}: {exc}") from exc


def parse_dimacs(text: str, name: str = "<input>") -> Graph:
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        loop = False
        try:
            if parts[0] == "p":
                if len(parts) != 4 or parts[1] not in ("edge", "col"):
                    raise ValueError
                n = int(parts[2])
                int(parts[3])
            elif parts[0] == "e":
                if len(parts) != 3:
                    raise ValueError
                i, j = int(parts[1]), int(parts[2])
                loop = i == j
                edges.append((i, j))
            else:
                raise ValueError
        except ValueError:
            raise ParseError(f"{name}:{lineno}: malformed line {raw.strip()!r}") from None
        if loop:
            raise ParseError(f"{name}:{lineno}: loops not allowed")
    if n is None:
        raise ParseError(f"{name}: missing 'p edge n m' header")
    return _edges_to_graph(n, edges, name)


def parse_edgelist(text: str, name: str = "<input>") -> Graph:
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "n" and n is None and not edges:
                if len(parts) != 2:
                    raise ValueError
                n = int(parts[1])
                continue
            if len(parts) != 2:
                raise ValueError
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"{name}:{lineno}: malformed line {raw.strip()!r}") from None
        if i == j:
            raise ParseError(f"{name}:{lineno}: loops not allowed")
        edges.append((i, j))
    if n is None:
        n = max((max(e) for e in edges), default=0)
    return _edges_to_graph(n, edges, name)


def parse_json_graph(text: str, name: str = "<input>") -> Graph:
    try:
        doc = json.loads(text)
        n = int(doc["n"])
        edges = [(int(i), int(j)) for i, j in doc.get("edges", [])]
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseError(f"{name}: malformed JSON graph ({exc})") from None
    for i, j in edges:
        if i == j:
            raise ParseError(f"{name}: loops not allowed")
    return _edges_to_graph(n, edges, name)


PARSERS = {"dimacs": parse_dimacs, "edgelist": parse_edgelist, "json": parse_json_graph}


def detect_format(path: Path, text: str) -> str:
    suffix = path.suffix.lower()
    if suffix == ".json":
        return "json"
    if suffix in (".dimacs", ".col", ".clq"):
        return "dimacs"
    for raw in text.splitlines():
        parts = raw.split()
        if not parts:
            continue
        if parts[0] in ("p", "c", "e"):
            return "dimacs"
        if parts[0].startswith("{"):
            return "json"
        return "edgelist"
    return "edgelist"


def parse_graph(path, fmt: str = "auto") -> tuple[Graph, str, bytes]:
    """Read a graph file; returns ``(graph, format_used, raw_bytes)``."""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    text = raw.decode("utf-8", errors="replace")
    if fmt == "auto":
        fmt = detect_format(path, text)
    if fmt not in PARSERS:
        raise ParseError(f"unknown graph format {fmt!r}")
    return PARSERS[fmt](text, str(path)), fmt, raw


def rat(v) -> str:
    v = Fraction(v)
    return f"{v.numerator}/{v.denominator}"


def rats(vs) -> list[str]:
    return [rat(v) for v in vs]


def vset(s) -> list[int]:
    return sorted(s)
