"""The ``sg`` text format for signed graphs.

::

    # optional comments
    sg <n> <m>
    <u> <v> <+|->      (m lines, 0-based vertex ids)

Blank lines and ``#`` lines may appear anywhere. Serialization always writes
the normalized edge order, so ``serialize_graph(parse_graph(text))`` is
canonical.
"""
from __future__ import annotations

from .core import NEG, POS, GraphError, SignedGraph, build_graph


class GraphFormatError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def _fields(raw: str) -> list[tuple[str, int]]:
    """Whitespace-separated tokens with their 1-based columns."""
    out, col = [], 0
    for tok in raw.split():
        col = raw.index(tok, col)
        out.append((tok, col + 1))
        col += len(tok)
    return out


def _int(tok: str, col: int, lineno: int, what: str) -> int:
    try:
        value = int(tok)
    except ValueError:
        raise GraphFormatError(f"{what} must be an integer, got {tok!r}", lineno, col) from None
    if value < 0:
        raise GraphFormatError(f"{what} must be >= 0, got {value}", lineno, col)
    return value


def parse_graph(text: str) -> SignedGraph:
    lines = [(i, raw) for i, raw in enumerate(text.splitlines(), 1) if raw.strip() and not raw.lstrip().startswith("#")]
    if not lines:
        raise GraphFormatError("missing 'sg <n> <m>' header", 1)
    lineno, raw = lines[0]
    head = _fields(raw)
    if len(head) != 3 or head[0][0] != "sg":
        raise GraphFormatError("header must read 'sg <n> <m>'", lineno, head[0][1])
    n = _int(*head[1], lineno, "vertex count")
    m = _int(*head[2], lineno, "edge count")
    body = lines[1:]
    if len(body) != m:
        where = body[m][0] if len(body) > m else (body[-1][0] + 1 if body else lineno + 1)
        raise GraphFormatError(f"header declares {m} edges but {len(body)} edge lines follow", where)
    edges = []
    seen: dict[tuple[int, int], int] = {}
    for lineno, raw in body:
        parts = _fields(raw)
        if len(parts) != 3:
            raise GraphFormatError("edge line must read '<u> <v> <+|->'", lineno, parts[0][1])
        u = _int(*parts[0], lineno, "vertex")
        v = _int(*parts[1], lineno, "vertex")
        tok, col = parts[2]
        if tok not in ("+", "-"):
            raise GraphFormatError(f"sign must be '+' or '-', got {tok!r}", lineno, col)
        for x, c in ((u, parts[0][1]), (v, parts[1][1])):
            if x >= n:
                raise GraphFormatError(f"vertex {x} out of range [0, {n})", lineno, c)
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u}", lineno, parts[0][1])
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(f"duplicate edge {key[0]}-{key[1]} (first on line {seen[key]})", lineno, parts[0][1])
        seen[key] = lineno
        edges.append((u, v, POS if tok == "+" else NEG))
    try:
        return build_graph(n, edges)
    except GraphError as exc:  # pragma: no cover - every case is caught above
        raise GraphFormatError(str(exc), lineno) from exc


def serialize_graph(g: SignedGraph) -> str:
    rows = [f"sg {g.n} {g.m}"] + [f"{u} {v} {'+' if s == POS else '-'}" for u, v, s in g.edges]
    return "\n".join(rows) + "\n"


def read_graph(path: str) -> SignedGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def write_graph(g: SignedGraph, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_graph(g))
