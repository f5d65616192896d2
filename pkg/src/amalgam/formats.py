"""Line-oriented text formats: language files, family files, graph exports.

Grammar (all formats share ``#`` comments and blank-line tolerance):

language file::

    parts M
    colours I J : tok1 tok2 ...     # one line per part pair, all required

family file::

    [012; a a b]          # parts as digits; colours in lex pair order
    [0,2,3; a b c]        # comma form for part indices above 9

graph export::

    graph M N
    v ID PART             # N of these, ids 0..N-1 in order
    e U V TOK             # one per cross-part pair, lex order

Parsers report positions; ``parse -> serialize -> parse`` is the
identity on anything valid.
"""

from __future__ import annotations

import re
from typing import Optional, Sequence

from .core import Language, Monic, MultipartiteGraph
from .family import Family

__all__ = [
    "FormatError",
    "parse_family",
    "parse_graph",
    "parse_language",
    "parse_monic",
    "serialize_family",
    "serialize_graph",
    "serialize_language",
    "serialize_monic",
]


class FormatError(ValueError):
    """Parse failure with a position.  Lines and columns are 1-based."""

    def __init__(self, message: str, line: Optional[int] = None,
                 column: Optional[int] = None, path: str = "<input>"):
        self.message = message
        self.line = line
        self.column = column
        self.path = path
        where = path
        if line is not None:
            where += f":{line}"
            if column is not None:
                where += f":{column}"
        super().__init__(f"{where}: {message}")


def _significant_lines(text: str):
    """(line number, stripped content) with comments and blanks removed."""
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        if body.strip():
            yield no, body


def _tokens(body: str):
    return [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", body)]


def parse_language(text: str, path: str = "<language>") -> Language:
    lines = list(_significant_lines(text))
    if not lines:
        raise FormatError("empty language file", path=path)
    no, body = lines[0]
    toks = _tokens(body)
    if len(toks) != 2 or toks[0][0] != "parts":
        raise FormatError("expected 'parts M'", no, toks[0][1] if toks else 1, path)
    try:
        m = int(toks[1][0])
    except ValueError:
        raise FormatError(f"part count {toks[1][0]!r} is not a number",
                          no, toks[1][1], path) from None
    if m < 2:
        raise FormatError("need at least two parts", no, toks[1][1], path)

    sets: dict[tuple[int, int], tuple[str, ...]] = {}
    for no, body in lines[1:]:
        toks = _tokens(body)
        if toks[0][0] != "colours":
            raise FormatError(f"expected 'colours', got {toks[0][0]!r}",
                              no, toks[0][1], path)
        if len(toks) < 3:
            raise FormatError("expected 'colours I J : tok...'", no, toks[0][1], path)
        try:
            i, j = int(toks[1][0]), int(toks[2][0])
        except ValueError:
            raise FormatError("part indices must be numbers", no, toks[1][1], path) from None
        if not (0 <= i < m and 0 <= j < m) or i == j:
            raise FormatError(f"bad part pair ({i}, {j}) for {m} parts",
                              no, toks[1][1], path)
        if i > j:
            i, j = j, i
        if len(toks) < 4 or toks[3][0] != ":":
            raise FormatError("expected ':' after the part pair", no,
                              toks[3][1] if len(toks) > 3 else len(body) + 1, path)
        names = [t for t, _ in toks[4:]]
        if not names:
            raise FormatError(f"pair ({i}, {j}) lists no colours", no, len(body) + 1, path)
        if len(set(names)) != len(names):
            dup = next(t for t in names if names.count(t) > 1)
            col = next(c for t, c in toks[4:] if t == dup)
            raise FormatError(f"duplicate colour token {dup!r}", no, col, path)
        if (i, j) in sets:
            raise FormatError(f"pair ({i}, {j}) given twice", no, toks[1][1], path)
        sets[(i, j)] = tuple(names)

    missing = [(i, j) for i in range(m) for j in range(i + 1, m) if (i, j) not in sets]
    if missing:
        raise FormatError(f"missing colour lines for pairs {missing}",
                          lines[-1][0], None, path)
    return Language.build(m, sets)


def serialize_language(lang: Language) -> str:
    out = [f"parts {lang.part_count}"]
    for i, j in lang.pairs:
        out.append(f"colours {i} {j} : " + " ".join(lang.colour_names(i, j)))
    return "\n".join(out) + "\n"


_MONIC_RE = re.compile(r"^\s*\[\s*([^;\]]*?)\s*;\s*([^\]]*?)\s*\]\s*$")


def parse_monic(body: str, lang: Language, line: int = 1,
                path: str = "<family>") -> Monic:
    m = _MONIC_RE.match(body)
    if not m:
        raise FormatError("expected '[PARTS; tok tok ...]'", line,
                          body.index(body.strip()[0]) + 1 if body.strip() else 1, path)
    part_spec = m.group(1)
    if "," in part_spec:
        pieces = [p.strip() for p in part_spec.split(",")]
    else:
        pieces = list(part_spec.replace(" ", ""))
    try:
        parts = tuple(int(p) for p in pieces)
    except ValueError:
        raise FormatError(f"bad part list {part_spec!r}", line,
                          m.start(1) + 1, path) from None
    if list(parts) != sorted(set(parts)):
        raise FormatError(f"part list {parts} must be strictly increasing",
                          line, m.start(1) + 1, path)
    if any(not 0 <= p < lang.part_count for p in parts):
        raise FormatError(
            f"part index out of range for {lang.part_count} parts in {parts}",
            line, m.start(1) + 1, path)
    if len(parts) < 2:
        raise FormatError("a monic needs at least two parts", line, m.start(1) + 1, path)

    toks = [(t.group(), m.start(2) + t.start() + 1)
            for t in re.finditer(r"\S+", m.group(2))]
    pairs = [(a, b) for idx, a in enumerate(parts) for b in parts[idx + 1:]]
    if len(toks) != len(pairs):
        raise FormatError(
            f"{len(parts)} parts need {len(pairs)} colours, got {len(toks)}",
            line, m.start(2) + 1, path)
    colours = []
    for (i, j), (tok, col) in zip(pairs, toks):
        names = lang.colour_names(i, j)
        if tok not in names:
            raise FormatError(
                f"unknown colour {tok!r} for pair ({i}, {j}); have {' '.join(names)}",
                line, col, path)
        colours.append(names.index(tok))
    return Monic(parts, tuple(colours))


def serialize_monic(a: Monic, lang: Language) -> str:
    if all(p < 10 for p in a.parts):
        head = "".join(str(p) for p in a.parts)
    else:
        head = ",".join(str(p) for p in a.parts)
    toks = [lang.colour_label(i, j, a.colour(i, j)) for i, j in a.pair_list]
    return f"[{head}; {' '.join(toks)}]"


def parse_family(text: str, lang: Language, path: str = "<family>") -> Family:
    """Monic-per-line parse.  Validation (part counts, embeddings) is the
    caller's business; this only enforces the grammar."""
    members = []
    for no, body in _significant_lines(text):
        members.append(parse_monic(body, lang, line=no, path=path))
    return Family.of(lang, members)


def serialize_family(f: Family) -> str:
    return "".join(serialize_monic(a, f.lang) + "\n" for a in f.members)


def parse_graph(text: str, lang: Language, path: str = "<graph>") -> MultipartiteGraph:
    lines = list(_significant_lines(text))
    if not lines:
        raise FormatError("empty graph file", path=path)
    no, body = lines[0]
    toks = _tokens(body)
    if len(toks) != 3 or toks[0][0] != "graph":
        raise FormatError("expected 'graph M N'", no, toks[0][1] if toks else 1, path)
    try:
        m, n = int(toks[1][0]), int(toks[2][0])
    except ValueError:
        raise FormatError("graph header takes two numbers", no, toks[1][1], path) from None
    if m != lang.part_count:
        raise FormatError(
            f"graph written for {m} parts, language has {lang.part_count}",
            no, toks[1][1], path)

    parts: list[Optional[int]] = [None] * n
    rows = [[-1] * n for _ in range(n)]
    seen_edges: set[tuple[int, int]] = set()
    for no, body in lines[1:]:
        toks = _tokens(body)
        kind = toks[0][0]
        if kind == "v":
            if len(toks) != 3:
                raise FormatError("expected 'v ID PART'", no, toks[0][1], path)
            try:
                vid, part = int(toks[1][0]), int(toks[2][0])
            except ValueError:
                raise FormatError("vertex fields must be numbers", no,
                                  toks[1][1], path) from None
            if not 0 <= vid < n:
                raise FormatError(f"vertex id {vid} outside 0..{n - 1}", no,
                                  toks[1][1], path)
            if not 0 <= part < m:
                raise FormatError(f"part {part} outside 0..{m - 1}", no,
                                  toks[2][1], path)
            if parts[vid] is not None:
                raise FormatError(f"vertex {vid} declared twice", no, toks[1][1], path)
            parts[vid] = part
        elif kind == "e":
            if len(toks) != 4:
                raise FormatError("expected 'e U V TOK'", no, toks[0][1], path)
            try:
                u, v = int(toks[1][0]), int(toks[2][0])
            except ValueError:
                raise FormatError("edge endpoints must be numbers", no,
                                  toks[1][1], path) from None
            for x, col in ((u, toks[1][1]), (v, toks[2][1])):
                if not 0 <= x < n or parts[x] is None:
                    raise FormatError(f"edge uses undeclared vertex {x}", no, col, path)
            if parts[u] == parts[v]:
                raise FormatError(f"vertices {u} and {v} share part {parts[u]}",
                                  no, toks[1][1], path)
            key = (min(u, v), max(u, v))
            if key in seen_edges:
                raise FormatError(f"edge {key} given twice", no, toks[1][1], path)
            seen_edges.add(key)
            names = lang.colour_names(parts[u], parts[v])
            tok = toks[3][0]
            if tok not in names:
                raise FormatError(
                    f"unknown colour {tok!r} for pair ({parts[u]}, {parts[v]})",
                    no, toks[3][1], path)
            rows[u][v] = rows[v][u] = names.index(tok)
        else:
            raise FormatError(f"expected 'v' or 'e', got {kind!r}", no, toks[0][1], path)

    for vid, part in enumerate(parts):
        if part is None:
            raise FormatError(f"vertex {vid} never declared", lines[-1][0], None, path)
    undeclared = [
        (u, v)
        for u in range(n) for v in range(u + 1, n)
        if parts[u] != parts[v] and (u, v) not in seen_edges
    ]
    if undeclared:
        raise FormatError(
            f"{len(undeclared)} cross-part edges missing (first: {undeclared[0]})",
            lines[-1][0], None, path)
    return MultipartiteGraph(lang, tuple(parts), tuple(tuple(r) for r in rows))


def serialize_graph(g: MultipartiteGraph) -> str:
    out = [f"graph {g.lang.part_count} {g.n}"]
    for vid, part in enumerate(g.parts):
        out.append(f"v {vid} {part}")
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if g.parts[u] != g.parts[v]:
                tok = g.lang.colour_label(g.parts[u], g.parts[v], g.rows[u][v])
                out.append(f"e {u} {v} {tok}")
    return "\n".join(out) + "\n"
