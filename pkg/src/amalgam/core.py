"""Core value types for finite coloured multipartite graphs.

A *language* fixes a number of parts m and, for every unordered pair of
parts {i, j}, a finite non-empty set of edge colours C_ij.  A graph over
the language assigns every vertex to a part and gives every cross-part
vertex pair exactly one colour from the matching colour set; vertices in
the same part are never joined.  A *monic* graph has at most one vertex
per part, so it is determined by its set of parts and one colour per
part pair — these are the building blocks everything else works with.

Isomorphisms come in two strengths:

* *labelled* isomorphism keeps parts and colours fixed and only permutes
  vertices inside each part (this is the notion used by embeddings);
* *colour* isomorphism additionally permutes parts (compatibly with the
  colour-set sizes) and relabels each pair's colours by a bijection.

``canonical_form`` canonicalizes modulo the second notion,
``labelled_key`` modulo the first.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence


def part_pairs(m: int) -> tuple[tuple[int, int], ...]:
    """All unordered part pairs (i, j) with i < j, in lexicographic order."""
    return tuple((i, j) for i in range(m) for j in range(i + 1, m))


@dataclass(frozen=True)
class Language:
    """Part count plus named colour alphabets per part pair.

    ``colour_sets`` is aligned with ``part_pairs(part_count)``.  The
    constructor is permissive (empty alphabets are representable) so that
    ``validate_language`` has something to report on; code downstream of a
    clean validation may assume every pair has at least one colour.
    """

    part_count: int
    colour_sets: tuple[tuple[str, ...], ...]

    @classmethod
    def build(cls, part_count: int, sets: dict[tuple[int, int], Sequence[str]]) -> "Language":
        aligned = []
        for pair in part_pairs(part_count):
            names = sets.get(pair, sets.get((pair[1], pair[0]), ()))
            aligned.append(tuple(names))
        return cls(part_count, tuple(aligned))

    @classmethod
    def uniform(cls, part_count: int, names: Sequence[str] = ("a", "b", "c")) -> "Language":
        return cls(part_count, tuple(tuple(names) for _ in part_pairs(part_count)))

    @cached_property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        return part_pairs(self.part_count)

    @cached_property
    def _pair_index(self) -> dict[tuple[int, int], int]:
        return {pair: k for k, pair in enumerate(self.pairs)}

    def pair_index(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        return self._pair_index[(i, j)]

    def colour_names(self, i: int, j: int) -> tuple[str, ...]:
        return self.colour_sets[self.pair_index(i, j)]

    def size(self, i: int, j: int) -> int:
        """|C_ij|, the number of colours available on pair {i, j}."""
        return len(self.colour_sets[self.pair_index(i, j)])

    def colours(self, i: int, j: int) -> range:
        return range(self.size(i, j))

    @cached_property
    def max_colours(self) -> int:
        """g = max |C_ij| over all pairs (0 for degenerate languages)."""
        return max((len(s) for s in self.colour_sets), default=0)

    def completeness_bound(self) -> int:
        """N = m * g: amalgamation over bases larger than N reduces to smaller bases."""
        return self.part_count * self.max_colours

    def colour_label(self, i: int, j: int, c: int) -> str:
        names = self.colour_names(i, j)
        return names[c] if 0 <= c < len(names) else f"?{c}"


def validate_language(lang: Language) -> list[str]:
    """Report structural violations; an empty list means the language is usable."""
    problems = []
    if lang.part_count < 2:
        problems.append(f"part count {lang.part_count} is below 2")
    if len(lang.colour_sets) != len(part_pairs(lang.part_count)):
        problems.append("colour sets are not aligned with the part-pair list")
        return problems
    for pair, names in zip(lang.pairs, lang.colour_sets):
        if not names:
            problems.append(f"pair {pair} has an empty colour set")
        if len(set(names)) != len(names):
            problems.append(f"pair {pair} repeats a colour name")
    return problems


@dataclass(frozen=True, order=True)
class Monic:
    """A graph with at most one vertex per part: parts + one colour per pair.

    ``parts`` is strictly increasing; ``colours`` lists colour indices for
    the part pairs of ``parts`` in lexicographic order, so a monic on k
    parts stores k*(k-1)/2 colours.
    """

    parts: tuple[int, ...]
    colours: tuple[int, ...]

    def __post_init__(self):
        if list(self.parts) != sorted(set(self.parts)):
            raise ValueError(f"parts must be strictly increasing, got {self.parts}")
        expected = len(self.parts) * (len(self.parts) - 1) // 2
        if len(self.colours) != expected:
            raise ValueError(
                f"{len(self.parts)} parts need {expected} colours, got {len(self.colours)}"
            )

    @classmethod
    def from_edges(cls, parts: Iterable[int], edges: dict[tuple[int, int], int]) -> "Monic":
        ps = tuple(sorted(parts))
        cols = []
        for i, j in itertools.combinations(ps, 2):
            if (i, j) in edges:
                cols.append(edges[(i, j)])
            elif (j, i) in edges:
                cols.append(edges[(j, i)])
            else:
                raise ValueError(f"missing colour for pair ({i}, {j})")
        return cls(ps, tuple(cols))

    @cached_property
    def pair_list(self) -> tuple[tuple[int, int], ...]:
        return tuple(itertools.combinations(self.parts, 2))

    @cached_property
    def colour_map(self) -> dict[tuple[int, int], int]:
        return dict(zip(self.pair_list, self.colours))

    @cached_property
    def part_set(self) -> frozenset[int]:
        return frozenset(self.parts)

    def defined_on(self, i: int, j: int) -> bool:
        return i in self.part_set and j in self.part_set

    def colour(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        return self.colour_map[(i, j)]

    def restrict(self, parts: Iterable[int]) -> "Monic":
        keep = sorted(set(parts) & self.part_set)
        return Monic(tuple(keep), tuple(self.colour(i, j) for i, j in itertools.combinations(keep, 2)))

    def with_edge(self, i: int, j: int, c: int) -> "Monic":
        if i > j:
            i, j = j, i
        cols = list(self.colours)
        cols[self.pair_list.index((i, j))] = c
        return Monic(self.parts, tuple(cols))

    def embeds_in(self, other: "Monic") -> bool:
        """Parts-fixed embedding between monics: containment with equal colours."""
        if not self.part_set <= other.part_set:
            return False
        return all(other.colour(i, j) == c for (i, j), c in zip(self.pair_list, self.colours))

    def describe(self, lang: Language) -> str:
        sep = "" if all(p < 10 for p in self.parts) else ","
        body = " ".join(
            lang.colour_label(i, j, c) for (i, j), c in zip(self.pair_list, self.colours)
        )
        return f"[{sep.join(str(p) for p in self.parts)}; {body}]"


def recolour_edge(a: Monic, pair: tuple[int, int], c: int, lang: Optional[Language] = None) -> Monic:
    """Copy of ``a`` with the {i, j} edge recoloured to ``c``.

    The monic must be defined on both parts; when a language is supplied the
    new colour is bounds-checked against C_ij.
    """
    i, j = min(pair), max(pair)
    if not a.defined_on(i, j):
        raise ValueError(f"monic on parts {a.parts} has no ({i}, {j}) edge")
    if lang is not None and not 0 <= c < lang.size(i, j):
        raise ValueError(f"colour {c} out of range for pair ({i}, {j})")
    return a.with_edge(i, j, c)


def validate_monic(a: Monic, lang: Language) -> list[str]:
    problems = []
    for p in a.parts:
        if not 0 <= p < lang.part_count:
            problems.append(f"part {p} outside the language")
    if not problems:
        for (i, j), c in zip(a.pair_list, a.colours):
            if not 0 <= c < lang.size(i, j):
                problems.append(f"colour index {c} out of range on pair ({i}, {j})")
    return problems


@dataclass(frozen=True)
class MultipartiteGraph:
    """A finite totally-coloured multipartite graph.

    ``parts[v]`` is the part of vertex v; ``rows`` is the full symmetric
    colour matrix with -1 on the diagonal and between same-part vertices.
    """

    lang: Language
    parts: tuple[int, ...]
    rows: tuple[tuple[int, ...], ...]

    @classmethod
    def from_edges(
        cls, lang: Language, parts: Sequence[int], edges: dict[tuple[int, int], int]
    ) -> "MultipartiteGraph":
        n = len(parts)
        matrix = [[-1] * n for _ in range(n)]
        for (u, v), c in edges.items():
            matrix[u][v] = c
            matrix[v][u] = c
        for u in range(n):
            for v in range(u + 1, n):
                if parts[u] == parts[v]:
                    if matrix[u][v] != -1:
                        raise ValueError(f"vertices {u},{v} share part {parts[u]} but are joined")
                elif matrix[u][v] == -1:
                    raise ValueError(f"missing colour between vertices {u} and {v}")
        return cls(lang, tuple(parts), tuple(tuple(r) for r in matrix))

    @classmethod
    def from_monic(cls, lang: Language, a: Monic) -> "MultipartiteGraph":
        idx = {p: t for t, p in enumerate(a.parts)}
        edges = {(idx[i], idx[j]): c for (i, j), c in zip(a.pair_list, a.colours)}
        return cls.from_edges(lang, a.parts, edges)

    @property
    def n(self) -> int:
        return len(self.parts)

    def colour(self, u: int, v: int) -> int:
        return self.rows[u][v]

    @cached_property
    def verts_by_part(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {}
        for v, p in enumerate(self.parts):
            out.setdefault(p, []).append(v)
        return {p: tuple(vs) for p, vs in out.items()}

    def induced(self, vertices: Sequence[int]) -> "MultipartiteGraph":
        vs = list(vertices)
        parts = tuple(self.parts[v] for v in vs)
        rows = tuple(tuple(self.rows[u][v] for v in vs) for u in vs)
        return MultipartiteGraph(self.lang, parts, rows)

    def monic_at(self, selection: Sequence[int]) -> Monic:
        """The monic induced by one chosen vertex per (distinct) part."""
        sel = sorted(selection, key=lambda v: self.parts[v])
        ps = tuple(self.parts[v] for v in sel)
        cols = tuple(self.rows[u][v] for u, v in itertools.combinations(sel, 2))
        return Monic(ps, cols)


def validate_graph(g: MultipartiteGraph) -> list[str]:
    problems = []
    for v, p in enumerate(g.parts):
        if not 0 <= p < g.lang.part_count:
            problems.append(f"vertex {v} has part {p} outside the language")
    if problems:
        return problems
    for u in range(g.n):
        for v in range(u + 1, g.n):
            c = g.rows[u][v]
            if g.parts[u] == g.parts[v]:
                if c != -1:
                    problems.append(f"same-part vertices {u},{v} are joined")
            else:
                if c == -1:
                    problems.append(f"missing colour between {u} and {v}")
                elif not 0 <= c < g.lang.size(g.parts[u], g.parts[v]):
                    problems.append(f"colour {c} out of range between {u} and {v}")
            if g.rows[u][v] != g.rows[v][u]:
                problems.append(f"colour matrix not symmetric at ({u}, {v})")
    return problems


def monic_subgraphs(g: MultipartiteGraph) -> Iterator[tuple[tuple[int, ...], Monic]]:
    """All induced monic subgraphs on >= 2 parts, one per vertex selection.

    Yields (vertex selection ordered by part, monic).  Selections that pick
    the same monic type through different vertices are reported separately.
    """
    by_part = g.verts_by_part
    occupied = sorted(by_part)
    for k in range(2, len(occupied) + 1):
        for parts in itertools.combinations(occupied, k):
            for sel in itertools.product(*(by_part[p] for p in parts)):
                yield sel, g.monic_at(sel)


def find_embedding(a: MultipartiteGraph, b: MultipartiteGraph) -> Optional[tuple[int, ...]]:
    """Parts-fixed colour-preserving injection of ``a`` into ``b``, if any.

    Returns images indexed by ``a``'s vertices.  Backtracks over a's
    vertices, most-constrained part first.
    """
    cand = []
    for v in range(a.n):
        cand.append(b.verts_by_part.get(a.parts[v], ()))
        if not cand[v]:
            return None
    order = sorted(range(a.n), key=lambda v: len(cand[v]))
    image: list[int] = [-1] * a.n
    used: set[int] = set()

    def place(k: int) -> bool:
        if k == len(order):
            return True
        v = order[k]
        for w in cand[v]:
            if w in used:
                continue
            ok = True
            for u in order[:k]:
                if a.rows[v][u] != b.rows[w][image[u]]:
                    ok = False
                    break
            if ok:
                image[v] = w
                used.add(w)
                if place(k + 1):
                    return True
                used.discard(w)
                image[v] = -1
        return False

    return tuple(image) if place(0) else None


def embeds(a: MultipartiteGraph, b: MultipartiteGraph) -> bool:
    return find_embedding(a, b) is not None


# ---------------------------------------------------------------------------
# canonical forms
# ---------------------------------------------------------------------------

def _language_automorphism_shapes(lang: Language) -> list[tuple[int, ...]]:
    """Part permutations that keep every |C_ij| in place."""
    m = lang.part_count
    shapes = []
    for theta in itertools.permutations(range(m)):
        if all(lang.size(i, j) == lang.size(theta[i], theta[j]) for i, j in lang.pairs):
            shapes.append(theta)
    return shapes


_CANON_PERM_LIMIT = 2_000_000


def _vertex_orderings(by_part: dict[int, tuple[int, ...]], part_order: Sequence[int]):
    blocks = [by_part.get(p, ()) for p in part_order]
    total = 1
    for blk in blocks:
        for t in range(2, len(blk) + 1):
            total *= t
        if total > _CANON_PERM_LIMIT:
            raise ValueError("graph too large for exact canonicalization")
    for perms in itertools.product(*(itertools.permutations(blk) for blk in blocks)):
        flat: list[int] = []
        for perm in perms:
            flat.extend(perm)
        yield flat


def _encode_under(g: MultipartiteGraph, theta: Sequence[int], ordering: Sequence[int]) -> tuple:
    """Edge-colour word for one (part map, vertex order); colours are
    relabelled per pair by first occurrence, which minimizes over all
    per-pair colour bijections at once."""
    new_part = [theta[g.parts[v]] for v in ordering]
    n = len(ordering)
    word: list[int] = []
    relabel: dict[tuple[int, int, int], int] = {}
    counts: dict[tuple[int, int], int] = {}
    for u in range(n):
        for v in range(u + 1, n):
            p, q = new_part[u], new_part[v]
            if p == q:
                continue
            c = g.rows[ordering[u]][ordering[v]]
            pq = (p, q) if p < q else (q, p)
            key = (pq[0], pq[1], c)
            if key not in relabel:
                relabel[key] = counts.get(pq, 0)
                counts[pq] = relabel[key] + 1
            word.append(relabel[key])
    return tuple(word)


def canonical_form(g: MultipartiteGraph) -> bytes:
    """Canonical encoding of ``g`` modulo colour isomorphism.

    Two graphs over the same language get equal forms exactly when some
    part permutation (respecting colour-set sizes), per-pair colour
    bijections and per-part vertex bijections carry one onto the other.
    """
    best = None
    csizes = tuple(g.lang.size(*pair) for pair in g.lang.pairs)  # invariant under theta
    for theta in _language_automorphism_shapes(g.lang):
        by_new: dict[int, list[int]] = {}
        for v, p in enumerate(g.parts):
            by_new.setdefault(theta[p], []).append(v)
        sizes = tuple(len(by_new.get(p, ())) for p in range(g.lang.part_count))
        inv_blocks = {p: tuple(vs) for p, vs in by_new.items()}
        for flat in _vertex_orderings(inv_blocks, range(g.lang.part_count)):
            key = (sizes, csizes, _encode_under(g, theta, flat))
            if best is None or key < best:
                best = key
    assert best is not None
    return repr(best).encode()


def canonical_form_monic(a: Monic, lang: Language) -> bytes:
    return canonical_form(MultipartiteGraph.from_monic(lang, a))


def labelled_key(g: MultipartiteGraph) -> tuple:
    """Canonical key modulo labelled isomorphism (parts and colours fixed).

    Minimizes the flattened colour matrix over per-part vertex orders; two
    graphs over one language compare equal iff some within-part vertex
    bijection matches them exactly.
    """
    best = None
    blocks = {p: tuple(vs) for p, vs in g.verts_by_part.items()}
    sizes = tuple(len(blocks.get(p, ())) for p in range(g.lang.part_count))
    for flat in _vertex_orderings(blocks, range(g.lang.part_count)):
        word = tuple(
            g.rows[flat[u]][flat[v]]
            for u in range(len(flat))
            for v in range(u + 1, len(flat))
        )
        if best is None or word < best:
            best = word
    return (sizes, best)
