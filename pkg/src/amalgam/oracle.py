"""Brute-force amalgamation oracle.

Independent of the structural deciders: this module answers "is the class
of all finite graphs omitting the family closed under amalgamation?" by
direct search over two-point amalgamation problems.  A *diagram* is a free
base A together with two one-point extensions x and y; the diagram fails
when no colour on the x-y edge keeps the union free.  The class is an
amalgamation class iff no diagram fails (two points suffice, and base
sizes are bounded by N = m*g).

Two searches are provided:

* ``bruteforce_check`` sweeps bases breadth-first up to a size bound.  For
  a pair {i, j} only bases inside parts touched by members defined on
  {i, j} matter, with at most |C_ij| vertices per part: any failing
  diagram shrinks onto the union of its per-colour blocking members, which
  has that shape.  The sweep is therefore decisive once the bound reaches
  |C_ij|*(m-2) on every coverable pair (and certainly at N).
* ``witness_search`` goes straight for the minimal shape: overlay one
  blocking member per colour, identifying same-part member vertices where
  their edge demands agree, and return the first overlay whose two
  extensions are free.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .core import Language, Monic, MultipartiteGraph, labelled_key
from .family import Family, blocking_member, is_free


NO_EDGE = -1  # stands in for a colour against a same-part base vertex


@dataclass(frozen=True)
class Extension:
    """One-point extension of a base: a part and a colour to each base
    vertex (NO_EDGE against base vertices in the same part)."""

    part: int
    colours: tuple[int, ...]


@dataclass(frozen=True)
class Diagram:
    base: MultipartiteGraph
    left: Extension
    right: Extension

    def side(self, ext: Extension) -> MultipartiteGraph:
        """The base extended by one new point."""
        n = self.base.n
        parts = self.base.parts + (ext.part,)
        edges = {}
        for u in range(n):
            for v in range(u + 1, n):
                c = self.base.rows[u][v]
                if c != -1:
                    edges[(u, v)] = c
        for u in range(n):
            if ext.colours[u] != NO_EDGE:
                edges[(u, n)] = ext.colours[u]
        return MultipartiteGraph.from_edges(self.base.lang, parts, edges)

    def joined(self, xy_colour: Optional[int]) -> MultipartiteGraph:
        """Base plus both points; ``xy_colour`` may be None for same-part."""
        n = self.base.n
        parts = self.base.parts + (self.left.part, self.right.part)
        edges = {}
        for u in range(n):
            for v in range(u + 1, n):
                c = self.base.rows[u][v]
                if c != -1:
                    edges[(u, v)] = c
        for u in range(n):
            if self.left.colours[u] != NO_EDGE:
                edges[(u, n)] = self.left.colours[u]
            if self.right.colours[u] != NO_EDGE:
                edges[(u, n + 1)] = self.right.colours[u]
        if xy_colour is not None:
            edges[(n, n + 1)] = xy_colour
        return MultipartiteGraph.from_edges(self.base.lang, parts, edges)


@dataclass(frozen=True)
class Completion:
    """Outcome of completing the x-y edge of a diagram."""

    ok: bool
    colour: Optional[int] = None  # chosen colour; None for same-part success
    blockers: tuple[tuple[int, Monic], ...] = ()  # colour -> blocking member on failure


def complete_edge(d: Diagram, f: Family) -> Completion:
    """Least colour closing the diagram, or the per-colour blockers.

    Same-part points never need an edge, so they always succeed.  Raises
    if either side of the diagram is not itself free — such a diagram is
    outside the amalgamation problem.
    """
    b1 = d.side(d.left)
    b2 = d.side(d.right)
    if not is_free(b1, f) or not is_free(b2, f):
        raise ValueError("diagram sides must be free")
    if d.left.part == d.right.part:
        return Completion(ok=True, colour=None)
    blocked = []
    for c in f.lang.colours(d.left.part, d.right.part):
        g = d.joined(c)
        hit = blocking_member(g, f)
        if hit is None:
            return Completion(ok=True, colour=c)
        blocked.append((c, hit))
    return Completion(ok=False, blockers=tuple(blocked))


@dataclass(frozen=True)
class OracleVerdict:
    status: str  # "pass" | "fail" | "inconclusive"
    max_base: int
    completeness_bound: int  # N = m*g
    decisive_bound: int  # max over coverable pairs of |C_ij|*(m-2); 0 if none
    conclusive: bool
    witness: Optional[Diagram] = None
    blockers: tuple[tuple[int, Monic], ...] = ()
    bases_examined: int = 0
    diagrams_examined: int = 0
    skipped_pairs: tuple[tuple[int, int], ...] = ()  # pairs with an uncovered colour
    note: str = ""


class _Budget:
    def __init__(self, limit: Optional[int]):
        self.limit = limit
        self.diagrams = 0
        self.bases = 0

    def spend_diagram(self):
        self.diagrams += 1
        if self.limit is not None and self.diagrams > self.limit:
            raise _BudgetExceeded


class _BudgetExceeded(Exception):
    pass


def _blocker_table(f: Family, i: int, j: int) -> Optional[dict[int, list[Monic]]]:
    """Members defined on {i, j} grouped by their {i, j} colour; None when
    some colour has no member (the pair can then never block)."""
    table: dict[int, list[Monic]] = {c: [] for c in f.lang.colours(i, j)}
    for a in f.on_pair(i, j):
        table[a.colour(i, j)].append(a)
    if any(not v for v in table.values()):
        return None
    return table


def _base_shapes(reach: Sequence[int], cap: int, max_total: int) -> Iterator[tuple[int, ...]]:
    ranges = [range(min(cap, max_total) + 1) for _ in reach]
    for counts in itertools.product(*ranges):
        if sum(counts) <= max_total:
            yield counts


def _bases(lang: Language, reach: Sequence[int], counts: Sequence[int], f: Family):
    """Free bases of the given per-part sizes, one per labelled-isomorphism class."""
    parts: list[int] = []
    for p, k in zip(reach, counts):
        parts.extend([p] * k)
    n = len(parts)
    cross = [(u, v) for u in range(n) for v in range(u + 1, n) if parts[u] != parts[v]]
    seen = set()
    for colouring in itertools.product(*(range(lang.size(parts[u], parts[v])) for u, v in cross)):
        edges = dict(zip(cross, colouring))
        g = MultipartiteGraph.from_edges(lang, parts, edges)
        key = labelled_key(g)
        if key in seen:
            continue
        seen.add(key)
        if is_free(g, f):
            yield g


def _free_extensions(base: MultipartiteGraph, part: int, f: Family) -> list[tuple[int, ...]]:
    """All colourings of one new point in ``part`` keeping the side free."""
    lang = base.lang
    opts = []
    for w in range(base.n):
        if base.parts[w] == part:
            opts.append((NO_EDGE,))
        else:
            opts.append(tuple(lang.colours(part, base.parts[w])))
    out = []
    for colours in itertools.product(*opts):
        if _side_free(base, part, colours, f):
            out.append(colours)
    return out


def _side_free(base: MultipartiteGraph, part: int, colours: Sequence[int], f: Family) -> bool:
    # Only members through the new point can appear; the base is already free.
    by_part = base.verts_by_part
    for a in f.members:
        if part not in a.part_set:
            continue
        rest = [p for p in a.parts if p != part]
        if any(p not in by_part for p in rest):
            continue
        if _anchored(base, a, rest, {p: a.colour(part, p) for p in rest}, colours):
            return False
    return True


def _anchored(base, a, rest, want, colours) -> bool:
    """Does ``a`` embed using the new point plus base vertices for ``rest``?"""
    cand = []
    for p in rest:
        vs = [w for w in base.verts_by_part[p] if colours[w] == want[p]]
        if not vs:
            return False
        cand.append(vs)
    for sel in itertools.product(*cand):
        ok = True
        for (t1, p1), (t2, p2) in itertools.combinations(enumerate(rest), 2):
            if base.rows[sel[t1]][sel[t2]] != a.colour(p1, p2):
                ok = False
                break
        if ok:
            return True
    return False


def _masks_for(base: MultipartiteGraph, reach: Sequence[int], colours: Sequence[int]):
    """Per (part, colour) bitmask of base vertices seen with that colour."""
    masks: dict[int, dict[int, int]] = {p: {} for p in reach}
    for w in range(base.n):
        c = colours[w]
        p = base.parts[w]
        masks[p][c] = masks[p].get(c, 0) | (1 << w)
    return masks


def _pair_colour_masks(base: MultipartiteGraph):
    out = []
    for w in range(base.n):
        row: dict[int, int] = {}
        for v in range(base.n):
            c = base.rows[w][v]
            if c != -1:
                row[c] = row.get(c, 0) | (1 << v)
        out.append(row)
    return out


def _blocked(base, member, i, j, mask_x, mask_y, colmasks) -> bool:
    """Does ``member`` embed through both new points over this base?"""
    rest = [p for p in member.parts if p != i and p != j]
    sets = []
    for p in rest:
        mx = mask_x.get(p, {}).get(member.colour(i, p), 0)
        my = mask_y.get(p, {}).get(member.colour(j, p), 0)
        s = mx & my
        if not s:
            return False
        sets.append(s)
    if len(rest) == 1:
        return True
    if len(rest) == 2:
        want = member.colour(rest[0], rest[1])
        s0, s1 = sets
        while s0:
            w = (s0 & -s0).bit_length() - 1
            s0 &= s0 - 1
            if s1 & colmasks[w].get(want, 0):
                return True
        return False
    # three or more off-pair parts: small backtracking over mask bits
    verts = [[b for b in range(base.n) if s >> b & 1] for s in sets]
    for sel in itertools.product(*verts):
        if all(
            base.rows[sel[t1]][sel[t2]] == member.colour(p1, p2)
            for (t1, p1), (t2, p2) in itertools.combinations(enumerate(rest), 2)
        ):
            return True
    return False


def _relevant(table: dict[int, list[Monic]], anchor: int, i: int, j: int):
    """(part, colour) mask slots the blocked-test reads on one side."""
    out = set()
    for ms in table.values():
        for a in ms:
            for p in a.parts:
                if p != i and p != j:
                    out.add((p, a.colour(anchor, p)))
    return sorted(out)


def _fingerprinted(base, part, reach, rel, f):
    """Free one-point extensions grouped by their relevant-mask fingerprint.

    Two extensions with equal fingerprints block exactly the same members,
    so only one representative per class needs to meet the other side.
    Blocking is monotone in the masks, so classes pointwise below another
    class are dropped too: if they fail, the dominating class fails.
    """
    reps: dict[tuple, tuple] = {}
    for ext in _free_extensions(base, part, f):
        masks = _masks_for(base, reach, ext)
        fp = tuple(masks.get(p, {}).get(c, 0) for p, c in rel)
        if fp not in reps:
            reps[fp] = (ext, masks)
    fps = list(reps)
    keep = []
    for fp in fps:
        if not any(
            other != fp and all(a & ~b == 0 for a, b in zip(fp, other)) for other in fps
        ):
            keep.append(reps[fp])
    return keep


def _shape_supported(table, i, j, counts_by_part) -> bool:
    """Can every x-y colour be blocked inside a base of this shape?"""
    for ms in table.values():
        if not any(
            all(counts_by_part.get(p, 0) >= 1 for p in a.parts if p != i and p != j)
            for a in ms
        ):
            return False
    return True


def _scan_pair(f: Family, i: int, j: int, max_base: int, budget: _Budget):
    """Search for a failing diagram over pair {i, j}; None when clean."""
    lang = f.lang
    table = _blocker_table(f, i, j)
    if table is None:
        return None
    reach = sorted({p for ms in table.values() for a in ms for p in a.parts} - {i, j})
    cap = lang.size(i, j)
    rel_x = _relevant(table, i, i, j)
    rel_y = _relevant(table, j, i, j)
    for counts in _base_shapes(reach, cap, max_base):
        if not _shape_supported(table, i, j, dict(zip(reach, counts))):
            continue
        for base in _bases(lang, reach, counts, f):
            budget.bases += 1
            sides_x = _fingerprinted(base, i, reach, rel_x, f)
            if not sides_x:
                continue
            sides_y = _fingerprinted(base, j, reach, rel_y, f)
            if not sides_y:
                continue
            colmasks = _pair_colour_masks(base)
            for xi, mask_x in sides_x:
                for upsilon, mask_y in sides_y:
                    budget.spend_diagram()
                    verdict = _try_close(
                        f, base, i, j, table, mask_x, mask_y, colmasks
                    )
                    if verdict is not None:
                        diagram = Diagram(base, Extension(i, xi), Extension(j, upsilon))
                        return diagram, verdict
    return None


def _try_close(f, base, i, j, table, mask_x, mask_y, colmasks):
    """None when some x-y colour survives; else the per-colour blockers."""
    blocked = []
    for c in f.lang.colours(i, j):
        hit = None
        for member in table[c]:
            if _blocked(base, member, i, j, mask_x, mask_y, colmasks):
                hit = member
                break
        if hit is None:
            return None
        blocked.append((c, hit))
    return tuple(blocked)


def bruteforce_check(
    f: Family,
    max_base: Optional[int] = None,
    budget: Optional[int] = None,
    threads: int = 1,
) -> OracleVerdict:
    """Sweep all two-point diagrams with base size up to ``max_base``.

    PASS means no failing diagram exists at the bound (final once the
    bound reaches the decisive size, and certainly at N = m*g); FAIL
    carries a replayable witness with its per-colour blockers.  A budget
    (count of diagram classes tried; extensions that block identically
    are classed together) turns an unfinished sweep into "inconclusive"
    rather than a silent pass.  Default bound: min(N, 6).
    """
    lang = f.lang
    n_bound = lang.completeness_bound()
    if max_base is None:
        max_base = min(n_bound, 6)
    tracker = _Budget(budget)
    covered = []
    skipped = []
    for i, j in lang.pairs:
        if _blocker_table(f, i, j) is None:
            skipped.append((i, j))
        else:
            covered.append((i, j))
    decisive = max((lang.size(i, j) * (lang.part_count - 2) for i, j in covered), default=0)

    def run(pair):
        return _scan_pair(f, pair[0], pair[1], max_base, tracker)

    try:
        if threads > 1 and len(covered) > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(run, covered))
        else:
            results = [run(pair) for pair in covered]
    except _BudgetExceeded:
        return OracleVerdict(
            status="inconclusive",
            max_base=max_base,
            completeness_bound=n_bound,
            decisive_bound=decisive,
            conclusive=False,
            bases_examined=tracker.bases,
            diagrams_examined=tracker.diagrams,
            skipped_pairs=tuple(skipped),
            note=f"budget of {budget} diagrams exhausted",
        )
    for hit in results:
        if hit is not None:
            diagram, blockers = hit
            return OracleVerdict(
                status="fail",
                max_base=max_base,
                completeness_bound=n_bound,
                decisive_bound=decisive,
                conclusive=True,
                witness=diagram,
                blockers=blockers,
                bases_examined=tracker.bases,
                diagrams_examined=tracker.diagrams,
                skipped_pairs=tuple(skipped),
            )
    return OracleVerdict(
        status="pass",
        max_base=max_base,
        completeness_bound=n_bound,
        decisive_bound=decisive,
        conclusive=max_base >= decisive,
        bases_examined=tracker.bases,
        diagrams_examined=tracker.diagrams,
        skipped_pairs=tuple(skipped),
    )


def replay(d: Diagram, f: Family) -> Completion:
    """Re-run a witness diagram; a genuine witness comes back not ok."""
    return complete_edge(d, f)


# ---------------------------------------------------------------------------
# targeted overlay search
# ---------------------------------------------------------------------------

def _set_partitions(items: list):
    """All partitions of ``items``, coarsest (fewest blocks) first."""
    if not items:
        yield []
        return
    head, tail = items[0], items[1:]
    parts = []
    for rest in _set_partitions(tail):
        for k in range(len(rest)):
            parts.append([blk + [head] if t == k else list(blk) for t, blk in enumerate(rest)])
        parts.append([[head]] + [list(blk) for blk in rest])
    parts.sort(key=lambda blocks: (len(blocks), [sorted(map(str, b)) for b in blocks]))
    for blocks in parts:
        yield blocks


def witness_search(f: Family, pair: tuple[int, int]) -> Optional[Diagram]:
    """First failing diagram over ``pair`` built by overlaying blockers.

    Per colour c pick a member with a c-coloured {i, j} edge; identify all
    their part-i images to x and part-j images to y; enumerate same-part
    identifications of the remaining member vertices (coarsest first) and
    colours for cross pairs no member constrains; return the first overlay
    whose two sides are free.  Deterministic: blocker choices in family
    order, then identification patterns, then free-edge colours ascending.
    """
    lang = f.lang
    i, j = min(pair), max(pair)
    table = _blocker_table(f, i, j)
    if table is None:
        return None
    colour_list = list(lang.colours(i, j))
    for combo in itertools.product(*(table[c] for c in colour_list)):
        chosen = dict(zip(colour_list, combo))
        slots: dict[int, list[int]] = {}
        for c in colour_list:
            for p in chosen[c].parts:
                if p != i and p != j:
                    slots.setdefault(p, []).append(c)
        parts_order = sorted(slots)
        for pattern in itertools.product(*(_set_partitions(slots[p]) for p in parts_order)):
            base = _overlay_base(f, chosen, parts_order, pattern, i, j)
            if base is None:
                continue
            diagram = _first_free_overlay(f, base, i, j)
            if diagram is not None:
                return diagram
    return None


def _overlay_base(f, chosen, parts_order, pattern, i, j):
    """Resolve one identification pattern into vertex blocks and demands.

    Returns (parts, block index per (colour, part), x demands, y demands,
    fixed internal edges) or None on conflicting demands.
    """
    lang = f.lang
    parts: list[int] = []
    block_of: dict[tuple[int, int], int] = {}
    x_demand: list[int] = []
    y_demand: list[int] = []
    for p, partition in zip(parts_order, pattern):
        for block in partition:
            xs = {chosen[c].colour(i, p) for c in block}
            ys = {chosen[c].colour(j, p) for c in block}
            if len(xs) > 1 or len(ys) > 1:
                return None
            idx = len(parts)
            parts.append(p)
            x_demand.append(xs.pop())
            y_demand.append(ys.pop())
            for c in block:
                block_of[(c, p)] = idx
    edges: dict[tuple[int, int], int] = {}
    for c, member in chosen.items():
        for p, q in itertools.combinations(member.parts, 2):
            if p in (i, j) or q in (i, j):
                continue
            u, v = sorted((block_of[(c, p)], block_of[(c, q)]))
            want = member.colour(p, q)
            if edges.get((u, v), want) != want:
                return None
            edges[(u, v)] = want
    free_pairs = [
        (u, v)
        for u in range(len(parts))
        for v in range(u + 1, len(parts))
        if parts[u] != parts[v] and (u, v) not in edges
    ]
    return lang, parts, edges, free_pairs, x_demand, y_demand


def _first_free_overlay(f, resolved, i, j) -> Optional[Diagram]:
    lang, parts, edges, free_pairs, x_demand, y_demand = resolved
    for extra in itertools.product(
        *(range(lang.size(parts[u], parts[v])) for u, v in free_pairs)
    ):
        full = dict(edges)
        full.update(zip(free_pairs, extra))
        base = MultipartiteGraph.from_edges(lang, parts, full)
        d = Diagram(base, Extension(i, tuple(x_demand)), Extension(j, tuple(y_demand)))
        if is_free(d.side(d.left), f) and is_free(d.side(d.right), f):
            return d
    return None
