"""Finite approximations of the generic graph omitting a family.

The limit object is approached by the usual back-and-forth-free
construction: keep a fair first-in-first-out queue of one-point
extension demands (a subset U of at most ``s`` vertices together with a
family-free extension type over U) and serve them in creation order,
adding a vertex only when no existing one already realizes the type.
Demands aimed at a part that has run ahead of the smallest one are
pushed back until the parts level out.

Colours from a new vertex to vertices outside its demand are completed
greedily, one vertex at a time in ascending id.  The first candidate
colour for each edge is read off a fixed table of short integer vectors
(every vertex draws one from a per-part pool) through an inner product;
when that colour would complete a forbidden member the least-used
colour in the column is tried next.  A passing family closes two-point
diagrams, which is exactly what makes every completion step land.

Audits check the two directions of the age identity on the finished
graph (nothing forbidden embeds; everything free and small embeds), and
``sample_homogeneity`` measures one-point extendability of random
partial isomorphisms as a saturation score.
"""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .core import Language, Monic, MultipartiteGraph, find_embedding
from .family import Family, is_free


class BuildError(RuntimeError):
    """A construction step that passing families make impossible failed."""


def _vector_order() -> tuple[tuple[int, int, int, int], ...]:
    """The 40 sign-normalized nonzero vectors of (Z/3)^4, spread-first.

    Completion colours come from inner products of these vectors, so the
    variety of colour patterns a part can show towards any few fixed
    vertices is the variety of its assigned vectors.  Three vectors on a
    common affine line collapse that variety, so the order front-loads a
    maximal prefix with no three collinear; parts too small to exhaust
    the table then hold the best-spread portion of it.
    """
    reps = [
        vec
        for vec in itertools.product((0, 1, 2), repeat=4)
        if next((x for x in vec if x), 0) == 1
    ]
    spread: list[tuple[int, ...]] = []
    for v in reps:
        # distinct points a, b, v of AG(4, 3) are collinear iff a+b+v = 0
        if all(
            any((a[t] + b[t] + v[t]) % 3 for t in range(4))
            for a, b in itertools.combinations(spread, 2)
        ):
            spread.append(v)
    return tuple(spread) + tuple(v for v in reps if v not in spread)


_VECTORS = _vector_order()

#: Parts may outgrow the smallest part by this much before demands
#: targeting them are deferred.
_BALANCE_SLACK = 3


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b)) % 3


@dataclass(frozen=True)
class BuildConfig:
    """Build parameters; identical configs give identical graphs.

    The bundled completion policy is deterministic, so the output in
    fact depends on the family, ``n``, ``s`` and the part policy alone;
    ``seed`` is carried through to the report for bookkeeping and for
    any stochastic policy added later.
    """

    n: int
    s: int = 2
    seed: int = 0
    part_policy: str = "round-robin"
    audit_parts_bound: int = 3


@dataclass(frozen=True)
class AgeAudit:
    """Results of the two age scans at a given part-count bound."""

    parts_bound: int
    forbidden_hits: tuple[tuple[Monic, tuple[int, ...]], ...]
    free_type_count: int
    missing_types: tuple[Monic, ...]

    @property
    def omission_ok(self) -> bool:
        return not self.forbidden_hits

    @property
    def realization_ok(self) -> bool:
        return not self.missing_types

    @property
    def ok(self) -> bool:
        return self.omission_ok and self.realization_ok


@dataclass(frozen=True)
class BuildReport:
    graph: MultipartiteGraph
    config: BuildConfig
    demands_issued: int
    demands_satisfied: int
    demand_vertices: int
    filler_vertices: int
    per_part_sizes: tuple[int, ...]
    audit: AgeAudit


class _Builder:
    """Mutable construction state: parts list plus a growing colour matrix."""

    def __init__(self, f: Family):
        self.f = f
        self.lang = f.lang
        self.parts: list[int] = []
        self.rows: list[list[int]] = []
        self.by_part: dict[int, list[int]] = {p: [] for p in range(self.lang.part_count)}
        self.vecs: dict[int, tuple[int, ...]] = {}
        self.pools: list[list[tuple[int, ...]]] = [
            list(_VECTORS) for _ in range(self.lang.part_count)
        ]

    def assign_vector(self, v: int) -> tuple[int, ...]:
        """Draw v's completion vector from its part's pool.

        Demand colours towards v are already written when completion
        starts; among the unassigned vectors the one agreeing with the
        most of them wins (ties to pool order).  Demand vertices then
        sit inside the same inner-product pattern completion writes
        everywhere else instead of puncturing it.
        """
        pool = self.pools[self.parts[v]]
        if not pool:
            pool[:] = list(_VECTORS)
        presets = [
            (self.vecs[w], self.lang.size(self.parts[v], self.parts[w]), self.rows[v][w])
            for w in range(len(self.parts))
            if w != v and self.parts[w] != self.parts[v]
            and self.rows[v][w] != -1 and w in self.vecs
        ]

        def fit(a: tuple[int, ...]) -> int:
            return sum(1 for b, k, c in presets if _dot(a, b) % k == c)

        best = max(range(len(pool)), key=lambda i: (fit(pool[i]), -i))
        self.vecs[v] = pool.pop(best)
        return self.vecs[v]

    def add_vertex(self, part: int) -> int:
        v = len(self.parts)
        for row in self.rows:
            row.append(-1)
        self.parts.append(part)
        self.rows.append([-1] * (v + 1))
        self.by_part[part].append(v)
        return v

    def set_colour(self, u: int, v: int, c: int) -> None:
        self.rows[u][v] = c
        self.rows[v][u] = c

    def blocked(self, v: int, w: int, c: int) -> Optional[Monic]:
        """Member that would embed were the edge (v, w) coloured c.

        The candidate colour is written into the matrix for the duration
        of the scan, so member edges across (v, w) see it.
        """
        pv, pw = self.parts[v], self.parts[w]
        self.set_colour(v, w, c)
        try:
            for a in self.f.members:
                if not a.defined_on(pv, pw) or a.colour(pv, pw) != c:
                    continue
                if self._pinned_embed(a, {pv: v, pw: w}):
                    return a
            return None
        finally:
            self.set_colour(v, w, -1)

    def member_through(self, v: int) -> Optional[Monic]:
        """First member embedding via vertex v, for post-completion asserts."""
        pv = self.parts[v]
        for a in self.f.members:
            if pv in a.part_set and self._pinned_embed(a, {pv: v}):
                return a
        return None

    def _pinned_embed(self, a: Monic, pins: dict[int, int]) -> bool:
        """Does ``a`` embed with the pinned part->vertex assignments?

        Edges whose colour is still unset (-1) never match, so partial
        rows are handled for free.  Images are one-per-part, hence
        automatically distinct.
        """
        for (i, j) in a.pair_list:
            if i in pins and j in pins:
                if self.rows[pins[i]][pins[j]] != a.colour(i, j):
                    return False
        open_parts = [p for p in a.parts if p not in pins]

        def extend(idx: int, chosen: dict[int, int]) -> bool:
            if idx == len(open_parts):
                return True
            p = open_parts[idx]
            for u in self.by_part[p]:
                if all(self.rows[u][x] == a.colour(p, q) for q, x in chosen.items()):
                    chosen[p] = u
                    if extend(idx + 1, chosen):
                        return True
                    del chosen[p]
            return False

        return extend(0, dict(pins))


def _free_extension(builder: _Builder, u_verts: Sequence[int], part: int,
                    colours: Sequence[int]) -> bool:
    """Is U plus a new ``part`` vertex with these colours family-free?"""
    lang = builder.lang
    verts = list(u_verts)
    k = len(verts)
    parts = [builder.parts[v] for v in verts] + [part]
    edges = {}
    for a, b in itertools.combinations(range(k), 2):
        if parts[a] != parts[b]:
            edges[(a, b)] = builder.rows[verts[a]][verts[b]]
    cross = [idx for idx in range(k) if parts[idx] != part]
    for idx, c in zip(cross, colours):
        edges[(idx, k)] = c
    g = MultipartiteGraph.from_edges(lang, parts, edges)
    return is_free(g, builder.f)


def _realizer(builder: _Builder, u_verts: Sequence[int], part: int,
              colours: Sequence[int]) -> Optional[int]:
    """An existing vertex realizing the extension type, if any."""
    u_set = set(u_verts)
    cross = [v for v in u_verts if builder.parts[v] != part]
    for w in builder.by_part[part]:
        if w in u_set:
            continue
        if all(builder.rows[w][v] == c for v, c in zip(cross, colours)):
            return w
    return None


def _extension_types(builder: _Builder, u_verts: Sequence[int]):
    """All (part, colours) extension shapes over U, free or not, in order."""
    lang = builder.lang
    for part in range(lang.part_count):
        cross = [v for v in u_verts if builder.parts[v] != part]
        pools = [lang.colours(part, builder.parts[v]) for v in cross]
        for colours in itertools.product(*pools):
            yield part, colours


def _complete_vertex(builder: _Builder, v: int, fixed: set[int]) -> None:
    """Greedily colour v against every vertex outside its demand."""
    pv = builder.parts[v]
    av = builder.assign_vector(v)
    for w in range(len(builder.parts)):
        if w == v or w in fixed or builder.parts[w] == pv:
            continue
        if builder.rows[v][w] != -1:
            continue
        k = builder.lang.size(pv, builder.parts[w])
        want = _dot(av, builder.vecs[w]) % k
        # Fallback order: least-used colour first in this column, so a
        # blocked inner-product colour degrades towards balance.
        counts: dict[int, int] = {}
        for u in builder.by_part[pv]:
            c = builder.rows[u][w]
            if u != v and c != -1:
                counts[c] = counts.get(c, 0) + 1
        order = [want] + sorted(
            (c for c in range(k) if c != want),
            key=lambda c: (counts.get(c, 0), c),
        )
        for c in order:
            if builder.blocked(v, w, c) is None:
                builder.set_colour(v, w, c)
                break
        else:
            raise BuildError(
                "correctness finding: greedy completion dead-end at vertex "
                f"{v} against {w}; two-point closure should have prevented this"
            )
    bad = builder.member_through(v)
    if bad is not None:
        raise BuildError(
            f"correctness finding: {bad.describe(builder.lang)} embedded "
            f"after completing vertex {v}"
        )


def build_generic(f: Family, cfg: BuildConfig) -> BuildReport:
    """Grow an ``n``-vertex family-free graph by fair demand service."""
    from .checker import classify

    lang = f.lang
    if cfg.n < lang.part_count:
        raise ValueError("need at least one vertex per part")
    if cfg.s < 1:
        raise ValueError("demand subset bound must be at least 1")
    if cfg.part_policy != "round-robin":
        raise ValueError(f"unknown part policy {cfg.part_policy!r}")
    if not classify(f).ok:
        raise ValueError("build expects a family passing the deciders")

    builder = _Builder(f)
    queue: deque[tuple[int, ...]] = deque([()])
    issued = 0
    satisfied = 0
    demand_vertices = 0
    fillers = 0

    def sizes() -> list[int]:
        return [len(builder.by_part[p]) for p in range(lang.part_count)]

    def serve(u_verts: tuple[int, ...]) -> tuple[bool, bool, bool]:
        """Process every type over U; reports (keep going, added, deferred)."""
        nonlocal issued, satisfied, demand_vertices
        added = False
        deferred = False
        for part, colours in _extension_types(builder, u_verts):
            if len(builder.parts) >= cfg.n:
                return False, added, deferred
            if _realizer(builder, u_verts, part, colours) is not None:
                issued += 1
                satisfied += 1
                continue
            if not _free_extension(builder, u_verts, part, colours):
                continue
            if len(builder.by_part[part]) > min(sizes()) + _BALANCE_SLACK:
                deferred = True  # counted when the retry lands
                continue
            v = builder.add_vertex(part)
            cross = [u for u in u_verts if builder.parts[u] != part]
            for u, c in zip(cross, colours):
                builder.set_colour(v, u, c)
            _complete_vertex(builder, v, set(cross))
            issued += 1
            satisfied += 1
            demand_vertices += 1
            added = True
            enqueue_with(v)
        return True, added, deferred

    def enqueue_with(v: int) -> None:
        earlier = range(v)
        for size in range(min(cfg.s, v + 1)):
            for combo in itertools.combinations(earlier, size):
                queue.append(combo + (v,))

    stalled = 0
    while queue and len(builder.parts) < cfg.n:
        u_verts = queue.popleft()
        more, added, deferred = serve(u_verts)
        if not more:
            break
        if not deferred:
            stalled = 0
            continue
        queue.append(u_verts)
        stalled = 0 if added else stalled + 1
        if stalled > len(queue):
            # every pending demand waits on part balance; raise the floor
            v = builder.add_vertex(sizes().index(min(sizes())))
            _complete_vertex(builder, v, set())
            fillers += 1
            stalled = 0

    while len(builder.parts) < cfg.n:
        v = builder.add_vertex(sizes().index(min(sizes())))
        _complete_vertex(builder, v, set())
        fillers += 1

    graph = MultipartiteGraph(
        lang, tuple(builder.parts), tuple(tuple(r) for r in builder.rows)
    )
    sizes = tuple(len(builder.by_part[p]) for p in range(lang.part_count))
    audit = audit_age(graph, f, cfg.audit_parts_bound)
    return BuildReport(
        graph, cfg, issued, satisfied, demand_vertices, fillers, sizes, audit
    )


def free_monic_types(f: Family, parts_bound: int):
    """Every family-free monic on at most ``parts_bound`` parts, in order."""
    lang = f.lang
    for size in range(1, parts_bound + 1):
        for parts in itertools.combinations(range(lang.part_count), size):
            pools = [lang.colours(i, j) for i, j in itertools.combinations(parts, 2)]
            for colours in itertools.product(*pools):
                a = Monic(parts, colours)
                if is_free(a, f):
                    yield a


def realized_monic_types(g: MultipartiteGraph, parts_bound: int) -> set[Monic]:
    by_part = g.verts_by_part
    out: set[Monic] = set()
    present = sorted(by_part)
    for size in range(1, parts_bound + 1):
        for parts in itertools.combinations(present, size):
            for sel in itertools.product(*(by_part[p] for p in parts)):
                out.add(g.monic_at(sel))
    return out


def audit_age(g: MultipartiteGraph, f: Family, parts_bound: int) -> AgeAudit:
    """Check the built graph against both directions of its age.

    (a) no family member embeds (hits come with their vertex images);
    (b) every family-free monic on at most ``parts_bound`` parts embeds.
    """
    hits = []
    for a in f.members:
        images = find_embedding(MultipartiteGraph.from_monic(f.lang, a), g)
        if images is not None:
            hits.append((a, images))
    realized = realized_monic_types(g, parts_bound)
    free_count = 0
    missing = []
    for a in free_monic_types(f, parts_bound):
        free_count += 1
        if a not in realized:
            missing.append(a)
    return AgeAudit(parts_bound, tuple(hits), free_count, tuple(missing))


@dataclass(frozen=True)
class HomogeneityReport:
    trials: int
    successes: int
    seed: int
    failures: tuple[str, ...] = ()

    @property
    def rate(self) -> Optional[float]:
        """Success fraction; None when no trials ran (undefined, not 0)."""
        if self.trials == 0:
            return None
        return self.successes / self.trials


def sample_homogeneity(g: MultipartiteGraph, k: int, trials: int,
                       seed: int = 0, failure_cap: int = 20) -> HomogeneityReport:
    """Estimate how often a random small partial isomorphism extends.

    Each trial draws a colour-preserving, parts-fixed partial map on at
    most ``k`` vertices (by randomized backtracking, so identity-like
    maps don't dominate), picks a fresh source vertex, and looks for any
    image giving the same colours to the mapped vertices.  The returned
    rate is a saturation score for the finite approximation, not a
    homogeneity proof.
    """
    rng = random.Random(seed)
    if trials == 0 or g.n == 0:
        return HomogeneityReport(0, 0, seed)
    by_part = g.verts_by_part
    successes = 0
    failures: list[str] = []
    for _ in range(trials):
        d = rng.randint(1, min(k, g.n))
        dom = rng.sample(range(g.n), d)
        images = _random_partial_iso(g, dom, rng, by_part)
        if images is None:
            # only possible when a part is too small to host a distinct image
            images = {u: u for u in dom}
        outside = [x for x in range(g.n) if x not in images]
        if not outside:
            successes += 1
            continue
        x = rng.choice(outside)
        used = set(images.values())
        ok = any(
            y not in used
            and all(
                g.parts[u] == g.parts[x] or g.rows[y][images[u]] == g.rows[x][u]
                for u in images
            )
            for y in by_part[g.parts[x]]
        )
        if ok:
            successes += 1
        elif len(failures) < failure_cap:
            failures.append(
                f"map {dict(sorted(images.items()))} source {x} (part {g.parts[x]}) has no image"
            )
    return HomogeneityReport(trials, successes, seed, tuple(failures))


def _random_partial_iso(g: MultipartiteGraph, dom: list[int], rng: random.Random,
                        by_part: dict[int, tuple[int, ...]]) -> Optional[dict[int, int]]:
    order = sorted(dom)

    def place(idx: int, images: dict[int, int]) -> Optional[dict[int, int]]:
        if idx == len(order):
            return dict(images)
        u = order[idx]
        pool = list(by_part[g.parts[u]])
        rng.shuffle(pool)
        for y in pool:
            if y in images.values():
                continue
            if all(
                g.parts[v] == g.parts[u] or g.rows[y][images[v]] == g.rows[u][v]
                for v in images
            ):
                images[u] = y
                got = place(idx + 1, images)
                if got is not None:
                    return got
                del images[u]
        return None

    return place(0, {})
