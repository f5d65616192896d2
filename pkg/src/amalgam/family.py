"""Forbidden families of monic graphs and freeness tests.

A family lists the monic graphs that a class of multipartite graphs must
omit (as induced subgraphs, parts fixed).  The deciders in this package
expect *valid* families: every member sits on at least three parts and no
member embeds in another, so each member is itself minimally omitted —
removing any vertex of a member leaves something every free graph can
realize.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Union

from .core import (
    Language,
    Monic,
    MultipartiteGraph,
    embeds,
    monic_subgraphs,
    validate_monic,
)


@dataclass(frozen=True)
class Family:
    """An ordered, duplicate-free set of monics over a shared language."""

    lang: Language
    members: tuple[Monic, ...]

    @classmethod
    def of(cls, lang: Language, members: Iterable[Monic]) -> "Family":
        return cls(lang, tuple(sorted(set(members))))

    @cached_property
    def member_set(self) -> frozenset[Monic]:
        return frozenset(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, a: Monic) -> bool:
        return a in self.member_set

    def with_member(self, a: Monic) -> "Family":
        return Family.of(self.lang, self.members + (a,))

    def without(self, a: Monic) -> "Family":
        return Family(self.lang, tuple(x for x in self.members if x != a))

    def on_pair(self, i: int, j: int) -> tuple[Monic, ...]:
        """Members defined on both parts of {i, j}."""
        return tuple(a for a in self.members if a.defined_on(i, j))

    def describe(self) -> str:
        return ", ".join(a.describe(self.lang) for a in self.members)


def validate_family(f: Family) -> list[str]:
    """Violation report: out-of-language members, small members, embeddable pairs."""
    problems = []
    for a in f.members:
        for msg in validate_monic(a, f.lang):
            problems.append(f"{a.parts}/{a.colours}: {msg}")
        if len(a.parts) < 3:
            problems.append(f"member on parts {a.parts} spans fewer than 3 parts")
    for a, b in itertools.combinations(f.members, 2):
        if a.embeds_in(b):
            problems.append(f"member {a.parts}/{a.colours} embeds in {b.parts}/{b.colours}")
        elif b.embeds_in(a):
            problems.append(f"member {b.parts}/{b.colours} embeds in {a.parts}/{a.colours}")
    return problems


def is_valid(f: Family) -> bool:
    return not validate_family(f)


GraphLike = Union[Monic, MultipartiteGraph]


def is_free(h: GraphLike, f: Family) -> bool:
    """True when no family member embeds into ``h`` (parts fixed)."""
    if isinstance(h, Monic):
        return not any(a.embeds_in(h) for a in f.members)
    # A member embeds into a general graph iff it embeds into some monic
    # selection, but the direct backtracking check is cheaper than
    # enumerating selections.
    g = h
    for a in f.members:
        if _member_in_graph(a, g):
            return False
    return True


def _member_in_graph(a: Monic, g: MultipartiteGraph) -> bool:
    by_part = g.verts_by_part
    cand = []
    for p in a.parts:
        vs = by_part.get(p, ())
        if not vs:
            return False
        cand.append(vs)
    order = sorted(range(len(a.parts)), key=lambda t: len(cand[t]))
    chosen: list[int] = [-1] * len(a.parts)

    def place(k: int) -> bool:
        if k == len(order):
            return True
        t = order[k]
        pt = a.parts[t]
        for w in cand[t]:
            ok = True
            for s in order[:k]:
                if g.rows[w][chosen[s]] != a.colour(pt, a.parts[s]):
                    ok = False
                    break
            if ok:
                chosen[t] = w
                if place(k + 1):
                    return True
                chosen[t] = -1
        return False

    return place(0)


def blocking_member(h: GraphLike, f: Family) -> Monic | None:
    """First member (in family order) embedding into ``h``, if any."""
    if isinstance(h, Monic):
        for a in f.members:
            if a.embeds_in(h):
                return a
        return None
    for a in f.members:
        if _member_in_graph(a, h):
            return a
    return None


def minimally_omitted(h: GraphLike, f: Family) -> bool:
    """``h`` is omitted but every proper induced subgraph of it is free.

    Since freeness is hereditary it is enough to check the one-vertex
    deletions.
    """
    if isinstance(h, Monic):
        if is_free(h, f):
            return False
        for k in range(len(h.parts)):
            sub = h.restrict(h.parts[:k] + h.parts[k + 1:])
            if not is_free(sub, f):
                return False
        return True
    if is_free(h, f):
        return False
    for v in range(h.n):
        sub = h.induced([u for u in range(h.n) if u != v])
        if not is_free(sub, f):
            return False
    return True


def realized_by_monic_criterion(h: MultipartiteGraph, f: Family) -> bool:
    """Freeness via the monic-subgraph criterion: a graph is free exactly
    when each of its induced monic subgraphs is free.  Kept as an
    independent route to :func:`is_free` for cross-checking."""
    for _, a in monic_subgraphs(h):
        if not is_free(a, f):
            return False
    return True


def graph_embeds(a: GraphLike, b: GraphLike, lang: Language) -> bool:
    """Embedding test that accepts any mix of monics and graphs."""
    ga = MultipartiteGraph.from_monic(lang, a) if isinstance(a, Monic) else a
    gb = MultipartiteGraph.from_monic(lang, b) if isinstance(b, Monic) else b
    return embeds(ga, gb)
