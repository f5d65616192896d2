"""Streaming enumeration of valid families, up to colour-isomorphism.

The walk is a depth-first traversal of antichains in a fixed monic pool
(sorted by canonical form, so colour-isomorphic duplicates are found
late and cheaply skipped).  Every node gets the full decision run; on
three parts the cover condition is monotone — adding members only
covers more colours — so a subtree below a fully covered pair is cut
without looking at it.  A side effect worth knowing: every passing
three-part family misses at least one colour per pair, hence has at
most ``prod (|C_ij|-1)`` members, which keeps exact canonicalization
affordable there.

``maximality_witness`` backs the maximal-only filter: a family is kept
when no single monic can be added without either breaking validity or
failing the deciders, and rejected families always come with the
extension that does pass.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .core import (
    Language,
    Monic,
    _language_automorphism_shapes,
    canonical_form_monic,
)
from .family import Family
from .checker import Verdict, classify, omission_pair_census

__all__ = [
    "EnumeratedFamily",
    "EnumerationBudget",
    "EnumerationResult",
    "collect_valid_families",
    "enumerate_valid_families",
    "family_canonical_key",
    "maximality_witness",
    "monic_pool",
    "omission_pair_census",
]

#: Exact family canonicalization searches member orderings; past this
#: size the factorial cost is refused rather than silently paid.
_CANON_MEMBER_LIMIT = 8


def monic_pool(lang: Language, triangle_only: bool = False) -> tuple[Monic, ...]:
    """Every monic on >= 3 parts over ``lang``, canonically sorted.

    ``triangle_only`` restricts to exactly three parts.
    """
    top = 3 if triangle_only else lang.part_count
    out: list[Monic] = []
    for size in range(3, top + 1):
        for parts in itertools.combinations(range(lang.part_count), size):
            pools = [lang.colours(i, j) for i, j in itertools.combinations(parts, 2)]
            for colours in itertools.product(*pools):
                out.append(Monic(parts, colours))
    out.sort(key=lambda a: (len(a.parts), canonical_form_monic(a, lang), a.parts, a.colours))
    return tuple(out)


def family_canonical_key(f: Family) -> bytes:
    """Canonical encoding of a family modulo colour-isomorphism.

    Two families over the same language get equal keys exactly when a
    part permutation respecting colour-set sizes plus per-pair colour
    bijections carry one member set onto the other.  The key minimizes,
    over part maps and member orders, the concatenated member word with
    colours relabelled by first occurrence (which realizes the best
    per-pair bijection for that order free of charge).

    Exact but factorial in the member count; families beyond
    ``_CANON_MEMBER_LIMIT`` members are refused with ``ValueError``.
    """
    lang = f.lang
    members = f.members
    if len(members) > _CANON_MEMBER_LIMIT:
        raise ValueError(
            f"family of {len(members)} members is too large for exact canonicalization"
        )
    header = (lang.part_count, tuple(lang.size(i, j) for i, j in lang.pairs))
    if not members:
        return repr((header, ())).encode()

    best: Optional[tuple[int, ...]] = None
    k = len(members)
    for theta in _language_automorphism_shapes(lang):
        mapped = []
        for a in members:
            cols = []
            for i, j in a.pair_list:
                p, q = theta[i], theta[j]
                if p > q:
                    p, q = q, p
                cols.append(((p, q), a.colour(i, j)))
            cols.sort()
            parts = tuple(sorted(theta[p] for p in a.parts))
            mapped.append(((len(parts),) + parts, cols))

        used = [False] * k

        def extend(word: list[int], relabel: dict, counts: dict, depth: int) -> None:
            nonlocal best
            if best is not None and tuple(word) > best[: len(word)]:
                return
            if depth == k:
                cand = tuple(word)
                if best is None or cand < best:
                    best = cand
                return
            for idx in range(k):
                if used[idx]:
                    continue
                head, cols = mapped[idx]
                grown = list(word)
                grown.extend(head)
                added = []
                for pq, c in cols:
                    code = relabel.get((pq, c))
                    if code is None:
                        code = counts.get(pq, 0)
                        relabel[(pq, c)] = code
                        counts[pq] = code + 1
                        added.append((pq, c))
                    grown.append(code)
                used[idx] = True
                extend(grown, relabel, counts, depth + 1)
                used[idx] = False
                for pq, c in added:
                    del relabel[(pq, c)]
                    counts[pq] -= 1

        extend([], {}, {}, 0)
    return repr((header, best)).encode()


def _compatible(a: Monic, chosen: Sequence[Monic]) -> bool:
    return all(not a.embeds_in(b) and not b.embeds_in(a) for b in chosen)


def maximality_witness(
    f: Family, pool: Optional[Sequence[Monic]] = None
) -> Optional[Monic]:
    """A monic extending ``f`` to a larger passing valid family, if any.

    ``None`` certifies maximality: no single monic over the language can
    join without breaking pairwise non-embeddability or the deciders.
    """
    if pool is None:
        pool = monic_pool(f.lang)
    members = list(f.members)
    for x in pool:
        if x in f.member_set or not _compatible(x, members):
            continue
        if classify(Family.of(f.lang, members + [x])).ok:
            return x
    return None


@dataclass(frozen=True)
class EnumeratedFamily:
    """One emitted family with its verdict.

    ``canonical`` is None when the family outgrew exact
    canonicalization (then no dedup was applied to it); ``maximal`` is
    None unless the maximal-only filter ran.
    """

    family: Family
    verdict: Verdict
    canonical: Optional[bytes]
    maximal: Optional[bool] = None


class EnumerationBudget(RuntimeError):
    """Raised mid-stream when the node budget runs out; results so far
    are valid but incomplete."""

    def __init__(self, explored: int, emitted: int):
        super().__init__(
            f"enumeration budget exhausted after {explored} antichains "
            f"({emitted} families emitted); results are partial"
        )
        self.explored = explored
        self.emitted = emitted


def enumerate_valid_families(
    lang: Language,
    triangle_only: bool = False,
    maximal_only: bool = False,
    budget: Optional[int] = None,
    stats: Optional[dict] = None,
) -> Iterator[EnumeratedFamily]:
    """Stream passing families over ``lang``, deduplicated by colour-iso.

    Families are discovered as antichains of the sorted monic pool and
    emitted when the deciders pass and no colour-isomorphic copy was
    seen before.  ``budget`` caps the number of antichains visited and
    ends the stream with ``EnumerationBudget``.  ``stats``, when given,
    receives live ``explored``/``emitted`` counts.
    """
    pool = monic_pool(lang, triangle_only=triangle_only)
    ext_pool = pool if (not triangle_only or lang.part_count == 3) else monic_pool(lang)
    tripartite = lang.part_count == 3
    covered: dict[tuple[int, int], set[int]] = {pair: set() for pair in lang.pairs}
    seen: set[bytes] = set()
    chosen: list[Monic] = []
    counters = stats if stats is not None else {}
    counters["explored"] = 0
    counters["emitted"] = 0

    def visit(start: int) -> Iterator[EnumeratedFamily]:
        if budget is not None and counters["explored"] >= budget:
            raise EnumerationBudget(counters["explored"], counters["emitted"])
        counters["explored"] += 1
        fam = Family.of(lang, list(chosen))
        verdict = classify(fam)
        if verdict.ok:
            canonical = None
            fresh = True
            if len(chosen) <= _CANON_MEMBER_LIMIT:
                canonical = family_canonical_key(fam)
                fresh = canonical not in seen
                seen.add(canonical)
            if fresh:
                maximal = None
                if maximal_only:
                    maximal = maximality_witness(fam, ext_pool) is None
                if not maximal_only or maximal:
                    counters["emitted"] += 1
                    yield EnumeratedFamily(fam, verdict, canonical, maximal)
        for idx in range(start, len(pool)):
            a = pool[idx]
            if not _compatible(a, chosen):
                continue
            if tripartite:
                grown = []
                for i, j in lang.pairs:
                    if a.defined_on(i, j) and a.colour(i, j) not in covered[(i, j)]:
                        covered[(i, j)].add(a.colour(i, j))
                        grown.append(((i, j), a.colour(i, j)))
                if any(len(covered[p]) >= lang.size(*p) for p in lang.pairs):
                    # monotone: a fully covered pair fails every superset
                    for pair, c in grown:
                        covered[pair].discard(c)
                    continue
                chosen.append(a)
                yield from visit(idx + 1)
                chosen.pop()
                for pair, c in grown:
                    covered[pair].discard(c)
            else:
                chosen.append(a)
                yield from visit(idx + 1)
                chosen.pop()

    yield from visit(0)


@dataclass(frozen=True)
class EnumerationResult:
    items: tuple[EnumeratedFamily, ...]
    explored: int
    partial: bool


def collect_valid_families(
    lang: Language,
    triangle_only: bool = False,
    maximal_only: bool = False,
    budget: Optional[int] = None,
) -> EnumerationResult:
    """Drain the stream into a result, flagging budget exhaustion."""
    stats: dict = {}
    items: list[EnumeratedFamily] = []
    partial = False
    try:
        for item in enumerate_valid_families(
            lang, triangle_only=triangle_only, maximal_only=maximal_only,
            budget=budget, stats=stats,
        ):
            items.append(item)
    except EnumerationBudget:
        partial = True
    return EnumerationResult(tuple(items), stats.get("explored", 0), partial)
