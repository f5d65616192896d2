"""Structural deciders: is Forb(family) an amalgamation class?

The decision is by finite combinatorial conditions on the family itself,
never by searching amalgamation problems (the oracle module does that
independently):

* two parts: only the empty family qualifies (and any member on fewer
  than three parts is invalid anyway);
* three parts: pass iff on every pair some colour appears on no member —
  no cover set exists;
* four or more parts: pass iff (i) every present omission set has its
  corresponding omission set present, and (ii) every one-member-per-
  colour cover set admits a present omission set based on triangles
  from it.

``check_quadripartite`` spells the four-part case out directly (the far
pair is the complement of the base pair); ``check_mgeneric`` runs the
general loops and dispatches to the tripartite test at m=3.  The two
must agree at m=4.  PASS verdicts carry the census of corresponding
omission-set pairs as evidence; FAIL verdicts carry the violated
condition with the offending code or cover set.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .core import Monic
from .family import Family, validate_family
from .omission import (
    Code,
    CoverSet,
    OmissionSet,
    agreeing_monic_violation,
    based_on_members,
    based_on_triangles,
    enumerate_cover_sets,
    omission_set_with_code,
    present_codes,
)


@dataclass(frozen=True)
class CensusEntry:
    """One corresponding pair of omission sets (or an unmatched side)."""

    code: Code
    omission: OmissionSet
    partner_code: Code
    partner: Optional[OmissionSet]

    @property
    def matched(self) -> bool:
        return self.partner is not None


@dataclass(frozen=True)
class Verdict:
    status: str  # "pass" | "fail" | "invalid"
    part_count: int
    condition: Optional[str] = None  # "cover-set" | "correspondence" | "based-on"
    pair: Optional[tuple[int, int]] = None
    code: Optional[Code] = None
    cover: Optional[CoverSet] = None
    census: tuple[CensusEntry, ...] = ()
    findings: tuple[str, ...] = ()
    problems: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.status == "pass"


def omission_pair_census(f: Family) -> tuple[CensusEntry, ...]:
    """All present both-typed omission sets, one entry per code pair.

    Each entry lists the lexicographically smaller code first; the
    partner side is None when its omission set is absent or one-typed
    (which can only happen for families failing condition (i)).
    """
    sides: dict[Code, OmissionSet] = dict(present_codes(f))
    entries = []
    for key in sorted({code.unordered_key() for code in sides}):
        primary = Code(*key)
        s = sides[primary] if primary in sides else None
        if s is None:
            primary = primary.swapped()
            s = sides[primary]
        partner_code = primary.swapped()
        entries.append(CensusEntry(primary, s, partner_code, sides.get(partner_code)))
    return tuple(entries)


def check_tripartite(f: Family) -> Verdict:
    """Three parts: pass iff every pair leaves some colour uncovered."""
    lang = f.lang
    if lang.part_count != 3:
        raise ValueError(f"tripartite check on a {lang.part_count}-part language")
    for i, j in lang.pairs:
        on_pair = f.on_pair(i, j)
        covered = {a.colour(i, j) for a in on_pair}
        if covered >= set(lang.colours(i, j)):
            picks = tuple(
                next(a for a in on_pair if a.colour(i, j) == c) for c in lang.colours(i, j)
            )
            return Verdict(
                status="fail",
                part_count=3,
                condition="cover-set",
                pair=(i, j),
                cover=CoverSet((i, j), picks),
            )
    return Verdict(status="pass", part_count=3)


def _census_findings(f: Family, census) -> tuple[str, ...]:
    notes = []
    for entry in census:
        bad = agreeing_monic_violation(f, entry.code)
        if bad is not None:
            notes.append(
                f"member {bad.describe(f.lang)} agrees with present code "
                f"{entry.code.describe(f.lang)} on all four parts"
            )
    return tuple(notes)


def check_quadripartite(f: Family, loose: bool = False) -> Verdict:
    """Four parts, with the far pair forced as the base pair's complement.

    With ``loose`` set, condition (ii) is additionally evaluated in the
    weaker any-member form; a cover set that has a member-based omission
    set but no triangle-based one is reported in the findings (the
    verdict always follows the triangle-based form).
    """
    lang = f.lang
    if lang.part_count != 4:
        raise ValueError(f"quadripartite check on a {lang.part_count}-part language")
    findings: list[str] = []
    tris: dict[tuple[int, ...], list[Monic]] = {}
    for a in f.members:
        if len(a.parts) == 3:
            tris.setdefault(a.parts, []).append(a)

    # condition (i): correspondence for every present omission set
    for i, j in lang.pairs:
        k, l = (p for p in range(4) if p != i and p != j)
        ks = tris.get(tuple(sorted((i, j, k))), [])
        ls = tris.get(tuple(sorted((i, j, l))), [])
        codes = {
            Code.make(i, j, k, l, tk.colour(i, k), tl.colour(i, l), tk.colour(j, k), tl.colour(j, l))
            for tk in ks
            for tl in ls
        }
        for code in sorted(codes):
            s = omission_set_with_code(f, code)
            if s is None or not s.both_types:
                continue
            partner = omission_set_with_code(f, code.swapped())
            if partner is None or not partner.both_types:
                return Verdict(
                    status="fail",
                    part_count=4,
                    condition="correspondence",
                    pair=(i, j),
                    code=code,
                    findings=tuple(findings),
                )

    # condition (ii): a triangle-based omission set for every cover set
    for i, j in lang.pairs:
        for cover in enumerate_cover_sets(f, (i, j)):
            hit = based_on_triangles(f, cover)
            if loose and hit is None and based_on_members(f, cover) is not None:
                findings.append(
                    f"pair ({i},{j}): {cover.describe(lang)} has a member-based "
                    "omission set but no triangle-based one"
                )
            if hit is None:
                return Verdict(
                    status="fail",
                    part_count=4,
                    condition="based-on",
                    pair=(i, j),
                    cover=cover,
                    findings=tuple(findings),
                )

    census = omission_pair_census(f)
    return Verdict(
        status="pass",
        part_count=4,
        census=census,
        findings=tuple(findings) + _census_findings(f, census),
    )


def check_mgeneric(f: Family, loose: bool = False) -> Verdict:
    """The general decider for m >= 3 parts (m = 3 delegates)."""
    lang = f.lang
    if lang.part_count < 3:
        raise ValueError(f"m-generic check needs at least 3 parts, got {lang.part_count}")
    if lang.part_count == 3:
        return check_tripartite(f)
    findings: list[str] = []

    for code, _s in present_codes(f):
        partner = omission_set_with_code(f, code.swapped())
        if partner is None or not partner.both_types:
            return Verdict(
                status="fail",
                part_count=lang.part_count,
                condition="correspondence",
                pair=code.base,
                code=code,
            )

    for pair in lang.pairs:
        for cover in enumerate_cover_sets(f, pair):
            hit = based_on_triangles(f, cover)
            if loose and hit is None and based_on_members(f, cover) is not None:
                findings.append(
                    f"pair {pair}: {cover.describe(lang)} has a member-based "
                    "omission set but no triangle-based one"
                )
            if hit is None:
                return Verdict(
                    status="fail",
                    part_count=lang.part_count,
                    condition="based-on",
                    pair=pair,
                    cover=cover,
                    findings=tuple(findings),
                )

    census = omission_pair_census(f)
    return Verdict(
        status="pass",
        part_count=lang.part_count,
        census=census,
        findings=tuple(findings) + _census_findings(f, census),
    )


def classify(f: Family, loose: bool = False) -> Verdict:
    """Validate, then decide by part count.

    Two-part languages admit no (valid, non-empty) forbidden family, so a
    clean validation at m=2 is already a pass.
    """
    problems = validate_family(f)
    if problems:
        return Verdict(
            status="invalid", part_count=f.lang.part_count, problems=tuple(problems)
        )
    if f.lang.part_count == 2:
        return Verdict(status="pass", part_count=2)
    if f.lang.part_count == 3:
        return check_tripartite(f)
    return check_mgeneric(f, loose=loose)
