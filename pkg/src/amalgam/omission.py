"""Cover sets, omission sets, codes, and the based-on relation.

For a pair of parts {i, j}, a *cover set* is a set of family members
defined on i and j whose E_ij colours hit every colour of C_ij.  An
*omission set* over {i, j} with far parts {k, l} is a cover set made of
ijk- and ijl-triangles that all agree on their E_ik, E_il, E_jk, E_jl
edges; the four agreeing colours together with the four parts form its
*code* (i, j, k, l; c_ik, c_il, c_jk, c_jl).  Swapping the roles of the
two pairs gives the *corresponding* code over {k, l}.

These are the combinatorial objects the deciders quantify over: presence
of an omission set for a code, correspondence between the two sides, and
whether an omission set is *based on* a given cover set (its agreeing
colours supplied by members, or by triangles, of that cover set).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Optional

from .core import Language, Monic
from .family import Family


@dataclass(frozen=True, order=True)
class Code:
    """(i, j, k, l; c_ik, c_il, c_jk, c_jl), normalized to i<j and k<l."""

    base: tuple[int, int]
    far: tuple[int, int]
    sides: tuple[int, int, int, int]

    @classmethod
    def make(cls, i: int, j: int, k: int, l: int, c_ik: int, c_il: int, c_jk: int, c_jl: int) -> "Code":
        if len({i, j, k, l}) != 4:
            raise ValueError(f"code parts must be distinct, got {(i, j, k, l)}")
        if i > j:
            i, j = j, i
            c_ik, c_il, c_jk, c_jl = c_jk, c_jl, c_ik, c_il
        if k > l:
            k, l = l, k
            c_ik, c_il, c_jk, c_jl = c_il, c_ik, c_jl, c_jk
        return cls((i, j), (k, l), (c_ik, c_il, c_jk, c_jl))

    def swapped(self) -> "Code":
        """The corresponding code: base and far pairs exchange roles."""
        s = self.sides
        return Code(self.far, self.base, (s[0], s[2], s[1], s[3]))

    def unordered_key(self) -> tuple:
        """Identifies a code and its correspondent as one census entry."""
        other = self.swapped()
        a = (self.base, self.far, self.sides)
        b = (other.base, other.far, other.sides)
        return min(a, b)

    def far_triangle(self, far_part: int, c: int) -> Monic:
        """T_k^c or T_l^c: the agreeing triangle through one far part."""
        i, j = self.base
        k, l = self.far
        if far_part == k:
            edges = {(i, j): c, (i, k): self.sides[0], (j, k): self.sides[2]}
        elif far_part == l:
            edges = {(i, j): c, (i, l): self.sides[1], (j, l): self.sides[3]}
        else:
            raise ValueError(f"part {far_part} is not a far part of {self}")
        return Monic.from_edges((i, j, far_part), edges)

    def agrees_with(self, a: Monic) -> bool:
        """Does ``a`` (defined on all four parts) match the coded edges?"""
        i, j = self.base
        k, l = self.far
        if not {i, j, k, l} <= a.part_set:
            return False
        return (
            a.colour(i, k) == self.sides[0]
            and a.colour(i, l) == self.sides[1]
            and a.colour(j, k) == self.sides[2]
            and a.colour(j, l) == self.sides[3]
        )

    def describe(self, lang: Language) -> str:
        i, j = self.base
        k, l = self.far
        names = (
            lang.colour_label(i, k, self.sides[0]),
            lang.colour_label(i, l, self.sides[1]),
            lang.colour_label(j, k, self.sides[2]),
            lang.colour_label(j, l, self.sides[3]),
        )
        return f"({i},{j},{k},{l}; {','.join(names)})"


def validate_code(code: Code, lang: Language) -> list[str]:
    problems = []
    i, j = code.base
    k, l = code.far
    parts = (i, j, k, l)
    if len(set(parts)) != 4:
        problems.append("code parts are not distinct")
    for p in parts:
        if not 0 <= p < lang.part_count:
            problems.append(f"part {p} outside the language")
    if problems:
        return problems
    for (u, v), c in zip(((i, k), (i, l), (j, k), (j, l)), code.sides):
        if not 0 <= c < lang.size(u, v):
            problems.append(f"colour {c} out of range on pair ({u}, {v})")
    return problems


@dataclass(frozen=True)
class CoverSet:
    """Members covering every colour of C_ij on the pair {i, j}.

    A size-|C_ij| cover set (one member per colour) is a Lambda set — the
    only kind the deciders range over; bigger sets appear in diagnostics.
    """

    pair: tuple[int, int]
    members: tuple[Monic, ...]

    @cached_property
    def by_colour(self) -> dict[int, tuple[Monic, ...]]:
        i, j = self.pair
        out: dict[int, list[Monic]] = {}
        for a in self.members:
            out.setdefault(a.colour(i, j), []).append(a)
        return {c: tuple(ms) for c, ms in out.items()}

    def covers(self, lang: Language) -> bool:
        return all(c in self.by_colour for c in lang.colours(*self.pair))

    def is_lambda(self, lang: Language) -> bool:
        return self.covers(lang) and len(self.members) == lang.size(*self.pair)

    def member_for(self, c: int) -> Monic:
        ms = self.by_colour.get(c, ())
        if len(ms) != 1:
            raise ValueError(f"cover set has {len(ms)} members for colour {c}")
        return ms[0]

    def assignment(self, lang: Language) -> dict[int, Monic]:
        """colour -> its unique member; requires a Lambda set."""
        if not self.is_lambda(lang):
            raise ValueError("assignment needs exactly one member per colour")
        return {c: self.member_for(c) for c in lang.colours(*self.pair)}

    def describe(self, lang: Language) -> str:
        i, j = self.pair
        body = ", ".join(a.describe(lang) for a in self.members)
        return f"C_{i}{j}-cover {{{body}}}"


def validate_cover_set(cs: CoverSet, f: Family) -> list[str]:
    problems = []
    i, j = cs.pair
    if not (0 <= i < f.lang.part_count and 0 <= j < f.lang.part_count and i < j):
        problems.append(f"bad pair {cs.pair}")
        return problems
    for a in cs.members:
        if a not in f:
            problems.append(f"{a.describe(f.lang)} is not a family member")
        elif not a.defined_on(i, j):
            problems.append(f"{a.describe(f.lang)} is not defined on the pair")
    if not cs.covers(f.lang):
        missing = [c for c in f.lang.colours(i, j) if c not in cs.by_colour]
        problems.append(f"colours {missing} uncovered")
    return problems


def enumerate_cover_sets(f: Family, pair: tuple[int, int]) -> Iterator[CoverSet]:
    """All Lambda cover sets for the pair: one member per colour.

    The stream is a lazy product over colours, candidates in family
    order; it is empty exactly when some colour of C_ij appears on no
    member.  Larger cover sets reduce to these, so the deciders only
    consume this stream.
    """
    i, j = min(pair), max(pair)
    per_colour = [
        [a for a in f.on_pair(i, j) if a.colour(i, j) == c] for c in f.lang.colours(i, j)
    ]
    if any(not cands for cands in per_colour):
        return
    for pick in itertools.product(*per_colour):
        yield CoverSet((i, j), tuple(pick))


def codes_based_on(cover: CoverSet) -> set[Code]:
    """Omega_ij(A): every code whose four agreeing colours are supplied by
    members of the cover set — one defined on {i,j,k} for the k-side and
    one on {i,j,l} for the l-side, not necessarily distinct."""
    i, j = cover.pair
    out: set[Code] = set()
    far_parts = sorted({p for a in cover.members for p in a.parts} - {i, j})
    for k, l in itertools.combinations(far_parts, 2):
        ks = [a for a in cover.members if {i, j, k} <= a.part_set]
        ls = [a for a in cover.members if {i, j, l} <= a.part_set]
        for ak, al in itertools.product(ks, ls):
            out.add(
                Code.make(i, j, k, l, ak.colour(i, k), al.colour(i, l), ak.colour(j, k), al.colour(j, l))
            )
    return out


def based_on(a: CoverSet, b: CoverSet) -> bool:
    """The based-on quasi-order on cover sets: Omega(a) within Omega(b)."""
    if a.pair != b.pair:
        raise ValueError("cover sets on different pairs are incomparable")
    return codes_based_on(a) <= codes_based_on(b)


@dataclass(frozen=True)
class OmissionSet:
    """All family triangles agreeing with a code, covering every E_ij colour.

    ``both_types`` records whether triangles through both far parts occur;
    a one-typed set never arises from a family that passes the deciders,
    and the deciders refuse to count it as an omission set.
    """

    code: Code
    members: tuple[Monic, ...]
    both_types: bool

    @property
    def pair(self) -> tuple[int, int]:
        return self.code.base

    def describe(self, lang: Language) -> str:
        body = ", ".join(a.describe(lang) for a in self.members)
        return f"omission set {self.code.describe(lang)} {{{body}}}"


def omission_set_with_code(f: Family, code: Code) -> Optional[OmissionSet]:
    """The agreeing triangles present in ``f``, if they cover C_ij.

    Returns None when some E_ij colour has neither agreeing triangle in
    the family.  Presence alone does not imply ``both_types`` — callers
    that stand in for the deciders must require the flag.
    """
    i, j = code.base
    k, l = code.far
    members = []
    saw_k = saw_l = False
    for c in f.lang.colours(i, j):
        tk = code.far_triangle(k, c)
        tl = code.far_triangle(l, c)
        hit = False
        if tk in f:
            members.append(tk)
            saw_k = hit = True
        if tl in f:
            members.append(tl)
            saw_l = hit = True
        if not hit:
            return None
    return OmissionSet(code, tuple(members), saw_k and saw_l)


def corresponding_exists(f: Family, s: OmissionSet, require_both_types: bool = True) -> bool:
    """Is the corresponding omission set (swapped code) present in f?"""
    partner = omission_set_with_code(f, s.code.swapped())
    if partner is None:
        return False
    return partner.both_types or not require_both_types


def candidate_codes(f: Family) -> Iterator[Code]:
    """Codes of all potential omission sets with triangles of both types.

    Generated from pairs of family triangles on {i,j,k} x {i,j,l}: any
    omission set containing both triangle types arises this way, so
    testing presence over this stream sees every code the deciders care
    about.  Deduplicated, deterministic order.
    """
    lang = f.lang
    tris: dict[tuple[int, ...], list[Monic]] = {}
    for a in f.members:
        if len(a.parts) == 3:
            tris.setdefault(a.parts, []).append(a)
    for i, j in lang.pairs:
        rest = [p for p in range(lang.part_count) if p != i and p != j]
        for k, l in itertools.combinations(rest, 2):
            ks = tris.get(tuple(sorted((i, j, k))), [])
            ls = tris.get(tuple(sorted((i, j, l))), [])
            codes = {
                Code.make(i, j, k, l, tk.colour(i, k), tl.colour(i, l), tk.colour(j, k), tl.colour(j, l))
                for tk in ks
                for tl in ls
            }
            yield from sorted(codes)


def present_codes(f: Family) -> Iterator[tuple[Code, OmissionSet]]:
    """Every code with a both-typed omission set present in ``f``."""
    for code in candidate_codes(f):
        s = omission_set_with_code(f, code)
        if s is not None and s.both_types:
            yield code, s


def based_on_triangles(f: Family, cover: CoverSet) -> Optional[tuple[Code, OmissionSet]]:
    """First omission set present in ``f`` based on triangles of the cover set.

    Scans pairs (T, T') of cover-set members that are triangles with
    distinct far parts, in member order, and queries each induced code;
    an omission set must be both-typed to count.
    """
    seen: set[Code] = set()
    i, j = cover.pair
    tris = [a for a in cover.members if len(a.parts) == 3]
    for tk, tl in itertools.product(tris, tris):
        k = next(p for p in tk.parts if p != i and p != j)
        l = next(p for p in tl.parts if p != i and p != j)
        if k == l:
            continue
        code = Code.make(i, j, k, l, tk.colour(i, k), tl.colour(i, l), tk.colour(j, k), tl.colour(j, l))
        if code in seen:
            continue
        seen.add(code)
        s = omission_set_with_code(f, code)
        if s is not None and s.both_types:
            return code, s
    return None


def based_on_members(f: Family, cover: CoverSet) -> Optional[tuple[Code, OmissionSet]]:
    """Looser variant: the omission set's code may be supplied by any
    members of the cover set, triangles or not (the Omega relation)."""
    for code in sorted(codes_based_on(cover)):
        s = omission_set_with_code(f, code)
        if s is not None and s.both_types:
            return code, s
    return None


def agreeing_monic_violation(f: Family, code: Code) -> Optional[Monic]:
    """A family member on all four code parts agreeing with the code.

    With the code's omission set present, such a member has a forbidden
    proper subgraph, contradicting pairwise non-embeddability — so this
    is a diagnostic that should always come back None for valid input.
    """
    for a in f.members:
        if code.agrees_with(a):
            return a
    return None
