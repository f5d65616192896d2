"""End-to-end acceptance gates.

One test per numbered behaviour gate; each prints a single PASS line
with its headline numbers and asserts its stated runtime budget.  Run
with ``pytest tests/test_acceptance.py -v -s`` to see the lines.
"""

import itertools
import random
import time

import pytest

from amalgam.core import Language, Monic
from amalgam.family import Family, is_valid
from amalgam.checker import (
    check_mgeneric,
    check_quadripartite,
    check_tripartite,
    classify,
    omission_pair_census,
)
from amalgam.enumeration import maximality_witness, monic_pool
from amalgam.formats import serialize_monic
from amalgam.fraisse import BuildConfig, build_generic, sample_homogeneity
from amalgam.gcssa import gcssa_run, is_good, quasi_order
from amalgam.omission import CoverSet, enumerate_cover_sets
from amalgam.oracle import bruteforce_check, replay, witness_search

from conftest import tri, f1_members, f2_members, f3_members


def _elapsed_line(n, t0, detail):
    dt = time.monotonic() - t0
    print(f"criterion {n}: PASS ({detail}; {dt:.1f}s)")
    return dt


# ---------------------------------------------------------------------------
# shared material
# ---------------------------------------------------------------------------

def _random_language(rng):
    sizes = [rng.choice((2, 3)) for _ in range(6)]
    return Language(4, tuple(tuple("abc"[:k]) for k in sizes))


def _random_monic(lang, rng):
    k = rng.choice((3, 3, 3, 4))
    parts = tuple(sorted(rng.sample(range(4), k)))
    cols = tuple(
        rng.randrange(lang.size(i, j)) for i, j in itertools.combinations(parts, 2)
    )
    return Monic(parts, cols)


def _random_valid_family(rng):
    lang = _random_language(rng)
    target = rng.randint(1, 6)
    members = []
    for _ in range(60):
        if len(members) >= target:
            break
        a = _random_monic(lang, rng)
        if all(not a.embeds_in(b) and not b.embeds_in(a) for b in members):
            members.append(a)
    fam = Family.of(lang, members)
    return fam if is_valid(fam) else None


@pytest.fixture(scope="module")
def random_m4_families():
    """The seeded agreement-sweep sample, reused by the consistency gate."""
    rng = random.Random(20260823)
    out = []
    while len(out) < 200:
        fam = _random_valid_family(rng)
        if fam is not None:
            out.append(fam)
    return out


@pytest.fixture(scope="module")
def exercised_m4_families(f1, f2, f3, f1_extras, random_m4_families):
    fams = [f1, f2, f3, f1.without(tri(0, 2, 3, 0, 0, 0))]
    for r in range(len(f1_extras) + 1):
        for extra in itertools.combinations(f1_extras, r):
            fam = f1
            for a in extra:
                fam = fam.with_member(a)
            fams.append(fam)
    fams.extend(random_m4_families)
    return fams


# ---------------------------------------------------------------------------
# the ten gates
# ---------------------------------------------------------------------------

def test_criterion_01_tripartite_census(lang3):
    t0 = time.monotonic()
    pool = [a for a in monic_pool(lang3) if 0 not in a.colours]
    assert len(pool) == 8  # (3-1)^3 triangles avoiding the shared colour
    checked = 0
    for r in range(len(pool) + 1):
        for sub in itertools.combinations(pool, r):
            fam = Family.of(lang3, list(sub))
            assert check_tripartite(fam).status == "pass"
            assert classify(fam).status == "pass"
            o = bruteforce_check(fam, max_base=4)
            assert o.status == "pass"
            checked += 1
    assert checked == 256
    dt = _elapsed_line(1, t0, "pool=8, 256 subsets pass, oracle agrees")
    assert dt < 60


def test_criterion_02_first_worked_family(f1):
    t0 = time.monotonic()
    v = classify(f1)
    assert v.status == "pass"
    assert len(v.census) == 1
    entry = v.census[0]
    assert entry.code.base == (0, 1) and entry.code.far == (2, 3)
    assert entry.code.sides == (0, 0, 0, 0)
    assert entry.partner_code == entry.code.swapped()
    o = bruteforce_check(f1, max_base=5)
    assert o.status == "pass"
    dt = _elapsed_line(2, t0, "census=1 at (0,1,2,3; a,a,a,a), oracle pass at base 5")
    assert dt < 60


def test_criterion_03_optional_extensions(f1, f1_extras):
    t0 = time.monotonic()
    count = 0
    for r in range(len(f1_extras) + 1):
        for extra in itertools.combinations(f1_extras, r):
            fam = f1
            for a in extra:
                fam = fam.with_member(a)
            assert classify(fam).status == "pass"
            count += 1
    assert count == 8
    dt = _elapsed_line(3, t0, "all 8 supersets pass")
    assert dt < 60


def test_criterion_04_maximal_family_census_and_maximality(f2):
    t0 = time.monotonic()
    v = classify(f2)
    assert v.status == "pass"
    census = omission_pair_census(f2)
    assert len(census) == 3

    def keyed(entry):
        side = frozenset(serialize_monic(a, f2.lang) for a in entry.omission.members)
        far = frozenset(serialize_monic(a, f2.lang) for a in entry.partner.members)
        return entry.code.base, side, far

    got = {keyed(e) for e in census}
    expect = {
        (
            (0, 1),
            frozenset({"[012; a a a]", "[012; b a a]", "[013; a a a]", "[013; c a a]"}),
            frozenset({"[023; a a a]", "[023; a a b]", "[123; a a a]", "[123; a a c]"}),
        ),
        (
            (0, 2),
            frozenset({"[012; a a a]", "[012; a b a]", "[023; a a a]", "[023; c a a]"}),
            frozenset({"[013; a a a]", "[013; a a b]", "[123; a a a]", "[123; a c a]"}),
        ),
        (
            (0, 3),
            frozenset({"[013; a a a]", "[013; a b a]", "[023; a a a]", "[023; a c a]"}),
            frozenset({"[012; a a a]", "[012; a a b]", "[123; a a a]", "[123; c a a]"}),
        ),
    }
    assert got == expect
    # no one-monic extension over the full language keeps the class good
    assert maximality_witness(f2) is None
    dt = _elapsed_line(4, t0, "census=3 as listed, no valid extension")
    assert dt < 600


def test_criterion_05_sign_cube_family(f3, lang4):
    t0 = time.monotonic()
    v = classify(f3)
    assert v.status == "pass"
    census = omission_pair_census(f3)
    assert len(census) == 16
    assert {(e.code.base, e.code.far) for e in census} == {((0, 1), (2, 3))}
    assert {e.code.sides for e in census} == set(itertools.product((0, 2), repeat=4))
    with_cover, without = set(), set()
    for pair in lang4.pairs:
        (with_cover if any(True for _ in enumerate_cover_sets(f3, pair)) else without).add(pair)
    assert with_cover == {(0, 1), (2, 3)}
    assert without == {(0, 2), (0, 3), (1, 2), (1, 3)}
    dt = _elapsed_line(5, t0, "census=16 over {a,c}^4, cover sets only on (0,1),(2,3)")
    assert dt < 300


def test_criterion_06_negative_control(f1):
    t0 = time.monotonic()
    bad = f1.without(tri(0, 2, 3, 0, 0, 0))
    v = classify(bad)
    assert v.status == "fail"
    assert v.condition == "correspondence"
    assert {v.code.base, v.code.far} == {(0, 1), (2, 3)}
    assert v.code.sides == (0, 0, 0, 0)
    d = witness_search(bad, (0, 1))
    assert d is not None
    assert not replay(d, bad).ok
    o = bruteforce_check(bad, max_base=3)
    assert o.status == "fail"
    assert o.witness is not None
    assert not replay(o.witness, bad).ok
    dt = _elapsed_line(6, t0, "condition (i) fails at the expected code, witness replays")
    assert dt < 60


def test_criterion_07_oracle_agreement(random_m4_families):
    t0 = time.monotonic()
    # every family over the two-colour three-part language
    lang = Language.uniform(3, ("a", "b"))
    pool = monic_pool(lang)
    assert len(pool) == 8
    exhaustive = 0
    for r in range(len(pool) + 1):
        for sub in itertools.combinations(pool, r):
            fam = Family.of(lang, list(sub))
            a = classify(fam).status == "pass"
            b = bruteforce_check(fam, max_base=4).status == "pass"
            assert a == b, f"disagreement on {[m.describe(lang) for m in sub]}"
            exhaustive += 1
    assert exhaustive == 256

    checked = 0
    for fam in random_m4_families:
        a = classify(fam).status == "pass"
        b = bruteforce_check(fam, max_base=5).status == "pass"
        assert a == b, f"disagreement on {[m.describe(fam.lang) for m in fam.members]}"
        checked += 1
    assert checked >= 200
    dt = _elapsed_line(7, t0, f"256 exhaustive + {checked} random families, zero disagreements")
    assert dt < 1800


def test_criterion_08_search_contract(f1, f2, f3, f1_extras, random_m4_families):
    t0 = time.monotonic()
    rng = random.Random(8)
    passing = [f2, f3]
    for r in range(len(f1_extras) + 1):
        for extra in itertools.combinations(f1_extras, r):
            fam = f1
            for a in extra:
                fam = fam.with_member(a)
            passing.append(fam)
    passing.append(Family.of(Language.uniform(5), f1_members()))
    for fam in random_m4_families:
        if classify(fam).ok:
            passing.append(fam)

    runs = 0
    good = reduced = 0
    while runs < 1000:
        fam = rng.choice(passing)
        pair = rng.choice(fam.lang.pairs)
        per_colour = [
            [a for a in fam.on_pair(*pair) if a.colour(*pair) == c]
            for c in fam.lang.colours(*pair)
        ]
        if any(not cands for cands in per_colour):
            continue
        cover = CoverSet(pair, tuple(rng.choice(cands) for cands in per_colour))
        maxes = quasi_order(cover, fam).maximal_colours
        out = gcssa_run(cover, fam, gamma0=rng.choice(maxes))
        runs += 1
        tested = [s.cover.member_for(s.gamma) for s in out.trace]
        assert len(set(tested)) == len(tested), "a monic was tested twice"
        if out.kind == "good":
            good += 1
            assert is_good(out.cover, fam) is not None
            assert out.key in quasi_order(out.cover, fam).maximal_colours
        else:
            reduced += 1
            assert out.kind == "reduced"
            assert out.t_final == out.t_initial - 1
    dt = _elapsed_line(8, t0, f"1000 runs, {good} good / {reduced} reduced, zero violations")
    assert dt < 600


def test_criterion_09_generic_build(f1):
    t0 = time.monotonic()
    rep = build_generic(f1, BuildConfig(n=150, s=3, seed=0, audit_parts_bound=4))
    audit = rep.audit
    assert audit.parts_bound == 4
    assert audit.forbidden_hits == ()
    assert audit.missing_types == ()
    assert audit.free_type_count > 0
    hom = sample_homogeneity(rep.graph, k=3, trials=500, seed=0)
    assert hom.trials == 500
    assert hom.rate >= 0.95
    dt = _elapsed_line(
        9, t0, f"audit clean both ways ({audit.free_type_count} types), rate {hom.rate:.3f}"
    )
    assert dt < 300


def test_criterion_10_decider_consistency(exercised_m4_families):
    t0 = time.monotonic()
    count = 0
    for fam in exercised_m4_families:
        if fam.lang.part_count != 4:
            continue
        a = check_quadripartite(fam)
        b = check_mgeneric(fam)
        assert (a.status, a.condition, a.pair, a.code) == (
            b.status,
            b.condition,
            b.pair,
            b.code,
        ), f"deciders disagree on {[m.describe(fam.lang) for m in fam.members]}"
        count += 1
    assert count >= 212  # fixtures, supersets, control, and the random sweep
    dt = _elapsed_line(10, t0, f"{count} families, identical verdicts")
    assert dt < 300
