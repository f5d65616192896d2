"""Finite approximations of the limit structure.

The large n=150 run with its saturation and homogeneity gates lives in
test_acceptance; here the builds stay small enough to keep the suite
quick while still exercising every code path.
"""

import pytest

from amalgam.core import Language, MultipartiteGraph
from amalgam.family import Family
from amalgam.fraisse import (
    BuildConfig,
    BuildError,
    audit_age,
    build_generic,
    free_monic_types,
    realized_monic_types,
    sample_homogeneity,
)

from conftest import tri, f1_members


def _recoloured(g, changes):
    edges = {}
    for u in range(g.n):
        for v in range(u + 1, g.n):
            c = g.rows[u][v]
            if c != -1:
                edges[(u, v)] = c
    edges.update(changes)
    return MultipartiteGraph.from_edges(g.lang, g.parts, edges)


def test_build_validates_config(f1):
    with pytest.raises(ValueError, match="vertex per part"):
        build_generic(f1, BuildConfig(n=3))
    with pytest.raises(ValueError, match="at least 1"):
        build_generic(f1, BuildConfig(n=10, s=0))
    with pytest.raises(ValueError, match="part policy"):
        build_generic(f1, BuildConfig(n=10, part_policy="zigzag"))


def test_build_rejects_failing_family(f1):
    bad = f1.without(tri(0, 2, 3, 0, 0, 0))
    with pytest.raises(ValueError, match="passing"):
        build_generic(bad, BuildConfig(n=10))


def test_build_f1_small(f1):
    rep = build_generic(f1, BuildConfig(n=60, s=2, seed=0))
    g = rep.graph
    assert g.n == 60
    assert sum(rep.per_part_sizes) == 60
    # round-robin with deferral keeps parts within a few vertices
    assert max(rep.per_part_sizes) - min(rep.per_part_sizes) <= 6
    assert rep.demands_issued == rep.demands_satisfied
    # the audit bundled into the report is clean in both directions
    assert rep.audit.forbidden_hits == ()
    assert rep.audit.missing_types == ()
    assert rep.audit.free_type_count > 0


def test_build_is_deterministic(f1):
    a = build_generic(f1, BuildConfig(n=40, s=2, seed=7)).graph
    b = build_generic(f1, BuildConfig(n=40, s=2, seed=7)).graph
    assert a.rows == b.rows and a.parts == b.parts
    # the completion policy carries no randomness at all: seeds that
    # differ still produce the same graph
    c = build_generic(f1, BuildConfig(n=40, s=2, seed=8)).graph
    assert c.rows == a.rows


def test_builds_grow_by_extension(f1):
    # the n=40 graph is the first forty vertices of the n=60 graph, so
    # saturation can only improve with n
    g40 = build_generic(f1, BuildConfig(n=40, s=2, seed=0)).graph
    g60 = build_generic(f1, BuildConfig(n=60, s=2, seed=0)).graph
    assert g60.parts[:40] == g40.parts
    for u in range(40):
        assert g60.rows[u][:40] == g40.rows[u]


def test_empty_family_realizes_every_type(lang3):
    fam = Family.of(lang3, [])
    rep = build_generic(fam, BuildConfig(n=60, s=2, seed=0))
    assert rep.audit.free_type_count == 39  # 3 singles + 9 pairs + 27 triangles
    assert rep.audit.missing_types == ()


def test_single_subset_demands(f1):
    rep = build_generic(f1, BuildConfig(n=30, s=1, seed=0))
    assert rep.audit.forbidden_hits == ()
    assert rep.demands_issued == rep.demands_satisfied


def test_minimal_build_reports_missing_types(f1):
    # four vertices cannot carry every free type on up to three parts
    rep = build_generic(f1, BuildConfig(n=4, s=1, seed=0))
    assert rep.audit.forbidden_hits == ()
    assert rep.audit.missing_types
    missing = set(rep.audit.missing_types)
    realized = realized_monic_types(rep.graph, 3)
    free = set(free_monic_types(f1, 3))
    assert missing == free - realized


def test_audit_catches_planted_forbidden_triangle(lang3):
    fam = Family.of(lang3, [tri(0, 1, 2, 0, 0, 0)])
    rep = build_generic(fam, BuildConfig(n=30, s=2, seed=0))
    g = rep.graph
    vs = [g.verts_by_part[p][0] for p in range(3)]
    changes = {}
    for a in range(3):
        for b in range(a + 1, 3):
            changes[tuple(sorted((vs[a], vs[b])))] = 0
    bad = _recoloured(g, changes)
    aud = audit_age(bad, fam, parts_bound=3)
    assert len(aud.forbidden_hits) >= 1
    member, where = aud.forbidden_hits[0]
    assert member == tri(0, 1, 2, 0, 0, 0)
    assert bad.monic_at(where) == member


def test_homogeneity_trivial_language_is_exact():
    # one colour on one pair: every partial map extends, rate is 1.0
    lang2 = Language.uniform(2, ("a",))
    rep = build_generic(Family.of(lang2, []), BuildConfig(n=20, s=1, seed=0))
    hom = sample_homogeneity(rep.graph, k=2, trials=60, seed=1)
    assert hom.trials == 60
    assert hom.successes == 60
    assert hom.rate == 1.0
    assert hom.failures == ()


def test_homogeneity_zero_trials(f1):
    rep = build_generic(f1, BuildConfig(n=20, s=1, seed=0))
    hom = sample_homogeneity(rep.graph, k=2, trials=0)
    assert hom.rate is None


def test_homogeneity_reasonable_on_small_build(f1):
    rep = build_generic(f1, BuildConfig(n=60, s=2, seed=0))
    hom = sample_homogeneity(rep.graph, k=3, trials=120, seed=0)
    assert hom.trials == 120
    # saturation at n=60 is partial; the acceptance run at n=150 gates at 0.95
    assert hom.rate >= 0.8
    for entry in hom.failures:
        assert isinstance(entry, str) and "map" in entry


def test_homogeneity_failures_capped(f1):
    rep = build_generic(f1, BuildConfig(n=8, s=1, seed=0))
    hom = sample_homogeneity(rep.graph, k=3, trials=400, seed=0, failure_cap=5)
    assert len(hom.failures) <= 5
