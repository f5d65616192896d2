"""Brute-force amalgamation oracle.

Unit tests keep the base bound small; the full criterion runs (f1 at
max_base=5 and the randomized agreement sweep) live in test_acceptance.
"""

import pytest

from amalgam.core import Language, Monic, MultipartiteGraph
from amalgam.family import Family
from amalgam.oracle import (
    NO_EDGE,
    Diagram,
    Extension,
    bruteforce_check,
    complete_edge,
    replay,
    witness_search,
)

from conftest import tri


@pytest.fixture(scope="module")
def f1_broken(f1):
    return f1.without(tri(0, 2, 3, 0, 0, 0))


def test_f1_passes_small_bases(f1):
    v = bruteforce_check(f1, max_base=3)
    assert v.status == "pass"
    assert v.witness is None
    assert v.bases_examined == 30
    assert v.diagrams_examined > 0
    assert v.completeness_bound == 12  # 4 parts * 3 colours
    # bases of size <= 3 do not reach the decisive bound
    assert not v.conclusive


def test_broken_family_fails_fast(f1_broken):
    v = bruteforce_check(f1_broken, max_base=3)
    assert v.status == "fail"
    assert v.witness is not None
    assert v.max_base <= 3


def test_witness_replays(f1_broken):
    v = bruteforce_check(f1_broken, max_base=3)
    c = replay(v.witness, f1_broken)
    assert not c.ok
    assert c.blockers  # every candidate colour is blocked by a member
    # the witness joins a part-0 and a part-1 point over a {2,3} base
    d = v.witness
    assert {d.left.part, d.right.part} == {0, 1}
    assert set(d.base.parts) == {2, 3}


def test_witness_meaningless_for_full_family(f1, f1_broken):
    # adding the deleted member back makes a side of the witness non-free,
    # so the diagram leaves the amalgamation problem altogether
    v = bruteforce_check(f1_broken, max_base=3)
    with pytest.raises(ValueError, match="free"):
        replay(v.witness, f1)


def test_budget_exhaustion_is_inconclusive(f1):
    v = bruteforce_check(f1, max_base=5, budget=50)
    assert v.status == "inconclusive"
    assert not v.conclusive
    assert "budget" in v.note


def test_empty_family_passes(lang3):
    f = Family.of(lang3, [])
    v = bruteforce_check(f, max_base=2)
    assert v.status == "pass"


def test_targeted_witness_search(f1, f1_broken):
    d = witness_search(f1_broken, (0, 1))
    assert d is not None
    assert not replay(d, f1_broken).ok
    assert witness_search(f1, (0, 1)) is None


def test_complete_edge_direct(lang4, f1):
    # one base point in part 2; extend by a part-0 and a part-1 point,
    # both joined to it by colour a -- f1 blocks a,b on the new edge but
    # allows c (no member [012; c a a]), and least free colour wins
    base = MultipartiteGraph.from_edges(lang4, [2], {})
    d = Diagram(base, Extension(0, (0,)), Extension(1, (0,)))
    c = complete_edge(d, f1)
    assert c.ok
    assert c.colour == 2
    assert c.blockers == ()


def test_complete_edge_same_part_marker(lang4, f1):
    # a base vertex in the same part as an extension takes NO_EDGE
    base = MultipartiteGraph.from_edges(lang4, [0, 2], {(0, 1): 0})
    d = Diagram(base, Extension(0, (NO_EDGE, 0)), Extension(1, (2, 0)))
    c = complete_edge(d, f1)
    assert c.ok
    assert c.colour == 2


def test_same_part_extensions_never_need_an_edge(lang4, f1):
    base = MultipartiteGraph.from_edges(lang4, [2], {})
    d = Diagram(base, Extension(0, (0,)), Extension(0, (1,)))
    c = complete_edge(d, f1)
    assert c.ok
    assert c.colour is None


def test_threads_do_not_change_verdict(f1):
    a = bruteforce_check(f1, max_base=3, threads=1)
    b = bruteforce_check(f1, max_base=3, threads=4)
    assert (a.status, a.bases_examined) == (b.status, b.bases_examined)
