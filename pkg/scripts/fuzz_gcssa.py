#!/usr/bin/env python3
"""Randomised stress-run of the good-cover search.

Draws passing families (the three worked examples, a wide-language
variant of the first, and freshly generated random ones), picks a
coverable pair, a cover set and a maximal starting colour, runs the
search and checks the advertised contract:

* a "good" outcome names a key colour that the direct check confirms,
  and the key sits in a maximal class of the off-edge quasi-order;
* a "reduced" outcome shrinks the class count by exactly one;
* no monic is tested twice along the way.

Any violation aborts with a reproducible description of the run.
"""

import argparse
import itertools
import random
import sys
import time

from amalgam.core import Language, Monic
from amalgam.checker import classify
from amalgam.family import Family, is_valid
from amalgam.formats import parse_family, serialize_family
from amalgam.gcssa import gcssa_run, is_good, quasi_order
from amalgam.omission import enumerate_cover_sets

from worked_examples import F1, F2, _f3_text


def _random_passing_family(rng):
    """A valid family over a random 4-part language, or None."""
    sizes = [rng.choice((2, 3)) for _ in range(6)]
    lang = Language(4, tuple(tuple("abc"[:k]) for k in sizes))
    members = []
    target = rng.randint(1, 6)
    for _ in range(60):
        if len(members) >= target:
            break
        k = rng.choice((3, 3, 3, 4))
        parts = tuple(sorted(rng.sample(range(4), k)))
        cols = tuple(
            rng.randrange(lang.size(i, j))
            for i, j in itertools.combinations(parts, 2)
        )
        a = Monic(parts, cols)
        if all(not a.embeds_in(b) and not b.embeds_in(a) for b in members):
            members.append(a)
    fam = Family.of(lang, members)
    if not is_valid(fam) or classify(fam).status != "pass":
        return None
    return fam


def _pool(rng, extra_random):
    lang4 = Language.uniform(4)
    fams = [
        parse_family(F1, lang4),
        parse_family(F2, lang4),
        parse_family(_f3_text(), lang4),
        # the six-triangle family again, but inside a five-part language
        parse_family(F1, Language.uniform(5)),
    ]
    while len(fams) < 4 + extra_random:
        fam = _random_passing_family(rng)
        if fam is not None:
            fams.append(fam)
    return fams


def _one_run(rng, fams):
    """Run the search once; returns the outcome or None if no cover set."""
    fam = rng.choice(fams)
    pair = rng.choice(fam.lang.pairs)
    covers = list(enumerate_cover_sets(fam, pair))
    if not covers:
        return None
    cover = rng.choice(covers)
    gamma0 = rng.choice(quasi_order(cover, fam).maximal_colours)
    out = gcssa_run(cover, fam, gamma0=gamma0)

    problems = []
    if out.kind not in ("good", "reduced"):
        problems.append(f"unknown outcome kind {out.kind!r}")
    tested = [s.cover.member_for(s.gamma) for s in out.trace]
    if len(set(tested)) != len(tested):
        problems.append("a monic was tested twice")
    if out.kind == "good":
        if is_good(out.cover, fam) is None:
            problems.append("reported cover is not actually good")
        if out.key not in quasi_order(out.cover, fam).maximal_colours:
            problems.append("key colour is not maximal")
    elif out.t_final != out.t_initial - 1:
        problems.append(
            f"reduction changed t from {out.t_initial} to {out.t_final}"
        )
    if problems:
        print("CONTRACT VIOLATION", file=sys.stderr)
        print(f"  pair={pair} gamma0={gamma0}", file=sys.stderr)
        print(f"  cover={cover.describe()}", file=sys.stderr)
        for p in problems:
            print(f"  - {p}", file=sys.stderr)
        print("family:", file=sys.stderr)
        print(serialize_family(fam), file=sys.stderr)
        raise SystemExit(1)
    return out


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--runs", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--random-families", type=int, default=40,
                    help="random passing families to add to the pool")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    t0 = time.monotonic()
    fams = _pool(rng, args.random_families)
    print(f"pool: {len(fams)} passing families "
          f"({time.monotonic() - t0:.1f}s to build)")

    tally = {"good": 0, "reduced": 0}
    steps = 0
    done = 0
    t0 = time.monotonic()
    while done < args.runs:
        out = _one_run(rng, fams)
        if out is None:
            continue
        done += 1
        tally[out.kind] += 1
        steps = max(steps, len(out.trace))
    dt = time.monotonic() - t0
    print(f"{done} runs in {dt:.1f}s: {tally['good']} good, "
          f"{tally['reduced']} reduced, longest trace {steps} step(s)")
    print("contract violations: 0")
    return 0


if __name__ == "__main__":
    sys.exit(main())
