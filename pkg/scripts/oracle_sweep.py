#!/usr/bin/env python3
"""Agreement sweep: theorem-based classifier vs. brute-force oracle.

Generates random valid families over random four-part languages, runs
both deciders on each, and reports any disagreement.  The oracle is
the slow independent check, so the sweep is the cheapest way to shake
out a classifier bug on inputs nobody hand-picked.

Families whose oracle run comes back inconclusive (budget exhausted)
are counted but excluded from the agreement figure.
"""

import argparse
import itertools
import random
import sys
import time

from amalgam.checker import classify
from amalgam.core import Language, Monic
from amalgam.family import Family, is_valid
from amalgam.formats import serialize_family
from amalgam.oracle import bruteforce_check


def _random_valid_family(rng):
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
    return fam if is_valid(fam) else None


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=200,
                    help="families to sweep")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-base", type=int, default=5,
                    help="largest oracle base graph")
    ap.add_argument("--budget", type=int, default=None,
                    help="optional cap on oracle diagrams per family")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    t0 = time.monotonic()
    statuses = {"pass": 0, "fail": 0}
    inconclusive = 0
    disagreements = []
    done = 0
    while done < args.count:
        fam = _random_valid_family(rng)
        if fam is None:
            continue
        done += 1
        v = classify(fam)
        o = bruteforce_check(fam, max_base=args.max_base, budget=args.budget)
        if o.status == "inconclusive":
            inconclusive += 1
            continue
        statuses[v.status] += 1
        if v.status != o.status:
            disagreements.append((fam, v, o))
            print(f"DISAGREEMENT: classifier={v.status} oracle={o.status}",
                  file=sys.stderr)
            print(serialize_family(fam), file=sys.stderr)

    dt = time.monotonic() - t0
    print(f"{done} families in {dt:.1f}s "
          f"(classifier: {statuses['pass']} pass, {statuses['fail']} fail; "
          f"oracle inconclusive on {inconclusive})")
    print(f"disagreements: {len(disagreements)}")
    return 1 if disagreements else 0


if __name__ == "__main__":
    sys.exit(main())
