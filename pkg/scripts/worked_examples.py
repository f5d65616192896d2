#!/usr/bin/env python3
"""Walk the worked four-part families through the full pipeline.

For each family: decider verdict, census, a cover-set search run, and a
small independent oracle sweep.  Mostly useful as a quick smoke check
and as executable documentation of the API.
"""

import argparse
import time

from amalgam.core import Language
from amalgam.checker import classify, omission_pair_census
from amalgam.formats import parse_family
from amalgam.gcssa import gcssa_run, is_good
from amalgam.omission import enumerate_cover_sets
from amalgam.oracle import bruteforce_check

F1 = """
[012; a a a]
[012; b a a]
[013; c a a]
[023; a a a]
[123; a a b]
[123; a a c]
"""

F2 = """
[012; a a a]
[012; b a a]
[012; a b a]
[012; a a b]
[013; a a a]
[013; c a a]
[013; a b a]
[013; a a b]
[023; a a a]
[023; c a a]
[023; a c a]
[023; a a b]
[123; a a a]
[123; c a a]
[123; a c a]
[123; a a c]
"""

def _f3_text() -> str:
    """Thirty-two triangles: eight per part-triple, one binary alphabet
    per colour slot."""
    import itertools

    slots = {
        "012": ("ab", "ac", "ac"),
        "013": ("ac", "ac", "ac"),
        "023": ("ac", "ac", "ab"),
        "123": ("ac", "ac", "ac"),
    }
    rows = []
    for parts, alphabets in slots.items():
        for cols in itertools.product(*alphabets):
            rows.append(f"[{parts}; {' '.join(cols)}]")
    return "\n".join(rows)


def report(name: str, text: str, lang: Language, max_base: int) -> None:
    fam = parse_family(text, lang)
    print(f"== {name} ({len(fam)} members)")
    v = classify(fam)
    print(f"   decider: {v.status}")
    census = omission_pair_census(fam)
    print(f"   omission-pair census: {len(census)}")
    for e in census[:4]:
        print(f"     {e.code.describe(lang)}  <->  {e.partner_code.describe(lang)}")
    if len(census) > 4:
        print(f"     ... {len(census) - 4} more")
    for pair in lang.pairs:
        cover = next(enumerate_cover_sets(fam, pair), None)
        if cover is None:
            continue
        out = gcssa_run(cover, fam)
        key = "-" if out.key is None else lang.colour_label(*pair, out.key)
        print(
            f"   search on {pair}: {out.kind} after {len(out.trace)} step(s), "
            f"key {key}, good={is_good(out.cover, fam) is not None}"
        )
    t0 = time.time()
    o = bruteforce_check(fam, max_base=max_base)
    print(
        f"   oracle (base <= {max_base}): {o.status} "
        f"[{o.bases_examined} bases, {o.diagrams_examined} diagrams, {time.time()-t0:.1f}s]"
    )
    print()


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-base", type=int, default=4, help="oracle base bound")
    args = ap.parse_args()
    lang = Language.uniform(4)
    report("six-triangle family", F1, lang, args.max_base)
    report("sixteen-triangle maximal family", F2, lang, args.max_base)
    report("thirty-two-triangle sign-cube family", _f3_text(), lang, args.max_base)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
