"""Command-line surface: parse inputs, run deciders, report key=value records.

Results go to standard output, one record per line as ``key=value``
pairs; anything diagnostic goes to standard error.  Exit codes are the
machine contract: 0 success/pass, 1 fail, 2 invalid input, 3 an
inconclusive oracle sweep.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional

from .checker import classify
from .core import Language, canonical_form
from .enumeration import (
    EnumerationBudget,
    enumerate_valid_families,
    family_canonical_key,
)
from .family import Family, validate_family
from .formats import (
    FormatError,
    parse_family,
    parse_graph,
    parse_language,
    parse_monic,
    serialize_family,
    serialize_graph,
    serialize_monic,
)
from .fraisse import (
    BuildConfig,
    BuildError,
    audit_age,
    build_generic,
    sample_homogeneity,
)
from .gcssa import SearchError, gcssa_run
from .omission import CoverSet
from .oracle import bruteforce_check, complete_edge, witness_search


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "none"
    s = str(v)
    if s == "" or any(ch.isspace() for ch in s):
        return f'"{s}"'
    return s


def _emit(**kv) -> None:
    print(" ".join(f"{k}={_fmt(v)}" for k, v in kv.items()))


def _diag(msg: str) -> None:
    print(msg, file=sys.stderr)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        _diag(f"cannot read {path}: {e.strerror}")
        raise SystemExit(2) from None


def _load_language(path: str) -> Language:
    try:
        return parse_language(_read(path), path=path)
    except FormatError as e:
        _diag(str(e))
        raise SystemExit(2) from None


def _load_family(path: str, lang: Language, enforce: bool = True) -> Family:
    try:
        fam = parse_family(_read(path), lang, path=path)
    except FormatError as e:
        _diag(str(e))
        raise SystemExit(2) from None
    if enforce:
        problems = validate_family(fam)
        if problems:
            for p in problems:
                _diag(f"{path}: {p}")
            raise SystemExit(2)
    return fam


def _pair(args, lang: Language) -> tuple[int, int]:
    i, j = args.pair
    if not (0 <= i < lang.part_count and 0 <= j < lang.part_count) or i == j:
        _diag(f"bad pair ({i}, {j}) for {lang.part_count} parts")
        raise SystemExit(2)
    return (i, j) if i < j else (j, i)


def _colour_index(tok: str, lang: Language, pair: tuple[int, int]) -> int:
    names = lang.colour_names(*pair)
    if tok not in names:
        _diag(f"unknown colour {tok!r} for pair {pair}; have {' '.join(names)}")
        raise SystemExit(2)
    return names.index(tok)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_validate(args) -> int:
    lang = _load_language(args.language)
    _emit(language_ok=True, parts=lang.part_count)
    if args.family is None:
        return 0
    fam = _load_family(args.family, lang, enforce=False)
    problems = validate_family(fam)
    _emit(family_ok=not problems, members=len(fam), problems=len(problems))
    for p in problems:
        _emit(problem=p)
    return 0 if not problems else 2


def _cmd_check(args) -> int:
    lang = _load_language(args.language)
    fam = _load_family(args.family, lang)
    verdict = classify(fam)
    _emit(status=verdict.status, part_count=verdict.part_count)
    if verdict.condition:
        _emit(condition=verdict.condition)
    if verdict.pair:
        _emit(pair=f"{verdict.pair[0]},{verdict.pair[1]}")
    if verdict.cover is not None:
        _emit(cover=verdict.cover.describe(lang))
    if verdict.code is not None:
        _emit(code=verdict.code.describe(lang))
    for entry in verdict.census:
        _emit(
            census_code=entry.code.describe(lang),
            partner=entry.partner_code.describe(lang),
            matched=entry.matched,
        )
    for note in verdict.findings:
        _emit(finding=note)
    return 0 if verdict.ok else 1


def _cmd_oracle(args) -> int:
    lang = _load_language(args.language)
    fam = _load_family(args.family, lang)
    verdict = bruteforce_check(fam, max_base=args.max_base, budget=args.budget)
    _emit(
        status=verdict.status,
        max_base=verdict.max_base,
        completeness_bound=verdict.completeness_bound,
        decisive_bound=verdict.decisive_bound,
        conclusive=verdict.conclusive,
        bases=verdict.bases_examined,
        diagrams=verdict.diagrams_examined,
    )
    for pair in verdict.skipped_pairs:
        _emit(skipped_pair=f"{pair[0]},{pair[1]}")
    if verdict.note:
        _emit(note=verdict.note)
    if verdict.witness is not None:
        d = verdict.witness
        _emit(
            witness_base=d.base.n,
            witness_left=d.left.part,
            witness_right=d.right.part,
        )
        for colour, member in verdict.blockers:
            _emit(blocked_colour=colour, blocker=member.describe(lang))
    if verdict.status == "pass":
        return 0
    if verdict.status == "fail":
        return 1
    return 3


def _cmd_witness(args) -> int:
    lang = _load_language(args.language)
    fam = _load_family(args.family, lang)
    pair = _pair(args, lang)
    d = witness_search(fam, pair)
    if d is None:
        _emit(witness=False, pair=f"{pair[0]},{pair[1]}")
        return 0
    completion = complete_edge(d, fam)
    _emit(
        witness=True,
        pair=f"{pair[0]},{pair[1]}",
        base=d.base.n,
        left_part=d.left.part,
        right_part=d.right.part,
        completes=completion.ok,
    )
    for colour, member in completion.blockers:
        label = "no-edge" if colour is None else lang.colour_label(*pair, colour)
        _emit(blocked_colour=label, blocker=member.describe(lang))
    return 1


def _cmd_gcssa(args) -> int:
    lang = _load_language(args.language)
    fam = _load_family(args.family, lang)
    pair = _pair(args, lang)
    assign: dict[int, object] = {}
    for item in args.cover:
        tok, eq, body = item.partition("=")
        if not eq:
            _diag(f"cover item {item!r} is not COLOUR=[...]")
            return 2
        c = _colour_index(tok.strip(), lang, pair)
        try:
            member = parse_monic(body.strip(), lang, path="<cover>")
        except FormatError as e:
            _diag(str(e))
            return 2
        if c in assign:
            _diag(f"colour {tok!r} assigned twice")
            return 2
        assign[c] = member
    cover = CoverSet(pair, tuple(assign[c] for c in sorted(assign)))
    if not cover.is_lambda(lang):
        _diag("cover must name exactly one member per colour of the pair")
        return 2
    for member in cover.members:
        if member not in fam.member_set:
            _diag(f"cover member {member.describe(lang)} is not in the family")
            return 2
    gamma0 = None
    if args.gamma0 is not None:
        gamma0 = _colour_index(args.gamma0, lang, pair)
    try:
        outcome = gcssa_run(cover, fam, gamma0=gamma0)
    except SearchError as e:
        _diag(f"search failed: {e}")
        return 1
    names = lang.colour_names(*pair)
    for step in outcome.trace:
        _emit(
            step=step.index,
            gamma=names[step.gamma],
            is_key=step.is_key,
            delta=None if step.delta is None else names[step.delta],
            replaced=None if step.replaced is None else serialize_monic(step.replaced, lang),
            replacement=None
            if step.replacement is None
            else serialize_monic(step.replacement, lang),
            note=step.note or None,
        )
    _emit(
        outcome=outcome.kind,
        key=None if outcome.key is None else names[outcome.key],
        t_initial=outcome.t_initial,
        t_final=outcome.t_final,
        cover=" ".join(serialize_monic(a, lang) for a in outcome.cover.members),
    )
    for note in outcome.findings:
        _emit(finding=note)
    return 0


def _cmd_build(args) -> int:
    lang = _load_language(args.language)
    fam = _load_family(args.family, lang)
    cfg = BuildConfig(
        n=args.n, s=args.s, seed=args.seed, audit_parts_bound=args.audit_bound
    )
    try:
        report = build_generic(fam, cfg)
    except (ValueError, BuildError) as e:
        _diag(str(e))
        return 2 if isinstance(e, ValueError) else 1
    export = serialize_graph(report.graph)
    records = [
        dict(
            n=cfg.n, s=cfg.s, seed=cfg.seed,
            parts=",".join(str(x) for x in report.per_part_sizes),
            demand_vertices=report.demand_vertices,
            filler_vertices=report.filler_vertices,
            demands_issued=report.demands_issued,
            demands_satisfied=report.demands_satisfied,
            audit_bound=report.audit.parts_bound,
            omission_ok=report.audit.omission_ok,
            realization_ok=report.audit.realization_ok,
        )
    ]
    if args.graph_out is not None:
        Path(args.graph_out).write_text(export)
        for rec in records:
            _emit(**rec)
        _emit(graph_out=args.graph_out)
    else:
        sys.stdout.write(export)
        for rec in records:
            print(" ".join(f"{k}={_fmt(v)}" for k, v in rec.items()), file=sys.stderr)
    return 0


def _cmd_audit(args) -> int:
    lang = _load_language(args.language)
    fam = _load_family(args.family, lang)
    try:
        graph = parse_graph(_read(args.graph), lang, path=args.graph)
    except FormatError as e:
        _diag(str(e))
        return 2
    audit = audit_age(graph, fam, args.parts_bound)
    _emit(
        parts_bound=audit.parts_bound,
        omission_ok=audit.omission_ok,
        realization_ok=audit.realization_ok,
        free_types=audit.free_type_count,
        missing=len(audit.missing_types),
        forbidden=len(audit.forbidden_hits),
    )
    for member, images in audit.forbidden_hits[:10]:
        _emit(forbidden=serialize_monic(member, lang),
              at=",".join(str(v) for v in images))
    for member in audit.missing_types[:10]:
        _emit(missing_type=serialize_monic(member, lang))
    return 0 if audit.ok else 1


def _homog_chunks(trials: int) -> list[int]:
    chunks = min(8, trials) or 1
    base, extra = divmod(trials, chunks)
    return [base + (1 if i < extra else 0) for i in range(chunks)]


def _cmd_sample_homogeneity(args) -> int:
    lang = _load_language(args.language)
    try:
        graph = parse_graph(_read(args.graph), lang, path=args.graph)
    except FormatError as e:
        _diag(str(e))
        return 2
    threads = max(1, int(os.environ.get("HOMOG_THREADS", "1")))
    sizes = _homog_chunks(args.trials)
    # chunk layout is fixed, so the record is identical for any thread count
    with ThreadPoolExecutor(max_workers=threads) as pool:
        reports = list(
            pool.map(
                lambda iv: sample_homogeneity(
                    graph, k=args.k, trials=iv[1], seed=args.seed + iv[0]
                ),
                enumerate(sizes),
            )
        )
    successes = sum(r.successes for r in reports)
    trials = sum(r.trials for r in reports)
    rate = None if trials == 0 else successes / trials
    _emit(
        k=args.k, trials=trials, successes=successes,
        rate="undefined" if rate is None else f"{rate:.4f}",
        seed=args.seed, chunks=len(sizes), threads=threads,
    )
    shown = 0
    for r in reports:
        for note in r.failures:
            if shown >= 5:
                break
            _emit(failure=note)
            shown += 1
    return 0


def _cmd_enumerate(args) -> int:
    lang = _load_language(args.language)
    stats: dict = {}
    count = 0
    partial = False
    try:
        for item in enumerate_valid_families(
            lang,
            triangle_only=args.triangles_only,
            maximal_only=args.maximal,
            budget=args.budget,
            stats=stats,
        ):
            count += 1
            _emit(
                family="; ".join(serialize_monic(a, lang) for a in item.family.members),
                size=len(item.family),
                maximal=item.maximal,
            )
    except EnumerationBudget as e:
        partial = True
        _diag(str(e))
    _emit(families=count, explored=stats.get("explored", 0), partial=partial)
    return 3 if partial else 0


def _cmd_canon(args) -> int:
    import hashlib

    lang = _load_language(args.language)
    if (args.family is None) == (args.graph is None):
        _diag("canon takes exactly one of --family or --graph")
        return 2
    if args.family is not None:
        fam = _load_family(args.family, lang)
        try:
            form = family_canonical_key(fam)
        except ValueError as e:
            _diag(str(e))
            return 2
        kind = "family"
    else:
        try:
            graph = parse_graph(_read(args.graph), lang, path=args.graph)
        except FormatError as e:
            _diag(str(e))
            return 2
        try:
            form = canonical_form(graph)
        except ValueError as e:
            _diag(str(e))
            return 2
        kind = "graph"
    _emit(kind=kind, canonical_sha256=hashlib.sha256(form).hexdigest(), bytes=len(form))
    return 0


# ---------------------------------------------------------------------------
# argument wiring
# ---------------------------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="amalgam",
        description="decide, search, build and audit coloured multipartite "
        "graph classes given by forbidden families",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, family=True):
        p.add_argument("--language", required=True, help="language file")
        if family:
            p.add_argument("--family", required=True, help="family file")

    p = sub.add_parser("validate", help="report language/family problems")
    p.add_argument("--language", required=True)
    p.add_argument("--family")
    p.set_defaults(fn=_cmd_validate)

    p = sub.add_parser("check", help="run the theorem deciders")
    common(p)
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("oracle", help="independent two-point diagram sweep")
    common(p)
    p.add_argument("--max-base", type=int, default=None)
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(fn=_cmd_oracle)

    p = sub.add_parser("witness", help="search one pair for a failing diagram")
    common(p)
    p.add_argument("--pair", type=int, nargs=2, required=True, metavar=("I", "J"))
    p.set_defaults(fn=_cmd_witness)

    p = sub.add_parser("gcssa", help="run the cover-set search from a given cover")
    common(p)
    p.add_argument("--pair", type=int, nargs=2, required=True, metavar=("I", "J"))
    p.add_argument(
        "--cover", action="append", required=True, metavar="COLOUR=[...]",
        help="one member per colour, e.g. a='[012; a a a]'",
    )
    p.add_argument("--gamma0", help="starting colour token")
    p.set_defaults(fn=_cmd_gcssa)

    p = sub.add_parser("build", help="grow a finite family-free approximation")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--audit-bound", type=int, default=3)
    p.add_argument("--graph-out", help="write the export here instead of stdout")
    p.set_defaults(fn=_cmd_build)

    p = sub.add_parser("audit", help="age audit of an exported graph")
    common(p)
    p.add_argument("--graph", required=True)
    p.add_argument("--parts-bound", type=int, default=3)
    p.set_defaults(fn=_cmd_audit)

    p = sub.add_parser("sample-homogeneity", help="extension saturation score")
    p.add_argument("--language", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_sample_homogeneity)

    p = sub.add_parser("enumerate", help="stream valid families up to colour-iso")
    p.add_argument("--language", required=True)
    p.add_argument("--maximal", action="store_true")
    p.add_argument("--triangles-only", action="store_true")
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(fn=_cmd_enumerate)

    p = sub.add_parser("canon", help="canonical fingerprint of a family or graph")
    p.add_argument("--language", required=True)
    p.add_argument("--family")
    p.add_argument("--graph")
    p.set_defaults(fn=_cmd_canon)

    return top


def main(argv: Optional[list[str]] = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.fn(args)
    except SystemExit as e:
        return int(e.code or 0)


if __name__ == "__main__":
    sys.exit(main())
