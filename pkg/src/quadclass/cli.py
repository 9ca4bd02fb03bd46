"""Command-line front-end.

Subcommands: classnum, squarefree, witness, scan, check (cohn|hoque),
family (iizuka|cor5|cor7), search, group.  Output is an aligned table by
default, one JSON document with --json, or CSV with --csv.

Exit codes: 0 all requests satisfied; 1 a verified-false divisibility or a
failed asserted member (or a failed internal consistency check); 2 input
error; 3 resource cap exceeded.

Math-valued fields in JSON are always decimal strings, regardless of size,
so the schema does not depend on magnitudes.  The QUADCLASS_CACHE environment
variable overrides --cache.  A fixed --seed makes runs byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import random
import sys
from dataclasses import dataclass

from . import cache as result_cache
from . import classgroup, families, intmath, qform, witness
from .errors import InconsistencyError, InputError, ResourceCapError
from .intmath import DEFAULT_FACTOR_BUDGET
from .qform import DEFAULT_DISC_CAP

EXIT_OK = 0
EXIT_FAILED_CHECK = 1
EXIT_INPUT = 2
EXIT_CAP = 3


@dataclass
class RunConfig:
    max_disc: int = DEFAULT_DISC_CAP
    factor_budget: int = DEFAULT_FACTOR_BUDGET
    seed: int = 0
    cache_path: str | None = None
    output: str = "table"  # table | json | csv
    threads: int = 1
    verify_cache: bool = False

    def rng(self) -> random.Random:
        return random.Random(self.seed)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--json", action="store_true", help="emit one JSON document")
    parser.add_argument("--csv", action="store_true", help="emit CSV rows")
    parser.add_argument("--max-disc", type=int, default=DEFAULT_DISC_CAP,
                        help="enumeration cap on |discriminant|")
    parser.add_argument("--factor-budget", type=int, default=DEFAULT_FACTOR_BUDGET,
                        help="iteration budget for the randomized factoring stage")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for randomized subroutines (fixed seed = reproducible run)")
    parser.add_argument("--threads", type=int, default=1, help="worker pool size")
    parser.add_argument("--cache", metavar="PATH", default=None,
                        help="append-only result cache file (QUADCLASS_CACHE overrides)")
    parser.add_argument("--verify-cache", action="store_true",
                        help="recompute a sample of cache entries and compare")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadclass",
        description="Class groups of imaginary quadratic fields and class-number divisibility certificates",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classnum", help="class number of Q(sqrt(d)) for d < 0")
    p.add_argument("d", type=int, nargs="?", default=None, help="negative integer (use -- before it)")
    p.add_argument("--d", dest="d_flag", type=int, default=None, help="alternative to the positional d")
    _add_common(p)

    p = sub.add_parser("squarefree", help="square-free decomposition n = d * t^2")
    p.add_argument("n", type=int, nargs="?", default=None)
    p.add_argument("--n", dest="n_flag", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("witness", help="order-n witness certificate for (x, y, n)")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--y", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    _add_common(p)

    p = sub.add_parser("scan", help="sweep y over a range for fixed x and n")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--from", dest="y_from", type=int, required=True)
    p.add_argument("--to", dest="y_to", type=int, required=True)
    p.add_argument("--variant", choices=("standard", "four"), default="standard",
                   help="standard: x^2 - y^n with witness; four: x^2 - 4y^n, divisibility only")
    _add_common(p)

    p = sub.add_parser("check", help="unconditional divisibility checks")
    csub = p.add_subparsers(dest="check_kind", required=True)
    pc = csub.add_parser("cohn", help="n | h(1 - V^n) outside (V, n) = (3, 5)")
    pc.add_argument("--V", type=int, required=True)
    pc.add_argument("--n", type=int, required=True)
    _add_common(pc)
    ph = csub.add_parser("hoque", help="3 | h(sf(-(3^m p^(2n) + r)))")
    ph.add_argument("--m", type=int, required=True)
    ph.add_argument("--p", type=int, required=True)
    ph.add_argument("--n", type=int, required=True)
    ph.add_argument("--r", type=int, required=True, choices=(-2, 4))
    _add_common(ph)

    p = sub.add_parser("family", help="explicit families of fields")
    fsub = p.add_subparsers(dest="family_kind", required=True)
    pi = fsub.add_parser("iizuka", help="m+1 successive fields at square offsets")
    pi.add_argument("--n", type=int, required=True)
    pi.add_argument("--m", type=int, required=True)
    pi.add_argument("--l", type=int, required=True)
    _add_common(pi)
    p5 = fsub.add_parser("cor5", help="pair d, d + 2k - 1")
    p5.add_argument("--n", type=int, required=True)
    p5.add_argument("--k", type=int, required=True)
    p5.add_argument("--l", type=int, required=True)
    _add_common(p5)
    p7 = fsub.add_parser("cor7", help="triple d, d+1, d+3 for divisibility by 3")
    p7.add_argument("--p", type=int, required=True)
    p7.add_argument("--k", type=int, required=True)
    p7.add_argument("--t", type=int, required=True)
    _add_common(p7)

    p = sub.add_parser("search", help="exhaustive search for offset patterns")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--offsets", type=str, required=True, help="comma-separated, e.g. 0,1,4")
    p.add_argument("--from", dest="d_from", type=int, required=True)
    p.add_argument("--to", dest="d_to", type=int, required=True)
    p.add_argument("--max-hits", type=int, default=1)
    p.add_argument("--largest-first", action="store_true",
                   help="scan from the most negative end instead of the smallest |d|")
    _add_common(p)

    p = sub.add_parser("group", help="class group structure for one discriminant")
    p.add_argument("disc", type=int, nargs="?", default=None)
    p.add_argument("--disc", dest="disc_flag", type=int, default=None)
    _add_common(p)

    return parser


def _config_from(args: argparse.Namespace) -> RunConfig:
    if args.json and args.csv:
        raise InputError("--json and --csv are mutually exclusive")
    output = "json" if args.json else "csv" if args.csv else "table"
    cache_path = os.environ.get("QUADCLASS_CACHE") or args.cache
    if args.max_disc < 1 or args.factor_budget < 1 or args.threads < 1:
        raise InputError("caps, budget and threads must be positive")
    return RunConfig(
        max_disc=args.max_disc,
        factor_budget=args.factor_budget,
        seed=args.seed,
        cache_path=cache_path,
        output=output,
        threads=args.threads,
        verify_cache=args.verify_cache,
    )


# -- rendering ----------------------------------------------------------------


def _emit_json(doc) -> None:
    sys.stdout.write(json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n")


def _emit_table(rows: list[dict]) -> None:
    if not rows:
        print("(no rows)")
        return
    cols = list(rows[0])
    widths = {c: max(len(c), *(len(str(r.get(c, ""))) for r in rows)) for c in cols}
    print("  ".join(c.ljust(widths[c]) for c in cols))
    for r in rows:
        print("  ".join(str(r.get(c, "")).ljust(widths[c]) for c in cols))


def _emit_csv(rows: list[dict]) -> None:
    if not rows:
        return
    writer = csv.DictWriter(sys.stdout, fieldnames=list(rows[0]))
    writer.writeheader()
    writer.writerows(rows)


def _emit(config: RunConfig, doc, rows: list[dict]) -> None:
    if config.output == "json":
        _emit_json(doc)
    elif config.output == "csv":
        _emit_csv(rows)
    else:
        _emit_table(rows)


def _witness_doc(rep: witness.WitnessReport) -> dict:
    return {
        "instance": {"x": str(rep.instance.x), "y": str(rep.instance.y), "n": str(rep.instance.n)},
        "d": str(rep.d),
        "t": str(rep.t),
        "delta": str(rep.disc),
        "h": str(rep.h),
        "alpha_form": str(rep.alpha_form),
        "alpha_order": str(rep.alpha_order),
        "cofactor_s": str(rep.cofactor_s),
        "n_divides_h": rep.n_divides_h,
        "alpha_n_principal": rep.alpha_n_principal,
    }


def _witness_row(rep: witness.WitnessReport) -> dict:
    return {
        "x": rep.instance.x,
        "y": rep.instance.y,
        "n": rep.instance.n,
        "d": rep.d,
        "t": rep.t,
        "delta": rep.disc,
        "h": rep.h,
        "alpha_form": str(rep.alpha_form),
        "order": rep.alpha_order,
        "s": rep.cofactor_s,
        "n_divides_h": rep.n_divides_h,
    }


def _family_doc(rep: families.FamilyReport) -> dict:
    return {
        "family_kind": rep.family_kind,
        "parameters": {k: str(v) for k, v in sorted(rep.parameters.items())},
        "base_d": str(rep.base_d),
        "members": [
            {
                "offset": m.offset,
                "value": str(m.value),
                "d_sf": str(m.d_sf),
                "delta": str(m.disc),
                "h": str(m.h),
                "divisible": m.divisible,
                "asserted": m.asserted,
                "note": m.note,
            }
            for m in rep.members
        ],
        "all_asserted_pass": rep.all_asserted_pass,
    }


def _family_rows(rep: families.FamilyReport) -> list[dict]:
    return [
        {
            "offset": m.offset,
            "value": m.value,
            "d_sf": m.d_sf,
            "delta": m.disc,
            "h": m.h,
            "divisible": m.divisible,
            "asserted": m.asserted,
            "note": m.note,
        }
        for m in rep.members
    ]


# -- commands -----------------------------------------------------------------


def _required_value(positional, flagged, what: str) -> int:
    if positional is not None and flagged is not None:
        raise InputError(f"give {what} either positionally or with the flag, not both")
    value = positional if positional is not None else flagged
    if value is None:
        raise InputError(f"missing {what}")
    return value


def cmd_classnum(args, config: RunConfig) -> int:
    d = _required_value(args.d, args.d_flag, "d")
    res = classgroup.class_number_of_field(
        d, config.max_disc, config.factor_budget, config.rng()
    )
    doc = {"d": str(d), "d_sf": str(res.d_sf), "delta": str(res.disc), "h": str(res.h)}
    rows = [{"d": d, "d_sf": res.d_sf, "delta": res.disc, "h": res.h}]
    _emit(config, doc, rows)
    return EXIT_OK


def cmd_squarefree(args, config: RunConfig) -> int:
    n = _required_value(args.n, args.n_flag, "n")
    if n == 0:
        raise InputError("n must be nonzero")
    dec = intmath.squarefree_part(n, config.factor_budget, config.rng())
    doc = {"n": str(n), "d": str(dec.d), "t": str(dec.t)}
    rows = [{"n": n, "d": dec.d, "t": dec.t}]
    _emit(config, doc, rows)
    return EXIT_OK


def cmd_witness(args, config: RunConfig) -> int:
    inst = witness.Instance(args.x, args.y, args.n)
    rep = witness.verify_instance(inst, config.max_disc, config.factor_budget, config.rng())
    _emit(config, _witness_doc(rep), [_witness_row(rep)])
    return EXIT_OK if rep.n_divides_h else EXIT_FAILED_CHECK


def cmd_scan(args, config: RunConfig) -> int:
    records = witness.scan(
        args.x,
        args.n,
        args.y_from,
        args.y_to,
        variant=args.variant,
        max_disc=config.max_disc,
        budget=config.factor_budget,
        rng=config.rng(),
        threads=config.threads,
    )
    rec_docs = []
    rows = []
    for r in records:
        base = {"y": r.y, "status": r.status}
        doc = {"y": str(r.y), "status": r.status}
        if r.reason:
            doc["reason"] = r.reason
        if r.witness is not None:
            doc["witness"] = _witness_doc(r.witness)
            rows.append({**base, **{k: v for k, v in _witness_row(r.witness).items() if k not in ("x", "n", "y")}})
        elif r.four is not None:
            doc["four"] = {
                "d": str(r.four.d),
                "t": str(r.four.t),
                "delta": str(r.four.disc),
                "h": str(r.four.h),
                "divisible": r.four.divisible,
            }
            rows.append(
                {
                    **base,
                    "d": r.four.d,
                    "t": r.four.t,
                    "delta": r.four.disc,
                    "h": r.four.h,
                    "divisible": r.four.divisible,
                }
            )
        else:
            rows.append({**base, "reason": r.reason or ""})
        rec_docs.append(doc)
    # pad table rows to a common column set
    all_cols: list[str] = []
    for r in rows:
        for c in r:
            if c not in all_cols:
                all_cols.append(c)
    rows = [{c: r.get(c, "") for c in all_cols} for r in rows]
    doc = {
        "command": "scan",
        "variant": args.variant,
        "x": str(args.x),
        "n": str(args.n),
        "records": rec_docs,
    }
    _emit(config, doc, rows)
    return EXIT_OK


def cmd_check(args, config: RunConfig) -> int:
    if args.check_kind == "cohn":
        res = families.cohn_check(
            args.V, args.n, config.max_disc, config.factor_budget, config.rng()
        )
        doc = {
            "check": "cohn",
            "V": str(args.V),
            "n": str(args.n),
            "h": str(res.h),
            "divisible": res.divisible,
            "is_exception": res.is_exception,
        }
        rows = [
            {
                "V": args.V,
                "n": args.n,
                "h": res.h,
                "divisible": res.divisible,
                "is_exception": res.is_exception,
            }
        ]
        _emit(config, doc, rows)
        return EXIT_OK if res.divisible or res.is_exception else EXIT_FAILED_CHECK
    res = families.hoque_check(
        args.m, args.p, args.n, args.r, config.max_disc, config.factor_budget, config.rng()
    )
    doc = {
        "check": "hoque",
        "m": str(args.m),
        "p": str(args.p),
        "n": str(args.n),
        "r": str(args.r),
        "d_sf": str(res.d_sf),
        "h": str(res.h),
        "divisible": res.divisible,
        "note": res.note,
    }
    rows = [
        {
            "m": args.m,
            "p": args.p,
            "n": args.n,
            "r": args.r,
            "d_sf": res.d_sf,
            "h": res.h,
            "divisible": res.divisible,
            "note": res.note,
        }
    ]
    _emit(config, doc, rows)
    return EXIT_OK if res.divisible else EXIT_FAILED_CHECK


def cmd_family(args, config: RunConfig) -> int:
    kw = dict(
        max_disc=config.max_disc,
        budget=config.factor_budget,
        rng=config.rng(),
        threads=config.threads,
    )
    if args.family_kind == "iizuka":
        rep = families.iizuka_family(args.n, args.m, args.l, **kw)
    elif args.family_kind == "cor5":
        rep = families.cor5_family(args.n, args.k, args.l, **kw)
    else:
        rep = families.cor7_family(args.p, args.k, args.t, **kw)
    _emit(config, _family_doc(rep), _family_rows(rep))
    return EXIT_OK if rep.all_asserted_pass else EXIT_FAILED_CHECK


def cmd_search(args, config: RunConfig) -> int:
    try:
        offsets = [int(tok) for tok in args.offsets.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise InputError(f"bad --offsets value {args.offsets!r}") from exc
    hits = families.search_successive(
        args.n,
        offsets,
        args.d_from,
        args.d_to,
        max_hits=args.max_hits,
        smallest_first=not args.largest_first,
        max_disc=config.max_disc,
        budget=config.factor_budget,
        rng=config.rng(),
        threads=config.threads,
    )
    doc = {"command": "search", "n": str(args.n), "offsets": offsets,
           "hits": [_family_doc(h) for h in hits]}
    rows = []
    for hit in hits:
        for row in _family_rows(hit):
            rows.append({"d": hit.base_d, **row})
    _emit(config, doc, rows)
    return EXIT_OK


def cmd_group(args, config: RunConfig) -> int:
    disc = _required_value(args.disc, args.disc_flag, "disc")
    info = classgroup.group_structure(
        disc, config.max_disc, budget=config.factor_budget, rng=config.rng()
    )
    doc = {
        "delta": str(info.discriminant),
        "h": str(info.h),
        "elementary_divisors": [str(d) for d in info.elementary_divisors],
        "generators": [str(g) for g in info.generators],
    }
    rows = [
        {
            "delta": info.discriminant,
            "h": info.h,
            "divisors": " ".join(str(d) for d in info.elementary_divisors) or "-",
            "generators": " ".join(str(g) for g in info.generators) or "-",
        }
    ]
    _emit(config, doc, rows)
    return EXIT_OK


def _run_verify_cache(cache: result_cache.ResultCache, config: RunConfig) -> int:
    """Recompute a sample of cache entries from scratch and compare."""
    mismatches = []
    for key in cache.sample_keys(16, config.rng()):
        kind, _, arg = key.partition(":")
        if kind == "factor":
            n = int(arg)
            fresh = intmath.factor(n, config.factor_budget, config.rng(), use_cache=False)
            stored = cache.get_factor(n)
            if stored != (fresh.sign, fresh.factors):
                mismatches.append(key)
        elif kind == "h":
            disc = int(arg)
            fresh_h = qform.count_reduced(disc, config.max_disc)
            if cache.get_h(disc) != fresh_h:
                mismatches.append(key)
    if mismatches:
        print(f"cache verification FAILED for: {', '.join(mismatches)}", file=sys.stderr)
        return EXIT_FAILED_CHECK
    print(f"cache verification ok ({len(cache)} entries, sample checked)", file=sys.stderr)
    return EXIT_OK


_COMMANDS = {
    "classnum": cmd_classnum,
    "squarefree": cmd_squarefree,
    "witness": cmd_witness,
    "scan": cmd_scan,
    "check": cmd_check,
    "family": cmd_family,
    "search": cmd_search,
    "group": cmd_group,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cache = None
    try:
        config = _config_from(args)
        if config.cache_path:
            cache = result_cache.ResultCache(config.cache_path)
            result_cache.activate(cache)
        if config.verify_cache:
            if cache is None:
                raise InputError("--verify-cache needs --cache or QUADCLASS_CACHE")
            code = _run_verify_cache(cache, config)
            if code != EXIT_OK:
                return code
        return _COMMANDS[args.command](args, config)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except InconsistencyError as exc:
        print(f"consistency failure: {exc}", file=sys.stderr)
        return EXIT_FAILED_CHECK
    finally:
        if cache is not None:
            result_cache.activate(None)
            cache.close()


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
