"""``knotmove`` command line.

Exit codes: 0 success or verified, 1 a verified negative answer (claim
false, no witness, not obstructed), 2 bad usage or unparseable input.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .arf import arf
from .canon import canonical_relabel, canonicalize
from .catalog import builtin, catalog_keys, describe
from .diagram import Diagram, LkMatrix, is_proper, linking_matrix, parse_gauss, parse_pd, serialize_pd
from .errors import (ArfObstruction, ClaimMismatch, ImproperInput, InvariantViolation, KnotMoveError,
                     ParseError, StepFailure, UnknownCatalogKey)
from .moves import (MoveKind, apply_move, expand_onetwo_as_sharp, expand_pass_as_onetwo, find_sites,
                    simplify)

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---- inputs ---------------------------------------------------------------

def _load(args) -> tuple[Diagram, str]:
    if args.pd is not None:
        d, src = parse_pd(args.pd), "pd"
    elif args.gauss is not None:
        d, src = parse_gauss(args.gauss), "gauss"
    elif args.catalog is not None:
        d, src = builtin(args.catalog), args.catalog
    elif getattr(args, "file", None):
        with open(args.file, encoding="utf-8") as fh:
            d, src = parse_pd(fh.read()), args.file
    else:
        raise UsageError("give a diagram with --pd, --gauss, --catalog or --file")
    return canonical_relabel(d), src


def _kind(text, allowed=(MoveKind.PASS, MoveKind.SHARP, MoveKind.ONETWO)) -> MoveKind:
    try:
        k = MoveKind.parse(text)
    except ValueError:
        raise UsageError(f"unknown move {text!r}") from None
    if k not in allowed:
        raise UsageError(f"move must be one of {', '.join(a.value for a in allowed)}")
    return k


def _site(d: Diagram, kind: MoveKind | None, index: int):
    sites = find_sites(d, kind)
    if not sites:
        raise UsageError(f"the diagram has no {kind.value if kind else '4-crossing'} sites")
    if not 0 <= index < len(sites):
        raise UsageError(f"site index {index} out of range (0..{len(sites) - 1})")
    return sites[index]


def _site_json(i, s):
    return {"index": i, "kind": s.kind.value, "crossings": list(s.crossings), "face": s.face,
            "p": list(s.p), "q": list(s.q), "p_class": s.p_class, "q_class": s.q_class,
            "components": s.strand_components()}


def _unlink_key(d: Diagram) -> str:
    return "unknot" if d.n_components == 1 else f"unlink_{d.n_components}"


# ---- commands -------------------------------------------------------------

def cmd_info(args):
    d, src = _load(args)
    out = {
        "source": src,
        "pd": serialize_pd(d),
        "canonical": canonicalize(d),
        "components": [{"label": c.label, "edges": list(c.edges)} for c in d.components],
        "crossings": d.n_crossings,
        "writhe": d.writhe(),
        "lk": linking_matrix(d).to_json(),
        "proper": is_proper(d),
        "arf": arf(d).value,
        # clockwise boundary; agree is true where an edge runs clockwise
        "faces": [{"index": f.index, "edges": list(f.edges), "agree": list(f.agree)} for f in d.faces],
    }
    return out, EXIT_OK


def cmd_sites(args):
    d, _ = _load(args)
    kind = _kind(args.move) if args.move else None
    sites = find_sites(d, kind)
    return {"pd": serialize_pd(d), "sites": [_site_json(i, s) for i, s in enumerate(sites)]}, EXIT_OK


def cmd_apply(args):
    d, _ = _load(args)
    site = _site(d, _kind(args.move), args.site)
    out = apply_move(d, site)
    res = {"site": _site_json(args.site, site), "result": serialize_pd(canonical_relabel(out)),
           "canonical": canonicalize(out), "arf_before": arf(d).value, "arf_after": arf(out).value}
    if args.simplify:
        res["simplified"] = canonicalize(simplify(out, args.simplify_budget))
    return res, EXIT_OK


def _script_out(args, ms, start_ref, expect):
    from .certlang import script_from_move_script

    text = script_from_move_script(ms, start_ref, expect)
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def cmd_expand(args):
    d, src = _load(args)
    kind = _kind(args.move, (MoveKind.PASS, MoveKind.ONETWO))
    site = _site(d, kind, args.site)
    fn = expand_pass_as_onetwo if kind == MoveKind.PASS else expand_onetwo_as_sharp
    ms = fn(site)
    direct = canonical_relabel(apply_move(d, site))
    ref = args.catalog if args.catalog else None
    return {
        "move": kind.value,
        "into": "onetwo" if kind == MoveKind.PASS else "sharp",
        "steps": [str(s) for s in ms.steps],
        "kind_counts": ms.kind_counts(),
        "matches_direct": canonicalize(ms.replay()) == canonicalize(direct),
        "script": _script_out(args, ms, ref, direct),
    }, EXIT_OK


def cmd_fuse(args):
    from .surgery import BandSpec, fusion, onetwo_via_fusions

    d, _ = _load(args)
    if args.band:
        try:
            nums = [int(x) for x in args.band.split(",")]
        except ValueError:
            raise UsageError("--band takes FACE,LEFT,RIGHT[,TWISTS]") from None
        if len(nums) not in (3, 4):
            raise UsageError("--band takes FACE,LEFT,RIGHT[,TWISTS]")
        out = fusion(d, BandSpec(*nums))
        return {"band": nums, "result": serialize_pd(canonical_relabel(out)),
                "canonical": canonicalize(out), "proper": is_proper(out),
                "arf_before": arf(d).value, "arf_after": arf(out).value}, EXIT_OK
    site = _site(d, MoveKind.ONETWO, args.site)
    ms = onetwo_via_fusions(d, site)
    direct = canonical_relabel(apply_move(d, site))
    same = canonicalize(simplify(ms.replay())) == canonicalize(simplify(direct))
    ref = args.catalog if args.catalog else None
    return {"site": _site_json(args.site, site), "steps": [str(s) for s in ms.steps],
            "kind_counts": ms.kind_counts(), "matches_direct": same,
            "script": _script_out(args, ms, ref, direct)}, EXIT_OK


def cmd_search(args):
    from .reason import search_move_number

    d, _ = _load(args)
    kind = _kind(args.move)
    try:
        res = search_move_number(d, kind, depth=args.depth, budget=args.budget, free=args.free,
                                 simplify_budget=args.simplify_budget)
    except ArfObstruction as ex:
        return {"kind": kind.value, "bound": None, "nodes": 0, "note": str(ex), "steps": None,
                "script": None}, EXIT_NEGATIVE
    out = res.to_json()
    out["script"] = None
    if res.found:
        ref = args.catalog if args.catalog else None
        out["script"] = _script_out(args, res.script, ref, _unlink_key(d))
    return out, EXIT_OK if res.found else EXIT_NEGATIVE


def _target_matrix(args, cur: LkMatrix) -> LkMatrix:
    t = args.target
    if t in ("unlink", "unknot"):
        return LkMatrix.zero(cur.labels)
    d = parse_pd(t) if "[" in t or t == "O" else builtin(t)
    m = linking_matrix(d)
    if set(m.labels) != set(cur.labels):
        raise UsageError(f"target labels {sorted(m.labels)} differ from {sorted(cur.labels)}")
    return m


def cmd_obstruct(args):
    from .reason import prove_no_single_move

    d, _ = _load(args)
    kind = _kind(args.move)
    cur = linking_matrix(d)
    rep = prove_no_single_move(cur, _target_matrix(args, cur), kind)
    out = rep.to_json()
    if not args.cases:
        out["cases"] = [c for c in out["cases"] if c["match"]]
    out["table"] = rep.table()
    return out, EXIT_OK if rep.obstructed else EXIT_NEGATIVE


def cmd_verify(args):
    from .certlang import Claim, check_certificate, load_script, replay

    doc = load_script(args.script)
    claim = Claim.parse(args.claim) if args.claim else None
    out = {"script": args.script, "claim": str(claim) if claim else None, "verified": False,
           "failure": None, "report": None}
    try:
        rep = replay(doc, args.simplify_budget)
        out["report"] = rep.to_json()
        if rep.endpoint_ok is False:
            out["failure"] = f"endpoint: {rep.diff}"
        elif claim is not None:
            check_certificate(doc, claim, report=rep, simplify_budget=args.simplify_budget)
            out["verified"] = True
        else:
            out["verified"] = True
    except ClaimMismatch as ex:
        out["failure"] = str(ex)
    except (StepFailure, InvariantViolation) as ex:
        out["failure"] = f"{type(ex).__name__}: {ex}"
    return out, EXIT_OK if out["verified"] else EXIT_NEGATIVE


def cmd_catalog(args):
    if args.key:
        d = builtin(args.key)
        return {"key": args.key, "description": describe(args.key), "pd": serialize_pd(d),
                "crossings": d.n_crossings, "components": d.n_components}, EXIT_OK
    return {"entries": [{"key": k, "description": describe(k)} for k in catalog_keys()]}, EXIT_OK


def cmd_selftest(args):
    from .selftest import run_all

    nums = None
    if args.only:
        try:
            nums = {int(x) for x in args.only.split(",")}
        except ValueError:
            raise UsageError("--only takes comma-separated check numbers") from None
    results = run_all(seed=args.seed, numbers=nums)
    out = {"seed": args.seed, "checks": [r.to_json() for r in results],
           "passed": all(r.passed for r in results)}
    if not args.json:
        for r in results:
            print(r.line())
        print("all passed" if out["passed"] else "FAILURES")
        return None, EXIT_OK if out["passed"] else EXIT_NEGATIVE
    return out, EXIT_OK if out["passed"] else EXIT_NEGATIVE


# ---- text rendering ------------------------------------------------------------

def _render(value, indent=0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, str) and "\n" in v:
                lines.append(f"{pad}{k}:")
                lines.extend(pad + "  " + ln for ln in v.rstrip("\n").splitlines())
            elif isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_render(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, dict):
                sub = _render(item, indent + 1)
                lines.append(pad + "- " + sub[0].lstrip())
                lines.extend(sub[1:])
            else:
                lines.append(f"{pad}- {_scalar(item)}")
    else:
        lines.append(pad + _scalar(value))
    return lines


def _flat(v) -> bool:
    if isinstance(v, dict):
        return all(not isinstance(x, (dict, list)) for x in v.values()) and len(v) <= 8
    return all(not isinstance(x, (dict, list)) for x in v)


def _scalar(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, dict):
        return ", ".join(f"{k}={_scalar(x)}" for k, x in v.items()) or "{}"
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    return str(v)


# ---- argument parsing ------------------------------------------------------------

def _source_args(p, file=True):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--pd", help="PD code, e.g. 'X+[1,4,2,5] X+[3,6,4,1] X+[5,2,6,3]' or 'O'")
    g.add_argument("--gauss", help="signed Gauss code, e.g. 'O1+ U2+ O3+ U1+ O2+ U3+'")
    g.add_argument("--catalog", metavar="KEY", help="built-in diagram (see 'knotmove catalog')")
    if file:
        g.add_argument("--file", help="file holding PD text")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")
    common.add_argument("--seed", type=int, default=0, help="seed for randomised suites (default 0)")
    common.add_argument("--simplify-budget", type=int, default=1000,
                        help="Reidemeister steps allowed when simplifying (default 1000)")

    ap = argparse.ArgumentParser(prog="knotmove", description="Pass, #- and 1-2-moves on link diagrams.")
    ap.add_argument("--version", action="version", version=f"knotmove {__version__}")
    sub = ap.add_subparsers(dest="command", metavar="COMMAND", required=True)

    p = sub.add_parser("info", parents=[common], help="components, writhe, linking numbers, arf")
    _source_args(p)
    p.set_defaults(fn=cmd_info)

    p = sub.add_parser("sites", parents=[common], help="list 4-crossing move sites")
    _source_args(p)
    p.add_argument("--move", help="pass, sharp or onetwo (default: all)")
    p.set_defaults(fn=cmd_sites)

    p = sub.add_parser("apply", parents=[common], help="apply a move at a site")
    _source_args(p)
    p.add_argument("--move", required=True)
    p.add_argument("--site", type=int, default=0, help="index into the site list (default 0)")
    p.add_argument("--simplify", action="store_true", help="also report the simplified result")
    p.set_defaults(fn=cmd_apply)

    p = sub.add_parser("expand", parents=[common],
                       help="write a pass move as 1-2 moves, or a 1-2 move as #-moves")
    _source_args(p)
    p.add_argument("--move", required=True, help="pass or onetwo")
    p.add_argument("--site", type=int, default=0)
    p.add_argument("--out", help="write the script to this .mvs file")
    p.set_defaults(fn=cmd_expand)

    p = sub.add_parser("fuse", parents=[common],
                       help="a single fusion band, or a 1-2 move as four fusions with L0")
    _source_args(p)
    p.add_argument("--band", help="FACE,LEFT,RIGHT[,TWISTS]")
    p.add_argument("--site", type=int, default=0, help="1-2 site for the four-fusion script")
    p.add_argument("--out", help="write the script to this .mvs file")
    p.set_defaults(fn=cmd_fuse)

    p = sub.add_parser("search", parents=[common], help="bound the move number to an unlink")
    _source_args(p)
    p.add_argument("--move", required=True)
    p.add_argument("--depth", type=int, default=3, help="most moves of the named kind (default 3)")
    p.add_argument("--budget", type=int, default=100_000, help="node budget (default 100000)")
    p.add_argument("--free", type=int, default=2, help="R2 additions explored per level (default 2)")
    p.add_argument("--out", help="write the witness script to this .mvs file")
    p.set_defaults(fn=cmd_search)

    p = sub.add_parser("obstruct", parents=[common],
                       help="prove no single move reaches the target linking numbers")
    _source_args(p)
    p.add_argument("--move", required=True)
    p.add_argument("--target", default="unlink", help="'unlink', a catalog key or PD text")
    p.add_argument("--cases", action="store_true", help="list every enumerated case")
    p.set_defaults(fn=cmd_obstruct)

    p = sub.add_parser("verify", parents=[common], help="replay a .mvs script and check a claim")
    p.add_argument("script")
    p.add_argument("--claim", help="kind:count:endpoint, e.g. onetwo:1:unknot")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("catalog", parents=[common], help="list built-in diagrams")
    p.add_argument("key", nargs="?")
    p.set_defaults(fn=cmd_catalog)

    p = sub.add_parser("selftest", parents=[common], help="run the acceptance checks")
    p.add_argument("--only", help="comma-separated check numbers")
    p.set_defaults(fn=cmd_selftest)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        out, code = args.fn(args)
    except UsageError as ex:
        ap.print_usage(sys.stderr)
        print(f"knotmove {args.command}: error: {ex}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, UnknownCatalogKey, ImproperInput, OSError) as ex:
        print(f"knotmove {args.command}: error: {ex}", file=sys.stderr)
        return EXIT_USAGE
    except KnotMoveError as ex:
        print(f"knotmove {args.command}: error: {type(ex).__name__}: {ex}", file=sys.stderr)
        return EXIT_USAGE
    if out is not None:
        out = {"command": args.command, **out}
        if args.json:
            print(json.dumps(out, indent=2))
        else:
            print("\n".join(_render(out)))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
