"""``shadowlab`` command line.

Exit statuses: ``check`` and ``pseudo`` return 0 when the claim holds and 1
when it fails; ``hunt`` returns 0 without violations, 1 with violations and 3
when the node budget is exceeded.  Usage and domain errors exit 2; a failed
internal certification or a failing proved theorem (both bugs) exits 4.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

from . import __version__
from .construct import ChainCertificate, build_chain_cross, build_chain_intersecting, size_bound
from .core import Family, LinkSpec, format_fam, from_vertices, parse_fam, shadow, vertices
from .errors import BudgetExceeded, CertificationError, ShadowlabError, TheoremViolation
from .hunt import MODES, SearchSpace, sweep
from .pseudo import is_link_pseudo_intersecting, is_view_pseudo_intersecting_over
from . import verify as V

REPORT_SCHEMA = "shadowlab.report/1"

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET, EXIT_BUG = 0, 1, 2, 3, 4

ARITY = {
    V.KATONA: (1, 1),
    V.LOCAL: (1, 1),
    V.KK_BOUND: (1, 1),
    V.UNION_ANTICHAIN: (1, 1),
    V.FRANKL_CROSS: (2, 2),
    V.LOCAL_CROSS: (2, 2),
    V.REPLAY: (1, 2),
}


class _Input:
    def __init__(self, path: str) -> None:
        if path == "-":
            data = sys.stdin.buffer.read()
        else:
            with open(path, "rb") as fh:
                data = fh.read()
        self.path = path
        self.data = data
        self.sha256 = hashlib.sha256(data).hexdigest()

    def family(self) -> Family:
        return parse_fam(self.data.decode("utf-8"))

    def json(self) -> dict:
        return {"path": self.path, "sha256": self.sha256}


def _vertex_arg(text: str | None) -> int:
    if not text:
        return 0
    return from_vertices(int(t) for t in text.replace(",", " ").split())


def _echo(args: argparse.Namespace) -> dict:
    skip = {"func", "jobs", "format"}
    return {key: val for key, val in sorted(vars(args).items()) if key not in skip}


def _report(args, inputs, results, started: float) -> dict:
    return {
        "schema": REPORT_SCHEMA,
        "tool": {"name": "shadowlab", "version": __version__},
        "command": {"name": args.command, "args": _echo(args)},
        "inputs": [i.json() for i in inputs],
        "results": results,
        "timing": {"wall_clock_s": time.perf_counter() - started},
    }


def _emit_json(report: dict) -> None:
    sys.stdout.write(json.dumps(report, sort_keys=True, indent=2) + "\n")


def _fmt(mask: int) -> str:
    return "{" + ",".join(map(str, vertices(mask))) + "}"


def _text_verdict(v: V.Verdict) -> str:
    stats = " ".join(f"{k}={v.stats[k]}" for k in sorted(v.stats))
    line = f"{v.claim}: {'HOLDS' if v.holds else 'FAILS'}"
    if v.witness:
        line += f"  witness={json.dumps(v.witness, sort_keys=True)}"
    return line + (f"  [{stats}]" if stats else "")


def _text_certificate(cert: ChainCertificate) -> str:
    lines = [f"outcome: {cert.outcome}  mode={cert.mode} n={cert.n} k={cert.k}"
             + (f" ell={cert.ell}" if cert.ell is not None else "")]
    removed = dict(cert.removed)
    lines.append(f"{'level':>5}  {'|M_i|':>5}  {'bound':>5}  {'ok':>3}  M_i")
    for i in range(cert.k, 0, -1):
        m = cert.M(i)
        bound = size_bound(cert.mode, cert.n, cert.k, cert.ell, i)
        note = ""
        if removed.get(i) is not None:
            note = f"  (removed {_fmt(removed[i])} below)"
        lines.append(f"{i:>5}  {m.bit_count():>5}  {bound:>5}  {'yes' if m.bit_count() >= bound else 'NO':>3}  "
                     f"{_fmt(m)}{note}")
    if cert.stop_level is not None:
        lines.append(f"stopped at level {cert.stop_level}: every link of G inside M_2 is pseudo-intersecting")
    counts: dict[str, int] = {}
    for e in cert.evidence:
        counts[f"{e.family}/{e.method}"] = counts.get(f"{e.family}/{e.method}", 0) + 1
    lines.append("evidence: " + ", ".join(f"{k}={counts[k]}" for k in sorted(counts)))
    return "\n".join(lines)


def _text_hunt(rep: dict) -> str:
    sp = rep["space"]
    lines = [
        f"hunt {sp['mode']} n={sp['n']} k={sp['k']} ell={sp['ell']} constraint={rep['constraint']}",
        f"nodes visited: {rep['nodes_visited']}  families examined: {rep['families_examined']}  "
        f"complete: {rep['complete']}",
        f"{'claim':<16}{'regime':<12}{'holds':>8}{'fails':>8}{'skipped':>9}",
    ]
    for claim in sorted(rep["tallies"]):
        for regime in sorted(rep["tallies"][claim]):
            t = rep["tallies"][claim][regime]
            lines.append(f"{claim:<16}{regime:<12}{t['holds']:>8}{t['fails']:>8}{t['skipped']:>9}")
    lines.append(f"violations: {len(rep['violations'])}")
    for v in rep["violations"][:20]:
        lines.append(f"  #{v['index']} {v['family']}" + (f" / {v['family_g']}" if "family_g" in v else ""))
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_shadow(args) -> int:
    started = time.perf_counter()
    inp = _Input(args.file)
    result = shadow(inp.family())
    if args.format == "json":
        _emit_json(_report(args, [inp], [{"kind": "family", "fam": format_fam(result)}], started))
    else:
        sys.stdout.write(format_fam(result))
    return EXIT_OK


def _run_check(args, inputs: list[_Input]) -> V.Verdict:
    fams = [i.family() for i in inputs]
    claim = args.claim
    if claim == V.KATONA:
        return V.check_katona(fams[0])
    if claim == V.LOCAL:
        return V.check_local(fams[0])
    if claim == V.KK_BOUND:
        return V.check_kk_bound(fams[0])
    if claim == V.UNION_ANTICHAIN:
        if args.ell is None:
            raise ShadowlabError("union-antichain needs --ell")
        return V.check_union_antichain_conjecture(fams[0], args.ell)
    if claim == V.FRANKL_CROSS:
        return V.check_frankl_cross(*fams)
    if claim == V.LOCAL_CROSS:
        return V.check_cross_local(*fams)
    if not args.cert:
        raise ShadowlabError("replay needs --cert")
    with open(args.cert, encoding="utf-8") as fh:
        data = json.load(fh)
    if data.get("kind") != "chain-certificate":
        certs = [r for r in data.get("results", []) if r.get("kind") == "chain-certificate"]
        if not certs:
            raise ShadowlabError("no chain certificate in --cert file")
        data = certs[0]
    cert = ChainCertificate.from_json(data)
    return V.replay_certificate(cert, *fams)


def cmd_check(args) -> int:
    started = time.perf_counter()
    lo, hi = ARITY[args.claim]
    if not lo <= len(args.files) <= hi:
        raise _Usage(f"claim {args.claim} takes {lo}-{hi} family files, got {len(args.files)}")
    inputs = [_Input(p) for p in args.files]
    verdict = _run_check(args, inputs)
    if args.format == "json":
        _emit_json(_report(args, inputs, [verdict.to_json()], started))
    else:
        print(_text_verdict(verdict))
    return EXIT_OK if verdict.holds else EXIT_FAIL


def cmd_pseudo(args) -> int:
    started = time.perf_counter()
    inp = _Input(args.file)
    F = inp.family()
    spec = LinkSpec(_vertex_arg(args.anchor), _vertex_arg(args.exclude))
    if args.floor is not None:
        verdict = is_view_pseudo_intersecting_over(F, spec, _vertex_arg(args.floor), prune=not args.full,
                                                   jobs=args.jobs)
    else:
        verdict = is_link_pseudo_intersecting(F, spec, prune=not args.full, jobs=args.jobs)
    if args.format == "json":
        _emit_json(_report(args, [inp], [{"kind": "pseudo-verdict", **verdict.to_json()}], started))
    else:
        w = "" if verdict.holds else f"  witness={_fmt(verdict.witness_X)}"
        print(f"pseudo-intersecting: {'HOLDS' if verdict.holds else 'FAILS'}{w}  "
              f"universe={_fmt(verdict.checked_universe)}")
    return EXIT_OK if verdict.holds else EXIT_FAIL


def cmd_chain(args) -> int:
    started = time.perf_counter()
    if args.cross != (len(args.files) == 2):
        raise _Usage("chain takes one file, or two files with --cross")
    inputs = [_Input(p) for p in args.files]
    fams = [i.family() for i in inputs]
    if args.cross:
        cert = build_chain_cross(*fams, audit=args.audit, diagnose=args.diagnose, jobs=args.jobs)
    else:
        cert = build_chain_intersecting(fams[0], audit=args.audit, diagnose=args.diagnose, jobs=args.jobs)
    results = [cert.to_json()]
    replay = None
    if args.audit:
        replay = V.replay_certificate(cert, *fams)
        results.append(replay.to_json())
    if args.format == "json":
        _emit_json(_report(args, inputs, results, started))
    else:
        print(_text_certificate(cert))
        if replay is not None:
            print(_text_verdict(replay))
    if replay is not None and not replay.holds:
        return EXIT_BUG
    return EXIT_OK


def cmd_hunt(args) -> int:
    started = time.perf_counter()
    claims = [c.strip() for c in args.claims.split(",") if c.strip()]
    space = SearchSpace(n=args.n, k=args.k, ell=args.ell, mode=args.mode, constraint=args.constraint,
                        samples=args.samples, seed=args.seed, max_family_size=args.max_size,
                        budget=args.budget, canonical=args.canonical, subsample=args.subsample)
    status = EXIT_OK
    try:
        report = sweep(space, claims, jobs=args.jobs)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        report = exc.partial
        status = EXIT_BUDGET
    rep = report.to_json()
    if status == EXIT_OK and rep["violations"]:
        status = EXIT_FAIL
    if args.format == "json":
        _emit_json(_report(args, [], [rep], started))
    else:
        print(_text_hunt(rep))
    return status


class _Usage(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--jobs", type=int, default=1, help="worker processes (output is independent of it)")

    parser = argparse.ArgumentParser(prog="shadowlab", description="Exact tools for k-uniform set families.")
    parser.add_argument("--version", action="version", version=f"shadowlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("shadow", parents=[common], help="print the shadow of a .fam family")
    p.add_argument("file")
    p.set_defaults(func=cmd_shadow)

    p = sub.add_parser("check", parents=[common], help="evaluate a theorem or conjecture on input families")
    p.add_argument("claim", choices=sorted(ARITY))
    p.add_argument("files", nargs="+")
    p.add_argument("--ell", type=int)
    p.add_argument("--cert", help="certificate (or chain report) JSON for the replay claim")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("pseudo", parents=[common], help="decide whether a link view is pseudo-intersecting")
    p.add_argument("file")
    p.add_argument("--anchor", help="anchor set, e.g. '1 2'")
    p.add_argument("--exclude", help="excluded set")
    p.add_argument("--floor", help="quantify over all supersets of this set instead")
    p.add_argument("--full", action="store_true", help="sweep all of [n] instead of the support")
    p.set_defaults(func=cmd_pseudo)

    p = sub.add_parser("chain", parents=[common], help="build a certified chain M_1 ⊆ ... ⊆ M_k")
    p.add_argument("files", nargs="+")
    p.add_argument("--cross", action="store_true", help="cross-intersecting pair F G")
    p.add_argument("--audit", action="store_true", help="sweep every inferred fact and replay the certificate")
    p.add_argument("--diagnose", action="store_true", help="record every bad set seen at each level")
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser("hunt", parents=[common], help="sweep claims across generated families")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--ell", type=int)
    p.add_argument("--mode", choices=MODES, default="exhaustive")
    p.add_argument("--constraint", choices=("intersecting", "cross-intersecting", "union-antichain"))
    p.add_argument("--claims", default="katona,local")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--budget", type=int, help="node budget (default: $SHADOWLAB_BUDGET or 10^8)")
    p.add_argument("--max-size", type=int, dest="max_size")
    p.add_argument("--canonical", action="store_true", help="skip families that are not lex-minimal up to relabeling")
    p.add_argument("--subsample", action="store_true", help="thin random families to non-maximal ones")
    p.set_defaults(func=cmd_hunt)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be positive")
    try:
        return args.func(args)
    except _Usage as exc:
        parser.error(str(exc))
    except (CertificationError, TheoremViolation) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_BUG
    except (ShadowlabError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
