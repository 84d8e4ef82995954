"""Command-line front end.

Exit codes: 0 all requested properties hold (or the search outcome matched
``--expect``), 1 a property failed or the search outcome did not match,
2 usage or parse error, 3 search budget exhausted before a decision.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Any, Callable

from . import domains as dom
from . import graph as gr
from . import scf as scfm
from .errors import ConstructionError, DomainError, ParseError, PrefDomainsError
from .fixtures import GENERATORS, TABLES, fixture_file
from .formats import domain_digest, format_scf, parse_domain, parse_scf
from .search import AxiomBundle, Budget, SearchError, classify_domain, search_scf, verify_table
from .verdict import Verdict

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_TIMEOUT = 0, 1, 2, 3

DOMAIN_PROPERTIES: dict[str, Callable[[dom.Domain], Verdict]] = {
    "minimal_richness": dom.is_minimally_rich,
    "connected": dom.is_connected,
    "cdn": dom.is_cdn,
    "property_p": dom.satisfies_property_p,
    "scd": dom.satisfies_scd,
    "disagreement": dom.satisfies_disagreement,
}

DOMAIN_KINDS = {"never_top", "disconnected", "neighbour_tops", "restoration", "disagreement"}
GRAPH_KINDS = {"graph_disconnected", "low_degree", "acyclic", "no_bridge_path"}
SCF_KINDS = {"manipulation", "unanimity", "tops_only", "not_decisive", "not_dictatorial"}

_PREF_KEYS = {"pref", "source", "target", "edge", "tcc", "components", "profile", "profiles", "deviation"}
_ALT_KEYS = {"alt", "pair", "neighbour_tops", "missing", "tops", "outcome", "outcomes"}


class UsageError(Exception):
    pass


def _read_domain(path: str) -> dom.Domain:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse_domain(text)


def _render_value(d: dom.Domain, key: str, value: Any) -> Any:
    if key in _PREF_KEYS:
        if isinstance(value, list):
            return [_render_value(d, key, x) for x in value]
        return f"P{value + 1}"
    if key in _ALT_KEYS:
        if isinstance(value, list):
            return [_render_value(d, key, x) for x in value]
        return d.alts.labels[value]
    if key == "voter":
        return value + 1
    return value


def render_witness(d: dom.Domain, witness: dict | None) -> str:
    if not witness:
        return ""
    parts = []
    for key, value in witness.items():
        if key == "kind":
            continue
        shown = _render_value(d, key, value)
        if isinstance(shown, list):
            shown = json.dumps(shown).replace('"', "")
        parts.append(f"{key}={shown}")
    return f"{witness['kind']}: " + " ".join(parts)


def _verdict_entry(v: Verdict) -> dict:
    return {"status": "holds" if v.holds else "fails", "witness": v.witness}


def _emit(args: argparse.Namespace, report: dict, d: dom.Domain | None, lines: list[str] | None = None) -> None:
    if args.json:
        json.dump(report, sys.stdout, indent=2, sort_keys=False)
        sys.stdout.write("\n")
        return
    out = lines if lines is not None else []
    if lines is None:
        for name, entry in report["results"].items():
            line = f"{name}: {entry['status']}"
            if entry.get("witness") and d is not None and entry["status"] != "holds":
                line += f"  [{render_witness(d, entry['witness'])}]"
            if entry.get("reason"):
                line += f"  ({entry['reason']})"
            out.append(line)
    sys.stdout.write("".join(line + "\n" for line in out))


def _base_report(argv: list[str], inputs: dict) -> dict:
    return {"command": argv, "inputs": inputs, "results": {}, "timing": {}}


# --- check --------------------------------------------------------------------


def cmd_check(args: argparse.Namespace, argv: list[str]) -> int:
    started = time.monotonic()
    d = _read_domain(args.domain)
    wanted = [name for name in [*DOMAIN_PROPERTIES, "lemma1"] if getattr(args, name)]
    if not wanted:
        wanted = [*DOMAIN_PROPERTIES, "lemma1"]
    report = _base_report(argv, {"domain": {"path": args.domain, "digest": domain_digest(d)}})
    results = report["results"]
    failed = False
    for name in wanted:
        if name == "lemma1":
            rep = gr.lemma1_check(d)
            for sub, v in rep.as_dict().items():
                results[f"lemma1.{sub}"] = _verdict_entry(v)
                failed |= not v.holds
            continue
        try:
            v = DOMAIN_PROPERTIES[name](d)
        except DomainError as exc:
            results[name] = {"status": "skipped", "witness": None, "reason": str(exc)}
            continue
        results[name] = _verdict_entry(v)
        failed |= not v.holds
    report["timing"]["seconds"] = round(time.monotonic() - started, 4)
    _emit(args, report, d)
    return EXIT_FAIL if failed else EXIT_OK


# --- graph ----------------------------------------------------------------------


def cmd_graph(args: argparse.Namespace, argv: list[str]) -> int:
    d = _read_domain(args.domain)
    sys.stdout.write(gr.induced_graph(d).to_text())
    return EXIT_OK


# --- fixtures -------------------------------------------------------------------


def cmd_fixtures(args: argparse.Namespace, argv: list[str]) -> int:
    if args.list or not args.name:
        for name, title in TABLES.items():
            print(f"{name}\t{title}")
        for name, title in GENERATORS.items():
            print(f"{name}\t{title} (generator: --m M or --axis LABELS)")
        return EXIT_OK
    if args.name not in TABLES and args.name not in GENERATORS:
        raise UsageError(f"unknown fixture {args.name!r}; available: {', '.join([*TABLES, *GENERATORS])}")
    axis = args.axis.split() if args.axis else None
    sys.stdout.write(fixture_file(args.name, m=args.m, axis=axis))
    return EXIT_OK


# --- scf subcommands -------------------------------------------------------------


def _load_scf(args: argparse.Namespace) -> tuple[dom.Domain, scfm.SCFTable]:
    d = _read_domain(args.domain)
    try:
        text = Path(args.scf).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {args.scf}: {exc.strerror}") from None
    return d, parse_scf(text, d)


SCF_AXIOMS = ("unanimity", "local_sp", "sp", "tops_only", "dictatorship")


def cmd_scf_check(args: argparse.Namespace, argv: list[str]) -> int:
    started = time.monotonic()
    d, f = _load_scf(args)
    wanted = [a for a in SCF_AXIOMS if getattr(args, a)] or list(SCF_AXIOMS)
    report = _base_report(argv, {
        "domain": {"path": args.domain, "digest": domain_digest(d)},
        "scf": {"path": args.scf, "n": f.n},
    })
    checks = {
        "unanimity": scfm.check_unanimity,
        "local_sp": scfm.check_local_sp,
        "sp": scfm.check_sp,
        "tops_only": scfm.check_tops_only,
        "dictatorship": scfm.dictatorship_verdict,
    }
    failed = False
    for name in wanted:
        v = checks[name](f)
        entry = _verdict_entry(v)
        if name == "dictatorship" and v.holds:
            entry["dictator"] = v.witness["voter"] + 1
        report["results"][name] = entry
        failed |= not v.holds
    report["timing"]["seconds"] = round(time.monotonic() - started, 4)
    _emit(args, report, d)
    return EXIT_FAIL if failed else EXIT_OK


def _write_or_print(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_scf_construct(args: argparse.Namespace, argv: list[str]) -> int:
    d = _read_domain(args.domain)
    v1, v2 = args.v1 - 1, args.v2 - 1
    if args.case == "case1":
        base = (args.base if args.base is not None else 1) - 1
        if not 0 <= base < len(d):
            raise UsageError(f"--base must be in 1..{len(d)}")
        f = scfm.construct_case1(d, base, args.n, v1, v2)
    else:
        if args.pstar is None:
            raise UsageError("case2 needs --pstar")
        pstar = args.pstar - 1
        if not 0 <= pstar < len(d):
            raise UsageError(f"--pstar must be in 1..{len(d)}")
        f = scfm.construct_case2(d, pstar, args.n, v1, v2)
    _write_or_print(format_scf(f), args.output)
    return EXIT_OK


def _bundle_from_args(args: argparse.Namespace) -> AxiomBundle:
    incentive = "sp" if args.sp else "local-sp" if args.local_sp else "none"
    try:
        return AxiomBundle(
            require_unanimity=args.unanimity,
            incentive=incentive,
            require_tops_only=args.tops_only,
            forbid_tops_only=args.not_tops_only,
            forbid_dictatorship=args.non_dictatorial,
            restrict_search_to_tops_only=args.tops_only_search,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _budget_from_args(args: argparse.Namespace) -> Budget:
    if args.threads != 1:
        raise UsageError("only --threads 1 is supported; the search engine is single-threaded")
    try:
        return Budget(max_nodes=args.max_nodes, max_seconds=args.max_seconds)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_scf_search(args: argparse.Namespace, argv: list[str]) -> int:
    d = _read_domain(args.domain)
    bundle = _bundle_from_args(args)
    out = search_scf(d, args.n, bundle, _budget_from_args(args), seed=args.seed)
    report = _base_report(argv, {"domain": {"path": args.domain, "digest": domain_digest(d)}})
    entry: dict[str, Any] = {"status": out.status, "bundle": bundle.describe(), "n": args.n}
    if out.table is not None:
        entry["table"] = list(out.table.table)
        if args.output:
            Path(args.output).write_text(format_scf(out.table))
    report["results"]["search"] = entry
    report["engine"] = out.certificate()
    report["timing"]["seconds"] = round(out.elapsed, 4)
    lines = [
        f"search: {out.status}",
        f"bundle: {' '.join(bundle.describe()) or '(none)'}",
        f"nodes: {out.nodes} propagations: {out.propagations} cases: {out.cases}",
        f"ordering: {out.ordering}",
    ]
    if out.table is not None and not args.output:
        lines.append("table:")
        lines += format_scf(out.table).splitlines()
    _emit(args, report, d, lines)
    if out.status == "timeout":
        return EXIT_TIMEOUT
    return EXIT_OK if out.status == args.expect else EXIT_FAIL


def cmd_scf_classify(args: argparse.Namespace, argv: list[str]) -> int:
    started = time.monotonic()
    d = _read_domain(args.domain)
    regions = classify_domain(d, args.n, _budget_from_args(args))
    report = _base_report(argv, {"domain": {"path": args.domain, "digest": domain_digest(d)}, "n": args.n})
    report["results"] = regions
    report["timing"]["seconds"] = round(time.monotonic() - started, 4)
    lines = []
    for name, entry in regions.items():
        line = f"{name}: {entry['status']}"
        if name == "ldict":
            line += f" (via CDN and L-tops-only: {entry['via_cdn_and_l_tops_only']})"
        if entry.get("conjecture"):
            line += f" [conjecture {entry['conjecture']}]"
        lines.append(line)
    _emit(args, report, d, lines)
    if any(e["status"] == "undecided" for e in regions.values()):
        return EXIT_TIMEOUT
    return EXIT_OK


# --- verify-witness ---------------------------------------------------------------


def _replay(d: dom.Domain, f: scfm.SCFTable | None, witness: dict) -> bool:
    kind = witness.get("kind")
    if kind in DOMAIN_KINDS:
        return dom.verify_witness(d, witness)
    if kind in GRAPH_KINDS:
        return gr.verify_witness(d, witness)
    if kind in SCF_KINDS:
        if f is None:
            raise UsageError(f"witness of kind {kind!r} needs --scf")
        return scfm.verify_witness(f, witness)
    raise UsageError(f"unknown witness kind {kind!r}")


def cmd_verify_witness(args: argparse.Namespace, argv: list[str]) -> int:
    try:
        report = json.loads(Path(args.report).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot load report {args.report}: {exc}") from None
    d = _read_domain(args.domain)
    digest = report.get("inputs", {}).get("domain", {}).get("digest")
    if digest and digest != domain_digest(d):
        raise UsageError(f"report was produced for domain {digest}, got {domain_digest(d)}")
    f = None
    if args.scf:
        f = parse_scf(Path(args.scf).read_text(), d)
    checked = 0
    bad = []
    for name, entry in report.get("results", {}).items():
        if name == "search" and entry.get("status") == "found":
            table = scfm.SCFTable(d, entry["n"], tuple(entry["table"]))
            bundle = _bundle_from_names(entry["bundle"])
            ok = not verify_table(table, bundle)
            checked += 1
            if not ok:
                bad.append(name)
            continue
        w = entry.get("witness")
        if entry.get("status") == "fails" and w:
            checked += 1
            if not _replay(d, f, w):
                bad.append(name)
    for name in bad:
        print(f"{name}: witness does NOT re-validate")
    print(f"verified {checked - len(bad)}/{checked} witnesses")
    return EXIT_FAIL if bad else EXIT_OK


def _bundle_from_names(names: list[str]) -> AxiomBundle:
    incentive = "sp" if "sp" in names else "local-sp" if "local-sp" in names else "none"
    return AxiomBundle(
        require_unanimity="unanimity" in names,
        incentive=incentive,
        require_tops_only="tops-only" in names,
        forbid_tops_only="not-tops-only" in names,
        forbid_dictatorship="non-dictatorial" in names,
    )


# --- parser ---------------------------------------------------------------------


def _add_budget(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-nodes", type=int, default=10_000_000, help="search node budget")
    p.add_argument("--max-seconds", type=float, default=None, help="search wall-clock budget")
    p.add_argument("--threads", type=int, default=1, help="worker threads (only 1 is supported)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="prefdomains", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide domain properties")
    p.add_argument("domain", help="domain file ('-' for stdin)")
    for name in [*DOMAIN_PROPERTIES, "lemma1"]:
        p.add_argument(f"--{name.replace('_', '-')}", dest=name, action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("graph", help="print the induced graph on alternatives as an edge list")
    p.add_argument("domain")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("fixtures", help="print a fixture domain file")
    p.add_argument("name", nargs="?")
    p.add_argument("--list", action="store_true")
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--axis", help="space-separated labels for single_peaked/single_dipped")
    p.set_defaults(func=cmd_fixtures)

    p = sub.add_parser("verify-witness", help="re-validate every witness in a JSON report")
    p.add_argument("report")
    p.add_argument("--domain", required=True)
    p.add_argument("--scf")
    p.set_defaults(func=cmd_verify_witness)

    ps = sub.add_parser("scf", help="social choice function commands")
    ssub = ps.add_subparsers(dest="scf_command", required=True)

    p = ssub.add_parser("check", help="check an SCF file against the axioms")
    p.add_argument("domain")
    p.add_argument("scf")
    for name in SCF_AXIOMS:
        p.add_argument(f"--{name.replace('_', '-')}", dest=name, action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_scf_check)

    p = ssub.add_parser("construct", help="build a counterexample SCF")
    p.add_argument("case", choices=["case1", "case2"])
    p.add_argument("domain")
    p.add_argument("--base", type=int, help="case1: preference (1-based) fixing the component")
    p.add_argument("--pstar", type=int, help="case2: preference (1-based) whose closure is used")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--v1", type=int, default=1)
    p.add_argument("--v2", type=int, default=2)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_scf_construct)

    p = ssub.add_parser("search", help="search for an SCF satisfying an axiom bundle")
    p.add_argument("domain")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--unanimity", action="store_true")
    inc = p.add_mutually_exclusive_group()
    inc.add_argument("--sp", action="store_true")
    inc.add_argument("--local-sp", action="store_true")
    p.add_argument("--tops-only", action="store_true")
    p.add_argument("--not-tops-only", action="store_true")
    p.add_argument("--non-dictatorial", action="store_true")
    p.add_argument("--tops-only-search", action="store_true", help="search over tops vectors only")
    p.add_argument("--expect", choices=["found", "exhausted"], default="found")
    p.add_argument("--seed", type=int, default=None, help="shuffle value order (default: deterministic)")
    p.add_argument("-o", "--output", help="write a found SCF here")
    p.add_argument("--json", action="store_true")
    _add_budget(p)
    p.set_defaults(func=cmd_scf_search)

    p = ssub.add_parser("classify", help="membership in every domain class")
    p.add_argument("domain")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--json", action="store_true")
    _add_budget(p)
    p.set_defaults(func=cmd_scf_classify)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args, argv)
    except (UsageError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConstructionError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SearchError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except PrefDomainsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
