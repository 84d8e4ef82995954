"""Text formats for domains and social choice function tables.

Domain file::

    alternatives: a1 a2 a3 a4     # optional header
    a1 a2 a3 a4                   # one preference per line, best to worst
    a2 a1 a3 a4

Blank lines and lines starting with ``#`` are skipped.  Without a header the
labels come from the first preference line.  Line order fixes the 1-based
preference indices used on the command line.

SCF file::

    scf n=2 domain=sha256:<16 hex digits>
    1 1 -> a1
    1 2 -> a2
    ...

one line per profile, 1-based preference indices; every profile must appear.
"""

from __future__ import annotations

import hashlib
from typing import TYPE_CHECKING

from .domains import Domain, build_domain
from .errors import DomainError, OrderError, ParseError
from .orders import AlternativeSet, LinearOrder

if TYPE_CHECKING:
    from .scf import SCFTable


def _column(raw: str, token: str) -> int:
    return raw.find(token) + 1


def parse_domain(text: str) -> Domain:
    alts: AlternativeSet | None = None
    orders: list[LinearOrder] = []
    first_line: dict[LinearOrder, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.lower().startswith("alternatives:"):
            if alts is not None or orders:
                raise ParseError("header must precede all preferences", lineno)
            labels = line.split(":", 1)[1].split()
            try:
                alts = AlternativeSet(tuple(labels))
            except OrderError as exc:
                raise ParseError(str(exc), lineno, _column(raw, ":") + 1) from None
            continue
        tokens = line.split()
        if alts is None:
            try:
                alts = AlternativeSet(tuple(tokens))
            except OrderError as exc:
                raise ParseError(str(exc), lineno) from None
        for tok in tokens:
            if tok not in alts.labels:
                raise ParseError(f"unknown alternative {tok!r}", lineno, _column(raw, tok))
        if len(tokens) != alts.m or len(set(tokens)) != len(tokens):
            raise ParseError(f"expected a ranking of all {alts.m} alternatives, got {len(tokens)} labels", lineno)
        order = alts.parse_order(tokens)
        if order in first_line:
            raise ParseError(
                f"duplicate preference (same as line {first_line[order]})", lineno
            )
        first_line[order] = lineno
        orders.append(order)
    if not orders:
        raise ParseError("no preferences found", max(1, len(text.splitlines())))
    assert alts is not None
    try:
        return build_domain(alts, orders)
    except DomainError as exc:
        raise ParseError(str(exc), 1) from None


def format_domain(d: Domain) -> str:
    lines = ["alternatives: " + " ".join(d.alts.labels)]
    lines += [d.alts.format_order(p) for p in d.prefs]
    return "\n".join(lines) + "\n"


def domain_digest(d: Domain) -> str:
    return "sha256:" + hashlib.sha256(format_domain(d).encode()).hexdigest()[:16]


def format_scf(f: "SCFTable") -> str:
    d = f.domain
    lines = [f"scf n={f.n} domain={domain_digest(d)}"]
    for idx, profile in enumerate(f.profiles()):
        lhs = " ".join(str(i + 1) for i in profile)
        lines.append(f"{lhs} -> {d.alts.labels[f.table[idx]]}")
    return "\n".join(lines) + "\n"


def parse_scf(text: str, d: Domain) -> "SCFTable":
    from .scf import SCFTable, profile_index

    n: int | None = None
    table: list[int | None] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if n is None:
            fields = line.split()
            if not fields or fields[0] != "scf":
                raise ParseError("expected header 'scf n=<n> domain=<id>'", lineno)
            opts = dict(f.split("=", 1) for f in fields[1:] if "=" in f)
            try:
                n = int(opts["n"])
            except (KeyError, ValueError):
                raise ParseError("header lacks a valid n=<voters>", lineno) from None
            if n < 2:
                raise ParseError("n must be at least 2", lineno)
            ident = opts.get("domain", "")
            if ident.startswith("sha256:") and ident != domain_digest(d):
                raise ParseError(f"domain digest {ident} does not match {domain_digest(d)}", lineno)
            table = [None] * (len(d) ** n)
            continue
        if "->" not in line:
            raise ParseError("expected '<i1> ... <in> -> <alternative>'", lineno)
        lhs, rhs = line.split("->", 1)
        try:
            profile = tuple(int(t) - 1 for t in lhs.split())
        except ValueError:
            raise ParseError("preference indices must be integers", lineno) from None
        if len(profile) != n or any(not 0 <= i < len(d) for i in profile):
            raise ParseError(f"profile must list {n} indices in 1..{len(d)}", lineno)
        label = rhs.strip()
        if label not in d.alts.labels:
            raise ParseError(f"unknown alternative {label!r}", lineno, _column(raw, label))
        k = profile_index(profile, len(d))
        if table[k] is not None:
            raise ParseError("profile listed twice", lineno)
        table[k] = d.alts.index(label)
    if n is None:
        raise ParseError("empty SCF file", 1)
    missing = [k for k, v in enumerate(table) if v is None]
    if missing:
        from .scf import profile_at

        prof = " ".join(str(i + 1) for i in profile_at(missing[0], len(d), n))
        raise ParseError(f"SCF is not total: {len(missing)} profiles missing, first is ({prof})", len(text.splitlines()))
    return SCFTable(d, n, tuple(table))  # type: ignore[arg-type]
