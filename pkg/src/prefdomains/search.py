"""Backtracking search for social choice functions satisfying an axiom bundle.

The problem is a CSP with one variable per profile (or per vector of tops
when the search is restricted to tops-only rules) whose values are
alternatives.  Domains are bitmasks over alternatives.

* unanimity: unary constraints on unanimous profiles;
* (local) strategy-proofness: a binary constraint between every two profiles
  that differ in one voter's report (adjacent reports only, for the local
  version), forbidding outcome pairs that let either truthful type gain;
* required tops-onlyness: equality between same-tops profiles one report apart.

The two global, disjunctive requirements are split into cases before the
main search.  "Not dictatorial" needs, for each voter, some profile where the
voter's top loses; case ``k`` picks the ``k``-th candidate profile and forces
the voter's top at every earlier candidate, so the cases are disjoint and
together exhaustive.  "Not tops-only" is handled the same way over pairs of
same-tops profiles one report apart (a rule is tops-only iff it agrees on all
such pairs).  Inside each case: maintained arc consistency, minimum remaining
values with ties to the lowest variable, values in ascending order.
"""

from __future__ import annotations

import random
import time
from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from .domains import Domain, is_cdn, is_minimally_rich, require_three_alternatives
from .errors import DomainError
from .scf import (
    SCFTable,
    check_dictatorship,
    check_local_sp,
    check_sp,
    check_tops_only,
    check_unanimity,
    profile_at,
)
from .verdict import Verdict

DEFAULT_MAX_NODES = 10_000_000
ORDERING_ID = "mrv-lowest-index/values-ascending/cases-row-major"

INCENTIVES = ("none", "local-sp", "sp")


@dataclass(frozen=True)
class AxiomBundle:
    require_unanimity: bool = True
    incentive: str = "local-sp"
    require_tops_only: bool = False
    forbid_tops_only: bool = False
    forbid_dictatorship: bool = False
    restrict_search_to_tops_only: bool = False

    def __post_init__(self) -> None:
        if self.incentive not in INCENTIVES:
            raise ValueError(f"incentive must be one of {INCENTIVES}, got {self.incentive!r}")
        if self.require_tops_only and self.forbid_tops_only:
            raise ValueError("require_tops_only and forbid_tops_only are mutually exclusive")
        if self.restrict_search_to_tops_only and self.forbid_tops_only:
            raise ValueError("a tops-only restricted search cannot forbid tops-onlyness")

    def describe(self) -> list[str]:
        parts = []
        if self.require_unanimity:
            parts.append("unanimity")
        if self.incentive != "none":
            parts.append(self.incentive)
        if self.require_tops_only or self.restrict_search_to_tops_only:
            parts.append("tops-only")
        if self.forbid_tops_only:
            parts.append("not-tops-only")
        if self.forbid_dictatorship:
            parts.append("non-dictatorial")
        return parts


@dataclass(frozen=True)
class Budget:
    max_nodes: int = DEFAULT_MAX_NODES
    max_seconds: float | None = None

    def __post_init__(self) -> None:
        if self.max_nodes <= 0 or (self.max_seconds is not None and self.max_seconds <= 0):
            raise ValueError("budget must be positive")


@dataclass(frozen=True)
class SearchOutcome:
    status: str  # "found" | "exhausted" | "timeout"
    table: SCFTable | None
    nodes: int
    propagations: int
    cases: int
    elapsed: float
    ordering: str = ORDERING_ID
    seed: int | None = None

    @property
    def found(self) -> bool:
        return self.status == "found"

    @property
    def exhausted(self) -> bool:
        return self.status == "exhausted"

    def certificate(self) -> dict:
        return {
            "status": self.status,
            "nodes": self.nodes,
            "propagations": self.propagations,
            "cases": self.cases,
            "ordering": self.ordering,
            "seed": self.seed,
            "elapsed_seconds": round(self.elapsed, 4),
        }


class SearchError(RuntimeError):
    """A found table failed independent re-verification (engine bug)."""


class _OutOfBudget(Exception):
    pass


def _bits(mask: int) -> list[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


class _CSP:
    """Binary CSP over small bitmask domains."""

    def __init__(self, nvars: int, m: int):
        self.nvars = nvars
        self.m = m
        self.full = (1 << m) - 1
        self.dom = [self.full] * nvars
        # watch[y] lists (x, table) with table[vx] = mask of y-values supporting vx
        self.watch: list[list[tuple[int, tuple[int, ...]]]] = [[] for _ in range(nvars)]

    def add(self, x: int, y: int, allowed: Sequence[Sequence[bool]]) -> None:
        """Constraint on (x, y); ``allowed[vx][vy]``."""
        m = self.m
        for_x = tuple(sum(1 << vy for vy in range(m) if allowed[vx][vy]) for vx in range(m))
        for_y = tuple(sum(1 << vx for vx in range(m) if allowed[vx][vy]) for vy in range(m))
        self.watch[y].append((x, for_x))
        self.watch[x].append((y, for_y))


class _Engine:
    def __init__(self, csp: _CSP, budget: Budget, seed: int | None):
        self.csp = csp
        self.budget = budget
        self.nodes = 0
        self.propagations = 0
        self.cases = 0
        self.started = time.monotonic()
        self.rng = random.Random(seed) if seed is not None else None

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget.max_nodes:
            raise _OutOfBudget
        if self.budget.max_seconds is not None and self.nodes % 256 == 0:
            if time.monotonic() - self.started > self.budget.max_seconds:
                raise _OutOfBudget

    def propagate(self, dom: list[int], changed: Sequence[int], watch) -> bool:
        queue = deque(changed)
        queued = set(changed)
        while queue:
            y = queue.popleft()
            queued.discard(y)
            dy = dom[y]
            for x, table in watch[y]:
                dx = dom[x]
                keep = dx
                for vx in _bits(dx):
                    if not table[vx] & dy:
                        keep &= ~(1 << vx)
                if keep != dx:
                    self.propagations += 1
                    if not keep:
                        return False
                    dom[x] = keep
                    if x not in queued:
                        queued.add(x)
                        queue.append(x)
        return True

    def solve(self, dom: list[int], watch) -> list[int] | None:
        best, best_count = -1, 99
        for var, mask in enumerate(dom):
            c = bin(mask).count("1")
            if 1 < c < best_count:
                best, best_count = var, c
                if c == 2:
                    break
        if best < 0:
            return dom
        values = _bits(dom[best])
        if self.rng is not None:
            self.rng.shuffle(values)
        for val in values:
            self._tick()
            child = list(dom)
            child[best] = 1 << val
            if self.propagate(child, [best], watch):
                res = self.solve(child, watch)
                if res is not None:
                    return res
        return None


@dataclass
class _Case:
    unary: list[tuple[int, int]] = field(default_factory=list)  # (var, mask to intersect)
    binary: list[tuple[int, int, tuple[tuple[bool, ...], ...]]] = field(default_factory=list)


def _equal(m: int) -> tuple[tuple[bool, ...], ...]:
    return tuple(tuple(x == y for y in range(m)) for x in range(m))


def _differ(m: int) -> tuple[tuple[bool, ...], ...]:
    return tuple(tuple(x != y for y in range(m)) for x in range(m))


def _incentive_allowed(m: int, r_true: Sequence[int], r_dev: Sequence[int]) -> list[list[bool]]:
    """``x`` at the truthful profile, ``y`` after the deviation: neither type may gain."""
    return [[x == y or (r_true[x] < r_true[y] and r_dev[y] < r_dev[x]) for y in range(m)] for x in range(m)]


class _Model:
    """Variables, base constraints, decoding, and the disjunctive case groups."""

    def __init__(self, d: Domain, n: int, bundle: AxiomBundle):
        self.d, self.n, self.bundle = d, n, bundle
        self.k = len(d)
        m = d.m
        tops = d.tops
        ranks = [p.ranks for p in d.prefs]
        if bundle.restrict_search_to_tops_only:
            self.values = sorted(set(tops))
            self.keys = list(product(self.values, repeat=n))
        else:
            self.keys = list(product(range(self.k), repeat=n))
        self.var_of = {key: i for i, key in enumerate(self.keys)}
        csp = _CSP(len(self.keys), m)
        self.csp = csp

        if bundle.restrict_search_to_tops_only:
            var_tops = self.keys
        else:
            var_tops = [tuple(tops[p] for p in key) for key in self.keys]
        self.var_tops = var_tops

        if bundle.require_unanimity:
            for var, t in enumerate(var_tops):
                if len(set(t)) == 1:
                    csp.dom[var] &= 1 << t[0]

        local = bundle.incentive == "local-sp"
        if bundle.incentive != "none":
            if bundle.restrict_search_to_tops_only:
                by_top: dict[int, list[int]] = {}
                for i, t in enumerate(tops):
                    by_top.setdefault(t, []).append(i)
                for var, key in enumerate(self.keys):
                    for v in range(n):
                        for t2 in self.values:
                            if t2 <= key[v]:
                                continue
                            other = self.var_of[key[:v] + (t2,) + key[v + 1:]]
                            allowed = [[True] * m for _ in range(m)]
                            touched = False
                            for i in by_top[key[v]]:
                                for j in by_top[t2]:
                                    if local and not d.adjacent(i, j):
                                        continue
                                    touched = True
                                    pair = _incentive_allowed(m, ranks[i], ranks[j])
                                    for x in range(m):
                                        for y in range(m):
                                            allowed[x][y] = allowed[x][y] and pair[x][y]
                            if touched:
                                csp.add(var, other, allowed)
            else:
                cache: dict[tuple[int, int], list[list[bool]]] = {}
                for var, key in enumerate(self.keys):
                    for v in range(n):
                        own = key[v]
                        devs = d.neighbours_of[own] if local else range(self.k)
                        for j in sorted(devs):
                            if j <= own:
                                continue
                            other = self.var_of[key[:v] + (j,) + key[v + 1:]]
                            if (own, j) not in cache:
                                cache[(own, j)] = _incentive_allowed(m, ranks[own], ranks[j])
                            csp.add(var, other, cache[(own, j)])

        if bundle.require_tops_only and not bundle.restrict_search_to_tops_only:
            eq = _equal(m)
            for p, q in self.same_tops_pairs():
                csp.add(p, q, eq)

    def same_tops_pairs(self) -> list[tuple[int, int]]:
        tops = self.d.tops
        pairs = []
        for var, key in enumerate(self.keys):
            for v in range(self.n):
                own = key[v]
                for j in range(own + 1, self.k):
                    if tops[j] == tops[own]:
                        pairs.append((var, self.var_of[key[:v] + (j,) + key[v + 1:]]))
        return pairs

    def case_groups(self) -> list[list[_Case]]:
        groups = []
        m = self.d.m
        full = (1 << m) - 1
        if self.bundle.forbid_dictatorship:
            for v in range(self.n):
                cases = []
                for var, t in enumerate(self.var_tops):
                    if self.csp.dom[var] == 1 << t[v]:
                        continue  # already forced to this voter's top
                    unary = [(var, full & ~(1 << t[v]))]
                    unary += [(prev, 1 << self.var_tops[prev][v]) for prev in (c.unary[0][0] for c in cases)]
                    cases.append(_Case(unary=unary))
                groups.append(cases)
        if self.bundle.forbid_tops_only:
            eq, ne = _equal(m), _differ(m)
            cases = []
            pairs = self.same_tops_pairs()
            for idx, (p, q) in enumerate(pairs):
                cases.append(_Case(binary=[(p, q, ne)] + [(a, b, eq) for a, b in pairs[:idx]]))
            groups.append(cases)
        return groups

    def decode(self, dom: list[int]) -> SCFTable:
        vals = [_bits(mask)[0] for mask in dom]
        if not self.bundle.restrict_search_to_tops_only:
            return SCFTable(self.d, self.n, tuple(vals))
        tops = self.d.tops
        table = []
        for idx in range(self.k ** self.n):
            prof = profile_at(idx, self.k, self.n)
            table.append(vals[self.var_of[tuple(tops[p] for p in prof)]])
        return SCFTable(self.d, self.n, tuple(table))


def _with_binary(watch, binary, m) -> list:
    if not binary:
        return watch
    watch = list(watch)
    copied: set[int] = set()
    for x, y, allowed in binary:
        for var in (x, y):
            if var not in copied:
                watch[var] = list(watch[var])
                copied.add(var)
        for_x = tuple(sum(1 << vy for vy in range(m) if allowed[vx][vy]) for vx in range(m))
        for_y = tuple(sum(1 << vx for vx in range(m) if allowed[vx][vy]) for vy in range(m))
        watch[y].append((x, for_x))
        watch[x].append((y, for_y))
    return watch


def verify_table(f: SCFTable, bundle: AxiomBundle) -> list[str]:
    """Bundle axioms that ``f`` violates, by independent exhaustive scan."""
    bad = []
    if bundle.require_unanimity and not check_unanimity(f):
        bad.append("unanimity")
    if bundle.incentive == "local-sp" and not check_local_sp(f):
        bad.append("local-sp")
    if bundle.incentive == "sp" and not check_sp(f):
        bad.append("sp")
    tops_only = check_tops_only(f).holds
    if (bundle.require_tops_only or bundle.restrict_search_to_tops_only) and not tops_only:
        bad.append("tops-only")
    if bundle.forbid_tops_only and tops_only:
        bad.append("not-tops-only")
    if bundle.forbid_dictatorship and check_dictatorship(f) is not None:
        bad.append("non-dictatorial")
    return bad


def search_scf(
    d: Domain,
    n: int,
    bundle: AxiomBundle,
    budget: Budget | None = None,
    seed: int | None = None,
) -> SearchOutcome:
    if n < 2:
        raise DomainError("need at least 2 voters")
    budget = budget or Budget()
    model = _Model(d, n, bundle)
    csp = model.csp
    eng = _Engine(csp, budget, seed)
    groups = model.case_groups()

    def outcome(status: str, table: SCFTable | None = None) -> SearchOutcome:
        return SearchOutcome(
            status, table, eng.nodes, eng.propagations, eng.cases, time.monotonic() - eng.started, seed=seed
        )

    def descend(level: int, dom: list[int], watch) -> list[int] | None:
        if level == len(groups):
            return eng.solve(dom, watch)
        for case in groups[level]:
            eng._tick()
            eng.cases += 1
            child = list(dom)
            changed = []
            dead = False
            for var, mask in case.unary:
                new = child[var] & mask
                if new != child[var]:
                    if not new:
                        dead = True
                        break
                    child[var] = new
                    changed.append(var)
            if dead:
                continue
            w = _with_binary(watch, case.binary, csp.m)
            touched = changed + [v for x, y, _ in case.binary for v in (x, y)]
            if eng.propagate(child, touched, w):
                res = descend(level + 1, child, w)
                if res is not None:
                    return res
        return None

    try:
        dom = list(csp.dom)
        if any(x == 0 for x in dom) or not eng.propagate(dom, range(csp.nvars), csp.watch):
            return outcome("exhausted")
        result = descend(0, dom, csp.watch)
    except _OutOfBudget:
        return outcome("timeout")
    if result is None:
        return outcome("exhausted")
    table = model.decode(result)
    bad = verify_table(table, bundle)
    if bad:
        raise SearchError(f"found table violates {bad} under independent re-check")
    return outcome("found", table)


# --- domain-level decisions built on search -----------------------------------


@dataclass(frozen=True)
class SearchDecision:
    status: str  # "holds" | "fails" | "undecided"
    outcome: SearchOutcome | None = None
    note: str = ""

    @property
    def holds(self) -> bool | None:
        return {"holds": True, "fails": False}.get(self.status)


def _decide_absence(d: Domain, n: int, bundle: AxiomBundle, budget: Budget | None) -> SearchDecision:
    out = search_scf(d, n, bundle, budget)
    status = {"exhausted": "holds", "found": "fails", "timeout": "undecided"}[out.status]
    return SearchDecision(status, out)


L_TOPS_ONLY_BUNDLE = AxiomBundle(require_unanimity=True, incentive="local-sp", forbid_tops_only=True)
LDICT_BUNDLE = AxiomBundle(require_unanimity=True, incentive="local-sp", forbid_dictatorship=True)
DICT_BUNDLE = AxiomBundle(require_unanimity=True, incentive="sp", forbid_dictatorship=True)


def is_l_tops_only(d: Domain, n: int = 2, budget: Budget | None = None) -> SearchDecision:
    """Holds iff no unanimous locally strategy-proof rule fails tops-onlyness."""
    return _decide_absence(d, n, L_TOPS_ONLY_BUNDLE, budget)


def _from_verdict(v: Verdict) -> dict:
    return {"status": "holds" if v.holds else "fails", "witness": v.witness}


def _from_decision(dec: SearchDecision) -> dict:
    out = {"status": dec.status}
    if dec.outcome is not None:
        out["certificate"] = dec.outcome.certificate()
    if dec.note:
        out["note"] = dec.note
    return out


def classify_domain(d: Domain, n: int = 2, budget: Budget | None = None) -> dict[str, dict]:
    """Membership of ``d`` in each region of the summary diagram.

    Regions defined over minimally rich domains (CDN, L-tops-only, LDICT, DICT)
    fail outright with a ``never_top`` witness when ``d`` is not minimally rich.
    """
    require_three_alternatives(d)
    from .domains import satisfies_disagreement, satisfies_property_p, satisfies_scd

    rich = is_minimally_rich(d)
    report: dict[str, dict] = {"minimally_rich": _from_verdict(rich)}
    cdn = is_cdn(d)
    report["cdn"] = _from_verdict(cdn if rich else rich)

    ltops = is_l_tops_only(d, n, budget)
    report["l_tops_only"] = _from_decision(ltops if rich else SearchDecision("fails", note="not minimally rich"))

    direct = _decide_absence(d, n, LDICT_BUNDLE, budget)
    if not rich:
        via_route = "fails"
    elif not cdn:
        via_route = "fails"
    else:
        via_route = ltops.status
    ldict = _from_decision(direct if rich else SearchDecision("fails", note="not minimally rich"))
    ldict["via_cdn_and_l_tops_only"] = via_route
    ldict["consistent"] = via_route == "undecided" or ldict["status"] == "undecided" or via_route == ldict["status"]
    report["ldict"] = ldict

    dict_dec = _decide_absence(d, n, DICT_BUNDLE, budget)
    report["dict"] = _from_decision(dict_dec if rich else SearchDecision("fails", note="not minimally rich"))

    report["property_p"] = _from_verdict(satisfies_property_p(d))
    report["scd"] = _from_verdict(satisfies_scd(d))
    report["disagreement"] = _from_verdict(satisfies_disagreement(d))

    if rich and cdn:
        if ltops.status == "undecided":
            report["l_tops_only"]["conjecture"] = "relevant: CDN domain, L-tops-only undecided at budget"
        elif ltops.status == "fails":
            report["l_tops_only"]["conjecture"] = "counterexample: CDN domain that is not L-tops-only"
    return report
