"""Social choice functions as dense profile tables.

A profile is a tuple of ``n`` preference indices.  Profiles are stored and
scanned in row-major order (voter 0 most significant), and every checker
reports the first failure in that order, so witnesses are reproducible.
Voters are zero-based throughout the library.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from itertools import product
from typing import Callable, Iterator, Sequence

from .domains import Domain, components, is_connected, neighbours, tcc
from .errors import ConstructionError, DomainError
from .verdict import Verdict

Profile = tuple[int, ...]


def profile_index(profile: Sequence[int], k: int) -> int:
    idx = 0
    for p in profile:
        idx = idx * k + p
    return idx


def profile_at(idx: int, k: int, n: int) -> Profile:
    out = []
    for _ in range(n):
        idx, r = divmod(idx, k)
        out.append(r)
    return tuple(reversed(out))


@dataclass(frozen=True)
class SCFTable:
    domain: Domain
    n: int
    table: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 2:
            raise DomainError("an SCF needs at least 2 voters")
        if len(self.table) != len(self.domain) ** self.n:
            raise DomainError(f"table has {len(self.table)} entries, expected {len(self.domain) ** self.n}")
        if any(not 0 <= x < self.domain.m for x in self.table):
            raise DomainError("table entry is not a valid alternative")

    @classmethod
    def from_function(cls, d: Domain, n: int, rule: Callable[[Profile], int]) -> "SCFTable":
        return cls(d, n, tuple(rule(p) for p in product(range(len(d)), repeat=n)))

    def __call__(self, profile: Sequence[int]) -> int:
        return self.table[profile_index(profile, len(self.domain))]

    def profiles(self) -> Iterator[Profile]:
        return product(range(len(self.domain)), repeat=self.n)

    def items(self) -> Iterator[tuple[Profile, int]]:
        return zip(self.profiles(), self.table)


def dictatorial(d: Domain, n: int, voter: int = 0) -> SCFTable:
    tops = d.tops
    return SCFTable.from_function(d, n, lambda p: tops[p[voter]])


def constant(d: Domain, n: int, a: int) -> SCFTable:
    return SCFTable(d, n, (a,) * (len(d) ** n))


# --- axiom checkers ------------------------------------------------------------


@dataclass(frozen=True)
class ManipulationWitness:
    voter: int
    profile: Profile
    deviation: int
    local: bool

    def verify(self, f: SCFTable) -> bool:
        d = f.domain
        v = self.voter
        if not (0 <= v < f.n and 0 <= self.deviation < len(d)):
            return False
        true_pref = d.prefs[self.profile[v]]
        if self.local and not d.adjacent(self.profile[v], self.deviation):
            return False
        dev = self.profile[:v] + (self.deviation,) + self.profile[v + 1:]
        honest, lie = f(self.profile), f(dev)
        return lie != honest and true_pref.ranks[lie] < true_pref.ranks[honest]

    def as_witness(self) -> dict:
        w = asdict(self)
        w["profile"] = list(self.profile)
        return {"kind": "manipulation", **w}


def check_unanimity(f: SCFTable) -> Verdict:
    tops = f.domain.tops
    for profile, x in f.items():
        a = tops[profile[0]]
        if all(tops[p] == a for p in profile) and x != a:
            return Verdict.fail("unanimity", profile=list(profile), alt=a, outcome=x)
    return Verdict.ok()


def _check_incentives(f: SCFTable, local: bool) -> Verdict:
    d = f.domain
    k = len(d)
    ranks = [p.ranks for p in d.prefs]
    devs = [sorted(d.neighbours_of[i]) if local else [j for j in range(k) if j != i] for i in range(k)]
    table = f.table
    stride = [k ** (f.n - 1 - v) for v in range(f.n)]
    for idx, profile in enumerate(f.profiles()):
        honest = table[idx]
        for v in range(f.n):
            own = profile[v]
            r = ranks[own]
            base = idx - own * stride[v]
            for j in devs[own]:
                lie = table[base + j * stride[v]]
                if r[lie] < r[honest]:
                    return Verdict(False, ManipulationWitness(v, profile, j, local).as_witness())
    return Verdict.ok()


def check_local_sp(f: SCFTable) -> Verdict:
    return _check_incentives(f, local=True)


def check_sp(f: SCFTable) -> Verdict:
    return _check_incentives(f, local=False)


def check_tops_only(f: SCFTable) -> Verdict:
    tops = f.domain.tops
    first: dict[tuple[int, ...], tuple[Profile, int]] = {}
    for profile, x in f.items():
        key = tuple(tops[p] for p in profile)
        if key not in first:
            first[key] = (profile, x)
        elif first[key][1] != x:
            return Verdict.fail("tops_only", profiles=[list(first[key][0]), list(profile)])
    return Verdict.ok()


def check_dictatorship(f: SCFTable) -> int | None:
    """The smallest-index voter whose top is always chosen, or None."""
    tops = f.domain.tops
    for v in range(f.n):
        if all(x == tops[p[v]] for p, x in f.items()):
            return v
    return None


def check_decisive(f: SCFTable, voter: int, a: int) -> Verdict:
    if not 0 <= voter < f.n:
        raise DomainError(f"voter {voter} out of range")
    if not 0 <= a < f.domain.m:
        raise DomainError(f"alternative {a} out of range")
    tops = f.domain.tops
    for profile, x in f.items():
        if tops[profile[voter]] == a and x != a:
            return Verdict.fail("not_decisive", voter=voter, alt=a, profile=list(profile), outcome=x)
    return Verdict.ok()


def check_edge_outcomes(f: SCFTable, edges: Sequence[tuple[int, int]]) -> Verdict:
    """Two-voter property: along every edge ``(a, b)`` of the induced graph the
    outcome on all (top ``a``, top ``b``) profiles is one constant in ``{a, b}``
    (both orientations)."""
    if f.n != 2:
        raise DomainError("edge outcome check is a two-voter property")
    tops = f.domain.tops
    for a, b in edges:
        for x, y in ((a, b), (b, a)):
            seen = {out for (p1, p2), out in f.items() if tops[p1] == x and tops[p2] == y}
            if len(seen) > 1 or not seen <= {x, y}:
                return Verdict.fail("edge_outcomes", tops=[x, y], outcomes=sorted(seen))
    return Verdict.ok()


def verify_witness(f: SCFTable, witness: dict) -> bool:
    kind = witness.get("kind")
    tops = f.domain.tops
    try:
        if kind == "manipulation":
            mw = ManipulationWitness(
                witness["voter"], tuple(witness["profile"]), witness["deviation"], witness["local"]
            )
            return mw.verify(f)
        if kind == "unanimity":
            p = tuple(witness["profile"])
            return len({tops[i] for i in p}) == 1 and f(p) != tops[p[0]]
        if kind == "tops_only":
            p, q = (tuple(x) for x in witness["profiles"])
            return [tops[i] for i in p] == [tops[i] for i in q] and f(p) != f(q)
        if kind == "not_decisive":
            p = tuple(witness["profile"])
            return tops[p[witness["voter"]]] == witness["alt"] and f(p) != witness["alt"]
        if kind == "not_dictatorial":
            return all(f(tuple(p)) != tops[p[v]] for v, p in enumerate(witness["profiles"]))
    except (KeyError, IndexError, TypeError, ValueError):
        return False
    return False


def dictatorship_verdict(f: SCFTable) -> Verdict:
    """Dictatorship as a certificate-carrying verdict; on failure the witness
    lists, per voter, a profile where that voter's top is not chosen."""
    v = check_dictatorship(f)
    if v is not None:
        return Verdict.ok({"kind": "dictator", "voter": v})
    tops = f.domain.tops
    profiles = []
    for voter in range(f.n):
        profiles.append(next(list(p) for p, x in f.items() if x != tops[p[voter]]))
    return Verdict.fail("not_dictatorial", profiles=profiles)


# --- constructions ---------------------------------------------------------------


def _check_voters(n: int, v1: int, v2: int) -> None:
    if n < 2:
        raise ConstructionError("need at least 2 voters")
    if v1 == v2 or not (0 <= v1 < n and 0 <= v2 < n):
        raise ConstructionError(f"voters must be two distinct indices in 0..{n - 1}")


def construct_case1(d: Domain, base: int, n: int = 2, v1: int = 0, v2: int = 1) -> SCFTable:
    """Disconnected domain: follow ``v1``'s top while ``v1`` reports inside the
    component of ``base``, otherwise follow ``v2``'s top."""
    _check_voters(n, v1, v2)
    if is_connected(d):
        raise ConstructionError("case 1 needs a disconnected domain")
    comp = next(set(c) for c in components(d) if base in c)
    tops = d.tops
    return SCFTable.from_function(
        d, n, lambda p: tops[p[v1]] if p[v1] in comp else tops[p[v2]]
    )


def case2_pair(d: Domain, pstar: int) -> tuple[int, int]:
    """``(a, b)``: the top of ``pstar`` and the single top shared by all
    neighbours of its top-connected closure.  Raises if no such ``b``."""
    if not is_connected(d):
        raise ConstructionError("case 2 needs a connected domain")
    closure = tcc(d, pstar)
    nbr_tops = {d.prefs[j].top for j in neighbours(d, closure)}
    if not nbr_tops:
        raise ConstructionError("top-connected closure of pstar has no neighbours")
    if len(nbr_tops) > 1:
        raise ConstructionError("top-connected closure of pstar has two distinct neighbour tops")
    return d.prefs[pstar].top, nbr_tops.pop()


def construct_case2(d: Domain, pstar: int, n: int = 2, v1: int = 0, v2: int = 1) -> SCFTable:
    """Connected domain where the closure of ``pstar`` (top ``a``) only borders
    preferences topped by ``b``: while ``v1`` reports inside the closure,
    ``v2`` picks between ``a`` and ``b``; otherwise ``v1``'s top wins."""
    _check_voters(n, v1, v2)
    a, b = case2_pair(d, pstar)
    closure = tcc(d, pstar)
    ranks = [p.ranks for p in d.prefs]
    tops = d.tops

    def rule(p: Profile) -> int:
        if p[v1] in closure:
            return a if ranks[p[v2]][a] < ranks[p[v2]][b] else b
        return tops[p[v1]]

    return SCFTable.from_function(d, n, rule)


def clone_reduce(f: SCFTable) -> SCFTable:
    """``g(P1, P3, ..., Pn) = f(P1, P1, P3, ..., Pn)``."""
    if f.n < 3:
        raise DomainError("cloning needs at least 3 voters")
    return SCFTable.from_function(f.domain, f.n - 1, lambda p: f((p[0],) + p))


def two_voter_slice(f: SCFTable, others: Sequence[int]) -> SCFTable:
    """Fix voters 3..n at ``others`` and keep voters 1 and 2 free."""
    if f.n < 3:
        raise DomainError("slicing needs at least 3 voters")
    others = tuple(others)
    if len(others) != f.n - 2 or any(not 0 <= i < len(f.domain) for i in others):
        raise DomainError(f"need {f.n - 2} fixed preference indices")
    return SCFTable.from_function(f.domain, 2, lambda p: f(p + others))


def restrict(f: SCFTable, sub: Domain) -> SCFTable:
    if sub.alts != f.domain.alts:
        raise DomainError("sub-domain is over a different alternative set")
    lookup = {p: i for i, p in enumerate(f.domain.prefs)}
    missing = [i for i, p in enumerate(sub.prefs) if p not in lookup]
    if missing:
        raise DomainError(f"sub-domain preference {missing[0]} is not in the SCF's domain")
    idx = [lookup[p] for p in sub.prefs]
    return SCFTable.from_function(sub, f.n, lambda p: f(tuple(idx[i] for i in p)))
