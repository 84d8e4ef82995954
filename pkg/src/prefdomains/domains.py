"""Preference domains and the structural properties decided on them.

A domain is an ordered tuple of distinct linear orders; the position of an
order is its (zero-based) preference index.  Every decider returns a
:class:`~prefdomains.verdict.Verdict` whose witness can be replayed with
:func:`verify_witness`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .errors import DomainError
from .orders import AlternativeSet, LinearOrder, is_adjacent
from .verdict import Verdict

PrefPath = tuple[int, ...]


@dataclass(frozen=True)
class Domain:
    alts: AlternativeSet
    prefs: tuple[LinearOrder, ...]
    neighbours_of: tuple[frozenset[int], ...] = field(repr=False, compare=False)

    @property
    def m(self) -> int:
        return self.alts.m

    def __len__(self) -> int:
        return len(self.prefs)

    @property
    def tops(self) -> tuple[int, ...]:
        return tuple(p.top for p in self.prefs)

    def adjacent(self, i: int, j: int) -> bool:
        return j in self.neighbours_of[i]

    @property
    def adjacency(self) -> list[list[bool]]:
        n = len(self.prefs)
        return [[j in self.neighbours_of[i] for j in range(n)] for i in range(n)]

    def adjacent_pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(len(self.prefs)) for j in sorted(self.neighbours_of[i]) if i < j]

    def index_of(self, order: LinearOrder) -> int:
        try:
            return self.prefs.index(order)
        except ValueError:
            raise DomainError(f"order {self.alts.format_order(order)!r} not in domain") from None

    def label(self, i: int) -> str:
        return self.alts.format_order(self.prefs[i])

    def _check_index(self, i: int) -> None:
        if not 0 <= i < len(self.prefs):
            raise DomainError(f"preference index {i} out of range 0..{len(self.prefs) - 1}")


def build_domain(alts: AlternativeSet, orders: Iterable[LinearOrder]) -> Domain:
    prefs = tuple(orders)
    if not prefs:
        raise DomainError("a domain needs at least one preference")
    seen: dict[LinearOrder, int] = {}
    for i, p in enumerate(prefs):
        if p.m != alts.m:
            raise DomainError(f"preference {i} ranks {p.m} alternatives, expected {alts.m}")
        if p in seen:
            raise DomainError(f"duplicate preference: indices {seen[p]} and {i}")
        seen[p] = i
    nbrs: list[set[int]] = [set() for _ in prefs]
    for i, j in combinations(range(len(prefs)), 2):
        if is_adjacent(prefs[i], prefs[j]):
            nbrs[i].add(j)
            nbrs[j].add(i)
    return Domain(alts, prefs, tuple(frozenset(s) for s in nbrs))


def sub_domain(d: Domain, indices: Iterable[int]) -> Domain:
    """The domain formed by the given preferences, in the given order."""
    return build_domain(d.alts, [d.prefs[i] for i in indices])


def is_minimally_rich(d: Domain) -> Verdict:
    tops = set(d.tops)
    for a in range(d.m):
        if a not in tops:
            return Verdict.fail("never_top", alt=a)
    return Verdict.ok()


# --- paths and connectedness -------------------------------------------------


def _bfs_path(d: Domain, i: int, j: int, allowed: frozenset[int] | set[int] | None = None) -> PrefPath | None:
    if i == j:
        return (i,)
    parent = {i: -1}
    queue = deque([i])
    while queue:
        u = queue.popleft()
        for v in sorted(d.neighbours_of[u]):
            if v in parent or (allowed is not None and v not in allowed):
                continue
            parent[v] = u
            if v == j:
                path = [v]
                while parent[path[-1]] != -1:
                    path.append(parent[path[-1]])
                return tuple(reversed(path))
            queue.append(v)
    return None


def find_path(d: Domain, i: int, j: int) -> PrefPath | None:
    """Shortest path from preference ``i`` to ``j``, or None if unconnected."""
    d._check_index(i)
    d._check_index(j)
    return _bfs_path(d, i, j)


def is_path(d: Domain, path: Sequence[int]) -> bool:
    if not path or len(set(path)) != len(path):
        return False
    if any(not 0 <= i < len(d) for i in path):
        return False
    return all(d.adjacent(u, v) for u, v in zip(path, path[1:]))


def components(d: Domain) -> list[list[int]]:
    seen: set[int] = set()
    comps = []
    for s in range(len(d)):
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in d.neighbours_of[u]:
                if v not in seen:
                    seen.add(v)
                    comp.append(v)
                    queue.append(v)
        comps.append(sorted(comp))
    return comps


def is_connected(d: Domain) -> Verdict:
    comps = components(d)
    if len(comps) == 1:
        return Verdict.ok()
    return Verdict.fail("disconnected", pair=[comps[0][0], comps[1][0]], components=comps)


# --- top-connected closures and neighbours ------------------------------------


def tcc(d: Domain, i: int) -> frozenset[int]:
    """Preferences reachable from ``i`` along paths that keep ``i``'s top."""
    d._check_index(i)
    top = d.prefs[i].top
    closure = {i}
    queue = deque([i])
    while queue:
        u = queue.popleft()
        for v in d.neighbours_of[u]:
            if v not in closure and d.prefs[v].top == top:
                closure.add(v)
                queue.append(v)
    return frozenset(closure)


def tcc_partition(d: Domain) -> list[frozenset[int]]:
    """All distinct top-connected closures, ordered by smallest member."""
    seen: set[int] = set()
    parts = []
    for i in range(len(d)):
        if i not in seen:
            c = tcc(d, i)
            seen |= c
            parts.append(c)
    return parts


def neighbours(d: Domain, s: Iterable[int]) -> frozenset[int]:
    s = set(s)
    for i in s:
        d._check_index(i)
    return frozenset(j for i in s for j in d.neighbours_of[i] if j not in s)


def has_two_distinct_neighbours(d: Domain, i: int) -> Verdict:
    closure = tcc(d, i)
    nbr_tops = sorted({d.prefs[j].top for j in neighbours(d, closure)})
    if len(nbr_tops) >= 2:
        return Verdict.ok()
    return Verdict.fail("neighbour_tops", pref=i, tcc=sorted(closure), neighbour_tops=nbr_tops)


def require_three_alternatives(d: Domain) -> None:
    if d.m < 3:
        raise DomainError(f"requires m >= 3 alternatives, domain has m = {d.m}")


def is_cdn(d: Domain) -> Verdict:
    """Connected, and every top-connected closure has neighbours with two distinct tops."""
    require_three_alternatives(d)
    conn = is_connected(d)
    if not conn:
        return conn
    done: set[int] = set()
    for i in range(len(d)):
        if i in done:
            continue
        v = has_two_distinct_neighbours(d, i)
        if not v:
            return v
        done |= tcc(d, i)
    return Verdict.ok()


# --- restoration, Property P, SCD --------------------------------------------


def _flip_sequence(d: Domain, path: Sequence[int], a: int, b: int) -> list[bool]:
    return [d.prefs[k].ranks[a] < d.prefs[k].ranks[b] for k in path]


def path_restoration_free(d: Domain, path: Sequence[int], a: int, b: int) -> bool:
    """True iff the relative ranking of ``a`` and ``b`` flips at most once along ``path``."""
    if a == b:
        raise DomainError("restoration is defined for two distinct alternatives")
    if not is_path(d, path):
        raise DomainError(f"{tuple(path)} is not a path in the domain")
    seq = _flip_sequence(d, path, a, b)
    return sum(x != y for x, y in zip(seq, seq[1:])) <= 1


def restoration_free_path(d: Domain, i: int, j: int, a: int, b: int) -> PrefPath | None:
    """A shortest path from ``i`` to ``j`` with no {a,b}-restoration, if any.

    Breadth-first search over states (preference, flips used); a flip is an
    edge whose endpoints rank ``a`` and ``b`` differently.  A shortest such
    walk never repeats a preference (cutting the loop gives a shorter walk
    whose flip sequence is a subsequence), so the result is a simple path.
    """
    if i == j:
        return (i,)
    above = [p.ranks[a] < p.ranks[b] for p in d.prefs]
    start = (i, 0)
    parent: dict[tuple[int, int], tuple[int, int] | None] = {start: None}
    queue = deque([start])
    while queue:
        u, flips = queue.popleft()
        for v in sorted(d.neighbours_of[u]):
            nf = flips + (above[u] != above[v])
            if nf > 1 or (v, nf) in parent:
                continue
            parent[(v, nf)] = (u, flips)
            if v == j:
                path = [(v, nf)]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                return tuple(node for node, _ in reversed(path))
            queue.append((v, nf))
    return None


def _restoration_free_targets(d: Domain, i: int, a: int, b: int) -> set[int]:
    above = [p.ranks[a] < p.ranks[b] for p in d.prefs]
    seen = {(i, 0)}
    queue = deque(seen)
    while queue:
        u, flips = queue.popleft()
        for v in d.neighbours_of[u]:
            nf = flips + (above[u] != above[v])
            if nf <= 1 and (v, nf) not in seen:
                seen.add((v, nf))
                queue.append((v, nf))
    return {v for v, _ in seen}


def _no_restoration(d: Domain, pairs: list[tuple[int, int]]) -> Verdict:
    for i in range(len(d)):
        for a, b in pairs:
            reach = _restoration_free_targets(d, i, a, b)
            for j in range(len(d)):
                if j != i and j not in reach:
                    return Verdict.fail("restoration", source=i, target=j, pair=[a, b])
    return Verdict.ok()


def satisfies_property_p(d: Domain) -> Verdict:
    return _no_restoration(d, list(combinations(range(d.m), 2)))


def satisfies_scd(d: Domain) -> Verdict:
    """Property P restricted to pairs containing some preference's top alternative."""
    tops = set(d.tops)
    pairs = [(a, b) for a, b in combinations(range(d.m), 2) if a in tops or b in tops]
    return _no_restoration(d, pairs)


# --- disagreement --------------------------------------------------------------


def satisfies_disagreement(d: Domain) -> Verdict:
    tops = d.tops
    for i, j in d.adjacent_pairs():
        a, b = tops[i], tops[j]
        if a == b:
            continue
        others = [p for p in d.prefs if p.top not in (a, b)]
        if not any(p.ranks[a] < p.ranks[b] for p in others):
            return Verdict.fail("disagreement", edge=[i, j], pair=[a, b], missing=[a, b])
        if not any(p.ranks[b] < p.ranks[a] for p in others):
            return Verdict.fail("disagreement", edge=[i, j], pair=[a, b], missing=[b, a])
    return Verdict.ok()


# --- witness replay -------------------------------------------------------------


def verify_witness(d: Domain, witness: dict) -> bool:
    """Re-check a failure certificate against ``d`` using only the witness.

    Returns True when the witness does certify the failure it claims.
    """
    kind = witness.get("kind")
    try:
        if kind == "never_top":
            return witness["alt"] not in set(d.tops)
        if kind == "disconnected":
            i, j = witness["pair"]
            return find_path(d, i, j) is None
        if kind == "neighbour_tops":
            nb = neighbours(d, tcc(d, witness["pref"]))
            found = sorted({d.prefs[j].top for j in nb})
            return len(found) < 2 and found == list(witness["neighbour_tops"])
        if kind == "restoration":
            a, b = witness["pair"]
            return a != b and restoration_free_path(d, witness["source"], witness["target"], a, b) is None
        if kind == "disagreement":
            i, j = witness["edge"]
            a, b = d.prefs[i].top, d.prefs[j].top
            if not d.adjacent(i, j) or a == b or sorted([a, b]) != sorted(witness["pair"]):
                return False
            x, y = witness["missing"]
            return not any(p.ranks[x] < p.ranks[y] for p in d.prefs if p.top not in (a, b))
    except (KeyError, IndexError, TypeError, ValueError):
        return False
    return False
