"""The graph on alternatives induced by a domain, and its structural checks.

Vertices are alternatives.  ``(a, b)`` is an edge when two adjacent
preferences of the domain swap ``a`` and ``b`` in their top two positions.
Graphs here have at most a handful of vertices, so cycle and path questions
are answered by exhaustive enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Sequence

from .domains import Domain, PrefPath, is_path
from .errors import DomainError
from .orders import AlternativeSet
from .verdict import Verdict

Edge = tuple[int, int]


@dataclass(frozen=True)
class InducedGraph:
    alts: AlternativeSet
    edges: frozenset[Edge]
    edge_witness: dict[Edge, tuple[int, int]]

    @property
    def m(self) -> int:
        return self.alts.m

    def has_edge(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edges

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.m)]
        for a, b in sorted(self.edges):
            adj[a].append(b)
            adj[b].append(a)
        return [sorted(x) for x in adj]

    def to_text(self) -> str:
        """One ``a b`` line per edge (labels), lexicographically sorted."""
        lines = sorted(
            " ".join(sorted((self.alts.labels[a], self.alts.labels[b]))) for a, b in self.edges
        )
        return "".join(line + "\n" for line in lines)


def induced_graph(d: Domain) -> InducedGraph:
    witness: dict[Edge, tuple[int, int]] = {}
    for i, j in d.adjacent_pairs():
        p, q = d.prefs[i], d.prefs[j]
        if p.ranking[0] == q.ranking[1] and p.ranking[1] == q.ranking[0]:
            a, b = p.ranking[0], q.ranking[0]
            witness.setdefault((min(a, b), max(a, b)), (i, j))
    return InducedGraph(d.alts, frozenset(witness), witness)


def edge_witness_valid(d: Domain, g: InducedGraph, edge: Edge) -> bool:
    i, j = g.edge_witness[edge]
    p, q = d.prefs[i], d.prefs[j]
    return (
        d.adjacent(i, j)
        and {p.top, q.top} == set(edge)
        and p.ranking[1] == q.top
        and q.ranking[1] == p.top
    )


def degree(g: InducedGraph, a: int) -> int:
    if not 0 <= a < g.m:
        raise DomainError(f"alternative index {a} out of range")
    return sum(1 for e in g.edges if a in e)


def _simple_paths(adj: list[list[int]], start: int) -> Iterator[list[int]]:
    """Every simple path (as a vertex list) starting at ``start``."""
    path = [start]
    on_path = {start}

    def extend() -> Iterator[list[int]]:
        yield list(path)
        for v in adj[path[-1]]:
            if v not in on_path:
                path.append(v)
                on_path.add(v)
                yield from extend()
                path.pop()
                on_path.discard(v)

    yield from extend()


def find_cycle_through(g: InducedGraph, a: int) -> tuple[int, ...] | None:
    """A cycle ``(a, ..., a)`` of length at least 3 containing ``a``, if one exists."""
    if not 0 <= a < g.m:
        raise DomainError(f"alternative index {a} out of range")
    adj = g.adjacency()
    for path in _simple_paths(adj, a):
        if len(path) >= 3 and a in adj[path[-1]]:
            return tuple(path) + (a,)
    return None


def all_cycles(g: InducedGraph) -> list[frozenset[int]]:
    """Vertex sets of all simple cycles (each set reported once)."""
    adj = g.adjacency()
    found: set[frozenset[int]] = set()
    out = []
    for s in range(g.m):
        for path in _simple_paths(adj, s):
            # a cycle is listed from its smallest vertex
            if len(path) >= 3 and min(path) == s and s in adj[path[-1]]:
                vs = frozenset(path)
                if vs not in found:
                    found.add(vs)
                    out.append(vs)
    return out


def is_cycle(g: InducedGraph, cycle: Sequence[int]) -> bool:
    body = list(cycle[:-1])
    return (
        len(cycle) >= 4
        and cycle[0] == cycle[-1]
        and len(set(body)) == len(body)
        and all(g.has_edge(u, v) for u, v in zip(cycle, cycle[1:]))
    )


def is_graph_path(g: InducedGraph, path: Sequence[int]) -> bool:
    return (
        len(path) >= 1
        and len(set(path)) == len(path)
        and all(g.has_edge(u, v) for u, v in zip(path, path[1:]))
    )


@dataclass(frozen=True)
class Lemma1Report:
    connected: Verdict
    min_degree_ok: Verdict
    has_cycle: Verdict
    bridge_paths_ok: Verdict

    @property
    def all_hold(self) -> bool:
        return all((self.connected.holds, self.min_degree_ok.holds, self.has_cycle.holds, self.bridge_paths_ok.holds))

    def as_dict(self) -> dict[str, Verdict]:
        return {
            "connected": self.connected,
            "min_degree": self.min_degree_ok,
            "has_cycle": self.has_cycle,
            "bridge_paths": self.bridge_paths_ok,
        }


def _graph_connected(g: InducedGraph) -> Verdict:
    adj = g.adjacency()
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    if len(seen) == g.m:
        return Verdict.ok()
    other = min(set(range(g.m)) - seen)
    return Verdict.fail("graph_disconnected", pair=[0, other])


def _bridge_path(g: InducedGraph, v: int, cycles: list[frozenset[int]]) -> list[int] | None:
    """A path with ``v`` strictly inside whose endpoints lie on vertex-disjoint cycles."""
    adj = g.adjacency()
    on_cycle: dict[int, list[frozenset[int]]] = {}
    for c in cycles:
        for x in c:
            on_cycle.setdefault(x, []).append(c)
    for start in sorted(on_cycle):
        for path in _simple_paths(adj, start):
            if len(path) < 3 or v not in path[1:-1]:
                continue
            end = path[-1]
            for c1 in on_cycle[start]:
                for c2 in on_cycle.get(end, []):
                    if not c1 & c2:
                        return path
    return None


def lemma1_check(d: Domain) -> Lemma1Report:
    g = induced_graph(d)
    connected = _graph_connected(g)

    low = [a for a in range(g.m) if degree(g, a) < 2]
    min_degree = Verdict.fail("low_degree", alt=low[0], degree=degree(g, low[0])) if low else Verdict.ok()

    cycles = all_cycles(g)
    if cycles:
        anchor = min(min(c) for c in cycles)
        has_cycle = Verdict.ok({"kind": "cycle", "cycle": list(find_cycle_through(g, anchor) or ())})
    else:
        has_cycle = Verdict.fail("acyclic", edges=sorted(map(list, g.edges)))

    bridge = Verdict.ok()
    on_any = set().union(*cycles) if cycles else set()
    for a in range(g.m):
        if a in on_any:
            continue
        if _bridge_path(g, a, cycles) is None:
            bridge = Verdict.fail("no_bridge_path", alt=a)
            break
    return Lemma1Report(connected, min_degree, has_cycle, bridge)


def project_tops_path(d: Domain, path: PrefPath, a: int, b: int) -> tuple[int, ...]:
    """Turn a preference path from top ``a`` to top ``b`` into a path of ``G(d)``.

    Repeatedly jump to the last position on the path that still carries the
    current top, then step to the next top; the sequence of tops visited is
    the result.
    """
    if a == b:
        raise DomainError("endpoints must be distinct alternatives")
    if not is_path(d, path):
        raise DomainError(f"{tuple(path)} is not a path in the domain")
    tops = [d.prefs[k].top for k in path]
    if tops[0] != a or tops[-1] != b:
        raise DomainError(f"path runs from top {tops[0]} to top {tops[-1]}, expected {a} to {b}")
    out = [a]
    current = a
    start = 0
    while True:
        j = max(k for k in range(start, len(tops)) if tops[k] == current)
        nxt = tops[j + 1]
        if nxt == b:
            out.append(b)
            return tuple(out)
        out.append(nxt)
        current = nxt
        start = j + 1


def verify_witness(d: Domain, witness: dict) -> bool:
    g = induced_graph(d)
    kind = witness.get("kind")
    try:
        if kind == "graph_disconnected":
            x, y = witness["pair"]
            seen = {x}
            stack = [x]
            adj = g.adjacency()
            while stack:
                u = stack.pop()
                for w in adj[u]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            return y not in seen
        if kind == "low_degree":
            return degree(g, witness["alt"]) < 2
        if kind == "acyclic":
            return not all_cycles(g)
        if kind == "no_bridge_path":
            a = witness["alt"]
            return find_cycle_through(g, a) is None and _bridge_path(g, a, all_cycles(g)) is None
    except (KeyError, IndexError, TypeError, ValueError):
        return False
    return False


def edges_of(g: InducedGraph) -> list[Edge]:
    return sorted(g.edges)


def complete_edges(m: int) -> frozenset[Edge]:
    return frozenset(combinations(range(m), 2))
