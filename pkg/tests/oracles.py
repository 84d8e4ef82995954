"""Independent reference implementations used as test oracles.

Everything here works on plain tuples of alternative indices (best first) and
deliberately avoids the package's algorithms: adjacency is Kendall-tau
distance 1, paths are enumerated exhaustively, and SCF searches are naive
row-major backtracking with no propagation.
"""

from __future__ import annotations

from itertools import combinations, product

Order = tuple[int, ...]


def kendall_tau(p: Order, q: Order) -> int:
    pos = {a: k for k, a in enumerate(q)}
    return sum(1 for x, y in combinations(p, 2) if pos[x] > pos[y])


def adjacent(p: Order, q: Order) -> bool:
    # distance 1 means the orders differ by one consecutive swap
    return kendall_tau(p, q) == 1


def graph(orders: list[Order]) -> list[list[int]]:
    k = len(orders)
    return [[j for j in range(k) if j != i and adjacent(orders[i], orders[j])] for i in range(k)]


def simple_paths(orders: list[Order], i: int, j: int) -> list[tuple[int, ...]]:
    adj = graph(orders)
    out = []

    def walk(path: list[int]) -> None:
        if path[-1] == j:
            out.append(tuple(path))
            return
        for v in adj[path[-1]]:
            if v not in path:
                path.append(v)
                walk(path)
                path.pop()

    walk([i])
    return out


def connected(orders: list[Order]) -> bool:
    return all(simple_paths(orders, 0, j) for j in range(1, len(orders)))


def flips(orders: list[Order], path, a: int, b: int) -> int:
    signs = [o.index(a) < o.index(b) for o in (orders[k] for k in path)]
    return sum(s != t for s, t in zip(signs, signs[1:]))


def has_restoration(orders: list[Order], path, a: int, b: int) -> bool:
    """Some q < r < s on the path with q, s agreeing on {a, b} and r not."""
    signs = [orders[k].index(a) < orders[k].index(b) for k in path]
    n = len(signs)
    return any(
        signs[q] == signs[s] != signs[r]
        for q in range(n) for r in range(q + 1, n) for s in range(r + 1, n)
    )


def property_p_pairs(orders: list[Order], pairs) -> bool:
    k = len(orders)
    for i in range(k):
        for j in range(k):
            if i == j:
                continue
            paths = simple_paths(orders, i, j)
            for a, b in pairs:
                if not any(not has_restoration(orders, p, a, b) for p in paths):
                    return False
    return True


def property_p(orders: list[Order]) -> bool:
    m = len(orders[0])
    return property_p_pairs(orders, list(combinations(range(m), 2)))


def top_connected_closure(orders: list[Order], i: int) -> set[int]:
    adj = graph(orders)
    top = orders[i][0]
    seen = {i}
    stack = [i]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen and orders[v][0] == top:
                seen.add(v)
                stack.append(v)
    return seen


def cdn(orders: list[Order]) -> bool:
    if not connected(orders):
        return False
    adj = graph(orders)
    for i in range(len(orders)):
        closure = top_connected_closure(orders, i)
        nbr = {v for u in closure for v in adj[u]} - closure
        if len({orders[v][0] for v in nbr}) < 2:
            return False
    return True


# --- SCF oracles ------------------------------------------------------------------


def _better(order: Order, x: int, y: int) -> bool:
    return order.index(x) < order.index(y)


def enumerate_rules(orders: list[Order], n: int, local: bool, unanimous: bool = True, fixed=None):
    """Yield every (unanimous) (locally) strategy-proof rule as a dict profile -> alt.

    Profiles are filled in row-major order; after each assignment every
    deviation between two already-assigned profiles is checked.  ``fixed``
    pins the outcome at some profiles.
    """
    fixed = fixed or {}
    k, m = len(orders), len(orders[0])
    adj = graph(orders)
    profiles = list(product(range(k), repeat=n))
    table: dict[tuple[int, ...], int] = {}

    def ok(prof: tuple[int, ...]) -> bool:
        x = table[prof]
        for v in range(n):
            own = prof[v]
            devs = adj[own] if local else [j for j in range(k) if j != own]
            for j in devs:
                other = prof[:v] + (j,) + prof[v + 1:]
                if other not in table:
                    continue
                y = table[other]
                if _better(orders[own], y, x) or _better(orders[j], x, y):
                    return False
        return True

    def fill(idx: int):
        if idx == len(profiles):
            yield dict(table)
            return
        prof = profiles[idx]
        tops = {orders[p][0] for p in prof}
        choices = list(tops) if unanimous and len(tops) == 1 else range(m)
        if prof in fixed:
            choices = [fixed[prof]] if fixed[prof] in choices else []
        for x in choices:
            table[prof] = x
            if ok(prof):
                yield from fill(idx + 1)
            del table[prof]

    yield from fill(0)


def is_dictatorial_rule(orders: list[Order], n: int, rule: dict) -> bool:
    return any(all(x == orders[p[v]][0] for p, x in rule.items()) for v in range(n))


def is_tops_only_rule(orders: list[Order], rule: dict) -> bool:
    seen: dict = {}
    for p, x in rule.items():
        key = tuple(orders[i][0] for i in p)
        if seen.setdefault(key, x) != x:
            return False
    return True
