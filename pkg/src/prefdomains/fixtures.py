"""Six reference domains over four alternatives plus three domain generators.

Table fixtures are stored as domain files under ``data/``; column order in
the printed table is preference index order.
"""

from __future__ import annotations

import random
from importlib import resources
from typing import Sequence

from .domains import Domain, build_domain
from .errors import DomainError
from .formats import format_domain, parse_domain
from .orders import AlternativeSet, LinearOrder, all_orders

TABLES = {
    "table1": "Circular domain",
    "table2": "Single-crossing domain",
    "table3": "Single-peaked domain",
    "table4": "Union of single-peaked and single-dipped domain",
    "table5": "Connected domain failing Property P",
    "table6": "Connected domain with a lone neighbour top",
}

GENERATORS = {
    "unrestricted": "all m! linear orders",
    "single_peaked": "orders single-peaked w.r.t. an axis",
    "single_dipped": "orders single-dipped w.r.t. an axis",
}


def fixture_text(name: str) -> str:
    if name not in TABLES:
        raise DomainError(f"unknown fixture {name!r}; available: {', '.join(available())}")
    return resources.files("prefdomains.data").joinpath(f"{name}.dom").read_text()


def available() -> list[str]:
    return list(TABLES) + list(GENERATORS)


def unrestricted(m: int) -> Domain:
    return build_domain(AlternativeSet.standard(m), all_orders(m))


def _axis(axis: int | Sequence[str]) -> tuple[AlternativeSet, list[int]]:
    if isinstance(axis, int):
        alts = AlternativeSet.standard(axis)
        return alts, list(range(axis))
    alts = AlternativeSet(tuple(axis))
    return alts, list(range(alts.m))


def _prefixes_are_intervals(order: LinearOrder, pos: list[int]) -> bool:
    lo = hi = pos[order.ranking[0]]
    for a in order.ranking[1:]:
        p = pos[a]
        if p == lo - 1:
            lo = p
        elif p == hi + 1:
            hi = p
        else:
            return False
    return True


def single_peaked(axis: int | Sequence[str]) -> Domain:
    """All orders whose upper contour sets are intervals of ``axis``.

    ``axis`` is either ``m`` (axis ``a1 > ... > am``) or a label sequence.
    """
    alts, pos = _axis(axis)
    return build_domain(alts, [p for p in all_orders(alts.m) if _prefixes_are_intervals(p, pos)])


def single_dipped(axis: int | Sequence[str]) -> Domain:
    """All orders whose lower contour sets are intervals of ``axis``."""
    alts, pos = _axis(axis)
    keep = [
        p for p in all_orders(alts.m)
        if _prefixes_are_intervals(LinearOrder(p.ranking[::-1]), pos)
    ]
    return build_domain(alts, keep)


def fixture(name: str, m: int = 4, axis: Sequence[str] | None = None) -> Domain:
    if name in TABLES:
        return parse_domain(fixture_text(name))
    if name == "unrestricted":
        return unrestricted(m)
    if name == "single_peaked":
        return single_peaked(axis if axis is not None else m)
    if name == "single_dipped":
        return single_dipped(axis if axis is not None else m)
    raise DomainError(f"unknown fixture {name!r}; available: {', '.join(available())}")


def fixture_file(name: str, m: int = 4, axis: Sequence[str] | None = None) -> str:
    if name in TABLES:
        return fixture_text(name)
    return format_domain(fixture(name, m, axis))


def random_connected_subdomain(m: int, rng: random.Random, size: int | None = None) -> Domain:
    """Grow a connected sub-domain of ``unrestricted(m)`` one adjacent order at a time.

    Starts from a uniformly chosen order and repeatedly adds a uniformly chosen
    outside order adjacent to the current set.  ``size`` defaults to a uniform
    draw from ``2..m!``.  All randomness comes from ``rng``.
    """
    full = unrestricted(m)
    k = len(full)
    if size is None:
        size = rng.randint(2, k)
    if not 1 <= size <= k:
        raise DomainError(f"size must be in 1..{k}")
    chosen = [rng.randrange(k)]
    members = set(chosen)
    while len(chosen) < size:
        frontier = sorted({j for i in members for j in full.neighbours_of[i]} - members)
        nxt = rng.choice(frontier)
        chosen.append(nxt)
        members.add(nxt)
    return build_domain(full.alts, [full.prefs[i] for i in chosen])
