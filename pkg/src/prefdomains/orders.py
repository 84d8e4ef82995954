"""Strict linear orders over a finite set of alternatives.

Alternatives are dense integer indices ``0..m-1``; their labels live only on
:class:`AlternativeSet`.  Ranks are 1-based (rank 1 is the top alternative).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Iterable, Iterator, Sequence

from .errors import OrderError


@dataclass(frozen=True)
class AlternativeSet:
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if len(labels) < 2:
            raise OrderError(f"need at least 2 alternatives, got {len(labels)}")
        for lab in labels:
            if not isinstance(lab, str) or not lab or any(c.isspace() for c in lab):
                raise OrderError(f"invalid alternative label {lab!r}")
        if len(set(labels)) != len(labels):
            raise OrderError(f"duplicate alternative labels in {labels}")

    @classmethod
    def standard(cls, m: int) -> "AlternativeSet":
        """Labels ``a1 .. am``."""
        return cls(tuple(f"a{k}" for k in range(1, m + 1)))

    @property
    def m(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise OrderError(f"unknown alternative {label!r}") from None

    def label(self, a: int) -> str:
        if not 0 <= a < self.m:
            raise OrderError(f"alternative index {a} out of range 0..{self.m - 1}")
        return self.labels[a]

    def parse_order(self, text: str | Iterable[str]) -> "LinearOrder":
        tokens = text.split() if isinstance(text, str) else list(text)
        return LinearOrder(tuple(self.index(t) for t in tokens))

    def format_order(self, order: "LinearOrder") -> str:
        """Canonical text: best-to-worst labels joined by single spaces."""
        return " ".join(self.labels[a] for a in order.ranking)


@dataclass(frozen=True)
class LinearOrder:
    """A ranking best-to-worst, with its inverse rank array kept alongside."""

    ranking: tuple[int, ...]
    ranks: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        ranking = tuple(self.ranking)
        object.__setattr__(self, "ranking", ranking)
        m = len(ranking)
        if sorted(ranking) != list(range(m)):
            raise OrderError(f"{ranking} is not a permutation of 0..{m - 1}")
        ranks = [0] * m
        for pos, a in enumerate(ranking):
            ranks[a] = pos + 1
        object.__setattr__(self, "ranks", tuple(ranks))

    @property
    def m(self) -> int:
        return len(self.ranking)

    @property
    def top(self) -> int:
        return self.ranking[0]

    def __iter__(self) -> Iterator[int]:
        return iter(self.ranking)

    def __str__(self) -> str:
        return " ".join(str(a) for a in self.ranking)


def kth(order: LinearOrder, k: int) -> int:
    """The alternative ranked ``k``-th (1-based)."""
    if not 1 <= k <= order.m:
        raise OrderError(f"rank {k} out of range 1..{order.m}")
    return order.ranking[k - 1]


def rank_of(order: LinearOrder, a: int) -> int:
    if not 0 <= a < order.m:
        raise OrderError(f"unknown alternative index {a}")
    return order.ranks[a]


def prefers(order: LinearOrder, a: int, b: int) -> bool:
    """True iff ``a`` is ranked strictly above ``b``."""
    if a == b:
        raise OrderError("prefers() needs two distinct alternatives")
    return rank_of(order, a) < rank_of(order, b)


def swapped_position(p: LinearOrder, q: LinearOrder) -> int | None:
    """Position ``k`` (0-based) such that ``q`` is ``p`` with entries ``k, k+1``
    exchanged, or None when the two orders are not adjacent."""
    if p.m != q.m:
        raise OrderError(f"orders over different alternative counts ({p.m} vs {q.m})")
    diff = [k for k in range(p.m) if p.ranking[k] != q.ranking[k]]
    if len(diff) != 2 or diff[1] != diff[0] + 1:
        return None
    k = diff[0]
    if p.ranking[k] == q.ranking[k + 1] and p.ranking[k + 1] == q.ranking[k]:
        return k
    return None


def is_adjacent(p: LinearOrder, q: LinearOrder) -> bool:
    return swapped_position(p, q) is not None


def swap_at(p: LinearOrder, k: int) -> LinearOrder:
    r = list(p.ranking)
    r[k], r[k + 1] = r[k + 1], r[k]
    return LinearOrder(tuple(r))


def adjacent_swaps(p: LinearOrder) -> list[LinearOrder]:
    """All ``m - 1`` orders one consecutive swap away from ``p``."""
    return [swap_at(p, k) for k in range(p.m - 1)]


def all_orders(m: int) -> list[LinearOrder]:
    """Every linear order over ``m`` alternatives, in lexicographic order."""
    return [LinearOrder(perm) for perm in permutations(range(m))]


def orders_from_rankings(rankings: Sequence[Sequence[int]]) -> list[LinearOrder]:
    return [LinearOrder(tuple(r)) for r in rankings]
