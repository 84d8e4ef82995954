from __future__ import annotations

from dataclasses import dataclass
from typing import Any


@dataclass(frozen=True)
class Verdict:
    """Two-state decision with a certificate.

    ``witness`` is a JSON-compatible dict with a ``kind`` key; indices inside it
    are zero-based (preferences, alternatives and voters alike).  A failing
    verdict always carries one.
    """

    holds: bool
    witness: dict[str, Any] | None = None

    def __post_init__(self) -> None:
        if not self.holds and self.witness is None:
            raise ValueError("a failing verdict needs a witness")

    def __bool__(self) -> bool:
        return self.holds

    @classmethod
    def ok(cls, witness: dict[str, Any] | None = None) -> "Verdict":
        return cls(True, witness)

    @classmethod
    def fail(cls, kind: str, **fields: Any) -> "Verdict":
        return cls(False, {"kind": kind, **fields})
