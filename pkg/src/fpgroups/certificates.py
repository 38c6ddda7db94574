"""Certificates: a claim, how it is backed, and the input it refers to."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

CERTIFIED = "certified"
THEOREM_CITED = "theorem-cited"
ASSERTED = "asserted"
UNKNOWN = "unknown"
REFUTED = "refuted"
STATUSES = (CERTIFIED, THEOREM_CITED, ASSERTED, UNKNOWN, REFUTED)


@dataclass
class Certificate:
    """A checked (or cited, or assumed) fact about an input presentation.

    ``bound`` is the search bound the claim was checked up to; exact checks
    that involve no search use 0.
    """

    claim: str
    status: str
    bound: int = 0
    evidence: Any = None
    input_digest: str = ""
    strategy: str = ""
    runtime_ms: int = 0
    name: str = ""
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown certificate status {self.status!r}")

    @property
    def ok(self) -> bool:
        return self.status == CERTIFIED

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "claim": self.claim,
            "bound": self.bound,
            "status": self.status,
            "strategy": self.strategy,
            "runtime_ms": self.runtime_ms,
            "input_digest": self.input_digest,
            "evidence": self.evidence,
        }
        if self.extra:
            out["extra"] = self.extra
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "Certificate":
        return cls(
            claim=obj["claim"],
            status=obj["status"],
            bound=obj.get("bound", 0),
            evidence=obj.get("evidence"),
            input_digest=obj.get("input_digest", ""),
            strategy=obj.get("strategy", ""),
            runtime_ms=obj.get("runtime_ms", 0),
            name=obj.get("name", ""),
            extra=obj.get("extra", {}),
        )


def cited(name: str, claim: str, citation: str, digest: str = "") -> Certificate:
    return Certificate(claim=claim, status=THEOREM_CITED, evidence={"citation": citation}, input_digest=digest, name=name)


def asserted(name: str, claim: str, flag: str, digest: str = "") -> Certificate:
    return Certificate(claim=claim, status=ASSERTED, evidence={"flag": flag}, input_digest=digest, name=name)
