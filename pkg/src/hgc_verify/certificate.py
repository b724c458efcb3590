"""Certificate records shared by all verification routines."""

from dataclasses import dataclass, field

PASS, FAIL, UNSUPPORTED = "PASS", "FAIL", "UNSUPPORTED"


@dataclass
class Certificate:
    """Outcome of one checked statement.

    ``category`` is ``"check"`` for ordinary certificates and
    ``"claim-discrepancy"`` for the displayed witness checks whose failure is
    reported rather than gated.  ``timing_ms`` is kept out of :meth:`to_dict`
    so records are byte-stable across runs.
    """

    id: str
    statement: str
    verdict: str
    inputs: dict = field(default_factory=dict)
    witness: str = None
    ord_table: dict = None
    details: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    category: str = "check"
    timing_ms: float = 0.0

    @property
    def passed(self):
        return self.verdict == PASS

    def to_dict(self):
        d = {
            "id": self.id,
            "statement": self.statement,
            "verdict": self.verdict,
            "inputs": self.inputs,
            "category": self.category,
        }
        if self.witness is not None:
            d["witness"] = self.witness
        if self.ord_table is not None:
            d["ord_table"] = self.ord_table
        if self.details:
            d["details"] = self.details
        if self.notes:
            d["notes"] = list(self.notes)
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(
            id=d["id"], statement=d["statement"], verdict=d["verdict"],
            inputs=d.get("inputs", {}), witness=d.get("witness"), ord_table=d.get("ord_table"),
            details=d.get("details", {}), notes=list(d.get("notes", [])),
            category=d.get("category", "check"),
        )


def verdict(ok: bool) -> str:
    return PASS if ok else FAIL
