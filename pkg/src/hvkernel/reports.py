"""Verification report container shared by the verifiers and probes."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class VerificationReport:
    passed: bool = True
    checked: int = 0
    counterexample: dict | None = None
    info: dict = field(default_factory=dict)

    def tick(self, n=1):
        self.checked += n

    def fail(self, **details):
        """Record the first counterexample; later ones are ignored."""
        if self.passed:
            self.passed = False
            self.counterexample = details

    def merge(self, other, label=None):
        self.checked += other.checked
        if not other.passed and self.passed:
            cx = dict(other.counterexample or {})
            if label is not None:
                cx.setdefault("suite", label)
            self.passed = False
            self.counterexample = cx

    def __bool__(self):
        return self.passed

    def to_json(self):
        out = {"pass": self.passed, "checked": self.checked,
               "counterexample": self.counterexample}
        if self.info:
            out["info"] = self.info
        return out
