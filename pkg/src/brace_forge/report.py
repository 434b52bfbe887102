"""Verdict records and the line-oriented report format."""
from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Verdict:
    name: str
    ok: bool
    witness: tuple[int, ...] | None = None
    # informational verdicts (two-sided, enhanced, ...) do not make a report fail
    informational: bool = False

    def __post_init__(self):
        if not self.ok and self.witness is None:
            raise ValueError(f"false verdict {self.name!r} needs a witness")


@dataclass
class Report:
    subject: str
    verdicts: list[Verdict] = field(default_factory=list)
    exhaustive: bool = True
    elapsed: float = 0.0

    def add(self, name: str, witness=None, informational: bool = False) -> bool:
        """Record a verdict; ``witness is None`` means the check passed."""
        if witness is not None:
            witness = tuple(int(x) for x in witness)
        self.verdicts.append(Verdict(name, witness is None, witness, informational))
        return witness is None

    def __getitem__(self, name: str) -> Verdict:
        for v in self.verdicts:
            if v.name == name:
                return v
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(v.name == name for v in self.verdicts)

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.verdicts if not v.informational)

    def __bool__(self) -> bool:
        return self.ok

    def first_failure(self) -> Verdict | None:
        for v in self.verdicts:
            if not v.ok and not v.informational:
                return v
        return None

    def extend(self, other: Report, prefix: str = "") -> None:
        for v in other.verdicts:
            self.verdicts.append(Verdict(prefix + v.name, v.ok, v.witness, v.informational))
        self.exhaustive = self.exhaustive and other.exhaustive

    def lines(self, timing: bool = False) -> list[str]:
        out = []
        for v in self.verdicts:
            line = f"{self.subject} {v.name}: {'ok' if v.ok else 'FAIL'}"
            if not v.ok:
                line += " witness=" + ",".join(map(str, v.witness))
            out.append(line)
        if not self.exhaustive:
            out.append(f"{self.subject}: non-exhaustive (sampled)")
        if timing:
            out.append(f"{self.subject}: {self.elapsed:.3f}s")
        return out

    def records(self) -> list[str]:
        return [
            json.dumps(
                {
                    "subject": self.subject,
                    "verdict": v.name,
                    "ok": v.ok,
                    "witness": list(v.witness) if v.witness else None,
                    "exhaustive": self.exhaustive,
                },
                sort_keys=True,
            )
            for v in self.verdicts
        ]
