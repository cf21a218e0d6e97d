"""Check reports: one entry per verified identity, deterministic text and
JSON renderings, and exit-status aggregation for the CLI."""

import json
from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
SKIP = "skipped"


@dataclass
class CheckItem:
    check_id: str
    status: str
    witness: dict | None = None
    defect: str | None = None
    note: str | None = None

    def as_dict(self):
        out = {"check": self.check_id, "status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.defect is not None:
            out["defect"] = self.defect
        if self.note is not None:
            out["note"] = self.note
        return out


@dataclass
class Report:
    title: str
    items: list = field(default_factory=list)

    def add(self, check_id, ok, witness=None, defect=None, note=None):
        self.items.append(
            CheckItem(check_id, PASS if ok else FAIL, witness=witness, defect=defect, note=note)
        )
        return ok

    def add_skip(self, check_id, note=None):
        self.items.append(CheckItem(check_id, SKIP, note=note))

    def extend(self, other):
        self.items.extend(other.items)

    @property
    def passed(self) -> bool:
        return all(item.status != FAIL for item in self.items)

    def counts(self):
        c = {PASS: 0, FAIL: 0, SKIP: 0}
        for item in self.items:
            c[item.status] += 1
        return c

    def failures(self):
        return [item for item in self.items if item.status == FAIL]

    def as_dict(self):
        c = self.counts()
        return {
            "title": self.title,
            "summary": {"pass": c[PASS], "fail": c[FAIL], "skipped": c[SKIP]},
            "items": [item.as_dict() for item in self.items],
        }

    def render(self) -> str:
        lines = [f"== {self.title} =="]
        for item in self.items:
            line = f"  [{item.status:>7}] {item.check_id}"
            if item.defect is not None:
                line += f"  defect={item.defect}"
            if item.witness:
                line += f"  witness={json.dumps(item.witness, sort_keys=True)}"
            if item.note:
                line += f"  ({item.note})"
            lines.append(line)
        c = self.counts()
        lines.append(f"  -- {c[PASS]} pass, {c[FAIL]} fail, {c[SKIP]} skipped")
        return "\n".join(lines)
