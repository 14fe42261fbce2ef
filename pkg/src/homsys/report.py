"""Verdict records shared by the checkers and the command line."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Verdict:
    anchor: str
    passed: bool
    witness: Any = None
    dims: Any = None
    detail: str = ""

    def to_json(self) -> dict:
        out = {"anchor": self.anchor, "pass": self.passed}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.dims is not None:
            out["dims"] = self.dims
        if self.detail:
            out["detail"] = self.detail
        return out

    @classmethod
    def from_json(cls, d: dict) -> "Verdict":
        return cls(d["anchor"], d["pass"], d.get("witness"), d.get("dims"), d.get("detail", ""))


@dataclass
class Report:
    verdicts: list = field(default_factory=list)

    def add(self, anchor: str, passed: bool, witness=None, dims=None, detail: str = "") -> Verdict:
        v = Verdict(anchor, bool(passed), witness, dims, detail)
        self.verdicts.append(v)
        return v

    def extend(self, other: "Report"):
        self.verdicts.extend(other.verdicts)

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def __getitem__(self, anchor: str) -> Verdict:
        for v in self.verdicts:
            if v.anchor == anchor:
                return v
        raise KeyError(anchor)

    def failures(self) -> list:
        return [v for v in self.verdicts if not v.passed]
