"""Seed-rule files: the classes given to a2 and f1, which the layout does not fix.

A rule covers a layout, a set of residues of g mod 4 and a genus range.
The shipped rules live in ``data/default_seeds.txt``; ``--seeds`` points the
CLI at a file in the same format.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .surface import LAYOUTS, GenusModel, SeedError, Seeds, parse_class

_RULE = re.compile(
    r"^(?P<layout>\w+)\s+(?P<res>[0-3](?:,[0-3])*)\s+(?P<lo>\d+)-(?P<hi>\d*)\s+"
    r"a2=(?P<a2>\S+)\s+f1=(?P<f1>\S+)\s+(?P<status>default|alt)\s*(?:\|\s*(?P<note>.*))?$"
)


@dataclass(frozen=True)
class SeedRule:
    layout: str
    residues: frozenset[int]
    lo: int
    hi: int | None
    a2: str
    f1: str
    status: str = "default"
    note: str = ""

    def matches(self, model: GenusModel) -> bool:
        return (model.layout == self.layout and model.residue in self.residues
                and model.g >= self.lo and (self.hi is None or model.g <= self.hi))

    def seeds(self, model: GenusModel) -> Seeds:
        return Seeds(parse_class(self.a2, model.g), parse_class(self.f1, model.g),
                     provenance=f"{self.status}: {self.note}" if self.note else self.status)


@dataclass(frozen=True)
class SeedRules:
    rules: tuple[SeedRule, ...]
    source: str = ""

    def matching(self, model: GenusModel) -> list[SeedRule]:
        return [r for r in self.rules if r.matches(model)]

    def instantiate(self, model: GenusModel) -> Seeds:
        for rule in self.matching(model):
            if rule.status == "default":
                return rule.seeds(model)
        raise SeedError(f"no default seed rule for {model} in {self.source or 'seed rules'}")

    def alternatives(self, model: GenusModel) -> list[Seeds]:
        return [r.seeds(model) for r in self.matching(model) if r.status == "alt"]


def parse_seed_rules(text: str, source: str = "") -> SeedRules:
    rules = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _RULE.match(line)
        if not m or m["layout"] not in LAYOUTS:
            raise SeedError(f"{source or 'seed rules'} line {lineno}: bad rule {line!r}")
        hi = int(m["hi"]) if m["hi"] else None
        rules.append(SeedRule(
            m["layout"], frozenset(int(r) for r in m["res"].split(",")), int(m["lo"]), hi,
            m["a2"], m["f1"], m["status"], (m["note"] or "").strip(),
        ))
    return SeedRules(tuple(rules), source)


def load_seed_rules(path: str | Path) -> SeedRules:
    path = Path(path)
    return parse_seed_rules(path.read_text(encoding="utf-8"), str(path))


@lru_cache(maxsize=1)
def default_seed_rules() -> SeedRules:
    text = resources.files("twistgen").joinpath("data/default_seeds.txt").read_text(encoding="utf-8")
    return parse_seed_rules(text, "default_seeds.txt")

