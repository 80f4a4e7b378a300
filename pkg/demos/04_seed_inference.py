"""Where the seed classes come from, and how a wrong catalog is caught.

Two classes, a2 and f1, fix every other family through the action of T;
the chain curves are determined by the crosscap layout alone.  The
constraint suite collects every class identity that the proof scripts rely
on, so a corrupted catalog fails by name, and a search over even-weight
candidates lists every seed pair the constraints allow.

Run: python demos/04_seed_inference.py
"""

from __future__ import annotations

from dataclasses import replace

from twistgen.f2linalg import BitVec
from twistgen.surface import CurveId, GenusModel, build_catalog
from twistgen.validation import infer_seed_classes, validate_catalog


def main() -> None:
    model = GenusModel(7, "reflection")
    found = infer_seed_classes(model)
    print(f"{model}: {len(found)} consistent seed pairs")
    for c in found:
        mark = "  <- shipped default" if c.default else ""
        print(f"  a2 = {c.a2}  f1 = {c.f1}  ({c.origin}){mark}")

    model = GenusModel(29)
    cat = build_catalog(model)
    print(f"\n{model}: default catalog validates: {validate_catalog(cat).passed}")
    bad = replace(cat, classes={**cat.classes, CurveId("B", 3): BitVec.from_indices(29, [6, 8])})
    report = validate_catalog(bad)
    print(f"with [b3] replaced by x6+x8: {len(report.failures)} constraints fail, e.g.")
    for r in report.failures[:4]:
        print(f"  {r.kind:12s} {r.name}  {r.detail}")


if __name__ == "__main__":
    main()
