"""Walk through the mod-2 shadow of the two-generator proof at g = 29.

Every curve is a vector in Z_2^g, every Dehn twist acts as a transvection,
and the rotation T permutes the crosscaps cyclically.  A proof step such as
"conjugating by T^-4 moves gm10, c2, f18, c12 to gm6, a1, f14, c10" becomes a
statement about vectors and matrices that can be checked exactly.

Run: python demos/01_homology_shadow.py
"""

from __future__ import annotations

from twistgen.proofscripts import Context, builtin_script, run_script
from twistgen.surface import GenusModel
from twistgen.words import Environment, evaluate_mod2, parse_word


def main() -> None:
    model = GenusModel(29)
    ctx = Context.standard(model)
    cat = ctx.catalog

    print(f"{model}: T cycles {model.cycle_length} crosscaps")
    for name in ("a1", "a2", "b1", "c12", "f18", "gm10"):
        print(f"  [{name}] = {cat[name]}")

    # T^-4 as a matrix, applied to four curve classes
    env = Environment(model)
    t4 = evaluate_mod2(parse_word("T^-4"), env, cat, ctx.spec)
    for src, dst in (("gm10", "gm6"), ("c2", "a1"), ("f18", "f14"), ("c12", "c10")):
        got = t4 @ cat[src]
        print(f"  T^-4 [{src}] = {got}  (expected [{dst}] = {cat[dst]}, {'ok' if got == cat[dst] else 'MISMATCH'})")

    # the same facts, and the rest of the chain, as a proof script
    report = run_script(builtin_script("t29", 29), ctx)
    print()
    print(report.to_text())


if __name__ == "__main__":
    main()
