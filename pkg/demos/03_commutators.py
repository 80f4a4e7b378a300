"""Generators as commutators: a conjugator search at g = 44 and the rotation identity.

A product X Z^-1 Y W^-1 of twists equals the commutator [XY, phi] as soon as
phi carries the curves of X, Y to those of W, Z.  At the homology level phi
only has to move the classes, so a short product of transvections found by
linear algebra is enough.  The rotation itself is the commutator of a power
of T with the reflection rho1, which holds exactly on the integer lattice.

Run: python demos/03_commutators.py
"""

from __future__ import annotations

from twistgen.proofscripts import Context, builtin_script, find_conjugator, run_script
from twistgen.surface import GenusModel
from twistgen.words import Environment, commutator, evaluate_mod2, evaluate_signed, format_word, parse_word


def main() -> None:
    model = GenusModel(44)
    ctx = Context.standard(model)
    cat = ctx.catalog
    phi = find_conjugator([(cat["gm10"], cat["d33"]), (cat["f18"], cat["c2"])], cat)
    print(f"g=44: phi = {format_word(phi)}")
    env = Environment(model).define("PHI", phi)
    lhs = commutator(parse_word("G10 * F18"), parse_word("$PHI"))
    rhs = parse_word("G10 * C2^-1 * F18 * D33^-1")
    ok = evaluate_mod2(lhs, env, cat, ctx.spec) == evaluate_mod2(rhs, env, cat, ctx.spec)
    print(f"  [{format_word(parse_word('G10 * F18'))}, phi] == {format_word(rhs)}: {ok}")

    for g in (12, 13):
        m = GenusModel(g, "reflection")
        spec = Context.standard(m).spec
        w = commutator(parse_word(f"T^{m.half_turn}"), parse_word("R1"))
        print(f"g={g}: [T^{m.half_turn}, R1] == T over Z: {evaluate_signed(w, spec) == spec.T_signed}")

    report = run_script(builtin_script("com4k", 44, closing=False), ctx)
    print()
    print(report.to_text())


if __name__ == "__main__":
    main()
