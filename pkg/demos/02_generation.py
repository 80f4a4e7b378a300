"""Exact group orders: the three-generator set at g = 9 against the Omori twists.

The image of the twist subgroup in GL(g, 2) is predicted in closed form
(|Sp(2h, 2)| for odd g, times 2^(2h+1) for even g).  A Schreier-Sims chain
computes the order of any generated group exactly; for tiny groups a plain
breadth-first closure gives the same count by a different route.

Run: python demos/02_generation.py
"""

from __future__ import annotations

import time

from twistgen.f2group import brute_closure, bsgs_order, same_group, stabilizer_chain, target_order
from twistgen.proofscripts import Context, generator_matrices
from twistgen.proofscripts.steps import omori_matrices
from twistgen.surface import GenusModel


def main() -> None:
    ctx5 = Context.standard(GenusModel(5))
    gens5 = omori_matrices(ctx5)
    print(f"g=5: Omori image has {bsgs_order(gens5)} elements by BSGS, "
          f"{brute_closure(gens5)} by closure, {target_order(5)} predicted")

    for g, sid in ((8, "t8even"), (9, "t9odd")):
        ctx = Context.standard(GenusModel(g))
        start = time.perf_counter()
        gens = generator_matrices(sid, g, ctx)
        chain = stabilizer_chain(gens)
        same = same_group(gens, omori_matrices(ctx))
        print(f"g={g}: <{sid}> has order {chain.order} (predicted {target_order(g)}), "
              f"orbits {chain.orbit_sizes}, equals Omori image: {same}  "
              f"[{time.perf_counter() - start:.1f} s]")


if __name__ == "__main__":
    main()
