"""Constructive change-of-coordinates words for the commutator factorizations.

Given source classes ``u_1..u_n`` and targets ``v_1..v_n`` with matching
pairwise form values, build a product of twists sending each ``u_i`` to
``v_i`` modulo 2.  Pairs are placed one at a time.  A twist about ``z``
moves ``u`` to ``v`` when ``z = u + v`` and ``<u, v> = 1``; when
``<u, v> = 0`` the move is routed through a bridge ``w`` with
``<u, w> = <w, v> = 1``.  Every move is orthogonal to the targets already
placed, so earlier pairs stay put.
"""

from __future__ import annotations

from typing import Sequence

from ..f2linalg import BitVec, parity, transvect
from ..surface import CurveCatalog, CurveId
from ..words import Atom, ClassTwist, Word


class ConjugatorError(ValueError):
    pass


def _solve_affine(rows: list[tuple[int, int]], g: int) -> int | None:
    """Least solution (free variables zero) of ``<row, w> = rhs`` over GF(2)."""
    pivots: list[tuple[int, int, int]] = []  # (pivot bit, row, rhs)
    for row, rhs in rows:
        for bit, prow, prhs in pivots:
            if row >> bit & 1:
                row ^= prow
                rhs ^= prhs
        if row == 0:
            if rhs:
                return None
            continue
        bit = row.bit_length() - 1
        # keep the echelon form reduced
        pivots = [(b, r ^ row, s ^ rhs) if r >> bit & 1 else (b, r, s) for b, r, s in pivots]
        pivots.append((bit, row, rhs))
    w = 0
    for bit, row, rhs in pivots:
        # reduced form: row = pivot bit + free bits only, free bits set to zero
        if rhs:
            w |= 1 << bit
    return w


def _atom(z: int, g: int, named: dict[int, CurveId]) -> Atom:
    cid = named.get(z)
    if cid is not None:
        return Atom(cid)
    return Atom(ClassTwist(tuple(BitVec(g, z).indices)))


def find_conjugator(pairs: Sequence[tuple[BitVec, BitVec]], catalog: CurveCatalog | None = None) -> Word:
    """A twist word whose mod-2 action sends each source class to its target."""
    if not pairs:
        return Word()
    g = pairs[0][0].dim
    for u, v in pairs:
        if u.dim != g or v.dim != g:
            raise ConjugatorError("classes of different dimensions")
        if not u or not v or u.weight % 2 or v.weight % 2:
            raise ConjugatorError("pairs not equivalent: classes must be nonzero and two-sided")
    for i, (ui, vi) in enumerate(pairs):
        for uj, vj in pairs[i + 1:]:
            if parity(ui.bits & uj.bits) != parity(vi.bits & vj.bits):
                raise ConjugatorError("pairs not equivalent: pairwise form values differ")

    named: dict[int, CurveId] = {}
    candidates: list[int] = []
    if catalog is not None:
        for cid, cls in catalog.sorted_items():
            named.setdefault(cls.bits, cid)
            candidates.append(cls.bits)
        # index-lexicographic order of the class, ties broken by curve name
        candidates = sorted(set(candidates), key=lambda b: BitVec(g, b).indices)

    ones = (1 << g) - 1
    moves: list[int] = []
    placed: list[int] = []

    def apply_moves(x: int) -> int:
        for z in moves:
            x = transvect(z, x)
        return x

    for (u, v) in pairs:
        cur = apply_moves(u.bits)
        t = v.bits
        if cur != t:
            if parity(cur & t):
                moves.append(cur ^ t)
            else:
                want = [(p, parity(t & p)) for p in placed]
                w = next(
                    (c for c in candidates
                     if parity(c) == 0 and parity(c & cur) and parity(c & t)
                     and all(parity(c & p) == r for p, r in want)),
                    None,
                )
                if w is None:
                    w = _solve_affine([(ones, 0), (cur, 1), (t, 1)] + want, g)
                if w is None:
                    raise ConjugatorError(
                        f"no bridge vector from {BitVec(g, cur)} to {v} orthogonal to placed targets")
                moves.append(cur ^ w)
                moves.append(w ^ t)
        placed.append(t)

    # rightmost atom acts first
    word = Word(tuple(_atom(z, g, named) for z in reversed(moves)))
    for u, v in pairs:
        if apply_moves(u.bits) != v.bits:  # pragma: no cover - self-check
            raise ConjugatorError(f"constructed word fails on {u} -> {v}")
    return word
