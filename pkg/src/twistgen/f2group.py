"""Exact computation with matrix groups over GF(2).

Groups act on the nonzero vectors of Z_2^g.  A :class:`StabilizerChain` is
built by the deterministic Schreier-Sims algorithm; each level stores a
Schreier vector (the generator that first reached each orbit point), and
coset representatives are rebuilt by walking back to the base point.
Small orbits memoise their representatives.

Base points are the first vector moved by some strong generator, in the
order of the packed integer value (``x1 < x2 < x1+x2 < x3 ...``).  The
first moved vector of a linear map in that order is always a basis vector.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from math import prod
from typing import Iterable, Sequence

from .f2linalg import BitMat, apply_cols, inverse_cols, mul_cols, preserves_form

# g = 13 is the largest genus whose generation check stays under a minute
DEFAULT_CAP = 13
CAP_ENV = "TWISTGEN_CAP"
# orbits at most this large keep explicit coset representatives
MEMO_LIMIT = 1 << 15
# rough CPython cost of one Schreier-vector entry (dict slot, int key, int value)
BYTES_PER_ENTRY = 100

Cols = tuple[int, ...]


class GenusCapError(RuntimeError):
    """The requested dimension exceeds the chain-construction cap."""


class ClosureCapError(RuntimeError):
    pass


def genus_cap() -> int:
    raw = os.environ.get(CAP_ENV)
    if raw is None:
        return DEFAULT_CAP
    try:
        return int(raw)
    except ValueError:
        raise GenusCapError(f"{CAP_ENV}={raw!r} is not an integer") from None


def memory_estimate(g: int) -> tuple[int, float]:
    """(orbit-array entries, GB) for a chain whose top orbit is all of Z_2^g."""
    entries = (1 << g) - 1
    return entries, entries * BYTES_PER_ENTRY / 1e9


def check_cap(g: int, cap: int | None = None, force: bool = False) -> None:
    cap = genus_cap() if cap is None else cap
    if g > cap and not force:
        entries, gb = memory_estimate(g)
        raise GenusCapError(
            f"g={g} exceeds the BSGS cap {cap}: orbit arrays up to {entries:,} entries "
            f"(about {gb:.1f} GB); rerun with --force or raise {CAP_ENV}"
        )


@dataclass(frozen=True)
class GenSet:
    dim: int
    gens: tuple[BitMat, ...]

    def __post_init__(self) -> None:
        for m in self.gens:
            if m.dim != self.dim:
                raise ValueError(f"generator of dimension {m.dim} in a {self.dim}-dimensional set")
            inverse_cols(m.cols, m.dim)  # raises if singular
            if not preserves_form(m):
                raise ValueError("generator does not preserve the mod-2 form")

    @classmethod
    def of(cls, gens: Iterable[BitMat], dim: int | None = None) -> GenSet:
        gens = tuple(gens)
        if dim is None:
            if not gens:
                raise ValueError("empty generating set needs an explicit dimension")
            dim = gens[0].dim
        return cls(dim, gens)


def _as_genset(gens: GenSet | Sequence[BitMat], dim: int | None = None) -> GenSet:
    return gens if isinstance(gens, GenSet) else GenSet.of(gens, dim)


def _identity(g: int) -> Cols:
    return tuple(1 << i for i in range(g))


def _first_moved(cols: Cols) -> int | None:
    for i, c in enumerate(cols):
        if c != 1 << i:
            return 1 << i
    return None


@dataclass
class _Level:
    point: int
    gens: list[Cols] = field(default_factory=list)
    inv: list[Cols] = field(default_factory=list)
    # point -> index of the generator that reached it (-1 at the base point)
    svec: dict[int, int] = field(default_factory=dict)
    memo: dict[int, tuple[Cols, Cols]] = field(default_factory=dict)
    checked: set[tuple[int, int]] = field(default_factory=set)
    _frontier: int = 0

    def add(self, h: Cols, g: int) -> None:
        self.gens.append(h)
        self.inv.append(inverse_cols(h, g))

    def grow(self) -> None:
        """Extend the orbit using every generator, keeping earlier entries."""
        if not self.svec:
            self.svec[self.point] = -1
        queue = deque(self.svec)
        while queue:
            p = queue.popleft()
            for i, s in enumerate(self.gens):
                q = apply_cols(s, p)
                if q not in self.svec:
                    self.svec[q] = i
                    queue.append(q)

    def rep(self, p: int, g: int) -> tuple[Cols, Cols]:
        """(u, u^-1) with u(point) = p."""
        hit = self.memo.get(p)
        if hit is not None:
            return hit
        word = []
        q = p
        while True:
            i = self.svec[q]
            if i < 0:
                break
            word.append(i)
            q = apply_cols(self.inv[i], q)
        u = _identity(g)
        uinv = _identity(g)
        for i in reversed(word):
            u = mul_cols(self.gens[i], u)
            uinv = mul_cols(uinv, self.inv[i])
        if len(self.svec) <= MEMO_LIMIT:
            self.memo[p] = (u, uinv)
        return u, uinv


class StabilizerChain:
    """Base and strong generating set for a subgroup of GL(g, 2)."""

    def __init__(self, gens: GenSet | Sequence[BitMat], *, cap: int | None = None,
                 force: bool = False, dim: int | None = None):
        gs = _as_genset(gens, dim)
        check_cap(gs.dim, cap, force)
        self.dim = gs.dim
        self.levels: list[_Level] = []
        for m in gs.gens:
            self._insert(m.cols)

    # -- construction -------------------------------------------------------

    def _sift(self, h: Cols, start: int = 0) -> tuple[Cols, int]:
        g = self.dim
        for k in range(start, len(self.levels)):
            lv = self.levels[k]
            b = apply_cols(h, lv.point)
            if b not in lv.svec:
                return h, k
            _, uinv = lv.rep(b, g)
            h = mul_cols(uinv, h)
        return h, len(self.levels)

    def _add_strong(self, h: Cols, lo: int, hi: int) -> None:
        """Add ``h`` to levels ``lo..hi``, creating level ``hi`` if needed."""
        if hi == len(self.levels):
            self.levels.append(_Level(_first_moved(h)))
        for k in range(lo, hi + 1):
            self.levels[k].add(h, self.dim)

    def _insert(self, h: Cols) -> None:
        res, j = self._sift(h)
        if _first_moved(res) is None:
            return
        self._add_strong(res, 0, j)
        self._complete(j)

    def _complete(self, top: int) -> None:
        g = self.dim
        i = top
        while i >= 0:
            lv = self.levels[i]
            lv.grow()
            jumped = False
            for p in list(lv.svec):
                for si in range(len(lv.gens)):
                    if (p, si) in lv.checked:
                        continue
                    lv.checked.add((p, si))
                    s = lv.gens[si]
                    u, _ = lv.rep(p, g)
                    _, vinv = lv.rep(apply_cols(s, p), g)
                    sch = mul_cols(vinv, mul_cols(s, u))
                    res, j = self._sift(sch, i + 1)
                    if _first_moved(res) is not None:
                        self._add_strong(res, i + 1, j)
                        i = j
                        jumped = True
                        break
                if jumped:
                    break
            if not jumped:
                i -= 1

    # -- queries --------------------------------------------------------------

    @property
    def base(self) -> list[int]:
        return [lv.point for lv in self.levels]

    @property
    def orbit_sizes(self) -> list[int]:
        return [len(lv.svec) for lv in self.levels]

    @property
    def order(self) -> int:
        return prod(self.orbit_sizes)

    @property
    def strong_generators(self) -> list[BitMat]:
        seen: dict[Cols, None] = {}
        for lv in self.levels:
            for h in lv.gens:
                seen.setdefault(h)
        return [BitMat(self.dim, h) for h in seen]

    def contains(self, m: BitMat) -> bool:
        if m.dim != self.dim:
            raise ValueError(f"dimension mismatch: {m.dim} != {self.dim}")
        res, j = self._sift(m.cols)
        return j == len(self.levels) and _first_moved(res) is None


def stabilizer_chain(gens: GenSet | Sequence[BitMat], *, cap: int | None = None,
                     force: bool = False, dim: int | None = None) -> StabilizerChain:
    return StabilizerChain(gens, cap=cap, force=force, dim=dim)


def bsgs_order(gens: GenSet | Sequence[BitMat], *, cap: int | None = None,
               force: bool = False, dim: int | None = None) -> int:
    return StabilizerChain(gens, cap=cap, force=force, dim=dim).order


def membership(m: BitMat, chain: StabilizerChain) -> bool:
    return chain.contains(m)


def brute_closure(gens: GenSet | Sequence[BitMat], cap: int = 10**6, *, dim: int | None = None) -> int:
    """Element count of the generated group by breadth-first multiplication."""
    gs = _as_genset(gens, dim)
    start = _identity(gs.dim)
    cols = [m.cols for m in gs.gens]
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for s in cols:
            y = mul_cols(s, x)
            if y not in seen:
                if len(seen) >= cap:
                    raise ClosureCapError(f"closure exceeds cap {cap}")
                seen.add(y)
                queue.append(y)
    return len(seen)


def sp_order(h: int) -> int:
    """|Sp(2h, 2)|."""
    return 2 ** (h * h) * prod(4**i - 1 for i in range(1, h + 1))


def target_order(g: int) -> int:
    """Order of the mod-2 image of the twist subgroup predicted for genus g."""
    if g < 3:
        raise ValueError(f"target order needs g >= 3, got {g}")
    if g % 2:
        return sp_order((g - 1) // 2)
    h = (g - 2) // 2
    return sp_order(h) * 2 ** (2 * h + 1)


def same_group(a: GenSet | Sequence[BitMat], b: GenSet | Sequence[BitMat], *,
               cap: int | None = None, force: bool = False) -> bool:
    """Whether the two sets generate the same group (each sifts through the other's chain)."""
    ga, gb = _as_genset(a), _as_genset(b)
    if ga.dim != gb.dim:
        raise ValueError(f"dimension mismatch: {ga.dim} != {gb.dim}")
    check_cap(ga.dim, cap, force)
    ca = StabilizerChain(ga, cap=cap, force=force)
    cb = StabilizerChain(gb, cap=cap, force=force)
    return all(cb.contains(m) for m in ga.gens) and all(ca.contains(m) for m in gb.gens)
