"""Free words over twists, the rotation T and the reflections, and their
evaluation in the mod-2 and signed integer representations.

Grammar (case-sensitive)::

    word  := atom (('*' | whitespace) atom)*
    atom  := NAME ('^' signed-int)?
    NAME  := A1 | A2 | B<i> | C<i> | D<i> | E | F<i> | G<i> | U<i>
           | T | R1 | R2 | $<label> | V[<i>,<j>,...]

``G<i>`` (also spelled ``Gm<i>``) is the gamma family.  ``V[i,j,...]`` is a
twist about some two-sided curve in the class ``x_i + x_j + ...``; it is
used for conjugators built from homology data alone.

Words compose functionally: the rightmost atom acts first.
"""

from __future__ import annotations

import re
from functools import lru_cache
from dataclasses import dataclass, field
from typing import Iterable, Union

from .f2linalg import BitMat, BitVec, SignedPermMat, OneSidedClassError, apply_cols, parity
from .surface import CurveCatalog, CurveId, CurveIndexError, GenusModel, MappingClassSpec


class WordSyntaxError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.text = text
        self.pos = pos
        where = f" at position {pos} in {text!r}" if text else ""
        super().__init__(message + where)


class UnresolvedLabelError(KeyError):
    pass


class TwistNotSignedError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class ClassTwist:
    """Twist about an unnamed two-sided curve, known only by its mod-2 class."""

    indices: tuple[int, ...]

    @property
    def name(self) -> str:
        return "V[" + ",".join(map(str, self.indices)) + "]"


# Base of an atom: a named curve, an anonymous class, or one of
# "T", "R1", "R2", "$label".
Base = Union[CurveId, ClassTwist, str]


@dataclass(frozen=True)
class Atom:
    base: Base
    exp: int = 1

    def __post_init__(self) -> None:
        if self.exp == 0:
            raise ValueError("atom exponent must be nonzero")

    @property
    def is_twist(self) -> bool:
        return isinstance(self.base, (CurveId, ClassTwist))

    @property
    def label(self) -> str | None:
        if isinstance(self.base, str) and self.base.startswith("$"):
            return self.base[1:]
        return None

    def __str__(self) -> str:
        name = _base_text(self.base)
        return name if self.exp == 1 else f"{name}^{self.exp}"


def _base_text(base: Base) -> str:
    if isinstance(base, CurveId):
        if base.family == "E":
            return "E"
        return f"{base.family}{base.index}"
    if isinstance(base, ClassTwist):
        return base.name
    return base


@dataclass(frozen=True)
class Word:
    atoms: tuple[Atom, ...] = ()

    def __mul__(self, other: Word) -> Word:
        return Word(self.atoms + other.atoms)

    def __len__(self) -> int:
        return len(self.atoms)

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"


EMPTY = Word()


def word(*items: Atom | Word) -> Word:
    atoms: list[Atom] = []
    for it in items:
        atoms.extend(it.atoms if isinstance(it, Word) else (it,))
    return Word(tuple(atoms))


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"""
    (?P<name>\$[A-Za-z_][A-Za-z0-9_]*|V\[[0-9,\s]*\]|R[12]|Gm\d+|[A-Z]\d*)
    (?:\^(?P<exp>[+-]?\d+))?
    """,
    re.VERBOSE,
)


def _parse_name(name: str, text: str, pos: int) -> Base:
    if name in ("T", "R1", "R2") or name.startswith("$"):
        return name
    if name.startswith("V["):
        body = name[2:-1].replace(" ", "")
        idx = tuple(sorted(int(t) for t in body.split(",") if t))
        if not idx or idx[0] < 1 or len(set(idx)) != len(idx):
            raise WordSyntaxError(f"bad class twist {name!r}", text, pos)
        return ClassTwist(idx)
    if name.startswith("Gm"):
        fam, num = "G", name[2:]
    else:
        fam, num = name[0], name[1:]
    if fam not in ("A", "B", "C", "D", "E", "F", "G", "U"):
        raise WordSyntaxError(f"unknown curve family {name!r}", text, pos)
    if fam == "E":
        if num:
            raise WordSyntaxError("E takes no index", text, pos)
        return CurveId("E")
    if not num:
        raise WordSyntaxError(f"{name!r} needs an index", text, pos)
    if int(num) == 0:
        raise WordSyntaxError(f"index 0 in {name!r}", text, pos)
    if fam == "A" and int(num) > 2:
        raise WordSyntaxError(f"no curve {name!r}", text, pos)
    return CurveId(fam, int(num))


def parse_word(text: str) -> Word:
    atoms = []
    pos = 0
    n = len(text)
    expect_atom = True
    while pos < n:
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch == "*":
            if expect_atom:
                raise WordSyntaxError("unexpected '*'", text, pos)
            expect_atom = True
            pos += 1
            continue
        if ch == "1" and expect_atom and not atoms and text.strip() == "1":
            return EMPTY
        m = _TOKEN.match(text, pos)
        if not m:
            raise WordSyntaxError(f"unexpected {text[pos:pos + 8]!r}", text, pos)
        end = m.end()
        if end < n and (text[end].isalnum() or text[end] in "[$^"):
            raise WordSyntaxError(f"unknown name {text[pos:end + 1]!r}", text, pos)
        base = _parse_name(m.group("name"), text, pos)
        exp = int(m.group("exp")) if m.group("exp") else 1
        if exp == 0:
            raise WordSyntaxError("zero exponent", text, pos)
        atoms.append(Atom(base, exp))
        expect_atom = False
        pos = end
    if atoms and expect_atom:
        raise WordSyntaxError("dangling '*'", text, n)
    return Word(tuple(atoms))


def format_word(w: Word) -> str:
    return " * ".join(str(a) for a in w.atoms) if w.atoms else "1"


# ---------------------------------------------------------------------------
# free-group operations

def reduce(w: Word) -> Word:
    """Free reduction, merging adjacent powers of the same base."""
    stack: list[Atom] = []
    for a in w.atoms:
        if stack and stack[-1].base == a.base:
            e = stack[-1].exp + a.exp
            stack.pop()
            if e:
                stack.append(Atom(a.base, e))
        else:
            stack.append(a)
    return Word(tuple(stack))


def inverse(w: Word) -> Word:
    return Word(tuple(Atom(a.base, -a.exp) for a in reversed(w.atoms)))


def power(w: Word, n: int) -> Word:
    base = w if n >= 0 else inverse(w)
    return Word(base.atoms * abs(n))


def conjugate(w: Word, by: Word) -> Word:
    """``by * w * by^-1``."""
    return by * w * inverse(by)


def commutator(u: Word, v: Word) -> Word:
    """``[u, v] = u v u^-1 v^-1``."""
    return reduce(u * v * inverse(u) * inverse(v))


# ---------------------------------------------------------------------------
# environments and evaluation

@dataclass(frozen=True)
class Environment:
    """Ordered, append-only label definitions.

    The evaluation memo is shared between an environment and its
    extensions; labels are never redefined, so a memo entry keyed by
    (label, catalog) stays valid in every extension.
    """

    model: GenusModel
    definitions: tuple[tuple[str, Word], ...] = ()
    _memo: dict = field(default_factory=dict, compare=False, repr=False)

    def define(self, label: str, w: Word) -> Environment:
        if label in self.labels:
            raise ValueError(f"label ${label} already defined")
        for a in w.atoms:
            if a.label is not None and a.label not in self.labels:
                raise UnresolvedLabelError(f"${a.label} used before definition")
        return Environment(self.model, self.definitions + ((label, w),), self._memo)

    @property
    def labels(self) -> dict[str, Word]:
        return dict(self.definitions)

    def lookup(self, label: str) -> Word:
        for name, w in self.definitions:
            if name == label:
                return w
        raise UnresolvedLabelError(f"unresolved label ${label}")

    def expand(self, w: Word) -> Word:
        """Replace labels by their definitions, recursively."""
        out: list[Atom] = []
        for a in w.atoms:
            if a.label is None:
                out.append(a)
            else:
                out.extend(power(self.expand(self.lookup(a.label)), a.exp).atoms)
        return Word(tuple(out))


def _twist_class(base: CurveId | ClassTwist, cat: CurveCatalog) -> int:
    if isinstance(base, ClassTwist):
        g = cat.model.g
        if base.indices[-1] > g:
            raise CurveIndexError(f"{base.name} exceeds genus {g}")
        v = BitVec.from_indices(g, base.indices)
    else:
        v = cat.cls(base)
    if v.weight % 2:
        raise OneSidedClassError(f"one-sided class has no Dehn twist: {v}")
    return v.bits


class _Mod2Evaluator:
    def __init__(self, env: Environment, cat: CurveCatalog, spec: MappingClassSpec):
        if cat.model != env.model or spec.model != env.model:
            raise ValueError("environment, catalog and spec must share one genus model")
        self.env = env
        self.cat = cat
        self.spec = spec
        self.g = env.model.g
        self.key = cat.fingerprint

    def label(self, name: str) -> tuple[int, ...]:
        memo = self.env._memo
        key = (name, self.key, self.spec.rho1)
        hit = memo.get(key)
        if hit is None:
            hit = self.cols(self.env.lookup(name))
            memo[key] = hit
        return hit

    def cols(self, w: Word) -> tuple[int, ...]:
        cols = [1 << i for i in range(self.g)]
        for a in w.atoms:
            cols = self._right_mul(cols, a)
        return tuple(cols)

    def _right_mul(self, cols: list[int], a: Atom) -> list[int]:
        if a.is_twist:
            if a.exp % 2 == 0:
                return cols
            t = _twist_class(a.base, self.cat)
            # (M t_a) x_i = M x_i + a_i * M a
            ma = apply_cols(cols, t)
            return [c ^ ma if t >> i & 1 else c for i, c in enumerate(cols)]
        if a.base == "T":
            m = self.spec.T_mod2.cols
        elif a.base in ("R1", "R2"):
            m = self.spec.rho_mod2(int(a.base[1])).cols
        else:
            m = self.label(a.label)
        p = _mat_power(m, a.exp, self.g)
        return [apply_cols(cols, c) for c in p]


@lru_cache(maxsize=4096)
def _mat_power(cols: tuple[int, ...], e: int, g: int) -> tuple[int, ...]:
    from .f2linalg import inverse_cols, mul_cols

    base = cols if e > 0 else inverse_cols(cols, g)
    e = abs(e)
    result = tuple(1 << i for i in range(g))
    while e:
        if e & 1:
            result = mul_cols(result, base)
        e >>= 1
        if e:
            base = mul_cols(base, base)
    return result


def evaluate_mod2(w: Word, env: Environment, cat: CurveCatalog, spec: MappingClassSpec) -> BitMat:
    """Image of ``w`` in GL(g, 2); twists map to transvections."""
    return BitMat(env.model.g, _Mod2Evaluator(env, cat, spec).cols(w))


def evaluate_signed(w: Word, spec: MappingClassSpec, env: Environment | None = None) -> SignedPermMat:
    """Image of a twist-free word as a signed permutation matrix."""
    if env is not None:
        w = env.expand(w)
    result = SignedPermMat.identity(spec.model.g)
    for a in w.atoms:
        if a.is_twist:
            raise TwistNotSignedError(f"no integer representation for twists ({a})")
        if a.label is not None:
            raise UnresolvedLabelError(f"unresolved label ${a.label}")
        if a.base == "T":
            m = spec.T_signed
        else:
            m = spec.rho1 if a.base == "R1" else spec.rho2
            if m is None:
                raise ValueError(f"no reflections at g={spec.model.g}")
        result = result @ (m ** a.exp)
    return result


def twist_atoms(w: Word) -> Iterable[Atom]:
    return (a for a in w.atoms if a.is_twist)
