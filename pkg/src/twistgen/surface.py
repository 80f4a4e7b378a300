"""The genus-g surface model.

Crosscaps ``x_1 .. x_g`` are the basis of H_1(N_g; Z_2).  A two-sided curve
passing once through a set of crosscaps has the mod-2 class given by the sum
of those crosscaps; chain curves pass through two consecutive crosscaps.

Two rotation layouts are modelled:

``rotation``
    T rotates all crosscaps (odd g) or all but ``x_g`` (even g).
``reflection``
    T is the product of two reflections, ``T = rho2 rho1``; its crosscap
    cycle has length g, g-1, g-3, g-2 for g = 0, 1, 2, 3 mod 4 (shifted so
    that the cycle length is always odd) and the remaining crosscaps are
    fixed.

For g = 0, 1 mod 4 the two layouts coincide.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable

from .f2linalg import (
    BitMat,
    BitVec,
    SignedPermMat,
    dot_form,
    perm_sign,
    quotient_det,
    transvect,
    w_eigenvalue,
)

LAYOUTS = ("rotation", "reflection")
MIN_GENUS = 5


class GenusError(ValueError):
    pass


class CurveIndexError(ValueError):
    pass


@dataclass(frozen=True)
class GenusModel:
    g: int
    layout: str = "rotation"

    def __post_init__(self) -> None:
        if self.g < MIN_GENUS:
            raise GenusError(f"unsupported genus {self.g}: need g >= {MIN_GENUS}")
        if self.layout not in LAYOUTS:
            raise GenusError(f"unknown layout {self.layout!r}")
        if self.layout == "reflection" and self.g % 4 in (0, 1):
            # identical to the rotation layout; keep one canonical spelling
            object.__setattr__(self, "layout", "rotation")

    @classmethod
    def for_theorem_layout(cls, g: int, reflection: bool) -> GenusModel:
        return cls(g, "reflection" if reflection else "rotation")

    @property
    def odd(self) -> bool:
        return self.g % 2 == 1

    @property
    def r(self) -> int:
        return (self.g - 1) // 2 if self.odd else (self.g - 2) // 2

    @property
    def k(self) -> int:
        return self.g // 4

    @property
    def residue(self) -> int:
        return self.g % 4

    @property
    def cycle_length(self) -> int:
        """Number of crosscaps cycled by T (always odd)."""
        if self.layout == "rotation":
            return self.g if self.odd else self.g - 1
        return {2: self.g - 3, 3: self.g - 2}[self.residue]

    @property
    def fixed_crosscaps(self) -> tuple[int, ...]:
        return tuple(range(self.cycle_length + 1, self.g + 1))

    @property
    def has_reflections(self) -> bool:
        """Whether T factors as rho2 rho1 in this layout."""
        return self.g >= 7 and (self.layout == "reflection" or self.residue in (0, 1))

    @property
    def half_turn(self) -> int:
        """``m`` with ``rho2 = T^m rho1 T^-m``: 2k for g = 4k, 4k+2 and 2k+1 otherwise."""
        return 2 * self.k if self.residue in (0, 2) else 2 * self.k + 1

    def __str__(self) -> str:
        return f"g={self.g} ({self.layout})"


# ---------------------------------------------------------------------------
# curve names

FAMILIES = ("A", "B", "C", "D", "E", "F", "G", "U")
_FAMILY_TEXT = {"G": "gm"}
_CURVE_RE = re.compile(r"^(gm|g|[abcdefu])(\d*)$")


@dataclass(frozen=True, order=True)
class CurveId:
    """A named curve; ``family`` G is the gamma family, E has index 1."""

    family: str
    index: int = 1

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise CurveIndexError(f"unknown curve family {self.family!r}")
        if self.index < 1:
            raise CurveIndexError(f"curve index must be positive, got {self.index}")

    @classmethod
    def parse(cls, text: str) -> CurveId:
        """Lower-case curve names: ``a1``, ``b3``, ``gm10`` (or ``g10``), ``e``."""
        m = _CURVE_RE.match(text.strip())
        if not m:
            raise CurveIndexError(f"bad curve name {text!r}")
        fam, num = m.groups()
        fam = "G" if fam in ("gm", "g") else fam.upper()
        if fam == "E":
            if num not in ("", "1"):
                raise CurveIndexError("curve e takes no index")
            return cls("E")
        if not num:
            raise CurveIndexError(f"curve {text!r} needs an index")
        return cls(fam, int(num))

    @property
    def name(self) -> str:
        fam = _FAMILY_TEXT.get(self.family, self.family.lower())
        return fam if self.family == "E" else f"{fam}{self.index}"

    def __str__(self) -> str:
        return self.name


def chain_class(model: GenusModel, p: int) -> BitVec:
    """Chain curve at position ``p``: passes through crosscaps p and p+1."""
    return BitVec.from_indices(model.g, (p, p + 1))


# ---------------------------------------------------------------------------
# rotation and reflections

def _cycle_images(model: GenusModel) -> dict[int, int]:
    n = model.cycle_length
    return {i: i % n + 1 for i in range(1, n + 1)}


def standard_rotation(model: GenusModel) -> tuple[BitMat, SignedPermMat]:
    """T as a permutation of crosscaps with all signs +1, and its mod-2 reduction."""
    signed = SignedPermMat.from_images(model.g, _cycle_images(model))
    return signed.mod2(), signed


def default_reflection_involution(model: GenusModel) -> tuple[int, ...]:
    """0-based involution for rho1: reverses the T-cycle, fixes the rest.

    ``i -> 1 - i (mod n)`` on the cycle, so that ``T sigma`` is again an
    involution and ``T^m sigma T^-m = T sigma`` whenever ``2m = 1 mod n``.
    """
    n = model.cycle_length
    perm = list(range(model.g))
    for i in range(1, n + 1):
        j = (1 - i) % n
        perm[i - 1] = (j if j else n) - 1
    return tuple(perm)


class ReflectionSignError(ValueError):
    pass


def _reflection_failures(model: GenusModel, rho1: SignedPermMat, t: SignedPermMat) -> list[str]:
    failures = []
    rho2 = t @ rho1.inverse()
    if not (rho1 @ rho1).is_identity:
        failures.append("rho1 is not an involution")
    if not (rho2 @ rho2).is_identity:
        failures.append("rho2 = T rho1^-1 is not an involution")
    m = model.half_turn
    if (t ** m) @ rho1 @ (t ** -m) != rho2:
        failures.append(f"rho2 != T^{m} rho1 T^-{m}")
    for name, p in (("rho1", rho1), ("rho2", rho2)):
        try:
            lam = w_eigenvalue(p)
        except ValueError:
            failures.append(f"w is not an eigenvector of {name}")
            continue
        if quotient_det(p) != 1:
            failures.append(f"D({name}) = -1 (lambda = {lam})")
    return failures


def solve_reflection_signs(model: GenusModel, sigma: Iterable[int]) -> list[tuple[int, ...]]:
    """All sign vectors making ``sigma`` a valid rho1, lexicographically least first.

    The w-eigenvector condition forces every sign to equal the eigenvalue,
    so only the two uniform sign vectors can survive; each is checked
    against the involution, ``rho2 rho1 = T``, conjugacy and D constraints.
    Order: ``+1`` sorts before ``-1``.
    """
    sigma = tuple(sigma)
    _, t = standard_rotation(model)
    solutions = []
    reasons = []
    for lam in (1, -1):
        rho1 = SignedPermMat(model.g, sigma, (lam,) * model.g)
        failures = _reflection_failures(model, rho1, t)
        if failures:
            reasons.extend(f"signs={lam:+d}: {f}" for f in failures)
        else:
            solutions.append(rho1.signs)
    if not solutions:
        raise ReflectionSignError("no reflection signs satisfy: " + "; ".join(reasons))
    return solutions


def standard_reflections(model: GenusModel) -> tuple[SignedPermMat, SignedPermMat]:
    if not model.has_reflections:
        raise GenusError(f"no reflection model for {model}; need g >= 7 and the reflection layout")
    sigma = default_reflection_involution(model)
    signs = solve_reflection_signs(model, sigma)[0]
    rho1 = SignedPermMat(model.g, sigma, signs)
    _, t = standard_rotation(model)
    return rho1, t @ rho1.inverse()


def D_hom(p: SignedPermMat) -> int:
    """The determinant homomorphism on H_1(N_g; R) = R^g / span(w)."""
    return quotient_det(p)


@dataclass(frozen=True)
class MappingClassSpec:
    model: GenusModel
    T_signed: SignedPermMat
    rho1: SignedPermMat | None
    rho2: SignedPermMat | None

    @classmethod
    def standard(cls, model: GenusModel) -> MappingClassSpec:
        _, t = standard_rotation(model)
        if model.has_reflections:
            rho1, rho2 = standard_reflections(model)
        else:
            rho1 = rho2 = None
        return cls(model, t, rho1, rho2)

    @cached_property
    def T_mod2(self) -> BitMat:
        return self.T_signed.mod2()

    def rho_mod2(self, which: int) -> BitMat:
        rho = self.rho1 if which == 1 else self.rho2
        if rho is None:
            raise GenusError(f"no reflections at g={self.model.g}")
        return rho.mod2()


# ---------------------------------------------------------------------------
# catalog

class SeedError(ValueError):
    pass


@dataclass(frozen=True)
class Seeds:
    a2: BitVec
    f1: BitVec
    provenance: str = ""

    def __post_init__(self) -> None:
        for name, v in (("a2", self.a2), ("f1", self.f1)):
            if not v.two_sided:
                raise SeedError(f"seed [{name}] = {v} has odd weight (one-sided)")
        if self.a2.dim != self.f1.dim:
            raise SeedError("seed dimensions differ")


def default_seeds(model: GenusModel) -> Seeds:
    """Shipped seed classes; see ``data/default_seeds.txt``."""
    from .seedfile import default_seed_rules

    return default_seed_rules().instantiate(model)


@dataclass
class CurveCatalog:
    model: GenusModel
    seeds: Seeds
    classes: dict[CurveId, BitVec] = field(default_factory=dict)

    def cls(self, cid: CurveId) -> BitVec:
        try:
            return self.classes[cid]
        except KeyError:
            raise CurveIndexError(f"curve {cid} does not exist at {self.model}") from None

    def __getitem__(self, name: str | CurveId) -> BitVec:
        cid = CurveId.parse(name) if isinstance(name, str) else name
        return self.cls(cid)

    def __contains__(self, cid: CurveId) -> bool:
        return cid in self.classes

    def omori_curves(self) -> list[CurveId]:
        """The g+1 twist generators: A1, A2, B1..Br, C1..C(r-1), [D(g-1)], E."""
        r = self.model.r
        ids = [CurveId("A", 1), CurveId("A", 2)]
        ids += [CurveId("B", i) for i in range(1, r + 1)]
        ids += [CurveId("C", i) for i in range(1, r)]
        if not self.model.odd:
            ids.append(CurveId("D", self.model.g - 1))
        ids.append(CurveId("E"))
        return ids

    def sorted_items(self) -> list[tuple[CurveId, BitVec]]:
        def key(item):
            cid = item[0]
            return (_FAMILY_TEXT.get(cid.family, cid.family.lower()), cid.index)

        return sorted(self.classes.items(), key=key)

    @cached_property
    def fingerprint(self) -> tuple:
        """Hashable identity of the catalog; catalogs are not mutated after construction."""
        return (self.model, tuple(sorted((c, v.bits) for c, v in self.classes.items())))


def family_size(model: GenusModel, family: str) -> int:
    """Largest valid index of a family (E: 1; 0 if the family is absent)."""
    g, r, n = model.g, model.r, model.cycle_length
    if family == "A":
        return 2
    if family == "B":
        return r
    if family == "C":
        return r - 1
    if family == "D":
        # d_j passes through x_j and x_g; there is no d_(g-1) for odd g
        return g - 1 if not model.odd else g - 2
    if family == "E":
        return 1
    if family in ("F", "G"):
        return n
    if family == "U":
        return g - 2 if (model.layout == "reflection" and model.residue == 3) else 0
    raise CurveIndexError(family)


def build_catalog(model: GenusModel, seeds: Seeds | None = None) -> CurveCatalog:
    seeds = seeds if seeds is not None else default_seeds(model)
    g = model.g
    if seeds.a2.dim != g:
        raise SeedError(f"seed dimension {seeds.a2.dim} != genus {g}")
    t_mod2, _ = standard_rotation(model)
    classes: dict[CurveId, BitVec] = {}
    classes[CurveId("A", 1)] = chain_class(model, 1)
    classes[CurveId("A", 2)] = seeds.a2
    for i in range(1, model.r + 1):
        classes[CurveId("B", i)] = chain_class(model, 2 * i)
    for i in range(1, model.r):
        classes[CurveId("C", i)] = chain_class(model, 2 * i + 1)
    for fam, seed in (("G", seeds.a2), ("F", seeds.f1)):
        v = seed
        for i in range(1, family_size(model, fam) + 1):
            classes[CurveId(fam, i)] = v
            v = t_mod2 @ v
    for j in range(1, family_size(model, "D") + 1):
        classes[CurveId("D", j)] = BitVec.from_indices(g, (j, g))
    for j in range(1, family_size(model, "U") + 1):
        classes[CurveId("U", j)] = BitVec.from_indices(g, (j, g - 1))
    a1 = classes[CurveId("A", 1)]
    classes[CurveId("E")] = BitVec(g, transvect(a1.bits, seeds.f1.bits))
    return CurveCatalog(model, seeds, classes)


# ---------------------------------------------------------------------------
# catalog files

_CLASS_TERM = re.compile(r"^x(\d+)$")


def parse_class(text: str, g: int) -> BitVec:
    """``x1+x3+...`` (ascending, no repeats) as a class in Z_2^g."""
    indices = []
    for term in text.strip().split("+"):
        m = _CLASS_TERM.match(term.strip())
        if not m:
            raise CurveIndexError(f"bad class term {term.strip()!r} in {text!r}")
        indices.append(int(m.group(1)))
    if indices != sorted(set(indices)):
        raise CurveIndexError(f"class {text!r} must list distinct indices in ascending order")
    try:
        return BitVec.from_indices(g, indices)
    except ValueError as exc:
        raise CurveIndexError(str(exc)) from None


def format_catalog(cat: CurveCatalog) -> str:
    lines = [
        "# twistgen curve catalog",
        f"genus = {cat.model.g}",
        f"layout = {cat.model.layout}",
    ]
    lines += [f"{cid} = {v}" for cid, v in cat.sorted_items()]
    return "\n".join(lines) + "\n"


def parse_catalog(text: str) -> CurveCatalog:
    """Inverse of :func:`format_catalog`; every record is read back as written."""
    header: dict[str, str] = {}
    records: dict[CurveId, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CurveIndexError(f"line {lineno}: expected 'name = class', got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in ("genus", "layout"):
            header[key] = value
            continue
        if "genus" not in header:
            raise CurveIndexError(f"line {lineno}: curve record before the genus line")
        cid = CurveId.parse(key)
        if cid in records:
            raise CurveIndexError(f"line {lineno}: curve {cid} listed twice")
        records[cid] = value
    if "genus" not in header:
        raise CurveIndexError("catalog has no genus line")
    try:
        g = int(header["genus"])
    except ValueError:
        raise CurveIndexError(f"bad genus {header['genus']!r}") from None
    model = GenusModel(g, header.get("layout", "rotation"))
    classes = {cid: parse_class(v, g) for cid, v in records.items()}
    for cid, v in classes.items():
        if not v.two_sided:
            raise SeedError(f"curve {cid} has odd class {v} (one-sided)")
    for fam in ("A", "F"):
        need = CurveId(fam, 2 if fam == "A" else 1)
        if need not in classes:
            raise CurveIndexError(f"catalog lacks seed curve {need}")
    seeds = Seeds(classes[CurveId("A", 2)], classes[CurveId("F", 1)], provenance="catalog file")
    return CurveCatalog(model, seeds, classes)


def read_catalog(path: str | Path) -> CurveCatalog:
    return parse_catalog(Path(path).read_text(encoding="utf-8"))


def write_catalog(cat: CurveCatalog, path: str | Path) -> None:
    Path(path).write_text(format_catalog(cat), encoding="utf-8")


# The constraint suite needs the proof scripts, which import this module, so
# the checks live in ``validation`` and are re-exported here lazily.

def validate_catalog(cat: CurveCatalog, spec: MappingClassSpec | None = None):
    """See :func:`twistgen.validation.validate_catalog`."""
    from .validation import validate_catalog as run

    return run(cat, spec)


def infer_seed_classes(model: GenusModel, **kw):
    """See :func:`twistgen.validation.infer_seed_classes`."""
    from .validation import infer_seed_classes as run

    return run(model, **kw)
