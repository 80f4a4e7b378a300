"""Constraint suite for curve catalogs, and seed inference against it.

A catalog is checked against three kinds of constraint:

* two-sidedness: every class has even weight;
* T-equivariance: ``T`` carries each family member to the next one, and the
  fixed anchors (``e = A1(f1)``, ``u_(4k+1) = c_2k``) hold;
* proof claims: every curve-image and relation step of each builtin proof
  script that runs on the catalog's genus and layout, evaluated mod 2;
* generators: each word of an applicable generating set acts nontrivially
  mod 2 (otherwise the set would silently lose a member; this is what rules
  out ``a2 = a1``).

Each constraint records which seed classes it reads, so inference can
filter the ``a2`` and ``f1`` candidates separately before checking the
constraints that read both.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable

from .f2linalg import BitVec, transvect
from .surface import (
    CurveCatalog,
    CurveId,
    GenusModel,
    MappingClassSpec,
    SeedError,
    Seeds,
    build_catalog,
    default_seeds,
    family_size,
)
from .words import Environment, Word, evaluate_mod2, format_word

# catalog families whose classes are computed from each seed (plus a2 itself)
SEED_FAMILIES = {"a2": frozenset("G"), "f1": frozenset("FE")}

Check = Callable[[CurveCatalog, MappingClassSpec, dict], "str | None"]


class InferenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class Constraint:
    name: str
    kind: str  # "two-sided" | "equivariance" | "anchor" | "generator" | "image" | "relation"
    depends: frozenset[str]
    check: Check = field(compare=False, repr=False)


@dataclass(frozen=True)
class ConstraintResult:
    name: str
    kind: str
    passed: bool
    detail: str = ""


@dataclass
class ValidationReport:
    model: GenusModel
    results: list[ConstraintResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> list[ConstraintResult]:
        return [r for r in self.results if not r.passed]

    def result(self, name: str) -> ConstraintResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def to_text(self) -> str:
        lines = [f"# catalog validation  {self.model}"]
        for r in self.results:
            extra = f"  [{r.detail}]" if r.detail else ""
            lines.append(f"{'PASS' if r.passed else 'FAIL':4s}  {r.kind:12s} {r.name}{extra}")
        lines.append(f"verdict: {'pass' if self.passed else 'fail'}  "
                     f"({len(self.results)} constraints, {len(self.failures)} failed)")
        return "\n".join(lines)


def _depends_on(cids: Iterable[CurveId]) -> frozenset[str]:
    out = set()
    for c in cids:
        if c == CurveId("A", 2) or c.family in SEED_FAMILIES["a2"]:
            out.add("a2")
        elif c.family in SEED_FAMILIES["f1"]:
            out.add("f1")
    return frozenset(out)


# ---------------------------------------------------------------------------
# structural constraints

def _t_power(spec: MappingClassSpec, e: int):
    m = spec.T_mod2
    out = m
    for _ in range(e - 1):
        out = m @ out
    return out


def _image_check(src: CurveId, dst: CurveId, power: int = 1) -> Check:
    def check(cat: CurveCatalog, spec: MappingClassSpec, scratch: dict) -> str | None:
        got = _t_power(spec, power) @ cat.cls(src)
        want = cat.cls(dst)
        return None if got == want else f"T^{power}({src}) = {got}, {dst} = {want}"
    return check


def _structural(model: GenusModel) -> list[Constraint]:
    out: list[Constraint] = []
    n, r, g = model.cycle_length, model.r, model.g
    cat_ids = sorted(build_catalog(model, _placeholder_seeds(model)).classes)

    for cid in cat_ids:
        def two_sided(cat, spec, scratch, cid=cid):
            v = cat.cls(cid)
            return None if v.two_sided else f"{cid} = {v} has odd weight"
        out.append(Constraint(f"two-sided({cid})", "two-sided", _depends_on([cid]), two_sided))

    def rel(src: CurveId, dst: CurveId, power: int = 1) -> None:
        name = f"T({src})={dst}" if power == 1 else f"T^{power}({src})={dst}"
        out.append(Constraint(name, "equivariance", _depends_on([src, dst]), _image_check(src, dst, power)))

    # chain curves inside the cycled block: position p spans x_p, x_(p+1)
    chain = {1: CurveId("A", 1)}
    chain.update({2 * i: CurveId("B", i) for i in range(1, r + 1)})
    chain.update({2 * i + 1: CurveId("C", i) for i in range(1, r)})
    for p in range(1, n - 1):
        if p in chain and p + 1 in chain:
            rel(chain[p], chain[p + 1])
    if n == g:
        rel(CurveId("B", r), CurveId("A", 1), power=2)

    for fam in ("F", "G"):
        size = family_size(model, fam)
        for i in range(1, size + 1):
            rel(CurveId(fam, i), CurveId(fam, i % size + 1))

    # d_j = x_j + x_g and u_j = x_j + x_(g-1) follow T when that crosscap is fixed
    for fam, anchor in (("D", g), ("U", g - 1)):
        size = family_size(model, fam)
        if size == 0 or anchor <= n:
            continue
        for j in range(1, min(size, n) + 1):
            rel(CurveId(fam, j), CurveId(fam, j % n + 1))

    def e_anchor(cat, spec, scratch):
        a1, f1, e = cat.cls(CurveId("A", 1)), cat.cls(CurveId("F", 1)), cat.cls(CurveId("E"))
        want = BitVec(g, transvect(a1.bits, f1.bits))
        return None if e == want else f"e = {e}, A1(f1) = {want}"
    out.append(Constraint("e=A1(f1)", "anchor", frozenset({"f1"}), e_anchor))

    if family_size(model, "U"):
        k = model.k
        u, c = CurveId("U", 4 * k + 1), CurveId("C", 2 * k)

        def u_anchor(cat, spec, scratch, u=u, c=c):
            return None if cat.cls(u) == cat.cls(c) else f"{u} = {cat.cls(u)}, {c} = {cat.cls(c)}"
        out.append(Constraint(f"{u}={c}", "anchor", frozenset(), u_anchor))
    return out


def _placeholder_seeds(model: GenusModel) -> Seeds:
    a1 = BitVec.from_indices(model.g, (1, 2))
    return Seeds(a1, a1, provenance="placeholder")


# ---------------------------------------------------------------------------
# proof-script constraints

def _curves(w: Word, env: Environment) -> set[CurveId]:
    return {a.base for a in env.expand(w).atoms if isinstance(a.base, CurveId)}


def _script_constraints(model: GenusModel) -> list[Constraint]:
    from .proofscripts.builtin import builtin_script, fitting, generator_set
    from .proofscripts.steps import AssertClassImage, AssertRepEqual, Define

    out: list[Constraint] = []
    for sid in fitting(model, commutators=False):
        script = builtin_script(sid, model.g, closing=False, model=model)
        defs = tuple((s.label, s.word) for s in script.steps if isinstance(s, Define))
        full_env = Environment(model, defs)

        def env_for(scratch: dict, sid=sid, defs=defs) -> Environment:
            # one environment (and memo) per script per validation run
            key = ("env", sid)
            if key not in scratch:
                scratch[key] = Environment(model, defs)
            return scratch[key]

        if sid != "prop41":
            for w in generator_set(sid, model.g):
                def nontrivial(cat, spec, scratch, w=w, env_for=env_for):
                    m = evaluate_mod2(w, env_for(scratch), cat, spec)
                    return "acts trivially mod 2" if m.is_identity else None
                out.append(Constraint(f"{sid} generator {format_word(w)} is nontrivial", "generator",
                                      _depends_on(_curves(w, full_env)), nontrivial))

        for i, step in enumerate(script.steps, 1):
            if isinstance(step, AssertClassImage):
                word_cids = _curves(step.word, full_env)
                # one constraint per pair, so each reads as few seeds as possible
                for a, b in step.pairs:
                    def check(cat, spec, scratch, step=step, a=a, b=b, env_for=env_for):
                        key = ("img", id(step))
                        if key not in scratch:
                            scratch[key] = evaluate_mod2(step.word, env_for(scratch), cat, spec)
                        got = scratch[key] @ cat.cls(a)
                        return None if got == cat.cls(b) else f"{a} goes to {got}, {b} = {cat.cls(b)}"
                    out.append(Constraint(f"{sid}#{i}: {format_word(step.word)} : {a}->{b}", "image",
                                          _depends_on(word_cids | {a, b}), check))
            elif isinstance(step, AssertRepEqual):
                cids = _curves(step.lhs, full_env) | _curves(step.rhs, full_env)

                def check(cat, spec, scratch, step=step, env_for=env_for):
                    env = env_for(scratch)
                    lhs = evaluate_mod2(step.lhs, env, cat, spec)
                    rhs = evaluate_mod2(step.rhs, env, cat, spec)
                    return None if lhs == rhs else (
                        f"{format_word(step.lhs)} and {format_word(step.rhs)} differ mod 2")
                out.append(Constraint(f"{sid}#{i}: {step.source}", "relation", _depends_on(cids), check))
    return out


def constraint_suite(model: GenusModel) -> list[Constraint]:
    return _structural(model) + _script_constraints(model)


def _run(constraints: Iterable[Constraint], cat: CurveCatalog,
         spec: MappingClassSpec, *, stop_early: bool = False) -> list[ConstraintResult]:
    scratch: dict = {}
    results = []
    for c in constraints:
        try:
            detail = c.check(cat, spec, scratch)
        except (ValueError, KeyError) as exc:
            detail = f"{type(exc).__name__}: {exc}"
        results.append(ConstraintResult(c.name, c.kind, detail is None, detail or ""))
        if stop_early and detail is not None:
            break
    return results


def validate_catalog(cat: CurveCatalog, spec: MappingClassSpec | None = None) -> ValidationReport:
    """Check every constraint that applies at the catalog's genus and layout."""
    spec = spec or MappingClassSpec.standard(cat.model)
    if spec.model != cat.model:
        raise ValueError(f"catalog {cat.model} and spec {spec.model} differ")
    return ValidationReport(cat.model, _run(constraint_suite(cat.model), cat, spec))


# ---------------------------------------------------------------------------
# inference

@dataclass(frozen=True)
class SeedCandidate:
    a2: BitVec
    f1: BitVec
    origin: str  # search-space region of (a2, f1)
    default: bool = False

    def seeds(self) -> Seeds:
        return Seeds(self.a2, self.f1, provenance=f"inferred ({self.origin})")


def search_space(model: GenusModel) -> dict[int, str]:
    """Even-weight candidates, packed, mapped to their region.

    ``block``: a cyclically consecutive run of the T-cycled crosscaps plus
    any subset of the T-fixed ones, of even total weight.  ``pair``: any
    ``x_i + x_j`` not already a block.
    """
    g, n = model.g, model.cycle_length
    fixed = [i for i in range(n + 1, g + 1)]
    subsets = [sum(1 << (i - 1) for i in combo)
               for size in range(len(fixed) + 1) for combo in combinations(fixed, size)]
    space: dict[int, str] = {}
    for length in range(1, n + 1):
        for start in range(1, n + 1):
            block = sum(1 << ((start - 1 + t) % n) for t in range(length))
            for extra in subsets:
                v = block | extra
                if bin(v).count("1") % 2 == 0:
                    space.setdefault(v, "block")
    for i, j in combinations(range(g), 2):
        space.setdefault(1 << i | 1 << j, "pair")
    return dict(sorted(space.items(), key=lambda kv: BitVec(g, kv[0]).indices))


def _seed_part(cid: CurveId) -> str | None:
    if cid == CurveId("A", 2) or cid.family in SEED_FAMILIES["a2"]:
        return "a2"
    if cid.family in SEED_FAMILIES["f1"]:
        return "f1"
    return None


class _CatalogFactory:
    """Catalogs for many seed pairs, reusing the classes each seed determines."""

    def __init__(self, model: GenusModel):
        self.model = model
        self.anchor = _placeholder_seeds(model)
        self.base = {c: v for c, v in build_catalog(model, self.anchor).classes.items()
                     if _seed_part(c) is None}
        self.parts: dict[tuple[str, int], dict[CurveId, BitVec]] = {}

    def part(self, which: str, bits: int) -> dict[CurveId, BitVec]:
        key = (which, bits)
        if key not in self.parts:
            v = BitVec(self.model.g, bits)
            seeds = Seeds(v, self.anchor.f1) if which == "a2" else Seeds(self.anchor.a2, v)
            self.parts[key] = {c: x for c, x in build_catalog(self.model, seeds).classes.items()
                               if _seed_part(c) == which}
        return self.parts[key]

    def __call__(self, a2: int | None, f1: int | None) -> CurveCatalog:
        a2 = self.anchor.a2.bits if a2 is None else a2
        f1 = self.anchor.f1.bits if f1 is None else f1
        g = self.model.g
        classes = {**self.base, **self.part("a2", a2), **self.part("f1", f1)}
        return CurveCatalog(self.model, Seeds(BitVec(g, a2), BitVec(g, f1)), classes)


def _passes(constraints: list[Constraint], cat: CurveCatalog, spec: MappingClassSpec) -> bool:
    """All constraints hold; a failing one moves to the front for the next call."""
    scratch: dict = {}
    for i, c in enumerate(constraints):
        try:
            ok = c.check(cat, spec, scratch) is None
        except (ValueError, KeyError):
            ok = False
        if not ok:
            constraints.insert(0, constraints.pop(i))
            return False
    return True


def infer_seed_classes(model: GenusModel, *, space: dict[int, str] | None = None) -> list[SeedCandidate]:
    """Every (a2, f1) in the search space for which the catalog validates.

    Constraints reading one seed filter that seed's candidates on their own;
    the remaining ones are checked on every surviving pair.  The order in
    which constraints are tried only affects speed, never the result.
    """
    g = model.g
    spec = MappingClassSpec.standard(model)
    space = space if space is not None else search_space(model)
    suite = constraint_suite(model)
    only_a2 = [c for c in suite if c.depends == {"a2"}]
    only_f1 = [c for c in suite if c.depends == {"f1"}]
    joint = [c for c in suite if c.depends == {"a2", "f1"}]
    free = [c for c in suite if not c.depends]
    make = _CatalogFactory(model)

    if not _passes(free, make(None, None), spec):
        raise InferenceError("no consistent catalog in search space "
                             "(seed-independent constraints fail)")
    a2s = [b for b in space if _passes(only_a2, make(b, None), spec)]
    f1s = [b for b in space if _passes(only_f1, make(None, b), spec)]
    try:
        default = default_seeds(model)
    except SeedError:
        default = None
    out = []
    for a in a2s:
        for f in f1s:
            if _passes(joint, make(a, f), spec):
                is_default = default is not None and (default.a2.bits, default.f1.bits) == (a, f)
                out.append(SeedCandidate(BitVec(g, a), BitVec(g, f), f"{space[a]}/{space[f]}", is_default))
    if not out:
        raise InferenceError("no consistent catalog in search space")
    return out
