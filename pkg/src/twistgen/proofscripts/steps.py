"""Proof-script steps, the line-oriented script language, and the runner.

One step per line, ``#`` starts a comment::

    def G1 = G10 * C2^-1 * F18 * C12^-1
    assert_eq T^-4 * $G1 * T^4 == G6 * A1^-1 * F14 * C10^-1
    assert_img T^-4 : gm10->gm6, c2->a1, f18->f14, c12->c10
    assert_gen [T, $G1] == omori
    find PHI : gm10->d33, f18->c2
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass, field
from typing import Union

from ..f2linalg import BitMat, BitVec
from ..surface import (
    CurveCatalog,
    CurveId,
    GenusModel,
    MappingClassSpec,
    build_catalog,
)
from ..words import (
    Environment,
    Word,
    evaluate_mod2,
    evaluate_signed,
    format_word,
    parse_word,
)

HEADER = (
    "A passing script certifies the mod-2 homological shadow of each proof step "
    "(necessary conditions) and, where a generation step runs, exact equality of "
    "the mod-2 image groups. It does not certify equality of mapping classes: "
    "mod 2 every Dehn twist is an involution and twist signs are invisible."
)


class ScriptSyntaxError(ValueError):
    def __init__(self, message: str, lineno: int = 0):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno else message)


@dataclass(frozen=True)
class Define:
    label: str
    word: Word
    source: str = ""


@dataclass(frozen=True)
class AssertRepEqual:
    lhs: Word
    rhs: Word
    source: str = ""


@dataclass(frozen=True)
class AssertClassImage:
    word: Word
    pairs: tuple[tuple[CurveId, CurveId], ...]
    source: str = ""


@dataclass(frozen=True)
class AssertGeneration:
    gens: tuple[Word, ...]
    reference: Union[str, tuple[Word, ...]] = "omori"
    source: str = ""


@dataclass(frozen=True)
class DefineConjugator:
    """Define ``label`` as a twist word sending each source curve to its target."""

    label: str
    pairs: tuple[tuple[CurveId, CurveId], ...]
    source: str = ""


Step = Union[Define, AssertRepEqual, AssertClassImage, AssertGeneration, DefineConjugator]


# ---------------------------------------------------------------------------
# parsing

_DEF = re.compile(r"^def\s+([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.+)$")
_EQ = re.compile(r"^assert_eq\s+(.+?)\s*==\s*(.+)$")
_IMG = re.compile(r"^assert_img\s+(.+?)\s*:\s*(.+)$")
_GEN = re.compile(r"^assert_gen\s*\[(.*)\]\s*==\s*(.+)$")
_FIND = re.compile(r"^find\s+([A-Za-z_][A-Za-z0-9_]*)\s*:\s*(.+)$")


def _parse_pairs(text: str, lineno: int) -> tuple[tuple[CurveId, CurveId], ...]:
    pairs = []
    for item in text.split(","):
        if "->" not in item:
            raise ScriptSyntaxError(f"expected 'src->dst', got {item.strip()!r}", lineno)
        src, dst = item.split("->")
        try:
            pairs.append((CurveId.parse(src), CurveId.parse(dst)))
        except ValueError as exc:
            raise ScriptSyntaxError(str(exc), lineno) from None
    return tuple(pairs)


def _word(text: str, lineno: int) -> Word:
    try:
        return parse_word(text)
    except ValueError as exc:
        raise ScriptSyntaxError(str(exc), lineno) from None


def _word_list(text: str, lineno: int) -> tuple[Word, ...]:
    return tuple(_word(t, lineno) for t in text.split(",") if t.strip())


def parse_script(text: str) -> list[Step]:
    steps: list[Step] = []
    labels: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if m := _DEF.match(line):
            label = m.group(1)
            if label in labels:
                raise ScriptSyntaxError(f"label {label} defined twice", lineno)
            labels.add(label)
            steps.append(Define(label, _word(m.group(2), lineno), line))
        elif m := _EQ.match(line):
            steps.append(AssertRepEqual(_word(m.group(1), lineno), _word(m.group(2), lineno), line))
        elif m := _IMG.match(line):
            steps.append(AssertClassImage(_word(m.group(1), lineno), _parse_pairs(m.group(2), lineno), line))
        elif m := _GEN.match(line):
            ref_text = m.group(2).strip()
            if ref_text == "omori":
                ref: Union[str, tuple[Word, ...]] = "omori"
            elif ref_text.startswith("[") and ref_text.endswith("]"):
                ref = _word_list(ref_text[1:-1], lineno)
            else:
                raise ScriptSyntaxError(f"bad generation reference {ref_text!r}", lineno)
            steps.append(AssertGeneration(_word_list(m.group(1), lineno), ref, line))
        elif m := _FIND.match(line):
            label = m.group(1)
            if label in labels:
                raise ScriptSyntaxError(f"label {label} defined twice", lineno)
            labels.add(label)
            steps.append(DefineConjugator(label, _parse_pairs(m.group(2), lineno), line))
        else:
            raise ScriptSyntaxError(f"unrecognised step {line!r}", lineno)
    return steps


def format_step(step: Step) -> str:
    if isinstance(step, Define):
        return f"def {step.label} = {format_word(step.word)}"
    if isinstance(step, AssertRepEqual):
        return f"assert_eq {format_word(step.lhs)} == {format_word(step.rhs)}"
    if isinstance(step, AssertClassImage):
        pairs = ", ".join(f"{a}->{b}" for a, b in step.pairs)
        return f"assert_img {format_word(step.word)} : {pairs}"
    if isinstance(step, AssertGeneration):
        gens = ", ".join(format_word(w) for w in step.gens)
        ref = step.reference if isinstance(step.reference, str) else (
            "[" + ", ".join(format_word(w) for w in step.reference) + "]"
        )
        return f"assert_gen [{gens}] == {ref}"
    pairs = ", ".join(f"{a}->{b}" for a, b in step.pairs)
    return f"find {step.label} : {pairs}"


# ---------------------------------------------------------------------------
# scripts and reports

@dataclass
class Script:
    id: str
    model: GenusModel
    steps: list[Step]
    title: str = ""
    variants: list[str] = field(default_factory=list)
    level: str = "mod2"

    @classmethod
    def from_text(cls, id: str, model: GenusModel, text: str, **kw) -> Script:
        return cls(id, model, parse_script(text), **kw)

    def to_text(self) -> str:
        return "\n".join(format_step(s) for s in self.steps) + "\n"


@dataclass
class Context:
    catalog: CurveCatalog
    spec: MappingClassSpec

    @classmethod
    def standard(cls, model: GenusModel, seeds=None) -> Context:
        return cls(build_catalog(model, seeds), MappingClassSpec.standard(model))

    @property
    def model(self) -> GenusModel:
        return self.catalog.model


@dataclass
class StepResult:
    index: int
    kind: str
    source: str
    status: str  # "pass" | "fail" | "skipped"
    detail: str = ""
    witness: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"


@dataclass
class RunReport:
    script_id: str
    genus: int
    layout: str
    level: str
    steps: list[StepResult]
    variants: list[str]
    seconds: float
    header: str = HEADER

    @property
    def passed(self) -> bool:
        """No step failed; skipped steps are listed but do not fail the run."""
        return all(s.status != "fail" for s in self.steps)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    @property
    def failures(self) -> list[StepResult]:
        return [s for s in self.steps if s.status == "fail"]

    @property
    def skipped(self) -> list[StepResult]:
        return [s for s in self.steps if s.status == "skipped"]

    def to_text(self) -> str:
        lines = [
            f"# script {self.script_id}  g={self.genus}  layout={self.layout}  level={self.level}",
            f"# {self.header}",
        ]
        if self.variants:
            lines.append("# variants: " + ", ".join(self.variants))
        for s in self.steps:
            extra = f"  [{s.detail}]" if s.detail else ""
            lines.append(f"{s.status.upper():7s} {s.index:3d}  {s.source}{extra}")
        lines.append(
            f"verdict: {self.verdict}  ({len(self.steps)} steps, "
            f"{len(self.failures)} failed, {len(self.skipped)} skipped)"
        )
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# runner

def _twist_free(w: Word, env: Environment) -> bool:
    return not any(a.is_twist for a in env.expand(w).atoms)


def run_script(script: Script, ctx: Context | None = None, *, level: str | None = None,
               cap: int | None = None, force: bool = False) -> RunReport:
    """Execute every step; evaluation errors become step failures."""
    from ..f2group import GenusCapError, same_group
    from .conjugator import ConjugatorError, find_conjugator

    level = level or script.level
    ctx = ctx or Context.standard(script.model)
    if ctx.model != script.model:
        raise ValueError(f"context {ctx.model} does not match script {script.model}")
    cat, spec = ctx.catalog, ctx.spec
    env = Environment(script.model)
    results: list[StepResult] = []
    start = time.perf_counter()

    def ev(w: Word) -> BitMat:
        return evaluate_mod2(w, env, cat, spec)

    for i, step in enumerate(script.steps, 1):
        kind = type(step).__name__
        source = step.source or format_step(step)
        try:
            if isinstance(step, Define):
                m = ev(step.word)
                env = env.define(step.label, step.word)
                results.append(StepResult(i, kind, source, "pass", witness=m.digest()))
            elif isinstance(step, DefineConjugator):
                pairs = [(cat.cls(a), cat.cls(b)) for a, b in step.pairs]
                phi = find_conjugator(pairs, cat)
                env = env.define(step.label, phi)
                results.append(StepResult(i, kind, source, "pass",
                                          detail=f"{step.label} = {format_word(phi)}",
                                          witness=ev(phi).digest()))
            elif isinstance(step, AssertRepEqual):
                lhs, rhs = ev(step.lhs), ev(step.rhs)
                ok = lhs == rhs
                detail = "" if ok else f"mod-2 images differ ({lhs.digest()} != {rhs.digest()})"
                if ok and level == "signed" and _twist_free(step.lhs, env) and _twist_free(step.rhs, env):
                    sl = evaluate_signed(step.lhs, spec, env)
                    sr = evaluate_signed(step.rhs, spec, env)
                    if sl != sr:
                        ok = False
                        detail = "signed images differ"
                    else:
                        detail = "mod2+signed"
                results.append(StepResult(i, kind, source, "pass" if ok else "fail",
                                          detail=detail, witness=lhs.digest()))
            elif isinstance(step, AssertClassImage):
                m = ev(step.word)
                bad = [f"{a}->{b} (got {m @ cat.cls(a)})" for a, b in step.pairs
                       if m @ cat.cls(a) != cat.cls(b)]
                results.append(StepResult(i, kind, source, "fail" if bad else "pass",
                                          detail="; ".join(bad), witness=m.digest()))
            elif isinstance(step, AssertGeneration):
                gens = [ev(w) for w in step.gens]
                if step.reference == "omori":
                    ref = omori_matrices(ctx)
                else:
                    ref = [ev(w) for w in step.reference]
                try:
                    ok = same_group(gens, ref, cap=cap, force=force)
                except GenusCapError as exc:
                    results.append(StepResult(i, kind, source, "skipped", detail=str(exc)))
                    continue
                results.append(StepResult(i, kind, source, "pass" if ok else "fail",
                                          detail="" if ok else "generated groups differ"))
            else:  # pragma: no cover
                raise TypeError(kind)
        except (ValueError, KeyError, ConjugatorError) as exc:
            results.append(StepResult(i, kind, source, "fail", detail=f"{type(exc).__name__}: {exc}"))

    return RunReport(script.id, script.model.g, script.model.layout, level, results,
                     list(script.variants), time.perf_counter() - start)


def omori_matrices(ctx: Context) -> list[BitMat]:
    """Transvections of the Omori twist generators (the reference generating set)."""
    from ..words import Atom

    env = Environment(ctx.model)
    return [evaluate_mod2(Word((Atom(c),)), env, ctx.catalog, ctx.spec) for c in ctx.catalog.omori_curves()]


def class_images(m: BitMat, cat: CurveCatalog, curves) -> list[BitVec]:
    return [m @ cat.cls(c) for c in curves]


def script_environment(script: Script, ctx: Context) -> Environment:
    """Labels defined by the script's ``def`` and ``find`` steps, without running assertions."""
    from .conjugator import find_conjugator

    env = Environment(script.model)
    for step in script.steps:
        if isinstance(step, Define):
            env = env.define(step.label, step.word)
        elif isinstance(step, DefineConjugator):
            pairs = [(ctx.catalog.cls(a), ctx.catalog.cls(b)) for a, b in step.pairs]
            env = env.define(step.label, find_conjugator(pairs, ctx.catalog))
    return env
