"""Command-line entry point.

Verbs: ``verify`` (run a proof script), ``order`` (exact image-group order
and comparison with the Omori generators), ``catalog`` (dump or validate a
curve catalog), ``eval`` (mod-2 matrix of a word) and ``infer`` (search
for seed classes).  Reports go to stdout or ``--out``; progress goes to
stderr.  Exit codes: 0 verified or computed, 1 verification failed, 2
usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema

from . import __version__
from .f2group import (
    GenusCapError,
    brute_closure,
    check_cap,
    same_group,
    stabilizer_chain,
    target_order,
)
from .f2linalg import preserves_form
from .proofscripts.builtin import (
    THEOREMS,
    ScriptRangeError,
    builtin_script,
    check_range,
    generator_matrices,
)
from .proofscripts.steps import (
    Context,
    Script,
    ScriptSyntaxError,
    omori_matrices,
    parse_script,
    run_script,
)
from .seedfile import load_seed_rules
from .surface import (
    LAYOUTS,
    CurveIndexError,
    GenusError,
    GenusModel,
    MappingClassSpec,
    SeedError,
    build_catalog,
    format_catalog,
    read_catalog,
)
from .validation import InferenceError, infer_seed_classes, validate_catalog
from .words import Environment, evaluate_mod2, format_word, parse_word

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SCHEMA_VERSION = "1.0"
# groups up to this order are also counted by brute-force closure
BRUTE_LIMIT = 100_000

log = logging.getLogger("twistgen")


class UsageError(Exception):
    pass


# errors that mean "bad request", never "verification failed"
_USAGE_ERRORS = (
    UsageError, ScriptRangeError, ScriptSyntaxError, GenusCapError, GenusError,
    CurveIndexError, SeedError, ValueError, KeyError, OSError,
)


@lru_cache(maxsize=1)
def report_schema() -> dict:
    text = resources.files("twistgen").joinpath("data/report.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def validate_report(doc: dict) -> None:
    jsonschema.validate(doc, report_schema())


# ---------------------------------------------------------------------------
# argument parsing

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--genus", type=int, help="genus g of N_g")
    common.add_argument("--layout", choices=LAYOUTS, help="crosscap layout (default: the theorem's, else rotation)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", type=Path, help="write the report here instead of stdout")
    common.add_argument("--seeds", type=Path, help="seed-rule file replacing the shipped defaults")
    common.add_argument("--catalog", type=Path, help="curve catalog file replacing the built catalog")
    common.add_argument("--force", action="store_true", help="run BSGS computations above the genus cap")
    common.add_argument("-q", "--quiet", action="store_true", help="no progress on stderr")

    parser = argparse.ArgumentParser(prog="twistgen", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"twistgen {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("verify", parents=[common], help="run a proof script")
    p.add_argument("--theorem", choices=sorted(THEOREMS), help="builtin script id")
    p.add_argument("--script", type=Path, help="script file in the step language")
    p.add_argument("--level", choices=("mod2", "signed"), help="evaluation level (default: the script's)")

    p = sub.add_parser("order", parents=[common], help="order of a generated image group")
    p.add_argument("--gens", required=True, help="'omori' or a theorem id")

    p = sub.add_parser("catalog", parents=[common], help="dump or validate a curve catalog")
    p.add_argument("--validate", action="store_true", help="run the constraint suite")
    p.add_argument("--check", type=Path, help="validate this catalog file")

    p = sub.add_parser("eval", parents=[common], help="mod-2 matrix of a word")
    p.add_argument("--word", required=True)

    sub.add_parser("infer", parents=[common], help="search for consistent seed classes")
    return parser


def _model(args, default_layout: str = "rotation") -> GenusModel:
    if args.genus is None:
        raise UsageError("--genus is required")
    return GenusModel(args.genus, args.layout or default_layout)


def _context(args, model: GenusModel) -> Context:
    spec = MappingClassSpec.standard(model)
    if args.catalog is not None:
        cat = read_catalog(args.catalog)
        if cat.model != model:
            raise UsageError(f"catalog is for {cat.model}, not {model}")
        return Context(cat, spec)
    seeds = load_seed_rules(args.seeds).instantiate(model) if args.seeds else None
    return Context(build_catalog(model, seeds), spec)


def _doc(args, argv: list[str], model: GenusModel, steps: list[dict], result: dict,
         start: float, verdict: str | None = None) -> dict:
    if verdict is None:
        verdict = "fail" if any(s["status"] == "fail" for s in steps) else "pass"
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "twistgen", "version": __version__},
        "command": {"verb": args.verb, "argv": list(argv)},
        "genus": model.g,
        "layout": model.layout,
        "verdict": verdict,
        "steps": steps,
        "result": result,
        "seconds": round(time.perf_counter() - start, 6),
    }


def _step(index: int, kind: str, source: str, ok: bool | None, detail: str = "") -> dict:
    status = "skipped" if ok is None else ("pass" if ok else "fail")
    out = {"index": index, "kind": kind, "source": source, "status": status}
    if detail:
        out["detail"] = detail
    return out


# ---------------------------------------------------------------------------
# verbs

def cmd_verify(args, argv: list[str]) -> dict:
    start = time.perf_counter()
    if args.theorem is None and args.script is None:
        raise UsageError("verify needs --theorem or --script")
    if args.genus is None:
        raise UsageError("--genus is required")
    if args.theorem is not None:
        t = check_range(args.theorem, args.genus)
        model = GenusModel(args.genus, args.layout or t.layout)
        if not t.fits(model):
            raise UsageError(f"{t.id} runs in the {t.layout} layout; got {model}")
    else:
        model = _model(args)
    if args.script is not None:
        text = args.script.read_text(encoding="utf-8")
        level = args.level or (THEOREMS[args.theorem].level if args.theorem else "mod2")
        script = Script(args.theorem or args.script.stem, model, parse_script(text), level=level)
    else:
        script = builtin_script(args.theorem, args.genus, model=model)
    ctx = _context(args, model)
    log.info("running %s at %s (%d steps)", script.id, model, len(script.steps))
    report = run_script(script, ctx, level=args.level, force=args.force)
    steps = []
    for s in report.steps:
        d = {"index": s.index, "kind": s.kind, "source": s.source, "status": s.status}
        if s.detail:
            d["detail"] = s.detail
        if s.witness:
            d["witness"] = s.witness
        steps.append(d)
    result = {"script": script.id, "level": report.level, "variants": report.variants,
              "header": report.header}
    return _doc(args, argv, model, steps, result, start, report.verdict)


def cmd_order(args, argv: list[str]) -> dict:
    start = time.perf_counter()
    if args.genus is None:
        raise UsageError("--genus is required")
    if args.gens == "omori":
        model = _model(args)
    else:
        t = check_range(args.gens, args.genus)
        model = GenusModel(args.genus, args.layout or t.layout)
    check_cap(model.g, force=args.force)
    ctx = _context(args, model)
    ref = omori_matrices(ctx)
    gens = ref if args.gens == "omori" else generator_matrices(args.gens, model.g, ctx)
    log.info("building the stabilizer chain for %s at %s", args.gens, model)
    chain = stabilizer_chain(gens, force=args.force)
    order = chain.order
    target = target_order(model.g)
    steps = [
        _step(1, "order", f"|<{args.gens}>| = {order}", True, f"orbits {chain.orbit_sizes}"),
        _step(2, "target", f"target order {target}", order == target,
              "" if order == target else f"{order} != {target}"),
    ]
    if args.gens == "omori":
        same = True
    else:
        log.info("comparing with the Omori generators")
        same = same_group(gens, ref, force=args.force)
    steps.append(_step(3, "same_group", f"<{args.gens}> == <omori>", same))
    result: dict[str, Any] = {"gens": args.gens, "order": order, "target_order": target,
                              "same_group": same, "orbit_sizes": chain.orbit_sizes}
    if order <= BRUTE_LIMIT:
        closure = brute_closure(gens, cap=BRUTE_LIMIT + 1)
        steps.append(_step(4, "brute_closure", f"closure count {closure}", closure == order))
        result["brute_closure"] = closure
    return _doc(args, argv, model, steps, result, start)


def cmd_catalog(args, argv: list[str]) -> dict:
    start = time.perf_counter()
    if args.check is not None:
        cat = read_catalog(args.check)
        model = cat.model
        if args.genus is not None and args.genus != model.g:
            raise UsageError(f"--genus {args.genus} does not match the catalog (g={model.g})")
    else:
        model = _model(args)
        cat = _context(args, model).catalog
    result: dict[str, Any] = {"catalog": format_catalog(cat), "seeds": {
        "a2": str(cat.seeds.a2), "f1": str(cat.seeds.f1), "provenance": cat.seeds.provenance}}
    steps: list[dict] = []
    if args.validate or args.check is not None:
        report = validate_catalog(cat, MappingClassSpec.standard(model))
        steps = [_step(i, r.kind, r.name, r.passed, r.detail) for i, r in enumerate(report.results, 1)]
    return _doc(args, argv, model, steps, result, start)


def cmd_eval(args, argv: list[str]) -> dict:
    start = time.perf_counter()
    model = _model(args)
    ctx = _context(args, model)
    w = parse_word(args.word)
    m = evaluate_mod2(w, Environment(model), ctx.catalog, ctx.spec)
    form = preserves_form(m)
    result = {"word": format_word(w), "hex_rows": m.hex_rows(), "preserves_form": form,
              "permutation": m.is_permutation, "identity": m.is_identity, "digest": m.digest()}
    steps = [_step(1, "preserves_form", "matrix preserves the mod-2 form", form)]
    return _doc(args, argv, model, steps, result, start)


def cmd_infer(args, argv: list[str]) -> dict:
    start = time.perf_counter()
    model = _model(args)
    log.info("searching seed classes at %s", model)
    try:
        found = infer_seed_classes(model)
    except InferenceError as exc:
        steps = [_step(1, "infer", "consistent seed assignments", False, str(exc))]
        return _doc(args, argv, model, steps, {"candidates": []}, start)
    cands = [{"a2": str(c.a2), "f1": str(c.f1), "origin": c.origin, "default": c.default} for c in found]
    has_default = any(c.default for c in found)
    steps = [
        _step(1, "infer", "consistent seed assignments", True, f"{len(found)} found"),
        _step(2, "default", "shipped default seeds are consistent", has_default),
    ]
    return _doc(args, argv, model, steps, {"candidates": cands}, start)


VERBS = {"verify": cmd_verify, "order": cmd_order, "catalog": cmd_catalog,
         "eval": cmd_eval, "infer": cmd_infer}


# ---------------------------------------------------------------------------
# rendering

def _steps_text(doc: dict) -> list[str]:
    lines = []
    for s in doc["steps"]:
        extra = f"  [{s['detail']}]" if s.get("detail") else ""
        lines.append(f"{s['status'].upper():7s} {s['index']:3d}  {s['source']}{extra}")
    return lines


def render_text(doc: dict) -> str:
    verb, res = doc["command"]["verb"], doc["result"]
    head = f"# twistgen {verb}  g={doc['genus']}  layout={doc['layout']}"
    if verb == "catalog" and not doc["steps"]:
        # the bare dump is the canonical catalog file
        return res["catalog"].rstrip("\n")
    lines = [head]
    if verb == "verify":
        lines.append(f"# script {res['script']}  level={res['level']}")
        lines.append(f"# {res['header']}")
        if res["variants"]:
            lines.append("# variants: " + ", ".join(res["variants"]))
    elif verb == "order":
        lines.append(f"order: {res['order']}")
        lines.append(f"target_order: {res['target_order']}")
        lines.append(f"same_group: {str(res['same_group']).lower()}")
    elif verb == "eval":
        lines.append(f"word: {res['word']}")
        lines += [f"  {row}" for row in res["hex_rows"]]
        lines.append(f"preserves_form: {str(res['preserves_form']).lower()}  "
                     f"permutation: {str(res['permutation']).lower()}")
    elif verb == "infer":
        for c in res["candidates"]:
            mark = "  [default]" if c["default"] else ""
            lines.append(f"a2 = {c['a2']}  f1 = {c['f1']}  ({c['origin']}){mark}")
    lines += _steps_text(doc)
    failed = sum(s["status"] == "fail" for s in doc["steps"])
    skipped = sum(s["status"] == "skipped" for s in doc["steps"])
    lines.append(f"verdict: {doc['verdict']}  ({len(doc['steps'])} steps, {failed} failed, {skipped} skipped)")
    return "\n".join(lines)


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2)
    return render_text(doc)


# ---------------------------------------------------------------------------
# entry points

def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse: 0 for --help/--version, 2 for usage errors
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="twistgen: %(message)s", stream=sys.stderr, force=True)
    try:
        doc = VERBS[args.verb](args, argv)
    except _USAGE_ERRORS as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"twistgen: error: {msg}", file=sys.stderr)
        return EXIT_USAGE

    validate_report(doc)
    text = render(doc, args.format)
    if args.out is not None:
        args.out.write_text(text + "\n", encoding="utf-8")
        log.info("report written to %s (verdict %s)", args.out, doc["verdict"])
    else:
        print(text)
    return EXIT_OK if doc["verdict"] == "pass" else EXIT_FAIL


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
