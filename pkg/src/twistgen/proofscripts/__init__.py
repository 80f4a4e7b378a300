"""Proof scripts: the step language, the runner and the builtin scripts."""

from .builtin import THEOREMS, ScriptRangeError, builtin_script, builtin_text, generator_matrices
from .conjugator import ConjugatorError, find_conjugator
from .steps import Context, RunReport, Script, parse_script, run_script

__all__ = [
    "THEOREMS", "ScriptRangeError", "builtin_script", "builtin_text", "generator_matrices",
    "ConjugatorError", "find_conjugator",
    "Context", "RunReport", "Script", "parse_script", "run_script",
]
