from __future__ import annotations

import json
import shutil
import subprocess

import jsonschema
import pytest

from twistgen.cli import main, report_schema
from twistgen.surface import GenusModel, build_catalog, format_catalog


def run(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv: str) -> tuple[int, dict]:
    code, out, _ = run(capsys, *argv, "--format", "json", "-q")
    doc = json.loads(out)
    jsonschema.validate(doc, report_schema())
    return code, doc


def test_verify_builtin_passes_with_generation_skipped_above_cap(capsys):
    code, doc = run_json(capsys, "verify", "--theorem", "t29", "--genus", "29")
    assert code == 0 and doc["verdict"] == "pass"
    assert doc["steps"][-1]["status"] == "skipped"
    assert "cap" in doc["steps"][-1]["detail"]
    assert doc["result"]["script"] == "t29"


def test_verify_small_genus_runs_generation(capsys):
    code, doc = run_json(capsys, "verify", "--theorem", "t9odd", "--genus", "9")
    assert code == 0
    assert [s["status"] for s in doc["steps"]] == ["pass"] * len(doc["steps"])


def test_verify_signed_level(capsys):
    code, doc = run_json(capsys, "verify", "--theorem", "prop41", "--genus", "12", "--level", "signed")
    assert code == 0 and doc["result"]["level"] == "signed"


@pytest.mark.parametrize(
    "argv, message",
    [
        (["verify", "--theorem", "t29", "--genus", "25"], "t29 needs odd g >= 27; got g=25"),
        (["verify", "--genus", "9"], "--theorem or --script"),
        (["verify", "--theorem", "t4k2", "--genus", "30", "--layout", "rotation"], "reflection layout"),
        (["order", "--genus", "27", "--gens", "t29"], "GB"),
        (["eval", "--genus", "9", "--word", "T *"], "dangling"),
        (["eval", "--genus", "4", "--word", "T"], "unsupported genus"),
        (["catalog"], "--genus is required"),
        (["verify", "--theorem", "nope", "--genus", "9"], "invalid choice"),
    ],
)
def test_usage_errors_exit_2(capsys, argv, message):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert message in err


def test_failing_script_exits_1(capsys, tmp_path):
    path = tmp_path / "bad.tws"
    path.write_text("assert_eq T^9 == 1\nassert_eq A1 == B1\n", encoding="utf-8")
    code, doc = run_json(capsys, "verify", "--script", str(path), "--genus", "9")
    assert code == 1 and doc["verdict"] == "fail"
    assert [s["status"] for s in doc["steps"]] == ["pass", "fail"]


def test_script_syntax_error_exits_2(capsys, tmp_path):
    path = tmp_path / "bad.tws"
    path.write_text("assert_eq T ==\n", encoding="utf-8")
    code, _, err = run(capsys, "verify", "--script", str(path), "--genus", "9")
    assert code == 2 and "line 1" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--theorem", "t4k3_7", "--genus", "7"],
        ["order", "--genus", "5", "--gens", "omori"],
        ["catalog", "--genus", "30", "--layout", "reflection", "--validate"],
        ["eval", "--genus", "9", "--word", "T^-4 * A1"],
    ],
)
def test_text_and_json_verdicts_agree(capsys, argv):
    code_json, doc = run_json(capsys, *argv)
    code_text, out, _ = run(capsys, *argv, "-q")
    assert code_json == code_text == 0
    assert f"verdict: {doc['verdict']}" in out


def test_order_of_omori_image_at_g5(capsys):
    code, doc = run_json(capsys, "order", "--genus", "5", "--gens", "omori")
    assert code == 0
    assert doc["result"]["order"] == doc["result"]["brute_closure"] == doc["result"]["target_order"] == 720


def test_order_of_theorem_set_at_g9(capsys):
    code, doc = run_json(capsys, "order", "--genus", "9", "--gens", "t9odd")
    assert code == 0
    assert doc["result"]["order"] == 47_377_612_800
    assert doc["result"]["same_group"] is True


def test_catalog_dump_is_the_canonical_file(capsys, tmp_path):
    code, out, _ = run(capsys, "catalog", "--genus", "29", "-q")
    assert code == 0
    assert out == format_catalog(build_catalog(GenusModel(29)))
    assert out.splitlines()[3] == "a1 = x1+x2"
    path = tmp_path / "g29.txt"
    assert main(["catalog", "--genus", "29", "--out", str(path), "-q"]) == 0
    code, doc = run_json(capsys, "catalog", "--check", str(path))
    assert code == 0 and doc["steps"]


def test_corrupted_catalog_fails_check_and_verify(capsys, tmp_path):
    text = format_catalog(build_catalog(GenusModel(9))).replace("b2 = x4+x5", "b2 = x4+x6")
    path = tmp_path / "bad.txt"
    path.write_text(text, encoding="utf-8")
    code, doc = run_json(capsys, "catalog", "--check", str(path))
    assert code == 1
    assert any(s["source"] == "T(b2)=c2" and s["status"] == "fail" for s in doc["steps"])
    code, doc = run_json(capsys, "verify", "--theorem", "t9odd", "--genus", "9", "--catalog", str(path))
    assert code == 1
    # exactly the steps that mention b2
    failed = [s for s in doc["steps"] if s["status"] == "fail"]
    assert [s["index"] for s in failed] == [1, 2, 6, 7]
    assert all("b2" in s["source"].lower() for s in failed)


def test_seed_file_override(capsys, tmp_path):
    path = tmp_path / "seeds.txt"
    path.write_text("rotation 1 9- a2=x1+x2+x3+x4 f1=x1+x3 default | test\n", encoding="utf-8")
    code, doc = run_json(capsys, "catalog", "--genus", "9", "--seeds", str(path))
    assert code == 0
    assert doc["result"]["seeds"]["f1"] == "x1+x3"


def test_eval_reports_matrix(capsys):
    code, doc = run_json(capsys, "eval", "--genus", "9", "--word", "T^9")
    assert code == 0
    assert doc["result"]["identity"] is True
    assert doc["result"]["hex_rows"] == [format(1 << i, "03x") for i in range(9)]


def test_infer(capsys):
    code, doc = run_json(capsys, "infer", "--genus", "7", "--layout", "reflection")
    assert code == 0
    assert len(doc["result"]["candidates"]) == 26
    assert sum(c["default"] for c in doc["result"]["candidates"]) == 1


def test_version_and_console_script(capsys):
    assert main(["--version"]) == 0
    assert "twistgen" in capsys.readouterr().out
    exe = shutil.which("twistgen")
    if exe is None:
        pytest.skip("console script not installed")
    proc = subprocess.run([exe, "eval", "--genus", "5", "--word", "T", "-q"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "verdict: pass" in proc.stdout


def test_eval_rotation_power_is_a_permutation(capsys):
    code, doc = run_json(capsys, "eval", "--genus", "29", "--word", "T^-4")
    assert code == 0
    assert doc["result"]["permutation"] is True and doc["result"]["preserves_form"] is True


def test_reports_are_reproducible(capsys):
    argv = ("verify", "--theorem", "t4k2", "--genus", "30")
    docs = [run_json(capsys, *argv)[1] for _ in range(2)]
    for d in docs:
        d.pop("seconds")
    assert docs[0] == docs[1]


def test_infer_at_g29_includes_default(capsys):
    code, doc = run_json(capsys, "infer", "--genus", "29")
    assert code == 0
    defaults = [c for c in doc["result"]["candidates"] if c["default"]]
    assert defaults == [{"a2": "x1+x2+x3+x4", "f1": "x2+x3", "origin": "block/block", "default": True}]
