import json

import pytest

from afqubo.cli import main
from afqubo.framework import parse_apx
from conftest import FIG1_APX

CYCLE3_APX = "arg(a). arg(b). arg(c). att(a,b). att(b,c). att(c,a).\n"


@pytest.fixture
def fig1_path(tmp_path):
    path = tmp_path / "fig1.apx"
    path.write_text(FIG1_APX)
    return str(path)


@pytest.fixture
def cycle3_path(tmp_path):
    path = tmp_path / "cycle3.apx"
    path.write_text(CYCLE3_APX)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_solve_dc_co_yes(fig1_path, capsys):
    code, out, _ = run(capsys, "solve", "--task", "DC-CO", "--arg", "c",
                       "--seed", "1", fig1_path)
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0] == "YES"
    assert lines[1] == "w a c e"


def test_solve_dc_co_no(fig1_path, capsys):
    code, out, _ = run(capsys, "solve", "--task", "DC-CO", "--arg", "b",
                       "--seed", "1", "--restarts", "3", fig1_path)
    assert code == 3
    assert out.strip().splitlines()[0] == "NO"


def test_solve_ex_st_no_on_cycle(cycle3_path, capsys):
    code, out, _ = run(capsys, "solve", "--task", "EX-ST", "--seed", "0",
                       "--restarts", "3", cycle3_path)
    assert code == 3
    assert out.strip() == "NO"


def test_solve_json_report(fig1_path, capsys):
    code, out, _ = run(capsys, "solve", "--task", "EX-ST", "--seed", "0",
                       "--json", "--check", fig1_path)
    assert code == 0
    doc = json.loads(out)
    assert doc["answer"] == "YES"
    assert doc["certified"] is True
    assert doc["witness"] in (["a", "d"], ["a", "c", "e"])
    assert doc["oracle"] == {"answer": "YES", "agrees": True}
    assert doc["energy"] == 0


def test_solve_skeptical_negative(fig1_path, capsys):
    # b is not in every complete extension: skeptical answer NO, certified
    code, out, _ = run(capsys, "solve", "--task", "SCneg-CO", "--arg", "b",
                       "--seed", "1", "--json", "--check", fig1_path)
    doc = json.loads(out)
    assert code == 0
    assert doc["answer"] == "NO"
    assert doc["certified"] is True
    assert doc["encoded_answer"] == "YES"
    assert "b" not in (doc["witness"] or [])
    assert doc["oracle"]["agrees"] is True
    # a is skeptically accepted: the negation search exhausts, uncertified YES
    code, out, _ = run(capsys, "solve", "--task", "SCneg-CO", "--arg", "a",
                       "--seed", "1", "--restarts", "3", "--json", fig1_path)
    doc = json.loads(out)
    assert code == 3
    assert doc["answer"] == "YES"
    assert doc["certified"] is False


def test_solve_missing_arg_is_config_error(fig1_path, capsys):
    code, _, err = run(capsys, "solve", "--task", "DC-CO", fig1_path)
    assert code == 2
    assert "needs --arg" in err


def test_solve_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.apx"
    bad.write_text("arg(a). att(a,zzz).")
    code, _, err = run(capsys, "solve", "--task", "EX-ST", str(bad))
    assert code == 2
    assert "undeclared" in err


def test_solve_ne_tasks(fig1_path, capsys):
    for task in ("NE-AD", "NE-CO", "NE-PR", "NE-SST"):
        code, out, _ = run(capsys, "solve", "--task", task, "--seed", "0", fig1_path)
        assert code == 0
        assert out.splitlines()[0] == "YES"


def test_enforce_plain_output(fig1_path, capsys):
    code, out, _ = run(capsys, "enforce", "--target", "a,e", "--lambda", "26",
                       "--reads", "512", "--seed", "42",
                       "--beta-hot", "0.0267", "--beta-cold", "4.6", fig1_path)
    assert code == 0
    lines = out.strip().splitlines()
    assert "-att(d,e)" in lines
    assert lines[-1] == "distance 1"
    framework_lines = [l for l in lines if l.startswith(("arg(", "att("))]
    modified = parse_apx("\n".join(framework_lines))
    assert (3, 4) not in modified.attacks


def test_enforce_json(fig1_path, capsys):
    code, out, _ = run(capsys, "enforce", "--target", "a,e", "--lambda", "26",
                       "--reads", "512", "--seed", "42", "--json",
                       "--beta-hot", "0.0267", "--beta-cold", "4.6", fig1_path)
    doc = json.loads(out)
    assert code == 0
    assert doc["verified"] is True
    assert doc["distance"] == 1
    assert doc["removed"] == [["d", "e"]]
    assert doc["added"] == []
    assert doc["lambda"] == 26


def test_enforce_target_file(fig1_path, tmp_path, capsys):
    targets = tmp_path / "targets.txt"
    targets.write_text("a\ne\n")
    code, out, _ = run(capsys, "enforce", "--target-file", str(targets),
                       "--lambda", "26", "--reads", "256", "--seed", "7",
                       "--json", fig1_path)
    assert code in (0, 3)
    assert json.loads(out)["target"] == ["a", "e"]


def test_verify_and_enumerate(fig1_path, capsys):
    code, out, _ = run(capsys, "verify", "--sigma", "complete", "--set", "a,d", fig1_path)
    assert code == 0 and out.strip() == "YES"
    code, out, _ = run(capsys, "verify", "--sigma", "stable", "--set", "a,c", fig1_path)
    assert code == 0 and out.strip() == "NO"
    code, out, _ = run(capsys, "enumerate", "--sigma", "complete", fig1_path)
    assert code == 0
    assert out.splitlines() == ["a", "a d", "a c e"]
    code, out, _ = run(capsys, "enumerate", "--sigma", "preferred", "--json", fig1_path)
    assert json.loads(out) == [["a", "d"], ["a", "c", "e"]]


def test_gen_writes_file_and_manifest(tmp_path, capsys):
    out_path = tmp_path / "er.apx"
    code, out, _ = run(capsys, "gen", "--variant", "er", "-n", "12",
                       "--seed", "5", "--out", str(out_path))
    assert code == 0
    af = parse_apx(out_path.read_text())
    assert af.num_arguments == 12
    doc = json.loads((tmp_path / "er.apx.manifest.json").read_text())
    assert doc["n"] == 12 and doc["seed"] == 5
    assert doc["num_attacks"] == len(af.attacks)


def test_gen_b3_to_stdout(capsys):
    code, out, err = run(capsys, "gen", "--variant", "b3", "-n", "8", "--seed", "2")
    assert code == 0
    af = parse_apx(out)
    assert af.num_arguments >= 9
    assert json.loads(err)["variant"] == "B3"


def test_gen_iccma_format(tmp_path, capsys):
    out_path = tmp_path / "er.af"
    code, _, _ = run(capsys, "gen", "--variant", "er", "-n", "6", "--seed", "1",
                     "--format", "iccma", "--out", str(out_path))
    assert code == 0
    assert out_path.read_text().startswith("p af 6")


def test_encode_json(fig1_path, capsys):
    code, out, _ = run(capsys, "encode", "--task", "CO", fig1_path)
    doc = json.loads(out)
    assert code == 0
    assert doc["num_variables"] == 5
    assert doc["offset"] == 1
    assert doc["roles"]["0"] == "x:a"
    assert doc["nominal_variables"] == 15
    assert doc["expected_zero"] is True


def test_encode_dc_task_and_triangular(fig1_path, capsys):
    code, out, _ = run(capsys, "encode", "--task", "DC-CO", "--arg", "c",
                       "--triangular", fig1_path)
    assert code == 0
    for line in out.strip().splitlines():
        if line.startswith("#"):
            continue
        i, j, _ = line.split()
        assert int(i) <= int(j)


def test_encode_enforce(fig1_path, capsys):
    code, out, _ = run(capsys, "encode", "--task", "ENFORCE", "--target", "a,e",
                       fig1_path)
    doc = json.loads(out)
    assert code == 0
    assert doc["task"] == "ENFORCE"
    assert doc["lambda"] == 100
    assert doc["paper_variable_estimate"] == 3 * 25 + 5 * (2 - 3)
    assert doc["nominal_variables"] == 25 + 25 + 5 + 0 + 3 * 3


def test_config_file_fills_absent_flags(fig1_path, tmp_path, capsys):
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({"seed": 1, "restarts": 2, "timeout": 30}))
    code, out, _ = run(capsys, "solve", "--task", "DC-CO", "--arg", "c",
                       "--config", str(config), "--json", fig1_path)
    doc = json.loads(out)
    assert code == 0
    assert doc["seed"] == 1


def test_batch_directory(tmp_path, capsys):
    (tmp_path / "one.apx").write_text(FIG1_APX)
    (tmp_path / "two.apx").write_text(CYCLE3_APX)
    code, out, _ = run(capsys, "solve", "--task", "EX-ST", "--dir", "--seed", "0",
                       "--restarts", "2", "--json", "--check", str(tmp_path))
    doc = json.loads(out)
    assert code == 0
    assert doc["summary"]["count"] == 2
    assert doc["summary"]["yes"] == 1
    assert doc["summary"]["no"] == 1
    assert doc["summary"]["oracle_agreements"] == 2
    answers = {r["input"].rsplit("/", 1)[-1]: r["answer"] for r in doc["instances"]}
    assert answers == {"one.apx": "YES", "two.apx": "NO"}


def test_batch_plain_lines(tmp_path, capsys):
    (tmp_path / "one.apx").write_text(FIG1_APX)
    code, out, _ = run(capsys, "solve", "--task", "NE-AD", "--dir", "--seed", "0",
                       str(tmp_path))
    assert code == 0
    assert "one.apx\tYES" in out
    assert out.strip().endswith("0 errors")


def test_batch_parallel_jobs(tmp_path, capsys):
    (tmp_path / "one.apx").write_text(FIG1_APX)
    (tmp_path / "two.apx").write_text(CYCLE3_APX)
    code, out, _ = run(capsys, "solve", "--task", "EX-ST", "--dir", "--seed", "0",
                       "--restarts", "2", "--jobs", "2", "--json", str(tmp_path))
    doc = json.loads(out)
    assert code == 0
    assert doc["summary"]["count"] == 2
    assert {r["answer"] for r in doc["instances"]} == {"YES", "NO"}


def test_cli_determinism(fig1_path, capsys):
    args = ("solve", "--task", "DC-ST", "--arg", "e", "--seed", "11", "--json", fig1_path)
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    a, b = json.loads(first), json.loads(second)
    a.pop("wall_time"), b.pop("wall_time")
    assert a == b
