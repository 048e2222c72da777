import json

import pytest

from ramify import cli, verify
from ramify.reporting import canonical_dumps


def run_cli(capsys, argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        import io
        import sys

        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


SWAN_JOB = {
    "command": "swan",
    "base": {"p": 2, "a": 1},
    "cover": {"type": "artin_schreier", "f": [[-1, [1]]]},
    "rep": {"ell": 3, "n": 1, "r": 1, "images": {"sigma": [[[2]]]}},
}


def test_swan_job_golden(capsys, monkeypatch):
    code, report = run_cli(capsys, ["run"], stdin=json.dumps(SWAN_JOB), monkeypatch=monkeypatch)
    assert code == 0
    assert report["command"] == "swan"
    assert report["results"]["swan"] == {"num": 1, "den": 1}
    assert report["results"]["breaks"] == [[1, 1]]
    assert report["results"]["single_break"] == 1
    assert report["version"] == "0.1.0"
    assert isinstance(report["inputs_digest"], str) and len(report["inputs_digest"]) == 64


def test_herbrand_job_tame(capsys, monkeypatch):
    job = {"command": "herbrand", "base": {"p": 2, "a": 2}, "cover": {"type": "kummer", "m": 3}}
    code, report = run_cli(capsys, ["run"], stdin=json.dumps(job), monkeypatch=monkeypatch)
    assert code == 0
    phi = report["results"]["phi"]
    assert phi["breakpoints"] == [[0, 0], [1, {"num": 1, "den": 3}]]
    assert phi["final_slope"] == {"num": 1, "den": 3}
    assert report["results"]["hasse_arf"] is True


def test_filtration_job_with_direct_break_table(capsys, monkeypatch):
    job = {
        "command": "filtration",
        "base": {"p": 2, "a": 1},
        "break_table": {
            "labels": ["1", "s"],
            "mul_table": [[0, 1], [1, 0]],
            "iG": {"s": 2},
        },
    }
    code, report = run_cli(capsys, ["run"], stdin=json.dumps(job), monkeypatch=monkeypatch)
    assert code == 0
    assert report["results"]["filtration"] == [[0, ["1", "s"]], [1, ["1", "s"]], [2, ["1"]]]


def test_swan_job_on_direct_break_table(capsys, monkeypatch):
    job = {
        "command": "swan",
        "base": {"p": 2, "a": 1},
        "break_table": {
            "labels": ["1", "s"],
            "mul_table": [[0, 1], [1, 0]],
            "iG": {"s": 2},
        },
        "rep": {"ell": 3, "n": 1, "r": 1, "images": {"s": [[[2]]]}},
    }
    code, report = run_cli(capsys, ["run"], stdin=json.dumps(job), monkeypatch=monkeypatch)
    assert code == 0
    assert report["results"]["swan"] == {"num": 1, "den": 1}


def test_bound_job(capsys, monkeypatch):
    job = dict(SWAN_JOB)
    job["command"] = "bound"
    job["params"] = {"N": 1}
    code, report = run_cli(capsys, ["run"], stdin=json.dumps(job), monkeypatch=monkeypatch)
    assert code == 0
    results = report["results"]
    assert results["inertia"]["P_order"] == 2
    assert results["tameizing"]["index_tame"] == 2
    assert results["constants"]["N_prime"] == 3
    assert results["wild_bound"]["ok"] is True
    assert report["warnings"]


def test_enum_probe_job(capsys, monkeypatch):
    job = {
        "command": "enum",
        "params": {"op": "abelian_p_bound_probe", "r": 2, "ell": 2, "p": 3, "s": 1},
    }
    code, report = run_cli(capsys, ["run"], stdin=json.dumps(job), monkeypatch=monkeypatch)
    assert code == 0
    assert report["results"]["max_order_found"] == 9
    assert report["results"]["le_linear_bound"] is False
    assert report["results"]["le_torus_bound"] is True


def test_enum_max_order_and_sample_jobs(capsys, monkeypatch):
    job = {"command": "enum", "params": {"op": "max_ell_element_order", "r": 2, "ell": 2, "n": 1}}
    code, report = run_cli(capsys, ["run"], stdin=json.dumps(job), monkeypatch=monkeypatch)
    assert code == 0
    assert report["results"] == {"op": "max_ell_element_order", "max_order": 2, "mode": "exhaustive"}

    job = {
        "command": "enum",
        "params": {"op": "inertia_candidate_sample", "r": 2, "ell": 3, "n": 1, "p": 2, "count": 2},
    }
    code, report = run_cli(capsys, ["run"], stdin=json.dumps(job), monkeypatch=monkeypatch)
    assert code == 0
    assert len(report["results"]["orders"]) == 2


def test_params_seed_reaches_sampling(capsys, monkeypatch):
    job = {
        "command": "enum",
        "params": {
            "op": "inertia_candidate_sample",
            "r": 2, "ell": 3, "n": 1, "p": 2, "count": 3, "seed": 17,
        },
    }
    _, r1 = run_cli(capsys, ["run"], stdin=json.dumps(job), monkeypatch=monkeypatch)
    _, r2 = run_cli(capsys, ["run"], stdin=json.dumps(job), monkeypatch=monkeypatch)
    assert r1["results"] == r2["results"]
    assert r1["results"]["seed"] == 17


def test_malformed_json_exit_one(capsys, monkeypatch):
    code, report = run_cli(capsys, ["run"], stdin="{not json", monkeypatch=monkeypatch)
    assert code == 1
    assert report["error"]["type"] == "InputSchemaError"


def test_module_error_surfaced_with_name(capsys, monkeypatch):
    job = {"command": "filtration", "base": {"p": 2, "a": 1}, "cover": {"type": "kummer", "m": 3}}
    code, report = run_cli(capsys, ["run"], stdin=json.dumps(job), monkeypatch=monkeypatch)
    assert code == 1
    assert report["error"]["type"] == "MissingRootsOfUnity"


def test_cross_field_validation(capsys, monkeypatch):
    job = dict(SWAN_JOB)
    job["rep"] = {"ell": 2, "n": 1, "r": 1, "images": {"sigma": [[[1]]]}}
    code, report = run_cli(capsys, ["run"], stdin=json.dumps(job), monkeypatch=monkeypatch)
    assert code == 1
    assert report["error"]["type"] == "InputSchemaError"


def test_unknown_suite(capsys):
    code, report = run_cli(capsys, ["verify", "nonsense"])
    assert code == 1
    assert report["error"]["type"] == "UnknownSuite"


def test_verify_all_passes_and_is_deterministic(capsys):
    code1 = cli.main(["verify", "all"])
    out1 = capsys.readouterr().out
    code2 = cli.main(["verify", "all"])
    out2 = capsys.readouterr().out
    assert code1 == code2 == 0
    assert out1 == out2
    report = json.loads(out1)
    assert report["results"]["ok"] is True
    assert all(inst["pass"] for inst in report["results"]["instances"])


def test_verify_exit_two_on_violation(capsys, monkeypatch):
    def failing_suite(options):
        return [{"name": "stub", "pass": False}]

    monkeypatch.setitem(verify._SUITES, "hasse_arf", failing_suite)
    code = cli.main(["verify", "hasse_arf"])
    out = json.loads(capsys.readouterr().out)
    assert code == 2
    assert out["results"]["ok"] is False


def test_no_floats_anywhere_in_reports(capsys, monkeypatch):
    code, report = run_cli(capsys, ["run"], stdin=json.dumps(SWAN_JOB), monkeypatch=monkeypatch)

    def scan(node):
        assert not isinstance(node, float), node
        if isinstance(node, dict):
            for k, v in node.items():
                scan(k)
                scan(v)
        elif isinstance(node, list):
            for v in node:
                scan(v)

    scan(report)
    code = cli.main(["verify", "all"])
    scan(json.loads(capsys.readouterr().out))


def test_output_file_written_atomically(tmp_path, capsys, monkeypatch):
    target = tmp_path / "report.json"
    job_file = tmp_path / "job.json"
    job_file.write_text(json.dumps(SWAN_JOB))
    code = cli.main(["run", "--input", str(job_file), "--output", str(target)])
    assert code == 0
    report = json.loads(target.read_text())
    assert report["results"]["swan"] == {"num": 1, "den": 1}
    leftovers = [p for p in tmp_path.iterdir() if p.name.startswith(".ramify-")]
    assert leftovers == []


def test_same_job_same_report_bytes(capsys, monkeypatch):
    _, r1 = run_cli(capsys, ["run"], stdin=json.dumps(SWAN_JOB), monkeypatch=monkeypatch)
    _, r2 = run_cli(capsys, ["run"], stdin=json.dumps(SWAN_JOB), monkeypatch=monkeypatch)
    assert canonical_dumps(r1) == canonical_dumps(r2)


def test_jordan_table_flag(tmp_path, capsys, monkeypatch):
    table = tmp_path / "jordan.json"
    table.write_text(json.dumps({"1": 1, "2": 12}))
    job = dict(SWAN_JOB)
    job["command"] = "bound"
    job["params"] = {"N": 1}
    job_file = tmp_path / "job.json"
    job_file.write_text(json.dumps(job))
    code = cli.main(["run", "--input", str(job_file), "--jordan-table", str(table)])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"x": 1}))
    code = cli.main(["run", "--input", str(job_file), "--jordan-table", str(bad)])
    out = json.loads(capsys.readouterr().out)
    assert code == 1 and out["error"]["type"] == "InputSchemaError"
