"""CLI subcommands, exit codes, and output determinism."""
import json

import pytest

from conceptsim.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def salt(data_dir):
    return str(data_dir / "salt.json")


def test_validate_canonical(capsys, salt):
    code, out, err = run_cli(capsys, "validate", salt)
    assert code == 0
    assert out == "7 concepts, 2 layers, 4 patterns, 0 warnings\n"


def test_validate_reports_singleton_warning(capsys, tmp_path):
    path = tmp_path / "net.json"
    path.write_text(json.dumps({"concepts": [
        {"name": "a", "layer": 0, "patterns": []},
        {"name": "b", "layer": 1, "patterns": [["a"]]},
    ]}))
    code, out, _ = run_cli(capsys, "validate", str(path))
    assert code == 0
    assert "1 warnings" in out
    assert "warning:" in out


def test_validate_dangling_reference_exits_1(capsys, tmp_path):
    path = tmp_path / "net.json"
    path.write_text(json.dumps({"concepts": [
        {"name": "tasting", "layer": 0, "patterns": []},
        {"name": "salt", "layer": 1, "patterns": [["tasting", "umami"]]},
    ]}))
    code, _, err = run_cli(capsys, "validate", str(path))
    assert code == 1
    assert "umami" in err


def test_validate_missing_file_exits_2(capsys):
    code, _, err = run_cli(capsys, "validate", "no_such_file.json")
    assert code == 2
    assert "error" in err


def test_validate_bad_json_exits_2(capsys, tmp_path):
    path = tmp_path / "net.json"
    path.write_text("{nope")
    code, _, _ = run_cli(capsys, "validate", str(path))
    assert code == 2


def test_unknown_flag_exits_2(salt):
    with pytest.raises(SystemExit) as exc:
        main(["validate", salt, "--bogus"])
    assert exc.value.code == 2


def test_every_subcommand_has_help():
    for command in ("validate", "run", "check", "enumerate", "compare", "render"):
        with pytest.raises(SystemExit) as exc:
            main([command, "--help"])
        assert exc.value.code == 0


def test_run_salt_rejection(capsys, salt, data_dir):
    code, out, _ = run_cli(
        capsys, "run", salt, str(data_dir / "scenarios" / "salt_rejection.json")
    )
    assert code == 0
    assert out.splitlines() == [
        "phase 1: salt: Inferred, sugar: Inactive",
        "phase 2: salt: Rejected, sugar: Rejected",
    ]


def test_run_writes_golden_trace(capsys, salt, data_dir, golden_dir, tmp_path):
    out_path = tmp_path / "trace.csv"
    code, _, _ = run_cli(
        capsys, "run", salt, str(data_dir / "scenarios" / "salt_rejection.json"),
        "--trace", str(out_path),
    )
    assert code == 0
    assert out_path.read_bytes() == (golden_dir / "salt_rejection_trace.csv").read_bytes()


def test_run_render_flag(capsys, salt, data_dir):
    code, out, _ = run_cli(
        capsys, "run", salt, str(data_dir / "scenarios" / "decoupling.json"), "--render"
    )
    assert code == 0
    assert "salt" in out and "|" in out


def test_run_json_format(capsys, salt, data_dir):
    code, out, _ = run_cli(
        capsys, "run", salt, str(data_dir / "scenarios" / "salt_rejection.json"),
        "--format", "json",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["phases"][0]["verdicts"]["salt"] == "Inferred"
    assert payload["phases"][1]["verdicts"]["salt"] == "Rejected"
    assert payload["phases"][1]["termination"] == "FixedPoint"


def test_run_non_bottom_clamp_exits_1(capsys, salt, tmp_path):
    scenario = tmp_path / "bad.json"
    scenario.write_text('{"phases":[{"clamp":{"salt":1},"hold":"converge"}]}')
    code, _, err = run_cli(capsys, "run", salt, str(scenario))
    assert code == 1
    assert "NonBottomClamp" in err


def test_run_with_params_file(capsys, salt, data_dir, tmp_path):
    params = tmp_path / "params.json"
    params.write_text('{"error_routing": "all_global"}')
    code, out, _ = run_cli(
        capsys, "run", salt, str(data_dir / "scenarios" / "salt_rejection.json"),
        "--params", str(params),
    )
    assert code == 0
    assert "phase 2: salt: Rejected" in out


def test_run_bad_params_exit_1(capsys, salt, data_dir, tmp_path):
    params = tmp_path / "params.json"
    params.write_text('{"w_ff": 0.4}')
    code, _, err = run_cli(
        capsys, "run", salt, str(data_dir / "scenarios" / "decoupling.json"),
        "--params", str(params),
    )
    assert code == 1
    assert "w_ff <= theta" in err


def test_check_looking_white(capsys, salt):
    code, out, _ = run_cli(capsys, "check", salt, "--active", "looking,white")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "salt: InAllMaximal"
    assert "sugar: InAllMaximal" in lines


def test_check_reports_missing_element(capsys, salt):
    code, out, _ = run_cli(capsys, "check", salt, "--active", "looking,white,tasting")
    assert code == 0
    assert "salt: InNone" in out
    assert "missing: salty" in out


def test_check_empty_active(capsys, salt):
    code, out, _ = run_cli(capsys, "check", salt, "--active", "")
    assert code == 0
    assert out.count("InNone") == 2


def test_check_unknown_element_exits_1(capsys, salt):
    code, _, err = run_cli(capsys, "check", salt, "--active", "umami")
    assert code == 1
    assert "UnknownElement" in err


def test_enumerate_tasting_salty(capsys, salt):
    code, out, _ = run_cli(capsys, "enumerate", salt, "--active", "tasting,salty")
    assert code == 0
    assert out == "{salt}*\n"


def test_enumerate_empty_active(capsys, salt):
    code, out, _ = run_cli(capsys, "enumerate", salt, "--active", "")
    assert code == 0
    assert out == "{}*\n"


def test_enumerate_too_large_exits_1(capsys, tmp_path):
    concepts = [{"name": "e0", "layer": 0, "patterns": []},
                {"name": "e1", "layer": 0, "patterns": []}]
    concepts += [{"name": f"c{i}", "layer": 1, "patterns": [["e0", "e1"]]} for i in range(21)]
    path = tmp_path / "big.json"
    path.write_text(json.dumps({"concepts": concepts}))
    code, _, err = run_cli(capsys, "enumerate", str(path), "--active", "")
    assert code == 1
    assert "TooLarge" in err


def test_compare_canonical(capsys, salt):
    code, out, _ = run_cli(capsys, "compare", salt)
    assert code == 0
    assert out == "32 cases: AGREE 29, TIE-SELECTED 3, DISAGREE 0\n"


def test_compare_strict_passes_on_canonical(capsys, salt):
    code, _, _ = run_cli(capsys, "compare", salt, "--strict")
    assert code == 0


def test_compare_strict_fails_on_divergent_network(capsys, data_dir):
    code, out, _ = run_cli(capsys, "compare", str(data_dir / "caramel.json"), "--strict")
    assert code == 1
    assert "DISAGREE 4" in out
    assert out.count("DISAGREE clamp=") == 4


def test_compare_json(capsys, salt, data_dir):
    code, out, _ = run_cli(
        capsys, "compare", salt, "--params", str(data_dir / "params" / "no_lateral.json"),
        "--format", "json",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["disagree"] == 0
    assert payload["agree"] == 32


def test_render_subcommand(capsys, salt, golden_dir):
    code, out, _ = run_cli(capsys, "render", str(golden_dir / "salt_rejection_trace.csv"))
    assert code == 0
    assert "salt" in out and "g" in out


def test_stdout_is_deterministic(capsys, salt, data_dir):
    args = ("run", salt, str(data_dir / "scenarios" / "salt_rejection.json"), "--render")
    _, first, _ = run_cli(capsys, *args)
    _, second, _ = run_cli(capsys, *args)
    assert first == second
