import subprocess
import sys

import pytest

from gaifman_clans.cli import EXIT_GUARD, EXIT_INPUT, EXIT_OK, RunConfig, main
from gaifman_clans.core import InputError
from gaifman_clans.formats import parse_graph_file, parse_implications
from gaifman_clans.implications import generate_implications
from helpers import DATA, load_graph


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_implications_from_graph_file(capsys):
    code, out, _ = run(capsys, "implications", DATA / "five_items.graph")
    assert code == EXIT_OK
    assert parse_implications(out).same_rules(generate_implications(load_graph("five_items.graph")))
    assert "a d -> b c" in out.splitlines()


def test_reconstruct_subcommand(capsys):
    code, out, _ = run(capsys, "reconstruct", DATA / "reconstruct.imp", "--seed-present")
    assert code == EXIT_OK
    s = parse_graph_file(out)
    assert {s.labels[u] + s.labels[v] for u, v in s.edges()} == {"ab", "ac", "ad", "cd", "ce"}
    code, out, _ = run(capsys, "reconstruct", DATA / "reconstruct.imp", "--seed-absent")
    assert parse_graph_file(out) == s.complement()


def test_reconstruct_rejects_foreign_set(tmp_path, capsys):
    bad = tmp_path / "bad.imp"
    bad.write_text("a b -> c\n")
    code, _, err = run(capsys, "reconstruct", bad)
    assert code == EXIT_INPUT
    assert "not a modular implication set" in err


def test_decompose_titanic_dot(capsys):
    code, out, _ = run(capsys, "decompose", DATA / "titanic.csv")
    assert code == EXIT_OK
    assert out.startswith("graph decomposition {")
    assert 'label="primitive"' in out
    for item in ["Class=Crew", "Age=Adult", "Age=Child", "Sex=Male", "Survived=No"]:
        assert f'label="{item}"' in out


def test_decompose_is_byte_stable(tmp_path, capsys):
    a, b = tmp_path / "a.dot", tmp_path / "b.dot"
    run(capsys, "decompose", DATA / "titanic.csv", "--out", a)
    run(capsys, "decompose", DATA / "titanic.csv", "--out", b, "--order-seed", "4")
    assert a.read_bytes() == b.read_bytes()


def test_decompose_threshold_with_others(capsys):
    code, out, _ = run(
        capsys, "decompose", DATA / "titanic.csv", "--variant", "threshold", "--threshold", "1000",
        "--others-min", "2", "--format", "canonical",
    )
    assert code == EXIT_OK
    assert out.strip() == "complete[0](Others(7), complete[1](Sex=Male, Survived=No, Age=Adult))"


@pytest.mark.parametrize("variant", [["--variant", "linear", "--interval", "100"], ["--variant", "exp"],
                                     ["--variant", "exp", "--lower-threshold", "50"]])
def test_other_variants_run(capsys, variant):
    code, out, _ = run(capsys, "decompose", DATA / "titanic.csv", *variant, "--format", "text")
    assert code == EXIT_OK
    assert "Class=Crew" in out


def test_transactional_input_and_filter(tmp_path, capsys):
    basket = tmp_path / "b.txt"
    basket.write_text("650 632\n650,632,401\n\n401 999\n650 401\n")
    code, out, _ = run(capsys, "decompose", basket, "--min-count", "2", "--format", "canonical")
    assert code == EXIT_OK
    assert "999" not in out


def test_closures_report(capsys):
    code, out, _ = run(capsys, "closures", DATA / "complete_nodes.imp")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "* {a,b,c,d,e}"


def test_closures_guard_exit_code(tmp_path, capsys):
    big = tmp_path / "big.graph"
    big.write_text("n 17\n")
    code, _, err = run(capsys, "closures", big)
    assert code == EXIT_GUARD
    assert "guard" in err


def test_oracle_check(capsys):
    code, out, _ = run(capsys, "oracle-check", DATA / "split_example.graph", "--order-seed", "3")
    assert code == EXIT_OK
    assert out.startswith("agree:")
    code, _, _ = run(capsys, "oracle-check", DATA / "titanic.csv", "--max-items", "5")
    assert code == EXIT_GUARD


def test_input_errors(tmp_path, capsys):
    assert run(capsys, "decompose", tmp_path / "missing.graph")[0] == EXIT_INPUT
    odd = tmp_path / "x.unknown"
    odd.write_text("n 2\n")
    assert run(capsys, "decompose", odd)[0] == EXIT_INPUT
    assert run(capsys, "decompose", odd, "--input-kind", "graph")[0] == EXIT_OK
    bad = tmp_path / "bad.graph"
    bad.write_text("n 2\n0 0 1\n")
    assert run(capsys, "decompose", bad)[0] == EXIT_INPUT
    assert run(capsys, "decompose", DATA / "titanic.csv", "--variant", "threshold")[0] == EXIT_INPUT
    assert run(capsys, "decompose", DATA / "titanic.csv", "--variant", "linear", "--interval", "0")[0] == EXIT_INPUT
    assert run(capsys, "decompose", DATA / "five_items.graph", "--others-min", "1")[0] == EXIT_INPUT
    assert run(capsys, "decompose", DATA / "reconstruct.imp")[0] == EXIT_INPUT


def test_run_config_validation(tmp_path):
    with pytest.raises(InputError):
        RunConfig(tmp_path, "sql")
    with pytest.raises(InputError):
        RunConfig(tmp_path, "relational", min_count=2, top_items=3)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "gaifman_clans", "implications", str(DATA / "five_items.graph")],
        capture_output=True, text=True, check=True,
    )
    assert parse_implications(proc.stdout).same_rules(generate_implications(load_graph("five_items.graph")))
