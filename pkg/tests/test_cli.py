import csv
import io
import json
import math
import subprocess
import sys

import pytest

from cogrowthkit import __version__
from cogrowthkit.cli import main

from oracles import catalan

ACBC = "kind = rewriting\nmonoid = false\nalphabet = a b c\nrule = bc -> ac\n"
RIGHT_ZERO = "kind = finite_table\nmonoid = false\norder = 2\nrow = 1 2\nrow = 1 2\n"
LEFT_ZERO = "kind = finite_table\nmonoid = false\norder = 2\nrow = 1 1\nrow = 2 2\n"
C3 = "kind = finite_table\nmonoid = true\norder = 3\nrow = 1 2 3\nrow = 2 3 1\nrow = 3 1 2\n"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


@pytest.fixture
def spec(tmp_path):
    def write(text, name="s.txt"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write


def test_cogrowth_bicyclic_catalan(capsys):
    rep = run_json(capsys, "cogrowth", "--family", "bicyclic", "-N", "10", "--track", "1")
    lam = rep["lambda"]["1"]
    assert [int(lam[str(2 * k)]) for k in range(1, 6)] == [catalan(k) for k in range(1, 6)]
    assert all(int(lam[str(n)]) == 0 for n in range(1, 11, 2))


def test_cogrowth_csv_columns(capsys):
    code, out, _ = run(capsys, "cogrowth", "--family", "bicyclic", "-N", "10", "--track", "1", "--format", "csv")
    assert code == 0
    lines = [l for l in out.splitlines() if not l.startswith("#")]
    rows = list(csv.DictReader(io.StringIO("\n".join(lines))))
    assert list(rows[0]) == ["n", "lambda_1", "lambda_b", "lambda_c", "gamma_prime", "gamma"]
    assert len(rows) == 20
    assert [int(rows[2 * k - 1]["lambda_1"]) for k in range(1, 6)] == [1, 2, 5, 14, 42]
    assert rows[19]["lambda_1"] == "" and rows[19]["gamma_prime"] != ""
    assert rows[19]["gamma"] == ""  # beyond the safe gamma horizon N + 1


def test_cogrowth_free_rate(capsys):
    rep = run_json(capsys, "cogrowth", "--family", "free", "--rank", "2", "-N", "8")
    assert rep["rates"]["gamma"]["value"] == pytest.approx(math.sqrt(2), rel=1e-12)
    assert rep["rates"]["gamma"]["certified_lower_bound"] is True
    assert rep["gamma"]["16"] == "256"


def test_cogrowth_verify(capsys, spec):
    rep = run_json(capsys, "cogrowth", "--spec", spec(ACBC), "-N", "4", "--verify")
    assert rep["convolution_check"]["passed"] is True


def test_cogrowth_bad_spec_exit_2(capsys, spec):
    code, out, err = run(capsys, "cogrowth", "--spec", spec("kind = magma\n"))
    assert code == 2 and out == "" and "error" in err


def test_missing_spec_file_exit_2(capsys, tmp_path):
    code, _, err = run(capsys, "cogrowth", "--spec", str(tmp_path / "nope.txt"))
    assert code == 2


def test_resource_exit_3(capsys):
    code, _, err = run(capsys, "cogrowth", "--family", "free", "--rank", "3", "-N", "12", "--cap", "1000")
    assert code == 3 and "layer" in err


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["cogrowth", "--family", "magma"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["cogrowth", "--family", "free", "--cap", "0"])
    assert exc.value.code == 2


@pytest.mark.parametrize("argv", [
    ["cogrowth", "--family", "free", "-N", "0"],
    ["cogrowth", "--family", "free", "--spec", "x.txt"],
    ["cogrowth"],
    ["cogrowth", "--family", "bicyclic", "--track", "xyz"],
    ["operator", "--family", "free", "--radius", "0"],
    ["simulate", "--family", "free", "-n", "0"],
    ["structure", "--family", "bicyclic"],
    ["cogrowth", "--family", "free", "--gens", "x:1"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_operator_lattice(capsys):
    rep = run_json(capsys, "operator", "--family", "integer_lattice", "--dim", "1",
                   "--gens", "a:+1", "b:-1", "-N", "10")
    assert rep["spectral_radius_lower_bound"] == pytest.approx(0.9168, abs=1e-4)
    assert rep["walk_identity"]["passed"] is True
    first = rep["walk_norms"][0]
    assert first["norm_squared"] == {"numerator": "1", "denominator": "2"}


def test_operator_acbc_rayleigh(capsys, spec):
    rep = run_json(capsys, "operator", "--spec", spec(ACBC), "--rayleigh-samples", "1000")
    assert rep["rayleigh_max"] <= math.sqrt(5) / 3 + 1e-9
    assert rep["indegree"]["max_per_generator"][2] == 2


def test_operator_opposite_free_is_identical(capsys):
    a = run_json(capsys, "operator", "--family", "free", "--rank", "2", "-N", "10")
    b = run_json(capsys, "operator", "--family", "free", "--rank", "2", "-N", "10", "--opposite")
    assert b["config"]["opposite"] is True
    for key in ("walk_norms", "walk_identity", "spectral_radius_lower_bound", "norm_lower_bound"):
        assert a[key] == b[key]


def test_structure_examples(capsys, spec):
    rz = run_json(capsys, "structure", "--spec", spec(RIGHT_ZERO))["structure"]
    assert rz["left_reversible"] is True and rz["klawe"] is True
    lz = run_json(capsys, "structure", "--spec", spec(LEFT_ZERO))["structure"]
    assert lz["klawe"] is False and lz["left_reversible"] is False
    g = run_json(capsys, "structure", "--spec", spec(C3))["structure"]
    assert g["is_simple"] is True and g["right_cancellative"] is True


def test_structure_folner(capsys):
    rep = run_json(capsys, "structure", "--family", "integer_lattice", "--gens", "a:1", "b:-1",
                   "--folner-radius", "3")
    assert rep["folner"]["defect"] == {"numerator": "1", "denominator": "7"}


def test_simulate_local(capsys):
    rep = run_json(capsys, "simulate", "--family", "bicyclic", "-n", "2", "--trials", "20000", "--seed", "5")
    s = rep["samples"][1]
    assert s["exact"] == "1/4"
    assert abs(s["estimate"] - 0.25) <= 4 * s["stderr"]


def test_simulate_coincidence_csv(capsys):
    code, out, _ = run(capsys, "simulate", "--family", "free_commutative", "-n", "2", "--trials", "20000",
                       "--event", "coincidence", "--format", "csv")
    assert code == 0
    lines = [l for l in out.splitlines() if not l.startswith("#")]
    assert lines[0] == "n,trials,hits,estimate,stderr,exact"
    assert lines[2].split(",")[-1] == "3/8"


def test_simulate_threads_do_not_change_report(capsys):
    argv = ["simulate", "--family", "bicyclic", "-n", "3", "--trials", "70000", "--seed", "9"]
    a = run_json(capsys, *argv)
    b = run_json(capsys, *argv, "--threads", "4")
    a["config"].pop("threads", None)
    b["config"].pop("threads", None)
    assert a["samples"] == b["samples"]


@pytest.mark.parametrize("argv", [
    ["cogrowth", "--family", "bicyclic", "-N", "6", "--format", "csv"],
    ["operator", "--family", "free", "-N", "5", "--rayleigh-samples", "50", "--seed", "3"],
    ["simulate", "--family", "free", "-n", "3", "--trials", "5000", "--seed", "1"],
])
def test_byte_identical_reports(tmp_path, argv):
    for d in ("a", "b"):
        assert main(argv + ["--out", str(tmp_path / d)]) == 0
    name = argv[0]
    fmt = "csv" if "csv" in argv else "json"
    first = (tmp_path / "a" / f"{name}.{fmt}").read_bytes()
    assert first == (tmp_path / "b" / f"{name}.{fmt}").read_bytes()


def test_reports_embed_config_and_version(capsys):
    rep = run_json(capsys, "cogrowth", "--family", "free", "--rank", "3", "-N", "3", "--seed", "4")
    cfg = rep["config"]
    assert cfg["version"] == __version__
    assert cfg["family"] == "free" and cfg["rank"] == 3 and cfg["N"] == 3 and cfg["seed"] == 4
    assert cfg["generators"] == {"a": "a", "b": "b", "c": "c"}
    code, out, _ = run(capsys, "cogrowth", "--family", "free", "-N", "3", "--format", "csv")
    assert f'# version = "{__version__}"' in out.splitlines()


def test_generator_overrides(capsys):
    rep = run_json(capsys, "cogrowth", "--family", "free_commutative", "--gens", "x:a", "y:a", "z:b", "-N", "2")
    assert rep["config"]["generators"] == {"x": "a", "y": "a", "z": "b"}
    assert rep["gamma_prime"]["2"] == str(2 * 2 + 1)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cogrowthkit", "cogrowth", "--family", "free", "-N", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["gamma_prime"]["4"] == "4"
