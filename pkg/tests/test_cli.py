import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from modnet import __version__
from modnet.cli import DEFAULT_SEED, main
from modnet.io import FormatError, matrix_from_json, parse_report


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def c2(tmp_path):
    return write(tmp_path, "c2.json", {"dim": 2, "basis": [[[1, 0], [0, 0]], [[0, 1], [1, 0]]]})


@pytest.fixture
def degenerate(tmp_path):
    return write(tmp_path, "bad.json", {"dim": 2, "basis": [[[1, 0], [0, 0]], [[0, 1], [0, 0]]]})


@pytest.fixture
def scalar_model(tmp_path):
    return write(tmp_path, "model.json", {
        "masses": [1.0], "orbits": [{"r": 1.0, "rapidity_N": 8, "angle_N": 8}],
        "elements": ["boost", "rotation", "reflection", "center"], "rapidity_step": 0.5})


# -- subspace ------------------------------------------------------------------------

def test_subspace_modular_worked_example(capsys, c2):
    code, out, _ = run(capsys, "subspace", "modular", "--input", c2)
    rep = parse_report(out)
    assert code == 0 and rep["pass"] and rep["seed"] == DEFAULT_SEED and rep["version"] == __version__
    assert np.allclose(rep["result"]["eigenvalues"], [3 - 2 * np.sqrt(2), 3 + 2 * np.sqrt(2)], atol=1e-10)
    assert abs(rep["result"]["det_delta"] - 1) <= 1e-10
    J = matrix_from_json(rep["result"]["J"])
    assert J.is_involution() and J.is_antiunitary()


def test_subspace_check_reports_reason(capsys, c2, degenerate):
    code, out, _ = run(capsys, "subspace", "check", "--input", c2)
    assert code == 0 and parse_report(out)["result"]["standard"]
    code, out, _ = run(capsys, "subspace", "check", "--input", degenerate)
    rep = parse_report(out)
    assert code == 1 and not rep["pass"] and "iH" in rep["message"]


def test_subspace_modular_not_standard_is_check_failure(capsys, degenerate):
    code, out, err = run(capsys, "subspace", "modular", "--input", degenerate)
    assert code == 1 and "check failed" in err


def test_subspace_complement(capsys, c2):
    code, out, _ = run(capsys, "subspace", "complement", "--input", c2)
    rep = parse_report(out)
    assert code == 0 and rep["result"]["real_dim"] == 2
    assert rep["result"]["adjoint_residual"] <= 1e-9


def test_malformed_inputs_exit_two(capsys, tmp_path):
    bad_json = tmp_path / "broken.json"
    bad_json.write_text("{not json")
    assert run(capsys, "subspace", "check", "--input", str(bad_json))[0] == 2
    assert run(capsys, "subspace", "check", "--input", str(tmp_path / "missing.json"))[0] == 2
    wrong = write(tmp_path, "wrong.json", {"dim": 2, "vectors": []})
    assert run(capsys, "subspace", "check", "--input", wrong)[0] == 2


def test_usage_errors_exit_two():
    with pytest.raises(SystemExit) as exc:
        main(["subspace"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["orbit", "reflect", "--mass", "1"])
    assert exc.value.code == 2


# -- geometry ------------------------------------------------------------------------

def test_lorentz_cover_boost(capsys):
    code, out, _ = run(capsys, "lorentz", "cover", "--boost", "3", "0.7")
    L = np.array(parse_report(out)["result"]["lorentz"])
    assert code == 0 and np.isclose(L[0, 3], np.sinh(0.7)) and np.isclose(L[0, 0], np.cosh(0.7))


def test_lorentz_cover_rejects_non_sl2(capsys, tmp_path):
    path = write(tmp_path, "A.json", {"dim": 2, "entries": [2, 0, 0, 1]})
    assert run(capsys, "lorentz", "cover", "--input", path)[0] == 1
    assert run(capsys, "lorentz", "cover")[0] == 2


def test_orbit_reflect(capsys):
    code, out, _ = run(capsys, "orbit", "reflect", "--mass", "1", "--p", "1,1,0")
    res = parse_report(out)["result"]
    assert code == 0 and np.isclose(res["theta_p"], np.pi / 2) and res["residual"] <= 1e-12


def test_orbit_reflect_excluded_orbit(capsys):
    code, _, err = run(capsys, "orbit", "reflect", "--mass", "0", "--p", "0,0,1")
    assert code == 1 and "null measure" in err
    assert run(capsys, "orbit", "reflect", "--mass", "1", "--p", "1,x")[0] == 2


# -- mc ------------------------------------------------------------------------------

def test_mc_scalar_model(capsys, scalar_model):
    code, out, _ = run(capsys, "mc", "--model", scalar_model)
    rep = parse_report(out)
    assert code == 0 and rep["result"]["verdict"] is True and rep["result"]["dim"] == 64


def test_mc_unknown_key(capsys, tmp_path):
    path = write(tmp_path, "m.json", {"masses": [1.0], "colour": "red"})
    assert run(capsys, "mc", "--model", path)[0] == 2


# -- spin, net, split ------------------------------------------------------------------

def test_spin_decompose_table(capsys):
    code, out, _ = run(capsys, "spin", "decompose", "--n", "0", "--s", "0", "--cutoff", "5")
    table = parse_report(out)["result"]["table"]
    assert code == 0
    assert [(r["spin"], r["multiplicity"]) for r in table] == [(j, 1) for j in range(6)]


def test_spin_decompose_csv(capsys):
    code, out, _ = run(capsys, "spin", "decompose", "--n", "1", "--s", "1/2", "--cutoff", "3/2",
                       "--format", "csv")
    assert code == 0
    assert out.strip().splitlines() == ["mass,spin,multiplicity", "1.0,0,1", "1.0,1,2", "1.0,2,1"]


def test_net_verify_default(capsys):
    code, out, _ = run(capsys, "net", "verify")
    rep = parse_report(out)
    assert code == 0 and all(c["pass"] for c in rep["result"]["checks"])


def test_net_verify_selected_checks_pretty(capsys):
    code, out, _ = run(capsys, "net", "verify", "--checks", "bw,duality,zmap", "--format", "pretty")
    assert code == 0 and out.startswith("net verify: PASS")
    assert "zmap_commutant" in out


def test_net_verify_fermionic_and_phase(capsys, tmp_path):
    path = write(tmp_path, "f.json", {"fermionic": True})
    assert run(capsys, "net", "verify", "--spec", path)[0] == 0
    # a phase on J gives a different net that still satisfies every axiom
    path = write(tmp_path, "p.json", {"phase": [0.0, 1.0]})
    code, out, _ = run(capsys, "net", "verify", "--spec", path)
    assert code == 0 and parse_report(out)["result"]["phase_comparison"]["equal"] is False
    path = write(tmp_path, "p2.json", {"phase": [0.0, 2.0]})
    assert run(capsys, "net", "verify", "--spec", path)[0] == 2
    path = write(tmp_path, "k.json", {"checks": 1})
    assert run(capsys, "net", "verify", "--spec", path)[0] == 2
    path = write(tmp_path, "w.json", {"wedges": ["W3", "W1"]})
    assert run(capsys, "net", "verify", "--spec", path)[0] == 2


def test_net_verify_unknown_check(capsys):
    assert run(capsys, "net", "verify", "--checks", "bw,nope")[0] == 2


def test_net_demo_counterexample(capsys):
    code, out, _ = run(capsys, "net", "demo-counterexample", "--omega", "0.5", "--t", "1")
    rep = parse_report(out)
    assert code == 0 and rep["message"] == "B-W FAILS for U_V"
    assert np.allclose(rep["result"]["z_eigenphases"], [[-1, 0], [-1, 0]], atol=1e-9)
    # csv is not available for this non-tabular report
    assert run(capsys, "net", "demo-counterexample", "--format", "csv")[0] == 2


def test_split_trace(capsys, tmp_path):
    path = write(tmp_path, "s.json", {"eigenvalues": [4, 0.25]})
    code, out, _ = run(capsys, "split", "trace", "--spectrum", path)
    res = parse_report(out)["result"]
    assert code == 0 and res["trace_below_one"] == 0.25 and res["paired"]
    neg = write(tmp_path, "n.json", {"eigenvalues": [-1.0]})
    assert run(capsys, "split", "trace", "--spectrum", neg)[0] == 1


def test_split_growth(capsys, tmp_path):
    pts = [{"mass": m, "weight": 0.5, "generator": {"type": "geometric", "q": 2, "levels": 3}} for m in (1, 2)]
    path = write(tmp_path, "g.json", pts)
    code, out, _ = run(capsys, "split", "growth", "--surrogate", path)
    res = parse_report(out)["result"]
    assert code == 0 and res["verdict"] == "atomic-like" and res["table"] == [[1, 0.875], [2, 1.75]]
    pts[1]["multiplicity"] = 3
    path = write(tmp_path, "g2.json", pts)
    assert run(capsys, "split", "growth", "--surrogate", path, "--max-multiplicity", "2")[0] == 1


def test_suite(capsys):
    code, out, _ = run(capsys, "suite", "--count", "20", "--seed", "3")
    rep = parse_report(out)
    assert code == 0 and rep["seed"] == 3 and rep["result"]["trials"] == 20


# -- output contract -------------------------------------------------------------------

def test_reruns_are_byte_identical(capsys, scalar_model):
    for argv in (["mc", "--model", scalar_model], ["net", "verify"], ["suite", "--count", "10"]):
        first = run(capsys, *argv)[1]
        second = run(capsys, *argv)[1]
        assert first == second


def test_out_file_matches_stdout(capsys, tmp_path, c2):
    out_path = tmp_path / "rep.json"
    stdout = run(capsys, "subspace", "modular", "--input", c2)[1]
    run(capsys, "subspace", "modular", "--input", c2, "--out", str(out_path))
    assert out_path.read_text() == stdout


def test_json_round_trip_and_validation(capsys, c2):
    text = run(capsys, "subspace", "modular", "--input", c2)[1]
    rep = parse_report(text)
    assert json.dumps(rep, sort_keys=True, indent=2) == text.strip()
    with pytest.raises(FormatError):
        parse_report('{"command": "x", "pass": true, "result": NaN}')
    with pytest.raises(FormatError):
        parse_report('{"command": "x", "result": {}}')
    with pytest.raises(FormatError):
        parse_report('{"command": "x", "pass": "yes", "result": {}}')


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "modnet.cli", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == __version__


# -- shipped example inputs ------------------------------------------------------------

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.mark.parametrize("argv, code", [
    (["subspace", "modular", "--input", "rn.json"], 0),
    (["subspace", "modular", "--input", "c2.json"], 0),
    (["subspace", "check", "--input", "bad.json"], 1),
    (["lorentz", "cover", "--input", "boost.json"], 0),
    (["mc", "--model", "scalar.json"], 0),
    (["mc", "--model", "two_masses.json"], 0),
    (["net", "verify", "--spec", "canonical.json", "--checks", "bw"], 0),
    (["net", "verify", "--spec", "fermionic.json"], 0),
    (["net", "verify", "--spec", "phase.json"], 0),
    (["split", "trace", "--spectrum", "spectrum.json"], 0),
    (["split", "growth", "--surrogate", "surrogate.json"], 0),
])
def test_shipped_examples(capsys, argv, code):
    argv = [str(DATA / a) if a.endswith(".json") else a for a in argv]
    got, out, _ = run(capsys, *argv)
    assert got == code
    parse_report(out)


def test_real_form_has_trivial_modular_operator(capsys):
    code, out, _ = run(capsys, "subspace", "modular", "--input", str(DATA / "rn.json"))
    assert code == 0 and np.allclose(parse_report(out)["result"]["eigenvalues"], 1.0)


def test_separating_failure_reason(capsys):
    code, out, _ = run(capsys, "subspace", "check", "--input", str(DATA / "bad.json"))
    assert code == 1 and parse_report(out)["message"] == "H ∩ iH ≠ {0}"
