import json

import pytest

from igusa.cli import dumps, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out, json.loads(out)


def test_moments_example(capsys):
    code, out, _ = run(capsys, "moments", "-f", "x1", "-d", "standard", "-n", "1", "-N", "3")
    assert code == 0
    assert out == '{"values":["1","1/2","1/3","1/4"]}\n'


def test_moments_homogeneous(capsys):
    _, _, doc = run(capsys, "moments", "-f", "x0*x1", "-n", "1", "--homogeneous", "-N", "3")
    assert doc["values"] == ["1", "1/6", "1/30", "1/140"]


def test_poles_example(capsys):
    code, _, doc = run(capsys, "poles", "-f", "x1*x2", "-d", "standard", "-n", "2", "--s-min", "-1")
    assert code == 0
    assert len(doc["poles"]) == 1
    assert doc["poles"][0]["location"] == -1 and doc["poles"][0]["order"] == 2
    assert doc["poles"][0]["leading_coeff"] == pytest.approx(1.0, abs=1e-6)


def test_laurent_example(capsys):
    code, _, doc = run(capsys, "laurent", "-f", "x1", "-n", "1", "--s0", "-1", "-K", "2")
    assert code == 0
    assert doc["min_exp"] == -1
    assert doc["coeffs"] == pytest.approx([1, 0, 0, 0], abs=1e-8)


def test_eval_and_guess(capsys):
    _, _, doc = run(capsys, "eval", "-f", "x1", "-n", "1", "-s", "-2.5")
    assert doc["value"] == pytest.approx(-2 / 3, abs=1e-7)
    _, _, doc = run(capsys, "guess", "-f", "x1", "-n", "1")
    assert doc["recurrence"]["coeffs"] == [["-1", "-1"], ["2", "1"]]
    assert doc["verification"]["verified"] is True


def test_ode_command(capsys):
    _, _, doc = run(capsys, "ode", "-f", "2", "-n", "1")
    assert doc["ode"]["coeffs"] == [["2"], ["-1", "2"]]
    assert doc["recurrence"]["coeffs"] == [["-2"], ["1"]]
    assert doc["verification"]["verified"] is True


def test_domain_file_and_output_path(tmp_path, capsys):
    dom = tmp_path / "dom.json"
    dom.write_text(json.dumps({"nvars": 1, "pieces": [{"vertices": [["0"], ["1/2"]]},
                                                     {"vertices": [["1/2"], ["1"]]}]}))
    out = tmp_path / "out.json"
    code = main(["moments", "-f", "x1", "-d", str(dom), "-N", "2", "-o", str(out)])
    assert code == 0
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text())["values"] == ["1", "1/2", "1/3"]


@pytest.mark.parametrize("argv,kind", [
    (["moments", "-f", "x3", "-n", "2", "-N", "2"], "UnknownVariable"),
    (["moments", "-f", "x1 +", "-n", "1", "-N", "2"], "ParseError"),
    (["moments", "-f", "x1", "-N", "2"], "DomainFormatError"),
    (["moments", "-f", "x1", "-d", "{bad", "-N", "2"], "DomainFormatError"),
    (["poles", "-f", "x1", "-n", "1", "--s-min", "0"], "IgusaError"),
    (["eval", "-f", "x1^2", "-n", "1", "-s", "-0.5"], "PoleAt"),
    (["guess", "-f", "x1", "-n", "1", "--max-order", "0"], "IgusaError"),
])
def test_error_envelope(capsys, argv, kind):
    code, _, doc = run(capsys, *argv)
    assert code == 2
    assert doc["error"]["kind"] == kind
    assert doc["error"]["detail"]


def test_convergence_failure_exit_code(capsys):
    code, _, doc = run(capsys, "eval", "-f", "x1*x2", "-n", "2", "-s", "-0.5",
                       "--quad-tol", "1e-15", "--quad-max-depth", "1", "--quad-rule", "2")
    assert code == 3
    assert doc["error"]["kind"] == "NotConverged"


@pytest.mark.parametrize("argv", [
    ["moments", "-f", "x1 - x1^2", "-n", "1", "-N", "6"],
    ["laurent", "-f", "x1 - x1^2", "-n", "1", "--s0", "-2", "-K", "1"],
    ["poles", "-f", "x1", "-n", "1", "--s-min", "-3"],
])
def test_output_is_deterministic_and_canonical(capsys, argv):
    _, first, doc = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    assert dumps(doc) + "\n" == first


def test_dumps_format():
    assert dumps({"a": 1.5, "b": [True, None, "x"], "c": 2}) == '{"a":1.500000000000e+00,"b":[true,null,"x"],"c":2}'
