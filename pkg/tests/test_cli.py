import io
import json
import subprocess
import sys

import numpy as np
import pytest

from octodegree import DomainError
from octodegree.cli import EXIT_CONTRACT, EXIT_FAIL, EXIT_OK, EXIT_USAGE, parse_octonion, parse_zeros, run

KEYS = {"schema", "command", "inputs", "raw", "scalar", "rounded", "residual", "node_count", "runtime_ms", "verdict", "details"}

# (argv, expected exit code); small node counts keep these quick
COMMANDS = [
    (["table"], EXIT_OK),
    (["check-cr", "--field", "module_base", "--side", "left"], EXIT_OK),
    (["check-cr", "--field", "module_counterexample", "--side", "left", "--points", "10"], EXIT_OK),
    (["winding", "--surface", "sphere(0,0,0,0,0,0,0,0;1)", "--point", "0", "--nodes", "6"], EXIT_OK),
    (["order", "--field", "identity", "--center", "0", "--radius", "0.5", "--a", "0.1*e1", "--nodes", "5"], EXIT_OK),
    (["order", "--field", "identity", "--center", "0", "--radius", "0.5", "--nodes", "4", "--rule", "monte_carlo", "--samples", "5000", "--tolerance", "0.5"], EXIT_OK),
    (["tube-order", "--field", "circle_variety", "--core", "circle;e1,e2;1", "--eps", "1.5"], EXIT_CONTRACT),
    (["argument", "--field", "identity", "--boundary", "sphere(0;1)", "--zeros", "sphere(0;0.3)", "--nodes", "5"], EXIT_OK),
    (["rouche", "--field", "constant(1)", "--perturbed", "constant(3)", "--boundary", "sphere(0;1)", "--nodes", "3"], EXIT_FAIL),
    (["hurwitz", "--family", "inverse", "--nmax", "5", "--region", "sphere(0;0.5)", "--nodes", "3"], EXIT_OK),
    (["oracle", "--field", "identity", "--center", "0", "--radius", "1", "--a", "0.1*e1", "--starts", "8", "--seed", "4"], EXIT_OK),
]


def invoke(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("argv,expected", COMMANDS, ids=[c[0][0] + str(i) for i, c in enumerate(COMMANDS)])
def test_command_schema_and_exit_code(argv, expected):
    code, out, _ = invoke(argv)
    assert code == expected
    rec = json.loads(out)
    assert set(rec) == KEYS
    assert rec["schema"] == 1 and rec["command"] == argv[0]


@pytest.mark.parametrize("argv", [c[0] for c in COMMANDS], ids=[c[0][0] + str(i) for i, c in enumerate(COMMANDS)])
def test_runs_are_byte_identical_apart_from_runtime(argv):
    def strip(text):
        rec = json.loads(text)
        rec.pop("runtime_ms")
        return json.dumps(rec, sort_keys=True)

    assert strip(invoke(argv)[1]) == strip(invoke(argv)[1])


def test_table_has_49_entries():
    rec = json.loads(invoke(["table"])[1])
    assert len(rec["details"]["table"]) == 49


def test_winding_result_rounds_to_one():
    rec = json.loads(invoke(["winding", "--surface", "sphere(0;1)", "--point", "0", "--nodes", "6"])[1])
    assert rec["rounded"] == 1 and len(rec["raw"]) == 8


def test_bad_field_is_a_usage_error_listing_names():
    code, out, err = invoke(["order", "--field", "bogus(1)", "--center", "0", "--radius", "0.5"])
    assert code == EXIT_USAGE
    assert "hempfling" in err
    assert json.loads(out)["verdict"] == "error"


def test_argparse_errors_exit_two(capsys):
    assert run(["order", "--field", "identity"]) == EXIT_USAGE
    assert run(["nonsense"]) == EXIT_USAGE


def test_text_output():
    code, out, _ = invoke(["table", "--output", "text"])
    assert code == EXIT_OK and "e1*e2" in out


def test_nodes_tuple_is_accepted():
    code, out, _ = invoke(["winding", "--surface", "sphere(0;1)", "--point", "0", "--nodes", "4,3,3,3,3,3,3"])
    assert code in (EXIT_OK, EXIT_FAIL)
    assert json.loads(out)["inputs"]["nodes"] == [4, 3, 3, 3, 3, 3, 3]


def test_parse_octonion_forms():
    assert np.array_equal(parse_octonion("1,2,3,4,5,6,7,8"), np.arange(1.0, 9.0))
    assert np.array_equal(parse_octonion("1+e1-2*e_3"), np.array([1.0, 1, 0, -2, 0, 0, 0, 0]))
    assert np.array_equal(parse_octonion("0.1*e7"), 0.1 * np.eye(8)[7])
    for bad in ("", "1,2", "e9", "1 e1", "x"):
        with pytest.raises(DomainError):
            parse_octonion(bad)


def test_parse_zeros_mixed():
    zs = parse_zeros("sphere(1;0.3), tube(circle;e1,e2;1;0.2)")
    assert [z.kind for z in zs] == ["isolated", "variety"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "octodegree", "table"], capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["verdict"] == "pass"
