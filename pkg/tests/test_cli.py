import contextlib
import io
import json
import unittest
from unittest import mock

from parameterized import parameterized

from eplib.cli import main, run
from eplib.errors import NotACoset


def invoke(*argv: str) -> tuple[int, dict]:
    out = io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(io.StringIO()):
        status = main(list(argv))
    text = out.getvalue()
    return (status, json.loads(text) if text else {})


class TestNegeq(unittest.TestCase):
    @parameterized.expand([("brute",), ("symbolic",)])
    def test_formulas(self, method):
        (status, report) = invoke("negeq", "--n", "3", "--f", "x1 | x2 | x3", "--g", "x1 | !x2 | !x3", "--method", method)
        self.assertEqual(status, 0)
        self.assertTrue(report["equivalent"])
        self.assertEqual(report["witness_count"], 1)
        self.assertEqual(report["representative"], "011")
        self.assertEqual(report["method"], method)

    def test_formulas_from_files(self):
        (status, report) = invoke("negeq", "--n", "3", "--f", "@tests/instances/or3.txt", "--g", "@tests/instances/or3_negated.txt")
        self.assertEqual(status, 0)
        self.assertEqual(report["representative"], "011")

    def test_long_disjunction(self):
        clause = " | ".join(f"x{i % 4 + 1}" for i in range(1000))
        (status, report) = invoke("negeq", "--n", "4", "--f", clause, "--g", "x1 | x2 | !x3 | x4")
        self.assertEqual(status, 0)
        self.assertEqual(report["representative"], "0010")

    def test_inequivalent_is_still_success(self):
        (status, report) = invoke("negeq", "--n", "2", "--f", "x1 & x2", "--g", "x1 | x2")
        self.assertEqual(status, 0)
        self.assertFalse(report["equivalent"])
        self.assertEqual(report["witness_count"], 0)

    @parameterized.expand([("brute",), ("symbolic",)])
    def test_obdd_files(self, method):
        (status, report) = invoke(
            "negeq-obdd", "--f", "@tests/instances/or3.json", "--g", "@tests/instances/or3_negated.json", "--method", method,
        )
        self.assertEqual(status, 0)
        self.assertEqual(report["witness_count"], 1)
        self.assertEqual(report["representative"], "011")

    def test_dags(self):
        (status, report) = invoke("dageq", "--f", "@tests/instances/dag_f_mirror.json", "--g", "@tests/instances/dag_g.json")
        self.assertEqual(status, 0)
        self.assertEqual(report["witness_count"], 4)
        self.assertEqual(report["stabilizer_dim"], 2)


class TestStabilizer(unittest.TestCase):
    def test_formula(self):
        (status, report) = invoke("stabilizer", "--n", "2", "--g", "(x1 | x2) & !(x1 & x2)")
        self.assertEqual(status, 0)
        self.assertEqual(report, {"dim": 1, "ambient_dim": 2, "basis": ["11"]})

    def test_dag_file(self):
        (_, report) = invoke("stabilizer", "--g", "@tests/instances/dag_g.json")
        self.assertEqual(report["dim"], 2)
        self.assertEqual(report["ambient_dim"], 3)

    def test_obdd_file(self):
        (_, report) = invoke("stabilizer", "--g", "@tests/instances/or3.json")
        self.assertEqual(report["dim"], 0)

    def test_formula_needs_variable_count(self):
        (status, _) = invoke("stabilizer", "--g", "x1")
        self.assertEqual(status, 2)


class TestCounting(unittest.TestCase):
    def test_amplify(self):
        (status, report) = invoke("amplify", "--set", "pow2", "--p", "6", "--run", "AARAARA")
        self.assertEqual(status, 0)
        self.assertEqual(report["table"]["c"], [1, 0, 1, 0, 1, 0])
        self.assertTrue(report["membership"]["passed"])
        self.assertTrue(report["growth"]["passed"])
        self.assertEqual(report["run"], {"pattern": "AARAARA", "accepting": 5, "simulated": 16, "amplified": 16})

    def test_amplify_without_constant(self):
        (_, report) = invoke("amplify", "--set", "finite:1", "--p", "1")
        self.assertIsNone(report["growth"])

    def test_nongappy(self):
        (status, report) = invoke("nongappy", "--set", "doublyexp", "--k", "100", "--bound", "65536")
        self.assertEqual(status, 0)
        self.assertFalse(report["passed"])
        self.assertEqual(report["violations"], [256, 65536])

    def test_cpad(self):
        (status, report) = invoke("cpad", "--f", "3", "--g", "4", "--t", "5")
        self.assertEqual(status, 0)
        self.assertEqual(report, {"w": 3, "total": 17, "power_of_two": False})


class TestExitStatus(unittest.TestCase):
    @parameterized.expand([
        ("syntax", ["negeq", "--n", "2", "--f", "x1 &", "--g", "x2"]),
        ("variable_range", ["negeq", "--n", "2", "--f", "x3", "--g", "x2"]),
        ("bad_obdd", ["negeq-obdd", "--f", "@tests/instances/bad_unreduced.json", "--g", "@tests/instances/or3_negated.json"]),
        ("wrong_format", ["dageq", "--f", "@tests/instances/or3.json", "--g", "@tests/instances/dag_g.json"]),
        ("cyclic", ["dageq", "--f", "@tests/instances/dag_cyclic.json", "--g", "@tests/instances/dag_g.json"]),
        ("missing_file", ["negeq", "--n", "2", "--f", "@tests/instances/missing.txt", "--g", "x1"]),
        ("unknown_set", ["amplify", "--set", "primes", "--p", "3"]),
        ("invalid_padding", ["cpad", "--f", "1", "--g", "6", "--t", "5"]),
        ("oversized_constants", ["amplify", "--set", "doublyexp", "--p", "40"]),
        ("deep_formula", ["negeq", "--n", "1", "--f", "(" * 500 + "x1" + ")" * 500, "--g", "x1"]),
    ])
    def test_bad_input(self, _, argv):
        (status, report) = run(argv)
        self.assertEqual(status, 2)
        self.assertIsNone(report)

    def test_usage_error(self):
        with contextlib.redirect_stderr(io.StringIO()), self.assertRaises(SystemExit) as cm:
            run(["negeq", "--f", "x1", "--g", "x1"])
        self.assertEqual(cm.exception.code, 2)

    def test_invariant_violation(self):
        with mock.patch("eplib.cli.decide_negation_equivalence", side_effect=NotACoset("forged")):
            (status, report) = run(["negeq", "--n", "1", "--f", "x1", "--g", "x1"])
        self.assertEqual(status, 3)
        self.assertIsNone(report)

    def test_version(self):
        with contextlib.redirect_stdout(io.StringIO()), self.assertRaises(SystemExit) as cm:
            run(["--version"])
        self.assertEqual(cm.exception.code, 0)


class TestSelftest(unittest.TestCase):
    def test_selftest_passes(self):
        (status, report) = invoke("selftest", "--seed", "3")
        self.assertEqual(status, 0)
        self.assertTrue(report["passed"])
        self.assertEqual(report["seed"], 3)
        self.assertIn("padding", report["checks"])
