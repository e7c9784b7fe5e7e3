"""End-to-end checks of the stable_lab command line: outputs, exit codes, schema."""

import json
import math
import os
import subprocess
import sys
import tempfile
import unittest

import jsonschema

BIN = os.environ["STABLE_LAB_BIN"]
SCHEMA = os.environ["STABLE_LAB_SCHEMA"]


def run(*args, env=None):
    full_env = dict(os.environ)
    full_env.pop("STABLE_LAB_GRID_N", None)
    if env:
        full_env.update(env)
    return subprocess.run([BIN, *args], capture_output=True, text=True, env=full_env, timeout=900)


class Cli(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        with open(SCHEMA) as f:
            cls.schema = json.load(f)

    def json_ok(self, proc, code=0):
        self.assertEqual(proc.returncode, code, proc.stderr)
        doc = json.loads(proc.stdout)
        jsonschema.validate(doc, self.schema)
        return doc

    def test_density_at_zero(self):
        p = run("density", "--alpha", "1", "--s", "1", "--at", "0")
        self.assertEqual(p.returncode, 0)
        self.assertEqual(p.stdout.strip(), "0.318310")

    def test_density_csv(self):
        p = run("density", "--alpha", "1.5", "--s", "1", "--n", "1024", "--tail-budget", "1e-3")
        self.assertEqual(p.returncode, 0, p.stderr)
        lines = p.stdout.splitlines()
        self.assertEqual(lines[0], "x,value")
        self.assertEqual(len(lines), 1025)

    def test_verify_condexp(self):
        doc = self.json_ok(run("verify", "condexp", "--alpha", "1", "--u", "1", "--v", "1"))
        self.assertTrue(doc[0]["pass"])
        self.assertIsNone(doc[0]["grid_used"])

    def test_verify_debruijn(self):
        doc = self.json_ok(run("verify", "debruijn", "--alpha", "1", "--s", "1", "--input", "cauchy:0.5", "--t", "0.5"))
        self.assertEqual(len(doc), 1)
        self.assertTrue(doc[0]["pass"])

    def test_verification_failure_exits_one(self):
        doc = self.json_ok(run("verify", "debruijn", "--alpha", "1", "--s", "1", "--input", "cauchy:0.5", "--t", "0.5",
                               "--fault", "debruijn-sign"), code=1)
        self.assertFalse(doc[0]["pass"])

    def test_usage_errors_exit_two(self):
        for args in (["density", "--bogus"],
                     ["density", "--alpha", "0.3", "--at", "0"],
                     ["verify", "nonsense"],
                     ["verify", "pde", "--input", "cauchy:-1", "--t", "0.5"],
                     ["verify", "pde", "--input", "cauchy:1", "--t", "1.5"],
                     ["functional", "--kind", "entropy", "--input", "weibull:2"],
                     ["suite", "medium"],
                     []):
            p = run(*args)
            self.assertEqual(p.returncode, 2, args)
            self.assertEqual(len(p.stderr.strip().splitlines()), 1, (args, p.stderr))

    def test_functional_entropy_of_family(self):
        p = run("functional", "--kind", "entropy", "--alpha", "2", "--s", "0.5", "--input", "gaussian:1")
        self.assertEqual(p.returncode, 0, p.stderr)
        doc = json.loads(p.stdout)
        self.assertEqual(list(doc), ["value", "truncation_estimate", "mask_mass"])
        self.assertAlmostEqual(doc["value"], 0.5 * math.log(2 * math.pi * math.e), places=7)

    def test_csv_input_round_trip(self):
        with tempfile.TemporaryDirectory() as d:
            path = os.path.join(d, "g.csv")
            p = run("--out", path, "density", "--alpha", "2", "--s", "0.5", "--n", "4096", "--half-width", "12")
            self.assertEqual(p.returncode, 0, p.stderr)
            p = run("functional", "--kind", "entropy", "--alpha", "2", "--s", "0.5", "--input", path)
            self.assertEqual(p.returncode, 0, p.stderr)
            self.assertAlmostEqual(json.loads(p.stdout)["value"], 0.5 * math.log(2 * math.pi * math.e), places=6)
            p = run("functional", "--kind", "relent", "--alpha", "2", "--s", "0.5", "--input", path)
            self.assertAlmostEqual(json.loads(p.stdout)["value"], 0.0, places=9)

    def test_score_csv(self):
        p = run("score", "--alpha", "1", "--s", "1", "--input", "cauchy:2", "--t", "0.5")
        self.assertEqual(p.returncode, 0, p.stderr)
        lines = p.stdout.splitlines()
        self.assertEqual(lines[0], "x,h_t,mmse_score,fisher_score,standardized_mmse,standardized_fisher,mask")
        # rho^M = -x / g_t with g_t = 1.5 at the centre
        mid = [float(v) for v in lines[1 + (len(lines) - 1) // 2].split(",")]
        self.assertAlmostEqual(mid[2], -mid[0] / 1.5, places=4)

    def test_maxent_tables(self):
        p = run("maxent", "lambda", "--alpha", "1", "--s", "1", "--input", "cauchy:0.5", "--csv")
        self.assertEqual(p.returncode, 0, p.stderr)
        rows = p.stdout.splitlines()
        self.assertEqual(rows[0], "t,lambda")
        self.assertEqual(len(rows), 12)
        t, lam = map(float, rows[-1].split(","))
        self.assertEqual(t, 1.0)
        self.assertAlmostEqual(lam, math.log(4 * math.pi), places=3)

    def test_maxent_sign_condition_exit_codes(self):
        doc = self.json_ok(run("maxent", "sign-condition", "--s", "1", "--input", "cauchy:0.5"))
        self.assertTrue(doc[0]["pass"])
        doc = self.json_ok(run("maxent", "sign-condition", "--s", "1", "--input", "cauchy:2"), code=1)
        self.assertFalse(doc[0]["pass"])

    def test_grid_size_environment_override(self):
        p = run("verify", "pde", "--alpha", "2", "--s", "1", "--input", "gaussian:1", "--t", "0.5",
                env={"STABLE_LAB_GRID_N": "8192"})
        doc = json.loads(p.stdout)
        self.assertEqual(doc[0]["grid_used"]["n"], 8192)

    def test_deterministic_output(self):
        args = ("verify", "pde", "--alpha", "1", "--s", "1", "--input", "cauchy:2", "--t", "0.5")
        self.assertEqual(run(*args).stdout, run(*args).stdout)

    def test_suite_quick(self):
        doc = self.json_ok(run("suite", "quick"))
        self.assertTrue(doc["pass"])
        self.assertEqual(doc["failures"], [])

    def test_suite_quick_with_injected_sign_error(self):
        p = run("suite", "quick", "--fault", "debruijn-sign")
        doc = self.json_ok(p, code=1)
        self.assertFalse(doc["pass"])
        self.assertTrue(any(f.startswith("debruijn") for f in doc["failures"]))
        self.assertIn("FAILED", p.stderr)


class SuiteFull(unittest.TestCase):
    def test_suite_full(self):
        p = run("suite", "full")
        self.assertEqual(p.returncode, 0, p.stderr)
        doc = json.loads(p.stdout)
        with open(SCHEMA) as f:
            jsonschema.validate(doc, json.load(f))
        self.assertGreaterEqual(len(doc["reports"]), 20)
        # demos that are expected to fail are reported as such
        self.assertTrue(any(not e["expected_pass"] and not e["report"]["pass"] for e in doc["reports"]))


if __name__ == "__main__":
    unittest.main(argv=sys.argv)
