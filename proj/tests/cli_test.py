"""End-to-end checks of the flatheat command line: schema validity, exit
codes, determinism and the CSV side output.

usage: cli_test.py <flatheat binary> <report schema>
"""

import csv
import json
import os
import subprocess
import sys
import tempfile
import unittest

import jsonschema

BINARY = None
SCHEMA = None

HONEYCOMB_B = "0.8660254"


def run(*args, env=None):
    return subprocess.run([BINARY, "--no-timing", *args], capture_output=True, text=True, env=env)


class CliTest(unittest.TestCase):
    def report(self, *args):
        p = run(*args)
        self.assertEqual(p.returncode, 0, p.stderr)
        doc = json.loads(p.stdout)
        jsonschema.validate(doc, SCHEMA)
        return doc

    def test_every_command_validates(self):
        cases = [
            ["reduce", "--u", "3,1", "--v", "1,2"],
            ["classify", "--a", "0.3", "--b", "1.2"],
            ["kernel", "--a", "0.3", "--b", "1.2", "--x", "0,0", "--y", "0.2,0.3", "--t", "0.1"],
            ["kernel", "--klein", "--b", "1.5", "--x", "0.1,0", "--y", "0.2,0.3", "--t", "2", "--rep", "spectral"],
            ["scan", "--a", "0.3", "--b", "1.2", "--t-list", "1,4", "--dirs", "12", "--samples", "8"],
            ["scan", "--a", "0.3", "--b", "1.2", "--lambda-index", "1", "--dirs", "12", "--samples", "8"],
            ["scan", "--klein", "--b", "1.5", "--t-list", "1", "--dirs", "8", "--samples", "8", "--base-grid", "2"],
            ["counterexample", "generic", "--a", "0.3", "--b", "1.2"],
            ["counterexample", "isosceles", "--a", "0.3"],
            ["counterexample", "klein", "--b", "1.5", "--xi", "0.2"],
            ["counterexample", "klein", "--b", "0.8", "--xi", "0.2"],
            ["projection-diag", "--klein", "--b", "1.3", "--lambda-index", "2", "--grid", "16"],
            ["projection-diag", "--a", "0.3", "--b", "1.2", "--lambda-index", "1", "--grid", "16"],
            ["census", "--a", "0.5", "--b", HONEYCOMB_B, "--t", "0.1", "--grid", "64"],
            ["pde-check", "--a", "0", "--b", "1", "--t", "0.05", "--n", "32"],
            ["pde-check", "--a", "0", "--b", "1", "--t", "0.05", "--n", "64", "--convergence"],
        ]
        for args in cases:
            with self.subTest(args=" ".join(args)):
                doc = self.report(*args)
                self.assertEqual(doc["wall_time_s"], 0.0)

    def test_selftest(self):
        doc = self.report("selftest")
        self.assertTrue(doc["results"]["passed"])
        self.assertTrue(all(c["passed"] for c in doc["results"]["checks"]))

    def test_examples(self):
        gen = self.report("counterexample", "generic", "--a", "0.3", "--b", "1.2")
        self.assertAlmostEqual(gen["results"]["s_star"], 0.53125, places=12)
        self.assertGreater(gen["results"]["increase"], 0)
        cls = self.report("classify", "--a", "0.5", "--b", "0.8660254037844386")
        self.assertEqual(cls["results"]["tag"], "Honeycomb")
        self.assertEqual(cls["surface"]["class"], "Honeycomb")

    def test_exit_codes(self):
        ok = run("scan", "--a", "0.5", "--b", HONEYCOMB_B, "--t-list", "0.1,1", "--expect", "monotone")
        self.assertEqual(ok.returncode, 0, ok.stderr)
        self.assertEqual(json.loads(ok.stdout)["results"]["verdict"], "Monotone")

        violated = run("scan", "--a", "0.3", "--b", "1.2", "--t-list", "4", "--dirs", "12", "--expect", "monotone")
        self.assertEqual(violated.returncode, 3)
        doc = json.loads(violated.stdout)
        jsonschema.validate(doc, SCHEMA)
        self.assertEqual(doc["results"]["verdict"], "Violated")

        for args in (
            ["frobnicate"],
            ["kernel", "--a", "0.3"],
            ["scan", "--a", "x", "--b", "1"],
            ["census", "--a", "0", "--b", "1", "--t", "0.1", "--grid", "16"],
            [],
        ):
            with self.subTest(args=args):
                bad = run(*args)
                self.assertEqual(bad.returncode, 1)
                self.assertIn("Usage", bad.stdout + bad.stderr)

        for args in (
            ["kernel", "--a", "0", "--b", "1", "--x", "0,0", "--y", "0,0", "--t", "0"],
            ["counterexample", "generic", "--a", "0", "--b", "1.5"],
            ["kernel", "--a", "0", "--b", "1", "--x", "0,0", "--y", "0,0", "--t", "1e-9", "--rep", "spectral"],
            ["reduce", "--u", "1,0", "--v", "2,0"],
        ):
            with self.subTest(args=args):
                err = run(*args)
                self.assertEqual(err.returncode, 2)
                self.assertTrue(err.stderr.startswith("error: "), err.stderr)

    def test_byte_identical(self):
        args = ["scan", "--a", "0.3", "--b", "1.2", "--t-list", "1,8", "--dirs", "30", "--samples", "16"]
        first = run(*args)
        second = run(*args)
        self.assertEqual(first.returncode, 0)
        self.assertEqual(first.stdout, second.stdout)
        one = run(*args, env={**os.environ, "FLAT_HEAT_THREADS": "1"})
        self.assertEqual(first.stdout, one.stdout)

    def test_csv(self):
        with tempfile.TemporaryDirectory() as d:
            path = os.path.join(d, "curve.csv")
            p = run("--csv", path, "counterexample", "generic", "--a", "0.3", "--b", "1.2")
            self.assertEqual(p.returncode, 0, p.stderr)
            with open(path, newline="") as f:
                rows = list(csv.reader(f))
            self.assertEqual(rows[0], ["s", "value", "derivative", "error_bound"])
            self.assertGreater(len(rows), 10)
            values = [[float(c) for c in r] for r in rows[1:]]
            self.assertTrue(all(v[3] >= 0 for v in values))
            self.assertTrue(all(values[i][0] < values[i + 1][0] for i in range(len(values) - 1)))


if __name__ == "__main__":
    BINARY = sys.argv[1]
    with open(sys.argv[2]) as f:
        SCHEMA = json.load(f)
    unittest.main(argv=sys.argv[:1], verbosity=2)
