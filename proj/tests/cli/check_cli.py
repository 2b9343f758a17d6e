"""End-to-end checks of the credibility binary: exit codes, determinism and
schema validity of every report. Run with the binary, data dir and schema
given in the environment (CREDIBILITY_BIN, CREDIBILITY_DATA, CREDIBILITY_SCHEMA)."""

import csv
import io
import json
import math
import os
import random
import subprocess
import tempfile
import unittest

import jsonschema

BIN = os.environ["CREDIBILITY_BIN"]
DATA = os.environ["CREDIBILITY_DATA"]
with open(os.environ["CREDIBILITY_SCHEMA"]) as fh:
    SCHEMA = json.load(fh)


def run(*args, env=None):
    full_env = dict(os.environ)
    full_env.pop("CREDIBILITY_SEED", None)
    full_env.update(env or {})
    return subprocess.run([BIN, *args], capture_output=True, text=True, env=full_env, timeout=600)


def report(*args, expect=0, env=None):
    proc = run(*args, env=env)
    if proc.returncode != expect:
        raise AssertionError(f"exit {proc.returncode} (wanted {expect}): {proc.stderr}")
    doc = json.loads(proc.stdout)
    jsonschema.validate(doc, SCHEMA)
    return doc


def without_timing(doc):
    doc = dict(doc)
    doc.pop("timing")
    return json.dumps(doc, sort_keys=False)


class Workdir:
    def __enter__(self):
        self.dir = tempfile.TemporaryDirectory()
        return self

    def __exit__(self, *exc):
        self.dir.cleanup()

    def write(self, name, text):
        path = os.path.join(self.dir.name, name)
        with open(path, "w") as fh:
            fh.write(text)
        return path


def logistic_sample(n, seed):
    rng = random.Random(seed)
    values = []
    for _ in range(n):
        u = rng.random()
        while u == 0.0:
            u = rng.random()
        values.append(math.log(u / (1.0 - u)))
    return "value\n" + "\n".join(repr(v) for v in values) + "\n"


class Table(unittest.TestCase):
    def test_hair_eye(self):
        args = ("table", "--input", os.path.join(DATA, "hair_eye.csv"), "--alpha", "0.05", "--seed", "7")
        first = report(*args)
        second = report(*args)
        self.assertEqual(without_timing(first), without_timing(second))
        table = first["table"]
        self.assertAlmostEqual(table["g2"], 146.444, delta=0.001)
        self.assertEqual(round(table["nstar_asy"]), 34)
        self.assertEqual(table["n"], 592)
        self.assertLessEqual(abs(first["estimate"]["n_star"] - 32), 3)

    def test_children_income_without_search(self):
        doc = report("table", "--input", os.path.join(DATA, "children_income.csv"), "--no-search",
                     "--ci-replicates", "200", "--m", "425", "--replicates", "500")
        self.assertEqual(doc["table"]["n"], 25263)
        self.assertNotIn("estimate", doc)
        self.assertEqual(len(doc["power_checks"]), 1)

    def test_zero_margins(self):
        with Workdir() as w:
            proc = run("table", "--input", w.write("zero.csv", "0,0\n0,0\n"))
        self.assertEqual(proc.returncode, 1)
        self.assertIn("margin", proc.stderr)


class Power(unittest.TestCase):
    def test_csv_matches_json(self):
        with Workdir() as w:
            path = w.write("logistic.csv", logistic_sample(1500, 3))
            doc = report("power", "--input", path, "--m", "100,300,600", "--replicates", "200", "--seed", "5")
            proc = run("power", "--input", path, "--m", "100,300,600", "--replicates", "200", "--seed", "5",
                       "--format", "csv")
        self.assertEqual(proc.returncode, 0)
        rows = list(csv.DictReader(io.StringIO(proc.stdout)))
        self.assertEqual([int(r["m"]) for r in rows], [100, 300, 600])
        for row, point in zip(rows, doc["power_curve"]):
            self.assertEqual(float(row["beta_hat"]), point["beta_hat"])
            self.assertEqual(int(row["rejections"]), point["rejections"])

    def test_seed_from_environment_is_overridden_by_flag(self):
        with Workdir() as w:
            path = w.write("logistic.csv", logistic_sample(500, 4))
            args = ("power", "--input", path, "--m", "200", "--replicates", "200")
            from_env = report(*args, env={"CREDIBILITY_SEED": "11"})
            from_flag = report(*args, "--seed", "11")
            overridden = report(*args, "--seed", "12", env={"CREDIBILITY_SEED": "11"})
        self.assertEqual(from_env["seed"]["master_seed"], 11)
        self.assertEqual(from_env["power_curve"], from_flag["power_curve"])
        self.assertEqual(overridden["seed"]["master_seed"], 12)

    def test_jobs_do_not_change_results(self):
        with Workdir() as w:
            path = w.write("logistic.csv", logistic_sample(800, 5))
            one = report("power", "--input", path, "--m", "100,400", "--replicates", "300", "--jobs", "1")
            many = report("power", "--input", path, "--m", "100,400", "--replicates", "300", "--jobs", "8")
        self.assertEqual(one["power_curve"], many["power_curve"])

    def test_output_file(self):
        with Workdir() as w:
            path = w.write("logistic.csv", logistic_sample(300, 6))
            out = os.path.join(w.dir.name, "report.json")
            proc = run("power", "--input", path, "--m", "50", "--replicates", "50", "--output", out)
            self.assertEqual(proc.returncode, 0)
            self.assertEqual(proc.stdout, "")
            with open(out) as fh:
                jsonschema.validate(json.load(fh), SCHEMA)


class Nstar(unittest.TestCase):
    def test_null_population_is_infinite(self):
        doc = report("nstar", "--truth", "normal:0,1", "--test", "ks1", "--replicates-coarse", "50",
                     "--replicates-fine", "200", "--m-cap", "2000")
        self.assertEqual(doc["estimate"]["n_star"], "infinite")
        self.assertTrue(doc["estimate"]["reliability_note"])

    def test_data_estimate_has_reliability(self):
        with Workdir() as w:
            path = w.write("logistic.csv", logistic_sample(3000, 7))
            doc = report("nstar", "--input", path, "--replicates-coarse", "100", "--replicates-fine", "300")
        estimate = doc["estimate"]
        self.assertIsInstance(estimate["n_star"], int)
        self.assertAlmostEqual(estimate["phi_inv"], 3000 / estimate["n_star"])
        self.assertEqual(estimate["low_reliability"], estimate["phi_inv"] <= 10)

    def test_budget_exhaustion(self):
        proc = run("nstar", "--truth", "logistic", "--test", "ks1", "--max-evaluations", "2")
        self.assertEqual(proc.returncode, 2)


class Eiss(unittest.TestCase):
    def test_rows_and_partial_failure(self):
        doc = report("eiss", "--phi-inv", "2,10", "--draws", "20000", "--c-alpha", "37.66")
        self.assertEqual([r["status"] for r in doc["eiss"]], ["ok", "ok"])
        for row in doc["eiss"]:
            self.assertGreaterEqual(row["eiss"], row["phi_inv"] * 0.9)
        failed = report("eiss", "--phi-inv", "2,100", "--draws", "20000", expect=3)
        self.assertEqual(failed["eiss"][1]["status"], "error")

    def test_bad_fraction(self):
        self.assertEqual(run("eiss", "--phi-inv", "0.5").returncode, 1)


class Simulate(unittest.TestCase):
    def test_presets(self):
        t4 = report("simulate", "--preset", "table4", "--datasets", "50", "--replicates", "40", "--n", "300",
                    "--sub-m", "100")
        self.assertEqual(t4["simulation"]["bootstrap"]["datasets"], 50)
        t5 = report("simulate", "--preset", "table5", "--phi-inv", "2,5", "--draws", "5000")
        self.assertEqual(len(t5["eiss"]), 2)
        two = report("simulate", "--preset", "normal-vs-logistic-2s", "--replicates", "100", "--m", "500,2000",
                     "--replicates-coarse", "100", "--replicates-fine", "200")
        self.assertEqual(two["simulation"]["test"]["test"], "ks2")

    def test_unknown_preset(self):
        self.assertEqual(run("simulate", "--preset", "table9").returncode, 1)


class Errors(unittest.TestCase):
    def test_input_errors_exit_one(self):
        with Workdir() as w:
            bad = w.write("bad.csv", "1\nabc\n")
            proc = run("power", "--input", bad, "--m", "1")
            self.assertEqual(proc.returncode, 1)
            self.assertIn("line 2", proc.stderr)
        self.assertEqual(run("power", "--input", "/nonexistent.csv", "--m", "10").returncode, 1)
        self.assertEqual(run("nstar", "--truth", "cauchy").returncode, 1)
        self.assertEqual(run("nstar").returncode, 1)
        self.assertEqual(run().returncode, 1)


if __name__ == "__main__":
    unittest.main()
