import io
import json
import os
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout

from cgring import load_default_table
from cgring.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main
from cgring.schubert import SchubertElement, basis_element


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        status = main(list(argv))
    return status, out.getvalue(), err.getvalue()


class CommandTest(unittest.TestCase):
    def test_meth_main__product(self):
        """Checks the product command on s2*s2."""
        status, out, _ = run("product", "s2", "s2")
        self.assertEqual(EXIT_OK, status)
        self.assertEqual("s4 + 2*s4p + 2*s4pp", out.strip())

    def test_meth_main__product_json(self):
        status, out, _ = run("--json", "product", "s8", "s8")
        self.assertEqual(EXIT_OK, status)
        data = json.loads(out)
        self.assertIn({"label": "s0", "q": 4, "coeff": 1}, data["terms"])

    def test_meth_main__gw(self):
        """Checks the gw command on a degree-one invariant."""
        status, out, _ = run("gw", "1", "s3", "s1", "s8")
        self.assertEqual(EXIT_OK, status)
        self.assertEqual("2", out.strip())

    def test_meth_main__gw_degree_out_of_range(self):
        """Ensures an out-of-range degree is a usage error."""
        status, _, err = run("gw", "5", "s8", "s8", "s8")
        self.assertEqual(EXIT_USAGE, status)
        self.assertIn("cgring: error:", err)

    def test_meth_main__scenario(self):
        status, out, _ = run("scenario", "4.1.8")
        self.assertEqual(EXIT_OK, status)
        self.assertEqual("main=7 correction=1 value=6", out.strip())

    def test_meth_main__scenario_all(self):
        """Checks whether --all prints the table of scenarios."""
        status, out, _ = run("scenario", "--all")
        self.assertEqual(EXIT_OK, status)
        self.assertIn("4.2.3", out)
        self.assertIn("| Id", out)

    def test_meth_main__scenario_errors(self):
        """Ensures unknown ids and a missing id are usage errors."""
        self.assertEqual(EXIT_USAGE, run("scenario", "9.9.9")[0])
        self.assertEqual(EXIT_USAGE, run("scenario")[0])

    def test_meth_main__charpoly(self):
        status, out, _ = run("charpoly")
        self.assertEqual(EXIT_OK, status)
        self.assertEqual("t^15 - 102 t^11 + 317 t^7 - 2048 t^3", out.strip())
        self.assertEqual("t^15", run("charpoly", "--q", "0")[1].strip())

    def test_meth_main__charpoly_bad_q(self):
        self.assertEqual(EXIT_USAGE, run("charpoly", "--q", "half")[0])

    def test_meth_main__unknown_label(self):
        """Ensures an unknown Schubert label names itself in the error."""
        status, _, err = run("product", "s9", "s1")
        self.assertEqual(EXIT_USAGE, status)
        self.assertIn("s9", err)

    def test_meth_main__conjecture_o(self):
        status, out, _ = run("conjecture-o")
        self.assertEqual(EXIT_OK, status)
        self.assertIn("galkin_bound", out)

    def test_meth_main__bruhat(self):
        """Checks whether the Bruhat graph carries the s2 to s3p edge of weight 3."""
        status, out, _ = run("--json", "bruhat")
        self.assertEqual(EXIT_OK, status)
        edges = json.loads(out)["edges"]
        self.assertIn({"source": "s2", "target": "s3p", "multiplicity": 3}, edges)

    def test_meth_main__usage(self):
        """Checks that argparse errors exit with status 2."""
        for argv in ([], ["frobnicate"], ["gw", "one", "s1", "s1", "s1"]):
            with self.assertRaises(SystemExit) as cm:
                run(*argv)
            self.assertEqual(2, cm.exception.code)


class VerifyCommandTest(unittest.TestCase):
    def _write(self, data):
        handle, path = tempfile.mkstemp(suffix=".json")
        with os.fdopen(handle, "w") as f:
            json.dump(data, f)
        self.addCleanup(os.remove, path)
        return path

    def test_meth_main__verify_table(self):
        """Checks the table suite passes on the shipped data."""
        status, out, _ = run("verify", "--suite", "table")
        self.assertEqual(EXIT_OK, status)
        self.assertIn("table: ", out)
        self.assertIn("0 failed", out)

    def test_meth_main__missing_table_file(self):
        """Ensures a missing table file is a usage error naming the file."""
        status, _, err = run("--table-file", "/nonexistent/missing.json", "verify")
        self.assertEqual(EXIT_USAGE, status)
        self.assertIn("missing.json", err)

    def test_meth_main__faulty_table(self):
        """Ensures a perturbed table fails associativity."""
        table = load_default_table()
        faulty = table.entry("s2", "s5p") - basis_element("s7") * 2
        path = self._write(table.with_entry("s2", "s5p", faulty).to_json())
        status, out, _ = run("--json", "--table-file", path, "verify", "--suite", "table")
        self.assertEqual(EXIT_FAILED, status)
        data = json.loads(out)
        self.assertEqual(1, data["exit_status"])
        failing = {c["id"] for c in data["checks"] if c["status"] == "fail"}
        self.assertIn("associativity", failing)

    def test_meth_main__derive(self):
        status, out, _ = run("derive")
        self.assertEqual(EXIT_OK, status)
        self.assertIn("relations match the reference: yes", out)
        self.assertIn("differences from the table: 0", out)

    def test_meth_main__derive_table_disagrees(self):
        """Checks whether derive lists the entries the rebuilt ring disagrees with."""
        table = load_default_table()
        faulty = table.entry("s3", "s1") - SchubertElement.from_terms([("s0", 1, 1)])
        path = self._write(table.with_entry("s3", "s1", faulty).to_json())
        status, out, _ = run("--json", "--table-file", path, "derive")
        self.assertEqual(EXIT_FAILED, status)
        diff = json.loads(out)["diff"]
        self.assertEqual(1, len(diff))
        self.assertEqual(("s1", "s3", 4), (diff[0]["a"], diff[0]["b"], diff[0]["degree"]))


if __name__ == "__main__":
    unittest.main()
