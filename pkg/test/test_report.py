import json
import unittest

from cgring.report import MAX_CASES, Check, VerificationReport, merge


class VerificationReportTest(unittest.TestCase):
    def test_meth_record__pass(self):
        """Checks a check with no failures passes and reports its case count."""
        report = VerificationReport("table")
        report.record("symmetry", [], 225)
        self.assertTrue(report.ok)
        self.assertEqual(0, report.exit_status)
        self.assertEqual("225 cases", report.checks[0].detail)

    def test_meth_record__failures(self):
        """Ensures one failing check is added per case, capped at MAX_CASES."""
        report = VerificationReport("table")
        report.record("associativity", [str(i) for i in range(MAX_CASES + 5)], 3375)
        self.assertFalse(report.ok)
        self.assertEqual(1, report.exit_status)
        self.assertEqual(MAX_CASES + 1, len(report.failures("associativity")))
        self.assertEqual("... 5 more", report.checks[-1].detail)

    def test_meth_summary(self):
        """Checks the pass and fail counts and the de-duplicated check ids."""
        report = VerificationReport("x")
        report.add("a", True)
        report.add("b", False, "broken")
        report.add("b", False, "broken again")
        self.assertEqual({"total": 3, "passed": 1, "failed": 2}, report.summary())
        self.assertEqual(["a", "b"], report.check_ids())
        self.assertEqual([], report.failures("a"))

    def test_meth_dumps(self):
        """Ensures a report survives a trip through JSON."""
        report = VerificationReport("spectral")
        report.add("charpoly", True, "t^15")
        data = json.loads(report.dumps())
        self.assertEqual("spectral", data["suite"])
        self.assertEqual(
            {"id": "charpoly", "status": "pass", "detail": "t^15"}, data["checks"][0]
        )
        self.assertEqual(report, VerificationReport.from_json(data))

    def test_meth_to_table(self):
        report = VerificationReport("x")
        report.add("identity", False, "(s3)")
        table = report.to_table()
        self.assertIn("| Check", table)
        self.assertIn("FAIL", table)

    def test_meth_merge(self):
        """Checks merged check ids are prefixed with their suite name."""
        first = VerificationReport("table", [Check("identity", True)])
        second = VerificationReport("spectral", [Check("charpoly", False, "wrong")])
        merged = merge("all", [first, second])
        self.assertEqual(["table.identity", "spectral.charpoly"], merged.check_ids())
        self.assertEqual(1, merged.exit_status)


if __name__ == "__main__":
    unittest.main()
