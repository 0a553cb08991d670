import unittest
from fractions import Fraction

from cgring.errors import UnknownScenarioError
from cgring.scenarios import (
    SCENARIOS,
    get_scenario,
    run_all,
    run_scenario,
    scenario_ids,
    scenario_value,
)

EXPECTED = {
    "4.1.1": 2,
    "4.1.2": 0,
    "4.1.3": 1,
    "4.1.4": 3,
    "4.1.5": 2,
    "4.1.6": 2,
    "4.1.7": 3,
    "4.1.8": 6,
    "4.1.9": 4,
    "4.2.1": 0,
    "4.2.2": 2,
    "4.2.3": 2,
}


class ScenarioTest(unittest.TestCase):
    def test_attrib_ids(self):
        """Checks the twelve scenario ids in their published order."""
        self.assertEqual(list(EXPECTED), scenario_ids())
        self.assertEqual(12, len(SCENARIOS))

    def test_meth_run_all(self):
        """Checks every scenario evaluates to its expected line count."""
        results = run_all()
        for scenario_id, value in EXPECTED.items():
            self.assertEqual(Fraction(value), results[scenario_id].value, scenario_id)

    def test_meth_run_scenario__corrections(self):
        """Checks the split into main integral and degenerate-locus correction."""
        for scenario_id, main, correction in (
            ("4.1.8", 7, 1),
            ("4.2.3", 3, 1),
            ("4.1.9", 4, 0),
            ("4.1.1", 2, 0),
        ):
            result = run_scenario(scenario_id)
            self.assertEqual(Fraction(main), result.main, scenario_id)
            self.assertEqual(Fraction(correction), result.correction, scenario_id)

    def test_meth_str(self):
        self.assertEqual("main=7 correction=1 value=6", str(run_scenario("4.1.8")))

    def test_meth_to_json(self):
        self.assertEqual(
            {"id": "4.2.3", "main": "3", "correction": "1", "value": "2"},
            run_scenario("4.2.3").to_json(),
        )

    def test_meth_scenario_value(self):
        self.assertEqual(Fraction(3), scenario_value("4.1.7"))

    def test_meth_run_scenario__unknown_id(self):
        """Ensures unknown ids raise UnknownScenarioError, which is also a KeyError."""
        for bad in ("4.1.10", "", "4.3.1"):
            with self.assertRaises(UnknownScenarioError):
                run_scenario(bad)
        with self.assertRaises(KeyError):
            get_scenario("nope")

    def test_attrib_main__shared_integrals(self):
        """Checks whether the three-point counts on P3 and P2 reuse the two-point integrals."""
        for two_point, three_point in (("4.1.2", "4.2.1"), ("4.1.5", "4.2.2")):
            self.assertIs(get_scenario(two_point).main, get_scenario(three_point).main)
            self.assertEqual(
                run_scenario(two_point).value, run_scenario(three_point).value, three_point
            )

    def test_attrib_invariant(self):
        """Checks the invariant each scenario computes and that corrections are optional."""
        self.assertEqual("I1(s2, s4, s6p)", get_scenario("4.2.2").invariant)
        self.assertIsNone(get_scenario("4.1.1").correction)


if __name__ == "__main__":
    unittest.main()
