import json
import unittest
from dataclasses import replace
from fractions import Fraction

from cgring import load_default_giambelli, load_default_table
from cgring.errors import InconsistentError, UnderdeterminedError
from cgring.pipeline import (
    DEGREE_ONE_UNKNOWNS,
    RESTRICTIONS,
    SCENARIO_CONDITIONS,
    ansatz_consistency,
    close_loop,
    derive,
    derive_missing_products,
    derive_presentation,
    equation,
    leave_one_out,
    scenario_outputs,
    solve_chevalley,
    solve_degree_one,
    table_invariants,
    verify_pipeline,
    verify_scenarios,
)
from cgring.presentation import cg_presented_ring, cg_relations
from cgring.schubert import REFERENCE_UNKNOWNS, ChevalleyUnknowns, SchubertElement


class EquationTest(unittest.TestCase):
    def test_meth_equation__two_point(self):
        """Checks the linear equation a two-point condition contributes."""
        self.assertEqual(
            {"a5": Fraction(2), "b5": Fraction(6)}, equation(("2111", "2211"))
        )
        self.assertEqual({"a4": Fraction(1), "a4p": Fraction(2)}, equation(("211", "s7")))

    def test_meth_equation__three_point(self):
        """Checks the equation a three-point condition contributes in the 1111, 2, 33 slot."""
        self.assertEqual(
            {"i_2_4_6": Fraction(1), "i_2_4_6p": Fraction(1)},
            equation(("1111", "2", "33")),
        )

    def test_meth_equation__no_slot(self):
        """Ensures a condition with no matching slot raises InconsistentError."""
        with self.assertRaises(InconsistentError):
            equation(("s1", "s8"))

    def test_attrib_restrictions(self):
        """Ensures every restricted class has the degree of its partition."""
        for partition, image in RESTRICTIONS.items():
            self.assertEqual(sum(int(part) for part in partition), image.degree, partition)

    def test_attrib_scenario_conditions(self):
        self.assertEqual(list(scenario_outputs()), list(SCENARIO_CONDITIONS))


class SolveTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.table = load_default_table()
        cls.outputs = scenario_outputs()

    def test_meth_solve_chevalley(self):
        """Checks whether the twelve counts reproduce the reference Chevalley unknowns."""
        self.assertEqual(REFERENCE_UNKNOWNS, solve_chevalley(self.outputs))

    def test_meth_solve_degree_one(self):
        """Checks the solved degree-one invariants against the shipped table."""
        solved = solve_degree_one(self.outputs)
        self.assertEqual(Fraction(0), solved["i_2_2_8"])
        self.assertEqual(Fraction(2), solved["i_2_4_6p"])
        self.assertEqual(Fraction(0), solved["i_2_4_6"])
        self.assertEqual(table_invariants(self.table), solved)

    def test_meth_solve_degree_one__zero_outputs(self):
        solved = solve_degree_one({i: Fraction(0) for i in self.outputs})
        self.assertEqual({name: Fraction(0) for name in DEGREE_ONE_UNKNOWNS}, solved)

    def test_meth_solve_degree_one__fractional_value(self):
        """A tau_211 count of 4 forces a4p = 3/2."""
        with self.assertRaises(InconsistentError):
            solve_degree_one(dict(self.outputs, **{"4.1.4": Fraction(4)}))

    def test_meth_solve_degree_one__negative_value(self):
        """Ensures a negative count is rejected as inconsistent."""
        with self.assertRaises(InconsistentError):
            solve_degree_one(dict(self.outputs, **{"4.1.3": Fraction(-1)}))

    def test_meth_solve_degree_one__missing_scenario(self):
        """Ensures dropping a scenario leaves the system underdetermined."""
        outputs = dict(self.outputs)
        del outputs["4.1.9"]
        with self.assertRaises(UnderdeterminedError):
            solve_degree_one(outputs)

    def test_meth_leave_one_out(self):
        """Checks whether every one of the twelve counts is needed."""
        self.assertEqual(
            {i: "underdetermined" for i in self.outputs}, leave_one_out(self.outputs)
        )

    def test_meth_derive_missing_products(self):
        """Checks the derived s2*s2 and s4*s2 against the table."""
        missing = derive_missing_products(self.outputs, self.table)
        self.assertEqual(self.table.entry("s2", "s2"), missing.s2_s2)
        self.assertEqual(self.table.entry("s4", "s2"), missing.s4_s2)

    def test_meth_derive_missing_products__extra_line(self):
        """One line through a point meeting two tau_2 cycles adds q to sigma_2^2."""
        outputs = dict(self.outputs, **{"4.2.1": Fraction(1)})
        missing = derive_missing_products(outputs, self.table)
        self.assertEqual(
            SchubertElement.from_terms([("s0", 1, 1)]),
            missing.s2_s2 - self.table.entry("s2", "s2"),
        )


class DerivationTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.table = load_default_table()
        cls.outputs = scenario_outputs()
        missing = derive_missing_products(cls.outputs, cls.table)
        cls.derivation = derive_presentation(
            solve_chevalley(cls.outputs), missing, cls.table
        )

    def test_attrib_relations(self):
        """Checks whether the derived relations are the reference R5 and R6."""
        self.assertEqual(cg_relations(), self.derivation.relations)

    def test_attrib_a7(self):
        self.assertEqual(Fraction(0), self.derivation.a7)
        self.assertEqual(REFERENCE_UNKNOWNS, self.derivation.unknowns)

    def test_attrib_dictionary(self):
        """Derived polynomials agree with the shipped ones modulo the relations."""
        ring = cg_presented_ring()
        shipped = load_default_giambelli()
        for label, poly in self.derivation.dictionary.items():
            self.assertTrue(ring.in_ideal(poly - shipped[label]), label)

    def test_meth_close_loop(self):
        """Ensures the rebuilt multiplication table matches the shipped one."""
        self.assertEqual([], close_loop(self.derivation, self.table))

    def test_meth_close_loop__classical_input(self):
        """With every invariant zero the loop closes on the classical table only."""
        zeros = {i: Fraction(0) for i in self.outputs}
        derivation = derive_presentation(
            solve_chevalley(zeros), derive_missing_products(zeros, self.table), self.table
        )
        self.assertEqual(cg_relations(q=False), derivation.relations)
        self.assertEqual(Fraction(0), derivation.a7)
        differing = {(d.a, d.b) for d in close_loop(derivation, self.table)}
        quantum = {
            (a, b)
            for a, b in self.table.pairs()
            if self.table.entry(a, b) != self.table.entry(a, b).classical()
        }
        self.assertEqual(quantum, differing)

    def test_meth_close_loop__wrong_chevalley_unknown(self):
        """Checks whether a4pp = 1 first shows up in the degree 5 products."""
        unknowns = replace(REFERENCE_UNKNOWNS, a4pp=Fraction(1))
        missing = derive_missing_products(self.outputs, self.table)
        derivation = derive_presentation(unknowns, missing, self.table)
        self.assertFalse(derivation.consistent)
        self.assertTrue(derivation.contradictions[0].startswith("degree 7"))

        diff = close_loop(derivation, self.table)
        self.assertNotEqual([], diff)
        self.assertEqual(5, diff[0].degree)
        self.assertIn(("s1", "s4pp"), [(d.a, d.b) for d in diff if d.degree == 5])
        self.assertEqual(sorted(d.degree for d in diff), [d.degree for d in diff])

    def test_meth_derive__wrong_three_point_invariant(self):
        """Checks whether I_1(s2, s2, s8) = 1 is carried through to a non-empty diff."""
        outputs = dict(self.outputs, **{"4.2.1": Fraction(1)})
        report = derive(self.table, outputs)
        self.assertNotEqual([], report.contradictions)
        self.assertNotEqual([], report.diff)
        self.assertIn(("s2", "s2"), [(d.a, d.b) for d in report.diff])
        self.assertEqual(4, report.diff[0].degree)

    def test_attrib_consistent(self):
        """Checks whether the reference derivation records no contradictions."""
        derivation = self.derivation
        self.assertTrue(derivation.consistent)
        self.assertEqual((), derivation.contradictions)


class ReportTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.table = load_default_table()

    def test_meth_ansatz_consistency(self):
        """Checks the two readings of each Chevalley unknown agree on the shipped table."""
        readings = ansatz_consistency(self.table)
        self.assertEqual(set(ChevalleyUnknowns.names()), set(readings))
        self.assertEqual([Fraction(0), Fraction(0)], readings["a5"])
        self.assertEqual([Fraction(1), Fraction(1)], readings["a5p"])

    def test_meth_ansatz_consistency__fault(self):
        """Ensures a perturbed s6*s1 shows up as disagreeing a5 readings."""
        entry = self.table.entry("s6", "s1")
        faulty = entry + SchubertElement.from_terms([("s3", 1, 1)])
        readings = ansatz_consistency(self.table.with_entry("s6", "s1", faulty))
        self.assertEqual([Fraction(0), Fraction(1)], readings["a5"])

    def test_meth_verify_scenarios(self):
        report = verify_scenarios(self.table)
        self.assertTrue(report.ok, report.to_table())
        self.assertEqual(list(SCENARIO_CONDITIONS), report.check_ids())

    def test_meth_verify_scenarios__fault(self):
        """Ensures a missing q term in s3*s1 fails exactly scenario 4.1.1."""
        entry = self.table.entry("s3", "s1")
        faulty = entry - SchubertElement.from_terms([("s0", 1, 1)])
        report = verify_scenarios(self.table.with_entry("s3", "s1", faulty))
        self.assertEqual(["4.1.1"], [c.id for c in report.failures()])

    def test_meth_verify_pipeline(self):
        """Checks whether the full pipeline suite passes on the shipped data."""
        report = verify_pipeline(self.table, load_default_giambelli())
        self.assertTrue(report.ok, report.to_table())
        self.assertIn("close_loop", report.check_ids())
        self.assertIn("giambelli", report.check_ids())

    def test_meth_verify_pipeline__wrong_invariant(self):
        """Checks whether a contradicted derivation fails without stopping the suite."""
        outputs = dict(scenario_outputs(), **{"4.2.1": Fraction(1)})
        report = verify_pipeline(self.table, outputs=outputs)
        failing = {c.id for c in report.failures()}
        self.assertIn("derivation", failing)
        self.assertIn("close_loop", failing)

    def test_meth_dumps(self):
        """Checks the JSON form of the derivation report."""
        report = derive(self.table)
        data = json.loads(report.dumps())
        self.assertTrue(data["relations_match"])
        self.assertEqual("0", data["a7"])
        self.assertEqual([], data["diff"])
        self.assertEqual([], data["contradictions"])
        self.assertEqual("2", data["unknowns"]["a3"])
        self.assertEqual("s2", data["giambelli"]["s2"])


if __name__ == "__main__":
    unittest.main()
