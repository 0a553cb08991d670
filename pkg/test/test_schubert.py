import json
import os
import tempfile
import unittest
from fractions import Fraction

from cgring import load_default_table
from cgring.errors import DataFileError, UnknownLabelError
from cgring.exact import qpoly
from cgring.schubert import (
    BASIS,
    BETTI,
    DEGREE,
    DUAL,
    REFERENCE_UNKNOWNS,
    ChevalleyUnknowns,
    MultiplicationTable,
    SchubertElement,
    basis_element,
    bruhat_graph,
    chevalley_ansatz,
    check_label,
    labels_of_degree,
    load_table,
    verify_table,
)


class SchubertElementTest(unittest.TestCase):
    def testConstruction_from_terms(self):
        """Checks that repeated terms add up and q-exponents are kept apart."""
        x = SchubertElement.from_terms([("s2", 0, 1), ("s2", 0, 1), ("s0", 1, 3)])
        self.assertEqual(Fraction(2), x.coefficient("s2", 0))
        self.assertEqual(Fraction(3), x.coefficient("s0", 1))
        self.assertEqual(qpoly({1: 3}), x.coefficient("s0"))

    def test_meth_str(self):
        """Checks terms print by q-exponent, then basis order, with unit coefficients dropped."""
        x = SchubertElement.from_terms(
            [("s2p", 1, 1), ("s4", 0, 1), ("s4p", 0, 2), ("s0", 2, -1), ("s0", 0, 5)]
        )
        self.assertEqual("5 + s4 + 2*s4p + q*s2p - q^2", str(x))
        self.assertEqual("0", str(SchubertElement.zero()))

    def test_meth_sub__cancellation(self):
        """Ensures a class minus itself is the falsy zero element."""
        x = basis_element("s3") - basis_element("s3")
        self.assertFalse(x)
        self.assertEqual(SchubertElement.zero(), x)

    def test_attrib_degree(self):
        """Checks the degree of homogeneous elements counts q as 4."""
        x = SchubertElement.from_terms([("s6", 0, 1), ("s2", 1, 2)])
        self.assertEqual(6, x.degree)
        self.assertTrue(x.is_homogeneous())
        mixed = basis_element("s1") + basis_element("s2")
        self.assertIsNone(mixed.degree)

    def test_meth_q_part(self):
        """Checks the classical part, single q-parts and specialisation at a value of q."""
        x = SchubertElement.from_terms([("s6", 0, 1), ("s2", 1, 2)])
        self.assertEqual(basis_element("s6"), x.classical())
        self.assertEqual(basis_element("s2") * 2, x.q_part(1))
        self.assertEqual(Fraction(6), x.at_q(3)["s2"])
        self.assertEqual(len(BASIS), len(x.vector_at_q(1)))

    def testConstruction_unknown_label(self):
        """Ensures unknown labels raise UnknownLabelError, which is also a KeyError."""
        for bad in ("s9", "S1", "", "s4ppp"):
            with self.assertRaises(UnknownLabelError):
                basis_element(bad)
            with self.assertRaises(KeyError):
                check_label(bad)

    def test_meth_mul__element_refused(self):
        """Ensures elements only multiply by scalars; products go through a table."""
        with self.assertRaises(TypeError):
            basis_element("s1") * basis_element("s1")


class LabelTest(unittest.TestCase):
    def test_attrib_betti(self):
        """Checks the labels per degree match the Betti numbers of CG."""
        self.assertEqual(15, len(BASIS))
        self.assertEqual(BETTI, tuple(len(labels_of_degree(d)) for d in range(9)))

    def test_attrib_dual(self):
        """Ensures the duality is an involution pairing complementary degrees."""
        for label in BASIS:
            self.assertEqual(label, DUAL[DUAL[label]])
            self.assertEqual(8, DEGREE[label] + DEGREE[DUAL[label]])


class MultiplicationTableTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.table = load_default_table()

    def test_meth_entry(self):
        """Checks a handful of table entries in their printed form."""
        self.assertEqual("s4 + 2*s4p + 2*s4pp", str(self.table.entry("s2", "s2")))
        self.assertEqual("s7", str(self.table.entry("s0", "s7")))
        self.assertEqual(
            "q^2*s6 + q^2*s6p + q^3*s2 + q^3*s2p", str(self.table.entry("s7", "s7"))
        )
        self.assertEqual("s6 + s6p + 2*q*s2p", str(self.table.entry("s4", "s2")))

    def test_meth_entry__corrected(self):
        """Checks the two entries that differ from the misprinted versions."""
        self.assertEqual(Fraction(3), self.table.entry("s5p", "s2").coefficient("s7", 0))
        self.assertEqual(
            "s6 + 3*s6p + q*s2 + q*s2p", str(self.table.entry("s2p", "s4"))
        )

    def test_meth_gw_invariant(self):
        """Checks invariants read off the table, including mismatched degrees."""
        self.assertEqual(Fraction(2), self.table.gw_invariant(1, "s3", "s1", "s8"))
        self.assertEqual(Fraction(1), self.table.gw_invariant(0, "s4", "s4", "s0"))
        self.assertEqual(Fraction(1), self.table.gw_invariant(4, "s8", "s8", "s8"))
        self.assertEqual(Fraction(0), self.table.gw_invariant(4, "s8", "s8", "s7"))
        self.assertEqual(Fraction(0), self.table.gw_invariant(5, "s8", "s8", "s8"))

    def test_meth_quantum_product(self):
        """Ensures the product is bilinear and agrees with the table on basis classes."""
        s1 = basis_element("s1")
        self.assertEqual(self.table.entry("s1", "s1"), self.table.quantum_product(s1, s1))
        x = s1 + basis_element("s0")
        expected = self.table.entry("s1", "s1") + s1 * 2 + basis_element("s0")
        self.assertEqual(expected, self.table.quantum_product(x, x))

    def test_meth_power(self):
        """Checks sigma_1^15 vanishes classically but not quantum mechanically."""
        s1 = basis_element("s1")
        fifteenth = self.table.power(s1, 15)
        self.assertTrue(fifteenth)
        self.assertFalse(fifteenth.classical())

    def test_meth_poincare_pairing(self):
        """Checks the pairing is 1 on dual classes and 0 otherwise."""
        self.assertEqual(
            Fraction(1),
            self.table.poincare_pairing(basis_element("s2"), basis_element("s6")),
        )
        self.assertEqual(
            Fraction(0),
            self.table.poincare_pairing(basis_element("s2"), basis_element("s6p")),
        )

    def test_meth_verify_table(self):
        """Checks every consistency check passes on the shipped table, in order."""
        report = verify_table(self.table)
        self.assertTrue(report.ok, report.to_table())
        self.assertEqual(
            [
                "identity",
                "symmetry",
                "grading",
                "positivity",
                "gw_symmetry",
                "associativity",
                "pairing",
                "chevalley",
                "divisor",
                "bruhat",
                "betti",
            ],
            report.check_ids(),
        )

    def test_meth_verify_table__associativity_fault(self):
        """Ensures a 1 in place of the 3 at s7 in s5p*s2 breaks associativity."""
        entry = self.table.entry("s2", "s5p")
        faulty = entry - basis_element("s7") * 2
        report = verify_table(self.table.with_entry("s2", "s5p", faulty))
        self.assertFalse(report.ok)
        self.assertTrue(report.failures("associativity"))

    def test_meth_verify_table__positivity_fault(self):
        """Ensures a negative structure constant is reported."""
        entry = self.table.entry("s1", "s3")
        faulty = entry - basis_element("s4p") * 3
        report = verify_table(self.table.with_entry("s1", "s3", faulty))
        self.assertTrue(report.failures("positivity"))

    def test_meth_with_entry(self):
        """Ensures replacing an entry updates both orders and leaves the original alone."""
        table = self.table.with_entry("s1", "s2", basis_element("s3"))
        self.assertEqual(basis_element("s3"), table.entry("s2", "s1"))
        self.assertNotEqual(basis_element("s3"), self.table.entry("s2", "s1"))

    def test_meth_bruhat_graph(self):
        """Checks edge multiplicities and that s8 has no outgoing edge."""
        edges = bruhat_graph(self.table)
        self.assertIn(("s2", "s3p", 3), edges)
        self.assertIn(("s7", "s8", 1), edges)
        self.assertNotIn("s8", {source for source, _, _ in edges})

    def test_meth_chevalley_ansatz(self):
        """Ensures the reference unknowns reproduce every sigma_1 row of the table."""
        rows = chevalley_ansatz(REFERENCE_UNKNOWNS)
        for label in BASIS[:-1]:
            self.assertEqual(self.table.entry(label, "s1"), rows[label], label)

    def test_attrib_chevalley_unknowns(self):
        """Checks the reference values and the admissibility test."""
        self.assertEqual(
            (2, 0, 1, 1, 0, 0, 1, 1, 0), tuple(REFERENCE_UNKNOWNS.degree_one())
        )
        self.assertTrue(REFERENCE_UNKNOWNS.is_admissible())
        self.assertFalse(ChevalleyUnknowns(a4p=Fraction(3, 2)).is_admissible())
        self.assertEqual(10, len(ChevalleyUnknowns.names()))

    def test_meth_records(self):
        """Checks that a table rebuilt from its records is entry by entry the same."""
        rebuilt = MultiplicationTable.from_records(self.table.records())
        for a, b in self.table.pairs():
            self.assertEqual(self.table.entry(a, b), rebuilt.entry(a, b))


class LoadTableTest(unittest.TestCase):
    def _write(self, text):
        handle, path = tempfile.mkstemp(suffix=".json")
        with os.fdopen(handle, "w") as f:
            f.write(text)
        self.addCleanup(os.remove, path)
        return path

    def test_meth_load_table__missing_file(self):
        with self.assertRaises(DataFileError):
            load_table("/nonexistent/cg_table.json")

    def test_meth_load_table__malformed_json(self):
        with self.assertRaises(DataFileError):
            load_table(self._write("{not json"))

    def test_meth_load_table__wrong_shape(self):
        """Checks whether structurally wrong files raise DataFileError."""
        documents = (
            [],
            {"labels": []},
            {"labels": [{"label": "s0", "degree": 0}], "products": []},
        )
        for document in documents:
            with self.assertRaises(DataFileError):
                load_table(self._write(json.dumps(document)))

    def test_meth_load_table__round_trip(self):
        table = load_default_table()
        path = self._write(json.dumps(table.to_json()))
        self.assertEqual(table.entry("s8", "s8"), load_table(path).entry("s8", "s8"))


if __name__ == "__main__":
    unittest.main()
