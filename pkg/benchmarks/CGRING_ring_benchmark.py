from benchmark_utils import BenchmarkSuite
from cgring import load_default_giambelli, load_default_table
from cgring.presentation import SchubertCoordinates, cg_presented_ring, evaluate_in_schubert
from cgring.schubert import basis_element, verify_table

# === Cases ===
# Each case is a tuple of: (name, statement)
# Every statement is timed `number` times in a row, `repeat` times over,
# and the table reports the time per single call.
# ====================================================

table = load_default_table()
dictionary = load_default_giambelli()
ring = cg_presented_ring()
ring.graded_dimensions()

GLOB = {
    "table": table,
    "dictionary": dictionary,
    "ring": ring,
    "coordinates": SchubertCoordinates(ring, dictionary),
    "evaluate_in_schubert": evaluate_in_schubert,
    "verify_table": verify_table,
    "s1": basis_element("s1"),
    "s4p": basis_element("s4p"),
    "mixed": basis_element("s2") + basis_element("s2p") * 3 + basis_element("s5"),
    "gen": ring.gen,
}

product_cases = [
    ("s1 * s1", "table.quantum_product(s1, s1)"),
    ("s1 * s4p", "table.quantum_product(s1, s4p)"),
    ("mixed * mixed", "table.quantum_product(mixed, mixed)"),
    ("s1 ^ 15", "table.power(s1, 15)"),
]

presentation_cases = [
    ("normal form s1^9", "ring.normal_form(gen('s1') ** 9)"),
    ("normal form s2^8", "ring.normal_form(gen('s2') ** 8)"),
    ("evaluate G(s8)", "evaluate_in_schubert(table, dictionary['s8'])"),
    ("product s4p * s4pp", "coordinates.product('s4p', 's4pp')"),
]

verification_cases = [
    ("verify table", "verify_table(table)"),
]

# === Suites ===
GROUPS = [
    ("Quantum product", product_cases),
    ("Presentation", presentation_cases),
    ("Verification", verification_cases),
]

BenchmarkSuite("cgring - ring arithmetic", GROUPS, GLOB, number=5, repeat=3).run_suite()
