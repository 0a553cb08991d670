from benchmark_utils import BenchmarkSuite
from cgring import load_default_table
from cgring.pipeline import scenario_outputs, solve_degree_one
from cgring.scenarios import run_scenario
from cgring.schubert import basis_element
from cgring.spectral import (
    conjecture_o_check,
    hyperplane_charpoly,
    multiplication_matrix,
    trace_form,
)

# === Cases ===
# (name, statement) pairs; the table reports the time per single call.
# ====================================================

table = load_default_table()

GLOB = {
    "table": table,
    "s1": basis_element("s1"),
    "multiplication_matrix": multiplication_matrix,
    "hyperplane_charpoly": hyperplane_charpoly,
    "trace_form": trace_form,
    "conjecture_o_check": conjecture_o_check,
    "run_scenario": run_scenario,
    "solve_degree_one": solve_degree_one,
    "outputs": scenario_outputs(),
}

spectral_cases = [
    ("sigma_1 matrix", "multiplication_matrix(table, s1)"),
    ("charpoly q=1", "hyperplane_charpoly(table)"),
    ("trace form", "trace_form(table)"),
    ("conjecture O", "conjecture_o_check(table)"),
]

scenario_cases = [
    ("P1 wedge", "run_scenario('4.1.1')"),
    ("Grassmann bundle", "run_scenario('4.1.8')"),
    ("P1 x G(2, 5)", "run_scenario('4.2.3')"),
    ("solve unknowns", "solve_degree_one(outputs)"),
]

GROUPS = [
    ("Spectrum", spectral_cases),
    ("Scenarios", scenario_cases),
]

BenchmarkSuite("cgring - spectrum and scenarios", GROUPS, GLOB, number=3, repeat=3).run_suite()
