"""Quantum cohomology of the Cayley Grassmannian CG in exact arithmetic."""

from .errors import (
    CGError,
    DataFileError,
    DegreeOutOfRangeError,
    DimensionMismatchError,
    InconsistentError,
    NonSquareError,
    UnderdeterminedError,
    UnknownLabelError,
    UnknownScenarioError,
    UnsupportedRankError,
)
from .config import Settings, load_settings
from .exact import RationalMatrix, charpoly, nullspace, rref, solve_linear
from .schubert import (
    BASIS,
    REFERENCE_UNKNOWNS,
    ChevalleyUnknowns,
    MultiplicationTable,
    SchubertElement,
    basis_element,
    load_table,
    verify_table,
)
from .presentation import (
    GiambelliDictionary,
    PresentedRing,
    cg_presented_ring,
    cg_relations,
    cross_check_presentation,
    evaluate_in_schubert,
    load_giambelli,
)
from .scenarios import SCENARIOS, run_scenario
from .pipeline import (
    derive,
    derive_missing_products,
    derive_presentation,
    close_loop,
    solve_chevalley,
    verify_pipeline,
)
from .spectral import (
    check_semisimple,
    conjecture_o_check,
    galkin_bound_check,
    multiplication_matrix,
)
from .report import VerificationReport

__version__ = "0.1.0"


def load_default_table() -> MultiplicationTable:
    return load_table(load_settings().table_file)


def load_default_giambelli() -> GiambelliDictionary:
    return load_giambelli(load_settings().giambelli_file)
