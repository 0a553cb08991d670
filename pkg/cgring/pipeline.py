"""Rebuilds QH*(CG) from the degree-one invariants.

The twelve scenario values, read through the restriction formulas, fix
the undetermined quantum Chevalley coefficients and the three quantum
corrections of sigma_2^2 and sigma_4 sigma_2. From those products alone
the Giambelli polynomials and the two relations are recovered degree by
degree, and the resulting presentation must reproduce the whole table.
"""

import itertools
import json
import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from sympy.polys.rings import PolyElement

from .errors import CGError, InconsistentError, UnderdeterminedError
from .exact import RationalMatrix, primitive_integer_form, rref, solve_linear, to_qq
from .presentation import (
    GiambelliDictionary,
    PresentedRing,
    SchubertCoordinates,
    cg_presented_ring,
    cg_relations,
    cg_ring,
    format_polynomial,
)
from .report import VerificationReport
from .scenarios import SCENARIOS, run_scenario
from .schubert import (
    BASIS,
    CHEVALLEY_ANSATZ,
    DEGREE,
    DUAL,
    INDEX,
    REFERENCE_UNKNOWNS,
    ChevalleyUnknowns,
    MultiplicationTable,
    SchubertElement,
    basis_element,
    chevalley_quantum_part,
)

logger = logging.getLogger(__name__)


def _restriction(*terms: Tuple[str, int]) -> SchubertElement:
    return SchubertElement.from_terms((label, 0, c) for label, c in terms)


# Pullbacks of the Schubert classes tau_lambda of G(4, 7), keyed by partition.
RESTRICTIONS: Dict[str, SchubertElement] = {
    "1": _restriction(("s1", 1)),
    "2": _restriction(("s2", 1)),
    "11": _restriction(("s2p", 1)),
    "3": _restriction(("s3p", 1)),
    "111": _restriction(("s3", 1)),
    "1111": _restriction(("s4", 1)),
    "211": _restriction(("s4", 1), ("s4p", 2)),
    "22": _restriction(("s4", 1), ("s4p", 1), ("s4pp", 1)),
    "31": _restriction(("s4p", 1), ("s4pp", 1)),
    "2111": _restriction(("s5", 2)),
    "221": _restriction(("s5", 3), ("s5p", 1)),
    "311": _restriction(("s5", 1), ("s5p", 1)),
    "32": _restriction(("s5", 1), ("s5p", 1)),
    "2211": _restriction(("s6", 1), ("s6p", 3)),
    "222": _restriction(("s6", 2), ("s6p", 2)),
    "321": _restriction(("s6", 3), ("s6p", 3)),
    "33": _restriction(("s6", 1), ("s6p", 1)),
    "3111": _restriction(("s6", 1), ("s6p", 1)),
}

# Conditions imposed on the lines in each scenario: ambient partitions or CG labels.
SCENARIO_CONDITIONS: Dict[str, Tuple[str, ...]] = {
    "4.1.1": ("111", "s8"),
    "4.1.2": ("3", "s8"),
    "4.1.3": ("1111", "s7"),
    "4.1.4": ("211", "s7"),
    "4.1.5": ("22", "s7"),
    "4.1.6": ("2111", "s6p"),
    "4.1.7": ("221", "s6p"),
    "4.1.8": ("2111", "2211"),
    "4.1.9": ("32", "2211"),
    "4.2.1": ("2", "2", "s8"),
    "4.2.2": ("2", "1111", "s6p"),
    "4.2.3": ("1111", "2", "33"),
}

THREE_POINT_UNKNOWNS: Dict[Tuple[str, ...], str] = {
    ("s2", "s2", "s8"): "i_2_2_8",
    ("s2", "s4", "s6p"): "i_2_4_6p",
    ("s2", "s4", "s6"): "i_2_4_6",
}

DEGREE_ONE_UNKNOWNS: Tuple[str, ...] = ChevalleyUnknowns.names()[:-1] + tuple(
    THREE_POINT_UNKNOWNS.values()
)


def _sorted_labels(labels) -> Tuple[str, ...]:
    return tuple(sorted(labels, key=INDEX.__getitem__))


def _two_point_unknowns() -> Dict[Tuple[str, ...], str]:
    """I_1(s1, a, b) = I_1(a, b) for every degree-one slot of the Chevalley ansatz."""
    slots = {}
    for label, (_, quantum) in CHEVALLEY_ANSATZ.items():
        for name, k, target in quantum:
            if k == 1:
                slots[_sorted_labels((label, DUAL[target]))] = name
    return slots


TWO_POINT_UNKNOWNS = _two_point_unknowns()


def restrict(condition: str) -> SchubertElement:
    if condition in DEGREE:
        return basis_element(condition)
    return RESTRICTIONS[condition]


def equation(conditions: Sequence[str]) -> Dict[str, Fraction]:
    """Expands the invariant of the restricted conditions over the unknowns."""
    images = [restrict(c) for c in conditions]
    slots = TWO_POINT_UNKNOWNS if len(images) == 2 else THREE_POINT_UNKNOWNS
    row: Dict[str, Fraction] = {}
    for combination in itertools.product(*(image.terms() for image in images)):
        labels = _sorted_labels(label for label, _, _ in combination)
        coeff = Fraction(1)
        for _, _, c in combination:
            coeff *= c
        if labels not in slots:
            raise InconsistentError(f"no degree-one unknown for I_1{labels}")
        row[slots[labels]] = row.get(slots[labels], Fraction(0)) + coeff
    return row


def scenario_outputs(ids: Optional[Sequence[str]] = None) -> Dict[str, Fraction]:
    return {i: run_scenario(i).value for i in (ids or SCENARIOS)}


def table_invariants(table: MultiplicationTable) -> Dict[str, Fraction]:
    """The twelve degree-one unknowns as read off a multiplication table."""
    values = {
        name: table.gw_invariant(1, "s1", *labels) for labels, name in TWO_POINT_UNKNOWNS.items()
    }
    values.update(
        (name, table.gw_invariant(1, *labels)) for labels, name in THREE_POINT_UNKNOWNS.items()
    )
    return values


def verify_scenarios(table: MultiplicationTable) -> VerificationReport:
    """Each scenario's integral against the invariant the table predicts for it."""
    report = VerificationReport("scenarios")
    invariants = table_invariants(table)
    for scenario_id, conditions in SCENARIO_CONDITIONS.items():
        result = run_scenario(scenario_id)
        expected = sum(
            (c * invariants[name] for name, c in equation(conditions).items()), Fraction(0)
        )
        report.add(
            scenario_id,
            result.value == expected,
            f"{result}" if result.value == expected else f"{result}, table predicts {expected}",
        )
    return report


def solve_degree_one(outputs: Mapping[str, Fraction]) -> Dict[str, Fraction]:
    """Solves the twelve unknowns from whichever scenario values are given.

    Raises UnderdeterminedError when the given scenarios do not pin every
    unknown down, and InconsistentError when they contradict each other
    or force a value that is not a non-negative integer.
    """
    ids = [i for i in SCENARIO_CONDITIONS if i in outputs]
    rows = []
    for scenario_id in ids:
        row = equation(SCENARIO_CONDITIONS[scenario_id])
        rows.append([row.get(name, Fraction(0)) for name in DEGREE_ONE_UNKNOWNS])
    matrix = RationalMatrix.from_rows(rows, len(DEGREE_ONE_UNKNOWNS))
    values = solve_linear(matrix, [Fraction(outputs[i]) for i in ids]).unwrap()
    solved = dict(zip(DEGREE_ONE_UNKNOWNS, values))
    bad = [f"{k}={v}" for k, v in solved.items() if v < 0 or v.denominator != 1]
    if bad:
        raise InconsistentError(f"inadmissible invariants: {', '.join(bad)}")
    logger.debug("degree-one invariants: %s", {k: str(v) for k, v in solved.items()})
    return solved


def solve_chevalley(outputs: Mapping[str, Fraction]) -> ChevalleyUnknowns:
    """The Chevalley unknowns; a7 stays 0 until the presentation is derived."""
    solved = solve_degree_one(outputs)
    return ChevalleyUnknowns(**{name: solved[name] for name in ChevalleyUnknowns.names()[:-1]})


@dataclass(frozen=True)
class MissingProducts:
    s2_s2: SchubertElement
    s4_s2: SchubertElement


def derive_missing_products(
    outputs: Mapping[str, Fraction], table: MultiplicationTable
) -> MissingProducts:
    """sigma_2^2 and sigma_4 sigma_2: classical part from the table, q terms from the scenarios."""
    solved = solve_degree_one(outputs)

    def quantum(a: str, b: str) -> SchubertElement:
        terms = []
        for labels, name in THREE_POINT_UNKNOWNS.items():
            rest = list(labels)
            if a in rest:
                rest.remove(a)
                if b in rest:
                    rest.remove(b)
                    terms.append((DUAL[rest[0]], 1, solved[name]))
        return SchubertElement.from_terms(terms)

    return MissingProducts(
        s2_s2=table.entry("s2", "s2").classical() + quantum("s2", "s2"),
        s4_s2=table.entry("s4", "s2").classical() + quantum("s4", "s2"),
    )


# (degree, products used, labels solved for) for each degree of the derivation
STAGES: Tuple[Tuple[int, Tuple[Tuple[str, str], ...], Tuple[str, ...]], ...] = (
    (2, (("s1", "s1"),), ("s2p",)),
    (3, (("s2", "s1"), ("s2p", "s1")), ("s3", "s3p")),
    (4, (("s3", "s1"), ("s3p", "s1"), ("s2", "s2")), ("s4", "s4p", "s4pp")),
    (5, (("s4", "s1"), ("s4p", "s1"), ("s4pp", "s1")), ("s5", "s5p")),
    (6, (("s5", "s1"), ("s5p", "s1"), ("s4", "s2")), ("s6", "s6p")),
    (7, (("s6", "s1"), ("s6p", "s1")), ("s7",)),
    (8, (("s7", "s1"),), ("s8",)),
)


def _scaled(p: PolyElement, c) -> PolyElement:
    return p * to_qq(c)


def _solve_stage(
    known: Dict[str, PolyElement],
    rows: Sequence[Tuple[str, str, SchubertElement]],
    unknown: Sequence[str],
) -> Tuple[Dict[str, PolyElement], List[PolyElement]]:
    """One degree: Giambelli polynomials for ``unknown`` plus the relations left over.

    Each row a*b = sum c_l l is rewritten as sum over unknown l of c_l G(l)
    = G(a) G(b) - (known terms). Row reducing [M | I] pairs every row
    combination with its right-hand side; combinations whose M part
    vanishes are relations.
    """
    q = cg_ring()["q"]
    matrix, rhs = [], []
    for a, b, product in rows:
        value = known[a] * known[b]
        coeffs = [Fraction(0)] * len(unknown)
        for label, k, c in product.terms():
            if k == 0 and label in unknown:
                coeffs[unknown.index(label)] += c
            elif label in known:
                value -= _scaled(q**k * known[label], c)
            else:
                raise InconsistentError(f"{a}*{b} involves q^{k}*{label} before it is known")
        matrix.append(coeffs)
        rhs.append(value)
    n = len(unknown)
    augmented = RationalMatrix.from_rows(matrix, n).hstack(RationalMatrix.identity(len(rows)))
    reduced = rref(augmented)
    solved: Dict[str, PolyElement] = {}
    relations: List[PolyElement] = []
    for i in range(reduced.rank):
        row = reduced.matrix.row(i)
        combination = sum(
            (_scaled(r, c) for r, c in zip(rhs, row[n:]) if c), cg_ring().zero
        )
        head = row[:n]
        if not any(head):
            relations.append(combination)
            continue
        if sum(1 for c in head if c) != 1:
            raise UnderdeterminedError(f"cannot separate {', '.join(unknown)}")
        solved[unknown[head.index(1)]] = combination
    missing = [label for label in unknown if label not in solved]
    if missing:
        raise UnderdeterminedError(f"no Giambelli polynomial found for {', '.join(missing)}")
    return solved, relations


def _canonical_relation(relation: PolyElement, previous: Sequence[PolyElement]) -> PolyElement:
    """Clears the leading monomials of s1 multiples of earlier relations, then normalises."""
    graded = cg_ring()
    s1 = graded["s1"]
    degree = graded.degree_of(relation)
    for earlier in previous:
        multiple = s1 ** (degree - graded.degree_of(earlier)) * earlier
        coeff = relation.get(multiple.LM, graded.ring.domain.zero)
        if coeff:
            relation = relation - multiple * (coeff / multiple.LC)
    if not relation:
        raise InconsistentError(f"degree {degree} relation is a multiple of lower ones")
    return primitive_integer_form(relation)


@dataclass(frozen=True)
class Derivation:
    unknowns: ChevalleyUnknowns
    relations: Tuple[PolyElement, ...]
    dictionary: GiambelliDictionary
    ring: PresentedRing
    contradictions: Tuple[str, ...] = ()

    @property
    def a7(self) -> Fraction:
        return self.unknowns.a7

    @property
    def consistent(self) -> bool:
        return not self.contradictions


def _row(
    table: MultiplicationTable, unknowns: ChevalleyUnknowns, missing: MissingProducts, a: str, b: str
) -> SchubertElement:
    if b == "s1":
        return table.entry(a, "s1").classical() + chevalley_quantum_part(a, unknowns)
    if (a, b) == ("s2", "s2"):
        return missing.s2_s2
    if (a, b) == ("s4", "s2"):
        return missing.s4_s2
    raise KeyError((a, b))


def derive_presentation(
    unknowns: ChevalleyUnknowns, missing: MissingProducts, table: MultiplicationTable
) -> Derivation:
    """Giambelli polynomials, R5(q), R6(q) and a7 from the degree-one data.

    Only the q = 0 slice of ``table`` is read. A degree 7 or 8 relation
    outside the ideal of R5 and R6 is recorded in ``contradictions`` and
    the derivation carries on, so :func:`close_loop` can show where the
    products diverge. Raises InconsistentError when the a7 equation has
    no solution and nothing earlier went wrong, and DimensionMismatchError
    when the relations do not cut out a ring of the right size.
    """
    graded = cg_ring()
    q, s1 = graded["q"], graded["s1"]
    working = replace(unknowns, a7=Fraction(0))
    known: Dict[str, PolyElement] = {"s0": graded.one, "s1": s1, "s2": graded["s2"]}
    relations: List[PolyElement] = []
    contradictions: List[str] = []
    ring: Optional[PresentedRing] = None
    for degree, pairs, labels in STAGES:
        rows = [(a, b, _row(table, working, missing, a, b)) for a, b in pairs]
        solved, found = _solve_stage(known, rows, labels)
        known.update(solved)
        if ring is None:
            for relation in found:
                relations.append(_canonical_relation(relation, relations))
            if degree == 6:
                ring = cg_presented_ring(relations)
        else:
            for relation in found:
                if not ring.in_ideal(relation):
                    message = (
                        f"degree {degree} relation {format_polynomial(relation)} "
                        "is not in the ideal of the lower relations"
                    )
                    logger.warning(message)
                    contradictions.append(message)
        logger.debug("degree %d: solved %s, %d relations", degree, list(solved), len(found))

    # s8*s1 = a3 q s5 + a3p q s5p + a7 q^2 s1, with G(s8) = G8' - a7 q^2
    consistency = s1 * known["s8"]
    for label, k, c in chevalley_quantum_part("s8", working).terms():
        consistency -= _scaled(q**k * known[label], c)
    top = DEGREE["s8"] + 1
    target = ring.coordinates(q**2 * s1, top)
    values = ring.coordinates(consistency, top)
    solution = solve_linear(RationalMatrix.from_rows([[x] for x in target], 1), values)
    if solution.ok or not contradictions:
        (twice_a7,) = solution.unwrap()
        a7 = twice_a7 / 2
    else:
        a7 = Fraction(0)
        contradictions.append(f"a7 equation is {solution.status.value}, a7 left at 0")
    known["s8"] = known["s8"] - _scaled(q**2, a7)
    logger.debug("a7 = %s", a7)

    dictionary = GiambelliDictionary({label: ring.normal_form(known[label]) for label in BASIS})
    return Derivation(
        replace(unknowns, a7=a7), tuple(relations), dictionary, ring, tuple(contradictions)
    )


@dataclass(frozen=True)
class ProductDiff:
    a: str
    b: str
    derived: Optional[SchubertElement]
    expected: SchubertElement
    error: str = ""

    @property
    def degree(self) -> int:
        return DEGREE[self.a] + DEGREE[self.b]

    def to_json(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "degree": self.degree,
            "derived": None if self.derived is None else str(self.derived),
            "expected": str(self.expected),
            "error": self.error,
        }

    def __str__(self):
        derived = self.error if self.derived is None else f"derived {self.derived}"
        return f"{self.a}*{self.b}: {derived}, table {self.expected}"


def close_loop(derivation: Derivation, table: MultiplicationTable) -> List[ProductDiff]:
    """All 120 products from the derived presentation, compared with the table.

    The diff is ordered by degree, so its first entry is the lowest degree
    at which the presentation and the table part ways.
    """
    coordinates = SchubertCoordinates(derivation.ring, derivation.dictionary)
    diff = []
    for a, b in itertools.combinations_with_replacement(BASIS, 2):
        expected = table.entry(a, b)
        try:
            derived = coordinates.product(a, b)
        except CGError as exc:
            diff.append(ProductDiff(a, b, None, expected, f"{type(exc).__name__}: {exc}"))
            continue
        if derived != expected:
            diff.append(ProductDiff(a, b, derived, expected))
    diff.sort(key=lambda d: (d.degree, INDEX[d.a], INDEX[d.b]))
    logger.debug("closed loop: %d products differ", len(diff))
    return diff


def leave_one_out(outputs: Mapping[str, Fraction]) -> Dict[str, str]:
    """For each scenario, the outcome of solving without it."""
    outcomes = {}
    for scenario_id in outputs:
        rest = {k: v for k, v in outputs.items() if k != scenario_id}
        try:
            solve_degree_one(rest)
            outcomes[scenario_id] = "solved"
        except UnderdeterminedError:
            outcomes[scenario_id] = "underdetermined"
        except InconsistentError:
            outcomes[scenario_id] = "inconsistent"
    return outcomes


def ansatz_consistency(table: MultiplicationTable) -> Dict[str, List[Fraction]]:
    """Every reading of each unknown from the table's sigma_1 rows.

    The same unknown occupies two slots (e.g. a5 in sigma_5 sigma_1 and in
    sigma_6 sigma_1); a consistent table gives one value per unknown.
    """
    readings: Dict[str, List[Fraction]] = {}
    for label, (_, slots) in CHEVALLEY_ANSATZ.items():
        row = table.entry(label, "s1")
        for name, k, target in slots:
            readings.setdefault(name, []).append(row.coefficient(target, k))
    return readings


@dataclass
class DerivationReport:
    unknowns: Dict[str, Fraction] = field(default_factory=dict)
    relations: List[str] = field(default_factory=list)
    giambelli: Dict[str, str] = field(default_factory=dict)
    a7: Optional[Fraction] = None
    diff: List[ProductDiff] = field(default_factory=list)
    relations_match: bool = False
    contradictions: List[str] = field(default_factory=list)

    @classmethod
    def build(cls, derivation: Derivation, solved: Mapping[str, Fraction], diff: List[ProductDiff]):
        return cls(
            unknowns=dict(solved),
            relations=[format_polynomial(r) for r in derivation.relations],
            giambelli=derivation.dictionary.to_strings(),
            a7=derivation.a7,
            diff=list(diff),
            relations_match=tuple(derivation.relations) == tuple(cg_relations()),
            contradictions=list(derivation.contradictions),
        )

    def to_json(self) -> dict:
        return {
            "unknowns": {k: str(v) for k, v in self.unknowns.items()},
            "a7": None if self.a7 is None else str(self.a7),
            "relations": self.relations,
            "relations_match": self.relations_match,
            "giambelli": self.giambelli,
            "diff": [d.to_json() for d in self.diff],
            "contradictions": self.contradictions,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def derive(table: MultiplicationTable, outputs: Optional[Mapping[str, Fraction]] = None) -> DerivationReport:
    """Scenarios to unknowns to presentation to table, in one go."""
    outputs = scenario_outputs() if outputs is None else outputs
    solved = solve_degree_one(outputs)
    unknowns = ChevalleyUnknowns(**{n: solved[n] for n in ChevalleyUnknowns.names()[:-1]})
    missing = derive_missing_products(outputs, table)
    derivation = derive_presentation(unknowns, missing, table)
    solved = dict(solved, a7=derivation.a7)
    return DerivationReport.build(derivation, solved, close_loop(derivation, table))


def verify_pipeline(
    table: MultiplicationTable,
    dictionary: Optional[GiambelliDictionary] = None,
    outputs: Optional[Mapping[str, Fraction]] = None,
) -> VerificationReport:
    report = VerificationReport("pipeline")
    outputs = scenario_outputs() if outputs is None else dict(outputs)

    outcomes = leave_one_out(outputs)
    failures = [f"dropping {i} still solves the system" for i, o in outcomes.items() if o == "solved"]
    report.record("leave_one_out", failures, len(outcomes))

    failures = [
        f"{name} read as {', '.join(str(v) for v in values)}"
        for name, values in ansatz_consistency(table).items()
        if len(set(values)) > 1
    ]
    report.record("ansatz_consistency", failures, len(CHEVALLEY_ANSATZ))

    try:
        unknowns = solve_chevalley(outputs)
        missing = derive_missing_products(outputs, table)
        derivation = derive_presentation(unknowns, missing, table)
    except CGError as exc:
        report.add("derivation", False, f"{type(exc).__name__}: {exc}")
        return report
    report.add(
        "derivation",
        derivation.consistent,
        "degrees 2..8" if derivation.consistent else "; ".join(derivation.contradictions),
    )

    expected = REFERENCE_UNKNOWNS
    failures = [
        f"{name} = {value}, expected {expected.as_dict()[name]}"
        for name, value in derivation.unknowns.as_dict().items()
        if value != expected.as_dict()[name]
    ]
    report.record("chevalley_unknowns", failures, len(ChevalleyUnknowns.names()))

    failures = [
        f"{name}: derived {product}, table {table.entry(*pair)}"
        for name, pair, product in (
            ("s2*s2", ("s2", "s2"), missing.s2_s2),
            ("s4*s2", ("s4", "s2"), missing.s4_s2),
        )
        if product != table.entry(*pair)
    ]
    report.record("missing_products", failures, 2)

    failures = [
        f"relation {i + 1}: derived {format_polynomial(d)}, expected {format_polynomial(e)}"
        for i, (d, e) in enumerate(itertools.zip_longest(derivation.relations, cg_relations()))
        if d != e
    ]
    report.record("relations", failures, 2)

    if dictionary is not None:
        ring = derivation.ring
        failures = [
            f"{label}: derived {format_polynomial(derivation.dictionary[label])}"
            for label in BASIS
            if not ring.in_ideal(derivation.dictionary[label] - dictionary[label])
        ]
        report.record("giambelli", failures, len(BASIS))

    diff = close_loop(derivation, table)
    report.record("close_loop", [str(d) for d in diff], len(table.pairs()))
    logger.debug("pipeline verification: %s", report.summary())
    return report
