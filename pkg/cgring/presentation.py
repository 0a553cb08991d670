"""Graded quotient rings, and QH*(CG) as Q[s1, s2, q] / (R5, R6).

A :class:`PresentedRing` never computes a Groebner basis. Each graded
slice is handled on its own: the degree-d multiples of every relation are
row reduced over the monomials of degree d (columns in descending
graded-lex order), and the monomials without a pivot form the normal-form
basis of that slice.
"""

from collections import abc
import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from sympy.polys.rings import PolyElement

from .errors import (
    CGError,
    DataFileError,
    DegreeOutOfRangeError,
    DimensionMismatchError,
    UnknownLabelError,
)
from .exact import (
    GradedRing,
    Monomial,
    RationalMatrix,
    from_qq,
    parse_rational,
    polynomial_terms,
    qpoly,
    rref,
    solve_linear,
)
from .report import VerificationReport
from .schubert import (
    BASIS,
    BETTI,
    DEGREE,
    DIMENSION,
    Q_DEGREE,
    MultiplicationTable,
    SchubertElement,
    basis_element,
    check_label,
)

logger = logging.getLogger(__name__)

CG_GENERATORS = ("s1", "s2", "q")
CG_WEIGHTS = (1, 2, 4)
MAX_DEGREE = 2 * DIMENSION


@dataclass(frozen=True)
class GradedSlice:
    """The degree-d part of a presented ring."""

    degree: int
    monomials: Tuple[Monomial, ...]
    basis: Tuple[Monomial, ...]
    # (pivot column, reduced row) pairs of the relation span
    reducer: Tuple[Tuple[int, Tuple[Fraction, ...]], ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def reduce(self, vector: Sequence[Fraction]) -> List[Fraction]:
        reduced = list(vector)
        for column, row in self.reducer:
            factor = reduced[column]
            if factor:
                reduced = [a - factor * b for a, b in zip(reduced, row)]
        return reduced

    def coordinates(self, vector: Sequence[Fraction]) -> List[Fraction]:
        """Coefficients of the reduced vector on the basis monomials."""
        reduced = self.reduce(vector)
        pivots = {column for column, _ in self.reducer}
        return [x for j, x in enumerate(reduced) if j not in pivots]


class PresentedRing:
    """A graded commutative ring given by generators, weights and relations.

    ``expected_dimension`` maps a degree to the dimension the quotient must
    have there; a slice that comes out differently raises
    :class:`DimensionMismatchError` when it is built.
    """

    def __init__(
        self,
        graded: GradedRing,
        relations: Sequence[PolyElement],
        max_degree: int = MAX_DEGREE,
        expected_dimension: Optional[Callable[[int], int]] = None,
        name: str = "",
    ):
        if max_degree < 0:
            raise ValueError("max_degree must be non-negative")
        self.graded = graded
        self.relations = tuple(graded.convert(r) for r in relations)
        for relation in self.relations:
            if not relation or not graded.is_homogeneous(relation):
                raise ValueError(f"relation {relation} is zero or not homogeneous")
        self.max_degree = max_degree
        self.expected_dimension = expected_dimension
        self.name = name or repr(graded)
        self._slices: Dict[int, GradedSlice] = {}

    def __repr__(self):
        return f"PresentedRing({self.name}, {len(self.relations)} relations)"

    @property
    def ring(self):
        return self.graded.ring

    def gen(self, name: str) -> PolyElement:
        return self.graded[name]

    def slice(self, degree: int) -> GradedSlice:
        if degree < 0 or degree > self.max_degree:
            raise DegreeOutOfRangeError(
                f"degree {degree} outside 0..{self.max_degree} of {self.name}"
            )
        if degree not in self._slices:
            self._slices[degree] = self._build_slice(degree)
        return self._slices[degree]

    def _build_slice(self, degree: int) -> GradedSlice:
        graded = self.graded
        monomials = graded.monomials(degree)
        rows = []
        for relation in self.relations:
            for multiplier in graded.monomials(degree - graded.degree_of(relation)):
                product = graded.monomial(multiplier) * relation
                rows.append(graded.coefficient_vector(product, degree))
        reducer: Tuple[Tuple[int, Tuple[Fraction, ...]], ...] = ()
        if rows:
            result = rref(RationalMatrix.from_rows(rows, len(monomials)))
            reducer = tuple(
                (column, result.matrix.row(i)) for i, column in enumerate(result.pivots)
            )
        pivots = {column for column, _ in reducer}
        basis = tuple(m for j, m in enumerate(monomials) if j not in pivots)
        if self.expected_dimension is not None:
            expected = self.expected_dimension(degree)
            if len(basis) != expected:
                raise DimensionMismatchError(
                    f"{self.name}: degree {degree} has dimension {len(basis)}, "
                    f"expected {expected}"
                )
        logger.debug(
            "%s degree %d: %d monomials, %d relation rows, dimension %d",
            self.name,
            degree,
            len(monomials),
            len(rows),
            len(basis),
        )
        return GradedSlice(degree, monomials, basis, reducer)

    def dimension(self, degree: int) -> int:
        return self.slice(degree).dimension

    def basis(self, degree: int) -> Tuple[Monomial, ...]:
        return self.slice(degree).basis

    def normal_form(self, p) -> PolyElement:
        graded = self.graded
        p = graded.convert(p)
        result = graded.zero
        for degree, part in graded.components(p).items():
            part_slice = self.slice(degree)
            vector = part_slice.reduce(graded.coefficient_vector(part, degree))
            result += graded.from_vector(vector, degree)
        return result

    def coordinates(self, p, degree: int) -> List[Fraction]:
        """Coefficients of the degree-``degree`` part of p on ``basis(degree)``."""
        graded = self.graded
        part = graded.component(graded.convert(p), degree)
        return self.slice(degree).coordinates(graded.coefficient_vector(part, degree))

    def in_ideal(self, p) -> bool:
        return not self.normal_form(p)

    def multiply(self, *factors) -> PolyElement:
        product = self.graded.one
        for factor in factors:
            product = product * self.graded.convert(factor)
        return self.normal_form(product)

    def graded_dimensions(self, top: Optional[int] = None) -> List[int]:
        top = self.max_degree if top is None else top
        return [self.dimension(d) for d in range(top + 1)]


def build_graded_basis(
    ring: PresentedRing, max_degree: int
) -> Dict[int, Tuple[Monomial, ...]]:
    """Per-degree normal-form bases of ``ring`` up to ``max_degree``."""
    if max_degree < 0 or max_degree > ring.max_degree:
        raise DegreeOutOfRangeError(
            f"max_degree {max_degree} outside 0..{ring.max_degree}"
        )
    return {d: ring.basis(d) for d in range(max_degree + 1)}


def normal_form(ring: PresentedRing, p) -> PolyElement:
    return ring.normal_form(p)


def betti(degree: int) -> int:
    return BETTI[degree] if 0 <= degree <= DIMENSION else 0


def quantum_betti(degree: int) -> int:
    """Dimension of the degree-d slice of QH*(CG), a free Q[q]-module."""
    return sum(betti(degree - Q_DEGREE * c) for c in range(degree // Q_DEGREE + 1))


_CG_RING = GradedRing(CG_GENERATORS, CG_WEIGHTS)
_CLASSICAL_RING = GradedRing(CG_GENERATORS[:2], CG_WEIGHTS[:2])


def cg_ring() -> GradedRing:
    return _CG_RING


def cg_relations(q: bool = True, graded: Optional[GradedRing] = None) -> Tuple[PolyElement, PolyElement]:
    """R5(q) and R6(q) in primitive integer form; ``q=False`` drops the q terms."""
    graded = graded or _CG_RING
    s1, s2 = graded["s1"], graded["s2"]
    quantum = graded["q"] if q else 0
    r5 = s1**5 - 5 * s1**3 * s2 + 6 * s1 * s2**2 + 4 * quantum * s1
    r6 = (
        9 * s1**4 * s2
        - 27 * s1**2 * s2**2
        + 16 * s2**3
        - 28 * quantum * s1**2
        + 32 * quantum * s2
    )
    return r5, r6


def cg_presented_ring(
    relations: Optional[Sequence[PolyElement]] = None, max_degree: int = MAX_DEGREE
) -> PresentedRing:
    if relations is None:
        relations = cg_relations()
    return PresentedRing(
        _CG_RING,
        relations,
        max_degree=max_degree,
        expected_dimension=quantum_betti,
        name="QH*(CG)",
    )


def classical_presented_ring(max_degree: int = MAX_DEGREE) -> PresentedRing:
    """H*(CG) = Q[s1, s2] / (R5(0), R6(0))."""
    s1, s2 = _CLASSICAL_RING["s1"], _CLASSICAL_RING["s2"]
    relations = (
        s1**5 - 5 * s1**3 * s2 + 6 * s1 * s2**2,
        9 * s1**4 * s2 - 27 * s1**2 * s2**2 + 16 * s2**3,
    )
    return PresentedRing(
        _CLASSICAL_RING,
        relations,
        max_degree=max_degree,
        expected_dimension=betti,
        name="H*(CG)",
    )


def format_polynomial(p: PolyElement) -> str:
    return str(p) if p else "0"


class GiambelliDictionary(abc.Mapping):
    """Schubert label -> polynomial in s1, s2, q of the label's degree."""

    def __init__(self, polynomials: Mapping[str, PolyElement], graded: Optional[GradedRing] = None):
        self.graded = graded or _CG_RING
        missing = [label for label in BASIS if label not in polynomials]
        if missing:
            raise ValueError(f"no Giambelli polynomial for {', '.join(missing)}")
        entries = {}
        for label, poly in polynomials.items():
            check_label(label)
            poly = self.graded.convert(poly)
            if poly and self.graded.degree_of(poly) != DEGREE[label]:
                raise ValueError(f"polynomial for {label} is not homogeneous of degree {DEGREE[label]}")
            entries[label] = poly
        self._entries = {label: entries[label] for label in BASIS}

    def __getitem__(self, label: str) -> PolyElement:
        try:
            return self._entries[label]
        except KeyError:
            raise UnknownLabelError(label) from None

    def __iter__(self) -> Iterator[str]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def with_entry(self, label: str, poly: PolyElement) -> "GiambelliDictionary":
        entries = dict(self._entries)
        entries[check_label(label)] = poly
        return GiambelliDictionary(entries, self.graded)

    @classmethod
    def from_json(cls, data, source="<giambelli>") -> "GiambelliDictionary":
        if not isinstance(data, dict):
            raise DataFileError(source, "expected an object keyed by Schubert label")
        polynomials = {}
        for label, terms in data.items():
            if label not in DEGREE:
                raise DataFileError(source, f"unknown Schubert label {label!r}")
            collected: Dict[Monomial, Fraction] = {}
            try:
                for term in terms:
                    monom = tuple(int(e) for e in term["exponents"])
                    if len(monom) != len(CG_GENERATORS) or min(monom) < 0:
                        raise ValueError(f"exponents {list(monom)} are not [e1, e2, eq]")
                    collected[monom] = collected.get(monom, Fraction(0)) + parse_rational(
                        term["coeff"]
                    )
            except (KeyError, TypeError, ValueError) as exc:
                raise DataFileError(source, f"bad term for {label}: {exc}") from exc
            polynomials[label] = _CG_RING.element(collected)
        try:
            return cls(polynomials)
        except ValueError as exc:
            raise DataFileError(source, str(exc)) from exc

    def to_json(self) -> Dict[str, List[dict]]:
        return {
            label: [
                {"exponents": list(monom), "coeff": str(coeff)}
                for monom, coeff in polynomial_terms(poly)
            ]
            for label, poly in self._entries.items()
        }

    def to_strings(self) -> Dict[str, str]:
        return {label: format_polynomial(poly) for label, poly in self._entries.items()}


def load_giambelli(path: Union[str, Path]) -> GiambelliDictionary:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise DataFileError(str(path), f"cannot read: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise DataFileError(str(path), f"invalid JSON: {exc}") from exc
    return GiambelliDictionary.from_json(data, source=str(path))


def dump_giambelli(dictionary: GiambelliDictionary, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(dictionary.to_json(), indent=2) + "\n", encoding="utf-8")


class SchubertEvaluator:
    """The homomorphism Q[s1, s2, q] -> QH*(CG) sending generators to classes.

    Powers of s1 and s2 are cached, so evaluating many polynomials against
    one table is cheap.
    """

    def __init__(self, table: MultiplicationTable):
        self.table = table
        self._powers = {
            "s1": [basis_element("s0")],
            "s2": [basis_element("s0")],
        }

    def power(self, label: str, n: int) -> SchubertElement:
        cache = self._powers[label]
        while len(cache) <= n:
            cache.append(self.table.quantum_product(cache[-1], basis_element(label)))
        return cache[n]

    def __call__(self, p: PolyElement) -> SchubertElement:
        if len(p.ring.gens) != len(CG_GENERATORS):
            raise ValueError("expected a polynomial in s1, s2, q")
        result = SchubertElement.zero()
        for (a, b, c), coeff in p.items():
            term = self.table.quantum_product(self.power("s1", a), self.power("s2", b))
            result = result + term * qpoly({c: from_qq(coeff)})
        return result


def evaluate_in_schubert(table: MultiplicationTable, p: PolyElement) -> SchubertElement:
    return SchubertEvaluator(table)(p)


def schubert_slots(degree: int) -> List[Tuple[str, int]]:
    """The classes q^c * label of total degree ``degree``, q-exponent first."""
    return [
        (label, c)
        for c in range(degree // Q_DEGREE + 1)
        for label in BASIS
        if DEGREE[label] + Q_DEGREE * c == degree
    ]


class SchubertCoordinates:
    """Re-expands normal forms in the Schubert basis of a presented ring.

    The degree-d change of basis has one column per class q^c * label,
    namely the normal-form coordinates of q^c times its Giambelli
    polynomial. Solving against it writes any normal form in Schubert
    classes without ever consulting a multiplication table.
    """

    def __init__(self, ring: PresentedRing, dictionary: GiambelliDictionary):
        self.ring = ring
        self.dictionary = dictionary
        self._matrices: Dict[int, RationalMatrix] = {}

    def matrix(self, degree: int) -> RationalMatrix:
        if degree not in self._matrices:
            q = self.ring.gen("q")
            columns = [
                self.ring.coordinates(q**c * self.dictionary[label], degree)
                for label, c in schubert_slots(degree)
            ]
            rows = self.ring.dimension(degree)
            self._matrices[degree] = RationalMatrix.from_rows(
                [[column[i] for column in columns] for i in range(rows)], len(columns)
            )
        return self._matrices[degree]

    def is_invertible(self, degree: int) -> bool:
        m = self.matrix(degree)
        return m.is_square and m.det() != 0

    def expand(self, p: PolyElement, degree: int) -> SchubertElement:
        solution = solve_linear(self.matrix(degree), self.ring.coordinates(p, degree)).unwrap()
        return SchubertElement.from_terms(
            (label, c, value) for (label, c), value in zip(schubert_slots(degree), solution)
        )

    def product(self, a: str, b: str) -> SchubertElement:
        polynomial = self.dictionary[a] * self.dictionary[b]
        return self.expand(self.ring.normal_form(polynomial), DEGREE[a] + DEGREE[b])


def cross_check_presentation(
    table: MultiplicationTable,
    dictionary: GiambelliDictionary,
    ring: Optional[PresentedRing] = None,
) -> VerificationReport:
    """Checks the table, the presentation and the Giambelli dictionary against each other."""
    report = VerificationReport("presentation")
    ring = ring or cg_presented_ring()
    evaluate = SchubertEvaluator(table)

    classical = classical_presented_ring()
    try:
        dims = classical.graded_dimensions()
        report.add("classical_ring", True, f"dimensions {dims[:DIMENSION + 1]}, zero above {DIMENSION}")
    except DimensionMismatchError as exc:
        report.add("classical_ring", False, str(exc))

    failures = []
    for i, relation in enumerate(ring.relations):
        value = evaluate(relation)
        if value:
            failures.append(f"relation {i + 1} ({format_polynomial(relation)}) evaluates to {value}")
    report.record("relations_killed", failures, len(ring.relations))

    failures = []
    for label in BASIS:
        value = evaluate(dictionary[label])
        if value != basis_element(label):
            failures.append(f"{label}: {format_polynomial(dictionary[label])} evaluates to {value}")
    report.record("giambelli", failures, len(BASIS))

    try:
        build_graded_basis(ring, ring.max_degree)
    except DimensionMismatchError as exc:
        report.add("graded_dimensions", False, str(exc))
        logger.warning("presentation check stopped: %s", exc)
        return report
    report.add("graded_dimensions", True, f"degrees 0..{ring.max_degree}")

    coordinates = SchubertCoordinates(ring, dictionary)
    failures = [
        f"degree {d}: change of basis is singular"
        for d in range(ring.max_degree + 1)
        if not coordinates.is_invertible(d)
    ]
    report.record("change_of_basis", failures, ring.max_degree + 1)

    failures = []
    for a, b in table.pairs():
        try:
            derived = coordinates.product(a, b)
        except CGError as exc:
            failures.append(f"{a}*{b}: {exc}")
            continue
        expected = table.entry(a, b)
        if derived != expected:
            failures.append(f"{a}*{b}: presentation gives {derived}, table has {expected}")
    report.record("products", failures, len(table.pairs()))
    logger.debug("presentation cross-check: %s", report.summary())
    return report
