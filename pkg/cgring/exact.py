"""Exact arithmetic kernel.

Rationals are :class:`fractions.Fraction`. Polynomials are sympy
``PolyElement`` objects over ``QQ`` in graded-lex order, and matrices are
dense rational matrices whose heavy lifting (row reduction, rank,
determinant, characteristic polynomial) is delegated to sympy's
``DomainMatrix`` over ``QQ``. Nothing in here ever rounds.
"""

import enum
import functools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, PolyRing

from .errors import InconsistentError, NonSquareError, UnderdeterminedError

logger = logging.getLogger(__name__)

Rational = Fraction
Monomial = Tuple[int, ...]


def to_qq(value):
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def from_qq(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


def from_sympy(value) -> Fraction:
    return Fraction(int(value.p), int(value.q))


def parse_rational(text) -> Fraction:
    """Parses ``"n"`` or ``"n/d"`` (or a JSON integer) into a Fraction."""
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"not a rational: {text!r}")
    return Fraction(text.strip())


def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


# q has its own univariate ring; coefficients of SchubertElements live here.
Q_RING = PolyRing("q", QQ, grlex)
T_RING = PolyRing("t", QQ, grlex)
TQ_RING = PolyRing("t,q", QQ, grlex)


def qpoly(terms: Mapping[int, object]) -> PolyElement:
    """Builds a QPolynomial from ``{q-exponent: coefficient}``."""
    return Q_RING.from_dict({(k,): to_qq(c) for k, c in terms.items() if c})


def q_terms(p: PolyElement) -> List[Tuple[int, Fraction]]:
    return sorted((monom[0], from_qq(coeff)) for monom, coeff in p.items())


def q_evaluate(p: PolyElement, value) -> Fraction:
    value = Fraction(value)
    return sum((c * value**k for k, c in q_terms(p)), Fraction(0))


def polynomial_terms(p: PolyElement) -> List[Tuple[Monomial, Fraction]]:
    """Terms of ``p`` in descending ring order."""
    return [(monom, from_qq(coeff)) for monom, coeff in p.terms()]


def format_univariate(p: PolyElement, var: str = "t") -> str:
    """Formats a univariate polynomial as ``t^15 - 102 t^11 + 317 t^7``."""
    pieces = []
    for (k,), coeff in sorted(p.items(), reverse=True):
        coeff = from_qq(coeff)
        sign = "-" if coeff < 0 else "+"
        magnitude = abs(coeff)
        power = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if not power:
            body = str(magnitude)
        elif magnitude == 1:
            body = power
        else:
            body = f"{magnitude} {power}"
        pieces.append((sign, body))
    if not pieces:
        return "0"
    first_sign, first_body = pieces[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


def _weighted_monomials(weights: Sequence[int], degree: int) -> Iterator[Monomial]:
    if not weights:
        if degree == 0:
            yield ()
        return
    head, rest = weights[0], weights[1:]
    for e in range(degree // head, -1, -1):
        for tail in _weighted_monomials(rest, degree - e * head):
            yield (e,) + tail


class GradedRing:
    """Polynomial ring over QQ whose generators carry positive integer weights.

    Monomials of a fixed weighted degree are listed in descending graded-lex
    order, which fixes both the column order of every relation matrix and
    which monomials end up as normal-form basis elements.
    """

    def __init__(self, names: Sequence[str], weights: Sequence[int]):
        if len(names) != len(weights) or not names:
            raise ValueError("need one positive weight per generator")
        if any(w <= 0 for w in weights):
            raise ValueError("generator weights must be positive")
        self.names = tuple(names)
        self.weights = tuple(weights)
        self.ring = PolyRing(",".join(self.names), QQ, grlex)
        self.gens: Dict[str, PolyElement] = dict(zip(self.names, self.ring.gens))

    def __repr__(self):
        inner = ", ".join(f"{n}:{w}" for n, w in zip(self.names, self.weights))
        return f"GradedRing({inner})"

    def __getitem__(self, name: str) -> PolyElement:
        return self.gens[name]

    @property
    def zero(self) -> PolyElement:
        return self.ring.zero

    @property
    def one(self) -> PolyElement:
        return self.ring.one

    def monomial_degree(self, monom: Monomial) -> int:
        return sum(e * w for e, w in zip(monom, self.weights))

    @functools.lru_cache(maxsize=None)
    def monomials(self, degree: int) -> Tuple[Monomial, ...]:
        if degree < 0:
            return ()
        found = _weighted_monomials(self.weights, degree)
        return tuple(sorted(found, key=grlex, reverse=True))

    def monomial(self, monom: Monomial) -> PolyElement:
        return self.ring.from_dict({tuple(monom): QQ.one})

    def element(self, terms: Mapping[Monomial, object]) -> PolyElement:
        return self.ring.from_dict({tuple(m): to_qq(c) for m, c in terms.items() if c})

    def constant(self, value) -> PolyElement:
        return self.ring.from_dict({(0,) * len(self.names): to_qq(value)})

    def convert(self, p) -> PolyElement:
        if isinstance(p, PolyElement):
            if p.ring == self.ring:
                return p
            raise ValueError(f"polynomial belongs to {p.ring}, not {self.ring}")
        return self.constant(p)

    def components(self, p: PolyElement) -> Dict[int, PolyElement]:
        parts: Dict[int, dict] = {}
        for monom, coeff in p.items():
            parts.setdefault(self.monomial_degree(monom), {})[monom] = coeff
        return {d: self.ring.from_dict(terms) for d, terms in sorted(parts.items())}

    def component(self, p: PolyElement, degree: int) -> PolyElement:
        return self.ring.from_dict(
            {m: c for m, c in p.items() if self.monomial_degree(m) == degree}
        )

    def truncate(self, p: PolyElement, top: int) -> PolyElement:
        return self.ring.from_dict(
            {m: c for m, c in p.items() if self.monomial_degree(m) <= top}
        )

    def degree_of(self, p: PolyElement) -> Optional[int]:
        """Weighted degree of a homogeneous nonzero polynomial, else None."""
        degrees = {self.monomial_degree(m) for m in p.keys()}
        return degrees.pop() if len(degrees) == 1 else None

    def is_homogeneous(self, p: PolyElement) -> bool:
        return not p or self.degree_of(p) is not None

    def coefficient_vector(self, p: PolyElement, degree: int) -> List[Fraction]:
        return [from_qq(p.get(m, QQ.zero)) for m in self.monomials(degree)]

    def from_vector(self, vector: Sequence[Fraction], degree: int) -> PolyElement:
        return self.element(dict(zip(self.monomials(degree), vector)))

    def embed(self, p: PolyElement, base: "GradedRing") -> PolyElement:
        """Maps a polynomial of ``base`` into this ring, whose generators extend it."""
        if self.names[: len(base.names)] != base.names:
            raise ValueError(f"{self} does not extend {base}")
        pad = (0,) * (len(self.names) - len(base.names))
        return self.ring.from_dict({m + pad: c for m, c in p.items()})

    def power_series_inverse(self, p: PolyElement, top: int) -> PolyElement:
        """Inverse of a unit ``1 + (positive degree)`` truncated above ``top``."""
        constant = p.get((0,) * len(self.names), QQ.zero)
        if constant != QQ.one:
            raise ValueError("power series inverse needs constant term 1")
        nilpotent = self.ring.one - p
        result = self.ring.one
        term = self.ring.one
        for _ in range(top):
            term = self.truncate(term * nilpotent, top)
            if not term:
                break
            result += term
        return result


@dataclass(frozen=True)
class RationalMatrix:
    entries: Tuple[Tuple[Fraction, ...], ...]
    cols: int

    def __post_init__(self):
        for row in self.entries:
            if len(row) != self.cols:
                raise ValueError("ragged matrix")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable], cols: Optional[int] = None):
        entries = tuple(tuple(Fraction(x) for x in row) for row in rows)
        if cols is None:
            cols = len(entries[0]) if entries else 0
        return cls(entries, cols)

    @classmethod
    def identity(cls, n: int):
        return cls.from_rows(
            [[1 if i == j else 0 for j in range(n)] for i in range(n)], n
        )

    @classmethod
    def zeros(cls, rows: int, cols: int):
        return cls.from_rows([[0] * cols for _ in range(rows)], cols)

    @classmethod
    def diagonal(cls, values: Sequence):
        n = len(values)
        return cls.from_rows(
            [[values[i] if i == j else 0 for j in range(n)] for i in range(n)], n
        )

    @classmethod
    def from_domain_matrix(cls, dm: DomainMatrix):
        rows, cols = dm.shape
        if rows == 0:
            return cls((), cols)
        return cls.from_rows(
            [[from_sympy(x) for x in row] for row in dm.to_Matrix().tolist()], cols
        )

    def to_domain_matrix(self) -> DomainMatrix:
        rows = [[to_qq(x) for x in row] for row in self.entries]
        return DomainMatrix(rows, self.shape, QQ)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, index: Tuple[int, int]) -> Fraction:
        i, j = index
        return self.entries[i][j]

    def row(self, i: int) -> Tuple[Fraction, ...]:
        return self.entries[i]

    def column(self, j: int) -> Tuple[Fraction, ...]:
        return tuple(row[j] for row in self.entries)

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix.from_rows(
            [self.column(j) for j in range(self.cols)], self.rows
        )

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def is_symmetric(self) -> bool:
        return self.is_square and self == self.transpose()

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return RationalMatrix.from_rows(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)],
            self.cols,
        )

    def scale(self, factor) -> "RationalMatrix":
        factor = Fraction(factor)
        return RationalMatrix.from_rows(
            [[factor * x for x in row] for row in self.entries], self.cols
        )

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        if self.rows == 0 or other.cols == 0 or self.cols == 0:
            return RationalMatrix.zeros(self.rows, other.cols)
        product = self.to_domain_matrix().matmul(other.to_domain_matrix())
        return RationalMatrix.from_domain_matrix(product)

    def __pow__(self, exponent: int) -> "RationalMatrix":
        if not self.is_square:
            raise NonSquareError(f"cannot raise a {self.rows}x{self.cols} matrix")
        if exponent == 0 or self.rows == 0:
            return RationalMatrix.identity(self.rows)
        return RationalMatrix.from_domain_matrix(self.to_domain_matrix() ** exponent)

    def trace(self) -> Fraction:
        if not self.is_square:
            raise NonSquareError(f"trace of a {self.rows}x{self.cols} matrix")
        return sum((self.entries[i][i] for i in range(self.rows)), Fraction(0))

    def rank(self) -> int:
        return rref(self).rank

    def det(self) -> Fraction:
        if not self.is_square:
            raise NonSquareError(f"determinant of a {self.rows}x{self.cols} matrix")
        if self.rows == 0:
            return Fraction(1)
        return from_qq(self.to_domain_matrix().det())

    def hstack(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return RationalMatrix(
            tuple(a + b for a, b in zip(self.entries, other.entries)),
            self.cols + other.cols,
        )


@dataclass(frozen=True)
class RrefResult:
    matrix: RationalMatrix
    rank: int
    pivots: Tuple[int, ...]


def rref(m: RationalMatrix) -> RrefResult:
    """Reduced row echelon form over QQ with exact rank and pivot columns."""
    if m.rows == 0 or m.cols == 0:
        return RrefResult(m, 0, ())
    reduced, pivots = m.to_domain_matrix().rref()
    pivots = tuple(int(p) for p in pivots)
    return RrefResult(RationalMatrix.from_domain_matrix(reduced), len(pivots), pivots)


def nullspace(m: RationalMatrix) -> List[Tuple[Fraction, ...]]:
    """Basis of {x : m x = 0}, one vector per free column."""
    result = rref(m)
    free = [j for j in range(m.cols) if j not in result.pivots]
    basis = []
    for f in free:
        vector = [Fraction(0)] * m.cols
        vector[f] = Fraction(1)
        for i, p in enumerate(result.pivots):
            vector[p] = -result.matrix[i, f]
        basis.append(tuple(vector))
    return basis


class SolutionStatus(enum.Enum):
    UNIQUE = "unique"
    INCONSISTENT = "inconsistent"
    UNDERDETERMINED = "underdetermined"


@dataclass(frozen=True)
class LinearSolution:
    status: SolutionStatus
    values: Optional[Tuple[Fraction, ...]] = None
    rank: int = 0
    free_columns: Tuple[int, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return self.status is SolutionStatus.UNIQUE

    def unwrap(self) -> Tuple[Fraction, ...]:
        if self.status is SolutionStatus.INCONSISTENT:
            raise InconsistentError("linear system has no solution")
        if self.status is SolutionStatus.UNDERDETERMINED:
            raise UnderdeterminedError(
                f"linear system has free columns {list(self.free_columns)}"
            )
        return self.values


def solve_linear(a: RationalMatrix, b: Sequence) -> LinearSolution:
    """Solves ``a x = b`` exactly.

    Inconsistency and non-uniqueness are ordinary outcomes reported through
    the returned status; call :meth:`LinearSolution.unwrap` to turn them into
    exceptions.
    """
    if len(b) != a.rows:
        raise ValueError(f"right-hand side has {len(b)} entries, need {a.rows}")
    augmented = a.hstack(RationalMatrix.from_rows([[x] for x in b], 1))
    result = rref(augmented)
    if a.cols in result.pivots:
        return LinearSolution(SolutionStatus.INCONSISTENT, rank=result.rank - 1)
    if result.rank < a.cols:
        free = tuple(j for j in range(a.cols) if j not in result.pivots)
        return LinearSolution(
            SolutionStatus.UNDERDETERMINED, rank=result.rank, free_columns=free
        )
    values = tuple(result.matrix[i, a.cols] for i in range(a.cols))
    return LinearSolution(SolutionStatus.UNIQUE, values, result.rank)


def charpoly(m: RationalMatrix) -> PolyElement:
    """Monic det(tI - m) in ``T_RING``, via sympy's division-free Berkowitz."""
    if not m.is_square:
        raise NonSquareError(f"charpoly of a {m.rows}x{m.cols} matrix")
    if m.rows == 0:
        return T_RING.one
    coefficients = m.to_domain_matrix().charpoly()
    n = len(coefficients) - 1
    return T_RING.from_dict(
        {(n - i,): c for i, c in enumerate(coefficients) if c != QQ.zero}
    )


def primitive_integer_form(p: PolyElement) -> PolyElement:
    """Scales ``p`` to a primitive integer polynomial with positive leading coefficient."""
    if not p:
        return p
    _, cleared = p.clear_denoms()
    content = math.gcd(*(int(from_qq(c)) for c in cleared.values()))
    cleared = cleared * QQ(1, content)
    if cleared.LC < 0:
        cleared = -cleared
    return cleared
