"""Spectrum of quantum multiplication by sigma_1.

Everything that decides a flag is exact: the characteristic polynomial
comes from sympy's DomainMatrix, the dominant root of the cubic factor
is isolated with rational endpoints, and its fourth root is bracketed by
rationals whose fourth powers are compared exactly. mpmath only polishes
estimates for display and locates the complex roots.
"""

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import mpmath
from sympy import Poly, Rational, Symbol
from sympy.polys.domains import QQ

from .errors import InconsistentError
from .exact import (
    T_RING,
    TQ_RING,
    RationalMatrix,
    charpoly,
    format_univariate,
    from_qq,
    from_sympy,
)
from .report import VerificationReport
from .schubert import BASIS, Q_DEGREE, MultiplicationTable, SchubertElement, basis_element

logger = logging.getLogger(__name__)

SIZE = len(BASIS)
FANO_INDEX = 4
WORKING_DPS = 30
ROOT_PRECISION = Fraction(1, 10**20)

REFERENCE_CHARPOLY = T_RING.from_dict(
    {(15,): QQ(1), (11,): QQ(-102), (7,): QQ(317), (3,): QQ(-2048)}
)

Y = Symbol("y")


def multiplication_matrix(
    table: MultiplicationTable, x: SchubertElement, q_value=1
) -> RationalMatrix:
    """Quantum multiplication by ``x`` at q = ``q_value``; column j is x * sigma_j."""
    columns = [
        table.quantum_product(x, basis_element(label)).vector_at_q(q_value) for label in BASIS
    ]
    return RationalMatrix.from_rows(columns, SIZE).transpose()


def hyperplane_charpoly(table: MultiplicationTable, q_value=1):
    return charpoly(multiplication_matrix(table, basis_element("s1"), q_value))


def charpoly_in_q(table: MultiplicationTable):
    """det(t - sigma_1*) in Q[t, q], lifted from q = 1 by the grading.

    t has degree 1 and q degree 4, so the t^k coefficient is a multiple of
    q^((15 - k) / 4).
    """
    lifted = {}
    for (k,), coeff in hyperplane_charpoly(table).items():
        if (SIZE - k) % Q_DEGREE:
            raise InconsistentError(
                f"t^{k} coefficient {from_qq(coeff)} breaks the grading of the spectrum"
            )
        lifted[(k, (SIZE - k) // Q_DEGREE)] = coeff
    return TQ_RING.from_dict(lifted)


def specialize(p, q_value) -> Dict[int, Fraction]:
    """``{t-exponent: coefficient}`` of a Q[t, q] polynomial at q = ``q_value``."""
    q_value = Fraction(q_value)
    values: Dict[int, Fraction] = {}
    for (k, j), coeff in p.items():
        values[k] = values.get(k, Fraction(0)) + from_qq(coeff) * q_value**j
    return {k: v for k, v in values.items() if v}


@dataclass(frozen=True)
class Semisimplicity:
    q_value: Fraction
    rank: int
    determinant: Fraction

    @property
    def semisimple(self) -> bool:
        return self.rank == SIZE

    def __bool__(self):
        return self.semisimple


def trace_form(table: MultiplicationTable, q_value=1) -> RationalMatrix:
    """B(sigma_i, sigma_j) = tr(sigma_i sigma_j *) at q = ``q_value``."""
    traces = [
        multiplication_matrix(table, basis_element(label), q_value).trace() for label in BASIS
    ]
    rows = []
    for a in BASIS:
        row = []
        for b in BASIS:
            structure = table.entry(a, b).vector_at_q(q_value)
            row.append(sum((c * t for c, t in zip(structure, traces)), Fraction(0)))
        rows.append(row)
    return RationalMatrix.from_rows(rows, SIZE)


def check_semisimple(table: MultiplicationTable, q_value=1) -> Semisimplicity:
    """Semisimple iff the trace form is nondegenerate (characteristic zero)."""
    gram = trace_form(table, q_value)
    result = Semisimplicity(Fraction(q_value), gram.rank(), gram.det())
    logger.debug("trace form at q=%s: rank %d", q_value, result.rank)
    return result


def fourth_root_bounds(lo: Fraction, hi: Fraction, digits: int = WORKING_DPS) -> Tuple[Fraction, Fraction]:
    """Rationals a <= b with a^4 <= lo and b^4 >= hi, for 0 < lo <= hi."""
    if lo <= 0 or hi < lo:
        raise ValueError(f"need 0 < lo <= hi, got [{lo}, {hi}]")
    step = Fraction(1, 10**digits)
    with mpmath.workdps(digits + 10):
        guess_lo = Fraction(str(mpmath.root(mpmath.mpf(lo.numerator) / lo.denominator, 4)))
        guess_hi = Fraction(str(mpmath.root(mpmath.mpf(hi.numerator) / hi.denominator, 4)))
    lower = guess_lo.limit_denominator(10**digits) - step
    while lower**4 > lo:
        lower -= step
    upper = guess_hi.limit_denominator(10**digits) + step
    while upper**4 < hi:
        upper += step
    return lower, upper


@dataclass(frozen=True)
class GalkinBound:
    """T = 4 y^(1/4) enclosed in [lower, upper]; the bound asks for T > dim + 1 = 9."""

    lower: Fraction
    upper: Fraction
    bound_ok: bool

    @property
    def value(self) -> float:
        return float((self.lower + self.upper) / 2)

    def to_json(self) -> dict:
        return {
            "T": mpmath.nstr(mpmath.mpf(self.value), 12),
            "radius": mpmath.nstr(mpmath.mpf(float(self.upper - self.lower) / 2), 3),
            "bound_ok": self.bound_ok,
        }


def galkin_bound_check(y_max: Union[Fraction, Tuple[Fraction, Fraction]]) -> GalkinBound:
    if isinstance(y_max, tuple):
        lo, hi = (Fraction(v) for v in y_max)
    else:
        lo = hi = Fraction(y_max)
    root_lo, root_hi = fourth_root_bounds(lo, hi)
    lower, upper = FANO_INDEX * root_lo, FANO_INDEX * root_hi
    bound = GalkinBound(lower, upper, lower > 9)
    logger.debug("T(CG) in [%s, %s]", float(lower), float(upper))
    return bound


@dataclass(frozen=True)
class EigenvalueRecord:
    value: complex
    radius: float
    certified: bool

    @property
    def modulus(self) -> float:
        return abs(self.value)

    def to_json(self) -> dict:
        return {
            "re": mpmath.nstr(mpmath.mpf(self.value.real), 17),
            "im": mpmath.nstr(mpmath.mpf(self.value.imag), 17),
            "radius": mpmath.nstr(mpmath.mpf(self.radius), 3),
            "certified": self.certified,
        }


@dataclass
class SpectralReport:
    charpoly: object
    cubic: Tuple[Fraction, ...] = ()
    y_interval: Optional[Tuple[Fraction, Fraction]] = None
    y_max: Optional[float] = None
    t_interval: Optional[Tuple[Fraction, Fraction]] = None
    eigenvalues: List[EigenvalueRecord] = field(default_factory=list)
    semisimplicity: Optional[Semisimplicity] = None
    galkin: Optional[GalkinBound] = None
    flags: Dict[str, bool] = field(default_factory=dict)
    diagnostics: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return bool(self.flags) and all(self.flags.values())

    def fail(self, flag: str, message: str) -> None:
        self.flags[flag] = False
        self.diagnostics.append(message)
        logger.warning("%s: %s", flag, message)

    def to_json(self) -> dict:
        return {
            "charpoly": format_univariate(self.charpoly),
            "charpoly_coefficients": {
                str(k): str(from_qq(c)) for (k,), c in sorted(self.charpoly.items(), reverse=True)
            },
            "cubic": [str(c) for c in self.cubic],
            "y_max": None if self.y_max is None else mpmath.nstr(mpmath.mpf(self.y_max), 16),
            "y_interval": None if self.y_interval is None else [str(v) for v in self.y_interval],
            "eigenvalues": [e.to_json() for e in self.eigenvalues],
            "gram_determinant": (
                None if self.semisimplicity is None else str(self.semisimplicity.determinant)
            ),
            "galkin": None if self.galkin is None else self.galkin.to_json(),
            "flags": dict(self.flags),
            "diagnostics": list(self.diagnostics),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def _cubic_factor(p, report: SpectralReport) -> Optional[Poly]:
    """g with p(t) = t^3 g(t^4), or None when p has another shape."""
    exponents = [k for (k,), _ in p.items()]
    if min(exponents) != 3 or any((k - 3) % FANO_INDEX for k in exponents):
        report.fail("factorization", f"exponents {sorted(exponents)} are not 3 mod 4 from t^3")
        return None
    degree = (max(exponents) - 3) // FANO_INDEX
    coefficients = [Fraction(0)] * (degree + 1)
    for (k,), c in p.items():
        coefficients[degree - (k - 3) // FANO_INDEX] = from_qq(c)
    report.cubic = tuple(coefficients)
    report.flags["factorization"] = True
    return Poly([Rational(c.numerator, c.denominator) for c in coefficients], Y, domain=QQ)


def _to_mpf(value: Fraction):
    return mpmath.mpf(value.numerator) / value.denominator


def _dominant_root(g: Poly, report: SpectralReport) -> Optional[Tuple[Fraction, Fraction]]:
    if g.gcd(g.diff(Y)).degree() > 0:
        report.fail("max_eigenvalue_real_simple", "cubic factor has a repeated root")
        return None
    real = g.count_roots()
    if real != 1:
        report.fail("max_eigenvalue_real_simple", f"cubic factor has {real} real roots, expected 1")
        return None
    ((a, b), _), = g.intervals()
    a, b = g.refine_root(a, b, eps=Rational(ROOT_PRECISION.numerator, ROOT_PRECISION.denominator))
    lo, hi = from_sympy(a), from_sympy(b)
    if lo <= 0:
        report.fail("max_eigenvalue_real_simple", f"real root lies in [{lo}, {hi}], not positive")
        return None
    report.flags["max_eigenvalue_real_simple"] = True
    return lo, hi


def _dominates(g: Poly, lo: Fraction, report: SpectralReport) -> None:
    """The complex pair z, z-bar has |z|^2 = product / y_max; dominance iff lo^3 > product."""
    coefficients = [from_sympy(c) for c in g.all_coeffs()]
    product = -coefficients[-1] / coefficients[0]
    if product > 0 and lo**3 > product:
        report.flags["modulus_t_set"] = True
    else:
        report.fail("modulus_t_set", f"complex roots may reach modulus {lo}")


def _eigenvalues(g: Poly, report: SpectralReport) -> None:
    lo, hi = report.y_interval
    t_lo, t_hi = fourth_root_bounds(lo, hi)
    report.t_interval = (t_lo, t_hi)
    radius = float(t_hi - t_lo) / 2
    centre = float(t_lo + t_hi) / 2
    report.eigenvalues = [EigenvalueRecord(0j, 0.0, True) for _ in range(3)]
    for unit in (1, 1j, -1, -1j):
        report.eigenvalues.append(EigenvalueRecord(complex(unit * centre), radius, True))
    with mpmath.workdps(WORKING_DPS):
        coefficients = [_to_mpf(c) for c in report.cubic]
        roots, error = mpmath.polyroots(coefficients, error=True, extraprec=60)
        y_max = mpmath.findroot(lambda y: mpmath.polyval(coefficients, y), _to_mpf(lo))
        report.y_max = float(y_max)
        nearest = min(range(len(roots)), key=lambda i: abs(roots[i] - y_max))
        for i, z in enumerate(roots):
            if i == nearest:
                continue
            principal = mpmath.root(z, 4)
            spread = error / (4 * abs(z) ** mpmath.mpf(0.75))
            for k in range(4):
                w = principal * mpmath.mpc(0, 1) ** k
                report.eigenvalues.append(EigenvalueRecord(complex(w), float(spread), False))
    report.eigenvalues.sort(key=lambda e: -e.modulus)


def conjecture_o_check(table: MultiplicationTable) -> SpectralReport:
    """Conjecture O for sigma_1* at q = 1.

    The largest real eigenvalue T must be simple and every eigenvalue of
    modulus T must be T times a fourth root of unity.
    """
    p = hyperplane_charpoly(table)
    report = SpectralReport(charpoly=p)
    semisimplicity = check_semisimple(table, 1)
    report.semisimplicity = semisimplicity
    if semisimplicity:
        report.flags["trace_form_nondegenerate"] = True
    else:
        report.fail("trace_form_nondegenerate", f"trace form has rank {semisimplicity.rank}")

    g = _cubic_factor(p, report)
    if g is None:
        return report
    interval = _dominant_root(g, report)
    if interval is None:
        return report
    report.y_interval = interval
    _dominates(g, interval[0], report)
    _eigenvalues(g, report)
    top = [e for e in report.eigenvalues if e.certified and e.value.imag == 0 and e.value.real > 0]
    if len(report.eigenvalues) != SIZE:
        report.fail("eigenvalue_count", f"{len(report.eigenvalues)} eigenvalues, expected {SIZE}")
    elif len(top) != 1:
        report.fail("eigenvalue_count", f"{len(top)} positive real eigenvalues of maximal modulus")
    else:
        report.flags["eigenvalue_count"] = True
    report.galkin = galkin_bound_check(interval)
    if report.galkin.bound_ok:
        report.flags["galkin_bound"] = True
    else:
        report.fail("galkin_bound", f"T(CG) = {report.galkin.value} is not above 9")
    logger.debug("conjecture O: y_max=%s flags=%s", report.y_max, report.flags)
    return report


def verify_spectral(table: MultiplicationTable, q_values: Sequence = (1, 16, -1)) -> VerificationReport:
    report = VerificationReport("spectral")
    identity = multiplication_matrix(table, basis_element("s0"), 1)
    report.add("identity_operator", identity == RationalMatrix.identity(SIZE))

    classical = multiplication_matrix(table, basis_element("s1"), 0)
    report.add("nilpotent_at_q0", (classical**SIZE).is_zero(), f"sigma_1^{SIZE} at q = 0")

    p = hyperplane_charpoly(table)
    report.add("charpoly", p == REFERENCE_CHARPOLY, format_univariate(p))
    try:
        lifted = charpoly_in_q(table)
    except InconsistentError as exc:
        report.add("grading_covariance", False, str(exc))
    else:
        failures = []
        for q_value in q_values:
            direct = {k: from_qq(c) for (k,), c in hyperplane_charpoly(table, q_value).items()}
            if direct != specialize(lifted, q_value):
                failures.append(f"q = {q_value}: charpoly is not the q-rescaling of q = 1")
        report.record("grading_covariance", failures, len(q_values))

    failures = [
        f"q = {q_value}: trace form has rank {result.rank}"
        for q_value in q_values
        for result in (check_semisimple(table, q_value),)
        if not result
    ]
    report.record("semisimple", failures, len(q_values))
    classical_form = check_semisimple(table, 0)
    report.add("classical_not_semisimple", not classical_form, f"rank {classical_form.rank} at q = 0")

    conjecture = conjecture_o_check(table)
    for flag, value in conjecture.flags.items():
        report.add(flag, value, "" if value else "; ".join(conjecture.diagnostics))
    logger.debug("spectral verification: %s", report.summary())
    return report
