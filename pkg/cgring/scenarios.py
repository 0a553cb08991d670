"""The degree-one Gromov-Witten computations as Chern-class integrals.

Every scenario counts lines in CG meeting two (or three) Schubert
conditions. Its main integral lives on a parameter space of the lines'
incidence data; where part of that space is degenerate, a correction
integral on a second space is subtracted.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional

from .errors import UnknownScenarioError
from .intersection import (
    SpaceModel,
    dual,
    exterior_square,
    grassmann_bundle,
    line,
    projective_bundle,
    projective_spaces,
    top_exterior_power,
    trivial,
    twist_by_line,
)

logger = logging.getLogger(__name__)


def _integral(space: SpaceModel, *classes) -> Fraction:
    return space.integrate(space.multiply(*classes))


def _wedge_c1_on_p1():
    space = projective_spaces([1])
    a3 = 2 + line(space, -space.gen("h"))
    return _integral(space, exterior_square(dual(a3)).c(1))


def _wedge_c3_on_p3():
    """Shared by 4.1.2 and 4.2.1: both reduce to the same class on the P3 of lines through a point."""
    space = projective_spaces([3])
    a3 = 4 - line(space, space.gen("h"))
    return _integral(space, exterior_square(dual(a3)).c(3))


def _wedge_excess_on_p1():
    space = projective_spaces([1])
    a3 = 2 + line(space, -space.gen("h"))
    # the evaluation map to V6/A3 drops rank along the locus
    virtual = exterior_square(dual(a3)) - (6 - a3)
    return _integral(space, virtual.c(1))


def _wedge_c2_on_p1xp1():
    space = projective_spaces([1, 1], ("h", "hp"))
    a3 = 1 + line(space, -space.gen("h")) + line(space, -space.gen("hp"))
    return _integral(space, exterior_square(dual(a3)).c(2))


def _wedge_c2_on_p2():
    """Shared by 4.1.5 and 4.2.2: both reduce to the same class on the same P2."""
    space = projective_spaces([2])
    a3 = 1 + (3 - line(space, space.gen("h")))
    return _integral(space, exterior_square(dual(a3)).c(2))


def _twisted_c3_on_p1xp2():
    space = projective_spaces([1, 2])
    u3 = 1 + (3 - line(space, space.gen("h2")))
    twisted = twist_by_line(exterior_square(dual(u3)), space.gen("h1"))
    return _integral(space, twisted.c(3))


def _twisted_c3_on_p1xp1xp1():
    space = projective_spaces([1, 1, 1])
    u3 = 1 + line(space, -space.gen("h1")) + line(space, -space.gen("h2"))
    twisted = twist_by_line(exterior_square(dual(u3)), space.gen("h3"))
    return _integral(space, twisted.c(3))


def _grassmann_bundle_count():
    base = projective_spaces([1])
    d1 = line(base, -base.gen("h"))
    space = grassmann_bundle(base, 5 - d1)
    d1 = d1.pullback(space)
    d3 = dual(d1 + space.tautological)
    wedge = exterior_square(d3)
    return _integral(space, d3.c(1), wedge.c(2), (wedge - (3 - d1)).c(2))


def _grassmann_degenerate_locus():
    base = projective_spaces([1])
    d1 = line(base, -base.gen("h"))
    space = projective_bundle(base, 4 - d1)
    d1 = d1.pullback(space)
    d3 = dual(1 + d1 + space.tautological)
    return _integral(space, d3.c(1), (exterior_square(d3) - (3 - d1)).c(2))


def _projective_bundle_count():
    base = projective_spaces([1, 2])
    d1 = line(base, -base.gen("h1"))
    d1p = line(base, -base.gen("h2"))
    space = projective_bundle(base, 6 - d1 - d1p)
    d1, d1p = d1.pullback(space), d1p.pullback(space)
    d3 = dual(d1 + d1p + space.tautological)
    wedge = exterior_square(d3)
    return _integral(space, d3.c(1), wedge.c(3), (wedge - (3 - d1p)).c(2))


def _three_point_count():
    base = projective_spaces([1])
    space = grassmann_bundle(base, trivial(base, 5))
    sub = space.tautological
    d3 = dual(1 + sub)
    wedge = exterior_square(d3)
    return _integral(
        space,
        top_exterior_power(dual(sub)).c(1),
        wedge.c(3),
        twist_by_line(wedge, space.gen("h")).c(3),
    )


def _three_point_degenerate_locus():
    base = projective_spaces([1], ("l",))
    d2 = 1 + line(base, -base.gen("l"))
    space = projective_bundle(base, 6 - d2)
    d3 = dual(d2.pullback(space) + space.tautological)
    return _integral(space, top_exterior_power(d3).c(1), exterior_square(d3).c(3))


@dataclass(frozen=True)
class Scenario:
    id: str
    invariant: str
    description: str
    main: Callable[[], Fraction]
    correction: Optional[Callable[[], Fraction]] = None


@dataclass(frozen=True)
class ScenarioResult:
    id: str
    main: Fraction
    correction: Fraction = Fraction(0)

    @property
    def value(self) -> Fraction:
        return self.main - self.correction

    def __str__(self):
        return f"main={self.main} correction={self.correction} value={self.value}"

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "main": str(self.main),
            "correction": str(self.correction),
            "value": str(self.value),
        }


SCENARIOS: Dict[str, Scenario] = {
    s.id: s
    for s in (
        Scenario(
            "4.1.1",
            "I1(s3, s8)",
            "lines through a point meeting a tau_111 cycle, counted on P1",
            _wedge_c1_on_p1,
        ),
        Scenario(
            "4.1.2",
            "I1(s3p, s8)",
            "lines through a point meeting a tau_3 cycle, counted on P3",
            _wedge_c3_on_p3,
        ),
        Scenario(
            "4.1.3",
            "I1(s4, s7)",
            "lines meeting a sigma_7 curve and a tau_1111 cycle",
            _wedge_excess_on_p1,
        ),
        Scenario(
            "4.1.4",
            "I1(s4 + 2 s4p, s7)",
            "lines meeting a sigma_7 curve and a tau_211 cycle, counted on P1 x P1",
            _wedge_c2_on_p1xp1,
        ),
        Scenario(
            "4.1.5",
            "I1(s4 + s4p + s4pp, s7)",
            "lines meeting a sigma_7 curve and a tau_22 cycle, counted on P2",
            _wedge_c2_on_p2,
        ),
        Scenario(
            "4.1.6",
            "I1(2 s5, s6p)",
            "lines meeting a beta-plane and a tau_2111 cycle, counted on P1 x P2",
            _twisted_c3_on_p1xp2,
        ),
        Scenario(
            "4.1.7",
            "I1(3 s5 + s5p, s6p)",
            "lines meeting a beta-plane and a tau_221 cycle, counted on P1 x P1 x P1",
            _twisted_c3_on_p1xp1xp1,
        ),
        Scenario(
            "4.1.8",
            "I1(2 s5, s6 + 3 s6p)",
            "lines meeting tau_2111 and tau_2211 cycles, on a Grassmann bundle over P1",
            _grassmann_bundle_count,
            _grassmann_degenerate_locus,
        ),
        Scenario(
            "4.1.9",
            "I1(s5 + s5p, s6 + 3 s6p)",
            "lines meeting tau_32 and tau_2211 cycles, on a projective bundle over P1 x P2",
            _projective_bundle_count,
        ),
        Scenario(
            "4.2.1",
            "I1(s2, s2, s8)",
            "lines through a point meeting two tau_2 cycles, counted on P3",
            _wedge_c3_on_p3,
        ),
        Scenario(
            "4.2.2",
            "I1(s2, s4, s6p)",
            "lines meeting a beta-plane, a tau_1111 and a tau_2 cycle, counted on P2",
            _wedge_c2_on_p2,
        ),
        Scenario(
            "4.2.3",
            "I1(s2, s4, s6 + s6p)",
            "lines meeting tau_2, tau_1111 and tau_33 cycles, on P1 x G(2, 5)",
            _three_point_count,
            _three_point_degenerate_locus,
        ),
    )
}


def scenario_ids() -> List[str]:
    return list(SCENARIOS)


def get_scenario(scenario_id: str) -> Scenario:
    try:
        return SCENARIOS[scenario_id]
    except KeyError:
        raise UnknownScenarioError(scenario_id) from None


def run_scenario(scenario_id: str) -> ScenarioResult:
    """Evaluates the main integral and subtracts the correction, if any."""
    scenario = get_scenario(scenario_id)
    main = Fraction(scenario.main())
    correction = Fraction(scenario.correction()) if scenario.correction else Fraction(0)
    result = ScenarioResult(scenario.id, main, correction)
    logger.debug("scenario %s %s: %s", scenario.id, scenario.invariant, result)
    return result


def scenario_value(scenario_id: str) -> Fraction:
    return run_scenario(scenario_id).value


def run_all() -> Dict[str, ScenarioResult]:
    return {scenario_id: run_scenario(scenario_id) for scenario_id in SCENARIOS}
