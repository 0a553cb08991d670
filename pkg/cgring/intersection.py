"""A small intersection-theory calculator.

Spaces are towers of products of projective spaces, projective bundles
and rank-2 Grassmann bundles, each presented as a :class:`PresentedRing`
whose top-degree slice is one dimensional. Bundles are formal: a rank and
a total Chern class, truncated above the dimension of the space.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from sympy.polys.rings import PolyElement

from .errors import DimensionMismatchError, UnsupportedRankError
from .exact import GradedRing, Monomial
from .presentation import PresentedRing

logger = logging.getLogger(__name__)


class SpaceModel:
    """A presented cohomology ring with an integration map.

    ``normalization`` is the exponent vector of the top-degree monomial
    whose integral is 1.
    """

    def __init__(self, ring: PresentedRing, top_degree: int, normalization: Monomial, name: str = ""):
        self.ring = ring
        self.top_degree = top_degree
        self.normalization = tuple(normalization)
        self.name = name or ring.name
        self.tautological: Optional["FormalBundle"] = None
        if ring.dimension(top_degree) != 1:
            raise DimensionMismatchError(
                f"{self.name}: top degree {top_degree} has dimension "
                f"{ring.dimension(top_degree)}, expected 1"
            )
        if self.graded.monomial_degree(self.normalization) != top_degree:
            raise ValueError(f"{self.name}: normalization monomial is not of top degree")
        (value,) = ring.coordinates(self.graded.monomial(self.normalization), top_degree)
        if value == 0:
            raise DimensionMismatchError(f"{self.name}: normalization monomial vanishes")
        self._scale = 1 / value

    def __repr__(self):
        return f"SpaceModel({self.name}, dim {self.top_degree})"

    @property
    def graded(self) -> GradedRing:
        return self.ring.graded

    def gen(self, name: str) -> PolyElement:
        return self.graded[name]

    def convert(self, p) -> PolyElement:
        return self.graded.convert(p)

    def truncate(self, p) -> PolyElement:
        return self.graded.truncate(self.convert(p), self.top_degree)

    def multiply(self, *factors) -> PolyElement:
        product = self.graded.one
        for factor in factors:
            product = self.truncate(product * self.convert(factor))
        return product

    def integrate(self, cls) -> Fraction:
        """Degree of the top-degree part of ``cls``; lower parts integrate to 0."""
        (value,) = self.ring.coordinates(self.convert(cls), self.top_degree)
        return value * self._scale

    def lift(self, p: PolyElement, base: "SpaceModel") -> PolyElement:
        return self.graded.embed(p, base.graded)


def integrate(space: SpaceModel, cls) -> Fraction:
    return space.integrate(cls)


def _default_names(count: int):
    if count == 1:
        return ("h",)
    return tuple(f"h{i + 1}" for i in range(count))


def projective_spaces(dims: Sequence[int], names: Optional[Sequence[str]] = None) -> SpaceModel:
    """The product P^{n1} x ... x P^{nk} with hyperplane classes ``names``."""
    if not dims or any(n < 0 for n in dims):
        raise ValueError("need at least one non-negative dimension")
    names = tuple(names) if names is not None else _default_names(len(dims))
    graded = GradedRing(names, (1,) * len(dims))
    relations = [graded[name] ** (n + 1) for name, n in zip(names, dims)]
    top = sum(dims)
    label = " x ".join(f"P{n}" for n in dims)
    ring = PresentedRing(graded, relations, max_degree=top, name=label)
    return SpaceModel(ring, top, tuple(dims), label)


def point() -> SpaceModel:
    return projective_spaces([0])


def _extend(base: SpaceModel, names: Sequence[str], weights: Sequence[int]) -> GradedRing:
    clash = set(names) & set(base.graded.names)
    if clash:
        raise ValueError(f"generator names {sorted(clash)} already used by {base.name}")
    return GradedRing(base.graded.names + tuple(names), base.graded.weights + tuple(weights))


def projective_bundle(base: SpaceModel, bundle: "FormalBundle", name: str = "m") -> SpaceModel:
    """P(E) of lines in E, with ``name`` = c1(O(1)) and relation sum c_i(E) m^(r-i) = 0.

    The tautological line O(-1) is stored on the result as ``tautological``.
    """
    if bundle.space is not base:
        raise ValueError("bundle does not live on the base space")
    rank = bundle.rank
    if rank < 1:
        raise UnsupportedRankError(f"projective bundle of a rank {rank} bundle")
    bundle.warn_above_rank()
    graded = _extend(base, (name,), (1,))
    m = graded[name]
    chern = graded.embed(bundle.chern, base.graded)
    relation = sum(
        (graded.component(chern, i) * m ** (rank - i) for i in range(rank + 1)),
        graded.zero,
    )
    relations = [graded.embed(r, base.graded) for r in base.ring.relations] + [relation]
    top = base.top_degree + rank - 1
    label = f"P({base.name}, rank {rank})"
    ring = PresentedRing(graded, relations, max_degree=top, name=label)
    space = SpaceModel(ring, top, base.normalization + (rank - 1,), label)
    space.tautological = line(space, -m)
    return space


def grassmann_bundle(
    base: SpaceModel, bundle: "FormalBundle", names: Sequence[str] = ("a1", "a2")
) -> SpaceModel:
    """G(2, E): ``names`` are c1 and c2 of the dual tautological subbundle S*.

    The relations are the components of c(E)/c(S) in degrees n-1 and n,
    which vanish because the quotient bundle has rank n-2.
    """
    if bundle.space is not base:
        raise ValueError("bundle does not live on the base space")
    rank = bundle.rank
    if rank < 2:
        raise UnsupportedRankError(f"Grassmann bundle of 2-planes in a rank {rank} bundle")
    bundle.warn_above_rank()
    first, second = names
    graded = _extend(base, names, (1, 2))
    sub_chern = graded.one - graded[first] + graded[second]
    quotient = graded.truncate(
        graded.embed(bundle.chern, base.graded) * graded.power_series_inverse(sub_chern, rank),
        rank,
    )
    relations = [graded.embed(r, base.graded) for r in base.ring.relations]
    relations += [graded.component(quotient, d) for d in (rank - 1, rank)]
    top = base.top_degree + 2 * (rank - 2)
    label = f"G(2, {base.name}, rank {rank})"
    ring = PresentedRing(graded, relations, max_degree=top, name=label)
    space = SpaceModel(ring, top, base.normalization + (0, rank - 2), label)
    space.tautological = FormalBundle.on(space, 2, sub_chern)
    return space


BundleLike = Union["FormalBundle", int]


@dataclass(frozen=True)
class FormalBundle:
    """A virtual bundle: rank and total Chern class on a fixed space."""

    space: SpaceModel
    rank: int
    chern: PolyElement

    @classmethod
    def on(cls, space: SpaceModel, rank: int, chern) -> "FormalBundle":
        chern = space.truncate(chern)
        if space.graded.component(chern, 0) != space.graded.one:
            raise ValueError("a total Chern class has constant term 1")
        return cls(space, rank, chern)

    def c(self, k: int) -> PolyElement:
        """The k-th Chern class."""
        return self.space.graded.component(self.chern, k)

    def warn_above_rank(self) -> None:
        extra = [k for k in range(self.rank + 1, self.space.top_degree + 1) if self.c(k)]
        if extra:
            logger.warning(
                "rank %d bundle has nonzero Chern classes in degrees %s", self.rank, extra
            )

    def _coerce(self, other: BundleLike) -> "FormalBundle":
        if isinstance(other, int):
            return trivial(self.space, other)
        if other.space is not self.space:
            raise ValueError("bundles live on different spaces")
        return other

    def __add__(self, other: BundleLike) -> "FormalBundle":
        return direct_sum(self, self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other: BundleLike) -> "FormalBundle":
        return difference(self, self._coerce(other))

    def __rsub__(self, other: BundleLike) -> "FormalBundle":
        return difference(self._coerce(other), self)

    def dual(self) -> "FormalBundle":
        return dual(self)

    def pullback(self, space: SpaceModel) -> "FormalBundle":
        """The same bundle on a space built over this one."""
        return FormalBundle.on(space, self.rank, space.lift(self.chern, self.space))


def trivial(space: SpaceModel, rank: int) -> FormalBundle:
    return FormalBundle(space, rank, space.graded.one)


def line(space: SpaceModel, c1) -> FormalBundle:
    return FormalBundle.on(space, 1, space.graded.one + space.convert(c1))


def split(space: SpaceModel, roots: Sequence) -> FormalBundle:
    """The sum of line bundles with the given first Chern classes."""
    chern = space.multiply(*(space.graded.one + space.convert(x) for x in roots))
    return FormalBundle.on(space, len(roots), chern)


def direct_sum(a: FormalBundle, b: FormalBundle) -> FormalBundle:
    return FormalBundle.on(a.space, a.rank + b.rank, a.space.multiply(a.chern, b.chern))


def difference(a: FormalBundle, b: FormalBundle) -> FormalBundle:
    """a - b, whose Chern class is the power-series quotient c(a)/c(b)."""
    space = a.space
    inverse = space.graded.power_series_inverse(b.chern, space.top_degree)
    return FormalBundle.on(space, a.rank - b.rank, space.multiply(a.chern, inverse))


def dual(b: FormalBundle) -> FormalBundle:
    graded = b.space.graded
    chern = sum(
        ((-1) ** d * part for d, part in graded.components(b.chern).items()), graded.zero
    )
    return FormalBundle.on(b.space, b.rank, chern)


def exterior_square(b: FormalBundle) -> FormalBundle:
    """Lambda^2 for ranks 2 and 3, from the elementary symmetric functions of the roots."""
    space = b.space
    one, c1, c2, c3 = space.graded.one, b.c(1), b.c(2), b.c(3)
    if b.rank == 2:
        return FormalBundle.on(space, 1, one + c1)
    if b.rank == 3:
        # roots x+y, x+z, y+z
        chern = one + 2 * c1 + (c1**2 + c2) + (c1 * c2 - c3)
        return FormalBundle.on(space, 3, chern)
    raise UnsupportedRankError(f"exterior square of a rank {b.rank} bundle")


def top_exterior_power(b: FormalBundle) -> FormalBundle:
    if b.rank < 0:
        raise UnsupportedRankError(f"determinant of a rank {b.rank} bundle")
    return FormalBundle.on(b.space, 1, b.space.graded.one + b.c(1))


def _binomial_power(space: SpaceModel, base: PolyElement, exponent: int) -> PolyElement:
    if exponent >= 0:
        return space.multiply(*([base] * exponent))
    return space.graded.power_series_inverse(space.multiply(*([base] * -exponent)), space.top_degree)


def twist_by_line(b: FormalBundle, ell) -> FormalBundle:
    """E tensor L with c1(L) = ``ell``: c(E(L)) = sum_i c_i(E) (1 + ell)^(r - i)."""
    space = b.space
    graded = space.graded
    shifted = graded.one + space.convert(ell)
    chern = graded.zero
    for i, part in graded.components(b.chern).items():
        chern += space.multiply(part, _binomial_power(space, shifted, b.rank - i))
    return FormalBundle.on(space, b.rank, chern)
