"""Deligne-type descriptors over a cover with involution.

The descriptor of bidegree (p, q) has one of three shapes, decided by (p, q)
alone: a discrete group (p = 0, or q > p), an extension of a finite torsion
group by a torus (q < p, reported as a split product with an explicit flag),
or a quotient of an infinite-dimensional smooth part that is only carried
symbolically (q = p >= 1).

The flat classifier takes concrete locally constant transition angles,
lifts them equivariantly to rationals, reads off the integral obstruction
class of the lift's coboundary, and — when that vanishes — the residual
torus coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cechengine import (
    build_equivariant_complex,
    cech_differential,
    equivariant_cohomology,
    tuple_basis,
)
from .coverdata import IQ, IZ, C2Cover, FlatCocycle, _mod1
from .errors import (
    CoverMismatch,
    InsufficientDegree,
    InvalidCocycle,
    NotCompact,
)
from .exactalg import (
    ElementCoordinates,
    GroupDescriptor,
    class_coordinates,
    rational_class_free_coordinates,
    solve_int,
    solve_rational,
)

SMOOTH_PART_SYMBOL = "E^{p-1}/E^{p-1}_0(M)"

DISCRETE = "discrete"
COMPACT_EXTENSION = "compact_extension"
MIXED = "mixed"


@dataclass(frozen=True)
class DeligneDescriptor:
    """Structured value of the (p, q) group over a cover.

    ``rank``/``torsion`` describe the discrete group (discrete shape), the
    discrete quotient (mixed shape), or the finite part (compact extension,
    where ``rank`` is 0 and ``torus_dim`` counts circle factors).
    """

    space: str
    p: int
    q: int
    shape: str
    rank: int
    torsion: tuple
    torus_dim: int | None
    smooth_part_symbolic: bool
    split_assumed: bool
    degrees_computed: tuple
    good_cover_asserted: bool

    @property
    def group(self) -> GroupDescriptor:
        """The finitely generated (sub)quotient carried by the descriptor."""
        return GroupDescriptor(self.rank, self.torsion)

    def to_record(self) -> dict:
        return {
            "space": self.space,
            "p": self.p,
            "q": self.q,
            "shape": self.shape,
            "rank": self.rank,
            "torsion": list(self.torsion),
            "torus_dim": self.torus_dim,
            "smooth_part_symbolic": self.smooth_part_symbolic,
            "degrees_computed": list(self.degrees_computed),
            "good_cover_asserted": self.good_cover_asserted,
        }

    def __str__(self):
        if self.shape == DISCRETE:
            body = str(self.group)
        elif self.shape == MIXED:
            body = f"{SMOOTH_PART_SYMBOL} -> quotient {self.group}"
        else:
            tor = " x ".join(f"Z/{d}" for d in self.torsion)
            body = f"torus_dim {self.torus_dim}" + (f" x {tor}" if tor else "")
            if self.split_assumed:
                body += " (split assumed)"
        return f"H({self.p},{self.q})[{self.space}] = {self.shape}: {body}"


RESULT_RECORD_SCHEMA = {
    "type": "object",
    "properties": {
        "space": {"type": "string"},
        "p": {"type": ["integer", "null"], "minimum": 0},
        "q": {"type": "integer", "minimum": 0},
        "shape": {"enum": [DISCRETE, COMPACT_EXTENSION, MIXED]},
        "rank": {"type": "integer", "minimum": 0},
        "torsion": {"type": "array", "items": {"type": "integer", "minimum": 2}},
        "torus_dim": {"type": ["integer", "null"], "minimum": 0},
        "smooth_part_symbolic": {"type": "boolean"},
        "degrees_computed": {
            "type": "array",
            "items": {"type": "integer"},
            "minItems": 2,
            "maxItems": 2,
        },
        "good_cover_asserted": {"type": "boolean"},
    },
    "required": [
        "space",
        "q",
        "shape",
        "rank",
        "torsion",
        "torus_dim",
        "smooth_part_symbolic",
        "degrees_computed",
        "good_cover_asserted",
    ],
    "additionalProperties": True,
}


def _shape_of(p: int, q: int) -> str:
    if p == 0 or q > p:
        return DISCRETE
    if q == p:
        return MIXED
    return COMPACT_EXTENSION


def deligne_descriptor(
    cover: C2Cover, p: int, q: int, max_degree: int | None = None
) -> DeligneDescriptor:
    """The (p, q) descriptor, populated from twisted integral cohomology.

    For the compact-extension shape the torus dimension is computed twice —
    as the rank of integral H^(q-1) and as the rational dimension — and the
    two must agree.
    """
    if p < 0 or q < 0:
        raise ValueError("p and q must be nonnegative")
    if max_degree is None:
        max_degree = q + 1
    if q > max_degree - 1:
        raise InsufficientDegree(
            f"degree q={q} needs max_degree >= {q + 1}, got {max_degree}"
        )
    shape = _shape_of(p, q)
    meta = {
        "space": cover.name,
        "p": p,
        "q": q,
        "shape": shape,
        "degrees_computed": (0, max_degree - 1),
        "good_cover_asserted": cover.good,
    }
    if shape in (DISCRETE, MIXED):
        g = equivariant_cohomology(cover, IZ, q, max_degree)
        return DeligneDescriptor(
            rank=g.rank,
            torsion=g.torsion,
            torus_dim=None,
            smooth_part_symbolic=(shape == MIXED),
            split_assumed=False,
            **meta,
        )
    # q < p: torus from degree q-1, finite part from the degree-q torsion
    if q == 0:
        torus_dim = 0
    else:
        torus_dim = equivariant_cohomology(cover, IZ, q - 1, max_degree).rank
        rational_dim = equivariant_cohomology(cover, IQ, q - 1, max_degree).rank
        if rational_dim != torus_dim:
            raise AssertionError(
                f"torus dimension mismatch: integral rank {torus_dim}, "
                f"rational dimension {rational_dim}"
            )
    hq = equivariant_cohomology(cover, IZ, q, max_degree)
    return DeligneDescriptor(
        rank=0,
        torsion=hq.torsion,
        torus_dim=torus_dim,
        smooth_part_symbolic=False,
        split_assumed=True,
        **meta,
    )


def classify_line_bundles(cover: C2Cover, max_degree: int = 3) -> GroupDescriptor:
    """Isomorphism classes of Real line bundles: integral H^2 with sign."""
    return equivariant_cohomology(cover, IZ, 2, max_degree)


def classify_line_bundles_with_connection(
    cover: C2Cover, max_degree: int = 3
) -> DeligneDescriptor:
    """Real line bundles with Real connection: the (2, 2) mixed descriptor."""
    return deligne_descriptor(cover, 2, 2, max_degree)


def classify_flat_line_bundles(cover: C2Cover, max_degree: int = 3) -> DeligneDescriptor:
    """Real line bundles with flat Real connection: the (3, 2) descriptor."""
    return deligne_descriptor(cover, 3, 2, max_degree)


def real_circle_maps(cover: C2Cover, max_degree: int = 2) -> GroupDescriptor:
    """Homotopy classes of Real maps to the circle: integral H^1 with sign.

    Requires a compact space (the compact flag on the cover)."""
    if not cover.compact:
        raise NotCompact(
            f"cover {cover.name!r} is not flagged compact; "
            "circle-map classification needs compactness"
        )
    return equivariant_cohomology(cover, IZ, 1, max_degree)


@dataclass(frozen=True)
class QuotientCoefficients:
    """Descriptor of cohomology with circle (rationals-mod-integers)
    coefficients under the split assumption: a torus dimension plus the
    torsion shifted up from the next integral degree."""

    torus_dim: int
    torsion: tuple


def quotient_coefficients_cohomology(
    cover: C2Cover, k: int, max_degree: int | None = None
) -> QuotientCoefficients:
    """H^k with sign-twisted circle coefficients via the connecting map:
    the free part of degree k feeds the torus, the torsion of degree k+1 is
    hit isomorphically by the connecting homomorphism."""
    if max_degree is None:
        max_degree = k + 2
    if k + 1 > max_degree - 1:
        raise InsufficientDegree(
            f"degree k={k} needs max_degree >= {k + 2}, got {max_degree}"
        )
    hk = equivariant_cohomology(cover, IZ, k, max_degree)
    hk1 = equivariant_cohomology(cover, IZ, k + 1, max_degree)
    return QuotientCoefficients(torus_dim=hk.rank, torsion=hk1.torsion)


# ---------------------------------------------------------------------------
# Concrete flat cocycles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FlatClassCoordinates:
    """Coordinates in the split flat group ``(R/Z)^d x torsion``.

    ``torus_part`` holds fractions in ``[0, 1)`` against the computed basis
    of the torus factor; it is None when the integral obstruction is nonzero
    (the class then sits outside the identity-component coordinates).
    """

    torus_part: tuple | None
    torsion_part: tuple

    @property
    def is_zero(self) -> bool:
        return self.torus_part is not None and not any(self.torus_part) and not any(
            self.torsion_part
        )


@dataclass(frozen=True)
class FlatCocycleClass:
    coords: FlatClassCoordinates
    bockstein: ElementCoordinates
    trivial: bool


def _fixed_data(cover: C2Cover, max_degree: int = 3):
    """Fixed complex with embeddings, plus the full degree-1 coboundary."""
    sub, bases = build_equivariant_complex(cover, IZ, max_degree)
    return sub, bases, cech_differential(cover, 1)


def _equivariant_lift(cover: C2Cover, fc: FlatCocycle) -> np.ndarray:
    """Rational degree-1 cochain, fixed on the nose, reducing to the angles.

    One angle per involution orbit of basis elements is lifted verbatim to
    its representative and propagated with a flipped sign to the partner;
    freeness of the index involution means no basis element partners itself.
    """
    basis = tuple_basis(cover, 1)
    lift = np.zeros(len(basis), dtype=object)
    seen = set()
    for pos, ((i, j), c) in enumerate(basis.elements):
        if pos in seen:
            continue
        partner = basis.position[((cover.t(i), cover.t(j)), cover.sigma(c))]
        theta = _mod1(fc.angles[(i, j, c)])
        lift[pos] = theta
        lift[partner] = -theta
        seen.add(pos)
        seen.add(partner)
    return lift


def flat_cocycle_class(fc: FlatCocycle, max_degree: int = 3) -> FlatCocycleClass:
    """Classify concrete flat transition angles on their cover.

    The rational equivariant lift's coboundary is an integral equivariant
    2-cocycle; its class is the integral obstruction.  When that class
    vanishes the lift differs from an integral cochain by an honest rational
    cocycle whose free coordinates, taken mod 1, locate the class on the
    torus.  ``trivial`` is equivalent to both coordinate vectors vanishing.
    """
    fc.validate()
    cover = fc.cover
    sub, bases, delta1 = _fixed_data(cover, max_degree)

    lift = _equivariant_lift(cover, fc)
    raw = delta1.matvec(lift)
    if any(Fraction(x).denominator != 1 for x in raw):
        raise InvalidCocycle(
            "coboundary of the lift is not integral; the angle data "
            "violates the cocycle condition"
        )
    beta = np.array([int(x) for x in raw], dtype=object)

    y_beta = solve_int(bases[2], beta)
    if y_beta is None:
        raise AssertionError("integral coboundary of a fixed lift must be fixed")
    bockstein = class_coordinates(sub, 2, y_beta)
    if any(bockstein.free_part):
        raise AssertionError("obstruction class of a flat cocycle must be torsion")

    torsion_part = tuple(bockstein.torsion_part)
    if any(torsion_part):
        coords = FlatClassCoordinates(torus_part=None, torsion_part=torsion_part)
        return FlatCocycleClass(coords=coords, bockstein=bockstein, trivial=False)

    # obstruction vanishes: peel off an integral cochain and read the
    # residual rational class on the torus
    mu = solve_int(sub.diff(1), y_beta)
    if mu is None:
        raise AssertionError("vanishing obstruction class must bound integrally")
    lift_fixed = solve_rational(bases[1], lift)
    if lift_fixed is None:
        raise AssertionError("the equivariant lift must lie in the fixed lattice span")
    residual = np.array(
        [Fraction(a) - Fraction(int(b)) for a, b in zip(lift_fixed, mu)], dtype=object
    )
    free = rational_class_free_coordinates(sub, 1, residual)
    torus = tuple(_mod1(x) for x in free)
    coords = FlatClassCoordinates(torus_part=torus, torsion_part=torsion_part)
    return FlatCocycleClass(
        coords=coords, bockstein=bockstein, trivial=not any(torus)
    )


def cocycles_equivalent(a: FlatCocycle, b: FlatCocycle) -> bool:
    """True when the two angle systems differ by an equivariant coboundary."""
    if a.cover is not b.cover:
        raise CoverMismatch("cocycles live on different covers")
    return flat_cocycle_class(a - b).trivial
