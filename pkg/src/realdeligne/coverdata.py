"""Combinatorial covers with involution.

A cover is described purely combinatorially: a finite index set with a free
involution, the set of components of each nonempty finite intersection, the
one-step face maps between components, and an involution on components.  The
geometry never appears; "good" (all components contractible) is a declared
flag carried into every report.

JSON import/export uses a canonical field and key ordering so that
export -> parse -> export is byte identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    FACE_INCOHERENCE,
    FIXED_INDEX_PRESENT,
    INVOLUTION_FACE_MISMATCH,
    INVOLUTION_NOT_SELF_INVERSE,
    NOT_DOWNWARD_CLOSED,
    CoverValidationError,
    InvalidCocycle,
)


@dataclass(frozen=True)
class CoefficientSystem:
    """Locally constant coefficients with a sign action of the involution.

    ``base`` is "Z", "Q" or "Z/n" (with ``modulus`` = n); ``sign`` is the
    action of the involution on coefficients, +1 or -1.  For "Z/n" a sign of
    -1 means negation mod n.
    """

    base: str
    sign: int
    modulus: int | None = None

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.base == "Z/n":
            if not isinstance(self.modulus, int) or self.modulus < 2:
                raise ValueError("modulus must be an integer >= 2")
        elif self.base in ("Z", "Q"):
            if self.modulus is not None:
                raise ValueError(f"base {self.base} takes no modulus")
        else:
            raise ValueError(f"unknown base {self.base!r}")

    @classmethod
    def integers(cls, sign: int = 1) -> "CoefficientSystem":
        return cls("Z", sign)

    @classmethod
    def rationals(cls, sign: int = 1) -> "CoefficientSystem":
        return cls("Q", sign)

    @classmethod
    def integers_mod(cls, n: int, sign: int = 1) -> "CoefficientSystem":
        return cls("Z/n", sign, n)

    @property
    def is_rational(self) -> bool:
        return self.base == "Q"

    def __str__(self):
        name = f"Z/{self.modulus}" if self.base == "Z/n" else self.base
        return f"({name}, {'+1' if self.sign == 1 else '-1'})"


# Coefficient systems the Real theory actually uses, by their usual names.
IZ = CoefficientSystem.integers(-1)
Z_TRIVIAL = CoefficientSystem.integers(+1)
IQ = CoefficientSystem.rationals(-1)


@dataclass(eq=False)
class C2Cover:
    """A validated combinatorial cover with a free index involution.

    Construct through :func:`validate_cover` (or the convenience
    :meth:`from_raw`); direct instantiation skips the invariant checks.
    Instances are immutable by convention and hashable by identity, so they
    can key caches.
    """

    name: str
    involution_name: str
    indices: tuple
    involution: dict
    intersections: dict  # frozenset of indices -> tuple of component ids
    faces: dict  # (component id, dropped index) -> component id
    component_involution: dict
    good: bool
    compact: bool
    _support: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self._support:
            for subset, comps in self.intersections.items():
                for c in comps:
                    self._support[c] = subset

    # -- lookups ----------------------------------------------------------

    def t(self, index: str) -> str:
        return self.involution[index]

    def sigma(self, component: str) -> str:
        return self.component_involution[component]

    def components_of(self, subset) -> tuple:
        return self.intersections.get(frozenset(subset), ())

    def face(self, component: str, drop: str) -> str:
        return self.faces[(component, drop)]

    def support_of(self, component: str):
        return self._support[component]

    def max_intersection_size(self) -> int:
        return max((len(s) for s in self.intersections), default=0)

    def is_free(self) -> bool:
        return all(self.involution[i] != i for i in self.indices)

    # -- serialization -----------------------------------------------------

    def to_raw(self) -> dict:
        subsets = sorted(self.intersections, key=lambda s: (len(s), sorted(s)))
        return {
            "name": self.name,
            "involution_name": self.involution_name,
            "indices": list(self.indices),
            "involution": {i: self.involution[i] for i in self.indices},
            "intersections": [
                {"sets": sorted(s), "components": list(self.intersections[s])}
                for s in subsets
            ],
            "faces": [
                {"component": c, "drop": i, "in_component": self.faces[(c, i)]}
                for (c, i) in sorted(self.faces)
            ],
            "component_involution": {
                c: self.component_involution[c]
                for c in sorted(self.component_involution)
            },
            "good": self.good,
            "compact": self.compact,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_raw(), indent=2) + "\n"

    @classmethod
    def from_raw(cls, raw: dict) -> "C2Cover":
        return validate_cover(raw)

    @classmethod
    def from_json(cls, text: str) -> "C2Cover":
        return validate_cover(json.loads(text))

    def __repr__(self):
        return (
            f"C2Cover({self.name!r}, {len(self.indices)} indices, "
            f"{len(self.intersections)} intersecting subsets)"
        )


def _raw_parts(raw: dict):
    indices = tuple(raw["indices"])
    involution = dict(raw["involution"])
    intersections = {}
    for entry in raw["intersections"]:
        intersections[frozenset(entry["sets"])] = tuple(entry["components"])
    faces = {}
    for entry in raw.get("faces", []):
        faces[(entry["component"], entry["drop"])] = entry["in_component"]
    comp_inv = dict(raw.get("component_involution", {}))
    return indices, involution, intersections, faces, comp_inv


def validate_cover(raw) -> C2Cover:
    """Check every structural invariant of a raw cover description.

    ``raw`` is a dict in the cover file format (or an existing
    :class:`C2Cover`, revalidated).  All violations are collected and
    reported together in a :class:`CoverValidationError`; a clean
    description returns the validated cover.
    """
    if isinstance(raw, C2Cover):
        raw = raw.to_raw()
    indices, involution, intersections, faces, comp_inv = _raw_parts(raw)
    violations = []
    index_set = set(indices)
    if len(index_set) != len(indices):
        violations.append((INVOLUTION_NOT_SELF_INVERSE, "duplicate index names"))

    for i in indices:
        ti = involution.get(i)
        if ti is None or ti not in index_set:
            violations.append(
                (INVOLUTION_NOT_SELF_INVERSE, f"involution undefined or escapes the index set at {i!r}")
            )
        elif involution.get(ti) != i:
            violations.append(
                (INVOLUTION_NOT_SELF_INVERSE, f"involution not self-inverse at {i!r}: t(t({i!r})) = {involution.get(ti)!r}")
            )
    for i in sorted(set(involution) - index_set):
        violations.append(
            (INVOLUTION_NOT_SELF_INVERSE, f"involution defined on unknown index {i!r}")
        )
    if violations:
        # involution is structurally broken; later checks would cascade
        raise CoverValidationError(violations)

    for i in indices:
        if involution[i] == i:
            violations.append(
                (
                    FIXED_INDEX_PRESENT,
                    f"index {i!r} is fixed by the involution; "
                    "apply double_fixed_indices to obtain a free cover",
                )
            )

    # intersection bookkeeping: supports are known indices, component ids
    # are globally unique, singletons are present
    support_of = {}
    for subset, comps in intersections.items():
        if not subset:
            violations.append((NOT_DOWNWARD_CLOSED, "empty subset listed in intersections"))
            continue
        stray = subset - index_set
        if stray:
            violations.append(
                (NOT_DOWNWARD_CLOSED, f"subset {sorted(subset)} uses unknown indices {sorted(stray)}")
            )
            continue
        if not comps:
            violations.append(
                (NOT_DOWNWARD_CLOSED, f"subset {sorted(subset)} listed with no components; omit empty intersections")
            )
        for c in comps:
            if c in support_of:
                violations.append(
                    (FACE_INCOHERENCE, f"component id {c!r} used by two subsets")
                )
            support_of[c] = subset
    for i in indices:
        if frozenset([i]) not in intersections:
            violations.append(
                (NOT_DOWNWARD_CLOSED, f"singleton {{{i!r}}} missing from intersections")
            )

    # downward closure, one step at a time
    for subset in intersections:
        if len(subset) < 2:
            continue
        for i in sorted(subset):
            smaller = subset - {i}
            if smaller and smaller not in intersections:
                violations.append(
                    (
                        NOT_DOWNWARD_CLOSED,
                        f"subset {sorted(subset)} intersects but {sorted(smaller)} carries no components",
                    )
                )

    # face maps: defined exactly on (component, member of support), landing
    # in the right subset, coherent under dropping two elements
    for c, subset in support_of.items():
        if len(subset) < 2:
            continue
        for i in sorted(subset):
            target = faces.get((c, i))
            if target is None:
                violations.append(
                    (FACE_INCOHERENCE, f"face of component {c!r} dropping {i!r} is missing")
                )
                continue
            smaller = subset - {i}
            if support_of.get(target) != smaller:
                violations.append(
                    (
                        FACE_INCOHERENCE,
                        f"face of {c!r} dropping {i!r} lands in {target!r}, "
                        f"which is not a component of {sorted(smaller)}",
                    )
                )
    for (c, i) in faces:
        subset = support_of.get(c)
        if subset is None or i not in subset or len(subset) < 2:
            violations.append(
                (FACE_INCOHERENCE, f"face entry ({c!r}, drop {i!r}) does not match any component support")
            )

    def face_ok(c, i):
        f = faces.get((c, i))
        return f if f is not None and support_of.get(f) == support_of.get(c, frozenset()) - {i} else None

    for c, subset in support_of.items():
        if len(subset) < 3:
            continue
        for i in sorted(subset):
            for j in sorted(subset):
                if j <= i:
                    continue
                ci = face_ok(c, i)
                cj = face_ok(c, j)
                if ci is None or cj is None:
                    continue  # already reported above
                via_i = face_ok(ci, j)
                via_j = face_ok(cj, i)
                if via_i is not None and via_j is not None and via_i != via_j:
                    violations.append(
                        (
                            FACE_INCOHERENCE,
                            f"dropping {i!r} then {j!r} from {c!r} gives {via_i!r} "
                            f"but the other order gives {via_j!r}",
                        )
                    )

    # component involution: self-inverse bijection, support-compatible,
    # commuting with faces
    for c in support_of:
        sc = comp_inv.get(c)
        if sc is None or sc not in support_of:
            violations.append(
                (
                    INVOLUTION_FACE_MISMATCH,
                    f"component involution undefined or escapes known components at {c!r}",
                )
            )
            continue
        if comp_inv.get(sc) != c:
            violations.append(
                (INVOLUTION_NOT_SELF_INVERSE, f"component involution not self-inverse at {c!r}")
            )
        expected = frozenset(involution[i] for i in support_of[c])
        if support_of[sc] != expected:
            violations.append(
                (
                    INVOLUTION_FACE_MISMATCH,
                    f"component {c!r} of {sorted(support_of[c])} maps to {sc!r} "
                    f"of {sorted(support_of[sc])}, expected a component of {sorted(expected)}",
                )
            )
    for c in sorted(set(comp_inv) - set(support_of)):
        violations.append(
            (INVOLUTION_FACE_MISMATCH, f"component involution defined on unknown component {c!r}")
        )
    for c, subset in support_of.items():
        if len(subset) < 2 or c not in comp_inv or comp_inv[c] not in support_of:
            continue
        for i in sorted(subset):
            f = face_ok(c, i)
            if f is None or f not in comp_inv:
                continue
            lhs = comp_inv[f]
            rhs = faces.get((comp_inv[c], involution[i]))
            if rhs is not None and lhs != rhs:
                violations.append(
                    (
                        INVOLUTION_FACE_MISMATCH,
                        f"involution and face maps disagree on component {c!r} dropping {i!r}",
                    )
                )

    if violations:
        raise CoverValidationError(violations)
    return C2Cover(
        name=raw["name"],
        involution_name=raw.get("involution_name", "t"),
        indices=indices,
        involution=involution,
        intersections=intersections,
        faces=faces,
        component_involution=comp_inv,
        good=bool(raw.get("good", False)),
        compact=bool(raw.get("compact", False)),
    )


# ---------------------------------------------------------------------------
# Doubling fixed indices
# ---------------------------------------------------------------------------


def _primed(name: str, used) -> str:
    fresh = name + "'"
    while fresh in used:
        fresh += "'"
    return fresh


def double_fixed_indices(raw) -> C2Cover:
    """Replace every involution-fixed index by a swapped pair of copies.

    Both copies denote the same underlying set, so every subset of new
    indices inherits the components of its set of underlying indices; in
    particular the pair {U, U'} of copies intersects in all of U.  A cover
    that is already free passes through unchanged (up to validation).
    """
    if isinstance(raw, C2Cover):
        raw = raw.to_raw()
    try:
        return validate_cover(raw)
    except CoverValidationError as err:
        if any(kind != FIXED_INDEX_PRESENT for kind, _ in err.violations):
            raise
    indices, involution, intersections, faces, comp_inv = _raw_parts(raw)
    fixed = [i for i in indices if involution.get(i) == i]

    used = set(indices)
    copy_of = {}
    for i in fixed:
        copy_of[i] = _primed(i, used)
        used.add(copy_of[i])
    underlying = {ip: i for i, ip in copy_of.items()}
    for i in indices:
        underlying[i] = i

    new_indices = []
    new_involution = {}
    for i in indices:
        new_indices.append(i)
        if i in copy_of:
            new_indices.append(copy_of[i])
            new_involution[i] = copy_of[i]
            new_involution[copy_of[i]] = i
        else:
            new_involution[i] = involution[i]

    originals = set(indices)

    def decorate(comp: str, subset: frozenset) -> str:
        # subsets made of original indices only keep the bare component ids,
        # so an already-free cover is reproduced verbatim
        if subset <= originals:
            return comp
        return comp + "|" + ",".join(sorted(subset))

    # enumerate the new subsets over each old support: each fixed index in
    # the support may appear as the original, the copy, or both
    new_intersections = {}
    comp_origin = {}  # new component id -> (old component id, new subset)
    for subset, comps in intersections.items():
        stack = [()]
        for i in sorted(subset):
            if i in copy_of:
                opts = [(i,), (copy_of[i],), (i, copy_of[i])]
            else:
                opts = [(i,)]
            stack = [acc + opt for acc in stack for opt in opts]
        for members in stack:
            new_subset = frozenset(members)
            ids = tuple(decorate(c, new_subset) for c in comps)
            new_intersections[new_subset] = ids
            for cid, c in zip(ids, comps):
                comp_origin[cid] = (c, new_subset)

    new_faces = {}
    for cid, (c, new_subset) in comp_origin.items():
        if len(new_subset) < 2:
            continue
        old_support = frozenset(underlying[y] for y in new_subset)
        for x in sorted(new_subset):
            smaller = new_subset - {x}
            smaller_support = frozenset(underlying[y] for y in smaller)
            if smaller_support == old_support:
                target_old = c  # dropped a redundant copy; same underlying set
            else:
                target_old = faces[(c, underlying[x])]
            new_faces[(cid, x)] = decorate(target_old, smaller)

    new_comp_inv = {}
    for cid, (c, new_subset) in comp_origin.items():
        t_subset = frozenset(new_involution[x] for x in new_subset)
        new_comp_inv[cid] = decorate(comp_inv[c], t_subset)

    return validate_cover(
        {
            "name": raw["name"],
            "involution_name": raw.get("involution_name", "t"),
            "indices": new_indices,
            "involution": new_involution,
            "intersections": [
                {"sets": sorted(s), "components": list(new_intersections[s])}
                for s in sorted(new_intersections, key=lambda s: (len(s), sorted(s)))
            ],
            "faces": [
                {"component": c, "drop": i, "in_component": new_faces[(c, i)]}
                for (c, i) in sorted(new_faces)
            ],
            "component_involution": {c: new_comp_inv[c] for c in sorted(new_comp_inv)},
            "good": bool(raw.get("good", False)),
            "compact": bool(raw.get("compact", False)),
        }
    )


# ---------------------------------------------------------------------------
# Products
# ---------------------------------------------------------------------------


def product_cover(a: C2Cover, b: C2Cover, name: str | None = None) -> C2Cover:
    """Cover of a product space: indices are pairs, everything componentwise.

    A set of product indices intersects exactly when both projections do,
    and its components are the pairs of projection components (a product of
    connected sets being connected).
    """
    pair_name = {}
    indices = []
    for i in a.indices:
        for j in b.indices:
            ij = f"{i}*{j}"
            pair_name[(i, j)] = ij
            indices.append(ij)
    involution = {
        pair_name[(i, j)]: pair_name[(a.t(i), b.t(j))]
        for i in a.indices
        for j in b.indices
    }

    def comp_id(ca, cb, subset):
        return f"{ca}*{cb}|" + ",".join(sorted(subset))

    intersections = {}
    comp_data = {}  # id -> (ca, cb, subset, proj_a, proj_b)
    for sa, comps_a in a.intersections.items():
        for sb, comps_b in b.intersections.items():
            members = [(i, j) for i in sorted(sa) for j in sorted(sb)]
            # subsets of the grid whose projections fill both factors
            for mask in range(1, 1 << len(members)):
                chosen = [members[k] for k in range(len(members)) if mask >> k & 1]
                if {i for i, _ in chosen} != set(sa) or {j for _, j in chosen} != set(sb):
                    continue
                subset = frozenset(pair_name[m] for m in chosen)
                ids = []
                for ca in comps_a:
                    for cb in comps_b:
                        cid = comp_id(ca, cb, subset)
                        ids.append(cid)
                        comp_data[cid] = (ca, cb, subset, sa, sb)
                intersections[subset] = tuple(ids)

    split = {pair_name[(i, j)]: (i, j) for i in a.indices for j in b.indices}
    faces = {}
    for cid, (ca, cb, subset, sa, sb) in comp_data.items():
        if len(subset) < 2:
            continue
        for x in sorted(subset):
            smaller = subset - {x}
            proj_a = {split[y][0] for y in smaller}
            proj_b = {split[y][1] for y in smaller}
            fa = ca if proj_a == set(sa) else a.face(ca, split[x][0])
            fb = cb if proj_b == set(sb) else b.face(cb, split[x][1])
            faces[(cid, x)] = comp_id(fa, fb, smaller)

    comp_inv = {}
    for cid, (ca, cb, subset, _sa, _sb) in comp_data.items():
        t_subset = frozenset(involution[x] for x in subset)
        comp_inv[cid] = comp_id(a.sigma(ca), b.sigma(cb), t_subset)

    return validate_cover(
        {
            "name": name or f"{a.name}*{b.name}",
            "involution_name": f"{a.involution_name}*{b.involution_name}",
            "indices": indices,
            "involution": involution,
            "intersections": [
                {"sets": sorted(s), "components": list(intersections[s])}
                for s in sorted(intersections, key=lambda s: (len(s), sorted(s)))
            ],
            "faces": [
                {"component": c, "drop": i, "in_component": faces[(c, i)]}
                for (c, i) in sorted(faces)
            ],
            "component_involution": {c: comp_inv[c] for c in sorted(comp_inv)},
            "good": a.good and b.good,
            "compact": a.compact and b.compact,
        }
    )


# ---------------------------------------------------------------------------
# Flat cocycles
# ---------------------------------------------------------------------------


def _mod1(x) -> Fraction:
    x = Fraction(x)
    return x - (x.numerator // x.denominator)


@dataclass(eq=False)
class FlatCocycle:
    """Locally constant circle-valued transition data on a cover.

    ``angles`` assigns to each ordered pair ``(i, j)`` with ``i != j`` whose
    sets meet, and each component ``c`` of the pair intersection, a rational
    ``theta`` mod 1 standing for the constant value ``exp(2*pi*i*theta)``.
    Conjugation negates angles, so equivariance reads
    ``theta[t(i), t(j), sigma(c)] = -theta[i, j, c]`` mod 1.
    """

    cover: C2Cover
    angles: dict  # (i, j, component) -> Fraction in [0, 1)

    def __post_init__(self):
        self.angles = {k: _mod1(v) for k, v in self.angles.items()}

    @classmethod
    def zero(cls, cover: C2Cover) -> "FlatCocycle":
        angles = {}
        for subset, comps in cover.intersections.items():
            if len(subset) != 2:
                continue
            i, j = sorted(subset)
            for c in comps:
                angles[(i, j, c)] = Fraction(0)
                angles[(j, i, c)] = Fraction(0)
        return cls(cover, angles)

    def validate(self) -> "FlatCocycle":
        """Raise :class:`InvalidCocycle` on the first violated invariant."""
        cover = self.cover
        expected_keys = set()
        for subset, comps in cover.intersections.items():
            if len(subset) != 2:
                continue
            i, j = sorted(subset)
            for c in comps:
                expected_keys.add((i, j, c))
                expected_keys.add((j, i, c))
        have = set(self.angles)
        if have != expected_keys:
            missing = sorted(expected_keys - have)
            stray = sorted(have - expected_keys)
            raise InvalidCocycle(
                f"angle table mismatch: missing {missing[:3]}..., stray {stray[:3]}..."
                if missing or stray
                else "angle table mismatch"
            )
        for (i, j, c), theta in self.angles.items():
            if _mod1(self.angles[(j, i, c)] + theta) != 0:
                raise InvalidCocycle(f"antisymmetry fails on ({i}, {j}) component {c}")
            tc = cover.sigma(c)
            if _mod1(self.angles[(cover.t(i), cover.t(j), tc)] + theta) != 0:
                raise InvalidCocycle(f"equivariance fails on ({i}, {j}) component {c}")
        for subset, comps in cover.intersections.items():
            if len(subset) != 3:
                continue
            i, j, k = sorted(subset)
            for c in comps:
                value = (
                    self.angles[(j, k, cover.face(c, i))]
                    - self.angles[(i, k, cover.face(c, j))]
                    + self.angles[(i, j, cover.face(c, k))]
                )
                if _mod1(value) != 0:
                    raise InvalidCocycle(
                        f"cocycle condition fails on {sorted(subset)} component {c}"
                    )
        return self

    def __sub__(self, other: "FlatCocycle") -> "FlatCocycle":
        if other.cover is not self.cover:
            raise ValueError("cocycles live on different covers")
        return FlatCocycle(
            self.cover,
            {k: self.angles[k] - other.angles[k] for k in self.angles},
        )

    def __add__(self, other: "FlatCocycle") -> "FlatCocycle":
        if other.cover is not self.cover:
            raise ValueError("cocycles live on different covers")
        return FlatCocycle(
            self.cover,
            {k: self.angles[k] + other.angles[k] for k in self.angles},
        )
