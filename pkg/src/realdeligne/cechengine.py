"""Cech cochain complexes of a cover with involution, and their cohomology.

Cochains live on ordered index tuples with repeats, normalized by dropping
tuples with two equal consecutive entries; each tuple contributes one basis
vector per component of its support intersection.  The involution acts by
relabeling tuples and components and multiplying by the coefficient sign;
equivariant cochains are its fixed vectors, extracted as a subcomplex with
an explicit integral basis.

Rational and mod-n results are derived from the integral fixed complex: the
basis involution is free (the index involution is), so fixing commutes with
the change of coefficients and universal coefficients applies degreewise.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from weakref import WeakKeyDictionary

from .coverdata import C2Cover, CoefficientSystem
from .errors import (
    CoverNotFree,
    DegreeOutOfRange,
    InvalidCoefficientComplex,
)
from .exactalg import (
    GroupDescriptor,
    IntegerCochainComplex,
    SparseIntMatrix,
    _quotient_data,
    _smith,
    complex_cohomology,
    fixed_subcomplex,
    integer_rank,
)

_covercache: WeakKeyDictionary = WeakKeyDictionary()


def _cache(cover: C2Cover) -> dict:
    cache = _covercache.get(cover)
    if cache is None:
        cache = {}
        _covercache[cover] = cache
    return cache


@dataclass(eq=False)
class TupleBasis:
    """Ordered basis of the degree-``p`` cochain space of a cover.

    Elements are pairs ``(tuple, component)`` listed lexicographically by
    index name and then component id, so positions are reproducible.
    """

    degree: int
    elements: tuple
    position: dict

    def __len__(self):
        return len(self.elements)


def tuple_basis(cover: C2Cover, p: int, include_degenerate: bool = False) -> TupleBasis:
    """Basis of degree-``p`` cochains: tuples of ``p + 1`` indices whose
    support intersects, no two consecutive entries equal (unless degenerate
    tuples are explicitly requested), one element per component."""
    key = ("basis", p, include_degenerate)
    cache = _cache(cover)
    if key in cache:
        return cache[key]
    order = sorted(cover.indices)
    elements = []

    def extend(tup, support):
        if len(tup) == p + 1:
            for c in sorted(cover.components_of(support)):
                elements.append((tup, c))
            return
        for i in order:
            if not include_degenerate and tup and tup[-1] == i:
                continue
            if i in support:
                extend(tup + (i,), support)
            else:
                grown = support | frozenset([i])
                if grown in cover.intersections:
                    extend(tup + (i,), grown)

    extend((), frozenset())
    basis = TupleBasis(p, tuple(elements), {e: n for n, e in enumerate(elements)})
    cache[key] = basis
    return basis


def cech_differential(cover: C2Cover, p: int, include_degenerate: bool = False) -> SparseIntMatrix:
    """Coboundary matrix from degree ``p`` to degree ``p + 1``.

    Entry rule: the value on a target tuple is the alternating sum over
    deletions of one entry, transported along the face map when the deleted
    entry was the last occurrence of its index.  Deletions producing a tuple
    outside the basis (a degenerate one, in the normalized model) contribute
    nothing.
    """
    key = ("delta", p, include_degenerate)
    cache = _cache(cover)
    if key in cache:
        return cache[key]
    src = tuple_basis(cover, p, include_degenerate)
    dst = tuple_basis(cover, p + 1, include_degenerate)
    m = SparseIntMatrix(len(dst), len(src))
    for r, (tup, c) in enumerate(dst.elements):
        row = m.rows[r]
        for k in range(len(tup)):
            sub = tup[:k] + tup[k + 1 :]
            if tup[k] in sub:
                c2 = c  # support unchanged; same component
            else:
                c2 = cover.face(c, tup[k])
            col = src.position.get((sub, c2))
            if col is None:
                continue
            sign = -1 if k % 2 else 1
            val = row.get(col, 0) + sign
            if val:
                row[col] = val
            else:
                del row[col]
    cache[key] = m
    return m


def involution_matrix(
    cover: C2Cover, p: int, sign: int, include_degenerate: bool = False
) -> SparseIntMatrix:
    """Action of the involution on degree-``p`` cochains: permute basis
    elements by the index/component involution, times the coefficient sign."""
    basis = tuple_basis(cover, p, include_degenerate)
    n = len(basis)
    m = SparseIntMatrix(n, n)
    for pos, (tup, c) in enumerate(basis.elements):
        image = (tuple(cover.t(i) for i in tup), cover.sigma(c))
        m.rows[pos][basis.position[image]] = sign
    return m


def build_full_complex(
    cover: C2Cover, max_degree: int, include_degenerate: bool = False
) -> IntegerCochainComplex:
    """The plain (non-equivariant) normalized cochain complex, carried in
    degrees ``0 .. max_degree + 1``."""
    if max_degree < 0:
        raise DegreeOutOfRange("max_degree must be nonnegative")
    key = ("full", max_degree, include_degenerate)
    cache = _cache(cover)
    if key in cache:
        return cache[key]
    hi = max_degree + 1
    ranks = {k: len(tuple_basis(cover, k, include_degenerate)) for k in range(hi + 1)}
    diffs = {k: cech_differential(cover, k, include_degenerate) for k in range(hi)}
    c = IntegerCochainComplex(lo=0, hi=hi, ranks=ranks, diffs=diffs).validate()
    cache[key] = c
    return c


def build_equivariant_complex(
    cover: C2Cover,
    coeff: CoefficientSystem,
    max_degree: int,
    include_degenerate: bool = False,
):
    """Integral complex of equivariant cochains, with its embedding.

    Returns ``(sub, bases)`` where ``bases[k]`` embeds the fixed basis into
    the full degree-``k`` cochain space.  The involution matrices are checked
    to square to the identity and commute with the coboundary on every call
    (inside :func:`fixed_subcomplex`); the coefficient base is ignored here —
    this is the integral model, and rational or mod-n answers are derived
    from it downstream.
    """
    if not cover.is_free():
        raise CoverNotFree(
            f"cover {cover.name!r} has an involution-fixed index; "
            "double_fixed_indices produces a free model"
        )
    key = ("equivariant", coeff.sign, max_degree, include_degenerate)
    cache = _cache(cover)
    if key in cache:
        return cache[key]
    full = build_full_complex(cover, max_degree, include_degenerate)
    t_maps = {
        k: involution_matrix(cover, k, coeff.sign, include_degenerate)
        for k in full.degrees()
    }
    sub, bases = fixed_subcomplex(full, t_maps)
    cache[key] = (sub, bases)
    return sub, bases


def _check_degree(k: int, max_degree: int):
    if k < 0:
        raise DegreeOutOfRange("negative cohomological degree")
    if k > max_degree - 1:
        raise DegreeOutOfRange(
            f"degree {k} needs max_degree >= {k + 1}, got {max_degree}"
        )


def _descriptor_mod_n(c: IntegerCochainComplex, k: int, n: int) -> GroupDescriptor:
    """H^k of ``c`` with Z/n coefficients via universal coefficients:
    reduce H^k mod n and add the n-torsion of H^(k+1)."""
    hk = complex_cohomology(c, k)
    hk1 = complex_cohomology(c, k + 1)
    orders = [n] * hk.rank
    orders += [gcd(d, n) for d in hk.torsion]
    orders += [gcd(d, n) for d in hk1.torsion]
    return GroupDescriptor.from_cyclic_orders(0, orders)


def _rational_rank(c: IntegerCochainComplex, k: int) -> int:
    key = ("qrank", k)
    if key not in c._cache:
        c._cache[key] = (
            c.rank(k) - integer_rank(c.diff(k)) - integer_rank(c.diff(k - 1))
        )
    return c._cache[key]


def equivariant_cohomology(
    cover: C2Cover,
    coeff: CoefficientSystem,
    k: int,
    max_degree: int,
    include_degenerate: bool = False,
) -> GroupDescriptor:
    """H^k of the equivariant cochain complex with the given coefficients.

    Integral coefficients give the full descriptor; rational ones report the
    dimension (computed by the independent rank formula, not by reusing the
    integral kernel data); mod-n ones use universal coefficients over the
    integral fixed complex.
    """
    _check_degree(k, max_degree)
    sub, _ = build_equivariant_complex(cover, coeff, max_degree, include_degenerate)
    if coeff.base == "Z":
        return complex_cohomology(sub, k)
    if coeff.base == "Q":
        return GroupDescriptor(_rational_rank(sub, k))
    return _descriptor_mod_n(sub, k, coeff.modulus)


def nonequivariant_cohomology(
    cover: C2Cover,
    coeff: CoefficientSystem,
    k: int,
    max_degree: int,
    include_degenerate: bool = False,
) -> GroupDescriptor:
    """H^k of the plain cochain complex, the involution forgotten (the sign
    of ``coeff`` is irrelevant here)."""
    _check_degree(k, max_degree)
    full = build_full_complex(cover, max_degree, include_degenerate)
    if coeff.base == "Z":
        return complex_cohomology(full, k)
    if coeff.base == "Q":
        return GroupDescriptor(_rational_rank(full, k))
    return _descriptor_mod_n(full, k, coeff.modulus)


# ---------------------------------------------------------------------------
# Hypercohomology of a bounded coefficient complex
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoefficientComplex:
    """A bounded complex of coefficient systems in degrees ``0..m``.

    ``maps[i]`` is the map from term ``i`` to term ``i + 1``: an integer
    (multiplication) or the string ``"incl"`` for the canonical inclusion of
    integers into rationals.
    """

    terms: tuple
    maps: tuple = ()

    def __post_init__(self):
        terms = tuple(self.terms)
        maps = tuple(self.maps)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "maps", maps)
        if not terms:
            raise InvalidCoefficientComplex("empty coefficient complex")
        if len(maps) != len(terms) - 1:
            raise InvalidCoefficientComplex(
                f"{len(terms)} terms need {len(terms) - 1} maps, got {len(maps)}"
            )
        if len(terms) > 1 and any(t.base == "Z/n" for t in terms):
            raise InvalidCoefficientComplex(
                "mod-n terms are supported only as single-term complexes; "
                "model multiplication-by-n complexes over the integers instead"
            )
        for i, m in enumerate(maps):
            src, dst = terms[i], terms[i + 1]
            if m == "incl":
                if not (src.base == "Z" and dst.base == "Q"):
                    raise InvalidCoefficientComplex(
                        f"map {i} is the inclusion but goes {src.base} -> {dst.base}"
                    )
            elif isinstance(m, int):
                if (src.base, dst.base) == ("Q", "Z"):
                    raise InvalidCoefficientComplex(
                        f"map {i} goes from rationals to integers"
                    )
            else:
                raise InvalidCoefficientComplex(
                    f"map {i} must be an integer or 'incl', got {m!r}"
                )
            if self.rate(i) != 0 and src.sign != dst.sign:
                raise InvalidCoefficientComplex(
                    f"nonzero map {i} does not commute with the sign actions"
                )
        for i in range(len(maps) - 1):
            if self.rate(i) != 0 and self.rate(i + 1) != 0:
                raise InvalidCoefficientComplex(
                    f"consecutive maps {i} and {i + 1} do not compose to zero"
                )

    def rate(self, i: int) -> int:
        m = self.maps[i]
        return 1 if m == "incl" else m

    def __len__(self):
        return len(self.terms)


def _total_blocks(cover, fstar, n, max_degree, include_degenerate):
    """Blocks of the total differential at total degree ``n``.

    Columns are the summands (term degree i, Cech degree j = n - i); rows
    the same at n + 1.  Vertical maps carry the sign (-1)^i on the Cech
    coboundary; horizontal maps are the coefficient maps degreewise.
    Returns (A, B, C): integer-to-integer, integer-to-rational and
    rational-to-rational blocks (there are no rational-to-integer maps).
    """
    subs = {}
    for t in fstar.terms:
        if t.sign not in subs:
            subs[t.sign], _ = build_equivariant_complex(
                cover, t, max_degree, include_degenerate
            )

    def segments(total):
        segs = []
        for i, t in enumerate(fstar.terms):
            j = total - i
            if 0 <= j <= max_degree + 1:
                segs.append((i, j, t, subs[t.sign].rank(j)))
        return segs

    def split(segs):
        z_part = [s for s in segs if s[2].base == "Z"]
        q_part = [s for s in segs if s[2].base == "Q"]
        zoff, off = {}, 0
        for i, _j, _t, size in z_part:
            zoff[i] = off
            off += size
        zsize = off
        qoff, off = {}, 0
        for i, _j, _t, size in q_part:
            qoff[i] = off
            off += size
        return z_part, q_part, zoff, qoff, zsize, off

    src = segments(n)
    dst = segments(n + 1)
    sz, sq, szoff, sqoff, s_zsize, s_qsize = split(src)
    dz, dq, dzoff, dqoff, d_zsize, d_qsize = split(dst)

    a = SparseIntMatrix(d_zsize, s_zsize)
    b = SparseIntMatrix(d_qsize, s_zsize)
    c = SparseIntMatrix(d_qsize, s_qsize)
    dz_index = {i: off for i, off in dzoff.items()}
    dq_index = {i: off for i, off in dqoff.items()}

    for i, j, t, size in src:
        is_q = t.base == "Q"
        col = sqoff[i] if is_q else szoff[i]
        sub = subs[t.sign]
        # vertical: same term, Cech degree up one
        if i in (dq_index if is_q else dz_index) and size:
            target = c if is_q else a
            row = (dq_index if is_q else dz_index)[i]
            target.set_block(row, col, sub.diff(j), scale=-1 if i % 2 else 1)
        # horizontal: next term, same Cech degree
        if i + 1 < len(fstar.terms):
            r = fstar.rate(i)
            if r:
                t2 = fstar.terms[i + 1]
                tgt_q = t2.base == "Q"
                index = dq_index if tgt_q else dz_index
                if i + 1 in index:
                    target = (c if is_q else b) if tgt_q else a
                    row = index[i + 1]
                    for s in range(size):
                        target.set(row + s, col + s, r)
    return a, b, c


def hypercohomology(
    cover: C2Cover,
    fstar: CoefficientComplex,
    k: int,
    max_degree: int,
    include_degenerate: bool = False,
) -> GroupDescriptor:
    """H^k of the total complex of the equivariant double complex of
    ``fstar``.

    All-integer complexes produce the honest finitely generated group.  When
    rational terms are present the divisible summand is not representable in
    a :class:`GroupDescriptor`; the result then describes the reduced
    quotient (classes modulo divisible ones), whose integral part is
    computed from the kernel-with-rational-image presentation.
    """
    _check_degree(k, max_degree)
    if len(fstar) == 1:
        return equivariant_cohomology(
            cover, fstar.terms[0], k, max_degree, include_degenerate
        )

    bases = {t.base for t in fstar.terms}
    if bases == {"Z"}:
        a_blocks = {
            n: _total_blocks(cover, fstar, n, max_degree, include_degenerate)[0]
            for n in range(max_degree + 2)
        }
        ranks = {n: a_blocks[n].ncols for n in range(max_degree + 2)}
        ranks[max_degree + 2] = a_blocks[max_degree + 1].nrows
        total = IntegerCochainComplex(
            lo=0,
            hi=max_degree + 2,
            ranks=ranks,
            diffs={n: a_blocks[n] for n in range(max_degree + 2)},
        ).validate()
        return complex_cohomology(total, k)

    # mixed integers/rationals: block-triangular total differential
    a_k, b_k, c_k = _total_blocks(cover, fstar, k, max_degree, include_degenerate)
    a_prev, _, _ = _total_blocks(cover, fstar, k - 1, max_degree, include_degenerate)

    # E: saturated basis of the left kernel of the rational block, so that
    # "E @ (B x) = 0" says B x lies in the rational column span of C
    e = _smith(c_k.transpose(), transforms=True).kernel_basis().transpose()
    stacked = SparseIntMatrix(a_k.nrows + e.nrows, a_k.ncols)
    stacked.set_block(0, 0, a_k)
    stacked.set_block(a_k.nrows, 0, e.matmul(b_k))
    if not stacked.matmul(a_prev).is_zero():
        raise AssertionError("total differential blocks do not compose to zero")
    data = _quotient_data(_smith(stacked, transforms=True), a_prev)
    return data["descriptor"]
