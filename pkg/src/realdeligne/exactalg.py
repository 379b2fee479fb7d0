"""Exact integer linear algebra for finitely generated cochain complexes.

Everything here runs on arbitrary-precision Python integers (Fractions for
the few rational solves); no floating point is ever involved, so results are
exact by construction.  Matrices are stored sparsely as dicts of rows, which
keeps Smith reduction of the large but very sparse coboundary matrices cheap.
Dense interchange uses numpy arrays with ``dtype=object``.

The main entry points are :func:`smith_normal_form`,
:func:`complex_cohomology`, :func:`fixed_subcomplex` and
:func:`class_coordinates`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from sympy import factorint

from .errors import DegreeOutOfRange, NotACocycle, NotAnInvolution, NotEquivariant


def zeros(nrows: int, ncols: int) -> np.ndarray:
    return np.zeros((nrows, ncols), dtype=object)


def eye(n: int) -> np.ndarray:
    a = zeros(n, n)
    for i in range(n):
        a[i, i] = 1
    return a


def intmat(rows) -> np.ndarray:
    """Dense exact-integer matrix from a nested list (or 2-d array)."""
    a = np.array(rows, dtype=object)
    if a.ndim != 2:
        a = a.reshape(len(rows), -1)
    return a


class SparseIntMatrix:
    """Dict-of-rows sparse matrix over the integers.

    ``rows[i]`` maps a column index to a nonzero integer entry.  The class is
    deliberately small; reduction algorithms below manipulate the row dicts
    directly.
    """

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows=None):
        self.nrows = nrows
        self.ncols = ncols
        self.rows = [dict() for _ in range(nrows)] if rows is None else rows

    @classmethod
    def from_dense(cls, a) -> "SparseIntMatrix":
        a = np.asarray(a, dtype=object)
        if a.ndim == 1:
            a = a.reshape(-1, 1)
        m = cls(a.shape[0], a.shape[1])
        for i in range(a.shape[0]):
            row = m.rows[i]
            for j in range(a.shape[1]):
                x = a[i, j]
                if x:
                    row[j] = int(x)
        return m

    @classmethod
    def identity(cls, n: int) -> "SparseIntMatrix":
        m = cls(n, n)
        for i in range(n):
            m.rows[i][i] = 1
        return m

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def copy(self) -> "SparseIntMatrix":
        return SparseIntMatrix(self.nrows, self.ncols, [dict(r) for r in self.rows])

    def set(self, i: int, j: int, value) -> None:
        if value:
            self.rows[i][j] = int(value)
        else:
            self.rows[i].pop(j, None)

    def get(self, i: int, j: int):
        return self.rows[i].get(j, 0)

    def set_block(self, i0: int, j0: int, other: "SparseIntMatrix", scale=1) -> None:
        for i, row in enumerate(other.rows):
            target = self.rows[i0 + i]
            for j, x in row.items():
                v = target.get(j0 + j, 0) + scale * x
                if v:
                    target[j0 + j] = v
                else:
                    target.pop(j0 + j, None)

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows)

    def is_zero(self) -> bool:
        return all(not r for r in self.rows)

    def transpose(self) -> "SparseIntMatrix":
        t = SparseIntMatrix(self.ncols, self.nrows)
        for i, row in enumerate(self.rows):
            for j, x in row.items():
                t.rows[j][i] = x
        return t

    def matvec(self, v):
        """Product with a dense vector (entries int or Fraction)."""
        out = [0] * self.nrows
        for i, row in enumerate(self.rows):
            acc = 0
            for j, x in row.items():
                acc += x * v[j]
            out[i] = acc
        return out

    def matmat_dense(self, b: np.ndarray) -> np.ndarray:
        out = zeros(self.nrows, b.shape[1])
        for i, row in enumerate(self.rows):
            for j, x in row.items():
                out[i, :] += x * b[j, :]
        return out

    def matmul(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        assert self.ncols == other.nrows
        out = SparseIntMatrix(self.nrows, other.ncols)
        for i, row in enumerate(self.rows):
            acc: dict = {}
            for j, x in row.items():
                for k, y in other.rows[j].items():
                    v = acc.get(k, 0) + x * y
                    if v:
                        acc[k] = v
                    else:
                        del acc[k]
            out.rows[i] = acc
        return out

    def to_dense(self) -> np.ndarray:
        a = zeros(self.nrows, self.ncols)
        for i, row in enumerate(self.rows):
            for j, x in row.items():
                a[i, j] = x
        return a

    def __eq__(self, other):
        if not isinstance(other, SparseIntMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __repr__(self):
        return f"SparseIntMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"


def as_sparse(m) -> SparseIntMatrix:
    if isinstance(m, SparseIntMatrix):
        return m
    return SparseIntMatrix.from_dense(np.asarray(m, dtype=object))


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


class _SmithData:
    """Result of a Smith reduction ``u @ m @ v == d``.

    ``diag`` lists the diagonal of ``d`` (nonnegative, divisibility chain).
    Transforms are kept sparse: ``u`` and ``vinv`` as plain row dicts,
    ``v`` and ``uinv`` through their transposes (so that the column
    operations performed on them become row operations).
    """

    __slots__ = ("nrows", "ncols", "diag", "u", "vT", "uinvT", "vinv")

    def __init__(self, nrows, ncols, diag, u, vT, uinvT, vinv):
        self.nrows = nrows
        self.ncols = ncols
        self.diag = diag
        self.u = u
        self.vT = vT
        self.uinvT = uinvT
        self.vinv = vinv

    # -- dense views used by tests and callers that want matrices

    def d_dense(self) -> np.ndarray:
        a = zeros(self.nrows, self.ncols)
        for t, x in enumerate(self.diag):
            a[t, t] = x
        return a

    def u_dense(self) -> np.ndarray:
        return self.u.to_dense()

    def v_dense(self) -> np.ndarray:
        return self.vT.to_dense().T

    def kernel_columns(self):
        ncols = self.ncols
        nd = len(self.diag)
        return [j for j in range(ncols) if j >= nd or self.diag[j] == 0]

    def kernel_basis(self) -> SparseIntMatrix:
        """Basis of the integer kernel as columns; the lattice is saturated."""
        cols = self.kernel_columns()
        out = SparseIntMatrix(self.ncols, len(cols))
        for jnew, j in enumerate(cols):
            for i, x in self.vT.rows[j].items():
                out.rows[i][jnew] = x
        return out

    def kernel_left_inverse(self) -> SparseIntMatrix:
        """Rows express any kernel vector in the :meth:`kernel_basis` basis.

        These are the rows of ``v^{-1}`` at the kernel positions, so for a
        vector ``w`` with ``m @ w == 0`` the product gives exact coordinates
        (and composing with :meth:`kernel_basis` returns ``w``).
        """
        cols = self.kernel_columns()
        left = SparseIntMatrix(len(cols), self.ncols)
        for inew, j in enumerate(cols):
            left.rows[inew] = dict(self.vinv.rows[j])
        return left

    def rank(self) -> int:
        return sum(1 for x in self.diag if x)

    def solve(self, b: np.ndarray, rational: bool):
        """Solve ``m @ x == b`` for each column of ``b``; None if unsolvable.

        With ``rational=False`` solutions are integral (divisibility
        enforced); with ``rational=True`` entries may be Fractions.
        """
        b = np.asarray(b, dtype=object)
        vector_in = b.ndim == 1
        if vector_in:
            b = b.reshape(-1, 1)
        ncols_b = b.shape[1]
        y = self.u.matmat_dense(b)
        nd = len(self.diag)
        z = zeros(self.ncols, ncols_b)
        for i in range(self.nrows):
            di = self.diag[i] if i < nd else 0
            if di == 0:
                if any(y[i, c] != 0 for c in range(ncols_b)):
                    return None
            elif i < self.ncols:
                for c in range(ncols_b):
                    val = y[i, c]
                    if rational:
                        z[i, c] = Fraction(val, di)
                    else:
                        q, r = divmod(val, di)
                        if r:
                            return None
                        z[i, c] = q
        x = zeros(self.ncols, ncols_b)
        for j in range(self.ncols):
            zr = z[j, :]
            if not any(zr):
                continue
            for i, vx in self.vT.rows[j].items():
                x[i, :] += vx * zr
        return x[:, 0] if vector_in else x


def _smith(m: SparseIntMatrix, transforms: bool = True) -> _SmithData:
    nr, nc = m.nrows, m.ncols
    a = [dict(r) for r in m.rows]
    colrows = [set() for _ in range(nc)]
    for i, row in enumerate(a):
        for j in row:
            colrows[j].add(i)

    if transforms:
        u = SparseIntMatrix.identity(nr)
        uinvT = SparseIntMatrix.identity(nr)
        vT = SparseIntMatrix.identity(nc)
        vinv = SparseIntMatrix.identity(nc)
    else:
        u = uinvT = vT = vinv = None

    def row_axpy(i, t, q):
        # row_i -= q * row_t
        ai, at = a[i], a[t]
        for j, x in at.items():
            v = ai.get(j, 0) - q * x
            if v:
                ai[j] = v
                colrows[j].add(i)
            else:
                ai.pop(j, None)
                colrows[j].discard(i)
        if transforms:
            ur, ut = u.rows[i], u.rows[t]
            for j, x in ut.items():
                v = ur.get(j, 0) - q * x
                if v:
                    ur[j] = v
                else:
                    ur.pop(j, None)
            # u_inv column t += q * column i  (stored transposed)
            wt, wi = uinvT.rows[t], uinvT.rows[i]
            for j, x in wi.items():
                v = wt.get(j, 0) + q * x
                if v:
                    wt[j] = v
                else:
                    wt.pop(j, None)

    def col_axpy(j, t, q):
        # col_j -= q * col_t
        for i in list(colrows[t]):
            x = a[i].get(t)
            if x is None:
                colrows[t].discard(i)
                continue
            v = a[i].get(j, 0) - q * x
            if v:
                a[i][j] = v
                colrows[j].add(i)
            else:
                a[i].pop(j, None)
                colrows[j].discard(i)
        if transforms:
            vj, vt = vT.rows[j], vT.rows[t]
            for i, x in vt.items():
                v = vj.get(i, 0) - q * x
                if v:
                    vj[i] = v
                else:
                    vj.pop(i, None)
            wt, wj = vinv.rows[t], vinv.rows[j]
            for i, x in wj.items():
                v = wt.get(i, 0) + q * x
                if v:
                    wt[i] = v
                else:
                    wt.pop(i, None)

    def row_swap(i, t):
        if i == t:
            return
        a[i], a[t] = a[t], a[i]
        for j in set(a[i]) | set(a[t]):
            members = colrows[j]
            has_i, has_t = j in a[i], j in a[t]
            members.discard(i)
            members.discard(t)
            if has_i:
                members.add(i)
            if has_t:
                members.add(t)
        if transforms:
            u.rows[i], u.rows[t] = u.rows[t], u.rows[i]
            uinvT.rows[i], uinvT.rows[t] = uinvT.rows[t], uinvT.rows[i]

    def col_swap(j, t):
        if j == t:
            return
        for i in colrows[j] | colrows[t]:
            row = a[i]
            xj, xt = row.pop(j, None), row.pop(t, None)
            if xj is not None:
                row[t] = xj
            if xt is not None:
                row[j] = xt
        colrows[j], colrows[t] = colrows[t], colrows[j]
        if transforms:
            vT.rows[j], vT.rows[t] = vT.rows[t], vT.rows[j]
            vinv.rows[j], vinv.rows[t] = vinv.rows[t], vinv.rows[j]

    def row_negate(t):
        at = a[t]
        for j in at:
            at[j] = -at[j]
        if transforms:
            for r in (u.rows[t], uinvT.rows[t]):
                for j in r:
                    r[j] = -r[j]

    n = min(nr, nc)
    t = 0
    while t < n:
        # find the first column (from t) with a nonzero entry in rows >= t
        pivot_col = None
        for j in range(t, nc):
            if any(i >= t for i in colrows[j]):
                pivot_col = j
                break
        if pivot_col is None:
            break
        col_swap(pivot_col, t)
        # smallest |entry| in that column as pivot (deterministic tiebreak)
        cand = [i for i in colrows[t] if i >= t]
        piv = min(cand, key=lambda i: (abs(a[i][t]), i))
        row_swap(piv, t)

        while True:
            if a[t][t] < 0:
                row_negate(t)
            # clear column t below the pivot, Euclid-style
            while True:
                below = sorted(i for i in colrows[t] if i > t)
                if not below:
                    break
                p = a[t][t]
                rem = []
                for i in below:
                    x = a[i].get(t)
                    if not x:
                        continue
                    q = x // p
                    if q:
                        row_axpy(i, t, q)
                    if a[i].get(t):
                        rem.append(i)
                if not rem:
                    break
                r = min(rem, key=lambda i: (a[i][t], i))
                row_swap(r, t)
            # clear row t to the right, Euclid-style
            while True:
                right = sorted(j for j in a[t] if j > t)
                if not right:
                    break
                p = a[t][t]
                rem = []
                for j in right:
                    x = a[t].get(j)
                    if not x:
                        continue
                    q = x // p
                    if q:
                        col_axpy(j, t, q)
                    if a[t].get(j):
                        rem.append(j)
                if not rem:
                    break
                c = min(rem, key=lambda j: (a[t][j], j))
                col_swap(c, t)
            if any(i > t for i in colrows[t]):
                continue  # a column swap reintroduced entries below the pivot
            # pivot isolated; enforce that it divides the rest of the block
            p = abs(a[t][t])
            if p == 1:
                break
            bad = None
            for i in range(t + 1, nr):
                for j, x in a[i].items():
                    if j > t and x % p:
                        if bad is None or (i, j) < bad:
                            bad = (i, j)
                if bad is not None and bad[0] == i:
                    break
            if bad is None:
                break
            row_axpy(t, bad[0], -1)  # fold the offending row into row t
        if a[t][t] < 0:
            row_negate(t)
        t += 1

    diag = [a[i].get(i, 0) for i in range(n)]
    return _SmithData(nr, nc, diag, u, vT, uinvT, vinv)


def smith_normal_form(m):
    """Smith normal form with transforms: returns ``(d, u, v)`` dense with
    ``u @ m @ v == d``, ``u`` and ``v`` unimodular, and the diagonal of ``d``
    nonnegative with each entry dividing the next."""
    res = _smith(as_sparse(m), transforms=True)
    return res.d_dense(), res.u_dense(), res.v_dense()


def kernel_basis(m) -> np.ndarray:
    """Columns form a basis of the integer kernel (a saturated sublattice)."""
    return _smith(as_sparse(m), transforms=True).kernel_basis().to_dense()


def integer_rank(m) -> int:
    return _smith(as_sparse(m), transforms=False).rank()


def solve_int(m, b):
    """Exact integral solution of ``m @ x == b`` (columnwise), or None."""
    return _smith(as_sparse(m), transforms=True).solve(b, rational=False)


def solve_rational(m, b):
    """Exact rational solution of ``m @ x == b`` (columnwise), or None."""
    return _smith(as_sparse(m), transforms=True).solve(b, rational=True)


def is_unimodular(m) -> bool:
    m = as_sparse(m)
    if m.nrows != m.ncols:
        return False
    return all(x == 1 for x in _smith(m, transforms=False).diag)


# ---------------------------------------------------------------------------
# Group descriptors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupDescriptor:
    """Canonical form of a finitely generated abelian group.

    ``torsion`` holds the invariant factors, each at least 2 and each
    dividing the next, so equality of descriptors is isomorphism.
    """

    rank: int
    torsion: tuple = ()

    def __post_init__(self):
        tor = tuple(int(d) for d in self.torsion)
        object.__setattr__(self, "torsion", tor)
        for d in tor:
            if d < 2:
                raise ValueError("torsion invariants must be >= 2")
        for x, y in zip(tor, tor[1:]):
            if y % x:
                raise ValueError("torsion invariants must form a divisibility chain")

    @classmethod
    def from_invariant_factors(cls, rank, factors) -> "GroupDescriptor":
        return cls(rank, tuple(abs(int(d)) for d in factors if abs(int(d)) > 1))

    @classmethod
    def from_cyclic_orders(cls, rank, orders) -> "GroupDescriptor":
        """Canonicalize a direct sum of cyclic groups of the given orders."""
        primes: dict = {}
        for n in orders:
            n = abs(int(n))
            if n <= 1:
                continue
            for p, e in factorint(n).items():
                primes.setdefault(p, []).append(e)
        if not primes:
            return cls(rank)
        count = max(len(v) for v in primes.values())
        factors = [1] * count
        for p, exps in primes.items():
            exps = sorted(exps)
            exps = [0] * (count - len(exps)) + exps
            for i, e in enumerate(exps):
                factors[i] *= p**e
        return cls(rank, tuple(d for d in factors if d > 1))

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def __str__(self):
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class ElementCoordinates:
    """Coordinates of a cohomology class in the canonical decomposition:
    ``free_part`` against the rank generators, ``torsion_part[i]`` a residue
    in ``[0, d_i)`` against the torsion generator of order ``d_i``."""

    free_part: tuple
    torsion_part: tuple

    @property
    def is_zero(self) -> bool:
        return not any(self.free_part) and not any(self.torsion_part)


# ---------------------------------------------------------------------------
# Cochain complexes
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class IntegerCochainComplex:
    """A finite complex of free Z-modules ``C^lo -> ... -> C^hi``.

    ``diffs[k]`` is the map ``C^k -> C^(k+1)``; missing keys mean the zero
    map.  Consecutive differentials must compose to zero (``validate``).
    """

    lo: int
    hi: int
    ranks: dict
    diffs: dict
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.diffs = {k: as_sparse(d) for k, d in self.diffs.items()}

    def rank(self, k: int) -> int:
        return self.ranks.get(k, 0)

    def diff(self, k: int) -> SparseIntMatrix:
        d = self.diffs.get(k)
        if d is None:
            return SparseIntMatrix(self.rank(k + 1), self.rank(k))
        return d

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def validate(self) -> "IntegerCochainComplex":
        for k in range(self.lo, self.hi):
            d = self.diff(k)
            if d.shape != (self.rank(k + 1), self.rank(k)):
                raise ValueError(f"differential at degree {k} has shape {d.shape}")
        for k in range(self.lo, self.hi - 1):
            if not self.diff(k + 1).matmul(self.diff(k)).is_zero():
                raise ValueError(f"d∘d != 0 between degrees {k} and {k + 2}")
        return self


def _quotient_data(a_smith: _SmithData, generators: SparseIntMatrix) -> dict:
    """Presentation data of ``ker(a) / span(generators)``.

    The generator columns must already lie in the kernel lattice of the
    matrix behind ``a_smith`` (callers check ``a @ gens == 0``); expressing
    them in the kernel basis is then a single sparse product with the
    left-inverse rows, no solving required.
    """
    ker = a_smith.kernel_basis()
    left = a_smith.kernel_left_inverse()
    x_smith = _smith(left.matmul(generators), transforms=True)
    z = ker.ncols
    diag = x_smith.diag
    free_pos = [i for i in range(z) if i >= len(diag) or diag[i] == 0]
    torsion_pos = [(i, diag[i]) for i in range(min(z, len(diag))) if diag[i] >= 2]
    descriptor = GroupDescriptor.from_invariant_factors(
        len(free_pos), [d for _, d in torsion_pos]
    )
    return {
        "kernel": ker,
        "left": left,
        "x_smith": x_smith,
        "free_pos": free_pos,
        "torsion_pos": torsion_pos,
        "descriptor": descriptor,
    }


def kernel_quotient(matrix, generators) -> GroupDescriptor:
    """Descriptor of ``ker(matrix) / span(generator columns)`` over Z.

    The generators must be integral and annihilated by ``matrix``; since the
    kernel basis is saturated this makes them honest lattice points.
    """
    m = as_sparse(matrix)
    gens = as_sparse(generators)
    if not m.matmul(gens).is_zero():
        raise ValueError("generators do not lie in the kernel")
    return _quotient_data(_smith(m, transforms=True), gens)["descriptor"]


def _cohomology_data(c: IntegerCochainComplex, k: int):
    key = ("cohomology", k)
    hit = c._cache.get(key)
    if hit is not None:
        return hit
    data = _quotient_data(_smith(c.diff(k), transforms=True), c.diff(k - 1))
    c._cache[key] = data
    return data


def complex_cohomology(c: IntegerCochainComplex, k: int) -> GroupDescriptor:
    """Cohomology ``ker d_k / im d_(k-1)`` in canonical form.

    Differentials just outside the carried range count as zero maps, but
    ``k`` itself must lie inside ``[lo, hi]``.
    """
    if k < c.lo or k > c.hi:
        raise DegreeOutOfRange(f"degree {k} outside complex range [{c.lo}, {c.hi}]")
    return _cohomology_data(c, k)["descriptor"]


def class_coordinates(c: IntegerCochainComplex, k: int, cocycle) -> ElementCoordinates:
    """Coordinates of an integral cocycle's class, deterministically.

    The basis is the one produced by the Smith reductions in
    :func:`complex_cohomology`, so repeated calls against the same complex
    are mutually consistent.
    """
    if k < c.lo or k > c.hi:
        raise DegreeOutOfRange(f"degree {k} outside complex range [{c.lo}, {c.hi}]")
    v = np.asarray(cocycle, dtype=object).reshape(-1)
    if v.shape[0] != c.rank(k):
        raise NotACocycle(f"vector has length {v.shape[0]}, expected {c.rank(k)}")
    if any(x for x in c.diff(k).matvec(v)):
        raise NotACocycle("vector is not annihilated by the differential")
    data = _cohomology_data(c, k)
    w = data["left"].matvec(v)
    y = data["x_smith"].u.matvec(w)
    free = tuple(y[i] for i in data["free_pos"])
    torsion = tuple(y[i] % d for i, d in data["torsion_pos"])
    return ElementCoordinates(free, torsion)


def class_representative(c: IntegerCochainComplex, k: int, coords: ElementCoordinates):
    """An integral cocycle whose class has the given coordinates."""
    data = _cohomology_data(c, k)
    z = data["kernel"].ncols
    y = [0] * z
    for val, i in zip(coords.free_part, data["free_pos"]):
        y[i] = int(val)
    for val, (i, _d) in zip(coords.torsion_part, data["torsion_pos"]):
        y[i] = int(val)
    # w = u^{-1} @ y, with u^{-1} stored by columns
    uinvT = data["x_smith"].uinvT
    w = [0] * z
    for i, yi in enumerate(y):
        if not yi:
            continue
        for j, x in uinvT.rows[i].items():
            w[j] += yi * x
    return np.array(data["kernel"].matvec(w), dtype=object)


def rational_class_free_coordinates(c: IntegerCochainComplex, k: int, cocycle):
    """Free-part coordinates (Fractions) of a rational cocycle's class.

    Aligned with :func:`class_coordinates`: an integral cocycle's rational
    free coordinates agree with its integral ones, and the image of the
    integral classes is exactly the integer points.
    """
    v = np.asarray(cocycle, dtype=object).reshape(-1)
    if any(x for x in c.diff(k).matvec(v)):
        raise NotACocycle("vector is not annihilated by the differential")
    data = _cohomology_data(c, k)
    w = data["left"].matvec(v)
    y = data["x_smith"].u.matvec(w)
    return tuple(Fraction(y[i]) for i in data["free_pos"])


# ---------------------------------------------------------------------------
# Fixed subcomplex of a degreewise involution
# ---------------------------------------------------------------------------


def fixed_subcomplex(c: IntegerCochainComplex, involution: dict):
    """Subcomplex of vectors fixed by a degreewise involution.

    ``involution[k]`` must be a square integer matrix with ``t_k^2 = id``
    commuting with the differentials.  Returns ``(sub, bases)`` where
    ``bases[k]`` has as columns a basis of the saturated fixed sublattice
    ``ker(t_k - id)`` (computed from its Smith form) and ``sub`` carries the
    rewritten differentials in those bases.
    """
    t_sparse = {}
    for k in c.degrees():
        tk = as_sparse(involution[k])
        n = c.rank(k)
        if tk.shape != (n, n):
            raise NotAnInvolution(f"map at degree {k} has shape {tk.shape}, want ({n}, {n})")
        if tk.matmul(tk) != SparseIntMatrix.identity(n):
            raise NotAnInvolution(f"map at degree {k} does not square to the identity")
        t_sparse[k] = tk
    for k in range(c.lo, c.hi):
        d = c.diff(k)
        if t_sparse[k + 1].matmul(d) != d.matmul(t_sparse[k]):
            raise NotEquivariant(f"map does not commute with the differential at degree {k}")

    bases = {}
    left_inverses = {}
    for k in c.degrees():
        tk = t_sparse[k]
        delta = tk.copy()
        for i in range(c.rank(k)):
            delta.set(i, i, delta.get(i, i) - 1)
        sm = _smith(delta, transforms=True)
        bases[k] = sm.kernel_basis()
        left_inverses[k] = sm.kernel_left_inverse()

    diffs = {}
    for k in range(c.lo, c.hi):
        image = c.diff(k).matmul(bases[k])
        dk = left_inverses[k + 1].matmul(image)
        if bases[k + 1].matmul(dk) != image:
            raise NotEquivariant(
                f"differential at degree {k} does not preserve the fixed sublattice"
            )
        diffs[k] = dk
    sub = IntegerCochainComplex(
        lo=c.lo,
        hi=c.hi,
        ranks={k: bases[k].ncols for k in c.degrees()},
        diffs=diffs,
    )
    return sub.validate(), bases
