"""Independent closed-form references the tests freeze expected values from.

Everything here is elementary integer arithmetic on one-dimensional cochain
groups — deliberately sharing no code with the package under test.  Groups
are reported as ``(rank, torsion_tuple)`` pairs.

Two families:

* cohomology of the two-element group acting on cyclic coefficient modules,
  via the 2-periodic free resolution (differentials alternate between
  multiplication by ``sign - 1`` and ``sign + 1``);

* cellular cochain complexes of quotients of free actions — the point, the
  circle with a monodromy-twisted local system, and real projective space
  with twisted/untwisted integer coefficients (differentials alternate
  between 0 and multiplication by 2).
"""

from fractions import Fraction


def _one_by_one_cohomology(d_prev: int, d_here: int):
    """(rank, torsion) of ker(d_here)/im(d_prev) inside a single Z summand."""
    if d_here != 0:
        # kernel is 0
        return (0, ())
    if d_prev == 0:
        return (1, ())
    a = abs(d_prev)
    return (0, ()) if a == 1 else (0, (a,))


# ---------------------------------------------------------------------------
# 2-periodic resolution of the two-element group
# ---------------------------------------------------------------------------


def _periodic_maps(sign: int, k: int) -> int:
    """Multiplication constant of the k-th differential: sign-1, sign+1, ..."""
    return (sign - 1) if k % 2 == 0 else (sign + 1)


def cyclic_two_integer(sign: int, k: int):
    """H^k of the two-element group with Z coefficients, generator acting
    by ``sign``; rank/torsion pair."""
    if k < 0:
        return (0, ())
    d_here = _periodic_maps(sign, k)
    d_prev = _periodic_maps(sign, k - 1) if k > 0 else 0
    return _one_by_one_cohomology(d_prev, d_here)


def cyclic_two_mod(sign: int, modulus: int, k: int) -> int:
    """Order of H^k with Z/modulus coefficients (always cyclic here)."""
    from math import gcd

    d_here = _periodic_maps(sign, k) % modulus
    d_prev = (_periodic_maps(sign, k - 1) % modulus) if k > 0 else 0
    ker = gcd(d_here, modulus)
    im = modulus // gcd(d_prev, modulus) if k > 0 else 1
    assert ker % im == 0
    return ker // im


def cyclic_two_circle_quotient(sign: int, k: int) -> int:
    """Order of the reduced (finite) part of H^k with rationals-mod-integers
    coefficients twisted by ``sign``.

    Multiplication by a nonzero integer is surjective on Q/Z, so whenever
    the previous differential is nonzero the quotient is divisible-by-zero:
    only kernels of nonzero maps survive reduction.
    """
    d_here = _periodic_maps(sign, k)
    d_prev = _periodic_maps(sign, k - 1) if k > 0 else None
    if d_here != 0 and (k == 0 or d_prev == 0):
        return abs(d_here)
    return 1


# ---------------------------------------------------------------------------
# Cellular quotient complexes for the free catalog actions
# ---------------------------------------------------------------------------


def quotient_point(k: int):
    """Free two-point orbit: the quotient is a point."""
    return (1, ()) if k == 0 else (0, ())


def circle_monodromy(sign: int, k: int):
    """Circle quotient of the free circle action, local system with
    monodromy ``sign`` around the loop: one 0-cell, one 1-cell,
    differential multiplication by sign - 1."""
    d0 = sign - 1
    if k == 0:
        return _one_by_one_cohomology(0, d0)
    if k == 1:
        return _one_by_one_cohomology(d0, 0)
    return (0, ())


def projective_space(n: int, twisted: bool, k: int):
    """Real projective n-space with integer coefficients, optionally twisted
    by the orientation double cover; one cell per dimension 0..n.

    Untwisted cochain differentials are 0, 2, 0, ... and the twisted ones
    are 2, 0, 2, ... (top differential absent).
    """
    if k < 0 or k > n:
        return (0, ())

    def d(i):  # differential leaving degree i
        if i < 0 or i >= n:
            return 0
        even = i % 2 == 0
        return 2 if (even == twisted) else 0

    return _one_by_one_cohomology(d(k - 1), d(k))


def sphere_quotient(n: int, sign: int, k: int):
    """Equivariant cohomology of the antipodal n-sphere = cohomology of
    projective n-space, twisted exactly when the coefficient sign is -1;
    n = 0 degenerates to the two-point orbit."""
    if n == 0:
        return quotient_point(k)
    return projective_space(n, sign == -1, k)


# ---------------------------------------------------------------------------
# mod-1 helper shared by flat-cocycle tests
# ---------------------------------------------------------------------------


def frac_mod1(x) -> Fraction:
    f = Fraction(x)
    return f - (f.numerator // f.denominator)
