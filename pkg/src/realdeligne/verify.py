"""Self-check suites run over every catalog space.

Each suite pits two independently implemented routes to the same quantity
against each other and collects a failure record for every disagreement.
An empty list means the suite passed.
"""

from __future__ import annotations

import numpy as np

from . import catalog
from .cechengine import (
    CoefficientComplex,
    build_full_complex,
    equivariant_cohomology,
    hypercohomology,
)
from .coverdata import IQ, IZ, CoefficientSystem, Z_TRIVIAL
from .deligne import deligne_descriptor, quotient_coefficients_cohomology
from .exactalg import kernel_basis, smith_normal_form

SUITES = ("snf", "les", "refinement", "bockstein")

Q_TRIVIAL = CoefficientSystem.rationals(+1)


def _spaces():
    return [(catalog.entry_label(e), e.build()) for e in catalog.ENTRIES]


def _record(suite, space, check, detail):
    return {"suite": suite, "space": space, "check": check, "detail": detail}


def _check_smith(out, m, space, check):
    m = np.asarray(m, dtype=object)
    d, u, v = smith_normal_form(m)
    if not np.array_equal(u @ m @ v, d):
        out.append(_record("snf", space, check, "u @ m @ v != d"))
    diag = [d[i, i] for i in range(min(d.shape))]
    chain = [x for x in diag if x != 0]
    if any(x < 0 for x in diag) or any(
        b % a for a, b in zip(chain, chain[1:])
    ):
        out.append(_record("snf", space, check, f"bad diagonal {diag}"))
    if any(diag[i] == 0 and diag[i + 1] != 0 for i in range(len(diag) - 1)):
        out.append(_record("snf", space, check, f"zeros precede units in {diag}"))
    k = kernel_basis(m)
    if k.size and np.any(m @ k):
        out.append(_record("snf", space, check, "kernel basis not annihilated"))


def suite_snf():
    """Smith-form postconditions on random matrices and real differentials."""
    out = []
    rng = np.random.RandomState(20240917)
    for case in range(25):
        shape = rng.randint(1, 8, size=2)
        m = rng.randint(-4, 5, size=tuple(shape))
        _check_smith(out, m, "random", f"case {case} shape {tuple(shape)}")
    for label, cover in _spaces():
        full = build_full_complex(cover, 2)
        for k in (0, 1):
            _check_smith(out, full.diff(k).to_dense(), label, f"differential d_{k}")
    return out


def suite_les():
    """Rank accounting across the coefficient sequences.

    Free ranks must agree between the integral computation and the rational
    one (two unrelated code paths), and mod-n cohomology computed through
    lifted torsion invariants must match the two-term total complex of
    multiplication by n.
    """
    out = []
    n_deg = 4
    for label, cover in _spaces():
        for sign_name, integral, rational in (
            ("-1", IZ, IQ),
            ("+1", Z_TRIVIAL, Q_TRIVIAL),
        ):
            for k in range(n_deg):
                gz = equivariant_cohomology(cover, integral, k, n_deg)
                gq = equivariant_cohomology(cover, rational, k, n_deg)
                if gz.rank != gq.rank:
                    out.append(
                        _record(
                            "les",
                            label,
                            f"rank H^{k} sign {sign_name}",
                            f"integral {gz.rank} vs rational {gq.rank}",
                        )
                    )
                if gq.torsion:
                    out.append(
                        _record(
                            "les",
                            label,
                            f"H^{k} rational sign {sign_name}",
                            f"torsion {gq.torsion} in a rational group",
                        )
                    )
        for n in (2, 3):
            cone = CoefficientComplex((IZ, IZ), (n,))
            for k in range(3):
                direct = equivariant_cohomology(
                    cover, CoefficientSystem.integers_mod(n, -1), k, k + 2
                )
                via_cone = hypercohomology(cover, cone, k + 1, k + 2)
                if direct != via_cone:
                    out.append(
                        _record(
                            "les",
                            label,
                            f"H^{k} mod {n}",
                            f"direct {direct} vs cone {via_cone}",
                        )
                    )
    return out


def suite_refinement():
    """Coarse and fine covers of the same space must agree degreewise."""
    out = []
    for coarse_name, fine_name in catalog.REFINEMENT_PAIRS:
        coarse = catalog.build(coarse_name)
        fine = catalog.build(fine_name)
        for coeff in (IZ, Z_TRIVIAL, IQ):
            for k in range(3):
                a = equivariant_cohomology(coarse, coeff, k, 4)
                b = equivariant_cohomology(fine, coeff, k, 4)
                if a != b:
                    out.append(
                        _record(
                            "refinement",
                            f"{coarse_name}/{fine_name}",
                            f"H^{k} coeff {coeff}",
                            f"coarse {a} vs fine {b}",
                        )
                    )
        for p, q in ((2, 2), (3, 2)):
            da = deligne_descriptor(coarse, p, q).to_record()
            db = deligne_descriptor(fine, p, q).to_record()
            da.pop("space")
            db.pop("space")
            if da != db:
                out.append(
                    _record(
                        "refinement",
                        f"{coarse_name}/{fine_name}",
                        f"descriptor ({p},{q})",
                        f"coarse {da} vs fine {db}",
                    )
                )
    return out


def suite_bockstein():
    """Connecting-map assembly of circle coefficients against the total
    complex of the inclusion of integers into rationals."""
    out = []
    incl = CoefficientComplex((IZ, IQ), ("incl",))
    for label, cover in _spaces():
        for k in range(4):
            assembled = quotient_coefficients_cohomology(cover, k, k + 3)
            total = hypercohomology(cover, incl, k + 1, k + 3)
            if total.rank != 0:
                out.append(
                    _record(
                        "bockstein",
                        label,
                        f"reduced rank at {k + 1}",
                        f"expected 0, got {total.rank}",
                    )
                )
            if tuple(assembled.torsion) != tuple(total.torsion):
                out.append(
                    _record(
                        "bockstein",
                        label,
                        f"torsion at H^{k}",
                        f"assembled {assembled.torsion} vs total {total.torsion}",
                    )
                )
    return out


def run_suite(name: str):
    """Run one named suite (or ``all``); returns the failure records."""
    table = {
        "snf": suite_snf,
        "les": suite_les,
        "refinement": suite_refinement,
        "bockstein": suite_bockstein,
    }
    if name == "all":
        failures = []
        for key in SUITES:
            failures.extend(table[key]())
        return failures
    if name not in table:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITES + ('all',)}")
    return table[name]()
