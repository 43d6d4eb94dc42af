"""Divisorial Zariski decomposition on a tower level.

All verdicts here are catalog-relative: nef, pseudoeffective and big are
certified only against the finite curve catalog of the model.  On the
supported bases every irreducible negative curve that the in-scope
divisors can meet is in the catalog, so the answers are exact for them;
the limitation is surfaced in every CLI report.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .lattice import (
    DivisorClass,
    gram_submatrix,
    intersect,
    is_negative_definite,
    solve_exact,
    SingularMatrixError,
)
from .surface import RDivisor, SurfaceModel

NOT_PSEF_MESSAGE = "not pseudoeffective against catalog, or catalog incomplete"

#: Sentinel returned by nnef_locus when the divisor is not pseudoeffective.
ENTIRE_SURFACE = "entire-surface"


class NotPseudoeffectiveError(ValueError):
    def __init__(self, detail: str = ""):
        msg = NOT_PSEF_MESSAGE + (f" ({detail})" if detail else "")
        super().__init__(msg)


@dataclass(frozen=True)
class NefCertificate:
    tested_curves: tuple[str, ...]
    violations: tuple[tuple[str, Fraction], ...]

    @property
    def nef(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class ZariskiDecomposition:
    level: int
    P: DivisorClass
    N: RDivisor
    support: tuple[str, ...]  # curves accumulated by the iteration
    gram: tuple[tuple[Fraction, ...], ...]
    nef_certificate: NefCertificate


def is_nef_against_catalog(
    model: SurfaceModel, level: int, D: DivisorClass
) -> NefCertificate:
    lvl = model.level(level)
    tested = []
    violations = []
    for c in lvl.curves:
        tested.append(c.id)
        v = intersect(D, c.cls, lvl.form)
        if v < 0:
            violations.append((c.id, v))
    return NefCertificate(tuple(tested), tuple(violations))


def zariski_decompose(
    model: SurfaceModel, level: int, D: DivisorClass
) -> ZariskiDecomposition:
    """Iterative negative-curve algorithm.

    Start with the catalog curves meeting D negatively; at each round solve
    gram(S)·x = (D·C) exactly, set N = Σ x_C·C and P = D − N, and add every
    catalog curve with P·C < 0.  The fixed point is unique, so violators are
    added all at once for determinism.
    """
    lvl = model.level(level)
    if D.lattice_id != lvl.form.lattice_id:
        raise ValueError("divisor class does not live at the requested level")
    in_s = set()
    S = []
    for c in lvl.curves:
        if intersect(D, c.cls, lvl.form) < 0:
            S.append(c)
            in_s.add(c.id)
    x: list[Fraction] = []
    while True:
        if S:
            gram = gram_submatrix([c.cls for c in S], lvl.form)
            rhs = [intersect(D, c.cls, lvl.form) for c in S]
            try:
                x = solve_exact(gram, rhs)
            except SingularMatrixError:
                raise NotPseudoeffectiveError("singular curve configuration")
            n_cls = D.scale(0)
            for c, xc in zip(S, x):
                n_cls = n_cls + c.cls.scale(xc)
        else:
            gram = []
            n_cls = D.scale(0)
        P = D - n_cls
        new = [
            c
            for c in lvl.curves
            if c.id not in in_s and intersect(P, c.cls, lvl.form) < 0
        ]
        if not new:
            break
        S.extend(new)
        in_s.update(c.id for c in new)
    if any(xc < 0 for xc in x):
        raise NotPseudoeffectiveError("negative coefficient in N")
    if S and not is_negative_definite(gram):
        raise NotPseudoeffectiveError("support Gram matrix not negative definite")
    N = RDivisor.make(level, [(c.id, xc) for c, xc in zip(S, x)])
    cert = is_nef_against_catalog(model, level, P)
    assert cert.nef
    assert all(
        intersect(P, c.cls, lvl.form) == 0 for c in S
    ), "P not orthogonal to Supp N"
    return ZariskiDecomposition(
        level,
        P,
        N,
        tuple(c.id for c in S),
        tuple(tuple(row) for row in gram),
        cert,
    )


def is_pseudoeffective(model: SurfaceModel, level: int, D: DivisorClass) -> bool:
    try:
        zariski_decompose(model, level, D)
        return True
    except NotPseudoeffectiveError:
        return False


def is_big(model: SurfaceModel, level: int, D: DivisorClass) -> bool:
    """Catalog-relative bigness: P² > 0 for the positive part."""
    zd = zariski_decompose(model, level, D)
    lvl = model.level(level)
    return intersect(zd.P, zd.P, lvl.form) > 0


def nnef_locus(model: SurfaceModel, level: int, D: DivisorClass):
    """Support of N, or the ENTIRE_SURFACE sentinel if D is not psef."""
    try:
        zd = zariski_decompose(model, level, D)
    except NotPseudoeffectiveError:
        return ENTIRE_SURFACE
    return list(zd.N.support)
