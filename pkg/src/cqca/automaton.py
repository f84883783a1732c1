"""Symplectic cellular automata as 2x2 Laurent-polynomial matrices.

A matrix t = (t1 | t2) acts on phase-space vectors by multiplication; the
columns are the images of (1, 0) (the X local rule) and (0, 1) (the Z local
rule).  Validity can be decided two equivalent ways, and ``validate`` runs
both as a consistency check:

  * column form: sigma(t1, t1) = sigma(t2, t2) = 0 and sigma(t1, t2) = 1;
  * closed form: all entries reflection invariant about a common lattice
    point a (integer coordinates) and det(t) = u^(2a).

``Cqca`` pairs a valid matrix with the two base phase exponents assigned to
the images of X and Z; the full phase function on arbitrary vectors is then
forced by the automorphism property and translation invariance, and is
computed here by accumulating the symmetric defect form gamma over an atomic
decomposition of the input vector.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .errors import DomainError, InternalError, StructureError
from .phasespace import (
    PauliProduct,
    PhaseVector,
    beta_form,
    isotropy_verdict,
    pauli_to_vector,
    symplectic_form,
    vector_to_pauli,
)
from .ring import LaurentPoly, doubled_reflection_center, gcd_extended

Exponents = tuple[int, ...]


class ScaMatrix:
    """2x2 matrix over the Laurent ring, stored row-major (t11, t12, t21, t22)."""

    __slots__ = ("t11", "t12", "t21", "t22")

    def __init__(self, t11: LaurentPoly, t12: LaurentPoly, t21: LaurentPoly, t22: LaurentPoly):
        t11._require_compatible(t12)
        t11._require_compatible(t21)
        t11._require_compatible(t22)
        object.__setattr__(self, "t11", t11)
        object.__setattr__(self, "t12", t12)
        object.__setattr__(self, "t21", t21)
        object.__setattr__(self, "t22", t22)

    def __setattr__(self, name, value):
        raise AttributeError("ScaMatrix is immutable")

    @classmethod
    def identity(cls, p: int, rank: int = 1) -> "ScaMatrix":
        one = LaurentPoly.one(p, rank)
        zero = LaurentPoly.zero(p, rank)
        return cls(one, zero, zero, one)

    @classmethod
    def from_columns(cls, col1: PhaseVector, col2: PhaseVector) -> "ScaMatrix":
        return cls(col1.plus, col2.plus, col1.minus, col2.minus)

    @property
    def p(self) -> int:
        return self.t11.p

    @property
    def rank(self) -> int:
        return self.t11.rank

    def entries(self):
        return (self.t11, self.t12, self.t21, self.t22)

    @property
    def col1(self) -> PhaseVector:
        return PhaseVector(self.t11, self.t21)

    @property
    def col2(self) -> PhaseVector:
        return PhaseVector(self.t12, self.t22)

    def det(self) -> LaurentPoly:
        return self.t11 * self.t22 - self.t12 * self.t21

    def apply(self, xi: PhaseVector) -> PhaseVector:
        return PhaseVector(
            self.t11 * xi.plus + self.t12 * xi.minus,
            self.t21 * xi.plus + self.t22 * xi.minus,
        )

    def __matmul__(self, other: "ScaMatrix") -> "ScaMatrix":
        return ScaMatrix(
            self.t11 * other.t11 + self.t12 * other.t21,
            self.t11 * other.t12 + self.t12 * other.t22,
            self.t21 * other.t11 + self.t22 * other.t21,
            self.t21 * other.t12 + self.t22 * other.t22,
        )

    def scaled(self, f: LaurentPoly) -> "ScaMatrix":
        return ScaMatrix(f * self.t11, f * self.t12, f * self.t21, f * self.t22)

    def is_constant(self) -> bool:
        return all(e.is_constant() for e in self.entries())

    def constant_values(self) -> tuple[tuple[int, int], tuple[int, int]]:
        if not self.is_constant():
            raise DomainError("matrix is not constant")
        return (
            (self.t11.constant_value(), self.t12.constant_value()),
            (self.t21.constant_value(), self.t22.constant_value()),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, ScaMatrix):
            return NotImplemented
        return self.entries() == other.entries()

    def __hash__(self) -> int:
        return hash(self.entries())

    def __str__(self) -> str:
        return f"[[{self.t11}, {self.t12}], [{self.t21}, {self.t22}]]"

    def __repr__(self) -> str:
        return f"ScaMatrix(p={self.p}, {self})"


@dataclass(frozen=True)
class SymplecticReport:
    """Validation outcome with per-condition detail."""

    ok: bool
    center: Optional[Exponents]
    det: LaurentPoly
    failure: Optional[str]
    conditions: dict


def _matrix_doubled_center(t: ScaMatrix) -> Optional[Exponents]:
    """Common doubled reflection center of all nonzero entries, or None."""
    cand: Optional[Exponents] = None
    for entry in t.entries():
        if entry.is_zero():
            continue
        c = doubled_reflection_center(entry)
        if c is None:
            return None
        if cand is None:
            cand = c
        elif c != cand:
            return None
    return cand


def validate(t: ScaMatrix) -> SymplecticReport:
    """Decide validity via both characterizations and report per-condition detail."""
    one = LaurentPoly.one(t.p, t.rank)
    col1, col2 = t.col1, t.col2
    c1 = symplectic_form(col1, col1).is_zero()
    c2 = symplectic_form(col2, col2).is_zero()
    pairing = symplectic_form(col1, col2) == one
    columns_ok = c1 and c2 and pairing

    det = t.det()
    two_a = _matrix_doubled_center(t)
    refl_ok = two_a is not None and all(x % 2 == 0 for x in two_a)
    det_ok = False
    center: Optional[Exponents] = None
    if refl_ok:
        center = tuple(x // 2 for x in two_a)
        det_ok = det == LaurentPoly.monomial(two_a, t.p, t.rank, 1)
    closed_ok = refl_ok and det_ok

    if closed_ok != columns_ok:
        raise InternalError(
            "column-form and reflection/determinant validity tests disagree"
        )

    conditions = {
        "entries_reflection_invariant": refl_ok,
        "determinant_is_center_monomial": det_ok,
        "col1_isotropic": c1,
        "col2_isotropic": c2,
        "pairing_is_one": pairing,
    }
    failure = None
    if not columns_ok:
        center = None
        if not refl_ok:
            failure = "entries are not reflection invariant about a common lattice point"
        elif not det_ok:
            failure = f"determinant {det} is not the center monomial u^(2a)"
        elif not c1:
            failure = "first column is not isotropic"
        elif not c2:
            failure = "second column is not isotropic"
        else:
            failure = "columns do not pair to 1"
    return SymplecticReport(columns_ok, center, det, failure, conditions)


def _require_valid(t: ScaMatrix) -> SymplecticReport:
    rep = validate(t)
    if not rep.ok:
        raise DomainError(f"matrix is not a symplectic cellular automaton: {rep.failure}")
    return rep


def center(t: ScaMatrix) -> ScaMatrix:
    """Shift a valid automaton by u^(-a) so it is centered at the origin."""
    rep = _require_valid(t)
    a = rep.center
    if all(x == 0 for x in a):
        return t
    mono = LaurentPoly.monomial(tuple(-x for x in a), t.p, t.rank, 1)
    return t.scaled(mono)


def compose(t: ScaMatrix, s: ScaMatrix) -> ScaMatrix:
    return t @ s


def inverse(t: ScaMatrix) -> ScaMatrix:
    """Adjugate divided by the determinant monomial; exact for valid automata."""
    rep = _require_valid(t)
    two_a = tuple(2 * x for x in rep.center)
    mono = LaurentPoly.monomial(tuple(-x for x in two_a), t.p, t.rank, 1)
    return ScaMatrix(t.t22, -t.t12, -t.t21, t.t11).scaled(mono)


def restrict(t: ScaMatrix, k: int) -> ScaMatrix:
    """Entry-wise evaluation u_l = 1 for l != k, yielding a 1D automaton."""
    _require_valid(t)
    out = ScaMatrix(*(e.restrict_direction(k) for e in t.entries()))
    _require_valid(out)
    return out


def apply_vector(t: ScaMatrix, xi: PhaseVector) -> PhaseVector:
    return t.apply(xi)


def neighborhood(t: ScaMatrix) -> tuple[Exponents, Exponents]:
    """Smallest box (per-coordinate min, max) containing all entry exponents."""
    _require_valid(t)
    exps = [e for entry in t.entries() for e in entry.support()]
    lo = tuple(min(e[i] for e in exps) for i in range(t.rank))
    hi = tuple(max(e[i] for e in exps) for i in range(t.rank))
    return lo, hi


# -- phase tracking --------------------------------------------------------------


class Cqca:
    """A symplectic matrix together with the phases of the X and Z local rules.

    For p = 2 phases are exponents of i (mod 4) and the base phases are
    constrained mod 2 by the requirement that squares map consistently; for
    odd p they are exponents of omega_p and free.
    """

    __slots__ = ("matrix", "base_phase_x", "base_phase_z")

    def __init__(self, matrix: ScaMatrix, base_phase_x: int | None = None,
                 base_phase_z: int | None = None):
        _require_valid(matrix)
        p = matrix.p
        mod = 4 if p == 2 else p
        req_x = self._required_parity(matrix.col1) if p == 2 else 0
        req_z = self._required_parity(matrix.col2) if p == 2 else 0
        bx = req_x if base_phase_x is None else int(base_phase_x) % mod
        bz = req_z if base_phase_z is None else int(base_phase_z) % mod
        if p == 2:
            if bx % 2 != req_x:
                raise DomainError(
                    f"base phase for X must be congruent to {req_x} mod 2, got {bx}"
                )
            if bz % 2 != req_z:
                raise DomainError(
                    f"base phase for Z must be congruent to {req_z} mod 2, got {bz}"
                )
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "base_phase_x", bx)
        object.__setattr__(self, "base_phase_z", bz)

    def __setattr__(self, name, value):
        raise AttributeError("Cqca is immutable")

    @staticmethod
    def _required_parity(col: PhaseVector) -> int:
        return beta_form(col, col) % 2

    @property
    def p(self) -> int:
        return self.matrix.p

    @property
    def rank(self) -> int:
        return self.matrix.rank

    @property
    def phase_modulus(self) -> int:
        return 4 if self.p == 2 else self.p

    def _basis_vector(self, comp: int) -> PhaseVector:
        one = LaurentPoly.one(self.p, self.rank)
        zero = LaurentPoly.zero(self.p, self.rank)
        return PhaseVector(one, zero) if comp == 0 else PhaseVector(zero, one)

    def phase_function(self, xi: PhaseVector) -> int:
        """Phase exponent of the image of the plain product with vector xi.

        The defect form gamma(a, b) = unit * (beta(t b, t a) - beta(b, a)) is
        symmetric because the matrix preserves the symplectic form; summing it
        over an atomic decomposition of xi solves the product compatibility
        relation exactly, with the base phases fixing the linear freedom.
        """
        if xi.p != self.p or xi.rank != self.rank:
            raise StructureError("vector does not match the automaton ring")
        p = self.p
        unit = 2 if p == 2 else 1
        mod = self.phase_modulus
        cols = (self.matrix.col1, self.matrix.col2)
        bases = (self.base_phase_x, self.base_phase_z)
        partial = PhaseVector.zero(p, self.rank)
        t_partial = PhaseVector.zero(p, self.rank)
        phi = 0
        sites = sorted(set(xi.plus.terms) | set(xi.minus.terms))
        for site in sites:
            for comp, poly in ((0, xi.plus), (1, xi.minus)):
                count = poly.terms.get(site, 0)
                if not count:
                    continue
                atom = PhaseVector(
                    LaurentPoly.monomial(site, p, self.rank) if comp == 0
                    else LaurentPoly.zero(p, self.rank),
                    LaurentPoly.monomial(site, p, self.rank) if comp == 1
                    else LaurentPoly.zero(p, self.rank),
                )
                t_atom = cols[comp].shift(site)
                for _ in range(count):
                    gamma = (
                        unit * (beta_form(t_atom, t_partial) - beta_form(atom, partial))
                    ) % mod
                    phi = (phi + bases[comp] + gamma) % mod
                    partial = partial + atom
                    t_partial = t_partial + t_atom
        return phi

    def apply_pauli(self, a: PauliProduct) -> PauliProduct:
        """Full signed image: vector part through the matrix, phase through phi."""
        if a.p != self.p or a.rank != self.rank:
            raise StructureError("Pauli product does not match the automaton")
        xi = pauli_to_vector(a)
        phi = self.phase_function(xi)
        image = vector_to_pauli(self.matrix.apply(xi))
        phase = (a.phase_exp + phi) % self.phase_modulus
        return PauliProduct(self.p, image.sites, phase, self.rank)

    def compose(self, other: "Cqca") -> "Cqca":
        """The automaton applying ``other`` first, then ``self``."""
        if self.p != other.p or self.rank != other.rank:
            raise StructureError("cannot compose automata over different rings")
        m = self.matrix @ other.matrix
        mod = self.phase_modulus
        bases = []
        for comp in (0, 1):
            e = self._basis_vector(comp)
            bases.append(
                (other.phase_function(e) + self.phase_function(other.matrix.apply(e))) % mod
            )
        return Cqca(m, bases[0], bases[1])

    def inverse(self) -> "Cqca":
        m = inverse(self.matrix)
        mod = self.phase_modulus
        bases = []
        for comp in (0, 1):
            e = self._basis_vector(comp)
            bases.append((-self.phase_function(m.apply(e))) % mod)
        return Cqca(m, bases[0], bases[1])

    def center(self) -> "Cqca":
        return Cqca(center(self.matrix), self.base_phase_x, self.base_phase_z)

    # -- serialization ------------------------------------------------------

    def to_doc(self) -> dict:
        return {
            "p": self.p,
            "s": self.rank,
            "entries": [
                [str(self.matrix.t11), str(self.matrix.t12)],
                [str(self.matrix.t21), str(self.matrix.t22)],
            ],
            "base_phase_X": self.base_phase_x,
            "base_phase_Z": self.base_phase_z,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_doc(), sort_keys=False)

    @classmethod
    def from_doc(cls, doc: dict) -> "Cqca":
        try:
            p = int(doc["p"])
            s = int(doc.get("s", 1))
            rows = doc["entries"]
            e = [
                LaurentPoly.parse(str(rows[i][j]), p, s)
                for i in range(2)
                for j in range(2)
            ]
        except (KeyError, IndexError, TypeError) as exc:
            raise DomainError(f"malformed automaton document: {exc}") from exc
        m = ScaMatrix(e[0], e[1], e[2], e[3])
        return cls(m, doc.get("base_phase_X"), doc.get("base_phase_Z"))

    @classmethod
    def from_json(cls, text: str) -> "Cqca":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DomainError(f"invalid JSON: {exc}") from exc
        return cls.from_doc(doc)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cqca):
            return NotImplemented
        return (
            self.matrix == other.matrix
            and self.base_phase_x == other.base_phase_x
            and self.base_phase_z == other.base_phase_z
        )

    def __repr__(self) -> str:
        return (
            f"Cqca({self.matrix}, base_phase_x={self.base_phase_x}, "
            f"base_phase_z={self.base_phase_z})"
        )


def phase_function(cqca: Cqca, xi: PhaseVector) -> int:
    return cqca.phase_function(xi)


def apply_pauli(cqca: Cqca, a: PauliProduct) -> PauliProduct:
    return cqca.apply_pauli(a)


# -- constructions ----------------------------------------------------------------


def complete_generator(xi: PhaseVector) -> ScaMatrix:
    """Extend a maximal generator to a full automaton with second column xi.

    A Bezout pair for (plus, minus) gives a partner column with pairing 1; a
    correction multiple of xi, built from the strictly positive half of the
    partner's self-pairing, makes the partner isotropic without disturbing
    the pairing.
    """
    if xi.rank != 1:
        raise DomainError("generator completion is defined for rank 1 only")
    verdict = isotropy_verdict(xi)
    if not verdict.isotropic:
        raise DomainError(
            "cannot complete: translates of the vector do not commute (sigma(xi, xi) != 0)"
        )
    if not verdict.maximal:
        if verdict.common_divisor is not None:
            raise DomainError(
                "cannot complete: components share the noninvertible common divisor "
                f"{verdict.common_divisor}"
            )
        raise DomainError("cannot complete: vector is not reflection invariant")
    p = xi.p
    d, b0, b1 = gcd_extended(xi.plus, xi.minus)
    dinv = d.inverse_unit()
    f_plus, f_minus = dinv * b0, dinv * b1
    eta = PhaseVector(f_minus.reflect(), -(f_plus.reflect()))
    h = symplectic_form(eta, eta)
    corr = LaurentPoly(p, 1, {e: (-c) % p for e, c in h.terms.items() if e[0] > 0})
    eta = eta + xi.scale(corr)
    one = LaurentPoly.one(p, 1)
    if not symplectic_form(eta, eta).is_zero() or symplectic_form(eta, xi) != one:
        raise InternalError("completion produced a non-symplectic column pair")
    t = ScaMatrix.from_columns(eta, xi)
    _require_valid(t)
    return t


def trivial_construction(f: LaurentPoly, h: LaurentPoly) -> ScaMatrix:
    """The automaton [[f, f*h - 1], [1, h]] for origin-symmetric f and h."""
    f._require_compatible(h)
    if f != f.reflect():
        raise DomainError(f"{f} is not reflection invariant about the origin")
    if h != h.reflect():
        raise DomainError(f"{h} is not reflection invariant about the origin")
    one = LaurentPoly.one(f.p, f.rank)
    t = ScaMatrix(f, f * h - one, one, h)
    _require_valid(t)
    return t
