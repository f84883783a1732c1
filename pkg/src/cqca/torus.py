"""Periodic boundary conditions: the quotient ring F_p[Z^s / N Z^s].

A torus is the quotient of the lattice by s independent integer vectors.
Smith normal form of the basis matrix gives canonical coordinates: group
elements are tuples c with 0 <= c_i < d_i, and two exponent vectors are
identified exactly when their canonical forms agree.  The group algebra
inherits product, reflection (negation of exponents) and the symplectic
form from the infinite lattice, but has zero divisors and non-monomial
units, so all structural decisions go through finite F_p linear algebra:

  * invertibility of f is a linear solve against the multiplication matrix;
  * a generator vector is maximal exactly when its |sites| translates span
    an |sites|-dimensional (isotropic) subspace of F_p^(2 |sites|);
  * symplectic completion solves for a dual vector with unit pairing and
    then repairs its self-pairing with a multiple of the generator.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import _gf
from .errors import DomainError, GuardrailError, InternalError, StructureError
from .phasespace import PauliProduct
from .ring import LaurentPoly

DEFAULT_MAX_SITES = 4096


def _identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(mat: Sequence[Sequence[int]]):
    """U @ mat @ V = D with U, V unimodular and D diagonal, d1 | d2 | ...

    Returns (U, diag, V) with diag the positive diagonal entries.
    """
    n = len(mat)
    a = [[int(x) for x in row] for row in mat]
    if any(len(row) != n for row in a):
        raise DomainError("basis matrix must be square")
    u = _identity(n)
    v = _identity(n)

    def row_sub(i, j, q):
        a[i] = [x - q * y for x, y in zip(a[i], a[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def col_sub(i, j, q):
        for r in range(n):
            a[r][i] -= q * a[r][j]
            v[r][i] -= q * v[r][j]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def col_swap(i, j):
        for r in range(n):
            a[r][i], a[r][j] = a[r][j], a[r][i]
            v[r][i], v[r][j] = v[r][j], v[r][i]

    for t in range(n):
        while True:
            best = None
            for i in range(t, n):
                for j in range(t, n):
                    if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            if best != (t, t):
                row_swap(t, best[0])
                col_swap(t, best[1])
            dirty = False
            for i in range(t + 1, n):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    row_sub(i, t, q)
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    col_sub(j, t, q)
                    if a[t][j]:
                        dirty = True
            if dirty:
                continue
            bad = None
            for i in range(t + 1, n):
                for j in range(t + 1, n):
                    if a[i][j] % a[t][t]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_sub(t, bad, -1)
        if t < n and a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    diag = [a[i][i] for i in range(n)]
    return u, diag, v


def _int_inverse(mat: Sequence[Sequence[int]]) -> list[list[int]]:
    """Exact inverse of a unimodular integer matrix."""
    n = len(mat)
    aug = [[Fraction(mat[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
           for i in range(n)]
    for c in range(n):
        piv = next(r for r in range(c, n) if aug[r][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    out = [[aug[i][n + j] for j in range(n)] for i in range(n)]
    if any(x.denominator != 1 for row in out for x in row):
        raise InternalError("matrix is not unimodular")
    return [[int(x) for x in row] for row in out]


class TorusLattice:
    """Quotient Z^s / (N1, ..., Ns) in Smith canonical coordinates."""

    __slots__ = ("s", "basis", "_u", "diag", "sites", "_uinv", "_strides", "_elements")

    def __init__(self, basis: Sequence[Sequence[int]]):
        vectors = [tuple(int(x) for x in v) for v in basis]
        s = len(vectors)
        if s < 1 or any(len(v) != s for v in vectors):
            raise DomainError("torus basis must be s vectors of length s")
        # column j of the basis matrix is the j-th vector
        b = [[vectors[j][i] for j in range(s)] for i in range(s)]
        u, diag, _ = smith_normal_form(b)
        if any(d == 0 for d in diag):
            raise DomainError("torus basis vectors are not linearly independent")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "basis", tuple(vectors))
        object.__setattr__(self, "_u", u)
        object.__setattr__(self, "diag", tuple(diag))
        object.__setattr__(self, "sites", int(np.prod(diag)))
        object.__setattr__(self, "_uinv", _int_inverse(u))
        strides = []
        acc = 1
        for d in reversed(diag):
            strides.append(acc)
            acc *= d
        object.__setattr__(self, "_strides", tuple(reversed(strides)))
        object.__setattr__(
            self, "_elements", tuple(itertools.product(*[range(d) for d in diag]))
        )

    def __setattr__(self, name, value):
        raise AttributeError("TorusLattice is immutable")

    @classmethod
    def line(cls, n: int) -> "TorusLattice":
        return cls([[n]])

    def canonical(self, exps) -> tuple[int, ...]:
        """Canonical coordinates; equal iff the exponents differ by a basis combination."""
        if isinstance(exps, int):
            exps = (exps,)
        exps = tuple(int(x) for x in exps)
        if len(exps) != self.s:
            raise StructureError(f"exponent {exps} does not match rank {self.s}")
        return tuple(
            sum(self._u[i][j] * exps[j] for j in range(self.s)) % self.diag[i]
            for i in range(self.s)
        )

    def representative(self, canon: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(
            sum(self._uinv[i][j] * canon[j] for j in range(self.s)) for i in range(self.s)
        )

    def elements(self) -> tuple[tuple[int, ...], ...]:
        return self._elements

    def index(self, canon: tuple[int, ...]) -> int:
        return sum(c * st for c, st in zip(canon, self._strides))

    def add(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        return tuple((x + y) % d for x, y, d in zip(a, b, self.diag))

    def neg(self, a: tuple[int, ...]) -> tuple[int, ...]:
        return tuple((-x) % d for x, d in zip(a, self.diag))

    def __eq__(self, other) -> bool:
        if not isinstance(other, TorusLattice):
            return NotImplemented
        return self.basis == other.basis

    def __hash__(self) -> int:
        return hash(self.basis)

    def __repr__(self) -> str:
        if self.s == 1:
            return f"TorusLattice(N={self.basis[0][0]})"
        return f"TorusLattice(basis={list(map(list, self.basis))})"


def canonicalize(lattice: TorusLattice, exps) -> tuple[int, ...]:
    return lattice.canonical(exps)


class TorusPoly:
    """Element of the group algebra F_p[Z^s / N Z^s] in canonical coordinates."""

    __slots__ = ("p", "lattice", "terms")

    def __init__(self, p: int, lattice: TorusLattice, terms=None):
        LaurentPoly.zero(p, lattice.s)  # validates primality of p
        clean: dict[tuple[int, ...], int] = {}
        if terms:
            for raw, c in terms.items():
                key = lattice.canonical(raw)
                c = int(c) % p
                tot = (clean.get(key, 0) + c) % p
                if tot:
                    clean[key] = tot
                elif key in clean:
                    del clean[key]
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "lattice", lattice)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("TorusPoly is immutable")

    @classmethod
    def zero(cls, p: int, lattice: TorusLattice) -> "TorusPoly":
        return cls(p, lattice, {})

    @classmethod
    def one(cls, p: int, lattice: TorusLattice) -> "TorusPoly":
        return cls(p, lattice, {(0,) * lattice.s: 1})

    @classmethod
    def from_laurent(cls, f: LaurentPoly, lattice: TorusLattice) -> "TorusPoly":
        if f.rank != lattice.s:
            raise StructureError(f"rank {f.rank} polynomial on a rank-{lattice.s} torus")
        return cls(f.p, lattice, dict(f.terms))

    @classmethod
    def parse(cls, text: str, p: int, lattice: TorusLattice) -> "TorusPoly":
        return cls.from_laurent(LaurentPoly.parse(text, p, lattice.s), lattice)

    def _require_compatible(self, other: "TorusPoly") -> None:
        if self.p != other.p or self.lattice != other.lattice:
            raise StructureError("operands live on different tori")

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, exps) -> int:
        return self.terms.get(self.lattice.canonical(exps), 0)

    def __add__(self, other: "TorusPoly") -> "TorusPoly":
        self._require_compatible(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            tot = (out.get(e, 0) + c) % self.p
            if tot:
                out[e] = tot
            elif e in out:
                del out[e]
        res = TorusPoly(self.p, self.lattice)
        object.__setattr__(res, "terms", out)
        return res

    def __neg__(self) -> "TorusPoly":
        res = TorusPoly(self.p, self.lattice)
        object.__setattr__(res, "terms", {e: (-c) % self.p for e, c in self.terms.items()})
        return res

    def __sub__(self, other: "TorusPoly") -> "TorusPoly":
        return self + (-other)

    def __mul__(self, other: "TorusPoly") -> "TorusPoly":
        self._require_compatible(other)
        lat = self.lattice
        out: dict[tuple[int, ...], int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = lat.add(e1, e2)
                tot = (out.get(e, 0) + c1 * c2) % self.p
                if tot:
                    out[e] = tot
                elif e in out:
                    del out[e]
        res = TorusPoly(self.p, lat)
        object.__setattr__(res, "terms", out)
        return res

    def scaled(self, c: int) -> "TorusPoly":
        c = c % self.p
        res = TorusPoly(self.p, self.lattice)
        object.__setattr__(
            res, "terms",
            {e: (c * v) % self.p for e, v in self.terms.items() if (c * v) % self.p},
        )
        return res

    def reflect(self) -> "TorusPoly":
        lat = self.lattice
        res = TorusPoly(self.p, lat)
        object.__setattr__(res, "terms", {lat.neg(e): c for e, c in self.terms.items()})
        return res

    def translate(self, g) -> "TorusPoly":
        """Multiplication by the monomial u^g."""
        lat = self.lattice
        g = lat.canonical(g)
        res = TorusPoly(self.p, lat)
        object.__setattr__(res, "terms", {lat.add(e, g): c for e, c in self.terms.items()})
        return res

    def __eq__(self, other) -> bool:
        if not isinstance(other, TorusPoly):
            return NotImplemented
        return self.p == other.p and self.lattice == other.lattice and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.p, self.lattice, tuple(sorted(self.terms.items()))))

    def __str__(self) -> str:
        shown = LaurentPoly(
            self.p, self.lattice.s,
            {self.lattice.representative(e): c for e, c in self.terms.items()},
        )
        return str(shown)

    def __repr__(self) -> str:
        return f"TorusPoly(p={self.p}, {self.lattice!r}, '{self}')"


def torus_add(f: TorusPoly, g: TorusPoly) -> TorusPoly:
    return f + g


def torus_mul(f: TorusPoly, g: TorusPoly) -> TorusPoly:
    return f * g


def torus_reflect(f: TorusPoly) -> TorusPoly:
    return f.reflect()


class TorusVector:
    """Pair (plus, minus) of torus polynomials."""

    __slots__ = ("plus", "minus")

    def __init__(self, plus: TorusPoly, minus: TorusPoly):
        plus._require_compatible(minus)
        object.__setattr__(self, "plus", plus)
        object.__setattr__(self, "minus", minus)

    def __setattr__(self, name, value):
        raise AttributeError("TorusVector is immutable")

    @property
    def p(self) -> int:
        return self.plus.p

    @property
    def lattice(self) -> TorusLattice:
        return self.plus.lattice

    def is_zero(self) -> bool:
        return self.plus.is_zero() and self.minus.is_zero()

    def __add__(self, other: "TorusVector") -> "TorusVector":
        return TorusVector(self.plus + other.plus, self.minus + other.minus)

    def scale(self, f: TorusPoly) -> "TorusVector":
        return TorusVector(f * self.plus, f * self.minus)

    def translate(self, g) -> "TorusVector":
        return TorusVector(self.plus.translate(g), self.minus.translate(g))

    def __eq__(self, other) -> bool:
        if not isinstance(other, TorusVector):
            return NotImplemented
        return self.plus == other.plus and self.minus == other.minus

    def __hash__(self) -> int:
        return hash((self.plus, self.minus))

    def __str__(self) -> str:
        return f"({self.plus}, {self.minus})"


def torus_symplectic(xi: TorusVector, eta: TorusVector) -> TorusPoly:
    return xi.plus.reflect() * eta.minus - xi.minus.reflect() * eta.plus


class TorusSca:
    """2x2 matrix over the torus ring; validity drops all locality conditions."""

    __slots__ = ("t11", "t12", "t21", "t22")

    def __init__(self, t11: TorusPoly, t12: TorusPoly, t21: TorusPoly, t22: TorusPoly):
        t11._require_compatible(t12)
        t11._require_compatible(t21)
        t11._require_compatible(t22)
        object.__setattr__(self, "t11", t11)
        object.__setattr__(self, "t12", t12)
        object.__setattr__(self, "t21", t21)
        object.__setattr__(self, "t22", t22)

    def __setattr__(self, name, value):
        raise AttributeError("TorusSca is immutable")

    @classmethod
    def from_columns(cls, col1: TorusVector, col2: TorusVector) -> "TorusSca":
        return cls(col1.plus, col2.plus, col1.minus, col2.minus)

    @property
    def p(self) -> int:
        return self.t11.p

    @property
    def lattice(self) -> TorusLattice:
        return self.t11.lattice

    @property
    def col1(self) -> TorusVector:
        return TorusVector(self.t11, self.t21)

    @property
    def col2(self) -> TorusVector:
        return TorusVector(self.t12, self.t22)

    def apply(self, xi: TorusVector) -> TorusVector:
        return TorusVector(
            self.t11 * xi.plus + self.t12 * xi.minus,
            self.t21 * xi.plus + self.t22 * xi.minus,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, TorusSca):
            return NotImplemented
        return (self.t11, self.t12, self.t21, self.t22) == (
            other.t11, other.t12, other.t21, other.t22,
        )

    def __str__(self) -> str:
        return f"[[{self.t11}, {self.t12}], [{self.t21}, {self.t22}]]"


def torus_validate(t: TorusSca) -> bool:
    """The three column conditions in the quotient ring."""
    one = TorusPoly.one(t.p, t.lattice)
    return (
        torus_symplectic(t.col1, t.col1).is_zero()
        and torus_symplectic(t.col2, t.col2).is_zero()
        and torus_symplectic(t.col1, t.col2) == one
    )


def _check_sites(lattice: TorusLattice, max_sites: int) -> None:
    if lattice.sites > max_sites:
        raise GuardrailError(
            f"torus has {lattice.sites} sites, above the guardrail {max_sites}"
        )


def torus_invert(f: TorusPoly, max_sites: int = DEFAULT_MAX_SITES) -> Optional[TorusPoly]:
    """Inverse in the quotient ring, or None; a dense GF(p) solve."""
    lat = f.lattice
    _check_sites(lat, max_sites)
    if f.is_zero():
        return None
    m = lat.sites
    a = np.zeros((m, m), dtype=np.int64)
    for g in lat.elements():
        col = lat.index(g)
        for e, c in f.terms.items():
            a[lat.index(lat.add(g, e)), col] = c
    b = np.zeros(m, dtype=np.int64)
    b[lat.index((0,) * lat.s)] = 1
    x = _gf.solve_mod(a, b, f.p)
    if x is None:
        return None
    inv = TorusPoly(f.p, lat, {g: int(x[lat.index(g)]) for g in lat.elements()})
    if f * inv != TorusPoly.one(f.p, lat):
        raise InternalError("solver returned a non-inverse")
    return inv


@dataclass(frozen=True)
class TorusVerdict:
    """Maximality decision for the translate span of a torus generator."""

    maximal: bool
    rank: int
    sites: int


def translate_span_matrix(xi: TorusVector) -> np.ndarray:
    """|sites| x 2|sites| matrix whose rows are the flattened translates of xi."""
    lat = xi.lattice
    m = lat.sites
    rows = np.zeros((m, 2 * m), dtype=np.int64)
    for g in lat.elements():
        r = lat.index(g)
        for e, c in xi.plus.terms.items():
            rows[r, lat.index(lat.add(e, g))] = c
        for e, c in xi.minus.terms.items():
            rows[r, m + lat.index(lat.add(e, g))] = c
    return rows


def torus_stabilizer_verdict(
    xi: TorusVector, max_sites: int = DEFAULT_MAX_SITES
) -> TorusVerdict:
    """Maximal isotropy of the translate span, by rank over F_p.

    The span is maximal isotropic (equivalently: the stabilizer state is
    unique) exactly when the |sites| translates are linearly independent.
    """
    if xi.is_zero():
        raise DomainError("the zero vector has no stabilizer verdict")
    if not torus_symplectic(xi, xi).is_zero():
        raise DomainError("vector is not isotropic: translates do not all commute")
    lat = xi.lattice
    _check_sites(lat, max_sites)
    rank = _gf.rank_mod(translate_span_matrix(xi), xi.p)
    return TorusVerdict(rank == lat.sites, rank, lat.sites)


def torus_complete(
    xi: TorusVector, max_sites: int = DEFAULT_MAX_SITES
) -> TorusSca:
    """A valid torus automaton whose second column is xi.

    Solves for a dual vector with pairing delta_{x0} against the translates,
    then repairs its self-pairing with a multiple of xi picked from one
    element of each {g, -g} pair.
    """
    verdict = torus_stabilizer_verdict(xi, max_sites)
    if not verdict.maximal:
        raise DomainError(
            f"translate span has rank {verdict.rank} < {verdict.sites}; "
            "no symplectic completion exists"
        )
    lat = xi.lattice
    p = xi.p
    m = lat.sites
    a = np.zeros((m, 2 * m), dtype=np.int64)
    for x in lat.elements():
        row = lat.index(x)
        shifted = xi.translate(x)
        for e, c in shifted.minus.terms.items():
            a[row, lat.index(e)] = c
        for e, c in shifted.plus.terms.items():
            a[row, m + lat.index(e)] = (-c) % p
    b = np.zeros(m, dtype=np.int64)
    b[lat.index((0,) * lat.s)] = 1
    x = _gf.solve_mod(a, b, p)
    if x is None:
        raise InternalError("dual system inconsistent despite maximal verdict")
    eta = TorusVector(
        TorusPoly(p, lat, {g: int(x[lat.index(g)]) for g in lat.elements()}),
        TorusPoly(p, lat, {g: int(x[m + lat.index(g)]) for g in lat.elements()}),
    )
    h = torus_symplectic(eta, eta)
    corr: dict[tuple[int, ...], int] = {}
    for g in lat.elements():
        ng = lat.neg(g)
        hg = h.terms.get(g, 0)
        if lat.index(g) < lat.index(ng):
            if hg:
                corr[g] = (-hg) % p
        elif g == ng and hg:
            raise InternalError("self-paired coefficient of the defect is nonzero")
    eta = eta + xi.scale(TorusPoly(p, lat, corr))
    one = TorusPoly.one(p, lat)
    if not torus_symplectic(eta, eta).is_zero() or torus_symplectic(eta, xi) != one:
        raise InternalError("completion produced a non-symplectic column pair")
    t = TorusSca.from_columns(eta, xi)
    if not torus_validate(t):
        raise InternalError("completed matrix fails validation")
    return t


def graph_state_automaton(gamma: TorusPoly) -> TorusSca:
    """The upper-triangular automaton [[1, gamma], [0, 1]] preparing a graph state."""
    if gamma.reflect() != gamma:
        raise DomainError("adjacency polynomial is not symmetric under reflection")
    one = TorusPoly.one(gamma.p, gamma.lattice)
    zero = TorusPoly.zero(gamma.p, gamma.lattice)
    t = TorusSca(one, gamma, zero, one)
    if not torus_validate(t):
        raise InternalError("graph-state matrix fails validation")
    return t


def gamma_from_adjacency(rows, lattice: TorusLattice, p: int) -> TorusPoly:
    """Translation-invariant adjacency matrix -> its generating polynomial.

    Rows and columns are indexed by ``lattice.elements()`` order; the matrix
    must satisfy Gamma(x, y) = gamma(x - y) and be symmetric.
    """
    m = lattice.sites
    mat = [[int(x) % p for x in row] for row in rows]
    if len(mat) != m or any(len(r) != m for r in mat):
        raise DomainError(f"adjacency matrix must be {m} x {m}")
    elems = lattice.elements()
    gamma_terms: dict[tuple[int, ...], int] = {}
    for j, ej in enumerate(elems):
        val = mat[lattice.index((0,) * lattice.s)][j]
        if val:
            gamma_terms[lattice.neg(ej)] = val
    gamma = TorusPoly(p, lattice, gamma_terms)
    for i, ei in enumerate(elems):
        for j, ej in enumerate(elems):
            diff = lattice.add(ei, lattice.neg(ej))
            if mat[i][j] != gamma.terms.get(diff, 0):
                raise DomainError(
                    f"adjacency is not translation invariant at entry ({i}, {j})"
                )
    if gamma.reflect() != gamma:
        raise DomainError("adjacency matrix is not symmetric")
    return gamma


def torus_translates(xi: TorusVector) -> list[TorusVector]:
    return [xi.translate(g) for g in xi.lattice.elements()]


def torus_vector_to_pauli(xi: TorusVector, stabilizer_phase: bool = False) -> PauliProduct:
    """Pauli product on sites 0..|sites|-1 (flat canonical indices).

    With ``stabilizer_phase`` and p = 2, a factor i is added per odd number
    of Y-type cells so the operator squares to +1 and has a +1 eigenspace.
    """
    lat = xi.lattice
    sites: dict[int, tuple[int, int]] = {}
    for e, c in xi.plus.terms.items():
        sites[lat.index(e)] = (c, 0)
    for e, c in xi.minus.terms.items():
        r, _ = sites.get(lat.index(e), (0, 0))
        sites[lat.index(e)] = (r, c)
    phase = 0
    if stabilizer_phase and xi.p == 2:
        phase = sum(r * k for r, k in sites.values()) % 2
    return PauliProduct(xi.p, sites, phase, 1)


def stabilizer_generators(xi: TorusVector) -> list[PauliProduct]:
    """Pauli products for all translates, phased to have order p."""
    return [torus_vector_to_pauli(v, stabilizer_phase=True) for v in torus_translates(xi)]


def vector_to_torus(xi_plus: LaurentPoly, xi_minus: LaurentPoly, lattice: TorusLattice) -> TorusVector:
    return TorusVector(
        TorusPoly.from_laurent(xi_plus, lattice),
        TorusPoly.from_laurent(xi_minus, lattice),
    )
