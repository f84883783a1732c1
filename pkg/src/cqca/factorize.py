"""Factorization of centered 1D automata into shear and local Fourier factors.

Shears G(f) = [[1, 0], [f, 1]] with origin-symmetric f fix the Z rule and
dress the X rule with a symmetric Z string; local Fourier transforms
F(c) = [[0, -1/c], [c, 0]] are constant single-cell rotations (the X/Z swap
for p = 2, c = 1).  Every centered automaton is a finite product of these.

The reduction engine cancels the extreme coefficients of the higher-degree
column against the other column using symmetric shears; pairing the columns
to 1 forces the top coefficient vectors to be proportional, which is what
makes each cancellation possible.  Degrees strictly decrease, so the loop
terminates in a constant matrix, which is decomposed exhaustively over
SL(2, F_p).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from .automaton import ScaMatrix, validate
from .errors import DomainError, InternalError, PolyParseError
from .phasespace import PhaseVector
from .ring import LaurentPoly


def wsym(n: int, p: int) -> LaurentPoly:
    """The symmetric basis polynomial u^n + u^-n (1 for n = 0)."""
    if n < 0:
        raise DomainError(f"symmetric index must be >= 0, got {n}")
    if n == 0:
        return LaurentPoly.one(p, 1)
    return LaurentPoly(p, 1, {(n,): 1, (-n,): 1})


@dataclass(frozen=True)
class Shear:
    """Generator G(f) = [[1, 0], [f, 1]] for reflection-invariant f."""

    poly: LaurentPoly

    def __post_init__(self):
        if self.poly.rank != 1:
            raise DomainError("shear polynomials are univariate")
        if self.poly != self.poly.reflect():
            raise DomainError(f"shear polynomial {self.poly} is not origin-symmetric")

    @property
    def p(self) -> int:
        return self.poly.p

    def matrix(self) -> ScaMatrix:
        one = LaurentPoly.one(self.p, 1)
        zero = LaurentPoly.zero(self.p, 1)
        return ScaMatrix(one, zero, self.poly, one)

    def inverse(self) -> "Shear":
        return Shear(-self.poly)

    def __str__(self) -> str:
        return f"G {self.poly}"


@dataclass(frozen=True)
class Fourier:
    """Generator F(c) = [[0, -1/c], [c, 0]] for a nonzero field constant c."""

    c: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "c", self.c % self.p)
        if self.c == 0:
            raise DomainError("Fourier constant must be nonzero")

    def matrix(self) -> ScaMatrix:
        p = self.p
        zero = LaurentPoly.zero(p, 1)
        minus_inv = LaurentPoly.constant((-pow(self.c, -1, p)) % p, p, 1)
        return ScaMatrix(zero, minus_inv, LaurentPoly.constant(self.c, p, 1), zero)

    def inverse(self) -> "Fourier":
        return Fourier((-self.c) % self.p, self.p)

    def __str__(self) -> str:
        return f"F {self.c}"


Generator = Union[Shear, Fourier]


def shear_matrix(f: LaurentPoly) -> ScaMatrix:
    return Shear(f).matrix()


def fourier_matrix(c: int, p: int) -> ScaMatrix:
    return Fourier(c, p).matrix()


class GeneratorSeq:
    """Ordered generator list; the matrix product in list order equals the target."""

    __slots__ = ("p", "factors")

    def __init__(self, p: int, factors: Iterable[Generator] = ()):
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "factors", tuple(factors))
        for g in self.factors:
            if g.p != p:
                raise DomainError("generator modulus does not match sequence")

    def __setattr__(self, name, value):
        raise AttributeError("GeneratorSeq is immutable")

    def __iter__(self):
        return iter(self.factors)

    def __len__(self) -> int:
        return len(self.factors)

    def matrix(self) -> ScaMatrix:
        out = ScaMatrix.identity(self.p, 1)
        for g in self.factors:
            out = out @ g.matrix()
        return out

    def format_lines(self) -> str:
        return "\n".join(str(g) for g in self.factors)

    @classmethod
    def parse_lines(cls, text: str, p: int) -> "GeneratorSeq":
        factors: list[Generator] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line:
                continue
            kind, _, rest = line.partition(" ")
            if kind == "G":
                factors.append(Shear(LaurentPoly.parse(rest, p, 1)))
            elif kind == "F":
                try:
                    factors.append(Fourier(int(rest), p))
                except ValueError as exc:
                    raise PolyParseError(f"bad Fourier constant on line {lineno}", 0) from exc
            else:
                raise PolyParseError(f"unknown generator kind {kind!r} on line {lineno}", 0)
        return cls(p, factors)

    def __eq__(self, other):
        if not isinstance(other, GeneratorSeq):
            return NotImplemented
        return self.p == other.p and self.factors == other.factors

    def __repr__(self) -> str:
        return f"GeneratorSeq(p={self.p}, [{', '.join(str(g) for g in self.factors)}])"


# -- reduction ----------------------------------------------------------------


def _column_degree(v: PhaseVector) -> int:
    degs = [c.degree() for c in (v.plus, v.minus) if not c.is_zero()]
    if not degs:
        raise DomainError("zero column in a symplectic matrix")
    return max(degs)


def _top_pair(v: PhaseVector, e: int) -> tuple[int, int]:
    return v.plus.coeff(e), v.minus.coeff(e)


def _cancel_coeff(top_xi: tuple[int, int], top_eta: tuple[int, int], p: int) -> int:
    """The unique constant c with top_xi + c * top_eta = (0, 0)."""
    if top_eta == (0, 0):
        raise InternalError("degenerate top coefficients in reduction")
    j = 0 if top_eta[0] else 1
    c = (-top_xi[j] * pow(top_eta[j], -1, p)) % p
    other = 1 - j
    if (top_xi[other] + c * top_eta[other]) % p != 0:
        raise InternalError("top coefficient vectors are not proportional")
    return c


def _reduce(t: ScaMatrix) -> tuple[ScaMatrix, LaurentPoly]:
    """One full reduction pass; assumes centered valid input with deg(col1) > deg(col2)."""
    p = t.p
    xi, eta = t.col1, t.col2
    d_eta = _column_degree(eta)
    f_acc = LaurentPoly.zero(p, 1)
    while True:
        d_xi = _column_degree(xi)
        if d_xi < d_eta:
            break
        if d_xi == d_eta == 0:
            break
        x_half, y_half = d_xi // 2, d_eta // 2
        c = _cancel_coeff(_top_pair(xi, x_half), _top_pair(eta, y_half), p)
        step = wsym(x_half - y_half, p).scaled(c)
        xi = xi + eta.scale(step)
        f_acc = f_acc + step
    t_next = ScaMatrix.from_columns(eta, -xi)
    return t_next, f_acc


def reduce_step(t: ScaMatrix) -> tuple[ScaMatrix, LaurentPoly]:
    """Reduce the degree of a centered automaton: t_next = t * G(f) * F(1).

    Requires deg(col1) > deg(col2); afterwards deg(col1) > deg(col2) holds
    again and the overall column degree strictly decreased.
    """
    rep = validate(t)
    if not rep.ok:
        raise DomainError(f"not a symplectic cellular automaton: {rep.failure}")
    if t.rank != 1:
        raise DomainError("reduction is defined for rank 1 only")
    if rep.center != (0,):
        raise DomainError("reduction requires a centered automaton")
    d1, d2 = _column_degree(t.col1), _column_degree(t.col2)
    if d1 <= d2:
        raise DomainError(
            f"reduction requires deg(col1) > deg(col2), got {d1} <= {d2}; "
            "swap columns with a Fourier factor first"
        )
    return _reduce(t)


def sl2_constant_decompose(m, p: int) -> GeneratorSeq:
    """Write a constant determinant-1 matrix as <= 5 constant G/F factors."""
    rows = [[int(x) % p for x in row] for row in m]
    if len(rows) != 2 or any(len(r) != 2 for r in rows):
        raise DomainError("expected a 2x2 matrix")
    a, b = rows[0]
    c, d = rows[1]
    if (a * d - b * c) % p != 1:
        raise DomainError(f"determinant is {(a * d - b * c) % p}, expected 1")
    factors: list[Generator] = []
    if b != 0:
        b_inv = pow(b, -1, p)
        x = (d * b_inv) % p
        y = (a * b_inv) % p
        if x:
            factors.append(Shear(LaurentPoly.constant(x, p, 1)))
        factors.append(Fourier((-b_inv) % p, p))
        if y:
            factors.append(Shear(LaurentPoly.constant(y, p, 1)))
    else:
        a_inv = pow(a, -1, p)
        x = (c * a_inv) % p
        if x:
            factors.append(Shear(LaurentPoly.constant(x, p, 1)))
        if a != 1:
            factors.append(Fourier(1, p))
            factors.append(Fourier((-a) % p, p))
    seq = GeneratorSeq(p, factors)
    want = ScaMatrix(
        LaurentPoly.constant(a, p, 1), LaurentPoly.constant(b, p, 1),
        LaurentPoly.constant(c, p, 1), LaurentPoly.constant(d, p, 1),
    )
    if seq.matrix() != want:
        raise InternalError("constant decomposition does not multiply back")
    return seq


def _simplify(factors: list[Generator], p: int) -> list[Generator]:
    """Exact peephole rules: merge adjacent shears, cancel inverse Fourier pairs."""
    changed = True
    while changed:
        changed = False
        out: list[Generator] = []
        i = 0
        while i < len(factors):
            g = factors[i]
            nxt = factors[i + 1] if i + 1 < len(factors) else None
            if isinstance(g, Shear) and g.poly.is_zero():
                i += 1
                changed = True
                continue
            if isinstance(g, Shear) and isinstance(nxt, Shear):
                out.append(Shear(g.poly + nxt.poly))
                i += 2
                changed = True
                continue
            if isinstance(g, Fourier) and isinstance(nxt, Fourier) and (g.c + nxt.c) % p == 0:
                i += 2
                changed = True
                continue
            out.append(g)
            i += 1
        factors = out
    return factors


def decompose(t: ScaMatrix) -> GeneratorSeq:
    """Factor a centered 1D automaton; the product of the result equals t exactly."""
    rep = validate(t)
    if not rep.ok:
        raise DomainError(f"not a symplectic cellular automaton: {rep.failure}")
    if t.rank != 1:
        raise DomainError("factorization is defined for rank 1 only")
    if rep.center != (0,):
        raise DomainError("factorization requires a centered automaton (center first)")
    p = t.p
    cur = t
    right: list[Generator] = []
    while not cur.is_constant():
        d1, d2 = _column_degree(cur.col1), _column_degree(cur.col2)
        if d1 > d2:
            cur, f = _reduce(cur)
            right.append(Shear(f))
            right.append(Fourier(1, p))
        elif d1 < d2:
            swap = Fourier(1, p)
            cur = cur @ swap.matrix()
            right.append(swap)
        else:
            c = _cancel_coeff(
                _top_pair(cur.col1, d1 // 2), _top_pair(cur.col2, d2 // 2), p
            )
            g = Shear(LaurentPoly.constant(c, p, 1))
            cur = cur @ g.matrix()
            right.append(g)
    factors = list(sl2_constant_decompose(cur.constant_values(), p))
    factors.extend(g.inverse() for g in reversed(right))
    factors = _simplify(factors, p)
    seq = GeneratorSeq(p, factors)
    if seq.matrix() != t:
        raise InternalError("decomposition does not multiply back to the input")
    return seq
