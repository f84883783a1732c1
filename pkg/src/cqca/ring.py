"""Exact arithmetic in Laurent polynomial rings F_p[u1^+-, ..., us^+-].

Polynomials are stored as maps from exponent vectors (tuples of possibly
negative integers) to nonzero coefficients in the least-residue range
[1, p).  All operations are pure; values are immutable after construction
and safe to share across threads.

The ring carries an involution ``reflect`` (substitute u -> u^-1).  In the
univariate case the ring is Euclidean for the spread degree
``max exponent - min exponent``, which powers ``poly_divmod`` and the
extended Euclidean algorithm ``gcd_extended``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .errors import DomainError, PolyParseError, StructureError

Exponents = tuple[int, ...]

_PRIME_CACHE: set[int] = set()


def is_prime(n: int) -> bool:
    if n in _PRIME_CACHE:
        return True
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    _PRIME_CACHE.add(n)
    return True


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise DomainError(f"modulus {p} is not prime")


class LaurentPoly:
    """A Laurent polynomial over F_p in ``rank`` variables.

    Coefficients are reduced to [0, p) on construction and zero terms are
    dropped, so equality of values is equality of representations.
    """

    __slots__ = ("p", "rank", "terms")

    def __init__(self, p: int, rank: int, terms: Mapping[Exponents, int] | None = None):
        _check_prime(p)
        if rank < 1:
            raise DomainError(f"rank must be >= 1, got {rank}")
        clean: dict[Exponents, int] = {}
        if terms:
            for exps, c in terms.items():
                e = tuple(int(x) for x in exps)
                if len(e) != rank:
                    raise StructureError(
                        f"exponent vector {e} has length {len(e)}, expected rank {rank}"
                    )
                c = int(c) % p
                if c:
                    prev = clean.get(e, 0)
                    tot = (prev + c) % p
                    if tot:
                        clean[e] = tot
                    elif e in clean:
                        del clean[e]
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, p: int, rank: int = 1) -> "LaurentPoly":
        return cls(p, rank, {})

    @classmethod
    def one(cls, p: int, rank: int = 1) -> "LaurentPoly":
        return cls(p, rank, {(0,) * rank: 1})

    @classmethod
    def constant(cls, c: int, p: int, rank: int = 1) -> "LaurentPoly":
        return cls(p, rank, {(0,) * rank: c})

    @classmethod
    def monomial(cls, exps: Iterable[int] | int, p: int, rank: int = 1, c: int = 1) -> "LaurentPoly":
        if isinstance(exps, int):
            exps = (exps,)
        return cls(p, rank, {tuple(exps): c})

    # -- basic queries -----------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def support(self) -> list[Exponents]:
        return sorted(self.terms)

    def coeff(self, exps: Iterable[int] | int) -> int:
        if isinstance(exps, int):
            exps = (exps,)
        return self.terms.get(tuple(exps), 0)

    def is_constant(self) -> bool:
        return all(all(x == 0 for x in e) for e in self.terms)

    def constant_value(self) -> int:
        """Coefficient of the constant term (0 if absent)."""
        return self.terms.get((0,) * self.rank, 0)

    def is_invertible(self) -> bool:
        """Units of the ring are exactly the nonzero monomials c*u^x."""
        return len(self.terms) == 1

    def _require_compatible(self, other: "LaurentPoly") -> None:
        if not isinstance(other, LaurentPoly):
            raise StructureError(f"expected LaurentPoly, got {type(other).__name__}")
        if self.p != other.p or self.rank != other.rank:
            raise StructureError(
                f"incompatible rings: F_{self.p} rank {self.rank} vs F_{other.p} rank {other.rank}"
            )

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._require_compatible(other)
        out = dict(self.terms)
        p = self.p
        for e, c in other.terms.items():
            tot = (out.get(e, 0) + c) % p
            if tot:
                out[e] = tot
            elif e in out:
                del out[e]
        return LaurentPoly(p, self.rank, out)

    def __neg__(self) -> "LaurentPoly":
        p = self.p
        return LaurentPoly(p, self.rank, {e: (-c) % p for e, c in self.terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._require_compatible(other)
        p = self.p
        out: dict[Exponents, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                tot = (out.get(e, 0) + c1 * c2) % p
                if tot:
                    out[e] = tot
                elif e in out:
                    del out[e]
        return LaurentPoly(p, self.rank, out)

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            raise DomainError("negative powers are only defined for invertible polynomials")
        result = LaurentPoly.one(self.p, self.rank)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scaled(self, c: int) -> "LaurentPoly":
        c = c % self.p
        return LaurentPoly(self.p, self.rank, {e: (c * v) % self.p for e, v in self.terms.items()})

    def shift(self, exps: Iterable[int] | int) -> "LaurentPoly":
        """Multiply by the monomial u^exps."""
        if isinstance(exps, int):
            exps = (exps,)
        exps = tuple(exps)
        if len(exps) != self.rank:
            raise StructureError(f"shift vector {exps} does not match rank {self.rank}")
        return LaurentPoly(
            self.p, self.rank,
            {tuple(a + b for a, b in zip(e, exps)): c for e, c in self.terms.items()},
        )

    def reflect(self) -> "LaurentPoly":
        """The involution f(u) -> f(u^-1)."""
        return LaurentPoly(
            self.p, self.rank, {tuple(-x for x in e): c for e, c in self.terms.items()}
        )

    def inverse_unit(self) -> "LaurentPoly":
        """Multiplicative inverse of a monomial c*u^x."""
        if not self.is_invertible():
            raise DomainError(f"{self} is not invertible")
        ((e, c),) = self.terms.items()
        return LaurentPoly.monomial(tuple(-x for x in e), self.p, self.rank, pow(c, -1, self.p))

    # -- univariate structure ----------------------------------------------

    def _require_univariate(self) -> None:
        if self.rank != 1:
            raise DomainError(f"operation requires rank 1, got rank {self.rank}")

    def min_exp(self) -> int:
        self._require_univariate()
        if not self.terms:
            raise DomainError("minimum exponent of the zero polynomial is undefined")
        return min(e[0] for e in self.terms)

    def max_exp(self) -> int:
        self._require_univariate()
        if not self.terms:
            raise DomainError("maximum exponent of the zero polynomial is undefined")
        return max(e[0] for e in self.terms)

    def degree(self) -> int:
        """Spread degree: max exponent minus min exponent (univariate, nonzero)."""
        self._require_univariate()
        if not self.terms:
            raise DomainError("degree of the zero polynomial is undefined")
        return self.max_exp() - self.min_exp()

    # -- dimension reduction -------------------------------------------------

    def restrict_direction(self, k: int) -> "LaurentPoly":
        """Evaluate u_l = 1 for all l != k; the result is univariate in u_k.

        ``k`` is 1-based.  This is a ring homomorphism onto the rank-1 ring.
        """
        if not 1 <= k <= self.rank:
            raise DomainError(f"direction {k} out of range 1..{self.rank}")
        out: dict[Exponents, int] = {}
        p = self.p
        for e, c in self.terms.items():
            key = (e[k - 1],)
            tot = (out.get(key, 0) + c) % p
            if tot:
                out[key] = tot
            elif key in out:
                del out[key]
        return LaurentPoly(p, 1, out)

    # -- comparison / hashing ------------------------------------------------

    def _key(self):
        return (self.p, self.rank, tuple(sorted(self.terms.items())))

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    # -- text form -----------------------------------------------------------

    def _var_name(self, i: int) -> str:
        return "u" if self.rank == 1 else f"u{i + 1}"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps in sorted(self.terms):
            c = self.terms[exps]
            factors = []
            for i, e in enumerate(exps):
                if e == 0:
                    continue
                factors.append(self._var_name(i) if e == 1 else f"{self._var_name(i)}^{e}")
            mono = "*".join(factors)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"LaurentPoly(p={self.p}, rank={self.rank}, '{self}')"

    @classmethod
    def parse(cls, text: str, p: int, rank: int = 1) -> "LaurentPoly":
        return _parse_poly(text, p, rank)


# -- parser ------------------------------------------------------------------


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def at_end(self) -> bool:
        return self.peek() == ""

    def read_digits(self) -> str:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        return self.text[start:self.pos]


def _parse_signed_int(s: _Scanner) -> int:
    s.skip_ws()
    sign = 1
    if s.peek() == "-":
        sign = -1
        s.pos += 1
    if not (s.pos < len(s.text) and s.text[s.pos].isdigit()):
        raise PolyParseError("expected integer", s.pos)
    return sign * int(s.read_digits())


def _parse_var(s: _Scanner, rank: int) -> int:
    s.skip_ws()
    start = s.pos
    if s.peek() != "u":
        raise PolyParseError("expected variable", s.pos)
    s.pos += 1
    digits = s.read_digits()
    if rank == 1:
        if digits:
            raise PolyParseError(f"unknown variable 'u{digits}' (rank-1 uses bare 'u')", start)
        return 0
    if not digits:
        raise PolyParseError("variable needs a direction index for rank > 1", start)
    k = int(digits)
    if not 1 <= k <= rank:
        raise PolyParseError(f"unknown variable 'u{digits}' for rank {rank}", start)
    return k - 1


def _parse_mono(s: _Scanner, rank: int) -> Exponents:
    exps = [0] * rank
    while True:
        idx = _parse_var(s, rank)
        e = 1
        if s.peek() == "^":
            s.pos += 1
            e = _parse_signed_int(s)
        exps[idx] += e
        if s.peek() == "*":
            s.pos += 1
            if s.peek() != "u":
                raise PolyParseError("expected variable after '*'", s.pos)
            continue
        break
    return tuple(exps)


def _parse_term(s: _Scanner, p: int, rank: int) -> tuple[int, Exponents]:
    s.skip_ws()
    c = s.peek()
    if c.isdigit():
        coeff = int(s.read_digits()) % p
        if s.peek() == "*":
            s.pos += 1
            return coeff, _parse_mono(s, rank)
        return coeff, (0,) * rank
    if c == "u":
        return 1, _parse_mono(s, rank)
    raise PolyParseError("expected term", s.pos)


def _parse_poly(text: str, p: int, rank: int) -> LaurentPoly:
    _check_prime(p)
    s = _Scanner(text)
    terms: dict[Exponents, int] = {}
    sign = 1
    if s.peek() == "-":
        s.pos += 1
        sign = -1
    if s.at_end():
        raise PolyParseError("empty polynomial", s.pos)
    while True:
        coeff, exps = _parse_term(s, p, rank)
        terms[exps] = (terms.get(exps, 0) + sign * coeff) % p
        if s.at_end():
            break
        c = s.peek()
        if c == "+":
            sign = 1
        elif c == "-":
            sign = -1
        else:
            raise PolyParseError(f"expected '+' or '-', got {c!r}", s.pos)
        s.pos += 1
    return LaurentPoly(p, rank, terms)


def parse_poly(text: str, p: int, rank: int = 1) -> LaurentPoly:
    """Parse the canonical polynomial grammar; raises PolyParseError with position."""
    return _parse_poly(text, p, rank)


def format_poly(f: LaurentPoly) -> str:
    return str(f)


# -- reflection invariance -----------------------------------------------------


def doubled_reflection_center(f: LaurentPoly) -> Optional[Exponents]:
    """The vector 2a (integers) with f = u^(2a) * reflect(f), or None.

    Zero polynomials are symmetric about every point; the origin is returned.
    """
    if f.is_zero():
        return (0,) * f.rank
    sup = f.support()
    two_a = tuple(
        min(e[i] for e in sup) + max(e[i] for e in sup) for i in range(f.rank)
    )
    if f == f.reflect().shift(two_a):
        return two_a
    return None


def reflection_center(f: LaurentPoly) -> Optional[tuple[Fraction, ...]]:
    """Half-integer point a with f = u^(2a) * reflect(f), or None if not symmetric."""
    two_a = doubled_reflection_center(f)
    if two_a is None:
        return None
    return tuple(Fraction(x, 2) for x in two_a)


def is_reflection_invariant(f: LaurentPoly, a: Iterable[Fraction | int]) -> bool:
    """Whether f = u^(2a) * reflect(f) for the given half-integer lattice point."""
    two_a = []
    for x in a:
        frac = Fraction(x)
        if frac.denominator not in (1, 2):
            raise DomainError(f"{x} is not a half-integer coordinate")
        two_a.append(int(2 * frac))
    if len(two_a) != f.rank:
        raise StructureError(f"center has {len(two_a)} coordinates, expected {f.rank}")
    return f == f.reflect().shift(tuple(two_a))


# -- division ------------------------------------------------------------------


def poly_divmod(f: LaurentPoly, g: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    """Division with remainder in the univariate Laurent ring.

    Returns (q, r) with f = q*g + r and either r = 0 or degree(r) < degree(g).
    Both operands are shifted to ordinary polynomials with nonzero constant
    term, divided by leading exponent, and shifted back.
    """
    f._require_univariate()
    f._require_compatible(g)
    if g.is_zero():
        raise DomainError("division by the zero polynomial")
    if f.is_zero():
        z = LaurentPoly.zero(f.p, 1)
        return z, z
    p = f.p
    mf, mg = f.min_exp(), g.min_exp()
    fw = {e[0] - mf: c for e, c in f.terms.items()}
    gw = {e[0] - mg: c for e, c in g.terms.items()}
    dg = max(gw)
    lc_inv = pow(gw[dg], -1, p)
    q: dict[int, int] = {}
    while fw and max(fw) >= dg:
        dr = max(fw)
        c = (fw[dr] * lc_inv) % p
        q[dr - dg] = c
        for e, gc in gw.items():
            key = e + dr - dg
            tot = (fw.get(key, 0) - c * gc) % p
            if tot:
                fw[key] = tot
            elif key in fw:
                del fw[key]
    qp = LaurentPoly(p, 1, {(e,): c for e, c in q.items()}).shift(mf - mg)
    rp = LaurentPoly(p, 1, {(e,): c for e, c in fw.items()}).shift(mf)
    return qp, rp


def gcd_extended(
    f: LaurentPoly, g: LaurentPoly
) -> tuple[LaurentPoly, LaurentPoly, LaurentPoly]:
    """Extended Euclidean algorithm for univariate Laurent polynomials.

    Returns (d, f0, f1) with f0*f + f1*g = d and d = gcd(f, g), normalized so
    that d has minimal exponent 0 and lowest coefficient 1 (gcds are otherwise
    defined only up to invertible monomials).
    """
    f._require_univariate()
    f._require_compatible(g)
    if f.is_zero() and g.is_zero():
        raise DomainError("gcd(0, 0) is undefined")
    one = LaurentPoly.one(f.p, 1)
    zero = LaurentPoly.zero(f.p, 1)
    r0, r1 = f, g
    s0, s1 = one, zero
    t0, t1 = zero, one
    while not r1.is_zero():
        q, r2 = poly_divmod(r0, r1)
        r0, r1 = r1, r2
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    unit = LaurentPoly.monomial(-r0.min_exp(), f.p, 1, pow(r0.terms[(r0.min_exp(),)], -1, f.p))
    return unit * r0, unit * s0, unit * t0


def exact_div(f: LaurentPoly, g: LaurentPoly) -> Optional[LaurentPoly]:
    """Exact quotient f/g in the Laurent ring, or None when g does not divide f.

    Works for any rank: both operands are cornered to ordinary polynomials
    (every variable hits exponent 0), then reduced by the lex-leading term of
    the divisor.  Any stuck leading term proves indivisibility.
    """
    f._require_compatible(g)
    if g.is_zero():
        raise DomainError("division by the zero polynomial")
    if f.is_zero():
        return LaurentPoly.zero(f.p, f.rank)
    p, rank = f.p, f.rank
    fmin = tuple(min(e[i] for e in f.terms) for i in range(rank))
    gmin = tuple(min(e[i] for e in g.terms) for i in range(rank))
    fw = {tuple(a - b for a, b in zip(e, fmin)): c for e, c in f.terms.items()}
    gw = {tuple(a - b for a, b in zip(e, gmin)): c for e, c in g.terms.items()}
    lt_g = max(gw)
    lc_inv = pow(gw[lt_g], -1, p)
    q: dict[Exponents, int] = {}
    while fw:
        lt = max(fw)
        diff = tuple(a - b for a, b in zip(lt, lt_g))
        if any(d < 0 for d in diff):
            return None
        c = (fw[lt] * lc_inv) % p
        q[diff] = c
        for e, gc in gw.items():
            key = tuple(a + b for a, b in zip(e, diff))
            tot = (fw.get(key, 0) - c * gc) % p
            if tot:
                fw[key] = tot
            elif key in fw:
                del fw[key]
    shift = tuple(a - b for a, b in zip(fmin, gmin))
    return LaurentPoly(p, rank, q).shift(shift)


def add(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    return f + g


def mul(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    return f * g


def reflect(f: LaurentPoly) -> LaurentPoly:
    return f.reflect()


def degree(f: LaurentPoly) -> int:
    return f.degree()


def is_invertible(f: LaurentPoly) -> bool:
    return f.is_invertible()


def restrict_direction(f: LaurentPoly, k: int) -> LaurentPoly:
    return f.restrict_direction(k)
