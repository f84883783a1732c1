"""Phase-space vectors, the polynomial symplectic form, and Pauli products.

A phase-space vector is a pair (plus, minus) of Laurent polynomials; the
coefficient of u^x in the plus/minus component is the X/Z exponent of the
Weyl operator at site x.  The polynomial-valued symplectic form

    sigma(xi, eta) = reflect(xi_plus) * eta_minus - reflect(xi_minus) * eta_plus

encodes the commutation of *all* lattice translates at once: its coefficients
are the scalar commutation phases of translated pairs.

Pauli products track the exponent data together with a global phase: for
p = 2 the phase is i^phase_exp (modulo 4), for odd p it is omega^phase_exp
with omega = exp(2*pi*i/p).  The product rule follows the single-cell
operator ordering X^r Z^k, which is exactly what the dense oracle builds,
so phase bookkeeping here and matrices there agree by construction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from .errors import DomainError, InternalError, PolyParseError, StructureError
from .ring import (
    LaurentPoly,
    doubled_reflection_center,
    exact_div,
    gcd_extended,
)

Site = tuple[int, ...]


class PhaseVector:
    """A pair (plus, minus) of Laurent polynomials over the same ring."""

    __slots__ = ("plus", "minus")

    def __init__(self, plus: LaurentPoly, minus: LaurentPoly):
        plus._require_compatible(minus)
        object.__setattr__(self, "plus", plus)
        object.__setattr__(self, "minus", minus)

    def __setattr__(self, name, value):
        raise AttributeError("PhaseVector is immutable")

    @classmethod
    def zero(cls, p: int, rank: int = 1) -> "PhaseVector":
        z = LaurentPoly.zero(p, rank)
        return cls(z, z)

    @property
    def p(self) -> int:
        return self.plus.p

    @property
    def rank(self) -> int:
        return self.plus.rank

    def is_zero(self) -> bool:
        return self.plus.is_zero() and self.minus.is_zero()

    def __add__(self, other: "PhaseVector") -> "PhaseVector":
        return PhaseVector(self.plus + other.plus, self.minus + other.minus)

    def __sub__(self, other: "PhaseVector") -> "PhaseVector":
        return PhaseVector(self.plus - other.plus, self.minus - other.minus)

    def __neg__(self) -> "PhaseVector":
        return PhaseVector(-self.plus, -self.minus)

    def scale(self, f: LaurentPoly) -> "PhaseVector":
        return PhaseVector(f * self.plus, f * self.minus)

    def shift(self, exps) -> "PhaseVector":
        return PhaseVector(self.plus.shift(exps), self.minus.shift(exps))

    def reflect(self) -> "PhaseVector":
        return PhaseVector(self.plus.reflect(), self.minus.reflect())

    def __eq__(self, other) -> bool:
        if not isinstance(other, PhaseVector):
            return NotImplemented
        return self.plus == other.plus and self.minus == other.minus

    def __hash__(self) -> int:
        return hash((self.plus, self.minus))

    def __str__(self) -> str:
        return f"({self.plus}, {self.minus})"

    def __repr__(self) -> str:
        return f"PhaseVector{self}"


def symplectic_form(xi: PhaseVector, eta: PhaseVector) -> LaurentPoly:
    """The polynomial pairing reflect(xi+)*eta- - reflect(xi-)*eta+."""
    xi.plus._require_compatible(eta.plus)
    return xi.plus.reflect() * eta.minus - xi.minus.reflect() * eta.plus


def beta_form(xi: PhaseVector, eta: PhaseVector) -> int:
    """Pointwise pairing sum_x xi+(x) * eta-(x) mod p."""
    total = 0
    other = eta.minus.terms
    for e, c in xi.plus.terms.items():
        total += c * other.get(e, 0)
    return total % xi.p


@dataclass(frozen=True)
class IsotropyVerdict:
    """Outcome of the isotropy analysis of a single generator vector.

    ``maximal`` is None for rank > 1, where no gcd-based decision procedure
    is available; univariate answers are definitive.
    """

    isotropic: bool
    maximal: Optional[bool]
    reflection_center: Optional[tuple[Fraction, ...]]
    common_divisor: Optional[LaurentPoly]


def vector_reflection_center(xi: PhaseVector) -> Optional[tuple[int, ...]]:
    """Doubled center 2a with xi = u^(2a) * reflect(xi), or None."""
    cands = []
    for comp in (xi.plus, xi.minus):
        if comp.is_zero():
            continue
        c = doubled_reflection_center(comp)
        if c is None:
            return None
        cands.append(c)
    if not cands:
        return None
    if any(c != cands[0] for c in cands[1:]):
        return None
    return cands[0]


def isotropy_verdict(xi: PhaseVector) -> IsotropyVerdict:
    """Classify a nonzero vector: isotropic / reflection-symmetric / maximal.

    The span of all translates of xi is isotropic iff sigma(xi, xi) = 0.  In
    rank 1 it is maximally isotropic iff xi is additionally reflection
    invariant for some half-integer point and gcd(plus, minus) is a unit.
    """
    if xi.is_zero():
        raise DomainError("the zero vector has no isotropy verdict")
    isotropic = symplectic_form(xi, xi).is_zero()
    two_a = vector_reflection_center(xi)
    center = None if two_a is None else tuple(Fraction(x, 2) for x in two_a)
    if xi.rank == 1:
        d, _, _ = gcd_extended(xi.plus, xi.minus)
        coprime = d.is_invertible()
        maximal: Optional[bool] = isotropic and center is not None and coprime
        divisor = None if coprime else d
    else:
        maximal = None
        divisor = None
    return IsotropyVerdict(isotropic, maximal, center, divisor)


def _verify_embedding(xi: PhaseVector, eta: PhaseVector) -> None:
    base = eta.plus if not eta.plus.is_zero() else eta.minus
    part = xi.plus if not eta.plus.is_zero() else xi.minus
    g = exact_div(part, base)
    if g is None or eta.scale(g) != xi:
        raise InternalError("embedding does not contain the input vector")
    if not symplectic_form(eta, eta).is_zero():
        raise InternalError("embedding is not isotropic")
    if eta.rank == 1 and isotropy_verdict(eta).maximal is not True:
        raise InternalError("embedding is not maximally isotropic")


def embed_isotropic(xi: PhaseVector) -> PhaseVector:
    """Extend an isotropic, non-maximal generator to a maximal one.

    Three cases: a vanishing component is replaced by a basis vector; a
    reflection-invariant ratio between the components becomes the new
    generator; otherwise (rank 1) the gcd of the components is divided out.
    """
    if xi.is_zero():
        raise DomainError("cannot embed the zero vector")
    if not symplectic_form(xi, xi).is_zero():
        raise DomainError("vector is not isotropic")
    verdict = isotropy_verdict(xi)
    if verdict.maximal:
        raise DomainError("vector already generates a maximally isotropic subspace")
    p, rank = xi.p, xi.rank
    one = LaurentPoly.one(p, rank)
    zero = LaurentPoly.zero(p, rank)
    if xi.plus.is_zero():
        if xi.minus.is_invertible():
            raise DomainError("vector already generates a maximally isotropic subspace")
        eta = PhaseVector(zero, one)
        _verify_embedding(xi, eta)
        return eta
    if xi.minus.is_zero():
        if xi.plus.is_invertible():
            raise DomainError("vector already generates a maximally isotropic subspace")
        eta = PhaseVector(one, zero)
        _verify_embedding(xi, eta)
        return eta
    f = exact_div(xi.plus, xi.minus)
    if f is not None and f == f.reflect():
        if xi.minus.is_invertible():
            raise DomainError("vector already generates a maximally isotropic subspace")
        eta = PhaseVector(f, one)
        _verify_embedding(xi, eta)
        return eta
    f = exact_div(xi.minus, xi.plus)
    if f is not None and f == f.reflect():
        if xi.plus.is_invertible():
            raise DomainError("vector already generates a maximally isotropic subspace")
        eta = PhaseVector(one, f)
        _verify_embedding(xi, eta)
        return eta
    if rank != 1:
        raise DomainError("embedding for rank > 1 requires a component ratio; none found")
    d, _, _ = gcd_extended(xi.plus, xi.minus)
    if d.is_invertible():
        raise DomainError("vector already generates a maximally isotropic subspace")
    eta = PhaseVector(exact_div(xi.plus, d), exact_div(xi.minus, d))
    _verify_embedding(xi, eta)
    return eta


# -- Pauli products ------------------------------------------------------------


def _normalize_site(site) -> Site:
    if isinstance(site, int):
        return (site,)
    return tuple(int(x) for x in site)


class PauliProduct:
    """A finite tensor product of single-cell Weyl operators with a phase.

    ``sites`` maps lattice points to (r, k) exponent pairs meaning X^r Z^k at
    that cell; the realized phase is i^phase_exp for p = 2 and
    omega_p^phase_exp for odd p.
    """

    __slots__ = ("p", "rank", "sites", "phase_exp")

    def __init__(self, p: int, sites: Mapping | None = None, phase_exp: int = 0, rank: int = 1):
        if rank < 1:
            raise DomainError(f"rank must be >= 1, got {rank}")
        mod = 4 if p == 2 else p
        clean: dict[Site, tuple[int, int]] = {}
        if sites:
            for raw, (r, k) in sites.items():
                site = _normalize_site(raw)
                if len(site) != rank:
                    raise StructureError(f"site {site} does not match rank {rank}")
                r, k = int(r) % p, int(k) % p
                if site in clean:
                    raise StructureError(f"duplicate site {site}")
                if r or k:
                    clean[site] = (r, k)
        # rejects non-prime p as well
        LaurentPoly.zero(p, rank)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "sites", clean)
        object.__setattr__(self, "phase_exp", int(phase_exp) % mod)

    def __setattr__(self, name, value):
        raise AttributeError("PauliProduct is immutable")

    @classmethod
    def identity(cls, p: int, rank: int = 1) -> "PauliProduct":
        return cls(p, {}, 0, rank)

    @property
    def phase_modulus(self) -> int:
        return 4 if self.p == 2 else self.p

    def is_identity(self) -> bool:
        return not self.sites and self.phase_exp == 0

    def _require_compatible(self, other: "PauliProduct") -> None:
        if self.p != other.p or self.rank != other.rank:
            raise StructureError(
                f"incompatible Pauli products: p={self.p}/rank={self.rank} "
                f"vs p={other.p}/rank={other.rank}"
            )

    def __mul__(self, other: "PauliProduct") -> "PauliProduct":
        """Operator product self * other; the left factor stays left.

        Site-wise, (X^r1 Z^k1)(X^r2 Z^k2) = omega^(k1*r2) X^(r1+r2) Z^(k1+k2).
        """
        self._require_compatible(other)
        p = self.p
        unit = 2 if p == 2 else 1
        mod = self.phase_modulus
        cross = 0
        merged = dict(self.sites)
        for site, (r2, k2) in other.sites.items():
            r1, k1 = merged.get(site, (0, 0))
            cross += k1 * r2
            r, k = (r1 + r2) % p, (k1 + k2) % p
            if r or k:
                merged[site] = (r, k)
            elif site in merged:
                del merged[site]
        phase = (self.phase_exp + other.phase_exp + unit * cross) % mod
        out = PauliProduct(p, {}, phase, self.rank)
        object.__setattr__(out, "sites", merged)
        return out

    def inverse(self) -> "PauliProduct":
        """Group inverse; for unitary Weyl operators this is also the adjoint."""
        p = self.p
        unit = 2 if p == 2 else 1
        mod = self.phase_modulus
        neg = {site: ((-r) % p, (-k) % p) for site, (r, k) in self.sites.items()}
        cross = sum(k * ((-r) % p) for (r, k) in self.sites.values())
        phase = (-self.phase_exp - unit * cross) % mod
        return PauliProduct(p, neg, phase, self.rank)

    adjoint = inverse

    def __pow__(self, n: int) -> "PauliProduct":
        if n < 0:
            return self.inverse() ** (-n)
        result = PauliProduct.identity(self.p, self.rank)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliProduct):
            return NotImplemented
        return (
            self.p == other.p
            and self.rank == other.rank
            and self.sites == other.sites
            and self.phase_exp == other.phase_exp
        )

    def __hash__(self) -> int:
        return hash((self.p, self.rank, tuple(sorted(self.sites.items())), self.phase_exp))

    # -- text form -------------------------------------------------------------

    def _site_str(self, site: Site) -> str:
        if self.rank == 1:
            return str(site[0])
        return "(" + ",".join(str(x) for x in site) + ")"

    def __str__(self) -> str:
        tokens = []
        y_count = 0
        for site in sorted(self.sites):
            r, k = self.sites[site]
            if self.p == 2:
                letter = {(1, 0): "X", (0, 1): "Z", (1, 1): "Y"}[(r, k)]
                if letter == "Y":
                    y_count += 1
                tokens.append(f"{letter}_{self._site_str(site)}")
            else:
                tokens.append(f"W({r},{k})_{self._site_str(site)}")
        if self.p == 2:
            disp = (self.phase_exp - y_count) % 4
            prefix = "" if disp == 0 else f"i^{disp} "
        else:
            disp = self.phase_exp % self.p
            prefix = "" if disp == 0 else f"w^{disp} "
        body = " ".join(tokens) if tokens else "I"
        return prefix + body

    def __repr__(self) -> str:
        return f"PauliProduct(p={self.p}, '{self}')"

    @classmethod
    def parse(cls, text: str, p: int, rank: int = 1) -> "PauliProduct":
        return _parse_pauli(text, p, rank)


_PHASE_RE = re.compile(r"^(i|w)\^(-?\d+)$")
_SITE_1D = r"-?\d+"
_SITE_ND = r"\((?:-?\d+)(?:,-?\d+)*\)"
_TOKEN_RE = re.compile(
    rf"^(?:(?P<letter>[XYZ])|W\((?P<r>\d+),(?P<k>\d+)\))_(?P<site>{_SITE_1D}|{_SITE_ND})$"
)


def _parse_site(text: str, rank: int, offset: int) -> Site:
    if text.startswith("("):
        coords = tuple(int(x) for x in text[1:-1].split(","))
    else:
        coords = (int(text),)
    if len(coords) != rank:
        raise PolyParseError(f"site {text} does not match rank {rank}", offset)
    return coords


def _parse_pauli(text: str, p: int, rank: int = 1) -> PauliProduct:
    matches = list(re.finditer(r"\S+", text))
    if not matches:
        raise PolyParseError("empty Pauli string", 0)
    phase = 0
    idx = 0
    m = _PHASE_RE.match(matches[0].group())
    if m:
        kind, value = m.group(1), int(m.group(2))
        if kind == "i" and p != 2:
            raise PolyParseError("phase prefix 'i^k' requires p = 2", matches[0].start())
        if kind == "w" and p == 2:
            raise PolyParseError("phase prefix 'w^k' requires odd p", matches[0].start())
        phase = value
        idx = 1
    sites: dict[Site, tuple[int, int]] = {}
    body = matches[idx:]
    if not body:
        raise PolyParseError("expected Pauli tokens after phase", len(text))
    if len(body) == 1 and body[0].group() == "I":
        return PauliProduct(p, {}, phase, rank)
    for tok in body:
        word = tok.group()
        m = _TOKEN_RE.match(word)
        if m is None:
            raise PolyParseError(f"bad Pauli token {word!r}", tok.start())
        site = _parse_site(m.group("site"), rank, tok.start())
        if site in sites:
            raise PolyParseError(f"duplicate site {m.group('site')}", tok.start())
        if m.group("letter"):
            letter = m.group("letter")
            if letter == "Y":
                if p != 2:
                    raise PolyParseError("token 'Y' requires p = 2", tok.start())
                sites[site] = (1, 1)
                phase += 1
            elif letter == "X":
                sites[site] = (1, 0)
            else:
                sites[site] = (0, 1)
        else:
            r, k = int(m.group("r")), int(m.group("k"))
            if not (r or k):
                continue
            sites[site] = (r % p, k % p)
    return PauliProduct(p, sites, phase, rank)


def weyl_multiply(a: PauliProduct, b: PauliProduct) -> PauliProduct:
    return a * b


def commutation_phase(a: PauliProduct, b: PauliProduct) -> int:
    """The exponent s with w(eta) w(xi) = omega^s w(xi) w(eta); 0 iff commuting."""
    a._require_compatible(b)
    total = 0
    for site, (r1, k1) in a.sites.items():
        r2, k2 = b.sites.get(site, (0, 0))
        total += r1 * k2 - k1 * r2
    return total % a.p


def vector_to_pauli(xi: PhaseVector) -> PauliProduct:
    """Phase-free Pauli product with exponents read off the vector components."""
    sites: dict[Site, tuple[int, int]] = {}
    for e, c in xi.plus.terms.items():
        sites[e] = (c, 0)
    for e, c in xi.minus.terms.items():
        r, _ = sites.get(e, (0, 0))
        sites[e] = (r, c)
    return PauliProduct(xi.p, sites, 0, xi.rank)


def pauli_to_vector(a: PauliProduct) -> PhaseVector:
    plus = {site: r for site, (r, k) in a.sites.items() if r}
    minus = {site: k for site, (r, k) in a.sites.items() if k}
    return PhaseVector(
        LaurentPoly(a.p, a.rank, plus), LaurentPoly(a.p, a.rank, minus)
    )
