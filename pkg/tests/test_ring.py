import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cqca.errors import DomainError, PolyParseError
from cqca.ring import (
    LaurentPoly,
    exact_div,
    gcd_extended,
    is_reflection_invariant,
    poly_divmod,
    reflection_center,
)

from conftest import P, rand_nonzero_poly, rand_poly


# -- strategies ------------------------------------------------------------------


def polys(p: int, rank: int = 1, span: int = 3, max_terms: int = 5):
    exps = st.tuples(*[st.integers(-span, span)] * rank)
    return st.dictionaries(exps, st.integers(0, p - 1), max_size=max_terms).map(
        lambda d: LaurentPoly(p, rank, d)
    )


# -- construction / canonical form ---------------------------------------------


def test_zero_coefficients_dropped():
    f = LaurentPoly(3, 1, {(0,): 3, (1,): 2})
    assert f.terms == {(1,): 2}
    assert LaurentPoly(2, 1, {(5,): 2}).is_zero()


def test_nonprime_modulus_rejected():
    with pytest.raises(DomainError):
        LaurentPoly(4, 1, {})


def test_addition_examples():
    assert (P("1 + u") + P("1 + u")).is_zero()
    assert P("u + u^-1") + P("1") == P("1 + u + u^-1")
    assert P("2*u", 3) + P("2*u", 3) == P("u", 3)


def test_addition_requires_same_ring():
    from cqca.errors import StructureError

    with pytest.raises(StructureError):
        P("u", 2) + P("u", 3)
    with pytest.raises(StructureError):
        P("u", 2) + P("u1", 2, rank=2)


def test_multiplication_examples():
    assert P("1 + u") * P("1 + u") == P("1 + u^2")
    w1 = P("u + u^-1")
    assert w1 * w1 == P("u^2 + u^-2")


def _schoolbook(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    # independent convolution oracle
    out = {}
    for e1, c1 in f.terms.items():
        for e2, c2 in g.terms.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return LaurentPoly(f.p, f.rank, out)


def test_multiplication_against_schoolbook_oracle():
    f = P("1 + u + u^3")
    g = P("u + u^4 + u^5")
    expect = _schoolbook(f, g)
    assert f * g == expect
    # frozen value: the u^4 and u^5 coefficients each cancel mod 2
    assert f * g == P("u + u^2 + u^6 + u^7 + u^8")
    rng = random.Random(7)
    for _ in range(50):
        a, b = rand_poly(rng, 5, 2), rand_poly(rng, 5, 2)
        assert a * b == _schoolbook(a, b)


@settings(max_examples=60)
@given(st.sampled_from([2, 3, 5]), st.data())
def test_ring_axioms(p, data):
    for rank in (1, 2):
        f = data.draw(polys(p, rank))
        g = data.draw(polys(p, rank))
        h = data.draw(polys(p, rank))
        assert f + g == g + f
        assert f * g == g * f
        assert (f + g) + h == f + (g + h)
        assert (f * g) * h == f * (g * h)
        assert f * (g + h) == f * g + f * h
        assert f + LaurentPoly.zero(p, rank) == f
        assert f * LaurentPoly.one(p, rank) == f


@settings(max_examples=60)
@given(st.sampled_from([2, 3, 5]), st.data())
def test_reflect_is_ring_involution(p, data):
    for rank in (1, 2):
        f = data.draw(polys(p, rank))
        g = data.draw(polys(p, rank))
        assert f.reflect().reflect() == f
        assert (f + g).reflect() == f.reflect() + g.reflect()
        assert (f * g).reflect() == f.reflect() * g.reflect()


def test_reflect_examples():
    assert P("u + u^-1").reflect() == P("u + u^-1")
    assert P("1 + u").reflect() == P("1 + u^-1")
    assert P("u^2 + u^3 + u^4").reflect() == P("u^-2 + u^-3 + u^-4")


def test_reflection_invariance_examples():
    assert is_reflection_invariant(P("u + u^-1"), (0,))
    assert is_reflection_invariant(P("1 + u"), (Fraction(1, 2),))
    assert not is_reflection_invariant(P("1 + u"), (0,))
    assert reflection_center(P("1 + u")) == (Fraction(1, 2),)
    assert reflection_center(P("1 + u + u^3")) is None
    assert reflection_center(P("u1*u2 + u1^-1*u2^-1", rank=2)) == (0, 0)


def test_degree_examples():
    assert P("u + u^-1").degree() == 2
    assert P("2", 7).degree() == 0
    assert P("1 + u + u^3").degree() == 3
    with pytest.raises(DomainError):
        LaurentPoly.zero(2).degree()
    with pytest.raises(DomainError):
        P("u1", rank=2).degree()


# -- division --------------------------------------------------------------------


def test_divmod_examples():
    f, g = P("u + u^-1"), P("1 + u")
    q, r = poly_divmod(f, g)
    assert q * g + r == f
    assert r.is_zero() or r.degree() < g.degree()

    q, r = poly_divmod(g, g)
    assert r.is_zero() and q * g == g

    q, r = poly_divmod(P("1"), P("1 + u^2"))
    assert q.is_zero() and r == P("1")


def test_divmod_by_zero():
    with pytest.raises(DomainError):
        poly_divmod(P("u"), LaurentPoly.zero(2))


def test_divmod_random_contract():
    rng = random.Random(11)
    for _ in range(300):
        p = rng.choice([2, 3, 5])
        f = rand_poly(rng, p, span=6)
        g = rand_nonzero_poly(rng, p, span=6)
        q, r = poly_divmod(f, g)
        assert q * g + r == f
        assert r.is_zero() or r.degree() < g.degree()


# -- extended Euclid ---------------------------------------------------------------


def test_gcd_unit_input():
    d, f0, f1 = gcd_extended(P("1"), P("u + u^-1"))
    assert d == P("1")
    assert f0 * P("1") + f1 * P("u + u^-1") == d


def test_gcd_known_common_factor():
    f = P("1 + u") * P("1")
    g = P("1 + u") * P("u")
    d, f0, f1 = gcd_extended(f, g)
    # associate of 1 + u, normalized to lowest exponent 0, lowest coefficient 1
    assert d == P("1 + u")
    assert f0 * f + f1 * g == d
    for h in (f, g):
        _, r = poly_divmod(h, d)
        assert r.is_zero()


def test_gcd_coprime_pair():
    d, _, _ = gcd_extended(P("1"), P("u + u^-1"))
    assert d.is_invertible()


def test_gcd_with_zero():
    d, f0, f1 = gcd_extended(LaurentPoly.zero(2), P("u^2 + u^5"))
    assert d == P("1 + u^3")
    assert f1 * P("u^2 + u^5") == d


def test_gcd_random_bezout():
    rng = random.Random(23)
    for _ in range(200):
        p = rng.choice([2, 3, 5])
        f = rand_poly(rng, p, span=5)
        g = rand_nonzero_poly(rng, p, span=5)
        d, f0, f1 = gcd_extended(f, g)
        assert f0 * f + f1 * g == d
        for h in (f, g):
            if not h.is_zero():
                _, r = poly_divmod(h, d)
                assert r.is_zero()
        # normalization: lowest exponent 0, lowest coefficient 1
        assert d.min_exp() == 0
        assert d.terms[(0,)] == 1


# -- invertibility ------------------------------------------------------------------


def test_invertible_examples():
    assert P("u^3").is_invertible()
    assert not P("1 + u").is_invertible()
    assert not LaurentPoly.zero(2).is_invertible()


def test_invertible_matches_bounded_bruteforce():
    # unit <=> some g with small support satisfies f*g = 1
    one = LaurentPoly.one(2)
    for bits in range(1, 8):
        f = LaurentPoly(2, 1, {(i,): (bits >> i) & 1 for i in range(3)})
        found = False
        for gbits in range(1, 2 ** 7):
            g = LaurentPoly(2, 1, {(i - 3,): (gbits >> i) & 1 for i in range(7)})
            if f * g == one:
                found = True
                break
        assert found == f.is_invertible()


# -- restriction ---------------------------------------------------------------------


def test_restrict_examples():
    f = P("u1*u2 + u1*u2^-1", 3, rank=2)
    assert f.restrict_direction(1) == P("2*u", 3)
    f2 = P("u1*u2 + u1*u2^-1", 2, rank=2)
    assert f2.restrict_direction(1).is_zero()
    assert P("u + u^2").restrict_direction(1) == P("u + u^2")
    assert P("u1^2 + u2", 2, rank=2).restrict_direction(2) == P("1 + u")
    with pytest.raises(DomainError):
        P("u").restrict_direction(2)


def test_restrict_is_ring_homomorphism():
    rng = random.Random(5)
    for _ in range(100):
        p = rng.choice([2, 3, 5])
        f, g = rand_poly(rng, p, 2), rand_poly(rng, p, 2)
        k = rng.choice([1, 2])
        assert (f * g).restrict_direction(k) == f.restrict_direction(k) * g.restrict_direction(k)
        assert (f + g).restrict_direction(k) == f.restrict_direction(k) + g.restrict_direction(k)
        assert f.reflect().restrict_direction(k) == f.restrict_direction(k).reflect()


# -- exact division -----------------------------------------------------------------


def test_exact_div_roundtrip():
    rng = random.Random(31)
    for _ in range(100):
        p = rng.choice([2, 3])
        rank = rng.choice([1, 2])
        f = rand_poly(rng, p, rank)
        g = rand_nonzero_poly(rng, p, rank)
        q = exact_div(f * g, g)
        assert q == f


def test_exact_div_not_divisible():
    assert exact_div(P("1 + u"), P("u + u^-1")) is None


# -- parsing / formatting --------------------------------------------------------------


def test_parse_examples():
    assert P("u + u^-1").terms == {(1,): 1, (-1,): 1}
    f = P("2*u1^3*u2^-1 + 1", 3, rank=2)
    assert f.terms == {(3, -1): 2, (0, 0): 1}
    assert P("0").is_zero()
    assert P("u*u*u") == P("u^3")
    assert P("-u", 3) == P("2*u", 3)


def test_parse_error_positions():
    with pytest.raises(PolyParseError) as err:
        P("u^^2")
    assert err.value.position == 2
    with pytest.raises(PolyParseError):
        P("u3", 2, rank=2)  # unknown variable
    with pytest.raises(PolyParseError):
        P("u1", 2, rank=1)
    with pytest.raises(PolyParseError):
        P("u +")
    with pytest.raises(PolyParseError):
        P("")


def test_format_canonical():
    assert str(P("u + u^-1")) == "u^-1 + u"
    assert str(P("2*u1^3*u2^-1 + 1", 3, rank=2)) == "1 + 2*u1^3*u2^-1"
    assert str(LaurentPoly.zero(5)) == "0"
    assert str(P("3", 5)) == "3"


def test_parse_format_roundtrip():
    rng = random.Random(17)
    for _ in range(200):
        p = rng.choice([2, 3, 5])
        rank = rng.choice([1, 2])
        f = rand_poly(rng, p, rank)
        assert LaurentPoly.parse(str(f), p, rank) == f
