import random

import numpy as np
import pytest

from cqca.errors import DomainError, GuardrailError
from cqca.ring import LaurentPoly, gcd_extended
from cqca.torus import (
    TorusLattice,
    TorusPoly,
    TorusSca,
    TorusVector,
    canonicalize,
    gamma_from_adjacency,
    graph_state_automaton,
    smith_normal_form,
    stabilizer_generators,
    torus_complete,
    torus_invert,
    torus_stabilizer_verdict,
    torus_symplectic,
    torus_validate,
    vector_to_torus,
)

from conftest import P


LAT6 = TorusLattice.line(6)
LAT7 = TorusLattice.line(7)


def T(text, p=2, lat=LAT6):
    return TorusPoly.parse(text, p, lat)


# -- Smith normal form -------------------------------------------------------------


def test_snf_properties_random():
    rng = random.Random(3)
    for _ in range(80):
        n = rng.choice([1, 2, 3])
        while True:
            m = [[rng.randint(-6, 6) for _ in range(n)] for _ in range(n)]
            if round(abs(np.linalg.det(np.array(m, dtype=float)))) > 0:
                break
        u, diag, v = smith_normal_form(m)
        um = np.array(u) @ np.array(m) @ np.array(v)
        assert np.array_equal(um, np.diag(diag))
        assert all(d > 0 for d in diag)
        for a, b in zip(diag, diag[1:]):
            assert b % a == 0
        assert round(abs(np.linalg.det(np.array(u, dtype=float)))) == 1
        assert round(abs(np.linalg.det(np.array(v, dtype=float)))) == 1
        assert int(np.prod(diag)) == round(abs(np.linalg.det(np.array(m, dtype=float))))


# -- lattice quotient ---------------------------------------------------------------


def test_canonicalize_examples():
    assert canonicalize(LAT6, 7) == canonicalize(LAT6, 1)
    assert canonicalize(LAT6, 0) == (0,)
    lat2 = TorusLattice([(1, 3), (5, 1)])
    assert lat2.sites == 14


def test_canonicalize_cosets_random():
    rng = random.Random(5)
    lat = TorusLattice([(1, 3), (5, 1)])
    for _ in range(100):
        x = (rng.randint(-20, 20), rng.randint(-20, 20))
        k1, k2 = rng.randint(-3, 3), rng.randint(-3, 3)
        shifted = (x[0] + k1 * 1 + k2 * 5, x[1] + k1 * 3 + k2 * 1)
        assert lat.canonical(x) == lat.canonical(shifted)
    # injectivity: all |sites| canonical elements have distinct representatives
    reps = {lat.canonical(lat.representative(c)) for c in lat.elements()}
    assert len(reps) == lat.sites


def test_lattice_rejects_degenerate():
    with pytest.raises(DomainError):
        TorusLattice([(1, 2), (2, 4)])


# -- quotient ring ------------------------------------------------------------------


def test_torus_mul_inverse_example():
    f = T("1 + u + u^3")
    g = T("u + u^4 + u^5")
    assert f * g == TorusPoly.one(2, LAT6)
    assert f * TorusPoly.one(2, LAT6) == f


def test_torus_reflect():
    assert T("u^2").reflect() == T("u^4")
    assert T("u^3").reflect() == T("u^3")


def test_torus_invert_examples():
    inv = torus_invert(T("1 + u + u^3"))
    assert inv == T("u + u^4 + u^5")
    assert torus_invert(T("1 + u + u^3", lat=LAT7)) is None
    assert torus_invert(T("u^3")) == T("u^3")
    assert torus_invert(T("u^2", lat=LAT7)) == T("u^5", lat=LAT7)
    assert torus_invert(TorusPoly.zero(2, LAT6)) is None


def test_torus_invert_matches_gcd_criterion():
    # 1D: f invertible mod u^N - 1 iff gcd(f, u^N - 1) is a unit
    rng = random.Random(7)
    for _ in range(80):
        n = rng.choice([4, 5, 6, 7])
        p = rng.choice([2, 3])
        lat = TorusLattice.line(n)
        rep = LaurentPoly(p, 1, {(rng.randrange(n),): rng.randrange(p) for _ in range(3)})
        f = TorusPoly.from_laurent(rep, lat)
        modulus = LaurentPoly(p, 1, {(n,): 1, (0,): -1})
        if rep.is_zero():
            assert torus_invert(f) is None
            continue
        d, _, _ = gcd_extended(rep, modulus)
        assert (torus_invert(f) is not None) == d.is_invertible()


def test_torus_guardrail():
    lat = TorusLattice.line(5000)
    with pytest.raises(GuardrailError):
        torus_invert(TorusPoly.one(2, lat))


# -- torus automata -----------------------------------------------------------------


def _size6_inverse_pair():
    f = T("1 + u + u^3")
    finv = T("u + u^4 + u^5")
    w1 = T("u + u^-1")
    one = TorusPoly.one(2, LAT6)
    zero = TorusPoly.zero(2, LAT6)
    # the corner entry is the *reflected* ring inverse, so the pairing is 1
    t = TorusSca(finv.reflect(), f * w1, zero, f)
    t_tilde = TorusSca(one, w1, zero, one)
    return t, t_tilde


def test_torus_validate_examples():
    gamma = T("u^-2 + u^2 + u^3")
    one = TorusPoly.one(2, LAT6)
    zero = TorusPoly.zero(2, LAT6)
    assert torus_validate(TorusSca(one, gamma, zero, one))

    t, t_tilde = _size6_inverse_pair()
    assert torus_validate(t)
    assert torus_validate(t_tilde)

    bad = TorusSca(one, T("u"), zero, one)
    assert not torus_validate(bad)


def test_stabilizer_verdict_size_dependence():
    xi_plus = P("1 + u + u^3") * P("u^-1 + u")
    xi_minus = P("1 + u + u^3")
    v7 = torus_stabilizer_verdict(vector_to_torus(xi_plus, xi_minus, LAT7))
    assert not v7.maximal and v7.sites == 7
    v6 = torus_stabilizer_verdict(vector_to_torus(xi_plus, xi_minus, LAT6))
    assert v6.maximal and v6.rank == 6


def test_stabilizer_verdict_product_state():
    for n in (3, 5, 8):
        lat = TorusLattice.line(n)
        v = torus_stabilizer_verdict(
            TorusVector(TorusPoly.zero(2, lat), TorusPoly.one(2, lat))
        )
        assert v.maximal


def test_stabilizer_verdict_rejects_non_isotropic():
    xi = TorusVector(TorusPoly.one(2, LAT6), T("u"))
    with pytest.raises(DomainError):
        torus_stabilizer_verdict(xi)


def test_non_reflection_invariant_generator_accepted():
    # regression: on tori, maximal generators need not be reflection invariant
    xi = vector_to_torus(P("1 + u + u^3") * P("u^-1 + u"), P("1 + u + u^3"), LAT6)
    assert torus_symplectic(xi, xi).is_zero()
    assert xi.plus.reflect() != xi.plus  # genuinely asymmetric
    assert torus_stabilizer_verdict(xi).maximal


# -- completion ----------------------------------------------------------------------


def test_torus_complete_product_state():
    xi = TorusVector(TorusPoly.zero(2, LAT6), TorusPoly.one(2, LAT6))
    t = torus_complete(xi)
    assert torus_validate(t) and t.col2 == xi


def test_torus_complete_graph_vector():
    gamma = T("u^-2 + u^2 + u^3")
    xi = TorusVector(gamma, TorusPoly.one(2, LAT6))
    t = torus_complete(xi)
    assert torus_validate(t) and t.col2 == xi


def test_torus_complete_asymmetric_vector():
    xi = vector_to_torus(P("1 + u + u^3") * P("u^-1 + u"), P("1 + u + u^3"), LAT6)
    t = torus_complete(xi)
    assert torus_validate(t) and t.col2 == xi


def test_torus_complete_rejects_non_maximal():
    xi = vector_to_torus(P("1 + u + u^3") * P("u^-1 + u"), P("1 + u + u^3"), LAT7)
    with pytest.raises(DomainError):
        torus_complete(xi)


def test_validate_implies_columns_maximal_small_corpus():
    rng = random.Random(11)
    corpus = list(_size6_inverse_pair())
    corpus.append(graph_state_automaton(T("u + u^-1")))
    for n in (4, 5, 8):
        lat = TorusLattice.line(n)
        for _ in range(6):
            # random symmetric gamma gives a valid automaton; completion of its
            # column gives another
            terms = {}
            for _ in range(rng.randint(0, 3)):
                e = rng.randrange(n)
                terms[(e,)] = terms.get((e,), 0) ^ 1
                terms[((-e) % n,)] = terms.get(((-e) % n,), 0) ^ 1 if e else terms[(e,)]
            gamma = TorusPoly(2, lat, {k: v for k, v in terms.items() if v})
            if gamma.reflect() != gamma:
                continue
            corpus.append(graph_state_automaton(gamma))
    for t in corpus:
        assert torus_validate(t)
        for col in (t.col1, t.col2):
            assert torus_stabilizer_verdict(col).maximal


# -- graph states ---------------------------------------------------------------------


HEX_RING_ADJACENCY = [
    [0, 0, 1, 1, 1, 0],
    [0, 0, 0, 1, 1, 1],
    [1, 0, 0, 0, 1, 1],
    [1, 1, 0, 0, 0, 1],
    [1, 1, 1, 0, 0, 0],
    [0, 1, 1, 1, 0, 0],
]


def test_gamma_from_adjacency_paper_example():
    gamma = gamma_from_adjacency(HEX_RING_ADJACENCY, LAT6, 2)
    assert gamma == T("u^2 + u^3 + u^4")
    assert gamma == T("u^-2 + u^2 + u^3")


def test_gamma_from_adjacency_rejects_broken_invariance():
    rows = [row[:] for row in HEX_RING_ADJACENCY]
    rows[2][5] ^= 1
    with pytest.raises(DomainError):
        gamma_from_adjacency(rows, LAT6, 2)


def test_graph_state_examples():
    t = graph_state_automaton(T("u^-2 + u^2 + u^3"))
    assert torus_validate(t)
    assert t.col2 == TorusVector(T("u^2 + u^3 + u^4"), TorusPoly.one(2, LAT6))

    ident = graph_state_automaton(TorusPoly.zero(2, LAT6))
    assert ident.col2 == TorusVector(TorusPoly.zero(2, LAT6), TorusPoly.one(2, LAT6))

    ring_graph = graph_state_automaton(T("u + u^-1"))
    assert torus_validate(ring_graph)
    assert torus_stabilizer_verdict(ring_graph.col2).maximal


def test_graph_state_rejects_asymmetric():
    with pytest.raises(DomainError):
        graph_state_automaton(T("u"))


def test_rank2_torus_verdict_and_oracle_bridge():
    from cqca.oracle import joint_eigenspace_dim

    lat = TorusLattice([(2, 0), (0, 2)])
    assert lat.sites == 4
    p2 = LaurentPoly.parse("u1 + u2", 2, 2)
    gamma = TorusPoly.from_laurent(p2, lat)
    assert gamma.reflect() == gamma  # -(1,0) == (1,0) mod 2
    t = graph_state_automaton(gamma)
    assert torus_validate(t)
    v = torus_stabilizer_verdict(t.col2)
    assert v.maximal and v.sites == 4
    assert joint_eigenspace_dim(stabilizer_generators(t.col2), 4) == 1


def test_stabilizer_generators_order_two():
    xi = vector_to_torus(P("1 + u + u^3") * P("u^-1 + u"), P("1 + u + u^3"), LAT6)
    gens = stabilizer_generators(xi)
    assert len(gens) == 6
    for g in gens:
        assert (g * g).is_identity()
