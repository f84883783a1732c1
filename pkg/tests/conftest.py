import random

import pytest

from cqca import Cqca, ScaMatrix, fourier_matrix, shear_matrix, wsym
from cqca.ring import LaurentPoly


def P(text: str, p: int = 2, rank: int = 1) -> LaurentPoly:
    return LaurentPoly.parse(text, p, rank)


def rand_poly(rng: random.Random, p: int, rank: int = 1, span: int = 3,
              max_terms: int = 4) -> LaurentPoly:
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        exps = tuple(rng.randint(-span, span) for _ in range(rank))
        terms[exps] = rng.randrange(p)
    return LaurentPoly(p, rank, terms)


def rand_nonzero_poly(rng: random.Random, p: int, rank: int = 1, span: int = 3) -> LaurentPoly:
    while True:
        f = rand_poly(rng, p, rank, span)
        if not f.is_zero():
            return f


def rand_symmetric_poly(rng: random.Random, p: int, max_n: int = 3) -> LaurentPoly:
    f = LaurentPoly.zero(p, 1)
    for n in range(max_n + 1):
        c = rng.randrange(p)
        if c:
            f = f + wsym(n, p).scaled(c)
    return f


def rand_sca(rng: random.Random, p: int, max_factors: int = 8) -> ScaMatrix:
    """Random centered 1D automaton as a product of shear/Fourier generators."""
    t = ScaMatrix.identity(p, 1)
    for _ in range(rng.randint(1, max_factors)):
        if rng.random() < 0.6:
            t = t @ shear_matrix(rand_symmetric_poly(rng, p))
        else:
            t = t @ fourier_matrix(rng.randrange(1, p) if p > 2 else 1, p)
    return t


def rand_cqca(rng: random.Random, p: int, max_factors: int = 6) -> Cqca:
    m = rand_sca(rng, p, max_factors)
    if p == 2:
        base_x = Cqca._required_parity(m.col1) + 2 * rng.randrange(2)
        base_z = Cqca._required_parity(m.col2) + 2 * rng.randrange(2)
    else:
        base_x = rng.randrange(p)
        base_z = rng.randrange(p)
    return Cqca(m, base_x, base_z)


@pytest.fixture
def cluster() -> Cqca:
    """The 1D cluster-state automaton: X -> -Z, Z -> Z X Z."""
    p = 2
    zero, one = LaurentPoly.zero(p), LaurentPoly.one(p)
    return Cqca(ScaMatrix(zero, one, one, wsym(1, p)), 2, 0)
