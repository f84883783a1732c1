"""Independent dense-matrix verification layer.

Builds explicit complex matrices for Pauli products on a finite run of
sites -- X is the cyclic shift, Z the diagonal of p-th roots of unity --
and answers commutation and stabilizer-uniqueness questions numerically.
This path is deliberately brute force and shares no code with the symbolic
side, so agreement between the two is meaningful evidence.

Floating point policy: operators built here are unitary to 1e-12; rank
decisions threshold singular values at 1e-6 of the largest, with an
all-zero product short-circuited (a projector product either has largest
singular value near 1 or is numerically zero).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import DomainError, GuardrailError, InternalError
from .phasespace import PauliProduct, commutation_phase

DEFAULT_GUARDRAIL = 4096
RANK_RTOL = 1e-6
PHASE_TOL = 1e-8


@lru_cache(maxsize=None)
def _x_matrix(p: int) -> np.ndarray:
    x = np.zeros((p, p), dtype=complex)
    for q in range(p):
        x[(q + 1) % p, q] = 1.0
    x.setflags(write=False)
    return x


@lru_cache(maxsize=None)
def _z_matrix(p: int) -> np.ndarray:
    omega = np.exp(2j * np.pi / p)
    z = np.diag(omega ** np.arange(p))
    z.setflags(write=False)
    return z


@lru_cache(maxsize=None)
def _site_matrix(r: int, k: int, p: int) -> np.ndarray:
    m = np.linalg.matrix_power(_x_matrix(p), r) @ np.linalg.matrix_power(_z_matrix(p), k)
    m.setflags(write=False)
    return m


def weyl_dense(
    a: PauliProduct, n_sites: int, guardrail: int = DEFAULT_GUARDRAIL
) -> np.ndarray:
    """Kronecker product of single-site X^r Z^k factors, site 0 leftmost."""
    if a.rank != 1:
        raise DomainError("dense operators are built for rank-1 site labels")
    p = a.p
    dim = p ** n_sites
    if dim > guardrail:
        raise GuardrailError(f"dense dimension {dim} exceeds guardrail {guardrail}")
    for (x,) in a.sites:
        if not 0 <= x < n_sites:
            raise DomainError(f"site {x} outside the dense window [0, {n_sites})")
    u = np.eye(1, dtype=complex)
    for x in range(n_sites):
        r, k = a.sites.get((x,), (0, 0))
        u = np.kron(u, _site_matrix(r, k, p))
    if p == 2:
        phase = 1j ** a.phase_exp
    else:
        phase = np.exp(2j * np.pi * a.phase_exp / p)
    return phase * u


def commute_dense(
    a: PauliProduct, b: PauliProduct, n_sites: int, guardrail: int = DEFAULT_GUARDRAIL
) -> int:
    """Exponent j with U_b U_a = omega^j U_a U_b, recovered from matrices."""
    a._require_compatible(b)
    p = a.p
    ua = weyl_dense(a, n_sites, guardrail)
    ub = weyl_dense(b, n_sites, guardrail)
    forward = ua @ ub
    reverse = ub @ ua
    dim = ua.shape[0]
    scalar = np.trace(reverse @ forward.conj().T) / dim
    if abs(abs(scalar) - 1) > PHASE_TOL:
        raise InternalError("commutant of Weyl operators is not a scalar")
    omega = np.exp(2j * np.pi / p)
    dists = [abs(scalar - omega ** j) for j in range(p)]
    j = int(np.argmin(dists))
    if dists[j] > PHASE_TOL:
        raise InternalError("commutation scalar is not a p-th root of unity")
    return j


def joint_eigenspace_dim(
    generators: list[PauliProduct],
    n_sites: int,
    guardrail: int = DEFAULT_GUARDRAIL,
    rank_rtol: float = RANK_RTOL,
) -> int:
    """Dimension of the simultaneous +1 eigenspace of commuting Pauli products.

    Each generator must have order p (else its +1 eigenspace is empty and 0
    is returned); the product of the spectral averages (I + W + ... +
    W^(p-1))/p of commuting unitaries is the orthogonal projector onto the
    intersection of the +1 eigenspaces, whose rank is the answer.
    """
    if not generators:
        raise DomainError("need at least one generator")
    p = generators[0].p
    for i, g in enumerate(generators):
        for h in generators[i + 1:]:
            if commutation_phase(g, h) != 0:
                raise DomainError("generators do not mutually commute")
    dim = p ** n_sites
    if dim > guardrail:
        raise GuardrailError(f"dense dimension {dim} exceeds guardrail {guardrail}")
    proj = np.eye(dim, dtype=complex)
    eye = np.eye(dim, dtype=complex)
    for g in generators:
        u = weyl_dense(g, n_sites, guardrail)
        power = np.eye(dim, dtype=complex)
        acc = np.zeros((dim, dim), dtype=complex)
        for _ in range(p):
            acc += power
            power = power @ u
        if np.max(np.abs(power - eye)) > PHASE_TOL:
            # W^p != identity: no +1 eigenvector exists at all
            return 0
        proj = proj @ (acc / p)
    sv = np.linalg.svd(proj, compute_uv=False)
    if sv[0] < 0.5:
        return 0
    return int(np.count_nonzero(sv > rank_rtol * sv[0]))
