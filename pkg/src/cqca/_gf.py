"""Dense exact linear algebra over GF(p): row reduction, rank, linear solves.

These are the hot kernels behind the periodic-boundary verdicts (rank of the
translate span) and inversion in the quotient ring (an |sites| x |sites|
solve).  Two interchangeable implementations exist:

  * a numba ``@njit`` triple-loop Gauss-Jordan (default when numba imports),
  * a vectorized pure-numpy fallback.

Selection: environment variable ``CQCA_BACKEND`` in {auto, numba, numpy};
``auto`` prefers numba and silently falls back.  Both backends are exact
integer arithmetic and produce identical pivots (first-nonzero pivoting), so
results are bit-identical.  ``benchmarks/bench_gf.py`` compares the two.
"""

from __future__ import annotations

import os
from typing import Optional

import numpy as np

from .errors import DomainError

_ENV_VAR = "CQCA_BACKEND"


def _select_backend() -> str:
    choice = os.environ.get(_ENV_VAR, "auto").lower()
    if choice not in ("auto", "numba", "numpy"):
        raise DomainError(f"{_ENV_VAR} must be auto, numba or numpy, got {choice!r}")
    if choice == "numpy":
        return "numpy"
    try:
        import numba  # noqa: F401
        return "numba"
    except ImportError:
        if choice == "numba":
            raise
        return "numpy"


_BACKEND = _select_backend()


def backend_name() -> str:
    return _BACKEND


# -- numpy implementation --------------------------------------------------------


def _rref_numpy(a: np.ndarray, p: int) -> tuple[int, list[int]]:
    """In-place reduced row echelon form mod p; returns (rank, pivot columns)."""
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, p)) % p
        col = a[:, c].copy()
        col[r] = 0
        a -= np.outer(col, a[r])
        a %= p
        pivots.append(c)
        r += 1
    return r, pivots


# -- numba implementation ----------------------------------------------------------

if _BACKEND == "numba":
    from numba import njit

    @njit(cache=True)
    def _inv_mod_nb(x: int, p: int) -> int:
        e = p - 2
        b = x % p
        acc = 1
        while e > 0:
            if e & 1:
                acc = (acc * b) % p
            b = (b * b) % p
            e >>= 1
        return acc

    @njit(cache=True)
    def _rref_nb(a: np.ndarray, p: int, pivots: np.ndarray) -> int:
        rows, cols = a.shape
        r = 0
        for c in range(cols):
            if r == rows:
                break
            piv = -1
            for i in range(r, rows):
                if a[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(cols):
                    tmp = a[r, j]
                    a[r, j] = a[piv, j]
                    a[piv, j] = tmp
            inv = _inv_mod_nb(a[r, c], p)
            for j in range(cols):
                a[r, j] = (a[r, j] * inv) % p
            for i in range(rows):
                if i != r and a[i, c] != 0:
                    f = a[i, c]
                    for j in range(cols):
                        a[i, j] = (a[i, j] - f * a[r, j]) % p
            pivots[r] = c
            r += 1
        return r


def _rref(a: np.ndarray, p: int, backend: Optional[str] = None) -> tuple[int, list[int]]:
    backend = backend or _BACKEND
    if backend == "numba" and _BACKEND != "numba":
        raise DomainError("numba backend requested but not available")
    if backend == "numba":
        pivots = np.empty(min(a.shape), dtype=np.int64)
        rank = _rref_nb(a, p, pivots)
        return int(rank), [int(x) for x in pivots[:rank]]
    return _rref_numpy(a, p)


def _as_matrix(a, p: int) -> np.ndarray:
    m = np.ascontiguousarray(np.asarray(a, dtype=np.int64)) % p
    if m.ndim != 2:
        raise DomainError("expected a 2D matrix")
    return m


def rank_mod(a, p: int, backend: Optional[str] = None) -> int:
    """Rank of an integer matrix over GF(p)."""
    m = _as_matrix(a, p)
    rank, _ = _rref(m, p, backend)
    return rank


def solve_mod(a, b, p: int, backend: Optional[str] = None) -> Optional[np.ndarray]:
    """A particular solution x of a @ x = b over GF(p), or None if inconsistent.

    Free variables are set to zero; pivoting is first-nonzero, so the
    returned solution is deterministic.
    """
    m = _as_matrix(a, p)
    rhs = np.asarray(b, dtype=np.int64).reshape(-1, 1) % p
    if rhs.shape[0] != m.shape[0]:
        raise DomainError("right-hand side length does not match the matrix")
    aug = np.ascontiguousarray(np.concatenate([m, rhs], axis=1))
    rank, pivots = _rref(aug, p, backend)
    ncols = m.shape[1]
    if any(c == ncols for c in pivots):
        return None
    x = np.zeros(ncols, dtype=np.int64)
    for r, c in enumerate(pivots):
        x[c] = aug[r, ncols]
    return x
