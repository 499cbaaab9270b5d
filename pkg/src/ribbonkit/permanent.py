"""Exact permanents of small nonnegative integer matrices.

Ryser's inclusion-exclusion over column subsets is evaluated in numpy chunks
modulo several 31-bit primes and recombined by CRT.  The primes are chosen so
their product exceeds the trivial bound prod(row sums) >= perm(A), which makes
the reconstruction exact.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import permutations

import numpy as np

DEFAULT_CEILING = 24
_CHUNK_BITS = 16


def _primes_below(limit: int, count: int) -> list[int]:
    out = []
    cand = limit - 1
    while len(out) < count:
        if cand % 2 and all(cand % p for p in range(3, math.isqrt(cand) + 1, 2)):
            out.append(cand)
        cand -= 1
    return out


_PRIMES = _primes_below(2**31, 8)


def _as_matrix(matrix) -> np.ndarray:
    A = np.asarray(matrix, dtype=np.int64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("permanent needs a square matrix")
    if np.any(A < 0):
        raise ValueError("permanent engine expects nonnegative entries")
    return A


def _ryser_mod(A: np.ndarray, primes: list[int], lo: int = 0, hi: int | None = None) -> list[int]:
    """Signed Ryser sum over subset masks in [lo, hi), reduced mod each prime."""
    n = A.shape[0]
    hi = 2**n if hi is None else hi
    chunk = 2**_CHUNK_BITS
    acc = [0] * len(primes)
    shifts = np.arange(n, dtype=np.int64)
    for start in range(lo, hi, chunk):
        masks = np.arange(start, min(start + chunk, hi), dtype=np.int64)
        bits = (masks[:, None] >> shifts) & 1
        rowsums = bits @ A.T
        odd = bits.sum(axis=1) % 2 == 1
        for k, p in enumerate(primes):
            prod = np.ones(len(masks), dtype=np.int64)
            for i in range(n):
                prod = prod * (rowsums[:, i] % p) % p
            acc[k] = (acc[k] + int(prod[~odd].sum()) - int(prod[odd].sum())) % p
    return acc


def _ryser_direct(A: np.ndarray) -> int:
    """Signed Ryser sum in plain int64; caller guarantees no overflow."""
    n = A.shape[0]
    total = 2**n
    chunk = 2**_CHUNK_BITS
    acc = 0
    shifts = np.arange(n, dtype=np.int64)
    for start in range(0, total, chunk):
        masks = np.arange(start, min(start + chunk, total), dtype=np.int64)
        bits = (masks[:, None] >> shifts) & 1
        prod = np.prod(bits @ A.T, axis=1)
        odd = bits.sum(axis=1) % 2 == 1
        acc += int(prod[~odd].sum()) - int(prod[odd].sum())
    return -acc if n % 2 else acc


def _ryser_worker(args):
    return _ryser_mod(*args)


def _crt(residues, primes) -> int:
    x, m = 0, 1
    for r, p in zip(residues, primes):
        t = ((r - x) * pow(m, -1, p)) % p
        x += m * t
        m *= p
    return x


def permanent(matrix, workers: int = 1) -> int:
    """Exact permanent of a square nonnegative integer matrix.

    With workers > 1 the subset range is split into contiguous slices; the
    partial sums are reduced mod p, so the result does not depend on the split.
    """
    A = _as_matrix(matrix)
    n = A.shape[0]
    if n == 0:
        return 1
    ceiling = math.prod(int(s) for s in A.sum(axis=1))
    if ceiling == 0:
        return 0
    if ceiling * 2**n < 2**62:
        return _ryser_direct(A)
    primes = []
    modulus = 1
    for p in _PRIMES:
        primes.append(p)
        modulus *= p
        if modulus > ceiling:
            break
    else:
        raise OverflowError("matrix entries too large for the prime table")
    total = 2**n
    if workers > 1 and total >= 2**(_CHUNK_BITS + 2):
        from concurrent.futures import ProcessPoolExecutor

        cuts = [total * k // workers for k in range(workers + 1)]
        jobs = [(A, primes, lo, hi) for lo, hi in zip(cuts, cuts[1:])]
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_ryser_worker, jobs))
        acc = [sum(col) % p for col, p in zip(zip(*parts), primes)]
    else:
        acc = _ryser_mod(A, primes)
    sign = -1 if n % 2 else 1
    return _crt([(sign * v) % p for v, p in zip(acc, primes)], primes)


def permanent_by_permutations(matrix) -> int:
    """Sum over all n! permutations.  Reference route for small matrices."""
    A = [[int(v) for v in row] for row in np.asarray(matrix)]
    total = 0
    for perm in permutations(range(len(A))):
        prod = 1
        for i, j in enumerate(perm):
            prod *= A[i][j]
            if not prod:
                break
        total += prod
    return total


def bregman_bound(matrix):
    """Upper bound prod_i (r_i!)^(1/r_i) on the permanent of a 0-1 matrix.

    Returns (bound, exact).  For a d-regular k x k matrix the bound is the
    integer (d!)^(k/d) whenever d divides k, returned exactly; otherwise a
    float rounded up, with exact=False.
    """
    A = _as_matrix(matrix)
    sums = [int(s) for s in A.sum(axis=1)]
    if any(s == 0 for s in sums):
        return Fraction(0), True
    if len(set(sums)) == 1 and len(sums) % sums[0] == 0:
        d = sums[0]
        return Fraction(math.factorial(d) ** (len(sums) // d)), True
    log_bound = sum(math.lgamma(s + 1) / s for s in sums)
    return math.nextafter(math.exp(log_bound) * (1 + 1e-12), math.inf), False
