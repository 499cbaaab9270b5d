"""Perron-Frobenius data for train-track incidence matrices.

The dilatation is the spectral radius of a primitive nonnegative integer
matrix M.  Bounds on it come from Collatz-Wielandt quotients evaluated in
exact rational arithmetic, never from a floating eigensolver.  The trace
route tr(M^n)^(1/n) uses exact integer traces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import GridParseError, NotPrimitiveError


@dataclass(frozen=True)
class PFMatrix:
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.entries)
        k = len(rows)
        if k == 0 or any(len(r) != k for r in rows):
            raise ValueError("incidence matrix must be square and nonempty")
        if any(v < 0 for r in rows for v in r):
            raise ValueError("incidence matrix entries must be nonnegative")
        object.__setattr__(self, "entries", rows)

    @property
    def size(self) -> int:
        return len(self.entries)

    def array(self) -> np.ndarray:
        return np.array(self.entries, dtype=object)


@dataclass(frozen=True)
class DilatationEstimate:
    spectral_radius: float
    certified_interval: tuple[float, float]
    trace_sequence: list = field(default_factory=list)
    iterations: int = 0
    converged: bool = True

    def power_of_two_subsequence(self):
        return [(n, v) for n, v in self.trace_sequence if n & (n - 1) == 0]


def parse_matrix(text: str) -> PFMatrix:
    lines = [
        (k + 1, ln.strip()) for k, ln in enumerate(text.splitlines()) if ln.strip() and not ln.strip().startswith("#")
    ]
    if not lines:
        raise GridParseError("empty matrix file")
    try:
        k = int(lines[0][1])
    except ValueError:
        raise GridParseError(f"matrix size {lines[0][1]!r} is not an integer", lines[0][0]) from None
    if k < 1:
        raise GridParseError("matrix size must be positive", lines[0][0])
    if len(lines) != k + 1:
        raise GridParseError(f"expected {k} matrix rows, found {len(lines) - 1}")
    rows = []
    for lineno, text_row in lines[1:]:
        toks = text_row.split()
        if len(toks) != k:
            raise GridParseError(f"row has {len(toks)} entries, expected {k}", lineno)
        try:
            row = [int(t) for t in toks]
        except ValueError:
            raise GridParseError("non-integer matrix entry", lineno) from None
        if any(v < 0 for v in row):
            raise GridParseError("negative matrix entry", lineno)
        rows.append(row)
    return PFMatrix(tuple(map(tuple, rows)))


def load_matrix(path) -> PFMatrix:
    return parse_matrix(Path(path).read_text())


def serialize_matrix(m: PFMatrix) -> str:
    return f"{m.size}\n" + "".join(" ".join(map(str, row)) + "\n" for row in m.entries)


def is_primitive(m: PFMatrix) -> bool:
    """Some power M^p, p <= (k-1)^2 + 1 (Wielandt), is entrywise positive."""
    k = m.size
    B = np.array(m.entries, dtype=bool)
    P = B.copy()
    for _ in range((k - 1) ** 2 + 1):
        if P.all():
            return True
        P = (P.astype(np.int64) @ B.astype(np.int64)) > 0
    return bool(P.all())


def _collatz_wielandt(M: list[list[int]], v) -> tuple[Fraction, Fraction]:
    """Exact min/max of (Mv)_i / v_i for a positive float vector v."""
    vq = [Fraction(x) for x in v]
    ratios = [sum(Fraction(a) * b for a, b in zip(row, vq)) / vi for row, vi in zip(M, vq)]
    return min(ratios), max(ratios)


def _round_down(q: Fraction) -> float:
    f = float(q)
    return math.nextafter(f, -math.inf) if Fraction(f) > q else f


def _round_up(q: Fraction) -> float:
    f = float(q)
    return math.nextafter(f, math.inf) if Fraction(f) < q else f


def spectral_radius(m: PFMatrix, tol: float = 1e-9, max_iter: int = 1_000_000) -> DilatationEstimate:
    """Power iteration bracketed by Collatz-Wielandt bounds, until upper - lower < tol."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not is_primitive(m):
        raise NotPrimitiveError("matrix is not primitive (reducible or periodic)")
    M = [list(r) for r in m.entries]
    A = np.array(M, dtype=float)
    v = np.ones(m.size)
    lower, upper = _collatz_wielandt(M, v)
    it = 0
    check_every = 1
    while upper - lower >= tol:
        if it >= max_iter:
            raise NotPrimitiveError(f"power iteration did not converge in {max_iter} steps")
        for _ in range(check_every):
            v = A @ v
            v /= v.max()
            it += 1
        lo, hi = _collatz_wielandt(M, v)
        # each quotient pair brackets the radius; keep the tightest seen
        lower, upper = max(lower, lo), min(upper, hi)
        if upper - lower >= tol and it > 64:
            check_every = min(check_every * 2, 256)
    lo_f, hi_f = _round_down(lower), _round_up(upper)
    return DilatationEstimate(float((lower + upper) / 2), (lo_f, hi_f), [], it, True)


def matrix_power_traces(m: PFMatrix, n_max: int) -> list[int]:
    """Exact tr(M^n) for n = 1..n_max by sequential multiplication."""
    A = m.array()
    P = A.copy()
    out = []
    for _ in range(n_max):
        out.append(int(np.trace(P)))
        P = P.dot(A)
    return out


def trace_by_squaring(m: PFMatrix, n: int) -> int:
    A = m.array()
    result = np.identity(m.size, dtype=object) * 1
    base = A.copy()
    while n:
        if n & 1:
            result = result.dot(base)
        base = base.dot(base)
        n >>= 1
    return int(np.trace(result))


def nth_root(value: int, n: int) -> float:
    if value <= 0:
        return 0.0
    if value.bit_length() < 1000:
        return float(value) ** (1.0 / n)
    return math.exp(math.log(value) / n)


def trace_limit_check(m: PFMatrix, n_max: int, tol: float = 1e-9) -> DilatationEstimate:
    """tr(M^n)^(1/n) for n = 1..n_max, checked against the certified spectral radius.

    `converged` records whether every term after the second eigenvalue stops
    dominating stays inside the envelope rho * 2(k-1) r^n / n, where r is the
    ratio of the second-largest eigenvalue modulus to rho.
    """
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    est = spectral_radius(m, tol)
    traces = matrix_power_traces(m, n_max)
    seq = [(n, nth_root(tr, n)) for n, tr in enumerate(traces, start=1)]
    rho = est.spectral_radius
    k = m.size
    mods = sorted(np.abs(np.linalg.eigvals(np.array(m.entries, dtype=float))), reverse=True)
    ratio = mods[1] / rho if k > 1 else 0.0
    ok = True
    for n, value in seq:
        tail = (k - 1) * ratio**n
        if tail > 0.5:
            continue
        envelope = rho * 2 * tail / n + 8 * rho * np.finfo(float).eps + tol
        if abs(value - rho) > envelope:
            ok = False
    return DilatationEstimate(rho, est.certified_interval, seq, est.iterations, ok)


def fixed_point_bound_check(fix_counts, hfk_top_dims) -> bool:
    """True iff #Fix(phi^n) <= dim HFK(next-to-top grading) - 1 for every supplied n."""
    fix = dict(fix_counts)
    dims = dict(hfk_top_dims)
    if len(fix) != len(fix_counts) or len(dims) != len(hfk_top_dims) or set(fix) != set(dims):
        raise ValueError("fixed-point counts and HFK dimensions must cover the same n values")
    return all(fix[n] <= dims[n] - 1 for n in fix)
