"""Tilde-flavour grid homology over Z/2 and the knot Floer data derived from it.

Gradings use the standard counting formulas.  For planar point sets P, Q let
I(P, Q) count pairs with p strictly southwest of q, and J = (I(P,Q) + I(Q,P))/2:

    M_O(x) = J(x,x) - 2 J(x,O) + J(O,O) + 1
    M_X(x) = J(x,x) - 2 J(x,X) + J(X,X) + 1
    A(x)   = (M_O(x) - M_X(x)) / 2 - (n - 1) / 2

with state points at lattice points (c, x[c]) and markings at cell centres.
The minimal unknot grid then has hat homology supported in (0, 0).
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import permutations
from typing import Iterator

import numpy as np

from . import gf2
from .errors import ConsistencyError, NotAKnotError, SizeCeilingError
from .grid import GridDiagram

DEFAULT_CEILING = 8


@dataclass(frozen=True)
class GridState:
    match: tuple[int, ...]
    maslov: int
    alexander: int


@dataclass(frozen=True)
class BigradedDims:
    """Finite table (maslov, alexander) -> dimension; zero entries are dropped."""

    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {(int(m), int(a)): int(d) for (m, a), d in self.entries.items() if d}
        if any(d < 0 for d in clean.values()):
            raise ValueError("negative dimension in bigraded table")
        object.__setattr__(self, "entries", dict(sorted(clean.items())))

    def total(self) -> int:
        return sum(self.entries.values())

    def by_alexander(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for (_, a), d in self.entries.items():
            out[a] = out.get(a, 0) + d
        return dict(sorted(out.items()))

    def rows(self) -> list[tuple[int, int, int]]:
        return [(m, a, d) for (m, a), d in self.entries.items()]

    @classmethod
    def from_rows(cls, rows) -> "BigradedDims":
        out: dict = {}
        for m, a, d in rows:
            out[(m, a)] = out.get((m, a), 0) + d
        return cls(out)

    def __len__(self):
        return len(self.entries)


@dataclass(frozen=True)
class AlexanderPolynomial:
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {int(e): int(c) for e, c in self.coeffs.items() if c}
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    @property
    def degree(self) -> int:
        return max((abs(e) for e in self.coeffs), default=0)

    def at_one(self) -> int:
        return sum(self.coeffs.values())

    def is_symmetric(self) -> bool:
        return all(self.coeffs.get(-e, 0) == c for e, c in self.coeffs.items())

    def coefficient_list(self) -> list[int]:
        """Coefficients from exponent -degree up to +degree."""
        d = self.degree
        return [self.coeffs.get(e, 0) for e in range(-d, d + 1)]

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for e, c in sorted(self.coeffs.items(), reverse=True):
            mono = "" if e == 0 else ("t" if e == 1 else f"t^{e}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{mono}"
            terms.append(("-" if c < 0 else "+", body))
        text = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text


@dataclass(frozen=True)
class FiberednessReport:
    genus: int
    fibered: bool
    nearly_fibered: bool
    top_dimension: int


@dataclass
class StateTable:
    """All grid states in lexicographic order, with gradings as arrays."""

    grid: GridDiagram
    perms: np.ndarray
    codes: np.ndarray
    maslov: np.ndarray
    alexander: np.ndarray

    def __len__(self):
        return len(self.perms)

    def state(self, k: int) -> GridState:
        return GridState(tuple(int(v) for v in self.perms[k]), int(self.maslov[k]), int(self.alexander[k]))


def _check_ceiling(g: GridDiagram, ceiling: int):
    if g.size > ceiling:
        raise SizeCeilingError(
            f"grid size {g.size} exceeds ceiling {ceiling} ({math.factorial(g.size)} states); raise --ceiling to proceed"
        )


def _southwest_counts(P: np.ndarray, marks) -> np.ndarray:
    """I(x, M) + I(M, x) for every state row of P against half-integer markings M."""
    n = P.shape[1]
    total = np.zeros(P.shape[0], dtype=np.int64)
    for k in range(n):
        col = P[:, k]
        for c, r in enumerate(marks):
            if k <= c:
                total += col <= r
            else:
                total += col > r
    return total


def _marking_self_term(marks) -> int:
    n = len(marks)
    return sum(1 for c in range(n) for d in range(c + 1, n) if marks[c] < marks[d])


def grading_arrays(g: GridDiagram, P: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Maslov and Alexander gradings of each state row of P (Alexander must be integral)."""
    n = g.size
    jxx = np.zeros(P.shape[0], dtype=np.int64)
    for k in range(n):
        for l in range(k + 1, n):
            jxx += P[:, k] < P[:, l]
    m_o = jxx - _southwest_counts(P, g.os) + _marking_self_term(g.os) + 1
    m_x = jxx - _southwest_counts(P, g.xs) + _marking_self_term(g.xs) + 1
    twice_a = m_o - m_x - (n - 1)
    if np.any(twice_a % 2):
        raise ConsistencyError("half-integral Alexander grading: the grid is not a knot")
    return m_o, twice_a // 2


def state_table(g: GridDiagram, ceiling: int = DEFAULT_CEILING, graded: bool = True) -> StateTable:
    """Enumerate all n! states.  `graded=False` skips gradings (links, d^2 checks)."""
    _check_ceiling(g, ceiling)
    n = g.size
    perms = np.array(list(permutations(range(n))), dtype=np.int64)
    weights = n ** np.arange(n - 1, -1, -1, dtype=np.int64)
    codes = perms @ weights
    if graded:
        if not g.is_knot():
            raise NotAKnotError(f"grid presents a {g.components()}-component link; gradings need a knot")
        maslov, alexander = grading_arrays(g, perms)
    else:
        maslov = alexander = np.zeros(len(perms), dtype=np.int64)
    return StateTable(g, perms, codes, maslov, alexander)


def enumerate_states(g: GridDiagram, ceiling: int = DEFAULT_CEILING) -> Iterator[GridState]:
    table = state_table(g, ceiling)
    for k in range(len(table)):
        yield table.state(k)


def marking_free_table(g: GridDiagram) -> np.ndarray:
    """free[i, j, a, b]: the rectangle east from column i to j, north from row a to b, holds no marking."""
    n = g.size
    free = np.ones((n, n, n, n), dtype=bool)
    a = np.arange(n)[:, None]
    b = np.arange(n)[None, :]
    height = (b - a) % n
    for i in range(n):
        for j in range(n):
            if i == j:
                free[i, j] = False
                continue
            for step in range((j - i) % n):
                c = (i + step) % n
                for r in (g.xs[c], g.os[c]):
                    free[i, j] &= ~((r - a) % n < height)
    return free


def _rectangle_moves(n, P, free, weights):
    """Empty rectangles leaving each state row of P, as (row index, target code) arrays."""
    src_parts, code_parts = [], []
    for i in range(n):
        a = P[:, i]
        for j in range(n):
            if i == j:
                continue
            b = P[:, j]
            ok = free[i, j, a, b]
            height = (b - a) % n
            for step in range(1, (j - i) % n):
                d = (P[:, (i + step) % n] - a) % n
                ok &= ~((d > 0) & (d < height))
            rows = np.nonzero(ok)[0]
            if rows.size == 0:
                continue
            ra, rb = a[rows], b[rows]
            src_parts.append(rows)
            code_parts.append((P[rows] @ weights) + (rb - ra) * weights[i] + (ra - rb) * weights[j])
    if not src_parts:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty
    return np.concatenate(src_parts), np.concatenate(code_parts)


def _edges_worker(args):
    n, P, offset, free, weights = args
    src, codes = _rectangle_moves(n, P, free, weights)
    return src + offset, codes


def reduce_mod2(src: np.ndarray, dst: np.ndarray, n_states: int) -> tuple[np.ndarray, np.ndarray]:
    """Cancel repeated edges in pairs and return them sorted by (src, dst)."""
    if src.size == 0:
        return src, dst
    key = src.astype(np.int64) * n_states + dst
    uniq, counts = np.unique(key, return_counts=True)
    keep = uniq[counts % 2 == 1]
    return keep // n_states, keep % n_states


def differential_edges(table: StateTable, workers: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """The Z/2 boundary map of the whole complex, as sorted (source, target) index arrays.

    Work is split into contiguous state ranges; the merge sorts, so the result
    does not depend on `workers`.
    """
    g = table.grid
    n = g.size
    free = marking_free_table(g)
    weights = n ** np.arange(n - 1, -1, -1, dtype=np.int64)
    N = len(table)
    if workers <= 1 or N < 2 * workers:
        src, codes = _rectangle_moves(n, table.perms, free, weights)
    else:
        bounds = np.linspace(0, N, workers + 1).astype(int)
        jobs = [(n, table.perms[lo:hi], lo, free, weights) for lo, hi in zip(bounds[:-1], bounds[1:])]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_edges_worker, jobs))
        src = np.concatenate([p[0] for p in parts])
        codes = np.concatenate([p[1] for p in parts])
    dst = np.searchsorted(table.codes, codes)
    if np.any(dst >= N) or np.any(table.codes[np.minimum(dst, N - 1)] != codes):
        raise ConsistencyError("rectangle target is not a grid state")
    return reduce_mod2(src, dst, N)


def differential(g: GridDiagram, x: GridState) -> set[GridState]:
    """States reached from x by one empty rectangle, counted mod 2."""
    n = g.size
    weights = n ** np.arange(n - 1, -1, -1, dtype=np.int64)
    _, codes = _rectangle_moves(n, np.array([x.match], dtype=np.int64), marking_free_table(g), weights)
    uniq, counts = np.unique(codes, return_counts=True)
    targets = [tuple(int(c) // int(w) % n for w in weights) for c in uniq[counts % 2 == 1]]
    if not targets:
        return set()
    m, a = grading_arrays(g, np.array(targets, dtype=np.int64))
    return {GridState(y, int(mm), int(aa)) for y, mm, aa in zip(targets, m, a)}


def d_squared_is_zero(src: np.ndarray, dst: np.ndarray, n_states: int) -> bool:
    """Compose the edge list with itself and check every path count is even."""
    if src.size == 0:
        return True
    order = np.argsort(src, kind="stable")
    s, d = src[order], dst[order]
    starts = np.searchsorted(s, np.arange(n_states))
    ends = np.searchsorted(s, np.arange(n_states), side="right")
    fan = ends[d] - starts[d]
    first = np.repeat(s, fan)
    mid_offsets = np.repeat(starts[d], fan) + (np.arange(fan.sum()) - np.repeat(np.cumsum(fan) - fan, fan))
    last = d[mid_offsets]
    key = first.astype(np.int64) * n_states + last
    _, counts = np.unique(key, return_counts=True)
    return bool(np.all(counts % 2 == 0))


def _block_ranks(table: StateTable, src, dst):
    """Rank of the differential leaving each (maslov, alexander) block."""
    m, a = table.maslov, table.alexander
    if src.size and (np.any(m[dst] != m[src] - 1) or np.any(a[dst] != a[src])):
        raise ConsistencyError("differential does not lower Maslov by one and preserve Alexander")
    local = np.zeros(len(table), dtype=np.int64)
    blocks: dict[tuple[int, int], list[int]] = {}
    for k, key in enumerate(zip(m.tolist(), a.tolist())):
        members = blocks.setdefault(key, [])
        local[k] = len(members)
        members.append(k)
    by_block: dict[tuple[int, int], list] = {}
    for s, d in zip(src.tolist(), dst.tolist()):
        by_block.setdefault((int(m[s]), int(a[s])), []).append((int(local[s]), int(local[d])))
    ranks = {}
    for key, pairs in by_block.items():
        rows = gf2.pack_rows(len(blocks[key]), pairs)
        ranks[key] = gf2.rank(rows)
    return ranks, {k: len(v) for k, v in blocks.items()}


def tilde_from_table(table: StateTable, workers: int = 1, check: bool = True) -> BigradedDims:
    src, dst = differential_edges(table, workers)
    if check and not d_squared_is_zero(src, dst, len(table)):
        raise ConsistencyError("d^2 != 0 on the grid complex")
    ranks, sizes = _block_ranks(table, src, dst)
    dims = {}
    for (m, a), size in sizes.items():
        dims[(m, a)] = size - ranks.get((m, a), 0) - ranks.get((m + 1, a), 0)
    return BigradedDims(dims)


def homology_tilde(g: GridDiagram, ceiling: int = DEFAULT_CEILING, workers: int = 1) -> BigradedDims:
    return tilde_from_table(state_table(g, ceiling), workers)


def deconvolve(tilde: BigradedDims, size: int) -> BigradedDims:
    """Divide the tilde Poincare polynomial by (1 + m^-1 a^-1)^(size - 1), exactly."""
    diagonals: dict[int, dict[int, int]] = {}
    for (m, a), d in tilde.entries.items():
        diagonals.setdefault(m - a, {})[a] = d
    out = {}
    for diag, poly in diagonals.items():
        for _ in range(size - 1):
            if not poly:
                break
            lo, hi = min(poly), max(poly)
            quotient = {}
            carry = 0
            for s in range(hi, lo, -1):
                carry = poly.get(s, 0) - carry
                if carry < 0:
                    raise ConsistencyError("tilde table is not divisible by the (1 + m^-1 a^-1) factor")
                quotient[s] = carry
            if poly.get(lo, 0) != carry:
                raise ConsistencyError("inexact deconvolution of the tilde table")
            poly = {s: v for s, v in quotient.items() if v}
        for a, d in poly.items():
            out[(diag + a, a)] = d
    hat = BigradedDims(out)
    if hat.total() * 2 ** (size - 1) != tilde.total():
        raise ConsistencyError("tilde dimension is not 2^(n-1) times the hat dimension")
    return hat


def hfk_hat(g: GridDiagram, ceiling: int = DEFAULT_CEILING, workers: int = 1) -> BigradedDims:
    return deconvolve(homology_tilde(g, ceiling, workers), g.size)


def alexander_polynomial(h: BigradedDims) -> AlexanderPolynomial:
    """Graded Euler characteristic sum (-1)^m t^a dim, sign-normalized so that Delta(1) = 1."""
    coeffs: dict[int, int] = {}
    for (m, a), d in h.entries.items():
        coeffs[a] = coeffs.get(a, 0) + (-1) ** (m % 2) * d
    poly = AlexanderPolynomial(coeffs)
    if abs(poly.at_one()) != 1:
        raise ConsistencyError(f"Euler characteristic evaluates to {poly.at_one()} at t = 1")
    if not poly.is_symmetric():
        raise ConsistencyError(f"Euler characteristic {poly} is not symmetric")
    if poly.at_one() < 0:
        poly = AlexanderPolynomial({e: -c for e, c in poly.coeffs.items()})
    return poly


def genus_and_fiberedness(h: BigradedDims) -> FiberednessReport:
    if not h.entries:
        raise ValueError("empty homology table")
    per_a = h.by_alexander()
    genus = max(a for a, d in per_a.items() if d > 0)
    top = per_a[genus]
    return FiberednessReport(genus=genus, fibered=top == 1, nearly_fibered=top == 2, top_dimension=top)


@dataclass(frozen=True)
class HomologyResult:
    grid: GridDiagram
    tilde: BigradedDims
    hat: BigradedDims
    alexander: AlexanderPolynomial
    fiberedness: FiberednessReport


def compute(g: GridDiagram, ceiling: int = DEFAULT_CEILING, workers: int = 1) -> HomologyResult:
    """Full pipeline: tilde homology, hat dimensions, Alexander polynomial, genus/fiberedness."""
    tilde = homology_tilde(g, ceiling, workers)
    hat = deconvolve(tilde, g.size)
    for (m, a), d in hat.entries.items():
        if hat.entries.get((m - 2 * a, -a), 0) != d:
            raise ConsistencyError(f"hat table violates Alexander symmetry at ({m}, {a})")
    return HomologyResult(g, tilde, hat, alexander_polynomial(hat), genus_and_fiberedness(hat))
