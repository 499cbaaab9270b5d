"""Combinatorial n-fold cyclic branched covers of grid diagrams.

The toroidal grid is the Heegaard surface and the 2*size markings are the
branch points.  Branch cuts run along the vertical knot segment of each
column (x = c + 1/2, between its X and O).  A vertical beta circle never
meets a cut, so its n lifts sit on fixed sheets.  A horizontal alpha circle at
height r crosses the cuts that span r; each crossing moves it by
`sheet_sign` * (+1 for an upward segment, -1 for a downward one), mod n.

Lift indices: alpha lift (r, s) -> r*n + s, beta lift (c, t) -> c*n + t.  The
alpha lift (r, s) meets the beta lift (c, t) exactly when
t == s + shift[r, c] (mod n), where shift[r, c] is the signed number of cuts
crossed between column 0 and column c along height r.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import gf2
from .errors import ConsistencyError, SizeCeilingError
from .grid import GridDiagram
from .homology import BigradedDims, marking_free_table, reduce_mod2, d_squared_is_zero
from .permanent import DEFAULT_CEILING as PERMANENT_CEILING
from .permanent import bregman_bound, permanent

DEFAULT_COMPLEX_CEILING = 50_000


@dataclass(frozen=True)
class Basepoint:
    kind: str  # "w" for an O marking, "z" for an X marking
    column: int
    row: int
    sheet: str = "*"  # branch points are fixed by every deck transformation


@dataclass(frozen=True)
class CoverDiagram:
    base: GridDiagram
    sheets: int
    alpha_count: int
    beta_count: int
    incidence: np.ndarray = field(repr=False)
    shift: np.ndarray = field(repr=False)
    basepoints: tuple[Basepoint, ...] = field(repr=False)
    sheet_sign: int = 1


@dataclass(frozen=True)
class MatchingCount:
    exact: int | None
    bregman_bound: Fraction | float
    bound_exact: bool
    too_large: bool = False

    def within_bound(self) -> bool | None:
        if self.exact is None:
            return None
        return self.exact <= self.bregman_bound


def sheet_shifts(g: GridDiagram, n: int, sheet_sign: int = 1) -> np.ndarray:
    """shift[r, c]: sheet offset of an alpha lift at column c relative to column 0 (mod n)."""
    size = g.size
    step = np.zeros((size, size), dtype=np.int64)
    for c in range(size):
        lo, hi = sorted((g.xs[c], g.os[c]))
        direction = 1 if g.os[c] > g.xs[c] else -1
        for r in range(lo + 1, hi + 1):
            step[r, c] = sheet_sign * direction
    shift = np.zeros((size, size + 1), dtype=np.int64)
    shift[:, 1:] = np.cumsum(step, axis=1)
    if np.any(shift[:, size] != 0):
        raise ConsistencyError("alpha circle does not close up in the cover")
    return shift[:, :size] % n


def build_cover(g: GridDiagram, n: int, sheet_sign: int = 1) -> CoverDiagram:
    if n < 1:
        raise ValueError(f"number of sheets must be positive, got {n}")
    if sheet_sign not in (1, -1):
        raise ValueError("sheet_sign must be +1 or -1")
    size = g.size
    shift = sheet_shifts(g, n, sheet_sign)
    L = size * n
    inc = np.zeros((L, L), dtype=np.int64)
    for r in range(size):
        for s in range(n):
            for c in range(size):
                t = (s + shift[r, c]) % n
                inc[r * n + s, c * n + t] += 1
    basepoints = tuple(
        [Basepoint("z", c, g.xs[c]) for c in range(size)] + [Basepoint("w", c, g.os[c]) for c in range(size)]
    )
    d = CoverDiagram(g, n, L, L, inc, shift, basepoints, sheet_sign)
    check_cover(d)
    return d


def check_cover(d: CoverDiagram) -> None:
    size = d.base.size
    inc = d.incidence
    if d.alpha_count != size * d.sheets or d.beta_count != size * d.sheets:
        raise ConsistencyError("cover must have size*n alpha and beta circles")
    if inc.shape != (d.alpha_count, d.beta_count):
        raise ConsistencyError("incidence matrix has the wrong shape")
    if np.any(inc.sum(axis=1) != size) or np.any(inc.sum(axis=0) != size):
        raise ConsistencyError("every alpha and beta circle must meet the other family size times")
    if sum(b.kind == "z" for b in d.basepoints) != size or sum(b.kind == "w" for b in d.basepoints) != size:
        raise ConsistencyError("cover must carry size z and size w basepoints")
    if d.sheets == 1 and np.any(inc != 1):
        raise ConsistencyError("one-sheeted cover must reproduce the all-ones grid incidence")


def count_generators(d: CoverDiagram, ceiling: int = PERMANENT_CEILING, workers: int = 1) -> MatchingCount:
    """Exact matching count, or the bound alone (flagged) when size*n exceeds the ceiling."""
    bound, exact_bound = bregman_bound(d.incidence)
    if d.alpha_count > ceiling:
        return MatchingCount(None, bound, exact_bound, too_large=True)
    return MatchingCount(permanent(d.incidence, workers), bound, exact_bound)


def dimension_bound(size: int, n: int) -> Fraction:
    """(size!)^n / 2^(size - 1): the ceiling on dim HFK of the lifted knot."""
    if size < 2 or n < 1:
        raise ValueError("need size >= 2 and n >= 1")
    return Fraction(math.factorial(size) ** n, 2 ** (size - 1))


def enumerate_generators(d: CoverDiagram, ceiling: int = DEFAULT_COMPLEX_CEILING) -> np.ndarray:
    """All perfect matchings, as rows G with G[c*n + t] = base row of the matched point.

    Rows come out in lexicographic order.
    """
    size, n = d.base.size, d.sheets
    L = size * n
    if float(size) ** L >= 2.0**62:
        raise SizeCeilingError(f"cover with {L} beta lifts is beyond the generator encoding limit")
    frontier = np.zeros((1, 0), dtype=np.int64)
    used = np.zeros((1, L), dtype=bool)
    for J in range(L):
        c, t = divmod(J, n)
        alpha = np.array([r * n + (t - d.shift[r, c]) % n for r in range(size)])
        parent = np.repeat(np.arange(len(frontier)), size)
        rows = np.tile(np.arange(size), len(frontier))
        keep = ~used[parent, alpha[rows]]
        parent, rows = parent[keep], rows[keep]
        frontier = np.column_stack([frontier[parent], rows])
        used = used[parent].copy()
        used[np.arange(len(rows)), alpha[rows]] = True
        if len(frontier) > ceiling:
            raise SizeCeilingError(f"cover complex exceeds {ceiling} generators")
    return frontier


def _cover_moves(d: CoverDiagram, G: np.ndarray, weights: np.ndarray):
    size, n = d.base.size, d.sheets
    free = marking_free_table(d.base)
    Sh = d.shift
    src_parts, code_parts = [], []
    L = size * n
    for J1 in range(L):
        i, t1 = divmod(J1, n)
        a = G[:, J1]
        for J2 in range(L):
            j, t2 = divmod(J2, n)
            if i == j:
                continue
            b = G[:, J2]
            ok = free[i, j, a, b] & ((t2 - t1 - Sh[a, j] + Sh[a, i]) % n == 0)
            if not ok.any():
                continue
            height = (b - a) % size
            for step in range(1, (j - i) % size):
                c = (i + step) % size
                sheet_here = (t1 + Sh[a, c] - Sh[a, i]) % n
                for t in range(n):
                    dr = (G[:, c * n + t] - a) % size
                    ok &= ~((dr > 0) & (dr < height) & (sheet_here == t))
            rows = np.nonzero(ok)[0]
            if rows.size == 0:
                continue
            ra, rb = a[rows], b[rows]
            src_parts.append(rows)
            code_parts.append(G[rows] @ weights + (rb - ra) * weights[J1] + (ra - rb) * weights[J2])
    if not src_parts:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty
    return np.concatenate(src_parts), np.concatenate(code_parts)


def cover_differential(d: CoverDiagram, G: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Empty embedded rectangles of the cover diagram avoiding every basepoint, mod 2."""
    size = d.base.size
    L = G.shape[1]
    weights = size ** np.arange(L - 1, -1, -1, dtype=np.int64)
    codes = G @ weights
    src, tcodes = _cover_moves(d, G, weights)
    dst = np.searchsorted(codes, tcodes)
    N = len(G)
    if np.any(dst >= N) or np.any(codes[np.minimum(dst, N - 1)] != tcodes):
        raise ConsistencyError("cover rectangle lands outside the generator set")
    return reduce_mod2(src, dst, N)


def relative_gradings(n_gens: int, src: np.ndarray, dst: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Component label and relative Maslov grading from the rectangle graph.

    Each edge lowers the grading by one.  Gradings are shifted so the lowest
    generator of every component sits at 0.
    """
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n_gens)]
    for s, t in zip(src.tolist(), dst.tolist()):
        adj[s].append((t, -1))
        adj[t].append((s, 1))
    comp = np.full(n_gens, -1, dtype=np.int64)
    grade = np.zeros(n_gens, dtype=np.int64)
    label = 0
    for root in range(n_gens):
        if comp[root] >= 0:
            continue
        comp[root] = label
        queue = deque([root])
        members = [root]
        while queue:
            u = queue.popleft()
            for v, delta in adj[u]:
                if comp[v] < 0:
                    comp[v] = label
                    grade[v] = grade[u] + delta
                    queue.append(v)
                    members.append(v)
                elif grade[v] != grade[u] + delta:
                    raise ConsistencyError("rectangle graph admits no consistent relative Maslov grading")
        grade[members] -= grade[members].min()
        label += 1
    return comp, grade


@dataclass(frozen=True)
class CoverHomology:
    """Homology of the cover complex.

    `table` is keyed (relative maslov, component index): gradings are only
    relative, normalized per connected component of the rectangle graph.
    """

    sheets: int
    generators: int
    table: BigradedDims
    tilde_total: int
    hat_total: Fraction
    d_squared_zero: bool


def cover_homology_experimental(d: CoverDiagram, ceiling: int = DEFAULT_COMPLEX_CEILING) -> CoverHomology:
    G = enumerate_generators(d, ceiling)
    src, dst = cover_differential(d, G)
    if not d_squared_is_zero(src, dst, len(G)):
        raise ConsistencyError("d^2 != 0 on the cover complex: the sheet convention is inconsistent")
    comp, grade = relative_gradings(len(G), src, dst)
    blocks: dict[tuple[int, int], list[int]] = {}
    local = np.zeros(len(G), dtype=np.int64)
    for k, key in enumerate(zip(grade.tolist(), comp.tolist())):
        members = blocks.setdefault(key, [])
        local[k] = len(members)
        members.append(k)
    pairs: dict[tuple[int, int], list] = {}
    for s, t in zip(src.tolist(), dst.tolist()):
        pairs.setdefault((int(grade[s]), int(comp[s])), []).append((int(local[s]), int(local[t])))
    ranks = {key: gf2.rank(gf2.pack_rows(len(blocks[key]), p)) for key, p in pairs.items()}
    dims = {
        (m, c): len(members) - ranks.get((m, c), 0) - ranks.get((m + 1, c), 0)
        for (m, c), members in blocks.items()
    }
    table = BigradedDims(dims)
    total = table.total()
    hat_total = Fraction(total, 2 ** (d.base.size - 1))
    if hat_total.denominator != 1:
        raise ConsistencyError(f"cover homology dimension {total} is not divisible by 2^(n-1)")
    return CoverHomology(d.sheets, len(G), table, total, hat_total, True)
