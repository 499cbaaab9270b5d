"""Brute-force reference computations used to freeze golden values.

Nothing here imports ribbonkit.  Grids are plain (xs, os) sequences with
xs[c] / os[c] the row of the X / O marking in column c, row 0 at the bottom.
Everything is done the slow, obvious way: explicit point sets with Fraction
coordinates, rectangles checked cell by cell, dense GF(2) elimination.
"""

from fractions import Fraction
from itertools import permutations

import sympy


def _sw_count(P, Q):
    return sum(1 for p in P for q in Q if p[0] < q[0] and p[1] < q[1])


def _J(P, Q):
    return Fraction(_sw_count(P, Q) + _sw_count(Q, P), 2)


def gradings(xs, os, match):
    n = len(xs)
    half = Fraction(1, 2)
    X = [(c + half, xs[c] + half) for c in range(n)]
    O = [(c + half, os[c] + half) for c in range(n)]
    x = [(Fraction(c), Fraction(match[c])) for c in range(n)]
    m_o = _J(x, x) - 2 * _J(x, O) + _J(O, O) + 1
    m_x = _J(x, x) - 2 * _J(x, X) + _J(X, X) + 1
    a = (m_o - m_x) / 2 - Fraction(n - 1, 2)
    assert m_o.denominator == 1
    return int(m_o), a


def _cyclic_range(start, length, n):
    return [(start + k) % n for k in range(length)]


def rectangles_from(xs, os, match):
    """All targets y reached from `match` by an empty rectangle, with multiplicity."""
    n = len(xs)
    out = []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            a, b = match[i], match[j]
            width = (j - i) % n
            height = (b - a) % n
            cols = _cyclic_range(i, width, n)
            rows = _cyclic_range(a, height, n)
            cells = {(c, r) for c in cols for r in rows}
            if any((c, xs[c]) in cells or (c, os[c]) in cells for c in range(n)):
                continue
            inner_cols = _cyclic_range(i + 1, width - 1, n)
            inner_rows = set(_cyclic_range(a + 1, height - 1, n))
            if any(match[c] in inner_rows for c in inner_cols):
                continue
            y = list(match)
            y[i], y[j] = b, a
            out.append(tuple(y))
    return out


def gf2_rank_dense(rows, ncols):
    rows = [list(r) for r in rows]
    rank = 0
    for col in range(ncols):
        piv = next((k for k in range(rank, len(rows)) if rows[k][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for k in range(len(rows)):
            if k != rank and rows[k][col]:
                rows[k] = [u ^ v for u, v in zip(rows[k], rows[rank])]
        rank += 1
    return rank


def tilde_homology(xs, os):
    """Return ({(maslov, alexander): dim}, d_squared_is_zero)."""
    n = len(xs)
    states = list(permutations(range(n)))
    grade = {s: gradings(xs, os, s) for s in states}
    boundary = {}
    for s in states:
        acc = {}
        for y in rectangles_from(xs, os, s):
            acc[y] = acc.get(y, 0) ^ 1
        boundary[s] = {y for y, v in acc.items() if v}
    d2_zero = True
    for s in states:
        acc = {}
        for y in boundary[s]:
            for z in boundary[y]:
                acc[z] = acc.get(z, 0) ^ 1
        if any(acc.values()):
            d2_zero = False
    blocks = {}
    for s in states:
        blocks.setdefault(grade[s], []).append(s)
    rank_out = {}
    for key, members in blocks.items():
        m, a = key
        target = blocks.get((m - 1, a), [])
        index = {t: k for k, t in enumerate(target)}
        rows = []
        for s in members:
            row = [0] * len(target)
            for y in boundary[s]:
                assert grade[y] == (m - 1, a)
                row[index[y]] = 1
            rows.append(row)
        rank_out[key] = gf2_rank_dense(rows, len(target)) if target else 0
    dims = {}
    for key, members in blocks.items():
        m, a = key
        d = len(members) - rank_out[key] - rank_out.get((m + 1, a), 0)
        if d:
            dims[(m, int(a) if a.denominator == 1 else a)] = d
    return dims, d2_zero


def hat_from_tilde(tilde, n):
    """Divide the two-variable Poincare polynomial by (1 + q^-1 t^-1)^(n-1)."""
    q, t = sympy.symbols("q t")
    num = sum(d * q ** m * t ** a for (m, a), d in tilde.items())
    den = (1 + 1 / (q * t)) ** (n - 1)
    quotient = sympy.cancel(sympy.together(num / den))
    poly = sympy.Poly(sympy.expand(quotient * (q * t) ** 40), q, t)
    out = {}
    for (em, ea), c in poly.terms():
        assert c > 0 and c == int(c)
        out[(em - 40, ea - 40)] = int(c)
    return out


def minesweeper_alexander(xs, os):
    """Alexander polynomial from the winding-number determinant of the grid.

    det(t^{-w(p)}) over lattice points p equals +-t^k (1 - t)^(n-1) Delta(t).
    Returns {exponent: coefficient}, symmetric with Delta(1) = 1.
    """
    n = len(xs)
    t = sympy.symbols("t")

    def winding(px, py):
        w = 0
        for c in range(n):
            if c + 0.5 < px:
                lo, hi = sorted((xs[c], os[c]))
                if lo + 0.5 < py < hi + 0.5:
                    w += 1 if os[c] > xs[c] else -1
        return w

    M = sympy.Matrix(n, n, lambda i, j: t ** (-winding(i, j)))
    det = sympy.factor(M.det(method="berkowitz"))
    quotient = sympy.cancel(det / (1 - t) ** (n - 1))
    num, den = sympy.fraction(sympy.together(quotient))
    p = sympy.Poly(num, t)
    coeffs = {e[0]: int(c) for e, c in p.terms()}
    lo, hi = min(coeffs), max(coeffs)
    shift = (lo + hi) // 2
    out = {e - shift: c for e, c in coeffs.items()}
    if sum(out.values()) < 0:
        out = {e: -c for e, c in out.items()}
    return out


def permanent_brute(matrix):
    n = len(matrix)
    total = 0
    for perm in permutations(range(n)):
        prod = 1
        for i in range(n):
            prod *= matrix[i][perm[i]]
            if not prod:
                break
        total += prod
    return total
