import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import cover_oracle
from conftest import grids
from ribbonkit import homology as hom
from ribbonkit.cover import (
    build_cover,
    count_generators,
    cover_differential,
    cover_homology_experimental,
    dimension_bound,
    enumerate_generators,
)
from ribbonkit.errors import SizeCeilingError
from ribbonkit.grid import GridDiagram


@settings(max_examples=60, deadline=None)
@given(grids(max_size=6), st.integers(1, 4))
def test_cover_invariants(g, n):
    d = build_cover(g, n)
    assert d.alpha_count == d.beta_count == g.size * n
    assert (d.incidence.sum(axis=0) == g.size).all() and (d.incidence.sum(axis=1) == g.size).all()
    assert sum(b.kind == "z" for b in d.basepoints) == sum(b.kind == "w" for b in d.basepoints) == g.size
    if n == 1:
        assert (d.incidence == 1).all()


def test_unknot_examples(corpus):
    d1 = build_cover(corpus["unknot"], 1)
    assert d1.incidence.tolist() == [[1, 1], [1, 1]]
    d2 = build_cover(corpus["unknot"], 2)
    assert d2.incidence.shape == (4, 4)
    assert count_generators(d1).exact == 2


def test_trefoil_double_cover(corpus):
    d = build_cover(corpus["trefoil"], 2)
    assert d.incidence.shape == (10, 10)
    count = count_generators(d)
    assert count.exact <= 14400 and count.bregman_bound == 14400 and count.bound_exact
    assert count.within_bound()


def test_too_large_reports_bound_only(corpus):
    count = count_generators(build_cover(corpus["5_2"], 4))
    assert count.exact is None and count.too_large
    assert count.bregman_bound == math.factorial(7) ** 4


def test_dimension_bound():
    assert dimension_bound(5, 1) == Fraction(15, 2)
    assert dimension_bound(2, 1) == 1
    assert dimension_bound(3, 2) == 9


def test_bad_sheet_count(corpus):
    with pytest.raises(ValueError):
        build_cover(corpus["unknot"], 0)


def _engine_edges(d):
    G = enumerate_generators(d)
    src, dst = cover_differential(d, G)
    n = d.sheets

    def as_set(row):
        return frozenset((J // n, J % n, int(r)) for J, r in enumerate(row))

    return {as_set(G[s]): None for s in range(len(G))}, {(as_set(G[s]), as_set(G[t])) for s, t in zip(src, dst)}


def _oracle_edges(g, n, sign=1):
    gens = cover_oracle.generators(list(g.xs), list(g.os), n, sign)
    edges = {}
    for gen in gens:
        key = frozenset((c, t, r) for (c, t), r in gen.items())
        for y in cover_oracle.rectangles_from(list(g.xs), list(g.os), n, gen, sign):
            edges[(key, y)] = edges.get((key, y), 0) + 1
    return {frozenset((c, t, r) for (c, t), r in gen.items()) for gen in gens}, {e for e, k in edges.items() if k % 2}


@pytest.mark.parametrize("sign", [1, -1])
@pytest.mark.parametrize("name, n", [("unknot", 2), ("unknot", 3), ("trefoil", 1), ("trefoil", 2)])
def test_cover_rectangles_match_cell_walk(corpus, name, n, sign):
    g = corpus[name]
    gens, edges = _engine_edges(build_cover(g, n, sign))
    ogens, oedges = _oracle_edges(g, n, sign)
    assert set(gens) == ogens
    assert edges == oedges


@settings(max_examples=15, deadline=None)
@given(grids(min_size=3, max_size=4).filter(lambda g: g.is_knot()))
def test_random_cover_rectangles_match_cell_walk(g):
    gens, edges = _engine_edges(build_cover(g, 2))
    ogens, oedges = _oracle_edges(g, 2)
    assert set(gens) == ogens and edges == oedges


def test_cover_homology_small_cases(corpus):
    for n in (1, 2, 3):
        assert cover_homology_experimental(build_cover(corpus["unknot"], n)).hat_total == 1
    one = cover_homology_experimental(build_cover(corpus["trefoil"], 1))
    assert one.hat_total == hom.compute(corpus["trefoil"]).hat.total()
    assert one.tilde_total == hom.compute(corpus["trefoil"]).tilde.total()
    two = cover_homology_experimental(build_cover(corpus["trefoil"], 2))
    assert two.d_squared_zero and two.generators == 6032
    assert two.hat_total <= dimension_bound(5, 2)


def test_cover_complex_ceiling(corpus):
    with pytest.raises(SizeCeilingError):
        enumerate_generators(build_cover(corpus["trefoil"], 3), ceiling=50_000)


def test_generator_count_equals_enumeration():
    g = GridDiagram(4, (2, 3, 0, 1), (0, 1, 2, 3))
    for n in (1, 2):
        d = build_cover(g, n)
        assert count_generators(d).exact == len(enumerate_generators(d))
