import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from ribbonkit.permanent import bregman_bound, permanent, permanent_by_permutations


@st.composite
def small_matrices(draw, max_size=8, max_entry=3):
    k = draw(st.integers(1, max_size))
    return np.array(draw(st.lists(st.lists(st.integers(0, max_entry), min_size=k, max_size=k), min_size=k, max_size=k)))


@settings(max_examples=150, deadline=None)
@given(small_matrices())
def test_matches_permutation_sum(A):
    assert permanent(A) == permanent_by_permutations(A)


@settings(max_examples=30, deadline=None)
@given(small_matrices(max_size=6, max_entry=2))
def test_matches_independent_brute_force(A):
    assert permanent(A) == oracle.permanent_brute(A.tolist())


def test_all_ones_and_blocks():
    for d in range(1, 9):
        assert permanent(np.ones((d, d), dtype=int)) == math.factorial(d)
    block = np.kron(np.eye(3, dtype=int), np.ones((4, 4), dtype=int))
    assert permanent(block) == math.factorial(4) ** 3
    assert bregman_bound(block) == (math.factorial(4) ** 3, True)


def test_large_entries_use_modular_route():
    A = np.full((10, 10), 1000)
    assert permanent(A) == math.factorial(10) * 1000**10


def test_worker_split_is_exact():
    A = np.random.default_rng(3).integers(0, 2, (18, 18))
    assert permanent(A, workers=3) == permanent(A)


def test_irregular_bound_is_a_float_upper_bound():
    A = np.array([[1, 1, 0], [1, 1, 1], [0, 1, 1]])
    bound, exact = bregman_bound(A)
    assert not exact and permanent(A) <= bound


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        permanent(np.ones((2, 3)))
    with pytest.raises(ValueError):
        permanent(np.array([[-1]]))
