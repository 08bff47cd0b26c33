import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vandervolt.basis import monomial_basis
from vandervolt.linalg import determinant
from vandervolt.selection import (
    MaxVolConvergenceError,
    Method,
    SubsetSearchTooLargeError,
    exhaustive_maxminsv,
    exhaustive_maxvol,
    maxvol_rows,
    near_singular,
    select_rows,
)
from vandervolt.sparse_grid import smolyak_basis, smolyak_grid
from vandervolt.vandermonde import build_generalized

SMALL = np.array([[1.0, 0.0], [0.0, 1.0], [2.0, 2.0]])


def one_based(sel):
    return {i + 1 for i in sel.row_indices}


def brute_force(v, score):
    m, n = v.shape
    best, best_rows = -np.inf, None
    for rows in itertools.combinations(range(m), n):
        s = score(v[list(rows)])
        if s > best:
            best, best_rows = s, rows
    return best_rows, best


def sigma_min(a):
    return np.linalg.svd(a, compute_uv=False)[-1]


def dominance(v, rows):
    return np.max(np.abs(v @ np.linalg.inv(v[list(rows)])))


def test_maxvol_small_example():
    sel = maxvol_rows(SMALL, tol=0.0)
    assert one_based(sel) == {1, 3}
    assert sel.volume == pytest.approx(2.0)
    assert not sel.dismissed


def test_maxvol_square_is_identity_selection(rng):
    v = rng.uniform(-1, 1, (5, 5))
    assert maxvol_rows(v).row_indices == (0, 1, 2, 3, 4)


def test_maxvol_padded_sparse_grid():
    grid = smolyak_grid(2, 2)
    v = build_generalized(smolyak_basis(2, 3), grid.nodes)  # 29 x 13
    sel = maxvol_rows(v, tol=0.01)
    assert dominance(v, sel.row_indices) <= 1.01 + 1e-9
    assert sel.volume >= abs(determinant(v[:13])) * (1 - 1e-12)
    assert sel.volume >= sel.volume_history[0] * (1 - 1e-12)


def test_maxvol_rank_deficient_dismissed():
    v = np.array([[1.0, 2.0], [2.0, 4.0], [3.0, 6.0]])
    sel = maxvol_rows(v)
    assert sel.dismissed and sel.volume == 0.0


def test_maxvol_swap_cap_raises(rng):
    v = rng.uniform(-1, 1, (12, 3))
    full = maxvol_rows(v, tol=0.0)
    if full.swaps == 0:
        pytest.skip("initial selection already dominant")
    with pytest.raises(MaxVolConvergenceError) as info:
        maxvol_rows(v, tol=0.0, max_swaps=0)
    assert len(info.value.rows) == 3


def test_maxvol_input_validation():
    with pytest.raises(ValueError):
        maxvol_rows(np.ones((2, 3)))
    with pytest.raises(ValueError):
        maxvol_rows(SMALL, tol=-1.0)


def test_exhaustive_maxvol_examples(rng):
    assert one_based(exhaustive_maxvol(SMALL)) == {1, 3}
    v = rng.uniform(-1, 1, (4, 4))
    assert exhaustive_maxvol(v).row_indices == (0, 1, 2, 3)


def test_exhaustive_maxvol_random_nodes_oracle(rng):
    v = build_generalized(monomial_basis(2, 2), rng.uniform(0, 1, (5, 2)))
    rows, vol = brute_force(v, lambda a: abs(np.linalg.det(a)))
    sel = exhaustive_maxvol(v)
    assert sel.row_indices == rows
    assert sel.volume == pytest.approx(vol, rel=1e-10)


def test_exhaustive_maxminsv_examples(rng):
    v = rng.uniform(-1, 1, (3, 3))
    assert exhaustive_maxminsv(v).row_indices == (0, 1, 2)
    v = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    rows, s = brute_force(v, sigma_min)
    sel = exhaustive_maxminsv(v)
    assert sel.row_indices == rows
    assert sel.sigma_min == pytest.approx(s, rel=1e-10)
    assert one_based(exhaustive_maxminsv(np.array([[2.0, 0.0], [0.0, 2.0], [1.0, 1.0]]))) == {1, 2}


def test_exhaustive_guard():
    with pytest.raises(SubsetSearchTooLargeError):
        exhaustive_maxvol(np.ones((40, 10)))


def test_near_singular_examples():
    assert near_singular(0.0, 0.0, 1.0)
    assert not near_singular(2.0, 0.5, 4.0)
    assert near_singular(1e-30, 3e-11, 1.0)
    assert near_singular(0.0, 3e-10, 10.0)
    assert not near_singular(0.0, 3e-10, 1.0)


def test_select_rows_dispatch():
    assert select_rows(SMALL, "maxvol").method is Method.MAXVOL
    assert select_rows(SMALL, Method.MAXMINSV).method is Method.MAXMINSV
    assert select_rows(SMALL, "maxvol-exhaustive").row_indices == (0, 2)


def test_to_dict_is_one_based():
    assert exhaustive_maxvol(SMALL).to_dict()["row_indices"] == [1, 3]


@settings(max_examples=150, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), shape=st.sampled_from([(8, 4), (12, 6), (6, 2), (9, 3)]),
       tol=st.sampled_from([0.0, 0.01, 0.1]))
def test_maxvol_dominance_and_monotone_volume(seed, shape, tol):
    v = np.random.default_rng(seed).uniform(-1, 1, shape)
    sel = maxvol_rows(v, tol=tol)
    assert dominance(v, sel.row_indices) <= 1 + tol + 1e-9
    hist = np.array(sel.volume_history)
    assert np.all(np.diff(hist) > 0)
    assert len(hist) == sel.swaps + 1


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_maxvol_below_exhaustive(seed):
    v = np.random.default_rng(seed).uniform(-1, 1, (8, 4))
    assert maxvol_rows(v).volume <= exhaustive_maxvol(v).volume * (1 + 1e-12)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_exhaustive_selections_not_near_singular(seed):
    v = np.random.default_rng(seed).uniform(-1, 1, (7, 3))
    assert not exhaustive_maxvol(v).dismissed
    assert not exhaustive_maxminsv(v).dismissed


def test_maxvol_volume_ratio_report(rng):
    """At least 95% of random 8x4 problems land within half the optimal volume."""
    ratios = []
    for _ in range(1000):
        v = rng.uniform(-1, 1, (8, 4))
        ratios.append(maxvol_rows(v).volume / exhaustive_maxvol(v).volume)
    frac = np.mean(np.array(ratios) >= 0.5)
    print(f"maxvol/optimal volume ratio >= 0.5 in {frac:.1%} of trials")
    assert frac >= 0.95
