import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from st_forge import families
from st_forge.qk import QkNum


def brute_keys(d, s_y, v1, v2):
    y1, y2 = families.box(s_y)
    K1 = (v1[:, None] + d * y1[None, :]).ravel()
    K2 = (v2[:, None] + d * y2[None, :]).ravel()
    keys, counts = np.unique(np.stack([K1, K2], 1), axis=0, return_counts=True)
    return {(int(a), int(b)): int(c) for (a, b), c in zip(keys, counts)}


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 7),
    st.integers(1, 4),
    st.lists(st.tuples(st.integers(-20, 20), st.integers(-20, 20)), min_size=1, max_size=30),
)
def test_dense_box_sum_matches_unique(d, s_y, vs):
    v1 = np.array([v[0] for v in vs], dtype=np.int64)
    v2 = np.array([v[1] for v in vs], dtype=np.int64)
    want = brute_keys(d, s_y, v1, v2)
    H = families.box_sum_dense(d, s_y, v1, v2)
    K1, K2 = H.nonzero_keys()
    got = dict(zip(zip(K1.tolist(), K2.tolist()), H.lookup(K1, K2).tolist()))
    assert got == want
    S1, S2, c = families.box_sum_sparse(d, s_y, v1, v2)
    assert dict(zip(zip(S1.tolist(), S2.tolist()), c.tolist())) == want


@pytest.mark.parametrize("slope", [(1, 0, 1), (0, 1, 2), (-5, 3, 2), (10, 6, 7), (0, 0, 1)])
def test_scan_and_dense_agree(slope):
    sigma = QkNum.make(*slope, 2)
    s = 5
    K1, K2, _ = families.anchor_keys(sigma, 3)
    hist = families.point_histogram(sigma, s)
    assert np.array_equal(hist.lookup(K1, K2), families.richness_by_scan(sigma, s, K1, K2))


def test_lookup_outside_window_is_zero():
    H = families.box_sum_dense(1, 1, np.array([0]), np.array([0]))
    assert H.lookup(np.array([100, -100]), np.array([0, 0])).tolist() == [0, 0]


def test_intercept_key_roundtrip():
    sigma = QkNum.make(-5, 3, 2, 2)
    tau = families.intercept_from_key(sigma, 7, -4)
    assert families.intercept_key(sigma, tau) == (7, -4)
    # tau with a denominator not dividing d cannot carry grid points
    assert families.intercept_key(sigma, QkNum.make(1, 0, 3, 2)) is None


def test_anchor_keys_sparse_route(monkeypatch):
    sigma = QkNum.make(10, 6, 7, 2)
    dense = families.anchor_keys(sigma, 3)
    monkeypatch.setattr(families, "DENSE_CELL_LIMIT", 0)
    sparse = families.anchor_keys(sigma, 3)
    assert dense[2] == sparse[2]
    assert set(zip(dense[0].tolist(), dense[1].tolist())) == set(zip(sparse[0].tolist(), sparse[1].tolist()))
