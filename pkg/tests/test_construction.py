import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from st_forge.construction import (
    ConfigError,
    GridParams,
    Line,
    SlopeParams,
    gen_A,
    gen_anchor_set,
    gen_lines,
    gen_lines_naive,
    gen_points,
    gen_slopes,
    passes_filters,
)
from st_forge.oracle import brute_richness, grid_points
from st_forge.qk import RingContext, ZkInt, qk_from_ratio, zk_cmp

K2 = RingContext(2)

# pinned by the pairwise-dedup oracle and by naive enumeration with QkNum keys
CARD_S_K2_M4 = 78
CARD_L_K2_S8_M4 = 87030
RAW_PAIRS_K2_S8_M4 = 319488


@pytest.fixture(scope="module")
def slopes_m4():
    return gen_slopes(SlopeParams(4, Fraction(1, 2)), K2)


def test_grid_params_side():
    for N in (1, 3, 4, 15, 16, 17, 1000):
        g = GridParams(K2, N)
        assert g.s ** 2 <= N < (g.s + 1) ** 2
    assert GridParams.from_side(K2, 5).N == 25
    with pytest.raises(ConfigError):
        GridParams(K2, 0)


def test_gen_A_small():
    A = gen_A(GridParams.from_side(K2, 1))
    assert [x.key for x in A] == [(-1, -1), (0, -1), (-1, 0), (0, 0)]
    assert len(gen_A(GridParams.from_side(K2, 2))) == 16


def test_gen_A_k3_s5_distinct():
    A = gen_A(GridParams.from_side(RingContext(3), 5))
    assert len(A) == 100
    assert all(zk_cmp(u, v) < 0 for u, v in zip(A, A[1:]))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 5, 6, 7, 10]), st.integers(1, 12))
def test_gen_A_injective_and_increasing(k, s):
    A = gen_A(GridParams.from_side(RingContext(k), s))
    assert len(A) == 4 * s * s
    assert all(zk_cmp(u, v) < 0 for u, v in zip(A, A[1:]))


def test_anchor_set_is_centered_subgrid():
    g = GridParams.from_side(K2, 8)
    anchors = gen_anchor_set(g)
    assert len(anchors) == 4 * 4 * 4
    keys = {x.key for x in gen_A(g)}
    assert all(a.key in keys for a in anchors)


def test_gen_points():
    P = gen_points(GridParams.from_side(K2, 1))
    assert len(P) == 16 and len(list(P)) == 16
    P4 = gen_points(GridParams.from_side(K2, 4))
    assert len(P4) == 4096
    zero = K2.zk(0, 0)
    assert (zero, zero) in P4
    assert (K2.zk(4, 0), zero) not in P4
    assert (K2.qk(1, 0, 2), zero) not in P4


def test_slope_params_validation():
    with pytest.raises(ConfigError):
        SlopeParams(4, Fraction(1))
    with pytest.raises(ConfigError):
        SlopeParams(0)
    # t = 1, ceil(0.95) = 1: singleton interval, still valid
    assert list(SlopeParams(1, Fraction(19, 20)).magnitudes()) == [1]
    assert list(SlopeParams(4, Fraction(19, 20)).magnitudes()) == [2]
    assert SlopeParams(4, Fraction(19, 20)).narrow_interval()


def test_slope_examples(slopes_m4):
    by_value = {sl.value.key: sl for sl in slopes_m4}
    assert qk_from_ratio(K2.zk(2, 1), K2.zk(1, 1)).key == (0, 1, 1)
    assert (0, 1, 1) in by_value
    sp = SlopeParams(4, Fraction(1, 2))
    assert passes_filters((2, 1, 1, 1), sp, 2)
    assert not passes_filters((1, 2, 1, 2), sp, 2)  # gcd(7, 7) = 7


def test_slope_count_pinned(slopes_m4):
    assert len(slopes_m4) == CARD_S_K2_M4


def test_slopes_sorted_and_witnessed(slopes_m4):
    sp = SlopeParams(4, Fraction(1, 2))
    vals = [sl.value for sl in slopes_m4]
    assert all(u.cmp(v) < 0 for u, v in zip(vals, vals[1:]))
    for sl in slopes_m4:
        p1, p2, q1, q2 = sl.witness
        assert passes_filters(sl.witness, sp, 2)
        assert qk_from_ratio(K2.zk(p1, p2), K2.zk(q1, q2)) == sl.value


def test_slope_dedup_soundness():
    sp = SlopeParams(16, Fraction(1, 2))
    quads = [q for q in itertools.product(sp.signed_values(), repeat=4) if passes_filters(q, sp, 2)]
    sample = quads[::37]
    for qa, qb in itertools.combinations(sample, 2):
        pa, qa_ = K2.zk(qa[0], qa[1]), K2.zk(qa[2], qa[3])
        pb, qb_ = K2.zk(qb[0], qb[1]), K2.zk(qb[2], qb[3])
        same = qk_from_ratio(pa, qa_) == qk_from_ratio(pb, qb_)
        assert same == (pa * qb_ == pb * qa_)


def test_gcd_cap_monotone():
    tight = {sl.value.key for sl in gen_slopes(SlopeParams(16, Fraction(1, 2), gcd_cap=1), K2)}
    loose = {sl.value.key for sl in gen_slopes(SlopeParams(16, Fraction(1, 2), gcd_cap=5), K2)}
    assert tight < loose


def test_lines_raw_and_dedup(slopes_m4):
    g = GridParams.from_side(K2, 8)
    L = gen_lines(g, slopes_m4)
    assert L.raw_pairs == len(gen_anchor_set(g)) ** 2 * len(slopes_m4) == RAW_PAIRS_K2_S8_M4
    assert len(L) == CARD_L_K2_S8_M4
    naive, raw = gen_lines_naive(g, slopes_m4)
    assert raw == RAW_PAIRS_K2_S8_M4
    assert set(L) == set(naive)


def test_collinear_anchors_collapse():
    one = K2.qk(1)
    a, b = K2.zk(0, 0), K2.zk(1, 1)
    # (0,0) and (1+sqrt2, 1+sqrt2) both lie on y = x
    assert Line.through(one, a, a) == Line.through(one, b, b)


def test_lines_order_deterministic(slopes_m4):
    g = GridParams.from_side(K2, 4)
    L1 = gen_lines(g, slopes_m4).lines()
    L2 = gen_lines(g, list(slopes_m4)).lines()
    assert L1 == L2
    for fam in gen_lines(g, slopes_m4).families:
        vals = [fam.intercept(i) for i in range(len(fam))]
        assert all(u.cmp(v) < 0 for u, v in zip(vals, vals[1:]))


def test_line_key_equality_is_locus_equality(slopes_m4):
    """On P for s=2: lines with >= 2 points coincide iff their point sets coincide."""
    g = GridParams.from_side(K2, 2)
    P = grid_points(2, 2)
    lines = gen_lines(g, slopes_m4).lines()
    assert len(lines) <= 10_000
    loci = {}
    for line in lines:
        pts = frozenset(
            (x.a, x.b, y.a, y.b) for x, y in P if line.slope * x + line.intercept == y
        )
        assert len(pts) == brute_richness(line, P)
        if len(pts) >= 2:
            assert pts not in loci, (line, loci.get(pts))
            loci[pts] = line
    assert loci
