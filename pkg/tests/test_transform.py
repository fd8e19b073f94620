import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from dhwt.filters import get_filter
from dhwt.transform import (
    MAX_LEVELS,
    analyze_1d,
    analyze_2d,
    approximation,
    decompose,
    detail_component,
    level_shapes,
    packet_decompose,
    packet_reconstruct,
    reconstruct,
    synthesize_1d,
    synthesize_2d,
)

WAVELETS = ["dhwt", "haar", "db2", "sym2", "coif2"]
S = 1 / math.sqrt(math.pi)


def test_analyze_example():
    a, d = analyze_1d([1.0, 1.0], "dhwt")
    np.testing.assert_allclose(a, [2 * S], atol=1e-15)
    np.testing.assert_allclose(d, [0.0], atol=1e-15)
    a, d = analyze_1d([1.0, -1.0], "dhwt")
    np.testing.assert_allclose(d, [2 * S], atol=1e-15)


def test_constant_image_has_no_detail():
    ll, lh, hl, hh = analyze_2d(np.full((4, 4), 7.0), "dhwt")
    np.testing.assert_allclose(ll, 7 * 4 / math.pi, atol=1e-13)
    for band in (lh, hl, hh):
        assert np.all(np.abs(band) < 1e-13)


def test_band_orientation():
    # vertical edge: columns differ, rows are constant
    x = np.tile([0.0, 1.0, 0.0, 1.0], (4, 1))
    ll, lh, hl, hh = analyze_2d(x, "haar")
    assert np.abs(hl).max() > 0.5
    assert np.abs(lh).max() < 1e-12
    assert np.abs(hh).max() < 1e-12
    # the transposed image moves the energy to the horizontal band
    _, lh_t, hl_t, _ = analyze_2d(x.T, "haar")
    assert np.abs(lh_t).max() > 0.5 and np.abs(hl_t).max() < 1e-12


def test_single_ll_coefficient_oracle():
    f = get_filter("dhwt")
    basis = np.eye(4).reshape(4, 2, 2)
    # brute force: columns are the analysis of each unit image
    A = np.array([np.concatenate([b.ravel() for b in analyze_2d(e, f)]) for e in basis]).T
    target = np.array([1.0, 0, 0, 0])
    expected = np.linalg.solve(A, target).reshape(2, 2)
    got = synthesize_2d(np.array([[1.0]]), np.zeros((1, 1)), np.zeros((1, 1)), np.zeros((1, 1)), f)
    np.testing.assert_allclose(got, expected, atol=1e-14)
    np.testing.assert_allclose(got, math.pi / 4, atol=1e-14)


@pytest.mark.parametrize("name", WAVELETS)
def test_odd_or_short_signal_rejected(name):
    with pytest.raises(ValueError):
        analyze_1d(np.ones(5), name)
    with pytest.raises(ValueError):
        analyze_1d(np.ones(0), name)


@pytest.mark.parametrize("name", ["haar", "db2", "coif2"])
def test_orthonormal_energy(name, rng):
    x = rng.normal(size=64)
    a, d = analyze_1d(x, name)
    assert np.sum(a**2) + np.sum(d**2) == pytest.approx(np.sum(x**2), rel=1e-12)


def test_dhwt_energy_factor(rng):
    for _ in range(100):
        x = rng.normal(size=2 * int(rng.integers(1, 100)))
        a, d = analyze_1d(x, "dhwt")
        assert np.sum(a**2) + np.sum(d**2) == pytest.approx(2 / math.pi * np.sum(x**2), rel=1e-12)


@pytest.mark.parametrize("name", WAVELETS)
def test_1d_round_trip_short_signal(name, rng):
    # shorter than the filter: periodic wrap must still be invertible
    x = rng.normal(size=2)
    np.testing.assert_allclose(synthesize_1d(*analyze_1d(x, name), name), x, atol=1e-12)


def test_axis_argument(rng):
    x = rng.normal(size=(6, 8))
    a0, d0 = analyze_1d(x, "db2", axis=0)
    a_ref, d_ref = analyze_1d(x.T, "db2")
    np.testing.assert_allclose(a0, a_ref.T)
    np.testing.assert_allclose(synthesize_1d(a0, d0, "db2", axis=0), x, atol=1e-12)


def test_level_shapes():
    assert level_shapes(256, 256, 2) == [(256, 256), (128, 128), (64, 64)]
    assert level_shapes(37, 50, 3) == [(37, 50), (19, 25), (10, 13), (5, 7)]


def test_decompose_shapes(rng):
    img = rng.uniform(0, 255, (256, 256, 3))
    p = decompose(img, "dhwt", 2)
    assert p.ll.shape == (64, 64, 3)
    assert [t[0].shape for t in p.details] == [(128, 128, 3), (64, 64, 3)]
    assert p.band_names()[:2] == ["LL", "D_h2"]
    assert p.size() == sum(b.size for b in p.bands())


@pytest.mark.parametrize("levels", [0, MAX_LEVELS + 1, 2.5])
def test_level_range(levels):
    with pytest.raises(ValueError):
        decompose(np.zeros((8, 8)), "dhwt", levels)


def test_non_finite_rejected():
    img = np.zeros((4, 4))
    img[1, 2] = np.inf
    with pytest.raises(ValueError):
        decompose(img, "dhwt", 1)


@pytest.mark.parametrize("name", WAVELETS)
@pytest.mark.parametrize("shape", [(8, 8), (37, 50, 3), (1, 9), (64, 32)])
def test_multilevel_round_trip(name, shape, rng):
    img = rng.uniform(0, 255, shape)
    for levels in (1, 3, MAX_LEVELS):
        p = decompose(img, name, levels)
        np.testing.assert_allclose(reconstruct(p), img, atol=1e-9)


def test_reconstruct_rejects_bad_layout(rng):
    p = decompose(rng.normal(size=(16, 16)), "haar", 2)
    p.details[0] = p.details[0][:2]
    with pytest.raises(ValueError):
        reconstruct(p)


def test_zeroed_details_match_direct_synthesis(rng):
    img = rng.uniform(0, 255, (16, 16))
    p = decompose(img, "dhwt", 1)
    z = np.zeros_like(p.ll)
    direct = synthesize_2d(p.ll, z, z, z, "dhwt")
    np.testing.assert_allclose(approximation(p, 1), direct, atol=1e-12)


def test_telescoping(rng):
    img = rng.uniform(0, 255, (32, 24))
    p = decompose(img, "db2", 3)
    total = approximation(p, 3) + sum(detail_component(p, l) for l in (1, 2, 3))
    np.testing.assert_allclose(total, img, atol=1e-9)
    np.testing.assert_allclose(approximation(p, 0), img, atol=1e-9)


@settings(max_examples=60, deadline=None)
@given(
    arrays(np.float64, (8, 12), elements=st.floats(-1e3, 1e3)),
    arrays(np.float64, (8, 12), elements=st.floats(-1e3, 1e3)),
    st.floats(-10, 10),
    st.sampled_from(WAVELETS),
)
def test_linearity(x, y, alpha, name):
    lhs = decompose(alpha * x + y, name, 2)
    rhs = alpha * decompose(x, name, 2) + decompose(y, name, 2)
    for a, b in zip(lhs.bands(), rhs.bands()):
        np.testing.assert_allclose(a, b, atol=1e-7)


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 40),
    st.integers(1, 40),
    st.integers(1, MAX_LEVELS),
    st.sampled_from(WAVELETS),
    st.integers(0, 2**32 - 1),
)
def test_round_trip_property(h, w, levels, name, seed):
    img = np.random.default_rng(seed).uniform(0, 255, (h, w))
    np.testing.assert_allclose(reconstruct(decompose(img, name, levels)), img, atol=1e-9)


def test_packet_depth_one_is_single_split(rng):
    x = rng.normal(size=16)
    tree = packet_decompose(x, "dhwt", 1)
    a, d = analyze_1d(x, "dhwt")
    np.testing.assert_array_equal(tree.bands[0], a)
    np.testing.assert_array_equal(tree.bands[1], d)


def test_packet_constant_signal():
    tree = packet_decompose(np.full(16, 3.0), "dhwt", 3)
    assert np.abs(tree.bands[0]).min() > 0
    for band in tree.bands[1:]:
        assert np.abs(band).max() < 1e-12


def test_packet_inverse_against_matrix_oracle(rng):
    depth, n = 3, 16
    W = np.array([np.concatenate(packet_decompose(e, "dhwt", depth).bands) for e in np.eye(n)]).T
    x = rng.normal(size=n)
    tree = packet_decompose(x, "dhwt", depth)
    oracle = np.linalg.inv(W) @ np.concatenate(tree.bands)
    np.testing.assert_allclose(packet_reconstruct(tree), oracle, atol=1e-12)
    np.testing.assert_allclose(oracle, x, atol=1e-12)


def test_packet_rejects_bad_length():
    with pytest.raises(ValueError):
        packet_decompose(np.ones(12), "dhwt", 3)
