import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from mfp.grid import (
    Click,
    Label,
    connected_components,
    distance_to_zero,
    format_clicks,
    iou,
    mask_from_png_bytes,
    mask_to_png_bytes,
    parse_clicks,
    read_grid_bytes,
    threshold,
    validate_history,
    write_grid_bytes,
)
from oracles import brute_components, brute_distance_to_zero

masks = arrays(np.uint8, st.tuples(st.integers(1, 12), st.integers(1, 12)), elements=st.integers(0, 1))


class TestIou:
    def test_identity(self):
        a = np.ones((3, 3), dtype=np.uint8)
        assert iou(a, a) == 1.0

    def test_disjoint(self):
        a = np.array([[1, 0]], dtype=np.uint8)
        b = np.array([[0, 1]], dtype=np.uint8)
        assert iou(a, b) == 0.0

    def test_half_overlap(self):
        a = np.ones((2, 2), dtype=np.uint8)
        b = np.array([[1, 0], [1, 0]], dtype=np.uint8)
        assert iou(a, b) == 0.5

    def test_both_empty(self):
        z = np.zeros((4, 4), dtype=np.uint8)
        assert iou(z, z) == 1.0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            iou(np.zeros((2, 2), dtype=np.uint8), np.zeros((3, 3), dtype=np.uint8))

    @given(masks, masks)
    def test_symmetric(self, a, b):
        if a.shape != b.shape:
            b = np.resize(b, a.shape)
        assert iou(a, b) == iou(b, a)

    @given(masks)
    def test_self_iou_is_one(self, a):
        assert iou(a, a) == 1.0


class TestThreshold:
    def test_all_above(self):
        p = np.full((2, 2), 0.7)
        assert threshold(p, 0.5).all()

    def test_tie_goes_foreground(self):
        p = np.full((2, 2), 0.5)
        assert threshold(p, 0.5).all()

    def test_mixed(self):
        p = np.array([[0.2, 0.8]])
        assert threshold(p, 0.5).tolist() == [[0, 1]]

    def test_bad_tau(self):
        with pytest.raises(ValueError):
            threshold(np.zeros((1, 1)), 0.0)

    @given(arrays(np.float64, st.tuples(st.integers(1, 8), st.integers(1, 8)), elements=st.floats(0, 1)))
    def test_matches_ge_rule(self, p):
        assert np.array_equal(threshold(p, 0.5), (p >= 0.5).astype(np.uint8))


class TestDistanceToZero:
    def test_all_zeros(self):
        z = np.zeros((3, 3), dtype=np.uint8)
        assert np.array_equal(distance_to_zero(z), np.zeros((3, 3)))

    def test_single_center_pixel(self):
        m = np.zeros((3, 3), dtype=np.uint8)
        m[1, 1] = 1
        assert distance_to_zero(m)[1, 1] == 1.0

    def test_all_ones_5x5_center_hits_border(self):
        m = np.ones((5, 5), dtype=np.uint8)
        assert distance_to_zero(m)[2, 2] == 3.0

    @settings(max_examples=60, deadline=None)
    @given(arrays(np.uint8, st.tuples(st.integers(1, 16), st.integers(1, 16)), elements=st.integers(0, 1)))
    def test_matches_brute_force(self, m):
        got = distance_to_zero(m)
        expected = brute_distance_to_zero(m)
        assert np.allclose(got, expected, rtol=0, atol=1e-9)


class TestConnectedComponents:
    def test_empty(self):
        assert connected_components(np.zeros((3, 3), dtype=np.uint8)) == []

    def test_two_isolated_pixels(self):
        m = np.zeros((3, 3), dtype=np.uint8)
        m[0, 0] = 1
        m[2, 2] = 1
        comps = connected_components(m)
        assert [c.area for c in comps] == [1, 1]
        assert comps[0].pixels == ((0, 0),)

    def test_l_shape(self):
        m = np.zeros((4, 4), dtype=np.uint8)
        for r, c in [(0, 0), (1, 0), (2, 0), (2, 1), (2, 2)]:
            m[r, c] = 1
        comps = connected_components(m)
        assert len(comps) == 1
        assert comps[0].area == 5
        assert list(comps[0].pixels) == brute_components(m)[0]

    def test_diagonal_not_connected(self):
        m = np.eye(3, dtype=np.uint8)
        assert len(connected_components(m)) == 3

    @given(masks)
    def test_partitions_ones(self, m):
        comps = connected_components(m)
        all_pixels = [p for c in comps for p in c.pixels]
        assert len(all_pixels) == len(set(all_pixels)) == int(m.sum())
        assert all(m[r, c] == 1 for r, c in all_pixels)

    @settings(max_examples=40, deadline=None)
    @given(masks)
    def test_matches_flood_fill(self, m):
        got = [sorted(c.pixels) for c in connected_components(m)]
        assert got == brute_components(m)


class TestGridFormat:
    def test_roundtrip(self):
        rng = np.random.default_rng(0)
        p = rng.random((5, 7))
        back = read_grid_bytes(write_grid_bytes(p))
        assert back.shape == (5, 7)
        assert np.allclose(back, p, atol=1e-6)

    def test_header(self):
        data = write_grid_bytes(np.zeros((2, 3)))
        assert data.startswith(b"MFPGRID 1 3 2\n")
        assert len(data) == len(b"MFPGRID 1 3 2\n") + 24

    def test_truncated_rejected(self):
        data = write_grid_bytes(np.zeros((2, 3)))
        with pytest.raises(ValueError):
            read_grid_bytes(data[:-1])

    def test_bad_magic_rejected(self):
        with pytest.raises(ValueError):
            read_grid_bytes(b"NOTGRID 1 1 1\n" + b"\x00" * 4)


class TestMaskPng:
    def test_roundtrip(self):
        m = np.zeros((6, 4), dtype=np.uint8)
        m[1:3, 1:4] = 1
        assert np.array_equal(mask_from_png_bytes(mask_to_png_bytes(m)), m)


class TestClicks:
    def test_parse_roundtrip(self):
        text = "3 4 fg 1\n10 2 bg 2\n"
        clicks = parse_clicks(text)
        assert clicks == [Click(3, 4, Label.FOREGROUND, 1), Click(10, 2, Label.BACKGROUND, 2)]
        assert format_clicks(clicks) == text

    def test_history_gap_rejected(self):
        with pytest.raises(ValueError):
            validate_history([Click(0, 0, Label.FOREGROUND, 1), Click(1, 1, Label.BACKGROUND, 3)])

    def test_bad_label_rejected(self):
        with pytest.raises(ValueError):
            parse_clicks("0 0 maybe 1\n")
