import math

import numpy as np
import pytest

from mfp.grid import Click, Label
from mfp.modulation import (
    ModulationParams,
    compute_big_gamma,
    compute_radius,
    gamma_euclidean,
    gamma_probability,
    median_prob_distance,
    modulate,
)
from oracles import naive_modulate

P = ModulationParams()


def random_case(rng, max_side=16):
    """Random (grid, click, history) triple with a consistent click index."""
    h = int(rng.integers(1, max_side + 1))
    w = int(rng.integers(1, max_side + 1))
    p = rng.random((h, w))
    n_hist = int(rng.integers(0, 6))
    history = [
        Click(
            int(rng.integers(0, h)),
            int(rng.integers(0, w)),
            Label.FOREGROUND if rng.random() < 0.5 else Label.BACKGROUND,
            index=k + 1,
        )
        for k in range(n_hist)
    ]
    click = Click(
        int(rng.integers(0, h)),
        int(rng.integers(0, w)),
        Label.FOREGROUND if rng.random() < 0.5 else Label.BACKGROUND,
        index=n_hist + 1,
    )
    return p, click, history


class TestComputeRadius:
    def test_no_opposite_clicks(self):
        click = Click(5, 5, Label.FOREGROUND, 3)
        history = [Click(0, 0, Label.FOREGROUND, 1), Click(1, 1, Label.FOREGROUND, 2)]
        assert compute_radius(click, history, 100.0) == 100.0

    def test_half_min_opposite_distance(self):
        click = Click(50, 50, Label.FOREGROUND, 2)
        history = [Click(50, 110, Label.BACKGROUND, 1)]
        assert compute_radius(click, history, 100.0) == pytest.approx(30.0, abs=1e-12)

    def test_capped_at_r_max(self):
        click = Click(0, 0, Label.FOREGROUND, 2)
        history = [Click(300, 400, Label.BACKGROUND, 1)]
        assert compute_radius(click, history, 100.0) == 100.0


class TestComputeBigGamma:
    def test_foreground_quarter(self):
        g = compute_big_gamma(0.25, Label.FOREGROUND, P)
        assert g == pytest.approx(math.log(0.25) / math.log(0.99), rel=1e-12)
        assert 0.25 ** (1.0 / g) == pytest.approx(0.99, abs=1e-12)

    def test_background_half(self):
        g = compute_big_gamma(0.5, Label.BACKGROUND, P)
        assert g == pytest.approx(math.log(0.01) / math.log(0.5), rel=1e-12)

    def test_clamped_at_one(self):
        assert compute_big_gamma(0.99, Label.FOREGROUND, P) == 1.0
        assert compute_big_gamma(0.995, Label.FOREGROUND, P) == 1.0
        assert compute_big_gamma(0.01, Label.BACKGROUND, P) == 1.0


class TestGammaEuclidean:
    def test_at_click(self):
        assert gamma_euclidean(0.0, 10.0, 7.0) == 7.0

    def test_at_boundary(self):
        assert gamma_euclidean(10.0, 10.0, 7.0) == 1.0

    def test_midpoint(self):
        assert gamma_euclidean(5.0, 10.0, 5.0) == 3.0

    def test_non_increasing(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            big = 1.0 + 20.0 * rng.random()
            ds = np.sort(rng.random(10) * 10.0)
            gs = [gamma_euclidean(d, 10.0, big) for d in ds]
            assert all(a >= b - 1e-12 for a, b in zip(gs, gs[1:]))


class TestGammaProbability:
    def test_at_click(self):
        assert gamma_probability(0.0, 0.3, 9.0) == 9.0

    def test_at_median(self):
        assert gamma_probability(0.3, 0.3, 9.0) == 1.0

    def test_half_median(self):
        assert gamma_probability(0.15, 0.3, 9.0) == pytest.approx(2.0, abs=1e-12)

    def test_beyond_median(self):
        assert gamma_probability(0.5, 0.3, 9.0) == 1.0

    def test_degenerate_zero_median(self):
        assert gamma_probability(0.0, 0.0, 9.0) == 9.0
        assert gamma_probability(0.1, 0.0, 9.0) == 1.0

    def test_non_increasing_up_to_median(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            big = 1.0 + 20.0 * rng.random()
            d_bar = rng.random() + 0.01
            ds = np.sort(rng.random(10) * d_bar)
            gs = [gamma_probability(d, d_bar, big) for d in ds]
            assert all(a >= b - 1e-12 for a, b in zip(gs, gs[1:]))


class TestMedianProbDistance:
    def test_constant_grid(self):
        p = np.full((5, 5), 0.4)
        assert median_prob_distance(p, Click(2, 2, Label.FOREGROUND, 1), 10.0) == 0.0

    def test_three_values(self):
        p = np.array([[0.1, 0.3, 0.9]])
        d = median_prob_distance(p, Click(0, 0, Label.FOREGROUND, 1), 10.0)
        assert d == pytest.approx(0.04, abs=1e-15)

    def test_even_count_lower_middle(self):
        p = np.array([[0.5, 0.6], [0.7, 0.8]])  # distances from 0.5: 0, .01, .04, .09
        d = median_prob_distance(p, Click(0, 0, Label.FOREGROUND, 1), 10.0)
        assert d == pytest.approx(0.01, abs=1e-15)


class TestModulate:
    def test_gamma_one_is_clamp_inside_window(self):
        # clicked pixel already at the fg target, so the exponent is 1 everywhere
        p = np.full((6, 6), 0.99)
        p[0, 0] = 0.0
        out = modulate(p, Click(3, 3, Label.FOREGROUND, 8), [], P)
        assert out[3, 3] == pytest.approx(0.99)
        assert out[0, 0] == pytest.approx(P.eps)  # clamped, exponent 1

    def test_flat_quarter_grid_hits_target_everywhere(self):
        p = np.full((8, 8), 0.25)
        out = modulate(p, Click(4, 4, Label.FOREGROUND, 1), [], P)
        assert abs(out[4, 4] - 0.99) <= 1e-9
        # constant window: degenerate median rule gives gamma = max everywhere
        assert np.all(np.abs(out - 0.99) <= 1e-9)

    def test_out_of_bounds_click(self):
        with pytest.raises(ValueError):
            modulate(np.zeros((4, 4)), Click(9, 0, Label.FOREGROUND, 1), [], P)

    def test_matches_naive_reference_euclidean(self):
        rng = np.random.default_rng(7)
        p = rng.random((16, 16))
        click = Click(8, 8, Label.BACKGROUND, 9)
        history = [Click(k, k, Label.FOREGROUND if k % 2 else Label.BACKGROUND, k + 1) for k in range(8)]
        out = modulate(p, click, history, P)
        assert np.max(np.abs(out - np.array(naive_modulate(p, click, history, P)))) <= 1e-12

    def test_oracle_equivalence_randomized(self):
        rng = np.random.default_rng(123)
        for _ in range(100):
            p, click, history = random_case(rng)
            out = modulate(p, click, history, P)
            ref = np.array(naive_modulate(p, click, history, P))
            assert np.max(np.abs(out - ref)) <= 1e-12

    def test_locality_directionality_range(self):
        rng = np.random.default_rng(5)
        params = ModulationParams(r_max=6.0)
        for _ in range(200):
            p, click, history = random_case(rng, max_side=12)
            out = modulate(p, click, history, params)
            rows = np.arange(p.shape[0])[:, None]
            cols = np.arange(p.shape[1])[None, :]
            radius = compute_radius(click, history, params.r_max)
            inside = (rows - click.row) ** 2 + (cols - click.col) ** 2 <= radius**2
            assert np.array_equal(out[~inside], p[~inside])
            q = np.clip(p, params.eps, 1 - params.eps)
            if click.label is Label.FOREGROUND:
                assert np.all(out[inside] >= q[inside] - 1e-15)
            else:
                assert np.all(out[inside] <= q[inside] + 1e-15)
            assert np.all((out >= 0.0) & (out <= 1.0))

    def test_calibration_sweep(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            p_u = rng.uniform(P.eps, P.p_target_fg)
            p = rng.random((5, 5))
            p[2, 2] = p_u
            out = modulate(p, Click(2, 2, Label.FOREGROUND, 1), [], P)
            assert abs(out[2, 2] - 0.99) <= 1e-9
            p_u = rng.uniform(P.p_target_bg, 1.0 - P.eps)
            p[2, 2] = p_u
            out = modulate(p, Click(2, 2, Label.BACKGROUND, 1), [], P)
            assert abs(out[2, 2] - 0.01) <= 1e-9

    def test_order_preservation_euclidean_equal_distance(self):
        rng = np.random.default_rng(13)
        p = rng.random((9, 9))
        click = Click(4, 4, Label.FOREGROUND, 8)
        out = modulate(p, click, [], P)
        # pixels (4,1) and (4,7) are both at distance 3 from the click
        lo, hi = sorted([p[4, 1], p[4, 7]])
        out_lo, out_hi = sorted([out[4, 1], out[4, 7]])
        assert (p[4, 1] <= p[4, 7]) == (out[4, 1] <= out[4, 7]) or out_lo == out_hi

    def test_scheme_switch_at_n(self):
        # grid engineered so the two schemes disagree at a probe pixel:
        # probe (4,7) has the same probability as the click but is far away;
        # the probability scheme treats it as near (d=0), the Euclidean as far
        params = ModulationParams(scheme_switch_index=7, r_max=10.0)
        p = np.full((9, 9), 0.8)
        p[4, 4] = 0.2
        p[4, 7] = 0.2
        history = [Click(0, 0, Label.FOREGROUND, k + 1) for k in range(7)]

        out7 = modulate(p, Click(4, 4, Label.FOREGROUND, 7), history[:6], params)
        ref7 = np.array(naive_modulate(p, Click(4, 4, Label.FOREGROUND, 7), history[:6], params))
        assert np.array_equal(out7, ref7) or np.max(np.abs(out7 - ref7)) <= 1e-12

        out8 = modulate(p, Click(4, 4, Label.FOREGROUND, 8), history, params)
        ref8 = np.array(naive_modulate(p, Click(4, 4, Label.FOREGROUND, 8), history, params))
        assert np.max(np.abs(out8 - ref8)) <= 1e-12
        # the probe pixel actually separates the two schemes
        assert abs(out7[4, 7] - out8[4, 7]) > 1e-3


class TestParams:
    def test_rejects_bad_targets(self):
        with pytest.raises(ValueError):
            ModulationParams(p_target_fg=0.4)
        with pytest.raises(ValueError):
            ModulationParams(eps=0.5)
        with pytest.raises(ValueError):
            ModulationParams(r_max=0.0)
