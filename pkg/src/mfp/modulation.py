"""Probability map modulation.

A click at pixel u opens a disk-shaped modulation window of radius R around
it. Inside the window, every probability is gamma-corrected toward the
clicked label: raised with exponent 1/gamma for a foreground click, lowered
with exponent gamma for a background click. The per-pixel gamma decays from
a calibrated maximum at the click to 1 at the window edge, either with
Euclidean distance or with probability distance (early clicks).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import Click, Label, as_prob_grid


@dataclass(frozen=True)
class ModulationParams:
    scheme_switch_index: int = 7    # probability scheme up to this click index, Euclidean after
    r_max: float = 100.0
    p_target_fg: float = 0.99
    p_target_bg: float = 0.01
    eps: float = 1e-4

    def __post_init__(self):
        if not (0.0 < self.eps < self.p_target_bg < 0.5 < self.p_target_fg < 1.0):
            raise ValueError("need 0 < eps < p_target_bg < 0.5 < p_target_fg < 1")
        if self.r_max <= 0:
            raise ValueError("r_max must be positive")
        if self.scheme_switch_index < 0:
            raise ValueError("scheme_switch_index must be >= 0")


def compute_radius(click: Click, history: list[Click], r_max: float) -> float:
    """Window radius: half the distance to the nearest previous click of the
    opposite label, capped at r_max; r_max when there is no opposite click."""
    opposite = [c for c in history if c.label is not click.label]
    if not opposite:
        return float(r_max)
    d_min = min(math.hypot(click.row - c.row, click.col - c.col) for c in opposite)
    return min(0.5 * d_min, float(r_max))


def compute_big_gamma(p_u: float, label: Label, params: ModulationParams) -> float:
    """Maximum gamma, calibrated so the clicked pixel lands on the target
    probability (0.99 fg / 0.01 bg). Clamped below at 1 so the correction
    never reverses direction when the pixel already exceeds the target."""
    q = min(max(p_u, params.eps), 1.0 - params.eps)
    if label is Label.FOREGROUND:
        g = math.log(q) / math.log(params.p_target_fg)
    else:
        g = math.log(params.p_target_bg) / math.log(q)
    return max(1.0, g)


def gamma_euclidean(d: float, radius: float, big_gamma: float) -> float:
    """Linear decay from big_gamma at the click to 1 at the window edge."""
    t = d / radius
    return big_gamma * (1.0 - t) + t


def gamma_probability(d: float, d_bar: float, big_gamma: float) -> float:
    """Cubic decay in probability distance: big_gamma at d=0, 1 at d >= d_bar.

    Degenerate constant window (d_bar = 0): every pixel is maximally similar
    to the click, so gamma = big_gamma at d = 0.
    """
    if d_bar == 0.0:
        return big_gamma if d == 0.0 else 1.0
    if d > d_bar:
        return 1.0
    return (big_gamma - 1.0) * ((d_bar - d) ** 3 / d_bar**3) + 1.0


def median_prob_distance(p: np.ndarray, click: Click, radius: float) -> float:
    """Median of (P_x - P_u)^2 over in-bounds window pixels; for an even
    count, the lower-middle element of the sorted list."""
    inside = _window_mask(p.shape, click, radius)
    d = (p[inside] - p[click.row, click.col]) ** 2
    d.sort()
    return float(d[(d.size - 1) // 2])


def _window_mask(shape: tuple[int, int], click: Click, radius: float) -> np.ndarray:
    rows = np.arange(shape[0], dtype=np.float64)[:, None]
    cols = np.arange(shape[1], dtype=np.float64)[None, :]
    dist2 = (rows - click.row) ** 2 + (cols - click.col) ** 2
    return dist2 <= radius * radius


def modulate(
    p_prev: np.ndarray,
    click: Click,
    history: list[Click],
    params: ModulationParams = ModulationParams(),
) -> np.ndarray:
    """Gamma-correct p_prev inside the click's modulation window.

    history holds the clicks strictly before this one. Pixels outside the
    window are returned bit-unchanged; pixels inside are clamped to
    [eps, 1-eps] before exponentiation so saturated maps still respond.
    """
    p = as_prob_grid(p_prev)
    h, w = p.shape
    if not (0 <= click.row < h and 0 <= click.col < w):
        raise ValueError(f"click ({click.row}, {click.col}) out of bounds for {h}x{w} grid")

    radius = compute_radius(click, history, params.r_max)
    p_u = float(p[click.row, click.col])
    big_gamma = compute_big_gamma(p_u, click.label, params)

    rows = np.arange(h, dtype=np.float64)[:, None]
    cols = np.arange(w, dtype=np.float64)[None, :]
    dist2 = (rows - click.row) ** 2 + (cols - click.col) ** 2
    inside = dist2 <= radius * radius

    if click.index <= params.scheme_switch_index:
        d = (p - p_u) ** 2
        d_in = d[inside]
        d_sorted = np.sort(d_in)
        d_bar = float(d_sorted[(d_sorted.size - 1) // 2])
        if d_bar == 0.0:
            gamma = np.where(d == 0.0, big_gamma, 1.0)
        else:
            shrink = np.clip((d_bar - d) / d_bar, 0.0, None) ** 3
            gamma = (big_gamma - 1.0) * shrink + 1.0
    elif radius == 0.0:
        # degenerate window: only the clicked pixel itself
        gamma = np.full_like(dist2, big_gamma)
    else:
        t = np.sqrt(dist2) / radius
        gamma = big_gamma * (1.0 - t) + t
        # outside-window values can go below 1 (even negative); they are
        # masked out below but would overflow the power, so pin them
        gamma = np.maximum(gamma, 1.0)

    q = np.clip(p, params.eps, 1.0 - params.eps)
    if click.label is Label.FOREGROUND:
        corrected = q ** (1.0 / gamma)
    else:
        corrected = q**gamma

    out = p.copy()
    out[inside] = corrected[inside]
    return out
