"""Pluggable segmentation backend and the deterministic reference segmenter.

A backend consumes the image, the rasterized click maps, and the previous
(raw and modulated) probability maps, and emits the next probability map.
The reference backend stands in for a trained network: each marked click
pixel radiates a joint spatial/color Gaussian kernel, foreground and
background evidence are max-pooled separately, and the modulated previous
map enters as a logit prior.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Protocol

import numpy as np

from .grid import Click, Label


@dataclass(frozen=True)
class ClickMaps:
    fg: np.ndarray  # uint8 mask of foreground click disks
    bg: np.ndarray


@dataclass(frozen=True)
class BackendInput:
    image: np.ndarray       # (H, W, 3) float64 in [0, 1]
    clicks: ClickMaps
    p_prev: np.ndarray      # (H, W) float64 in [0, 1]
    p_prev_mod: np.ndarray

    def __post_init__(self):
        shape = self.p_prev.shape
        if (
            self.image.shape[:2] != shape
            or self.image.ndim != 3
            or self.image.shape[2] != 3
            or self.clicks.fg.shape != shape
            or self.clicks.bg.shape != shape
            or self.p_prev_mod.shape != shape
        ):
            raise ValueError("backend input dimensions are inconsistent")


class Backend(Protocol):
    def predict(self, inp: BackendInput) -> np.ndarray: ...


def encode_clicks(history: list[Click], width: int, height: int, r_click: int = 5) -> ClickMaps:
    """Stamp a disk of radius r_click (membership <=, clipped to bounds)
    around each click into the map matching its label."""
    fg = np.zeros((height, width), dtype=np.uint8)
    bg = np.zeros((height, width), dtype=np.uint8)
    rows = np.arange(height)[:, None]
    cols = np.arange(width)[None, :]
    for c in history:
        if not (0 <= c.row < height and 0 <= c.col < width):
            raise ValueError(f"click ({c.row}, {c.col}) out of bounds for {height}x{width}")
        disk = (rows - c.row) ** 2 + (cols - c.col) ** 2 <= r_click * r_click
        target = fg if c.label is Label.FOREGROUND else bg
        target[disk] = 1
    return ClickMaps(fg=fg, bg=bg)


@dataclass(frozen=True)
class ReferenceSegmenterParams:
    sigma_s: float = 40.0   # spatial bandwidth, pixels
    sigma_c: float = 0.25   # color bandwidth
    alpha: float = 4.0      # click-evidence gain
    beta: float = 1.0       # previous-map prior gain

    def __post_init__(self):
        if min(self.sigma_s, self.sigma_c, self.alpha, self.beta) <= 0:
            raise ValueError("all reference segmenter parameters must be positive")


def _logit(p: np.ndarray) -> np.ndarray:
    return np.log(p) - np.log1p(-p)


def _evidence(image: np.ndarray, marked: np.ndarray, params: ReferenceSegmenterParams) -> np.ndarray:
    """Max over marked pixels c of exp(-||x-c||^2 / 2s^2) * exp(-||I(x)-I(c)||^2 / 2c^2).

    Computed as exp(-min energy) so the max-pool happens before the exp;
    marked pixels are processed in chunks to bound memory.
    """
    h, w = marked.shape
    rs, cs = np.nonzero(marked)
    if rs.size == 0:
        return np.zeros((h, w), dtype=np.float64)
    rows = np.repeat(np.arange(h, dtype=np.float64), w)
    cols = np.tile(np.arange(w, dtype=np.float64), h)
    pix = image.reshape(-1, 3)
    centers = image[rs, cs]
    inv_2ss = 1.0 / (2.0 * params.sigma_s**2)
    inv_2sc = 1.0 / (2.0 * params.sigma_c**2)
    best = np.full(h * w, np.inf)
    for start in range(0, rs.size, 256):
        rr = rs[start : start + 256].astype(np.float64)[:, None]
        cc = cs[start : start + 256].astype(np.float64)[:, None]
        d2 = (rows[None, :] - rr) ** 2 + (cols[None, :] - cc) ** 2
        color_d2 = ((pix[None, :, :] - centers[start : start + 256, None, :]) ** 2).sum(axis=2)
        energy = d2 * inv_2ss + color_d2 * inv_2sc
        np.minimum(best, energy.min(axis=0), out=best)
    return np.exp(-best).reshape(h, w)


class ReferenceSegmenter:
    """Deterministic closed-form backend; safe for concurrent predict calls."""

    def __init__(self, params: ReferenceSegmenterParams = ReferenceSegmenterParams()):
        self.params = params

    def predict(self, inp: BackendInput) -> np.ndarray:
        if not inp.clicks.fg.any() and not inp.clicks.bg.any():
            raise ValueError("reference segmenter needs at least one click")
        fg_ev = _evidence(inp.image, inp.clicks.fg, self.params)
        bg_ev = _evidence(inp.image, inp.clicks.bg, self.params)
        prior = _logit(np.clip(inp.p_prev_mod, 1e-4, 1.0 - 1e-4))
        z = self.params.alpha * (fg_ev - bg_ev) + self.params.beta * prior
        with np.errstate(over="ignore"):
            return 1.0 / (1.0 + np.exp(-z))


_BACKENDS = {"reference": ReferenceSegmenter}


def make_backend(name: str, **kwargs) -> Backend:
    try:
        cls = _BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown backend {name!r}; available: {sorted(_BACKENDS)}") from None
    if cls is ReferenceSegmenter:
        return ReferenceSegmenter(ReferenceSegmenterParams(**kwargs))
    return cls(**kwargs)


def logistic(z: float) -> float:
    return 1.0 / (1.0 + math.exp(-z))
