"""Pixel-grid primitives: probability grids, binary masks, clicks, and the
basic geometric/overlap operations every other module builds on.

Probability grids are float64 numpy arrays of shape (H, W) with values in
[0, 1]; binary masks are uint8 arrays of shape (H, W) with values in {0, 1}.
Both are treated as immutable once constructed.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from enum import Enum

import numpy as np
from PIL import Image
from scipy import ndimage


class Label(Enum):
    FOREGROUND = "foreground"
    BACKGROUND = "background"

    @classmethod
    def parse(cls, text: str) -> "Label":
        t = text.strip().lower()
        if t in ("fg", "foreground", "1"):
            return cls.FOREGROUND
        if t in ("bg", "background", "0"):
            return cls.BACKGROUND
        raise ValueError(f"unknown click label: {text!r}")

    @property
    def short(self) -> str:
        return "fg" if self is Label.FOREGROUND else "bg"


@dataclass(frozen=True)
class Click:
    row: int
    col: int
    label: Label
    index: int  # 1-based round number

    def __post_init__(self):
        if self.index < 1:
            raise ValueError("click index must be >= 1")
        if self.row < 0 or self.col < 0:
            raise ValueError("click position must be non-negative")


def validate_history(history: list[Click]) -> None:
    """Click indices must be 1..n with no gaps."""
    for k, c in enumerate(history):
        if c.index != k + 1:
            raise ValueError(f"click history indices must be 1..n, got {c.index} at position {k}")


def as_prob_grid(values) -> np.ndarray:
    p = np.asarray(values, dtype=np.float64)
    if p.ndim != 2 or p.shape[0] < 1 or p.shape[1] < 1:
        raise ValueError(f"probability grid must be 2-D and nonempty, got shape {p.shape}")
    if np.any(p < 0.0) or np.any(p > 1.0):
        raise ValueError("probability grid values must lie in [0, 1]")
    return p


def as_mask(values) -> np.ndarray:
    m = np.asarray(values)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"mask must be 2-D and nonempty, got shape {m.shape}")
    if not np.isin(m, (0, 1)).all():
        raise ValueError("mask values must be exactly 0 or 1")
    return m.astype(np.uint8)


def iou(a: np.ndarray, b: np.ndarray) -> float:
    """Intersection over union of two binary masks.

    Two empty masks have IoU 1 by convention (avoids 0/0).
    """
    if a.shape != b.shape:
        raise ValueError(f"mask dimensions differ: {a.shape} vs {b.shape}")
    inter = int(np.count_nonzero(np.logical_and(a, b)))
    union = int(np.count_nonzero(np.logical_or(a, b)))
    if union == 0:
        return 1.0
    return inter / union


def threshold(p: np.ndarray, tau: float = 0.5) -> np.ndarray:
    """Binarize a probability grid; ties (p == tau) go to foreground."""
    if not 0.0 < tau < 1.0:
        raise ValueError(f"threshold must lie in (0, 1), got {tau}")
    return (p >= tau).astype(np.uint8)


def distance_to_zero(m: np.ndarray) -> np.ndarray:
    """Exact Euclidean distance from each pixel to the nearest 0-pixel.

    Pixels outside the grid count as zeros, so a 1-pixel zero pad before the
    transform is sufficient (the nearest out-of-bounds zero is always
    axis-perpendicular).
    """
    padded = np.pad(np.asarray(m, dtype=np.uint8), 1, mode="constant", constant_values=0)
    dist = ndimage.distance_transform_edt(padded)
    return dist[1:-1, 1:-1]


@dataclass(frozen=True)
class Component:
    """One 4-connected component of 1-pixels, pixels listed in row-major order."""

    pixels: tuple[tuple[int, int], ...]

    @property
    def area(self) -> int:
        return len(self.pixels)


def connected_components(m: np.ndarray) -> list[Component]:
    """4-connected components of the 1-pixels, ordered by area descending
    then by smallest row-major first pixel."""
    structure = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=np.uint8)
    labeled, n = ndimage.label(m, structure=structure)
    comps = []
    for lab in range(1, n + 1):
        rows, cols = np.nonzero(labeled == lab)
        # np.nonzero scans row-major, so pixel order is already canonical
        comps.append(Component(tuple(zip(rows.tolist(), cols.tolist()))))
    comps.sort(key=lambda c: (-c.area, c.pixels[0]))
    return comps


def component_mask(comp: Component, shape: tuple[int, int]) -> np.ndarray:
    m = np.zeros(shape, dtype=np.uint8)
    rows, cols = zip(*comp.pixels)
    m[list(rows), list(cols)] = 1
    return m


# ---------------------------------------------------------------------------
# MFPGRID v1 file format: ASCII header "MFPGRID 1 <width> <height>\n" followed
# by width*height little-endian float32 values, row-major.
# ---------------------------------------------------------------------------

_MAGIC = b"MFPGRID"


def write_grid_bytes(p: np.ndarray) -> bytes:
    h, w = p.shape
    header = f"MFPGRID 1 {w} {h}\n".encode("ascii")
    body = np.asarray(p, dtype="<f4").tobytes(order="C")
    return header + body


def read_grid_bytes(data: bytes) -> np.ndarray:
    nl = data.find(b"\n")
    if nl < 0:
        raise ValueError("MFPGRID: missing header line")
    parts = data[:nl].split()
    if len(parts) != 4 or parts[0] != _MAGIC or parts[1] != b"1":
        raise ValueError("MFPGRID: bad header")
    w, h = int(parts[2]), int(parts[3])
    if w < 1 or h < 1:
        raise ValueError("MFPGRID: bad dimensions")
    body = data[nl + 1 :]
    expected = w * h * 4
    if len(body) != expected:
        raise ValueError(f"MFPGRID: expected {expected} payload bytes, got {len(body)}")
    values = np.frombuffer(body, dtype="<f4").astype(np.float64).reshape(h, w)
    return values


def write_grid(path, p: np.ndarray) -> None:
    with open(path, "wb") as f:
        f.write(write_grid_bytes(p))


def read_grid(path) -> np.ndarray:
    with open(path, "rb") as f:
        return read_grid_bytes(f.read())


# ---------------------------------------------------------------------------
# Binary masks as 8-bit grayscale PNG (nonzero = 1).
# ---------------------------------------------------------------------------

def mask_to_png_bytes(m: np.ndarray) -> bytes:
    img = Image.fromarray((np.asarray(m, dtype=np.uint8) * 255), mode="L")
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()


def mask_from_png_bytes(data: bytes) -> np.ndarray:
    img = Image.open(io.BytesIO(data)).convert("L")
    arr = np.asarray(img)
    return (arr != 0).astype(np.uint8)


def image_from_png_bytes(data: bytes) -> np.ndarray:
    """Decode a PNG into an (H, W, 3) float64 RGB array in [0, 1]."""
    img = Image.open(io.BytesIO(data)).convert("RGB")
    return np.asarray(img, dtype=np.float64) / 255.0


def image_to_png_bytes(image: np.ndarray) -> bytes:
    arr = np.clip(np.asarray(image, dtype=np.float64), 0.0, 1.0)
    img = Image.fromarray(np.round(arr * 255.0).astype(np.uint8), mode="RGB")
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()


def read_image_rgb(path) -> np.ndarray:
    with open(path, "rb") as f:
        return image_from_png_bytes(f.read())


def write_mask_png(path, m: np.ndarray) -> None:
    with open(path, "wb") as f:
        f.write(mask_to_png_bytes(m))


def read_mask_png(path) -> np.ndarray:
    with open(path, "rb") as f:
        return mask_from_png_bytes(f.read())


# ---------------------------------------------------------------------------
# Plain-text click descriptor: one click per line, "row col fg|bg index".
# ---------------------------------------------------------------------------

def parse_clicks(text: str) -> list[Click]:
    clicks = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 4:
            raise ValueError(f"click line {lineno}: expected 'row col fg|bg index', got {line!r}")
        clicks.append(Click(int(fields[0]), int(fields[1]), Label.parse(fields[2]), int(fields[3])))
    validate_history(clicks)
    return clicks


def format_clicks(clicks: list[Click]) -> str:
    return "".join(f"{c.row} {c.col} {c.label.short} {c.index}\n" for c in clicks)
