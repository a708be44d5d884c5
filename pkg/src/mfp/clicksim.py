"""Automatic click simulation and the interactive session loop.

The simulator reproduces the standard evaluation clicking strategy: the
first click goes to the interior-most pixel of the target object, every
later click to the interior-most pixel of the largest connected error
region (foreground click for a false-negative region, background for a
false-positive one). "Interior-most" is the exact argmax of the Euclidean
distance transform, ties broken row-major, so the whole loop is
deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import modulation as _modulation
from .grid import (
    Click,
    Label,
    as_mask,
    component_mask,
    connected_components,
    distance_to_zero,
    iou,
    threshold,
)
from .modulation import ModulationParams
from .segmenter import Backend, BackendInput, encode_clicks


def _deep_point(region: np.ndarray) -> tuple[int, int]:
    """Pixel of the region maximizing distance to its complement
    (out-of-bounds counts as complement); row-major tie-break."""
    dist = distance_to_zero(region)
    flat = int(np.argmax(dist))  # argmax scans row-major, first max wins
    return flat // region.shape[1], flat % region.shape[1]


def first_click(gt: np.ndarray) -> Click:
    gt = as_mask(gt)
    if not gt.any():
        raise ValueError("ground truth has no foreground pixel")
    r, c = _deep_point(gt)
    return Click(r, c, Label.FOREGROUND, index=1)


def next_click(pred: np.ndarray, gt: np.ndarray, history: list[Click]) -> Click:
    pred = as_mask(pred)
    gt = as_mask(gt)
    if pred.shape != gt.shape:
        raise ValueError("prediction and ground truth dimensions differ")
    fn = ((gt == 1) & (pred == 0)).astype(np.uint8)
    fp = ((gt == 0) & (pred == 1)).astype(np.uint8)
    if not fn.any() and not fp.any():
        raise ValueError("prediction equals ground truth; no error region to click")
    pool = [(comp, Label.FOREGROUND) for comp in connected_components(fn)]
    pool += [(comp, Label.BACKGROUND) for comp in connected_components(fp)]
    pool.sort(key=lambda item: (-item[0].area, item[0].pixels[0]))
    comp, label = pool[0]
    r, c = _deep_point(component_mask(comp, gt.shape))
    return Click(r, c, label, index=len(history) + 1)


@dataclass(frozen=True)
class TrajectoryRound:
    click: Click
    p: np.ndarray           # P^t
    mask: np.ndarray        # thresholded prediction
    iou: Optional[float]    # present only when ground truth is known


@dataclass
class SessionTrajectory:
    rounds: list[TrajectoryRound] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rounds)

    @property
    def ious(self) -> list[float]:
        return [r.iou for r in self.rounds]


def run_session(
    image: np.ndarray,
    gt: np.ndarray,
    backend: Backend,
    mod_params: ModulationParams = ModulationParams(),
    max_clicks: int = 20,
    modulation_enabled: bool = True,
    r_click: int = 5,
    modulate_fn: Optional[Callable] = None,
) -> SessionTrajectory:
    """Run the full simulated annotation loop against a ground-truth mask.

    Per round: pick the click, modulate the previous probability map (when
    enabled), predict, threshold at 0.5, record IoU. Stops early when the
    prediction matches the ground truth exactly.

    modulate_fn overrides the modulation step (used by tests to instrument
    the call); it is never invoked when modulation_enabled is false.
    """
    if max_clicks < 1:
        raise ValueError("max_clicks must be >= 1")
    gt = as_mask(gt)
    h, w = gt.shape
    if image.shape[:2] != (h, w):
        raise ValueError("image and ground truth dimensions differ")
    if modulate_fn is None:
        modulate_fn = _modulation.modulate

    p_prev = np.zeros((h, w), dtype=np.float64)
    pred = np.zeros((h, w), dtype=np.uint8)
    history: list[Click] = []
    traj = SessionTrajectory()

    for t in range(1, max_clicks + 1):
        click = first_click(gt) if t == 1 else next_click(pred, gt, history)
        if modulation_enabled:
            p_mod = modulate_fn(p_prev, click, history, mod_params)
        else:
            p_mod = p_prev
        history.append(click)
        clicks = encode_clicks(history, w, h, r_click=r_click)
        try:
            p = backend.predict(BackendInput(image=image, clicks=clicks, p_prev=p_prev, p_prev_mod=p_mod))
        except Exception as exc:
            raise RuntimeError(f"backend failed at round {t}") from exc
        pred = threshold(p, 0.5)
        traj.rounds.append(TrajectoryRound(click=click, p=p, mask=pred, iou=iou(pred, gt)))
        p_prev = p
        if np.array_equal(pred, gt):
            break
    return traj
