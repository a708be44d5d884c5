"""HTTP session service: exposes the interactive click loop to UI clients.

Sessions live in process memory with per-round snapshots (for undo) and LRU
eviction beyond a configurable cap. Requests to different sessions may run
concurrently; requests to the same session are serialized by a per-session
lock. Heatmaps travel as base64 MFPGRID v1 payloads so clients can decode
them losslessly.
"""

from __future__ import annotations

import base64
import threading
import uuid
from collections import OrderedDict
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

import numpy as np
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .evalharness import load_manifest
from .grid import (
    Click,
    Label,
    image_from_png_bytes,
    mask_from_png_bytes,
    mask_to_png_bytes,
    iou,
    threshold,
    write_grid_bytes,
)
from .modulation import ModulationParams, compute_radius, modulate
from .segmenter import BackendInput, encode_clicks, make_backend


class CreateSessionRequest(BaseModel):
    image_png_b64: Optional[str] = None
    dataset: Optional[str] = None
    sample: Optional[str] = None
    mask_png_b64: Optional[str] = None


class ClickRequest(BaseModel):
    row: int
    col: int
    label: str


@dataclass
class _Snapshot:
    click: Click
    p: np.ndarray
    p_mod: np.ndarray
    mask: np.ndarray


@dataclass
class _Session:
    id: str
    image: np.ndarray
    gt: Optional[np.ndarray]
    snapshots: list[_Snapshot] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)
    created: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())
    updated: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    @property
    def round(self) -> int:
        return len(self.snapshots)

    @property
    def history(self) -> list[Click]:
        return [s.click for s in self.snapshots]

    @property
    def p_prev(self) -> np.ndarray:
        if self.snapshots:
            return self.snapshots[-1].p
        return np.zeros(self.image.shape[:2], dtype=np.float64)


def _b64(data: bytes) -> str:
    return base64.b64encode(data).decode("ascii")


def create_app(
    dataset_root: Optional[str] = None,
    modulation_enabled: bool = True,
    mod_params: ModulationParams = ModulationParams(),
    backend: str = "reference",
    backend_params: Optional[dict] = None,
    r_click: int = 5,
    session_cap: int = 64,
) -> FastAPI:
    app = FastAPI(title="mfp session service")
    sessions: "OrderedDict[str, _Session]" = OrderedDict()
    store_lock = threading.Lock()
    predictor = make_backend(backend, **(backend_params or {}))
    root = Path(dataset_root) if dataset_root else None

    def get_session(sid: str) -> _Session:
        with store_lock:
            sess = sessions.get(sid)
            if sess is None:
                raise HTTPException(status_code=404, detail="unknown session")
            sessions.move_to_end(sid)
            return sess

    def load_dataset_sample(name: str, sample_id: str):
        if root is None:
            raise HTTPException(status_code=404, detail="no dataset root configured")
        manifest_path = root / f"{name}.json"
        if not manifest_path.exists():
            raise HTTPException(status_code=404, detail=f"unknown dataset {name!r}")
        manifest = load_manifest(manifest_path)
        for s in manifest.samples:
            if s.id == sample_id:
                return s
        raise HTTPException(status_code=404, detail=f"unknown sample {sample_id!r}")

    def state_summary(sess: _Session) -> dict:
        return {
            "id": sess.id,
            "round": sess.round,
            "width": sess.image.shape[1],
            "height": sess.image.shape[0],
            "gt_available": sess.gt is not None,
            "clicks": [
                {"row": c.row, "col": c.col, "label": c.label.value, "index": c.index}
                for c in sess.history
            ],
            "created": sess.created,
            "updated": sess.updated,
        }

    @app.post("/sessions", status_code=201)
    def create_session(req: CreateSessionRequest):
        gt = None
        if req.dataset is not None or req.sample is not None:
            if not (req.dataset and req.sample):
                raise HTTPException(status_code=400, detail="dataset and sample must be given together")
            s = load_dataset_sample(req.dataset, req.sample)
            image = image_from_png_bytes(s.image.read_bytes())
            gt = mask_from_png_bytes(s.mask.read_bytes())
        elif req.image_png_b64:
            try:
                image = image_from_png_bytes(base64.b64decode(req.image_png_b64))
            except Exception:
                raise HTTPException(status_code=400, detail="malformed image") from None
            if req.mask_png_b64:
                try:
                    gt = mask_from_png_bytes(base64.b64decode(req.mask_png_b64))
                except Exception:
                    raise HTTPException(status_code=400, detail="malformed mask") from None
                if gt.shape != image.shape[:2]:
                    raise HTTPException(status_code=400, detail="mask dimensions differ from image")
        else:
            raise HTTPException(status_code=400, detail="provide image_png_b64 or dataset/sample")

        sess = _Session(id=uuid.uuid4().hex, image=image, gt=gt)
        with store_lock:
            sessions[sess.id] = sess
            while len(sessions) > session_cap:
                sessions.popitem(last=False)
        return {
            "id": sess.id,
            "width": image.shape[1],
            "height": image.shape[0],
            "gt_available": gt is not None,
        }

    @app.get("/sessions/{sid}")
    def get_state(sid: str):
        return state_summary(get_session(sid))

    @app.post("/sessions/{sid}/clicks")
    def add_click(sid: str, req: ClickRequest):
        sess = get_session(sid)
        h, w = sess.image.shape[:2]
        if not (0 <= req.row < h and 0 <= req.col < w):
            raise HTTPException(status_code=422, detail="click out of bounds")
        try:
            label = Label.parse(req.label)
        except ValueError:
            raise HTTPException(status_code=422, detail=f"bad label {req.label!r}") from None
        with sess.lock:
            history = sess.history
            click = Click(req.row, req.col, label, index=sess.round + 1)
            p_prev = sess.p_prev
            radius = compute_radius(click, history, mod_params.r_max)
            if modulation_enabled:
                p_mod = modulate(p_prev, click, history, mod_params)
            else:
                p_mod = p_prev
            clicks = encode_clicks(history + [click], w, h, r_click=r_click)
            p = predictor.predict(
                BackendInput(image=sess.image, clicks=clicks, p_prev=p_prev, p_prev_mod=p_mod)
            )
            mask = threshold(p, 0.5)
            sess.snapshots.append(_Snapshot(click=click, p=p, p_mod=p_mod, mask=mask))
            sess.updated = datetime.now(timezone.utc).isoformat()
            body = {
                "round": sess.round,
                "mask_png_b64": _b64(mask_to_png_bytes(mask)),
                "p_grid_b64": _b64(write_grid_bytes(p)),
                "p_prev_grid_b64": _b64(write_grid_bytes(p_prev)),
                "p_mod_grid_b64": _b64(write_grid_bytes(p_mod)),
                "modulation_window": {"row": click.row, "col": click.col, "radius": radius},
            }
            if sess.gt is not None:
                body["iou"] = iou(mask, sess.gt)
            return body

    @app.post("/sessions/{sid}/undo")
    def undo(sid: str):
        sess = get_session(sid)
        with sess.lock:
            if not sess.snapshots:
                raise HTTPException(status_code=409, detail="nothing to undo")
            sess.snapshots.pop()
            sess.updated = datetime.now(timezone.utc).isoformat()
            return state_summary(sess)

    @app.post("/sessions/{sid}/reset")
    def reset(sid: str):
        sess = get_session(sid)
        with sess.lock:
            sess.snapshots.clear()
            sess.updated = datetime.now(timezone.utc).isoformat()
            return state_summary(sess)

    @app.get("/datasets")
    def list_datasets():
        if root is None or not root.exists():
            return {"datasets": []}
        return {"datasets": sorted(p.stem for p in root.glob("*.json"))}

    @app.get("/datasets/{name}")
    def dataset_samples(name: str):
        if root is None:
            raise HTTPException(status_code=404, detail="no dataset root configured")
        manifest_path = root / f"{name}.json"
        if not manifest_path.exists():
            raise HTTPException(status_code=404, detail=f"unknown dataset {name!r}")
        manifest = load_manifest(manifest_path)
        return {"dataset": manifest.name, "samples": [s.id for s in manifest.samples]}

    @app.get("/datasets/{name}/{sample_id}")
    def dataset_sample(name: str, sample_id: str):
        s = load_dataset_sample(name, sample_id)
        image = s.image.read_bytes()
        mask = s.mask.read_bytes()
        im = image_from_png_bytes(image)
        return {
            "id": s.id,
            "width": im.shape[1],
            "height": im.shape[0],
            "image_png_b64": _b64(image),
            "mask_png_b64": _b64(mask),
        }

    return app
