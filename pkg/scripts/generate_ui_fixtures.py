#!/usr/bin/env python3
"""Capture real HTTP session responses for the frontend test suite.

Run from the repo root:  python3 scripts/generate_ui_fixtures.py

Writes frontend/tests/fixtures/session_script.json containing the full wire
bodies for: session creation, a 5-click script, one undo, and the state
summaries in between. The frontend tests replay these through a stub
transport, so the UI never computes segmentation itself.
"""

import base64
import json
from pathlib import Path

import numpy as np
from fastapi.testclient import TestClient

from mfp.grid import image_to_png_bytes, mask_to_png_bytes
from mfp.service import create_app

ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "frontend" / "tests" / "fixtures"


def sample_image(h=24, w=24, r=7):
    rows = np.arange(h)[:, None]
    cols = np.arange(w)[None, :]
    mask = (((rows - h // 2) ** 2 + (cols - w // 2) ** 2) <= r * r).astype(np.uint8)
    img = np.empty((h, w, 3))
    img[mask == 1] = (0.9, 0.2, 0.2)
    img[mask == 0] = (0.1, 0.1, 0.8)
    return img, mask


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    client = TestClient(create_app())
    img, mask = sample_image()
    create_body = {
        "image_png_b64": base64.b64encode(image_to_png_bytes(img)).decode(),
        "mask_png_b64": base64.b64encode(mask_to_png_bytes(mask)).decode(),
    }
    created = client.post("/sessions", json=create_body).json()
    sid = created["id"]

    clicks = [
        {"row": 12, "col": 12, "label": "foreground"},
        {"row": 2, "col": 2, "label": "background"},
        {"row": 15, "col": 9, "label": "foreground"},
        {"row": 20, "col": 20, "label": "background"},
        {"row": 10, "col": 14, "label": "foreground"},
    ]
    steps = []
    for c in clicks:
        resp = client.post(f"/sessions/{sid}/clicks", json=c)
        assert resp.status_code == 200
        steps.append({"request": c, "response": resp.json()})

    undo_state = client.post(f"/sessions/{sid}/undo").json()
    final_state = client.get(f"/sessions/{sid}").json()

    doc = {
        "created": created,
        "steps": steps,
        "undo_state": undo_state,
        "final_state": final_state,
    }
    (OUT / "session_script.json").write_text(json.dumps(doc, indent=2) + "\n")
    print(f"wrote {OUT / 'session_script.json'} ({len(steps)} clicks, final round {final_state['round']})")


if __name__ == "__main__":
    main()
