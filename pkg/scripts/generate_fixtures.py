#!/usr/bin/env python3
"""Generate the committed test fixtures.

Run from the repo root:  python3 scripts/generate_fixtures.py

Outputs under tests/fixtures/:
  shapes/   10 synthetic shape masks + clicker_fixtures.json (expected
            first/next clicks computed by the brute-force oracles)
  bench/    10-sample synthetic benchmark (images, masks, manifest) and the
            golden eval reports with modulation on and off
  cli/      MFPGRID input, click descriptor, and expected modulate output
            (cross-checked against the naive per-pixel oracle before writing)
  traj/     golden reference-backend session trajectory on a high-contrast disk
"""

import json
import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

from mfp.clicksim import run_session
from mfp.evalharness import EvalConfig, load_manifest, report_to_json, run_benchmark
from mfp.grid import (
    Click,
    Label,
    format_clicks,
    read_grid_bytes,
    read_image_rgb,
    read_mask_png,
    write_grid_bytes,
    write_mask_png,
)
from mfp.grid import image_to_png_bytes
from mfp.modulation import ModulationParams, modulate
from mfp.segmenter import ReferenceSegmenter
from oracles import brute_components, brute_deep_point, naive_modulate

FIX = ROOT / "tests" / "fixtures"


def disk(h, w, cr, cc, radius):
    rows = np.arange(h)[:, None]
    cols = np.arange(w)[None, :]
    return (((rows - cr) ** 2 + (cols - cc) ** 2) <= radius * radius).astype(np.uint8)


def make_shapes():
    """10 masks, 24x24 each."""
    shapes = {}
    shapes["disk"] = disk(24, 24, 12, 12, 7)
    m = np.zeros((24, 24), dtype=np.uint8)
    m[6:18, 6:18] = 1
    shapes["square"] = m
    m = np.zeros((24, 24), dtype=np.uint8)
    m[3:21, 10:14] = 1
    shapes["tall_rect"] = m
    m = np.zeros((24, 24), dtype=np.uint8)
    m[12, 8:11] = 1
    shapes["bar3"] = m
    m = np.zeros((24, 24), dtype=np.uint8)
    m[4:20, 4:8] = 1
    m[16:20, 4:18] = 1
    shapes["ell"] = m
    shapes["ring"] = (disk(24, 24, 12, 12, 9) & ~disk(24, 24, 12, 12, 5)).astype(np.uint8)
    m = (disk(24, 24, 7, 7, 4) | disk(24, 24, 17, 17, 3)).astype(np.uint8)
    shapes["two_blobs"] = m
    rows = np.arange(24)[:, None]
    cols = np.arange(24)[None, :]
    shapes["ellipse"] = ((((rows - 12) / 9.0) ** 2 + ((cols - 12) / 5.0) ** 2) <= 1.0).astype(np.uint8)
    m = np.zeros((24, 24), dtype=np.uint8)
    for r in range(24):
        m[r, max(0, r - 3) : min(24, r + 4)] = 1
    shapes["stripe"] = m
    m = np.zeros((24, 24), dtype=np.uint8)
    m[10:14, 3:21] = 1
    m[3:21, 10:14] = 1
    shapes["cross"] = m
    return shapes


def perturbed_pred(gt):
    """Deterministic erroneous prediction: erase a corner block of the
    object's bounding box and add a spurious 2x2 blob in free space."""
    pred = gt.copy()
    rs, cs = np.nonzero(gt)
    r0, c0 = rs.min(), cs.min()
    pred[r0 : r0 + 4, c0 : c0 + 4] = 0
    free = np.argwhere((gt == 0) & (pred == 0))
    # last row-major free pixel with room for a 2x2 block
    for r, c in free[::-1]:
        if r + 1 < gt.shape[0] and c + 1 < gt.shape[1] and not gt[r : r + 2, c : c + 2].any():
            pred[r : r + 2, c : c + 2] = 1
            break
    return pred


def expected_next_click(pred, gt, n_history):
    fn = [(int(r), int(c)) for r, c in np.argwhere((gt == 1) & (pred == 0))]
    fp = [(int(r), int(c)) for r, c in np.argwhere((gt == 0) & (pred == 1))]

    def comps(pixels):
        if not pixels:
            return []
        m = np.zeros(gt.shape, dtype=np.uint8)
        for r, c in pixels:
            m[r, c] = 1
        return brute_components(m)

    pool = [(px, "foreground") for px in comps(fn)] + [(px, "background") for px in comps(fp)]
    pool.sort(key=lambda item: (-len(item[0]), item[0][0]))
    pixels, label = pool[0]
    r, c = brute_deep_point(pixels, gt.shape)
    return {"row": int(r), "col": int(c), "label": label, "index": n_history + 1}


def gen_shapes():
    outdir = FIX / "shapes"
    outdir.mkdir(parents=True, exist_ok=True)
    fixtures = {}
    for name, gt in make_shapes().items():
        write_mask_png(outdir / f"{name}.png", gt)
        pixels = [(int(r), int(c)) for r, c in np.argwhere(gt == 1)]
        fr, fc = brute_deep_point(pixels, gt.shape)
        pred = perturbed_pred(gt)
        write_mask_png(outdir / f"{name}_pred.png", pred)
        fixtures[name] = {
            "first_click": {"row": int(fr), "col": int(fc), "label": "foreground", "index": 1},
            "next_click_from_empty": expected_next_click(np.zeros_like(gt), gt, 0),
            "next_click_from_pred": expected_next_click(pred, gt, 1),
        }
    (outdir / "clicker_fixtures.json").write_text(json.dumps(fixtures, indent=2, sort_keys=True) + "\n")
    print(f"shapes: {len(fixtures)} fixtures")


def texture(h, w):
    rows = np.arange(h)[:, None]
    cols = np.arange(w)[None, :]
    return (((rows * 31 + cols * 17) % 11) / 11.0 - 0.5) * 0.08


def bench_image(mask, fg, bg):
    img = np.empty(mask.shape + (3,), dtype=np.float64)
    img[mask == 1] = fg
    img[mask == 0] = bg
    img += texture(*mask.shape)[..., None]
    return np.clip(img, 0.0, 1.0)


def gen_bench():
    outdir = FIX / "bench"
    outdir.mkdir(parents=True, exist_ok=True)
    h = w = 48
    specs = [
        ("disk_big", disk(h, w, 24, 24, 16), (0.85, 0.2, 0.2), (0.1, 0.15, 0.75)),
        ("disk_small", disk(h, w, 18, 30, 8), (0.9, 0.85, 0.2), (0.15, 0.1, 0.2)),
        ("square", _block(h, w, 10, 10, 26, 26), (0.2, 0.8, 0.3), (0.7, 0.7, 0.7)),
        ("rect_low_contrast", _block(h, w, 14, 6, 18, 34), (0.55, 0.5, 0.5), (0.45, 0.5, 0.5)),
        ("ring", (disk(h, w, 24, 24, 18) & ~disk(h, w, 24, 24, 10)).astype(np.uint8), (0.9, 0.4, 0.1), (0.1, 0.3, 0.6)),
        ("two_blobs", (disk(h, w, 14, 14, 9) | disk(h, w, 34, 34, 6)).astype(np.uint8), (0.8, 0.1, 0.6), (0.2, 0.6, 0.2)),
        ("ell", _ell(h, w), (0.9, 0.9, 0.9), (0.15, 0.15, 0.15)),
        ("stripe", _stripe(h, w), (0.3, 0.4, 0.9), (0.8, 0.75, 0.3)),
        ("ellipse", _ellipse(h, w), (0.7, 0.2, 0.8), (0.2, 0.7, 0.4)),
        ("cross", _cross(h, w), (0.95, 0.55, 0.1), (0.1, 0.45, 0.8)),
    ]
    samples = []
    for name, mask, fg, bg in specs:
        (outdir / f"{name}.png").write_bytes(image_to_png_bytes(bench_image(mask, fg, bg)))
        write_mask_png(outdir / f"{name}_mask.png", mask)
        samples.append({"id": name, "image": f"{name}.png", "mask": f"{name}_mask.png"})
    (outdir / "manifest.json").write_text(
        json.dumps({"dataset": "synthetic10", "samples": samples}, indent=2) + "\n"
    )
    manifest = load_manifest(outdir / "manifest.json")
    for enabled, fname in ((True, "report_mod_on.json"), (False, "report_mod_off.json")):
        report = run_benchmark(manifest, EvalConfig(cap=20, modulation_enabled=enabled))
        (outdir / fname).write_text(report_to_json(report))
        print(f"bench {fname}: auc={report['auc']:.4f} mean_noc={report['mean_noc']}")


def _block(h, w, r0, c0, r1, c1):
    m = np.zeros((h, w), dtype=np.uint8)
    m[r0:r1, c0:c1] = 1
    return m


def _ell(h, w):
    m = np.zeros((h, w), dtype=np.uint8)
    m[8:40, 8:16] = 1
    m[32:40, 8:36] = 1
    return m


def _stripe(h, w):
    m = np.zeros((h, w), dtype=np.uint8)
    for r in range(h):
        m[r, max(0, r - 5) : min(w, r + 6)] = 1
    return m


def _ellipse(h, w):
    rows = np.arange(h)[:, None]
    cols = np.arange(w)[None, :]
    return ((((rows - 24) / 18.0) ** 2 + ((cols - 24) / 10.0) ** 2) <= 1.0).astype(np.uint8)


def _cross(h, w):
    m = np.zeros((h, w), dtype=np.uint8)
    m[20:28, 6:42] = 1
    m[6:42, 20:28] = 1
    return m


def gen_cli():
    outdir = FIX / "cli"
    outdir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(2024)
    p = rng.random((12, 16))
    clicks = [
        Click(5, 7, Label.FOREGROUND, 1),
        Click(2, 12, Label.BACKGROUND, 2),
        Click(9, 3, Label.FOREGROUND, 3),
    ]
    (outdir / "input.grid").write_bytes(write_grid_bytes(p))
    (outdir / "clicks.txt").write_text(format_clicks(clicks))
    # the CLI reads the float32 file, so replay from the decoded values
    params = ModulationParams()
    grid = read_grid_bytes(write_grid_bytes(p))
    history = []
    for click in clicks:
        ref = np.array(naive_modulate(grid, click, history, params))
        grid = modulate(grid, click, history, params)
        assert np.max(np.abs(grid - ref)) <= 1e-12, "modulate disagrees with oracle"
        history.append(click)
    (outdir / "expected.grid").write_bytes(write_grid_bytes(grid))
    print("cli: expected.grid written (oracle-verified)")


def gen_traj():
    outdir = FIX / "traj"
    outdir.mkdir(parents=True, exist_ok=True)
    gt = disk(32, 32, 16, 16, 10)
    img = bench_image(gt, (0.9, 0.15, 0.15), (0.1, 0.1, 0.8))
    (outdir / "disk.png").write_bytes(image_to_png_bytes(img))
    write_mask_png(outdir / "disk_mask.png", gt)
    # replay from the committed PNG so the fixture matches what the CLI reads
    img = read_image_rgb(outdir / "disk.png")
    gt = read_mask_png(outdir / "disk_mask.png")
    traj = run_session(img, gt, ReferenceSegmenter(), max_clicks=6)
    ious = traj.ious
    assert all(a <= b + 1e-12 for a, b in zip(ious, ious[1:])), f"IoU not non-decreasing: {ious}"
    doc = {
        "rounds": [
            {
                "index": r.click.index,
                "row": r.click.row,
                "col": r.click.col,
                "label": r.click.label.value,
                "iou": r.iou,
            }
            for r in traj.rounds
        ]
    }
    (outdir / "disk_trajectory.json").write_text(json.dumps(doc, indent=2) + "\n")
    print(f"traj: {len(ious)} rounds, ious={['%.3f' % v for v in ious]}")


if __name__ == "__main__":
    gen_shapes()
    gen_cli()
    gen_traj()
    gen_bench()
