"""Benchmark harness: dataset manifests, NoC / mIoU / AUC metrics, and
deterministic batch reports."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .clicksim import SessionTrajectory, run_session
from .grid import read_image_rgb, read_mask_png
from .modulation import ModulationParams
from .segmenter import make_backend

DEFAULT_TARGETS = (0.85, 0.90, 0.95)


@dataclass(frozen=True)
class Sample:
    id: str
    image: Path
    mask: Path


@dataclass(frozen=True)
class DatasetManifest:
    name: str
    samples: tuple[Sample, ...]


def load_manifest(path) -> DatasetManifest:
    path = Path(path)
    with open(path) as f:
        doc = json.load(f)
    base = path.parent
    samples = []
    seen = set()
    for entry in doc["samples"]:
        sid = entry["id"]
        if sid in seen:
            raise ValueError(f"duplicate sample id {sid!r} in manifest")
        seen.add(sid)
        img, msk = base / entry["image"], base / entry["mask"]
        for p in (img, msk):
            if not p.exists():
                raise FileNotFoundError(f"manifest references missing file: {p}")
        samples.append(Sample(id=sid, image=img, mask=msk))
    return DatasetManifest(name=doc.get("dataset", path.stem), samples=tuple(samples))


@dataclass(frozen=True)
class EvalConfig:
    targets: tuple[float, ...] = DEFAULT_TARGETS
    cap: int = 20
    modulation_enabled: bool = True
    modulation: ModulationParams = ModulationParams()
    backend: str = "reference"
    backend_params: dict = field(default_factory=dict)
    r_click: int = 5

    def __post_init__(self):
        if self.cap < 1:
            raise ValueError("click cap must be >= 1")
        if any(not 0.0 < t < 1.0 for t in self.targets):
            raise ValueError("target IoUs must lie in (0, 1)")

    @classmethod
    def from_dict(cls, doc: dict) -> "EvalConfig":
        kwargs = dict(doc)
        if "targets" in kwargs:
            kwargs["targets"] = tuple(kwargs["targets"])
        if "modulation" in kwargs:
            kwargs["modulation"] = ModulationParams(**kwargs["modulation"])
        return cls(**kwargs)

    def to_dict(self) -> dict:
        m = self.modulation
        return {
            "targets": list(self.targets),
            "cap": self.cap,
            "modulation_enabled": self.modulation_enabled,
            "modulation": {
                "scheme_switch_index": m.scheme_switch_index,
                "r_max": m.r_max,
                "p_target_fg": m.p_target_fg,
                "p_target_bg": m.p_target_bg,
                "eps": m.eps,
            },
            "backend": self.backend,
            "backend_params": dict(sorted(self.backend_params.items())),
            "r_click": self.r_click,
        }


def _ious(traj) -> list[float]:
    if isinstance(traj, SessionTrajectory):
        return list(traj.ious)
    return list(traj)


def noc(traj, target: float, cap: int) -> tuple[int, bool]:
    """Clicks needed to reach the target IoU: (clicks, reached). Trajectories
    that never reach the target within min(cap, length) count as cap clicks
    with reached=False."""
    ious = _ious(traj)
    if not ious:
        raise ValueError("empty trajectory")
    for k, v in enumerate(ious[:cap], start=1):
        if v >= target:
            return k, True
    return cap, False


def miou_curve(trajs: Sequence, cap: int) -> list[float]:
    """Mean IoU after k clicks, k = 1..cap; sessions that stopped early
    carry their final IoU forward."""
    all_ious = [_ious(t) for t in trajs]
    if not all_ious:
        raise ValueError("no trajectories")
    curve = []
    for k in range(cap):
        total = 0.0
        for ious in all_ious:
            total += ious[k] if k < len(ious) else ious[-1]
        curve.append(total / len(all_ious))
    return curve


def auc(curve: Sequence[float]) -> float:
    """Normalized area under the mIoU curve: the arithmetic mean."""
    if not curve:
        raise ValueError("empty curve")
    return sum(curve) / len(curve)


def run_benchmark(manifest: DatasetManifest, config: EvalConfig) -> dict:
    """Run a session per sample and aggregate NoC/mIoU/AUC into a report
    dict. Deterministic given the same manifest and config; samples whose
    files fail to load are skipped and listed in the report."""
    if not manifest.samples:
        raise ValueError("manifest has no samples")
    backend = make_backend(config.backend, **config.backend_params)
    per_sample = []
    trajs = []
    skipped = []
    for sample in sorted(manifest.samples, key=lambda s: s.id):
        try:
            image = read_image_rgb(sample.image)
            gt = read_mask_png(sample.mask)
        except Exception as exc:
            skipped.append({"id": sample.id, "error": str(exc)})
            continue
        traj = run_session(
            image,
            gt,
            backend,
            mod_params=config.modulation,
            max_clicks=config.cap,
            modulation_enabled=config.modulation_enabled,
            r_click=config.r_click,
        )
        trajs.append(traj)
        entry = {"id": sample.id, "rounds": len(traj), "final_iou": traj.ious[-1], "noc": {}}
        for target in config.targets:
            clicks, reached = noc(traj, target, config.cap)
            entry["noc"][_tkey(target)] = {"clicks": clicks, "reached": reached}
        per_sample.append(entry)
    if not per_sample:
        raise ValueError("all samples failed to load")

    curve = miou_curve(trajs, config.cap)
    report = {
        "dataset": manifest.name,
        "config": config.to_dict(),
        "samples": per_sample,
        "mean_noc": {},
        "failures": {},
        "miou_curve": curve,
        "auc": auc(curve),
        "skipped": skipped,
    }
    for target in config.targets:
        key = _tkey(target)
        values = [s["noc"][key]["clicks"] for s in per_sample]
        report["mean_noc"][key] = sum(values) / len(values)
        report["failures"][key] = sum(1 for s in per_sample if not s["noc"][key]["reached"])
    return report


def _tkey(target: float) -> str:
    return f"{target:g}"


def report_to_json(report: dict) -> str:
    """Canonical serialization, byte-stable across runs."""
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def noc_table_csv(report: dict) -> str:
    targets = sorted(report["mean_noc"], key=float)
    lines = ["id," + ",".join(f"noc@{t}" for t in targets)]
    for s in report["samples"]:
        lines.append(s["id"] + "," + ",".join(str(s["noc"][t]["clicks"]) for t in targets))
    lines.append("mean," + ",".join(repr(report["mean_noc"][t]) for t in targets))
    return "\n".join(lines) + "\n"


def miou_curve_csv(report: dict) -> str:
    lines = ["clicks,miou"]
    for k, v in enumerate(report["miou_curve"], start=1):
        lines.append(f"{k},{v!r}")
    return "\n".join(lines) + "\n"
