"""Command-line entry points.

Exit codes: 0 success, 1 usage error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .clicksim import run_session
from .evalharness import (
    EvalConfig,
    load_manifest,
    miou_curve_csv,
    noc_table_csv,
    report_to_json,
    run_benchmark,
)
from .grid import parse_clicks, read_grid, read_image_rgb, read_mask_png, write_grid
from .modulation import ModulationParams, modulate
from .segmenter import make_backend


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; the CLI contract reserves 2 for
    # runtime failures and uses 1 for usage problems
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mfp", description="Interactive segmentation engine with probability-map modulation")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_mod = sub.add_parser("modulate", help="apply click modulation to an MFPGRID file")
    p_mod.add_argument("--in", dest="infile", required=True, help="input MFPGRID v1 file")
    p_mod.add_argument("--clicks", required=True, help="click descriptor: one 'row col fg|bg index' per line")
    p_mod.add_argument("--out", required=True, help="output MFPGRID v1 file")
    p_mod.add_argument("--switch-index", type=int, default=7)
    p_mod.add_argument("--r-max", type=float, default=100.0)
    p_mod.add_argument("--eps", type=float, default=1e-4)

    p_sim = sub.add_parser("simulate", help="run an automatic click session against a ground-truth mask")
    p_sim.add_argument("--image", required=True, help="RGB PNG")
    p_sim.add_argument("--mask", required=True, help="ground-truth mask PNG")
    p_sim.add_argument("--max-clicks", type=int, default=20)
    p_sim.add_argument("--no-modulation", action="store_true")
    p_sim.add_argument("--out", help="write trajectory JSON here instead of stdout")
    p_sim.add_argument("--dump-grids", help="directory for per-round MFPGRID dumps")

    p_eval = sub.add_parser("eval", help="run the NoC/mIoU/AUC benchmark over a manifest")
    p_eval.add_argument("--manifest", required=True)
    p_eval.add_argument("--config", help="EvalConfig JSON file (defaults used when omitted)")
    p_eval.add_argument("--out", required=True, help="report JSON output path")
    p_eval.add_argument("--csv-dir", help="also write noc_table.csv and miou_curve.csv here")

    p_serve = sub.add_parser("serve", help="start the HTTP session service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--dataset-root", help="directory of dataset manifest JSON files")
    p_serve.add_argument("--config", help="EvalConfig JSON controlling backend/modulation")

    p_imp = sub.add_parser("import-dataset", help="build a manifest from image/mask directories")
    p_imp.add_argument("--images", required=True)
    p_imp.add_argument("--masks", required=True)
    p_imp.add_argument("--name", required=True)
    p_imp.add_argument("--out", required=True)

    return parser


def _cmd_modulate(args) -> int:
    p = read_grid(args.infile)
    with open(args.clicks) as f:
        clicks = parse_clicks(f.read())
    params = ModulationParams(scheme_switch_index=args.switch_index, r_max=args.r_max, eps=args.eps)
    history = []
    for click in clicks:
        p = modulate(p, click, history, params)
        history.append(click)
    write_grid(args.out, p)
    return 0


def _cmd_simulate(args) -> int:
    image = read_image_rgb(args.image)
    gt = read_mask_png(args.mask)
    traj = run_session(
        image,
        gt,
        make_backend("reference"),
        max_clicks=args.max_clicks,
        modulation_enabled=not args.no_modulation,
    )
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
    text = json.dumps(doc, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.dump_grids:
        outdir = Path(args.dump_grids)
        outdir.mkdir(parents=True, exist_ok=True)
        for r in traj.rounds:
            write_grid(outdir / f"round_{r.click.index:03d}.grid", r.p)
    return 0


def _load_config(path) -> EvalConfig:
    if not path:
        return EvalConfig()
    with open(path) as f:
        return EvalConfig.from_dict(json.load(f))


def _cmd_eval(args) -> int:
    manifest = load_manifest(args.manifest)
    config = _load_config(args.config)
    report = run_benchmark(manifest, config)
    Path(args.out).write_text(report_to_json(report))
    if args.csv_dir:
        csv_dir = Path(args.csv_dir)
        csv_dir.mkdir(parents=True, exist_ok=True)
        (csv_dir / "noc_table.csv").write_text(noc_table_csv(report))
        (csv_dir / "miou_curve.csv").write_text(miou_curve_csv(report))
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    config = _load_config(args.config)
    app = create_app(
        dataset_root=args.dataset_root,
        modulation_enabled=config.modulation_enabled,
        mod_params=config.modulation,
        backend=config.backend,
        backend_params=config.backend_params,
        r_click=config.r_click,
    )
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def _cmd_import_dataset(args) -> int:
    images = Path(args.images)
    masks = Path(args.masks)
    out = Path(args.out)
    mask_by_stem = {p.stem: p for p in sorted(masks.iterdir()) if p.is_file()}
    samples = []
    for img in sorted(images.iterdir()):
        if not img.is_file():
            continue
        mask = mask_by_stem.get(img.stem)
        if mask is None:
            print(f"warning: no mask for {img.name}, skipped", file=sys.stderr)
            continue
        samples.append(
            {
                "id": img.stem,
                "image": str(img.resolve().relative_to(out.resolve().parent)) if _is_relative(img, out.parent) else str(img.resolve()),
                "mask": str(mask.resolve().relative_to(out.resolve().parent)) if _is_relative(mask, out.parent) else str(mask.resolve()),
            }
        )
    if not samples:
        print("error: no image/mask pairs found", file=sys.stderr)
        return 2
    out.write_text(json.dumps({"dataset": args.name, "samples": samples}, indent=2) + "\n")
    print(f"wrote {len(samples)} samples to {out}")
    return 0


def _is_relative(path: Path, base: Path) -> bool:
    try:
        path.resolve().relative_to(base.resolve())
        return True
    except ValueError:
        return False


_COMMANDS = {
    "modulate": _cmd_modulate,
    "simulate": _cmd_simulate,
    "eval": _cmd_eval,
    "serve": _cmd_serve,
    "import-dataset": _cmd_import_dataset,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if e.code is not None else 0
    try:
        return _COMMANDS[args.command](args)
    except BrokenPipeError:
        return 2
    except Exception as exc:
        print(f"mfp: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
