"""Command line front end.

Exit codes: 0 on success, 1 when inputs fail validation (settings, flags,
data files), 2 when a run fails after validation.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .config import Settings, load_settings
from .dataset import (
    MultiViewDataset,
    assemble_dataset,
    parse_arff,
    target_from_view,
)
from .errors import (
    BadFoldCount,
    ConfigInvalid,
    DatasetError,
    DatasetTooSmall,
    QueryError,
    RedescribeError,
    SettingsError,
)
from .explain import kfold_fidelity
from .io import read_family, reconstruct, write_family
from .miner import ACCURATE_J, covered_entities, mine_family
from .queries import iter_literals, parse_query
from .redescriptions import MinerConfig
from .synth import copied_views, independent_views, labeled_dataset, write_dataset

_VALIDATION = (SettingsError, ConfigInvalid, DatasetError, DatasetTooSmall,
               BadFoldCount, QueryError)


def _resolve(path: str, base: Path) -> Path:
    p = Path(path)
    return p if p.is_absolute() else base / p


def _load_views(settings: Settings, base: Path) -> MultiViewDataset:
    views = []
    for rel in settings.io.inputs:
        path = _resolve(rel, base)
        views.append(parse_arff(path.read_text(encoding="utf-8")))
    return assemble_dataset(views)


def _apply_flags(settings: Settings, args) -> MinerConfig:
    cfg = settings.miner
    from dataclasses import replace

    if getattr(args, "threads", None) is not None:
        cfg = replace(cfg, n_threads=args.threads)
    if getattr(args, "seed", None) is not None:
        cfg = replace(cfg, seed=args.seed)
    return cfg.validate()


def _cmd_mine(args) -> int:
    settings = load_settings(args.settings)
    base = Path(args.settings).resolve().parent
    cfg = _apply_flags(settings, args)
    ds = _load_views(settings, base)
    family = mine_family(ds, list(range(len(ds.views))), cfg)
    outdir = _resolve(settings.io.output_folder, base)
    written = write_family(family, ds, cfg, outdir,
                           write_supports=args.supports,
                           name=settings.io.output_name)
    for entry in family.entries:
        print(f"view {entry.view} attribute {entry.attribute}: "
              f"{len(entry.individual)} individual, "
              f"{len(entry.interactions)} interaction")
    print(f"described {covered_entities(family, ds.n_entities)} of "
          f"{ds.n_entities} entities")
    print(f"wrote {len(written)} files to {outdir}")
    return 0


def _cmd_explain(args) -> int:
    settings = load_settings(args.settings)
    base = Path(args.settings).resolve().parent
    cfg = _apply_flags(settings, args)
    ds = _load_views(settings, base)
    pred_view = parse_arff(Path(args.predictions).read_text(encoding="utf-8"))
    predictions = target_from_view(pred_view)
    if predictions.codes.shape[0] != ds.n_entities:
        raise DatasetError("predictions row count does not match the views")
    report = kfold_fidelity(ds, predictions, cfg, args.folds, args.delta)
    for i, s in enumerate(report.fold_scores):
        print(f"fold {i}: fidelity {s:.4f}")
    print(f"mean fidelity {report.mean:.4f} +/- {report.sd:.4f}")
    return 0


def _cmd_stats(args) -> int:
    _, entries = read_family(args.family)
    n_ind = sum(1 for e in entries if e.individual)
    int_attrs: set[tuple[int, str]] = set()
    js: list[float] = []
    for e in entries:
        for rec in e.interactions:
            for view, text in rec.queries.items():
                for lit in iter_literals(parse_query(text, view).root):
                    int_attrs.add((view, lit.attr))
        for rec in e.individual + e.interactions:
            js.append(rec.jaccard)
    mean = float(np.mean(js)) if js else 0.0
    sd = float(np.std(js)) if js else 0.0
    n_accurate = sum(1 for j in js if j >= ACCURATE_J)
    print(f"{'metric':<12} value")
    print(f"{'n_ind':<12} {n_ind}")
    print(f"{'n_int':<12} {len(int_attrs)}")
    print(f"{'av_j':<12} {mean:.4f} +/- {sd:.4f}")
    print(f"{'n_accurate':<12} {n_accurate}")
    return 0


def _cmd_evaluate(args) -> int:
    manifest, entries = read_family(args.family)
    views = [parse_arff(Path(p).read_text(encoding="utf-8")) for p in args.data]
    ds = assemble_dataset(views)
    cfg_echo = manifest.get("config", {})
    min_j = float(cfg_echo.get("min_jaccard", 0.0))

    checked = 0
    passing = 0
    worst_dj = 0.0
    identical = True
    for e in entries:
        for rec in e.individual + e.interactions:
            red = reconstruct(rec, ds)
            dj = abs(red.jaccard - rec.jaccard)
            worst_dj = max(worst_dj, dj)
            # stored J carries 6 decimals, so identity holds to 5e-7
            if dj > 5e-7 or red.support.count != rec.support_size \
                    or red.union.count != rec.union_size:
                identical = False
            if red.jaccard >= min_j:
                passing += 1
            checked += 1
    print(f"re-evaluated {checked} redescriptions on {len(views)} views")
    print(f"max J deviation {worst_dj:.2e}")
    print(f"{passing} of {checked} clear the stored Jaccard floor {min_j}")
    print("identity with stored reports: "
          + ("yes" if identical else "no (expected on different data)"))
    return 0


def _cmd_synth(args) -> int:
    if args.kind == "copied":
        ds = copied_views(args.entities, args.attrs, args.noise, args.seed)
    elif args.kind == "independent":
        ds = independent_views(args.entities, args.attrs, args.seed)
    else:
        ds = labeled_dataset(args.entities, args.seed, noise=args.noise)
    cfg = MinerConfig(seed=args.seed)
    path = write_dataset(ds, args.outdir, cfg)
    print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="redescribe",
        description="Interval-rule redescription mining across data views.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mine", help="mine redescriptions per the settings file")
    p.add_argument("--settings", required=True, help="settings file path")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (overrides nothing in the file)")
    p.add_argument("--seed", type=int, default=None, help="base random seed")
    p.add_argument("--supports", action="store_true",
                   help="write support indices into the .reds files")
    p.set_defaults(func=_cmd_mine)

    p = sub.add_parser("explain",
                       help="k-fold surrogate fidelity for model predictions")
    p.add_argument("--settings", required=True, help="settings file path")
    p.add_argument("--predictions", required=True,
                   help="single nominal column ARFF of model predictions")
    p.add_argument("--delta", type=float, required=True,
                   help="precision floor for explanation items")
    p.add_argument("--folds", type=int, required=True, help="number of folds")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=_cmd_explain)

    p = sub.add_parser("stats", help="summary table for a stored family")
    p.add_argument("--family", required=True, help="family output directory")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("evaluate",
                       help="recompute stored redescriptions on other data")
    p.add_argument("--family", required=True, help="family output directory")
    p.add_argument("--data", required=True, nargs="+",
                   help="one ARFF per view, in view order")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("synth", help="write a synthetic dataset and settings")
    p.add_argument("outdir", help="output directory")
    p.add_argument("--kind", choices=["copied", "independent", "labeled"],
                   default="copied")
    p.add_argument("--entities", type=int, default=500)
    p.add_argument("--attrs", type=int, default=4)
    p.add_argument("--noise", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_synth)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage problems; those are validation failures
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except _VALIDATION as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except RedescribeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - last resort
        print(f"unexpected error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
