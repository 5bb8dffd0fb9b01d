"""Synthetic multi-view generators for experiments and calibration.

Planted structure comes from copying one view into another with noise, so
interval queries transfer between views; the independent generator is the
matching null.  The labeled generator adds a prediction column driven by
interval membership for explanation runs.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .config import IoSettings, Settings, serialize_settings
from .dataset import (
    AttributeColumn,
    MultiViewDataset,
    TargetColumn,
    View,
    assemble_dataset,
    serialize_arff,
)
from .redescriptions import MinerConfig
from .seeds import rng_for


def _view(name: str, prefix: str, data: np.ndarray) -> View:
    cols = [AttributeColumn(f"{prefix}{i}", "numeric", data[:, i])
            for i in range(data.shape[1])]
    return View(name, cols)


def copied_views(n_entities: int, n_attrs: int, noise: float,
                 seed: int) -> MultiViewDataset:
    """Second view is a noisy copy of the first: plantable redescriptions."""
    rng = rng_for(seed, "copied")
    base = rng.uniform(0.0, 1.0, size=(n_entities, n_attrs))
    jitter = rng.normal(0.0, noise, size=base.shape) if noise > 0 else 0.0
    other = np.clip(base + jitter, 0.0, 1.0)
    return assemble_dataset([_view("viewA", "a", base), _view("viewB", "b", other)])


def independent_views(n_entities: int, n_attrs: int, seed: int) -> MultiViewDataset:
    """Two unrelated uniform views: the null case."""
    rng = rng_for(seed, "independent")
    a = rng.uniform(0.0, 1.0, size=(n_entities, n_attrs))
    b = rng.uniform(0.0, 1.0, size=(n_entities, n_attrs))
    return assemble_dataset([_view("viewA", "a", a), _view("viewB", "b", b)])


def labeled_dataset(n_entities: int, seed: int, noise: float = 0.02,
                    n_classes: int = 3, margin: float = 0.0) -> MultiViewDataset:
    """Interval-driven classes readable from both views.

    The first attribute of each view carries the signal (the second view's is
    a noisy copy); one distractor attribute per view stays independent.
    With margin > 0 the signal keeps clear of the class boundaries, so every
    class occupies an exactly rule-describable interval.
    """
    rng = rng_for(seed, "labeled")
    x = rng.uniform(0.0, 1.0, size=n_entities)
    codes = np.minimum((x * n_classes).astype(np.int64), n_classes - 1)
    if margin > 0.0:
        width = 1.0 / n_classes
        if 2.0 * margin >= width:
            raise ValueError("margin too large for the class grid")
        lo = codes / n_classes + margin
        x = lo + rng.uniform(0.0, 1.0, size=n_entities) * (width - 2.0 * margin)
    y = np.clip(x + rng.normal(0.0, noise, size=n_entities), 0.0, 1.0)
    da = np.column_stack([x, rng.uniform(0.0, 1.0, size=n_entities)])
    db = np.column_stack([y, rng.uniform(0.0, 1.0, size=n_entities)])
    target = TargetColumn("prediction",
                          tuple(f"c{i}" for i in range(n_classes)), codes)
    return assemble_dataset([_view("viewA", "a", da), _view("viewB", "b", db)],
                            targets=[target])


def predictions_view(target: TargetColumn) -> View:
    """Wrap a label column as a one-attribute nominal view for ARFF export."""
    col = AttributeColumn(target.name, "nominal", target.codes.copy(),
                          categories=target.classes)
    return View("predictions", [col])


def write_dataset(ds: MultiViewDataset, outdir: str | Path,
                  cfg: MinerConfig | None = None) -> Path:
    """Write view ARFFs, optional predictions ARFF and a settings file."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    inputs = []
    for i, view in enumerate(ds.views, start=1):
        name = f"view{i}.arff"
        (out / name).write_text(serialize_arff(view), encoding="utf-8")
        inputs.append(name)
    if ds.targets:
        (out / "predictions.arff").write_text(
            serialize_arff(predictions_view(ds.targets[0])), encoding="utf-8")
    io = IoSettings(inputs=tuple(inputs), output_folder="results",
                    output_name="family")
    settings = Settings(cfg if cfg is not None else MinerConfig(), io)
    path = out / "settings.txt"
    path.write_text(serialize_settings(settings), encoding="utf-8")
    return path
