"""Equal-width binning of one numeric attribute.

Bin count comes from the interquartile-range bandwidth rule
(w = 2*IQR / n^(1/3), linear-interpolation quartiles), the span is then cut
into k = ceil(span / w) equal-width bins.  Underpopulated bins are merged
downward starting from the highest-value bin; low-value bins below the
population floor are left alone (disjunctive refinement picks them up
later).  Boundary values belong to the lower-index bin, the span ends to
the first and last bin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import MultiViewDataset
from .errors import QueryError
from .queries import Literal, Query


@dataclass
class BinSpec:
    view: int
    attr: str
    edges: np.ndarray        # ascending, length n_bins + 1
    assignments: np.ndarray  # bin index per entity
    populations: np.ndarray  # entities per bin

    @property
    def n_bins(self) -> int:
        return len(self.populations)


def _assign(values: np.ndarray, edges: np.ndarray) -> np.ndarray:
    k = len(edges) - 1
    idx = np.searchsorted(edges, values, side="left") - 1
    return np.clip(idx, 0, k - 1)


def perform_binning(ds: MultiViewDataset, attribute: tuple[int, str],
                    min_bin_size: int) -> BinSpec:
    view, name = attribute
    col = ds.attribute(view, name)
    if col.kind != "numeric":
        raise QueryError(f"cannot bin nominal attribute {name!r}")
    vals = col.values
    n = vals.shape[0]
    vmin, vmax = col.vmin, col.vmax

    q75, q25 = np.quantile(vals, [0.75, 0.25])
    width = 2.0 * (q75 - q25) / np.cbrt(n)
    if width <= 0.0 or vmax <= vmin:
        k = 1
    else:
        k = max(1, math.ceil((vmax - vmin) / width))
    edges = np.linspace(vmin, vmax, k + 1)

    pops = np.bincount(_assign(vals, edges), minlength=k).tolist()
    edge_list = edges.tolist()
    s = len(pops) - 1
    while s >= 1:
        if pops[s] < min_bin_size:
            pops[s - 1] += pops[s]
            del pops[s]
            del edge_list[s]  # drop the boundary shared with the lower bin
        s -= 1

    edges = np.asarray(edge_list)
    assignments = _assign(vals, edges)
    populations = np.bincount(assignments, minlength=len(edge_list) - 1)
    return BinSpec(view, name, edges, assignments, populations)


def bins_to_rules(spec: BinSpec) -> list[Query]:
    """One single-literal query per bin, ordered by bin index.

    The literals use closed intervals, so entities sitting exactly on an
    interior edge satisfy two adjacent rules; bin membership itself is
    decided by `assignments` (lower-index bin wins).
    """
    return [
        Query(spec.view, Literal(spec.view, spec.attr,
                                 float(spec.edges[s]), float(spec.edges[s + 1])))
        for s in range(spec.n_bins)
    ]


def bins_to_classes(spec: BinSpec) -> np.ndarray:
    """Bin index per entity, usable as a multiclass target."""
    return spec.assignments.copy()
