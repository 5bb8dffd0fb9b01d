"""Predictive clustering trees over one view.

Greedy top-down induction maximizing variance reduction
Var(S) - |SL|/|S| Var(SL) - |SR|/|S| Var(SR), where Var is Gini impurity
summed over classes (multiclass) or the summed per-label Bernoulli variance
(multilabel).  Both reduce to the same integer objective on an indicator
matrix: maximizing A/nL + B/nR with A, B the sums of squared child column
counts.  Splits are scored in floating point and near-ties are settled by
exact integer cross-multiplication, so the chosen split is the true optimum
with ties broken toward the lowest attribute index, then lowest threshold.

Every non-root node yields one conjunctive rule made of its path
conditions; per attribute the conditions collapse into a single closed
interval ([vmin, t] for <= t, [nextafter(t), vmax] for > t), which keeps the
rule's support exactly equal to the node's entity set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

import numpy as np

from .dataset import MultiViewDataset
from .errors import ConfigInvalid
from .queries import Literal, Query, SupportSet, and_of
from .seeds import rng_for

DEFAULT_MIN_LEAF = 2


@dataclass
class TargetMatrix:
    """Prediction targets as a 0/1 indicator matrix (entities x columns)."""

    kind: str  # "multiclass" | "multilabel"
    indicators: np.ndarray  # int64

    def __post_init__(self):
        self.indicators = np.asarray(self.indicators, dtype=np.int64)
        if self.indicators.ndim != 2:
            raise ConfigInvalid("target indicators must be a 2-d matrix")
        if self.kind not in ("multiclass", "multilabel"):
            raise ConfigInvalid(f"unknown target kind {self.kind!r}")

    @classmethod
    def from_classes(cls, codes, n_classes: int | None = None) -> "TargetMatrix":
        codes = np.asarray(codes, dtype=np.int64)
        k = int(n_classes if n_classes is not None else codes.max() + 1)
        ind = np.zeros((codes.shape[0], k), dtype=np.int64)
        ind[np.arange(codes.shape[0]), codes] = 1
        return cls("multiclass", ind)

    @classmethod
    def from_supports(cls, supports: Sequence[SupportSet]) -> "TargetMatrix":
        ind = np.column_stack([s.mask.astype(np.int64) for s in supports])
        return cls("multilabel", ind)

    @property
    def n_columns(self) -> int:
        return self.indicators.shape[1]

    def column_batches(self, limit: int) -> list["TargetMatrix"]:
        """Split wide target matrices into batches of at most `limit` columns."""
        m = self.n_columns
        if m <= limit:
            return [self]
        return [
            TargetMatrix(self.kind, self.indicators[:, lo:lo + limit])
            for lo in range(0, m, limit)
        ]


@dataclass
class PctNode:
    support: SupportSet
    prototype: np.ndarray
    depth: int
    attr: int | None = None
    threshold: float | None = None
    left: "PctNode | None" = None
    right: "PctNode | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    @property
    def majority(self) -> int:
        return int(np.argmax(self.prototype))


@dataclass
class PctModel:
    view: int
    columns: list[str]
    kind: str
    root: PctNode
    n_rows: int = field(default=0)

    def nodes(self, include_root: bool = False) -> Iterator[PctNode]:
        """Preorder walk, left child before right."""
        def walk(node, is_root):
            if include_root or not is_root:
                yield node
            if node.left is not None:
                yield from walk(node.left, False)
                yield from walk(node.right, False)
        yield from walk(self.root, True)


def _exact_ge(num1: int, den1: int, num2: int, den2: int) -> bool:
    """num1/den1 >= num2/den2 with positive denominators, exactly."""
    return num1 * den2 >= num2 * den1


def _best_split(X: np.ndarray, Y: np.ndarray, idx: np.ndarray,
                columns: Sequence[int], min_leaf: int):
    """Return (attr, threshold, g_num, g_den) of the best split or None."""
    n_node = idx.shape[0]
    Yn = Y[idx]
    totals = Yn.sum(axis=0)
    best = None  # (num, den, attr, threshold)
    for j in columns:
        v = X[idx, j]
        order = np.argsort(v, kind="mergesort")
        sv = v[order]
        if sv[0] == sv[-1]:
            continue
        cum = np.cumsum(Yn[order], axis=0)
        nL = np.arange(1, n_node, dtype=np.int64)
        nR = n_node - nL
        mid = 0.5 * (sv[:-1] + sv[1:])
        ok = (sv[1:] > sv[:-1]) & (nL >= min_leaf) & (nR >= min_leaf)
        ok &= (mid >= sv[:-1]) & (mid < sv[1:])  # guard float midpoint collapse
        pos = np.flatnonzero(ok)
        if pos.size == 0:
            continue
        A = np.sum(cum[pos] ** 2, axis=1)
        B = np.sum((totals - cum[pos]) ** 2, axis=1)
        nLs = nL[pos].astype(np.float64)
        nRs = nR[pos].astype(np.float64)
        g = A / nLs + B / nRs
        gmax = g.max()
        close = np.flatnonzero(g >= gmax - 1e-9 * max(1.0, abs(gmax)))
        # settle near-ties exactly; lowest threshold wins inside one attribute
        pick = None
        for c in close:
            p = pos[c]
            num = int(A[c]) * int(nR[p]) + int(B[c]) * int(nL[p])
            den = int(nL[p]) * int(nR[p])
            if pick is None or (num * pick[1] > pick[0] * den):
                pick = (num, den, float(mid[p]))
        num, den, thr = pick
        if best is None or not _exact_ge(best[0], best[1], num, den):
            best = (num, den, j, thr)
    if best is None:
        return None
    num, den, j, thr = best
    # require a strictly positive variance reduction: g/n > C/n^2
    C = int(np.sum(totals ** 2))
    if num * n_node <= C * den:
        return None
    return j, thr, num, den


def train_pct(ds: MultiViewDataset, view: int, targets: TargetMatrix,
              max_depth: int, min_leaf: int = DEFAULT_MIN_LEAF,
              attribute_sampler: Callable[[], Sequence[int]] | None = None) -> PctModel:
    """Grow one tree on the numeric columns of a view."""
    view_obj = ds.views[view]
    columns = [a.name for a in view_obj.attributes if a.kind == "numeric"]
    X = view_obj.numeric_matrix()
    Y = targets.indicators
    n = X.shape[0]
    if Y.shape[0] != n:
        raise ConfigInvalid("targets and view disagree on the entity count")
    if max_depth < 1:
        raise ConfigInvalid("max_depth must be at least 1")

    def build(idx: np.ndarray, depth: int) -> PctNode:
        proto = Y[idx].mean(axis=0) if idx.size else np.zeros(Y.shape[1])
        node = PctNode(SupportSet.from_indices(idx, n), proto, depth)
        if depth >= max_depth or idx.size < 2 * min_leaf:
            return node
        cols = attribute_sampler() if attribute_sampler is not None else range(len(columns))
        found = _best_split(X, Y, idx, cols, min_leaf)
        if found is None:
            return node
        j, thr, _, _ = found
        mask = X[idx, j] <= thr
        node.attr = j
        node.threshold = thr
        node.left = build(idx[mask], depth + 1)
        node.right = build(idx[~mask], depth + 1)
        return node

    root = build(np.arange(n, dtype=np.int64), 0)
    return PctModel(view, columns, targets.kind, root, n)


def train_forest(ds: MultiViewDataset, view: int, targets: TargetMatrix,
                 n_trees: int, max_depth: int, min_leaf: int = DEFAULT_MIN_LEAF,
                 seed: int = 0) -> list[PctModel]:
    """Supplementing trees; every split draws ceil(sqrt(m)) candidate columns."""
    n_cols = sum(1 for a in ds.views[view].attributes if a.kind == "numeric")
    if n_cols == 0:
        return []
    subset = max(1, math.ceil(math.sqrt(n_cols)))
    models = []
    for t in range(n_trees):
        rng = rng_for(seed, "supplement", t)

        def sampler(rng=rng):
            return np.sort(rng.choice(n_cols, size=subset, replace=False))

        models.append(train_pct(ds, view, targets, max_depth, min_leaf, sampler))
    return models


# -- rule extraction -----------------------------------------------------------------


def rules_with_nodes(model: PctModel, ds: MultiViewDataset) -> list[tuple[Query, PctNode]]:
    """Path-conjunction rule for every non-root node, preorder, no dedup."""
    view_obj = ds.views[model.view]
    spans = {}
    for name in model.columns:
        col = view_obj.column(name)
        spans[name] = (col.vmin, col.vmax)

    out: list[tuple[Query, PctNode]] = []

    def walk(node: PctNode, bounds: dict[str, tuple[float, float]]):
        if node.is_leaf:
            return
        name = model.columns[node.attr]
        lo, hi = bounds.get(name, spans[name])
        left_bounds = dict(bounds)
        left_bounds[name] = (lo, min(hi, node.threshold))
        right_bounds = dict(bounds)
        right_bounds[name] = (max(lo, float(np.nextafter(node.threshold, np.inf))), hi)
        for child, cb in ((node.left, left_bounds), (node.right, right_bounds)):
            lits = [Literal(model.view, a, b[0], b[1]) for a, b in sorted(cb.items())]
            out.append((Query(model.view, and_of(lits)), child))
            walk(child, cb)

    walk(model.root, {})
    return out


def transform_to_rules(model: PctModel, ds: MultiViewDataset) -> list[Query]:
    """Deduplicated rule list: equal supports keep the shorter query."""
    return [q for q, _ in dedup_rules(rules_with_nodes(model, ds))]


def dedup_rules(pairs: list[tuple[Query, PctNode]]) -> list[tuple[Query, PctNode]]:
    best: dict[bytes, int] = {}
    kept: list[tuple[Query, PctNode]] = []
    for q, node in pairs:
        key = node.support.key()
        if key in best:
            i = best[key]
            if q.n_literals < kept[i][0].n_literals:
                kept[i] = (q, node)
        else:
            best[key] = len(kept)
            kept.append((q, node))
    return kept


def collect_rules(models: Sequence[PctModel], ds: MultiViewDataset) -> list[Query]:
    pairs = []
    for m in models:
        pairs.extend(rules_with_nodes(m, ds))
    return [q for q, _ in dedup_rules(pairs)]


def collect_rules_with_classes(models: Sequence[PctModel], ds: MultiViewDataset
                               ) -> tuple[list[Query], list[int]]:
    """Rules plus the majority target column of their nodes (pairing guidance)."""
    pairs = []
    for m in models:
        pairs.extend(rules_with_nodes(m, ds))
    deduped = dedup_rules(pairs)
    return [q for q, _ in deduped], [node.majority for _, node in deduped]
