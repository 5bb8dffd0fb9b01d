"""Class explanation sets and surrogate fidelity evaluation.

Given mined redescriptions and per-entity model predictions, per-class
explanation sets are grown greedily from candidates that are precise for the
class and still cover new class entities.  Whole redescriptions and their
single-view rules are selected independently, each against its own budget of
uncovered class entities.  The chosen items act as a surrogate classifier
whose agreement with the model is measured on held-out folds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .dataset import MultiViewDataset, TargetColumn, take
from .errors import BadFoldCount
from .measures import SurrogateItem, fidelity, shannon_entropy
from .miner import RedescriptionFamily, mine_family
from .queries import Query, SupportSet, evaluate
from .redescriptions import MinerConfig, Redescription
from .seeds import rng_for

RED = "redescription"
RULE = "rule"


@dataclass(frozen=True)
class ExplainCandidate:
    order: int
    kind: str                                  # "redescription" or "rule"
    queries: tuple[tuple[int, Query], ...]
    jaccard: float                             # rules carry their best parent


@dataclass
class ChosenItem:
    candidate: ExplainCandidate
    score: float
    precision: float
    num_new: int
    support_size: int
    support_key: bytes = b""


@dataclass
class KindSelection:
    kind: str
    chosen: list[ChosenItem] = field(default_factory=list)
    covered: int = 0
    no_eligible_candidates: bool = False  # stalled with class entities left


@dataclass
class ClassSelection:
    class_index: int
    n_class_entities: int
    reds: KindSelection = field(default_factory=lambda: KindSelection(RED))
    rules: KindSelection = field(default_factory=lambda: KindSelection(RULE))

    @property
    def chosen(self) -> list[ChosenItem]:
        return self.reds.chosen + self.rules.chosen


@dataclass
class SelectionState:
    classes: tuple[str, ...]
    selections: list[ClassSelection]

    def surrogate_items(self) -> list[SurrogateItem]:
        items = []
        order = 0
        for sel in self.selections:
            for ch in sel.chosen:
                items.append(SurrogateItem(
                    class_index=sel.class_index,
                    queries=tuple(q for _, q in ch.candidate.queries),
                    score=ch.score,
                    precision=ch.precision,
                    support_size=ch.support_size,
                    order=order,
                ))
                order += 1
        return items


def candidates_from(reds: Sequence[Redescription],
                    kinds: str = "both") -> list[ExplainCandidate]:
    """Flatten redescriptions into explanation candidates.

    Rules are the individual view queries; a rule appearing in several
    redescriptions keeps its first position and the highest parent Jaccard.
    """
    want_red = kinds in ("both", RED)
    want_rule = kinds in ("both", RULE)
    out: list[ExplainCandidate] = []
    rule_slot: dict[tuple[int, str], int] = {}
    for red in reds:
        if want_red:
            out.append(ExplainCandidate(len(out), RED, red.queries, red.jaccard))
        if not want_rule:
            continue
        for view, q in red.queries:
            key = (view, q.serialize())
            at = rule_slot.get(key)
            if at is None:
                rule_slot[key] = len(out)
                out.append(ExplainCandidate(len(out), RULE, ((view, q),),
                                            red.jaccard))
            elif red.jaccard > out[at].jaccard:
                prev = out[at]
                out[at] = ExplainCandidate(prev.order, prev.kind, prev.queries,
                                           red.jaccard)
    return out


def _candidate_support(c: ExplainCandidate, ds: MultiViewDataset) -> SupportSet:
    supp = evaluate(c.queries[0][1], ds)
    for _, q in c.queries[1:]:
        supp = supp & evaluate(q, ds)
    return supp


def _select_kind(kind: str, indices: Sequence[int],
                 candidates: Sequence[ExplainCandidate],
                 supports: Sequence[SupportSet], class_mask: np.ndarray,
                 n_class: int, delta: float) -> KindSelection:
    """Two-phase greedy selection of one candidate kind for one class.

    Phase one repeatedly takes the best-scoring precise candidate that covers
    new class entities, the coverage term being measured against the budget of
    still-uncovered class entities.  Once the budget is exhausted, phase two
    walks the candidates in order and swaps any pick for an equal-support
    candidate with strictly higher Jaccard and no worse precision.
    """
    out = KindSelection(kind)
    n = class_mask.shape[0]
    counter = n_class
    covered = np.zeros(n, dtype=bool)
    used: set[int] = set()
    precisions: dict[int, float] = {}
    for i in indices:
        size = supports[i].count
        if size:
            precisions[i] = int((supports[i].mask & class_mask).sum()) / size

    while counter > 0:
        best = None
        best_rank = None
        for i in indices:
            if i in used or i not in precisions:
                continue
            prec = precisions[i]
            if prec < delta:
                continue
            num_new = int((supports[i].mask & class_mask & ~covered).sum())
            if num_new < 1:
                continue
            cov = num_new / counter
            if kind == RED:
                score = (cov + candidates[i].jaccard + 2.0 * prec) / 4.0
            else:
                score = (cov + 2.0 * prec) / 3.0
            rank = (score, prec, num_new, -i)
            if best_rank is None or rank > best_rank:
                best_rank = rank
                best = (i, score, prec, num_new)
        if best is None:
            out.no_eligible_candidates = True
            break
        i, score, prec, num_new = best
        used.add(i)
        covered |= supports[i].mask & class_mask
        counter = max(0, counter - num_new)
        out.chosen.append(ChosenItem(candidates[i], score, prec, num_new,
                                     supports[i].count, supports[i].key()))
    out.covered = int(covered.sum())

    if counter == 0 and out.chosen:
        for ch in out.chosen:
            for i in indices:
                cand = candidates[i]
                if cand is ch.candidate:
                    continue
                if supports[i].key() != ch.support_key:
                    continue
                if (cand.jaccard > ch.candidate.jaccard
                        and precisions.get(i, 0.0) >= ch.precision):
                    ch.candidate = cand
    return out


def construct_sets(candidates: Sequence[ExplainCandidate], ds: MultiViewDataset,
                   predictions: TargetColumn, delta: float) -> SelectionState:
    """Greedy per-class, per-kind selection of precise covering candidates.

    Redescriptions score (cov + J + 2 prec) / 4 and rules (cov + 2 prec) / 3,
    with cov the newly covered class entities over the remaining budget.
    Ties prefer higher precision, more new coverage, then earlier candidates.
    Classes that stall before full coverage record the fact per kind.
    """
    codes = predictions.codes
    supports = [_candidate_support(c, ds) for c in candidates]
    red_idx = [i for i, c in enumerate(candidates) if c.kind == RED]
    rule_idx = [i for i, c in enumerate(candidates) if c.kind == RULE]

    selections = []
    for cls in range(len(predictions.classes)):
        class_mask = codes == cls
        n_class = int(class_mask.sum())
        sel = ClassSelection(cls, n_class)
        if n_class > 0:
            sel.reds = _select_kind(RED, red_idx, candidates, supports,
                                    class_mask, n_class, delta)
            sel.rules = _select_kind(RULE, rule_idx, candidates, supports,
                                     class_mask, n_class, delta)
        selections.append(sel)
    return SelectionState(predictions.classes, selections)


def _flatten(family_or_set) -> list[Redescription]:
    if isinstance(family_or_set, RedescriptionFamily):
        out = []
        for e in family_or_set.entries:
            out.extend(e.individual)
            out.extend(e.interactions)
        return out
    return list(family_or_set)


def entropy_filter(family_or_set, ds: MultiViewDataset,
                   labels: TargetColumn, j_train_min: float,
                   max_support_frac: float = 0.5,
                   entropy_frac: float = 0.5) -> list[Redescription]:
    """Keep accurate, small-support, label-coherent redescriptions.

    The entropy bound is relative to the largest support entropy observed
    across all candidates; zero-entropy supports always pass.
    """
    reds = _flatten(family_or_set)
    n = ds.n_entities
    codes = labels.codes
    ents = [shannon_entropy(codes[red.support.indices()]) for red in reds]
    max_ent = max(ents, default=0.0)
    out = []
    for red, ent in zip(reds, ents):
        if red.jaccard < j_train_min:
            continue
        if red.support.count > max_support_frac * n:
            continue
        if ent == 0.0 or ent < entropy_frac * max_ent:
            out.append(red)
    return out


def stratified_folds(codes: np.ndarray, k: int, seed: int) -> list[np.ndarray]:
    """Seeded round-robin fold assignment within each predicted class."""
    n = codes.shape[0]
    if k < 2 or k > n:
        raise BadFoldCount(f"fold count {k} invalid for {n} entities")
    class_sizes = [int((codes == cls).sum()) for cls in np.unique(codes)]
    smallest = min((s for s in class_sizes if s > 0), default=0)
    if smallest < k:
        raise BadFoldCount(
            f"fold count {k} exceeds the smallest class size {smallest}")
    folds: list[list[int]] = [[] for _ in range(k)]
    for cls in np.unique(codes):
        idx = np.flatnonzero(codes == cls)
        rng = rng_for(seed, "folds", int(cls))
        idx = idx[rng.permutation(idx.shape[0])]
        for pos, ent in enumerate(idx.tolist()):
            folds[pos % k].append(ent)
    return [np.array(sorted(f), dtype=np.int64) for f in folds]


@dataclass
class FidelityReport:
    fold_scores: list[float]

    @property
    def mean(self) -> float:
        return float(np.mean(self.fold_scores)) if self.fold_scores else 0.0

    @property
    def sd(self) -> float:
        return float(np.std(self.fold_scores)) if self.fold_scores else 0.0


def _subset_predictions(predictions: TargetColumn,
                        idx: np.ndarray) -> TargetColumn:
    return TargetColumn(predictions.name, predictions.classes,
                        predictions.codes[idx])


def kfold_fidelity(ds: MultiViewDataset, predictions: TargetColumn,
                   cfg: MinerConfig, k: int, delta: float,
                   selected_views: Sequence[int] | None = None,
                   kinds: str = "both") -> FidelityReport:
    """Mine + explain on k-1 folds, measure surrogate agreement on the rest."""
    views = list(selected_views) if selected_views is not None \
        else list(range(len(ds.views)))
    folds = stratified_folds(predictions.codes, k, cfg.seed)
    all_idx = np.arange(ds.n_entities)
    scores = []
    for f, test_idx in enumerate(folds):
        train_idx = np.setdiff1d(all_idx, test_idx)
        train_ds = take(ds, train_idx)
        test_ds = take(ds, test_idx)
        train_pred = _subset_predictions(predictions, train_idx)
        test_pred = _subset_predictions(predictions, test_idx)

        family = mine_family(train_ds, views, cfg)
        cands = candidates_from(_flatten(family), kinds)
        state = construct_sets(cands, train_ds, train_pred, delta)
        items = state.surrogate_items()
        default = int(np.bincount(train_pred.codes,
                                  minlength=len(predictions.classes)).argmax())
        scores.append(fidelity(items, test_ds, test_pred, default_class=default))
    return FidelityReport(scores)
