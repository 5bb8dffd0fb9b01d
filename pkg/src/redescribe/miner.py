"""Per-attribute mining, restarts, threading and constrained alternation.

Each selected attribute of each selected view gets its own candidate pool:
the attribute is binned, a tree ensemble on the partner view learns to
discriminate the bins, and the extracted rules are paired, refined, completed
across the remaining views and distilled into a final set.  The interaction
miner replaces the binning seed with an alternating scheme that keeps the
constrained attribute on the home side throughout.
"""

from __future__ import annotations

import hashlib
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .binning import perform_binning, bins_to_classes, bins_to_rules
from .dataset import MultiViewDataset
from .errors import ConfigInvalid, DatasetTooSmall
from .pct import TargetMatrix, rules_with_nodes, train_forest, train_pct
from .queries import Not, Query, evaluate, iter_literals
from .redescriptions import (
    CandidateStore,
    MinerConfig,
    Redescription,
    complete_reds,
    conjunctive_refine,
    create_reds,
    extract_final,
    minimize_redescription,
    refine_with_bins,
)
from .seeds import rng_for, stable_seed

ACCURATE_J = 0.7


@dataclass
class FamilyEntry:
    view: int
    attribute: str
    individual: list[Redescription]
    interactions: list[Redescription]


@dataclass
class RedescriptionFamily:
    entries: list[FamilyEntry] = field(default_factory=list)
    seed: int = 0
    config_hash: str = ""
    timings: dict = field(default_factory=dict)  # per task, never serialized

    def entry(self, view: int, attribute: str) -> FamilyEntry | None:
        for e in self.entries:
            if e.view == view and e.attribute == attribute:
                return e
        return None

    @property
    def n_redescriptions(self) -> int:
        return sum(len(e.individual) + len(e.interactions) for e in self.entries)


@dataclass(frozen=True)
class FamilyStats:
    n_ind: int
    n_int: int
    av_j_mean: float
    av_j_sd: float
    n_accurate: int


@dataclass(frozen=True)
class AttributeAssignment:
    worker: int
    tasks: tuple[tuple[int, str], ...]


def assign_attributes(tasks: Sequence[tuple[int, str]],
                      n_workers: int) -> list[AttributeAssignment]:
    """Round-robin split; worker loads differ by at most one task."""
    buckets: list[list[tuple[int, str]]] = [[] for _ in range(n_workers)]
    for i, t in enumerate(tasks):
        buckets[i % n_workers].append(t)
    return [AttributeAssignment(w, tuple(b)) for w, b in enumerate(buckets)]


def config_hash(cfg: MinerConfig) -> str:
    fields = asdict(cfg)
    fields.pop("n_threads", None)  # execution detail, must not alter output bytes
    text = repr(sorted(fields.items()))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


def _partner_of(view: int, ds: MultiViewDataset) -> int:
    if len(ds.views) < 2:
        raise ConfigInvalid("need at least two views to mine")
    return 1 if view == 0 else 0


def _augment_pool(rules: list[Query], classes: list[int], ds: MultiViewDataset,
                  allow_neg: bool, min_support: int,
                  max_support: int) -> tuple[list[Query], list[int]]:
    """Add in-bounds complements; complements carry no guidance class."""
    if not allow_neg:
        return rules, classes
    out_r = list(rules)
    out_c = list(classes)
    for q in rules:
        root = q.root
        if isinstance(root, Not):
            continue
        try:
            neg = Query(q.view, Not(root))
        except Exception:
            continue
        c = evaluate(neg, ds).count
        if min_support <= c <= max_support:
            out_r.append(neg)
            out_c.append(-1)
    return out_r, out_c


@dataclass
class RulePool:
    """Rules from one view: the full pairing pool and its single-tree core."""

    rules: list[Query]
    classes: list[int]
    pct_rules: list[Query]
    pct_classes: list[int]


def _dedup_offset(records: list) -> tuple[list[Query], list[int]]:
    # equal supports keep the shorter query; classes are global column indices
    best: dict[bytes, int] = {}
    kept: list = []
    for q, node, off in records:
        key = node.support.key()
        if key in best:
            i = best[key]
            if q.n_literals < kept[i][0].n_literals:
                kept[i] = (q, node, off)
        else:
            best[key] = len(kept)
            kept.append((q, node, off))
    return ([q for q, _, _ in kept],
            [node.majority + off for _, node, off in kept])


def _rule_pool(ds: MultiViewDataset, view: int, targets: TargetMatrix,
               cfg: MinerConfig, seed: int, with_forest: bool = True) -> RulePool:
    """Tree plus optional supplement forest on one view.

    Wide target matrices train one model set per batch of num_target columns;
    the pool order is reshuffled per seed so restarts process rules in a
    different order.
    """
    all_recs: list = []
    pct_recs: list = []
    for b, batch in enumerate(targets.column_batches(cfg.num_target)):
        offset = b * cfg.num_target
        models = [train_pct(ds, view, batch, max_depth=cfg.tree_depth)]
        if with_forest and cfg.n_supplement_trees > 0:
            models.extend(train_forest(ds, view, batch, cfg.n_supplement_trees,
                                       max_depth=cfg.tree_depth,
                                       seed=stable_seed(seed, "batch", b)))
        for mi, model in enumerate(models):
            for q, node in rules_with_nodes(model, ds):
                rec = (q, node, offset)
                all_recs.append(rec)
                if mi == 0:
                    pct_recs.append(rec)

    rules, classes = _dedup_offset(all_recs)
    pct_rules, pct_classes = _dedup_offset(pct_recs)
    rng = rng_for(seed, "order")
    perm = rng.permutation(len(rules))
    rules = [rules[i] for i in perm]
    classes = [classes[i] for i in perm]
    perm = rng.permutation(len(pct_rules))
    pct_rules = [pct_rules[i] for i in perm]
    pct_classes = [pct_classes[i] for i in perm]
    return RulePool(rules, classes, pct_rules, pct_classes)


def _complete_over(reds: list[Redescription], rest: Sequence[int],
                   ds: MultiViewDataset, cfg: MinerConfig,
                   seed_parts: tuple) -> list[Redescription]:
    """Extend across the remaining views; completion never uses forests."""
    for extra in rest:
        if not reds:
            break
        targets = TargetMatrix.from_supports([r.support for r in reds])
        pool = _rule_pool(ds, extra, targets, cfg,
                          stable_seed(*seed_parts, extra), with_forest=False)
        reds = complete_reds(reds, extra, pool.pct_rules, cfg, ds)
    return reds


def mine_attribute(ds: MultiViewDataset, view: int, attribute: str,
                   cfg: MinerConfig) -> FamilyEntry:
    """Pipeline for one described attribute: bin, model, pair, refine."""
    partner = _partner_of(view, ds)
    rest = [v for v in range(len(ds.views)) if v not in (view, partner)]
    n = ds.n_entities
    max_sup = min(cfg.max_support, n)
    base_seed = stable_seed(cfg.seed, view, attribute)

    spec = perform_binning(ds, (view, attribute), cfg.min_support)
    bin_rules = bins_to_rules(spec)
    bin_classes = list(range(spec.n_bins))
    targets = TargetMatrix.from_classes(bins_to_classes(spec), spec.n_bins)

    ind_store = CandidateStore(cfg)
    int_store = CandidateStore(cfg)
    for restart in range(cfg.num_random_restarts):
        seed = base_seed + restart
        pool = _rule_pool(ds, partner, targets, cfg, seed)
        left, lcls = _augment_pool(bin_rules, bin_classes, ds,
                                   cfg.allow_left_neg, cfg.min_support, max_sup)
        right, rcls = _augment_pool(pool.rules, pool.classes, ds,
                                    cfg.allow_right_neg, cfg.min_support, max_sup)
        pairs = create_reds(left, right, cfg, ds, classes_a=lcls, classes_b=rcls)
        refined = [refine_with_bins(r, spec, cfg, ds) for r in pairs]
        refined = _complete_over(refined, rest, ds, cfg, (seed, "complete"))
        ind_store.insert(refined)
        if cfg.joining_procedure:
            conjunctive_refine(ind_store, cfg, ds)

        inter = _mine_interactions_once(ds, view, attribute, partner, rest,
                                        bin_rules, pool.pct_rules, cfg, seed)
        int_store.insert(inter)

    individual = _finalize(ind_store, cfg, ds)
    interactions = _finalize(int_store, cfg, ds)
    return FamilyEntry(view, attribute, individual, interactions)


def _finalize(store: CandidateStore, cfg: MinerConfig,
              ds: MultiViewDataset) -> list[Redescription]:
    final = extract_final(store, cfg)
    if cfg.minimize_rules:
        final = [minimize_redescription(r, ds, cfg) for r in final]
    return final


def _mentions(q: Query, attribute: str) -> bool:
    return any(lit.attr == attribute for lit in iter_literals(q.root))


def _mine_interactions_once(ds: MultiViewDataset, view: int, attribute: str,
                            partner: int, rest: Sequence[int],
                            bin_rules: list[Query], w2_init: Sequence[Query],
                            cfg: MinerConfig, seed: int) -> list[Redescription]:
    """Constrained alternation keeping the home attribute in play.

    W1 starts as the bin rules of the constrained attribute and W2 as the
    partner-view tree rules from seeding.  Per iteration a model on the
    partner view targets the W1 supports and a model on the home view targets
    the W2 supports; home-side rules are filtered to those mentioning the
    attribute, pairs form with the home side on the left, and the single-tree
    rule sets swap roles.  Supplement forests only enrich the pairing pools.
    """
    if cfg.num_iterations <= 0:
        return []
    n = ds.n_entities
    max_sup = min(cfg.max_support, n)
    w1 = list(bin_rules)
    w2 = list(w2_init)
    out: list[Redescription] = []
    for it in range(cfg.num_iterations):
        t1_pair: list[Query] = []
        t1_swap: list[Query] = []
        if w1:
            targets = TargetMatrix.from_supports([evaluate(q, ds) for q in w1])
            pool = _rule_pool(ds, partner, targets, cfg,
                              stable_seed(seed, "alt", it, 1))
            t1_pair, t1_swap = pool.rules, pool.pct_rules
        t2_pair: list[Query] = []
        t2_swap: list[Query] = []
        if w2:
            targets = TargetMatrix.from_supports([evaluate(q, ds) for q in w2])
            pool = _rule_pool(ds, view, targets, cfg,
                              stable_seed(seed, "alt", it, 2))
            t2_pair = [q for q in pool.rules if _mentions(q, attribute)]
            t2_swap = [q for q in pool.pct_rules if _mentions(q, attribute)]

        home_1 = [q for q in w1 if _mentions(q, attribute)]
        found: list[Redescription] = []
        if home_1 and t1_pair:
            left, _ = _augment_pool(home_1, [-1] * len(home_1), ds,
                                    cfg.allow_left_neg, cfg.min_support, max_sup)
            right, _ = _augment_pool(t1_pair, [-1] * len(t1_pair), ds,
                                     cfg.allow_right_neg, cfg.min_support, max_sup)
            found.extend(create_reds(left, right, cfg, ds))
        if t2_pair and w2:
            left, _ = _augment_pool(t2_pair, [-1] * len(t2_pair), ds,
                                    cfg.allow_left_neg, cfg.min_support, max_sup)
            right, _ = _augment_pool(w2, [-1] * len(w2), ds,
                                     cfg.allow_right_neg, cfg.min_support, max_sup)
            found.extend(create_reds(left, right, cfg, ds))
        found = _complete_over(found, rest, ds, cfg, (seed, "alt", it, "c"))
        out.extend(found)
        w1, w2 = t2_swap, t1_swap
    return out


def _check_dataset(ds: MultiViewDataset, cfg: MinerConfig) -> None:
    if len(ds.views) < 2:
        raise ConfigInvalid("need at least two views to mine")
    if ds.n_entities < max(2, cfg.min_support):
        raise DatasetTooSmall(
            f"{ds.n_entities} entities cannot reach the support floor "
            f"{cfg.min_support}")
    for v, view_obj in enumerate(ds.views):
        if not view_obj.attributes:
            raise ConfigInvalid(f"view {v} holds no attributes")
        for col in view_obj.attributes:
            if col.kind != "numeric":
                raise ConfigInvalid(
                    f"view {v} attribute {col.name} is not numeric")


def _check_selected(ds: MultiViewDataset, selected_views: Sequence[int]) -> list[int]:
    views = list(selected_views)
    if not views:
        raise ConfigInvalid("no views selected")
    if len(set(views)) != len(views):
        raise ConfigInvalid("selected views must be distinct")
    for v in views:
        if not 0 <= v < len(ds.views):
            raise ConfigInvalid(f"view index {v} out of range")
    return views


def mine_family(ds: MultiViewDataset, selected_views: Sequence[int],
                cfg: MinerConfig) -> RedescriptionFamily:
    """Mine one candidate family per attribute of the selected views."""
    cfg.validate()
    _check_dataset(ds, cfg)
    views = _check_selected(ds, selected_views)
    tasks: list[tuple[int, str]] = []
    for v in views:
        for col in ds.views[v].attributes:
            tasks.append((v, col.name))

    results: dict[tuple[int, str], tuple[FamilyEntry, float]] = {}
    if cfg.n_threads <= 1:
        for v, a in tasks:
            t0 = time.perf_counter()
            entry = mine_attribute(ds, v, a, cfg)
            results[(v, a)] = (entry, time.perf_counter() - t0)
    else:
        def run(batch: AttributeAssignment) -> list[tuple[FamilyEntry, float]]:
            done = []
            for v, a in batch.tasks:
                t0 = time.perf_counter()
                entry = mine_attribute(ds, v, a, cfg)
                done.append((entry, time.perf_counter() - t0))
            return done

        plan = assign_attributes(tasks, cfg.n_threads)
        with ThreadPoolExecutor(max_workers=cfg.n_threads) as pool:
            for batch in pool.map(run, plan):
                for entry, dt in batch:
                    results[(entry.view, entry.attribute)] = (entry, dt)

    family = RedescriptionFamily(seed=cfg.seed, config_hash=config_hash(cfg))
    for key in tasks:
        entry, dt = results[key]
        family.entries.append(entry)
        family.timings[key] = dt
    return family


def mine_interactions(ds: MultiViewDataset, view: int, attribute: str,
                      cfg: MinerConfig) -> list[Redescription]:
    """Interaction set of a single constrained attribute."""
    cfg.validate()
    _check_dataset(ds, cfg)
    if not 0 <= view < len(ds.views):
        raise ConfigInvalid(f"view index {view} out of range")
    if attribute not in ds.views[view].names:
        raise ConfigInvalid(f"unknown attribute {attribute} in view {view}")
    partner = _partner_of(view, ds)
    rest = [v for v in range(len(ds.views)) if v not in (view, partner)]
    spec = perform_binning(ds, (view, attribute), cfg.min_support)
    bin_rules = bins_to_rules(spec)
    targets = TargetMatrix.from_classes(bins_to_classes(spec), spec.n_bins)
    base_seed = stable_seed(cfg.seed, view, attribute)
    store = CandidateStore(cfg)
    for restart in range(cfg.num_random_restarts):
        seed = base_seed + restart
        pool = _rule_pool(ds, partner, targets, cfg, seed)
        store.insert(_mine_interactions_once(ds, view, attribute, partner, rest,
                                             bin_rules, pool.pct_rules, cfg, seed))
    return _finalize(store, cfg, ds)


def count_described(family: RedescriptionFamily) -> FamilyStats:
    """Per-family summary: described attributes, interaction spread, accuracy."""
    n_ind = sum(1 for e in family.entries if e.individual)
    int_attrs: set[tuple[int, str]] = set()
    js: list[float] = []
    for e in family.entries:
        for red in e.interactions:
            for v, q in red.queries:
                for lit in iter_literals(q.root):
                    int_attrs.add((v, lit.attr))
        for red in e.individual + e.interactions:
            js.append(red.jaccard)
    if js:
        mean = float(np.mean(js))
        sd = float(np.std(js))
    else:
        mean = sd = 0.0
    n_accurate = sum(1 for j in js if j >= ACCURATE_J)
    return FamilyStats(n_ind, len(int_attrs), mean, sd, n_accurate)


def covered_entities(family: RedescriptionFamily, n_entities: int) -> int:
    """Entities covered by the support of at least one family member."""
    covered = np.zeros(n_entities, dtype=bool)
    for e in family.entries:
        for red in e.individual + e.interactions:
            covered |= red.support.mask
    return int(covered.sum())
