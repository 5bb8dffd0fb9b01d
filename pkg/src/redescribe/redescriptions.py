"""Redescription construction and candidate management.

A redescription binds one query per participating view.  Its accuracy is the
Jaccard of the query supports, its significance the binomial tail of the
intersection size under independent per-view marginals.  All operations here
enforce the same admission thresholds: Jaccard floor, p-value ceiling and
support bounds.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .binning import BinSpec, bins_to_rules
from .dataset import MultiViewDataset
from .errors import ConfigInvalid, InsufficientCandidates, SameView, ViewAlreadyPresent
from .measures import p_value
from .queries import (
    And,
    Expr,
    Literal,
    Not,
    Or,
    Query,
    SupportSet,
    conjoin,
    evaluate,
    minimize,
    or_of,
)

DEFAULT_WEIGHTS = (0.2, 0.15, 0.15, 0.15, 0.15, 0.2)
LOGP_CAP = 300.0


@dataclass(frozen=True)
class MinerConfig:
    min_jaccard: float = 0.3
    max_pvalue: float = 0.01
    min_support: int = 10
    max_support: int = 4000
    working_size: int = 500
    max_size: int = 1500
    num_ret_red: int = 300
    tree_depth: int = 8
    n_supplement_trees: int = 2
    num_iterations: int = 1
    num_random_restarts: int = 10
    num_target: int = 100
    num_new_attr: int = 1
    min_add_red_js: float = 0.1
    rule_size_norm: float = 20.0
    allow_left_neg: bool = True
    allow_right_neg: bool = True
    allow_left_disj: bool = True
    allow_right_disj: bool = True
    allow_same_support: bool = False
    unguided_expansion: bool = True
    joining_procedure: bool = True
    minimize_rules: bool = True
    n_threads: int = 1
    seed: int = 0
    preference_weights: tuple[float, ...] = DEFAULT_WEIGHTS

    def validate(self) -> "MinerConfig":
        def need(cond, msg):
            if not cond:
                raise ConfigInvalid(msg)

        need(0.0 <= self.min_jaccard <= 1.0, "min_jaccard must lie in [0, 1]")
        need(0.0 < self.max_pvalue <= 1.0, "max_pvalue must lie in (0, 1]")
        need(1 <= self.min_support <= self.max_support,
             "need 1 <= min_support <= max_support")
        need(1 <= self.working_size <= self.max_size,
             "need 1 <= working_size <= max_size")
        need(self.num_ret_red >= 1, "num_ret_red must be positive")
        need(self.tree_depth >= 1, "tree_depth must be positive")
        need(self.n_supplement_trees >= 0, "n_supplement_trees must be >= 0")
        need(self.num_iterations >= 0, "num_iterations must be >= 0")
        need(self.num_random_restarts >= 1, "num_random_restarts must be positive")
        need(self.num_target >= 1, "num_target must be positive")
        need(self.num_new_attr >= 0, "num_new_attr must be >= 0")
        need(0.0 <= self.min_add_red_js <= 1.0, "min_add_red_js must lie in [0, 1]")
        need(self.rule_size_norm > 0, "rule_size_norm must be positive")
        need(self.n_threads >= 1, "n_threads must be positive")
        need(len(self.preference_weights) in (5, 6),
             "preference_weights needs 5 or 6 entries")
        need(all(w >= 0 for w in self.preference_weights),
             "preference weights must be nonnegative")
        need(sum(self.preference_weights) > 0, "preference weights must not all be zero")
        return self


@dataclass
class Redescription:
    queries: tuple[tuple[int, Query], ...]  # (view, query), sorted by view
    support: SupportSet                      # intersection of query supports
    union: SupportSet
    marginal_counts: tuple[int, ...]
    jaccard: float
    pvalue: float
    attr_set: frozenset = field(default=frozenset())

    @property
    def views(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.queries)

    def query(self, view: int) -> Query | None:
        for v, q in self.queries:
            if v == view:
                return q
        return None

    @property
    def n_literals(self) -> int:
        return sum(q.n_literals for _, q in self.queries)

    def signature(self) -> tuple:
        return tuple((v, q.serialize()) for v, q in self.queries)


def _report(inter: SupportSet, union: SupportSet, counts: Sequence[int]) -> tuple[float, float]:
    u = union.count
    j = inter.count / u if u else 0.0
    n = inter.universe
    p = p_value(inter.count, n, [c / n for c in counts])
    return j, p


def _attrs_of(queries: Iterable[tuple[int, Query]]) -> frozenset:
    out = set()
    for v, q in queries:
        for lit in _literals(q.root):
            out.add((v, lit.attr))
    return frozenset(out)


def _literals(e: Expr):
    if isinstance(e, Literal):
        yield e
    elif isinstance(e, Not):
        yield from _literals(e.child)
    else:
        for c in e.children:
            yield from _literals(c)


def _contains_not(e: Expr) -> bool:
    if isinstance(e, Literal):
        return False
    if isinstance(e, Not):
        return True
    return any(_contains_not(c) for c in e.children)


def _contains_or(e: Expr) -> bool:
    if isinstance(e, Literal):
        return False
    if isinstance(e, Not):
        return _contains_or(e.child)
    if isinstance(e, Or):
        return True
    return any(_contains_or(c) for c in e.children)


def make_redescription(queries: dict[int, Query], ds: MultiViewDataset) -> Redescription:
    pairs = tuple(sorted(queries.items()))
    supports = [evaluate(q, ds) for _, q in pairs]
    return from_supports(pairs, supports)


def from_supports(pairs: tuple[tuple[int, Query], ...],
                  supports: Sequence[SupportSet]) -> Redescription:
    inter = supports[0]
    union = supports[0]
    for s in supports[1:]:
        inter = inter & s
        union = union | s
    counts = tuple(s.count for s in supports)
    j, p = _report(inter, union, counts)
    return Redescription(pairs, inter, union, counts, j, p, _attrs_of(pairs))


def extend_redescription(red: Redescription, view: int, q: Query,
                         supp: SupportSet) -> Redescription:
    pairs = tuple(sorted(red.queries + ((view, q),)))
    inter = red.support & supp
    union = red.union | supp
    counts = red.marginal_counts + (supp.count,)
    j, p = _report(inter, union, counts)
    return Redescription(pairs, inter, union, counts, j, p, _attrs_of(pairs))


def candidate_score(red: Redescription, cfg: MinerConfig) -> float:
    """Context-free store ranking: accuracy, significance, size penalty."""
    w = cfg.preference_weights
    nlp = LOGP_CAP if red.pvalue <= 1e-300 else min(-math.log10(red.pvalue), LOGP_CAP)
    score = w[0] * red.jaccard + w[1] * (nlp / LOGP_CAP)
    if len(w) == 6:
        score -= w[5] * min(red.n_literals / cfg.rule_size_norm, 1.0)
    return score


def passes_thresholds(red: Redescription, cfg: MinerConfig) -> bool:
    max_sup = min(cfg.max_support, red.support.universe)
    return (red.jaccard >= cfg.min_jaccard
            and red.pvalue <= cfg.max_pvalue
            and cfg.min_support <= red.support.count <= max_sup)


# -- dedup + bounded store ----------------------------------------------------------


def _admit(items: list[Redescription], index: dict[bytes, list[int]],
           red: Redescription, cfg: MinerConfig) -> bool:
    key = red.support.key()
    slots = index.get(key)
    if slots is None:
        index[key] = [len(items)]
        items.append(red)
        return True
    sig = red.signature()
    for i in slots:
        if items[i].signature() == sig:
            return False
    if not cfg.allow_same_support:
        i = slots[0]
        if red.jaccard > items[i].jaccard:
            items[i] = red
            return True
        return False
    for i in slots:
        if len(items[i].attr_set ^ red.attr_set) < cfg.num_new_attr:
            return False
    slots.append(len(items))
    items.append(red)
    return True


class CandidateStore:
    """Bounded candidate pool: dedup on insert, score-based compaction."""

    def __init__(self, cfg: MinerConfig):
        self.cfg = cfg
        self._items: list[Redescription] = []
        self._index: dict[bytes, list[int]] = {}

    def __len__(self) -> int:
        return len(self._items)

    @property
    def items(self) -> list[Redescription]:
        return list(self._items)

    def insert(self, reds: Iterable[Redescription]) -> None:
        # nothing below the quality floor ever enters the pool
        for red in reds:
            if not passes_thresholds(red, self.cfg):
                continue
            if _admit(self._items, self._index, red, self.cfg):
                if len(self._items) > self.cfg.max_size:
                    self._compact()

    def _compact(self) -> None:
        scores = [candidate_score(r, self.cfg) for r in self._items]
        ranked = sorted(range(len(self._items)), key=lambda i: (-scores[i], i))
        keep = sorted(ranked[: self.cfg.working_size])
        self._items = [self._items[i] for i in keep]
        self._index = {}
        for i, red in enumerate(self._items):
            self._index.setdefault(red.support.key(), []).append(i)


# -- pairing -------------------------------------------------------------------------


def _shape_allowed(q: Query, allow_neg: bool, allow_disj: bool) -> bool:
    return ((allow_neg or not _contains_not(q.root))
            and (allow_disj or not _contains_or(q.root)))


def create_reds(rules_a: Sequence[Query], rules_b: Sequence[Query],
                cfg: MinerConfig, ds: MultiViewDataset,
                classes_a: Sequence[int] | None = None,
                classes_b: Sequence[int] | None = None) -> list[Redescription]:
    """Admissible pairs of left-side and right-side rules.

    The left side is the view of the attribute being described; negation and
    disjunction gates apply per side.  With guidance (class lists and
    unguided_expansion off) only same-class pairs are tried, else the full
    cross product.  Output is deduplicated with the store rules.
    """
    views_a = {q.view for q in rules_a}
    views_b = {q.view for q in rules_b}
    if views_a & views_b:
        raise SameView(f"rule pools overlap on views {sorted(views_a & views_b)}")
    n = ds.n_entities
    ca_cls = list(classes_a) if classes_a is not None else None
    cb_cls = list(classes_b) if classes_b is not None else None

    keep_a = [i for i, q in enumerate(rules_a)
              if _shape_allowed(q, cfg.allow_left_neg, cfg.allow_left_disj)]
    keep_b = [i for i, q in enumerate(rules_b)
              if _shape_allowed(q, cfg.allow_right_neg, cfg.allow_right_disj)]
    if not keep_a or not keep_b:
        return []
    qa = [rules_a[i] for i in keep_a]
    qb = [rules_b[i] for i in keep_b]
    sa = [evaluate(q, ds) for q in qa]
    sb = [evaluate(q, ds) for q in qb]
    Ma = np.stack([s.mask for s in sa]).astype(np.int64)
    Mb = np.stack([s.mask for s in sb]).astype(np.int64)
    counts_a = np.array([s.count for s in sa], dtype=np.int64)
    counts_b = np.array([s.count for s in sb], dtype=np.int64)

    inter = Ma @ Mb.T
    union = counts_a[:, None] + counts_b[None, :] - inter
    with np.errstate(invalid="ignore", divide="ignore"):
        jac = np.where(union > 0, inter / np.maximum(union, 1), 0.0)
    max_sup = min(cfg.max_support, n)
    ok = (jac >= cfg.min_jaccard) & (inter >= cfg.min_support) & (inter <= max_sup)
    if ca_cls is not None and cb_cls is not None and not cfg.unguided_expansion:
        ga = np.array([ca_cls[i] for i in keep_a])[:, None]
        gb = np.array([cb_cls[i] for i in keep_b])[None, :]
        ok &= (ga >= 0) & (ga == gb)

    items: list[Redescription] = []
    index: dict[bytes, list[int]] = {}
    for i, j in np.argwhere(ok):
        p = p_value(int(inter[i, j]), n, (counts_a[i] / n, counts_b[j] / n))
        if p > cfg.max_pvalue:
            continue
        pairs = tuple(sorted(((qa[i].view, qa[i]), (qb[j].view, qb[j]))))
        supports = [sa[i], sb[j]] if qa[i].view <= qb[j].view else [sb[j], sa[i]]
        red = from_supports(pairs, supports)
        _admit(items, index, red, cfg)
    return items


# -- refinement ----------------------------------------------------------------------


def refine_with_bins(red: Redescription, spec: BinSpec, cfg: MinerConfig,
                     ds: MultiViewDataset) -> Redescription:
    """Greedily OR additional bins of the home attribute into the home query.

    Best improvement first, only while the Jaccard strictly increases and the
    support stays under the ceiling; the result never has a lower Jaccard.
    """
    if not cfg.allow_left_disj:
        return red
    hq = red.query(spec.view)
    if hq is None:
        return red
    root = hq.root
    if isinstance(root, Literal):
        lits = [root]
    elif isinstance(root, Or) and all(isinstance(c, Literal) for c in root.children):
        lits = list(root.children)
    else:
        return red
    if any(l.attr != spec.attr for l in lits):
        return red

    n = ds.n_entities
    max_sup = min(cfg.max_support, n)
    present = {(l.low, l.high) for l in lits}
    others = [(v, evaluate(q, ds)) for v, q in red.queries if v != spec.view]
    if not others:
        return red
    inter_o = others[0][1]
    union_o = others[0][1]
    for _, s in others[1:]:
        inter_o = inter_o & s
        union_o = union_o | s

    rules = bins_to_rules(spec)
    candidates = []
    for s, rule in enumerate(rules):
        lit = rule.root
        if (lit.low, lit.high) in present:
            continue
        candidates.append((s, lit, evaluate(rule, ds)))

    hs = evaluate(hq, ds)
    cur_inter = hs & inter_o
    cur_union = hs | union_o
    cur_j = cur_inter.count / cur_union.count if cur_union.count else 0.0

    while candidates:
        best = None
        for pos, (s, lit, supp) in enumerate(candidates):
            nh = hs | supp
            ni = nh & inter_o
            if ni.count > max_sup:
                continue
            nu = nh | union_o
            j = ni.count / nu.count if nu.count else 0.0
            if j > cur_j and (best is None or j > best[0]):
                best = (j, pos)
        if best is None:
            break
        j, pos = best
        s, lit, supp = candidates.pop(pos)
        lits.append(lit)
        hs = hs | supp
        cur_j = j

    if len(present) == len(lits):
        return red

    new_hq = Query(spec.view, or_of(lits))
    pairs = tuple(sorted([(spec.view, new_hq)] + [(v, q) for v, q in red.queries
                                                  if v != spec.view]))
    by_view = dict(others)
    supports = [hs if v == spec.view else by_view[v] for v, _ in pairs]
    new = from_supports(pairs, supports)
    # widening the union can push the tail probability past the ceiling
    if new.pvalue > cfg.max_pvalue:
        return red
    return new


def complete_reds(incomplete: Sequence[Redescription], target_view: int,
                  rules: Sequence[Query], cfg: MinerConfig,
                  ds: MultiViewDataset) -> list[Redescription]:
    """Extend every item with the target-view rule maximizing the pair Jaccard.

    The extended item keeps only if the recomputed full-width report still
    clears the Jaccard floor and support bounds; otherwise it is dropped.
    """
    for red in incomplete:
        if red.query(target_view) is not None:
            raise ViewAlreadyPresent(target_view)
    if not incomplete or not rules:
        return []
    n = ds.n_entities
    supports = [evaluate(q, ds) for q in rules]
    R = np.stack([s.mask for s in supports]).astype(np.int64)
    I = np.stack([r.support.mask for r in incomplete]).astype(np.int64)
    ci = np.array([r.support.count for r in incomplete], dtype=np.int64)
    cr = np.array([s.count for s in supports], dtype=np.int64)
    inter = I @ R.T
    union = ci[:, None] + cr[None, :] - inter
    with np.errstate(invalid="ignore", divide="ignore"):
        jac = np.where(union > 0, inter / np.maximum(union, 1), 0.0)
    pick = np.argmax(jac, axis=1)  # first maximum = rule order tie-break

    max_sup = min(cfg.max_support, n)
    out = []
    for row, red in enumerate(incomplete):
        j = int(pick[row])
        new = extend_redescription(red, target_view, rules[j], supports[j])
        if new.jaccard >= cfg.min_jaccard and cfg.min_support <= new.support.count <= max_sup:
            out.append(new)
    return out


def conjunctive_refine(store: CandidateStore, cfg: MinerConfig,
                       ds: MultiViewDataset) -> None:
    """Grow the store with pairwise per-view conjunctions of its items.

    Only pairs where both parents reach min_add_red_js are tried, and a
    conjunction is kept only when its Jaccard strictly exceeds both parents'.
    Admission thresholds and dedup are the store's job.
    """
    cands = [r for r in store.items if r.jaccard >= cfg.min_add_red_js]
    if len(cands) < 2:
        return
    M = np.stack([r.support.mask for r in cands]).astype(np.int64)
    inter = M @ M.T
    out = []
    for i in range(len(cands)):
        for j in range(i + 1, len(cands)):
            if inter[i, j] < cfg.min_support:
                continue
            qs: dict[int, Query] = {}
            failed = False
            views = sorted(set(cands[i].views) | set(cands[j].views))
            for v in views:
                q1, q2 = cands[i].query(v), cands[j].query(v)
                if q1 is None or q2 is None:
                    qs[v] = q1 or q2
                    continue
                joined = conjoin(q1, q2)
                if joined is None:
                    failed = True
                    break
                qs[v] = joined
            if failed:
                continue
            red = make_redescription(qs, ds)
            if red.jaccard > cands[i].jaccard and red.jaccard > cands[j].jaccard:
                out.append(red)
    store.insert(out)


# -- final extraction ----------------------------------------------------------------


def extract_final(store: CandidateStore, cfg: MinerConfig) -> list[Redescription]:
    """Greedy diverse selection of up to num_ret_red stored items.

    Per step the item maximizing w0*J + w1*logp + w2*attribute-novelty +
    w3*element-diversity + w4*coverage-gain - w5*size is taken (6th weight
    optional); ties fall back to insertion order.
    """
    items = store.items
    if len(items) < cfg.num_ret_red:
        warnings.warn(
            f"store holds {len(items)} candidates, fewer than the "
            f"{cfg.num_ret_red} requested",
            InsufficientCandidates,
            stacklevel=2,
        )
    if not items:
        return []
    w = cfg.preference_weights
    w_size = w[5] if len(w) == 6 else 0.0
    k = len(items)
    n = items[0].support.universe
    M = np.stack([r.support.mask for r in items])
    Mi = M.astype(np.int64)
    counts = np.array([r.support.count for r in items], dtype=np.int64)
    jacc = np.array([r.jaccard for r in items])
    nlp = np.array([
        LOGP_CAP if r.pvalue <= 1e-300 else min(-math.log10(r.pvalue), LOGP_CAP)
        for r in items
    ]) / LOGP_CAP
    sizes = np.array([min(r.n_literals / cfg.rule_size_norm, 1.0) for r in items])
    attr_sets = [r.attr_set for r in items]

    active = np.ones(k, dtype=bool)
    covered = np.zeros(n, dtype=bool)
    max_sim = np.zeros(k)
    seen_attrs: set = set()
    chosen: list[int] = []

    while active.any() and len(chosen) < cfg.num_ret_red:
        covgain = (Mi @ (~covered).astype(np.int64)) / n if n else np.zeros(k)
        attdiv = np.zeros(k)
        for i in np.flatnonzero(active):
            att = attr_sets[i]
            attdiv[i] = len(att - seen_attrs) / len(att) if att else 0.0
        score = (w[0] * jacc + w[1] * nlp + w[2] * attdiv
                 + w[3] * (1.0 - max_sim) + w[4] * covgain - w_size * sizes)
        score = np.where(active, score, -np.inf)
        best = int(np.argmax(score))
        chosen.append(best)
        active[best] = False
        covered |= M[best]
        seen_attrs |= set(attr_sets[best])
        pair_inter = Mi @ M[best].astype(np.int64)
        pair_union = counts + counts[best] - pair_inter
        with np.errstate(invalid="ignore", divide="ignore"):
            sim = np.where(pair_union > 0, pair_inter / np.maximum(pair_union, 1), 0.0)
        max_sim = np.maximum(max_sim, sim)
    return [items[i] for i in chosen]


# -- whole-redescription minimization --------------------------------------------------


def minimize_redescription(red: Redescription, ds: MultiViewDataset,
                           cfg: MinerConfig) -> Redescription:
    """Minimize every query against the intersection of the others.

    Reverts to the input when the minimized variant no longer clears the
    admission thresholds (possible because supports only grow).
    """
    n = ds.n_entities
    max_sup = min(cfg.max_support, n)
    queries = dict(red.queries)
    supports = {v: evaluate(q, ds) for v, q in queries.items()}
    for v in sorted(queries):
        other = [s for ov, s in supports.items() if ov != v]
        if not other:
            continue
        partner = other[0]
        for s in other[1:]:
            partner = partner & s
        q_min = minimize(queries[v], ds, partner, max_support=max_sup)
        if q_min is not queries[v]:
            queries[v] = q_min
            supports[v] = evaluate(q_min, ds)
    new = make_redescription(queries, ds)
    if new.signature() == red.signature():
        return red
    if (new.jaccard >= cfg.min_jaccard and new.pvalue <= cfg.max_pvalue
            and cfg.min_support <= new.support.count <= max_sup):
        return new
    return red
