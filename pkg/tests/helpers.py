"""Shared fixtures builders and independent oracles for the test suite.

The oracles here recompute results with exact arithmetic or brute force and
never call into the module under test beyond plain data types.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, exp, lgamma, log, log1p

import numpy as np

from redescribe.dataset import (
    AttributeColumn,
    MultiViewDataset,
    TargetColumn,
    View,
    assemble_dataset,
)
from redescribe.explain import RED, RULE
from redescribe.queries import Literal, Query, evaluate, iter_literals, or_of


# -- dataset builders ----------------------------------------------------------------


def two_view_ds(a: np.ndarray, b: np.ndarray,
                names=("viewA", "viewB"), prefixes=("a", "b")) -> MultiViewDataset:
    """Wrap two numeric matrices as a shared-entity two-view dataset."""
    a = np.atleast_2d(np.asarray(a, dtype=np.float64).T).T
    b = np.atleast_2d(np.asarray(b, dtype=np.float64).T).T
    views = []
    for name, prefix, mat in zip(names, prefixes, (a, b)):
        cols = [AttributeColumn(f"{prefix}{i}", "numeric", mat[:, i])
                for i in range(mat.shape[1])]
        views.append(View(name, cols))
    return assemble_dataset(views)


def arange_pair_ds(n: int) -> MultiViewDataset:
    """Entity index as the value of one attribute per view: supports by hand."""
    vals = np.arange(n, dtype=np.float64)
    return two_view_ds(vals.reshape(-1, 1), vals.reshape(-1, 1))


def mask_query(view: int, name: str, members) -> Query:
    # unit intervals on the arange attribute select exactly `members`
    lits = [Literal(view, name, float(i), float(i)) for i in sorted(members)]
    return Query(view, or_of(lits))


def target_of(codes, n_classes: int) -> TargetColumn:
    return TargetColumn("prediction", tuple(f"c{i}" for i in range(n_classes)),
                        np.asarray(codes, dtype=np.int64))


# -- exact binomial tail -------------------------------------------------------------


def exact_tail(s: int, n: int, marginals) -> Fraction:
    """P(X >= s) for X ~ Binomial(n, prod marginals), in exact rationals."""
    pi = Fraction(1)
    for m in marginals:
        pi *= m if isinstance(m, Fraction) else Fraction(m).limit_denominator(10 ** 9)
    if s <= 0:
        return Fraction(1)
    if s > n:
        return Fraction(0)
    return sum(Fraction(comb(n, k)) * pi ** k * (1 - pi) ** (n - k)
               for k in range(s, n + 1))


# -- exhaustive split search ---------------------------------------------------------


def oracle_split(X: np.ndarray, Y: np.ndarray, idx: np.ndarray,
                 min_leaf: int):
    """Best (attr, threshold) by exact-rational exhaustive search, or None.

    Gain is sum_c left_c^2 / nL + sum_c right_c^2 / nR over adjacent-value
    midpoints; ties keep the lowest threshold inside an attribute and the
    lowest attribute index across attributes; a split must strictly beat the
    unsplit node.
    """
    n_node = idx.shape[0]
    Yn = Y[idx]
    totals = Yn.sum(axis=0)
    best = None  # (gain, attr, threshold)
    for j in range(X.shape[1]):
        v = X[idx, j]
        order = np.argsort(v, kind="mergesort")
        sv = v[order]
        Ys = Yn[order]
        cand = None
        for i in range(n_node - 1):
            n_left, n_right = i + 1, n_node - (i + 1)
            if sv[i + 1] <= sv[i] or n_left < min_leaf or n_right < min_leaf:
                continue
            mid = 0.5 * (sv[i] + sv[i + 1])
            if not (sv[i] <= mid < sv[i + 1]):
                continue
            left = Ys[: i + 1].sum(axis=0)
            a = int(np.sum(left ** 2))
            b = int(np.sum((totals - left) ** 2))
            gain = Fraction(a, n_left) + Fraction(b, n_right)
            if cand is None or gain > cand[0]:
                cand = (gain, mid)
        if cand is not None and (best is None or cand[0] > best[0]):
            best = (cand[0], j, cand[1])
    if best is None:
        return None
    if best[0] <= Fraction(int(np.sum(totals ** 2)), n_node):
        return None
    return best[1], best[2]


def check_tree_against_oracle(model, X: np.ndarray, Y: np.ndarray,
                              max_depth: int, min_leaf: int) -> list[str]:
    """Every internal node optimal, every leaf justified; returns violations."""
    problems: list[str] = []

    def walk(node):
        idx = node.support.indices()
        if node.is_leaf:
            if (node.depth < max_depth and idx.size >= 2 * min_leaf
                    and oracle_split(X, Y, idx, min_leaf) is not None):
                problems.append(f"leaf at depth {node.depth} had a valid split")
            return
        want = oracle_split(X, Y, idx, min_leaf)
        if want is None:
            problems.append(f"split at depth {node.depth} where none is valid")
        elif want != (node.attr, node.threshold):
            problems.append(
                f"split {node.attr}@{node.threshold} but oracle says {want}")
        walk(node.left)
        walk(node.right)

    walk(model.root)
    return problems


# -- explanation selection replay ----------------------------------------------------


def replay_selection(cands, masks, codes: np.ndarray, n_classes: int,
                     delta: float) -> dict:
    """Replays the two-phase per-class per-kind greedy selection.

    Returns {class: {kind: (picks, stalled)}}, picks being
    [candidate_order, score, precision, num_new] after phase-two swaps.
    """
    out: dict = {}
    for cls in range(n_classes):
        cmask = codes == cls
        n_class = int(cmask.sum())
        per = {}
        if n_class:
            for kind in (RED, RULE):
                idxs = [i for i, c in enumerate(cands) if c.kind == kind]
                prec = {i: (masks[i] & cmask).sum() / masks[i].sum()
                        for i in idxs if masks[i].sum()}
                counter = n_class
                covered = np.zeros_like(cmask)
                used: set[int] = set()
                picks: list[list] = []
                stalled = False
                while counter > 0:
                    best, best_rank = None, None
                    for i in idxs:
                        if i in used or i not in prec or prec[i] < delta:
                            continue
                        new = int((masks[i] & cmask & ~covered).sum())
                        if new < 1:
                            continue
                        cov = new / counter
                        if kind == RED:
                            score = (cov + cands[i].jaccard + 2 * prec[i]) / 4
                        else:
                            score = (cov + 2 * prec[i]) / 3
                        rank = (score, prec[i], new, -i)
                        if best_rank is None or rank > best_rank:
                            best_rank, best = rank, (i, score, prec[i], new)
                    if best is None:
                        stalled = True
                        break
                    i, score, p, new = best
                    used.add(i)
                    covered |= masks[i] & cmask
                    counter = max(0, counter - new)
                    picks.append([i, score, p, new])
                if counter == 0 and picks:
                    for entry in picks:
                        cur = entry[0]
                        for i in idxs:
                            if i == cur:
                                continue
                            if not np.array_equal(masks[i], masks[entry[0]]):
                                continue
                            if (cands[i].jaccard > cands[cur].jaccard
                                    and prec.get(i, 0.0) >= entry[2]):
                                cur = i
                        entry[0] = cur
                per[kind] = (picks, stalled)
        out[cls] = per
    return out


# -- structural and threshold scans --------------------------------------------------


def query_attr_names(q: Query) -> set[str]:
    return {lit.attr for lit in iter_literals(q.root)}


def family_violations(family) -> list[str]:
    """Hard-constraint scan: individual home queries name exactly the target
    attribute; interaction home queries contain it."""
    out = []
    for e in family.entries:
        for red in e.individual:
            hq = red.query(e.view)
            if hq is None:
                out.append(f"{e.view}/{e.attribute}: individual without home query")
            elif query_attr_names(hq) != {e.attribute}:
                out.append(f"{e.view}/{e.attribute}: individual home attrs "
                           f"{query_attr_names(hq)}")
        for red in e.interactions:
            hq = red.query(e.view)
            if hq is None:
                out.append(f"{e.view}/{e.attribute}: interaction without home query")
            elif e.attribute not in query_attr_names(hq):
                out.append(f"{e.view}/{e.attribute}: interaction misses the target")
    return out


def float_tail(s: int, n: int, pi: float) -> float:
    """Independent log-space binomial tail built on lgamma, plain Python."""
    if s <= 0:
        return 1.0
    if s > n or pi <= 0.0:
        return 0.0
    if pi >= 1.0:
        return 1.0
    lp, lq = log(pi), log1p(-pi)
    terms = [lgamma(n + 1) - lgamma(k + 1) - lgamma(n - k + 1)
             + k * lp + (n - k) * lq for k in range(s, n + 1)]
    top = max(terms)
    return min(1.0, exp(top + log(sum(exp(t - top) for t in terms))))


def threshold_violations(reds, ds: MultiViewDataset, cfg) -> list[str]:
    """Re-evaluates every redescription from its queries with set arithmetic.

    The p-value ceiling is re-checked with exact rationals on small entity
    counts and with an independent lgamma tail on large ones.
    """
    out = []
    n = ds.n_entities
    max_sup = min(cfg.max_support, n)
    for red in reds:
        supports = []
        for view, q in red.queries:
            supports.append(set(np.flatnonzero(evaluate(q, ds).mask).tolist()))
        inter = set.intersection(*supports)
        union = set.union(*supports)
        j = len(inter) / len(union) if union else 0.0
        pi = 1.0
        for s in supports:
            pi *= len(s) / n
        p = float_tail(len(inter), n, pi)
        slack = 1e-6
        if n <= 80:
            p = float(exact_tail(len(inter), n,
                                 [Fraction(len(s), n) for s in supports]))
            slack = 1e-9
        if abs(j - red.jaccard) > 1e-12:
            out.append(f"stored J {red.jaccard} but recomputed {j}")
        if j < cfg.min_jaccard:
            out.append(f"J {j} below the floor {cfg.min_jaccard}")
        if p > cfg.max_pvalue * (1 + slack):
            out.append(f"p {p} above the ceiling {cfg.max_pvalue}")
        if not cfg.min_support <= len(inter) <= max_sup:
            out.append(f"support {len(inter)} outside "
                       f"[{cfg.min_support}, {max_sup}]")
    return out


def family_reds(family) -> list:
    out = []
    for e in family.entries:
        out.extend(e.individual)
        out.extend(e.interactions)
    return out
