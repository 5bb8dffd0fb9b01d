import math

import numpy as np
import pytest

from helpers import arange_pair_ds, two_view_ds
from redescribe.binning import perform_binning
from redescribe.errors import (
    ConfigInvalid,
    InsufficientCandidates,
    SameView,
    ViewAlreadyPresent,
)
from redescribe.measures import p_value
from redescribe.queries import Literal, Or, Query, evaluate
from redescribe.redescriptions import (
    LOGP_CAP,
    CandidateStore,
    MinerConfig,
    candidate_score,
    complete_reds,
    conjunctive_refine,
    create_reds,
    extract_final,
    make_redescription,
    minimize_redescription,
    passes_thresholds,
    refine_with_bins,
)

LOOSE = MinerConfig(min_jaccard=0.0, max_pvalue=1.0, min_support=1,
                    max_support=10 ** 6, working_size=500, max_size=1500)


def interval(view, name, lo, hi):
    return Query(view, Literal(view, name, float(lo), float(hi)))


def red_of(ds, lo_a, hi_a, lo_b, hi_b):
    return make_redescription({0: interval(0, "a0", lo_a, hi_a),
                               1: interval(1, "b0", lo_b, hi_b)}, ds)


# -- configuration ---------------------------------------------------------------


@pytest.mark.parametrize("bad", [
    {"min_jaccard": 1.5},
    {"min_jaccard": -0.1},
    {"max_pvalue": 0.0},
    {"max_pvalue": 1.2},
    {"min_support": 0},
    {"min_support": 50, "max_support": 10},
    {"working_size": 100, "max_size": 50},
    {"num_ret_red": 0},
    {"tree_depth": 0},
    {"n_supplement_trees": -1},
    {"num_iterations": -1},
    {"num_random_restarts": 0},
    {"num_target": 0},
    {"num_new_attr": -1},
    {"min_add_red_js": 2.0},
    {"rule_size_norm": 0.0},
    {"n_threads": 0},
    {"preference_weights": (0.5, 0.5)},
    {"preference_weights": (0.0, 0.0, 0.0, 0.0, 0.0)},
    {"preference_weights": (0.2, -0.1, 0.2, 0.2, 0.2)},
])
def test_config_validation_rejects(bad):
    with pytest.raises(ConfigInvalid):
        MinerConfig(**bad).validate()


def test_config_defaults_validate():
    assert MinerConfig().validate() is not None


# -- construction and scoring ------------------------------------------------------


def test_make_redescription_reports(truth_table_ds):
    red = make_redescription(
        {0: interval(0, "n23_3", 0.98, 1.41), 1: interval(1, "b0", 0.0, 5.0)},
        truth_table_ds)
    # a-side {0,1,2,4,5,7}, b-side {0..5}: intersection 4 of union 8
    assert red.support.indices().tolist() == [0, 1, 2, 4, 5]
    assert red.union.count == 9 - 2
    assert red.jaccard == pytest.approx(5 / 7)
    assert red.marginal_counts == (6, 6)
    assert red.pvalue == pytest.approx(p_value(5, 8, [6 / 8, 6 / 8]), rel=1e-12)
    assert red.attr_set == frozenset({(0, "n23_3"), (1, "b0")})
    assert red.views == (0, 1)
    assert red.n_literals == 2


def test_candidate_score_formula():
    ds = arange_pair_ds(20)
    red = red_of(ds, 0, 9, 0, 9)
    cfg = MinerConfig(preference_weights=(0.2, 0.15, 0.15, 0.15, 0.15, 0.2),
                      rule_size_norm=20.0)
    nlp = min(-math.log10(red.pvalue), LOGP_CAP)
    want = 0.2 * red.jaccard + 0.15 * (nlp / LOGP_CAP) - 0.2 * (2 / 20.0)
    assert candidate_score(red, cfg) == pytest.approx(want, rel=1e-12)
    five = MinerConfig(preference_weights=(0.2, 0.15, 0.15, 0.15, 0.35))
    want5 = 0.2 * red.jaccard + 0.15 * (nlp / LOGP_CAP)
    assert candidate_score(red, five) == pytest.approx(want5, rel=1e-12)


def test_passes_thresholds_gates():
    ds = arange_pair_ds(30)
    exact = red_of(ds, 0, 9, 0, 9)  # J = 1.0, support 10
    assert passes_thresholds(exact, MinerConfig(min_jaccard=0.9, max_pvalue=0.05,
                                                min_support=10, max_support=10))
    assert not passes_thresholds(exact, MinerConfig(min_support=11))
    assert not passes_thresholds(exact, MinerConfig(min_support=1, max_support=9))
    weak = red_of(ds, 0, 9, 5, 14)
    assert not passes_thresholds(weak, MinerConfig(min_jaccard=0.5, min_support=1))
    big = red_of(ds, 0, 29, 0, 29)  # p = 1.0 at full support
    assert not passes_thresholds(big, MinerConfig(min_jaccard=0.0, max_pvalue=0.5,
                                                  min_support=1))
    # the support ceiling clamps to the universe
    assert passes_thresholds(exact, MinerConfig(min_jaccard=0.0, max_pvalue=1.0,
                                                min_support=1, max_support=4000))


# -- bounded store -------------------------------------------------------------------


def test_store_drops_below_threshold_inserts_silently():
    ds = arange_pair_ds(30)
    store = CandidateStore(MinerConfig(min_jaccard=0.8, max_pvalue=1.0,
                                       min_support=2))
    store.insert([red_of(ds, 0, 9, 5, 14),  # J = 1/3
                  red_of(ds, 0, 9, 0, 9)])
    assert len(store) == 1
    assert store.items[0].jaccard == 1.0


def test_store_dedups_identical_signatures():
    ds = arange_pair_ds(30)
    store = CandidateStore(LOOSE)
    red = red_of(ds, 0, 9, 0, 9)
    store.insert([red, red_of(ds, 0, 9, 0, 9)])
    assert len(store) == 1


def test_store_same_support_keeps_the_higher_jaccard():
    ds = arange_pair_ds(30)
    weaker = red_of(ds, 0, 5, 0, 7)   # intersection {0..5}, J = 6/8
    stronger = red_of(ds, 0, 5, 0, 5)  # same intersection, J = 1
    assert weaker.support.key() == stronger.support.key()

    store = CandidateStore(LOOSE)
    store.insert([weaker, stronger])
    assert [r.jaccard for r in store.items] == [1.0]
    store = CandidateStore(LOOSE)
    store.insert([stronger, weaker])
    assert [r.jaccard for r in store.items] == [1.0]


def test_store_same_support_mode_requires_new_attributes():
    ds = arange_pair_ds(30)
    weaker = red_of(ds, 0, 5, 0, 7)
    stronger = red_of(ds, 0, 5, 0, 5)
    cfg = MinerConfig(min_jaccard=0.0, max_pvalue=1.0, min_support=1,
                      allow_same_support=True, num_new_attr=1)
    store = CandidateStore(cfg)
    store.insert([weaker, stronger])  # same attribute pair: rejected
    assert len(store) == 1 and store.items[0].jaccard == weaker.jaccard
    zero = MinerConfig(min_jaccard=0.0, max_pvalue=1.0, min_support=1,
                       allow_same_support=True, num_new_attr=0)
    store = CandidateStore(zero)
    store.insert([weaker, stronger])
    assert len(store) == 2


def test_store_compaction_matches_the_full_sort():
    n = 40
    ds = arange_pair_ds(n)
    cfg = MinerConfig(min_jaccard=0.0, max_pvalue=1.0, min_support=1,
                      max_support=n, working_size=10, max_size=25)
    feed = []
    for lo in range(0, n, 2):
        for width in (3, 5, 9, 15):
            if lo + width < n:
                feed.append(red_of(ds, lo, lo + width, lo, lo + width + 2))

    store = CandidateStore(cfg)
    store.insert(feed)

    # replay: append with signature dedup, full sort on overflow
    items: list = []
    for red in feed:
        if not passes_thresholds(red, cfg):
            continue
        if any(r.support.key() == red.support.key() for r in items):
            keyed = [i for i, r in enumerate(items)
                     if r.support.key() == red.support.key()]
            if red.signature() == items[keyed[0]].signature():
                continue
            if red.jaccard > items[keyed[0]].jaccard:
                items[keyed[0]] = red
            continue
        items.append(red)
        if len(items) > cfg.max_size:
            scores = [candidate_score(r, cfg) for r in items]
            ranked = sorted(range(len(items)), key=lambda i: (-scores[i], i))
            items = [items[i] for i in sorted(ranked[: cfg.working_size])]

    assert [r.signature() for r in store.items] == [r.signature() for r in items]
    assert len(store) <= cfg.max_size


def test_store_never_holds_a_failing_item(rng):
    ds = arange_pair_ds(50)
    cfg = MinerConfig(min_jaccard=0.4, max_pvalue=0.9, min_support=3,
                      max_support=30, working_size=5, max_size=12)
    store = CandidateStore(cfg)
    for _ in range(300):
        lo_a = int(rng.integers(0, 40))
        lo_b = int(rng.integers(max(0, lo_a - 5), lo_a + 5))
        store.insert([red_of(ds, lo_a, lo_a + int(rng.integers(2, 12)),
                             lo_b, lo_b + int(rng.integers(2, 12)))])
        assert len(store) <= cfg.max_size
    assert all(passes_thresholds(r, cfg) for r in store.items)


# -- pairing ---------------------------------------------------------------------------


def test_create_reds_rejects_overlapping_views():
    ds = arange_pair_ds(10)
    with pytest.raises(SameView):
        create_reds([interval(0, "a0", 0, 5)], [interval(0, "a0", 2, 7)], LOOSE, ds)


def test_create_reds_exhaustive_pairing_oracle(rng):
    n = 36
    ds = arange_pair_ds(n)
    cfg = MinerConfig(min_jaccard=0.35, max_pvalue=0.6, min_support=2,
                      max_support=30, allow_same_support=True, num_new_attr=0)
    rules_a, rules_b = [], []
    for _ in range(5):
        lo = int(rng.integers(0, 28))
        rules_a.append(interval(0, "a0", lo, lo + int(rng.integers(2, 10))))
        lo = int(rng.integers(0, 28))
        rules_b.append(interval(1, "b0", lo, lo + int(rng.integers(2, 10))))

    got = create_reds(rules_a, rules_b, cfg, ds)

    want = []
    seen = set()
    for qa in rules_a:
        for qb in rules_b:
            sa = set(evaluate(qa, ds).indices().tolist())
            sb = set(evaluate(qb, ds).indices().tolist())
            inter, union = sa & sb, sa | sb
            j = len(inter) / len(union)
            if j < cfg.min_jaccard or not (cfg.min_support <= len(inter) <= 30):
                continue
            if p_value(len(inter), n, [len(sa) / n, len(sb) / n]) > cfg.max_pvalue:
                continue
            sig = (qa.serialize(), qb.serialize())
            if sig in seen:
                continue
            seen.add(sig)
            want.append((j, frozenset(inter)))
    assert [(r.jaccard, frozenset(r.support.indices().tolist())) for r in got] == want


def test_create_reds_guidance_restricts_to_same_class():
    ds = arange_pair_ds(20)
    rules_a = [interval(0, "a0", 0, 9), interval(0, "a0", 10, 19)]
    rules_b = [interval(1, "b0", 0, 9), interval(1, "b0", 10, 19)]
    guided_cfg = MinerConfig(min_jaccard=0.5, max_pvalue=1.0, min_support=1,
                             unguided_expansion=False)
    guided = create_reds(rules_a, rules_b, guided_cfg, ds,
                         classes_a=[0, 1], classes_b=[1, 0])
    assert guided == []  # crossed classes: the matching pairs are disallowed
    aligned = create_reds(rules_a, rules_b, guided_cfg, ds,
                          classes_a=[0, 1], classes_b=[0, 1])
    assert len(aligned) == 2
    # unguided expansion ignores the class lists
    free = create_reds(rules_a, rules_b,
                       MinerConfig(min_jaccard=0.5, max_pvalue=1.0, min_support=1),
                       ds, classes_a=[0, 1], classes_b=[1, 0])
    assert len(free) == 2
    # a negative class never matches even itself
    neg = create_reds(rules_a, rules_b, guided_cfg, ds,
                      classes_a=[-1, 1], classes_b=[-1, 1])
    assert len(neg) == 1


def test_create_reds_shape_gates():
    ds = arange_pair_ds(20)
    disj = Query(0, Or((Literal(0, "a0", 0.0, 4.0), Literal(0, "a0", 8.0, 12.0))))
    plain_b = interval(1, "b0", 0, 12)
    strict = MinerConfig(min_jaccard=0.1, max_pvalue=1.0, min_support=1,
                         allow_left_disj=False)
    assert create_reds([disj], [plain_b], strict, ds) == []
    loose = MinerConfig(min_jaccard=0.1, max_pvalue=1.0, min_support=1)
    assert len(create_reds([disj], [plain_b], loose, ds)) == 1


# -- refinement -------------------------------------------------------------------------


def _binned_fixture(rng, n=60):
    a = rng.uniform(0.0, 1.0, size=n)
    b = a + rng.normal(0.0, 0.03, size=n)
    ds = two_view_ds(a.reshape(-1, 1), b.reshape(-1, 1))
    spec = perform_binning(ds, (0, "a0"), 5)
    return ds, spec


def test_refine_with_bins_never_lowers_jaccard_and_stops_at_a_fixpoint(rng):
    from redescribe.binning import bins_to_rules

    for _ in range(10):
        ds, spec = _binned_fixture(rng)
        if spec.n_bins < 3:
            continue
        rules = bins_to_rules(spec)
        cfg = MinerConfig(min_jaccard=0.0, max_pvalue=1.0, min_support=1,
                          max_support=60)
        base = make_redescription(
            {0: rules[0], 1: interval(1, "b0", 0.0, 0.6)}, ds)
        out = refine_with_bins(base, spec, cfg, ds)
        assert out.jaccard >= base.jaccard
        # no remaining bin improves the result any further
        hq = out.query(0)
        present = {(l.low, l.high) for l in
                   ([hq.root] if isinstance(hq.root, Literal) else hq.root.children)}
        partner = evaluate(out.query(1), ds)
        home = evaluate(hq, ds)
        for rule in rules:
            if (rule.root.low, rule.root.high) in present:
                continue
            hs = home | evaluate(rule, ds)
            inter = hs & partner
            union = hs | partner
            j = inter.count / union.count
            assert j <= out.jaccard + 1e-15


def test_refine_with_bins_respects_gates(rng):
    ds, spec = _binned_fixture(rng)
    from redescribe.binning import bins_to_rules
    rules = bins_to_rules(spec)
    base = make_redescription({0: rules[0], 1: interval(1, "b0", 0.0, 0.6)}, ds)
    no_disj = MinerConfig(min_jaccard=0.0, max_pvalue=1.0, min_support=1,
                          allow_left_disj=False)
    assert refine_with_bins(base, spec, no_disj, ds) is base
    # a support ceiling at the current size forbids any growth
    tight = MinerConfig(min_jaccard=0.0, max_pvalue=1.0, min_support=1,
                        max_support=int(base.support.count))
    capped = refine_with_bins(base, spec, tight, ds)
    assert capped.support.count <= base.support.count or capped is base


def test_refine_with_bins_reverts_when_p_escapes(rng):
    ds, spec = _binned_fixture(rng)
    from redescribe.binning import bins_to_rules
    rules = bins_to_rules(spec)
    base = make_redescription({0: rules[0], 1: interval(1, "b0", -1.0, 2.0)}, ds)
    cfg = MinerConfig(min_jaccard=0.0, max_pvalue=base.pvalue, min_support=1,
                      max_support=60)
    out = refine_with_bins(base, spec, cfg, ds)
    assert out.pvalue <= cfg.max_pvalue


# -- completion ------------------------------------------------------------------------


def three_view_ds(n):
    vals = np.arange(n, dtype=np.float64).reshape(-1, 1)
    from redescribe.dataset import AttributeColumn, View, assemble_dataset
    views = [View(name, [AttributeColumn(f"{p}0", "numeric", vals[:, 0])])
             for name, p in (("viewA", "a"), ("viewB", "b"), ("viewC", "c"))]
    return assemble_dataset(views)


def test_complete_reds_argmax_oracle(rng):
    n = 30
    ds = three_view_ds(n)
    cfg = MinerConfig(min_jaccard=0.3, max_pvalue=1.0, min_support=2,
                      max_support=25)
    incomplete = []
    for _ in range(10):
        lo = int(rng.integers(0, 20))
        incomplete.append(make_redescription(
            {0: interval(0, "a0", lo, lo + int(rng.integers(3, 9))),
             1: interval(1, "b0", lo, lo + int(rng.integers(3, 9)))}, ds))
    rules = []
    for _ in range(8):
        lo = int(rng.integers(0, 20))
        rules.append(interval(2, "c0", lo, lo + int(rng.integers(3, 9))))

    got = complete_reds(incomplete, 2, rules, cfg, ds)

    want = []
    for red in incomplete:
        rs = set(red.support.indices().tolist())
        best, best_j = None, -1.0
        for k, rule in enumerate(rules):
            ss = set(evaluate(rule, ds).indices().tolist())
            j = len(rs & ss) / len(rs | ss) if rs | ss else 0.0
            if j > best_j:
                best, best_j = k, j
        new_inter = rs & set(evaluate(rules[best], ds).indices().tolist())
        marg = red.marginal_counts + (evaluate(rules[best], ds).count,)
        union = set(red.union.indices().tolist()) \
            | set(evaluate(rules[best], ds).indices().tolist())
        j_full = len(new_inter) / len(union)
        if j_full >= cfg.min_jaccard and cfg.min_support <= len(new_inter) <= 25:
            want.append((frozenset(new_inter), j_full, marg))

    assert [(frozenset(r.support.indices().tolist()), r.jaccard,
             r.marginal_counts) for r in got] == want
    for r in got:
        assert len(r.queries) == 3 and r.query(2) is not None


def test_complete_reds_guards():
    ds = three_view_ds(10)
    base = make_redescription({0: interval(0, "a0", 0, 5),
                               1: interval(1, "b0", 0, 5)}, ds)
    with pytest.raises(ViewAlreadyPresent):
        complete_reds([base], 1, [interval(1, "b0", 0, 3)], LOOSE, ds)
    assert complete_reds([], 2, [interval(2, "c0", 0, 3)], LOOSE, ds) == []
    assert complete_reds([base], 2, [], LOOSE, ds) == []
    exact = complete_reds([base], 2, [interval(2, "c0", 0, 5)], LOOSE, ds)
    assert len(exact) == 1 and exact[0].jaccard == base.jaccard


# -- conjunctive refinement --------------------------------------------------------------


def test_conjunctive_refine_oracle(rng):
    n = 40
    ds = arange_pair_ds(n)
    cfg = MinerConfig(min_jaccard=0.2, max_pvalue=1.0, min_support=2,
                      max_support=n, min_add_red_js=0.3,
                      allow_same_support=True, num_new_attr=0)
    parents = []
    for _ in range(6):
        lo_a = int(rng.integers(0, 25))
        lo_b = int(rng.integers(max(0, lo_a - 4), lo_a + 4))
        parents.append(red_of(ds, lo_a, lo_a + int(rng.integers(6, 14)),
                              lo_b, lo_b + int(rng.integers(6, 14))))

    store = CandidateStore(cfg)
    store.insert(parents)
    before = [r.signature() for r in store.items]

    # replay the pairwise joins over the admitted items
    items = store.items
    cands = [r for r in items if r.jaccard >= cfg.min_add_red_js]
    joined = []
    from redescribe.queries import conjoin
    for i in range(len(cands)):
        for j in range(i + 1, len(cands)):
            both = cands[i].support & cands[j].support
            if both.count < cfg.min_support:
                continue
            qs, failed = {}, False
            for v in sorted(set(cands[i].views) | set(cands[j].views)):
                q1, q2 = cands[i].query(v), cands[j].query(v)
                if q1 is None or q2 is None:
                    qs[v] = q1 or q2
                    continue
                out = conjoin(q1, q2)
                if out is None:
                    failed = True
                    break
                qs[v] = out
            if failed:
                continue
            red = make_redescription(qs, ds)
            if red.jaccard > cands[i].jaccard and red.jaccard > cands[j].jaccard:
                joined.append(red)

    mirror = CandidateStore(cfg)
    mirror.insert(parents)
    mirror.insert(joined)
    conjunctive_refine(store, cfg, ds)
    assert [r.signature() for r in store.items] == [r.signature() for r in mirror.items]
    for r in store.items:
        if r.signature() not in before:
            assert passes_thresholds(r, cfg)


def test_conjunctive_refine_needs_two_eligible_parents():
    ds = arange_pair_ds(20)
    cfg = MinerConfig(min_jaccard=0.0, max_pvalue=1.0, min_support=1,
                      min_add_red_js=0.9)
    store = CandidateStore(cfg)
    store.insert([red_of(ds, 0, 9, 0, 12), red_of(ds, 10, 19, 8, 19)])
    sigs = [r.signature() for r in store.items]
    conjunctive_refine(store, cfg, ds)  # every parent sits below the bar
    assert [r.signature() for r in store.items] == sigs


def test_conjunctive_refine_keeps_only_double_improvements():
    ds = arange_pair_ds(30)
    cfg = MinerConfig(min_jaccard=0.1, max_pvalue=1.0, min_support=2,
                      min_add_red_js=0.1)
    # overlapping weak parents whose conjunction is exact on both views
    p1 = red_of(ds, 0, 14, 0, 9)
    p2 = red_of(ds, 5, 19, 10, 19)
    store = CandidateStore(cfg)
    store.insert([p1, p2])
    conjunctive_refine(store, cfg, ds)
    for r in store.items:
        if r.signature() not in {p1.signature(), p2.signature()}:
            assert r.jaccard > p1.jaccard and r.jaccard > p2.jaccard


# -- final extraction ---------------------------------------------------------------------


def test_extract_final_small_store_returns_everything_by_score():
    ds = arange_pair_ds(40)
    cfg = MinerConfig(min_jaccard=0.0, max_pvalue=1.0, min_support=1,
                      max_support=40, num_ret_red=10)
    reds = [red_of(ds, 0, 9, 0, 11),    # J = 10/12
            red_of(ds, 12, 21, 12, 21),  # J = 1.0
            red_of(ds, 24, 33, 24, 35)]  # J = 10/12 on disjoint entities
    store = CandidateStore(cfg)
    store.insert(reds)
    with pytest.warns(InsufficientCandidates):
        final = extract_final(store, cfg)
    assert {r.signature() for r in final} == {r.signature() for r in reds}
    assert final[0].jaccard == 1.0  # the best item leads


def test_extract_final_greedy_replay(rng):
    n = 60
    ds = arange_pair_ds(n)
    cfg = MinerConfig(min_jaccard=0.1, max_pvalue=1.0, min_support=2,
                      max_support=n, num_ret_red=8,
                      preference_weights=(0.2, 0.15, 0.15, 0.15, 0.15, 0.2))
    feed = []
    for _ in range(50):
        lo_a = int(rng.integers(0, 45))
        lo_b = int(rng.integers(max(0, lo_a - 4), lo_a + 4))
        feed.append(red_of(ds, lo_a, lo_a + int(rng.integers(4, 12)),
                           lo_b, lo_b + int(rng.integers(4, 12))))
    store = CandidateStore(cfg)
    store.insert(feed)
    final = extract_final(store, cfg)

    items = store.items
    w = cfg.preference_weights
    jac = [r.jaccard for r in items]
    nlp = [min(-math.log10(r.pvalue), LOGP_CAP) / LOGP_CAP if r.pvalue > 1e-300
           else 1.0 for r in items]
    size = [min(r.n_literals / cfg.rule_size_norm, 1.0) for r in items]
    masks = [r.support.mask for r in items]
    counts = [r.support.count for r in items]
    active = set(range(len(items)))
    covered = np.zeros(n, dtype=bool)
    max_sim = [0.0] * len(items)
    seen: set = set()
    order = []
    while active and len(order) < cfg.num_ret_red:
        best, best_score = None, None
        for i in sorted(active):
            att = items[i].attr_set
            attdiv = len(att - seen) / len(att) if att else 0.0
            covgain = int((masks[i] & ~covered).sum()) / n
            s = (w[0] * jac[i] + w[1] * nlp[i] + w[2] * attdiv
                 + w[3] * (1.0 - max_sim[i]) + w[4] * covgain - w[5] * size[i])
            if best_score is None or s > best_score:
                best, best_score = i, s
        order.append(best)
        active.remove(best)
        covered |= masks[best]
        seen |= set(items[best].attr_set)
        for i in range(len(items)):
            inter = int((masks[i] & masks[best]).sum())
            union = counts[i] + counts[best] - inter
            sim = inter / union if union else 0.0
            max_sim[i] = max(max_sim[i], sim)

    assert [r.signature() for r in final] == [items[i].signature() for i in order]


def test_extract_final_empty_store_warns_and_returns_nothing():
    store = CandidateStore(LOOSE)
    with pytest.warns(InsufficientCandidates):
        assert extract_final(store, MinerConfig(num_ret_red=5)) == []


# -- whole-redescription minimization --------------------------------------------------


def test_minimize_redescription_strips_redundant_literals():
    ds = arange_pair_ds(30)
    from redescribe.queries import And
    redundant = Query(0, And((Literal(0, "a0", 0.0, 20.0),
                              Literal(0, "a0", 2.0, 9.0))))
    red = make_redescription({0: redundant, 1: interval(1, "b0", 2, 9)}, ds)
    cfg = MinerConfig(min_jaccard=0.5, max_pvalue=1.0, min_support=2,
                      max_support=30)
    slim = minimize_redescription(red, ds, cfg)
    assert slim.jaccard >= red.jaccard
    assert slim.n_literals < red.n_literals
    assert slim.support.key() == red.support.key()


def test_minimize_redescription_reverts_on_threshold_failure():
    ds = arange_pair_ds(30)
    from redescribe.queries import And
    narrow = Query(0, And((Literal(0, "a0", 0.0, 29.0),
                           Literal(0, "a0", 0.0, 9.0))))
    red = make_redescription({0: narrow, 1: interval(1, "b0", 0, 29)}, ds)
    cfg = MinerConfig(min_jaccard=0.0, max_pvalue=1.0, min_support=1,
                      max_support=10)
    # dropping the second literal would push the support past the cap
    out = minimize_redescription(red, ds, cfg)
    assert out.support.count <= 10
