"""Quality measures: Jaccard, binomial tail p-value, precision, entropy,
rank statistics and the surrogate fidelity score.

The p-value treats per-view marginal support fractions as independent
Bernoulli probabilities and sums the upper binomial tail.  It is computed in
log space from a cumulative log-factorial table with a stable suffix
accumulation, then clamped to [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .dataset import MultiViewDataset, TargetColumn
from .errors import (
    DegenerateVariance,
    EmptySupport,
    LengthMismatch,
    MeasureError,
    UniverseMismatch,
)
from .queries import Query, SupportSet, evaluate

# -- Jaccard ---------------------------------------------------------------------


def jaccard(supports: Sequence[SupportSet]) -> float:
    """|intersection| / |union| over any number of supports; 0 on empty union."""
    if not supports:
        raise MeasureError("jaccard of zero supports")
    universe = supports[0].universe
    inter = supports[0].mask.copy()
    union = supports[0].mask.copy()
    for s in supports[1:]:
        if s.universe != universe:
            raise UniverseMismatch(f"supports over {universe} vs {s.universe} entities")
        inter &= s.mask
        union |= s.mask
    u = int(np.count_nonzero(union))
    return int(np.count_nonzero(inter)) / u if u else 0.0


def jaccard_pair(a: SupportSet, b: SupportSet) -> float:
    return jaccard([a, b])


# -- binomial tail p-value ---------------------------------------------------------

_LOGFACT = np.zeros(2)  # log(0!), log(1!)


def _logfact(n: int) -> np.ndarray:
    global _LOGFACT
    if _LOGFACT.shape[0] <= n:
        start = _LOGFACT.shape[0]
        ext = np.log(np.arange(start, n + 1, dtype=np.float64))
        _LOGFACT = np.concatenate([_LOGFACT, _LOGFACT[-1] + np.cumsum(ext)])
    return _LOGFACT


def _product_probability(marginals: Sequence[float]) -> float:
    pi = 1.0
    for m in marginals:
        m = float(m)
        if not (0.0 <= m <= 1.0) or not np.isfinite(m):
            raise MeasureError(f"marginal probability {m} outside [0, 1]")
        pi *= m
    return pi


def p_value_curve(universe: int, marginals: Sequence[float]) -> np.ndarray:
    """Upper-tail p-values for every support size 0..universe at once."""
    if universe < 0:
        raise MeasureError("negative universe")
    pi = _product_probability(marginals)
    n = universe
    if n == 0:
        return np.ones(1)
    if pi <= 0.0:
        out = np.zeros(n + 1)
        out[0] = 1.0
        return out
    if pi >= 1.0:
        return np.ones(n + 1)
    k = np.arange(n + 1, dtype=np.float64)
    lf = _logfact(n)
    log_pmf = (lf[n] - lf[: n + 1] - lf[n::-1]) + k * math.log(pi) + (n - k) * math.log1p(-pi)
    # suffix log-sum-exp: tail(s) = sum_{k>=s} pmf(k)
    suffix = np.logaddexp.accumulate(log_pmf[::-1])[::-1]
    out = np.exp(suffix)
    np.clip(out, 0.0, 1.0, out=out)
    out[0] = 1.0
    return out


def p_value(support_size: int, universe: int, marginals: Sequence[float]) -> float:
    """P[X >= support_size] for X ~ Binomial(universe, prod(marginals))."""
    if support_size <= 0:
        return 1.0
    if support_size > universe:
        return 0.0
    return float(p_value_curve(universe, marginals)[support_size])


# -- precision / entropy -----------------------------------------------------------


def _codes(predictions) -> np.ndarray:
    if isinstance(predictions, TargetColumn):
        return predictions.codes
    return np.asarray(predictions, dtype=np.int64)


def precision(support: SupportSet, predictions, class_index: int) -> float:
    """Fraction of supported entities the model maps to class_index."""
    if support.count == 0:
        raise EmptySupport("precision of an empty support")
    codes = _codes(predictions)
    if codes.shape[0] != support.universe:
        raise UniverseMismatch("predictions and support cover different entity counts")
    return float(np.mean(codes[support.indices()] == class_index))


def shannon_entropy(labels) -> float:
    """Entropy in bits of the empirical label distribution."""
    arr = _codes(labels)
    if arr.size == 0:
        raise EmptySupport("entropy of an empty label set")
    _, counts = np.unique(arr, return_counts=True)
    p = counts / arr.size
    return float(-np.sum(p * np.log2(p)))


# -- rank statistics ----------------------------------------------------------------


def midranks(x) -> np.ndarray:
    """1-based ranks with ties replaced by the mean rank of their run."""
    x = np.asarray(x, dtype=np.float64)
    order = np.argsort(x, kind="mergesort")
    sx = x[order]
    bounds = np.flatnonzero(np.r_[True, sx[1:] != sx[:-1], True])
    ranks = np.empty(x.size, dtype=np.float64)
    for s, e in zip(bounds[:-1], bounds[1:]):
        ranks[order[s:e]] = 0.5 * (s + 1 + e)
    return ranks

_EXACT_LIMIT = 12  # combined size at or below which the exact null is enumerated


def mann_whitney_u(a, b) -> tuple[float, float]:
    """Two-sided Mann-Whitney test; returns (U of the first sample, p).

    The exact null distribution is enumerated when n_a + n_b <= 12 and the
    pooled sample is tie-free; otherwise a tie-corrected normal approximation
    with a 0.5 continuity correction is used.  Zero variance (e.g. both
    samples constant and equal) gives p = 1.0.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    na, nb = a.size, b.size
    if na == 0 or nb == 0:
        raise EmptySupport("Mann-Whitney needs two non-empty samples")
    pooled = np.concatenate([a, b])
    ranks = midranks(pooled)
    u1 = float(ranks[:na].sum() - na * (na + 1) / 2.0)
    has_ties = np.unique(pooled).size < pooled.size

    if not has_ties and na + nb <= _EXACT_LIMIT:
        return u1, _exact_two_sided(u1, na, nb)

    mu = na * nb / 2.0
    n = na + nb
    _, counts = np.unique(pooled, return_counts=True)
    tie_term = float(np.sum(counts.astype(np.float64) ** 3 - counts))
    sigma2 = na * nb / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
    if sigma2 <= 0.0:
        return u1, 1.0
    z = max(abs(u1 - mu) - 0.5, 0.0) / math.sqrt(sigma2)
    return u1, min(1.0, math.erfc(z / math.sqrt(2.0)))


def _exact_two_sided(u1: float, na: int, nb: int) -> float:
    total = na + nb
    max_u = na * nb
    counts = np.zeros(max_u + 1, dtype=np.int64)
    base = na * (na + 1) // 2
    for comb in combinations(range(1, total + 1), na):
        counts[sum(comb) - base] += 1
    total_count = counts.sum()
    u_low = min(u1, max_u - u1)
    p = 2.0 * counts[: int(u_low) + 1].sum() / total_count
    return min(1.0, p)


def spearman(x, y) -> float:
    """Spearman rank correlation: Pearson correlation of midranks."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.size != y.size:
        raise LengthMismatch(f"samples of size {x.size} and {y.size}")
    if x.size < 2:
        raise DegenerateVariance("need at least two observations")
    rx, ry = midranks(x), midranks(y)
    if np.all(rx == rx[0]) or np.all(ry == ry[0]):
        raise DegenerateVariance("constant sample has no rank variance")
    rx -= rx.mean()
    ry -= ry.mean()
    return float(np.dot(rx, ry) / math.sqrt(np.dot(rx, rx) * np.dot(ry, ry)))


# -- surrogate fidelity ----------------------------------------------------------------


@dataclass(frozen=True)
class SurrogateItem:
    """One selected explanation item as the fidelity surrogate sees it."""

    class_index: int
    queries: tuple[Query, ...]
    score: float
    precision: float
    support_size: int
    order: int


def fidelity(selected: Sequence[SurrogateItem], ds: MultiViewDataset,
             model_predictions, default_class: int | None = None) -> float:
    """Agreement between the model and the selected-item surrogate.

    Each entity takes the class of the highest-scoring covering item (ties:
    higher precision, smaller stored support, selection order); entities no
    item covers take default_class, or count as mismatches when it is None
    (so an empty selection scores 0.0).
    """
    codes = _codes(model_predictions)
    n = ds.n_entities
    if codes.shape[0] != n:
        raise UniverseMismatch("predictions do not match the dataset")
    if n == 0:
        raise EmptySupport("fidelity over an empty dataset")
    # -1 never equals a class code, so uncovered rows score as disagreement
    fill = -1 if default_class is None else int(default_class)
    out = np.full(n, fill, dtype=np.int64)
    unclaimed = np.ones(n, dtype=bool)
    ordered = sorted(
        selected,
        key=lambda it: (-it.score, -it.precision, it.support_size, it.order),
    )
    for item in ordered:
        mask = np.ones(n, dtype=bool)
        for q in item.queries:
            mask &= evaluate(q, ds).mask
        grab = mask & unclaimed
        out[grab] = item.class_index
        unclaimed &= ~grab
    return float(np.mean(out == codes))
