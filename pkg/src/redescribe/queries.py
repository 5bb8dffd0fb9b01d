"""Interval query language over multi-view datasets.

A query is a tree of closed-interval literals ``low <= attr <= high``
combined with AND / OR / NOT.  Nesting depth is capped at 3 (NOT is
transparent for depth and may wrap a literal or a conjunction only).
Children of AND/OR are kept in a canonical order, so serialization and the
greedy literal-removal pass are deterministic.

Text form, also produced by serialize():

    0.98 <= n23 <= 1.41 AND NOT(0.0 <= n8 <= 0.09)
    (0.1 <= a <= 0.2 AND 0.3 <= b <= 0.4) OR 0.5 <= a <= 0.9
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

import numpy as np

from .dataset import MultiViewDataset
from .errors import QueryDepthExceeded, QueryError, QueryParseError, UnknownAttribute

MAX_DEPTH = 3


class SupportSet:
    """Immutable bitset over the entity axis with a cached cardinality."""

    __slots__ = ("_mask", "_count", "_key")

    def __init__(self, mask: np.ndarray):
        m = np.array(mask, dtype=bool)
        m.setflags(write=False)
        self._mask = m
        self._count: int | None = None
        self._key: bytes | None = None

    @classmethod
    def from_indices(cls, indices, universe: int) -> "SupportSet":
        m = np.zeros(universe, dtype=bool)
        m[np.asarray(indices, dtype=np.int64)] = True
        return cls(m)

    @property
    def mask(self) -> np.ndarray:
        return self._mask

    @property
    def universe(self) -> int:
        return self._mask.shape[0]

    @property
    def count(self) -> int:
        if self._count is None:
            self._count = int(np.count_nonzero(self._mask))
        return self._count

    def key(self) -> bytes:
        """Stable bytes identity; equal masks give equal keys."""
        if self._key is None:
            self._key = self.universe.to_bytes(4, "big") + np.packbits(self._mask).tobytes()
        return self._key

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self._mask)

    def __and__(self, other: "SupportSet") -> "SupportSet":
        return SupportSet(self._mask & other._mask)

    def __or__(self, other: "SupportSet") -> "SupportSet":
        return SupportSet(self._mask | other._mask)

    def __invert__(self) -> "SupportSet":
        return SupportSet(~self._mask)

    def __eq__(self, other):
        return isinstance(other, SupportSet) and np.array_equal(self._mask, other._mask)

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"SupportSet({self.count}/{self.universe})"


# -- expression nodes ----------------------------------------------------------


@dataclass(frozen=True)
class Literal:
    view: int
    attr: str
    low: float
    high: float

    def __post_init__(self):
        if not self.attr:
            raise QueryError("literal needs an attribute name")
        low, high = float(self.low), float(self.high)
        if not (np.isfinite(low) and np.isfinite(high)):
            raise QueryError(f"non-finite interval bound on {self.attr!r}")
        if low > high:
            raise QueryError(f"empty interval [{low}, {high}] on {self.attr!r}")
        object.__setattr__(self, "low", low)
        object.__setattr__(self, "high", high)


@dataclass(frozen=True)
class Not:
    child: "Expr"

    def __post_init__(self):
        if not isinstance(self.child, (Literal, And)):
            raise QueryError("NOT may wrap a literal or a conjunction only")


@dataclass(frozen=True)
class And:
    children: tuple["Expr", ...]

    def __post_init__(self):
        object.__setattr__(self, "children", _canonical_children(self.children, And))
        if len(self.children) < 2:
            raise QueryError("AND needs at least two children")


@dataclass(frozen=True)
class Or:
    children: tuple["Expr", ...]

    def __post_init__(self):
        object.__setattr__(self, "children", _canonical_children(self.children, Or))
        if len(self.children) < 2:
            raise QueryError("OR needs at least two children")


Expr = Union[Literal, Not, And, Or]


def _sort_key(e: Expr):
    if isinstance(e, Literal):
        return (0, e.attr, e.low, e.high, "")
    if isinstance(e, Not) and isinstance(e.child, Literal):
        c = e.child
        return (1, c.attr, c.low, c.high, "")
    rank = {And: 2, Not: 3, Or: 4}[type(e)]
    return (rank, "", 0.0, 0.0, serialize_expr(e))


def _canonical_children(children, op) -> tuple[Expr, ...]:
    flat: list[Expr] = []
    for c in children:
        if isinstance(c, op):
            flat.extend(c.children)  # associativity: A op (B op C) == A op B op C
        else:
            flat.append(c)
    return tuple(sorted(flat, key=_sort_key))


def and_of(children) -> Expr:
    return _join(children, And)


def or_of(children) -> Expr:
    return _join(children, Or)


def _join(children, op) -> Expr:
    flat: list[Expr] = []
    for c in children:
        flat.extend(c.children if isinstance(c, op) else (c,))
    seen, uniq = set(), []
    for c in sorted(flat, key=_sort_key):
        k = serialize_expr(c)
        if k not in seen:
            seen.add(k)
            uniq.append(c)
    if not uniq:
        raise QueryError("empty operator")
    if len(uniq) == 1:
        return uniq[0]
    return op(tuple(uniq))


def expr_depth(e: Expr) -> int:
    if isinstance(e, Literal):
        return 1
    if isinstance(e, Not):  # transparent: negation does not add nesting
        return expr_depth(e.child)
    return 1 + max(expr_depth(c) for c in e.children)


def iter_literals(e: Expr) -> Iterator[Literal]:
    """Literals in serialization (canonical left-to-right) order."""
    if isinstance(e, Literal):
        yield e
    elif isinstance(e, Not):
        yield from iter_literals(e.child)
    else:
        for c in e.children:
            yield from iter_literals(c)


def literal_count(e: Expr) -> int:
    return sum(1 for _ in iter_literals(e))


@dataclass(frozen=True)
class Query:
    """An expression bound to one view; all literals must live on that view."""

    view: int
    root: Expr

    def __post_init__(self):
        d = expr_depth(self.root)
        if d > MAX_DEPTH:
            raise QueryDepthExceeded(f"depth {d} exceeds the cap of {MAX_DEPTH}")
        for lit in iter_literals(self.root):
            if lit.view != self.view:
                raise QueryError(
                    f"literal on view {lit.view} inside a query bound to view {self.view}"
                )

    def serialize(self) -> str:
        return serialize_expr(self.root)

    @property
    def n_literals(self) -> int:
        return literal_count(self.root)


def attrs(q: Query) -> set[tuple[int, str]]:
    return {(lit.view, lit.attr) for lit in iter_literals(q.root)}


# -- evaluation ------------------------------------------------------------------


def evaluate(q: Query, ds: MultiViewDataset) -> SupportSet:
    return SupportSet(_eval_expr(q.root, ds))


def _eval_expr(e: Expr, ds: MultiViewDataset) -> np.ndarray:
    if isinstance(e, Literal):
        if e.view >= len(ds.views):
            raise UnknownAttribute(e.view, e.attr)
        try:
            col = ds.views[e.view].column(e.attr)
        except KeyError:
            raise UnknownAttribute(e.view, e.attr) from None
        if col.kind != "numeric":
            raise QueryError(f"attribute {e.attr!r} is nominal and cannot be queried")
        return (col.values >= e.low) & (col.values <= e.high)
    if isinstance(e, Not):
        return ~_eval_expr(e.child, ds)
    masks = [_eval_expr(c, ds) for c in e.children]
    out = masks[0].copy()
    if isinstance(e, And):
        for m in masks[1:]:
            out &= m
    else:
        for m in masks[1:]:
            out |= m
    return out


# -- text form -------------------------------------------------------------------


def serialize_expr(e: Expr) -> str:
    if isinstance(e, Literal):
        return f"{float(e.low)!r} <= {e.attr} <= {float(e.high)!r}"
    if isinstance(e, Not):
        return f"NOT({serialize_expr(e.child)})"
    if isinstance(e, And):
        parts = [
            f"({serialize_expr(c)})" if isinstance(c, Or) else serialize_expr(c)
            for c in e.children
        ]
        return " AND ".join(parts)
    parts = [
        f"({serialize_expr(c)})" if isinstance(c, And) else serialize_expr(c)
        for c in e.children
    ]
    return " OR ".join(parts)


def serialize_query(q: Query) -> str:
    return q.serialize()


def _tokenize(text: str) -> list[str]:
    padded = text.replace("(", " ( ").replace(")", " ) ").replace("<=", " <= ")
    return padded.split()


class _Parser:
    def __init__(self, tokens: list[str], view: int):
        self.toks = tokens
        self.pos = 0
        self.view = view

    def peek(self) -> str | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self) -> str:
        tok = self.peek()
        if tok is None:
            raise QueryParseError("unexpected end of query text")
        self.pos += 1
        return tok

    def expect(self, want: str):
        tok = self.next()
        if tok != want:
            raise QueryParseError(f"expected {want!r}, found {tok!r}")

    def parse_disj(self) -> Expr:
        parts = [self.parse_conj()]
        while self.peek() is not None and self.peek().upper() == "OR":
            self.next()
            parts.append(self.parse_conj())
        return or_of(parts) if len(parts) > 1 else parts[0]

    def parse_conj(self) -> Expr:
        parts = [self.parse_unit()]
        while self.peek() is not None and self.peek().upper() == "AND":
            self.next()
            parts.append(self.parse_unit())
        return and_of(parts) if len(parts) > 1 else parts[0]

    def parse_unit(self) -> Expr:
        tok = self.peek()
        if tok is None:
            raise QueryParseError("unexpected end of query text")
        if tok.upper() == "NOT":
            self.next()
            self.expect("(")
            inner = self.parse_conj()  # NOT wraps a conjunction or a literal
            self.expect(")")
            return Not(inner)
        if tok == "(":
            self.next()
            inner = self.parse_disj()
            self.expect(")")
            return inner
        return self.parse_literal()

    def parse_literal(self) -> Literal:
        low = self._number(self.next())
        self.expect("<=")
        name = self.next()
        if name in ("(", ")", "<="):
            raise QueryParseError(f"expected an attribute name, found {name!r}")
        self.expect("<=")
        high = self._number(self.next())
        return Literal(self.view, name, low, high)

    @staticmethod
    def _number(tok: str) -> float:
        try:
            return float(tok)
        except ValueError:
            raise QueryParseError(f"expected a number, found {tok!r}") from None


def parse_query(text: str, view: int) -> Query:
    p = _Parser(_tokenize(text), view)
    root = p.parse_disj()
    if p.peek() is not None:
        raise QueryParseError(f"trailing tokens starting at {p.peek()!r}")
    return Query(view, root)


# -- literal removal and greedy minimization ---------------------------------------


def remove_literal(e: Expr, index: int) -> Expr | None:
    """Drop the index-th literal (serialization order); None if nothing remains."""
    out, _ = _remove(e, index)
    return out


def _remove(e: Expr, index: int) -> tuple[Expr | None, int]:
    if isinstance(e, Literal):
        if index == 0:
            return None, -1
        return e, index - 1
    if isinstance(e, Not):
        child, index = _remove(e.child, index)
        if index == -1:
            if child is None:
                return None, -1
            # NOT survives only over literal/conjunction shapes
            if isinstance(child, (Literal, And)):
                return Not(child), -1
            return None, -1
        return e, index
    kept: list[Expr] = []
    removed = False
    for i, c in enumerate(e.children):
        if removed or index < 0:
            kept.append(c)
            continue
        new_c, index = _remove(c, index)
        if index == -1:
            removed = True
            if new_c is not None:
                kept.append(new_c)
        else:
            kept.append(c)
    if not removed:
        return e, index
    if not kept:
        return None, -1
    join = and_of if isinstance(e, And) else or_of
    return join(kept), -1


def _jacc(a: SupportSet, b: SupportSet) -> float:
    inter = int(np.count_nonzero(a.mask & b.mask))
    union = a.count + b.count - inter
    return inter / union if union else 0.0


def minimize(q: Query, ds: MultiViewDataset, partner_support: SupportSet,
             *, max_support: int | None = None) -> Query:
    """Greedy literal removal, left-to-right, repeated to a fixpoint.

    A removal is kept when the Jaccard against partner_support does not
    decrease (and, when given, the support stays under max_support).  The
    result always keeps at least one literal and its Jaccard never drops
    below the input's.
    """
    cur = q
    cur_j = _jacc(evaluate(cur, ds), partner_support)
    changed = True
    while changed:
        changed = False
        i = 0
        while i < cur.n_literals:
            if cur.n_literals == 1:
                break
            root = remove_literal(cur.root, i)
            if root is None:
                i += 1
                continue
            try:
                cand = Query(cur.view, root)
            except QueryError:
                i += 1
                continue
            supp = evaluate(cand, ds)
            j = _jacc(supp, partner_support)
            if j >= cur_j and (max_support is None or supp.count <= max_support):
                cur, cur_j = cand, j
                changed = True
            else:
                i += 1
    return cur


# -- conjunction algebra (used by the joining step) --------------------------------


def conjoin(q1: Query, q2: Query) -> Query | None:
    """Conjunction of two same-view queries, kept inside the depth-3 grammar.

    Same-attribute plain literals are intersected; an empty intersection or a
    shape that cannot be expressed within the grammar yields None.
    """
    if q1.view != q2.view:
        raise QueryError("conjoin needs queries on the same view")
    direct = _merge_conj_units(_units(q1.root) + _units(q2.root))
    if direct is not None and expr_depth(direct) <= MAX_DEPTH:
        return Query(q1.view, direct)
    # distribute disjunctions: (A or B) and C == (A and C) or (B and C)
    terms = []
    for t1 in _or_terms(q1.root):
        for t2 in _or_terms(q2.root):
            merged = _merge_conj_units(_units(t1) + _units(t2))
            if merged is None:
                continue
            terms.append(merged)
    if not terms:
        return None
    root = or_of(terms) if len(terms) > 1 else terms[0]
    if expr_depth(root) > MAX_DEPTH:
        return None
    try:
        return Query(q1.view, root)
    except QueryError:
        return None


def _or_terms(e: Expr) -> list[Expr]:
    return list(e.children) if isinstance(e, Or) else [e]


def _units(e: Expr) -> list[Expr]:
    return list(e.children) if isinstance(e, And) else [e]


def _merge_conj_units(units: list[Expr]) -> Expr | None:
    by_attr: dict[str, tuple[float, float]] = {}
    order: list[str] = []
    rest: list[Expr] = []
    view = None
    for u in units:
        if isinstance(u, Literal):
            view = u.view
            if u.attr in by_attr:
                lo, hi = by_attr[u.attr]
                lo, hi = max(lo, u.low), min(hi, u.high)
                if lo > hi:
                    return None  # contradictory intervals
                by_attr[u.attr] = (lo, hi)
            else:
                by_attr[u.attr] = (u.low, u.high)
                order.append(u.attr)
        else:
            rest.append(u)
    merged: list[Expr] = [
        Literal(view, a, by_attr[a][0], by_attr[a][1]) for a in order
    ] + rest
    if not merged:
        return None
    return and_of(merged)
