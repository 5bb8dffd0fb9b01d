"""Multi-view tabular dataset model and its ARFF subset.

A dataset is an ordered list of views over one shared entity axis plus
optional nominal target columns.  Views hold numeric columns; nominal
columns survive parsing (prediction files use them) but the miner refuses
them.  The ARFF subset understood here: ``@relation``, ``@attribute <name>
<numeric|{cat,...}>``, ``@data``, ``%`` comment lines, case-insensitive
keywords, UTF-8, LF or CRLF.  string/date/relational attributes and missing
values are rejected outright.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ArityMismatch,
    BadSampleSize,
    MalformedHeader,
    NonFiniteValue,
    RowCountMismatch,
    UnknownCategory,
)

# characters that would break the query grammar or the .reds file naming
_FORBIDDEN_IN_NAME = set(" \t,()<>=")


def _check_name(name: str) -> str:
    if not name or any(c in _FORBIDDEN_IN_NAME for c in name):
        raise MalformedHeader(f"attribute name {name!r} contains forbidden characters")
    return name


@dataclass
class AttributeColumn:
    """One named column: numeric values, or integer codes into categories."""

    name: str
    kind: str  # "numeric" | "nominal"
    values: np.ndarray  # float64 for numeric, int64 codes for nominal
    categories: tuple[str, ...] = ()
    _vmin: float | None = field(default=None, repr=False, compare=False)
    _vmax: float | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.kind == "numeric":
            self.values = np.asarray(self.values, dtype=np.float64)
            if self.values.size and not np.all(np.isfinite(self.values)):
                raise NonFiniteValue(f"attribute {self.name!r} holds non-finite values")
        elif self.kind == "nominal":
            self.values = np.asarray(self.values, dtype=np.int64)
        else:
            raise MalformedHeader(f"unsupported attribute kind {self.kind!r}")

    @property
    def vmin(self) -> float:
        if self._vmin is None:
            self._vmin = float(self.values.min())
        return self._vmin

    @property
    def vmax(self) -> float:
        if self._vmax is None:
            self._vmax = float(self.values.max())
        return self._vmax

    def __eq__(self, other):
        return (
            isinstance(other, AttributeColumn)
            and self.name == other.name
            and self.kind == other.kind
            and self.categories == other.categories
            and np.array_equal(self.values, other.values)
        )


@dataclass
class View:
    """One data table; column order is meaningful."""

    name: str
    attributes: list[AttributeColumn]

    def __post_init__(self):
        seen = set()
        for a in self.attributes:
            if a.name in seen:
                raise MalformedHeader(f"duplicate attribute {a.name!r} in view {self.name!r}")
            seen.add(a.name)
        sizes = {a.values.shape[0] for a in self.attributes}
        if len(sizes) > 1:
            raise RowCountMismatch(f"columns of view {self.name!r} differ in length")

    @property
    def n_rows(self) -> int:
        return self.attributes[0].values.shape[0] if self.attributes else 0

    @property
    def names(self) -> list[str]:
        return [a.name for a in self.attributes]

    def column(self, name: str) -> AttributeColumn:
        for a in self.attributes:
            if a.name == name:
                return a
        raise KeyError(name)

    def numeric_matrix(self) -> np.ndarray:
        """Stack the numeric columns as one (rows x columns) float matrix."""
        cols = [a.values for a in self.attributes if a.kind == "numeric"]
        return np.column_stack(cols) if cols else np.empty((self.n_rows, 0))

    def __eq__(self, other):
        return (
            isinstance(other, View)
            and self.name == other.name
            and self.attributes == other.attributes
        )


@dataclass
class TargetColumn:
    """Nominal labels over the entity axis (model predictions or ground truth)."""

    name: str
    classes: tuple[str, ...]
    codes: np.ndarray  # int64, values in range(len(classes))

    def __post_init__(self):
        self.codes = np.asarray(self.codes, dtype=np.int64)
        if self.codes.size and (self.codes.min() < 0 or self.codes.max() >= len(self.classes)):
            raise UnknownCategory(self.name, str(int(self.codes.max())))

    @property
    def n_rows(self) -> int:
        return self.codes.shape[0]

    def __eq__(self, other):
        return (
            isinstance(other, TargetColumn)
            and self.name == other.name
            and self.classes == other.classes
            and np.array_equal(self.codes, other.codes)
        )


@dataclass
class MultiViewDataset:
    views: list[View]
    targets: list[TargetColumn] = field(default_factory=list)
    entity_ids: np.ndarray | None = None  # defaults to 0..n-1

    def __post_init__(self):
        if self.entity_ids is None:
            self.entity_ids = np.arange(self.n_entities, dtype=np.int64)
        else:
            self.entity_ids = np.asarray(self.entity_ids, dtype=np.int64)

    @property
    def n_entities(self) -> int:
        return self.views[0].n_rows if self.views else 0

    def attribute(self, view: int, name: str) -> AttributeColumn:
        return self.views[view].column(name)

    def column_values(self, view: int, name: str) -> np.ndarray:
        return self.views[view].column(name).values

    def __eq__(self, other):
        return (
            isinstance(other, MultiViewDataset)
            and self.views == other.views
            and self.targets == other.targets
            and np.array_equal(self.entity_ids, other.entity_ids)
        )


# -- ARFF subset ---------------------------------------------------------------


def parse_arff(text: str) -> View:
    """Parse one ARFF document into a View (nominal columns kept as codes)."""
    relation = None
    decls: list[tuple[str, str, tuple[str, ...]]] = []
    rows: list[list[str]] = []
    in_data = False

    for raw in text.split("\n"):
        line = raw.rstrip("\r").strip()
        if not line or line.startswith("%"):
            continue
        if not in_data and line.lower().startswith("@relation"):
            if relation is not None:
                raise MalformedHeader("second @relation line")
            relation = line[len("@relation"):].strip().strip("'\"")
            if not relation:
                raise MalformedHeader("@relation without a name")
        elif not in_data and line.lower().startswith("@attribute"):
            decls.append(_parse_attribute_decl(line))
        elif not in_data and line.lower().startswith("@data"):
            if relation is None or not decls:
                raise MalformedHeader("@data before @relation/@attribute lines")
            in_data = True
        elif in_data:
            rows.append([tok.strip() for tok in line.split(",")])
        else:
            raise MalformedHeader(f"unexpected header line: {line[:60]!r}")

    if not in_data:
        raise MalformedHeader("missing @data section")

    columns = []
    for j, (name, kind, cats) in enumerate(decls):
        tokens = []
        for i, row in enumerate(rows):
            if len(row) != len(decls):
                raise ArityMismatch(
                    f"row {i + 1} has {len(row)} values, expected {len(decls)}"
                )
            tokens.append(row[j])
        if kind == "numeric":
            vals = np.empty(len(tokens), dtype=np.float64)
            for i, tok in enumerate(tokens):
                try:
                    vals[i] = float(tok)
                except ValueError:
                    raise NonFiniteValue(
                        f"attribute {name!r}, row {i + 1}: {tok!r} is not a finite number"
                    ) from None
            if not np.all(np.isfinite(vals)):
                raise NonFiniteValue(f"attribute {name!r} holds NaN or infinity")
            columns.append(AttributeColumn(name, "numeric", vals))
        else:
            index = {c: k for k, c in enumerate(cats)}
            codes = np.empty(len(tokens), dtype=np.int64)
            for i, tok in enumerate(tokens):
                tok = tok.strip().strip("'\"")
                if tok not in index:
                    raise UnknownCategory(name, tok)
                codes[i] = index[tok]
            columns.append(AttributeColumn(name, "nominal", codes, cats))
    return View(relation, columns)


def _parse_attribute_decl(line: str) -> tuple[str, str, tuple[str, ...]]:
    body = line[len("@attribute"):].strip()
    if not body:
        raise MalformedHeader("@attribute without a name")
    if "{" in body:
        name, _, rest = body.partition("{")
        name = _check_name(name.strip().strip("'\""))
        cats_part, closed, trailer = rest.partition("}")
        if not closed or trailer.strip():
            raise MalformedHeader(f"malformed nominal declaration for {name!r}")
        cats = tuple(c.strip().strip("'\"") for c in cats_part.split(","))
        if not cats or any(not c for c in cats):
            raise MalformedHeader(f"empty category in declaration of {name!r}")
        if len(set(cats)) != len(cats):
            raise MalformedHeader(f"duplicate category in declaration of {name!r}")
        return name, "nominal", cats
    parts = body.split()
    if len(parts) != 2:
        raise MalformedHeader(f"malformed @attribute line: {body!r}")
    name = _check_name(parts[0].strip("'\""))
    kind = parts[1].lower()
    if kind in ("numeric", "real", "integer"):
        return name, "numeric", ()
    raise MalformedHeader(f"attribute {name!r}: type {parts[1]!r} is not supported")


def serialize_arff(view: View) -> str:
    """Inverse of parse_arff; numbers use repr so the round trip is exact."""
    out = [f"@relation {view.name}"]
    for a in view.attributes:
        if a.kind == "numeric":
            out.append(f"@attribute {a.name} numeric")
        else:
            out.append(f"@attribute {a.name} {{{','.join(a.categories)}}}")
    out.append("@data")
    for i in range(view.n_rows):
        cells = []
        for a in view.attributes:
            if a.kind == "numeric":
                cells.append(repr(float(a.values[i])))
            else:
                cells.append(a.categories[int(a.values[i])])
        out.append(",".join(cells))
    return "\n".join(out) + "\n"


def target_from_view(view: View, column: int = 0) -> TargetColumn:
    """Interpret one nominal column of a parsed file as a target."""
    a = view.attributes[column]
    if a.kind != "nominal":
        raise MalformedHeader(f"target column {a.name!r} must be nominal")
    return TargetColumn(a.name, a.categories, a.values)


# -- assembly and row selection -------------------------------------------------


def assemble_dataset(views: list[View], targets: list[TargetColumn] | None = None) -> MultiViewDataset:
    if not views:
        raise RowCountMismatch("a dataset needs at least one view")
    n = views[0].n_rows
    for v in views:
        if v.n_rows != n:
            raise RowCountMismatch(
                f"view {v.name!r} has {v.n_rows} rows, expected {n}"
            )
    for t in targets or []:
        if t.n_rows != n:
            raise RowCountMismatch(f"target {t.name!r} has {t.n_rows} rows, expected {n}")
    return MultiViewDataset(list(views), list(targets or []))


def take(ds: MultiViewDataset, indices: np.ndarray) -> MultiViewDataset:
    """Row-subset every view and target with the same index vector."""
    idx = np.asarray(indices, dtype=np.int64)
    views = [
        View(v.name, [AttributeColumn(a.name, a.kind, a.values[idx], a.categories)
                      for a in v.attributes])
        for v in ds.views
    ]
    targets = [TargetColumn(t.name, t.classes, t.codes[idx]) for t in ds.targets]
    return MultiViewDataset(views, targets, ds.entity_ids[idx])


def subsample(ds: MultiViewDataset, n: int, seed: int) -> MultiViewDataset:
    """Uniform row sample without replacement, original order preserved."""
    total = ds.n_entities
    if n < 1 or n > total:
        raise BadSampleSize(f"cannot sample {n} of {total} entities")
    if n == total:
        return take(ds, np.arange(total, dtype=np.int64))
    rng = np.random.default_rng(seed)
    idx = np.sort(rng.choice(total, size=n, replace=False))
    return take(ds, idx)
