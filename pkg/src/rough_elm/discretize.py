"""Equal-interval discretization of numeric columns, code maps for categorical ones.

The codes feed the rough-set side only. `input_matrix` gives the real-valued
view that the hidden layers see: numeric columns as-is, categorical columns
as one indicator column per category seen at fit time.
"""

from dataclasses import dataclass

import numpy as np

from .data import CATEGORICAL, NUMERIC
from .errors import EmptyDataset, NonFiniteValue, SchemaMismatch


@dataclass(frozen=True)
class NumericBins:
    min: float
    max: float
    n_bins: int

    @property
    def cardinality(self):
        return self.n_bins

    @property
    def edges(self):
        width = (self.max - self.min) / self.n_bins
        return [self.min + i * width for i in range(self.n_bins + 1)]


@dataclass(frozen=True)
class CategoryCodes:
    code_map: dict  # value -> code, contiguous from 0

    @property
    def cardinality(self):
        # one reserved overflow code for values unseen at fit time
        return len(self.code_map) + 1

    @property
    def overflow_code(self):
        return len(self.code_map)


@dataclass(frozen=True)
class DiscretizationSpec:
    names: tuple
    entries: tuple  # NumericBins | CategoryCodes, one per column

    @property
    def cardinalities(self):
        return tuple(e.cardinality for e in self.entries)

    @property
    def kinds(self):
        return tuple(NUMERIC if isinstance(e, NumericBins) else CATEGORICAL for e in self.entries)

    def to_dict(self):
        cols = []
        for name, e in zip(self.names, self.entries):
            if isinstance(e, NumericBins):
                cols.append({"name": name, "kind": NUMERIC, "min": e.min, "max": e.max,
                             "n_bins": e.n_bins})
            else:
                values = sorted(e.code_map, key=e.code_map.get)
                cols.append({"name": name, "kind": CATEGORICAL, "categories": values})
        return {"columns": cols}

    @classmethod
    def from_dict(cls, doc):
        names, entries = [], []
        for col in doc["columns"]:
            names.append(col["name"])
            if col["kind"] == NUMERIC:
                entries.append(NumericBins(float(col["min"]), float(col["max"]), int(col["n_bins"])))
            elif col["kind"] == CATEGORICAL:
                entries.append(CategoryCodes({v: i for i, v in enumerate(col["categories"])}))
            else:
                raise SchemaMismatch(f"unknown column kind {col['kind']!r}")
        return cls(tuple(names), tuple(entries))


def _finite_numeric(name, col):
    values = np.asarray(col, dtype=np.float64)
    if not np.all(np.isfinite(values)):
        raise NonFiniteValue(f"column {name!r} contains NaN or infinite values")
    return values


def fit(ds, n_classes):
    """Fit bins on training rows; numeric columns get ``n_classes`` equal-width bins."""
    if ds.n_rows == 0 or ds.n_features == 0:
        raise EmptyDataset("cannot fit a discretization on an empty dataset")
    n_bins = max(int(n_classes), 1)
    entries = []
    for name, kind, col in zip(ds.names, ds.kinds, ds.columns):
        if kind == NUMERIC:
            values = _finite_numeric(name, col)
            lo, hi = float(values.min()), float(values.max())
            entries.append(NumericBins(lo, hi, 1 if lo == hi else n_bins))
        else:
            code_map = {}
            for v in col:
                code_map.setdefault(v, len(code_map))
            entries.append(CategoryCodes(code_map))
    return DiscretizationSpec(tuple(ds.names), tuple(entries))


def _check_schema(spec, ds):
    if tuple(ds.names) != spec.names or tuple(ds.kinds) != spec.kinds:
        raise SchemaMismatch(
            f"dataset columns {list(zip(ds.names, ds.kinds))} do not match the fitted "
            f"columns {list(zip(spec.names, spec.kinds))}"
        )


def bin_codes(bins, values):
    """Half-open equal-width bins, maximum in the last bin, out-of-range values clamped."""
    if bins.n_bins == 1 or bins.max == bins.min:
        return np.zeros(len(values), dtype=np.int64)
    width = (bins.max - bins.min) / bins.n_bins
    codes = np.floor((values - bins.min) / width)
    return np.clip(codes, 0, bins.n_bins - 1).astype(np.int64)


def apply(spec, ds):
    """Category-code matrix (n_rows x n_columns) for a `DecisionTable`."""
    _check_schema(spec, ds)
    out = np.empty((ds.n_rows, len(spec.entries)), dtype=np.int64)
    for j, (name, e, col) in enumerate(zip(spec.names, spec.entries, ds.columns)):
        if isinstance(e, NumericBins):
            out[:, j] = bin_codes(e, _finite_numeric(name, col))
        else:
            out[:, j] = [e.code_map.get(v, e.overflow_code) for v in col]
    return out


def input_matrix(spec, ds, attrs=None):
    """Real-valued network inputs for the columns ``attrs`` (default: all).

    A categorical column expands to indicator columns in code order; an
    unseen value gets all-zero indicators.
    """
    _check_schema(spec, ds)
    attrs = range(len(spec.entries)) if attrs is None else attrs
    blocks = []
    for j in attrs:
        e, col = spec.entries[j], ds.columns[j]
        if isinstance(e, NumericBins):
            blocks.append(_finite_numeric(spec.names[j], col)[:, None])
        else:
            codes = np.array([e.code_map.get(v, e.overflow_code) for v in col], dtype=np.int64)
            blocks.append((codes[:, None] == np.arange(len(e.code_map))).astype(np.float64))
    if not blocks:
        return np.empty((ds.n_rows, 0))
    return np.hstack(blocks)


@dataclass(frozen=True)
class MinMaxScaler:
    """Per-column affine map of the training range onto [-1, 1]."""

    lo: np.ndarray
    hi: np.ndarray

    @classmethod
    def fit(cls, X):
        X = np.asarray(X, dtype=np.float64)
        return cls(X.min(axis=0), X.max(axis=0))

    def transform(self, X):
        X = np.asarray(X, dtype=np.float64)
        span = self.hi - self.lo
        safe = np.where(span > 0, span, 1.0)
        Z = 2.0 * (X - self.lo) / safe - 1.0
        # constant training columns carry no information
        return np.where(span > 0, Z, 0.0)

    def to_dict(self):
        return {"lo": [float(v) for v in self.lo], "hi": [float(v) for v in self.hi]}

    @classmethod
    def from_dict(cls, doc):
        return cls(np.asarray(doc["lo"], dtype=np.float64), np.asarray(doc["hi"], dtype=np.float64))

