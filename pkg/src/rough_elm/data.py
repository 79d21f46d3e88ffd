"""Datasets: CSV ingestion, synthetic generators and train/test splitting."""

import csv
import hashlib
import io
import json
import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptyFile,
    InvalidConcept,
    InvalidNoise,
    ParseError,
    SchemaMismatch,
    TooSmallForSplit,
)

NUMERIC = "numeric"
CATEGORICAL = "categorical"
LABEL = "label"
MISSING_CATEGORY = "⟨missing⟩"
MISSING_MARKERS = frozenset({"", "?"})

STAGGER_DOMAINS = {
    "color": ("green", "blue", "red"),
    "shape": ("triangle", "circle", "rectangle"),
    "size": ("small", "medium", "large"),
}


@dataclass(frozen=True, eq=False)
class Dataset:
    """Column-oriented feature table with string class labels.

    Numeric columns are float64 arrays; categorical columns are object
    arrays of strings.
    """

    names: tuple
    kinds: tuple
    columns: tuple
    labels: np.ndarray

    def __post_init__(self):
        if not (len(self.names) == len(self.kinds) == len(self.columns)):
            raise SchemaMismatch("names, kinds and columns differ in length")
        n = len(self.labels)
        for name, col in zip(self.names, self.columns):
            if len(col) != n:
                raise SchemaMismatch(f"column {name!r} has {len(col)} rows, labels have {n}")
        for kind in self.kinds:
            if kind not in (NUMERIC, CATEGORICAL):
                raise SchemaMismatch(f"unknown column kind {kind!r}")

    @property
    def n_rows(self):
        return len(self.labels)

    @property
    def n_features(self):
        return len(self.columns)

    def take(self, rows):
        rows = np.asarray(rows, dtype=np.int64)
        return Dataset(
            self.names,
            self.kinds,
            tuple(col[rows] for col in self.columns),
            self.labels[rows],
        )

    def select(self, cols):
        cols = list(cols)
        return Dataset(
            tuple(self.names[j] for j in cols),
            tuple(self.kinds[j] for j in cols),
            tuple(self.columns[j] for j in cols),
            self.labels,
        )

    def with_constant_column(self, name, value="const"):
        """Copy with one extra categorical column holding a single value."""
        col = np.full(self.n_rows, value, dtype=object)
        return Dataset(
            self.names + (name,),
            self.kinds + (CATEGORICAL,),
            self.columns + (col,),
            self.labels,
        )


@dataclass(frozen=True)
class DatasetSchema:
    columns: tuple  # ((name, type), ...)

    def __post_init__(self):
        names = [n for n, _ in self.columns]
        if len(set(names)) != len(names):
            raise SchemaMismatch("duplicate column names in schema")
        types = [t for _, t in self.columns]
        for t in types:
            if t not in (NUMERIC, CATEGORICAL, LABEL):
                raise SchemaMismatch(f"unknown column type {t!r}")
        if types.count(LABEL) != 1:
            raise SchemaMismatch("schema needs exactly one label column")
        if len(types) < 2:
            raise SchemaMismatch("schema needs at least one feature column")

    @property
    def names(self):
        return tuple(n for n, _ in self.columns)

    @property
    def label_index(self):
        return [t for _, t in self.columns].index(LABEL)

    @classmethod
    def from_dict(cls, doc):
        try:
            cols = tuple((str(c["name"]), str(c["type"])) for c in doc["columns"])
        except (KeyError, TypeError) as exc:
            raise SchemaMismatch(f"malformed schema document: {exc}") from None
        return cls(cols)

    def to_dict(self):
        return {"columns": [{"name": n, "type": t} for n, t in self.columns]}

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    @classmethod
    def for_dataset(cls, ds, label_name="label"):
        return cls(tuple(zip(ds.names, ds.kinds)) + ((label_name, LABEL),))


def _parse_float(text, row, col):
    try:
        value = float(text)
    except ValueError:
        raise ParseError(
            f"row {row}, column {col!r}: cannot parse {text!r} as a number", row, col
        ) from None
    if not math.isfinite(value):
        raise ParseError(f"row {row}, column {col!r}: non-finite value {text!r}", row, col)
    return value


def infer_schema(header, rows):
    """Label is the last column; a feature is numeric iff every non-missing cell parses."""
    cols = []
    for j, name in enumerate(header[:-1]):
        kind = NUMERIC
        for r in rows:
            cell = r[j].strip()
            if cell in MISSING_MARKERS:
                continue
            try:
                float(cell)
            except ValueError:
                kind = CATEGORICAL
                break
        cols.append((name, kind))
    cols.append((header[-1], LABEL))
    return DatasetSchema(tuple(cols))


def _read_rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if not rows:
        raise EmptyFile(f"{path}: file is empty")
    header, body = [h.strip() for h in rows[0]], rows[1:]
    if not body:
        raise EmptyFile(f"{path}: header but no data rows")
    return header, body


def read_csv(path, schema=None):
    """Read a headed CSV file into a `Dataset`.

    Missing cells ("" or "?") become the ``⟨missing⟩`` category in categorical
    columns and the column mean in numeric columns. Returns ``(dataset, schema)``.
    """
    header, body = _read_rows(path)
    if schema is None:
        schema = infer_schema(header, body)
    return _build(path, header, body, schema), schema


def read_features(path, names, kinds):
    """Read a CSV holding the feature columns ``names`` and, optionally, a trailing label column."""
    header, body = _read_rows(path)
    columns = tuple(zip(names, kinds))
    if len(header) == len(names) + 1:
        return _build(path, header, body, DatasetSchema(columns + ((header[-1], LABEL),)))
    if len(header) != len(names):
        raise SchemaMismatch(
            f"{path}: {len(header)} columns, model expects {len(names)} features"
        )
    placeholder = "__label__"
    body = [r + ["0"] for r in body]
    ds = _build(path, header + [placeholder], body,
                DatasetSchema(columns + ((placeholder, LABEL),)))
    return ds


def _build(path, header, body, schema):
    if len(header) != len(schema.columns):
        raise SchemaMismatch(
            f"{path}: header has {len(header)} columns, schema has {len(schema.columns)}"
        )
    if tuple(header) != schema.names:
        raise SchemaMismatch(f"{path}: header {header} does not match schema {list(schema.names)}")

    names, kinds, columns = [], [], []
    labels = None
    for j, (name, kind) in enumerate(schema.columns):
        cells = []
        for i, r in enumerate(body, start=2):
            if len(r) != len(header):
                raise ParseError(f"row {i}: expected {len(header)} cells, got {len(r)}", i, None)
            cells.append(r[j].strip())
        if kind == LABEL:
            for i, cell in enumerate(cells, start=2):
                if cell in MISSING_MARKERS:
                    raise ParseError(f"row {i}, column {name!r}: missing label", i, name)
            labels = np.array(cells, dtype=object)
            continue
        if kind == NUMERIC:
            values = np.array(
                [math.nan if c in MISSING_MARKERS else _parse_float(c, i, name)
                 for i, c in enumerate(cells, start=2)],
                dtype=np.float64,
            )
            missing = np.isnan(values)
            if missing.all():
                raise ParseError(f"column {name!r}: every cell is missing", None, name)
            values[missing] = values[~missing].mean()
        else:
            values = np.array(
                [MISSING_CATEGORY if c in MISSING_MARKERS else c for c in cells], dtype=object
            )
        names.append(name)
        kinds.append(kind)
        columns.append(values)
    return Dataset(tuple(names), tuple(kinds), tuple(columns), labels)


def load_csv(path, schema=None):
    return read_csv(path, schema)[0]


def to_csv_text(ds, label_name="label"):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(ds.names) + [label_name])
    cols = [
        [repr(float(v)) for v in col] if kind == NUMERIC else [str(v) for v in col]
        for kind, col in zip(ds.kinds, ds.columns)
    ]
    for i in range(ds.n_rows):
        writer.writerow([c[i] for c in cols] + [str(ds.labels[i])])
    return buf.getvalue()


def checksum(ds):
    """SHA-256 of the dataset's canonical CSV rendering."""
    return hashlib.sha256(to_csv_text(ds).encode("utf-8")).hexdigest()


def atomic_write(path, text):
    tmp = f"{path}.tmp{os.getpid()}"
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def write_csv(ds, path, with_schema=True):
    """Write ``ds`` to ``path`` and, optionally, its schema to ``path + '.schema.json'``."""
    text = to_csv_text(ds)
    atomic_write(path, text)
    if with_schema:
        doc = json.dumps(DatasetSchema.for_dataset(ds).to_dict(), indent=2)
        atomic_write(f"{path}.schema.json", doc + "\n")
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


# ---------------------------------------------------------------- generators

def stagger_concept(concept, color, shape, size):
    if concept == 1:
        return color == "red" and size == "small"
    if concept == 2:
        return color == "green" or shape == "circle"
    if concept == 3:
        return size in ("medium", "large")
    raise InvalidConcept(f"STAGGER concept must be 1, 2 or 3, got {concept!r}")


def gen_stagger(n, concept=1, seed=0):
    if concept not in (1, 2, 3):
        raise InvalidConcept(f"STAGGER concept must be 1, 2 or 3, got {concept!r}")
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, 3, size=(n, 3))
    names = tuple(STAGGER_DOMAINS)
    columns = tuple(
        np.array([STAGGER_DOMAINS[name][k] for k in idx[:, j]], dtype=object)
        for j, name in enumerate(names)
    )
    labels = np.array(
        ["true" if stagger_concept(concept, c, s, z) else "false"
         for c, s, z in zip(*columns)],
        dtype=object,
    )
    return Dataset(names, (CATEGORICAL,) * 3, columns, labels)


def hyperplane_labels(X, w):
    """True where ``X @ w >= w0`` with ``w0 = sum(w) / 2``."""
    X = np.asarray(X, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    return X @ w >= 0.5 * w.sum()


def gen_hyperplane(n, d=10, noise=0.1, seed=0):
    """Points uniform in [-10, 10]^d labelled by a random hyperplane, labels flipped with prob ``noise``."""
    if not 0.0 <= noise < 0.5:
        raise InvalidNoise(f"noise must lie in [0, 0.5), got {noise!r}")
    if n < 1 or d < 1:
        raise ValueError("n and d must be >= 1")
    rng = np.random.default_rng(seed)
    w = rng.uniform(0.0, 1.0, size=d)
    X = rng.uniform(-10.0, 10.0, size=(n, d))
    positive = hyperplane_labels(X, w)
    flip = rng.random(n) < noise
    positive ^= flip
    labels = np.where(positive, "positive", "negative").astype(object)
    names = tuple(f"x{j}" for j in range(d))
    return Dataset(names, (NUMERIC,) * d, tuple(X[:, j].copy() for j in range(d)), labels)


# ---------------------------------------------------------------- splitting

@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.7
    seed: int = 0
    stratified: bool = False

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError("train_fraction must lie in (0, 1)")


def _n_train(n, frac):
    return int(math.floor(frac * n + 0.5))


def split_indices(labels, spec):
    labels = np.asarray(labels)
    n = len(labels)
    rng = np.random.default_rng(spec.seed)
    if spec.stratified:
        train = []
        for cls in np.unique(labels):
            rows = np.flatnonzero(labels == cls)
            rows = rows[rng.permutation(len(rows))]
            train.append(rows[: _n_train(len(rows), spec.train_fraction)])
        train = np.sort(np.concatenate(train))
    else:
        perm = rng.permutation(n)
        train = np.sort(perm[: _n_train(n, spec.train_fraction)])
    mask = np.zeros(n, dtype=bool)
    mask[train] = True
    test = np.flatnonzero(~mask)
    if len(train) == 0 or len(test) == 0:
        raise TooSmallForSplit(
            f"{n} rows at train_fraction={spec.train_fraction} leave an empty side"
        )
    return train, test


def split(ds, spec):
    train, test = split_indices(ds.labels, spec)
    return ds.take(train), ds.take(test)
