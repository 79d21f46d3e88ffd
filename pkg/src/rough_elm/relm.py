"""Rough ELM: reduct-filtered inputs, a lower bank trained on the positive
region, an upper bank trained on the upper approximation, and a min/max
fusion of the two banks at prediction time.

A plain single-bank ELM over the same preprocessing lives here too, as the
baseline used by the benchmark harness.
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import discretize, rough
from .elm import (
    Activation,
    ElmModel,
    TargetEncoding,
    decide,
    elm_outputs,
    elm_train,
    hidden_output,
    init_hidden,
    solve_beta,
)
from .errors import SchemaMismatch


@dataclass(frozen=True)
class SizingParams:
    k1: float = 10.0
    k2: float = 1.0

    def __post_init__(self):
        if self.k1 < 0 or self.k2 < 0:
            raise ValueError("k1 and k2 must be non-negative")
        if self.k1 == 0 and self.k2 == 0:
            raise ValueError("k1 and k2 cannot both be zero")


@dataclass(frozen=True, eq=False)
class RoughSplit:
    lower_rows: np.ndarray
    upper_rows: np.ndarray
    n_positive: int
    degenerate_lower: bool = False


def rough_split(table, reduct):
    """Lower rows = positive region under ``reduct``; upper rows = every row.

    Decision classes cover the universe, so the upper approximation of the
    whole training set is the whole set. When the positive region holds fewer
    rows than there are classes, the lower bank falls back to every row.
    """
    mask = rough.positive_mask(table, tuple(reduct))
    n_pos = int(mask.sum())
    upper = np.arange(table.n_rows, dtype=np.int64)
    lower = np.flatnonzero(mask).astype(np.int64)
    if lower.shape[0] < table.n_classes:
        return RoughSplit(upper, upper, n_pos, degenerate_lower=True)
    return RoughSplit(lower, upper, n_pos)


def size_hidden(n_rows, n_pos, params):
    """Hidden-layer width from positive-region size, rounded half-up, clamped to [1, 4 n_rows]."""
    if n_rows < 1 or not 0 <= n_pos <= n_rows:
        raise ValueError(f"need n_rows >= 1 and 0 <= n_pos <= n_rows, got {n_rows}, {n_pos}")
    raw = params.k1 * n_rows / max(n_pos, 1) + params.k2 * (n_rows - n_pos) / n_rows
    return int(min(max(math.floor(raw + 0.5), 1), 4 * n_rows))


@dataclass(frozen=True, eq=False)
class RelmModel:
    reduct: rough.Reduct
    disc_spec: discretize.DiscretizationSpec
    scaler: discretize.MinMaxScaler
    lower_layer: object
    upper_layer: object
    beta_lower: np.ndarray
    beta_upper: np.ndarray
    c: float
    encoding: TargetEncoding
    L: int
    n_lower: int = 0
    n_upper: int = 0
    degenerate_lower: bool = False
    timings: dict = field(default_factory=dict, compare=False)

    @property
    def reduct_names(self):
        return tuple(self.disc_spec.names[a] for a in self.reduct)


def _features(disc_spec, scaler, attrs, ds):
    return scaler.transform(discretize.input_matrix(disc_spec, ds, list(attrs)))


def build_table(disc_spec, ds, encoding):
    codes = discretize.apply(disc_spec, ds)
    return rough.DecisionTable(
        codes,
        encoding.encode(ds.labels),
        disc_spec.names,
        tuple(str(c) for c in encoding.classes),
        disc_spec.cardinalities,
        encoding.n_classes,
    )


def relm_train(ds, params=SizingParams(), c=0.5, C=1000.0, activation="sigmoid", seed=0,
               L=None, shared_banks=False):
    """Fit a `RelmModel` on a `Dataset`.

    ``L`` overrides the rough-set sizing rule. ``shared_banks`` draws both
    banks from the same seed; it exists for tests.
    """
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"fusion weight c must lie in [0, 1], got {c!r}")
    activation = Activation.parse(activation)
    t0 = time.perf_counter()
    encoding = TargetEncoding.fit(ds.labels)
    disc_spec = discretize.fit(ds, encoding.n_classes)
    table = build_table(disc_spec, ds, encoding)
    t1 = time.perf_counter()

    reduct = rough.reduce(table)
    t2 = time.perf_counter()

    reduced = table.project(reduct.members)
    split = rough_split(reduced, range(reduced.n_cond))
    if L is None:
        L = size_hidden(table.n_rows, split.n_positive, params)
    raw = discretize.input_matrix(disc_spec, ds, reduct.members)
    scaler = discretize.MinMaxScaler.fit(raw)
    X = scaler.transform(raw)
    codes = table.decision_values

    lower_seed, upper_seed = np.random.SeedSequence(seed).spawn(2)
    if shared_banks:
        upper_seed = lower_seed
    m = X.shape[1]
    lower_layer = init_hidden(lower_seed, L, m, activation)
    upper_layer = init_hidden(upper_seed, L, m, activation)

    lo, up = split.lower_rows, split.upper_rows
    beta_lower = solve_beta(hidden_output(lower_layer, X[lo]), encoding.targets(codes[lo]), C)
    beta_upper = solve_beta(hidden_output(upper_layer, X[up]), encoding.targets(codes[up]), C)
    t3 = time.perf_counter()

    return RelmModel(
        reduct=reduct,
        disc_spec=disc_spec,
        scaler=scaler,
        lower_layer=lower_layer,
        upper_layer=upper_layer,
        beta_lower=beta_lower,
        beta_upper=beta_upper,
        c=float(c),
        encoding=encoding,
        L=int(L),
        n_lower=int(lo.shape[0]),
        n_upper=int(up.shape[0]),
        degenerate_lower=split.degenerate_lower,
        timings={"discretize": t1 - t0, "reduce": t2 - t1, "fit": t3 - t2},
    )


@dataclass(frozen=True, eq=False)
class FusedOutputs:
    outputs: np.ndarray  # fused target matrix, one column per class
    h_lower: np.ndarray  # elementwise min of the two banks' hidden outputs
    h_upper: np.ndarray  # elementwise max


def fuse(h_l, h_u, beta_lower, beta_upper, c):
    h_lower = np.minimum(h_l, h_u)
    h_upper = np.maximum(h_l, h_u)
    outputs = c * (h_lower @ beta_lower) + (1.0 - c) * (h_upper @ beta_upper)
    return FusedOutputs(outputs, h_lower, h_upper)


def relm_outputs(model, ds):
    X = _features(model.disc_spec, model.scaler, model.reduct.members, ds)
    h_l = hidden_output(model.lower_layer, X)
    h_u = hidden_output(model.upper_layer, X)
    return fuse(h_l, h_u, model.beta_lower, model.beta_upper, model.c)


def relm_predict(model, ds):
    """Class codes (indices into ``model.encoding.classes``)."""
    return decide(relm_outputs(model, ds).outputs)


# ---------------------------------------------------------------- baseline

@dataclass(frozen=True, eq=False)
class ElmPipelineModel:
    """Plain ELM over every input column, same preprocessing as `RelmModel`."""

    disc_spec: discretize.DiscretizationSpec
    scaler: discretize.MinMaxScaler
    elm: ElmModel
    timings: dict = field(default_factory=dict, compare=False)

    @property
    def encoding(self):
        return self.elm.encoding

    @property
    def L(self):
        return self.elm.layer.n_hidden


def elm_pipeline_train(ds, L=100, C=1000.0, activation="sigmoid", seed=0):
    t0 = time.perf_counter()
    encoding = TargetEncoding.fit(ds.labels)
    disc_spec = discretize.fit(ds, encoding.n_classes)
    raw = discretize.input_matrix(disc_spec, ds)
    scaler = discretize.MinMaxScaler.fit(raw)
    model = elm_train(scaler.transform(raw), ds.labels, L, C, activation, seed, encoding)
    return ElmPipelineModel(disc_spec, scaler, model,
                            timings={"fit": time.perf_counter() - t0})


def elm_pipeline_outputs(model, ds):
    X = _features(model.disc_spec, model.scaler, range(len(model.disc_spec.names)), ds)
    return elm_outputs(model.elm, X)


def model_outputs(model, ds):
    if isinstance(model, RelmModel):
        return relm_outputs(model, ds).outputs
    if isinstance(model, ElmPipelineModel):
        return elm_pipeline_outputs(model, ds)
    raise SchemaMismatch(f"not a trained model: {type(model).__name__}")


def predict_labels(model, ds):
    return model.encoding.decode(decide(model_outputs(model, ds)))
