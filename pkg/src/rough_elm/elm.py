"""Extreme learning machine: random hidden layer, ridge output weights, argmax decision."""

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import linalg

from . import _accel
from .errors import DimensionMismatch, SingularSystem


class Activation(str, enum.Enum):
    SIGMOID = "sigmoid"
    RADBAS = "radbas"
    TRIBAS = "tribas"
    SINE = "sine"
    HARDLIM = "hardlim"

    @property
    def code(self):
        return list(Activation).index(self)

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            names = ", ".join(a.value for a in cls)
            raise ValueError(f"unknown activation {value!r}; expected one of {names}") from None


def activate(kind, x):
    """Scalar activation, written out independently of the vectorised kernels."""
    kind = Activation.parse(kind)
    if kind is Activation.SIGMOID:
        if x < -700.0:
            return 0.0
        return 1.0 / (1.0 + math.exp(-x))
    if kind is Activation.RADBAS:
        return math.exp(-x * x)
    if kind is Activation.TRIBAS:
        return max(0.0, 1.0 - abs(x))
    if kind is Activation.SINE:
        return math.sin(x)
    return 1.0 if x >= 0.0 else 0.0


@dataclass(frozen=True, eq=False)
class HiddenLayer:
    input_weights: np.ndarray  # (L, m)
    biases: np.ndarray  # (L,)
    activation: Activation

    @property
    def n_hidden(self):
        return self.input_weights.shape[0]

    @property
    def n_inputs(self):
        return self.input_weights.shape[1]


def init_hidden(seed, L, m, activation):
    """Input weights and biases drawn i.i.d. uniform on [-1, 1].

    ``seed`` may be an int, a ``SeedSequence`` or a ``Generator``.
    """
    if L < 1 or m < 1:
        raise ValueError(f"need L >= 1 and m >= 1, got L={L}, m={m}")
    rng = np.random.default_rng(seed)
    W = rng.uniform(-1.0, 1.0, size=(L, m))
    b = rng.uniform(-1.0, 1.0, size=L)
    return HiddenLayer(W, b, Activation.parse(activation))


def hidden_output(layer, X):
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != layer.n_inputs:
        raise DimensionMismatch(
            f"input has shape {X.shape}, layer expects {layer.n_inputs} columns"
        )
    Z = X @ layer.input_weights.T + layer.biases
    return _accel.activate_array(Z, layer.activation.code)


def solve_beta(H, T, C, form="auto"):
    """Ridge least-squares output weights.

    ``form="sample"`` solves the N x N system  beta = H^T (I/C + H H^T)^-1 T,
    ``form="feature"`` the L x L system  beta = (I/C + H^T H)^-1 H^T T.
    ``"auto"`` picks the sample form when L <= N and the feature form otherwise.
    Both go through a Cholesky factorisation.
    """
    H = np.asarray(H, dtype=np.float64)
    T = np.asarray(T, dtype=np.float64)
    if T.ndim == 1:
        T = T[:, None]
    if H.ndim != 2 or H.shape[0] != T.shape[0]:
        raise DimensionMismatch(f"H {H.shape} and T {T.shape} row counts differ")
    if not C > 0:
        raise ValueError(f"ridge parameter C must be positive, got {C!r}")
    if not (np.all(np.isfinite(H)) and np.all(np.isfinite(T))):
        raise SingularSystem("non-finite entries in H or T")
    N, L = H.shape
    # inputs were checked above, so scipy's own finiteness checks and copies are skipped
    fast = {"check_finite": False}
    if form == "auto":
        form = "sample" if L <= N else "feature"
    try:
        if form == "sample":
            G = H @ H.T
            G[np.diag_indices_from(G)] += 1.0 / C
            factor = linalg.cho_factor(G, lower=True, overwrite_a=True, **fast)
            return H.T @ linalg.cho_solve(factor, T, **fast)
        if form == "feature":
            G = H.T @ H
            G[np.diag_indices_from(G)] += 1.0 / C
            factor = linalg.cho_factor(G, lower=True, overwrite_a=True, **fast)
            return linalg.cho_solve(factor, H.T @ T, **fast)
    except linalg.LinAlgError as exc:
        raise SingularSystem(f"regularised Gram matrix is not positive definite: {exc}") from None
    raise ValueError(f"unknown form {form!r}")


@dataclass(frozen=True)
class TargetEncoding:
    """Class label <-> output column; targets are +1 on the class column, -1 elsewhere."""

    classes: tuple

    @classmethod
    def fit(cls, labels):
        return cls(tuple(np.unique(np.asarray(labels)).tolist()))

    @property
    def n_classes(self):
        return len(self.classes)

    def encode(self, labels):
        index = {c: i for i, c in enumerate(self.classes)}
        try:
            return np.array([index[v] for v in np.asarray(labels).tolist()], dtype=np.int64)
        except KeyError as exc:
            raise ValueError(f"label {exc.args[0]!r} not in codebook {self.classes}") from None

    def decode(self, codes):
        return np.array([self.classes[int(k)] for k in codes], dtype=object)

    def targets(self, codes):
        codes = np.asarray(codes, dtype=np.int64)
        T = -np.ones((codes.shape[0], self.n_classes))
        T[np.arange(codes.shape[0]), codes] = 1.0
        return T


def decide(outputs):
    """Row-wise argmax; ties go to the lowest class code."""
    return np.argmax(np.asarray(outputs), axis=1).astype(np.int64)


class ElmModel(NamedTuple):
    layer: HiddenLayer
    beta: np.ndarray
    encoding: TargetEncoding


def elm_train(X, labels, L, C, activation, seed, encoding=None):
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 1:
        raise DimensionMismatch("X must be a non-empty 2-D matrix")
    encoding = encoding or TargetEncoding.fit(labels)
    layer = init_hidden(seed, L, X.shape[1], activation)
    H = hidden_output(layer, X)
    beta = solve_beta(H, encoding.targets(encoding.encode(labels)), C)
    return ElmModel(layer, beta, encoding)


def elm_outputs(model, X):
    return hidden_output(model.layer, X) @ model.beta


def elm_predict(model, X):
    """Class codes (column indices of ``model.encoding``) for each row of ``X``."""
    return decide(elm_outputs(model, X))
