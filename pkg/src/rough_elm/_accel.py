"""Hot kernels with a numba path and a pure-numpy fallback.

The numba path is used when numba imports cleanly and the environment
variable ``ROUGH_ELM_DISABLE_NUMBA`` is unset (or ``0``/``false``). Both
paths return identical results; tests run them against each other.

Set ``USE_NUMBA`` on this module to switch backends at runtime.
"""

import os

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False


def _env_disabled():
    value = os.environ.get("ROUGH_ELM_DISABLE_NUMBA", "").strip().lower()
    return value not in ("", "0", "false", "no")


USE_NUMBA = HAVE_NUMBA and not _env_disabled()

# activation codes; order matches elm.Activation
SIGMOID, RADBAS, TRIBAS, SINE, HARDLIM = range(5)


def _njit(fn):
    if not HAVE_NUMBA:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)


# ---------------------------------------------------------------- partitions

@_njit
def _refine_nb(class_of, n_cls, codes, card):
    table = np.full(n_cls * card, -1, dtype=np.int64)
    out = np.empty(class_of.shape[0], dtype=np.int64)
    n_new = 0
    for i in range(class_of.shape[0]):
        key = class_of[i] * card + codes[i]
        cid = table[key]
        if cid < 0:
            cid = n_new
            table[key] = cid
            n_new += 1
        out[i] = cid
    return out, n_new


def _refine_np(class_of, n_cls, codes, card):
    keys = class_of * card + codes
    _, first, inverse = np.unique(keys, return_index=True, return_inverse=True)
    # relabel so class ids follow the first row at which each class appears
    order = np.argsort(first, kind="stable")
    rank = np.empty_like(order)
    rank[order] = np.arange(order.shape[0])
    return rank[inverse.ravel()].astype(np.int64), int(order.shape[0])


def refine(class_of, n_cls, codes, card):
    """Split every class of ``class_of`` by the values of one attribute column.

    Class ids of the result are dense and ordered by smallest member row.
    Returns ``(new_class_of, n_new_classes)``.
    """
    class_of = np.ascontiguousarray(class_of, dtype=np.int64)
    codes = np.ascontiguousarray(codes, dtype=np.int64)
    if USE_NUMBA:
        out, n_new = _refine_nb(class_of, int(n_cls), codes, int(card))
        return out, int(n_new)
    return _refine_np(class_of, int(n_cls), codes, int(card))


@_njit
def _class_stats_nb(class_of, n_cls, decision, n_dec):
    sizes = np.zeros(n_cls, dtype=np.int64)
    distinct = np.zeros(n_cls, dtype=np.int64)
    seen = np.zeros(n_cls * n_dec, dtype=np.uint8)
    for i in range(class_of.shape[0]):
        c = class_of[i]
        sizes[c] += 1
        k = c * n_dec + decision[i]
        if seen[k] == 0:
            seen[k] = 1
            distinct[c] += 1
    return sizes, distinct


def _class_stats_np(class_of, n_cls, decision, n_dec):
    sizes = np.bincount(class_of, minlength=n_cls).astype(np.int64)
    pairs = np.unique(class_of * n_dec + decision)
    distinct = np.bincount(pairs // n_dec, minlength=n_cls).astype(np.int64)
    return sizes, distinct


def class_stats(class_of, n_cls, decision, n_dec):
    """Per equivalence class: its size and the number of distinct decisions in it."""
    class_of = np.ascontiguousarray(class_of, dtype=np.int64)
    decision = np.ascontiguousarray(decision, dtype=np.int64)
    if USE_NUMBA:
        return _class_stats_nb(class_of, int(n_cls), decision, int(n_dec))
    return _class_stats_np(class_of, int(n_cls), decision, int(n_dec))


# ---------------------------------------------------------------- activations

@_njit
def _activate_nb(z, kind):
    # one loop per kind so each body vectorises
    x = z.ravel()
    out = np.empty_like(x)
    n = x.shape[0]
    if kind == SIGMOID:
        for i in range(n):
            out[i] = 1.0 / (1.0 + np.exp(-x[i]))
    elif kind == RADBAS:
        for i in range(n):
            out[i] = np.exp(-x[i] * x[i])
    elif kind == TRIBAS:
        for i in range(n):
            out[i] = max(0.0, 1.0 - abs(x[i]))
    elif kind == SINE:
        for i in range(n):
            out[i] = np.sin(x[i])
    else:
        for i in range(n):
            out[i] = 1.0 if x[i] >= 0.0 else 0.0
    return out.reshape(z.shape)


def _activate_np(z, kind):
    with np.errstate(over="ignore"):
        if kind == SIGMOID:
            return 1.0 / (1.0 + np.exp(-z))
        if kind == RADBAS:
            return np.exp(-z * z)
        if kind == TRIBAS:
            return np.maximum(0.0, 1.0 - np.abs(z))
        if kind == SINE:
            return np.sin(z)
    return (z >= 0.0).astype(np.float64)


def activate_array(z, kind):
    """Apply activation ``kind`` (an integer code) elementwise to a float array."""
    z = np.ascontiguousarray(z, dtype=np.float64)
    if USE_NUMBA:
        return _activate_nb(z, int(kind))
    return _activate_np(z, int(kind))
