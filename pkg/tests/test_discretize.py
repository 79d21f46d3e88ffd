import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rough_elm import discretize
from rough_elm.data import CATEGORICAL, NUMERIC, Dataset
from rough_elm.discretize import CategoryCodes, DiscretizationSpec, NumericBins
from rough_elm.errors import EmptyDataset, NonFiniteValue, SchemaMismatch


def numeric_ds(values, name="x"):
    values = np.asarray(values, dtype=float)
    return Dataset((name,), (NUMERIC,), (values,), np.array(["a"] * len(values), dtype=object))


def categorical_ds(values, name="c"):
    return Dataset((name,), (CATEGORICAL,), (np.array(values, dtype=object),),
                   np.array(["a"] * len(values), dtype=object))


def test_fit_equal_halves():
    spec = discretize.fit(numeric_ds([0.0, 10.0]), 2)
    (bins,) = spec.entries
    assert bins == NumericBins(0.0, 10.0, 2)
    assert bins.edges == [0.0, 5.0, 10.0]


def test_apply_boundary_goes_right_and_max_in_last_bin():
    spec = discretize.fit(numeric_ds([0.0, 10.0]), 2)
    codes = discretize.apply(spec, numeric_ds([0.0, 4.999, 5.0, 10.0]))
    assert codes[:, 0].tolist() == [0, 0, 1, 1]


def test_apply_clamps_out_of_range():
    spec = discretize.fit(numeric_ds([0.0, 10.0]), 2)
    assert discretize.apply(spec, numeric_ds([-3.0, 42.0]))[:, 0].tolist() == [0, 1]


def test_constant_column_single_bin():
    spec = discretize.fit(numeric_ds([3.0, 3.0, 3.0]), 4)
    assert spec.entries[0].n_bins == 1
    assert discretize.apply(spec, numeric_ds([3.0, 3.0, 7.0]))[:, 0].tolist() == [0, 0, 0]


def test_categorical_first_appearance_and_overflow():
    spec = discretize.fit(categorical_ds(["red", "green", "red"]), 2)
    assert spec.entries[0].code_map == {"red": 0, "green": 1}
    codes = discretize.apply(spec, categorical_ds(["green", "blue", "red"]))
    assert codes[:, 0].tolist() == [1, 2, 0]
    assert spec.cardinalities == (3,)


def test_errors():
    empty = Dataset(("x",), (NUMERIC,), (np.array([]),), np.array([], dtype=object))
    with pytest.raises(EmptyDataset):
        discretize.fit(empty, 2)
    with pytest.raises(NonFiniteValue):
        discretize.fit(numeric_ds([0.0, np.nan]), 2)
    spec = discretize.fit(numeric_ds([0.0, 1.0]), 2)
    with pytest.raises(SchemaMismatch):
        discretize.apply(spec, categorical_ds(["a", "b"]))
    with pytest.raises(SchemaMismatch):
        discretize.apply(spec, numeric_ds([0.0, 1.0], name="y"))


def test_spec_json_round_trip():
    spec = DiscretizationSpec(
        ("x", "c"), (NumericBins(-1.5, 2.25, 3), CategoryCodes({"b": 0, "a": 1}))
    )
    doc = json.loads(json.dumps(spec.to_dict()))
    assert DiscretizationSpec.from_dict(doc) == spec


def test_input_matrix_one_hot():
    ds = Dataset(("x", "c"), (NUMERIC, CATEGORICAL),
                 (np.array([1.5, 2.0, 3.0]), np.array(["p", "q", "p"], dtype=object)),
                 np.array(["a", "b", "a"], dtype=object))
    spec = discretize.fit(ds, 2)
    X = discretize.input_matrix(spec, ds)
    np.testing.assert_array_equal(X, [[1.5, 1, 0], [2.0, 0, 1], [3.0, 1, 0]])
    unseen = Dataset(ds.names, ds.kinds, (np.array([0.0]), np.array(["z"], dtype=object)),
                     np.array(["a"], dtype=object))
    np.testing.assert_array_equal(discretize.input_matrix(spec, unseen), [[0.0, 0, 0]])


def test_scaler_maps_training_range_to_unit_interval():
    X = np.array([[0.0, 5.0, 2.0], [10.0, 5.0, 4.0], [5.0, 5.0, 3.0]])
    sc = discretize.MinMaxScaler.fit(X)
    Z = sc.transform(X)
    np.testing.assert_allclose(Z[:, 0], [-1, 1, 0])
    np.testing.assert_allclose(Z[:, 1], [0, 0, 0])
    np.testing.assert_allclose(Z[:, 2], [-1, 1, 0])


finite = st.floats(-1e6, 1e6, allow_nan=False)


@settings(max_examples=100, deadline=None)
@given(st.lists(finite, min_size=1, max_size=40), st.integers(1, 6))
def test_fit_apply_properties(values, n_classes):
    ds = numeric_ds(values)
    spec = discretize.fit(ds, n_classes)
    codes = discretize.apply(spec, ds)[:, 0]
    bins = spec.entries[0]
    assert codes.min() >= 0 and codes.max() < bins.n_bins
    # monotone in the value
    order = np.argsort(values, kind="stable")
    assert np.all(np.diff(codes[order]) >= 0)
    assert discretize.fit(ds, n_classes) == spec
