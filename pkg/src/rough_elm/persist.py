"""Versioned JSON documents for trained models."""

import json
from fractions import Fraction

import numpy as np

from .data import atomic_write
from .discretize import DiscretizationSpec, MinMaxScaler
from .elm import Activation, ElmModel, HiddenLayer, TargetEncoding
from .errors import SchemaMismatch, VersionError
from .relm import ElmPipelineModel, RelmModel
from .rough import Reduct

FORMAT = "rough-elm-model"
VERSION = 1


def _layer_doc(layer, beta):
    return {
        "input_weights": layer.input_weights.tolist(),
        "biases": layer.biases.tolist(),
        "beta": np.asarray(beta).tolist(),
    }


def _layer(doc, activation):
    layer = HiddenLayer(
        np.asarray(doc["input_weights"], dtype=np.float64),
        np.asarray(doc["biases"], dtype=np.float64),
        activation,
    )
    return layer, np.asarray(doc["beta"], dtype=np.float64)


def model_to_dict(model, extra=None):
    if isinstance(model, RelmModel):
        act = model.lower_layer.activation
        doc = {
            "kind": "relm",
            "reduct": {
                "members": list(model.reduct.members),
                "names": list(model.reduct_names),
                "fallback": model.reduct.fallback,
                "gamma": str(model.reduct.gamma),
            },
            "c": model.c,
            "n_lower": model.n_lower,
            "n_upper": model.n_upper,
            "degenerate_lower": model.degenerate_lower,
            "lower": _layer_doc(model.lower_layer, model.beta_lower),
            "upper": _layer_doc(model.upper_layer, model.beta_upper),
            "m": model.lower_layer.n_inputs,
        }
    elif isinstance(model, ElmPipelineModel):
        act = model.elm.layer.activation
        doc = {
            "kind": "elm",
            "hidden": _layer_doc(model.elm.layer, model.elm.beta),
            "m": model.elm.layer.n_inputs,
        }
    else:
        raise TypeError(f"cannot serialise {type(model).__name__}")
    doc.update(
        format=FORMAT,
        version=VERSION,
        activation=act.value,
        L=model.L,
        classes=[str(c) for c in model.encoding.classes],
        discretization=model.disc_spec.to_dict(),
        scaler=model.scaler.to_dict(),
    )
    if extra:
        doc["extra"] = extra
    return doc


def model_from_dict(doc):
    if doc.get("format") != FORMAT:
        raise VersionError(f"not a {FORMAT} document (format={doc.get('format')!r})")
    if doc.get("version") != VERSION:
        raise VersionError(
            f"model document version {doc.get('version')!r}; this build reads version {VERSION}"
        )
    act = Activation.parse(doc["activation"])
    spec = DiscretizationSpec.from_dict(doc["discretization"])
    scaler = MinMaxScaler.from_dict(doc["scaler"])
    encoding = TargetEncoding(tuple(doc["classes"]))
    if doc["kind"] == "relm":
        lower, beta_l = _layer(doc["lower"], act)
        upper, beta_u = _layer(doc["upper"], act)
        red = doc["reduct"]
        return RelmModel(
            reduct=Reduct(tuple(red["members"]), red["fallback"], Fraction(red["gamma"])),
            disc_spec=spec,
            scaler=scaler,
            lower_layer=lower,
            upper_layer=upper,
            beta_lower=beta_l,
            beta_upper=beta_u,
            c=float(doc["c"]),
            encoding=encoding,
            L=int(doc["L"]),
            n_lower=int(doc["n_lower"]),
            n_upper=int(doc["n_upper"]),
            degenerate_lower=bool(doc["degenerate_lower"]),
        )
    if doc["kind"] == "elm":
        layer, beta = _layer(doc["hidden"], act)
        return ElmPipelineModel(spec, scaler, ElmModel(layer, beta, encoding))
    raise SchemaMismatch(f"unknown model kind {doc['kind']!r}")


def save_model(model, path, extra=None):
    atomic_write(path, json.dumps(model_to_dict(model, extra)) + "\n")


def load_model(path):
    """Returns ``(model, extra)``; ``extra`` is whatever metadata was saved alongside."""
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise VersionError(f"{path}: not a JSON model document ({exc})") from None
    return model_from_dict(doc), doc.get("extra", {})
