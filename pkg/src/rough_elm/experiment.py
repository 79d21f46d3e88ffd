"""Experiment configuration, repeated seeded benchmark runs and report emission."""

import dataclasses
import json
import logging
import os
import time
from dataclasses import dataclass, field
from importlib import resources

import jsonschema
import numpy as np

from . import data, discretize, relm, rough
from .elm import Activation, TargetEncoding

log = logging.getLogger(__name__)

REPORT_SCHEMA_VERSION = 1
TIMING_KEYS = frozenset(
    {"train_seconds", "predict_seconds", "reduce_seconds",
     "mean_train_seconds", "mean_predict_seconds", "mean_reduce_seconds"}
)


@dataclass
class ExperimentConfig:
    data: str = None
    schema: str = None
    generator: dict = field(default_factory=dict)
    algorithm: str = "relm"
    L: int = None
    k1: float = 10.0
    k2: float = 1.0
    ridge: float = 1000.0
    activation: str = "sigmoid"
    fusion_c: float = 0.5
    reps: int = 10
    train_fraction: float = 0.7
    stratified: bool = False
    seed: int = 0
    out: str = None

    def __post_init__(self):
        self.algorithm = str(self.algorithm).lower()
        if self.algorithm not in ("relm", "elm"):
            raise ValueError(f"algorithm must be 'relm' or 'elm', got {self.algorithm!r}")
        self.activation = Activation.parse(self.activation).value
        if self.reps < 1:
            raise ValueError("reps must be >= 1")
        if not 0.0 <= self.fusion_c <= 1.0:
            raise ValueError("fusion_c must lie in [0, 1]")
        if not self.ridge > 0:
            raise ValueError("ridge must be positive")
        if self.L is not None and self.L < 1:
            raise ValueError("L must be >= 1")
        if bool(self.data) == bool(self.generator):
            raise ValueError("give exactly one dataset source: a CSV path or a generator spec")

    @classmethod
    def from_dict(cls, doc):
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(doc) - names
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**doc)

    @classmethod
    def load(cls, path, overrides=None):
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        doc.update({k: v for k, v in (overrides or {}).items() if v is not None})
        return cls.from_dict(doc)

    def to_dict(self):
        return dataclasses.asdict(self)


def generate(spec):
    """Build a dataset from a generator spec such as ``{"name": "stagger", "n": 500}``."""
    spec = dict(spec)
    name = spec.pop("name", None)
    if name == "stagger":
        return data.gen_stagger(int(spec.get("n", 500)), int(spec.get("concept", 1)),
                                int(spec.get("seed", 0)))
    if name == "hyperplane":
        return data.gen_hyperplane(int(spec.get("n", 500)), int(spec.get("d", 10)),
                                   float(spec.get("noise", 0.1)), int(spec.get("seed", 0)))
    raise ValueError(f"unknown generator {name!r}; expected 'stagger' or 'hyperplane'")


def load_dataset(config):
    if config.generator:
        return generate(config.generator), f"generator:{config.generator.get('name')}"
    schema = data.DatasetSchema.load(config.schema) if config.schema else _sidecar(config.data)
    return data.load_csv(config.data, schema), config.data


def _sidecar(path):
    side = f"{path}.schema.json"
    return data.DatasetSchema.load(side) if os.path.exists(side) else None


# ---------------------------------------------------------------- reduction

def reduction_report(ds):
    """Reduct of the whole dataset, discretised with one bin per class."""
    encoding = TargetEncoding.fit(ds.labels)
    spec = discretize.fit(ds, encoding.n_classes)
    table = relm.build_table(spec, ds, encoding)
    red = rough.reduce(table)
    before, after = table.n_cond, len(red)
    return {
        "before": before,
        "after": after,
        "reduced": before - after,
        "ratio": round((before - after) / before, 4),
        "reduct": [table.attribute_names[a] for a in red.members],
        "fallback": red.fallback,
        "gamma": float(red.gamma),
    }


def render_reduction(rep):
    rows = [
        ("before reduction", rep["before"]),
        ("after reduction", rep["after"]),
        ("reduced dimensions", rep["reduced"]),
        ("reduced / before", f"{rep['ratio']:.4f}"),
        ("reduct", ", ".join(rep["reduct"])),
        ("fallback", str(rep["fallback"]).lower()),
        ("gamma", f"{rep['gamma']:.4f}"),
    ]
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k:<{width}}  {v}" for k, v in rows) + "\n"


# ---------------------------------------------------------------- benchmark

def train_model(config, train, seed):
    if config.algorithm == "relm":
        return relm.relm_train(
            train,
            params=relm.SizingParams(config.k1, config.k2),
            c=config.fusion_c,
            C=config.ridge,
            activation=config.activation,
            seed=seed,
            L=config.L,
        )
    return relm.elm_pipeline_train(
        train, L=config.L or 100, C=config.ridge, activation=config.activation, seed=seed
    )


def run_once(config, ds, rep):
    seed = config.seed + rep
    train, test = data.split(ds, data.SplitSpec(config.train_fraction, seed, config.stratified))
    t0 = time.perf_counter()
    model = train_model(config, train, seed)
    t1 = time.perf_counter()
    pred = relm.predict_labels(model, test)
    t2 = time.perf_counter()
    row = {
        "rep": rep,
        "seed": seed,
        "n_train": train.n_rows,
        "n_test": test.n_rows,
        "accuracy": float(np.mean(pred == test.labels)),
        "train_seconds": t1 - t0,
        "predict_seconds": t2 - t1,
        "reduce_seconds": model.timings.get("reduce", 0.0),
        "L_used": int(model.L),
    }
    if isinstance(model, relm.RelmModel):
        row.update(
            reduct_size=len(model.reduct),
            reduct=list(model.reduct_names),
            fallback=model.reduct.fallback,
            degenerate_lower=model.degenerate_lower,
            n_lower=model.n_lower,
        )
    else:
        row.update(reduct_size=train.n_features, reduct=list(train.names), fallback=False,
                   degenerate_lower=False, n_lower=train.n_rows)
    return row, pred


def aggregate(runs):
    acc = np.array([r["accuracy"] for r in runs], dtype=np.float64)
    return {
        "n_runs": len(runs),
        "mean_accuracy": float(acc.mean()),
        # population standard deviation (divide by n)
        "std_accuracy": float(acc.std()),
        "mean_train_seconds": float(np.mean([r["train_seconds"] for r in runs])),
        "mean_predict_seconds": float(np.mean([r["predict_seconds"] for r in runs])),
        "mean_reduce_seconds": float(np.mean([r["reduce_seconds"] for r in runs])),
    }


def run_benchmark(config, ds=None, source=None):
    """Run ``config.reps`` seeded train/test repetitions.

    Returns ``(report, predictions)``. If a repetition raises, the report is
    returned with ``status="failed"`` and the rows completed so far.
    """
    if ds is None:
        ds, source = load_dataset(config)
    report = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "std_convention": "population",
        "status": "ok",
        "config": config.to_dict(),
        "dataset": {
            "source": source or "in-memory",
            "n_rows": ds.n_rows,
            "n_features": ds.n_features,
            "checksum": data.checksum(ds),
        },
        "runs": [],
    }
    predictions = []
    for rep in range(config.reps):
        try:
            row, pred = run_once(config, ds, rep)
        except Exception as exc:
            log.error("repetition %d failed: %s", rep, exc)
            report["status"] = "failed"
            report["error"] = f"repetition {rep}: {type(exc).__name__}: {exc}"
            break
        log.info("rep %d seed %d accuracy %.4f", rep, row["seed"], row["accuracy"])
        report["runs"].append(row)
        predictions.append(pred)
    if report["runs"]:
        report["aggregate"] = aggregate(report["runs"])
    validate_report(report)
    return report, predictions


def report_schema():
    text = resources.files("rough_elm").joinpath("schemas/report.schema.json").read_text()
    return json.loads(text)


def validate_report(report):
    jsonschema.validate(report, report_schema())


def strip_timings(obj):
    if isinstance(obj, dict):
        return {k: strip_timings(v) for k, v in obj.items() if k not in TIMING_KEYS}
    if isinstance(obj, list):
        return [strip_timings(v) for v in obj]
    return obj


def render_report(report):
    cfg = report["config"]
    lines = [
        f"algorithm={cfg['algorithm']} activation={cfg['activation']} L={cfg['L']} "
        f"C={cfg['ridge']} c={cfg['fusion_c']} reps={cfg['reps']} seed={cfg['seed']}",
        f"dataset {report['dataset']['source']}: {report['dataset']['n_rows']} rows, "
        f"{report['dataset']['n_features']} features",
        f"{'rep':>4} {'seed':>6} {'accuracy':>9} {'L':>5} {'reduct':>6} {'train_s':>9}",
    ]
    for r in report["runs"]:
        lines.append(
            f"{r['rep']:>4} {r['seed']:>6} {r['accuracy']:>9.4f} {r['L_used']:>5} "
            f"{r['reduct_size']:>6} {r['train_seconds']:>9.4f}"
        )
    if "aggregate" in report:
        agg = report["aggregate"]
        lines.append(
            f"accuracy {agg['mean_accuracy']:.4f}±{agg['std_accuracy']:.4f} "
            f"(population std), mean train {agg['mean_train_seconds']:.4f}s"
        )
    if report["status"] != "ok":
        lines.append(f"FAILED: {report.get('error')}")
    return "\n".join(lines) + "\n"

