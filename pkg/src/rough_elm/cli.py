"""``rough-elm`` command line: reduce, train, predict, benchmark, generate.

Exit codes: 0 success, 1 runtime failure, 2 usage or schema error.
Log verbosity comes from ``ROUGH_ELM_LOG_LEVEL`` (default WARNING).
"""

import argparse
import csv
import io
import json
import logging
import os
import sys

import numpy as np

from . import data, experiment, persist, relm
from .errors import (
    EmptyFile,
    InvalidConcept,
    InvalidNoise,
    ParseError,
    RoughElmError,
    SchemaMismatch,
    TooSmallForSplit,
    VersionError,
)

log = logging.getLogger("rough_elm")

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE = 0, 1, 2
USAGE_ERRORS = (
    SchemaMismatch, ParseError, EmptyFile, VersionError, InvalidConcept, InvalidNoise,
    TooSmallForSplit, FileNotFoundError, ValueError, json.JSONDecodeError,
)

# CLI flag dest -> ExperimentConfig field
CONFIG_FLAGS = {
    "data": "data", "schema": "schema", "algorithm": "algorithm", "L": "L", "k1": "k1",
    "k2": "k2", "ridge": "ridge", "activation": "activation", "fusion_c": "fusion_c",
    "reps": "reps", "train_fraction": "train_fraction", "stratified": "stratified",
    "seed": "seed", "out": "out",
}


def _add_generator_flags(p):
    p.add_argument("--generator", choices=["stagger", "hyperplane"])
    p.add_argument("--n", type=int, help="rows to generate (default 500)")
    p.add_argument("--concept", type=int, help="STAGGER concept 1, 2 or 3")
    p.add_argument("--d", type=int, help="hyperplane dimension")
    p.add_argument("--noise", type=float, help="hyperplane label-flip probability")
    p.add_argument("--gen-seed", type=int, help="generator seed (default: --seed)")


def _add_experiment_flags(p):
    p.add_argument("--config", help="JSON config file; flags override its fields")
    p.add_argument("--data", help="CSV dataset with header row")
    p.add_argument("--schema", help="JSON schema sidecar (default: DATA.schema.json if present)")
    _add_generator_flags(p)
    p.add_argument("--algorithm", choices=["relm", "elm"])
    p.add_argument("--seed", type=int)
    p.add_argument("--L", type=int, help="hidden neurons; overrides the rough-set sizing rule")
    p.add_argument("--k1", type=float)
    p.add_argument("--k2", type=float)
    p.add_argument("--ridge", type=float, help="ridge parameter C")
    p.add_argument("--activation", choices=["sigmoid", "radbas", "tribas", "sine", "hardlim"])
    p.add_argument("--fusion-c", dest="fusion_c", type=float)
    p.add_argument("--reps", type=int)
    p.add_argument("--train-fraction", dest="train_fraction", type=float)
    p.add_argument("--stratified", action="store_true", default=None)
    p.add_argument("--out")
    p.add_argument("--format", choices=["json", "text"], default="text")


def build_parser():
    parser = argparse.ArgumentParser(prog="rough-elm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in [
        ("reduce", "attribute reduction report"),
        ("train", "train a model and save it as JSON"),
        ("benchmark", "repeated seeded train/test runs"),
    ]:
        _add_experiment_flags(sub.add_parser(name, help=help_))

    p = sub.add_parser("predict", help="predict labels with a saved model")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True, help="CSV with the model's feature columns")
    p.add_argument("--out", help="output CSV (default: stdout)")

    p = sub.add_parser("generate", help="write a synthetic dataset as CSV")
    _add_generator_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    return parser


def _generator_spec(args, default_seed):
    spec = {"name": args.generator}
    for key in ("n", "concept", "d", "noise"):
        value = getattr(args, key)
        if value is not None:
            spec[key] = value
    spec["seed"] = args.gen_seed if args.gen_seed is not None else default_seed
    return spec


def config_from_args(args):
    overrides = {field: getattr(args, flag) for flag, field in CONFIG_FLAGS.items()}
    doc = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            doc = json.load(fh)
    doc.update({k: v for k, v in overrides.items() if v is not None})
    if args.generator:
        doc.pop("data", None)
        doc["generator"] = _generator_spec(args, doc.get("seed", 0))
    elif args.data:
        doc.pop("generator", None)
    return experiment.ExperimentConfig.from_dict(doc)


def _emit(text, path):
    if path:
        data.atomic_write(path, text)
    else:
        sys.stdout.write(text)


def cmd_reduce(args):
    config = config_from_args(args)
    ds, _ = experiment.load_dataset(config)
    rep = experiment.reduction_report(ds)
    text = json.dumps(rep, indent=2) + "\n" if args.format == "json" else experiment.render_reduction(rep)
    _emit(text, config.out)
    return EXIT_OK


def cmd_train(args):
    config = config_from_args(args)
    if not config.out:
        raise ValueError("train needs --out for the model file")
    ds, source = experiment.load_dataset(config)
    model = experiment.train_model(config, ds, config.seed)
    acc = float(np.mean(relm.predict_labels(model, ds) == ds.labels))
    persist.save_model(model, config.out, extra={
        "train_accuracy": acc, "seed": config.seed, "source": source,
        "dataset_checksum": data.checksum(ds),
    })
    print(f"saved {config.algorithm} model to {config.out} (L={model.L}, "
          f"training accuracy {acc:.4f})")
    return EXIT_OK


def cmd_predict(args):
    model, _ = persist.load_model(args.model)
    ds = data.read_features(args.data, model.disc_spec.names, model.disc_spec.kinds)
    outputs = relm.model_outputs(model, ds)
    labels = model.encoding.decode(np.argmax(outputs, axis=1))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["label"] + [f"output_{c}" for c in model.encoding.classes])
    for lab, row in zip(labels, outputs):
        writer.writerow([lab] + [repr(float(v)) for v in row])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_benchmark(args):
    config = config_from_args(args)
    report, _ = experiment.run_benchmark(config)
    if config.out:
        data.atomic_write(config.out, json.dumps(report, indent=2) + "\n")
    if args.format == "json" and not config.out:
        sys.stdout.write(json.dumps(report, indent=2) + "\n")
    else:
        sys.stdout.write(experiment.render_report(report))
    return EXIT_OK if report["status"] == "ok" else EXIT_RUNTIME


def cmd_generate(args):
    if not args.generator:
        raise ValueError("generate needs --generator")
    ds = experiment.generate(_generator_spec(args, args.seed))
    digest = data.write_csv(ds, args.out)
    print(f"wrote {ds.n_rows} rows x {ds.n_features} features to {args.out}")
    print(f"sha256 {digest}")
    return EXIT_OK


COMMANDS = {
    "reduce": cmd_reduce,
    "train": cmd_train,
    "predict": cmd_predict,
    "benchmark": cmd_benchmark,
    "generate": cmd_generate,
}


def main(argv=None):
    level = os.environ.get("ROUGH_ELM_LOG_LEVEL", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except USAGE_ERRORS as exc:
        print(f"rough-elm {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RoughElmError, ArithmeticError, OSError, RuntimeError) as exc:
        print(f"rough-elm {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
