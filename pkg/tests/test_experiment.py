import copy
import json

import jsonschema
import numpy as np
import pytest

from rough_elm import experiment
from rough_elm.experiment import ExperimentConfig


def stagger_config(**kw):
    base = dict(generator={"name": "stagger", "n": 200, "concept": 1, "seed": 0},
                L=30, activation="hardlim", reps=3)
    base.update(kw)
    return ExperimentConfig(**base)


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig()
    with pytest.raises(ValueError):
        ExperimentConfig(data="x.csv", generator={"name": "stagger"})
    with pytest.raises(ValueError):
        stagger_config(reps=0)
    with pytest.raises(ValueError):
        stagger_config(fusion_c=2.0)
    with pytest.raises(ValueError):
        stagger_config(activation="relu")
    with pytest.raises(ValueError):
        ExperimentConfig.from_dict({"data": "x.csv", "bogus": 1})
    cfg = stagger_config(algorithm="ELM")
    assert cfg.algorithm == "elm"
    assert ExperimentConfig.from_dict(cfg.to_dict()) == cfg


def test_config_load_with_overrides(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"data": "a.csv", "reps": 4}))
    cfg = ExperimentConfig.load(path, {"reps": 2, "seed": None})
    assert cfg.reps == 2 and cfg.seed == 0


def test_generate_unknown():
    with pytest.raises(ValueError):
        experiment.generate({"name": "waveform"})


def test_aggregate_recomputable():
    report, _ = experiment.run_benchmark(stagger_config(reps=4))
    acc = np.array([r["accuracy"] for r in report["runs"]])
    agg = report["aggregate"]
    assert abs(agg["mean_accuracy"] - acc.mean()) <= 1e-12
    assert abs(agg["std_accuracy"] - np.sqrt(np.mean((acc - acc.mean()) ** 2))) <= 1e-12
    assert [r["seed"] for r in report["runs"]] == [0, 1, 2, 3]
    assert report["std_convention"] == "population"


def test_single_rep_has_zero_std():
    report, _ = experiment.run_benchmark(stagger_config(reps=1))
    assert report["aggregate"]["std_accuracy"] == 0.0


@pytest.mark.parametrize("algorithm", ["relm", "elm"])
def test_benchmark_deterministic_apart_from_timings(algorithm):
    cfg = stagger_config(algorithm=algorithm, seed=5)
    a, pa = experiment.run_benchmark(cfg)
    b, pb = experiment.run_benchmark(cfg)
    assert json.dumps(experiment.strip_timings(a)) == json.dumps(experiment.strip_timings(b))
    for x, y in zip(pa, pb):
        np.testing.assert_array_equal(x, y)


def test_report_schema_rejects_bad_documents():
    report, _ = experiment.run_benchmark(stagger_config(reps=1))
    experiment.validate_report(report)
    bad = copy.deepcopy(report)
    bad["std_convention"] = "sample"
    with pytest.raises(jsonschema.ValidationError):
        experiment.validate_report(bad)
    bad = copy.deepcopy(report)
    del bad["runs"][0]["accuracy"]
    with pytest.raises(jsonschema.ValidationError):
        experiment.validate_report(bad)


def test_failed_repetition_gives_partial_report():
    # 2 rows cannot be split 70/30 with both sides non-empty at every seed
    cfg = stagger_config(generator={"name": "stagger", "n": 1, "seed": 0}, reps=2)
    report, _ = experiment.run_benchmark(cfg)
    assert report["status"] == "failed"
    assert "TooSmallForSplit" in report["error"]


def test_reduction_report_stagger():
    ds = experiment.generate({"name": "stagger", "n": 500, "concept": 1, "seed": 0})
    rep = experiment.reduction_report(ds)
    assert (rep["before"], rep["after"], rep["ratio"]) == (3, 2, 0.3333)
    assert rep["reduct"] == ["color", "size"]
    text = experiment.render_reduction(rep)
    assert "0.3333" in text and "color, size" in text


def test_render_report_mentions_population_std():
    report, _ = experiment.run_benchmark(stagger_config(reps=1))
    assert "population std" in experiment.render_report(report)
