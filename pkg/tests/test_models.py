from __future__ import annotations

import json

import numpy as np
import pytest

from src.config import SCHEMA_VERSION
from src.errors import ConfigError, DatasetSchemaError, EmptyTrainingSet, ModelSchemaError
from src.features.radiomics import CSV_HEADER, FEATURE_NAMES
from src.learn import ALGORITHMS, Dataset, config_for, cross_validate, load_model, parse_dataset, predict, save_model, train
from src.learn.dataset import Standardizer, column_medians, impute
from src.learn.knn import KnnConfig
from src.learn.models import model_from_dict, model_to_dict
from src.learn.validation import fold_indices


def _dataset(rng: np.random.Generator, n: int = 20, gap: float = 4.0) -> Dataset:
    d = len(FEATURE_NAMES)
    X = np.vstack([rng.normal(0.0, 1.0, size=(n, d)), rng.normal(gap, 1.0, size=(n, d))])
    ids = tuple(f"c{i:03d}" for i in range(2 * n))
    return Dataset(ids, X, tuple(["B"] * n + ["M"] * n))


# -------- dataset --------

def test_parse_dataset_with_missing_cells() -> None:
    header = ",".join(CSV_HEADER)
    row = ",".join(["a"] + ["1.5"] * 7 + ["", "M"])
    ds = parse_dataset(f"{header}\n{row}\n")
    assert ds.ids == ("a",) and ds.labels == ("M",)
    assert np.isnan(ds.X[0, -1])
    assert ds.feature_names == FEATURE_NAMES


def test_parse_dataset_accepts_other_columns() -> None:
    ds = parse_dataset("id,width,height,label\na,1,2,B\nb,3,4,\n")
    assert ds.feature_names == ("width", "height")
    assert ds.labels == ("B", None)
    assert not ds.labeled


@pytest.mark.parametrize(
    "text",
    ["", "name,x,label\na,1,B\n", "id,x,label\na,1\n", "id,x,label\na,oops,B\n"],
)
def test_parse_dataset_errors(text: str) -> None:
    with pytest.raises(DatasetSchemaError):
        parse_dataset(text)


def test_imputation_and_standardizer() -> None:
    X = np.array([[1.0, np.nan], [3.0, np.nan], [np.nan, np.nan]])
    med = column_medians(X)
    assert med.tolist() == [2.0, 0.0]
    filled = impute(X, med)
    assert filled[2].tolist() == [2.0, 0.0]
    scaler = Standardizer.fit(filled)
    assert scaler.scale[1] == 1.0
    assert scaler.transform(filled)[:, 0].mean() == pytest.approx(0.0)


# -------- training and persistence --------

@pytest.mark.parametrize("algorithm", sorted(ALGORITHMS))
def test_every_algorithm_learns_separable_data(algorithm: str, rng, tmp_path) -> None:
    ds = _dataset(rng)
    model = train(algorithm, ds)
    preds = predict(model, ds)
    assert sum(p == t for p, t in zip(preds, ds.labels)) >= 36

    path = tmp_path / f"{algorithm}.json"
    save_model(path, model)
    reloaded = load_model(path)
    assert reloaded.algorithm == algorithm
    assert predict(reloaded, ds) == preds


def test_knn_with_k1_has_perfect_training_accuracy(rng) -> None:
    ds = _dataset(rng, gap=0.5)
    model = train("knn", ds, KnnConfig(k=1))
    assert predict(model, ds) == list(ds.labels)


def test_training_imputes_missing_cells(rng) -> None:
    ds = _dataset(rng)
    X = ds.X.copy()
    X[::3, 2] = np.nan
    model = train("nb", Dataset(ds.ids, X, ds.labels))
    assert not np.isnan(model.medians).any()
    assert len(predict(model, X)) == len(ds)


def test_training_errors(rng) -> None:
    ds = _dataset(rng, n=3)
    with pytest.raises(ConfigError):
        train("forest", ds)
    with pytest.raises(ConfigError):
        train("knn", ds, config_for("tree"))
    with pytest.raises(DatasetSchemaError):
        train("tree", Dataset(ds.ids, ds.X, (None,) * len(ds)))
    with pytest.raises(EmptyTrainingSet):
        train("svm", ds.subset(range(3)))


def test_config_for_rejects_unknown_keys() -> None:
    assert config_for("knn", {"k": 1}).k == 1
    with pytest.raises(ConfigError):
        config_for("knn", {"neighbours": 1})


def test_predict_checks_feature_count(rng) -> None:
    model = train("tree", _dataset(rng))
    with pytest.raises(ModelSchemaError):
        predict(model, np.zeros((2, 3)))


@pytest.mark.parametrize(
    "patch",
    [
        {"schema_version": SCHEMA_VERSION + 1},
        {"algorithm": "forest"},
        {"variant": "Tree"},
        {"params": {}},
    ],
)
def test_model_schema_errors(patch: dict, rng) -> None:
    data = model_to_dict(train("knn", _dataset(rng)))
    data.update(patch)
    with pytest.raises(ModelSchemaError):
        model_from_dict(data)


def test_load_model_rejects_non_json(tmp_path) -> None:
    bad = tmp_path / "bad.json"
    bad.write_text("not json", encoding="utf-8")
    with pytest.raises(ModelSchemaError):
        load_model(bad)
    listed = tmp_path / "list.json"
    listed.write_text(json.dumps([1, 2]), encoding="utf-8")
    with pytest.raises(ModelSchemaError):
        load_model(listed)


# -------- cross-validation --------

def test_fold_indices_partition_rows() -> None:
    folds = fold_indices(23, 5, seed=9)
    joined = np.concatenate(folds)
    assert sorted(joined.tolist()) == list(range(23))
    assert {len(f) for f in folds} <= {4, 5}
    assert all(np.array_equal(a, b) for a, b in zip(folds, fold_indices(23, 5, seed=9)))


@pytest.mark.parametrize("folds", [1, 24])
def test_fold_indices_bounds(folds: int) -> None:
    with pytest.raises(ConfigError):
        fold_indices(23, folds)


def test_cross_validate_pools_predictions(rng) -> None:
    ds = _dataset(rng)
    result = cross_validate("knn", ds, folds=4, seed=3)
    assert result["n"] == len(ds)
    assert set(result["predictions"]) == set(ds.ids)
    assert sum(result["confusion"].values()) == len(ds)
    assert result["metrics"]["accuracy"] >= 0.9
    again = cross_validate("knn", ds, folds=4, seed=3)
    assert again["predictions"] == result["predictions"]
