"""Copy black-box classifiers into decision trees by synthetic sampling."""

import json as _json

from . import _copycat
from ._copycat import (
    BoostedTrees,
    Classifier,
    CopycatError,
    CopyResult,
    Dataset,
    DecisionTree,
    LogisticRegression,
    Mlp,
    Region,
    Standardizer,
    accuracy,
    agreement,
    apply_standardizer,
    build_copy,
    concentration_index,
    feature_importance,
    fit_region,
    fit_standardizer,
    generate_credit_like,
    generate_interleaved_arcs,
    invert_standardizer,
    label_with_oracle,
    load_csv,
    sample_uniform,
    spearman,
    stratified_split,
    train_cart,
    train_gbt,
    train_lr,
    train_mlp,
    write_csv,
)

__version__ = "0.1.0"


def load_model(doc):
    """Rebuild a model from its JSON document (a dict or a JSON string)."""
    if not isinstance(doc, str):
        doc = _json.dumps(doc)
    return _copycat.load_model(doc)


def save_model(model, feature_names=()):
    return _json.loads(model.to_json(list(feature_names)))


def run_study(oracle, region, original_test, **kwargs):
    return _json.loads(_copycat.run_study(oracle, region, original_test, **kwargs))


def compare_importances(original, copy, names):
    return _json.loads(_copycat.compare_importances(original, copy, names))


def run_scenario1(data, **kwargs):
    return _json.loads(_copycat.run_scenario1(data, **kwargs))


def run_scenario2(data, **kwargs):
    return _json.loads(_copycat.run_scenario2(data, **kwargs))


def run_toy(**kwargs):
    return _json.loads(_copycat.run_toy(**kwargs))
