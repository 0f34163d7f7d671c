from src.learn.dataset import Dataset, load_dataset, parse_dataset
from src.learn.models import ALGORITHMS, Model, config_for, load_model, predict, save_model, train
from src.learn.validation import cross_validate

__all__ = [
    "ALGORITHMS",
    "Dataset",
    "Model",
    "config_for",
    "cross_validate",
    "load_dataset",
    "load_model",
    "parse_dataset",
    "predict",
    "save_model",
    "train",
]
