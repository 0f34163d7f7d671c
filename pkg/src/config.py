# src/config.py

import dataclasses
import json
import os
import typing
from pathlib import Path
from typing import Any, Dict, Type, TypeVar

from src.errors import ConfigError

PROJECT_ROOT = Path(__file__).resolve().parents[1]

# -------- Load .env file --------
_env_path = PROJECT_ROOT / ".env"
if _env_path.exists():
    with open(_env_path) as _f:
        for _line in _f:
            _line = _line.strip()
            if _line and not _line.startswith("#") and "=" in _line:
                _key, _, _val = _line.partition("=")
                os.environ.setdefault(_key.strip(), _val.strip())

DATA_DIR = PROJECT_ROOT / "data"
OUTCOMES_DIR = DATA_DIR / "outcomes"
PHANTOM_SUITE_PATH = DATA_DIR / "phantom_suite.json"

OUTPUTS_DIR = Path(os.getenv("MAMMO_OUTPUT_DIR") or PROJECT_ROOT / "outputs")
PHANTOMS_DIR = OUTPUTS_DIR / "phantoms"
COMPARISONS_DIR = OUTPUTS_DIR / "comparisons"
FEATURES_DIR = OUTPUTS_DIR / "features"
MODELS_DIR = OUTPUTS_DIR / "models"
REPORTS_DIR = OUTPUTS_DIR / "reports"

PHANTOM_MANIFEST_JSONL = PHANTOMS_DIR / "manifest.jsonl"
COMPARISON_ROWS_JSONL = COMPARISONS_DIR / "comparison_rows.jsonl"
FEATURES_CSV = FEATURES_DIR / "features.csv"

LOG_LEVEL = os.getenv("MAMMO_LOG_LEVEL", "INFO")

# Every JSON artifact carries this
SCHEMA_VERSION = 1

RANDOM_SEED = 42

# -------- Greedy snake (active contour baseline) --------
SNAKE_ALPHA = 1.0
SNAKE_BETA = 1.0
SNAKE_GAMMA = 1.2
SNAKE_WINDOW = 3
SNAKE_POINTS = 64
SNAKE_RESAMPLE_EVERY = 10
SNAKE_MAX_ITERS = 300
SNAKE_SIGMA = 1.5          # Gaussian scale of the edge map
SNAKE_EDGE_FLOOR = 0.05    # min normalizer of the windowed image energy
SNAKE_MIN_MOVE_FRACTION = 0.02
SNAKE_BALLOON = -0.5       # inward pressure so the snake shrink-wraps onto the edge

# -------- Conservative contour (saliency bootstrap) --------
CONSERVATIVE_R0 = 5.0
CONSERVATIVE_STEP = 0.5           # px advanced per balloon iteration
CONSERVATIVE_MAX_ITERS = 500
CONSERVATIVE_RIDGE_FRACTION = 0.5  # of the median ridge height over all rays
CONSERVATIVE_SMOOTHING = 5         # circular median window over ray radii
CONSERVATIVE_N_RAYS = 64
CONSERVATIVE_RETREAT_FRACTION = 0.1
CONSERVATIVE_MIN_RETREAT = 2.0
CONTRAST_FLOOR = 1e-3

# -------- Baselines used by the comparison harness --------
RG_TAU = 30
AC_INIT_RADIUS_FACTOR = 1.4
AC_INIT_RADIUS = 30.0       # when no annotation radius is known

# -------- Features --------
BOX_SIZES = (2, 4, 8, 16, 32, 64)

# -------- Learning --------
TREE_MIN_SAMPLES = 2
TREE_MAX_DEPTH = 16
KNN_K = 3
NB_VAR_FLOOR = 1e-9
KMEANS_MAX_ITERS = 300
FCM_FUZZIFIER = 2.0
FCM_TOL = 1e-5
FCM_MAX_ITERS = 300
# None tries every row as the first BUILD medoid
PAM_RESTARTS = None
SVM_LAMBDA = 0.01
SVM_EPOCHS = 200
CV_FOLDS = 5
POSITIVE_LABEL = "M"


def ensure_dirs():
    OUTPUTS_DIR.mkdir(parents=True, exist_ok=True)
    PHANTOMS_DIR.mkdir(parents=True, exist_ok=True)
    COMPARISONS_DIR.mkdir(parents=True, exist_ok=True)
    FEATURES_DIR.mkdir(parents=True, exist_ok=True)
    MODELS_DIR.mkdir(parents=True, exist_ok=True)
    REPORTS_DIR.mkdir(parents=True, exist_ok=True)


T = TypeVar("T")


def from_dict(cls: Type[T], data: Dict[str, Any] | None, base: T | None = None) -> T:
    """
    Build a (possibly nested) config dataclass from a JSON mapping.

    Unknown keys raise ConfigError; missing keys keep their documented default
    (or the value in `base`, which is how nested sections inherit the default
    of their parent field).
    Lists are turned into tuples so the frozen dataclasses stay hashable.
    """
    if data is None:
        return base if base is not None else cls()
    if not isinstance(data, dict):
        raise ConfigError(f"{cls.__name__}: expected an object, got {type(data).__name__}")

    fields = {f.name: f for f in dataclasses.fields(cls)}
    unknown = sorted(set(data) - set(fields))
    if unknown:
        raise ConfigError(f"{cls.__name__}: unknown keys {unknown}")

    hints = typing.get_type_hints(cls)
    kwargs = {}
    for key, value in data.items():
        hint = hints.get(key)
        if dataclasses.is_dataclass(hint):
            default = fields[key].default
            nested_base = default if dataclasses.is_dataclass(default) else None
            kwargs[key] = from_dict(hint, value, nested_base)
        elif isinstance(value, list):
            kwargs[key] = tuple(value)
        else:
            kwargs[key] = value
    try:
        if base is not None:
            return dataclasses.replace(base, **kwargs)
        return cls(**kwargs)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"{cls.__name__}: {e}") from e


def to_dict(obj: Any) -> Dict[str, Any]:
    """Inverse of from_dict (tuples come back as lists)."""
    return json.loads(json.dumps(dataclasses.asdict(obj)))


def load_run_config(path: Path | None, cls: Type[T]) -> T:
    if path is None:
        return cls()
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: invalid JSON ({e})") from e
    return from_dict(cls, data)
