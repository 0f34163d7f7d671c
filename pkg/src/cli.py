#!/usr/bin/env python3
"""
Command-line front end.

Usage:
    python -m src.cli phantom --out phantom.pgm --shape disc --size 50
    python -m src.cli segment phantom.pgm --seed 100,100 --method saliency --out seg/
    python -m src.cli segment mdb001.pgm --annotation info.txt:mdb001 --out seg/
    python -m src.cli features phantom.pgm seg/phantom_saliency_mask.pgm --out features.csv --label B
    python -m src.cli train features.csv --algorithm knn --out knn.json
    python -m src.cli evaluate --model knn.json --dataset features.csv
    python -m src.cli evaluate --outcomes data/outcomes/table3_n598.csv
    python -m src.cli compare --suite outputs/phantoms/manifest.jsonl --out cmp/

Exit codes: 0 success, 2 I/O or invalid input, 3 segmentation failure,
4 model/dataset schema mismatch. The error class and message go to stderr.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src.config import (
    AC_INIT_RADIUS,
    AC_INIT_RADIUS_FACTOR,
    LOG_LEVEL,
    OUTPUTS_DIR,
    POSITIVE_LABEL,
    RANDOM_SEED,
    SCHEMA_VERSION,
    load_run_config,
    to_dict,
)
from src.errors import (
    SCHEMA_ERRORS,
    SEGMENTATION_ERRORS,
    AnnotationError,
    ConfigError,
    FeatureError,
    MammoError,
    PhantomSpecError,
)
from src.evaluation.compare import CompareConfig, annotation_disc, compare_methods, mean_scores, overlay_image
from src.evaluation.report import comparison_table, screening_table, write_comparison_report
from src.evaluation.screening import evaluate_labels, evaluate_outcomes, read_outcomes
from src.features.radiomics import append_feature_row, extract_all
from src.imgio.annotations import Annotation, find_annotation, read_annotations
from src.imgio.pgm import Image, image_to_mask, mask_to_image, read_pgm, save_pgm
from src.imgio.phantoms import SHAPES, PhantomSpec, synth_phantom
from src.learn.dataset import load_dataset
from src.learn.models import ALGORITHMS, load_model, predict, save_model, train
from src.segmentation.active_contour import SnakeParams, active_contour
from src.segmentation.geometry import (
    circle_points,
    contour_from_mask,
    contour_to_csv,
    contour_to_svg,
    fill_contour,
)
from src.segmentation.region_growing import RegionGrowingParams, region_growing
from src.segmentation.saliency import SaliencyConfig, saliency_segment
from src.utils import atomic_write_text, read_json, read_jsonl, write_json

logger = logging.getLogger("cli")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_SEGMENTATION = 3
EXIT_SCHEMA = 4


@dataclass(frozen=True)
class AcConfig:
    # initial circle radius when no annotation radius is available
    init_radius: float = AC_INIT_RADIUS
    snake: SnakeParams = SnakeParams()


SEGMENT_CONFIGS = {"saliency": SaliencyConfig, "rg": RegionGrowingParams, "ac": AcConfig}


# -------- argument helpers --------

def parse_point(text: str) -> Tuple[int, int]:
    try:
        x, y = (int(v) for v in text.split(","))
    except ValueError:
        raise ConfigError(f"expected a point as 'x,y' integers, got {text!r}") from None
    return x, y


def resolve_annotation(ref: str, image: Image) -> Annotation:
    """'info.txt:mdb001' -> the record, centre converted with the image height."""
    path, sep, record_id = ref.rpartition(":")
    if not sep or not path or not record_id:
        raise AnnotationError(f"--annotation expects FILE:RECORD_ID, got {ref!r}")
    return find_annotation(read_annotations(Path(path), image_height=image.height), record_id)


def resolve_seed(args, image: Image) -> Tuple[Tuple[int, int], Optional[Annotation]]:
    if args.annotation:
        annotation = resolve_annotation(args.annotation, image)
        seed = annotation.seed()
        logger.info(
            f"Annotation {annotation.record_id}: raw centre {annotation.raw_center} "
            f"(bottom-left) -> seed {seed} (top-left)"
        )
        return seed, annotation
    return parse_point(args.seed), None


def annotation_summary(annotation: Optional[Annotation]) -> Optional[Dict[str, Any]]:
    if annotation is None:
        return None
    cx, cy = annotation.raw_center
    return {
        "record_id": annotation.record_id,
        "raw_center": [cx, cy],
        "converted_seed": list(annotation.seed()),
        "radius": annotation.radius,
    }


# -------- commands --------

def segment_mask(method: str, image: Image, seed: Tuple[int, int], config, annotation: Optional[Annotation]):
    if method == "saliency":
        return saliency_segment(image, seed, config)
    if method == "rg":
        return region_growing(image, seed, config.tau)
    radius = AC_INIT_RADIUS_FACTOR * annotation.radius if annotation is not None else config.init_radius
    pts = circle_points(seed, radius, config.snake.n_points)
    pts[:, 0] = np.clip(pts[:, 0], 0, image.width - 1)
    pts[:, 1] = np.clip(pts[:, 1], 0, image.height - 1)
    return fill_contour(active_contour(image, pts, config.snake), image.shape)


def cmd_segment(args) -> int:
    image = read_pgm(args.image)
    config = load_run_config(args.config, SEGMENT_CONFIGS[args.method])
    seed, annotation = resolve_seed(args, image)

    t0 = time.perf_counter()
    mask = segment_mask(args.method, image, seed, config, annotation)
    elapsed = time.perf_counter() - t0

    stem = f"{args.image.stem}_{args.method}"
    out: Path = args.out
    contour = contour_from_mask(mask)
    written = [f"{stem}_mask.pgm", f"{stem}_overlay.pgm", f"{stem}_contour.csv", f"{stem}.json"]
    save_pgm(out / written[0], mask_to_image(mask))
    save_pgm(out / written[1], overlay_image(image, mask))
    atomic_write_text(out / written[2], contour_to_csv(contour))
    if args.svg:
        written.append(f"{stem}_contour.svg")
        atomic_write_text(out / written[-1], contour_to_svg([contour], image.width, image.height))

    summary = {
        "schema_version": SCHEMA_VERSION,
        "command": "segment",
        "image": args.image.name,
        "method": args.method,
        "seed": list(seed),
        "annotation": annotation_summary(annotation),
        "params": to_dict(config),
        "mask_pixels": int(mask.sum()),
        "outputs": written,
    }
    if args.record_timings:
        summary["timings"] = {"segment_seconds": elapsed}
    write_json(out / written[3], summary)
    logger.info(f"Segmented {args.image.name} with {args.method}: {int(mask.sum())} px -> {out}")
    return EXIT_OK


def cmd_features(args) -> int:
    image = read_pgm(args.image)
    mask = image_to_mask(read_pgm(args.mask))
    if mask.shape != image.shape:
        raise FeatureError(f"mask is {mask.shape[1]}x{mask.shape[0]}, image is {image.width}x{image.height}")
    if not mask.any():
        raise FeatureError(f"{args.mask}: mask has no foreground pixel")
    vector = extract_all(image, mask, contour_from_mask(mask))
    case_id = args.id or args.image.stem
    append_feature_row(args.out, case_id, vector, args.label)
    logger.info(f"Appended features of {case_id} to {args.out}")
    return EXIT_OK


def cmd_train(args) -> int:
    dataset = load_dataset(args.dataset)
    config = load_run_config(args.config, ALGORITHMS[args.algorithm][1])
    if args.rng_seed is not None:
        if not hasattr(config, "rng_seed"):
            raise ConfigError(f"{args.algorithm} takes no rng_seed")
        config = replace(config, rng_seed=args.rng_seed)
    model = train(args.algorithm, dataset, config)
    save_model(args.out, model)
    return EXIT_OK


def cmd_evaluate(args) -> int:
    if args.outcomes:
        _, predictions, labels = read_outcomes(args.outcomes)
        result = evaluate_outcomes(predictions, labels)
        source = args.outcomes.name
    else:
        if not (args.model and args.dataset):
            raise ConfigError("evaluate needs --outcomes, or both --model and --dataset")
        model = load_model(args.model)
        dataset = load_dataset(args.dataset)
        labels = dataset.require_labels().tolist()
        predictions = predict(model, dataset)
        result = evaluate_labels(predictions, labels) if args.positive is None else evaluate_outcomes(
            predictions, labels, positive=args.positive
        )
        result["label_accuracy"] = float(np.mean([p == l for p, l in zip(predictions, labels)]))
        result["predictions"] = dict(zip(dataset.ids, predictions))
        source = f"{args.model.name} on {args.dataset.name}"

    summary = {"schema_version": SCHEMA_VERSION, "command": "evaluate", "source": source, **result}
    if args.out:
        write_json(args.out, summary)
    print(screening_table({source: result}), end="")
    return EXIT_OK


def _suite_cases(manifest: Path):
    phantom_dir = manifest.parent
    for row in read_jsonl(manifest):
        case_id = row["case_id"]
        image = read_pgm(phantom_dir / f"{case_id}.pgm")
        truth = image_to_mask(read_pgm(phantom_dir / f"{case_id}_mask.pgm"))
        radius = PhantomSpec.from_dict(row["spec"]).annotation_radius() if "spec" in row else None
        yield case_id, image, tuple(row["seed"]), truth, "phantom", radius


def _single_case(args):
    image = read_pgm(args.image)
    seed, annotation = resolve_seed(args, image)
    if args.ground_truth:
        truth, kind = image_to_mask(read_pgm(args.ground_truth)), "mask"
    elif annotation is not None:
        truth, kind = annotation_disc(annotation, image.shape), "annotation"
    else:
        raise ConfigError("compare needs --ground-truth or --annotation for a single image")
    radius = annotation.radius if annotation is not None else None
    yield args.image.stem, image, seed, truth, kind, radius


def cmd_compare(args) -> int:
    config = load_run_config(args.config, CompareConfig)
    if args.record_timings:
        config = replace(config, record_timings=True)
    if args.suite is None and args.image is None:
        raise ConfigError("compare needs --suite MANIFEST or an image")
    cases = _suite_cases(args.suite) if args.suite else _single_case(args)

    reports = []
    for case_id, image, seed, truth, kind, radius in cases:
        report = compare_methods(
            image, seed, truth, config, case_id=case_id, ground_truth_kind=kind, annotation_radius=radius
        )
        for r in report.rows:
            if r.mask is not None:
                save_pgm(args.out / "overlays" / f"{case_id}_{r.method}.pgm", overlay_image(image, r.mask))
        reports.append(report)

    write_comparison_report(args.out, reports, mean_scores(reports), config.record_timings)
    print(comparison_table(reports), end="")
    return EXIT_OK


def cmd_phantom(args) -> int:
    if args.spec:
        try:
            data = read_json(args.spec)
        except ValueError as e:
            raise PhantomSpecError(f"{args.spec}: invalid JSON ({e})") from e
        spec = PhantomSpec.from_dict(data)
    else:
        center = parse_point(args.center) if args.center else (args.width // 2, args.height // 2)
        shape: Dict[str, Any] = {"kind": args.shape, "center": list(center)}
        if args.shape == "disc":
            shape["radius"] = args.size
        elif args.shape == "blob":
            shape["sigma"] = args.size
        else:
            shape.update(a=args.size, b=args.b if args.b is not None else args.size / 2, angle=args.angle)
        spec = PhantomSpec.from_dict({
            "width": args.width,
            "height": args.height,
            "shape": shape,
            "fg_level": args.fg,
            "bg_level": args.bg,
            "noise_sigma": args.noise,
            "rng_seed": args.rng_seed,
        })

    image, mask = synth_phantom(spec)
    out: Path = args.out
    save_pgm(out, image, "P2" if args.ascii else "P5")
    save_pgm(out.with_name(f"{out.stem}_mask.pgm"), mask_to_image(mask))
    write_json(out.with_suffix(".json"), {"schema_version": SCHEMA_VERSION, "command": "phantom", "spec": spec.to_dict()})
    logger.info(f"Wrote phantom {spec.shape.kind} {spec.width}x{spec.height} -> {out}")
    return EXIT_OK


# -------- parser --------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mammo", description="Saliency-based mass segmentation and radiomics toolkit")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    def seed_options(p, required: bool):
        group = p.add_mutually_exclusive_group(required=required)
        group.add_argument("--seed", help="Seed point as x,y (top-left origin)")
        group.add_argument("--annotation", help="FILE:RECORD_ID; the centre is converted with the image height")

    p = sub.add_parser("segment", help="Segment one mass from a seed point")
    p.add_argument("image", type=Path)
    seed_options(p, required=True)
    p.add_argument("--method", choices=sorted(SEGMENT_CONFIGS), default="saliency")
    p.add_argument("--config", type=Path, default=None, help="JSON parameters for the method")
    p.add_argument("--out", type=Path, default=OUTPUTS_DIR / "segment", help="Output directory")
    p.add_argument("--svg", action="store_true", help="Also export the contour as an SVG polygon")
    p.add_argument("--record-timings", action="store_true", help="Include wall-clock timings in the JSON")
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("features", help="Append the feature row of one segmented mass")
    p.add_argument("image", type=Path)
    p.add_argument("mask", type=Path)
    p.add_argument("--out", type=Path, required=True, help="Feature CSV (created with a header if missing)")
    p.add_argument("--id", default=None, help="Case id (default: image file stem)")
    p.add_argument("--label", default=None, help="Class label, e.g. B or M")
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("train", help="Train one algorithm on a feature CSV")
    p.add_argument("dataset", type=Path)
    p.add_argument("--algorithm", choices=list(ALGORITHMS), required=True)
    p.add_argument("--config", type=Path, default=None, help="JSON parameters for the algorithm")
    p.add_argument("--rng-seed", type=int, default=None, help=f"Override rng_seed (default {RANDOM_SEED})")
    p.add_argument("--out", type=Path, required=True, help="Model JSON")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="Confusion matrix and screening metrics")
    p.add_argument("--outcomes", type=Path, default=None, help="CSV case_id,prediction,label")
    p.add_argument("--model", type=Path, default=None)
    p.add_argument("--dataset", type=Path, default=None)
    p.add_argument("--positive", default=None, help=f"Positive class label (default {POSITIVE_LABEL})")
    p.add_argument("--out", type=Path, default=None, help="Metrics JSON")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("compare", help="Saliency vs region growing vs active contour")
    p.add_argument("image", type=Path, nargs="?", default=None)
    seed_options(p, required=False)
    p.add_argument("--suite", type=Path, default=None, help="Phantom manifest JSONL")
    p.add_argument("--ground-truth", type=Path, default=None, help="Ground-truth mask PGM")
    p.add_argument("--config", type=Path, default=None, help="JSON CompareConfig")
    p.add_argument("--out", type=Path, default=OUTPUTS_DIR / "compare", help="Output directory")
    p.add_argument("--record-timings", action="store_true", help="Include per-method seconds in the JSON")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("phantom", help="Generate a synthetic mass phantom and its mask")
    p.add_argument("--out", type=Path, required=True, help="Phantom PGM path")
    p.add_argument("--spec", type=Path, default=None, help="PhantomSpec JSON (overrides the shape flags)")
    p.add_argument("--shape", choices=sorted(SHAPES), default="disc")
    p.add_argument("--size", type=float, default=50.0, help="Disc radius, blob sigma or ellipse semi-axis a")
    p.add_argument("--b", type=float, default=None, help="Ellipse semi-axis b (default size/2)")
    p.add_argument("--angle", type=float, default=0.0, help="Ellipse angle in degrees")
    p.add_argument("--center", default=None, help="x,y (default: image centre)")
    p.add_argument("--width", type=int, default=200)
    p.add_argument("--height", type=int, default=200)
    p.add_argument("--fg", type=int, default=200)
    p.add_argument("--bg", type=int, default=50)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--rng-seed", type=int, default=RANDOM_SEED)
    p.add_argument("--ascii", action="store_true", help="Write P2 instead of P5")
    p.set_defaults(func=cmd_phantom)
    return parser


def _fail(e: BaseException, code: int) -> int:
    print(f"{type(e).__name__}: {e}", file=sys.stderr)
    return code


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else LOG_LEVEL,
        format="%(asctime)s [%(levelname)s] %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except SEGMENTATION_ERRORS as e:
        return _fail(e, EXIT_SEGMENTATION)
    except SCHEMA_ERRORS as e:
        return _fail(e, EXIT_SCHEMA)
    except (MammoError, OSError) as e:
        return _fail(e, EXIT_INPUT)


if __name__ == "__main__":
    sys.exit(main())
