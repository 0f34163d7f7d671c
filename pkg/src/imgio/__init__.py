from src.imgio.annotations import (
    Abnormality,
    Annotation,
    Severity,
    Tissue,
    find_annotation,
    parse_annotations,
    read_annotations,
)
from src.imgio.pgm import Image, image_to_mask, mask_to_image, parse_pgm, read_pgm, save_pgm, write_pgm
from src.imgio.phantoms import Disc, Ellipse, GaussianBlob, PhantomSpec, synth_phantom

__all__ = [
    "Abnormality",
    "Annotation",
    "Disc",
    "Ellipse",
    "GaussianBlob",
    "Image",
    "PhantomSpec",
    "Severity",
    "Tissue",
    "find_annotation",
    "image_to_mask",
    "mask_to_image",
    "parse_annotations",
    "parse_pgm",
    "read_annotations",
    "read_pgm",
    "save_pgm",
    "synth_phantom",
    "write_pgm",
]
