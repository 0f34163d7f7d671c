from src.segmentation.active_contour import (
    ConservativeParams,
    GreedySnake,
    SnakeParams,
    active_contour,
    conservative_contour,
)
from src.segmentation.geometry import Contour, contour_from_mask, fill_contour
from src.segmentation.region_growing import RegionGrowingParams, region_growing
from src.segmentation.saliency import (
    DifferenceHistogram,
    RegionPartition,
    SaliencyConfig,
    SaliencyMap,
    difference_histogram,
    partition_regions,
    saliency_map,
    saliency_pipeline,
    saliency_segment,
)

__all__ = [
    "ConservativeParams",
    "Contour",
    "DifferenceHistogram",
    "GreedySnake",
    "RegionGrowingParams",
    "RegionPartition",
    "SaliencyConfig",
    "SaliencyMap",
    "SnakeParams",
    "active_contour",
    "conservative_contour",
    "contour_from_mask",
    "difference_histogram",
    "fill_contour",
    "partition_regions",
    "region_growing",
    "saliency_map",
    "saliency_pipeline",
    "saliency_segment",
]
