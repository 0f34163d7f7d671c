from src.features.fractal import box_counting_dimension, fractal_dimension
from src.features.radiomics import FEATURE_NAMES, FeatureVector, extract_all, texture
from src.features.shape import RadialProfile, area, compactness, perimeter, radial_profile, smoothness, symmetry

__all__ = [
    "FEATURE_NAMES",
    "FeatureVector",
    "RadialProfile",
    "area",
    "box_counting_dimension",
    "compactness",
    "extract_all",
    "fractal_dimension",
    "perimeter",
    "radial_profile",
    "smoothness",
    "symmetry",
    "texture",
]
