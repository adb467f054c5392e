from .dataset import DATASET_FILE, FaceDataset, build_dataset
from .toyfaces import (
    REGION_NAMES,
    FaceIdentity,
    FaceVariation,
    RenderedFace,
    render_face,
    sample_identity,
    sample_variation,
)

__all__ = [
    "DATASET_FILE",
    "FaceDataset",
    "build_dataset",
    "REGION_NAMES",
    "FaceIdentity",
    "FaceVariation",
    "RenderedFace",
    "render_face",
    "sample_identity",
    "sample_variation",
]
