"""Click-based interactive image segmentation with probability-map modulation."""

from .grid import (
    Click,
    Component,
    Label,
    connected_components,
    distance_to_zero,
    iou,
    read_grid,
    threshold,
    write_grid,
)
from .modulation import (
    ModulationParams,
    compute_big_gamma,
    compute_radius,
    gamma_euclidean,
    gamma_probability,
    median_prob_distance,
    modulate,
)
from .segmenter import (
    BackendInput,
    ClickMaps,
    ReferenceSegmenter,
    ReferenceSegmenterParams,
    encode_clicks,
    make_backend,
)
from .clicksim import SessionTrajectory, first_click, next_click, run_session
from .evalharness import EvalConfig, auc, load_manifest, miou_curve, noc, run_benchmark

__all__ = [
    "Click",
    "Component",
    "Label",
    "connected_components",
    "distance_to_zero",
    "iou",
    "read_grid",
    "threshold",
    "write_grid",
    "ModulationParams",
    "compute_big_gamma",
    "compute_radius",
    "gamma_euclidean",
    "gamma_probability",
    "median_prob_distance",
    "modulate",
    "BackendInput",
    "ClickMaps",
    "ReferenceSegmenter",
    "ReferenceSegmenterParams",
    "encode_clicks",
    "make_backend",
    "SessionTrajectory",
    "first_click",
    "next_click",
    "run_session",
    "EvalConfig",
    "auc",
    "load_manifest",
    "miou_curve",
    "noc",
    "run_benchmark",
]

__version__ = "0.1.0"
