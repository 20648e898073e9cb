"""Flower-cluster reports from per-frame detections, and detection scoring."""
from ._kernels import BACKEND
from .annotation_io import (BoundingBox, Category, Detection, FrameAnnotations, Mode,
                            parse_label_file, parse_label_line, serialize_label_file)
from .clustering import (ClusterAssignment, KmeansConfig, KSelectionResult, assign_cluster_ids,
                         cluster_centroids, kmeans, mean_silhouette, select_k,
                         silhouette_coefficient)
from .evaluation import (ConfusionCounts, EvalReport, average_precision, evaluate_dataset,
                         match_detections, mean_average_precision, precision, recall)
from .geometry import Point2, box_centroid, euclidean_distance, iou
from .pipeline import FrameClusterReport, PipelineConfig, process_frame, render_overlay, run_sequence
from .synth import SceneSpec, SyntheticScene, generate_scene, perturb_detections

__version__ = "0.1.0"
