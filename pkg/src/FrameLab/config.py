"""Configuration file for the project."""

from pathlib import Path

DEFAULT_TOLERANCE = 1e-10  # absolute, for order-one frame quantities
RANK_TOLERANCE = 1e-8  # relative to the largest singular value
DUAL_TOLERANCE = 1e-8  # ||U G^* - I|| accepted for a user-supplied dual

OVERFLOW_GUARD = 1e12  # orbit element norms above this count as divergence
UNDERFLOW_FLOOR = 1e-300  # smallest scale factor a hypercyclic plan may use

FLOAT_DIGITS = 17

REPORT_FILE_NAME = "report.json"
TIMING_FILE_NAME = "timing.json"
DEFAULT_OUTPUT_DIR = Path("framelab-output")

DEFAULT_SEED = 0
RANDOM_PROBES = 128  # unit vectors sampled for randomized frame-inequality checks

EXPERIMENT_TIMEOUT = 300  # seconds

MAX_DENSE_DIM = 4096  # larger ambient sections are only handled by support-compressed routines
