"""Persistent homology of binary and grayscale images under morphological filtrations."""

__version__ = "0.1.0"

from .cubical import FilteredCubicalComplex, betti_oracle, build_complex
from .diagram import (
    DIAGONAL,
    BottleneckResult,
    DeathHistogram,
    bottleneck,
    bottleneck_distance,
    death_histogram,
    normalize,
    parse_pd,
    read_pd,
    serialize_pd,
    write_pd,
)
from .errors import *  # noqa: F401,F403
from .filtration import (
    NEVER,
    EntryTimeGrid,
    FilterKind,
    FiltrationSpec,
    build_filtration,
    from_nested_sequence,
    mm_filtration,
    sublevel_filtration,
    verify_bifiltration_square,
)
from .image import (
    BinaryImage,
    GrayscaleImage,
    ImageFormat,
    add_salt_noise,
    load_image,
    read_image,
    serialize_image,
    threshold,
    write_image,
)
from .morphology import StructuringElement, closing, dilate, erode, opening, parse_se, square_se
from .persistence import INFINITE, PersistenceDiagram, betti_at, compute_persistence
from .pipeline import PipelineConfig, compare_sequences, mm_persistence, pipeline_grayscale
from .plotting import PlotKind, emit_svg
