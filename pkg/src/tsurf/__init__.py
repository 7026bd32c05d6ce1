"""tsurf: exact translation-surface geometry and geodesic statistics."""

from .circles import (
    CellGrid,
    DirectionWindow,
    MeasureHistogram,
    antipodal_direction,
    circle_measure,
    direction_window,
    region_volume,
)
from .errors import (
    BracketFailure,
    DegenerateRadius,
    DerivativeMismatch,
    Disconnected,
    EdgeMismatch,
    EmptySCC,
    InvalidParams,
    MismatchedCone,
    NonConvexPolygon,
    NoSingularities,
    ParseError,
    TruncationError,
    TsurfError,
)
from .geodesics import (
    ClosedGeodesic,
    GeodesicCensus,
    enumerate_closed,
    occupancy,
    pi_stats,
    word_length,
)
from .paths import (
    ConcatGraph,
    PathCensus,
    SaddlePath,
    ball_volume_closed,
    ball_volume_grid,
    build_concat_graph,
    circle_length,
    circle_length_grid,
    circle_slope,
    complete_graph,
    count_paths,
    enumerate_paths,
    path_length_census,
)
from .spectral import (
    EntropyEstimate,
    SpectralResult,
    WeightMatrix,
    solve_entropy,
    spectral_radius,
    truncated_scc,
    v_weight,
    v_weights,
    weight_matrix,
)
from .surface import (
    ConePoint,
    TranslationSurface,
    builtin_surface,
    load_surface,
    load_surface_file,
    scale_surface,
)
from .unfold import (
    SaddleConnection,
    enumerate_saddle_connections,
    trace_ray,
)

__all__ = [
    "BracketFailure",
    "CellGrid",
    "ClosedGeodesic",
    "ConcatGraph",
    "ConePoint",
    "DegenerateRadius",
    "DerivativeMismatch",
    "DirectionWindow",
    "Disconnected",
    "EdgeMismatch",
    "EmptySCC",
    "EntropyEstimate",
    "GeodesicCensus",
    "InvalidParams",
    "MeasureHistogram",
    "MismatchedCone",
    "NonConvexPolygon",
    "NoSingularities",
    "ParseError",
    "PathCensus",
    "SaddleConnection",
    "SaddlePath",
    "SpectralResult",
    "TranslationSurface",
    "TruncationError",
    "TsurfError",
    "WeightMatrix",
    "antipodal_direction",
    "ball_volume_closed",
    "ball_volume_grid",
    "build_concat_graph",
    "builtin_surface",
    "circle_length",
    "circle_length_grid",
    "circle_measure",
    "circle_slope",
    "complete_graph",
    "count_paths",
    "direction_window",
    "enumerate_closed",
    "enumerate_paths",
    "enumerate_saddle_connections",
    "load_surface",
    "load_surface_file",
    "occupancy",
    "path_length_census",
    "pi_stats",
    "region_volume",
    "scale_surface",
    "solve_entropy",
    "spectral_radius",
    "trace_ray",
    "truncated_scc",
    "v_weight",
    "v_weights",
    "weight_matrix",
    "word_length",
]

__version__ = "0.1.0"
