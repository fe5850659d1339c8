"""Computations in the epsilon-spine of outer space at small rank.

Marked metric graphs with exact free-group markings, Lipschitz distances
via candidate loops, length pairings with rational currents, lines of
minima through per-topology linear programs, and a diagnostics suite that
samples the contraction inequalities of positive current pairs.
"""

from .words import (
    Automorphism,
    NielsenMove,
    Word,
    apply,
    canonical_representative,
    compose,
    cyclic_reduce,
    elementary_automorphisms,
    format_word,
    invert,
    parse_word,
    power,
    whitehead_length_reduce,
)
from .graphs import (
    Edge,
    LoopPath,
    MarkedGraph,
    candidates,
    collapse_edge,
    crossing_vector,
    embedded_cycles,
    expansions,
    in_spine,
    normalize_volume,
    parallel_graph,
    rescale,
    rose,
    systole,
    transform,
    translation_length,
    unit_rose,
    with_lengths,
)
from .currents import (
    IwipApproximation,
    PositivityReport,
    RationalCurrent,
    add,
    apply_to_current,
    dual,
    exp_combination,
    iwip_pair_approx,
    normalize_at,
    pairing,
    positivity_check,
    scale,
)
from .lipschitz import StretchReport, d_L, d_sym, sigma_scale, stretch
from .minima import (
    AxisSample,
    InfeasibleSpine,
    MinResult,
    axis,
    balance_param,
    max_systole_lengths,
    min_on_topology,
    minimize,
    project,
    translate_axis,
)
from .sampling import (
    SampleError,
    balanced_point,
    ball_points,
    repair,
    spine_points,
)
from .diagnostics import (
    BFit,
    BallProjection,
    ClauseResult,
    ContractionReport,
    GeodesicDefect,
    MinislineReport,
    MinislineRow,
    SamplerConfig,
    ThinGeodesicReport,
    TruncatedAxis,
    ball_projection_diameter,
    check_contracting,
    check_minisline,
    coarse_defect,
    fit_B,
    overlap_tau,
    thin_geodesic_check,
    truncated_axis,
)
from .jsonio import (
    dump_current,
    dump_graph,
    load_automorphism,
    load_current,
    load_graph,
)

__all__ = [
    "Automorphism",
    "AxisSample",
    "BFit",
    "BallProjection",
    "ClauseResult",
    "ContractionReport",
    "Edge",
    "GeodesicDefect",
    "InfeasibleSpine",
    "IwipApproximation",
    "LoopPath",
    "MarkedGraph",
    "MinResult",
    "MinislineReport",
    "MinislineRow",
    "NielsenMove",
    "PositivityReport",
    "RationalCurrent",
    "SampleError",
    "SamplerConfig",
    "StretchReport",
    "ThinGeodesicReport",
    "TruncatedAxis",
    "Word",
    "add",
    "apply",
    "apply_to_current",
    "axis",
    "balance_param",
    "ball_points",
    "ball_projection_diameter",
    "balanced_point",
    "candidates",
    "canonical_representative",
    "check_contracting",
    "check_minisline",
    "coarse_defect",
    "collapse_edge",
    "compose",
    "crossing_vector",
    "cyclic_reduce",
    "d_L",
    "d_sym",
    "dual",
    "dump_current",
    "dump_graph",
    "elementary_automorphisms",
    "embedded_cycles",
    "exp_combination",
    "expansions",
    "fit_B",
    "format_word",
    "in_spine",
    "invert",
    "iwip_pair_approx",
    "load_automorphism",
    "load_current",
    "load_graph",
    "max_systole_lengths",
    "min_on_topology",
    "minimize",
    "normalize_at",
    "normalize_volume",
    "overlap_tau",
    "pairing",
    "parallel_graph",
    "parse_word",
    "positivity_check",
    "power",
    "project",
    "repair",
    "rescale",
    "rose",
    "scale",
    "sigma_scale",
    "spine_points",
    "stretch",
    "systole",
    "thin_geodesic_check",
    "transform",
    "translate_axis",
    "translation_length",
    "truncated_axis",
    "unit_rose",
    "with_lengths",
]
