"""Exact computations on threads, fat-Cantor threads and finite skein truncations.

All coordinates are :class:`fractions.Fraction` values; nothing in the
computational core uses floating point.
"""
from .attachment import AttachmentSpace, FiniteMetric, Piece, ThreadingSpace, attach, threading_distance
from .cantor import GammaPrefix, GapStream, build_thread, next_gap, rational_at, validate_gamma
from .errors import SkeinError
from .exactnum import OpenInterval, Q, Rational, Verdict, fmt, interval_contains, interval_intersects
from .gammastar import (
    FamilyThread,
    GammaStarRun,
    JumpCertificate,
    brute_force_map_search,
    check_trace,
    gamma_star_prefix,
    jump_infeasibility,
)
from .lipmap import (
    PLMap,
    check_interval_criterion,
    clip,
    collapse_maximal,
    find_jumping_gap,
    jump_bound_violation,
    jumps_over,
    lip_const,
    maximal_interval,
    monotone_regularize,
    replace_extremes,
    separation_violation,
    sweeping,
)
from .skein import (
    A,
    B,
    InnerPoint,
    SkeinConfig,
    SkeinTruncation,
    address,
    ancestor,
    ancestor_closure,
    build_skein,
    chain,
    in_ball,
    is_bound,
    isolated_point_obstruction,
    order_of,
    parse_address,
    pseudo_ancestor,
    skein_distance,
    stability_report,
)
from .svg import emit_svg
from .thread import ExtendedInterval, Kind, Thread, from_gaps, line

__version__ = "0.1.0"
