"""Cap sets over F_3: constructions, exhaustive verification, file I/O, CLI.

A cap set in dimension n is a set of points of F_3^n containing no three
distinct points that sum to zero coordinatewise (equivalently, no line). The
package builds caps and P-sets through recursive product/union constructions,
checks every claimed property exhaustively with a chunked vectorized sweep,
and reads and writes a plain-text set format.
"""
from .errors import (
    CapacityError,
    CapsetError,
    ConstructionError,
    DegenerateInputError,
    DimensionError,
    ExprArityError,
    ExprError,
    ExprEvalError,
    ExprNameError,
    ExprSyntaxError,
    FileFormatError,
    InvalidPointError,
    PreconditionError,
    RankRangeError,
    SeedError,
)
from .f3core import (
    MAX_BITMAP_DIM,
    Point,
    PointSet,
    SpaceBitmap,
    add_mod3,
    collinear,
    mirror_point,
    rank,
    third_point,
    unrank,
    zero_support,
)
from .sweep import resolve_threads, run_sweep
from .verifiers import (
    NAIVE_SIZE_LIMIT,
    VerifyReport,
    check_condition1,
    check_condition2,
    check_condition3,
    is_b_saturated,
    is_cap,
    is_complete_cap,
    is_complete_pset,
    is_odd_pset,
    is_projective_cap,
    is_pset,
    pset_characterization,
    verify_cap_and_complete,
)
from .constructions import (
    FiveBlockInputs,
    ProjectiveCap,
    SIX_PATTERNS,
    THREE_PATTERNS,
    doubling,
    five_block,
    five_block_parts,
    five_block_reports,
    gen_B,
    gen_B_parity,
    mirror_set,
    parity_cap,
    preset_ag6_112,
    preset_ag15,
    preset_ag15_inputs,
    preset_ag15_reports,
    product,
    seed_P,
    six_construction,
    three_construction,
    union_sets,
    unit_pset,
)
from .capfile import read_capset, write_capset
from .expr import evaluate, parse

__version__ = "1.0.0"

__all__ = [
    "CapacityError",
    "CapsetError",
    "ConstructionError",
    "DegenerateInputError",
    "DimensionError",
    "ExprArityError",
    "ExprError",
    "ExprEvalError",
    "ExprNameError",
    "ExprSyntaxError",
    "FileFormatError",
    "FiveBlockInputs",
    "InvalidPointError",
    "MAX_BITMAP_DIM",
    "NAIVE_SIZE_LIMIT",
    "Point",
    "PointSet",
    "PreconditionError",
    "ProjectiveCap",
    "RankRangeError",
    "SIX_PATTERNS",
    "SeedError",
    "SpaceBitmap",
    "THREE_PATTERNS",
    "VerifyReport",
    "add_mod3",
    "check_condition1",
    "check_condition2",
    "check_condition3",
    "collinear",
    "doubling",
    "evaluate",
    "five_block",
    "five_block_parts",
    "five_block_reports",
    "gen_B",
    "gen_B_parity",
    "is_b_saturated",
    "is_cap",
    "is_complete_cap",
    "is_complete_pset",
    "is_odd_pset",
    "is_projective_cap",
    "is_pset",
    "mirror_point",
    "mirror_set",
    "parity_cap",
    "parse",
    "preset_ag6_112",
    "preset_ag15",
    "preset_ag15_inputs",
    "preset_ag15_reports",
    "product",
    "pset_characterization",
    "rank",
    "read_capset",
    "resolve_threads",
    "run_sweep",
    "seed_P",
    "six_construction",
    "third_point",
    "three_construction",
    "union_sets",
    "unit_pset",
    "unrank",
    "verify_cap_and_complete",
    "write_capset",
    "zero_support",
]
