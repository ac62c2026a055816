"""Learn rewrite grammars from grid-based voxel buildings and generate new ones.

The pipeline: a voxel model is segmented into shapes by cost-guided hill
climbing (``inference``), adjacent shapes become rewrite rules shared across
match classes (``grammar``), and a production grows by applying rules either
randomly or interactively (``production``), optionally pruned down to an
enclosed building (``enclosure``). ``metrics`` summarizes shape sets and runs
parameter grids; ``cli`` and ``api`` expose the whole loop.
"""

__version__ = "0.1.0"

from .enclosure import enforce, reachable_sides, sides
from .errors import (
    ConflictingPlacementError,
    DanglingReferenceError,
    DuplicatePositionError,
    EmptyModelError,
    FormatError,
    InvalidShapeError,
    NothingToUndoError,
    UnknownIdError,
    UnsupportedSpecError,
    VoxgramError,
)
from .grammar import (
    ShapeGrammar,
    ShapeLabel,
    ShapeRule,
    applicable_rules,
    induce,
    load_grammar,
    save_grammar,
)
from .inference import (
    InferenceParams,
    SearchOps,
    ShapeSet,
    cost,
    entropy,
    hill_climb,
    initialize,
    load_shape_set,
    merge,
    postprocess,
    save_shape_set,
    split,
)
from .metrics import ShapeSetStats, run_grid, stats
from .model import (
    Block,
    VoxelModel,
    bounding_box,
    load_model,
    neighbors6,
    save_model,
)
from .production import (
    PlacedShape,
    Production,
    apply_choice,
    generate,
    start,
    step_choices,
    to_model,
    undo,
)
from .shapes import (
    GridTransform,
    MatchClass,
    Shape,
    ShapeSpec,
    apply_transform,
    canonicalize,
    check_shape,
    match_classes,
    shapes_match,
)

__all__ = [name for name in dir() if not name.startswith("_")]
