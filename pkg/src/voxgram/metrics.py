"""Shape-set summary statistics and the parameter-grid experiment runner."""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Sequence

from .errors import EmptyModelError
from .inference import InferenceParams, SearchOps, ShapeSet, cost, hill_climb
from .model import VoxelModel
from .shapes import ShapeSpec, match_classes


@dataclass(frozen=True)
class ShapeSetStats:
    """#S, %M, mean blocks per shape, and mean type-count-to-size ratio."""

    num_shapes: int
    pct_matching: float
    mean_size: float
    complexity: float


def stats(shape_set: ShapeSet) -> ShapeSetStats:
    """Summary statistics; a shape "matches" when its class has another member."""
    shapes = shape_set.shapes
    if not shapes:
        raise EmptyModelError("cannot compute statistics for an empty shape set")
    classes = match_classes(shapes)
    matched = sum(len(c.members) for c in classes if len(c.members) >= 2)
    sizes = [len(s.cells) for s in shapes]
    ratios = [len(set(s.cells.values())) / len(s.cells) for s in shapes]
    return ShapeSetStats(
        num_shapes=len(shapes),
        pct_matching=100.0 * matched / len(shapes),
        mean_size=sum(sizes) / len(shapes),
        complexity=sum(ratios) / len(shapes),
    )


@dataclass(frozen=True)
class GridRow:
    model: str
    spec: str
    alpha: float
    ops: str
    overlap: bool
    num_shapes: float
    pct_matching: float
    mean_size: float
    complexity: float
    cost: float
    wall_time_ms: float


def _median(values: Sequence[float]) -> float:
    ordered = sorted(values)
    n = len(ordered)
    mid = n // 2
    if n % 2 == 1:
        return ordered[mid]
    return (ordered[mid - 1] + ordered[mid]) / 2


def run_grid(
    models: Sequence[VoxelModel],
    specs: Sequence[ShapeSpec],
    alphas: Sequence[float],
    ops_list: Sequence[SearchOps],
    overlaps: Sequence[bool],
    plateau_merges: bool = True,
) -> list[GridRow]:
    """One row per (model, parameter combination), then aggregate rows.

    For every combination an ``average`` and a ``median`` pseudo-model row
    summarize the per-model results. Wall time is measured, so only that
    column varies between runs on identical inputs.
    """
    if not models:
        raise EmptyModelError("the corpus is empty")
    if not (specs and alphas and ops_list and overlaps):
        raise ValueError("the parameter grid is empty")
    combos = [
        (spec, alpha, ops, overlap)
        for spec in specs
        for alpha in alphas
        for ops in ops_list
        for overlap in overlaps
    ]
    rows: list[GridRow] = []
    per_combo: dict[tuple, list[GridRow]] = {c: [] for c in combos}
    for m in models:
        for spec, alpha, ops, overlap in combos:
            params = InferenceParams(
                spec=spec,
                alpha=alpha,
                ops=ops,
                overlap=overlap,
                plateau_merges=plateau_merges,
            )
            t0 = time.perf_counter()
            try:
                shape_set = hill_climb(m, params)
            except Exception as exc:
                raise RuntimeError(
                    f"inference failed for model {m.name!r} at "
                    f"spec={spec.value} alpha={alpha} ops={ops.value} overlap={overlap}: {exc}"
                ) from exc
            wall_ms = (time.perf_counter() - t0) * 1000.0
            st = stats(shape_set)
            row = GridRow(
                m.name,
                spec.value,
                alpha,
                ops.value,
                shape_set.overlap,
                st.num_shapes,
                st.pct_matching,
                st.mean_size,
                st.complexity,
                cost(shape_set, alpha),
                wall_ms,
            )
            rows.append(row)
            per_combo[(spec, alpha, ops, overlap)].append(row)
    for combo in combos:
        spec, alpha, ops, overlap = combo
        group = per_combo[combo]
        for label, agg in (("average", lambda v: sum(v) / len(v)), ("median", _median)):
            rows.append(
                GridRow(
                    label,
                    spec.value,
                    alpha,
                    ops.value,
                    overlap,
                    agg([r.num_shapes for r in group]),
                    agg([r.pct_matching for r in group]),
                    agg([r.mean_size for r in group]),
                    agg([r.complexity for r in group]),
                    agg([r.cost for r in group]),
                    agg([r.wall_time_ms for r in group]),
                )
            )
    return rows


CSV_HEADER = "model,spec,alpha,ops,overlap,num_shapes,pct_matching,mean_size,complexity,cost,wall_time_ms"


def rows_to_csv(rows: Sequence[GridRow]) -> str:
    """RFC-4180-style CSV with a header row and '.' decimals."""
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(
            ",".join(
                [
                    r.model,
                    r.spec,
                    format(r.alpha, "g"),
                    r.ops,
                    "true" if r.overlap else "false",
                    format(r.num_shapes, "g"),
                    format(r.pct_matching, ".6g"),
                    format(r.mean_size, ".6g"),
                    format(r.complexity, ".6g"),
                    format(r.cost, ".6g"),
                    format(r.wall_time_ms, ".3f"),
                ]
            )
        )
    return "\n".join(lines) + "\n"
