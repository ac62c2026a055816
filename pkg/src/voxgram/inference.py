"""Shape-set inference: cost-guided segmentation of a voxel model.

A shape set is scored by (1 + #shapes)^alpha times the summed per-shape
block-type entropy. Hill climbing scans merge and split moves in a fixed
order and applies the first one that lowers the cost (first-improvement).
Plateau merges — equal cost, one shape fewer — are accepted by default;
without them nothing ever merges inside single-type regions, whose entropy
is zero everywhere.

Merging planar shapes fixes one axis for good, so the overlap variant seeds
every block as three one-block shapes, one per plane family, and only merges
within a family. The resulting set may contain overlapping shapes.
"""
from __future__ import annotations

import math
import warnings
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Mapping

from .errors import EmptyModelError, FormatError, UnknownIdError
from .model import NEIGHBOR_OFFSETS, Pos, VoxelModel, cells_bounding_box, zyx_key
from .shapes import AXES, Shape, ShapeSpec, check_shape, coherent, planar_axes

#: Tolerance for "equal cost" on the log scale; see _log_cost.
EPS = 1e-9


class SearchOps(str, Enum):
    """Which local-search moves hill climbing may use."""

    MERGE = "merge"
    SPLIT = "split"
    BOTH = "both"


@dataclass(frozen=True)
class InferenceParams:
    spec: ShapeSpec = ShapeSpec.RECTANGULAR
    alpha: float = 1.0
    ops: SearchOps = SearchOps.MERGE
    overlap: bool = False
    plateau_merges: bool = True
    max_steps: int | None = None

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError(f"alpha must be non-negative, got {self.alpha}")
        if self.max_steps is not None and self.max_steps < 0:
            raise ValueError("max_steps must be positive")


@dataclass
class ShapeSet:
    """Shapes inferred from one source model.

    Every shape's blocks come from the source; together they cover it. When
    ``overlap`` is false the shapes form an exact partition.
    """

    shapes: list[Shape]
    spec: ShapeSpec
    overlap: bool
    model_name: str
    source: VoxelModel | None = None

    def shape(self, sid: int) -> Shape:
        for s in self.shapes:
            if s.sid == sid:
                return s
        raise UnknownIdError(f"no shape with id {sid}")

    def ids(self) -> list[int]:
        return [s.sid for s in self.shapes]

    def validate(self, require_irredundant: bool = True) -> None:
        """Assert the shape-set invariants; raises on violation."""
        seen = set()
        for s in self.shapes:
            if s.sid in seen:
                raise FormatError(f"duplicate shape id {s.sid}")
            seen.add(s.sid)
            violation = check_shape(s.cells, self.spec, s.plane)
            if violation:
                raise FormatError(f"shape {s.sid} violates its spec: {violation}")
        if self.source is not None:
            for s in self.shapes:
                for p, kind in s.cells.items():
                    if self.source.cells.get(p) != kind:
                        raise FormatError(
                            f"shape {s.sid} block {list(p)} disagrees with the source model"
                        )
            counts = Counter(p for s in self.shapes for p in s.cells)
            missing = [p for p in self.source.cells if p not in counts]
            if missing:
                raise FormatError(f"source blocks not covered: {sorted(missing)[:3]}...")
            if not self.overlap:
                multi = [p for p, n in counts.items() if n > 1]
                if multi:
                    raise FormatError(f"blocks covered twice without overlap: {sorted(multi)[:3]}")
        if require_irredundant:
            for s in self.shapes:
                for t in self.shapes:
                    if s.sid != t.sid and set(s.cells) <= set(t.cells):
                        raise FormatError(f"shape {s.sid} is covered by shape {t.sid}")


# ------------------------------------------------------------------ cost model


def entropy(shape: Shape | Mapping[Pos, str] | Counter) -> float:
    """Block-type entropy of a shape, in bits."""
    if isinstance(shape, Shape):
        counts = shape.kind_counts()
    elif isinstance(shape, Counter):
        counts = shape
    else:
        counts = Counter(shape.values())
    return _entropy_of_counts(counts)


def _entropy_of_counts(counts: Counter) -> float:
    total = sum(counts.values())
    out = 0.0
    for n in counts.values():
        p = n / total
        if p < 1.0:
            out -= p * math.log2(p)
    return out


def _pow_safe(base: int, alpha: float) -> float:
    try:
        return float(base) ** alpha
    except OverflowError:
        return float("inf")


def cost(shape_set: ShapeSet, alpha: float) -> float:
    """(1 + #shapes)^alpha times the summed shape entropies."""
    total = math.fsum(entropy(s) for s in shape_set.shapes)
    if total == 0.0:
        return 0.0
    return _pow_safe(1 + len(shape_set.shapes), alpha) * total


def _log_cost(n_shapes: int, ent_total: float, alpha: float) -> float:
    """Cost on a log scale, safe against overflow at large alpha.

    A zero entropy sum maps to -inf, so any zero-entropy state compares
    equal to any other and strictly below every positive-cost state.
    """
    if ent_total <= 1e-15:
        return float("-inf")
    return alpha * math.log1p(n_shapes) + math.log(ent_total)


def _improves(new_lc: float, cur_lc: float, plateau_ok: bool) -> bool:
    if new_lc < cur_lc - EPS:
        return True
    if plateau_ok:
        if new_lc == float("-inf") and cur_lc == float("-inf"):
            return True
        return new_lc <= cur_lc + EPS
    return False


# ------------------------------------------------------------- public moves


def _merged_cells(a: Shape, b: Shape) -> dict[Pos, str]:
    out = dict(a.cells)
    out.update(b.cells)
    return out


def merge(shape_set: ShapeSet, i: int, j: int) -> ShapeSet | None:
    """Combine shapes i and j into one; None when the union is illegal.

    In the three-plane overlap mode, merges across plane families are
    illegal even when the union would be planar.
    """
    if i == j:
        raise ValueError("cannot merge a shape with itself")
    a, b = shape_set.shape(i), shape_set.shape(j)
    plane = None
    if shape_set.overlap and shape_set.spec != ShapeSpec.FREE3D:
        if a.plane != b.plane:
            return None
        plane = a.plane
    union = _merged_cells(a, b)
    if check_shape(union, shape_set.spec, plane):
        return None
    sid = max(shape_set.ids()) + 1
    merged = Shape.build(sid, union, shape_set.spec, plane, check=False)
    shapes = [s for s in shape_set.shapes if s.sid not in (i, j)] + [merged]
    return ShapeSet(shapes, shape_set.spec, shape_set.overlap, shape_set.model_name, shape_set.source)


def split(shape_set: ShapeSet, i: int, part: Iterable[Pos]) -> ShapeSet | None:
    """Split shape i into ``part`` and its remainder; None when either half is illegal."""
    s = shape_set.shape(i)
    part = set(part)
    if not part or not part < set(s.cells):
        raise ValueError("part must be a proper non-empty subset of the shape's blocks")
    first = {p: s.cells[p] for p in part}
    rest = {p: kind for p, kind in s.cells.items() if p not in part}
    if check_shape(first, shape_set.spec, s.plane) or check_shape(rest, shape_set.spec, s.plane):
        return None
    sid = max(shape_set.ids()) + 1
    halves = [
        Shape.build(sid, first, shape_set.spec, s.plane, check=False),
        Shape.build(sid + 1, rest, shape_set.spec, s.plane, check=False),
    ]
    shapes = [t for t in shape_set.shapes if t.sid != i] + halves
    return ShapeSet(shapes, shape_set.spec, shape_set.overlap, shape_set.model_name, shape_set.source)


# ------------------------------------------------------------- initialization


def _warn_overlap_ignored(why: str) -> None:
    warnings.warn(f"overlap is ignored {why}", RuntimeWarning, stacklevel=3)


def initialize(model: VoxelModel, params: InferenceParams) -> ShapeSet:
    """Starting shape set: minimal for merge-family runs, maximal for splits."""
    if not model.cells:
        raise EmptyModelError(f"model {model.name!r} has no blocks")
    overlap = params.overlap
    if overlap and params.spec == ShapeSpec.FREE3D:
        _warn_overlap_ignored("for the 3d spec (there are no plane families)")
        overlap = False
    if overlap and params.ops == SearchOps.SPLIT:
        _warn_overlap_ignored("for split-only runs (only merge-family runs seed per-plane shapes)")
        overlap = False

    order = sorted(model.cells, key=zyx_key)
    shapes: list[Shape] = []
    if params.ops == SearchOps.SPLIT:
        shapes = _maximal_shapes(model, params.spec)
    elif overlap:
        sid = 0
        for p in order:
            for axis in AXES:
                shapes.append(Shape(sid, {p: model.cells[p]}, params.spec, axis))
                sid += 1
    else:
        for sid, p in enumerate(order):
            shapes.append(Shape.build(sid, {p: model.cells[p]}, params.spec, check=False))
    return ShapeSet(shapes, params.spec, overlap, model.name, model)


def _largest_rectangle(slice_cells: set[tuple[int, int]]) -> set[tuple[int, int]]:
    """Largest filled axis-aligned rectangle inside a 2D cell set.

    Brute force over corner pairs with early pruning; slices are desk-scale.
    Ties break toward the smallest (v0, u0, height, width).
    """
    us = sorted({u for u, _ in slice_cells})
    vs = sorted({v for _, v in slice_cells})
    best: tuple[int, int, int, int, int] | None = None  # (-area, v0, u0, h, w)
    for u0 in us:
        for v0 in vs:
            if (u0, v0) not in slice_cells:
                continue
            max_u = u0
            while (max_u + 1, v0) in slice_cells:
                max_u += 1
            v1 = v0
            while True:
                row_ok = all((u, v1) in slice_cells for u in range(u0, max_u + 1))
                if not row_ok:
                    # shrink width until the row fits
                    while max_u > u0 and not all(
                        (u, v1) in slice_cells for u in range(u0, max_u + 1)
                    ):
                        max_u -= 1
                    if not all((u, v1) in slice_cells for u in range(u0, max_u + 1)):
                        break
                w = max_u - u0 + 1
                h = v1 - v0 + 1
                key = (-(w * h), v0, u0, h, w)
                if best is None or key < best:
                    best = key
                v1 += 1
    assert best is not None
    area, v0, u0, h, w = -best[0], best[1], best[2], best[3], best[4]
    return {(u, v) for u in range(u0, u0 + w) for v in range(v0, v0 + h)}


def _connected_components(cells: set[Pos]) -> list[set[Pos]]:
    out = []
    todo = set(cells)
    while todo:
        seed = min(todo, key=zyx_key)
        comp = {seed}
        todo.remove(seed)
        stack = [seed]
        while stack:
            x, y, z = stack.pop()
            for dx, dy, dz in NEIGHBOR_OFFSETS:
                q = (x + dx, y + dy, z + dz)
                if q in todo:
                    todo.remove(q)
                    comp.add(q)
                    stack.append(q)
        out.append(comp)
    return out


def _maximal_shapes(model: VoxelModel, spec: ShapeSpec) -> list[Shape]:
    """Greedy decomposition into the largest spec-valid shapes."""
    uncovered = set(model.cells)
    shapes: list[Shape] = []
    sid = 0
    while uncovered:
        if spec == ShapeSpec.FREE3D:
            comps = _connected_components(uncovered)
            picked = max(comps, key=lambda c: (len(c), [-v for v in zyx_key(min(c, key=zyx_key))]))
            plane = None
        else:
            best: tuple[int, int, int, set[Pos]] | None = None
            for axis in AXES:
                coords = sorted({p[axis] for p in uncovered})
                u_axis, v_axis = [a for a in AXES if a != axis]
                for c in coords:
                    in_slice = {p for p in uncovered if p[axis] == c}
                    flat = {(p[u_axis], p[v_axis]) for p in in_slice}
                    if spec == ShapeSpec.RECTANGULAR:
                        rect_uv = _largest_rectangle(flat)
                        cand = {_unflatten(axis, c, u_axis, v_axis, uv) for uv in rect_uv}
                    else:
                        comps2d = _connected_components_2d(flat)
                        comp = max(comps2d, key=lambda c2: (len(c2), sorted(c2)))
                        cand = {_unflatten(axis, c, u_axis, v_axis, uv) for uv in comp}
                    if best is None or len(cand) > best[0]:
                        best = (len(cand), axis, c, cand)
            assert best is not None
            picked, plane = best[3], best[1]
        cells = {p: model.cells[p] for p in sorted(picked, key=zyx_key)}
        shapes.append(Shape.build(sid, cells, spec, plane, check=False))
        uncovered -= picked
        sid += 1
    return shapes


def _unflatten(axis: int, c: int, u_axis: int, v_axis: int, uv: tuple[int, int]) -> Pos:
    p = [0, 0, 0]
    p[axis] = c
    p[u_axis], p[v_axis] = uv
    return tuple(p)


def _connected_components_2d(cells: set[tuple[int, int]]) -> list[set[tuple[int, int]]]:
    out = []
    todo = set(cells)
    while todo:
        seed = min(todo)
        comp = {seed}
        todo.remove(seed)
        stack = [seed]
        while stack:
            u, v = stack.pop()
            for q in ((u + 1, v), (u - 1, v), (u, v + 1), (u, v - 1)):
                if q in todo:
                    todo.remove(q)
                    comp.add(q)
                    stack.append(q)
        out.append(comp)
    return out


# ------------------------------------------------------------------ hill climb


@dataclass
class StepInfo:
    """Passed to the hill_climb on_step callback after each accepted move."""

    kind: str  # "merge" or "split"
    cost_before: float
    cost_after: float
    log_cost_before: float
    log_cost_after: float
    n_shapes: int


@dataclass
class _Rec:
    sid: int
    cells: dict[Pos, str]
    counts: Counter
    ent: float
    planes: dict[int, int]
    tag: int | None
    lo: Pos
    hi: Pos

    @staticmethod
    def of(shape: Shape) -> "_Rec":
        counts = Counter(shape.cells.values())
        lo, hi = cells_bounding_box(shape.cells)
        return _Rec(
            shape.sid,
            dict(shape.cells),
            counts,
            _entropy_of_counts(counts),
            planar_axes(shape.cells),
            shape.plane,
            lo,
            hi,
        )


class _Climber:
    """Mutable search state. Ids grow monotonically; scans are id-ordered."""

    def __init__(self, initial: ShapeSet, params: InferenceParams):
        self.params = params
        self.spec = initial.spec
        self.three_plane = initial.overlap
        self.recs: dict[int, _Rec] = {}
        for s in initial.shapes:
            rec = _Rec.of(s)
            if not self.three_plane:
                rec.tag = None  # plane is re-resolved when shapes are rebuilt
            self.recs[s.sid] = rec
        self.next_sid = max(self.recs) + 1
        self.ent_total = math.fsum(r.ent for r in self.recs.values())
        # cell ownership per plane family (a single None family when not 3-plane)
        self.owners: dict[int | None, dict[Pos, int]] = {}
        for r in self.recs.values():
            fam = self.owners.setdefault(r.tag if self.three_plane else None, {})
            for p in r.cells:
                fam[p] = r.sid
        self.adj: dict[int, set[int]] = {sid: set() for sid in self.recs}
        for r in self.recs.values():
            self._scan_adjacency(r)

    def _family(self, rec: _Rec) -> dict[Pos, int]:
        return self.owners[rec.tag if self.three_plane else None]

    def _scan_adjacency(self, rec: _Rec) -> None:
        fam = self._family(rec)
        for x, y, z in rec.cells:
            for dx, dy, dz in NEIGHBOR_OFFSETS:
                other = fam.get((x + dx, y + dy, z + dz))
                if other is not None and other != rec.sid:
                    self.adj[rec.sid].add(other)
                    self.adj[other].add(rec.sid)

    # -- move evaluation ---------------------------------------------------

    def _merge_union_plane(self, a: _Rec, b: _Rec) -> tuple[bool, int | None]:
        """Whether the union of a and b satisfies the spec, and on которой plane."""
        if self.spec == ShapeSpec.FREE3D:
            return True, None
        shared = {ax: c for ax, c in a.planes.items() if b.planes.get(ax) == c}
        if self.three_plane:
            if a.tag != b.tag or a.tag not in shared:
                return False, None
            shared = {a.tag: shared[a.tag]}
        if not shared:
            return False, None
        if self.spec == ShapeSpec.PLANAR2D:
            return True, min(shared)
        size = len(a.cells) + len(b.cells)
        for ax in sorted(shared):
            u, v = [w for w in AXES if w != ax]
            lo_u, hi_u = min(a.lo[u], b.lo[u]), max(a.hi[u], b.hi[u])
            lo_v, hi_v = min(a.lo[v], b.lo[v]), max(a.hi[v], b.hi[v])
            if (hi_u - lo_u + 1) * (hi_v - lo_v + 1) == size:
                return True, ax
        return False, None

    def _find_merge(self, cur_lc: float) -> tuple[int, int, float] | None:
        plateau = self.params.plateau_merges
        alpha = self.params.alpha
        n = len(self.recs)
        for i in sorted(self.adj):
            for j in sorted(self.adj[i]):
                if j <= i:
                    continue
                a, b = self.recs[i], self.recs[j]
                ok, _ = self._merge_union_plane(a, b)
                if not ok:
                    continue
                ent_m = _entropy_of_counts(a.counts + b.counts)
                new_total = self.ent_total - a.ent - b.ent + ent_m
                new_lc = _log_cost(n - 1, new_total, alpha)
                if _improves(new_lc, cur_lc, plateau):
                    return i, j, new_lc
        return None

    def _split_candidates(self, rec: _Rec):
        """Yield candidate parts in a deterministic order.

        Axis cuts come first (axis ascending, cut coordinate ascending), then
        single-block peels for non-rectangular specs.
        """
        cells = rec.cells
        for axis in AXES:
            lo, hi = rec.lo[axis], rec.hi[axis]
            for cut in range(lo + 1, hi + 1):
                yield {p for p in cells if p[axis] < cut}
        if self.spec != ShapeSpec.RECTANGULAR:
            for p in sorted(cells, key=zyx_key):
                yield {p}

    def _split_legal(self, rec: _Rec, part: set[Pos]) -> bool:
        rest = set(rec.cells) - part
        if not part or not rest:
            return False
        if self.spec == ShapeSpec.RECTANGULAR:
            return True  # axis-aligned halves of a filled rectangle stay rectangles
        small, big = (part, rest) if len(part) <= len(rest) else (rest, part)
        return coherent(small) and coherent(big)

    def _find_split(self, cur_lc: float) -> tuple[int, set[Pos], float] | None:
        alpha = self.params.alpha
        n = len(self.recs)
        for sid in sorted(self.recs):
            rec = self.recs[sid]
            if len(rec.cells) < 2:
                continue
            for part in self._split_candidates(rec):
                if not self._split_legal(rec, part):
                    continue
                ca = Counter(rec.cells[p] for p in part)
                cb = rec.counts - ca
                new_total = self.ent_total - rec.ent + _entropy_of_counts(ca) + _entropy_of_counts(cb)
                new_lc = _log_cost(n + 1, new_total, alpha)
                if new_lc < cur_lc - EPS:
                    return sid, part, new_lc
        return None

    # -- move application ----------------------------------------------------

    def _retire(self, sid: int) -> _Rec:
        rec = self.recs.pop(sid)
        for other in self.adj.pop(sid):
            self.adj[other].discard(sid)
        fam = self._family(rec)
        for p in rec.cells:
            if fam.get(p) == sid:
                del fam[p]
        return rec

    def _admit(self, cells: dict[Pos, str], tag: int | None) -> int:
        sid = self.next_sid
        self.next_sid += 1
        counts = Counter(cells.values())
        lo, hi = cells_bounding_box(cells)
        rec = _Rec(sid, cells, counts, _entropy_of_counts(counts), planar_axes(cells), tag, lo, hi)
        self.recs[sid] = rec
        fam = self._family(rec)
        for p in cells:
            fam[p] = sid
        self.adj[sid] = set()
        self._scan_adjacency(rec)
        return sid

    def apply_merge(self, i: int, j: int) -> None:
        a, b = self._retire(i), self._retire(j)
        union = dict(a.cells)
        union.update(b.cells)
        self._admit(union, a.tag)
        self.ent_total = math.fsum(r.ent for r in sorted_recs(self.recs))

    def apply_split(self, sid: int, part: set[Pos]) -> None:
        rec = self._retire(sid)
        first = {p: rec.cells[p] for p in sorted(part, key=zyx_key)}
        rest = {p: k for p, k in rec.cells.items() if p not in part}
        self._admit(first, rec.tag)
        self._admit(rest, rec.tag)
        self.ent_total = math.fsum(r.ent for r in sorted_recs(self.recs))

    # -- driver ----------------------------------------------------------

    def _plain_cost(self, n_shapes: int) -> float:
        if self.ent_total == 0.0:
            return 0.0
        return _pow_safe(1 + n_shapes, self.params.alpha) * self.ent_total

    def run(self, on_step: Callable[[StepInfo], None] | None = None) -> list[Shape]:
        params = self.params
        steps = 0
        cur_lc = _log_cost(len(self.recs), self.ent_total, params.alpha)
        while params.max_steps is None or steps < params.max_steps:
            move = None
            if params.ops in (SearchOps.MERGE, SearchOps.BOTH):
                found = self._find_merge(cur_lc)
                if found:
                    move = ("merge", found)
            if move is None and params.ops in (SearchOps.SPLIT, SearchOps.BOTH):
                found = self._find_split(cur_lc)
                if found:
                    move = ("split", found)
            if move is None:
                break
            kind, data = move
            before_n = len(self.recs)
            before_cost = self._plain_cost(before_n)
            if kind == "merge":
                self.apply_merge(data[0], data[1])
            else:
                self.apply_split(data[0], data[1])
            new_lc = _log_cost(len(self.recs), self.ent_total, params.alpha)
            if new_lc > cur_lc + EPS:
                raise RuntimeError("hill climb accepted a cost increase; this is a bug")
            if on_step:
                on_step(
                    StepInfo(
                        kind,
                        before_cost,
                        self._plain_cost(len(self.recs)),
                        cur_lc,
                        new_lc,
                        len(self.recs),
                    )
                )
            cur_lc = new_lc
            steps += 1
        spec = self.spec
        return [
            Shape.build(r.sid, r.cells, spec, r.tag, check=False)
            for r in sorted_recs(self.recs)
        ]


def sorted_recs(recs: dict[int, _Rec]) -> list[_Rec]:
    return [recs[sid] for sid in sorted(recs)]


def hill_climb(
    model: VoxelModel,
    params: InferenceParams,
    on_step: Callable[[StepInfo], None] | None = None,
) -> ShapeSet:
    """Infer a shape set for a model; deterministic for identical inputs."""
    initial = initialize(model, params)
    climber = _Climber(initial, params)
    shapes = climber.run(on_step)
    raw = ShapeSet(shapes, initial.spec, initial.overlap, model.name, model)
    return postprocess(raw)


def postprocess(shape_set: ShapeSet) -> ShapeSet:
    """Cover leftover source blocks with singletons, then drop covered shapes.

    A shape whose block set is contained in another shape's is redundant;
    exact duplicates keep the smaller id. Overlapping shapes where neither
    contains the other both stay.
    """
    shapes = list(shape_set.shapes)
    source = shape_set.source
    if source is not None:
        covered = {p for s in shapes for p in s.cells}
        next_sid = max((s.sid for s in shapes), default=-1) + 1
        for p in sorted(source.cells, key=zyx_key):
            if p not in covered:
                shapes.append(Shape.build(next_sid, {p: source.cells[p]}, shape_set.spec, check=False))
                next_sid += 1
    keysets = {s.sid: frozenset(s.cells) for s in shapes}
    kept = []
    for s in shapes:
        redundant = False
        for t in shapes:
            if t.sid == s.sid:
                continue
            a, b = keysets[s.sid], keysets[t.sid]
            if a < b or (a == b and s.sid > t.sid):
                redundant = True
                break
        if not redundant:
            kept.append(s)
    return ShapeSet(kept, shape_set.spec, shape_set.overlap, shape_set.model_name, source)


# ------------------------------------------------------------------ wire format


def shape_set_to_doc(shape_set: ShapeSet) -> dict:
    return {
        "spec": shape_set.spec.value,
        "overlap": shape_set.overlap,
        "model": shape_set.model_name,
        "shapes": [
            {
                "id": s.sid,
                "plane": s.plane,
                "blocks": [
                    {"t": s.cells[p], "p": list(p)} for p in sorted(s.cells, key=zyx_key)
                ],
            }
            for s in shape_set.shapes
        ],
    }


def shape_set_from_doc(doc: object, source: VoxelModel | None = None) -> ShapeSet:
    if not isinstance(doc, dict):
        raise FormatError("shape-set document must be a JSON object")
    try:
        spec = ShapeSpec(doc.get("spec"))
    except ValueError:
        raise FormatError(f"unknown spec {doc.get('spec')!r}") from None
    overlap = doc.get("overlap")
    if not isinstance(overlap, bool):
        raise FormatError("shape-set document needs a boolean 'overlap'")
    model_name = doc.get("model", "")
    if not isinstance(model_name, str):
        raise FormatError("'model' must be a string")
    raw = doc.get("shapes")
    if not isinstance(raw, list) or not raw:
        raise FormatError("shape-set document needs a non-empty 'shapes' list")
    shapes = []
    for entry in raw:
        if not isinstance(entry, dict) or not isinstance(entry.get("id"), int):
            raise FormatError("each shape needs an integer 'id'")
        blocks = entry.get("blocks")
        if not isinstance(blocks, list) or not blocks:
            raise FormatError(f"shape {entry.get('id')} needs a non-empty 'blocks' list")
        cells: dict[Pos, str] = {}
        for b in blocks:
            if (
                not isinstance(b, dict)
                or not isinstance(b.get("t"), str)
                or not isinstance(b.get("p"), list)
                or len(b["p"]) != 3
                or any(isinstance(v, bool) or not isinstance(v, int) for v in b["p"])
            ):
                raise FormatError(f"bad block entry in shape {entry['id']}")
            cells[tuple(b["p"])] = b["t"]
        plane = entry.get("plane")
        if plane is not None and plane not in AXES:
            raise FormatError(f"bad plane {plane!r} in shape {entry['id']}")
        shapes.append(Shape.build(entry["id"], cells, spec, plane))
    out = ShapeSet(shapes, spec, overlap, model_name, source)
    out.validate(require_irredundant=False)
    return out


def save_shape_set(shape_set: ShapeSet) -> str:
    import json

    return json.dumps(shape_set_to_doc(shape_set), separators=(",", ":"))


def load_shape_set(data: str | bytes, source: VoxelModel | None = None) -> ShapeSet:
    import json

    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise FormatError(f"malformed JSON: {exc}") from exc
    return shape_set_from_doc(doc, source)
