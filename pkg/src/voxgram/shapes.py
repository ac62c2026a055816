"""Shapes cut from a voxel model, the grid transform group, and matching.

The transform group is the four z-axis quarter-turn rotations combined with
integer translation. Two shapes match when some group element maps one onto
the other, block types included. Matching is decided through a canonical
form: the lexicographically smallest serialization over the four rotations,
translated to the origin, which doubles as the match-class key.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Mapping

from .errors import InvalidShapeError
from .model import NEIGHBOR_OFFSETS, Pos, cells_bounding_box

AXES = (0, 1, 2)

Cells = Mapping[Pos, str]

#: Canonical serialization entries: (z, y, x, kind), sorted ascending.
CanonicalForm = tuple[tuple[int, int, int, str], ...]


class ShapeSpec(str, Enum):
    """Structural class of a shape."""

    RECTANGULAR = "rect"
    PLANAR2D = "2d"
    FREE3D = "3d"


def _rot_pos(k: int, p: Pos) -> Pos:
    x, y, z = p
    if k == 0:
        return (x, y, z)
    if k == 1:
        return (-y, x, z)
    if k == 2:
        return (-x, -y, z)
    return (y, -x, z)


@dataclass(frozen=True)
class GridTransform:
    """A quarter-turn rotation about the z axis plus an integer translation.

    ``rot`` counts quarter turns (0..3); applying maps p to R(rot)p + delta.
    """

    rot: int
    delta: Pos = (0, 0, 0)

    def __post_init__(self):
        if self.rot not in (0, 1, 2, 3):
            raise ValueError(f"rot must be 0..3, got {self.rot}")

    def apply(self, p: Pos) -> Pos:
        rx, ry, rz = _rot_pos(self.rot, p)
        dx, dy, dz = self.delta
        return (rx + dx, ry + dy, rz + dz)

    def apply_cells(self, cells: Cells) -> dict[Pos, str]:
        return {self.apply(p): kind for p, kind in cells.items()}

    def compose(self, inner: "GridTransform") -> "GridTransform":
        """The transform equal to applying ``inner`` first, then ``self``."""
        dx, dy, dz = self.apply(inner.delta)
        return GridTransform((self.rot + inner.rot) % 4, (dx, dy, dz))

    def inverse(self) -> "GridTransform":
        r = (-self.rot) % 4
        x, y, z = _rot_pos(r, self.delta)
        return GridTransform(r, (-x, -y, -z))

    def map_axis(self, axis: int) -> int:
        """Image of a coordinate axis: x and y swap under odd rotations."""
        if axis == 2 or self.rot % 2 == 0:
            return axis
        return 1 - axis

    def to_doc(self) -> dict:
        return {"rot": self.rot, "delta": list(self.delta)}

    @staticmethod
    def from_doc(doc: object) -> "GridTransform":
        from .errors import FormatError

        if (
            not isinstance(doc, dict)
            or doc.get("rot") not in (0, 1, 2, 3)
            or not isinstance(doc.get("delta"), list)
            or len(doc["delta"]) != 3
            or any(isinstance(v, bool) or not isinstance(v, int) for v in doc["delta"])
        ):
            raise FormatError(f"bad transform document: {doc!r}")
        return GridTransform(doc["rot"], tuple(doc["delta"]))


IDENTITY = GridTransform(0)


def planar_axes(cells: Iterable[Pos]) -> dict[int, int]:
    """Axes on which every cell shares one coordinate, mapped to that value."""
    it = iter(cells)
    first = next(it)
    shared: dict[int, int] = {a: first[a] for a in AXES}
    for p in it:
        for a in list(shared):
            if p[a] != shared[a]:
                del shared[a]
        if not shared:
            break
    return shared


def coherent(cells: Iterable[Pos] | Cells) -> bool:
    """True when the cells form one 6-connected component."""
    todo = set(cells)
    if not todo:
        return False
    stack = [todo.pop()]
    while stack:
        x, y, z = stack.pop()
        for dx, dy, dz in NEIGHBOR_OFFSETS:
            q = (x + dx, y + dy, z + dz)
            if q in todo:
                todo.remove(q)
                stack.append(q)
    return not todo


def check_shape(cells: Cells, spec: ShapeSpec, plane: int | None = None) -> str | None:
    """Validate a block set against a specification.

    Returns None when valid, otherwise the name of the violated invariant:
    "Incoherent", "NotPlanar", or "NotRectangular". With ``plane`` given,
    planarity is required on that axis specifically.
    """
    if not cells:
        raise InvalidShapeError("Empty", "a shape needs at least one block")
    if not coherent(cells):
        return "Incoherent"
    if spec == ShapeSpec.FREE3D:
        return None
    axes = planar_axes(cells)
    if plane is not None:
        axes = {plane: axes[plane]} if plane in axes else {}
    if not axes:
        return "NotPlanar"
    if spec == ShapeSpec.PLANAR2D:
        return None
    for a in sorted(axes):
        u, v = [b for b in AXES if b != a]
        lo, hi = cells_bounding_box(cells)
        area = (hi[u] - lo[u] + 1) * (hi[v] - lo[v] + 1)
        if area == len(cells):
            return None
    return "NotRectangular"


@dataclass(frozen=True)
class Shape:
    """A coherent block subset of a model, with a stable id.

    ``plane`` is the fixed axis of planar shapes (the normal of the plane
    they live in); Free3D shapes carry None. Construct through ``build``,
    which resolves a default plane and can validate.
    """

    sid: int
    cells: dict[Pos, str]
    spec: ShapeSpec
    plane: int | None = None

    @staticmethod
    def build(
        sid: int,
        cells: Cells,
        spec: ShapeSpec,
        plane: int | None = None,
        check: bool = True,
    ) -> "Shape":
        cells = dict(cells)
        if spec == ShapeSpec.FREE3D:
            plane = None
        elif plane is None:
            axes = planar_axes(cells)
            plane = min(axes) if axes else None
        if check:
            violation = check_shape(cells, spec, plane)
            if violation:
                raise InvalidShapeError(violation, f"shape {sid}")
        return Shape(sid, cells, spec, plane)

    def size(self) -> int:
        return len(self.cells)

    def kind_counts(self) -> Counter:
        return Counter(self.cells.values())


def apply_transform(t: GridTransform, s: Shape) -> Shape:
    """Map a shape through a grid transform; types are unchanged."""
    plane = None if s.plane is None else t.map_axis(s.plane)
    return replace(s, cells=t.apply_cells(s.cells), plane=plane)


def canonical_form(cells: Cells) -> tuple[CanonicalForm, GridTransform]:
    """Canonical block-set form and the transform mapping it back onto ``cells``.

    The form is the smallest (z, y, x, kind) serialization over the four
    rotations, each translated so its bounding-box minimum is the origin.
    """
    best: CanonicalForm | None = None
    best_fwd: GridTransform | None = None
    for k in range(4):
        rotated = [(_rot_pos(k, p), kind) for p, kind in cells.items()]
        lo, _ = cells_bounding_box(p for p, _ in rotated)
        entries = tuple(
            sorted((p[2] - lo[2], p[1] - lo[1], p[0] - lo[0], kind) for p, kind in rotated)
        )
        if best is None or entries < best:
            best = entries
            best_fwd = GridTransform(k, (-lo[0], -lo[1], -lo[2]))
    assert best is not None and best_fwd is not None
    return best, best_fwd.inverse()


def canonical_cells(form: CanonicalForm) -> dict[Pos, str]:
    return {(x, y, z): kind for z, y, x, kind in form}


def canonicalize(s: Shape) -> tuple[CanonicalForm, GridTransform]:
    """Canonical form of a shape and the transform taking the form onto it."""
    return canonical_form(s.cells)


def shapes_match(si: Shape, sj: Shape) -> GridTransform | None:
    """The transform mapping si onto sj (blocks and types), if one exists."""
    form_i, rep_i = canonical_form(si.cells)
    form_j, rep_j = canonical_form(sj.cells)
    if form_i != form_j:
        return None
    return rep_j.compose(rep_i.inverse())


@dataclass(frozen=True)
class MatchClass:
    """An equivalence class of mutually matching shapes.

    ``rep_transforms`` maps each member id to the transform placing the
    canonical form onto that member.
    """

    cid: int
    canonical: CanonicalForm
    members: tuple[int, ...]
    rep_transforms: dict[int, GridTransform] = field(compare=False)


def match_classes(shapes: Iterable[Shape]) -> list[MatchClass]:
    """Partition shapes by canonical form, in deterministic order.

    Classes are sorted by canonical serialization, members by shape id.
    """
    groups: dict[CanonicalForm, dict[int, GridTransform]] = {}
    for s in shapes:
        form, rep = canonical_form(s.cells)
        groups.setdefault(form, {})[s.sid] = rep
    out = []
    for cid, form in enumerate(sorted(groups)):
        reps = groups[form]
        members = tuple(sorted(reps))
        out.append(MatchClass(cid, form, members, {m: reps[m] for m in members}))
    return out
