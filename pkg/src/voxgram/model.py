"""Voxel models on an integer grid, plus their JSON wire format.

A model is a finite set of typed blocks with unique positions. The grid is
``(x, y, z)`` with z as the vertical axis; all coordinates are signed ints.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

from .errors import DuplicatePositionError, EmptyModelError, FormatError

Pos = tuple[int, int, int]

#: Face-neighbor offsets in fixed order: +x, -x, +y, -y, +z, -z.
NEIGHBOR_OFFSETS: tuple[Pos, ...] = (
    (1, 0, 0),
    (-1, 0, 0),
    (0, 1, 0),
    (0, -1, 0),
    (0, 0, 1),
    (0, 0, -1),
)


def neighbors6(p: Pos) -> list[Pos]:
    """The six face-adjacent cells of ``p``, in (+x,-x,+y,-y,+z,-z) order."""
    x, y, z = p
    return [(x + dx, y + dy, z + dz) for dx, dy, dz in NEIGHBOR_OFFSETS]


def zyx_key(p: Pos) -> tuple[int, int, int]:
    """Sort key used everywhere blocks need a reproducible order."""
    return (p[2], p[1], p[0])


@dataclass(frozen=True, order=True)
class Block:
    """A typed cell: an opaque kind token at a grid position."""

    kind: str
    pos: Pos


@dataclass(frozen=True)
class VoxelModel:
    """An immutable set of blocks with unique positions.

    ``cells`` maps position to kind, which makes the one-block-per-cell
    invariant structural. Treat it as read-only.
    """

    name: str
    cells: dict[Pos, str] = field(default_factory=dict)

    @staticmethod
    def from_blocks(name: str, blocks: Iterable[Block]) -> "VoxelModel":
        cells: dict[Pos, str] = {}
        for b in blocks:
            if b.pos in cells:
                raise DuplicatePositionError(f"duplicate block position {list(b.pos)}")
            cells[b.pos] = b.kind
        return VoxelModel(name, cells)

    def blocks(self) -> list[Block]:
        """Blocks sorted by (z, y, x)."""
        return [Block(self.cells[p], p) for p in sorted(self.cells, key=zyx_key)]

    def __len__(self) -> int:
        return len(self.cells)


def bounding_box(m: VoxelModel) -> tuple[Pos, Pos]:
    """Component-wise (min, max) over block positions. Raises on empty models."""
    if not m.cells:
        raise EmptyModelError(f"model {m.name!r} has no blocks")
    return cells_bounding_box(m.cells)


def cells_bounding_box(cells: Iterable[Pos]) -> tuple[Pos, Pos]:
    xs, ys, zs = zip(*cells)
    return (min(xs), min(ys), min(zs)), (max(xs), max(ys), max(zs))


def _require_coord(value: object, where: str) -> int:
    # bool is an int subclass; reject it along with floats and strings.
    if isinstance(value, bool) or not isinstance(value, int):
        raise FormatError(f"non-integer coordinate {value!r} in {where}")
    return value


def model_from_doc(doc: object, *, as_example: bool = False) -> VoxelModel:
    """Build a model from a parsed Voxel JSON document.

    With ``as_example`` set, an empty block list is an error (examples feed
    inference and must be non-empty).
    """
    if not isinstance(doc, dict):
        raise FormatError("model document must be a JSON object")
    name = doc.get("name")
    if not isinstance(name, str):
        raise FormatError("model document is missing a string 'name'")
    raw = doc.get("blocks")
    if not isinstance(raw, list):
        raise FormatError("model document is missing a 'blocks' list")
    cells: dict[Pos, str] = {}
    for i, entry in enumerate(raw):
        if not isinstance(entry, dict):
            raise FormatError(f"block #{i} is not an object")
        kind = entry.get("t")
        if not isinstance(kind, str) or not kind:
            raise FormatError(f"block #{i} is missing a non-empty 't'")
        p = entry.get("p")
        if not isinstance(p, list) or len(p) != 3:
            raise FormatError(f"block #{i} is missing a 3-element 'p'")
        pos = tuple(_require_coord(v, f"block #{i}") for v in p)
        if pos in cells:
            raise DuplicatePositionError(f"duplicate block position {list(pos)}")
        cells[pos] = kind
    if as_example and not cells:
        raise EmptyModelError(f"example model {name!r} has no blocks")
    return VoxelModel(name, cells)


def model_to_doc(m: VoxelModel) -> dict:
    """Serialize to the Voxel JSON document form, blocks sorted by (z, y, x)."""
    return {
        "name": m.name,
        "blocks": [
            {"t": m.cells[p], "p": list(p)} for p in sorted(m.cells, key=zyx_key)
        ],
    }


def load_model(data: str | bytes, *, as_example: bool = False) -> VoxelModel:
    """Parse a Voxel JSON document. Raises FormatError on malformed input."""
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise FormatError(f"malformed JSON: {exc}") from exc
    return model_from_doc(doc, as_example=as_example)


def save_model(m: VoxelModel) -> str:
    """Serialize to Voxel JSON text; load_model(save_model(m)) == m."""
    return json.dumps(model_to_doc(m), separators=(",", ":"))
