"""Enclosure pruning: drop planar shapes exposed on both sides.

A planar shape's two sides are its block positions shifted one step along
its fixed axis. A side is exposed when any of its cells can be reached
through empty space from outside the structure (the unoccupied border of
the bounding box inflated by one). Shapes exposed on both sides are removed
in batches, and the flood is recomputed, because removals can expose
formerly protected shapes; the loop runs to a fixpoint.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

from .errors import UnsupportedSpecError
from .model import NEIGHBOR_OFFSETS, Pos, cells_bounding_box

if TYPE_CHECKING:  # pragma: no cover
    from .production import PlacedShape, Production


@dataclass(frozen=True)
class SideSet:
    """The two shifted position sets flanking a planar placed shape."""

    shape: int
    side1: frozenset[Pos]
    side2: frozenset[Pos]


def sides(placed: "PlacedShape") -> SideSet:
    """Side cells of a placed planar shape along its realized fixed axis."""
    if placed.plane is None:
        raise UnsupportedSpecError(
            f"shape {placed.shape} has no fixed axis; enclosure only handles planar shapes"
        )
    axis = placed.plane
    offset = [0, 0, 0]
    offset[axis] = 1
    dx, dy, dz = offset
    side1 = frozenset((x + dx, y + dy, z + dz) for x, y, z in placed.cells)
    side2 = frozenset((x - dx, y - dy, z - dz) for x, y, z in placed.cells)
    return SideSet(placed.shape, side1, side2)


def _exterior_flood(occupancy: set[Pos]) -> tuple[set[Pos], Pos, Pos]:
    """Empty cells connected to the border of the inflated bounding box."""
    lo, hi = cells_bounding_box(occupancy)
    lo = (lo[0] - 1, lo[1] - 1, lo[2] - 1)
    hi = (hi[0] + 1, hi[1] + 1, hi[2] + 1)
    seen: set[Pos] = set()
    queue: deque[Pos] = deque()
    for x in range(lo[0], hi[0] + 1):
        for y in range(lo[1], hi[1] + 1):
            for z in range(lo[2], hi[2] + 1):
                on_border = (
                    x in (lo[0], hi[0]) or y in (lo[1], hi[1]) or z in (lo[2], hi[2])
                )
                if on_border and (x, y, z) not in occupancy:
                    seen.add((x, y, z))
                    queue.append((x, y, z))
    while queue:
        x, y, z = queue.popleft()
        for dx, dy, dz in NEIGHBOR_OFFSETS:
            q = (x + dx, y + dy, z + dz)
            if (
                q not in seen
                and q not in occupancy
                and lo[0] <= q[0] <= hi[0]
                and lo[1] <= q[1] <= hi[1]
                and lo[2] <= q[2] <= hi[2]
            ):
                seen.add(q)
                queue.append(q)
    return seen, lo, hi


def _reachability(placed: Sequence["PlacedShape"]) -> list[tuple[bool, bool]]:
    occupancy = {pos for ps in placed for pos in ps.cells}
    flooded, lo, hi = _exterior_flood(occupancy)

    def side_reachable(cells: frozenset[Pos]) -> bool:
        for q in cells:
            if q in flooded:
                return True
            inside = lo[0] <= q[0] <= hi[0] and lo[1] <= q[1] <= hi[1] and lo[2] <= q[2] <= hi[2]
            if not inside:
                return True
        return False

    out = []
    for ps in placed:
        ss = sides(ps)
        out.append((side_reachable(ss.side1), side_reachable(ss.side2)))
    return out


def reachable_sides(p: "Production") -> dict[int, tuple[bool, bool]]:
    """Per placed-shape side reachability, keyed by index into ``p.placed``."""
    if not p.placed:
        return {}
    return dict(enumerate(_reachability(p.placed)))


def surviving_indices(placed: Sequence["PlacedShape"], on_round=None) -> list[int]:
    """Indices of shapes kept by the enclosure fixpoint, in original order.

    ``on_round`` is called with the kept index list after each pass. The loop
    runs until a pass removes nothing, so that confirming pass is included.
    """
    keep = list(range(len(placed)))
    while True:
        if keep:
            flags = _reachability([placed[i] for i in keep])
            next_keep = [i for i, (r1, r2) in zip(keep, flags) if not (r1 and r2)]
        else:
            next_keep = []
        if on_round:
            on_round(list(next_keep))
        if next_keep == keep:
            break
        keep = next_keep
    return keep


def enforce(p: "Production") -> "Production":
    """Remove both-sides-reachable shapes until none remain to remove.

    Returns ``p`` itself when nothing is removed, so enforcing twice equals
    enforcing once. The removal is recorded as one history event.
    """
    from .production import _apply_enclosure_event

    keep = surviving_indices(p.placed)
    if len(keep) == len(p.placed):
        return p
    return _apply_enclosure_event(p)
