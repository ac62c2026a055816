"""Bundled synthetic example buildings.

Seven deterministic desk-scale models (50-150 blocks, 1-3 block types)
covering the structural features the toolkit cares about: flat facades,
planted window symmetry, a hollow enclosed box, a monochrome wall, a ring
tower, striped columns, and a diagonal two-material gable whose mixed
regions give the cost tradeoff something to bite on.
"""
from __future__ import annotations

import json
from pathlib import Path

from .model import Pos, VoxelModel, model_to_doc


def flat_facade() -> VoxelModel:
    """10 x 7 stone facade with a wood door and two 2x2 glass windows."""
    cells: dict[Pos, str] = {}
    for x in range(10):
        for z in range(7):
            cells[(x, 0, z)] = "stone"
    for x in (4, 5):
        for z in (0, 1, 2):
            cells[(x, 0, z)] = "wood"
    for wx in (1, 7):
        for dx in (0, 1):
            for dz in (0, 1):
                cells[(wx + dx, 0, 3 + dz)] = "glass"
    return VoxelModel("flat_facade", cells)


def two_window_facade() -> VoxelModel:
    """9 x 6 stone facade with two identical 2x2 glass windows.

    A two-block wood balcony juts out of the plane directly in front of the
    left window's lower blocks, so its only neighbors are that window.
    """
    cells: dict[Pos, str] = {}
    for x in range(9):
        for z in range(6):
            cells[(x, 0, z)] = "stone"
    for wx in (1, 6):
        for dx in (0, 1):
            for dz in (0, 1):
                cells[(wx + dx, 0, 1 + dz)] = "glass"
    cells[(1, 1, 1)] = "wood"
    cells[(2, 1, 1)] = "wood"
    return VoxelModel("two_window_facade", cells)


def hollow_box() -> VoxelModel:
    """Closed 7 x 6 x 5 shell: stone floor and walls, wood roof, empty inside."""
    cells: dict[Pos, str] = {}
    for x in range(7):
        for y in range(6):
            cells[(x, y, 0)] = "stone"
            cells[(x, y, 4)] = "wood"
    for z in (1, 2, 3):
        for x in range(7):
            for y in range(6):
                if x in (0, 6) or y in (0, 5):
                    cells[(x, y, z)] = "stone"
    return VoxelModel("hollow_box", cells)


def monochrome_wall() -> VoxelModel:
    """8 x 8 single-type wall in the xz plane."""
    cells = {(x, 0, z): "stone" for x in range(8) for z in range(8)}
    return VoxelModel("monochrome_wall", cells)


def ring_tower() -> VoxelModel:
    """Four-level 5 x 5 stone ring with a solid wood roof plate."""
    cells: dict[Pos, str] = {}
    for z in range(4):
        for x in range(5):
            for y in range(5):
                if x in (0, 4) or y in (0, 4):
                    cells[(x, y, z)] = "stone"
    for x in range(5):
        for y in range(5):
            cells[(x, y, 4)] = "wood"
    return VoxelModel("ring_tower", cells)


def striped_awning() -> VoxelModel:
    """10 x 6 wall of alternating red and white columns."""
    cells = {
        (x, 0, z): ("red" if x % 2 == 0 else "white")
        for x in range(10)
        for z in range(6)
    }
    return VoxelModel("striped_awning", cells)


def gabled_cottage() -> VoxelModel:
    """9 x 6 facade split by a diagonal stone/brick boundary.

    No axis-aligned rectangle cover separates the materials cleanly, so
    maximal-rectangle initialization yields mixed shapes and split moves
    trade entropy against shape count.
    """
    cells: dict[Pos, str] = {}
    for x in range(9):
        for z in range(6):
            cells[(x, 0, z)] = "brick" if 8 * z > 5 * x else "stone"
    return VoxelModel("gabled_cottage", cells)


def facade_5x3() -> VoxelModel:
    """Demo-sized 5 x 3 facade with a central glass column."""
    cells = {
        (x, 0, z): ("glass" if x == 2 else "stone") for x in range(5) for z in range(3)
    }
    return VoxelModel("facade_5x3", cells)


def bundled_corpus() -> list[VoxelModel]:
    """The bundled example models, in a fixed order."""
    return [
        flat_facade(),
        two_window_facade(),
        hollow_box(),
        monochrome_wall(),
        ring_tower(),
        striped_awning(),
        gabled_cottage(),
    ]


def write_corpus(directory: str | Path) -> list[Path]:
    """Materialize the bundled corpus as Voxel JSON files; returns the paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for m in bundled_corpus():
        path = directory / f"{m.name}.json"
        path.write_text(json.dumps(model_to_doc(m), indent=1) + "\n")
        paths.append(path)
    return paths
