"""Enclosure pruning: sides, exterior reachability, and the removal fixpoint."""
import pytest

from helpers import (
    box_shell_faces,
    flood_oracle_reachability,
    planted_set,
    reconstruct_production,
)
from voxgram.enclosure import enforce, reachable_sides, sides, surviving_indices
from voxgram.errors import UnsupportedSpecError
from voxgram.grammar import induce
from voxgram.model import VoxelModel
from voxgram.production import start, validate
from voxgram.shapes import Shape, ShapeSpec


def _production(shape_cells, name="scene"):
    g = induce([planted_set(name, shape_cells)])
    p = reconstruct_production(g)
    assert len(p.placed) == len(shape_cells), "reconstruction must place every shape"
    return p


def _plugged_box():
    """Hollow box with a 2x2 hole in one wall, sealed by an oversized panel.

    The panel overhangs the box, so its inner side peeks into open air and
    it is removed first; that opens the hole, floods the interior, and takes
    the remaining faces with it on the next round.
    """
    faces = box_shell_faces(4, 4, 4)
    wall_y1 = faces[5]
    hole = {(x, 3, z) for x in (1, 2) for z in (1, 2)}
    faces[5] = {p: k for p, k in wall_y1.items() if p not in hole}
    assert not faces[5], "the 4x4x4 shell's y-wall middle band is exactly the hole"
    faces = faces[:5]
    plug = {(x, 4, z): "plank" for x in range(4) for z in range(5)}
    return faces + [plug]


# ---------------------------------------------------------------------- sides


def test_sides_single_block_z_plane():
    p = _production([{(0, 0, 0): "s"}, {(1, 0, 0): "s"}])
    placed = next(ps for ps in p.placed if (0, 0, 0) in ps.cells)
    assert placed.plane == 0  # a single block defaults to the x plane
    ss = sides(placed)
    assert ss.side1 == {(1, 0, 0)}
    assert ss.side2 == {(-1, 0, 0)}


def test_sides_wall_has_one_cell_per_block():
    wall = {(0, y, z): "s" for y in range(2) for z in range(2)}
    p = _production([wall, {(1, 0, 0): "s"}])
    placed = next(ps for ps in p.placed if len(ps.cells) == 4)
    ss = sides(placed)
    assert len(ss.side1) == 4 and len(ss.side2) == 4
    assert ss.side1 == {(1, y, z) for y in range(2) for z in range(2)}


def test_sides_rejects_free3d_shapes():
    cells = {(0, 0, 0): "s", (1, 0, 0): "s", (0, 1, 0): "s", (0, 0, 1): "s"}
    model = VoxelModel("blob", dict(cells))
    from voxgram.inference import ShapeSet

    g = induce([ShapeSet([Shape.build(0, cells, ShapeSpec.FREE3D)], ShapeSpec.FREE3D, False, "blob", model)])
    p = start(g)
    with pytest.raises(UnsupportedSpecError):
        sides(p.placed[0])
    with pytest.raises(UnsupportedSpecError):
        enforce(p)


# ------------------------------------------------------------------ reachability


def test_closed_box_outer_sides_reachable_inner_not():
    p = _production(box_shell_faces())
    flags = reachable_sides(p)
    assert len(flags) == 6
    for idx, (r1, r2) in flags.items():
        assert r1 != r2, f"face {idx} should be reachable on exactly one side"


def test_free_panel_both_sides_reachable():
    p = _production([{(x, 0, z): "s" for x in range(3) for z in range(3)}, {(3, 0, 0): "s"}])
    flags = reachable_sides(p)
    assert flags[0] == (True, True)


def test_reachability_matches_independent_oracle():
    scenes = [
        box_shell_faces(),
        _plugged_box(),
        [{(x, 0, z): "s" for x in range(3) for z in range(3)}, {(3, 0, 0): "s"}],
    ]
    for shape_cells in scenes:
        p = _production(shape_cells)
        got = reachable_sides(p)
        want = flood_oracle_reachability(p.placed)
        assert [got[i] for i in range(len(p.placed))] == want


# ---------------------------------------------------------------------- enforce


def test_closed_box_is_unchanged():
    p = _production(box_shell_faces())
    assert enforce(p) is p


def test_free_panel_production_empties():
    p = _production([{(x, 0, z): "s" for x in range(3) for z in range(3)}, {(0, 1, 0): "s"}])
    out = enforce(p)
    assert out.placed == []
    assert out.occupancy == {}
    assert out.history[-1] == ("enclosure",)
    validate(out)


def test_plugged_box_cascades_over_two_removal_rounds():
    p = _production(_plugged_box())
    rounds = []
    surviving_indices(p.placed, on_round=rounds.append)
    # round 1 removes only the plug; round 2 floods the interior and removes
    # the rest; round 3 confirms the fixpoint
    assert len(rounds[0]) == len(p.placed) - 1
    assert rounds[1] == []
    assert len(rounds) >= 2
    out = enforce(p)
    assert out.placed == []
    # oracle cross-check per round: recompute reachability on the survivors
    kept = list(range(len(p.placed)))
    for expected in rounds:
        if not kept:
            assert expected == []
            break
        flags = flood_oracle_reachability([p.placed[i] for i in kept])
        survivors = [i for i, (r1, r2) in zip(kept, flags) if not (r1 and r2)]
        assert survivors == expected
        if survivors == kept:
            break
        kept = survivors


def test_box_minus_wall_empties_with_multiple_flood_rounds():
    faces = box_shell_faces(4, 4, 4)[:5]  # drop one wall entirely
    p = _production(faces)
    rounds = []
    out_keep = surviving_indices(p.placed, on_round=rounds.append)
    assert out_keep == []
    assert len(rounds) >= 2  # removal round plus the confirming round
    assert enforce(p).placed == []


def test_enforce_is_idempotent():
    for shape_cells in (box_shell_faces(), _plugged_box()):
        p = _production(shape_cells)
        once = enforce(p)
        twice = enforce(once)
        assert twice == once


def test_enforce_only_removes():
    p = _production(_plugged_box())
    out = enforce(p)
    before = {(ps.shape, ps.pose) for ps in p.placed}
    after = {(ps.shape, ps.pose) for ps in out.placed}
    assert after <= before


def test_double_layer_wall_survives():
    # two parallel touching walls shield each other's inner side
    a = {(0, y, z): "s" for y in range(3) for z in range(3)}
    b = {(1, y, z): "s" for y in range(3) for z in range(3)}
    p = _production([a, b])
    assert enforce(p) is p


def test_enforce_then_undo_restores_production():
    from voxgram.production import undo

    p = _production([{(x, 0, z): "s" for x in range(3) for z in range(3)}, {(0, 1, 0): "s"}])
    out = enforce(p)
    assert out != p
    assert undo(out) == p
