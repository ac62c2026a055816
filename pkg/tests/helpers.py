"""Shared test fixtures: small models, planted sets, and independent oracles."""
from __future__ import annotations

import itertools
import math

from voxgram.inference import ShapeSet
from voxgram.model import VoxelModel, zyx_key
from voxgram.shapes import AXES, Shape, ShapeSpec


def grid_model(name: str, kinds: dict[tuple[int, int, int], str]) -> VoxelModel:
    return VoxelModel(name, dict(kinds))


def facade_5x3() -> VoxelModel:
    """Five-wide, three-tall facade with a glass column at x=2."""
    cells = {}
    for x in range(5):
        for z in range(3):
            cells[(x, 0, z)] = "glass" if x == 2 else "stone"
    return grid_model("facade_5x3", cells)


def tiny_instances() -> list[VoxelModel]:
    """Small (<= 8 block) single-plane instances for exhaustive comparison."""
    out = []
    out.append(grid_model("bar2", {(0, 0, 0): "a", (1, 0, 0): "b"}))
    out.append(grid_model("quad", {(x, 0, z): "a" for x in range(2) for z in range(2)}))
    out.append(grid_model("strip4", {(x, 0, 0): "ab"[x % 2] for x in range(4)}))
    ring = {(x, 0, z): ("a" if z == 0 else "b") for x in range(3) for z in range(3)}
    del ring[(1, 0, 1)]
    out.append(grid_model("ring8", ring))
    lshape = {(x, 0, 0): "a" for x in range(4)}
    lshape.update({(0, 0, 1): "a", (0, 0, 2): "a"})
    out.append(grid_model("lshape", lshape))
    out.append(
        grid_model("square_ab", {(0, 0, 0): "a", (1, 0, 0): "a", (0, 0, 1): "b", (1, 0, 1): "b"})
    )
    return out


def planted_set(name: str, shape_cells, spec=ShapeSpec.RECTANGULAR) -> ShapeSet:
    """ShapeSet from explicit per-shape cells; the source model is their union."""
    cells = {}
    for sc in shape_cells:
        cells.update(sc)
    model = VoxelModel(name, cells)
    shapes = [Shape.build(i, sc, spec) for i, sc in enumerate(shape_cells)]
    return ShapeSet(shapes, spec, False, name, model)


def box_shell_faces(w=4, d=4, h=4):
    """Disjoint rectangular faces of a hollow w x d x h shell, all stone."""
    floor = {(x, y, 0): "stone" for x in range(w) for y in range(d)}
    roof = {(x, y, h - 1): "stone" for x in range(w) for y in range(d)}
    wall_x0 = {(0, y, z): "stone" for y in range(d) for z in range(1, h - 1)}
    wall_x1 = {(w - 1, y, z): "stone" for y in range(d) for z in range(1, h - 1)}
    wall_y0 = {(x, 0, z): "stone" for x in range(1, w - 1) for z in range(1, h - 1)}
    wall_y1 = {(x, d - 1, z): "stone" for x in range(1, w - 1) for z in range(1, h - 1)}
    return [floor, roof, wall_x0, wall_x1, wall_y0, wall_y1]


def reconstruct_production(g):
    """Derive every grammar shape at its origin pose (identity-match BFS)."""
    from voxgram.production import apply_choice, start, step_choices

    p = start(g)
    progress = True
    while progress:
        progress = False
        for i, c in enumerate(step_choices(p)):
            if c.conflict or c.duplicate:
                continue
            if (
                c.rule.lhs_anchor == p.placed[c.target].shape
                and c.pose == g.origin_pose(c.rule.rhs)
                and c.rule.rhs not in {ps.shape for ps in p.placed}
            ):
                p = apply_choice(p, i)
                progress = True
                break
    return p


def flood_oracle_reachability(placed):
    """Independent dense-grid flood fill; returns per-shape side reachability.

    Uses a padded boolean array and an explicit DFS stack, unlike the
    production code's bounded BFS over sparse sets.
    """
    occupied = {pos for ps in placed for pos in ps.cells}
    xs = [p[0] for p in occupied]
    ys = [p[1] for p in occupied]
    zs = [p[2] for p in occupied]
    lo = (min(xs) - 1, min(ys) - 1, min(zs) - 1)
    hi = (max(xs) + 1, max(ys) + 1, max(zs) + 1)
    nx, ny, nz = (hi[0] - lo[0] + 1, hi[1] - lo[1] + 1, hi[2] - lo[2] + 1)
    solid = [[[False] * nz for _ in range(ny)] for _ in range(nx)]
    for x, y, z in occupied:
        solid[x - lo[0]][y - lo[1]][z - lo[2]] = True
    flood = [[[False] * nz for _ in range(ny)] for _ in range(nx)]
    stack = []
    for ix in range(nx):
        for iy in range(ny):
            for iz in range(nz):
                border = ix in (0, nx - 1) or iy in (0, ny - 1) or iz in (0, nz - 1)
                if border and not solid[ix][iy][iz]:
                    flood[ix][iy][iz] = True
                    stack.append((ix, iy, iz))
    while stack:
        ix, iy, iz = stack.pop()
        for dx, dy, dz in ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)):
            jx, jy, jz = ix + dx, iy + dy, iz + dz
            if 0 <= jx < nx and 0 <= jy < ny and 0 <= jz < nz:
                if not solid[jx][jy][jz] and not flood[jx][jy][jz]:
                    flood[jx][jy][jz] = True
                    stack.append((jx, jy, jz))

    def cell_reachable(p):
        ix, iy, iz = p[0] - lo[0], p[1] - lo[1], p[2] - lo[2]
        if not (0 <= ix < nx and 0 <= iy < ny and 0 <= iz < nz):
            return True
        return flood[ix][iy][iz]

    out = []
    for ps in placed:
        axis = ps.plane
        shift = [0, 0, 0]
        shift[axis] = 1
        s1 = [tuple(c + d for c, d in zip(p, shift)) for p in ps.cells]
        s2 = [tuple(c - d for c, d in zip(p, shift)) for p in ps.cells]
        out.append((any(map(cell_reachable, s1)), any(map(cell_reachable, s2))))
    return out


# ------------------------------------------------------- exhaustive rect oracle


def _filled_rectangles_with(anchor, remaining):
    """All filled axis-aligned rectangles inside ``remaining`` containing anchor."""
    rects = []
    for axis in AXES:
        u_axis, v_axis = [a for a in AXES if a != axis]
        c = anchor[axis]
        plane = {p for p in remaining if p[axis] == c}
        au, av = anchor[u_axis], anchor[v_axis]
        us = sorted({p[u_axis] for p in plane})
        vs = sorted({p[v_axis] for p in plane})
        for u0, u1 in itertools.combinations_with_replacement(us, 2):
            if not (u0 <= au <= u1):
                continue
            for v0, v1 in itertools.combinations_with_replacement(vs, 2):
                if not (v0 <= av <= v1):
                    continue
                cells = set()
                ok = True
                for u in range(u0, u1 + 1):
                    for v in range(v0, v1 + 1):
                        p = [0, 0, 0]
                        p[axis], p[u_axis], p[v_axis] = c, u, v
                        p = tuple(p)
                        if p not in plane:
                            ok = False
                            break
                        cells.add(p)
                    if not ok:
                        break
                if ok:
                    rects.append(frozenset(cells))
    # a rectangle can be found under several plane orientations; dedupe
    return sorted(set(rects), key=lambda r: sorted(r, key=zyx_key))


def _entropy(kinds: list[str]) -> float:
    total = len(kinds)
    out = 0.0
    for k in set(kinds):
        p = kinds.count(k) / total
        if p < 1.0:
            out -= p * math.log2(p)
    return out


def exhaustive_best_rect_cost(model: VoxelModel, alpha: float) -> float:
    """Minimum cost over all partitions of the model into filled rectangles."""
    best = [math.inf]

    def recurse(remaining: frozenset, n: int, ent_sum: float):
        if not remaining:
            value = 0.0 if ent_sum == 0.0 else (1 + n) ** alpha * ent_sum
            if value < best[0]:
                best[0] = value
            return
        anchor = min(remaining, key=zyx_key)
        for rect in _filled_rectangles_with(anchor, remaining):
            ent = _entropy([model.cells[p] for p in rect])
            recurse(remaining - rect, n + 1, ent_sum + ent)

    recurse(frozenset(model.cells), 0, 0.0)
    return best[0]
