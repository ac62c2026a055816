// SceneModel: the render-agnostic cube list for one production snapshot.
// Later placements draw over earlier ones on shared cells, matching the
// server's occupancy (identical types only, so the look is consistent).

import { colorFor } from "./colors";
import type { ChoiceDoc, ColorMode, Pos, SnapshotPayload } from "./types";

export interface Cube {
  pos: Pos;
  color: string;
  owner: number | "ghost"; // index into snapshot.placed_blocks
  kind: string;
  alpha: number;
  selected: boolean;
}

export interface SceneModel {
  cubes: Cube[];
  empty: boolean;
  bounds: { lo: Pos; hi: Pos } | null;
}

export function buildScene(
  snapshot: SnapshotPayload | null,
  mode: ColorMode,
  selected: number | null,
  ghost: ChoiceDoc | null,
): SceneModel {
  const byCell = new Map<string, Cube>();
  if (snapshot) {
    snapshot.placed_blocks.forEach((placed, index) => {
      for (const b of placed.blocks) {
        const cube: Cube = {
          pos: b.p,
          color: colorFor(mode, placed, b.t),
          owner: index,
          kind: b.t,
          alpha: 1,
          selected: selected === index,
        };
        byCell.set(`${b.p[0]},${b.p[1]},${b.p[2]}`, cube);
      }
    });
  }
  const cubes = [...byCell.values()];
  if (ghost) {
    for (const b of ghost.blocks) {
      cubes.push({
        pos: b.p,
        color: ghost.conflict ? "hsl(4, 80%, 55%)" : "hsl(150, 60%, 60%)",
        owner: "ghost",
        kind: b.t,
        alpha: 0.45,
        selected: false,
      });
    }
  }
  let bounds: SceneModel["bounds"] = null;
  for (const c of cubes) {
    if (!bounds) {
      bounds = { lo: [...c.pos] as Pos, hi: [...c.pos] as Pos };
    } else {
      for (const a of [0, 1, 2] as const) {
        bounds.lo[a] = Math.min(bounds.lo[a], c.pos[a]);
        bounds.hi[a] = Math.max(bounds.hi[a], c.pos[a]);
      }
    }
  }
  return { cubes, empty: cubes.length === 0, bounds };
}

/** Cells of one placed shape, for outline drawing. */
export function cellsOf(snapshot: SnapshotPayload, index: number): Set<string> {
  const out = new Set<string>();
  const placed = snapshot.placed_blocks[index];
  if (placed) for (const b of placed.blocks) out.add(`${b.p[0]},${b.p[1]},${b.p[2]}`);
  return out;
}
