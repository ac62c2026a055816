// Isometric projection and picking, pure math so it unit-tests cleanly.
// World axes: x, y horizontal; z up. The camera orbits with yaw around z
// and pitch toward the horizon; projection is orthographic.

import type { Cube } from "./scene";
import type { Pos } from "./types";

export interface Camera {
  yaw: number; // radians
  pitch: number; // radians, 0 = side view, pi/2 = top-down
  zoom: number; // pixels per world unit
  cx: number; // screen center
  cy: number;
  tx: number; // world focus point
  ty: number;
  tz: number;
}

export function defaultCamera(width: number, height: number): Camera {
  return {
    yaw: Math.PI / 4,
    pitch: Math.PI / 5.5,
    zoom: 22,
    cx: width / 2,
    cy: height / 2,
    tx: 0,
    ty: 0,
    tz: 0,
  };
}

export interface Projected {
  x: number;
  y: number;
  depth: number;
}

export function project(cam: Camera, p: Pos | [number, number, number]): Projected {
  const dx = p[0] - cam.tx;
  const dy = p[1] - cam.ty;
  const dz = p[2] - cam.tz;
  const cy = Math.cos(cam.yaw);
  const sy = Math.sin(cam.yaw);
  const rx = dx * cy - dy * sy;
  const ry = dx * sy + dy * cy;
  const cp = Math.cos(cam.pitch);
  const sp = Math.sin(cam.pitch);
  // screen right = rx; screen up = dz*cp + ry*sp; depth grows away from camera
  const sxr = rx * cam.zoom + cam.cx;
  const syr = cam.cy - (dz * cp + ry * sp) * cam.zoom;
  const depth = ry * cp - dz * sp;
  return { x: sxr, y: syr, depth };
}

export interface Face {
  cube: Cube;
  corners: Projected[]; // quad in draw order
  shade: number; // 0..1 brightness multiplier
}

const TOP: Pos[] = [
  [0, 0, 1],
  [1, 0, 1],
  [1, 1, 1],
  [0, 1, 1],
];
const X_POS: Pos[] = [
  [1, 0, 0],
  [1, 1, 0],
  [1, 1, 1],
  [1, 0, 1],
];
const X_NEG: Pos[] = [
  [0, 0, 0],
  [0, 1, 0],
  [0, 1, 1],
  [0, 0, 1],
];
const Y_POS: Pos[] = [
  [0, 1, 0],
  [1, 1, 0],
  [1, 1, 1],
  [0, 1, 1],
];
const Y_NEG: Pos[] = [
  [0, 0, 0],
  [1, 0, 0],
  [1, 0, 1],
  [0, 0, 1],
];

/** The three cube faces toward the camera, brightest on top. */
export function cubeFaces(cam: Camera, cube: Cube): Face[] {
  const [x, y, z] = cube.pos;
  const sy = Math.sin(cam.yaw);
  const cy = Math.cos(cam.yaw);
  // which vertical faces point at the camera follows from the yaw quadrant
  const faces: { template: Pos[]; shade: number }[] = [{ template: TOP, shade: 1.0 }];
  faces.push(sy >= 0 ? { template: Y_NEG, shade: 0.8 } : { template: Y_POS, shade: 0.8 });
  faces.push(cy >= 0 ? { template: X_NEG, shade: 0.62 } : { template: X_POS, shade: 0.62 });
  return faces.map(({ template, shade }) => ({
    cube,
    shade,
    corners: template.map((corner) =>
      project(cam, [x + corner[0] - 0.5, y + corner[1] - 0.5, z + corner[2] - 0.5]),
    ),
  }));
}

/** Cubes in back-to-front paint order: larger depth is farther away. */
export function paintOrder(cam: Camera, cubes: Cube[]): Cube[] {
  return cubes
    .map((cube) => ({ cube, d: project(cam, cube.pos).depth }))
    .sort((a, b) => b.d - a.d || a.cube.pos[2] - b.cube.pos[2])
    .map((e) => e.cube);
}

export function pointInQuad(px: number, py: number, quad: Projected[]): boolean {
  // ray cast on the polygon
  let inside = false;
  for (let i = 0, j = quad.length - 1; i < quad.length; j = i++) {
    const xi = quad[i].x;
    const yi = quad[i].y;
    const xj = quad[j].x;
    const yj = quad[j].y;
    const intersects =
      yi > py !== yj > py && px < ((xj - xi) * (py - yi)) / (yj - yi) + xi;
    if (intersects) inside = !inside;
  }
  return inside;
}

/** Topmost cube under a screen point, or null. */
export function hitTest(cam: Camera, cubes: Cube[], px: number, py: number): Cube | null {
  const ordered = paintOrder(cam, cubes);
  for (let i = ordered.length - 1; i >= 0; i--) {
    for (const face of cubeFaces(cam, ordered[i])) {
      if (pointInQuad(px, py, face.corners)) {
        return ordered[i];
      }
    }
  }
  return null;
}

/** Fit the camera focus and zoom to the scene bounds. */
export function frame(cam: Camera, bounds: { lo: Pos; hi: Pos } | null, width: number, height: number): Camera {
  if (!bounds) return cam;
  const [lx, ly, lz] = bounds.lo;
  const [hx, hy, hz] = bounds.hi;
  const spanX = hx - lx + 1;
  const spanY = hy - ly + 1;
  const spanZ = hz - lz + 1;
  const radius = Math.max(spanX, spanY, spanZ, 2);
  return {
    ...cam,
    tx: (lx + hx) / 2,
    ty: (ly + hy) / 2,
    tz: (lz + hz) / 2,
    zoom: Math.max(6, Math.min(width, height) / (radius * 2.1)),
    cx: width / 2,
    cy: height / 2,
  };
}
