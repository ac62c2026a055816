import { describe, expect, it } from "vitest";

import { cubeFaces, defaultCamera, frame, hitTest, paintOrder, pointInQuad, project } from "../src/iso";
import type { Cube } from "../src/scene";

function cube(pos: [number, number, number], owner = 0): Cube {
  return { pos, color: "hsl(200, 60%, 60%)", owner, kind: "s", alpha: 1, selected: false };
}

describe("projection", () => {
  const cam = defaultCamera(800, 600);

  it("is affine in world translation along z", () => {
    const a = project(cam, [0, 0, 0]);
    const b = project(cam, [0, 0, 1]);
    const c = project(cam, [0, 0, 2]);
    expect(b.x - a.x).toBeCloseTo(c.x - b.x, 10);
    expect(b.y - a.y).toBeCloseTo(c.y - b.y, 10);
    // higher cubes render higher on screen
    expect(b.y).toBeLessThan(a.y);
  });

  it("orders depth away from the camera", () => {
    const near = project(cam, [0, -5, 0]);
    const far = project(cam, [0, 5, 0]);
    expect(near.depth).toBeLessThan(far.depth);
  });

  it("paints far cubes before near ones", () => {
    const cubes = [cube([0, 5, 0], 0), cube([0, -5, 0], 1), cube([0, 0, 0], 2)];
    const order = paintOrder(cam, cubes).map((c) => c.owner);
    expect(order).toEqual([0, 2, 1]);
  });

  it("emits three faces per cube with distinct shading", () => {
    const faces = cubeFaces(cam, cube([0, 0, 0]));
    expect(faces).toHaveLength(3);
    expect(new Set(faces.map((f) => f.shade)).size).toBe(3);
    for (const f of faces) expect(f.corners).toHaveLength(4);
  });

  it("hit test picks the cube under its own projected center", () => {
    const target = cube([2, 1, 0], 7);
    const other = cube([-3, -2, 1], 8);
    const center = project(cam, target.pos);
    const hit = hitTest(cam, [other, target], center.x, center.y);
    expect(hit?.owner).toBe(7);
  });

  it("hit test prefers the nearer of two stacked cubes", () => {
    // same screen column: one cube directly behind another along the view ray
    const cam2 = { ...defaultCamera(800, 600), yaw: 0, pitch: 0 };
    const front = cube([0, -4, 0], 1);
    const back = cube([0, 4, 0], 2);
    const at = project(cam2, front.pos);
    expect(hitTest(cam2, [back, front], at.x, at.y)?.owner).toBe(1);
  });

  it("hit test misses empty space", () => {
    expect(hitTest(cam, [cube([0, 0, 0])], 5, 5)).toBeNull();
  });

  it("point-in-quad agrees with a centroid probe", () => {
    const quad = cubeFaces(cam, cube([0, 0, 0]))[0].corners;
    const cx = quad.reduce((s, c) => s + c.x, 0) / 4;
    const cy = quad.reduce((s, c) => s + c.y, 0) / 4;
    expect(pointInQuad(cx, cy, quad)).toBe(true);
    expect(pointInQuad(cx + 4000, cy, quad)).toBe(false);
  });

  it("framing centers the bounds and keeps zoom sane", () => {
    const cam3 = frame(defaultCamera(800, 600), { lo: [0, 0, 0], hi: [9, 9, 9] }, 800, 600);
    expect(cam3.tx).toBeCloseTo(4.5);
    expect(cam3.tz).toBeCloseTo(4.5);
    expect(cam3.zoom).toBeGreaterThan(3);
    const centered = project(cam3, [4.5, 4.5, 4.5]);
    expect(centered.x).toBeCloseTo(400, 5);
    expect(centered.y).toBeCloseTo(300, 5);
  });
});
