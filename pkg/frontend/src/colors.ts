// Deterministic color assignment. Integer keys walk the golden angle so
// neighboring ids stay visually distinct; string kinds hash to a hue.

import type { ColorMode, PlacedBlocksDoc } from "./types";

const GOLDEN_ANGLE = 137.50776405003785;

export function hueForIndex(i: number): number {
  return ((i * GOLDEN_ANGLE) % 360 + 360) % 360;
}

export function hashString(s: string): number {
  let h = 2166136261;
  for (let i = 0; i < s.length; i++) {
    h ^= s.charCodeAt(i);
    h = Math.imul(h, 16777619);
  }
  return h >>> 0;
}

export function hsl(hue: number, sat = 62, light = 58): string {
  return `hsl(${hue.toFixed(1)}, ${sat}%, ${light}%)`;
}

export function colorFor(mode: ColorMode, placed: PlacedBlocksDoc, kind: string): string {
  switch (mode) {
    case "shape":
      return hsl(hueForIndex(placed.shape));
    case "class":
      return hsl(hueForIndex(placed.class));
    case "type":
      return hsl(hueForIndex(hashString(kind) % 97));
  }
}
