// Canvas renderer: draws the SceneModel under an orbiting isometric camera
// and turns pointer gestures into orbit / zoom / pick events.

import { cubeFaces, defaultCamera, frame, hitTest, paintOrder, type Camera } from "./iso";
import type { Cube, SceneModel } from "./scene";

const HSL_RE = /hsl\(([\d.]+),\s*([\d.]+)%,\s*([\d.]+)%\)/;

function shaded(color: string, factor: number): string {
  const m = HSL_RE.exec(color);
  if (!m) return color;
  const light = Math.max(6, Math.min(94, parseFloat(m[3]) * factor));
  return `hsl(${m[1]}, ${m[2]}%, ${light.toFixed(1)}%)`;
}

export class VoxelCanvas {
  private cam: Camera;
  private scene: SceneModel = { cubes: [], empty: true, bounds: null };
  private dragging = false;
  private moved = 0;
  private lastX = 0;
  private lastY = 0;

  onPick: (owner: number | null) => void = () => {};

  constructor(private readonly canvas: HTMLCanvasElement) {
    this.cam = defaultCamera(canvas.width, canvas.height);
    canvas.addEventListener("mousedown", (e) => this.pointerDown(e.offsetX, e.offsetY));
    canvas.addEventListener("mousemove", (e) => this.pointerMove(e.offsetX, e.offsetY));
    window.addEventListener("mouseup", () => this.pointerUp());
    canvas.addEventListener("wheel", (e) => {
      e.preventDefault();
      this.zoomBy(e.deltaY < 0 ? 1.12 : 1 / 1.12);
    });
  }

  pointerDown(x: number, y: number): void {
    this.dragging = true;
    this.moved = 0;
    this.lastX = x;
    this.lastY = y;
  }

  pointerMove(x: number, y: number): void {
    if (!this.dragging) return;
    const dx = x - this.lastX;
    const dy = y - this.lastY;
    this.moved += Math.abs(dx) + Math.abs(dy);
    this.lastX = x;
    this.lastY = y;
    this.cam = {
      ...this.cam,
      yaw: this.cam.yaw + dx * 0.011,
      pitch: Math.max(0.05, Math.min(Math.PI / 2 - 0.05, this.cam.pitch + dy * 0.008)),
    };
    this.draw();
  }

  pointerUp(): void {
    if (!this.dragging) return;
    this.dragging = false;
    if (this.moved < 4) {
      const hit = hitTest(this.cam, this.scene.cubes, this.lastX, this.lastY);
      this.onPick(hit && hit.owner !== "ghost" ? hit.owner : null);
    }
  }

  zoomBy(factor: number): void {
    this.cam = { ...this.cam, zoom: Math.max(3, Math.min(120, this.cam.zoom * factor)) };
    this.draw();
  }

  frameScene(): void {
    this.cam = frame(this.cam, this.scene.bounds, this.canvas.width, this.canvas.height);
    this.draw();
  }

  setScene(scene: SceneModel, reframe = false): void {
    const hadNone = this.scene.empty;
    this.scene = scene;
    if (reframe || (hadNone && !scene.empty)) {
      this.frameScene();
    } else {
      this.draw();
    }
  }

  draw(): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    ctx.clearRect(0, 0, this.canvas.width, this.canvas.height);
    ctx.save();
    for (const cube of paintOrder(this.cam, this.scene.cubes)) {
      for (const face of cubeFaces(this.cam, cube)) {
        ctx.globalAlpha = cube.alpha;
        ctx.beginPath();
        face.corners.forEach((c, i) => (i === 0 ? ctx.moveTo(c.x, c.y) : ctx.lineTo(c.x, c.y)));
        ctx.closePath();
        ctx.fillStyle = shaded(cube.color, face.shade);
        ctx.fill();
        if (cube.selected) {
          ctx.strokeStyle = "#ffffff";
          ctx.lineWidth = 1.6;
          ctx.stroke();
        } else {
          ctx.strokeStyle = "rgba(0,0,0,0.25)";
          ctx.lineWidth = 0.5;
          ctx.stroke();
        }
      }
    }
    ctx.restore();
  }

  /** Exposed for tests. */
  getCamera(): Camera {
    return this.cam;
  }

  pick(x: number, y: number): Cube | null {
    return hitTest(this.cam, this.scene.cubes, x, y);
  }
}
