/** World <-> canvas transform: uniform scale, centered, y up in world. */

import { Point } from "./mesh.js";

export class Viewport {
  readonly scale: number;
  private readonly cx: number;
  private readonly cy: number;

  constructor(
    points: Point[],
    readonly width: number,
    readonly height: number,
    readonly margin: number = 28,
  ) {
    let minX = Infinity, minY = Infinity, maxX = -Infinity, maxY = -Infinity;
    for (const [x, y] of points) {
      minX = Math.min(minX, x);
      minY = Math.min(minY, y);
      maxX = Math.max(maxX, x);
      maxY = Math.max(maxY, y);
    }
    const spanX = maxX - minX;
    const spanY = maxY - minY;
    const sx = spanX > 0 ? (width - 2 * margin) / spanX : Infinity;
    const sy = spanY > 0 ? (height - 2 * margin) / spanY : Infinity;
    const s = Math.min(sx, sy);
    this.scale = Number.isFinite(s) ? s : 1;
    this.cx = (minX + maxX) / 2;
    this.cy = (minY + maxY) / 2;
  }

  toScreen(p: Point): Point {
    return [
      this.width / 2 + (p[0] - this.cx) * this.scale,
      this.height / 2 - (p[1] - this.cy) * this.scale,
    ];
  }

  toWorld(s: Point): Point {
    return [
      this.cx + (s[0] - this.width / 2) / this.scale,
      this.cy - (s[1] - this.height / 2) / this.scale,
    ];
  }
}
