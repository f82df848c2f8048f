/**
 * Pad state machine, DOM-free: tracks the cursor and altitude, emits poses
 * through whatever throttle the caller wires in, and derives everything the
 * renderer needs (hull projection, containing triangle, parameter preview).
 */

import { interpolate, locate, Mesh, Point, projectToHull } from "./mesh.js";

export type PoseEmitter = (pose: [number, number, number]) => void;

export interface PadState {
  /** Where the pointer actually is, world coordinates. */
  raw: Point;
  /** The position the engine effectively plays: projected into the hull. */
  display: Point;
  /** Containing triangle of the display point, for the highlight. */
  triangle: number | null;
  altitude: number;
  /** Locally blended parameter preview at the display point. */
  params: number[] | null;
}

export class PadController {
  private mesh: Mesh | null = null;
  private raw: Point = [0, 0];
  private altitude: number;

  constructor(private readonly emit: PoseEmitter, altitude: number = 1.0) {
    this.altitude = altitude;
  }

  setMesh(mesh: Mesh): void {
    this.mesh = mesh;
    // start in the middle of the pad rather than wherever [0, 0] lands
    let sx = 0, sy = 0;
    for (const [x, y] of mesh.domain) {
      sx += x;
      sy += y;
    }
    this.raw = [sx / mesh.domain.length, sy / mesh.domain.length];
  }

  /** Move the cursor; the raw position goes to the engine unclamped. */
  dragTo(x: number, y: number): void {
    this.raw = [x, y];
    this.emit([x, y, this.altitude]);
  }

  setAltitude(altitude: number): void {
    this.altitude = altitude;
    this.emit([this.raw[0], this.raw[1], altitude]);
  }

  state(): PadState {
    if (!this.mesh) {
      return {
        raw: this.raw,
        display: this.raw,
        triangle: null,
        altitude: this.altitude,
        params: null,
      };
    }
    let display = this.raw;
    let triangle = locate(this.mesh, display);
    if (triangle === null) {
      display = projectToHull(this.mesh, this.raw);
      triangle = locate(this.mesh, display);
    }
    return {
      raw: this.raw,
      display,
      triangle,
      altitude: this.altitude,
      params: interpolate(this.mesh, this.raw),
    };
  }
}
