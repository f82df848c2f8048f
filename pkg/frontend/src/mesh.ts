/**
 * Client-side copy of the pad's simplicial interpolation, used for display:
 * containing-triangle highlight, hull projection of out-of-bounds cursors,
 * and a local preview of the blended parameter vector.
 *
 * The engine remains the authority on parameter values; this mirrors its
 * formulas (same tolerances) so what the pad draws agrees with what it hears.
 */

export type Point = [number, number];
export type Triangle = [number, number, number];

export interface Mesh {
  domain: Point[];
  codomain: number[][];
  triangles: Triangle[];
  dim: number;
}

export const LOCATE_TOLERANCE = 1e-9;
export const AREA_TOLERANCE = 1e-12;

/** Parse and shape-check the mesh JSON served by the engine. */
export function parseMesh(json: string): Mesh {
  let obj: unknown;
  try {
    obj = JSON.parse(json);
  } catch (exc) {
    throw new Error(`mesh reply is not JSON: ${exc}`);
  }
  const m = obj as Record<string, unknown>;
  const domain = m["domain"];
  const codomain = m["codomain"];
  const triangles = m["triangles"];
  const dim = m["dim"];
  if (!Array.isArray(domain) || !Array.isArray(codomain) ||
      !Array.isArray(triangles) || typeof dim !== "number") {
    throw new Error("mesh reply is missing domain/codomain/triangles/dim");
  }
  if (domain.length !== codomain.length || domain.length < 3) {
    throw new Error(`mesh has ${domain.length} vertices for ${codomain.length} rows`);
  }
  const dom: Point[] = domain.map((p: unknown) => {
    if (!Array.isArray(p) || p.length !== 2) throw new Error("domain points must be [x, y]");
    return [Number(p[0]), Number(p[1])];
  });
  const cod: number[][] = codomain.map((row: unknown) => {
    if (!Array.isArray(row) || row.length !== dim) {
      throw new Error(`codomain rows must have ${dim} values`);
    }
    return row.map(Number);
  });
  const tris: Triangle[] = triangles.map((t: unknown) => {
    if (!Array.isArray(t) || t.length !== 3) throw new Error("triangles must be index triples");
    const tri = t.map(Number) as Triangle;
    for (const i of tri) {
      if (!Number.isInteger(i) || i < 0 || i >= dom.length) {
        throw new Error(`triangle index ${i} out of range`);
      }
    }
    return tri;
  });
  return { domain: dom, codomain: cod, triangles: tris, dim };
}

function orient(a: Point, b: Point, c: Point): number {
  return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

/** Barycentric coordinates of p in triangle abc, in vertex order. */
export function barycentric(a: Point, b: Point, c: Point, p: Point): [number, number, number] {
  const det = orient(a, b, c);
  if (Math.abs(det) <= AREA_TOLERANCE) throw new Error("degenerate triangle");
  const l1 = ((b[1] - c[1]) * (p[0] - c[0]) + (c[0] - b[0]) * (p[1] - c[1])) / det;
  const l2 = ((c[1] - a[1]) * (p[0] - c[0]) + (a[0] - c[0]) * (p[1] - c[1])) / det;
  return [l1, l2, 1.0 - l1 - l2];
}

/** Index of the first triangle whose closed region holds p, else null. */
export function locate(mesh: Mesh, p: Point): number | null {
  for (let ti = 0; ti < mesh.triangles.length; ti++) {
    const [a, b, c] = mesh.triangles[ti];
    const lambdas = barycentric(mesh.domain[a], mesh.domain[b], mesh.domain[c], p);
    if (lambdas.every((l) => l >= -LOCATE_TOLERANCE)) return ti;
  }
  return null;
}

/** Edges that belong to exactly one triangle: the convex hull boundary. */
export function hullEdges(mesh: Mesh): [number, number][] {
  const count = new Map<string, [number, number]>();
  const seen = new Map<string, number>();
  for (const [a, b, c] of mesh.triangles) {
    for (const [u, v] of [[a, b], [b, c], [c, a]] as [number, number][]) {
      const key = `${Math.min(u, v)},${Math.max(u, v)}`;
      count.set(key, [u, v]);
      seen.set(key, (seen.get(key) ?? 0) + 1);
    }
  }
  const edges: [number, number][] = [];
  for (const [key, edge] of count) {
    if (seen.get(key) === 1) edges.push(edge);
  }
  return edges;
}

function closestOnSegment(a: Point, b: Point, p: Point): Point {
  const dx = b[0] - a[0];
  const dy = b[1] - a[1];
  const len2 = dx * dx + dy * dy;
  if (len2 === 0) return [a[0], a[1]];
  let t = ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2;
  t = Math.max(0, Math.min(1, t));
  return [a[0] + t * dx, a[1] + t * dy];
}

/** Nearest point to p on the hull boundary. */
export function projectToHull(mesh: Mesh, p: Point): Point {
  let best: Point = mesh.domain[0];
  let bestDist = Infinity;
  for (const [u, v] of hullEdges(mesh)) {
    const q = closestOnSegment(mesh.domain[u], mesh.domain[v], p);
    const d = (q[0] - p[0]) ** 2 + (q[1] - p[1]) ** 2;
    if (d < bestDist) {
      bestDist = d;
      best = q;
    }
  }
  return best;
}

/**
 * Blend the codomain at p: exact row at a vertex, barycentric inside,
 * hull projection first when p lies outside.
 */
export function interpolate(mesh: Mesh, p: Point): number[] {
  // a cursor parked on a vertex must preview that row exactly
  for (let i = 0; i < mesh.domain.length; i++) {
    if (mesh.domain[i][0] === p[0] && mesh.domain[i][1] === p[1]) {
      return mesh.codomain[i].slice();
    }
  }
  let q = p;
  let ti = locate(mesh, q);
  if (ti === null) {
    q = projectToHull(mesh, p);
    ti = locate(mesh, q);
    if (ti === null) throw new Error("projected point not inside any triangle");
  }
  const [a, b, c] = mesh.triangles[ti];
  let lambdas = barycentric(mesh.domain[a], mesh.domain[b], mesh.domain[c], q);
  // tolerated slightly-negative weights are clamped and renormalized
  const clamped = lambdas.map((l) => Math.max(l, 0)) as [number, number, number];
  const total = clamped[0] + clamped[1] + clamped[2];
  lambdas = clamped.map((l) => l / total) as [number, number, number];
  const out = new Array<number>(mesh.dim).fill(0);
  const rows = [mesh.codomain[a], mesh.codomain[b], mesh.codomain[c]];
  for (let k = 0; k < 3; k++) {
    for (let j = 0; j < mesh.dim; j++) out[j] += lambdas[k] * rows[k][j];
  }
  return out;
}
