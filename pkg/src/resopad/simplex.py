"""Position-to-parameters mapping by simplicial interpolation.

Control points pair a 2-D domain position with an n-dimensional filter
parameter vector.  The domain points are Delaunay-triangulated; the same
index triples read against the codomain points form the corresponding mesh
there, and any query point is carried across by its barycentric
coordinates.  Outside the hull the query is clamped to the nearest hull
boundary point, so outputs never leave the convex hull of authored values.
"""

import math
from dataclasses import dataclass

import numpy as np

AREA_TOLERANCE = 1e-12
DUPLICATE_TOLERANCE = 1e-9
# in-circle determinants within this (scaled) band count as cocircular
COCIRCULAR_TOLERANCE = 1e-9
# barycentric slack when deciding containment on shared edges
LOCATE_TOLERANCE = 1e-9


class MapError(ValueError):
    """Invalid control-point set or map file."""


class DimensionMismatch(MapError):
    pass


class DuplicatePoint(MapError):
    pass


class CollinearPoints(MapError):
    pass


OUTSIDE = -1


def _incircle(a, b, c, d) -> float:
    """Determinant test: > 0 when d is inside the circumcircle of CCW triangle abc."""
    adx, ady = a[0] - d[0], a[1] - d[1]
    bdx, bdy = b[0] - d[0], b[1] - d[1]
    cdx, cdy = c[0] - d[0], c[1] - d[1]
    ad2 = adx * adx + ady * ady
    bd2 = bdx * bdx + bdy * bdy
    cd2 = cdx * cdx + cdy * cdy
    return (
        adx * (bdy * cd2 - cdy * bd2)
        - ady * (bdx * cd2 - cdx * bd2)
        + ad2 * (bdx * cdy - cdx * bdy)
    )


def _orient(a, b, c) -> float:
    """Twice the signed area of triangle abc (> 0 for counter-clockwise)."""
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def triangulate(points) -> list:
    """Delaunay triangulation of 2-D points as index triples (CCW, sorted output).

    Incremental Bowyer-Watson, inserting points in input order.  Cocircular
    quads are normalised afterwards to the lexicographically smallest
    diagonal, so the mesh is reproducible across platforms.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise MapError(f"expected (m, 2) points, got shape {pts.shape}")
    m = len(pts)
    if m < 3:
        raise MapError(f"need at least 3 points, got {m}")
    if not np.isfinite(pts).all():
        raise MapError("points must be finite")
    _check_duplicates(pts)
    span = float(np.ptp(pts, axis=0).max())
    if span <= 0 or _max_cross(pts) <= AREA_TOLERANCE * max(span * span, 1.0):
        raise CollinearPoints("points are collinear")

    # super-triangle far outside the data
    cx, cy = pts.mean(axis=0)
    big = 16.0 * max(span, 1.0)
    sx = m
    verts = np.vstack([pts, [[cx - 2.0 * big, cy - big], [cx + 2.0 * big, cy - big], [cx, cy + 2.0 * big]]])
    triangles = [(sx, sx + 1, sx + 2)]
    eps = COCIRCULAR_TOLERANCE * max(span, 1.0) ** 4

    for p in range(m):
        point = verts[p]
        bad = []
        for ti, (a, b, c) in enumerate(triangles):
            if _incircle(verts[a], verts[b], verts[c], point) > eps:
                bad.append(ti)
        if not bad:
            # on/outside every circumcircle within tolerance: fall back to
            # the containing triangle so insertion cannot be lost
            for ti, (a, b, c) in enumerate(triangles):
                if _contains(verts[a], verts[b], verts[c], point, LOCATE_TOLERANCE * span):
                    bad.append(ti)
                    break
        boundary = {}
        for ti in bad:
            a, b, c = triangles[ti]
            for edge in ((a, b), (b, c), (c, a)):
                key = (min(edge), max(edge))
                if key in boundary:
                    del boundary[key]
                else:
                    boundary[key] = edge
        for ti in sorted(bad, reverse=True):
            del triangles[ti]
        for a, b in sorted(boundary.values()):
            o = _orient(verts[a], verts[b], point)
            if abs(o) <= 2 * AREA_TOLERANCE:
                continue  # point sits on this boundary edge: the fan skips the sliver
            if o > 0:
                triangles.append((a, b, p))
            else:
                triangles.append((b, a, p))

    triangles = [t for t in triangles if sx not in t and sx + 1 not in t and sx + 2 not in t]
    triangles = [t for t in triangles if abs(_orient(verts[t[0]], verts[t[1]], verts[t[2]])) > 2 * AREA_TOLERANCE]
    # a thin hull triangle can have a circumcircle reaching the super vertices,
    # making it connect to them instead and vanish with them: stitch such
    # pockets back against the true hull, then let Lawson flips restore the
    # empty-circumcircle property globally
    triangles = _fill_hull_pockets(pts, triangles)
    triangles = _lawson(pts, triangles, eps)
    triangles = _normalize_cocircular(pts, triangles, eps)
    return sorted(_canonical(t, pts) for t in triangles)


def _convex_hull(pts: np.ndarray) -> list:
    """Strict convex hull (monotone chain), CCW vertex indices."""
    order = sorted(range(len(pts)), key=lambda i: (pts[i][0], pts[i][1]))

    def build(seq):
        chain = []
        for i in seq:
            while len(chain) >= 2 and _orient(pts[chain[-2]], pts[chain[-1]], pts[i]) <= 0:
                chain.pop()
            chain.append(i)
        return chain

    lower = build(order)
    upper = build(reversed(order))
    return lower[:-1] + upper[:-1]


def _force_ccw(tri, pts) -> tuple:
    a, b, c = tri
    return (a, c, b) if _orient(pts[a], pts[b], pts[c]) < 0 else (a, b, c)


def _ear_clip(pts, poly: list) -> list:
    """Triangulate a simple CCW polygon; degenerate ears are skipped."""
    out = []
    poly = list(poly)
    while len(poly) > 3:
        n = len(poly)
        for i in range(n):
            a, b, c = poly[(i - 1) % n], poly[i], poly[(i + 1) % n]
            if _orient(pts[a], pts[b], pts[c]) <= AREA_TOLERANCE:
                continue
            if any(_contains(pts[a], pts[b], pts[c], pts[v], 0.0)
                   for v in poly if v not in (a, b, c)):
                continue
            out.append((a, b, c))
            del poly[i]
            break
        else:
            return out  # only degenerate ears left: nothing with area remains
    o = _orient(pts[poly[0]], pts[poly[1]], pts[poly[2]])
    if abs(o) > AREA_TOLERANCE:
        out.append(tuple(poly) if o > 0 else (poly[0], poly[2], poly[1]))
    return out


def _fill_hull_pockets(pts, triangles) -> list:
    """Cover any concave boundary pockets left after super-vertex removal."""
    tris = [_force_ccw(t, pts) for t in triangles]
    count = {}
    for t in tris:
        for e in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
            key = (min(e), max(e))
            count[key] = count.get(key, 0) + 1
    nxt = {}
    for t in tris:
        for a, b in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
            if count[(min(a, b), max(a, b))] == 1:
                nxt[a] = b  # boundary is CCW because triangles are
    for i, u in enumerate(hull := _convex_hull(pts)):
        v = hull[(i + 1) % len(hull)]
        path = [u]
        cur = u
        while cur != v and len(path) <= len(nxt) + 1:
            cur = nxt.get(cur)
            if cur is None:
                break
            path.append(cur)
        if cur != v or len(path) <= 2:
            continue  # hull edge already on the boundary (or walk failed)
        tris += _ear_clip(pts, list(reversed(path)))
    return tris


def _lawson(pts, triangles, eps: float) -> list:
    """Flip in-circle-violating edges until none remain: exact Delaunay."""
    tris = [tuple(t) for t in triangles]
    flips = 0
    limit = 20 * len(tris) * len(tris) + 100
    changed = True
    while changed and flips <= limit:
        changed = False
        edge_map = {}
        for ti, (a, b, c) in enumerate(tris):
            for edge in ((a, b), (b, c), (c, a)):
                key = (min(edge), max(edge))
                edge_map.setdefault(key, []).append(ti)
        for key, owners in sorted(edge_map.items()):
            if len(owners) != 2:
                continue
            t1, t2 = owners
            a, b = key
            c = next(v for v in tris[t1] if v not in key)
            d = next(v for v in tris[t2] if v not in key)
            if _incircle(*_ccw(pts, a, b, c), pts[d]) <= eps:
                continue  # edge already Delaunay (ties left to normalization)
            if _orient(pts[c], pts[d], pts[a]) * _orient(pts[c], pts[d], pts[b]) >= 0:
                continue  # quad not convex: flip would fold over
            tris[t1] = (a, c, d)
            tris[t2] = (b, c, d)
            changed = True
            flips += 1
            break
    return tris


def _max_cross(pts: np.ndarray) -> float:
    a = pts[0]
    d = np.linalg.norm(pts - a, axis=1)
    b = pts[int(np.argmax(d))]
    ab = b - a
    cross = np.abs(ab[0] * (pts[:, 1] - a[1]) - ab[1] * (pts[:, 0] - a[0]))
    return float(cross.max())


def _check_duplicates(pts: np.ndarray):
    for i in range(len(pts)):
        d = np.linalg.norm(pts[i + 1:] - pts[i], axis=1)
        hits = np.nonzero(d < DUPLICATE_TOLERANCE)[0]
        if len(hits):
            j = int(hits[0]) + i + 1
            raise DuplicatePoint(f"points {i} and {j} coincide within {DUPLICATE_TOLERANCE}")


def _contains(a, b, c, p, tol: float) -> bool:
    area = _orient(a, b, c)
    if area == 0:
        return False
    s = _orient(a, b, p) / area
    t = _orient(b, c, p) / area
    u = _orient(c, a, p) / area
    return s >= -tol and t >= -tol and u >= -tol


def _canonical(tri, pts) -> tuple:
    """Rotate so the smallest index leads, forcing CCW orientation."""
    a, b, c = tri
    if _orient(pts[a], pts[b], pts[c]) < 0:
        a, b, c = a, c, b
    k = min(range(3), key=lambda i: (a, b, c)[i])
    order = ((a, b, c), (b, c, a), (c, a, b))[k]
    return order


def _normalize_cocircular(pts, triangles, eps: float) -> list:
    """Flip cocircular quads onto the lexicographically smaller diagonal."""
    tris = [tuple(t) for t in triangles]
    changed = True
    while changed:
        changed = False
        edge_map = {}
        for ti, (a, b, c) in enumerate(tris):
            for edge in ((a, b), (b, c), (c, a)):
                key = (min(edge), max(edge))
                edge_map.setdefault(key, []).append(ti)
        for key, owners in sorted(edge_map.items()):
            if len(owners) != 2:
                continue
            t1, t2 = owners
            a, b = key
            c = next(v for v in tris[t1] if v not in key)
            d = next(v for v in tris[t2] if v not in key)
            alt = (min(c, d), max(c, d))
            if alt >= key:
                continue
            det = _incircle(*_ccw(pts, a, b, c), pts[d])
            if abs(det) > eps:
                continue  # not cocircular: Delaunay already decided
            # flip only if the replacement triangles are valid
            if abs(_orient(pts[a], pts[c], pts[d])) <= AREA_TOLERANCE or abs(
                _orient(pts[b], pts[c], pts[d])
            ) <= AREA_TOLERANCE:
                continue
            if _orient(pts[c], pts[d], pts[a]) * _orient(pts[c], pts[d], pts[b]) >= 0:
                continue  # quad not convex around the new diagonal
            tris[t1] = (a, c, d)
            tris[t2] = (b, c, d)
            changed = True
            break
    return tris


def _ccw(pts, a, b, c):
    if _orient(pts[a], pts[b], pts[c]) < 0:
        return pts[a], pts[c], pts[b]
    return pts[a], pts[b], pts[c]


def barycentric(a, b, c, p) -> tuple:
    """Barycentric coordinates of p in triangle abc; raises on degenerate triangles."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    p = np.asarray(p, dtype=float)
    det = _orient(a, b, c)
    if abs(det) <= AREA_TOLERANCE:
        raise MapError("degenerate triangle")
    l1 = ((b[1] - c[1]) * (p[0] - c[0]) + (c[0] - b[0]) * (p[1] - c[1])) / det
    l2 = ((c[1] - a[1]) * (p[0] - c[0]) + (a[0] - c[0]) * (p[1] - c[1])) / det
    l3 = 1.0 - l1 - l2
    return l1, l2, l3


@dataclass(frozen=True)
class SimplicialMap:
    """Immutable paired point sets with the domain triangulation.

    domain: (m, 2) array; codomain: (m, n) array; triangles: list of index
    triples.  Queries are pure functions, safe to share across owners.
    """

    domain: np.ndarray
    codomain: np.ndarray
    triangles: tuple

    @property
    def dim(self) -> int:
        return self.codomain.shape[1]

    def locate(self, p) -> int:
        """Index of the lowest triangle whose closed region holds p, else OUTSIDE."""
        p = np.asarray(p, dtype=float)
        for ti, (a, b, c) in enumerate(self.triangles):
            if _contains(self.domain[a], self.domain[b], self.domain[c], p, LOCATE_TOLERANCE):
                return ti
        return OUTSIDE

    def hull_edges(self) -> list:
        """Boundary edges (index pairs) of the triangulation, i.e. the convex hull."""
        count = {}
        for a, b, c in self.triangles:
            for edge in ((a, b), (b, c), (c, a)):
                key = (min(edge), max(edge))
                count[key] = count.get(key, 0) + 1
        return sorted(key for key, n in count.items() if n == 1)

    def project_to_hull(self, p) -> np.ndarray:
        """Euclidean-nearest point on the hull boundary (edge interior or vertex)."""
        p = np.asarray(p, dtype=float)
        best = None
        best_d = math.inf
        for a, b in self.hull_edges():
            va = self.domain[a]
            vb = self.domain[b]
            ab = vb - va
            denom = float(ab @ ab)
            t = float((p - va) @ ab) / denom if denom > 0 else 0.0
            t = min(max(t, 0.0), 1.0)
            q = va + t * ab
            d = float(np.hypot(*(p - q)))
            if d < best_d:
                best_d = d
                best = q
        return best

    def interpolate(self, p) -> np.ndarray:
        """Carry p across to the codomain; out-of-hull points are clamped first."""
        p = np.asarray(p, dtype=float)
        # a query sitting exactly on a vertex reproduces its row bit for bit,
        # independent of which triangle the locate scan would hand back
        hit = np.nonzero((self.domain[:, 0] == p[0]) & (self.domain[:, 1] == p[1]))[0]
        if hit.size:
            return self.codomain[int(hit[0])].copy()
        ti = self.locate(p)
        if ti == OUTSIDE:
            p = self.project_to_hull(p)
            ti = self.locate(p)
            if ti == OUTSIDE:
                # projection sits within locate tolerance of the hull; widen once
                ti = min(
                    range(len(self.triangles)),
                    key=lambda k: self._distance_to_triangle(k, p),
                )
        a, b, c = self.triangles[ti]
        l1, l2, l3 = barycentric(self.domain[a], self.domain[b], self.domain[c], p)
        if l1 < 0 or l2 < 0 or l3 < 0:
            l1, l2, l3 = max(l1, 0.0), max(l2, 0.0), max(l3, 0.0)
            s = l1 + l2 + l3
            l1, l2, l3 = l1 / s, l2 / s, l3 / s
        return l1 * self.codomain[a] + l2 * self.codomain[b] + l3 * self.codomain[c]

    def _distance_to_triangle(self, ti: int, p: np.ndarray) -> float:
        a, b, c = self.triangles[ti]
        centroid = (self.domain[a] + self.domain[b] + self.domain[c]) / 3.0
        return float(np.hypot(*(p - centroid)))

    def mesh_dict(self) -> dict:
        """JSON-ready mesh for UI clients."""
        return {
            "domain": [[float(x), float(y)] for x, y in self.domain],
            "codomain": [[float(v) for v in row] for row in self.codomain],
            "triangles": [list(t) for t in self.triangles],
            "dim": self.dim,
        }


def build_map(domain_points, codomain_points) -> SimplicialMap:
    """Triangulate and validate; raises MapError subclasses with offender indices."""
    domain = np.asarray(domain_points, dtype=float)
    rows = [np.asarray(v, dtype=float) for v in codomain_points]
    if len(rows) != len(domain):
        raise MapError(f"{len(domain)} domain points but {len(rows)} codomain vectors")
    if not rows:
        raise MapError("empty map")
    n = len(rows[0])
    for i, row in enumerate(rows):
        if len(row) != n:
            raise DimensionMismatch(f"codomain vector {i} has dim {len(row)}, expected {n}")
        if not np.isfinite(row).all():
            raise MapError(f"codomain vector {i} has non-finite values")
    codomain = np.vstack(rows)
    triangles = triangulate(domain)
    smap = SimplicialMap(domain=domain, codomain=codomain, triangles=tuple(triangles))
    _validate_complex(smap)
    return smap


def _validate_complex(smap: SimplicialMap):
    pts = smap.domain
    used = set()
    area_sum = 0.0
    for ti, (a, b, c) in enumerate(smap.triangles):
        area = _orient(pts[a], pts[b], pts[c]) / 2.0
        if area <= AREA_TOLERANCE:
            raise MapError(f"triangle {ti} {(a, b, c)} is degenerate (area {area})")
        area_sum += area
        used.update((a, b, c))
    missing = sorted(set(range(len(pts))) - used)
    if missing:
        raise MapError(f"points {missing} unused by the triangulation")
    count = {}
    for a, b, c in smap.triangles:
        for edge in ((a, b), (b, c), (c, a)):
            key = (min(edge), max(edge))
            count[key] = count.get(key, 0) + 1
    bad = sorted(k for k, v in count.items() if v > 2)
    if bad:
        raise MapError(f"edges {bad} shared by more than two triangles")
    hull = _hull_area(pts)
    if not math.isclose(area_sum, hull, rel_tol=1e-9, abs_tol=1e-12):
        raise MapError(f"triangulation area {area_sum} does not cover hull area {hull}")


def _hull_area(pts: np.ndarray) -> float:
    """Convex hull area via monotone chain (independent of the triangulation)."""
    order = sorted(range(len(pts)), key=lambda i: (pts[i][0], pts[i][1]))

    def half(indices):
        chain = []
        for i in indices:
            while len(chain) >= 2 and _orient(pts[chain[-2]], pts[chain[-1]], pts[i]) <= 0:
                chain.pop()
            chain.append(i)
        return chain

    lower = half(order)
    upper = half(order[::-1])
    hull = lower[:-1] + upper[:-1]
    area = 0.0
    for i in range(len(hull)):
        x1, y1 = pts[hull[i]]
        x2, y2 = pts[hull[(i + 1) % len(hull)]]
        area += x1 * y2 - x2 * y1
    return area / 2.0


def parse_map(text: str) -> SimplicialMap:
    """Parse the map file format: header `n <dim>`, then `lat lon : v1 ... vn` lines.

    `#` starts a comment.  The triangulation is always recomputed, never
    read from the file.
    """
    dim = None
    domain = []
    codomain = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if dim is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "n":
                raise MapError(f"line {lineno}: expected header `n <dim>`, got {line!r}")
            try:
                dim = int(parts[1])
            except ValueError:
                raise MapError(f"line {lineno}: bad dimension {parts[1]!r}") from None
            if dim < 1:
                raise MapError(f"line {lineno}: dimension must be >= 1, got {dim}")
            continue
        if ":" not in line:
            raise MapError(f"line {lineno}: expected `lat lon : v1 ... vn`, got {line!r}")
        left, right = line.split(":", 1)
        try:
            lat, lon = (float(v) for v in left.split())
        except ValueError:
            raise MapError(f"line {lineno}: bad domain point {left.strip()!r}") from None
        try:
            values = [float(v) for v in right.split()]
        except ValueError:
            raise MapError(f"line {lineno}: bad codomain values {right.strip()!r}") from None
        if len(values) != dim:
            raise DimensionMismatch(
                f"line {lineno}: {len(values)} values, header says {dim}"
            )
        domain.append((lat, lon))
        codomain.append(values)
    if dim is None:
        raise MapError("empty map file")
    return build_map(domain, codomain)


def load_map(path) -> SimplicialMap:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_map(fh.read())
