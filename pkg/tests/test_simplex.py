import numpy as np
import pytest

from resopad.simplex import (CollinearPoints, DimensionMismatch, DuplicatePoint,
                             MapError, OUTSIDE, SimplicialMap, barycentric,
                             build_map, parse_map, triangulate)

MAP_TEXT = """\
# square, 2 values per vertex
n 2
0.0 0.0 : 10.0 0.0
1.0 0.0 : 20.0 1.0
1.0 1.0 : 30.0 2.0
0.0 1.0 : 40.0 3.0
"""


def brute_force_delaunay_check(points, triangles):
    """Empty-circumcircle: no point strictly inside any triangle's circle."""
    pts = np.asarray(points, dtype=np.float64)
    for (i, j, k) in triangles:
        a, b, c = pts[i], pts[j], pts[k]
        # circumcenter via perpendicular bisector intersection
        d = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]))
        ux = ((a @ a) * (b[1] - c[1]) + (b @ b) * (c[1] - a[1]) + (c @ c) * (a[1] - b[1])) / d
        uy = ((a @ a) * (c[0] - b[0]) + (b @ b) * (a[0] - c[0]) + (c @ c) * (b[0] - a[0])) / d
        center = np.array([ux, uy])
        radius = np.linalg.norm(a - center)
        for m, p in enumerate(pts):
            if m in (i, j, k):
                continue
            if np.linalg.norm(p - center) < radius * (1.0 - 1e-9):
                return False
    return True


def triangle_area_sum(points, triangles):
    pts = np.asarray(points)
    total = 0.0
    for (i, j, k) in triangles:
        ab, ac = pts[j] - pts[i], pts[k] - pts[i]
        total += abs(ab[0] * ac[1] - ab[1] * ac[0]) / 2.0
    return total


def test_unit_square_picks_documented_diagonal(square_points):
    # cocircular: normalization selects the lexicographically smallest diagonal
    assert triangulate(square_points) == [(0, 1, 2), (0, 2, 3)]


def test_triangulate_single_triangle():
    assert triangulate([(0.0, 0.0), (2.0, 0.0), (0.0, 2.0)]) == [(0, 1, 2)]


def test_triangulate_rejects_degenerate_inputs():
    with pytest.raises(CollinearPoints):
        triangulate([(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)])
    with pytest.raises(DuplicatePoint):
        triangulate([(0.0, 0.0), (0.0, 0.0), (1.0, 0.0)])
    with pytest.raises(MapError):
        triangulate([(0.0, 0.0), (1.0, 0.0)])


def test_triangulate_is_delaunay_on_random_instances():
    rng = np.random.default_rng(42)
    for _ in range(30):
        points = [tuple(p) for p in rng.uniform(0.0, 10.0, size=(20, 2))]
        triangles = triangulate(points)
        assert brute_force_delaunay_check(points, triangles), points
        # every input point appears in some triangle
        used = {i for tri in triangles for i in tri}
        assert used == set(range(len(points)))


def test_triangulation_covers_hull_area():
    rng = np.random.default_rng(9)
    points = [tuple(p) for p in rng.uniform(-5.0, 5.0, size=(40, 2))]
    triangles = triangulate(points)
    hull = __import__("scipy.spatial", fromlist=["ConvexHull"]).ConvexHull(points)
    assert triangle_area_sum(points, triangles) == pytest.approx(hull.volume, rel=1e-9)


def test_barycentric_known_values():
    a, b, c = (0.0, 0.0), (1.0, 0.0), (0.0, 1.0)
    assert barycentric(a, b, c, (0.0, 0.0)) == pytest.approx((1.0, 0.0, 0.0))
    assert barycentric(a, b, c, (0.5, 0.5)) == pytest.approx((0.0, 0.5, 0.5))
    lam = barycentric(a, b, c, (0.25, 0.25))
    assert sum(lam) == pytest.approx(1.0, abs=1e-12)


def test_vertex_reproduction_exact(square_map):
    for point, row in zip(square_map.domain, square_map.codomain):
        out = square_map.interpolate(tuple(point))
        assert tuple(out) == tuple(row)


def test_linear_precision_on_affine_codomain():
    # codomain = affine image of the domain -> interpolation is exact everywhere
    rng = np.random.default_rng(17)
    points = [tuple(p) for p in rng.uniform(0.0, 1.0, size=(15, 2))]
    A = rng.standard_normal((2, 4))
    b = rng.standard_normal(4)
    rows = [list(np.asarray(p) @ A + b) for p in points]
    smap = build_map(points, rows)
    for p in rng.uniform(0.05, 0.95, size=(50, 2)):
        if smap.locate(tuple(p)) == OUTSIDE:
            continue
        expected = np.asarray(p) @ A + b
        np.testing.assert_allclose(smap.interpolate(tuple(p)), expected, atol=1e-9)


def test_edge_continuity(square_map):
    # approach the shared diagonal (0,2) from both sides: values agree
    for t in np.linspace(0.1, 0.9, 7):
        on_edge = (t, t)
        left = (t - 1e-12, t + 1e-12)
        right = (t + 1e-12, t - 1e-12)
        v_edge = square_map.interpolate(on_edge)
        np.testing.assert_allclose(square_map.interpolate(left), v_edge, atol=1e-9)
        np.testing.assert_allclose(square_map.interpolate(right), v_edge, atol=1e-9)


def test_out_of_hull_clamps_to_boundary(square_map):
    # far outside: the clamp point equals evaluation at the nearest hull point
    out = square_map.interpolate((2.0, 0.5))
    edge = square_map.interpolate((1.0, 0.5))
    np.testing.assert_allclose(out, edge, atol=1e-12)
    below = square_map.interpolate((0.5, -3.0))
    np.testing.assert_allclose(below, square_map.interpolate((0.5, 0.0)), atol=1e-12)


def test_locate_and_hull_edges(square_map):
    assert square_map.locate((0.25, 0.1)) == 0
    assert square_map.locate((2.0, 2.0)) == OUTSIDE
    edges = square_map.hull_edges()
    assert sorted(edges) == [(0, 1), (0, 3), (1, 2), (2, 3)]


def test_interpolation_stays_in_codomain_convex_hull(square_map):
    rng = np.random.default_rng(23)
    rows = np.asarray(square_map.codomain)
    lo, hi = rows.min(axis=0), rows.max(axis=0)
    for p in rng.uniform(-0.5, 1.5, size=(100, 2)):
        value = square_map.interpolate(tuple(p))
        assert np.all(value >= lo - 1e-9) and np.all(value <= hi + 1e-9)


def test_build_map_dimension_checks(square_points):
    with pytest.raises(MapError):
        build_map(square_points, [[1.0], [2.0], [3.0]])  # count mismatch
    with pytest.raises(DimensionMismatch):
        build_map(square_points, [[1.0], [2.0], [3.0, 4.0], [5.0]])


def test_parse_map_text():
    smap = parse_map(MAP_TEXT)
    assert smap.dim == 2
    assert len(smap.domain) == 4
    assert tuple(smap.interpolate((0.0, 1.0))) == (40.0, 3.0)


def test_parse_map_errors():
    with pytest.raises(MapError) as err:
        parse_map("n 2\n0 0 : 1 2\n1 0 : 3\n2 2 : 1 2\n")
    assert "line" in str(err.value)
    with pytest.raises(MapError):
        parse_map("")
    with pytest.raises(MapError):
        parse_map("not a header\n")


def test_mesh_dict_round_trips_structure(square_map):
    mesh = square_map.mesh_dict()
    assert set(mesh) >= {"domain", "codomain", "triangles"}
    assert len(mesh["domain"]) == 4
    assert mesh["triangles"] == [list(t) for t in square_map.triangles]
