"""Geometry contracts: Voronoi nearest-site, candidates on a line, sectors,
Delaunay empty-circumcircle with the deterministic tie-break, and
barycentric point location."""
from __future__ import annotations

import math
import random

import pytest

from gliders2d import geom
from gliders2d.geom import (
    FIELD_RECT,
    PITCH_RECT,
    GeomError,
    Rect,
    Sector,
    Vec2,
    delaunay_triangulate,
    locate_and_barycentric,
    sector_contains,
    voronoi_candidates_on_line,
    voronoi_compute,
)


def random_sites(rng, n):
    return [Vec2(rng.uniform(-50, 50), rng.uniform(-32, 32)) for _ in range(n)]


def point_in_convex(cell, p, tol=1e-9):
    n = len(cell)
    for k in range(n):
        a = cell[k]
        b = cell[(k + 1) % n]
        if (b - a).cross(p - a) < -tol:
            return False
    return True


class TestVoronoi:
    def test_single_site_cell_is_clip_rect(self):
        d = voronoi_compute([Vec2(3.0, 4.0)], FIELD_RECT)
        assert len(d.cells) == 1
        assert sorted((v.x, v.y) for v in d.cells[0]) == sorted(
            (c.x, c.y) for c in FIELD_RECT.corners()
        )

    def test_two_sites_split_by_bisector(self):
        d = voronoi_compute([Vec2(-10, 0), Vec2(10, 0)], FIELD_RECT)
        for cell, sign in zip(d.cells, (-1.0, 1.0)):
            for v in cell:
                assert sign * v.x >= -1e-9
        assert len(d.segments) == 1
        (a, b) = d.segments[0]
        assert abs(a.x) < 1e-9 and abs(b.x) < 1e-9

    def test_empty_sites_rejected(self):
        with pytest.raises(GeomError, match="no sites"):
            voronoi_compute([], FIELD_RECT)

    def test_duplicate_sites_merged(self):
        d = voronoi_compute([Vec2(0, 0), Vec2(0, 5e-7), Vec2(10, 0)])
        assert len(d.sites) == 2

    def test_nearest_site_oracle(self, rng):
        # brute-force nearest-site classification must match cell membership
        for _ in range(20):
            sites = random_sites(rng, rng.randint(2, 11))
            d = voronoi_compute(sites)
            for _ in range(500):
                p = Vec2(rng.uniform(-52, 52), rng.uniform(-33, 33))
                dists = [p.dist(s) for s in d.sites]
                ranked = sorted(dists)
                if len(ranked) > 1 and ranked[1] - ranked[0] < 1e-9:
                    continue
                nearest = dists.index(ranked[0])
                assert point_in_convex(d.cells[nearest], p)

    def test_cells_tile_the_clip_rect(self, rng):
        for _ in range(10):
            sites = random_sites(rng, rng.randint(1, 9))
            d = voronoi_compute(sites, FIELD_RECT)
            area = 0.0
            for cell in d.cells:
                for k in range(1, len(cell) - 1):
                    area += 0.5 * (cell[k] - cell[0]).cross(cell[k + 1] - cell[0])
            expected = (FIELD_RECT.x_max - FIELD_RECT.x_min) * (
                FIELD_RECT.y_max - FIELD_RECT.y_min
            )
            assert area == pytest.approx(expected, rel=1e-9)

    def test_vertices_equidistant_to_three_sites(self, rng):
        for _ in range(10):
            sites = random_sites(rng, rng.randint(3, 12))
            d = voronoi_compute(sites)
            for v in d.vertices:
                dists = sorted(v.dist(s) for s in d.sites)
                assert dists[2] - dists[0] < 1e-6

    def test_determinism_bit_identical(self, rng):
        sites = random_sites(rng, 9)
        d1 = voronoi_compute(sites)
        d2 = voronoi_compute(sites)
        assert d1 == d2


class TestCandidatesOnLine:
    def test_bisector_on_line_returns_clipped_endpoints(self):
        d = voronoi_compute([Vec2(-10, 0), Vec2(10, 0)], FIELD_RECT)
        points = voronoi_candidates_on_line(d, 0.0)
        ys = sorted(round(p.y, 9) for p in points)
        assert ys == [-34.0, 34.0]
        assert all(p.x == 0.0 for p in points)

    def test_out_of_field_intersections_excluded(self):
        # a diagram whose bisector crosses x=30 at |y| >= 34 yields nothing
        d = voronoi_compute([Vec2(20, 30), Vec2(40, 40)], PITCH_RECT)
        points = voronoi_candidates_on_line(d, 30.0)
        for p in points:
            assert abs(p.y) < 34.0 and abs(p.x) < 52.5

    def test_segment_sampling_oracle(self, rng):
        # dense sampling of every segment for x = 20 crossings
        for _ in range(10):
            sites = random_sites(rng, 8)
            d = voronoi_compute(sites)
            got = voronoi_candidates_on_line(d, 20.0)
            expected = []
            for a, b in d.segments:
                if (a.x - 20.0) * (b.x - 20.0) <= 0 and a.x != b.x:
                    t = (20.0 - a.x) / (b.x - a.x)
                    p = Vec2(20.0, a.y + t * (b.y - a.y))
                    if abs(p.y) < 34.0:
                        expected.append(p)
            assert len(got) <= len(expected) + 1
            for p in expected:
                assert any(p.dist(q) < 1e-6 for q in got)

    def test_include_vertices_flag(self, rng):
        sites = random_sites(rng, 8)
        d = voronoi_compute(sites)
        base = voronoi_candidates_on_line(d, 10.0)
        with_vertices = voronoi_candidates_on_line(d, 10.0, include_vertices=True)
        in_field = [v for v in d.vertices if abs(v.y) < 34.0 and abs(v.x) < 52.5]
        assert len(with_vertices) >= len(base)
        for v in in_field:
            assert any(v.dist(q) < 1e-9 for q in with_vertices)


class TestSector:
    def test_paper_sector_toward_posts(self):
        apex = Vec2(36.0, 0.0)
        sector = Sector(
            apex=apex,
            radius_min=0.0,
            radius_max=10000.0,
            angle_left=(Vec2(52.5, -8.0) - apex).bearing_deg(),
            angle_right=(Vec2(52.5, 8.0) - apex).bearing_deg(),
        )
        assert sector_contains(sector, Vec2(45.0, 0.0))
        assert not sector_contains(sector, Vec2(20.0, 0.0))

    def test_apex_with_zero_radius_min(self):
        sector = Sector(Vec2(1.0, 2.0), 0.0, 5.0, -30.0, 30.0)
        assert sector_contains(sector, Vec2(1.0, 2.0))

    def test_polar_oracle(self, rng):
        # agreement with a direct polar-coordinate check
        for _ in range(1000):
            apex = Vec2(rng.uniform(-20, 20), rng.uniform(-20, 20))
            left = rng.uniform(-180, 180)
            span = rng.uniform(0, 340)
            r0 = rng.uniform(0, 5)
            r1 = r0 + rng.uniform(0, 20)
            sector = Sector(apex, r0, r1, left, geom.norm_deg(left + span))
            p = Vec2(rng.uniform(-40, 40), rng.uniform(-40, 40))
            rel = p - apex
            r = rel.norm()
            if r < 1e-9:
                expected = r0 <= 0.0
            else:
                inside_r = r0 <= r <= r1
                offset = (rel.bearing_deg() - left) % 360.0
                expected = inside_r and offset <= span + 1e-12
            assert sector_contains(sector, p) == expected

    def test_invalid_radii_rejected(self):
        with pytest.raises(GeomError):
            Sector(Vec2(0, 0), 5.0, 1.0, 0.0, 90.0)


def circumcircle(a, b, c):
    return geom._circumcircle(a, b, c)


class TestDelaunay:
    def test_three_points_single_triangle(self):
        t = delaunay_triangulate([Vec2(0, 0), Vec2(4, 0), Vec2(0, 3)])
        assert t.triangles == ((0, 1, 2),)

    def test_unit_square_tie_break(self):
        # cocircular corners: the lexicographically smallest diagonal wins
        t = delaunay_triangulate([Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)])
        edges = set()
        for tri in t.triangles:
            for e in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
                edges.add(tuple(sorted(e)))
        assert (0, 2) in edges  # diagonal (0,0)-(1,1)
        assert (1, 3) not in edges

    def test_degenerate_inputs_rejected(self):
        with pytest.raises(GeomError, match="degenerate input"):
            delaunay_triangulate([Vec2(0, 0), Vec2(1, 1)])
        with pytest.raises(GeomError, match="degenerate input"):
            delaunay_triangulate([Vec2(0, 0), Vec2(1, 1), Vec2(2, 2), Vec2(3, 3)])

    def test_empty_circumcircle_oracle(self, rng):
        # exhaustive O(T*N) check over random instances
        for _ in range(50):
            pts = [Vec2(rng.uniform(-50, 50), rng.uniform(-33, 33)) for _ in range(rng.randint(3, 50))]
            try:
                tri = delaunay_triangulate(pts)
            except GeomError:
                continue
            for a, b, c in tri.triangles:
                ux, uy, r = circumcircle(tri.vertices[a], tri.vertices[b], tri.vertices[c])
                for i, p in enumerate(tri.vertices):
                    if i in (a, b, c):
                        continue
                    d = math.sqrt((p.x - ux) ** 2 + (p.y - uy) ** 2)
                    assert d > r - 1e-9

    def test_triangles_ccw_and_cover_hull(self, rng):
        pts = [Vec2(rng.uniform(-30, 30), rng.uniform(-20, 20)) for _ in range(25)]
        tri = delaunay_triangulate(pts)
        area = 0.0
        for a, b, c in tri.triangles:
            va, vb, vc = tri.vertices[a], tri.vertices[b], tri.vertices[c]
            cross = (vb - va).cross(vc - va)
            assert cross > 0.0
            area += 0.5 * cross
        hull_area = _hull_area(pts)
        assert area == pytest.approx(hull_area, rel=1e-9)

    def test_determinism(self, rng):
        pts = [Vec2(rng.uniform(-30, 30), rng.uniform(-20, 20)) for _ in range(30)]
        assert delaunay_triangulate(pts) == delaunay_triangulate(pts)


def _hull_area(points):
    pts = sorted(set((p.x, p.y) for p in points))
    if len(pts) < 3:
        return 0.0

    def half(points_iter):
        out = []
        for p in points_iter:
            while len(out) >= 2 and (
                (out[-1][0] - out[-2][0]) * (p[1] - out[-2][1])
                - (out[-1][1] - out[-2][1]) * (p[0] - out[-2][0])
            ) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    area = 0.0
    for i in range(len(hull)):
        x1, y1 = hull[i]
        x2, y2 = hull[(i + 1) % len(hull)]
        area += 0.5 * (x1 * y2 - x2 * y1)
    return abs(area)


class TestLocate:
    def test_vertex_query_weight_one(self):
        tri = delaunay_triangulate([Vec2(0, 0), Vec2(10, 0), Vec2(0, 10), Vec2(10, 10)])
        loc = locate_and_barycentric(tri, Vec2(10, 0))
        assert loc.triangle_index is not None
        idx = loc.vertex_indices.index(1)
        assert loc.weights[idx] == pytest.approx(1.0, abs=1e-12)

    def test_centroid_equal_weights(self):
        tri = delaunay_triangulate([Vec2(0, 0), Vec2(9, 0), Vec2(0, 9)])
        loc = locate_and_barycentric(tri, Vec2(3, 3))
        assert loc.triangle_index == 0
        for w in loc.weights:
            assert w == pytest.approx(1 / 3, abs=1e-9)

    def test_outside_hull_projects_to_nearest_corner(self):
        pts = [Vec2(-52.5, -34), Vec2(52.5, -34), Vec2(52.5, 34), Vec2(-52.5, 34)]
        tri = delaunay_triangulate(pts)
        loc = locate_and_barycentric(tri, Vec2(-60, 40))
        assert loc.triangle_index is None
        rec = loc.reconstruct(tri)
        assert rec.dist(Vec2(-52.5, 34)) < 1e-9

    def test_projection_oracle_random(self, rng):
        pts = [Vec2(rng.uniform(-20, 20), rng.uniform(-15, 15)) for _ in range(12)]
        tri = delaunay_triangulate(pts)
        for _ in range(300):
            q = Vec2(rng.uniform(-60, 60), rng.uniform(-40, 40))
            loc = locate_and_barycentric(tri, q)
            rec = loc.reconstruct(tri)
            assert all(-1e-12 <= w <= 1.0 + 1e-12 for w in loc.weights)
            assert sum(loc.weights) == pytest.approx(1.0, abs=1e-9)
            if loc.triangle_index is not None:
                assert rec.dist(q) < 1e-9
            else:
                # reconstruction equals the projection onto the nearest hull edge
                best = min(
                    _hull_edge_projections(tri, q), key=lambda pr: q.dist2(pr)
                )
                assert rec.dist(best) < 1e-6


def _hull_edge_projections(tri, q):
    out = []
    for i, j, _ in geom.hull_edges(tri):
        a = tri.vertices[i]
        b = tri.vertices[j]
        ab = b - a
        t = max(0.0, min(1.0, (q - a).dot(ab) / ab.dot(ab)))
        out.append(Vec2(a.x + t * ab.x, a.y + t * ab.y))
    return out
