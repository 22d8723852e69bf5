"""Planar geometry for the arena.

Vectors and angular sectors, Voronoi diagrams clipped to the pitch
rectangle, Delaunay triangulation with a deterministic cocircular
tie-break, and barycentric point location for piecewise-linear
interpolation.  Everything here is a pure function over immutable
values, so results can be shared freely across concurrent matches.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

EPS = 1e-9
MERGE_TOL = 1e-6

FIELD_HALF_LENGTH = 52.5
FIELD_HALF_WIDTH = 34.0
FIELD_MARGIN = 5.0


class GeomError(ValueError):
    """Raised for degenerate geometric input."""


def norm_deg(angle: float) -> float:
    """Normalize an angle in degrees to (-180, 180]."""
    a = angle % 360.0
    if a > 180.0:
        a -= 360.0
    return a


@dataclass(frozen=True)
class Vec2:
    """Point or displacement on the pitch, meters, attack direction +x."""

    x: float
    y: float

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def __mul__(self, s: float) -> "Vec2":
        return Vec2(self.x * s, self.y * s)

    __rmul__ = __mul__

    def __neg__(self) -> "Vec2":
        return Vec2(-self.x, -self.y)

    def dot(self, other: "Vec2") -> float:
        return self.x * other.x + self.y * other.y

    def cross(self, other: "Vec2") -> float:
        return self.x * other.y - self.y * other.x

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y)

    def dist(self, other: "Vec2") -> float:
        dx = self.x - other.x
        dy = self.y - other.y
        return math.sqrt(dx * dx + dy * dy)

    def dist2(self, other: "Vec2") -> float:
        dx = self.x - other.x
        dy = self.y - other.y
        return dx * dx + dy * dy

    def bearing_deg(self) -> float:
        """Direction of this vector in degrees, 0 = +x, CCW positive."""
        return math.degrees(math.atan2(self.y, self.x))

    def unit(self) -> "Vec2":
        n = self.norm()
        if n < EPS:
            return Vec2(1.0, 0.0)
        return Vec2(self.x / n, self.y / n)

    def is_finite(self) -> bool:
        return math.isfinite(self.x) and math.isfinite(self.y)


@dataclass(frozen=True)
class Rect:
    x_min: float
    y_min: float
    x_max: float
    y_max: float

    def corners(self) -> tuple[Vec2, Vec2, Vec2, Vec2]:
        """Corner loop in counter-clockwise order."""
        return (
            Vec2(self.x_min, self.y_min),
            Vec2(self.x_max, self.y_min),
            Vec2(self.x_max, self.y_max),
            Vec2(self.x_min, self.y_max),
        )

    def contains(self, p: Vec2, tol: float = 0.0) -> bool:
        return (
            self.x_min - tol <= p.x <= self.x_max + tol
            and self.y_min - tol <= p.y <= self.y_max + tol
        )


FIELD_RECT = Rect(-FIELD_HALF_LENGTH, -FIELD_HALF_WIDTH, FIELD_HALF_LENGTH, FIELD_HALF_WIDTH)
PITCH_RECT = Rect(
    -FIELD_HALF_LENGTH - FIELD_MARGIN,
    -FIELD_HALF_WIDTH - FIELD_MARGIN,
    FIELD_HALF_LENGTH + FIELD_MARGIN,
    FIELD_HALF_WIDTH + FIELD_MARGIN,
)


@dataclass(frozen=True)
class Sector:
    """Annular sector: apex, radius band, and a CCW angular span.

    The span runs counter-clockwise from ``angle_left`` to ``angle_right``;
    both are normalized to (-180, 180].
    """

    apex: Vec2
    radius_min: float
    radius_max: float
    angle_left: float
    angle_right: float

    def __post_init__(self) -> None:
        if self.radius_min < 0 or self.radius_min > self.radius_max:
            raise GeomError("invalid sector radii")
        object.__setattr__(self, "angle_left", norm_deg(self.angle_left))
        object.__setattr__(self, "angle_right", norm_deg(self.angle_right))


@dataclass(frozen=True)
class VoronoiDiagram:
    """Clipped planar partition: one convex cell per (deduplicated) site."""

    sites: tuple[Vec2, ...]
    cells: tuple[tuple[Vec2, ...], ...]
    vertices: tuple[Vec2, ...]
    segments: tuple[tuple[Vec2, Vec2], ...]


@dataclass(frozen=True)
class Triangulation:
    vertices: tuple[Vec2, ...]
    triangles: tuple[tuple[int, int, int], ...]


@dataclass(frozen=True)
class BaryLocation:
    """Result of locating a point in a triangulation.

    ``triangle_index`` is None when the query fell outside the convex hull;
    the weights then describe the projection onto the nearest hull edge.
    ``vertex_indices`` always names the three vertices the weights combine.
    """

    triangle_index: Optional[int]
    weights: tuple[float, float, float]
    vertex_indices: tuple[int, int, int]

    def reconstruct(self, tri: Triangulation) -> Vec2:
        x = 0.0
        y = 0.0
        for w, idx in zip(self.weights, self.vertex_indices):
            v = tri.vertices[idx]
            x += w * v.x
            y += w * v.y
        return Vec2(x, y)


def dedupe_points(points: Sequence[Vec2], tol: float = MERGE_TOL) -> list[Vec2]:
    """Merge points closer than ``tol``, keeping first occurrences in order."""
    out: list[Vec2] = []
    for p in points:
        if not any(p.dist(q) <= tol for q in out):
            out.append(p)
    return out


# ---------------------------------------------------------------------------
# Sectors


def sector_contains(sector: Sector, p: Vec2) -> bool:
    """True iff ``p`` lies in the sector's radius band and angular span."""
    rel = p - sector.apex
    r = rel.norm()
    if r < sector.radius_min or r > sector.radius_max:
        return False
    if r < EPS:
        # Zero offset has no bearing; it is inside iff the band starts at 0.
        return sector.radius_min <= 0.0
    theta = rel.bearing_deg()
    span = (sector.angle_right - sector.angle_left) % 360.0
    offset = (theta - sector.angle_left) % 360.0
    return offset <= span


# ---------------------------------------------------------------------------
# Voronoi


def _clip_halfplane(poly: list[Vec2], a: float, b: float, c: float) -> list[Vec2]:
    """Clip a convex polygon to the half-plane a*x + b*y <= c."""
    out: list[Vec2] = []
    n = len(poly)
    for i in range(n):
        p = poly[i]
        q = poly[(i + 1) % n]
        fp = a * p.x + b * p.y - c
        fq = a * q.x + b * q.y - c
        if fp <= 0.0:
            out.append(p)
            if fq > 0.0:
                t = fp / (fp - fq)
                out.append(Vec2(p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)))
        elif fq <= 0.0:
            t = fp / (fp - fq)
            out.append(Vec2(p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)))
    return out


def _drop_repeats(poly: list[Vec2], tol: float = 1e-12) -> list[Vec2]:
    out: list[Vec2] = []
    for p in poly:
        if not out or p.dist(out[-1]) > tol:
            out.append(p)
    if len(out) > 1 and out[0].dist(out[-1]) <= tol:
        out.pop()
    return out


def voronoi_compute(sites: Sequence[Vec2], clip: Rect = PITCH_RECT) -> VoronoiDiagram:
    """Voronoi diagram of ``sites`` clipped to ``clip``.

    Each cell is built directly as the intersection of the clip rectangle
    with the bisector half-planes against every other site, so the
    nearest-site property holds by construction.  Sites closer than the
    merge tolerance are collapsed onto the first occurrence.
    """
    merged = dedupe_points(sites)
    if not merged:
        raise GeomError("no sites")

    cells: list[tuple[Vec2, ...]] = []
    for i, s in enumerate(merged):
        poly = list(clip.corners())
        for j, t in enumerate(merged):
            if i == j:
                continue
            a = 2.0 * (t.x - s.x)
            b = 2.0 * (t.y - s.y)
            c = t.x * t.x + t.y * t.y - s.x * s.x - s.y * s.y
            poly = _clip_halfplane(poly, a, b, c)
            if not poly:
                break
        cells.append(tuple(_drop_repeats(poly)))

    vertices: list[Vec2] = []
    seen_vertices: set[tuple[int, int]] = set()
    segments: list[tuple[Vec2, Vec2]] = []
    seen_segments: set[tuple[tuple[int, int], tuple[int, int]]] = set()

    def vkey(p: Vec2) -> tuple[int, int]:
        return (round(p.x * 1e7), round(p.y * 1e7))

    def nearest_count(p: Vec2) -> int:
        dists = [p.dist(s) for s in merged]
        dmin = min(dists)
        return sum(1 for d in dists if d <= dmin + MERGE_TOL)

    for cell in cells:
        n = len(cell)
        for k in range(n):
            p = cell[k]
            key = vkey(p)
            if key not in seen_vertices and nearest_count(p) >= 3:
                seen_vertices.add(key)
                vertices.append(p)
            if n >= 2:
                q = cell[(k + 1) % n]
                if p.dist(q) <= EPS:
                    continue
                mid = Vec2(0.5 * (p.x + q.x), 0.5 * (p.y + q.y))
                if nearest_count(mid) >= 2:
                    skey = tuple(sorted((vkey(p), vkey(q))))
                    if skey not in seen_segments:
                        seen_segments.add(skey)
                        segments.append((p, q))

    return VoronoiDiagram(
        sites=tuple(merged),
        cells=tuple(cells),
        vertices=tuple(vertices),
        segments=tuple(segments),
    )


def voronoi_candidates_on_line(
    diagram: VoronoiDiagram,
    vertical_line_x: float,
    include_vertices: bool = False,
) -> list[Vec2]:
    """Intersections of diagram segments with the line x = ``vertical_line_x``.

    Results are filtered to |y| < 34 and |x| < 52.5.  With
    ``include_vertices`` the diagram's own vertices passing the same filter
    are appended.  Duplicates within 1e-9 are dropped, first occurrence wins.
    """

    def in_field(p: Vec2) -> bool:
        return abs(p.y) < FIELD_HALF_WIDTH and abs(p.x) < FIELD_HALF_LENGTH

    found: list[Vec2] = []

    def push_raw(p: Vec2) -> None:
        if any(p.dist(q) <= EPS for q in found):
            return
        found.append(p)

    def push(p: Vec2) -> None:
        if in_field(p):
            push_raw(p)

    x = vertical_line_x
    for a, b in diagram.segments:
        da = a.x - x
        db = b.x - x
        if abs(da) <= EPS and abs(db) <= EPS:
            # Segment lies on the line itself: report its overlap with the
            # field band, endpoints clamped to the closed boundary.
            if abs(x) < FIELD_HALF_LENGTH:
                lo = max(min(a.y, b.y), -FIELD_HALF_WIDTH)
                hi = min(max(a.y, b.y), FIELD_HALF_WIDTH)
                if lo <= hi:
                    push_raw(Vec2(x, lo))
                    push_raw(Vec2(x, hi))
        elif da * db <= 0.0 and a.x != b.x:
            t = da / (a.x - b.x)
            push(Vec2(x, a.y + t * (b.y - a.y)))

    if include_vertices:
        for v in diagram.vertices:
            push(v)
    return found


# ---------------------------------------------------------------------------
# Delaunay


def _circumcircle(a: Vec2, b: Vec2, c: Vec2) -> tuple[float, float, float]:
    """Circumcenter (x, y) and radius of the triangle abc."""
    d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y))
    if abs(d) < 1e-12:
        return (math.inf, math.inf, math.inf)
    a2 = a.x * a.x + a.y * a.y
    b2 = b.x * b.x + b.y * b.y
    c2 = c.x * c.x + c.y * c.y
    ux = (a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d
    uy = (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d
    r = math.sqrt((a.x - ux) ** 2 + (a.y - uy) ** 2)
    return (ux, uy, r)


def _all_collinear(pts: list[Vec2]) -> bool:
    p0 = pts[0]
    p1 = max(pts[1:], key=lambda p: p0.dist2(p))
    base = p1 - p0
    span = base.norm()
    if span < EPS:
        return True
    for p in pts:
        if abs(base.cross(p - p0)) / span > EPS:
            return False
    return True


def delaunay_triangulate(points: Sequence[Vec2]) -> Triangulation:
    """Delaunay triangulation via incremental insertion (Bowyer-Watson).

    Duplicates within the merge tolerance are dropped.  Cocircular
    degeneracies are resolved by preferring the lexicographically smallest
    diagonal, which keeps the output deterministic for a fixed input order.
    """
    pts = dedupe_points(points)
    if len(pts) < 3 or _all_collinear(pts):
        raise GeomError("degenerate input")

    # Super-triangle comfortably containing every input point.
    min_x = min(p.x for p in pts)
    max_x = max(p.x for p in pts)
    min_y = min(p.y for p in pts)
    max_y = max(p.y for p in pts)
    cx = 0.5 * (min_x + max_x)
    cy = 0.5 * (min_y + max_y)
    size = max(max_x - min_x, max_y - min_y, 1.0) * 64.0
    n = len(pts)
    allpts = pts + [
        Vec2(cx - size, cy - size),
        Vec2(cx + size, cy - size),
        Vec2(cx, cy + size),
    ]

    tris: list[tuple[int, int, int]] = [(n, n + 1, n + 2)]
    circ: list[tuple[float, float, float]] = [_circumcircle(*(allpts[i] for i in tris[0]))]

    for pi in range(n):
        p = allpts[pi]
        bad: list[int] = []
        for ti, (ux, uy, r) in enumerate(circ):
            dx = p.x - ux
            dy = p.y - uy
            if math.sqrt(dx * dx + dy * dy) < r - 1e-12:
                bad.append(ti)
        edge_count: dict[tuple[int, int], int] = {}
        for ti in bad:
            a, b, c = tris[ti]
            for u, v in ((a, b), (b, c), (c, a)):
                key = (u, v) if u < v else (v, u)
                edge_count[key] = edge_count.get(key, 0) + 1
        boundary = [e for ti in bad for e in _tri_edges(tris[ti]) if edge_count[_ekey(e)] == 1]
        for ti in sorted(bad, reverse=True):
            tris.pop(ti)
            circ.pop(ti)
        for u, v in boundary:
            pu, pv = allpts[u], allpts[v]
            if (pv - pu).cross(p - pu) > 0.0:
                tri = (u, v, pi)
            else:
                tri = (v, u, pi)
            tris.append(tri)
            circ.append(_circumcircle(allpts[tri[0]], allpts[tri[1]], allpts[tri[2]]))

    keep = [t for t in tris if max(t) < n]
    keep = _legalize(allpts, keep)
    keep = [_canonical_tri(t) for t in keep]
    keep.sort()
    return Triangulation(vertices=tuple(pts), triangles=tuple(keep))


def _tri_edges(t: tuple[int, int, int]) -> tuple[tuple[int, int], ...]:
    a, b, c = t
    return ((a, b), (b, c), (c, a))


def _ekey(e: tuple[int, int]) -> tuple[int, int]:
    return e if e[0] < e[1] else (e[1], e[0])


def _canonical_tri(t: tuple[int, int, int]) -> tuple[int, int, int]:
    a, b, c = t
    if a <= b and a <= c:
        return (a, b, c)
    if b <= a and b <= c:
        return (b, c, a)
    return (c, a, b)


def _point_key(p: Vec2) -> tuple[float, float]:
    return (p.x, p.y)


def _legalize(pts: list[Vec2], tris: list[tuple[int, int, int]]) -> list[tuple[int, int, int]]:
    """Lawson flip pass: restore the empty-circumcircle property and break
    cocircular ties toward the lexicographically smallest diagonal."""
    tris = list(tris)
    max_rounds = 8 * max(len(tris), 1)
    for _ in range(max_rounds):
        edge_owner: dict[tuple[int, int], list[int]] = {}
        for ti, t in enumerate(tris):
            for e in _tri_edges(t):
                edge_owner.setdefault(_ekey(e), []).append(ti)
        flipped = False
        for edge, owners in sorted(edge_owner.items()):
            if len(owners) != 2:
                continue
            t1, t2 = owners
            a, b = edge
            c = _opposite_vertex(tris[t1], edge)
            d = _opposite_vertex(tris[t2], edge)
            ux, uy, r = _circumcircle(pts[tris[t1][0]], pts[tris[t1][1]], pts[tris[t1][2]])
            pd = pts[d]
            dist = math.sqrt((pd.x - ux) ** 2 + (pd.y - uy) ** 2)
            do_flip = False
            if dist < r - EPS:
                do_flip = True
            elif abs(dist - r) <= EPS:
                cur = tuple(sorted((_point_key(pts[a]), _point_key(pts[b]))))
                alt = tuple(sorted((_point_key(pts[c]), _point_key(pts[d]))))
                do_flip = alt < cur
            if do_flip and _flip_valid(pts, a, b, c, d):
                tris[t1] = _oriented(pts, (c, d, a))
                tris[t2] = _oriented(pts, (d, c, b))
                flipped = True
                break
        if not flipped:
            return tris
    return tris


def _opposite_vertex(t: tuple[int, int, int], edge: tuple[int, int]) -> int:
    for v in t:
        if v != edge[0] and v != edge[1]:
            return v
    raise GeomError("edge not in triangle")


def _flip_valid(pts: list[Vec2], a: int, b: int, c: int, d: int) -> bool:
    # The quad (c, a, d, b) must be strictly convex for the flip to be legal.
    quad = (pts[c], pts[a], pts[d], pts[b])
    signs = []
    for i in range(4):
        p, q, r = quad[i], quad[(i + 1) % 4], quad[(i + 2) % 4]
        signs.append((q - p).cross(r - q))
    return all(s > EPS for s in signs) or all(s < -EPS for s in signs)


def _oriented(pts: list[Vec2], t: tuple[int, int, int]) -> tuple[int, int, int]:
    a, b, c = t
    if (pts[b] - pts[a]).cross(pts[c] - pts[a]) < 0.0:
        return (a, c, b)
    return (a, b, c)


# ---------------------------------------------------------------------------
# Point location


def barycentric_weights(a: Vec2, b: Vec2, c: Vec2, q: Vec2) -> tuple[float, float, float]:
    denom = (b - a).cross(c - a)
    if abs(denom) < 1e-15:
        return (math.nan, math.nan, math.nan)
    w1 = (b - q).cross(c - q) / denom
    w2 = (c - q).cross(a - q) / denom
    w3 = 1.0 - w1 - w2
    return (w1, w2, w3)


def hull_edges(tri: Triangulation) -> list[tuple[int, int, int]]:
    """Edges on the convex hull as (i, j, owning_triangle_index)."""
    owner: dict[tuple[int, int], list[int]] = {}
    for ti, t in enumerate(tri.triangles):
        for e in _tri_edges(t):
            owner.setdefault(_ekey(e), []).append(ti)
    out = [(e[0], e[1], ts[0]) for e, ts in sorted(owner.items()) if len(ts) == 1]
    return out


def locate_and_barycentric(tri: Triangulation, q: Vec2) -> BaryLocation:
    """Locate ``q`` in the triangulation.

    Inside the hull: containing triangle plus barycentric weights (first
    match in triangle order wins on shared edges).  Outside: the point is
    projected onto the nearest hull edge and the weights interpolate along
    that edge, third weight zero.
    """
    for ti, (i, j, k) in enumerate(tri.triangles):
        w = barycentric_weights(tri.vertices[i], tri.vertices[j], tri.vertices[k], q)
        if math.isnan(w[0]):
            continue
        if min(w) >= -1e-12:
            w = tuple(max(0.0, v) for v in w)
            s = sum(w)
            w = (w[0] / s, w[1] / s, w[2] / s)
            return BaryLocation(ti, w, (i, j, k))

    best: tuple[float, float, tuple[int, int, int]] | None = None
    for i, j, ti in hull_edges(tri):
        a = tri.vertices[i]
        b = tri.vertices[j]
        ab = b - a
        denom = ab.dot(ab)
        t = 0.0 if denom < 1e-15 else max(0.0, min(1.0, (q - a).dot(ab) / denom))
        proj = Vec2(a.x + t * ab.x, a.y + t * ab.y)
        d2 = q.dist2(proj)
        if best is None or d2 < best[0] - EPS:
            best = (d2, t, (i, j, ti))
    assert best is not None
    _, t, (i, j, ti) = best
    tri_verts = tri.triangles[ti]
    weights = [0.0, 0.0, 0.0]
    weights[tri_verts.index(i)] = 1.0 - t
    weights[tri_verts.index(j)] = t
    return BaryLocation(None, tuple(weights), tri_verts)
