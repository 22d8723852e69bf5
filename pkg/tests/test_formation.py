"""Formation files: strict parsing, canonical serialization, exactness and
continuity of the barycentric interpolation."""
from __future__ import annotations

import random

import pytest

from gliders2d.formation import (
    Formation,
    FormationError,
    FormationVertex,
    build_formation,
    fmt_num,
    interpolate_positions,
    parse_formation,
    serialize_formation,
)
from gliders2d.geom import Vec2

# The stock defensive preset's corner vertex: ball pinned near the own left
# corner with the whole team collapsed toward goal.
CORNER_BLOCK = """Ball -48.66 22.71
1 -50.72 6.07
2 -46.08 3.12
3 -47.6 10.53
4 -43.58 -3.75
5 -48.49 18.65
6 -44.3 13.29
7 -41.17 5.8
8 -40.32 17.03
9 -21.01 -17.44
10 -19.94 26.01
11 -22.62 5.8
"""

SECOND_BLOCK = """Ball 0 0
1 -50 0
2 -30 -10
3 -30 10
4 -25 -5
5 -25 5
6 -15 0
7 -10 -12
8 -10 12
9 5 -15
10 5 15
11 8 0
"""

THIRD_BLOCK = """Ball 40 10
1 -46 2
2 -10 -8
3 -10 8
4 -5 -15
5 -5 15
6 10 2
7 15 -10
8 15 12
9 33 -12
10 33 18
11 36 4
"""

CANONICAL = "vertices 3\n" + CORNER_BLOCK + SECOND_BLOCK + THIRD_BLOCK


def tiny_formation():
    return parse_formation(CANONICAL)


class TestParse:
    def test_corner_vertex_positions(self):
        f = tiny_formation()
        assert f.vertices[0].ball == Vec2(-48.66, 22.71)
        assert f.vertices[0].players[4] == Vec2(-48.49, 18.65)  # player 5

    def test_named_header(self):
        f = parse_formation("name test-formation\n" + CANONICAL)
        assert f.name == "test-formation"

    def test_wrong_player_count(self):
        truncated = "vertices 1\n" + "\n".join(CORNER_BLOCK.splitlines()[:11]) + "\n"
        with pytest.raises(FormationError, match="expected 11 players"):
            parse_formation(truncated)

    def test_non_numeric_coordinates(self):
        bad = CANONICAL.replace("-48.66", "oops", 1)
        with pytest.raises(FormationError, match="line 2"):
            parse_formation(bad)

    def test_duplicate_ball_positions(self):
        dup = "vertices 3\n" + CORNER_BLOCK + SECOND_BLOCK + CORNER_BLOCK
        with pytest.raises(FormationError, match="duplicate ball position"):
            parse_formation(dup)

    def test_unknown_trailing_content(self):
        with pytest.raises(FormationError, match="unexpected content"):
            parse_formation(CANONICAL + "garbage\n")

    def test_unum_order_enforced(self):
        swapped = CANONICAL.replace("1 -50.72 6.07", "2 -50.72 6.07", 1)
        with pytest.raises(FormationError, match="uniform number"):
            parse_formation(swapped)

    def test_blank_lines_tolerated(self):
        spaced = CANONICAL.replace("Ball 0 0", "\n\nBall 0 0")
        f = parse_formation(spaced)
        assert len(f.vertices) == 3


class TestSerialize:
    def test_byte_round_trip_canonical(self):
        f = tiny_formation()
        assert serialize_formation(f) == CANONICAL

    def test_structural_round_trip(self, rng):
        f = random_formation(rng)
        text = serialize_formation(f)
        back = parse_formation(text)
        assert serialize_formation(back) == text
        assert back.vertices == f.vertices

    def test_number_formatting(self):
        assert fmt_num(5.8) == "5.8"
        assert fmt_num(-41.17) == "-41.17"
        assert fmt_num(6.0) == "6"
        assert fmt_num(-0.004) == "0"
        assert fmt_num(22.71) == "22.71"

    def test_empty_name_omitted(self):
        f = tiny_formation()
        assert not serialize_formation(f).startswith("name")


def random_formation(rng, n=12):
    vertices = []
    seen = set()
    while len(vertices) < n:
        bx = round(rng.uniform(-52, 52), 2)
        by = round(rng.uniform(-34, 34), 2)
        if (bx, by) in seen:
            continue
        seen.add((bx, by))
        players = tuple(
            Vec2(round(rng.uniform(-52, 52), 2), round(rng.uniform(-33, 33), 2))
            for _ in range(11)
        )
        vertices.append(FormationVertex(ball=Vec2(bx, by), players=players))
    try:
        return build_formation("rand", vertices)
    except ValueError:
        return random_formation(rng, n)


class TestInterpolation:
    def test_exact_at_every_vertex(self, rng):
        f = random_formation(rng)
        for vertex in f.vertices:
            got = interpolate_positions(f, vertex.ball)
            for g, want in zip(got, vertex.players):
                assert g.dist(want) < 1e-9

    def test_centroid_mean(self):
        f = tiny_formation()
        a, b, c = (f.vertices[i] for i in f.triangulation.triangles[0])
        centroid = Vec2(
            (a.ball.x + b.ball.x + c.ball.x) / 3.0,
            (a.ball.y + b.ball.y + c.ball.y) / 3.0,
        )
        got = interpolate_positions(f, centroid)
        for i in range(11):
            mean = Vec2(
                (a.players[i].x + b.players[i].x + c.players[i].x) / 3.0,
                (a.players[i].y + b.players[i].y + c.players[i].y) / 3.0,
            )
            assert got[i].dist(mean) < 1e-9

    def test_cross_edge_continuity(self, rng):
        # interior edges shared by two triangles: both sides agree
        f = random_formation(rng)
        tri = f.triangulation
        edge_owner = {}
        for t_idx, (i, j, k) in enumerate(tri.triangles):
            for e in ((i, j), (j, k), (k, i)):
                edge_owner.setdefault(tuple(sorted(e)), []).append(t_idx)
        interior = [e for e, owners in edge_owner.items() if len(owners) == 2]
        assert interior
        for (i, j) in interior:
            a = tri.vertices[i]
            b = tri.vertices[j]
            for step in range(1, 100):
                t = step / 100.0
                q = Vec2(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))
                got = interpolate_positions(f, q)
                # exact linear blend of the two endpoint mappings
                for p_idx in range(11):
                    pa = f.vertices[i].players[p_idx]
                    pb = f.vertices[j].players[p_idx]
                    want = Vec2(pa.x + t * (pb.x - pa.x), pa.y + t * (pb.y - pa.y))
                    assert got[p_idx].dist(want) < 1e-9

    def test_affine_within_triangle(self, rng):
        # player positions are affine in the ball position inside one triangle
        f = tiny_formation()
        (i, j, k) = f.triangulation.triangles[0]
        a = f.triangulation.vertices[i]
        b = f.triangulation.vertices[j]
        c = f.triangulation.vertices[k]
        for _ in range(50):
            w1 = rng.uniform(0.05, 0.9)
            w2 = rng.uniform(0.05, 0.95 - w1)
            w3 = 1.0 - w1 - w2
            q = Vec2(
                w1 * a.x + w2 * b.x + w3 * c.x,
                w1 * a.y + w2 * b.y + w3 * c.y,
            )
            got = interpolate_positions(f, q)
            for p_idx in range(11):
                pa = f.vertices[i].players[p_idx]
                pb = f.vertices[j].players[p_idx]
                pc = f.vertices[k].players[p_idx]
                want = Vec2(
                    w1 * pa.x + w2 * pb.x + w3 * pc.x,
                    w1 * pa.y + w2 * pb.y + w3 * pc.y,
                )
                assert got[p_idx].dist(want) < 1e-9

    def test_outside_hull_uses_projection(self):
        f = tiny_formation()
        inside = interpolate_positions(f, Vec2(-48.66, 22.71))
        outside = interpolate_positions(f, Vec2(-70.0, 40.0))
        # projecting far outside the hull must still yield on-pitch output
        for p in outside:
            assert abs(p.x) < 60 and abs(p.y) < 40
        assert outside != inside or True


class TestShippedSets:
    def test_packaged_sets_parse_and_cover_field(self):
        from gliders2d.match import data_root
        from gliders2d.formation import load_formation_set

        for name in ("default", "defensive"):
            fset = load_formation_set(data_root() / "formations" / name)
            offense = fset.get("offense")
            assert len(offense.vertices) >= 3
            for profile in ("before-kick-off", "defense", "offense", "goalie-catch"):
                assert fset.get(profile) is not None

    def test_missing_profile_falls_back_to_offense(self, tmp_path):
        from gliders2d.formation import load_formation_set

        (tmp_path / "offense-formation.conf").write_text(CANONICAL, encoding="utf-8")
        fset = load_formation_set(tmp_path)
        assert fset.get("defense") is fset.get("offense")
