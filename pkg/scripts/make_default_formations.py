"""Regenerate the shipped formation sets.

Each outfield role follows the ball from a home anchor with a
role-group-specific attraction; the goalie hugs the goal line.  The
``defensive`` set pulls defenders and midfielders toward the own goal.

Run from the repository root:  python scripts/make_default_formations.py
"""
from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from gliders2d.formation import (
    FormationVertex,
    build_formation,
    serialize_formation,
)
from gliders2d.geom import Vec2

# (home_x, home_y) per unum 1..11 in the team-local frame (attack +x)
HOMES = {
    1: (-50.0, 0.0),
    2: (-30.0, -5.0),
    3: (-30.0, 5.0),
    4: (-28.0, -14.0),
    5: (-28.0, 14.0),
    6: (-13.0, 0.0),
    7: (-13.0, -11.0),
    8: (-13.0, 11.0),
    9: (3.0, -17.0),
    10: (3.0, 17.0),
    11: (3.0, 0.0),
}

# (x attraction when attacking, x attraction when defending, y attraction)
PULL = {
    "def": (0.62, 0.42, 0.35),
    "mid": (0.80, 0.50, 0.45),
    "fwd": (0.90, 0.45, 0.55),
}

KICKOFF = {
    1: (-50.0, 0.0),
    2: (-28.0, -6.0),
    3: (-28.0, 6.0),
    4: (-26.0, -15.0),
    5: (-26.0, 15.0),
    6: (-18.0, 0.0),
    7: (-14.0, -11.0),
    8: (-14.0, 11.0),
    9: (-8.0, -18.0),
    10: (-8.0, 18.0),
    11: (-2.5, 0.0),
}

BALL_GRID_X = (-52.0, -36.0, -20.0, 0.0, 20.0, 36.0, 52.0)
BALL_GRID_Y = (-34.0, -17.0, 0.0, 17.0, 34.0)

# Defense-profile vertex matching the stock defensive preset near the own
# left corner; kept verbatim in the defensive set.
CORNER_VERTEX = (
    Vec2(-48.66, 22.71),
    [
        Vec2(-50.72, 6.07),
        Vec2(-46.08, 3.12),
        Vec2(-47.6, 10.53),
        Vec2(-43.58, -3.75),
        Vec2(-48.49, 18.65),
        Vec2(-44.3, 13.29),
        Vec2(-41.17, 5.8),
        Vec2(-40.32, 17.03),
        Vec2(-21.01, -17.44),
        Vec2(-19.94, 26.01),
        Vec2(-22.62, 5.8),
    ],
)


def group(unum: int) -> str:
    if unum == 1:
        return "gk"
    if unum <= 5:
        return "def"
    if unum <= 8:
        return "mid"
    return "fwd"


def clamp(v: float, lo: float, hi: float) -> float:
    return min(max(v, lo), hi)


def place(unum: int, ball: Vec2, x_shift: float, deep_shift: float) -> Vec2:
    if unum == 1:
        x = -50.5 + 0.04 * (ball.x + 52.5)
        y = clamp(0.3 * ball.y, -6.3, 6.3)
        return Vec2(round(x, 2), round(y, 2))
    hx, hy = HOMES[unum]
    p_att, p_def, py = PULL[group(unum)]
    px = p_att if ball.x > 0 else p_def
    shift = x_shift if group(unum) == "fwd" else x_shift + deep_shift
    x = clamp(hx + px * ball.x + shift, -51.0, 51.0)
    y = clamp(hy + py * ball.y, -33.0, 33.0)
    return Vec2(round(x, 2), round(y, 2))


def grid_formation(name: str, x_shift: float, deep_shift: float, extra=None):
    vertices = []
    for bx in BALL_GRID_X:
        for by in BALL_GRID_Y:
            ball = Vec2(bx, by)
            players = tuple(place(u, ball, x_shift, deep_shift) for u in range(1, 12))
            vertices.append(FormationVertex(ball=ball, players=players))
    if extra is not None:
        ball, players = extra
        vertices.append(FormationVertex(ball=ball, players=tuple(players)))
    return build_formation(name, vertices)


def kickoff_formation(name: str):
    players = tuple(Vec2(x, y) for x, y in KICKOFF.values())
    vertices = [
        FormationVertex(ball=Vec2(-52.0, -34.0), players=players),
        FormationVertex(ball=Vec2(-52.0, 34.0), players=players),
        FormationVertex(ball=Vec2(52.0, 0.0), players=players),
    ]
    return build_formation(name, vertices)


def write_set(root: Path, set_name: str, deep_shift: float, corner: bool) -> None:
    directory = root / set_name
    directory.mkdir(parents=True, exist_ok=True)
    profiles = {
        "before-kick-off": kickoff_formation(f"{set_name}-before-kick-off"),
        "defense": grid_formation(
            f"{set_name}-defense", -2.5, deep_shift, CORNER_VERTEX if corner else None
        ),
        "offense": grid_formation(f"{set_name}-offense", 2.5, deep_shift),
        "goalie-catch": grid_formation(f"{set_name}-goalie-catch", -2.5, deep_shift),
    }
    for profile, form in profiles.items():
        path = directory / f"{profile}-formation.conf"
        path.write_text(serialize_formation(form), encoding="utf-8")
        print(f"wrote {path} ({len(form.vertices)} vertices)")


def main() -> None:
    root = Path(__file__).resolve().parents[1] / "src" / "gliders2d" / "data" / "formations"
    write_set(root, "default", 0.0, corner=False)
    write_set(root, "defensive", -2.0, corner=True)


if __name__ == "__main__":
    main()
