"""Triangulated formations: ball-position vertices mapped to 11 player
positions, interpolated barycentrically at runtime.

File format (UTF-8 text): optional ``name <text>`` line, ``vertices <N>``,
then N blocks of ``Ball <x> <y>`` followed by eleven ``<unum> <x> <y>``
lines with unum ascending 1..11.  Serialization is canonical: two decimal
places with trailing zeros trimmed, single spaces, newline-terminated.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from . import geom
from .geom import Vec2, Triangulation, locate_and_barycentric

PROFILES = ("before-kick-off", "defense", "offense", "goalie-catch")


class FormationError(ValueError):
    """Parse or validation failure, carrying a 1-based line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno
        self.message = message


@dataclass(frozen=True)
class FormationVertex:
    ball: Vec2
    players: tuple[Vec2, ...]  # exactly 11, indexed by unum - 1

    def __post_init__(self) -> None:
        if len(self.players) != 11:
            raise ValueError("expected 11 players")


@dataclass(frozen=True)
class Formation:
    name: str
    vertices: tuple[FormationVertex, ...]
    triangulation: Triangulation


def fmt_num(value: float) -> str:
    """Canonical number format: <= 2 decimals, trailing zeros trimmed."""
    text = f"{value:.2f}"
    text = text.rstrip("0").rstrip(".")
    if text in ("-0", ""):
        text = "0"
    return text


def build_formation(
    name: str,
    vertices: Sequence[FormationVertex],
) -> Formation:
    if len(vertices) < 3:
        raise ValueError("a formation needs at least 3 vertices")
    balls = [v.ball for v in vertices]
    for i, a in enumerate(balls):
        for b in balls[i + 1 :]:
            if a.dist(b) <= geom.MERGE_TOL:
                raise ValueError(f"duplicate ball position {fmt_num(a.x)} {fmt_num(a.y)}")
    tri = geom.delaunay_triangulate(balls)
    if len(tri.vertices) != len(balls):
        raise ValueError("ball positions collapsed during triangulation")
    return Formation(name=name, vertices=tuple(vertices), triangulation=tri)


def parse_formation(text: str) -> Formation:
    """Strict parser for the formation file format."""
    name = ""
    n_declared: Optional[int] = None
    vertices: list[FormationVertex] = []

    lines = text.splitlines()
    i = 0

    def next_content() -> Optional[tuple[int, str]]:
        nonlocal i
        while i < len(lines):
            lineno = i + 1
            stripped = lines[i].strip()
            i += 1
            if stripped:
                return (lineno, stripped)
        return None

    item = next_content()
    if item is None:
        raise FormationError(1, "empty formation file")
    lineno, line = item
    if line.startswith("name "):
        name = line[5:].strip()
        item = next_content()
        if item is None:
            raise FormationError(lineno, "missing 'vertices' line")
        lineno, line = item
    parts = line.split()
    if len(parts) != 2 or parts[0] != "vertices":
        raise FormationError(lineno, f"expected 'vertices <N>', got {line!r}")
    try:
        n_declared = int(parts[1])
    except ValueError:
        raise FormationError(lineno, f"bad vertex count {parts[1]!r}") from None

    for _ in range(n_declared):
        item = next_content()
        if item is None:
            raise FormationError(len(lines), f"expected {n_declared} vertex blocks")
        lineno, line = item
        parts = line.split()
        if len(parts) != 3 or parts[0] != "Ball":
            raise FormationError(lineno, f"expected 'Ball <x> <y>', got {line!r}")
        ball = _parse_point(lineno, parts[1], parts[2])
        players: list[Vec2] = []
        for expected_unum in range(1, 12):
            item = next_content()
            if item is None or item[1].startswith("Ball"):
                raise FormationError(
                    item[0] if item else len(lines),
                    f"expected 11 players, got {len(players)}",
                )
            plineno, pline = item
            pparts = pline.split()
            if len(pparts) != 3:
                raise FormationError(plineno, f"expected '<unum> <x> <y>', got {pline!r}")
            try:
                unum = int(pparts[0])
            except ValueError:
                raise FormationError(plineno, f"bad uniform number {pparts[0]!r}") from None
            if unum != expected_unum:
                raise FormationError(
                    plineno, f"expected uniform number {expected_unum}, got {unum}"
                )
            players.append(_parse_point(plineno, pparts[1], pparts[2]))
        for p in [ball] + players:
            if not geom.PITCH_RECT.contains(p, tol=1e-9):
                raise FormationError(lineno, f"position outside pitch: {fmt_num(p.x)} {fmt_num(p.y)}")
        vertices.append(FormationVertex(ball=ball, players=tuple(players)))

    item = next_content()
    if item is not None:
        raise FormationError(item[0], f"unexpected content {item[1]!r}")

    try:
        return build_formation(name, vertices)
    except ValueError as exc:
        raise FormationError(1, str(exc)) from None


def _parse_point(lineno: int, sx: str, sy: str) -> Vec2:
    try:
        return Vec2(float(sx), float(sy))
    except ValueError:
        raise FormationError(lineno, f"non-numeric coordinates {sx!r} {sy!r}") from None


def serialize_formation(formation: Formation) -> str:
    out: list[str] = []
    if formation.name:
        out.append(f"name {formation.name}")
    out.append(f"vertices {len(formation.vertices)}")
    for vertex in formation.vertices:
        out.append(f"Ball {fmt_num(vertex.ball.x)} {fmt_num(vertex.ball.y)}")
        for unum, p in enumerate(vertex.players, 1):
            out.append(f"{unum} {fmt_num(p.x)} {fmt_num(p.y)}")
    return "\n".join(out) + "\n"


def interpolate_positions(formation: Formation, ball: Vec2) -> list[Vec2]:
    """Eleven player positions for a ball location: barycentric combination
    of the containing triangle's vertices (hull-edge projection outside)."""
    loc = locate_and_barycentric(formation.triangulation, ball)
    out: list[Vec2] = []
    for player_idx in range(11):
        x = 0.0
        y = 0.0
        for w, vi in zip(loc.weights, loc.vertex_indices):
            p = formation.vertices[vi].players[player_idx]
            x += w * p.x
            y += w * p.y
        out.append(Vec2(x, y))
    return out


@dataclass(frozen=True)
class FormationSet:
    """The four play-mode profiles; missing ones fall back to offense."""

    name: str
    profiles: dict[str, Formation]

    def get(self, profile: str) -> Formation:
        if profile in self.profiles:
            return self.profiles[profile]
        return self.profiles["offense"]


def load_formation(path: str | Path) -> Formation:
    return parse_formation(Path(path).read_text(encoding="utf-8"))


def load_formation_set(directory: str | Path) -> FormationSet:
    directory = Path(directory)
    profiles: dict[str, Formation] = {}
    for profile in PROFILES:
        path = directory / f"{profile}-formation.conf"
        if path.exists():
            profiles[profile] = load_formation(path)
    if "offense" not in profiles:
        raise FileNotFoundError(f"no offense-formation.conf under {directory}")
    return FormationSet(name=directory.name, profiles=profiles)
