"""Shared fixtures and world-building helpers."""
from __future__ import annotations

import random

import pytest

from gliders2d.engine import BallState, PlayerState, PlayMode, Side, WorldState
from gliders2d.geom import Vec2


def make_players(spec=None):
    """22 players in a plain spread; ``spec`` overrides (side, unum) -> kwargs."""
    spec = spec or {}
    players = []
    for side in (Side.LEFT, Side.RIGHT):
        sign = 1.0 if side is Side.LEFT else -1.0
        for unum in range(1, 12):
            defaults = dict(
                unum=unum,
                side=side,
                pos=Vec2(sign * (-48.0 + 4.0 * unum), (unum - 6) * 4.0),
                body_dir=0.0 if side is Side.LEFT else 180.0,
                is_goalie=(unum == 1),
            )
            defaults.update(spec.get((side, unum), {}))
            players.append(PlayerState(**defaults))
    return tuple(players)


def make_world(ball=Vec2(0.0, 0.0), ball_vel=Vec2(0.0, 0.0), spec=None, cycle=0,
               play_mode=PlayMode.PLAY_ON):
    from gliders2d.engine import offside_line_x

    state = WorldState(
        cycle=cycle,
        ball=BallState(ball, ball_vel),
        players=make_players(spec),
        play_mode=play_mode,
    )
    from dataclasses import replace

    return replace(
        state,
        offside_line_left=offside_line_x(state, Side.LEFT),
        offside_line_right=offside_line_x(state, Side.RIGHT),
    )


@pytest.fixture
def rng():
    return random.Random(20260809)


@pytest.fixture(scope="session")
def warm_kernel():
    """Compile the match kernel once for the whole session."""
    from gliders2d.match import warm_up

    warm_up()
