"""Deterministic cycle-based match engine: state types and physics.

The physics contract is intentionally simple (geometric ball decay, dash
acceleration with stamina, one-cycle turns) but fully deterministic: the
same state, actions and noise stream always produce bit-identical
successor states.  Full-match execution lives in :mod:`gliders2d.match`,
which drives the compiled hot loop in :mod:`gliders2d.kernel` through the
same update rules.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from enum import IntEnum
from typing import Optional, Sequence

from .geom import Vec2, norm_deg

log = logging.getLogger(__name__)

# Cycles reported for an intercept that cannot be completed within the
# search horizon; strictly larger than any pressing/risk comparison operand.
INTERCEPT_SENTINEL = 1000

# A player may dash without first turning when already facing the target
# this closely (degrees).
TURN_ALIGN_DEG = 15.0

MASK64 = (1 << 64) - 1


class Side(IntEnum):
    LEFT = 0
    RIGHT = 1

    @property
    def opponent(self) -> "Side":
        return Side.RIGHT if self is Side.LEFT else Side.LEFT


class PlayMode(IntEnum):
    KICKOFF = 0
    PLAY_ON = 1
    GOAL = 2
    OUT_OF_BOUNDS = 3


class ActionKind(IntEnum):
    NONE = 0
    DASH = 1
    TURN = 2
    KICK = 3


@dataclass(frozen=True)
class Action:
    """One effector command: dash power, turn moment, or kick power+direction."""

    kind: ActionKind = ActionKind.NONE
    power: float = 0.0
    direction: float = 0.0


NONE_ACTION = Action()


@dataclass(frozen=True)
class ServerParams:
    max_dash_power: float = 100.0
    dash_power_rate: float = 0.006
    player_decay: float = 0.4
    ball_decay: float = 0.94
    max_player_speed: float = 1.05
    max_ball_speed: float = 3.0
    kickable_margin: float = 0.7
    player_radius: float = 0.3
    ball_radius: float = 0.085
    stamina_max: float = 8000.0
    stamina_inc_per_cycle: float = 45.0
    recover_dec_threshold: float = 0.3
    max_turn_moment: float = 180.0
    half_cycles: int = 3000
    goal_half_width: float = 7.01
    kick_power_rate: float = 0.027
    kick_dir_noise: float = 0.05

    @property
    def kickable_area(self) -> float:
        return self.player_radius + self.ball_radius + self.kickable_margin

    def to_profile(self) -> str:
        lines = []
        for name in self.__dataclass_fields__:
            lines.append(f"{name} = {getattr(self, name)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_profile(cls, text: str) -> "ServerParams":
        values: dict[str, float | int] = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"line {lineno}: expected 'key = value'")
            key, _, val = line.partition("=")
            key = key.strip()
            if key not in cls.__dataclass_fields__:
                raise ValueError(f"line {lineno}: unknown parameter {key!r}")
            values[key] = int(val) if key == "half_cycles" else float(val)
        return cls(**values)


@dataclass(frozen=True)
class PlayerState:
    unum: int
    side: Side
    pos: Vec2
    vel: Vec2 = Vec2(0.0, 0.0)
    body_dir: float = 0.0
    stamina: float = 8000.0
    role: int = 0
    is_goalie: bool = False

    def __post_init__(self) -> None:
        if self.role == 0:
            object.__setattr__(self, "role", self.unum)


@dataclass(frozen=True)
class BallState:
    pos: Vec2
    vel: Vec2 = Vec2(0.0, 0.0)


@dataclass(frozen=True)
class WorldState:
    """Full match snapshot.

    ``players`` holds exactly 22 entries: indices 0..10 are the LEFT team
    (uniform numbers 1..11), 11..21 the RIGHT team.
    """

    cycle: int
    ball: BallState
    players: tuple[PlayerState, ...]
    score_left: int = 0
    score_right: int = 0
    play_mode: PlayMode = PlayMode.KICKOFF
    offside_line_left: float = 0.0
    offside_line_right: float = 0.0
    last_touch: Side = Side.LEFT

    def players_of(self, side: Side) -> tuple[PlayerState, ...]:
        return self.players[0:11] if side is Side.LEFT else self.players[11:22]

    def player(self, side: Side, unum: int) -> PlayerState:
        base = 0 if side is Side.LEFT else 11
        return self.players[base + unum - 1]


@dataclass(frozen=True)
class MatchResult:
    score: tuple[int, int]
    seed: int
    cycles_played: int


class NoiseStream:
    """Deterministic noise source (splitmix64), shared with the kernel."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def uniform(self) -> float:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        z ^= z >> 31
        return (z >> 11) * 2.0**-53

    def jitter(self, scale: float) -> float:
        return (2.0 * self.uniform() - 1.0) * scale


# ---------------------------------------------------------------------------
# Stamina


def effective_dash_power(stamina: float, dash_power: float) -> float:
    """Dash power actually applied once the stamina budget is enforced."""
    mag = min(abs(dash_power), stamina)
    return math.copysign(mag, dash_power)


def recover_capped_power(stamina: float, dash_power: float, params: ServerParams) -> float:
    """Below the recovery threshold a player can only jog: effective dash
    power is capped at the per-cycle stamina income, so nobody death-spirals
    to a standstill."""
    if stamina < params.recover_dec_threshold * params.stamina_max:
        cap = params.stamina_inc_per_cycle
        return max(-cap, min(cap, dash_power))
    return dash_power


def apply_stamina_model(player: PlayerState, dash_power: float, params: ServerParams) -> PlayerState:
    """Consume dash stamina, then recover, clamped to [0, stamina_max]."""
    eff = abs(effective_dash_power(player.stamina, dash_power))
    stamina = player.stamina - eff + params.stamina_inc_per_cycle
    stamina = min(max(stamina, 0.0), params.stamina_max)
    return replace(player, stamina=stamina)


# ---------------------------------------------------------------------------
# Offside line


def offside_line_x(state: WorldState, attacking_side: Side) -> float:
    """Offside line in the attacking team's frame (+x toward opponent goal).

    max(ball, second-deepest defender), floored at the halfway line.
    """
    sign = 1.0 if attacking_side is Side.LEFT else -1.0
    defenders = state.players_of(attacking_side.opponent)
    depths = sorted((sign * p.pos.x for p in defenders), reverse=True)
    second = depths[1] if len(depths) >= 2 else depths[0]
    return max(sign * state.ball.pos.x, second, 0.0)


# ---------------------------------------------------------------------------
# Interception


def dash_advance_table(params: ServerParams, horizon: int) -> list[float]:
    """Cumulative distance covered by k max-power dash cycles from rest."""
    table = [0.0]
    v = 0.0
    accel = params.max_dash_power * params.dash_power_rate
    for _ in range(horizon):
        v = min(params.max_player_speed, v * params.player_decay + accel)
        table.append(table[-1] + v)
    return table


def intercept_cycles(
    state: WorldState,
    player: PlayerState,
    params: ServerParams,
    horizon: int = 200,
) -> int:
    """Smallest cycle count at which the player can be within kickable range
    of the predicted ball, turning once if needed and then dashing at
    maximum power.  Returns INTERCEPT_SENTINEL past the horizon."""
    kick = params.kickable_area
    table = dash_advance_table(params, horizon)
    tx, ty = state.ball.pos.x, state.ball.pos.y
    vx, vy = state.ball.vel.x, state.ball.vel.y
    px, py = player.pos.x, player.pos.y
    for n in range(horizon + 1):
        dx = tx - px
        dy = ty - py
        d = math.sqrt(dx * dx + dy * dy)
        if d <= kick + 1e-9:
            return n
        to_target = math.degrees(math.atan2(dy, dx))
        n_turn = 0 if abs(norm_deg(to_target - player.body_dir)) <= TURN_ALIGN_DEG else 1
        k = n - n_turn
        if k >= 0 and d <= kick + table[k] + 1e-9:
            return n
        tx += vx
        ty += vy
        vx *= params.ball_decay
        vy *= params.ball_decay
    return INTERCEPT_SENTINEL


def team_min_intercept(
    state: WorldState,
    side: Side,
    params: ServerParams,
    exclude_unum: Optional[int] = None,
) -> int:
    vals = [
        intercept_cycles(state, p, params)
        for p in state.players_of(side)
        if p.unum != exclude_unum
    ]
    return min(vals) if vals else INTERCEPT_SENTINEL


# ---------------------------------------------------------------------------
# Cycle physics


def step_cycle(
    state: WorldState,
    actions: Sequence[Action],
    params: ServerParams,
    rng: NoiseStream,
    flagged: Optional[list[str]] = None,
) -> WorldState:
    """Advance the world one cycle.

    Order: action resolution (dash with stamina budget, turn, kick), ball
    motion, player motion, collision separation, stamina update, goal and
    out-of-bounds handling, offside line update.  Invalid kicks (ball out
    of kickable range) are ignored and flagged.
    """
    if len(actions) != 22:
        raise ValueError("expected one action per player")

    kick = params.kickable_area
    pos = [p.pos for p in state.players]
    vel = [p.vel for p in state.players]
    body = [p.body_dir for p in state.players]
    stamina = [p.stamina for p in state.players]
    consumed = [0.0] * 22

    ball_pos = state.ball.pos
    ball_vel = state.ball.vel
    kick_vx = 0.0
    kick_vy = 0.0
    kicked = False
    last_touch = state.last_touch

    for i, act in enumerate(actions):
        p = state.players[i]
        if act.kind == ActionKind.DASH:
            power = max(-params.max_dash_power, min(params.max_dash_power, act.power))
            power = recover_capped_power(stamina[i], power, params)
            eff = effective_dash_power(stamina[i], power)
            consumed[i] = abs(eff)
            rad = math.radians(body[i])
            nvx = vel[i].x + eff * params.dash_power_rate * math.cos(rad)
            nvy = vel[i].y + eff * params.dash_power_rate * math.sin(rad)
            speed = math.sqrt(nvx * nvx + nvy * nvy)
            if speed > params.max_player_speed:
                scale = params.max_player_speed / speed
                nvx *= scale
                nvy *= scale
            vel[i] = Vec2(nvx, nvy)
        elif act.kind == ActionKind.TURN:
            moment = max(-params.max_turn_moment, min(params.max_turn_moment, act.direction))
            body[i] = norm_deg(body[i] + moment)
        elif act.kind == ActionKind.KICK:
            if pos[i].dist(ball_pos) <= kick:
                jitter = math.degrees(rng.jitter(params.kick_dir_noise))
                rad = math.radians(act.direction + jitter)
                power = max(0.0, min(params.max_dash_power, act.power))
                speed = power * params.kick_power_rate
                kick_vx += speed * math.cos(rad)
                kick_vy += speed * math.sin(rad)
                kicked = True
                last_touch = p.side
            else:
                msg = f"cycle {state.cycle}: kick ignored (not kickable) side={p.side.name} unum={p.unum}"
                log.debug(msg)
                if flagged is not None:
                    flagged.append(msg)

    if kicked:
        speed = math.sqrt(kick_vx * kick_vx + kick_vy * kick_vy)
        if speed > params.max_ball_speed:
            scale = params.max_ball_speed / speed
            kick_vx *= scale
            kick_vy *= scale
        ball_vel = Vec2(kick_vx, kick_vy)

    # Ball then player motion.
    ball_pos = ball_pos + ball_vel
    ball_vel = ball_vel * params.ball_decay
    for i in range(22):
        pos[i] = pos[i] + vel[i]
        vel[i] = vel[i] * params.player_decay

    # Collision separation, one symmetric pass.
    min_sep = 2.0 * params.player_radius
    for i in range(22):
        for j in range(i + 1, 22):
            d = pos[i].dist(pos[j])
            if d < min_sep:
                if d < 1e-9:
                    axis = Vec2(1.0, 0.0)
                else:
                    axis = (pos[j] - pos[i]) * (1.0 / d)
                push = 0.5 * (min_sep - d)
                pos[i] = pos[i] - axis * push
                pos[j] = pos[j] + axis * push

    for i in range(22):
        stamina[i] = min(
            max(stamina[i] - consumed[i] + params.stamina_inc_per_cycle, 0.0),
            params.stamina_max,
        )

    score_left = state.score_left
    score_right = state.score_right
    mode = PlayMode.PLAY_ON

    goal_line = 52.5
    touch_line = 34.0
    if abs(ball_pos.x) > goal_line and abs(ball_pos.y) < params.goal_half_width:
        if ball_pos.x > 0:
            score_left += 1
        else:
            score_right += 1
        mode = PlayMode.GOAL
    elif abs(ball_pos.x) > goal_line or abs(ball_pos.y) > touch_line:
        mode = PlayMode.OUT_OF_BOUNDS
        receiving = last_touch.opponent
        ball_pos = Vec2(
            max(-goal_line + 0.5, min(goal_line - 0.5, ball_pos.x)),
            max(-touch_line + 0.5, min(touch_line - 0.5, ball_pos.y)),
        )
        ball_vel = Vec2(0.0, 0.0)
        base = 0 if receiving is Side.LEFT else 11
        nearest = min(range(base, base + 11), key=lambda idx: pos[idx].dist2(ball_pos))
        attack = 1.0 if receiving is Side.LEFT else -1.0
        pos[nearest] = Vec2(ball_pos.x - attack * 0.7, ball_pos.y)
        vel[nearest] = Vec2(0.0, 0.0)
        body[nearest] = 0.0 if receiving is Side.LEFT else 180.0

    players = tuple(
        replace(p, pos=pos[i], vel=vel[i], body_dir=body[i], stamina=stamina[i])
        for i, p in enumerate(state.players)
    )
    next_state = WorldState(
        cycle=state.cycle + 1,
        ball=BallState(ball_pos, ball_vel),
        players=players,
        score_left=score_left,
        score_right=score_right,
        play_mode=mode,
        last_touch=last_touch,
    )
    return replace(
        next_state,
        offside_line_left=offside_line_x(next_state, Side.LEFT),
        offside_line_right=offside_line_x(next_state, Side.RIGHT),
    )


# ---------------------------------------------------------------------------
# Team-local view


def team_view(state: WorldState, side: Side) -> WorldState:
    """World as seen by ``side``: the acting team always attacks +x and
    appears as the LEFT block, so every behavior condition can be written
    once in attack-frame coordinates."""
    if side is Side.LEFT:
        return state
    def flip_player(p: PlayerState) -> PlayerState:
        return replace(
            p,
            side=p.side.opponent,
            pos=-p.pos,
            vel=-p.vel,
            body_dir=norm_deg(p.body_dir + 180.0),
        )
    players = tuple(flip_player(p) for p in state.players[11:22]) + tuple(
        flip_player(p) for p in state.players[0:11]
    )
    return WorldState(
        cycle=state.cycle,
        ball=BallState(-state.ball.pos, -state.ball.vel),
        players=players,
        score_left=state.score_right,
        score_right=state.score_left,
        play_mode=state.play_mode,
        offside_line_left=state.offside_line_right,
        offside_line_right=state.offside_line_left,
        last_touch=state.last_touch.opponent,
    )
