"""The six team mechanisms as pure decision functions.

Every function here takes a team-local :class:`~gliders2d.engine.WorldState`
(the acting team occupies the LEFT block and attacks +x; see
:func:`gliders2d.engine.team_view`) plus a :class:`BehaviorParams` bundle,
and returns a value without touching any hidden state.  The evolutionary
harness mutates the parameter bundle; the match farm mirrors these rules
inside the compiled kernel.

Mechanisms: dash-power overrides, pressing levels, the opponent-sector /
best-point action evaluator, Voronoi forward positioning, and risky-pass
feasibility.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from . import geom
from .geom import Vec2, Sector, VoronoiDiagram, sector_contains, norm_deg
from .engine import (
    INTERCEPT_SENTINEL,
    TURN_ALIGN_DEG,
    PlayerState,
    ServerParams,
    Side,
    WorldState,
    dash_advance_table,
    offside_line_x,
)

OPPONENT_GOAL = Vec2(52.5, 0.0)
GOAL_POST_LEFT = Vec2(52.5, -8.0)
GOAL_POST_RIGHT = Vec2(52.5, 8.0)

# Pressing allowance hard-coded by the baseline team (no pressing scheme).
BASELINE_PRESSING = 3

PASS_TYPES = ("D", "L", "T")

# Feature toggles a genotype can switch; kept separate from the numeric
# parameters so "all off" reproduces the baseline team exactly.
TOGGLE_KEYS = (
    "use_dash_rule_offside",
    "use_dash_rule_defenders",
    "use_dash_rule_midfielders",
    "use_dash_rule_opp_area",
    "use_pressing_scheme",
    "use_action_evaluator",
    "use_voronoi_positioning",
    "use_risky_passes",
)


@dataclass
class BehaviorParams:
    """Numeric payload of a genotype, serializable as a flat text profile."""

    pressing_default: float = 13.0
    pressing_mid: float = 7.0
    pressing_flank_def: float = 23.0
    pressing_vs_named: dict[str, float] = field(default_factory=lambda: {"HELIOS2018": 4.0})
    eval_depth: float = 0.0
    eval_weight_far: float = 0.3
    eval_weight_near: float = 1.0
    eval_bonus_scale: float = 40.0
    risk_table: dict[tuple[str, str], float] = field(
        default_factory=lambda: {
            ("*", "heliosbase"): 5.0,
            ("*", "HELIOS2018"): 0.0,
            ("*", "*"): 2.0,
        }
    )
    opp_step_risk_vs_named: dict[str, float] = field(default_factory=lambda: {"heliosbase": 2.0})
    opp_step_risk_default: float = 1.0
    pass_max_x: float = 30.0
    pass_min_y: float = 15.0
    pass_cut: float = 30.0
    pass_angle: float = 60.0
    pass_depth: float = 3.0
    use_dash_rule_offside: bool = False
    use_dash_rule_defenders: bool = False
    use_dash_rule_midfielders: bool = False
    use_dash_rule_opp_area: bool = False
    use_pressing_scheme: bool = False
    use_action_evaluator: bool = False
    use_voronoi_positioning: bool = False
    use_risky_passes: bool = False

    def to_profile(self) -> str:
        lines = []
        for name in (
            "pressing_default",
            "pressing_mid",
            "pressing_flank_def",
            "eval_depth",
            "eval_weight_far",
            "eval_weight_near",
            "eval_bonus_scale",
            "opp_step_risk_default",
            "pass_max_x",
            "pass_min_y",
            "pass_cut",
            "pass_angle",
            "pass_depth",
        ):
            lines.append(f"{name} = {getattr(self, name)}")
        for key, val in self.pressing_vs_named.items():
            lines.append(f"pressing_vs_named.{key} = {val}")
        for (ptype, sub), val in self.risk_table.items():
            lines.append(f"risk_table.{ptype}.{sub} = {val}")
        for key, val in self.opp_step_risk_vs_named.items():
            lines.append(f"opp_step_risk_vs_named.{key} = {val}")
        for name in TOGGLE_KEYS:
            lines.append(f"{name} = {'true' if getattr(self, name) else 'false'}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_profile(cls, text: str) -> "BehaviorParams":
        params = cls(pressing_vs_named={}, risk_table={}, opp_step_risk_vs_named={})
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"line {lineno}: expected 'key = value'")
            key, _, val = line.partition("=")
            key = key.strip()
            val = val.strip()
            try:
                set_param(params, key, val)
            except KeyError:
                raise ValueError(f"line {lineno}: unknown parameter {key!r}") from None
        return params


def set_param(params: BehaviorParams, key: str, value: str | float | bool) -> None:
    """Assign one profile key, including dotted map entries and toggles."""
    if key.startswith("pressing_vs_named."):
        params.pressing_vs_named[key.split(".", 1)[1]] = float(value)
        return
    if key.startswith("risk_table."):
        _, ptype, sub = key.split(".", 2)
        params.risk_table[(ptype, sub)] = float(value)
        return
    if key.startswith("opp_step_risk_vs_named."):
        params.opp_step_risk_vs_named[key.split(".", 1)[1]] = float(value)
        return
    if key in TOGGLE_KEYS:
        if isinstance(value, str):
            if value not in ("true", "false", "0", "1"):
                raise ValueError(f"bad toggle value {value!r}")
            setattr(params, key, value in ("true", "1"))
        else:
            setattr(params, key, bool(float(value)))
        return
    if key not in params.__dataclass_fields__:
        raise KeyError(key)
    setattr(params, key, float(value))


def get_param(params: BehaviorParams, key: str) -> float:
    if key.startswith("pressing_vs_named."):
        return params.pressing_vs_named[key.split(".", 1)[1]]
    if key.startswith("risk_table."):
        _, ptype, sub = key.split(".", 2)
        return params.risk_table[(ptype, sub)]
    if key.startswith("opp_step_risk_vs_named."):
        return params.opp_step_risk_vs_named[key.split(".", 1)[1]]
    if key in TOGGLE_KEYS:
        return 1.0 if getattr(params, key) else 0.0
    return float(getattr(params, key))


@dataclass(frozen=True)
class PassCandidate:
    pass_type: str  # 'T' through, 'L' leading, 'D' direct
    receiver_unum: int
    receive_point: Vec2
    step: int
    kick_count: int
    o_step: int


@dataclass(frozen=True)
class EvalState:
    """Evaluator input: current ball, predicted ball after the candidate
    action chain, and the holder position."""

    ball_pos_now: Vec2
    ball_pos_after: Vec2
    holder_pos: Vec2


# ---------------------------------------------------------------------------
# Mechanism 1: dash power


def baseline_dash_power(world: WorldState, self_player: PlayerState, params: ServerParams) -> float:
    """Conservative default dash policy, before any override rule fires.

    Mirrored by the kernel's compiled copy; change both together."""
    if self_player.stamina < 0.3 * params.stamina_max:
        return 0.4 * params.max_dash_power
    near = self_player.pos.dist(world.ball.pos) < 20.0
    if world.ball.pos.x < 0.0:
        return (0.8 if near else 0.65) * params.max_dash_power
    return (0.75 if near else 0.55) * params.max_dash_power


def dash_power_policy(
    world: WorldState,
    self_player: PlayerState,
    role: int,
    mate_min: int,
    opp_min: int,
    params: ServerParams,
    rules_enabled: tuple[bool, bool, bool, bool] = (True, True, True, True),
) -> float:
    """Ordered else-if chain of maximal-dash-power overrides.

    R1 run to the offside line, R2 defenders on a retreating ball,
    R3 midfielders deep in the own half, R4 sprint in the opponent
    penalty area when the team clearly wins the race to the ball.
    """
    ball_x = world.ball.pos.x
    self_x = self_player.pos.x
    offside = offside_line_x(world, Side.LEFT)
    if rules_enabled[0] and ball_x > 0.0 and self_x < offside and abs(ball_x - self_x) < 25.0:
        return params.max_dash_power
    elif rules_enabled[1] and ball_x < 10.0 and role in (2, 3, 4, 5):
        return params.max_dash_power
    elif rules_enabled[2] and ball_x < -10.0 and role in (6, 7, 8):
        return params.max_dash_power
    elif rules_enabled[3] and ball_x > 36.0 and self_x > 36.0 and mate_min < opp_min - 4:
        return params.max_dash_power
    return baseline_dash_power(world, self_player, params)


# ---------------------------------------------------------------------------
# Mechanism 2: pressing


def pressing_level(
    world: WorldState,
    self_player: PlayerState,
    role: int,
    opponent_name: str,
    params: BehaviorParams,
) -> int:
    """Pressing allowance in cycles; later assignments override earlier ones."""
    pressing = params.pressing_default
    ball = world.ball.pos
    if 6 <= role <= 8 and ball.x > -30.0 and self_player.pos.x < 10.0:
        pressing = params.pressing_mid
    if abs(ball.y) > 22.0 and -36.5 < ball.x < 0.0 and role in (4, 5):
        pressing = params.pressing_flank_def
    for name, value in params.pressing_vs_named.items():
        if name in opponent_name:
            pressing = value
            break
    return int(round(pressing))


def should_press(
    self_min: int,
    mate_min: int,
    opp_min: int,
    pressing: int,
    teammate_kickable: bool,
) -> bool:
    """Chase trigger: the fastest reasonable interceptor presses the ball."""
    if teammate_kickable:
        return False
    return self_min <= 3 or (self_min <= mate_min and self_min < opp_min + pressing)


# ---------------------------------------------------------------------------
# Mechanism 3: action evaluator


def count_direct_opponents(world: WorldState, self_player: PlayerState) -> int:
    """Non-goalie opponents in the sector from self toward the goal posts."""
    apex = self_player.pos
    sector = Sector(
        apex=apex,
        radius_min=0.0,
        radius_max=10000.0,
        angle_left=(GOAL_POST_LEFT - apex).bearing_deg(),
        angle_right=(GOAL_POST_RIGHT - apex).bearing_deg(),
    )
    count = 0
    for opp in world.players_of(Side.RIGHT):
        if opp.is_goalie:
            continue
        if sector_contains(sector, opp.pos):
            count += 1
    return count


def best_point_score(
    candidate: Vec2,
    opponent_positions: Sequence[Vec2],
    teammate_positions: Sequence[Vec2],
    beta: float = 0.5,
) -> float:
    """Open-space score: far from opponents, moderately close to teammates."""
    d_opp = min((candidate.dist(p) for p in opponent_positions), default=0.0)
    d_mate = min((candidate.dist(p) for p in teammate_positions), default=0.0)
    return d_opp - beta * d_mate


def _pick_best(candidates: Sequence[Vec2], score_fn) -> Optional[Vec2]:
    best = None
    best_key = None
    for c in candidates:
        key = (score_fn(c), c.x, -abs(c.y))
        if best is None or key > best_key:
            best = c
            best_key = key
    return best


def select_best_point(
    world: WorldState,
    self_player: PlayerState,
    diagram: VoronoiDiagram,
) -> Vec2:
    """Most promising open point offered by the opponent Voronoi diagram.

    Candidates are the diagram vertices plus its intersections with the
    offside line, field-filtered; ties break toward the larger x, then the
    smaller |y|.  With no candidates the opponent goal center stands in.
    """
    offside = offside_line_x(world, Side.LEFT)
    candidates = geom.voronoi_candidates_on_line(diagram, offside, include_vertices=True)
    if not candidates:
        return OPPONENT_GOAL
    opponents = [p.pos for p in world.players_of(Side.RIGHT)]
    teammates = [
        p.pos
        for p in world.players_of(Side.LEFT)
        if p.unum != self_player.unum
    ]
    return _pick_best(candidates, lambda c: best_point_score(c, opponents, teammates))


def evaluate_action_state(
    eval_state: EvalState,
    opp_forward: int,
    best_point: Vec2,
    params: BehaviorParams,
) -> float:
    """Action-dependent state value.

    Near the own half or with no direct opponents the single baseline
    metric applies (advance plus goal proximity); otherwise the predicted
    ball position is weighed and rewarded for closing on the best point.
    """
    after = eval_state.ball_pos_after
    if eval_state.ball_pos_now.x < params.eval_depth or opp_forward == 0:
        return after.x + max(0.0, params.eval_bonus_scale - after.dist(OPPONENT_GOAL))
    if eval_state.ball_pos_now.x > 35.0:
        weight = params.eval_weight_far
    else:
        weight = params.eval_weight_near
    return after.x * weight + max(0.0, params.eval_bonus_scale - best_point.dist(after))


# ---------------------------------------------------------------------------
# Mechanism 4: Voronoi forward positioning


def forward_target_positions(
    world: WorldState,
    formation_targets: Sequence[Vec2],
    diagram: VoronoiDiagram,
) -> list[Vec2]:
    """Reassign the three forwards (roles 9..11) to the most promising
    Voronoi candidates, matched by minimum total displacement from their
    formation targets.  Everyone else keeps the formation target."""
    if len(formation_targets) != 11:
        raise ValueError("expected 11 formation targets")
    offside = offside_line_x(world, Side.LEFT)
    candidates = geom.voronoi_candidates_on_line(diagram, offside, include_vertices=True)
    targets = list(formation_targets)
    if not candidates:
        return targets
    opponents = [p.pos for p in world.players_of(Side.RIGHT)]
    teammates = [p.pos for p in world.players_of(Side.LEFT)]
    ranked = sorted(
        candidates,
        key=lambda c: (-best_point_score(c, opponents, teammates), -c.x, abs(c.y)),
    )
    top = ranked[:3]
    forwards = [8, 9, 10]  # indices of roles 9, 10, 11

    best_assign: Optional[dict[int, Vec2]] = None
    best_cost = math.inf
    n = len(top)
    for perm in _injective_maps(forwards, n):
        cost = sum(top[ci].dist(formation_targets[fi]) for fi, ci in perm)
        if cost < best_cost - 1e-12:
            best_cost = cost
            best_assign = {fi: top[ci] for fi, ci in perm}
    if best_assign:
        for fi, point in best_assign.items():
            targets[fi] = point
    return targets


def _injective_maps(slots: list[int], n_candidates: int):
    """All maximal injective assignments slot -> candidate index."""
    k = min(len(slots), n_candidates)
    import itertools

    for chosen in itertools.permutations(range(n_candidates), k):
        for slot_subset in itertools.combinations(slots, k):
            yield list(zip(slot_subset, chosen))


# ---------------------------------------------------------------------------
# Mechanism 6: risky passes


def pass_risk(
    world: WorldState,
    receive_point: Vec2,
    receiver: PlayerState,
    pass_type: str,
    opponent_name: str,
    params: BehaviorParams,
) -> int:
    """Extra cycles granted to the receiver for passes breaking the line."""
    offside = offside_line_x(world, Side.LEFT)
    if not (
        world.ball.pos.x < offside
        and receive_point.x > offside + 3.0
        and offside - receiver.pos.x < 5.0
    ):
        return 0
    for (ptype, sub), value in params.risk_table.items():
        if ptype not in ("*", pass_type):
            continue
        if sub == "*" or sub in opponent_name:
            return int(round(value))
    return 0


def opponent_pass_steps(n_turn: int, n_dash: int, risk: int) -> int:
    """Opponent cycles to the ball line: the risk grant applies only when no
    turn is needed, otherwise a one-cycle observation penalty is charged."""
    if n_turn == 0:
        return n_turn + n_dash + risk
    return n_turn + n_dash + 1


def opp_step_gate(
    world: WorldState,
    receive_point: Vec2,
    pass_type: str,
    ball_move_angle: float,
    opp_dir: float,
    params: BehaviorParams,
) -> bool:
    """Gate for charging the opponent-step risk grant on a candidate."""
    offside = offside_line_x(world, Side.LEFT)
    return (
        (receive_point.x < params.pass_max_x or abs(receive_point.y) > params.pass_min_y)
        and pass_type in ("T", "L")
        and abs(norm_deg(ball_move_angle - opp_dir)) > params.pass_cut
        and abs(ball_move_angle) < params.pass_angle
        and world.ball.pos.x < offside
        and receive_point.x > offside + params.pass_depth
    )


def opp_step_risk_value(opponent_name: str, params: BehaviorParams) -> int:
    for name, value in params.opp_step_risk_vs_named.items():
        if name in opponent_name:
            return int(round(value))
    return int(round(params.opp_step_risk_default))


def pass_feasible(candidate: PassCandidate, risk: int) -> bool:
    """Feasibility test: through passes compare opponent arrival directly,
    other passes also cover the extra control kicks."""
    if candidate.pass_type == "T":
        return not (candidate.o_step + risk <= candidate.step)
    return not (candidate.o_step + risk <= candidate.step + (candidate.kick_count - 1))


# ---------------------------------------------------------------------------
# Pass candidate generation


def _cycles_to_point(
    pos: Vec2,
    body_dir: float,
    target: Vec2,
    control_radius: float,
    table: Sequence[float],
) -> tuple[int, int]:
    """(n_turn, n_dash) for reaching ``target`` within ``control_radius``."""
    d = pos.dist(target) - control_radius
    if d <= 1e-9:
        return (0, 0)
    to_target = (target - pos).bearing_deg()
    n_turn = 0 if abs(norm_deg(to_target - body_dir)) <= TURN_ALIGN_DEG else 1
    for k in range(1, len(table)):
        if table[k] >= d:
            return (n_turn, k)
    return (n_turn, INTERCEPT_SENTINEL)


def _ball_travel_steps(dist: float, v0: float, decay: float, horizon: int = 120) -> int:
    """Cycles for a kicked ball to cover ``dist`` meters, sentinel if never."""
    if dist <= 1e-9:
        return 0
    covered = 0.0
    v = v0
    for n in range(1, horizon + 1):
        covered += v
        if covered >= dist:
            return n
        v *= decay
    return INTERCEPT_SENTINEL


def generate_pass_candidates(
    world: WorldState,
    holder: PlayerState,
    params: BehaviorParams,
    server: ServerParams,
    opponent_name: str = "",
) -> list[PassCandidate]:
    """Enumerate direct/leading/through passes that survive the feasibility
    test.  Ordering is deterministic: receiver number, then pass type
    (D < L < T), then receive point x."""
    ball = world.ball.pos
    offside = offside_line_x(world, Side.LEFT)
    pass_speed = min(server.max_ball_speed, server.max_dash_power * server.kick_power_rate)
    table = dash_advance_table(server, 80)
    kick = server.kickable_area
    opponents = world.players_of(Side.RIGHT)

    raw: list[tuple[PassCandidate, int]] = []
    for mate in world.players_of(Side.LEFT):
        if mate.unum == holder.unum:
            continue
        points: list[tuple[str, Vec2]] = [("D", mate.pos)]
        facing = Vec2(math.cos(math.radians(mate.body_dir)), math.sin(math.radians(mate.body_dir)))
        points.append(("L", mate.pos + facing * 3.0))
        for k in range(1, 6):
            points.append(("T", Vec2(offside + 2.0 * k, mate.pos.y)))

        for ptype, rp in points:
            if abs(rp.x) >= 52.5 or abs(rp.y) >= 34.0:
                continue
            dist = ball.dist(rp)
            if dist < 1.0:
                continue
            ball_steps = _ball_travel_steps(dist, pass_speed, server.ball_decay)
            if ball_steps >= INTERCEPT_SENTINEL:
                continue
            n_turn, n_dash = _cycles_to_point(mate.pos, mate.body_dir, rp, kick, table)
            receiver_steps = n_turn + n_dash
            step = max(1, ball_steps, receiver_steps)
            kick_count = 1 if dist <= 20.0 else 2
            move_angle = (rp - ball).bearing_deg()
            o_step = _best_opponent_step(
                world, ball, rp, ptype, move_angle, ball_steps, pass_speed,
                opponent_name, params, server, table,
            )
            cand = PassCandidate(
                pass_type=ptype,
                receiver_unum=mate.unum,
                receive_point=rp,
                step=step,
                kick_count=kick_count,
                o_step=o_step,
            )
            risk = pass_risk(world, rp, mate, ptype, opponent_name, params)
            if pass_feasible(cand, risk):
                raw.append((cand, risk))

    order = {"D": 0, "L": 1, "T": 2}
    raw.sort(key=lambda cr: (cr[0].receiver_unum, order[cr[0].pass_type], cr[0].receive_point.x))
    return [c for c, _ in raw]


def _best_opponent_step(
    world: WorldState,
    ball: Vec2,
    rp: Vec2,
    ptype: str,
    move_angle: float,
    ball_steps: int,
    pass_speed: float,
    opponent_name: str,
    params: BehaviorParams,
    server: ServerParams,
    table: Sequence[float],
) -> int:
    """Earliest effective interception step over all opponents along the
    ball trajectory, with the gated opponent-step risk grant applied."""
    kick = server.kickable_area
    direction = (rp - ball).unit()
    total = ball.dist(rp)
    best = INTERCEPT_SENTINEL
    for opp in world.players_of(Side.RIGHT):
        opp_dir = (opp.pos - ball).bearing_deg()
        gate = opp_step_gate(world, rp, ptype, move_angle, opp_dir, params)
        risk = opp_step_risk_value(opponent_name, params) if gate else 0

        covered = 0.0
        v = pass_speed
        arrival = INTERCEPT_SENTINEL
        for t in range(1, ball_steps + 1):
            covered = min(covered + v, total)
            v *= server.ball_decay
            point = ball + direction * covered
            n_turn, n_dash = _cycles_to_point(opp.pos, opp.body_dir, point, kick, table)
            if n_dash >= INTERCEPT_SENTINEL:
                continue
            steps = opponent_pass_steps(n_turn, n_dash, risk)
            if steps <= t:
                arrival = t
                break
        if arrival >= INTERCEPT_SENTINEL:
            n_turn, n_dash = _cycles_to_point(opp.pos, opp.body_dir, rp, kick, table)
            if n_dash < INTERCEPT_SENTINEL:
                arrival = opponent_pass_steps(n_turn, n_dash, risk)
        best = min(best, arrival)
    return best


# ---------------------------------------------------------------------------
# Action chain planning


DRIBBLE_STEP = 3.0
DRIBBLE_DIRS = tuple(float(a) for a in range(0, 360, 45))
SHOOT_RANGE = 20.0


def _shoot_target(world: WorldState) -> Vec2:
    """Aim at the goal corner farther from the opponent goalie."""
    goalie = next((p for p in world.players_of(Side.RIGHT) if p.is_goalie), None)
    left = Vec2(52.5, -(7.01 - 0.8))
    right = Vec2(52.5, 7.01 - 0.8)
    if goalie is None:
        return right
    return left if goalie.pos.dist(left) > goalie.pos.dist(right) else right


@dataclass(frozen=True)
class _ChainNode:
    after: Vec2
    holder_pos: Vec2
    holder_unum: int
    first_action: "object"
    score: float
    terminal: bool


def plan_action_chain(
    world: WorldState,
    self_player: PlayerState,
    params: BehaviorParams,
    server: ServerParams,
    max_depth: int = 2,
    beam: int = 4,
    opponent_name: str = "",
    diagram: Optional[VoronoiDiagram] = None,
) -> "Action":
    """Pick the ball holder's next action by a small beam search.

    Candidates per node: feasible passes, eight 3 m dribble offsets, and a
    shot when close enough to the goal.  Nodes are scored with
    :func:`evaluate_action_state`; ties keep the earlier enumeration.
    """
    from .engine import Action, ActionKind  # local import to avoid cycle noise

    if diagram is None:
        field_opps = [p.pos for p in world.players_of(Side.RIGHT) if not p.is_goalie]
        if field_opps:
            diagram = geom.voronoi_compute(field_opps)
    if diagram is not None:
        best_point = select_best_point(world, self_player, diagram)
    else:
        best_point = OPPONENT_GOAL
    opp_forward = count_direct_opponents(world, self_player)
    ball_now = world.ball.pos

    def score_after(after: Vec2, holder_pos: Vec2) -> float:
        return evaluate_action_state(
            EvalState(ball_pos_now=ball_now, ball_pos_after=after, holder_pos=holder_pos),
            opp_forward,
            best_point,
            params,
        )

    def expand(node_world: WorldState, holder: PlayerState, first: Optional[Action]) -> list[_ChainNode]:
        nodes: list[_ChainNode] = []
        ball_pos = node_world.ball.pos
        for cand in generate_pass_candidates(node_world, holder, params, server, opponent_name):
            action = first or Action(
                ActionKind.KICK,
                power=server.max_dash_power,
                direction=(cand.receive_point - ball_pos).bearing_deg(),
            )
            nodes.append(
                _ChainNode(
                    after=cand.receive_point,
                    holder_pos=cand.receive_point,
                    holder_unum=cand.receiver_unum,
                    first_action=action,
                    score=score_after(cand.receive_point, holder.pos),
                    terminal=False,
                )
            )
        opponents = node_world.players_of(Side.RIGHT)
        for ang in DRIBBLE_DIRS:
            rad = math.radians(ang)
            after = ball_pos + Vec2(math.cos(rad), math.sin(rad)) * DRIBBLE_STEP
            if abs(after.x) >= 52.5 or abs(after.y) >= 34.0:
                continue
            holder_d2 = holder.pos.dist2(after)
            if any(
                o.pos.dist2(after) < 1.8 * 1.8 and o.pos.dist2(after) < holder_d2 + 1.0
                for o in opponents
            ):
                continue
            action = first or Action(ActionKind.KICK, power=31.0, direction=ang)
            nodes.append(
                _ChainNode(
                    after=after,
                    holder_pos=after,
                    holder_unum=holder.unum,
                    first_action=action,
                    score=score_after(after, holder.pos),
                    terminal=False,
                )
            )
        if holder.pos.dist(OPPONENT_GOAL) < SHOOT_RANGE:
            target = _shoot_target(node_world)
            action = first or Action(
                ActionKind.KICK,
                power=server.max_dash_power,
                direction=(target - ball_pos).bearing_deg(),
            )
            nodes.append(
                _ChainNode(
                    after=target,
                    holder_pos=holder.pos,
                    holder_unum=holder.unum,
                    first_action=action,
                    score=score_after(target, holder.pos),
                    terminal=True,
                )
            )
        return nodes

    frontier = expand(world, self_player, None)
    if not frontier:
        return Action(
            ActionKind.KICK,
            power=server.max_dash_power,
            direction=(OPPONENT_GOAL - ball_now).bearing_deg(),
        )
    best = max(frontier, key=lambda n: n.score)

    for _ in range(max_depth - 1):
        frontier = sorted(frontier, key=lambda n: -n.score)[:beam]
        next_frontier: list[_ChainNode] = []
        for node in frontier:
            if node.terminal:
                continue
            sim_world = _advance_world(world, node)
            sim_holder = sim_world.player(Side.LEFT, node.holder_unum)
            for child in expand(sim_world, sim_holder, node.first_action):
                child = replace(child, first_action=node.first_action)
                next_frontier.append(child)
                if child.score > best.score:
                    best = child
        if not next_frontier:
            break
        frontier = next_frontier

    return best.first_action


def _advance_world(world: WorldState, node: _ChainNode) -> WorldState:
    """Frozen-opponent successor: ball at the node point, holder moved there."""
    from .engine import BallState

    players = list(world.players)
    idx = node.holder_unum - 1
    players[idx] = replace(players[idx], pos=node.holder_pos, vel=Vec2(0.0, 0.0))
    return replace(
        world,
        ball=BallState(node.after, Vec2(0.0, 0.0)),
        players=tuple(players),
    )
