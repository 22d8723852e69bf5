"""Human-based evolutionary computation harness.

A genotype is an ordered list of design points over a base parameter
bundle: each point carries condition primitives (conjunctions over a
closed feature registry), one parameter assignment, and an optional
opponent-name gate that switches the point on only against matching
opponents.  Points without conditions are folded into the effective
parameter bundle at activation time; conditional points stay as runtime
override rules evaluated per player per cycle.

Fitness comes from large seeded match series, aggregated into the report
row schema (points for/against, goals, goal difference, standard error).
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace
from functools import cmp_to_key
from pathlib import Path
from typing import Callable, Optional, Sequence

from .behaviors import BehaviorParams, TOGGLE_KEYS, get_param, set_param

# Closed registry of world features usable in condition primitives, with
# the value range that scales threshold mutations.
CONDITION_FEATURES: dict[str, tuple[float, float]] = {
    "ball.x": (-52.5, 52.5),
    "ball.y": (-34.0, 34.0),
    "abs_ball.y": (0.0, 34.0),
    "self.x": (-52.5, 52.5),
    "self.y": (-34.0, 34.0),
    "role": (1.0, 11.0),
    "offside_gap": (-105.0, 105.0),
    "intercept_margin": (-50.0, 50.0),
    "self_min": (0.0, 120.0),
}

CONDITION_OPS = ("<", "<=", "==", ">=", ">")

# Parameter assignments a design point may make, with mutation ranges.
ACTION_KEYS: dict[str, tuple[float, float]] = {
    "pressing_default": (0.0, 40.0),
    "pressing_mid": (0.0, 40.0),
    "pressing_flank_def": (0.0, 40.0),
    "pressing_vs_named.HELIOS2018": (0.0, 40.0),
    "eval_depth": (-52.5, 52.5),
    "eval_weight_far": (0.0, 2.0),
    "eval_weight_near": (0.0, 2.0),
    "eval_bonus_scale": (0.0, 80.0),
    "risk_table.*.heliosbase": (0.0, 10.0),
    "risk_table.*.HELIOS2018": (0.0, 10.0),
    "risk_table.*.*": (0.0, 10.0),
    "opp_step_risk_vs_named.heliosbase": (0.0, 10.0),
    "opp_step_risk_default": (0.0, 10.0),
    "pass_max_x": (-52.5, 52.5),
    "pass_min_y": (0.0, 34.0),
    "pass_cut": (0.0, 180.0),
    "pass_angle": (0.0, 180.0),
    "pass_depth": (0.0, 15.0),
    **{key: (0.0, 1.0) for key in TOGGLE_KEYS},
}


class GenotypeError(ValueError):
    pass


@dataclass(frozen=True)
class ConditionPrimitive:
    argument: str
    op: str
    threshold: float

    def __post_init__(self) -> None:
        if self.argument not in CONDITION_FEATURES:
            raise GenotypeError(f"unknown condition argument {self.argument!r}")
        if self.op not in CONDITION_OPS:
            raise GenotypeError(f"unknown condition operator {self.op!r}")

    def holds(self, value: float) -> bool:
        if self.op == "<":
            return value < self.threshold
        if self.op == "<=":
            return value <= self.threshold
        if self.op == "==":
            return abs(value - self.threshold) <= 1e-9
        if self.op == ">=":
            return value >= self.threshold
        return value > self.threshold


@dataclass(frozen=True)
class DesignPoint:
    id: str
    action_key: str
    action_value: float
    conditions: tuple[ConditionPrimitive, ...] = ()
    opponent_gate: Optional[str] = None
    enabled: bool = True

    def __post_init__(self) -> None:
        if self.action_key not in ACTION_KEYS:
            raise GenotypeError(f"unknown action key {self.action_key!r}")
        if self.opponent_gate is not None and not self.opponent_gate:
            raise GenotypeError("empty opponent gate")


@dataclass(frozen=True)
class Genotype:
    design_points: tuple[DesignPoint, ...]
    base_params: BehaviorParams = field(default_factory=BehaviorParams)
    formation_set: str = "default"
    name: str = "team"


@dataclass(frozen=True)
class ActiveProfile:
    """Activation result: flattened parameters plus runtime override rules."""

    params: BehaviorParams
    rules: tuple[DesignPoint, ...]


def epigenetic_activate(genotype: Genotype, opponent_name: str) -> ActiveProfile:
    """Apply enabled, gate-matching design points in list order.

    Unconditional points assign their parameter immediately (later points
    override earlier ones); conditional points are returned as runtime
    rules for the behavior pipeline.
    """
    params = BehaviorParams.from_profile(genotype.base_params.to_profile())
    rules: list[DesignPoint] = []
    for point in genotype.design_points:
        if not point.enabled:
            continue
        if point.opponent_gate is not None and point.opponent_gate not in opponent_name:
            continue
        if point.conditions:
            rules.append(point)
        else:
            set_param(params, point.action_key, point.action_value)
    return ActiveProfile(params=params, rules=tuple(rules))


# ---------------------------------------------------------------------------
# Variation operators


@dataclass(frozen=True)
class MutationRates:
    threshold: float = 0.3
    op: float = 0.05
    toggle: float = 0.05
    value: float = 0.3


def _clamp(value: float, lo: float, hi: float) -> float:
    return min(max(value, lo), hi)


def mutate(genotype: Genotype, seed: int, rates: MutationRates = MutationRates()) -> Genotype:
    """Perturb thresholds, flip operators to adjacent ones, toggle points,
    and perturb action values; the design-point structure is preserved."""
    rng = random.Random(seed)
    points: list[DesignPoint] = []
    for point in genotype.design_points:
        conditions: list[ConditionPrimitive] = []
        for cond in point.conditions:
            lo, hi = CONDITION_FEATURES[cond.argument]
            threshold = cond.threshold
            if rng.random() < rates.threshold:
                threshold = _clamp(threshold + rng.gauss(0.0, 0.1 * (hi - lo)), lo, hi)
            op = cond.op
            if rng.random() < rates.op:
                idx = CONDITION_OPS.index(op)
                step = -1 if idx == len(CONDITION_OPS) - 1 else (1 if idx == 0 else rng.choice((-1, 1)))
                op = CONDITION_OPS[idx + step]
            conditions.append(ConditionPrimitive(cond.argument, op, threshold))
        enabled = point.enabled
        if rng.random() < rates.toggle:
            enabled = not enabled
        value = point.action_value
        lo, hi = ACTION_KEYS[point.action_key]
        if rng.random() < rates.value:
            if point.action_key in TOGGLE_KEYS:
                value = 1.0 - value
            else:
                value = _clamp(value + rng.gauss(0.0, 0.1 * (hi - lo)), lo, hi)
        points.append(
            DesignPoint(
                id=point.id,
                action_key=point.action_key,
                action_value=value,
                conditions=tuple(conditions),
                opponent_gate=point.opponent_gate,
                enabled=enabled,
            )
        )
    return replace(genotype, design_points=tuple(points))


def recombine(a: Genotype, b: Genotype, seed: int) -> Genotype:
    """Uniform crossover at design-point granularity; base parameters are
    crossed per profile key."""
    ids_a = [p.id for p in a.design_points]
    ids_b = [p.id for p in b.design_points]
    if ids_a != ids_b:
        raise GenotypeError("incompatible genotypes")
    rng = random.Random(seed)
    points = tuple(
        pa if rng.random() < 0.5 else pb
        for pa, pb in zip(a.design_points, b.design_points)
    )
    params = BehaviorParams.from_profile(a.base_params.to_profile())
    profile_b = b.base_params.to_profile()
    for raw in profile_b.splitlines():
        line = raw.strip()
        if not line:
            continue
        key, _, val = line.partition("=")
        if rng.random() < 0.5:
            set_param(params, key.strip(), val.strip())
    formation_set = a.formation_set if rng.random() < 0.5 else b.formation_set
    return Genotype(
        design_points=points,
        base_params=params,
        formation_set=formation_set,
        name=a.name,
    )


# ---------------------------------------------------------------------------
# Fitness statistics


@dataclass(frozen=True)
class FitnessStats:
    points_for: float
    points_against: float
    goals_scored: float
    goals_conceded: float
    goal_diff: float
    std_error: float
    n_games: int


def aggregate_stats(results: Sequence[tuple[int, int]]) -> FitnessStats:
    """Per-game (goals for, goals against) pairs to one report row.

    Points are 3/1/0 per win/draw/loss; the standard error is the sample
    standard deviation (n-1) of per-game goal differences over sqrt(n),
    zero for a single game."""
    if not results:
        raise ValueError("empty result list")
    n = len(results)
    pf = sum(3 if gf > ga else (1 if gf == ga else 0) for gf, ga in results) / n
    pa = sum(3 if ga > gf else (1 if gf == ga else 0) for gf, ga in results) / n
    gs = sum(gf for gf, _ in results) / n
    gc = sum(ga for _, ga in results) / n
    diffs = [gf - ga for gf, ga in results]
    mean_diff = sum(diffs) / n
    if n > 1:
        var = sum((d - mean_diff) ** 2 for d in diffs) / (n - 1)
        se = math.sqrt(var) / math.sqrt(n)
    else:
        se = 0.0
    return FitnessStats(
        points_for=pf,
        points_against=pa,
        goals_scored=gs,
        goals_conceded=gc,
        goal_diff=gs - gc,
        std_error=se,
        n_games=n,
    )


def compare_fitness(a: FitnessStats, b: FitnessStats) -> int:
    """Lexicographic fitness order: goal difference, then points for, then
    the lower standard error.  Positive means ``a`` ranks better."""
    if a.goal_diff > b.goal_diff + 1e-9:
        return 1
    if b.goal_diff > a.goal_diff + 1e-9:
        return -1
    if a.points_for > b.points_for + 1e-9:
        return 1
    if b.points_for > a.points_for + 1e-9:
        return -1
    if a.std_error < b.std_error - 1e-9:
        return 1
    if b.std_error < a.std_error - 1e-9:
        return -1
    return 0


def mean_stats(stats: Sequence[FitnessStats]) -> FitnessStats:
    """Average rows across opponents; standard errors combine as the error
    of the mean of independent means."""
    if not stats:
        raise ValueError("empty stats list")
    k = len(stats)
    return FitnessStats(
        points_for=sum(s.points_for for s in stats) / k,
        points_against=sum(s.points_against for s in stats) / k,
        goals_scored=sum(s.goals_scored for s in stats) / k,
        goals_conceded=sum(s.goals_conceded for s in stats) / k,
        goal_diff=sum(s.goal_diff for s in stats) / k,
        std_error=math.sqrt(sum(s.std_error**2 for s in stats)) / k,
        n_games=sum(s.n_games for s in stats),
    )


MatchRunner = Callable[..., "object"]


def evaluate_fitness(
    candidate: Genotype,
    opponent: Genotype,
    opponent_name: str,
    n_games: int,
    base_seed: int,
    server=None,
    match_runner: Optional[MatchRunner] = None,
    n_jobs: int = 1,
) -> FitnessStats:
    """Seeded series against one opponent; the candidate takes the left
    side on even seeds and the right side on odd seeds to cancel side
    bias.  Results are reduced in seed order, so the optional thread pool
    never changes the outcome."""
    if n_games < 1:
        raise ValueError("n_games must be >= 1")
    if match_runner is None:
        from .match import run_match as match_runner  # deferred: avoids import cycle
    if server is None:
        from .engine import ServerParams

        server = ServerParams()

    seeds = range(base_seed, base_seed + n_games)

    def play(seed: int) -> tuple[int, int]:
        if seed % 2 == 0:
            result = match_runner(
                candidate, opponent, server, seed,
                left_name=candidate.name, right_name=opponent_name,
            )
            return (result.score[0], result.score[1])
        result = match_runner(
            opponent, candidate, server, seed,
            left_name=opponent_name, right_name=candidate.name,
        )
        return (result.score[1], result.score[0])

    if n_jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            games = list(pool.map(play, seeds))
    else:
        games = [play(seed) for seed in seeds]
    return aggregate_stats(games)


# ---------------------------------------------------------------------------
# Generations


REPORT_COLUMNS = (
    "Points for",
    "Points against",
    "Goals scored",
    "Goals conceded",
    "Goal diff.",
    "Std. error",
)


def format_report(rows: Sequence[tuple[str, FitnessStats]]) -> str:
    """Tab-separated report in the canonical column order."""
    out = ["\t".join(("Team",) + REPORT_COLUMNS)]
    for name, s in rows:
        out.append(
            "\t".join(
                (
                    name,
                    f"{s.points_for:.3f}",
                    f"{s.points_against:.3f}",
                    f"{s.goals_scored:.3f}",
                    f"{s.goals_conceded:.3f}",
                    f"{s.goal_diff:.3f}",
                    f"{s.std_error:.3f}",
                )
            )
        )
    return "\n".join(out) + "\n"


def run_generation(
    population: Sequence[Genotype],
    opponents: Sequence[tuple[Genotype, str]],
    n_games: int,
    base_seed: int,
    elite_k: int,
    offspring_m: int,
    rates: MutationRates = MutationRates(),
    rng_seed: int = 0,
    server=None,
    match_runner: Optional[MatchRunner] = None,
    n_jobs: int = 1,
) -> tuple[list[Genotype], list[tuple[str, FitnessStats]]]:
    """Evaluate everyone against every opponent, keep the elites, refill
    with mutated recombinations of elite pairs."""
    if not population:
        raise ValueError("empty population")
    scored: list[tuple[Genotype, FitnessStats]] = []
    for member in population:
        per_opponent = [
            evaluate_fitness(
                member, opp, opp_name, n_games, base_seed,
                server=server, match_runner=match_runner, n_jobs=n_jobs,
            )
            for opp, opp_name in opponents
        ]
        scored.append((member, mean_stats(per_opponent)))

    ranked = sorted(
        range(len(scored)),
        key=cmp_to_key(lambda i, j: -compare_fitness(scored[i][1], scored[j][1])),
    )
    report = [(scored[i][0].name, scored[i][1]) for i in ranked]
    elites = [scored[i][0] for i in ranked[: max(1, elite_k)]]

    offspring: list[Genotype] = []
    for m in range(offspring_m):
        pa = elites[m % len(elites)]
        pb = elites[(m + 1) % len(elites)]
        child_seed = rng_seed * 1_000_003 + m
        child = mutate(recombine(pa, pb, child_seed), child_seed + 1, rates)
        offspring.append(replace(child, name=f"{pa.name}~g{m}"))
    return elites + offspring, report


# ---------------------------------------------------------------------------
# Genotype files


def save_genotype(genotype: Genotype) -> str:
    out: list[str] = []
    if genotype.formation_set != "default":
        out.append(f"formations {genotype.formation_set}")
    for point in genotype.design_points:
        out.append(f"point {point.id}")
        for cond in point.conditions:
            out.append(f"when {cond.argument} {cond.op} {cond.threshold:g}")
        out.append(f"set {point.action_key} {point.action_value:g}")
        if point.opponent_gate is not None:
            out.append(f"vs {point.opponent_gate}")
        out.append(f"enabled {'true' if point.enabled else 'false'}")
    return "\n".join(out) + "\n"


def parse_genotype(
    text: str,
    base_params: Optional[BehaviorParams] = None,
    name: str = "team",
) -> Genotype:
    formation_set = "default"
    points: list[DesignPoint] = []

    current_id: Optional[str] = None
    conditions: list[ConditionPrimitive] = []
    action: Optional[tuple[str, float]] = None
    gate: Optional[str] = None
    enabled = True

    def flush(lineno: int) -> None:
        nonlocal current_id, conditions, action, gate, enabled
        if current_id is None:
            return
        if action is None:
            raise GenotypeError(f"line {lineno}: point {current_id!r} has no 'set' line")
        points.append(
            DesignPoint(
                id=current_id,
                action_key=action[0],
                action_value=action[1],
                conditions=tuple(conditions),
                opponent_gate=gate,
                enabled=enabled,
            )
        )
        current_id = None
        conditions = []
        action = None
        gate = None
        enabled = True

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word, _, rest = line.partition(" ")
        rest = rest.strip()
        if word == "formations":
            formation_set = rest
        elif word == "point":
            flush(lineno)
            if not rest:
                raise GenotypeError(f"line {lineno}: point without id")
            current_id = rest
        elif word == "when":
            parts = rest.split()
            if len(parts) != 3:
                raise GenotypeError(f"line {lineno}: expected 'when <arg> <op> <threshold>'")
            try:
                conditions.append(ConditionPrimitive(parts[0], parts[1], float(parts[2])))
            except (ValueError, GenotypeError) as exc:
                raise GenotypeError(f"line {lineno}: {exc}") from None
        elif word == "set":
            parts = rest.split()
            if len(parts) != 2:
                raise GenotypeError(f"line {lineno}: expected 'set <key> <value>'")
            try:
                action = (parts[0], float(parts[1]))
            except ValueError:
                raise GenotypeError(f"line {lineno}: bad value {parts[1]!r}") from None
        elif word == "vs":
            if not rest:
                raise GenotypeError(f"line {lineno}: empty 'vs' substring")
            gate = rest
        elif word == "enabled":
            if rest not in ("true", "false"):
                raise GenotypeError(f"line {lineno}: expected 'enabled true|false'")
            enabled = rest == "true"
        else:
            raise GenotypeError(f"line {lineno}: unknown directive {word!r}")
    flush(len(text.splitlines()))

    return Genotype(
        design_points=tuple(points),
        base_params=base_params or BehaviorParams(),
        formation_set=formation_set,
        name=name,
    )


def load_genotype(path: str | Path, base_params: Optional[BehaviorParams] = None) -> Genotype:
    path = Path(path)
    try:
        return parse_genotype(
            path.read_text(encoding="utf-8"),
            base_params=base_params,
            name=path.stem,
        )
    except GenotypeError as exc:
        raise GenotypeError(f"{path}: {exc}") from None
