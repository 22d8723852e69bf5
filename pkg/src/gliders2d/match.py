"""Full-match execution over the compiled kernel, plus match logs.

Team setup (activation against the opponent name, parameter flattening,
formation packing) happens once per match; the kernel then runs all
2 x half_cycles cycles without touching the interpreter.
"""
from __future__ import annotations

import functools
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import kernel
from .engine import MatchResult, ServerParams
from .formation import FormationSet, load_formation_set
from .hbec import Genotype, epigenetic_activate


class EngineError(RuntimeError):
    """A match could not be completed; no partial result is available."""


def data_root() -> Path:
    """Data directory: $GLIDERS2D_DATA when set, else the packaged data."""
    env = os.environ.get("GLIDERS2D_DATA")
    if env:
        return Path(env)
    return Path(__file__).parent / "data"


def resolve_formation_dir(name_or_path: str) -> Path:
    p = Path(name_or_path)
    if p.is_dir():
        return p
    candidate = data_root() / "formations" / name_or_path
    if candidate.is_dir():
        return candidate
    raise FileNotFoundError(f"formation set {name_or_path!r} not found")


@functools.lru_cache(maxsize=32)
def _formation_pack_cached(directory: str):
    fset = load_formation_set(directory)
    return kernel.build_formation_pack(fset)


def formation_pack(name_or_path: str):
    return _formation_pack_cached(str(resolve_formation_dir(name_or_path)))


@dataclass(frozen=True)
class MatchTrace:
    """Per-cycle snapshots: ball (N,4), players (N,22,4), misc (N,4)."""

    ball: np.ndarray
    players: np.ndarray
    misc: np.ndarray


LAST_MATCH_STATS = np.zeros(8, dtype=np.int64)

# dev-only kill switches for profiling: 0 plan, 1 intercepts, 2 formation, 3 collisions
DEBUG_SWITCHES = np.zeros(4, dtype=np.int64)


def _team_arrays(genotype: Genotype, opponent_name: str):
    profile = epigenetic_activate(genotype, opponent_name)
    tp = kernel.build_team_vector(profile.params, opponent_name)
    rt, rv, rc = kernel.build_rule_arrays(profile.rules)
    pack = formation_pack(genotype.formation_set)
    return tp, rt, rv, rc, pack


def run_match(
    team_left: Genotype,
    team_right: Genotype,
    params: Optional[ServerParams] = None,
    seed: int = 0,
    left_name: str = "left",
    right_name: str = "right",
    collect_trace: bool = False,
) -> tuple[MatchResult, Optional[MatchTrace]] | MatchResult:
    """Play one deterministic match.

    Each side's genotype is activated against the *other* side's name, so
    opponent-gated design points switch exactly as they would in a real
    fixture.  Returns the result, or (result, trace) when collecting.
    """
    server = params or ServerParams()
    sp = kernel.build_server_vector(server)
    tp_l, rt_l, rv_l, rc_l, pack_l = _team_arrays(team_left, right_name)
    tp_r, rt_r, rv_r, rc_r, pack_r = _team_arrays(team_right, left_name)

    total = 2 * server.half_cycles
    if collect_trace:
        trace_ball = np.zeros((total, 4))
        trace_players = np.zeros((total, 22, 4))
        trace_misc = np.zeros((total, 4))
        collect = 1
    else:
        trace_ball = np.zeros((1, 4))
        trace_players = np.zeros((1, 22, 4))
        trace_misc = np.zeros((1, 4))
        collect = 0

    stats = np.zeros(8, dtype=np.int64)
    dbg = DEBUG_SWITCHES
    score_l, score_r, status = kernel.run_match_nb(
        sp, tp_l, tp_r,
        rt_l, rv_l, rc_l, rt_r, rv_r, rc_r,
        pack_l[0], pack_l[1], pack_l[2], pack_l[3],
        pack_r[0], pack_r[1], pack_r[2], pack_r[3],
        np.uint64(seed), total, server.half_cycles,
        collect, trace_ball, trace_players, trace_misc, stats, dbg,
    )
    LAST_MATCH_STATS[:] = stats
    if status != 0:
        raise EngineError(
            f"match aborted (numeric failure), seed={seed}, "
            f"teams={team_left.name!r} vs {team_right.name!r}"
        )
    result = MatchResult(score=(int(score_l), int(score_r)), seed=seed, cycles_played=total)
    if collect_trace:
        return result, MatchTrace(trace_ball, trace_players, trace_misc)
    return result


def write_match_log(path: str | Path, trace: MatchTrace, params_name: str = "default") -> None:
    """One line per cycle: cycle, ball x y vx vy, then per player
    side unum x y body stamina."""
    lines = [f"# params {params_name}"]
    n = trace.ball.shape[0]
    for c in range(n):
        parts = [str(c + 1)]
        parts.extend(f"{v:.6f}" for v in trace.ball[c])
        for i in range(22):
            side = "l" if i < 11 else "r"
            unum = i + 1 if i < 11 else i - 10
            x, y, body, stamina = trace.players[c, i]
            parts.append(f"{side} {unum} {x:.6f} {y:.6f} {body:.6f} {stamina:.2f}")
        lines.append(" ".join(parts))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def warm_up() -> None:
    """Force kernel compilation with a tiny match so timing tests and
    thread pools never pay the one-off compile cost."""
    from .hbec import Genotype

    server = ServerParams(half_cycles=5)
    baseline = Genotype(design_points=())
    run_match(baseline, baseline, server, seed=0)
