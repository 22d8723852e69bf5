"""Quick dynamics diagnostics: run a small seeded series between two preset
genotypes and summarize scores, shots, possession flow and timing.

Usage: python scripts/diag_series.py [team_a] [team_b] [n_games]
"""
from __future__ import annotations

import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

import numpy as np

from gliders2d.engine import ServerParams
from gliders2d.hbec import load_genotype, aggregate_stats
from gliders2d.match import run_match, data_root


def shot_stats(trace):
    """Count fast balls entering the goal cone from inside shooting range."""
    b = trace.ball
    speed = np.hypot(b[:, 2], b[:, 3])
    shots_l = 0
    shots_r = 0
    prev = 0.0
    for c in range(1, b.shape[0]):
        sp = speed[c]
        if sp > 2.2 and prev < 1.2:
            if b[c, 2] > 1.5 and b[c, 0] > 30.0:
                shots_l += 1
            elif b[c, 2] < -1.5 and b[c, 0] < -30.0:
                shots_r += 1
        prev = sp
    return shots_l, shots_r


def main() -> None:
    name_a = sys.argv[1] if len(sys.argv) > 1 else "baseline"
    name_b = sys.argv[2] if len(sys.argv) > 2 else "baseline"
    n = int(sys.argv[3]) if len(sys.argv) > 3 else 20
    root = data_root() / "genotypes"
    team_a = load_genotype(root / f"{name_a}.gen")
    team_b = load_genotype(root / f"{name_b}.gen")
    server = ServerParams()

    run_match(team_a, team_b, ServerParams(half_cycles=5), seed=0)  # warm-up

    games = []
    shots_a = 0
    shots_b = 0
    t0 = time.perf_counter()
    for seed in range(1, n + 1):
        if seed % 2 == 1:
            res, trace = run_match(team_a, team_b, server, seed=seed,
                                   left_name=name_a, right_name=name_b, collect_trace=True)
            gf, ga = res.score
            sl, sr = shot_stats(trace)
            shots_a += sl
            shots_b += sr
        else:
            res, trace = run_match(team_b, team_a, server, seed=seed,
                                   left_name=name_b, right_name=name_a, collect_trace=True)
            ga, gf = res.score
            sr, sl = shot_stats(trace)
            shots_a += sl
            shots_b += sr
        games.append((gf, ga))
    dt = time.perf_counter() - t0
    stats = aggregate_stats(games)
    print(f"{name_a} vs {name_b}: {n} games in {dt:.1f}s ({dt/n*1000:.0f} ms/game incl. trace)")
    print(f"  goals {stats.goals_scored:.2f} : {stats.goals_conceded:.2f}   gd {stats.goal_diff:+.2f} +-{stats.std_error:.2f}")
    print(f"  points {stats.points_for:.2f} : {stats.points_against:.2f}")
    print(f"  shots/game {shots_a/n:.1f} : {shots_b/n:.1f}")
    print("  sample scores:", games[:10])


if __name__ == "__main__":
    main()
