"""Command line entry points.

Subcommands: ``run-match``, ``run-series``, ``evolve``, ``export-table``,
``serve-editor``.  The GLIDERS2D_DATA environment variable overrides the
packaged data directory for formations and genotype presets.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .engine import ServerParams
from .hbec import (
    FitnessStats,
    GenotypeError,
    MutationRates,
    aggregate_stats,
    evaluate_fitness,
    format_report,
    load_genotype,
    run_generation,
    save_genotype,
)

EXIT_BAD_INPUT = 2
EXIT_ENGINE = 3


def _load_server(path: str | None) -> ServerParams:
    if not path:
        return ServerParams()
    return ServerParams.from_profile(Path(path).read_text(encoding="utf-8"))


def _load_team(path: str) -> "Genotype":
    from .match import data_root

    p = Path(path)
    if not p.exists():
        candidate = data_root() / "genotypes" / f"{path}.gen"
        if candidate.exists():
            p = candidate
    return load_genotype(p)


def _series_rows(team_a, team_b, games: int, seed: int, server: ServerParams, n_jobs: int):
    """Per-game scores from team_a's perspective, sides alternating by seed.
    Results are collected in seed order, so worker threads never change
    the output."""
    from .match import run_match

    def play(s: int):
        if s % 2 == 0:
            res = run_match(team_a, team_b, server, s, left_name=team_a.name, right_name=team_b.name)
            return (s, res.score[0], res.score[1])
        res = run_match(team_b, team_a, server, s, left_name=team_b.name, right_name=team_a.name)
        return (s, res.score[1], res.score[0])

    seeds = range(seed, seed + games)
    if n_jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            return list(pool.map(play, seeds))
    return [play(s) for s in seeds]


def _write_report(path: Path, label: str, stats: FitnessStats) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_report([(label, stats)]), encoding="utf-8")


def cmd_run_match(args) -> int:
    from .match import run_match, write_match_log

    try:
        team_a = _load_team(args.team_a)
        team_b = _load_team(args.team_b)
        server = _load_server(args.params)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    try:
        if args.log:
            result, trace = run_match(
                team_a, team_b, server, args.seed,
                left_name=team_a.name, right_name=team_b.name, collect_trace=True,
            )
            write_match_log(args.log, trace, params_name=args.params or "default")
        else:
            result = run_match(
                team_a, team_b, server, args.seed,
                left_name=team_a.name, right_name=team_b.name,
            )
    except Exception as exc:
        print(f"engine error: {exc}", file=sys.stderr)
        return EXIT_ENGINE
    print(f"{team_a.name} {result.score[0]} : {result.score[1]} {team_b.name} (seed {result.seed})")
    return 0


def cmd_run_series(args) -> int:
    try:
        team_a = _load_team(args.team_a)
        team_b = _load_team(args.team_b)
        server = _load_server(args.params)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    try:
        rows = _series_rows(team_a, team_b, args.games, args.seed, server, args.jobs)
    except Exception as exc:
        print(f"engine error: {exc}", file=sys.stderr)
        return EXIT_ENGINE
    stats = aggregate_stats([(gf, ga) for _, gf, ga in rows])
    label = f"{team_a.name} vs {team_b.name}"
    report = format_report([(label, stats)])
    if args.output:
        out = Path(args.output)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(report, encoding="utf-8")
        games_path = out.with_suffix(out.suffix + ".games")
        games_path.write_text(
            "seed\tgoals_for\tgoals_against\n"
            + "".join(f"{s}\t{gf}\t{ga}\n" for s, gf, ga in rows),
            encoding="utf-8",
        )
    sys.stdout.write(report)
    return 0


def cmd_evolve(args) -> int:
    pop_dir = Path(args.pop)
    if not pop_dir.is_dir():
        print(f"error: population directory {pop_dir} not found", file=sys.stderr)
        return EXIT_BAD_INPUT
    try:
        population = [load_genotype(p) for p in sorted(pop_dir.glob("*.gen"))]
        opponents = [(_load_team(name), name) for name in args.opponent]
        server = _load_server(args.params)
    except (OSError, ValueError, GenotypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    if not population:
        print(f"error: no .gen files under {pop_dir}", file=sys.stderr)
        return EXIT_BAD_INPUT
    if not opponents:
        opponents = [(_load_team("baseline"), "baseline")]

    out_dir = Path(args.output or "evolve-out")
    out_dir.mkdir(parents=True, exist_ok=True)
    rates = MutationRates()

    generation = 0
    while True:
        try:
            population, report = run_generation(
                population, opponents, args.games, args.seed,
                elite_k=args.elite, offspring_m=args.offspring,
                rates=rates, rng_seed=args.seed + generation,
                server=server, n_jobs=args.jobs,
            )
        except Exception as exc:
            print(f"engine error: {exc}", file=sys.stderr)
            return EXIT_ENGINE
        report_path = out_dir / f"generation-{generation:03d}.tsv"
        report_path.write_text(format_report(report), encoding="utf-8")
        print(f"generation {generation}: best {report[0][0]} gd {report[0][1].goal_diff:+.3f}")
        if generation >= args.generations:
            break
        generation += 1
        if args.manual:
            stage_dir = out_dir / f"population-{generation:03d}"
            stage_dir.mkdir(exist_ok=True)
            for member in population:
                (stage_dir / f"{member.name}.gen").write_text(
                    save_genotype(member), encoding="utf-8"
                )
            input(f"edit genotypes under {stage_dir}, then press Enter to continue...")
            population = [load_genotype(p) for p in sorted(stage_dir.glob("*.gen"))]

    final_dir = out_dir / "final-population"
    final_dir.mkdir(exist_ok=True)
    for member in population:
        (final_dir / f"{member.name}.gen").write_text(save_genotype(member), encoding="utf-8")
    return 0


def cmd_export_table(args) -> int:
    try:
        opponent = _load_team(args.opponent)
        server = _load_server(args.params)
        gen_dir = Path(args.dir)
        paths = sorted(gen_dir.glob("*.gen"))
        teams = [load_genotype(p) for p in paths]
    except (OSError, ValueError, GenotypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    if not teams:
        print(f"error: no .gen files under {args.dir}", file=sys.stderr)
        return EXIT_BAD_INPUT
    rows = []
    try:
        for team in teams:
            stats = evaluate_fitness(
                team, opponent, opponent.name, args.games, args.seed,
                server=server, n_jobs=args.jobs,
            )
            rows.append((team.name, stats))
    except Exception as exc:
        print(f"engine error: {exc}", file=sys.stderr)
        return EXIT_ENGINE
    report = format_report(rows)
    if args.output:
        Path(args.output).write_text(report, encoding="utf-8")
    sys.stdout.write(report)
    return 0


def cmd_serve_editor(args) -> int:
    from .match import data_root
    from .service import FormationStore, serve_editor

    doc = Path(args.output or "editor-formation.conf")
    initial = None
    if not doc.exists():
        template = data_root() / "formations" / "default" / "offense-formation.conf"
        initial = template.read_text(encoding="utf-8")
    try:
        store = FormationStore(doc, initial_text=initial)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    serve_editor(store, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gliders2d", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, teams: bool = True):
        if teams:
            p.add_argument("--team-a", required=True, help="genotype file or preset name")
            p.add_argument("--team-b", required=True, help="genotype file or preset name")
        p.add_argument("--seed", type=int, default=1)
        p.add_argument("--params", help="server parameter profile file")
        p.add_argument("--output", help="output path")
        p.add_argument("--jobs", type=int, default=1, help="worker threads")

    p = sub.add_parser("run-match", help="play one match")
    common(p)
    p.add_argument("--log", help="write a per-cycle match log")
    p.set_defaults(func=cmd_run_match)

    p = sub.add_parser("run-series", help="play a seeded series and report statistics")
    common(p)
    p.add_argument("--games", type=int, default=200)
    p.set_defaults(func=cmd_run_series)

    p = sub.add_parser("evolve", help="run evolutionary generations over a population")
    common(p, teams=False)
    p.add_argument("--pop", required=True, help="directory of genotype files")
    p.add_argument("--opponent", action="append", default=[], help="opponent preset/file (repeatable)")
    p.add_argument("--games", type=int, default=200)
    p.add_argument("--generations", type=int, default=1)
    p.add_argument("--elite", type=int, default=2)
    p.add_argument("--offspring", type=int, default=2)
    p.add_argument("--manual", action="store_true", help="pause each generation for hand edits")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("export-table", help="evaluate every genotype in a directory against one opponent")
    common(p, teams=False)
    p.add_argument("--dir", required=True, help="directory of genotype files")
    p.add_argument("--opponent", required=True, help="opponent preset/file")
    p.add_argument("--games", type=int, default=200)
    p.set_defaults(func=cmd_export_table)

    p = sub.add_parser("serve-editor", help="serve the formation editor HTTP facade")
    common(p, teams=False)
    p.add_argument("--port", type=int, default=8723)
    p.set_defaults(func=cmd_serve_editor)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if not (1024 <= getattr(args, "port", 8723) <= 65535):
        print("error: port must be in [1024, 65535]", file=sys.stderr)
        return EXIT_BAD_INPUT
    if getattr(args, "games", 1) < 1:
        print("error: --games must be >= 1", file=sys.stderr)
        return EXIT_BAD_INPUT
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
