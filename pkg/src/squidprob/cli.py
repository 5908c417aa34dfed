"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 data/cache/IO error, 3 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from collections import defaultdict
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import __version__
from .board import GameConfig
from .elimination import build_report
from .enumeration import (
    CacheError,
    EnumerationError,
    enumerate_arrangements,
    load_cache,
    occupancy_csv,
    occupancy_map,
    occupancy_pgm,
    save_cache,
)
from .hopscotch import BridgeConfig, bridge_csv, bridge_table, text_chart
from .hunting import StrategyKind, shot_sequence
from .simulation import (
    DEFAULT_CHUNK,
    DELTA_PRESETS,
    SimulationSummary,
    estimate_pi_from,
    run_study,
)
from .sinking import miss_distribution_exact

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INVARIANT = 0, 1, 2, 3
DEFAULT_GAMES = 1_000_000


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunManifest:
    subcommand: str
    parameters: dict
    seed: int | None = None
    caches: list[str] = field(default_factory=list)
    outputs: list[str] = field(default_factory=list)
    tool_version: str = __version__
    duration_s: float = 0.0
    path: Path | None = field(default=None, repr=False)

    def write(self) -> None:
        doc = {k: v for k, v in asdict(self).items() if k != "path"}
        self.path.write_text(json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n")


def cache_dir() -> Path:
    return Path(os.environ.get("SQUID_CACHE_DIR") or Path.home() / ".cache" / "squidprob")


def default_cache(buffered: bool) -> Path:
    return cache_dir() / f"arrangements-{GameConfig(buffered=buffered).label}.sqws"


def _open_cache(args, in_memory: bool = False):
    path = Path(args.cache) if args.cache else default_cache(args.buffered)
    if not path.exists():
        raise DataError(f"no arrangement cache at {path}; run `squidprob enumerate"
                        f"{' --buffered' if args.buffered else ''}` first")
    config = None if args.cache and not args.buffered else GameConfig(buffered=args.buffered)
    return load_cache(path, config, in_memory=in_memory), path


def _write(path: Path, data: str | bytes) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        if isinstance(data, bytes):
            path.write_bytes(data)
        else:
            with open(path, "w", newline="\n") as fh:
                fh.write(data)
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc}") from exc


def _manifest_path(out: Path) -> Path:
    return out.with_name(out.name + ".manifest.json")


def _strategy(name: str) -> StrategyKind:
    try:
        return StrategyKind.parse(name)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


# -- subcommands -------------------------------------------------------------

def cmd_enumerate(args, manifest: RunManifest) -> None:
    config = GameConfig(buffered=args.buffered)
    out = Path(args.out) if args.out else default_cache(args.buffered)
    aset = enumerate_arrangements(config)
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        save_cache(aset, out)
    except OSError as exc:
        raise DataError(f"cannot write {out}: {exc}") from exc
    print(aset.labelled_count)
    print(f"{config.label}: {aset.labelled_count} placements with the 3-ships told apart, "
          f"{aset.count} as unordered fleets -> {out}", file=sys.stderr)
    manifest.outputs.append(str(out))
    manifest.parameters.update(count=aset.count, labelled_count=aset.labelled_count)
    manifest.path = _manifest_path(out)


def cmd_heatmap(args, manifest: RunManifest) -> None:
    aset, path = _open_cache(args)
    omap = occupancy_map(aset, args.scope if args.scope == "all" else int(args.scope))
    data = occupancy_csv(omap) if args.format == "csv" else occupancy_pgm(omap)
    manifest.caches.append(str(path))
    if args.out:
        out = Path(args.out)
        _write(out, data)
        manifest.outputs.append(str(out))
        manifest.path = _manifest_path(out)
    else:
        sys.stdout.write(data if isinstance(data, str) else data.decode("ascii"))


def cmd_strategy_dump(args, manifest: RunManifest) -> None:
    omap = None
    if args.strategy.needs_map:
        aset, path = _open_cache(args)
        manifest.caches.append(str(path))
        omap = occupancy_map(aset)
    seq = shot_sequence(args.strategy, omap, args.seed)
    if args.out:
        out = Path(args.out)
        _write(out, seq.to_csv())
        manifest.outputs.append(str(out))
        manifest.path = _manifest_path(out)
    else:
        sys.stdout.write(seq.to_csv())


def _simulate(args, seed: int, manifest: RunManifest, aset=None, path=None, omap=None):
    if aset is None:
        aset, path = _open_cache(args, in_memory=True)
    if str(path) not in manifest.caches:
        manifest.caches.append(str(path))
    return run_study(aset, args.strategy, args.games, seed, omap=omap,
                     threads=args.threads, chunk_size=args.chunk_size)


def cmd_simulate(args, manifest: RunManifest) -> None:
    summary = _simulate(args, args.seed, manifest)
    sys.stdout.write(summary.to_json())
    if args.out:
        out = Path(args.out)
        _write(out / "summary.json", summary.to_json())
        _write(out / "raw.csv", summary.raw_csv())
        manifest.outputs += [str(out / "summary.json"), str(out / "raw.csv")]
        manifest.path = out / "manifest.json"


def _load_run(directory: str) -> SimulationSummary:
    d = Path(directory)
    try:
        return SimulationSummary.from_files((d / "summary.json").read_text(),
                                            (d / "raw.csv").read_text())
    except (OSError, KeyError, ValueError) as exc:
        raise DataError(f"cannot read simulation run in {d}: {exc}") from exc


def cmd_pi(args, manifest: RunManifest) -> None:
    loser, winner = _load_run(args.losing), _load_run(args.winning)
    try:
        estimates = [estimate_pi_from(loser, winner, d, seed=args.seed) for d in args.delta]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    doc = {
        "strategy": winner.kind.value, "buffered": winner.buffered,
        "losing_seed": loser.seed, "winning_seed": winner.seed,
        "estimates": [asdict(e) for e in estimates],
    }
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    sys.stdout.write(text)
    if args.out:
        out = Path(args.out)
        _write(out, text)
        manifest.outputs.append(str(out))
        manifest.path = _manifest_path(out)


def cmd_report(args, manifest: RunManifest) -> None:
    pools: dict[tuple[str, bool], list[SimulationSummary]] = defaultdict(list)
    if args.runs:
        for d in args.runs:
            s = _load_run(d)
            pools[s.key].append(s)
    else:
        for buffered in (True, False):
            args.buffered = buffered
            aset, path = _open_cache(args, in_memory=True)
            omap = occupancy_map(aset)
            for kind in StrategyKind:
                args.strategy = kind
                for seed in (args.seed, args.seed + 1):
                    pools[(kind.value, buffered)].append(
                        _simulate(args, seed, manifest, aset, path, omap))
            del aset

    settings = {b for _, b in pools}
    for b in settings:
        missing = [k.value for k in StrategyKind if (k.value, b) not in pools]
        if missing:
            raise DataError(f"missing strategy rows for {'buffer' if b else 'no-buffer'}: "
                            + ", ".join(missing))
    summaries, estimates = [], {}
    for key in sorted(pools, key=lambda k: (not k[1], [s.value for s in StrategyKind].index(k[0]))):
        runs = sorted(pools[key], key=lambda s: s.seed)
        if len(runs) < 2:
            raise DataError(f"{key[0]} ({'buffer' if key[1] else 'no-buffer'}) needs two "
                            "independent runs with different seeds")
        loser, winner = runs[0], runs[1]
        summaries.append(winner)
        estimates[key] = [estimate_pi_from(loser, winner, d, seed=args.seed) for d in args.delta]
    report = build_report(summaries, estimates)

    out = Path(args.out)
    files = {"inputs.csv": report.inputs_csv(), "report.json": report.to_json()}
    for d in report.deltas():
        files[f"elimination_delta-{d}.csv"] = report.elimination_csv(d)
    for name, text in files.items():
        _write(out / name, text)
        manifest.outputs.append(str(out / name))
    manifest.path = out / "manifest.json"
    sys.stdout.write(report.inputs_csv())


def cmd_hopscotch(args, manifest: RunManifest) -> None:
    try:
        cfg = BridgeConfig(args.steps, args.fail_denominator)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    result = bridge_table(cfg)
    text = bridge_csv(result)
    if args.out:
        out = Path(args.out)
        _write(out, text)
        manifest.outputs.append(str(out))
        manifest.path = _manifest_path(out)
    else:
        sys.stdout.write(text)
    if args.chart:
        sys.stdout.write(text_chart(result))
    print(f"expected first crosser: {result.expected_first_crosser:g}")


def cmd_sink_table(args, manifest: RunManifest) -> None:
    dists = {L: miss_distribution_exact(L) for L in (2, 3, 5)}
    top = max(max(d.support) for d in dists.values())
    print("misses," + ",".join(f"L={L}" for L in dists))
    for x in range(top + 1):
        cells = []
        for d in dists.values():
            p = d.probabilities.get(x, 0)
            cells.append(f"{p} ({float(p):.4f})")
        print(f"{x}," + ",".join(cells))
    print("mean," + ",".join(f"{d.mean} ({float(d.mean):.2f})" for d in dists.values()))


# -- wiring ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="squidprob", description="Glass bridge and Warships probability tools.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cache_args(sp):
        sp.add_argument("--buffered", action="store_true",
                        help="ships may not touch along a side")
        sp.add_argument("--cache", help="arrangement cache (default: $SQUID_CACHE_DIR)")

    sp = sub.add_parser("enumerate", help="enumerate fleet arrangements into a cache file")
    sp.add_argument("--buffered", action="store_true")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("heatmap", help="per-cell occupancy probabilities")
    cache_args(sp)
    sp.add_argument("--scope", default="all", choices=["all", "2", "3", "5"])
    sp.add_argument("--format", default="csv", choices=["csv", "pgm"])
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_heatmap)

    sp = sub.add_parser("strategy-dump", help="print a strategy's shot order as CSV")
    cache_args(sp)
    sp.add_argument("--strategy", type=_strategy, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_strategy_dump)

    def sim_args(sp):
        cache_args(sp)
        sp.add_argument("--games", type=_positive, default=DEFAULT_GAMES)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--threads", type=_positive, default=os.cpu_count() or 1)
        sp.add_argument("--chunk-size", type=_positive, default=DEFAULT_CHUNK)

    sp = sub.add_parser("simulate", help="one-sided hunting simulation")
    sim_args(sp)
    sp.add_argument("--strategy", type=_strategy, required=True)
    sp.add_argument("--out", help="directory for summary.json and raw.csv")
    sp.set_defaults(func=cmd_simulate)

    delta_help = "delta preset(s): " + ", ".join(DELTA_PRESETS) + " or a number"

    sp = sub.add_parser("pi", help="probability the winner loses no ship")
    sp.add_argument("--losing", required=True, help="simulate output dir for the losing side")
    sp.add_argument("--winning", required=True, help="simulate output dir for the winning side")
    sp.add_argument("--delta", nargs="+", default=list(DELTA_PRESETS), help=delta_help)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_pi)

    sp = sub.add_parser("report", help="hit-order, pi and elimination tables")
    sim_args(sp)
    sp.add_argument("--runs", nargs="+", help="existing simulate output dirs (two per strategy)")
    sp.add_argument("--delta", nargs="+", default=list(DELTA_PRESETS), help=delta_help)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_report)

    sp = sub.add_parser("hopscotch", help="glass bridge first-crosser and survival table")
    sp.add_argument("--steps", type=int, default=17)
    sp.add_argument("--fail-denominator", type=int, default=2)
    sp.add_argument("--chart", action="store_true")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_hopscotch)

    sp = sub.add_parser("sink-table", help="exact misses needed to finish a ship")
    sp.set_defaults(func=cmd_sink_table)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    params = {k: (v.value if isinstance(v, StrategyKind) else v)
              for k, v in vars(args).items() if k != "func"}
    manifest = RunManifest(args.command, params, seed=getattr(args, "seed", None))
    start = time.perf_counter()
    try:
        args.func(args, manifest)
    except UsageError as exc:
        print(f"squidprob {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, CacheError, OSError) as exc:
        print(f"squidprob {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (AssertionError, EnumerationError) as exc:
        print(f"squidprob {args.command}: internal error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    manifest.duration_s = time.perf_counter() - start
    if manifest.path is not None:
        try:
            manifest.write()
        except OSError as exc:
            print(f"squidprob {args.command}: cannot write manifest: {exc}", file=sys.stderr)
            return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
