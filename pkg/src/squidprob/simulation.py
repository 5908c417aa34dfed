"""One-sided hunting simulation.

A game draws an arrangement uniformly from the enumerated set and walks a
shot sequence until a ship is hit (``t1``) and then until a *different*
ship is hit (``t2``).  Shots landing again on the first ship do not stop
the walk.  Turn alternation and the extra shot after a hit are ignored:
``t1``/``t2`` are sequence positions.

Games are processed in fixed-size chunks.  Chunk ``i`` draws from
``numpy.random.default_rng(SeedSequence(seed, spawn_key=(i,)))``, so the
results depend only on ``(seed, n_games, chunk_size)`` and never on how many
threads work through the chunks.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .board import FleetArrangement, GameConfig, mask_of
from .enumeration import ArrangementSet, OccupancyMap, occupancy_map
from .hunting import N_CELLS, ShotSequence, StrategyKind, shot_sequence
from .sinking import miss_distribution_exact

DEFAULT_CHUNK = 1 << 16
SEED_SCHEME = "chunk i uses numpy default_rng(SeedSequence(seed, spawn_key=(i,))) [PCG64]"

DELTA_PRESETS: dict[str, float | str] = {
    "0": 0.0,
    "1.60": 1.60,
    "3.06": 3.06,
    "sampled": "sampled",
}


@dataclass(frozen=True)
class HuntOutcome:
    t1: int
    t2: int
    first_len: int
    second_len: int

    def __post_init__(self) -> None:
        if not 1 <= self.t1 < self.t2 <= N_CELLS:
            raise ValueError(f"bad hunt times t1={self.t1}, t2={self.t2}")


def simulate_hunt(arrangement: FleetArrangement, seq: ShotSequence) -> HuntOutcome:
    """Walk ``seq`` over one arrangement (reference, one game at a time)."""
    masks = [mask_of(s) for s in arrangement.ships]
    first = None
    for shot, cell in enumerate(seq.indices, start=1):
        bit = 1 << cell
        for slot, m in enumerate(masks):
            if m & bit:
                if first is None:
                    first = (shot, slot)
                elif slot != first[1]:
                    return HuntOutcome(first[0], shot, arrangement.ships[first[1]].length,
                                       arrangement.ships[slot].length)
    raise ValueError("shot sequence ran out before a second ship was hit")


@lru_cache(maxsize=None)
def _cell_table(length: int) -> np.ndarray:
    """Cells covered by every packed placement code (invalid codes -> 0)."""
    table = np.zeros((256, length), dtype=np.intp)
    for code in range(128):
        row, col, vertical = code & 7, (code >> 3) & 7, (code >> 6) & 1
        step = 8 if vertical else 1
        end_r, end_c = (row + length - 1, col) if vertical else (row, col + length - 1)
        if end_r < 8 and end_c < 8:
            table[code] = row * 8 + col + step * np.arange(length)
    return table


def hunt_times(records: np.ndarray, ranks: np.ndarray,
               lengths: tuple[int, ...] = GameConfig().record_lengths):
    """Vectorised hunt over packed records.

    ``ranks`` gives the 0-based shot position of every cell, either one
    shared (64,) vector or one row per game.  Returns t1, t2, first_len,
    second_len arrays.
    """
    n = len(records)
    first_shot = np.empty((n, len(lengths)), dtype=np.int16)
    for s, L in enumerate(lengths):
        cells = _cell_table(L)[records[:, s]]
        if ranks.ndim == 1:
            first_shot[:, s] = ranks[cells].min(axis=1)
        else:
            first_shot[:, s] = np.take_along_axis(ranks, cells, axis=1).min(axis=1)
    order = np.argsort(first_shot, axis=1, kind="stable")[:, :2]
    times = np.take_along_axis(first_shot, order, axis=1).astype(np.int16) + 1
    lens = np.asarray(lengths, dtype=np.int8)[order]
    if (times[:, 1] > N_CELLS).any():
        raise ValueError("shot sequence ran out before a second ship was hit")
    return times[:, 0], times[:, 1], lens[:, 0], lens[:, 1]


def sample_records(aset: ArrangementSet, rng: np.random.Generator, n: int) -> np.ndarray:
    """``n`` arrangements drawn uniformly (with replacement) from the set."""
    idx = rng.integers(0, aset.count, size=n)
    return np.asarray(aset.records[idx])


def random_ranks(rng: np.random.Generator, n: int) -> np.ndarray:
    """One independent uniformly shuffled shot order per game, as ranks."""
    order = rng.permuted(np.tile(np.arange(N_CELLS, dtype=np.int16), (n, 1)), axis=1)
    ranks = np.empty_like(order)
    np.put_along_axis(ranks, order.astype(np.intp), np.arange(N_CELLS, dtype=np.int16)[None, :],
                      axis=1)
    return ranks


def lower_median(values: np.ndarray) -> int:
    """Order statistic at position ceil(n/2)."""
    counts = np.bincount(values)
    return int(np.searchsorted(np.cumsum(counts), math.ceil(len(values) / 2)))


@dataclass
class SimulationSummary:
    kind: StrategyKind
    buffered: bool
    n_games: int
    seed: int
    chunk_size: int
    t1: np.ndarray = field(repr=False)
    t2: np.ndarray = field(repr=False)
    first_len: np.ndarray = field(repr=False)
    second_len: np.ndarray = field(repr=False)

    @property
    def key(self) -> tuple[str, bool]:
        return (self.kind.value, self.buffered)

    def time_stats(self, t: np.ndarray) -> dict[str, float | int]:
        return {"mean": float(t.mean()), "median": lower_median(t), "max": int(t.max())}

    def _per_ship(self, hits: np.ndarray, length: int) -> float:
        # 3-ships are reported per single ship
        ships = 2 if length == 3 else 1
        return float(hits) / self.n_games / ships

    @property
    def p1(self) -> dict[int, float]:
        return {L: self._per_ship(np.count_nonzero(self.first_len == L), L) for L in (2, 3, 5)}

    @property
    def p12(self) -> dict[int, float]:
        return {L: self._per_ship(np.count_nonzero(self.first_len == L)
                                  + np.count_nonzero(self.second_len == L), L)
                for L in (2, 3, 5)}

    def to_dict(self) -> dict:
        return {
            "strategy": self.kind.value,
            "buffered": self.buffered,
            "n_games": self.n_games,
            "seed": self.seed,
            "chunk_size": self.chunk_size,
            "seed_scheme": SEED_SCHEME,
            "t1": self.time_stats(self.t1),
            "t2": self.time_stats(self.t2),
            "p1": {str(L): v for L, v in self.p1.items()},
            "p12": {str(L): v for L, v in self.p12.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def raw_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t1", "t2", "first_len", "second_len"])
        w.writerows(zip(self.t1.tolist(), self.t2.tolist(),
                        self.first_len.tolist(), self.second_len.tolist()))
        return buf.getvalue()

    @classmethod
    def from_files(cls, summary_json: str, raw_csv: str) -> SimulationSummary:
        meta = json.loads(summary_json)
        data = np.loadtxt(io.StringIO(raw_csv), delimiter=",", skiprows=1, dtype=np.int16, ndmin=2)
        return cls(StrategyKind.parse(meta["strategy"]), bool(meta["buffered"]),
                   int(meta["n_games"]), int(meta["seed"]), int(meta["chunk_size"]),
                   data[:, 0], data[:, 1], data[:, 2].astype(np.int8), data[:, 3].astype(np.int8))


def run_study(aset: ArrangementSet, kind: StrategyKind, n_games: int, seed: int,
              omap: OccupancyMap | None = None, threads: int = 1,
              chunk_size: int = DEFAULT_CHUNK) -> SimulationSummary:
    if n_games < 1:
        raise ValueError("n_games must be at least 1")
    if aset.records is None or aset.count == 0:
        raise ValueError("arrangement set has no stored records to sample from")
    aset.config.require_standard()
    if kind.needs_map and omap is None:
        omap = occupancy_map(aset)
    fixed = None if kind is StrategyKind.COMPLETELY_RANDOM else shot_sequence(kind, omap).ranks()
    lengths = aset.config.record_lengths

    def chunk(i: int):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(i,)))
        n = min(chunk_size, n_games - i * chunk_size)
        records = sample_records(aset, rng, n)
        ranks = fixed if fixed is not None else random_ranks(rng, n)
        return hunt_times(records, ranks, lengths)

    n_chunks = -(-n_games // chunk_size)
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        parts = list(pool.map(chunk, range(n_chunks)))
    t1, t2, f, s = (np.concatenate(col) for col in zip(*parts))
    return SimulationSummary(kind, aset.config.buffered, n_games, seed, chunk_size, t1, t2, f, s)


@dataclass(frozen=True)
class PiEstimate:
    value: float
    delta_mode: str
    n_pairs: int
    seed: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.value <= 1.0:
            raise ValueError("pi estimate outside [0, 1]")


def _delta_draws(second_len: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    out = np.zeros(len(second_len))
    for L in np.unique(second_len):
        dist = miss_distribution_exact(int(L))
        sel = second_len == L
        out[sel] = rng.choice(dist.support, size=int(sel.sum()),
                              p=[float(dist.probabilities[x]) for x in dist.support])
    return out


def estimate_pi(losing_t1: np.ndarray, winning_t2: np.ndarray, delta_mode: str | float,
                winning_second_len: np.ndarray | None = None, seed: int = 0) -> PiEstimate:
    """Fraction of paired independent draws with t1 > t2 + delta.

    ``losing_t1`` and ``winning_t2`` come from two independent pools; the
    i-th draws of each are paired.  ``delta_mode`` is a preset name from
    ``DELTA_PRESETS``, a number, or ``"sampled"`` (finishing misses drawn
    from the exact miss law of the second ship hit).
    """
    n = min(len(losing_t1), len(winning_t2))
    if n == 0:
        raise ValueError("empty draw pool")
    mode = DELTA_PRESETS.get(str(delta_mode), delta_mode)
    a = np.asarray(losing_t1[:n], dtype=float)
    b = np.asarray(winning_t2[:n], dtype=float)
    if mode == "sampled":
        if winning_second_len is None:
            raise ValueError("sampled delta needs the second-hit ship lengths")
        delta = _delta_draws(np.asarray(winning_second_len[:n]), np.random.default_rng(seed))
        label = "sampled"
    else:
        try:
            delta = float(mode)
        except (TypeError, ValueError):
            raise ValueError(f"invalid delta mode {delta_mode!r}") from None
        if delta < 0 or not math.isfinite(delta):
            raise ValueError(f"invalid delta mode {delta_mode!r}")
        label = f"{delta:g}"
    value = float(np.count_nonzero(a > b + delta)) / n
    return PiEstimate(value, label, n, seed)


def estimate_pi_from(loser: SimulationSummary, winner: SimulationSummary,
                     delta_mode: str | float, seed: int = 0) -> PiEstimate:
    if loser.key != winner.key:
        raise ValueError(f"pools differ: {loser.key} vs {winner.key}")
    if loser.seed == winner.seed:
        raise ValueError("pi needs two independent pools (distinct seeds)")
    return estimate_pi(loser.t1, winner.t2, delta_mode, winner.second_len, seed)
