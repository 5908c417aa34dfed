"""Shot orderings for the search phase (before any ship is hit)."""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass

import numpy as np

from .board import BOARD_SIZE, Cell
from .enumeration import OccupancyMap

N_CELLS = BOARD_SIZE * BOARD_SIZE
PRIMARY_RESIDUE = 4
SECONDARY_RESIDUE = 1


class StrategyKind(enum.Enum):
    COMPLETELY_RANDOM = "completely-random"
    REGULAR = "regular"
    DIAGONAL = "diagonal"
    SMART_DIAGONAL = "smart-diagonal"

    @property
    def needs_map(self) -> bool:
        return self is not StrategyKind.COMPLETELY_RANDOM

    @property
    def title(self) -> str:
        return self.value.replace("-", " ").title()

    @classmethod
    def parse(cls, name: str) -> StrategyKind:
        key = name.strip().lower().replace("_", "-").replace(" ", "-")
        for kind in cls:
            if kind.value == key:
                return kind
        raise ValueError(f"unknown strategy {name!r}; choose from "
                         + ", ".join(k.value for k in cls))


@dataclass(frozen=True)
class ShotSequence:
    """Ordered, duplicate-free list of cell indices (row * 8 + col)."""

    indices: tuple[int, ...]

    def __post_init__(self) -> None:
        idx = tuple(int(i) for i in self.indices)
        if len(set(idx)) != len(idx):
            raise ValueError("shot sequence repeats a cell")
        if any(not 0 <= i < N_CELLS for i in idx):
            raise ValueError("shot sequence leaves the board")
        object.__setattr__(self, "indices", idx)

    def __len__(self) -> int:
        return len(self.indices)

    @property
    def cells(self) -> list[Cell]:
        return [Cell.from_index(i) for i in self.indices]

    def ranks(self) -> np.ndarray:
        """Shot position (0-based) of every cell; unshot cells get N_CELLS."""
        r = np.full(N_CELLS, N_CELLS, dtype=np.int16)
        r[list(self.indices)] = np.arange(len(self.indices), dtype=np.int16)
        return r

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["shot", "cell"])
        w.writerows((k + 1, str(c)) for k, c in enumerate(self.cells))
        return buf.getvalue()


def diagonal_pattern() -> tuple[list[Cell], list[Cell]]:
    """Anti-diagonal stripes with (row + col) % 5 == 4, then == 1.

    Every 1x5 run covers all five residues, so the first set (12 cells)
    meets every 5-ship.  Any three consecutive residues contain 4 or 1, so
    both sets together (25 cells) meet every 3-ship.
    """
    cells = [Cell(r, c) for r in range(BOARD_SIZE) for c in range(BOARD_SIZE)]
    primary = [c for c in cells if (c.row + c.col) % 5 == PRIMARY_RESIDUE]
    secondary = [c for c in cells if (c.row + c.col) % 5 == SECONDARY_RESIDUE]
    return primary, secondary


def by_probability(cells: list[Cell], omap: OccupancyMap) -> list[Cell]:
    # stable sort on exact counts; ties stay in row-major order
    ordered = sorted(cells, key=lambda c: (c.row, c.col))
    return sorted(ordered, key=lambda c: -int(omap.counts[c.row, c.col]))


def random_permutation(rng: np.random.Generator, size: int = N_CELLS) -> np.ndarray:
    # Generator.permutation is a Fisher-Yates shuffle driven by the
    # generator's bit stream (PCG64 for default_rng)
    return rng.permutation(size)


def shot_sequence(kind: StrategyKind, omap: OccupancyMap | None = None,
                  seed: int | None = None) -> ShotSequence:
    if kind.needs_map and omap is None:
        raise ValueError(f"{kind.value} needs an occupancy map")
    if kind is StrategyKind.COMPLETELY_RANDOM:
        if seed is None:
            raise ValueError("completely-random needs a seed")
        return ShotSequence(tuple(random_permutation(np.random.default_rng(seed))))

    everything = [Cell(r, c) for r in range(BOARD_SIZE) for c in range(BOARD_SIZE)]
    if kind is StrategyKind.REGULAR:
        order = by_probability(everything, omap)
    else:
        primary, secondary = diagonal_pattern()
        if kind is StrategyKind.SMART_DIAGONAL:
            primary, secondary = by_probability(primary, omap), by_probability(secondary, omap)
        taken = set(primary) | set(secondary)
        rest = by_probability([c for c in everything if c not in taken], omap)
        order = primary + secondary + rest
    return ShotSequence(tuple(c.index for c in order))
