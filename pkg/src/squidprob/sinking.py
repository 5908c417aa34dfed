"""Finishing off a ship once it has been hit.

The policy probes the four orthogonal neighbours of the first hit in a
random order until a second hit fixes the ship's line, then keeps going
in the direction first-hit -> second-hit, and on a miss (or the board
edge) turns round and works from the other end.  Only misses are counted:
a hit earns another shot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Iterable, Iterator, Sequence

import numpy as np

from .board import BOARD_SIZE, Cell, Orientation, ShipPlacement, cells_of

Coord = tuple[int, int]
DIRECTIONS: tuple[Coord, ...] = ((-1, 0), (0, -1), (0, 1), (1, 0))
SUPPORTED_LENGTHS = (2, 3, 5)


@dataclass(frozen=True)
class MissDistribution:
    length: int
    probabilities: dict[int, Fraction]

    def __post_init__(self) -> None:
        if sum(self.probabilities.values()) != 1:
            raise ValueError("miss distribution does not sum to one")

    @property
    def mean(self) -> Fraction:
        return sum((x * p for x, p in self.probabilities.items()), Fraction(0))

    @property
    def support(self) -> list[int]:
        return sorted(self.probabilities)

    def as_vector(self) -> np.ndarray:
        top = max(self.probabilities)
        v = np.zeros(top + 1)
        for x, p in self.probabilities.items():
            v[x] = float(p)
        return v


def mid_sea_ship(length: int) -> ShipPlacement:
    """A horizontal ship with a free cell beyond each end and on each side."""
    if not 1 <= length <= BOARD_SIZE - 2:
        raise ValueError(f"no mid-sea placement for length {length}")
    return ShipPlacement(Cell(BOARD_SIZE // 2 - 1, 1), length, Orientation.HORIZONTAL)


def _on_board(c: Coord) -> bool:
    return 0 <= c[0] < BOARD_SIZE and 0 <= c[1] < BOARD_SIZE


def _step(c: Coord, d: Coord, k: int = 1) -> Coord:
    return (c[0] + k * d[0], c[1] + k * d[1])


class FinishingPolicy:
    """Neighbour probe, line lock, extend, reverse.

    Deterministic given the first hit and the neighbour probe order; the
    randomness lives entirely in those two inputs.
    """

    def probe_directions(self, first: Coord, shot: Iterable[Coord] = ()) -> list[Coord]:
        shot = set(shot)
        return [d for d in DIRECTIONS
                if _on_board(_step(first, d)) and _step(first, d) not in shot]

    def play(self, ship: Sequence[Coord], first: Coord, probe_order: Sequence[Coord],
             others: Iterable[Coord] = ()) -> int:
        """Number of misses until every cell of ``ship`` has been hit.

        ``others`` are cells of neighbouring ships; hitting one of them is
        a hit (no miss) that the policy cannot tell apart from the target.
        """
        target = set(ship)
        occupied = target | set(others)
        if first not in target:
            raise ValueError("first hit must lie on the ship")
        shot = {first}
        hits = [first]
        misses = 0

        def fire(c: Coord) -> bool:
            nonlocal misses
            shot.add(c)
            if c in occupied:
                hits.append(c)
                return True
            misses += 1
            return False

        def sunk() -> bool:
            return target <= shot

        for d in probe_order:
            if sunk():
                break
            c = _step(first, d)
            if _on_board(c) and c not in shot and fire(c):
                break

        if not sunk() and len(hits) > 1:
            line = (hits[1][0] - first[0], hits[1][1] - first[1])
            for d in (line, (-line[0], -line[1])):
                cur = first
                while _step(cur, d) in shot and _step(cur, d) in occupied:
                    cur = _step(cur, d)
                while not sunk():
                    nxt = _step(cur, d)
                    if not _on_board(nxt) or nxt in shot or not fire(nxt):
                        break
                    cur = nxt
                if sunk():
                    break

        # only reachable when a neighbouring ship confused the line logic
        while not sunk():
            frontier = {_step(h, d) for h in hits for d in DIRECTIONS}
            frontier = [c for c in frontier if _on_board(c) and c not in shot]
            if not frontier:
                raise RuntimeError("finishing policy ran out of cells")
            fire(min(frontier, key=lambda c: (abs(c[0] - first[0]) + abs(c[1] - first[1]), c)))
        return misses

    def branches(self, ship: Sequence[Coord], others: Iterable[Coord] = ()
                 ) -> Iterator[tuple[int, tuple[Coord, ...], int]]:
        """Every (first-hit index, probe order, misses) combination."""
        others = tuple(others)
        for i, first in enumerate(ship):
            for order in permutations(self.probe_directions(first)):
                yield i, order, self.play(ship, first, order, others)


def _ship_coords(ship: ShipPlacement) -> list[Coord]:
    return [(c.row, c.col) for c in cells_of(ship)]


def miss_distribution_exact(length: int, policy: FinishingPolicy | None = None
                            ) -> MissDistribution:
    """Exact miss-count law for an isolated ship away from the edges.

    The first hit is uniform over the ship's cells and every neighbour
    probe order is equally likely.
    """
    if length not in SUPPORTED_LENGTHS:
        raise ValueError(f"unsupported ship length {length}")
    policy = policy or FinishingPolicy()
    ship = _ship_coords(mid_sea_ship(length))
    dist: dict[int, Fraction] = {}
    for i, order, misses in policy.branches(ship):
        n_orders = math.factorial(len(policy.probe_directions(ship[i])))
        dist[misses] = dist.get(misses, Fraction(0)) + Fraction(1, length * n_orders)
    return MissDistribution(length, dict(sorted(dist.items())))


def sample_misses(length: int, policy: FinishingPolicy | None = None,
                  seed: int | np.random.Generator | None = None, size: int | None = None,
                  ship: ShipPlacement | None = None, others: Iterable[Cell] = ()):
    """Draw miss counts by running the policy on random inputs.

    Defaults to an isolated mid-sea ship; pass ``ship``/``others`` for edge
    or crowded positions.  Returns an int, or an array when ``size`` is set.
    """
    if length not in SUPPORTED_LENGTHS:
        raise ValueError(f"unsupported ship length {length}")
    policy = policy or FinishingPolicy()
    ship = ship or mid_sea_ship(length)
    if ship.length != length:
        raise ValueError("ship length does not match")
    coords = _ship_coords(ship)
    other_coords = [(c.row, c.col) for c in others]
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)

    # outcome of every policy input; sampling picks an input uniformly
    tables = []
    for first in coords:
        dirs = policy.probe_directions(first)
        tables.append(np.array([policy.play(coords, first, order, other_coords)
                                for order in permutations(dirs)], dtype=np.int64))
    n = 1 if size is None else size
    which = rng.integers(0, length, size=n)
    out = np.empty(n, dtype=np.int64)
    for i, table in enumerate(tables):
        sel = which == i
        out[sel] = table[rng.integers(0, len(table), size=int(sel.sum()))]
    return int(out[0]) if size is None else out
