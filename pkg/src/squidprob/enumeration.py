"""Exhaustive enumeration of legal fleet arrangements.

Arrangements are kept as packed records, one byte per ship in
``GameConfig.record_lengths`` order (5, 3a, 3b, 2 for the standard fleet),
each byte being ``row | col << 3 | orientation << 6``.  Ships of equal
length are stored once, in ascending placement order, so every record is a
distinct arrangement.  ``labelled_count`` gives the count when same-length
ships are told apart (the figure usually quoted for this game).
"""

from __future__ import annotations

import math
import os
import struct
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterator

import numpy as np

from .board import (
    BOARD_SIZE,
    Cell,
    FleetArrangement,
    GameConfig,
    ShipPlacement,
    cells_of,
    mask_of,
    placements,
    side_buffer_of,
)

MAGIC = b"SQWS"
VERSION = 1
HEADER = struct.Struct("<4sBBQ")

BlockSink = Callable[[np.ndarray], None]


class EnumerationError(RuntimeError):
    def __init__(self, message: str, visited: int):
        super().__init__(f"{message} (after {visited} arrangements)")
        self.visited = visited


class CacheError(Exception):
    """Base class for unreadable or mismatched cache files."""


class CorruptHeaderError(CacheError):
    pass


class VersionMismatchError(CacheError):
    pass


class ConfigMismatchError(CacheError):
    pass


class TruncatedCacheError(CacheError):
    pass


def count_single_ship_placements(length: int) -> int:
    if length not in (2, 3, 5):
        raise ValueError(f"unsupported ship length {length}")
    n = len(placements(length))
    assert n == BOARD_SIZE * (BOARD_SIZE + 1 - length) * 2
    return n


@dataclass
class ArrangementSet:
    config: GameConfig
    records: np.ndarray | None
    count: int
    source: Path | None = None

    @property
    def labelled_count(self) -> int:
        """Count with same-length ships distinguished."""
        return self.count * math.prod(
            math.factorial(k) for k in Counter(self.config.ship_lengths).values())

    def __len__(self) -> int:
        return self.count

    def iter_blocks(self, block_size: int = 1 << 20) -> Iterator[np.ndarray]:
        if self.records is None:
            raise ValueError("arrangement set was enumerated without storage")
        for start in range(0, self.count, block_size):
            yield np.asarray(self.records[start:start + block_size])

    def __iter__(self) -> Iterator[FleetArrangement]:
        self.config.require_standard()
        for block in self.iter_blocks():
            for rec in block:
                yield FleetArrangement.decode(rec.tobytes())

    def __getitem__(self, i: int) -> FleetArrangement:
        self.config.require_standard()
        return FleetArrangement.decode(np.asarray(self.records[i]).tobytes())


def _enumeration_order(record_lengths: tuple[int, ...]) -> list[int]:
    """Slot visit order: singletons first, one equal-length pair last."""
    slots = list(range(len(record_lengths)))
    counts = Counter(record_lengths)
    pair = [L for L in record_lengths if counts[L] >= 2]
    if not pair:
        return slots
    L = pair[-1]
    tail = [s for s in slots if record_lengths[s] == L][-2:]
    return [s for s in slots if s not in tail] + tail


def enumerate_arrangements(config: GameConfig, sink: BlockSink | None = None,
                           keep: bool = True) -> ArrangementSet:
    """Visit every distinct legal arrangement exactly once.

    Placements of each slot are chosen in nested loops over sorted
    placement indices; the last two slots are resolved together with a
    precomputed compatibility matrix.  ``sink`` receives blocks of packed
    records in visit order.
    """
    lengths = config.record_lengths
    n = len(lengths)
    order = _enumeration_order(lengths)

    codes, masks, grown = {}, {}, {}
    for L in set(lengths):
        ps = placements(L, config.board_size)
        codes[L] = np.array([p.encode() for p in ps], dtype=np.uint8)
        masks[L] = np.array([mask_of(p) for p in ps], dtype=np.uint64)
        grown[L] = side_buffer_of(masks[L]) if config.buffered else masks[L]

    blocks: list[np.ndarray] = []
    visited = 0

    def emit(block: np.ndarray) -> None:
        nonlocal visited
        if not len(block):
            return
        if sink is not None:
            try:
                sink(block)
            except Exception as exc:
                raise EnumerationError(f"consumer failed: {exc!r}", visited) from exc
        if keep:
            blocks.append(block)
        visited += len(block)

    if n == 1:
        (L,) = lengths
        emit(codes[L][:, None].copy())
        return _finish(config, blocks, visited, keep)

    x, y = order[-2], order[-1]
    Lx, Ly = lengths[x], lengths[y]
    compat = (masks[Lx][:, None] & grown[Ly][None, :]) == 0
    if Lx == Ly:
        compat = np.triu(compat, 1)

    prefix = order[:-2]
    chosen = [0] * n

    def last_same(depth: int, L: int) -> int:
        for s in reversed(prefix[:depth]):
            if lengths[s] == L:
                return chosen[s]
        return -1

    def recurse(depth: int, blocked: int) -> None:
        if depth < len(prefix):
            slot = prefix[depth]
            L = lengths[slot]
            lo = last_same(depth, L) + 1
            for i in range(lo, len(masks[L])):
                if int(masks[L][i]) & blocked:
                    continue
                chosen[slot] = i
                recurse(depth + 1, blocked | int(grown[L][i]))
            return
        b = np.uint64(blocked)
        ok_x = (masks[Lx] & b) == 0
        ok_y = (masks[Ly] & b) == 0
        ok_x[: last_same(depth, Lx) + 1] = False
        ok_y[: last_same(depth, Ly) + 1] = False
        ix, iy = np.flatnonzero(ok_x), np.flatnonzero(ok_y)
        a, c = np.nonzero(compat[np.ix_(ix, iy)])
        if not len(a):
            return
        block = np.empty((len(a), n), dtype=np.uint8)
        for s in prefix:
            block[:, s] = codes[lengths[s]][chosen[s]]
        block[:, x] = codes[Lx][ix[a]]
        block[:, y] = codes[Ly][iy[c]]
        emit(block)

    recurse(0, 0)
    return _finish(config, blocks, visited, keep)


def _finish(config: GameConfig, blocks: list[np.ndarray], visited: int,
            keep: bool) -> ArrangementSet:
    records = None
    if keep:
        records = (np.concatenate(blocks) if blocks
                   else np.empty((0, len(config.ship_lengths)), dtype=np.uint8))
    return ArrangementSet(config, records, visited)


# -- occupancy ---------------------------------------------------------------

@dataclass(frozen=True)
class OccupancyMap:
    """Per-cell ship counts over an arrangement set.

    ``scope`` is ``"all"`` or a ship length; for a length shared by several
    ships (the two 3-ships) the ships are reported jointly.
    """

    counts: np.ndarray
    total: int
    scope: str | int = "all"

    @property
    def grid(self) -> np.ndarray:
        return self.counts / self.total

    def probability(self, cell: Cell) -> float:
        return float(self.counts[cell.row, cell.col]) / self.total


def _code_cells(code: int, length: int) -> list[Cell]:
    return cells_of(ShipPlacement.decode(code, length))


def occupancy_map(aset: ArrangementSet, scope: str | int = "all",
                  block_size: int = 1 << 22) -> OccupancyMap:
    if aset.count == 0:
        raise ValueError("occupancy of an empty arrangement set")
    lengths = aset.config.record_lengths
    if scope == "all":
        slots = list(range(len(lengths)))
    else:
        scope = int(scope)
        slots = [s for s, L in enumerate(lengths) if L == scope]
        if not slots:
            raise ValueError(f"no ship of length {scope} in fleet {lengths}")
    tallies = {s: np.zeros(256, dtype=np.int64) for s in slots}
    for block in aset.iter_blocks(block_size):
        for s in slots:
            tallies[s] += np.bincount(block[:, s], minlength=256)
    counts = np.zeros((BOARD_SIZE, BOARD_SIZE), dtype=np.int64)
    for s in slots:
        for code in np.flatnonzero(tallies[s]):
            for cell in _code_cells(int(code), lengths[s]):
                counts[cell.row, cell.col] += tallies[s][code]
    return OccupancyMap(counts, aset.count, scope)


def occupancy_csv(omap: OccupancyMap) -> str:
    lines = [",".join(f"c{c}" for c in range(BOARD_SIZE))]
    for row in omap.grid:
        lines.append(",".join(f"{v:.12g}" for v in row))
    return "\n".join(lines) + "\n"


def occupancy_pgm(omap: OccupancyMap) -> bytes:
    """Plain (P2) PGM with the map maximum drawn at 255."""
    grid = omap.counts
    top = int(grid.max()) or 1
    pix = (grid * 255 + top // 2) // top
    lines = ["P2", f"{BOARD_SIZE} {BOARD_SIZE}", "255"]
    lines += [" ".join(str(int(v)) for v in row) for row in pix]
    return ("\n".join(lines) + "\n").encode("ascii")


# -- cache file --------------------------------------------------------------

def save_cache(aset: ArrangementSet, path: str | os.PathLike) -> Path:
    """Write ``SQWS`` | u8 version | u8 buffered | u64 count | records."""
    aset.config.require_standard()
    path = Path(path)
    with open(path, "wb") as fh:
        fh.write(HEADER.pack(MAGIC, VERSION, int(aset.config.buffered), aset.count))
        for block in aset.iter_blocks():
            fh.write(np.ascontiguousarray(block, dtype=np.uint8).tobytes())
    return path


def read_header(path: str | os.PathLike) -> tuple[int, bool, int]:
    with open(path, "rb") as fh:
        raw = fh.read(HEADER.size)
    if len(raw) < HEADER.size:
        raise CorruptHeaderError(f"{path}: header too short")
    magic, version, buffered, count = HEADER.unpack(raw)
    if magic != MAGIC:
        raise CorruptHeaderError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise VersionMismatchError(f"{path}: cache version {version}, expected {VERSION}")
    if buffered not in (0, 1):
        raise CorruptHeaderError(f"{path}: bad buffered flag {buffered}")
    return version, bool(buffered), count


def load_cache(path: str | os.PathLike, config: GameConfig | None = None,
               in_memory: bool = False) -> ArrangementSet:
    """Open a cache file as a memory-mapped view (or a loaded copy)."""
    path = Path(path)
    _, buffered, count = read_header(path)
    if config is not None and config.buffered != buffered:
        raise ConfigMismatchError(
            f"{path}: cache holds {'buffered' if buffered else 'standard'} arrangements, "
            f"requested {config.label}")
    width = len(GameConfig().ship_lengths)
    body = path.stat().st_size - HEADER.size
    if body < count * width:
        raise TruncatedCacheError(f"{path}: expected {count * width} record bytes, found {body}")
    if body > count * width:
        raise CorruptHeaderError(f"{path}: {body - count * width} trailing bytes after records")
    records = np.memmap(path, dtype=np.uint8, mode="r", offset=HEADER.size,
                        shape=(count, width)) if count else np.empty((0, width), np.uint8)
    if in_memory:
        records = np.array(records)
    return ArrangementSet(GameConfig(buffered=buffered), records, count, source=path)
