"""Board geometry for the 8x8 Warships sea.

Boards are 64-bit sets with bit index ``row * 8 + col``.  The same layout
is used for plain Python ints and for ``numpy.uint64`` arrays, so every
mask helper here works on both.

    row 0:  0  1  2  3  4  5  6  7
    row 1:  8  9 10 11 12 13 14 15
    ...
    row 7: 56 57 58 59 60 61 62 63
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator

BOARD_SIZE = 8
SHIP_LENGTHS = (5, 3, 3, 2)
FULL_MASK = (1 << 64) - 1

_NOT_COL0 = FULL_MASK ^ 0x0101010101010101
_NOT_COL7 = FULL_MASK ^ 0x8080808080808080


class BoardError(ValueError):
    """Invalid cell, placement or fleet."""


@dataclass(frozen=True, order=True)
class Cell:
    row: int
    col: int

    def __post_init__(self) -> None:
        if not (0 <= self.row < BOARD_SIZE and 0 <= self.col < BOARD_SIZE):
            raise BoardError(f"cell ({self.row},{self.col}) is off the board")

    @property
    def index(self) -> int:
        return self.row * BOARD_SIZE + self.col

    @classmethod
    def from_index(cls, index: int) -> Cell:
        return cls(*divmod(int(index), BOARD_SIZE))

    def __str__(self) -> str:
        return f"{self.row},{self.col}"

    @classmethod
    def parse(cls, text: str) -> Cell:
        try:
            r, c = (int(part) for part in text.split(","))
        except ValueError:
            raise BoardError(f"bad cell text {text!r}") from None
        return cls(r, c)


class Orientation(enum.IntEnum):
    # values are the orientation bit in the packed record byte
    HORIZONTAL = 0
    VERTICAL = 1

    @property
    def letter(self) -> str:
        return "H" if self is Orientation.HORIZONTAL else "V"

    @property
    def step(self) -> tuple[int, int]:
        return (0, 1) if self is Orientation.HORIZONTAL else (1, 0)


@dataclass(frozen=True)
class ShipPlacement:
    """A 1xL ship; ``origin`` is its topmost/leftmost cell."""

    origin: Cell
    length: int
    orientation: Orientation
    board_size: int = field(default=BOARD_SIZE, compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.length < 1:
            raise BoardError(f"ship length must be positive, got {self.length}")
        dr, dc = self.orientation.step
        end_r = self.origin.row + dr * (self.length - 1)
        end_c = self.origin.col + dc * (self.length - 1)
        if end_r >= self.board_size or end_c >= self.board_size:
            raise BoardError(f"{self} runs off a {self.board_size}x{self.board_size} board")

    def sort_key(self) -> tuple[int, int, int]:
        return (self.origin.row, self.origin.col, int(self.orientation))

    def __str__(self) -> str:
        return f"{self.length}@{self.origin},{self.orientation.letter}"

    @classmethod
    def parse(cls, text: str) -> ShipPlacement:
        """Parse the ``"L@r,c,H|V"`` text form."""
        try:
            length, rest = text.split("@")
            r, c, o = rest.split(",")
            orientation = {"H": Orientation.HORIZONTAL, "V": Orientation.VERTICAL}[o]
            return cls(Cell(int(r), int(c)), int(length), orientation)
        except (ValueError, KeyError):
            raise BoardError(f"bad placement text {text!r}") from None

    def encode(self) -> int:
        """Packed byte: row | col << 3 | orientation << 6."""
        return self.origin.row | (self.origin.col << 3) | (int(self.orientation) << 6)

    @classmethod
    def decode(cls, byte: int, length: int) -> ShipPlacement:
        return cls(Cell(byte & 7, (byte >> 3) & 7), length, Orientation((byte >> 6) & 1))


def cells_of(p: ShipPlacement) -> list[Cell]:
    dr, dc = p.orientation.step
    return [Cell(p.origin.row + dr * k, p.origin.col + dc * k) for k in range(p.length)]


def mask_of(p: ShipPlacement) -> int:
    return cells_mask(cells_of(p))


def cells_mask(cells: Iterable[Cell]) -> int:
    m = 0
    for c in cells:
        m |= 1 << c.index
    return m


def mask_cells(mask: int) -> Iterator[Cell]:
    """Cells of ``mask`` in row-major order."""
    mask = int(mask)
    while mask:
        low = mask & -mask
        yield Cell.from_index(low.bit_length() - 1)
        mask ^= low


def popcount(mask: int) -> int:
    return bin(int(mask)).count("1")


def side_buffer_of(m):
    """``m`` grown by one cell up/down/left/right, clipped at the edges.

    Diagonal neighbours are not included.  Accepts an int or a numpy
    uint64 array.
    """
    if isinstance(m, int):
        return (m | ((m << 1) & _NOT_COL0) | ((m >> 1) & _NOT_COL7)
                | ((m << 8) & FULL_MASK) | (m >> 8))
    import numpy as np

    m = np.asarray(m, dtype=np.uint64)
    one, eight = np.uint64(1), np.uint64(8)
    return (m | ((m << one) & np.uint64(_NOT_COL0)) | ((m >> one) & np.uint64(_NOT_COL7))
            | (m << eight) | (m >> eight))


@lru_cache(maxsize=None)
def placements(length: int, board_size: int = BOARD_SIZE) -> tuple[ShipPlacement, ...]:
    """Every placement of a 1xL ship, sorted by (row, col, orientation)."""
    out = []
    for r in range(board_size):
        for c in range(board_size):
            for o in Orientation:
                dr, dc = o.step
                if r + dr * (length - 1) < board_size and c + dc * (length - 1) < board_size:
                    out.append(ShipPlacement(Cell(r, c), length, o, board_size))
    if length == 1:
        # a 1x1 ship has a single placement per cell
        out = [p for p in out if p.orientation is Orientation.HORIZONTAL]
    return tuple(out)


@dataclass(frozen=True)
class GameConfig:
    """Rules in force.  Only the standard 8x8 / (5,3,3,2) game is supported
    outside tests; smaller configs exist for brute-force cross-checks."""

    buffered: bool = False
    board_size: int = BOARD_SIZE
    ship_lengths: tuple[int, ...] = SHIP_LENGTHS

    def __post_init__(self) -> None:
        if not 1 <= self.board_size <= BOARD_SIZE:
            raise BoardError(f"board size must be 1..{BOARD_SIZE}")
        if not self.ship_lengths or any(not 1 <= L <= self.board_size for L in self.ship_lengths):
            raise BoardError(f"bad fleet {self.ship_lengths}")
        object.__setattr__(self, "ship_lengths", tuple(self.ship_lengths))

    @property
    def is_standard(self) -> bool:
        return self.board_size == BOARD_SIZE and self.ship_lengths == SHIP_LENGTHS

    def require_standard(self) -> None:
        if not self.is_standard:
            raise BoardError(
                f"only the {BOARD_SIZE}x{BOARD_SIZE} board with fleet {SHIP_LENGTHS} is supported")

    @property
    def record_lengths(self) -> tuple[int, ...]:
        """Ship lengths in packed-record order (longest first)."""
        return tuple(sorted(self.ship_lengths, reverse=True))

    @property
    def label(self) -> str:
        return "buffered" if self.buffered else "standard"


@dataclass(frozen=True)
class FleetArrangement:
    """Four cell-disjoint ships.  Stored as (5, 3a, 3b, 2) with the two
    length-3 ships in ascending (row, col, orientation) order, so equality
    does not depend on which 3-ship was given first."""

    ships: tuple[ShipPlacement, ...]

    def __post_init__(self) -> None:
        ships = sorted(self.ships, key=lambda s: (-s.length, s.sort_key()))
        if tuple(s.length for s in ships) != SHIP_LENGTHS:
            raise BoardError(f"fleet must have lengths {SHIP_LENGTHS}")
        seen = 0
        for s in ships:
            m = mask_of(s)
            if seen & m:
                raise BoardError(f"{s} overlaps another ship")
            seen |= m
        object.__setattr__(self, "ships", tuple(ships))

    @property
    def mask(self) -> int:
        m = 0
        for s in self.ships:
            m |= mask_of(s)
        return m

    def is_buffered(self) -> bool:
        masks = [mask_of(s) for s in self.ships]
        return all(side_buffer_of(a) & b == 0
                   for i, a in enumerate(masks) for b in masks[i + 1:])

    def ship_at(self, cell: Cell) -> int | None:
        """Slot index of the ship covering ``cell`` (or None)."""
        bit = 1 << cell.index
        for slot, s in enumerate(self.ships):
            if mask_of(s) & bit:
                return slot
        return None

    def encode(self) -> bytes:
        return bytes(s.encode() for s in self.ships)

    @classmethod
    def decode(cls, record: bytes | Iterable[int]) -> FleetArrangement:
        record = bytes(bytearray(record))
        if len(record) != len(SHIP_LENGTHS):
            raise BoardError(f"record must be {len(SHIP_LENGTHS)} bytes")
        return cls(tuple(ShipPlacement.decode(b, L) for b, L in zip(record, SHIP_LENGTHS)))

    def __str__(self) -> str:
        return " ".join(str(s) for s in self.ships)
