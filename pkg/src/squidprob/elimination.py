"""Elimination risk for a sailor on a ship of each length.

A sailor is eliminated when their ship is sunk.  If the team loses (prob.
1/2), that happens when the ship is among the first two sunk; if the team
wins, only when exactly one ship was lost and it was theirs:

    P(sunk) = p12 / 2 + (1 - pi) * p1 / 2

with ``pi`` the chance that the winner loses no ship at all.  Command
(captain and lieutenant) survive exactly when their team wins.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from .simulation import PiEstimate, SimulationSummary

COMMAND_SURVIVAL = 0.5
LENGTHS = (2, 3, 5)


@dataclass(frozen=True)
class EliminationInputs:
    p1: float
    p12: float
    pi: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.p1 <= self.p12 <= 1.0:
            raise ValueError(f"need 0 <= p1 <= p12 <= 1, got p1={self.p1}, p12={self.p12}")
        if not 0.0 <= self.pi <= 1.0:
            raise ValueError(f"pi must be a probability, got {self.pi}")


def elimination_probability(inputs: EliminationInputs) -> float:
    return 0.5 * inputs.p12 + 0.5 * (1.0 - inputs.pi) * inputs.p1


def identical_ships(pi: float) -> float:
    """Four equal ships: p1 = 1/4, p12 = 1/2, giving (3 - pi) / 8."""
    return elimination_probability(EliminationInputs(0.25, 0.5, pi))


def always_first(pi: float) -> float:
    """A ship that is certain to be sunk first: (2 - pi) / 2."""
    return elimination_probability(EliminationInputs(1.0, 1.0, pi))


@dataclass(frozen=True)
class ReportRow:
    strategy: str
    buffered: bool
    delta: str
    pi: float
    p1: dict[int, float]
    p12: dict[int, float]
    elimination: dict[int, float]
    seed: int
    n_games: int


@dataclass
class EliminationReport:
    rows: list[ReportRow] = field(default_factory=list)
    command: float = COMMAND_SURVIVAL

    def deltas(self) -> list[str]:
        return list(dict.fromkeys(r.delta for r in self.rows))

    def lookup(self, strategy: str, buffered: bool, delta: str) -> ReportRow:
        for r in self.rows:
            if (r.strategy, r.buffered, r.delta) == (strategy, buffered, delta):
                return r
        raise KeyError((strategy, buffered, delta))

    def elimination_csv(self, delta: str) -> str:
        """Per-length elimination probabilities for one delta preset."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["placement", "strategy", "L2", "L3", "L5", "pi", "delta", "seed", "n_games"])
        for r in self.rows:
            if r.delta != delta:
                continue
            w.writerow([_placement(r.buffered), r.strategy]
                       + [f"{r.elimination[L]:.6f}" for L in LENGTHS]
                       + [f"{r.pi:.6f}", r.delta, r.seed, r.n_games])
        # captain and lieutenant go out with a losing team, whatever the ship
        lost = f"{1 - self.command:.6f}"
        w.writerow(["any", "command", lost, lost, lost, "", delta, "", ""])
        return buf.getvalue()

    def inputs_csv(self) -> str:
        """p1 / p12 / pi per strategy, one pi column per delta preset."""
        deltas = self.deltas()
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["placement", "strategy"] + [f"p1_L{L}" for L in LENGTHS]
                   + [f"p12_L{L}" for L in LENGTHS] + [f"pi_delta_{d}" for d in deltas]
                   + ["seed", "n_games"])
        seen = []
        for r in self.rows:
            key = (r.buffered, r.strategy)
            if key in seen:
                continue
            seen.append(key)
            pis = [self.lookup(r.strategy, r.buffered, d).pi for d in deltas]
            w.writerow([_placement(r.buffered), r.strategy]
                       + [f"{r.p1[L]:.6f}" for L in LENGTHS] + [f"{r.p12[L]:.6f}" for L in LENGTHS]
                       + [f"{p:.6f}" for p in pis] + [r.seed, r.n_games])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "command_survival": self.command,
            "rows": [{
                "strategy": r.strategy, "buffered": r.buffered, "delta": r.delta, "pi": r.pi,
                "p1": {str(L): r.p1[L] for L in LENGTHS},
                "p12": {str(L): r.p12[L] for L in LENGTHS},
                "elimination": {str(L): r.elimination[L] for L in LENGTHS},
                "seed": r.seed, "n_games": r.n_games,
            } for r in self.rows],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _placement(buffered: bool) -> str:
    return "buffer" if buffered else "no-buffer"


def build_report(summaries: list[SimulationSummary],
                 pi_estimates: dict[tuple[str, bool], list[PiEstimate]]) -> EliminationReport:
    """Combine hit-order estimates with pi estimates keyed by (strategy, buffered)."""
    report = EliminationReport()
    for s in summaries:
        if s.key not in pi_estimates:
            raise KeyError(f"no pi estimate for {s.key}")
        p1, p12 = s.p1, s.p12
        for est in pi_estimates[s.key]:
            elim = {L: elimination_probability(EliminationInputs(p1[L], p12[L], est.value))
                    for L in LENGTHS}
            report.rows.append(ReportRow(s.kind.value, s.buffered, est.delta_mode, est.value,
                                         p1, p12, elim, s.seed, s.n_games))
    extra = set(pi_estimates) - {s.key for s in summaries}
    if extra:
        raise KeyError(f"pi estimates without a matching summary: {sorted(extra)}")
    return report
