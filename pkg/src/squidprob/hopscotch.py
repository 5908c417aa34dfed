"""Glass bridge: who crosses first, and who survives.

With ``n`` tile pairs and a misstep probability of ``1/m`` per step, the
number of missteps is Binomial(n, 1/m).  Player ``k`` is first across when
exactly ``k - 1`` missteps happen, and survives when fewer than ``k`` do.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class BridgeConfig:
    n: int = 17
    m: int = 2

    def __post_init__(self) -> None:
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"number of steps must be a positive integer, got {self.n}")
        if int(self.m) != self.m or self.m < 1:
            raise ValueError(f"fail denominator must be a positive integer, got {self.m}")


@dataclass(frozen=True)
class BridgeResult:
    config: BridgeConfig
    first_crosser: np.ndarray  # index k-1 for player k = 1..n+1
    survival: np.ndarray
    expected_first_crosser: float

    @property
    def players(self) -> np.ndarray:
        return np.arange(1, self.config.n + 2)


def _log_pmf(cfg: BridgeConfig) -> np.ndarray:
    n, m = cfg.n, cfg.m
    # log P(x = 0) = n log(1 - 1/m); then multiply by (n - x) / (x + 1) / (m - 1)
    steps = np.empty(n + 1)
    steps[0] = n * math.log1p(-1.0 / m)
    x = np.arange(n, dtype=float)
    steps[1:] = np.log(n - x) - np.log(x + 1) - math.log(m - 1)
    return _compensated_cumsum(steps)


def _compensated_cumsum(values: np.ndarray) -> np.ndarray:
    out = np.empty_like(values)
    total = comp = 0.0
    for i, v in enumerate(values.tolist()):
        y = v - comp
        t = total + y
        comp = (t - total) - y
        total = t
        out[i] = total
    return out


def first_crosser_pmf(cfg: BridgeConfig) -> np.ndarray:
    """P(player k is first across) for k = 1..n+1 (array index k-1)."""
    if cfg.m == 1:
        pmf = np.zeros(cfg.n + 1)
        pmf[-1] = 1.0
        return pmf
    return np.exp(_log_pmf(cfg))


def _survival_curve(cfg: BridgeConfig) -> np.ndarray:
    surv = np.cumsum(first_crosser_pmf(cfg))
    surv[-1] = 1.0
    return np.minimum(surv, 1.0)


def survival_probability(cfg: BridgeConfig, k: int) -> float:
    if k < 1:
        raise ValueError(f"player numbers start at 1, got {k}")
    if k >= cfg.n + 1:
        return 1.0
    return float(_survival_curve(cfg)[k - 1])


def expected_first_crosser(cfg: BridgeConfig) -> float:
    return 1 + cfg.n / cfg.m


def bridge_table(cfg: BridgeConfig) -> BridgeResult:
    return BridgeResult(cfg, first_crosser_pmf(cfg), _survival_curve(cfg),
                        expected_first_crosser(cfg))


def bridge_csv(result: BridgeResult) -> str:
    lines = ["k,first_crosser,survival"]
    for k, f, s in zip(result.players, result.first_crosser, result.survival):
        lines.append(f"{k},{f:.12g},{s:.12g}")
    return "\n".join(lines) + "\n"


def text_chart(result: BridgeResult, width: int = 40) -> str:
    """Two-column bar chart, one line per player."""
    top = float(result.first_crosser.max()) or 1.0
    rows = []
    for k, f, s in zip(result.players, result.first_crosser, result.survival):
        bar_f = "#" * round(width * f / top)
        bar_s = "=" * round(width * s)
        rows.append(f"{k:>4} first {f:8.5f} {bar_f:<{width}} survive {s:8.5f} {bar_s}")
    return "\n".join(rows) + "\n"
