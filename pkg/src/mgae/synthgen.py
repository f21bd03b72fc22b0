"""Deterministic synthetic market generator with known ground-truth anomalies.

One-factor Gaussian model: r[t, i] = beta_i * f_t + eps[t, i], with the
factor f_t standard normal.  Regimes are concatenated over consecutive
weekdays; anomalous nodes have their factor loading scaled by
(1 - anomaly_decorrelation), which pulls them away from the common factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date as _date
from datetime import timedelta

import numpy as np

from .errors import ConfigError
from .ingest import ReturnsMatrix

# cosmetic scale so generated values look like daily simple returns
RETURN_SCALE = 0.01


@dataclass(frozen=True)
class RegimeSpec:
    """Generation parameters for one contiguous market regime."""

    name: str
    days: int
    factor_loading_mean: float = 1.0
    factor_loading_spread: float = 0.0
    idiosyncratic_vol: float = 1.0
    anomalous_nodes: tuple[int, ...] = ()
    anomaly_decorrelation: float = 0.0

    def __post_init__(self) -> None:
        if self.days < 2:
            raise ConfigError(f"regime {self.name!r}: days must be >= 2, got {self.days}")
        if self.factor_loading_spread < 0.0:
            raise ConfigError(f"regime {self.name!r}: loading spread must be nonnegative")
        if self.idiosyncratic_vol <= 0.0:
            raise ConfigError(f"regime {self.name!r}: idiosyncratic vol must be positive")
        if not 0.0 <= self.anomaly_decorrelation <= 1.0:
            raise ConfigError(f"regime {self.name!r}: decorrelation must lie in [0, 1]")


def _weekdays(start: str, count: int) -> list[str]:
    day = _date.fromisoformat(start)
    out: list[str] = []
    while len(out) < count:
        if day.weekday() < 5:
            out.append(day.isoformat())
        day += timedelta(days=1)
    return out


def default_asset_names(k: int) -> tuple[str, ...]:
    return tuple(f"A{i:03d}" for i in range(k))


def generate(
    specs: list[RegimeSpec],
    k: int,
    seed: int,
    start_date: str = "2004-01-02",
) -> ReturnsMatrix:
    """Concatenate the regimes into one panel over consecutive weekdays.

    Deterministic per (specs, k, seed); the result passes every ingest
    invariant (strictly increasing dates, no gaps).
    """
    if k < 4:
        raise ConfigError(f"need at least 4 assets, got {k}")
    if not specs:
        raise ConfigError("at least one regime spec required")
    for spec in specs:
        bad = [i for i in spec.anomalous_nodes if not 0 <= i < k]
        if bad:
            raise ConfigError(f"regime {spec.name!r}: anomalous nodes {bad} outside 0..{k - 1}")

    rng = np.random.default_rng(seed)
    blocks: list[np.ndarray] = []
    for spec in specs:
        beta = spec.factor_loading_mean + spec.factor_loading_spread * rng.standard_normal(k)
        if spec.anomalous_nodes:
            beta = beta.copy()
            beta[list(spec.anomalous_nodes)] *= 1.0 - spec.anomaly_decorrelation
        factor = rng.standard_normal(spec.days)
        eps = spec.idiosyncratic_vol * rng.standard_normal((spec.days, k))
        blocks.append(RETURN_SCALE * (factor[:, np.newaxis] * beta[np.newaxis, :] + eps))

    values = np.concatenate(blocks, axis=0)
    dates = _weekdays(start_date, values.shape[0])
    return ReturnsMatrix(
        dates=tuple(dates),
        assets=default_asset_names(k),
        values=values,
    )


def regime_periods(specs: list[RegimeSpec], start_date: str = "2004-01-02") -> list[tuple[str, str, str]]:
    """(name, first date, last date) per regime, matching :func:`generate`."""
    total = sum(spec.days for spec in specs)
    days = _weekdays(start_date, total)
    out: list[tuple[str, str, str]] = []
    offset = 0
    for spec in specs:
        out.append((spec.name, days[offset], days[offset + spec.days - 1]))
        offset += spec.days
    return out
