"""INI config parsing for the pipeline and the synthetic-scenario generator.

Pipeline config layout (defaults in parentheses):

    [pipeline]
    input = returns.csv          # required: input CSV path
    out_dir = out                # output directory ("out")
    percentile = 99              # winner-take-all percentile (99)
    mst = true                   # reduce to spanning forest (true)
    detection_c = 2.0            # threshold = mean + c*std (2.0)
    q_grid = -0.5:0.5:0.1        # entropy sweep a:b:step (-0.5:0.5:0.1)

    [autoencoder]                # section optional
    epochs = 500                 # (500)
    learning_rate = 0.1          # (0.1)
    seed = 0                     # (0)
    hidden_dim = ...             # (128, or ceil(k/4) when k < 256)
    bottleneck_dim = ...         # (32, or ceil(k/16) when k < 256)

    [period.NAME]                # one section per analysis period (>= 2)
    start = 2004-10-27           # inclusive ISO date
    end = 2007-06-27             # inclusive ISO date

Scenario spec layout for `synth`:

    [market]
    k = 40                       # assets (required)
    seed = 7                     # (0)
    start_date = 2004-01-02      # first weekday ("2004-01-02")

    [regime.NAME]                # one section per regime, in order
    days = 450                   # required
    factor_loading_mean = 1.0    # (1.0)
    factor_loading_spread = 0.0  # (0.0)
    idiosyncratic_vol = 1.0      # (1.0)
    anomalous_nodes =            # comma-separated node indices (empty)
    anomaly_decorrelation = 0.0  # (0.0)
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path

from .autoencoder import TrainConfig
from .errors import ConfigError
from .ingest import PeriodSpec
from .synthgen import RegimeSpec

DEFAULT_Q_GRID_TEXT = "-0.5:0.5:0.1"


def parse_q_grid(text: str) -> tuple[float, ...]:
    """Parse an inclusive `a:b:step` grid; q = 1 is rejected (S_q singularity)."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"q grid must be 'a:b:step', got {text!r}")
    try:
        a, b, step = (float(p) for p in parts)
    except ValueError:
        raise ConfigError(f"q grid has non-numeric parts: {text!r}") from None
    if step <= 0.0:
        raise ConfigError(f"q grid step must be positive, got {step}")
    if b < a:
        raise ConfigError(f"q grid end {b} below start {a}")
    count = int((b - a) / step + 1e-9) + 1
    grid = tuple(round(a + i * step, 12) for i in range(count))
    if len(grid) < 2:
        raise ConfigError(f"q grid {text!r} has fewer than 2 points")
    for q in grid:
        if abs(q - 1.0) <= 1e-9:
            raise ConfigError("q grid must exclude 1 (entropy singularity)")
    return grid


@dataclass(frozen=True)
class PipelineConfig:
    """Everything one `run` invocation needs, with defaults resolved."""

    input_path: Path
    periods: tuple[PeriodSpec, ...]
    out_dir: Path = Path("out")
    percentile: float = 99.0
    mst: bool = True
    train: TrainConfig = field(default_factory=TrainConfig)
    q_grid: tuple[float, ...] = field(default_factory=lambda: parse_q_grid(DEFAULT_Q_GRID_TEXT))
    detection_c: float = 2.0

    def __post_init__(self) -> None:
        if not 0.0 < self.percentile < 100.0:
            raise ConfigError(f"percentile must lie in (0, 100), got {self.percentile}")
        if len(self.periods) < 2:
            raise ConfigError(f"need at least 2 periods for cross-period tests, got {len(self.periods)}")
        names = [p.name for p in self.periods]
        if len(set(names)) != len(names):
            raise ConfigError(f"duplicate period names: {names}")
        if len(self.q_grid) < 2:
            raise ConfigError("q grid needs at least 2 points")
        for q in self.q_grid:
            if abs(q - 1.0) <= 1e-9:
                raise ConfigError("q grid must exclude 1 (entropy singularity)")


def _read_ini(path: Path) -> configparser.ConfigParser:
    parser = configparser.ConfigParser()
    try:
        with path.open(encoding="utf-8") as fh:
            parser.read_file(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return parser


def _get_typed(section: configparser.SectionProxy, key: str, cast, default):
    if key not in section:
        return default
    raw = section.get(key)
    try:
        return cast(raw)
    except ValueError:
        raise ConfigError(
            f"[{section.name}] {key} = {raw!r}: expected {cast.__name__}"
        ) from None


_TRUTHY = {"1": True, "true": True, "yes": True, "on": True,
           "0": False, "false": False, "no": False, "off": False}


def _get_bool(section: configparser.SectionProxy, key: str, default: bool) -> bool:
    if key not in section:
        return default
    raw = section.get(key).strip().lower()
    if raw not in _TRUTHY:
        raise ConfigError(f"[{section.name}] {key} = {raw!r}: expected a boolean")
    return _TRUTHY[raw]


def load_pipeline_config(
    path: str | Path,
    seed: int | None = None,
    percentile: float | None = None,
    no_mst: bool = False,
    q_grid: str | None = None,
    out_dir: str | None = None,
) -> PipelineConfig:
    """Load an INI pipeline config; keyword arguments are CLI overrides."""
    path = Path(path)
    parser = _read_ini(path)
    if "pipeline" not in parser:
        raise ConfigError(f"{path}: missing [pipeline] section")
    main = parser["pipeline"]
    if "input" not in main:
        raise ConfigError(f"{path}: [pipeline] input is required")

    periods: list[PeriodSpec] = []
    for name in parser.sections():
        if not name.startswith("period."):
            continue
        section = parser[name]
        label = name[len("period."):]
        for key in ("start", "end"):
            if key not in section:
                raise ConfigError(f"{path}: [{name}] missing {key}")
        periods.append(PeriodSpec(name=label, start=section["start"], end=section["end"]))
    if not periods:
        raise ConfigError(f"{path}: no [period.NAME] sections")

    ae = parser["autoencoder"] if "autoencoder" in parser else None
    train = TrainConfig(
        epochs=_get_typed(ae, "epochs", int, 500) if ae else 500,
        learning_rate=_get_typed(ae, "learning_rate", float, 0.1) if ae else 0.1,
        seed=seed if seed is not None else (_get_typed(ae, "seed", int, 0) if ae else 0),
        hidden_dim=_get_typed(ae, "hidden_dim", int, None) if ae else None,
        bottleneck_dim=_get_typed(ae, "bottleneck_dim", int, None) if ae else None,
    )

    grid_text = q_grid if q_grid is not None else main.get("q_grid", DEFAULT_Q_GRID_TEXT)
    # input/out paths are resolved relative to the config file location
    base = path.parent
    input_path = base / main["input"]
    out = Path(out_dir) if out_dir is not None else base / main.get("out_dir", "out")
    return PipelineConfig(
        input_path=input_path,
        periods=tuple(periods),
        out_dir=out,
        percentile=percentile if percentile is not None else _get_typed(main, "percentile", float, 99.0),
        mst=False if no_mst else _get_bool(main, "mst", True),
        train=train,
        q_grid=parse_q_grid(grid_text),
        detection_c=_get_typed(main, "detection_c", float, 2.0),
    )


@dataclass(frozen=True)
class ScenarioConfig:
    """Synthetic-market scenario: regimes plus global generation settings."""

    regimes: tuple[RegimeSpec, ...]
    k: int
    seed: int
    start_date: str


def _parse_node_list(raw: str, context: str) -> tuple[int, ...]:
    text = raw.strip()
    if not text:
        return ()
    try:
        return tuple(int(tok.strip()) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise ConfigError(f"{context}: anomalous_nodes must be comma-separated integers") from None


def load_scenario(path: str | Path, seed: int | None = None) -> ScenarioConfig:
    """Load a scenario spec INI for the `synth` subcommand."""
    path = Path(path)
    parser = _read_ini(path)
    if "market" not in parser:
        raise ConfigError(f"{path}: missing [market] section")
    market = parser["market"]
    if "k" not in market:
        raise ConfigError(f"{path}: [market] k is required")
    k = _get_typed(market, "k", int, None)

    regimes: list[RegimeSpec] = []
    for name in parser.sections():
        if not name.startswith("regime."):
            continue
        section = parser[name]
        label = name[len("regime."):]
        if "days" not in section:
            raise ConfigError(f"{path}: [{name}] missing days")
        regimes.append(
            RegimeSpec(
                name=label,
                days=_get_typed(section, "days", int, None),
                factor_loading_mean=_get_typed(section, "factor_loading_mean", float, 1.0),
                factor_loading_spread=_get_typed(section, "factor_loading_spread", float, 0.0),
                idiosyncratic_vol=_get_typed(section, "idiosyncratic_vol", float, 1.0),
                anomalous_nodes=_parse_node_list(section.get("anomalous_nodes", ""), f"[{name}]"),
                anomaly_decorrelation=_get_typed(section, "anomaly_decorrelation", float, 0.0),
            )
        )
    if not regimes:
        raise ConfigError(f"{path}: no [regime.NAME] sections")

    return ScenarioConfig(
        regimes=tuple(regimes),
        k=k,
        seed=seed if seed is not None else _get_typed(market, "seed", int, 0),
        start_date=market.get("start_date", "2004-01-02"),
    )
