"""Command-line interface.

    mgae run   --config pipeline.cfg [--seed N] [--percentile P] [--no-mst]
               [--q-grid a:b:step] [--out DIR]
    mgae synth --spec scenario.cfg --out returns.csv [--seed N]

Exit codes: 0 success, 2 config error, 3 data error, 4 numeric divergence.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import __version__
from .config import load_pipeline_config, load_scenario
from .errors import ConfigError, DataError, DivergenceError
from .ingest import write_returns_csv
from .pipeline import export_outputs, run_pipeline
from .synthgen import generate

logger = logging.getLogger("mgae")

_RUN_EPILOG = """\
config file keys and defaults:
  [pipeline] input (required); out_dir (out); percentile (99); mst (true);
             detection_c (2.0); q_grid (-0.5:0.5:0.1)
  [autoencoder] epochs (500); learning_rate (0.1); seed (0);
             hidden_dim (128, or ceil(k/4) when k < 256);
             bottleneck_dim (32, or ceil(k/16) when k < 256)
  [period.NAME] start, end (required, ISO dates, inclusive; >= 2 periods)
"""

_SYNTH_EPILOG = """\
scenario file keys and defaults:
  [market] k (required); seed (0); start_date (2004-01-02)
  [regime.NAME] days (required); factor_loading_mean (1.0);
             factor_loading_spread (0.0); idiosyncratic_vol (1.0);
             anomalous_nodes (empty, comma-separated indices);
             anomaly_decorrelation (0.0)
"""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mgae",
        description="Anomaly detection on correlation-based market graphs.",
    )
    parser.add_argument("--version", action="version", version=f"mgae {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser(
        "run",
        help="run the full pipeline from a config file",
        epilog=_RUN_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    run_p.add_argument("--config", required=True, help="pipeline config file (INI)")
    run_p.add_argument("--seed", type=int, help="override the autoencoder seed")
    run_p.add_argument("--percentile", type=float, help="override the threshold percentile (default 99)")
    run_p.add_argument("--no-mst", action="store_true", help="skip the spanning-forest reduction (default: on)")
    run_p.add_argument("--q-grid", help="override the entropy sweep grid a:b:step (default -0.5:0.5:0.1)")
    run_p.add_argument("--out", help="override the output directory (default: out next to the config)")

    synth_p = sub.add_parser(
        "synth",
        help="generate a synthetic multi-regime return panel",
        epilog=_SYNTH_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    synth_p.add_argument("--spec", required=True, help="scenario spec file (INI)")
    synth_p.add_argument("--out", required=True, help="output CSV path")
    synth_p.add_argument("--seed", type=int, help="override the scenario seed")
    return parser


def _cmd_run(args: argparse.Namespace) -> int:
    config = load_pipeline_config(
        args.config,
        seed=args.seed,
        percentile=args.percentile,
        no_mst=args.no_mst,
        q_grid=args.q_grid,
        out_dir=args.out,
    )
    report = run_pipeline(config)
    written = export_outputs(report, config.out_dir)
    logger.info("wrote %d files to %s", len(written), config.out_dir)
    print(config.out_dir / "report.json")
    return 0


def _cmd_synth(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.spec, seed=args.seed)
    panel = generate(
        list(scenario.regimes), scenario.k, scenario.seed, start_date=scenario.start_date
    )
    write_returns_csv(panel, args.out)
    logger.info("wrote %d x %d panel to %s", panel.n_obs, panel.n_assets, args.out)
    print(args.out)
    return 0


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_synth(args)
    except ConfigError as exc:
        logger.error("config error: %s", exc)
        return 2
    except DataError as exc:
        logger.error("data error: %s", exc)
        return 3
    except DivergenceError as exc:
        logger.error("numeric divergence: %s", exc)
        return 4
    except OSError as exc:
        logger.error("i/o error: %s", exc)
        return 3


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
