"""Market-graph anomaly detection: correlation networks, autoencoder
reconstruction errors, and nonextensive entropy scoring."""

__version__ = "0.1.0"

from .anomaly import (  # noqa: F401
    AnomalySet,
    ScoreDistribution,
    detect,
    node_scores,
    score_distribution,
    shannon_entropy,
    sweep_q,
    tsallis_entropy,
)
from .autoencoder import (  # noqa: F401
    AutoencoderModel,
    TrainConfig,
    TrainTrace,
    forward,
    init_model,
    load_model,
    mean_loss,
    mse_loss,
    reconstruction_errors,
    save_model,
    train,
)
from .config import PipelineConfig, ScenarioConfig, load_pipeline_config, load_scenario  # noqa: F401
from .corrnet import (  # noqa: F401
    CorrelationMatrix,
    MarketGraph,
    build_thresholded_graph,
    correlation_matrix,
    covariance_matrix,
    mantegna_distance,
    mst_reduce,
    percentile_threshold,
    to_dot,
)
from .errors import (  # noqa: F401
    ConfigError,
    DataError,
    DivergenceError,
    MgaeError,
)
from .graphstats import (  # noqa: F401
    GraphSummary,
    degree_count_rows,
    degree_rank_rows,
    degree_sequence,
    local_clustering,
    summarize,
)
from .ingest import (  # noqa: F401
    PeriodSpec,
    ReturnsMatrix,
    clean_panel,
    load_returns_csv,
    split_periods,
    write_returns_csv,
)
from .pipeline import (  # noqa: F401
    AnomalyReport,
    PeriodResult,
    export_outputs,
    report_dict,
    run_pipeline,
)
from .stats import TTestResult, compare_periods, welch_ttest  # noqa: F401
from .synthgen import RegimeSpec, generate, regime_periods  # noqa: F401
