"""Short-term load forecasting for households and small energy communities.

The package pairs a library of forecasting models (persistence baselines,
exponential smoothing, seasonal ARIMA, autoregressions on recent profiles,
and pattern regressions on behavioral features) with a rolling evaluation
engine that retrains every model each day and scores forecasts per update
period or per day.
"""

from .engine import (
    ForecastRecord,
    MetricsReport,
    ModelMetrics,
    SimConfig,
    SimulationResult,
    rmse,
    run_simulation,
    running_avg_rmse,
)
from .errors import ConfigError, DataError, LoadcastError
from .features import FeatureConfig, FeatureMatrix, compute_features
from .grid import DayType, GridSpec, LoadSeries, day_type_flag, update_boundaries
from .io_csv import (
    ingest_load,
    ingest_solar,
    read_records_csv,
    write_records_csv,
    write_report_csv,
    write_report_json,
    write_series_csv,
)
from .registry import REGISTRY, Forecaster, RunContext, build_forecaster, register_model
from .synth import SynthConfig, generate

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DataError",
    "DayType",
    "FeatureConfig",
    "FeatureMatrix",
    "ForecastRecord",
    "Forecaster",
    "GridSpec",
    "LoadSeries",
    "LoadcastError",
    "MetricsReport",
    "ModelMetrics",
    "REGISTRY",
    "RunContext",
    "SimConfig",
    "SimulationResult",
    "SynthConfig",
    "build_forecaster",
    "compute_features",
    "day_type_flag",
    "generate",
    "ingest_load",
    "ingest_solar",
    "read_records_csv",
    "register_model",
    "rmse",
    "run_simulation",
    "running_avg_rmse",
    "update_boundaries",
    "write_records_csv",
    "write_report_csv",
    "write_report_json",
    "write_series_csv",
]
