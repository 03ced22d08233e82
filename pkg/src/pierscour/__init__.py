"""Power-law pier-scour equations fitted with particle swarm optimization.

The library has five layers, usable independently:

- :mod:`pierscour.swarm`: a general bounded continuous minimizer.
- :mod:`pierscour.data`: scour records, dimensionless features, splits.
- :mod:`pierscour.model`: multiplicative power-law models and fitting.
- :mod:`pierscour.baselines`: published scour equations.
- :mod:`pierscour.metrics`: error and uncertainty measures.
- :mod:`pierscour.workbench`: sensitivity and comparison workflows.
"""

from .baselines import Baseline, evaluate_baseline, run_baseline_suite
from .data import (
    GRAVITY,
    DatasetSplit,
    DimensionlessRecord,
    RawScourRecord,
    Scale,
    derive_features,
    load_csv,
    split,
    summarize,
    write_csv,
)
from .errors import (
    ConfigurationError,
    CrossScaleError,
    DegenerateObjectiveError,
    MissingInputError,
    ModelFileError,
    PierScourError,
    SchemaError,
    SensitivityError,
    ValidationError,
)
from .metrics import MetricReport, PredictionPair, Units, compute_metrics
from .model import (
    BUILTIN_SPECS,
    Feature,
    ModelSpec,
    PowerLawModel,
    builtin_spec,
    builtin_specs_for,
    coefficient_bounds,
    default_coefficient_bounds,
    fit,
    load_model,
    predict,
    rmse_objective,
    save_model,
)
from .swarm import (
    OptimizationResult,
    SearchBounds,
    SwarmConfig,
    SwarmState,
    initialize_swarm,
    optimize,
    step,
)
from .workbench import (
    ComparisonResult,
    EvaluationReport,
    SensitivityRun,
    emit_band_table,
    emit_comparison_csv,
    emit_report,
    emit_scatter_data,
    load_report,
    run_comparison,
    run_sensitivity,
)

__version__ = "0.1.0"
