"""curvecast: forecast text-classification learning curves from early iterations.

The package fits five parametric curve families to learning-curve prefixes,
scores forecasts by their mean absolute difference from later observations,
simulates passive/active iterative learning over text corpora to generate
curves, and detects agreement-based stopping points for comparison against
forecasting cutoffs.
"""

from .curves import (
    CurveFamily,
    CurveFit,
    CurvePoint,
    DegenerateDesign,
    FitOutcome,
    FitError,
    InsufficientPoints,
    NonPositiveX,
    fit,
    fit_all,
    predict,
)
from .forecast import (
    EvaluationConfig,
    ForecastEvaluation,
    LearningCurve,
    SweepPoint,
    aggregate,
    average_difference,
    expected_n,
    forecast_at_tpc,
    read_curves_csv,
    split_at_tpc,
    sweep_tpc,
    write_curves_csv,
)
from .learners import (
    LinearModel,
    MetricReport,
    TreeNode,
    decision_value,
    evaluate,
    predict_linear,
    train_linear,
    train_tree,
    tree_predict,
)
from .simulate import (
    PoolState,
    RunRecord,
    SimulationConfig,
    average_curves,
    kfold_split,
    read_manifest,
    run_simulation,
    select_closest_to_hyperplane,
    select_random,
    split_pool_test,
    write_manifest,
)
from .stopping import (
    StoppingDecision,
    StopSet,
    TpcComparison,
    cohens_kappa,
    compare_stop_to_tpc,
    sp_stopping,
)
from .synth import generate_corpus
from .text import (
    Document,
    FeatureVector,
    Vocabulary,
    build_vocabulary,
    default_stopwords,
    load_corpus_jsonl,
    load_stopwords,
    tokenize,
    vectorize,
    write_corpus_jsonl,
)

__version__ = "0.1.0"
