"""Reference class forecasting for capital project cost and schedule risk."""

from refcast.dataset import (
    Dataset,
    DatasetFormatError,
    OverrunObservation,
    ProjectRecord,
    compute_overrun,
    extract_observations,
    filter_dataset,
    parse_dataset,
    read_dataset,
    serialize_dataset,
)
from refcast.errors import DomainError
from refcast.hypotests import (
    TestResult,
    binomial_test,
    compare_groups,
    error_explanation_test,
    rank_sum_test,
    signed_rank_test,
    significance_stars,
)
from refcast.rcf import (
    AdjustmentRefused,
    ReferenceClass,
    UpliftResult,
    adjust_uplift,
    apply_uplift,
    build_reference_class,
    certainty_for_uplift,
    ecdf,
    uplift,
)
from refcast.regime import (
    ContingencyRegime,
    PainGainRule,
    TierSpec,
    allocate_outturn,
    build_regime,
    pain_gain_settlement,
)
from refcast.stats import (
    classify_black_swans,
    moving_average,
    summarize,
    tukey_fences,
)
from refcast.synth import SynthSpec, generate

__version__ = "0.1.0"

__all__ = [
    "AdjustmentRefused",
    "ContingencyRegime",
    "Dataset",
    "DatasetFormatError",
    "DomainError",
    "OverrunObservation",
    "PainGainRule",
    "ProjectRecord",
    "ReferenceClass",
    "SynthSpec",
    "TestResult",
    "TierSpec",
    "UpliftResult",
    "adjust_uplift",
    "allocate_outturn",
    "apply_uplift",
    "binomial_test",
    "build_reference_class",
    "build_regime",
    "certainty_for_uplift",
    "classify_black_swans",
    "compare_groups",
    "compute_overrun",
    "ecdf",
    "error_explanation_test",
    "extract_observations",
    "filter_dataset",
    "generate",
    "moving_average",
    "pain_gain_settlement",
    "parse_dataset",
    "rank_sum_test",
    "read_dataset",
    "serialize_dataset",
    "signed_rank_test",
    "significance_stars",
    "summarize",
    "tukey_fences",
    "uplift",
]
