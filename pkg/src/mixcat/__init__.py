"""Probabilistic text categorization toolkit.

Binary category-vs-complement classification of token sequences with
four methods: smoothed word histograms, hard word clusters, finite
mixtures over soft word clusters with EM-fitted weights, and a cosine
baseline.  Includes a rejection-threshold decision rule and a
micro-averaged precision/recall harness with break-even reporting.

Likelihood inner loops run on a compiled backend when available; set
``MIXCAT_PURE_PYTHON=1`` to force the numpy fallback.  The active
backend is reported as ``mixcat.BACKEND``.
"""

from mixcat._kernels import BACKEND
from mixcat.clustering import (
    Clustering,
    DistributedFrequencies,
    distribute_frequencies,
    from_member_sets,
    rank_clusters,
    soft_clusters,
)
from mixcat.corpus import (
    CorpusFormatError,
    LabeledCorpus,
    LabeledDocument,
    complement_corpus,
    parse_corpus,
    serialize_corpus,
)
from mixcat.counts import (
    FrequencyTable,
    cluster_frequencies,
    count_frequencies,
    count_pools,
)
from mixcat.estimation import (
    EmConfig,
    EmResult,
    ele_distribution,
    em_fit,
    em_step,
    gradient,
    log_likelihood,
    mle_distribution,
    mle_word_distribution,
)
from mixcat.evaluation import (
    BreakEven,
    ContingencyCounts,
    CurvePoint,
    PRCurve,
    PrecisionRecall,
    break_even,
    contingency,
    default_epsilon_grid,
    micro_pr,
    pr_from_counts,
    score_documents,
    sweep,
)
from mixcat.models import (
    PROB_FLOOR,
    CosineModel,
    Decision,
    HardClusterModel,
    MixtureModel,
    TrainingError,
    WordModel,
    classify_document,
    cosine_decide,
    decide,
    doc_log_likelihood,
    load_model,
    method_of,
    save_model,
    train_cos,
    train_fmm,
    train_hcm,
    train_wbm,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BreakEven",
    "Clustering",
    "ContingencyCounts",
    "CorpusFormatError",
    "CosineModel",
    "CurvePoint",
    "Decision",
    "DistributedFrequencies",
    "EmConfig",
    "EmResult",
    "FrequencyTable",
    "HardClusterModel",
    "LabeledCorpus",
    "LabeledDocument",
    "MixtureModel",
    "PRCurve",
    "PrecisionRecall",
    "PROB_FLOOR",
    "TrainingError",
    "WordModel",
    "break_even",
    "classify_document",
    "cluster_frequencies",
    "complement_corpus",
    "contingency",
    "cosine_decide",
    "count_frequencies",
    "count_pools",
    "decide",
    "default_epsilon_grid",
    "distribute_frequencies",
    "doc_log_likelihood",
    "ele_distribution",
    "em_fit",
    "em_step",
    "from_member_sets",
    "gradient",
    "load_model",
    "log_likelihood",
    "method_of",
    "micro_pr",
    "mle_distribution",
    "mle_word_distribution",
    "parse_corpus",
    "pr_from_counts",
    "save_model",
    "score_documents",
    "serialize_corpus",
    "soft_clusters",
    "rank_clusters",
    "sweep",
    "train_cos",
    "train_fmm",
    "train_hcm",
    "train_wbm",
    "__version__",
]
