"""Fuzzy ID3 decision trees for software effort estimation."""

from .fuzzy import (
    FuzzyPartition,
    TNormKind,
    TrapezoidalSet,
    build_uniform_partition,
    fuzzify,
    membership,
    tnorm,
)
from .dataset import (
    Dataset,
    NormalizationParams,
    ProjectRecord,
    SynthSpec,
    filter_cases,
    impute_mmsi,
    load_csv,
    normalize_minmax,
    split,
    synth_generate,
)
from .induction import FuzzyTree, GrowthConfig, fuzzify_training_set, grow_tree, train_tree, tree_stats
from .inference import InferenceMode, defuzzify, infer, leaf_activations, predict_effort
from .evaluation import EvaluationReport, mmre, mre, pred, threshold_sweep

__version__ = "0.1.0"
