"""Interval-rule redescription mining across multiple data views."""

from .binning import BinSpec, bins_to_classes, bins_to_rules, perform_binning
from .dataset import (
    AttributeColumn,
    MultiViewDataset,
    TargetColumn,
    View,
    assemble_dataset,
    parse_arff,
    serialize_arff,
    subsample,
    take,
    target_from_view,
)
from .errors import (
    ArityMismatch,
    BadFoldCount,
    BadKeyValue,
    BadSampleSize,
    ConfigInvalid,
    DatasetError,
    DatasetTooSmall,
    DegenerateVariance,
    DuplicateKey,
    EmptySupport,
    ExplainError,
    InsufficientCandidates,
    LengthMismatch,
    MalformedHeader,
    MeasureError,
    MiningError,
    MissingRequired,
    NonFiniteValue,
    QueryDepthExceeded,
    QueryError,
    QueryParseError,
    RedescribeError,
    RowCountMismatch,
    SameView,
    SettingsError,
    UniverseMismatch,
    UnknownAttribute,
    UnknownCategory,
    ViewAlreadyPresent,
)
from .explain import (
    ChosenItem,
    ClassSelection,
    ExplainCandidate,
    FidelityReport,
    KindSelection,
    SelectionState,
    candidates_from,
    construct_sets,
    entropy_filter,
    kfold_fidelity,
    stratified_folds,
)
from .config import (
    IoSettings,
    Settings,
    load_settings,
    parse_preferences,
    parse_settings,
    serialize_settings,
)
from .io import (
    FamilyRecords,
    RedsRecord,
    read_family,
    read_reds,
    reconstruct,
    write_family,
    write_reds,
)
from .measures import (
    SurrogateItem,
    fidelity,
    jaccard,
    jaccard_pair,
    mann_whitney_u,
    p_value,
    p_value_curve,
    precision,
    shannon_entropy,
    spearman,
)
from .miner import (
    FamilyEntry,
    FamilyStats,
    RedescriptionFamily,
    count_described,
    covered_entities,
    mine_attribute,
    mine_family,
    mine_interactions,
)
from .pct import PctModel, PctNode, TargetMatrix, train_forest, train_pct, transform_to_rules
from .queries import (
    And,
    Literal,
    Not,
    Or,
    Query,
    SupportSet,
    conjoin,
    evaluate,
    minimize,
    parse_query,
)
from .redescriptions import (
    CandidateStore,
    MinerConfig,
    Redescription,
    candidate_score,
    complete_reds,
    conjunctive_refine,
    create_reds,
    extract_final,
    make_redescription,
    minimize_redescription,
    passes_thresholds,
    refine_with_bins,
)
from .seeds import rng_for, stable_seed
from .synth import copied_views, independent_views, labeled_dataset, write_dataset

__version__ = "0.1.0"

__all__ = [
    "AttributeColumn",
    "And",
    "ArityMismatch",
    "BadFoldCount",
    "BadKeyValue",
    "BadSampleSize",
    "BinSpec",
    "CandidateStore",
    "ChosenItem",
    "ClassSelection",
    "ConfigInvalid",
    "DatasetError",
    "DatasetTooSmall",
    "DegenerateVariance",
    "DuplicateKey",
    "EmptySupport",
    "ExplainCandidate",
    "ExplainError",
    "FamilyEntry",
    "FamilyRecords",
    "FamilyStats",
    "FidelityReport",
    "InsufficientCandidates",
    "IoSettings",
    "KindSelection",
    "LengthMismatch",
    "Literal",
    "MalformedHeader",
    "MeasureError",
    "MinerConfig",
    "MiningError",
    "MissingRequired",
    "MultiViewDataset",
    "NonFiniteValue",
    "Not",
    "Or",
    "PctModel",
    "PctNode",
    "Query",
    "QueryDepthExceeded",
    "QueryError",
    "QueryParseError",
    "RedescribeError",
    "Redescription",
    "RedescriptionFamily",
    "RedsRecord",
    "RowCountMismatch",
    "SameView",
    "SelectionState",
    "Settings",
    "SettingsError",
    "SupportSet",
    "SurrogateItem",
    "TargetColumn",
    "TargetMatrix",
    "UniverseMismatch",
    "UnknownAttribute",
    "UnknownCategory",
    "View",
    "ViewAlreadyPresent",
    "assemble_dataset",
    "bins_to_classes",
    "bins_to_rules",
    "candidate_score",
    "candidates_from",
    "complete_reds",
    "conjoin",
    "conjunctive_refine",
    "construct_sets",
    "copied_views",
    "count_described",
    "covered_entities",
    "create_reds",
    "entropy_filter",
    "evaluate",
    "extract_final",
    "fidelity",
    "independent_views",
    "jaccard",
    "jaccard_pair",
    "kfold_fidelity",
    "labeled_dataset",
    "load_settings",
    "make_redescription",
    "mann_whitney_u",
    "mine_attribute",
    "mine_family",
    "mine_interactions",
    "minimize",
    "minimize_redescription",
    "p_value",
    "p_value_curve",
    "parse_arff",
    "parse_preferences",
    "parse_query",
    "parse_settings",
    "passes_thresholds",
    "perform_binning",
    "precision",
    "read_family",
    "read_reds",
    "reconstruct",
    "refine_with_bins",
    "rng_for",
    "serialize_arff",
    "serialize_settings",
    "shannon_entropy",
    "spearman",
    "stable_seed",
    "stratified_folds",
    "subsample",
    "take",
    "target_from_view",
    "train_forest",
    "train_pct",
    "transform_to_rules",
    "write_dataset",
    "write_family",
    "write_reds",
]
