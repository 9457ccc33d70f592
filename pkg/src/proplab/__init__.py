"""Propaganda-technique span classification with emotion-aware features.

The package covers the full desk-scale pipeline: span-annotated corpus
loading, emotion scoring (lexicon / precomputed store / HTTP), hashed or
precomputed sentence embeddings, optional category features, a fused
feed-forward classifier with a logistic baseline, Kendall-τ-b
technique–emotion correlation tables, and per-technique F1 evaluation.
"""

from .categories import CategoryLexicon, category_features, load_dictionary
from .checkpoint import load_checkpoint, save_checkpoint
from .corpus import (
    N_TECHNIQUES,
    TECHNIQUE_NAMES,
    Article,
    Segment,
    SpanAnnotation,
    TechniqueLabel,
    clean_text,
    extract_segment,
    extract_segments,
    load_annotations,
    load_corpus,
    save_annotations,
    segment_key,
    parse_segment_key,
    tokenize,
)
from .embeddings import (
    DEFAULT_DIMENSION,
    EmbeddingStore,
    HashEmbeddingProvider,
    StoreEmbeddingProvider,
    get_embedding,
    hash_embed,
    load_embeddings,
    save_embeddings,
)
from .emotion import (
    EMOTION_DIMENSIONS,
    EmotionLexicon,
    EmotionScores,
    LexiconEmotionProvider,
    PrecomputedEmotionProvider,
    PrecomputedEmotionStore,
    get_scores,
    load_precomputed,
    score_with_lexicon,
)
from .errors import (
    CheckpointError,
    CorpusError,
    DegenerateDataError,
    EvaluationError,
    FetchError,
    LexiconError,
    ModelError,
    ProplabError,
    SchemaError,
    StoreError,
)
from .evaluation import (
    EvalReport,
    Prediction,
    TechniqueScores,
    format_report,
    load_predictions,
    per_technique_f1,
    report_tsv,
    save_predictions,
)
from .features import (
    CONDITIONS,
    ConditionSpec,
    FeatureBundle,
    FeatureSchema,
    build_bundles,
    load_bundles,
    save_bundles,
)
from .fusion import (
    ModelConfig,
    Parameters,
    TrainResult,
    forward,
    init_parameters,
    predict,
    predict_batch,
    train,
    train_logistic_baseline,
)
from .score_client import EndpointConfig, fetch_scores
from .stats import (
    CorrelationResult,
    CorrelationTable,
    correlation_table,
    kendall_tau_b,
)

__version__ = "0.1.0"

__all__ = [
    "Article",
    "CategoryLexicon",
    "CheckpointError",
    "ConditionSpec",
    "CorrelationResult",
    "CorrelationTable",
    "CorpusError",
    "CONDITIONS",
    "DEFAULT_DIMENSION",
    "DegenerateDataError",
    "EMOTION_DIMENSIONS",
    "EmbeddingStore",
    "EmotionLexicon",
    "EmotionScores",
    "EndpointConfig",
    "EvalReport",
    "EvaluationError",
    "FeatureBundle",
    "FeatureSchema",
    "FetchError",
    "HashEmbeddingProvider",
    "LexiconEmotionProvider",
    "LexiconError",
    "ModelConfig",
    "ModelError",
    "N_TECHNIQUES",
    "Parameters",
    "PrecomputedEmotionProvider",
    "PrecomputedEmotionStore",
    "Prediction",
    "ProplabError",
    "SchemaError",
    "Segment",
    "SpanAnnotation",
    "StoreEmbeddingProvider",
    "StoreError",
    "TECHNIQUE_NAMES",
    "TechniqueLabel",
    "TechniqueScores",
    "TrainResult",
    "build_bundles",
    "category_features",
    "clean_text",
    "correlation_table",
    "extract_segment",
    "extract_segments",
    "fetch_scores",
    "format_report",
    "forward",
    "get_embedding",
    "get_scores",
    "hash_embed",
    "init_parameters",
    "kendall_tau_b",
    "load_annotations",
    "load_bundles",
    "load_checkpoint",
    "load_corpus",
    "load_dictionary",
    "load_embeddings",
    "load_precomputed",
    "load_predictions",
    "parse_segment_key",
    "per_technique_f1",
    "predict",
    "predict_batch",
    "report_tsv",
    "save_annotations",
    "save_bundles",
    "save_checkpoint",
    "save_embeddings",
    "save_predictions",
    "score_with_lexicon",
    "segment_key",
    "tokenize",
    "train",
    "train_logistic_baseline",
]
