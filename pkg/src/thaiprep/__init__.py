"""Corpus preparation for Thai discussion-forum text.

The package turns raw scraped threads into a clean, consistently segmented
token corpus: noise-aware text normalization, lexicon-driven word
segmentation built on Thai character clusters, language and length
filtering, token-stream post-processing, vocabulary construction, and
segmentation evaluation.
"""

__version__ = "0.1.0"

from .corpus_io import (
    CorpusSplit,
    PipelineConfig,
    RawThread,
    RecordError,
    WriteSummary,
    config_digest,
    load_config,
    read_threads,
    read_token_file,
    split_corpus,
    write_tokens,
)
from .filters import (
    FilterDecision,
    LanguageFilterError,
    LanguageProfile,
    detect_language,
    extract_ngrams,
    filter_thread,
    length_filter,
    load_profiles,
    save_profiles,
    score_text,
    train_profiles,
)
from .metrics import (
    BoundaryScore,
    CorpusStats,
    MetricError,
    accuracy,
    aggregate_boundary_score,
    boundaries_from_tokens,
    boundary_prf,
    corpus_stats,
    corpus_stats_from_counts,
    labels_from_separated,
    perplexity,
    read_labels,
    write_labels,
)
from .normalizer import (
    DEFAULT_REWRITE_CAPS,
    DEFAULT_SPECIAL_TOKENS,
    DEFAULT_STAGE_ORDER,
    NormalizedDocument,
    RewriteRecord,
    SpecialToken,
    StageError,
    apply_edits,
    normalize_document,
    normalize_text,
)
from .postproc import (
    MisspellingMap,
    MisspellingMapError,
    VocabTable,
    build_vocab,
    correct_spelling,
    load_misspelling_map,
    load_vocab,
    lowercase_english,
    oov_rate,
    save_vocab,
    ungroup_emoji,
)
from .tokenizer import (
    CharacterCluster,
    LexiconError,
    LexiconTrie,
    Token,
    TokenStream,
    TokenStreamError,
    cluster_tcc,
    detokenize,
    is_emoji_token,
    load_lexicon,
    tokenize,
)

__all__ = [
    "__version__",
    "BoundaryScore",
    "CharacterCluster",
    "CorpusSplit",
    "CorpusStats",
    "DEFAULT_REWRITE_CAPS",
    "DEFAULT_SPECIAL_TOKENS",
    "DEFAULT_STAGE_ORDER",
    "FilterDecision",
    "LanguageFilterError",
    "LanguageProfile",
    "LexiconError",
    "LexiconTrie",
    "MetricError",
    "MisspellingMap",
    "MisspellingMapError",
    "NormalizedDocument",
    "PipelineConfig",
    "RawThread",
    "RecordError",
    "RewriteRecord",
    "SpecialToken",
    "StageError",
    "Token",
    "TokenStream",
    "TokenStreamError",
    "VocabTable",
    "WriteSummary",
    "accuracy",
    "aggregate_boundary_score",
    "apply_edits",
    "boundaries_from_tokens",
    "boundary_prf",
    "build_vocab",
    "cluster_tcc",
    "config_digest",
    "corpus_stats",
    "corpus_stats_from_counts",
    "correct_spelling",
    "detect_language",
    "detokenize",
    "extract_ngrams",
    "filter_thread",
    "is_emoji_token",
    "labels_from_separated",
    "length_filter",
    "load_config",
    "load_lexicon",
    "load_misspelling_map",
    "load_profiles",
    "load_vocab",
    "lowercase_english",
    "normalize_document",
    "normalize_text",
    "oov_rate",
    "perplexity",
    "read_labels",
    "read_threads",
    "read_token_file",
    "save_profiles",
    "save_vocab",
    "score_text",
    "split_corpus",
    "tokenize",
    "train_profiles",
    "ungroup_emoji",
    "write_labels",
    "write_tokens",
]
