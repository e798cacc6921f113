"""Higher Criticism similarity of word-frequency tables and authorship attribution."""

from .attribution import (AttributionReport, Corpus, Document, attribute, concat_corpus,
                          corpus_self_scores, doc_vs_corpus_score, normalized_rank,
                          rank_calibrate)
from .binom import PValueRecord, exact_binom_two_sided, word_pvalues
from .diagnostics import (CvRecord, RankProfile, RareWeakConfig, averaged_profiles, corpus_cv,
                          cv_by_pvalue_rank, simulate_rare_weak, stabilized_rate)
from .hc import DiscriminatingSet, HCResult, compute_hc, discriminating_set
from .similarity import SimilarityIndex, cosine_index, hc_sim, power_divergence
from .text import (FrequencyTable, TokenizerConfig, Vocabulary, build_vocabulary, count_terms,
                   project_table, tokenize_terms)

__version__ = "0.1.0"

__all__ = [
    "AttributionReport", "Corpus", "CvRecord", "DiscriminatingSet", "Document",
    "FrequencyTable", "HCResult", "PValueRecord", "RankProfile", "RareWeakConfig",
    "SimilarityIndex", "TokenizerConfig", "Vocabulary", "attribute", "averaged_profiles",
    "build_vocabulary", "compute_hc", "concat_corpus", "corpus_cv", "corpus_self_scores",
    "cosine_index", "count_terms", "cv_by_pvalue_rank", "discriminating_set",
    "doc_vs_corpus_score", "exact_binom_two_sided", "hc_sim", "normalized_rank",
    "power_divergence", "project_table", "rank_calibrate", "simulate_rare_weak",
    "stabilized_rate", "tokenize_terms", "word_pvalues",
]
