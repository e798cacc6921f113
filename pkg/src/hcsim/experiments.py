"""Reusable experiment protocols: simulator trials, rank-calibration
uniformity and the Federalist checks.

Each function returns plain numbers so callers (tests, notebooks, the
acceptance suite) can apply their own bounds.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .attribution import Corpus, Document, attribute, doc_vs_corpus_score, normalized_rank
from .corpora import load_corpora
from .diagnostics import RareWeakConfig, cv_by_pvalue_rank, simulate_rare_weak, zipf_law
from .hc import DEFAULT_ALPHA, DEFAULT_VARIANT, NoAdmissibleIndex
from .similarity import cosine_from_counts, divergence_from_counts, hc_from_counts, hc_sim
from .text import FrequencyTable, TokenizerConfig, Vocabulary, build_vocabulary

# Mosteller and Wallace's 70 function words.
FUNCTION_WORDS = tuple("""
a all also an and any are as at be been but by can do down even every for from
had has have her his if in into is it its may more must my no not now of on one
only or our shall should so some such than that the their then there things this
to up upon was were what when which who will with would your
""".split())


def _hc_score(c1, c2, alpha, variant):
    try:
        return hc_from_counts(c1, c2, alpha, variant).score
    except NoAdmissibleIndex:
        return np.inf


STATISTICS = {
    "hc": lambda c1, c2: _hc_score(c1, c2, DEFAULT_ALPHA, DEFAULT_VARIANT),
    "pearson": lambda c1, c2: divergence_from_counts(c1, c2, 1.0),
    "g2": lambda c1, c2: divergence_from_counts(c1, c2, 0.0),
    "cosine": cosine_from_counts,
}


def rare_weak_trial(cfg: RareWeakConfig, statistics=("hc", "pearson", "cosine")) -> dict[str, bool]:
    """One attribution trial on a fresh simulated pair.

    The true author alternates with the seed.  Its last document is held out,
    both corpora drop their last document so they have equal size, and each
    statistic picks the corpus with the smaller value (ties go to ``A``).
    """
    sim = simulate_rare_weak(cfg)
    truth = "AB"[cfg.seed % 2]
    doc = (sim.counts_a if truth == "A" else sim.counts_b)[-1]
    ref_a = sim.counts_a[:-1].sum(axis=0)
    ref_b = sim.counts_b[:-1].sum(axis=0)
    out = {}
    for name in statistics:
        fn = STATISTICS[name]
        chosen = "A" if fn(doc, ref_a) <= fn(doc, ref_b) else "B"
        out[name] = chosen == truth
    return out


def rare_weak_accuracy(cfg: RareWeakConfig, n_trials: int = 200,
                       statistics=("hc", "pearson", "cosine")) -> dict[str, float]:
    """Attribution accuracy of each statistic over seeds ``cfg.seed .. cfg.seed + n_trials - 1``."""
    hits = {s: 0 for s in statistics}
    for k in range(n_trials):
        for s, ok in rare_weak_trial(replace(cfg, seed=cfg.seed + k), statistics).items():
            hits[s] += ok
    return {s: h / n_trials for s, h in hits.items()}


@dataclass(frozen=True)
class Recovery:
    precision: float
    recall: float
    n_selected: int


def planted_recovery(cfg: RareWeakConfig, n_trials: int = 50) -> list[Recovery]:
    """How well the discriminating set of the two full corpora matches the
    perturbed terms, one entry per seed."""
    out = []
    for k in range(n_trials):
        sim = simulate_rare_weak(replace(cfg, seed=cfg.seed + k))
        a = FrequencyTable.from_vector(sim.counts_a.sum(axis=0), sim.vocab)
        b = FrequencyTable.from_vector(sim.counts_b.sum(axis=0), sim.vocab)
        delta = set(hc_sim(a, b, sim.vocab).delta.terms)
        hit = len(delta & sim.perturbed)
        out.append(Recovery(hit / len(delta) if delta else 0.0,
                            hit / len(sim.perturbed), len(delta)))
    return out


def rank_draws(n_draws: int = 10_000, m: int = 4, n_terms: int = 200, doc_length: int = 500,
               seed: int = 0, alpha: float = DEFAULT_ALPHA,
               variant: str = DEFAULT_VARIANT) -> np.ndarray:
    """Ranks (1..m+1) of a fresh document against an m-document corpus drawn
    from the same Zipf law, so all m + 1 scores are exchangeable."""
    rng = np.random.default_rng(seed)
    law = zipf_law(n_terms, 1.0)
    ranks = np.empty(n_draws, dtype=int)
    for t in range(n_draws):
        mat = rng.multinomial(doc_length, law, size=m + 1)
        doc, corpus = mat[-1], mat[:-1]
        total = corpus.sum(axis=0)
        selfs = [_hc_score(row, total - row, alpha, variant) for row in corpus]
        ranks[t] = normalized_rank(_hc_score(doc, total, alpha, variant), selfs)[0]
    return ranks


def tv_from_uniform(ranks: np.ndarray, support: int) -> float:
    freq = np.bincount(ranks - 1, minlength=support) / len(ranks)
    return 0.5 * float(np.abs(freq - 1.0 / support).sum())


# ---------------------------------------------------------------------------
# Federalist
# ---------------------------------------------------------------------------

@dataclass
class FederalistData:
    hamilton: Corpus
    madison: Corpus
    disputed: dict[str, FrequencyTable]
    vocab: Vocabulary

    @property
    def labeled(self) -> list[Document]:
        return self.hamilton.documents + self.madison.documents


def load_federalist(root: str | Path, vocab_size: int = 1500,
                    cfg: TokenizerConfig | None = None) -> FederalistData:
    """Corpora and vocabulary from a ``hamilton/ madison/ disputed/`` layout.

    The vocabulary is the ``vocab_size`` most frequent words over all three
    groups together.
    """
    groups = load_corpora(root, cfg, authors=["hamilton", "madison", "disputed"])
    vocab = build_vocabulary([c.table(d) for c in groups.values() for d in c.doc_ids],
                             vocab_size)
    disputed = groups["disputed"]
    return FederalistData(groups["hamilton"], groups["madison"],
                          {d: disputed.table(d) for d in disputed.doc_ids}, vocab)


def disputed_attribution(data: FederalistData, rule: str = "min-rank") -> dict[str, str]:
    out = {}
    for doc_id, table in sorted(data.disputed.items()):
        report = attribute(Document(doc_id, table), [data.hamilton, data.madison], rule,
                           data.vocab, with_delta=False)
        out[doc_id] = report.chosen
    return out


def diagonal_separation(data: FederalistData) -> tuple[float, list[tuple[str, str, float, float]]]:
    """Share of labeled papers scoring lower against their own author's
    corpus; the document is left out of its own corpus."""
    rows = []
    for doc in data.labeled:
        h = doc_vs_corpus_score(doc, data.hamilton, data.vocab)
        m = doc_vs_corpus_score(doc, data.madison, data.vocab)
        rows.append((doc.doc_id, doc.author, h, m))
    correct = sum((h < m) if a == "hamilton" else (m < h) for _, a, h, m in rows)
    return correct / len(rows), rows


def author_delta(data: FederalistData):
    """Discriminating set of the full Hamilton corpus against the full Madison corpus."""
    return hc_sim(data.hamilton.concatenated, data.madison.concatenated, data.vocab).delta


@dataclass(frozen=True)
class CvOrdering:
    cv_below: float          # mean CV of top-K terms at or below the HC threshold
    cv_above: float          # mean CV of the remaining top-K terms
    low_rank_concordant: float
    low_rank_discordant: float
    n_pairs: int


def sample_pairs(data: FederalistData, n_pairs: int, seed: int):
    """``n_pairs`` (doc, corpus, concordant) triples drawn uniformly with
    replacement from every labeled document crossed with both corpora."""
    pool = [(doc, corpus, doc.author == corpus.author)
            for doc in data.labeled for corpus in (data.hamilton, data.madison)]
    idx = np.random.default_rng(seed).integers(0, len(pool), size=n_pairs)
    return [pool[i] for i in idx]


def cv_ordering(pairs, vocab: Vocabulary, k: int = 50, low_ranks: int = 10) -> CvOrdering:
    below, above = [], []
    low = {True: [], False: []}
    for doc, corpus, concordant in pairs:
        for e in cv_by_pvalue_rank(doc, corpus, vocab, k=k):
            (below if e.below_threshold else above).append(e.cv)
            if e.rank <= low_ranks:
                low[concordant].append(e.cv)
    mean = lambda xs: float(np.mean(xs)) if xs else float("nan")  # noqa: E731
    return CvOrdering(mean(below), mean(above), mean(low[True]), mean(low[False]), len(pairs))
