"""Within-corpus variability of words and how it lines up with P-value order.

Also home to the rare/weak simulator used to benchmark the similarity indices.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .attribution import Corpus, Document, _reference_counts
from .binom import count_pvalues
from .hc import DEFAULT_ALPHA, DEFAULT_VARIANT, compute_hc
from .text import FrequencyTable, Vocabulary

log = logging.getLogger(__name__)

DEFAULT_K = 50


@dataclass(frozen=True)
class CvRecord:
    term: str
    mu: float
    sigma2: float
    cv: float


@dataclass(frozen=True)
class RankEntry:
    rank: int
    term: str
    pi: float
    cv: float
    below_threshold: bool


@dataclass(frozen=True)
class RankProfile:
    avg_cv: tuple[float, ...]       # index r-1 holds rank r; nan where no pair reached r
    n_pairs: tuple[int, ...]
    threshold_mean: float
    threshold_lo: float             # 2.5% quantile of the HC-threshold rank
    threshold_hi: float             # 97.5% quantile
    threshold_ranks: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.avg_cv)


def stabilized_rate(table: FrequencyTable, term: str) -> float:
    """Square-root rate 2 sqrt((N(w|D) + 1/4) / |D|)."""
    if table.total <= 0:
        raise ValueError("stabilized rate undefined for an empty table")
    return 2.0 * math.sqrt((table[term] + 0.25) / table.total)


def stabilized_rates(counts: np.ndarray) -> np.ndarray:
    """Row-wise stabilized rates of a document-by-term count matrix."""
    counts = np.asarray(counts, dtype=float)
    totals = counts.sum(axis=-1, keepdims=True)
    if np.any(totals <= 0):
        raise ValueError("stabilized rate undefined for an empty document")
    return 2.0 * np.sqrt((counts + 0.25) / totals)


def _cv_arrays(mat: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if mat.shape[0] < 2:
        raise ValueError(f"corpus needs >= 2 documents for CV, has {mat.shape[0]}")
    rates = stabilized_rates(mat)
    mu = rates.mean(axis=0)
    sigma2 = rates.var(axis=0, ddof=1)
    cv = np.sqrt(sigma2) / mu
    # a term missing from the whole corpus carries no within-corpus variation
    cv[mat.sum(axis=0) == 0] = 0.0
    return mu, sigma2, cv


def corpus_cv(corpus: Corpus, vocab: Vocabulary) -> list[CvRecord]:
    mat = corpus.matrix(vocab)
    lengths = mat.sum(axis=1)
    if len(lengths) and lengths.min() > 0 and lengths.max() > 5 * lengths.min():
        log.warning("document lengths in corpus %r vary by more than 5x (%d..%d)",
                    corpus.author, lengths.min(), lengths.max())
    mu, sigma2, cv = _cv_arrays(mat)
    return [CvRecord(t, float(m), float(s), float(c))
            for t, m, s, c in zip(vocab.terms, mu, sigma2, cv)]


def _rank_entries(doc: Document, corpus: Corpus, vocab: Vocabulary, alpha, variant, k):
    ref, member = _reference_counts(doc, corpus, vocab)
    mat = corpus.matrix(vocab)
    if member:
        mat = np.delete(mat, corpus.doc_ids.index(doc.doc_id), axis=0)
    _, _, cv = _cv_arrays(mat)
    tested, _, _, _, pi = count_pvalues(doc.table.vector(vocab), ref)
    hc = compute_hc(pi, alpha, variant)
    terms = np.asarray(vocab.terms, dtype=object)[tested]
    cv = cv[tested]
    order = np.argsort(pi, kind="stable")[:k]
    entries = [RankEntry(r + 1, str(terms[j]), float(pi[j]), float(cv[j]),
                         bool(pi[j] <= hc.threshold))
               for r, j in enumerate(order)]
    return entries, hc


def cv_by_pvalue_rank(doc: Document, corpus: Corpus, vocab: Vocabulary,
                      alpha: float = DEFAULT_ALPHA, variant: str = DEFAULT_VARIANT,
                      k: int = DEFAULT_K) -> list[RankEntry]:
    """Corpus CV of the words with the ``k`` smallest P-values of ``doc`` vs ``corpus``.

    The document is removed from the corpus first if it is a member.
    """
    return _rank_entries(doc, corpus, vocab, alpha, variant, k)[0]


def _profile(runs, k) -> RankProfile:
    sums = np.zeros(k)
    counts = np.zeros(k, dtype=int)
    thresholds = []
    for entries, hc in runs:
        for e in entries:
            sums[e.rank - 1] += e.cv
            counts[e.rank - 1] += 1
        thresholds.append(hc.i_star)
    with np.errstate(invalid="ignore", divide="ignore"):
        avg = np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)
    th = np.asarray(thresholds, dtype=float)
    return RankProfile(tuple(float(a) for a in avg), tuple(int(c) for c in counts),
                       float(th.mean()), float(np.quantile(th, 0.025)),
                       float(np.quantile(th, 0.975)), tuple(int(t) for t in thresholds))


def averaged_profiles(pairs: Sequence[tuple[Document, Corpus, bool]], vocab: Vocabulary,
                      alpha: float = DEFAULT_ALPHA, variant: str = DEFAULT_VARIANT,
                      k: int = DEFAULT_K):
    """Average rank-by-rank CV over (document, corpus, concordant) triples.

    Returns ``(overall, concordant, discordant)``; a group without pairs is ``None``.
    """
    if not pairs:
        raise ValueError("need at least one document-corpus pair")
    runs = [(_rank_entries(d, c, vocab, alpha, variant, k), conc) for d, c, conc in pairs]
    overall = _profile([r for r, _ in runs], k)
    conc = [r for r, flag in runs if flag]
    disc = [r for r, flag in runs if not flag]
    return (overall, _profile(conc, k) if conc else None, _profile(disc, k) if disc else None)


def profiles_to_csv(profiles: dict[str, RankProfile | None]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["rank", "avg_cv", "n_pairs", "group"])
    for group, prof in profiles.items():
        if prof is None:
            continue
        for r, (a, n) in enumerate(zip(prof.avg_cv, prof.n_pairs), start=1):
            w.writerow([r, "" if math.isnan(a) else repr(a), n, group])
    return buf.getvalue()


def thresholds_to_csv(profiles: dict[str, RankProfile | None]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["group", "n_pairs", "threshold_mean", "threshold_q025", "threshold_q975"])
    for group, prof in profiles.items():
        if prof is None:
            continue
        w.writerow([group, len(prof.threshold_ranks), repr(prof.threshold_mean),
                    repr(prof.threshold_lo), repr(prof.threshold_hi)])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# rare/weak simulator
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RareWeakConfig:
    n_terms: int = 1000
    docs_per_author: int = 20
    doc_length: int = 2000
    epsilon: float = 0.02
    shift: float = 2.0
    zipf_exponent: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.n_terms < 2:
            raise ValueError("n_terms must be >= 2")
        if self.docs_per_author < 1 or self.doc_length < 1:
            raise ValueError("docs_per_author and doc_length must be >= 1")
        if not (0 < self.epsilon < 1):
            raise ValueError("epsilon must lie in (0, 1)")
        if not self.shift > 0:
            raise ValueError("shift must be > 0")
        if self.zipf_exponent < 0:
            raise ValueError("zipf_exponent must be >= 0")

    @property
    def n_perturbed(self) -> int:
        return math.ceil(self.epsilon * self.n_terms - 1e-9)


def term_name(i: int) -> str:
    """Alphabetic synthetic word for index ``i`` (survives the tokenizer)."""
    letters = []
    i += 1
    while i > 0:
        i, r = divmod(i - 1, 26)
        letters.append(chr(ord("a") + r))
    return "w" + "".join(reversed(letters))


@dataclass(frozen=True)
class SimulatedPair:
    vocab: Vocabulary
    base: np.ndarray
    perturbed_law: np.ndarray
    perturbed: frozenset[str]
    counts_a: np.ndarray      # docs x terms
    counts_b: np.ndarray

    def corpus(self, which: str) -> Corpus:
        mat = self.counts_a if which == "A" else self.counts_b
        return Corpus(which, {f"{which}{i:03d}": FrequencyTable.from_vector(row, self.vocab)
                              for i, row in enumerate(mat)})


def zipf_law(n_terms: int, exponent: float) -> np.ndarray:
    w = np.arange(1, n_terms + 1, dtype=float) ** (-exponent)
    return w / w.sum()


def perturb_law(base: np.ndarray, n_perturbed: int, shift: float, rng) -> tuple[np.ndarray, np.ndarray]:
    idx = np.sort(rng.choice(len(base), size=n_perturbed, replace=False))
    law = base.copy()
    law[idx] *= shift
    return law / law.sum(), idx


def simulate_rare_weak(cfg: RareWeakConfig) -> SimulatedPair:
    """Two authors sharing a Zipf law except for a few rescaled terms."""
    rng = np.random.default_rng(cfg.seed)
    vocab = Vocabulary(tuple(term_name(i) for i in range(cfg.n_terms)))
    base = zipf_law(cfg.n_terms, cfg.zipf_exponent)
    law_b, idx = perturb_law(base, cfg.n_perturbed, cfg.shift, rng)
    a = rng.multinomial(cfg.doc_length, base, size=cfg.docs_per_author)
    b = rng.multinomial(cfg.doc_length, law_b, size=cfg.docs_per_author)
    return SimulatedPair(vocab, base, law_b, frozenset(vocab.terms[i] for i in idx), a, b)


def counts_to_text(counts: np.ndarray, vocab: Vocabulary, rng, width: int = 12) -> str:
    """Shuffle the tokens of a count vector into a plain-text document."""
    tokens = np.repeat(np.arange(len(counts)), counts)
    rng.shuffle(tokens)
    words = [vocab.terms[i] for i in tokens]
    lines = [" ".join(words[i:i + width]) for i in range(0, len(words), width)]
    return "\n".join(lines) + "\n"


def write_simulation(sim: SimulatedPair, out: Path, seed: int) -> None:
    """Write both synthetic corpora in the ``<author>/<doc>.txt`` layout plus
    the ground-truth perturbed terms."""
    rng = np.random.default_rng([seed, 1])
    out = Path(out)
    for which, mat in (("A", sim.counts_a), ("B", sim.counts_b)):
        d = out / which
        d.mkdir(parents=True, exist_ok=True)
        for i, row in enumerate(mat):
            (d / f"{which}{i:03d}.txt").write_text(counts_to_text(row, sim.vocab, rng),
                                                  encoding="utf-8")
    (out / "perturbed_terms.txt").write_text(
        "".join(t + "\n" for t in sorted(sim.perturbed)), encoding="utf-8")
