"""Document-vs-corpus HC scores, leave-one-out calibration and author choice."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .hc import DEFAULT_ALPHA, DEFAULT_VARIANT, DiscriminatingSet
from .similarity import hc_from_counts, hc_sim
from .text import FrequencyTable, Vocabulary, stack_tables

log = logging.getLogger(__name__)

RULES = ("min-rank", "min-hc")


@dataclass(frozen=True)
class Document:
    doc_id: str
    table: FrequencyTable
    author: str | None = None


class Corpus:
    """Documents of a single author.

    Membership is fixed at construction; derived quantities (count matrices,
    leave-one-out self-scores) are cached per vocabulary and HC setting.
    Use :meth:`without` to get a corpus with a document removed.
    """

    def __init__(self, author: str, documents: Mapping[str, FrequencyTable] | Iterable):
        self.author = author
        if isinstance(documents, Mapping):
            items = list(documents.items())
        else:
            items = [(d.doc_id, d.table) if isinstance(d, Document) else tuple(d)
                     for d in documents]
        ids = [doc_id for doc_id, _ in items]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate document ids in corpus {author!r}")
        self._docs: dict[str, FrequencyTable] = dict(items)
        self._concat: FrequencyTable | None = None
        self._matrices: dict[str, np.ndarray] = {}
        self._self_scores: dict[tuple, tuple[float, ...]] = {}

    def __len__(self):
        return len(self._docs)

    def __contains__(self, doc_id):
        return doc_id in self._docs

    def __repr__(self):
        return f"Corpus({self.author!r}, {len(self)} documents)"

    @property
    def doc_ids(self) -> tuple[str, ...]:
        return tuple(self._docs)

    @property
    def documents(self) -> list[Document]:
        return [Document(i, t, self.author) for i, t in self._docs.items()]

    def table(self, doc_id: str) -> FrequencyTable:
        return self._docs[doc_id]

    def without(self, doc_id: str) -> "Corpus":
        if doc_id not in self._docs:
            raise ValueError(f"{doc_id!r} is not a member of corpus {self.author!r}")
        return Corpus(self.author, {k: v for k, v in self._docs.items() if k != doc_id})

    @property
    def concatenated(self) -> FrequencyTable:
        if self._concat is None:
            merged: dict[str, int] = {}
            for t in self._docs.values():
                for term, c in t.counts.items():
                    merged[term] = merged.get(term, 0) + c
            self._concat = FrequencyTable(merged)
        return self._concat

    def matrix(self, vocab: Vocabulary) -> np.ndarray:
        """Document-by-term counts over ``vocab``, rows in ``doc_ids`` order."""
        key = vocab.digest
        if key not in self._matrices:
            self._matrices[key] = stack_tables(list(self._docs.values()), vocab)
        return self._matrices[key]

    def self_scores(self, vocab: Vocabulary, alpha: float = DEFAULT_ALPHA,
                    variant: str = DEFAULT_VARIANT) -> tuple[float, ...]:
        if len(self) < 2:
            raise ValueError(f"corpus {self.author!r} needs >= 2 documents for "
                             f"leave-one-out scores, has {len(self)}")
        key = (vocab.digest, float(alpha), variant)
        if key not in self._self_scores:
            mat = self.matrix(vocab)
            total = mat.sum(axis=0)
            self._self_scores[key] = tuple(
                hc_from_counts(row, total - row, alpha, variant).score for row in mat)
        return self._self_scores[key]


@dataclass(frozen=True)
class CandidateScore:
    author: str
    hc: float
    rank: int | None
    rhat: float | None
    self_excluded: bool
    delta: DiscriminatingSet | None = field(default=None, compare=False)


@dataclass(frozen=True)
class AttributionReport:
    doc_id: str
    candidates: tuple[CandidateScore, ...]
    chosen: str
    rule: str
    alpha: float
    variant: str
    vocab_digest: str

    def to_dict(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "candidates": [{"author": c.author, "hc": c.hc, "rank": c.rank, "rhat": c.rhat,
                            "self_excluded": c.self_excluded,
                            "delta_size": None if c.delta is None else len(c.delta)}
                           for c in self.candidates],
            "chosen": self.chosen,
            "rule": self.rule,
            "alpha": self.alpha,
            "variant": self.variant,
            "vocab_digest": self.vocab_digest,
        }


def concat_corpus(corpus: Corpus, leave_out: str | None = None) -> FrequencyTable:
    if leave_out is None:
        return corpus.concatenated
    rest = corpus.without(leave_out)
    if len(rest) == 0:
        log.warning("corpus %r is empty after leaving out %r", corpus.author, leave_out)
        return FrequencyTable({})
    return rest.concatenated


def _reference_counts(doc: Document, corpus: Corpus, vocab: Vocabulary) -> tuple[np.ndarray, bool]:
    mat = corpus.matrix(vocab)
    member = doc.doc_id in corpus
    if member:
        if len(corpus) < 2:
            raise ValueError(f"corpus {corpus.author!r} is empty once {doc.doc_id!r} is left out")
        row = corpus.doc_ids.index(doc.doc_id)
        return mat.sum(axis=0) - mat[row], True
    if len(corpus) == 0:
        raise ValueError(f"corpus {corpus.author!r} is empty")
    return mat.sum(axis=0), False


def doc_vs_corpus_score(doc: Document, corpus: Corpus, vocab: Vocabulary,
                        alpha: float = DEFAULT_ALPHA, variant: str = DEFAULT_VARIANT) -> float:
    """HC score of ``doc`` against the concatenated corpus, leaving the
    document out first when its id is a member."""
    ref, _ = _reference_counts(doc, corpus, vocab)
    return hc_from_counts(doc.table.vector(vocab), ref, alpha, variant).score


def corpus_self_scores(corpus: Corpus, vocab: Vocabulary, alpha: float = DEFAULT_ALPHA,
                       variant: str = DEFAULT_VARIANT) -> list[float]:
    return list(corpus.self_scores(vocab, alpha, variant))


def normalized_rank(score: float, self_scores: Sequence[float]) -> tuple[int, float]:
    """Rank of ``score`` among ``self_scores`` plus itself, over m + 1.

    Rank 1 is the smallest value; tied values share the largest rank.
    """
    rank = 1 + sum(1 for s in self_scores if s <= score)
    return rank, rank / (len(self_scores) + 1)


def rank_calibrate(doc: Document, corpus: Corpus, vocab: Vocabulary,
                   alpha: float = DEFAULT_ALPHA, variant: str = DEFAULT_VARIANT) -> float:
    if doc.doc_id in corpus:
        raise ValueError(f"{doc.doc_id!r} belongs to corpus {corpus.author!r}; "
                         "rank calibration needs an outside document")
    selfs = corpus.self_scores(vocab, alpha, variant)
    return normalized_rank(doc_vs_corpus_score(doc, corpus, vocab, alpha, variant), selfs)[1]


def attribute(doc: Document, corpora: Sequence[Corpus], rule: str = "min-rank",
              vocab: Vocabulary | None = None, alpha: float = DEFAULT_ALPHA,
              variant: str = DEFAULT_VARIANT, with_delta: bool = True) -> AttributionReport:
    """Score ``doc`` against every candidate corpus and pick an author.

    ``min-rank`` chooses the smallest normalized rank, ``min-hc`` the smallest
    raw HC score.  Remaining ties go to the smaller HC score, then to the
    lexicographically smaller author id.
    """
    if rule not in RULES:
        raise ValueError(f"rule must be one of {RULES}, got {rule!r}")
    if vocab is None:
        raise ValueError("a vocabulary is required")
    if len(corpora) < 2:
        raise ValueError("need at least two candidate corpora")
    authors = [c.author for c in corpora]
    if len(set(authors)) != len(authors):
        raise ValueError("candidate author ids must be unique")

    scored = []
    for corpus in corpora:
        member = doc.doc_id in corpus
        ref_corpus = corpus.without(doc.doc_id) if member else corpus
        if len(ref_corpus) == 0:
            raise ValueError(f"corpus {corpus.author!r} is empty once {doc.doc_id!r} is left out")
        delta = None
        if with_delta:
            sim = hc_sim(doc.table, ref_corpus.concatenated, vocab, alpha, variant)
            score, delta = sim.value, sim.delta
        else:
            score = doc_vs_corpus_score(doc, ref_corpus, vocab, alpha, variant)
        rank = rhat = None
        if rule == "min-rank":
            rank, rhat = normalized_rank(score, ref_corpus.self_scores(vocab, alpha, variant))
        scored.append(CandidateScore(corpus.author, score, rank, rhat, member, delta))

    if rule == "min-rank":
        best = min(scored, key=lambda c: (c.rhat, c.hc, c.author))
    else:
        best = min(scored, key=lambda c: (c.hc, c.author))
    return AttributionReport(doc.doc_id, tuple(scored), best.author, rule, float(alpha),
                             variant, vocab.digest)
