"""k-fold cross-validated attribution accuracy over a labeled collection."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np
from sklearn.metrics import f1_score

from .attribution import Corpus, Document, attribute
from .hc import DEFAULT_ALPHA, DEFAULT_VARIANT
from .text import FrequencyTable, Vocabulary, build_vocabulary


def fold_assignment(doc_ids, k: int, seed: int) -> dict[str, int]:
    """Deterministic fold index per document, a function of (seed, sorted ids)."""
    ids = sorted(doc_ids)
    if k < 2:
        raise ValueError("need at least 2 folds")
    if k > len(ids):
        raise ValueError(f"{k} folds requested but only {len(ids)} documents")
    perm = np.random.default_rng(seed).permutation(len(ids))
    return {ids[j]: pos % k for pos, j in enumerate(perm)}


@dataclass(frozen=True)
class FoldResult:
    fold: int
    n_test: int
    accuracy: float
    macro_f1: float


@dataclass(frozen=True)
class CvSummary:
    folds: tuple[FoldResult, ...]
    predictions: tuple[tuple[str, str, str], ...]   # (doc_id, true author, predicted)

    @property
    def accuracy(self) -> float:
        return float(np.mean([f.accuracy for f in self.folds]))

    @property
    def macro_f1(self) -> float:
        return float(np.mean([f.macro_f1 for f in self.folds]))


def eval_cv(corpora: Mapping[str, Corpus], folds: int = 10, seed: int = 0,
            rule: str = "min-hc", vocab_builder: Callable[[list[FrequencyTable]], Vocabulary] | None = None,
            alpha: float = DEFAULT_ALPHA, variant: str = DEFAULT_VARIANT,
            vocab_size: int = 1000) -> CvSummary:
    """Hold out each fold in turn, rebuild author corpora from the rest and
    attribute every held-out document.

    Document ids must be unique across authors.  By default the vocabulary is
    re-derived from each fold's training documents.
    """
    owner: dict[str, str] = {}
    for author, corpus in corpora.items():
        for doc_id in corpus.doc_ids:
            if doc_id in owner:
                raise ValueError(f"document id {doc_id!r} appears under two authors")
            owner[doc_id] = author
    assignment = fold_assignment(owner, folds, seed)
    if vocab_builder is None:
        vocab_builder = lambda tables: build_vocabulary(tables, vocab_size)  # noqa: E731

    results, preds = [], []
    for f in range(folds):
        train = {}
        for author, corpus in sorted(corpora.items()):
            docs = {d: corpus.table(d) for d in corpus.doc_ids if assignment[d] != f}
            if docs:
                train[author] = Corpus(author, docs)
        vocab = vocab_builder([t for c in train.values() for t in
                               (c.table(d) for d in c.doc_ids)])
        candidates = list(train.values())
        truth, guess = [], []
        for doc_id in sorted(d for d, fi in assignment.items() if fi == f):
            author = owner[doc_id]
            doc = Document(doc_id, corpora[author].table(doc_id), author)
            report = attribute(doc, candidates, rule, vocab, alpha, variant, with_delta=False)
            truth.append(author)
            guess.append(report.chosen)
            preds.append((doc_id, author, report.chosen))
        acc = float(np.mean(np.asarray(truth) == np.asarray(guess)))
        f1 = float(f1_score(truth, guess, average="macro", zero_division=0))
        results.append(FoldResult(f, len(truth), acc, f1))
    return CvSummary(tuple(results), tuple(preds))
