"""Similarity indices between two word-frequency tables.

Smaller values mean more similar for every index here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .binom import PValueRecord, count_pvalues
from .hc import (DEFAULT_ALPHA, DEFAULT_VARIANT, DiscriminatingSet, HCResult,
                 compute_hc, discriminating_set)
from .text import FrequencyTable, Vocabulary

LAMBDA_PRESETS = {"g2": 0.0, "cressie-read": 2.0 / 3.0, "pearson": 1.0}


@dataclass(frozen=True)
class SimilarityIndex:
    value: float
    statistic: str
    hc: HCResult | None = None
    delta: DiscriminatingSet | None = None
    records: tuple[PValueRecord, ...] | None = None


def hc_from_counts(c1, c2, alpha: float = DEFAULT_ALPHA,
                   variant: str = DEFAULT_VARIANT) -> HCResult:
    """HC score for aligned count vectors, skipping record construction."""
    _, _, _, _, pi = count_pvalues(c1, c2)
    return compute_hc(pi, alpha, variant)


def hc_sim(t1: FrequencyTable, t2: FrequencyTable, vocab: Vocabulary,
           alpha: float = DEFAULT_ALPHA, variant: str = DEFAULT_VARIANT) -> SimilarityIndex:
    """Per-term exact binomial tests combined by Higher Criticism."""
    c1, c2 = t1.vector(vocab), t2.vector(vocab)
    if c1.sum() == 0 or c2.sum() == 0:
        raise ValueError("both tables need at least one in-vocabulary occurrence")
    tested, x, n, p_w, pi = count_pvalues(c1, c2)
    terms = [t for t, keep in zip(vocab.terms, tested) if keep]
    records = tuple(PValueRecord(t, int(a), int(b), float(c), float(d))
                    for t, a, b, c, d in zip(terms, x, n, p_w, pi))
    hc = compute_hc(pi, alpha, variant)
    return SimilarityIndex(hc.score, "hc", hc=hc, delta=discriminating_set(records, hc),
                           records=records)


def cosine_from_counts(c1, c2) -> float:
    c1 = np.asarray(c1, dtype=float)
    c2 = np.asarray(c2, dtype=float)
    n1, n2 = math.sqrt(float(c1 @ c1)), math.sqrt(float(c2 @ c2))
    if n1 == 0 or n2 == 0:
        raise ValueError("cosine index undefined for an all-zero count vector")
    # 1 - cos = |u1 - u2|^2 / 2 for unit vectors; exact zero for proportional inputs
    diff = c1 / n1 - c2 / n2
    return min(1.0, max(0.0, 0.5 * float(diff @ diff)))


def cosine_index(t1: FrequencyTable, t2: FrequencyTable, vocab: Vocabulary) -> SimilarityIndex:
    """One minus the cosine of the angle between the two count vectors."""
    return SimilarityIndex(cosine_from_counts(t1.vector(vocab), t2.vector(vocab)), "cosine")


def divergence_from_counts(c1, c2, lam: float, classical_factor: bool = True) -> float:
    if lam <= -1:
        raise ValueError(f"power divergence needs lambda > -1, got {lam}")
    obs = np.vstack([np.asarray(c1, dtype=float), np.asarray(c2, dtype=float)])
    pooled = obs.sum(axis=0)
    keep = pooled > 0
    n_prime = int(keep.sum())
    if n_prime <= 1:
        raise ValueError(f"need at least two terms with nonzero pooled count, got {n_prime}")
    obs = obs[:, keep]
    pooled = pooled[keep]
    sizes = obs.sum(axis=1, keepdims=True)
    expected = pooled * sizes / sizes.sum()

    pos = obs > 0  # zero cells contribute nothing for lambda > -1
    o, e = obs[pos], expected[pos]
    if lam == 0:
        cells = o * np.log(o / e)
        factor = 2.0
    else:
        cells = o * ((o / e) ** lam - 1.0)
        factor = 2.0 / (lam * (lam + 1.0))
    total = math.fsum(cells.tolist())
    if classical_factor:
        total *= factor
    return total / (n_prime - 1)


def power_divergence(t1: FrequencyTable, t2: FrequencyTable, vocab: Vocabulary,
                     lam: float, classical_factor: bool = True) -> SimilarityIndex:
    """Two-sample Cressie-Read divergence normalized by N' - 1.

    Expected counts come from pooling the two tables.  ``lam = 0`` is the
    likelihood-ratio limit G^2, ``lam = 1`` Pearson's chi-squared.  With
    ``classical_factor=False`` the 2 / (lam (lam + 1)) scaling is dropped.
    """
    value = divergence_from_counts(t1.vector(vocab), t2.vector(vocab), lam, classical_factor)
    return SimilarityIndex(value, f"divergence({lam:g})")
