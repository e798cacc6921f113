"""Exact two-sided binomial tests under the binomial allocation model.

For a term ``w`` with ``x`` occurrences in the first table and ``n_w``
occurrences overall, the null law of ``x`` is ``Bin(n_w, p_w)`` where ``p_w``
is the share of the first table among all *other* term occurrences.
"""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, xlog1py, xlogy

from .text import FrequencyTable, Vocabulary

log = logging.getLogger(__name__)

# relative slack for |k - np| >= |x - np|; absorbs rounding in n*p so that
# mirror-image outcomes (k = 2np - x) are kept
_TIE_RTOL = 1e-12

# cap on the flattened k-grid evaluated per batch
_MAX_FLAT = 1 << 22


@dataclass(frozen=True)
class PValueRecord:
    term: str
    x: int
    n_w: int
    p_w: float
    pi: float


def _check_args(x, n, p):
    if np.any(n < 0) or np.any(x < 0) or np.any(x > n):
        raise ValueError("need 0 <= x <= n")
    if np.any(~np.isfinite(p)) or np.any(p < 0) or np.any(p > 1):
        raise ValueError("p must lie in [0, 1]")


def _two_sided_batch(x: np.ndarray, n: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Sum Bin(n, p) pmf over {k : |k - np| >= |x - np|} for each entry."""
    mean = n * p
    dev = np.abs(x - mean)
    thresh = dev - _TIE_RTOL * np.maximum(n, 1)

    lengths = n + 1
    starts = np.concatenate(([0], np.cumsum(lengths)[:-1]))
    owner = np.repeat(np.arange(len(n)), lengths)
    k = np.arange(lengths.sum()) - starts[owner]

    nn = n[owner]
    pp = p[owner]
    log_fact = gammaln(np.arange(int(n.max()) + 2, dtype=float))[1:]  # log(j!) at index j
    logpmf = (log_fact[nn] - log_fact[k] - log_fact[nn - k]
              + xlogy(k, pp) + xlog1py(nn - k, -pp))
    pmf = np.where(np.abs(k - mean[owner]) >= thresh[owner], np.exp(logpmf), 0.0)
    return np.minimum(np.add.reduceat(pmf, starts), 1.0)


def binom_two_sided(x, n, p) -> np.ndarray:
    """Vectorized exact two-sided binomial P-values."""
    x = np.atleast_1d(np.asarray(x, dtype=np.int64))
    n = np.atleast_1d(np.asarray(n, dtype=np.int64))
    p = np.atleast_1d(np.asarray(p, dtype=float))
    x, n, p = np.broadcast_arrays(x, n, p)
    _check_args(x, n, p)
    out = np.empty(x.shape, dtype=float)
    if x.size == 0:
        return out
    xf, nf, pf, of = x.ravel(), n.ravel(), p.ravel(), out.reshape(-1)
    # split into batches of bounded flattened size
    sizes = np.cumsum(nf + 1)
    lo = 0
    while lo < len(nf):
        base = sizes[lo - 1] if lo else 0
        hi = int(np.searchsorted(sizes, base + _MAX_FLAT, side="right"))
        hi = max(hi, lo + 1)
        of[lo:hi] = _two_sided_batch(xf[lo:hi], nf[lo:hi], pf[lo:hi])
        lo = hi
    return out


def exact_binom_two_sided(x: int, n: int, p: float) -> float:
    """P(|Bin(n, p) - np| >= |x - np|).

    >>> exact_binom_two_sided(9, 10, 0.5) == 22 / 1024
    True
    """
    if not (0 <= x <= n):
        raise ValueError(f"need 0 <= x <= n, got x={x}, n={n}")
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return float(binom_two_sided(x, n, p)[0])


def count_pvalues(c1: np.ndarray, c2: np.ndarray):
    """Per-term tests for two aligned count vectors.

    Returns ``(tested, x, n_w, p_w, pi)``; ``tested`` is a boolean mask over the
    input positions and the other arrays hold values for tested positions only.
    A position is tested when ``n_w > 0`` and the remaining terms are not all
    empty.  The result is exactly invariant to swapping ``c1`` and ``c2``
    (up to ``x -> n_w - x`` and ``p_w -> 1 - p_w``).
    """
    c1 = np.asarray(c1, dtype=np.int64)
    c2 = np.asarray(c2, dtype=np.int64)
    if c1.shape != c2.shape:
        raise ValueError("count vectors must have equal length")
    n1, n2 = int(c1.sum()), int(c2.sum())
    n_w = c1 + c2
    rest1 = n1 - c1
    rest2 = n2 - c2
    degenerate = (n_w > 0) & (rest1 + rest2 == 0)
    if degenerate.any():
        log.warning("skipping %d term(s) with no remaining reference counts",
                    int(degenerate.sum()))
    tested = (n_w > 0) & ~degenerate

    x = c1[tested]
    n = n_w[tested]
    a = rest1[tested]
    b = rest2[tested]
    p_w = a / (a + b)

    # evaluate every test in a canonical orientation so both argument orders
    # run the identical floating-point computation
    flip = (a > b) | ((a == b) & (2 * x > n))
    xc = np.where(flip, n - x, x)
    pc = np.where(flip, b / (a + b), p_w)
    pi = binom_two_sided(xc, n, pc) if n.size else np.empty(0)
    return tested, x, n, p_w, pi


def word_pvalues(t1: FrequencyTable, t2: FrequencyTable, vocab: Vocabulary) -> list[PValueRecord]:
    """One exact binomial test per vocabulary term present in either table."""
    tested, x, n, p_w, pi = count_pvalues(t1.vector(vocab), t2.vector(vocab))
    terms = [t for t, keep in zip(vocab.terms, tested) if keep]
    return [PValueRecord(term, int(xi), int(ni), float(pw), float(p))
            for term, xi, ni, pw, p in zip(terms, x, n, p_w, pi)]


def pvalues_to_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["term", "x", "n_w", "p_w", "pi"])
    for r in sorted(records, key=lambda r: (r.pi, r.term)):
        w.writerow([r.term, r.x, r.n_w, repr(r.p_w), repr(r.pi)])
    return buf.getvalue()
