"""Higher Criticism of a batch of P-values and the induced feature set."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

DEFAULT_ALPHA = 0.3
DEFAULT_VARIANT = "dagger"
VARIANTS = ("star", "dagger")


class NoAdmissibleIndex(ValueError):
    """HC-dagger found no P-value at or above 1/N among the candidate ranks."""


@dataclass(frozen=True)
class HCResult:
    score: float
    i_star: int
    threshold: float
    alpha: float
    variant: str
    n_tested: int


@dataclass(frozen=True)
class DiscriminatingSet:
    terms: tuple[str, ...]
    pvalues: tuple[float, ...]
    # +1: relatively more frequent in the first table, -1: in the second, 0: neither
    directions: tuple[int, ...]

    def __len__(self):
        return len(self.terms)

    def __contains__(self, term):
        return term in self.terms

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["term", "pi", "direction"])
        for row in sorted(zip(self.terms, self.pvalues, self.directions),
                          key=lambda r: (r[1], r[0])):
            w.writerow([row[0], repr(row[1]), row[2]])
        return buf.getvalue()


def hc_curve(sorted_pvalues: np.ndarray, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """Standardized deviations z_i for i = 1..m, m = min(floor(alpha N), N - 1)."""
    n = len(sorted_pvalues)
    m = min(int(math.floor(alpha * n)), n - 1)
    i = np.arange(1, m + 1)
    u = i / n
    z = math.sqrt(n) * (u - sorted_pvalues[:m]) / np.sqrt(u * (1 - u))
    return i, z


def compute_hc(pvalues: Sequence[float], alpha: float = DEFAULT_ALPHA,
               variant: str = DEFAULT_VARIANT) -> HCResult:
    """HC score of ``pvalues``.

    ``star`` maximizes over ranks 1 <= i <= alpha N; ``dagger`` only over ranks
    whose order statistic is at least 1/N.  The last rank i = N is never used
    because the standardization vanishes there.  Among equal maxima the
    smallest rank wins.
    """
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    if not (0 < alpha <= 1):
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    pv = np.sort(np.asarray(pvalues, dtype=float), kind="stable")
    n = len(pv)
    if n == 0:
        raise ValueError("need at least one P-value")
    i, z = hc_curve(pv, alpha)
    if len(i) == 0:
        raise ValueError(f"no admissible rank: floor(alpha*N) = {math.floor(alpha * n)} "
                         f"with N = {n}")
    if variant == "dagger":
        ok = pv[: len(i)] >= 1.0 / n
        if not ok.any():
            raise NoAdmissibleIndex(
                f"all {len(i)} candidate P-values are below 1/N = {1.0 / n:.3g}")
        z = np.where(ok, z, -np.inf)
    k = int(np.argmax(z))
    return HCResult(score=float(z[k]), i_star=int(i[k]), threshold=float(pv[k]),
                    alpha=float(alpha), variant=variant, n_tested=n)


def discriminating_set(records, hc: HCResult) -> DiscriminatingSet:
    """Records whose P-value is at or below the HC threshold, with the side on
    which each term is over-represented."""
    chosen = [r for r in records if r.pi <= hc.threshold]
    directions = []
    for r in chosen:
        excess = r.x - r.n_w * r.p_w
        directions.append(int(np.sign(excess)) if abs(excess) > 1e-9 * max(r.n_w, 1) else 0)
    return DiscriminatingSet(tuple(r.term for r in chosen),
                             tuple(r.pi for r in chosen), tuple(directions))
