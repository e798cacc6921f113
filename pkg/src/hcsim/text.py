"""Tokenization, term counting and vocabulary construction."""

from __future__ import annotations

import csv
import hashlib
import io
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

NGRAM_JOINER = "_"

# letters only: digits, underscore and punctuation all act as separators
_WORD_RE = re.compile(r"[^\W\d_]+")


@dataclass(frozen=True)
class TokenizerConfig:
    lowercase: bool = True
    ngram_orders: frozenset[int] = frozenset({1})
    stop_list: frozenset[str] | None = None
    min_token_len: int = 1

    def __post_init__(self):
        orders = frozenset(int(o) for o in self.ngram_orders)
        if not orders:
            raise ValueError("ngram_orders must be non-empty")
        if min(orders) < 1:
            raise ValueError("every n-gram order must be >= 1")
        if self.min_token_len < 1:
            raise ValueError("min_token_len must be >= 1")
        object.__setattr__(self, "ngram_orders", orders)
        if self.stop_list is not None:
            stops = frozenset(self.stop_list)
            if self.lowercase:
                stops = frozenset(s.lower() for s in stops)
            object.__setattr__(self, "stop_list", stops)


@dataclass(frozen=True)
class FrequencyTable:
    """Immutable term -> count map with a cached total."""

    counts: Mapping[str, int]
    total: int = field(init=False)

    def __post_init__(self):
        counts = {}
        for term, c in self.counts.items():
            c = int(c)
            if c < 0:
                raise ValueError(f"negative count for term {term!r}")
            counts[term] = c
        object.__setattr__(self, "counts", MappingProxyType(counts))
        object.__setattr__(self, "total", sum(counts.values()))

    def __getitem__(self, term: str) -> int:
        return self.counts.get(term, 0)

    def __len__(self) -> int:
        return len(self.counts)

    def __iter__(self):
        return iter(self.counts)

    def __eq__(self, other):
        if not isinstance(other, FrequencyTable):
            return NotImplemented
        return dict(self.counts) == dict(other.counts)

    def __hash__(self):
        return hash(frozenset(self.counts.items()))

    def vector(self, vocab: "Vocabulary") -> np.ndarray:
        """Counts aligned with ``vocab.terms`` (missing terms are 0)."""
        return np.fromiter((self.counts.get(t, 0) for t in vocab.terms),
                           dtype=np.int64, count=vocab.size)

    @classmethod
    def from_vector(cls, vec, vocab: "Vocabulary") -> "FrequencyTable":
        return cls(dict(zip(vocab.terms, (int(v) for v in vec))))

    def __add__(self, other: "FrequencyTable") -> "FrequencyTable":
        merged = dict(self.counts)
        for t, c in other.counts.items():
            merged[t] = merged.get(t, 0) + c
        return FrequencyTable(merged)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["term", "count"])
        for term in sorted(self.counts):
            w.writerow([term, self.counts[term]])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "FrequencyTable":
        rows = csv.reader(io.StringIO(text))
        header = next(rows, None)
        if header is None or [h.strip() for h in header] != ["term", "count"]:
            raise ValueError("frequency-table CSV must start with header 'term,count'")
        counts = {}
        for lineno, row in enumerate(rows, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise ValueError(f"line {lineno}: expected 2 fields, got {len(row)}")
            term, raw = row
            try:
                c = int(raw)
            except ValueError:
                raise ValueError(f"line {lineno}: count {raw!r} is not an integer") from None
            if term in counts:
                raise ValueError(f"line {lineno}: duplicate term {term!r}")
            counts[term] = c
        return cls(counts)


@dataclass(frozen=True)
class Vocabulary:
    terms: tuple[str, ...]
    warning: str | None = None

    def __post_init__(self):
        terms = tuple(self.terms)
        if len(set(terms)) != len(terms):
            raise ValueError("vocabulary terms must be unique")
        object.__setattr__(self, "terms", terms)

    @property
    def size(self) -> int:
        return len(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __contains__(self, term):
        return term in self._index

    @property
    def _index(self) -> dict[str, int]:
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = {t: i for i, t in enumerate(self.terms)}
            object.__setattr__(self, "_idx", idx)
        return idx

    def index(self, term: str) -> int:
        return self._index[term]

    @property
    def digest(self) -> str:
        return hashlib.sha256("\n".join(self.terms).encode("utf-8")).hexdigest()


def tokenize_terms(text: str, cfg: TokenizerConfig | None = None) -> list[str]:
    """Split ``text`` into words and append the requested n-grams.

    All unigrams come first (if order 1 is requested), then bigrams, and so on,
    each in document order.  Stop-listed and short tokens are removed before
    n-grams are formed.
    """
    cfg = cfg or TokenizerConfig()
    if cfg.lowercase:
        text = text.lower()
    words = [w for w in _WORD_RE.findall(text) if len(w) >= cfg.min_token_len]
    if cfg.stop_list:
        words = [w for w in words if w not in cfg.stop_list]
    out: list[str] = []
    for order in sorted(cfg.ngram_orders):
        if order == 1:
            out.extend(words)
        else:
            out.extend(NGRAM_JOINER.join(words[i:i + order])
                       for i in range(len(words) - order + 1))
    return out


def count_terms(terms: Iterable[str], vocab: Vocabulary | None = None) -> FrequencyTable:
    counts = Counter(terms)
    if vocab is not None:
        counts = {t: c for t, c in counts.items() if t in vocab}
    return FrequencyTable(counts)


def build_vocabulary(tables: Iterable[FrequencyTable], n: int, mode: str = "top",
                     path: str | Path | None = None) -> Vocabulary:
    """Pick ``n`` terms, either the most frequent across ``tables`` or the head
    of an external one-term-per-line file.

    Ties in the frequency ranking are broken lexicographically.  If fewer than
    ``n`` terms exist, all of them are returned and ``Vocabulary.warning`` is set.
    """
    if n < 1:
        raise ValueError("vocabulary size must be >= 1")
    if mode == "top":
        totals: Counter = Counter()
        for t in tables:
            totals.update(t.counts)
        ranked = sorted((term for term, c in totals.items() if c > 0),
                        key=lambda term: (-totals[term], term))
    elif mode in ("file", "external"):
        if path is None:
            raise ValueError("external-list mode needs a file path")
        path = Path(path)
        if not path.is_file():
            raise FileNotFoundError(f"vocabulary file not found: {path}")
        ranked = []
        seen = set()
        for line in path.read_text(encoding="utf-8").splitlines():
            term = line.strip()
            if term and term not in seen:
                seen.add(term)
                ranked.append(term)
    else:
        raise ValueError(f"unknown vocabulary mode {mode!r}")

    warning = None
    if len(ranked) < n:
        warning = f"only {len(ranked)} distinct terms available, fewer than requested {n}"
    return Vocabulary(tuple(ranked[:n]), warning=warning)


def project_table(table: FrequencyTable, vocab: Vocabulary) -> FrequencyTable:
    return FrequencyTable({t: table[t] for t in vocab.terms})


def read_table(path: str | Path, cfg: TokenizerConfig | None = None) -> FrequencyTable:
    """Load a ``.csv`` frequency table, or tokenize and count any other text file."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".csv":
        try:
            return FrequencyTable.from_csv(text)
        except ValueError as e:
            raise ValueError(f"{path}: {e}") from None
    return count_terms(tokenize_terms(text, cfg))


def load_stop_list(path: str | Path) -> frozenset[str]:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"stop-list file not found: {path}")
    return frozenset(w.strip() for w in path.read_text(encoding="utf-8").split() if w.strip())


def stack_tables(tables: Sequence[FrequencyTable], vocab: Vocabulary) -> np.ndarray:
    """Document-by-term count matrix over ``vocab``."""
    mat = np.zeros((len(tables), vocab.size), dtype=np.int64)
    idx = vocab._index
    for i, table in enumerate(tables):
        for term, c in table.counts.items():
            j = idx.get(term)
            if j is not None:
                mat[i, j] = c
    return mat
