"""The Federalist Papers: splitting the Project Gutenberg text and the
conventional authorship labels.

No text is bundled.  Point :func:`locate` (or the ``HCSIM_FEDERALIST``
environment variable) at either

* a directory in the corpus layout with ``hamilton/``, ``madison/`` and
  ``disputed/`` subdirectories, or
* the plain-text Gutenberg edition (ebook #18 or #1404).
"""

from __future__ import annotations

import os
import re
from pathlib import Path

ENV_VAR = "HCSIM_FEDERALIST"


def _expand(ranges: str) -> list[int]:
    out = []
    for part in ranges.split(","):
        lo, _, hi = part.partition("-")
        out.extend(range(int(lo), int(hi or lo) + 1))
    return out


HAMILTON = _expand("1,6-9,11-13,15-17,21-36,59-61,65-85")
MADISON = _expand("10,14,37-48")
JAY = _expand("2-5,64")
DISPUTED = _expand("49-58,62,63")
JOINT = _expand("18-20")

LABELS: dict[int, str] = {}
for _group, _name in ((HAMILTON, "hamilton"), (MADISON, "madison"), (JAY, "jay"),
                      (DISPUTED, "disputed"), (JOINT, "joint")):
    for _n in _group:
        LABELS[_n] = _name

_HEAD_RE = re.compile(r"^\s*(?:THE\s+)?FEDERALIST\.?\s+No\.?\s*(\d+)\.?\s*$",
                      re.IGNORECASE | re.MULTILINE)
_SALUTATION_RE = re.compile(r"^\s*To the People of the State of New York\s*[:.]?\s*$",
                            re.IGNORECASE | re.MULTILINE)
_SIGNATURE_RE = re.compile(r"^\s*PUBLIUS\.?\s*$", re.MULTILINE)


def _strip_gutenberg(text: str) -> str:
    start = re.search(r"^\*\*\*\s*START OF.*$", text, re.MULTILINE)
    end = re.search(r"^\*\*\*\s*END OF.*$", text, re.MULTILINE)
    return text[start.end() if start else 0: end.start() if end else len(text)]


def split_papers(text: str) -> dict[int, str]:
    """Body text of each paper keyed by number.

    Headings, the salutation line and the signature are removed.  When a
    number occurs twice (some editions print No. 70 twice) the first copy
    is kept.
    """
    text = _strip_gutenberg(text)
    heads = list(_HEAD_RE.finditer(text))
    papers: dict[int, str] = {}
    for h, nxt in zip(heads, heads[1:] + [None]):
        num = int(h.group(1))
        body = text[h.end(): nxt.start() if nxt else len(text)]
        sal = _SALUTATION_RE.search(body)
        if sal:
            body = body[sal.end():]
        body = _SIGNATURE_RE.split(body)[0]
        if num not in papers:
            papers[num] = body.strip()
    return papers


def write_layout(papers: dict[int, str], out: str | Path,
                 groups=("hamilton", "madison", "disputed")) -> Path:
    out = Path(out)
    for num, body in sorted(papers.items()):
        label = LABELS.get(num)
        if label in groups:
            d = out / label
            d.mkdir(parents=True, exist_ok=True)
            (d / f"fed{num:02d}.txt").write_text(body + "\n", encoding="utf-8")
    return out


def locate(path: str | Path | None = None, workdir: str | Path | None = None) -> Path | None:
    """Corpus-layout directory for the Federalist data, or ``None`` if absent.

    A Gutenberg text file is split into ``workdir`` (default: next to it).
    """
    candidate = path or os.environ.get(ENV_VAR)
    if not candidate:
        return None
    candidate = Path(candidate)
    if candidate.is_dir():
        if all((candidate / g).is_dir() for g in ("hamilton", "madison", "disputed")):
            return candidate
        return None
    if candidate.is_file():
        papers = split_papers(candidate.read_text(encoding="utf-8", errors="replace"))
        if len(papers) < 70:
            raise ValueError(f"{candidate}: found only {len(papers)} papers")
        target = Path(workdir) if workdir else candidate.with_name(candidate.stem + "_layout")
        return write_layout(papers, target)
    return None
