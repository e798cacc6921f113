"""Reading and writing the ``<root>/<author-id>/<doc-id>.txt`` corpus layout."""

from __future__ import annotations

from pathlib import Path

from .attribution import Corpus
from .text import FrequencyTable, TokenizerConfig, read_table

DOC_SUFFIXES = (".txt", ".csv")


def _doc_files(directory: Path):
    return sorted(p for p in directory.iterdir()
                  if p.is_file() and p.suffix.lower() in DOC_SUFFIXES)


def load_documents(directory: str | Path, cfg: TokenizerConfig | None = None) -> dict[str, FrequencyTable]:
    """Frequency tables of every ``.txt``/``.csv`` file in ``directory`` keyed by stem."""
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"not a directory: {directory}")
    docs = {}
    for path in _doc_files(directory):
        if path.stem in docs:
            raise ValueError(f"duplicate document id {path.stem!r} in {directory}")
        docs[path.stem] = read_table(path, cfg)
    return docs


def load_corpora(root: str | Path, cfg: TokenizerConfig | None = None,
                 authors: list[str] | None = None) -> dict[str, Corpus]:
    """One :class:`Corpus` per author subdirectory of ``root`` (sorted by id)."""
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(f"corpus root not found: {root}")
    dirs = sorted(p for p in root.iterdir() if p.is_dir() and not p.name.startswith("."))
    if authors is not None:
        wanted = set(authors)
        missing = wanted - {p.name for p in dirs}
        if missing:
            raise FileNotFoundError(f"author directories missing under {root}: {sorted(missing)}")
        dirs = [p for p in dirs if p.name in wanted]
    corpora = {}
    for d in dirs:
        docs = load_documents(d, cfg)
        if docs:
            corpora[d.name] = Corpus(d.name, docs)
    return corpora


def load_targets(paths, cfg: TokenizerConfig | None = None) -> dict[str, FrequencyTable]:
    """Documents from a mix of files and directories, keyed by file stem."""
    out: dict[str, FrequencyTable] = {}
    for p in map(Path, paths):
        if p.is_dir():
            items = load_documents(p, cfg).items()
        elif p.is_file():
            items = [(p.stem, read_table(p, cfg))]
        else:
            raise FileNotFoundError(f"no such file or directory: {p}")
        for doc_id, table in items:
            if doc_id in out:
                raise ValueError(f"duplicate document id {doc_id!r}")
            out[doc_id] = table
    return out
