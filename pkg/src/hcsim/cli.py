"""Command-line entry point: ``hcsim <subcommand> ...``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import tempfile
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .attribution import Document, attribute
from .binom import pvalues_to_csv
from .corpora import load_corpora, load_targets
from .diagnostics import (RareWeakConfig, averaged_profiles, profiles_to_csv,
                          simulate_rare_weak, thresholds_to_csv, write_simulation)
from .evaluation import eval_cv
from .hc import DEFAULT_ALPHA, DEFAULT_VARIANT, VARIANTS
from .similarity import LAMBDA_PRESETS, cosine_index, hc_sim, power_divergence
from .text import (FrequencyTable, TokenizerConfig, build_vocabulary, load_stop_list,
                   read_table)

log = logging.getLogger("hcsim")


@dataclass(frozen=True)
class RunConfig:
    command: str
    vocab_size: int
    vocab_mode: str
    vocab_file: str | None
    alpha: float
    variant: str
    rule: str
    ngrams: tuple[int, ...]
    stoplist: str | None
    seed: int
    out: str | None

    def to_dict(self):
        d = asdict(self)
        d["ngrams"] = list(self.ngrams)
        return d


class CliError(Exception):
    pass


def _ngrams(value: str) -> tuple[int, ...]:
    try:
        orders = tuple(sorted({int(v) for v in value.split(",") if v.strip()}))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad n-gram orders {value!r}") from None
    if not orders or min(orders) < 1:
        raise argparse.ArgumentTypeError("n-gram orders must be integers >= 1")
    return orders


def _alpha(value: str) -> float:
    a = float(value)
    if not 0 < a <= 1:
        raise argparse.ArgumentTypeError("alpha must lie in (0, 1]")
    return a


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--vocab-size", type=int, default=1000,
                        help="number of most frequent terms in the vocabulary (default 1000)")
    common.add_argument("--vocab-file", help="take the vocabulary from this file, one term per line")
    common.add_argument("--alpha", type=_alpha, default=DEFAULT_ALPHA,
                        help=f"HC search fraction (default {DEFAULT_ALPHA})")
    common.add_argument("--variant", choices=VARIANTS, default=DEFAULT_VARIANT)
    common.add_argument("--rule", choices=("min-rank", "min-hc"), default="min-rank")
    common.add_argument("--ngrams", type=_ngrams, default=(1,),
                        help="comma-separated n-gram orders (default 1)")
    common.add_argument("--stoplist", help="file of terms to drop before counting")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="output directory")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="hcsim", description=__doc__)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("ingest", parents=[common], help="write term,count CSV per document")
    s.add_argument("inputs", nargs="+", help="text files, document directories or a corpus root")

    s = sub.add_parser("compare", parents=[common], help="similarity indices for two documents")
    s.add_argument("first")
    s.add_argument("second")

    s = sub.add_parser("attribute", parents=[common], help="attribute disputed documents")
    s.add_argument("--corpora", required=True, help="root of <author>/<doc>.txt tree")
    s.add_argument("--authors", help="comma-separated subset of author directories")
    s.add_argument("disputed", nargs="+", help="documents or directories to attribute")

    s = sub.add_parser("eval-cv", parents=[common], help="k-fold attribution accuracy")
    s.add_argument("--corpora", required=True)
    s.add_argument("--folds", type=int, default=10)

    s = sub.add_parser("diagnose", parents=[common], help="CV by P-value rank profiles")
    s.add_argument("--corpora", required=True)
    s.add_argument("--pairs", type=int, default=1000)
    s.add_argument("--k", type=int, default=50)

    s = sub.add_parser("simulate", parents=[common], help="write synthetic rare/weak corpora")
    s.add_argument("--n-terms", type=int, default=1000)
    s.add_argument("--docs", type=int, default=20)
    s.add_argument("--doc-length", type=int, default=2000)
    s.add_argument("--epsilon", type=float, default=0.02)
    s.add_argument("--shift", type=float, default=2.0)
    s.add_argument("--zipf", type=float, default=1.0)
    return p


def _run_config(args) -> RunConfig:
    for attr in ("vocab_file", "stoplist"):
        path = getattr(args, attr)
        if path and not Path(path).is_file():
            raise CliError(f"--{attr.replace('_', '-')}: file not found: {path}")
    if args.vocab_size < 1:
        raise CliError("--vocab-size must be >= 1")
    return RunConfig(args.command, args.vocab_size, "file" if args.vocab_file else "top",
                     args.vocab_file, args.alpha, args.variant, args.rule, tuple(args.ngrams),
                     args.stoplist, args.seed, args.out)


def _tokenizer(cfg: RunConfig) -> TokenizerConfig:
    stops = load_stop_list(cfg.stoplist) if cfg.stoplist else None
    return TokenizerConfig(ngram_orders=frozenset(cfg.ngrams), stop_list=stops)


def _vocabulary(cfg: RunConfig, tables):
    if cfg.vocab_file:
        vocab = build_vocabulary([], cfg.vocab_size, mode="file", path=cfg.vocab_file)
    else:
        vocab = build_vocabulary(tables, cfg.vocab_size)
    if vocab.warning:
        log.warning(vocab.warning)
    return vocab


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n"


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _commit(out: str | None, files: dict[str, str]) -> None:
    """Write all report files at once, after every computation has finished."""
    if not out:
        raise CliError("--out is required for this command")
    root = Path(out)
    root.mkdir(parents=True, exist_ok=True)
    staged = []
    try:
        for rel, content in sorted(files.items()):
            target = root / rel
            target.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=".tmp-")
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(content)
            staged.append((tmp, target))
    except BaseException:
        for tmp, _ in staged:
            Path(tmp).unlink(missing_ok=True)
        raise
    for tmp, target in staged:
        os.replace(tmp, target)


def cmd_ingest(args, cfg: RunConfig) -> dict[str, str]:
    tok = _tokenizer(cfg)
    vocab = build_vocabulary([], cfg.vocab_size, "file", cfg.vocab_file) if cfg.vocab_file else None
    files = {}
    for raw in args.inputs:
        path = Path(raw)
        if path.is_file():
            pairs = [(Path(path.stem + ".csv"), path)]
        elif path.is_dir():
            subdirs = sorted(p for p in path.iterdir() if p.is_dir() and not p.name.startswith("."))
            docs = sorted(p for p in path.iterdir() if p.is_file() and p.suffix in (".txt", ".csv"))
            pairs = [(Path(p.stem + ".csv"), p) for p in docs]
            for d in subdirs:
                pairs += [(Path(d.name) / (p.stem + ".csv"), p) for p in sorted(d.iterdir())
                          if p.is_file() and p.suffix in (".txt", ".csv")]
        else:
            raise CliError(f"no such file or directory: {raw}")
        for rel, src in pairs:
            table = read_table(src, tok)
            if vocab is not None:
                table = FrequencyTable({t: c for t, c in table.counts.items() if t in vocab})
            key = rel.as_posix()
            if key in files:
                raise CliError(f"two inputs map to the same output {key}")
            files[key] = table.to_csv()
    files["run_config.json"] = _json(cfg.to_dict())
    return files


def cmd_compare(args, cfg: RunConfig) -> dict[str, str]:
    tok = _tokenizer(cfg)
    t1, t2 = read_table(args.first, tok), read_table(args.second, tok)
    vocab = _vocabulary(cfg, [t1, t2])
    sim = hc_sim(t1, t2, vocab, cfg.alpha, cfg.variant)
    indices = {"hc": sim.value, "hc_threshold": sim.hc.threshold, "hc_i_star": sim.hc.i_star,
               "n_tested": sim.hc.n_tested, "delta_size": len(sim.delta),
               "cosine": cosine_index(t1, t2, vocab).value}
    for name, lam in LAMBDA_PRESETS.items():
        indices[f"divergence_{name}"] = power_divergence(t1, t2, vocab, lam).value
    print(_json({"first": args.first, "second": args.second, "indices": indices}), end="")
    if not cfg.out:
        return {}
    rows = [["statistic", "value"]] + [[k, repr(v)] for k, v in indices.items()]
    return {"indices.csv": _csv(rows), "delta.csv": sim.delta.to_csv(),
            "pvalues.csv": pvalues_to_csv(sim.records),
            "run_config.json": _json(cfg.to_dict())}


def cmd_attribute(args, cfg: RunConfig) -> dict[str, str]:
    tok = _tokenizer(cfg)
    authors = args.authors.split(",") if args.authors else None
    corpora = load_corpora(args.corpora, tok, authors)
    if len(corpora) < 2:
        raise CliError(f"need at least two author corpora under {args.corpora}")
    targets = load_targets(args.disputed, tok)
    tables = [c.table(d) for c in corpora.values() for d in c.doc_ids] + list(targets.values())
    vocab = _vocabulary(cfg, tables)
    files = {}
    for doc_id, table in sorted(targets.items()):
        report = attribute(Document(doc_id, table), list(corpora.values()), cfg.rule, vocab,
                           cfg.alpha, cfg.variant)
        body = report.to_dict()
        body["run_config"] = cfg.to_dict()
        files[f"{doc_id}.json"] = _json(body)
        detail = ", ".join(f"{c.author}: hc={c.hc:.4f}" + (f" rhat={c.rhat:.3f}" if c.rhat is not None else "")
                           for c in report.candidates)
        print(f"{doc_id}\t{report.chosen}\t{detail}")
    files["run_config.json"] = _json(cfg.to_dict())
    return files


def cmd_eval_cv(args, cfg: RunConfig) -> dict[str, str]:
    tok = _tokenizer(cfg)
    corpora = load_corpora(args.corpora, tok)
    if len(corpora) < 2:
        raise CliError(f"need at least two author corpora under {args.corpora}")
    builder = None
    if cfg.vocab_file:
        fixed = _vocabulary(cfg, [])
        builder = lambda tables: fixed  # noqa: E731
    summary = eval_cv(corpora, args.folds, cfg.seed, cfg.rule, builder, cfg.alpha,
                      cfg.variant, cfg.vocab_size)
    rows = [["fold", "n_test", "accuracy", "macro_f1"]]
    rows += [[f.fold, f.n_test, repr(f.accuracy), repr(f.macro_f1)] for f in summary.folds]
    rows.append(["mean", sum(f.n_test for f in summary.folds), repr(summary.accuracy),
                 repr(summary.macro_f1)])
    print(f"accuracy={summary.accuracy:.4f} macro_f1={summary.macro_f1:.4f} "
          f"folds={len(summary.folds)}")
    preds = [["doc_id", "author", "predicted"]] + [list(p) for p in summary.predictions]
    return {"eval_summary.csv": "# macro_f1 = unweighted mean of per-author F1, per fold\n"
                                + _csv(rows),
            "predictions.csv": _csv(preds), "run_config.json": _json(cfg.to_dict())}


def cmd_diagnose(args, cfg: RunConfig) -> dict[str, str]:
    tok = _tokenizer(cfg)
    corpora = load_corpora(args.corpora, tok)
    if not corpora:
        raise CliError(f"no corpora under {args.corpora}")
    tables = [c.table(d) for c in corpora.values() for d in c.doc_ids]
    vocab = _vocabulary(cfg, tables)
    candidates = []
    for a, ca in sorted(corpora.items()):
        for d in ca.doc_ids:
            for b, cb in sorted(corpora.items()):
                size = len(cb) - (d in cb)
                if size >= 2:
                    candidates.append((a, d, b))
    if not candidates:
        raise CliError("no document-corpus pair with at least two reference documents")
    rng = np.random.default_rng(cfg.seed)
    picks = rng.choice(len(candidates), size=args.pairs, replace=args.pairs > len(candidates))
    pairs = []
    for i in sorted(picks.tolist()):
        a, d, b = candidates[i]
        pairs.append((Document(d, corpora[a].table(d), a), corpora[b], a == b))
    overall, conc, disc = averaged_profiles(pairs, vocab, cfg.alpha, cfg.variant, args.k)
    profiles = {"all": overall, "concordant": conc, "discordant": disc}
    print(f"pairs={len(pairs)} mean_threshold_rank={overall.threshold_mean:.2f}")
    return {"profiles.csv": profiles_to_csv(profiles),
            "thresholds.csv": thresholds_to_csv(profiles),
            "run_config.json": _json(cfg.to_dict())}


def cmd_simulate(args, cfg: RunConfig) -> dict[str, str]:
    rw = RareWeakConfig(args.n_terms, args.docs, args.doc_length, args.epsilon, args.shift,
                        args.zipf, cfg.seed)
    if not cfg.out:
        raise CliError("--out is required for this command")
    sim = simulate_rare_weak(rw)
    with tempfile.TemporaryDirectory() as tmp:
        write_simulation(sim, Path(tmp), cfg.seed)
        files = {p.relative_to(tmp).as_posix(): p.read_text(encoding="utf-8")
                 for p in sorted(Path(tmp).rglob("*")) if p.is_file()}
    body = cfg.to_dict()
    body["simulation"] = asdict(rw)
    files["run_config.json"] = _json(body)
    print(f"wrote {len(files) - 2} documents, {len(sim.perturbed)} perturbed terms")
    return files


COMMANDS = {"ingest": cmd_ingest, "compare": cmd_compare, "attribute": cmd_attribute,
            "eval-cv": cmd_eval_cv, "diagnose": cmd_diagnose, "simulate": cmd_simulate}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        cfg = _run_config(args)
        files = COMMANDS[args.command](args, cfg)
        if files:
            _commit(cfg.out, files)
    except (CliError, ValueError, FileNotFoundError, OSError, UnicodeDecodeError) as e:
        print(f"hcsim: error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
