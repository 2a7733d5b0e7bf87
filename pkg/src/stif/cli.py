"""Command-line entry point: ``stif <command> ...``."""

from __future__ import annotations

import argparse
import logging
import sys
import time
from dataclasses import replace
from pathlib import Path

from . import corpus as corpus_mod
from .bleu import corpus_stats, format_report
from .config import RunConfig
from .lexicon import load_dictionary
from .semisup import (
    StageError,
    TrainedSystem,
    benchmark,
    format_benchmark,
    iterate,
    prepare_source,
    prepare_target,
    stage,
    train_system,
    translate_sentences,
)
from .textnorm import tokenize

log = logging.getLogger("stif")


def _read_input(path: str | None) -> list[str]:
    if path is None or path == "-":
        data = sys.stdin.buffer.read().decode("utf-8")
    else:
        data = Path(path).read_text(encoding="utf-8")
    return data.splitlines()


def _write_output(lines, path: str | None) -> None:
    text = "".join(line + "\n" for line in lines)
    if path is None or path == "-":
        sys.stdout.buffer.write(text.encode("utf-8"))
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)


def _config(args) -> RunConfig:
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    if getattr(args, "workers", None) is not None:
        cfg = replace(cfg, workers=args.workers)
    return cfg


def _load_parallel(args, cfg: RunConfig):
    return corpus_mod.load_parallel(args.data, args.manifest, cfg.split_sizes, cfg.seed)


# ---------------------------------------------------------------------------
# commands


def cmd_filter(args) -> int:
    cfg = _config(args)
    with stage("read"):
        docs = corpus_mod.read_raw_documents(args.input)
    vocab = frozenset() if args.no_english_filter else corpus_mod.load_english_vocab(args.english_words)
    with stage("filter"):
        kept, summary = corpus_mod.filter_with_summary(
            docs, cfg.min_tokens, cfg.max_tokens, cfg.english_ratio, vocab)
    corpus_mod.write_monolingual(kept, args.output)
    for k, v in summary.as_dict().items():
        print(f"{k}={v}")
    return 0


def cmd_preprocess(args) -> int:
    cfg = _config(args)
    if args.stif:
        if not args.data:
            raise StageError("load", ValueError("--stif needs --data"))
        with stage("load"):
            parallel = _load_parallel(args, cfg)
        _write_output(corpus_mod.export_stif_pairs(parallel, args.stif), args.output)
        return 0
    prep = prepare_target if args.side == "formal" else prepare_source
    lines = _read_input(args.input)
    with stage("preprocess"):
        out = [" ".join(prep(line, cfg)) for line in lines]
    _write_output(out, args.output)
    return 0


def cmd_train(args) -> int:
    cfg = _config(args)
    with stage("load"):
        parallel = _load_parallel(args, cfg)
        synthetic = corpus_mod.read_tsv_pairs(args.synthetic) if args.synthetic else None
    t0 = time.perf_counter()
    system = train_system(parallel, synthetic, cfg)
    with stage("save"):
        system.save(args.out)
    print(f"trained in {time.perf_counter() - t0:.1f}s; "
          f"{len(system.phrase_table)} source phrases; wrote {args.out}")
    return 0


def cmd_translate(args) -> int:
    cfg = _config(args)
    lines = _read_input(args.input)
    if not lines:
        _write_output([], args.output)
        return 0
    with stage("load"):
        system = TrainedSystem.load(args.system)
    with stage("decode"):
        out = translate_sentences(system, lines, cfg)
    _write_output(out, args.output)
    return 0


def cmd_evaluate(args) -> int:
    hyps = _read_input(args.hyp)
    refs = _read_input(args.ref)
    if len(hyps) != len(refs):
        raise StageError("evaluate", ValueError(
            f"{args.hyp} has {len(hyps)} lines but {args.ref} has {len(refs)}"))
    if not hyps:
        raise StageError("evaluate", ValueError("no sentences to score"))
    if args.preprocess_ref:
        cfg = _config(args)
        refs = [" ".join(prepare_target(r, cfg)) for r in refs]
    with stage("evaluate"):
        print(format_report(corpus_stats(hyps, refs, lowercase=not args.cased)))
    return 0


def cmd_iterate(args) -> int:
    cfg = _config(args)
    with stage("load"):
        parallel = _load_parallel(args, cfg)
        mono = corpus_mod.read_monolingual(args.mono)
    reports = iterate(parallel, mono, args.iterations, args.sample_size, cfg, args.run_dir)
    print("iteration\tdev_bleu\ttest_bleu\tsynthetic_size")
    for r in reports:
        print(f"{r.iteration}\t{r.dev_bleu:.2f}\t{r.test_bleu:.2f}\t{r.synthetic_size}")
    return 0


def cmd_benchmark(args) -> int:
    cfg = _config(args)
    with stage("load"):
        parallel = _load_parallel(args, cfg)
        dictionary = load_dictionary(args.dict) if args.dict else None
        system = TrainedSystem.load(args.system) if args.system else None
    rows = benchmark(parallel, dictionary, cfg, system)
    print(format_benchmark(rows))
    if args.timing:
        for r in rows:
            print(f"seconds.{r.method.lower().replace(' ', '_').replace('-', '_')}={r.seconds:.3f}")
    return 0


def cmd_stats(args) -> int:
    cfg = _config(args)
    with stage("load"):
        parallel = _load_parallel(args, cfg)
    splits = corpus_mod.SPLITS if args.split == "all" else (args.split,)
    pairs = [p for s in splits for p in parallel.split(s)]
    if args.normalized:
        inf = [prepare_source(i, cfg) for i, _ in pairs]
        frm = [prepare_target(f, cfg) for _, f in pairs]
    else:
        inf = [tokenize(i) for i, _ in pairs]
        frm = [tokenize(f) for _, f in pairs]
    cols = {"informal": corpus_mod.compute_stats(inf), "formal": corpus_mod.compute_stats(frm)}
    if args.kv:
        for name, st in cols.items():
            for k, v in st.as_kv():
                print(f"{name}.{k}={v}")
    else:
        print(corpus_mod.format_stats_table(cols))
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stif", description=__doc__)
    p.add_argument("--config", help="run configuration file (key = value)")
    p.add_argument("--workers", type=int, help="decoding processes; 0 uses every CPU")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def data_args(sp):
        sp.add_argument("--data", required=True,
                        help="split directory ({train,dev,test}.{inf,for}), TSV file or .inf/.for prefix")
        sp.add_argument("--manifest", help="split manifest (index<TAB>label) for a TSV corpus")

    sp = sub.add_parser("filter", help="filter raw tweets into a monolingual pool")
    sp.add_argument("input")
    sp.add_argument("output")
    sp.add_argument("--english-words", help="custom English wordlist")
    sp.add_argument("--no-english-filter", action="store_true")
    sp.set_defaults(func=cmd_filter)

    sp = sub.add_parser("preprocess", help="normalize sentences, or export a split in <STIF> format")
    sp.add_argument("--input", help="input file (default stdin)")
    sp.add_argument("--output", help="output file (default stdout)")
    sp.add_argument("--side", choices=("informal", "formal"), default="informal")
    sp.add_argument("--stif", choices=corpus_mod.SPLITS, help="export this split as '<inf> <STIF> <for>' lines")
    sp.add_argument("--data")
    sp.add_argument("--manifest")
    sp.set_defaults(func=cmd_preprocess)

    sp = sub.add_parser("train", help="train a phrase-based system")
    data_args(sp)
    sp.add_argument("--out", required=True, help="system directory to write")
    sp.add_argument("--synthetic", help="extra TSV of synthetic pairs")
    sp.set_defaults(func=cmd_train)

    sp = sub.add_parser("translate", help="translate informal sentences line by line")
    sp.add_argument("--system", required=True)
    sp.add_argument("--input")
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_translate)

    sp = sub.add_parser("evaluate", help="corpus BLEU of a hypothesis file against a reference file")
    sp.add_argument("--hyp", required=True)
    sp.add_argument("--ref", required=True)
    sp.add_argument("--cased", action="store_true", help="do not lowercase before scoring")
    sp.add_argument("--preprocess-ref", action="store_true",
                    help="apply the formal-side preprocessing to references first")
    sp.set_defaults(func=cmd_evaluate)

    sp = sub.add_parser("iterate", help="iterative forward translation")
    data_args(sp)
    sp.add_argument("--mono", required=True, help="monolingual informal sentences, one per line")
    sp.add_argument("--run-dir", required=True)
    sp.add_argument("--iterations", type=int)
    sp.add_argument("--sample-size", type=int)
    sp.set_defaults(func=cmd_iterate)

    sp = sub.add_parser("benchmark", help="No Modification / Dictionary-Based / PBSMT on the test split")
    data_args(sp)
    sp.add_argument("--dict", help="informal->formal dictionary (TSV or CSV)")
    sp.add_argument("--system", help="use a trained system instead of training one")
    sp.add_argument("--timing", action="store_true", help="print per-method seconds")
    sp.set_defaults(func=cmd_benchmark)

    sp = sub.add_parser("stats", help="token and punctuation statistics")
    data_args(sp)
    sp.add_argument("--split", choices=corpus_mod.SPLITS + ("all",), default="all")
    sp.add_argument("--normalized", action="store_true", help="count after full preprocessing")
    sp.add_argument("--kv", action="store_true", help="key=value output")
    sp.set_defaults(func=cmd_stats)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except StageError as e:
        print(f"stif {args.command}: {e}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as e:
        print(f"stif {args.command}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
