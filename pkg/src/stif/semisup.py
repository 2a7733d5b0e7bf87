"""Training orchestration and iterative forward translation.

Iteration 0 trains on the parallel corpus alone. Iteration i >= 1 adds
synthetic pairs made by translating monolingual informal text with the
iteration i-1 system, then trains again from scratch.
"""

from __future__ import annotations

import hashlib
import logging
import random
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import corpus as corpus_mod
from .bleu import corpus_score
from .config import RunConfig
from .corpus import MonolingualCorpus, ParallelCorpus
from .decoder import Decoder, DecodingWeights, decode_corpus, resolve_workers, tune_weights
from .lexicon import InformalDictionary, translate_word_level
from .ngramlm import NGramLanguageModel, train_lm
from .phrasetable import PhraseTable, extract_phrases, read_phrase_table, score_table, write_phrase_table
from .textnorm import normalize
from .wordalign import align_corpus, lexical_tables, train_ibm1

log = logging.getLogger(__name__)

Tokens = list[str]


class StageError(RuntimeError):
    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage


@contextmanager
def stage(name: str):
    t0 = time.perf_counter()
    try:
        yield
    except StageError:
        raise
    except Exception as e:
        raise StageError(name, e) from e
    log.debug("stage %s took %.2fs", name, time.perf_counter() - t0)


def _sha(lines: Sequence[str]) -> str:
    h = hashlib.sha256()
    for line in lines:
        h.update(line.encode("utf-8"))
        h.update(b"\n")
    return h.hexdigest()[:16]


def write_kv(items: dict, path: str | Path) -> None:
    Path(path).write_text("".join(f"{k}={v}\n" for k, v in items.items()), encoding="utf-8")


def read_kv(path: str | Path) -> dict[str, str]:
    out = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip() and not line.startswith("#"):
            k, v = line.split("=", 1)
            out[k] = v
    return out


# ---------------------------------------------------------------------------
# systems


@dataclass
class TrainedSystem:
    phrase_table: PhraseTable
    lm: NGramLanguageModel
    weights: DecodingWeights
    provenance: dict[str, str] = field(default_factory=dict)

    def decoder(self, config: RunConfig, beam: int | None = None) -> Decoder:
        return Decoder(self.phrase_table, self.lm, self.weights, config.decoder_config(beam))

    def save(self, directory: str | Path) -> None:
        d = Path(directory)
        d.mkdir(parents=True, exist_ok=True)
        write_phrase_table(self.phrase_table, d / "phrase-table.txt")
        self.lm.write_arpa(d / "lm.arpa")
        self.weights.save(d / "weights.txt")
        write_kv(self.provenance, d / "provenance.kv")

    @classmethod
    def load(cls, directory: str | Path) -> "TrainedSystem":
        d = Path(directory)
        prov = read_kv(d / "provenance.kv") if (d / "provenance.kv").exists() else {}
        return cls(read_phrase_table(d / "phrase-table.txt"), NGramLanguageModel.read_arpa(d / "lm.arpa"),
                   DecodingWeights.load(d / "weights.txt"), prov)


def prepare_source(text: str, config: RunConfig) -> Tokens:
    return normalize(text, config.normalization())


def prepare_target(text: str, config: RunConfig) -> Tokens:
    return normalize(text, config.target_normalization())


def prepare_pairs(pairs: Sequence[tuple[str, str]], config: RunConfig) -> list[tuple[Tokens, Tokens]]:
    return [(prepare_source(i, config), prepare_target(f, config)) for i, f in pairs]


def train_system(parallel: ParallelCorpus, synthetic: Sequence[tuple[str, str]] | None = None,
                 config: RunConfig = RunConfig(), iteration: int = 0) -> TrainedSystem:
    """normalize -> align both ways -> symmetrize -> extract -> score -> LM -> optional tuning."""
    real = parallel.split("train")
    if not real:
        raise ValueError("parallel corpus has an empty train split")
    synthetic = list(synthetic or [])

    with stage("normalize"):
        real_tok = prepare_pairs(real, config)
        synth_tok = prepare_pairs(synthetic, config)
        pairs = [(s, t) for s, t in real_tok + synth_tok if s and t]
    with stage("align"):
        fwd = train_ibm1(pairs, config.em_iterations)
        rev = train_ibm1([(t, s) for s, t in pairs], config.em_iterations)
        alignments = align_corpus(pairs, fwd, rev, config.symmetrization)
    with stage("extract"):
        extracted = []
        for pair, a in zip(pairs, alignments):
            extracted.extend(extract_phrases(pair, a, config.max_phrase_len))
    with stage("score"):
        lex_fwd, lex_rev = lexical_tables(pairs, alignments)
        table = score_table(extracted, lex_fwd, lex_rev, config.table_limit)
    with stage("lm"):
        lm_text = [t for _, t in real_tok if t]
        if config.lm_include_synthetic:
            lm_text += [t for _, t in synth_tok if t]
        if config.lm_extra_text:
            extra = corpus_mod.read_monolingual(config.lm_extra_text).sentences
            lm_text += [prepare_target(s, config) for s in extra]
        lm = train_lm(lm_text, config.lm_order)
    weights = config.weights()
    if config.tune_trials > 0:
        with stage("tune"):
            dev = [(s, " ".join(t)) for s, t in prepare_pairs(parallel.split("dev"), config)]
            weights = tune_weights(dev, table, lm, config.decoder_config(config.tune_beam),
                                   config.tune_trials, config.seed + 7919 * iteration, weights,
                                   resolve_workers(config.workers))
    provenance = {
        "iteration": str(iteration),
        "train_pairs": str(len(real)),
        "train_sha": _sha([f"{i}\t{f}" for i, f in real]),
        "synthetic_pairs": str(len(synthetic)),
        "synthetic_sha": _sha([f"{i}\t{f}" for i, f in synthetic]) if synthetic else "none",
        "config_sha": config.digest(),
        "seed": str(config.seed),
    }
    return TrainedSystem(table, lm, weights, provenance)


def translate_sentences(system: TrainedSystem, sentences: Sequence[str], config: RunConfig,
                        workers: int | None = None) -> list[str]:
    src = [prepare_source(s, config) for s in sentences]
    out = decode_corpus(src, system.decoder(config), config.workers if workers is None else workers)
    return [" ".join(o) for o in out]


def references(pairs: Sequence[tuple[str, str]], config: RunConfig) -> list[str]:
    return [" ".join(prepare_target(f, config)) for _, f in pairs]


def evaluate_system(system: TrainedSystem, pairs: Sequence[tuple[str, str]], config: RunConfig,
                    workers: int | None = None) -> float:
    hyps = translate_sentences(system, [i for i, _ in pairs], config, workers)
    return corpus_score(hyps, references(pairs, config))


# ---------------------------------------------------------------------------
# forward translation


def forward_translate(system: TrainedSystem, mono: MonolingualCorpus, sample_size: int, seed: int,
                      config: RunConfig = RunConfig(), workers: int | None = None) -> list[tuple[str, str]]:
    """Translate a seeded sample (without replacement) of the pool; empty outputs are dropped."""
    if sample_size > len(mono):
        raise ValueError(f"sample size {sample_size} exceeds the monolingual pool of {len(mono)}")
    if sample_size <= 0:
        return []
    idx = random.Random(seed).sample(range(len(mono)), sample_size)
    sources = [mono.sentences[i] for i in idx]
    outputs = translate_sentences(system, sources, config, workers)
    return [(s, o) for s, o in zip(sources, outputs) if o.strip()]


@dataclass
class IterationReport:
    iteration: int
    dev_bleu: float
    test_bleu: float
    synthetic_size: int
    artifacts: dict[str, str] = field(default_factory=dict)

    def as_kv(self) -> dict[str, str]:
        d = {"iteration": str(self.iteration), "dev_bleu": repr(self.dev_bleu),
             "test_bleu": repr(self.test_bleu), "synthetic_size": str(self.synthetic_size)}
        d.update({f"artifact.{k}": v for k, v in self.artifacts.items()})
        return d

    @classmethod
    def from_kv(cls, d: dict[str, str]) -> "IterationReport":
        arts = {k[len("artifact."):]: v for k, v in d.items() if k.startswith("artifact.")}
        return cls(int(d["iteration"]), float(d["dev_bleu"]), float(d["test_bleu"]),
                   int(d["synthetic_size"]), arts)


def iterate(parallel: ParallelCorpus, mono: MonolingualCorpus, iterations: int | None = None,
            sample_size: int | None = None, config: RunConfig = RunConfig(),
            run_dir: str | Path | None = None, workers: int | None = None) -> list[IterationReport]:
    """Run ``iterations`` rounds; report k is the system trained on parallel + synthetic from system k-1."""
    iterations = config.iterations if iterations is None else iterations
    sample_size = config.sample_size if sample_size is None else sample_size
    workers = config.workers if workers is None else workers
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    root = Path(run_dir) if run_dir is not None else None
    if root is not None:
        root.mkdir(parents=True, exist_ok=True)
        config.save(root / "run.cfg")
        write_kv({
            "iterations": iterations, "sample_size": sample_size, "seed": config.seed,
            "fixed_sample": config.fixed_sample,
            "sample_seeds": ",".join(str(_sample_seed(config, k)) for k in range(1, iterations)),
            "config_sha": config.digest(),
        }, root / "manifest.kv")

    dev, test = parallel.split("dev"), parallel.split("test")
    reports: list[IterationReport] = []
    system = None
    synthetic: list[tuple[str, str]] = []
    try:
        for k in range(iterations):
            if k > 0:
                with stage(f"forward-translate[{k}]"):
                    synthetic = forward_translate(system, mono, sample_size, _sample_seed(config, k),
                                                  config, workers)
            with stage(f"train[{k}]"):
                system = train_system(parallel, synthetic if k > 0 else None, config, iteration=k)
            with stage(f"evaluate[{k}]"):
                dev_bleu = evaluate_system(system, dev, config, workers) if dev else 0.0
                test_bleu = evaluate_system(system, test, config, workers) if test else 0.0
            report = IterationReport(k, dev_bleu, test_bleu, len(synthetic) if k > 0 else 0)
            if root is not None:
                d = root / f"iter{k}"
                system.save(d)
                corpus_mod.write_tsv_pairs(synthetic if k > 0 else [], d / "synthetic.tsv")
                report.artifacts = {name: str(d / name) for name in
                                    ("phrase-table.txt", "lm.arpa", "weights.txt", "synthetic.tsv")}
                write_kv(report.as_kv(), d / "report.kv")
            log.info("iteration %d: dev BLEU %.2f, test BLEU %.2f, %d synthetic pairs",
                     k, dev_bleu, test_bleu, report.synthetic_size)
            reports.append(report)
    finally:
        if root is not None and reports:
            _write_summary(reports, root / "reports.tsv")
    return reports


def _sample_seed(config: RunConfig, k: int) -> int:
    return config.seed if config.fixed_sample else config.seed + k


def _write_summary(reports: Sequence[IterationReport], path: Path) -> None:
    lines = ["iteration\tdev_bleu\ttest_bleu\tsynthetic_size"]
    lines += [f"{r.iteration}\t{r.dev_bleu:.4f}\t{r.test_bleu:.4f}\t{r.synthetic_size}" for r in reports]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# benchmark


BENCHMARK_ROWS = ("No Modification", "Dictionary-Based", "PBSMT")


@dataclass
class BenchmarkRow:
    method: str
    bleu: float
    seconds: float


def benchmark(parallel: ParallelCorpus, dictionary: InformalDictionary | None, config: RunConfig = RunConfig(),
              system: TrainedSystem | None = None, workers: int | None = None,
              methods: Sequence[str] = BENCHMARK_ROWS) -> list[BenchmarkRow]:
    """Test-set BLEU per method. The dictionary row is skipped without a dictionary.

    Every method sees the preprocessed informal input; references get the
    formal-side preprocessing. PBSMT timing includes training unless a
    trained ``system`` is passed in.
    """
    test = parallel.split("test")
    refs = references(test, config)
    rows = []
    for method in methods:
        t0 = time.perf_counter()
        sources = [prepare_source(i, config) for i, _ in test]
        if method == "No Modification":
            hyps = [" ".join(s) for s in sources]
        elif method == "Dictionary-Based":
            if dictionary is None:
                continue
            hyps = [" ".join(translate_word_level(s, dictionary)) for s in sources]
        elif method == "PBSMT":
            trained = system or train_system(parallel, None, config)
            with stage("decode"):
                outs = decode_corpus(sources, trained.decoder(config),
                                     config.workers if workers is None else workers)
            hyps = [" ".join(o) for o in outs]
        else:
            raise ValueError(f"unknown benchmark method {method!r}")
        rows.append(BenchmarkRow(method, corpus_score(hyps, refs), time.perf_counter() - t0))
    return rows


def format_benchmark(rows: Sequence[BenchmarkRow]) -> str:
    width = max([len("Method")] + [len(r.method) for r in rows])
    lines = [f"{'Method'.ljust(width)}    BLEU", "-" * (width + 8)]
    lines += [f"{r.method.ljust(width)}  {r.bleu:6.2f}" for r in rows]
    return "\n".join(lines)
