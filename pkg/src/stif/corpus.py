"""Corpus loading, filtering, splitting, statistics and export."""

from __future__ import annotations

import logging
import random
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .textnorm import tokenize

log = logging.getLogger(__name__)

SPLITS = ("train", "dev", "test")
PUBLISHED_SPLIT_SIZES = (1922, 214, 364)
STIF_TAG = "<STIF>"
STATS_PUNCT = (".", ",", "?", "!")


@dataclass(frozen=True)
class RawDocument:
    id: str
    text: str
    source_tag: str | None = None

    def __post_init__(self):
        if not self.text.strip():
            raise ValueError(f"document {self.id!r} has empty text")


@dataclass
class ParallelCorpus:
    pairs: list[tuple[str, str]]
    splits: list[str]

    def __post_init__(self):
        if len(self.pairs) != len(self.splits):
            raise ValueError(f"{len(self.pairs)} pairs but {len(self.splits)} split labels")
        for i, ((inf, frm), label) in enumerate(zip(self.pairs, self.splits)):
            if not inf.strip() or not frm.strip():
                raise ValueError(f"pair {i} has an empty side")
            if label not in SPLITS:
                raise ValueError(f"pair {i} has unknown split label {label!r}")

    def __len__(self):
        return len(self.pairs)

    def split(self, label: str) -> list[tuple[str, str]]:
        return [p for p, s in zip(self.pairs, self.splits) if s == label]

    def sizes(self) -> dict[str, int]:
        c = Counter(self.splits)
        return {s: c.get(s, 0) for s in SPLITS}


@dataclass
class MonolingualCorpus:
    sentences: list[str] = field(default_factory=list)

    def __len__(self):
        return len(self.sentences)


@dataclass
class FilterSummary:
    total: int = 0
    kept: int = 0
    too_short: int = 0
    too_long: int = 0
    english: int = 0
    duplicate: int = 0

    def as_dict(self) -> dict[str, int]:
        return dict(vars(self))


@dataclass
class CorpusStats:
    n_tokens: int
    n_unique_tokens: int
    punct_counts: dict[str, int]
    n_missing_final_period: int
    n_sentences: int = 0

    def as_kv(self) -> list[tuple[str, object]]:
        rows = [
            ("n_sentences", self.n_sentences),
            ("n_tokens", self.n_tokens),
            ("n_unique_tokens", self.n_unique_tokens),
        ]
        rows += [(f"punct[{p}]", n) for p, n in self.punct_counts.items()]
        rows.append(("n_missing_final_period", self.n_missing_final_period))
        return rows


# ---------------------------------------------------------------------------
# filtering


def load_english_vocab(path: str | Path | None = None) -> frozenset[str]:
    """Bundled English wordlist (forms shared with Indonesian removed) or a custom file."""
    if path is None:
        text = resources.files("stif.data").joinpath("english_words.txt").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    return frozenset(
        w.strip().lower() for w in text.splitlines() if w.strip() and not w.startswith("#")
    )


def strip_hashtags(text: str) -> str:
    return " ".join(w for w in text.split() if not w.startswith("#"))


def english_ratio(tokens: Sequence[str], english_vocab: frozenset[str] | set[str]) -> float:
    if not tokens:
        return 0.0
    return sum(t.lower() in english_vocab for t in tokens) / len(tokens)


def filter_with_summary(
    docs: Iterable[RawDocument],
    min_tokens: int = 5,
    max_tokens: int = 25,
    english_ratio_threshold: float = 0.6,
    english_vocab: frozenset[str] | set[str] = frozenset(),
) -> tuple[MonolingualCorpus, FilterSummary]:
    if min_tokens < 1 or max_tokens < min_tokens:
        raise ValueError(f"bad token bounds [{min_tokens}, {max_tokens}]")
    if not 0 < english_ratio_threshold <= 1:
        raise ValueError(f"english ratio threshold must be in (0, 1], got {english_ratio_threshold}")

    summary = FilterSummary()
    seen: set[str] = set()
    kept: list[str] = []
    for doc in docs:
        summary.total += 1
        text = strip_hashtags(doc.text)
        tokens = tokenize(text)
        if len(tokens) < min_tokens:
            summary.too_short += 1
            continue
        if len(tokens) > max_tokens:
            summary.too_long += 1
            continue
        if english_vocab and english_ratio(tokens, english_vocab) >= english_ratio_threshold:
            summary.english += 1
            continue
        if text in seen:
            summary.duplicate += 1
            continue
        seen.add(text)
        kept.append(text)
    summary.kept = len(kept)
    return MonolingualCorpus(kept), summary


def filter_corpus(docs, min_tokens=5, max_tokens=25, english_ratio_threshold=0.6,
                  english_vocab=frozenset()) -> MonolingualCorpus:
    """Hashtag stripping, token-length bounds, English-ratio filter and exact dedup.

    Documents whose English-token fraction is at or above the threshold are
    dropped. An empty ``english_vocab`` disables the ratio filter.
    """
    corpus, _ = filter_with_summary(docs, min_tokens, max_tokens, english_ratio_threshold, english_vocab)
    return corpus


# ---------------------------------------------------------------------------
# splitting


def split_corpus(pairs: Sequence[tuple[str, str]], sizes=PUBLISHED_SPLIT_SIZES, seed: int = 42) -> ParallelCorpus:
    if sum(sizes) != len(pairs):
        raise ValueError(
            f"split sizes {tuple(sizes)} sum to {sum(sizes)}, but the corpus has {len(pairs)} pairs"
        )
    order = list(range(len(pairs)))
    random.Random(seed).shuffle(order)
    labels = [""] * len(pairs)
    pos = 0
    for label, n in zip(SPLITS, sizes):
        for idx in order[pos:pos + n]:
            labels[idx] = label
        pos += n
    return ParallelCorpus(list(pairs), labels)


def write_split_manifest(corpus: ParallelCorpus, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for i, label in enumerate(corpus.splits):
            f.write(f"{i}\t{label}\n")


def read_split_manifest(path: str | Path, n_pairs: int) -> list[str]:
    labels: list[str | None] = [None] * n_pairs
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            try:
                idx_s, label = line.split("\t")
                idx = int(idx_s)
            except ValueError:
                raise ValueError(f"{path}:{lineno}: expected 'index<TAB>split_label'") from None
            if not 0 <= idx < n_pairs:
                raise ValueError(f"{path}:{lineno}: index {idx} out of range for {n_pairs} pairs")
            labels[idx] = label
    missing = [i for i, label in enumerate(labels) if label is None]
    if missing:
        raise ValueError(f"{path}: no split label for {len(missing)} pairs (first: {missing[0]})")
    return labels  # type: ignore[return-value]


# ---------------------------------------------------------------------------
# file formats


def _read_lines(path: str | Path) -> list[str]:
    with open(path, encoding="utf-8", newline="") as f:
        return [line.rstrip("\r\n") for line in f]


def read_tsv_pairs(path: str | Path) -> list[tuple[str, str]]:
    pairs = []
    for lineno, line in enumerate(_read_lines(path), 1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected 'informal<TAB>formal'")
        pairs.append((parts[0], parts[1]))
    return pairs


def read_aligned_pairs(inf_path: str | Path, for_path: str | Path) -> list[tuple[str, str]]:
    inf, frm = _read_lines(inf_path), _read_lines(for_path)
    if len(inf) != len(frm):
        raise ValueError(f"{inf_path} has {len(inf)} lines but {for_path} has {len(frm)}")
    return list(zip(inf, frm))


def write_tsv_pairs(pairs: Iterable[tuple[str, str]], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for inf, frm in pairs:
            f.write(f"{inf}\t{frm}\n")


def write_aligned_pairs(pairs: Iterable[tuple[str, str]], prefix: str | Path) -> None:
    prefix = str(prefix)
    with open(prefix + ".inf", "w", encoding="utf-8", newline="\n") as fi, \
            open(prefix + ".for", "w", encoding="utf-8", newline="\n") as ff:
        for inf, frm in pairs:
            fi.write(inf + "\n")
            ff.write(frm + "\n")


def has_official_split(directory: str | Path) -> bool:
    d = Path(directory)
    return d.is_dir() and all((d / f"{s}.{ext}").exists() for s in SPLITS for ext in ("inf", "for"))


def load_official_split(directory: str | Path) -> ParallelCorpus:
    """Read ``{train,dev,test}.{inf,for}`` from a directory, keeping the published split."""
    d = Path(directory)
    pairs: list[tuple[str, str]] = []
    labels: list[str] = []
    for s in SPLITS:
        part = read_aligned_pairs(d / f"{s}.inf", d / f"{s}.for")
        pairs += part
        labels += [s] * len(part)
    return ParallelCorpus(pairs, labels)


def save_official_split(corpus: ParallelCorpus, directory: str | Path) -> None:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    for s in SPLITS:
        write_aligned_pairs(corpus.split(s), d / s)


def load_parallel(path: str | Path, manifest: str | Path | None = None,
                  sizes=PUBLISHED_SPLIT_SIZES, seed: int = 42) -> ParallelCorpus:
    """Load a parallel corpus from a split directory, a TSV file or a ``.inf``/``.for`` prefix.

    A directory holding the published split files always keeps that split.
    Otherwise a manifest is used if given, else a seeded split of ``sizes``.
    """
    p = Path(path)
    if has_official_split(p):
        return load_official_split(p)
    if p.is_file():
        pairs = read_tsv_pairs(p)
    elif Path(str(p) + ".inf").exists():
        pairs = read_aligned_pairs(str(p) + ".inf", str(p) + ".for")
    else:
        raise FileNotFoundError(f"no parallel corpus at {path}")
    if manifest is not None:
        return ParallelCorpus(pairs, read_split_manifest(manifest, len(pairs)))
    return split_corpus(pairs, sizes, seed)


def read_monolingual(path: str | Path) -> MonolingualCorpus:
    return MonolingualCorpus([line for line in _read_lines(path) if line.strip()])


def write_monolingual(corpus: MonolingualCorpus | Iterable[str], path: str | Path) -> None:
    sentences = corpus.sentences if isinstance(corpus, MonolingualCorpus) else corpus
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for s in sentences:
            f.write(s + "\n")


def read_raw_documents(path: str | Path) -> list[RawDocument]:
    """One document per non-blank line; ``id`` is the 1-based line number."""
    return [RawDocument(str(i), line) for i, line in enumerate(_read_lines(path), 1) if line.strip()]


# ---------------------------------------------------------------------------
# statistics and export


def compute_stats(sentences: Iterable[Sequence[str]]) -> CorpusStats:
    counts: Counter[str] = Counter()
    missing_period = 0
    n_sent = 0
    for toks in sentences:
        n_sent += 1
        counts.update(toks)
        if not toks or toks[-1] != ".":
            missing_period += 1
    return CorpusStats(
        n_tokens=sum(counts.values()),
        n_unique_tokens=len(counts),
        punct_counts={p: counts.get(p, 0) for p in STATS_PUNCT},
        n_missing_final_period=missing_period,
        n_sentences=n_sent,
    )


def format_stats_table(columns: dict[str, CorpusStats]) -> str:
    """Plain-text table with one column per named corpus."""
    names = list(columns)
    rows = [k for k, _ in next(iter(columns.values())).as_kv()] if columns else []
    values = {name: dict(st.as_kv()) for name, st in columns.items()}
    width = max([len("Stat")] + [len(r) for r in rows])
    cw = [max(len(n), 8) for n in names]
    lines = ["Stat".ljust(width) + "".join(" | " + n.rjust(w) for n, w in zip(names, cw))]
    lines.append("-" * len(lines[0]))
    for r in rows:
        lines.append(r.ljust(width) + "".join(" | " + str(values[n][r]).rjust(w) for n, w in zip(names, cw)))
    return "\n".join(lines)


def export_stif_pairs(corpus: ParallelCorpus, split: str) -> list[str]:
    lines = []
    for inf, frm in corpus.split(split):
        for side in (inf, frm):
            if STIF_TAG in side:
                raise ValueError(f"pair contains the reserved tag {STIF_TAG}: {side!r}")
            if "\n" in side:
                raise ValueError(f"pair contains a newline: {side!r}")
        lines.append(f"{inf} {STIF_TAG} {frm}")
    return lines


def parse_stif_line(line: str) -> tuple[str, str]:
    sep = f" {STIF_TAG} "
    idx = line.find(sep)
    if idx < 0:
        raise ValueError(f"no '{sep.strip()}' separator in {line!r}")
    return line[:idx], line[idx + len(sep):]
