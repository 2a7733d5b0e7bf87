"""Phrase-pair extraction from word alignments and Moses-style phrase scoring."""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

from .wordalign import NULL, AlignmentMatrix, TranslationTable

SEP = " ||| "
LEX_FLOOR = 1e-7

Phrase = tuple[str, ...]
InnerAlignment = tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class PhrasePair:
    src: Phrase
    tgt: Phrase
    count: int = 1
    alignment: InnerAlignment = ()


class PhraseOption(NamedTuple):
    tgt: Phrase
    scores: tuple[float, float, float, float]  # phi(t|s), phi(s|t), lex(t|s), lex(s|t)


@dataclass
class PhraseTable:
    options: dict[Phrase, list[PhraseOption]] = field(default_factory=dict)

    def __contains__(self, src):
        return tuple(src) in self.options

    def __len__(self):
        return len(self.options)

    def get(self, src) -> list[PhraseOption]:
        return self.options.get(tuple(src), [])

    @property
    def max_source_len(self) -> int:
        return max((len(s) for s in self.options), default=0)

    def truncated(self, k: int) -> "PhraseTable":
        return PhraseTable({s: opts[:k] for s, opts in self.options.items()})


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _round6(x: float) -> float:
    return float(_fmt(x))


def extract_phrases(pair: tuple[Sequence[str], Sequence[str]], alignment: AlignmentMatrix,
                    max_phrase_len: int = 7) -> list[PhrasePair]:
    """All phrase pairs consistent with the alignment, including extensions over unaligned target words.

    Each returned pair has count 1 and carries its internal alignment (relative indices).
    """
    src, tgt = pair
    n_src, n_tgt = len(src), len(tgt)
    links = sorted(alignment.links)
    tgt_aligned = [False] * n_tgt
    for _, j in links:
        tgt_aligned[j] = True

    out: list[PhrasePair] = []
    for s1 in range(n_src):
        for s2 in range(s1, min(n_src, s1 + max_phrase_len)):
            t1, t2 = n_tgt, -1
            for i, j in links:
                if s1 <= i <= s2:
                    t1 = min(t1, j)
                    t2 = max(t2, j)
            if t2 < 0 or t2 - t1 >= max_phrase_len:
                continue
            if any(t1 <= j <= t2 and not s1 <= i <= s2 for i, j in links):
                continue
            ts = t1
            while True:
                te = t2
                while True:
                    if te - ts < max_phrase_len:
                        inner = tuple((i - s1, j - ts) for i, j in links if s1 <= i <= s2 and ts <= j <= te)
                        out.append(PhrasePair(tuple(src[s1:s2 + 1]), tuple(tgt[ts:te + 1]), 1, inner))
                    else:
                        break
                    te += 1
                    if te >= n_tgt or tgt_aligned[te]:
                        break
                ts -= 1
                if ts < 0 or tgt_aligned[ts]:
                    break
    return out


def _lex_weight(src: Phrase, tgt: Phrase, alignment: InnerAlignment, table: TranslationTable) -> float:
    """prod over target words of the mean w(t_j | s_i) over linked s_i, or w(t_j | NULL) if unlinked."""
    linked: dict[int, list[int]] = defaultdict(list)
    for i, j in alignment:
        linked[j].append(i)
    w = 1.0
    for j, tw in enumerate(tgt):
        if j in linked:
            srcs = linked[j]
            w *= sum(table.prob(src[i], tw, LEX_FLOOR) for i in srcs) / len(srcs)
        else:
            w *= table.prob(NULL, tw, LEX_FLOOR)
    return w


def score_table(all_pairs: Iterable[PhrasePair], lex_fwd: TranslationTable, lex_rev: TranslationTable,
                top_k: int = 20) -> PhraseTable:
    """Relative-frequency and lexical-weight scores for aggregated phrase pairs.

    ``lex_fwd`` is w(target|source), ``lex_rev`` is w(source|target). Each pair's
    lexical weights use its most frequent internal alignment. Scores are rounded
    to the 6 significant digits of the on-disk format.
    """
    pair_counts: Counter[tuple[Phrase, Phrase]] = Counter()
    align_counts: dict[tuple[Phrase, Phrase], Counter[InnerAlignment]] = defaultdict(Counter)
    for pp in all_pairs:
        key = (pp.src, pp.tgt)
        pair_counts[key] += pp.count
        align_counts[key][pp.alignment] += pp.count

    src_counts: Counter[Phrase] = Counter()
    tgt_counts: Counter[Phrase] = Counter()
    for (s, t), c in pair_counts.items():
        src_counts[s] += c
        tgt_counts[t] += c

    grouped: dict[Phrase, list[tuple[float, int, Phrase, tuple[float, float, float, float]]]] = defaultdict(list)
    for (s, t), c in pair_counts.items():
        # Counter.most_common keeps first-inserted order among equal counts
        a = align_counts[(s, t)].most_common(1)[0][0]
        rev_a = tuple((j, i) for i, j in a)
        scores = (
            c / src_counts[s],
            c / tgt_counts[t],
            _lex_weight(s, t, a, lex_fwd),
            _lex_weight(t, s, rev_a, lex_rev),
        )
        grouped[s].append((scores[0], c, t, tuple(_round6(x) for x in scores)))

    options = {}
    for s in sorted(grouped):
        ranked = sorted(grouped[s], key=lambda r: (-r[0], -r[1], r[2]))[:top_k]
        options[s] = [PhraseOption(t, sc) for _, _, t, sc in ranked]
    return PhraseTable(options)


def write_phrase_table(table: PhraseTable, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for src, opts in table.options.items():
            s = " ".join(src)
            for opt in opts:
                f.write(f"{s}{SEP}{' '.join(opt.tgt)}{SEP}{' '.join(_fmt(x) for x in opt.scores)}\n")


def read_phrase_table(path: str | Path) -> PhraseTable:
    """Read Moses text format; fields after the score field are ignored."""
    options: dict[Phrase, list[PhraseOption]] = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split(SEP)
            if len(fields) < 3:
                raise ValueError(f"{path}:{lineno}: expected 'src ||| tgt ||| scores'")
            scores = tuple(float(x) for x in fields[2].split())
            if len(scores) != 4:
                raise ValueError(f"{path}:{lineno}: expected 4 scores, got {len(scores)}")
            src = tuple(fields[0].split())
            options.setdefault(src, []).append(PhraseOption(tuple(fields[1].split()), scores))
    return PhraseTable(options)
