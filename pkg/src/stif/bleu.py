"""Corpus BLEU with 13a tokenization (the sacreBLEU default)."""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

MAX_ORDER = 4

_13A_RULES = (
    (re.compile(r"([\{-\~\[-\` -\&\(-\+\:-\@\/])"), r" \1 "),
    (re.compile(r"([^0-9])([\.,])"), r"\1 \2 "),
    (re.compile(r"([\.,])([^0-9])"), r" \1 \2"),
    (re.compile(r"([0-9])(-)"), r"\1 \2 "),
)


@lru_cache(maxsize=2**16)
def tokenize_13a(line: str) -> str:
    line = line.replace("<skipped>", "").replace("-\n", "").replace("\n", " ")
    if "&" in line:
        line = line.replace("&quot;", '"').replace("&amp;", "&").replace("&lt;", "<").replace("&gt;", ">")
    line = f" {line} "
    for pattern, repl in _13A_RULES:
        line = pattern.sub(repl, line)
    return " ".join(line.split())


@dataclass
class BleuStats:
    clipped_matches: list[int] = field(default_factory=lambda: [0] * MAX_ORDER)
    hyp_ngrams: list[int] = field(default_factory=lambda: [0] * MAX_ORDER)
    hyp_len: int = 0
    ref_len: int = 0

    def __add__(self, other: "BleuStats") -> "BleuStats":
        return BleuStats(
            [a + b for a, b in zip(self.clipped_matches, other.clipped_matches)],
            [a + b for a, b in zip(self.hyp_ngrams, other.hyp_ngrams)],
            self.hyp_len + other.hyp_len,
            self.ref_len + other.ref_len,
        )

    def precisions(self) -> list[float]:
        return [100.0 * m / t if t else 0.0 for m, t in zip(self.clipped_matches, self.hyp_ngrams)]

    def brevity_penalty(self) -> float:
        if self.hyp_len == 0:
            return 0.0
        return min(1.0, math.exp(1.0 - self.ref_len / self.hyp_len))


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def sentence_stats(hyp: str, ref: str, lowercase: bool = True) -> BleuStats:
    if lowercase:
        hyp, ref = hyp.lower(), ref.lower()
    h = tokenize_13a(hyp).split()
    r = tokenize_13a(ref).split()
    matches, totals = [], []
    for n in range(1, MAX_ORDER + 1):
        hc, rc = _ngrams(h, n), _ngrams(r, n)
        matches.append(sum(min(c, rc[g]) for g, c in hc.items()))
        totals.append(max(len(h) - n + 1, 0))
    return BleuStats(matches, totals, len(h), len(r))


def corpus_stats(hyps: Sequence[str], refs: Sequence[str], lowercase: bool = True) -> BleuStats:
    if len(hyps) != len(refs):
        raise ValueError(f"{len(hyps)} hypotheses but {len(refs)} references")
    total = BleuStats()
    for h, r in zip(hyps, refs):
        total = total + sentence_stats(h, r, lowercase)
    return total


def corpus_bleu(stats: BleuStats | Iterable[BleuStats]) -> float:
    """BLEU on a 0-100 scale from summed stats; any zero precision gives 0."""
    if not isinstance(stats, BleuStats):
        acc = BleuStats()
        for s in stats:
            acc = acc + s
        stats = acc
    if stats.hyp_len == 0:
        raise ValueError("BLEU is undefined for an empty hypothesis corpus")
    if any(m == 0 for m in stats.clipped_matches):
        return 0.0
    log_p = sum(math.log(m / t) for m, t in zip(stats.clipped_matches, stats.hyp_ngrams)) / MAX_ORDER
    return 100.0 * stats.brevity_penalty() * math.exp(log_p)


def corpus_score(hyps: Sequence[str], refs: Sequence[str], lowercase: bool = True) -> float:
    return corpus_bleu(corpus_stats(hyps, refs, lowercase))


def format_report(stats: BleuStats) -> str:
    """Human-readable line followed by a key-value block."""
    score = corpus_bleu(stats)
    p = stats.precisions()
    ratio = stats.hyp_len / stats.ref_len if stats.ref_len else 0.0
    lines = [
        f"BLEU = {score:.2f} {'/'.join(f'{x:.1f}' for x in p)} "
        f"(BP = {stats.brevity_penalty():.3f} ratio = {ratio:.3f} hyp_len = {stats.hyp_len} ref_len = {stats.ref_len})",
        f"bleu={score:.4f}",
    ]
    lines += [f"precision_{n}={p[n - 1]:.4f}" for n in range(1, MAX_ORDER + 1)]
    lines += [f"bp={stats.brevity_penalty():.6f}", f"hyp_len={stats.hyp_len}", f"ref_len={stats.ref_len}"]
    return "\n".join(lines)
