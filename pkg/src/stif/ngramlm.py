"""Interpolated Kneser-Ney n-gram language model with ARPA import/export.

Probabilities are stored the way ARPA files store them: every observed n-gram
carries its interpolated log10 probability, every observed context carries a
log10 backoff weight. Queries for unobserved n-grams back off recursively.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

BOS = "<s>"
EOS = "</s>"
UNK = "<unk>"
DISCOUNT = 0.75
UNK_LOGPROB = -7.0
NO_PROB = -99.0  # log10 "probability" of <s>, which is never predicted
LN10 = math.log(10.0)

NGram = tuple[str, ...]


@dataclass
class NGramLanguageModel:
    order: int
    logprob: dict[NGram, float] = field(default_factory=dict)
    backoff: dict[NGram, float] = field(default_factory=dict)
    unk_logprob: float = UNK_LOGPROB

    def __post_init__(self):
        self.vocab = frozenset(g[0] for g in self.logprob if len(g) == 1 and g[0] != UNK)
        self._cache: dict[tuple[NGram, str], tuple[float, NGram]] = {}

    # -- queries -----------------------------------------------------------

    def _logp(self, context: NGram, word: str) -> float:
        bow = 0.0
        while True:
            lp = self.logprob.get(context + (word,))
            if lp is not None:
                return lp + bow
            if not context:
                return self.unk_logprob + bow
            bow += self.backoff.get(context, 0.0)
            context = context[1:]

    def _minimize(self, context: NGram) -> NGram:
        """Longest suffix of ``context`` that can still influence a prediction."""
        context = context[-(self.order - 1):] if self.order > 1 else ()
        while context and context not in self.backoff:
            context = context[1:]
        return context

    def begin(self) -> NGram:
        return self._minimize((BOS,))

    def score_word(self, state: NGram, word: str) -> tuple[float, NGram]:
        """log10 p(word | state) and the successor state."""
        key = (state, word)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        w = word if word in self.vocab or word in (EOS,) else UNK
        if w == UNK:
            lp = self.unk_logprob
        else:
            lp = self._logp(state, w)
        result = (lp, self._minimize(state + (w,)))
        if len(self._cache) < 2_000_000:
            self._cache[key] = result
        return result

    def end_score(self, state: NGram) -> float:
        return self.score_word(state, EOS)[0]

    def prob(self, word: str, context: Sequence[str] = ()) -> float:
        """p(word | context) as a plain probability; ``context`` may contain <s>."""
        lp, _ = self.score_word(self._minimize(tuple(context)), word)
        return 10.0 ** lp

    def score_sequence(self, tokens: Sequence[str], bos: bool = True, eos: bool = True) -> float:
        """Total log10 probability of a sentence with begin/end padding."""
        state = self.begin() if bos else ()
        total = 0.0
        for w in tokens:
            lp, state = self.score_word(state, w)
            total += lp
        if eos:
            total += self.end_score(state)
        return total

    def contexts(self) -> list[NGram]:
        return sorted(self.backoff)

    # -- ARPA --------------------------------------------------------------

    def to_arpa(self) -> str:
        by_order: dict[int, list[NGram]] = defaultdict(list)
        for g in self.logprob:
            by_order[len(g)].append(g)
        lines = ["", "\\data\\"]
        for n in range(1, self.order + 1):
            lines.append(f"ngram {n}={len(by_order[n])}")
        for n in range(1, self.order + 1):
            lines.append("")
            lines.append(f"\\{n}-grams:")
            for g in sorted(by_order[n]):
                row = f"{self.logprob[g]!r}\t{' '.join(g)}"
                if g in self.backoff:
                    row += f"\t{self.backoff[g]!r}"
                lines.append(row)
        lines += ["", "\\end\\", ""]
        return "\n".join(lines)

    def write_arpa(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(self.to_arpa())

    @classmethod
    def from_arpa(cls, text: str) -> "NGramLanguageModel":
        logprob: dict[NGram, float] = {}
        backoff: dict[NGram, float] = {}
        declared: dict[int, int] = {}
        section = None
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line:
                continue
            if line == "\\data\\":
                section = 0
                continue
            if line == "\\end\\":
                break
            if line.startswith("\\") and line.endswith("-grams:"):
                section = int(line[1:line.index("-")])
                continue
            if section == 0:
                if line.startswith("ngram "):
                    n, count = line[6:].split("=")
                    declared[int(n)] = int(count)
                continue
            if section is None:
                continue
            if "\t" in line:
                parts = line.split("\t")
            else:
                fields = line.split()
                parts = [fields[0], " ".join(fields[1:1 + section])] + fields[1 + section:]
            if len(parts) not in (2, 3):
                raise ValueError(f"ARPA line {lineno}: cannot parse {line!r}")
            g = tuple(parts[1].split())
            if len(g) != section:
                raise ValueError(f"ARPA line {lineno}: expected a {section}-gram, got {parts[1]!r}")
            logprob[g] = float(parts[0])
            if len(parts) == 3:
                backoff[g] = float(parts[2])
        if not declared:
            raise ValueError("ARPA text has no \\data\\ header")
        counts = Counter(len(g) for g in logprob)
        for n, c in declared.items():
            if counts.get(n, 0) != c:
                raise ValueError(f"ARPA header declares {c} {n}-grams but {counts.get(n, 0)} found")
        unk = logprob.pop((UNK,), UNK_LOGPROB)
        model = cls(max(declared), logprob, backoff, unk)
        # keep <unk> in the table so export reproduces the file
        model.logprob[(UNK,)] = unk
        return model

    @classmethod
    def read_arpa(cls, path: str | Path) -> "NGramLanguageModel":
        return cls.from_arpa(Path(path).read_text(encoding="utf-8"))


def _count(sentences: Iterable[Sequence[str]], order: int) -> list[Counter[NGram]]:
    counts: list[Counter[NGram]] = [Counter() for _ in range(order + 1)]
    for sent in sentences:
        toks = (BOS,) + tuple(sent) + (EOS,)
        for k in range(1, len(toks)):
            for n in range(1, order + 1):
                if k - n + 1 < 0:
                    break
                counts[n][toks[k - n + 1:k + 1]] += 1
    return counts


def train_lm(sentences: Iterable[Sequence[str]], order: int = 3, discount: float = DISCOUNT,
             unk_logprob: float = UNK_LOGPROB) -> NGramLanguageModel:
    """Interpolated Kneser-Ney with a fixed discount.

    The highest order uses raw counts; lower orders use continuation counts
    (number of distinct left extensions), except for n-grams starting with <s>,
    which keep raw counts. Unigrams are not discounted.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    sentences = [tuple(s) for s in sentences]
    if not sentences:
        raise ValueError("cannot train a language model on no sentences")
    n_tokens = sum(len(s) for s in sentences)
    if n_tokens < order:
        raise ValueError(f"corpus has {n_tokens} tokens, fewer than the model order {order}")

    raw = _count(sentences, order)
    adjusted: list[Counter[NGram]] = [Counter() for _ in range(order + 1)]
    adjusted[order] = raw[order]
    for n in range(order - 1, 0, -1):
        cont: Counter[NGram] = Counter()
        for g in raw[n + 1]:
            cont[g[1:]] += 1
        for g, c in raw[n].items():
            adjusted[n][g] = c if g[0] == BOS else cont[g]

    # unigram distribution over everything but <s>
    uni = {g: c for g, c in adjusted[1].items() if g != (BOS,)}
    total = sum(uni.values())
    prob: dict[NGram, float] = {g: c / total for g, c in uni.items()}

    logprob: dict[NGram, float] = {g: math.log10(p) for g, p in prob.items()}
    logprob[(BOS,)] = NO_PROB
    backoff: dict[NGram, float] = {}

    lower = prob
    for n in range(2, order + 1):
        ctx_total: Counter[NGram] = Counter()
        ctx_types: Counter[NGram] = Counter()
        for g, c in adjusted[n].items():
            ctx_total[g[:-1]] += c
            ctx_types[g[:-1]] += 1
        gamma = {h: discount * ctx_types[h] / ctx_total[h] for h in ctx_total}
        current: dict[NGram, float] = {}
        for g, c in adjusted[n].items():
            h = g[:-1]
            # every suffix of an observed n-gram was observed one order down
            current[g] = max(c - discount, 0.0) / ctx_total[h] + gamma[h] * lower[g[1:]]
        for h, gm in gamma.items():
            backoff[h] = math.log10(gm)
        for g, p in current.items():
            logprob[g] = math.log10(p)
        lower = current

    logprob[(UNK,)] = unk_logprob
    return NGramLanguageModel(order, logprob, backoff, unk_logprob)

