"""Stack-based beam search over a log-linear phrase-based model.

Model score of a derivation::

    sum_k w_phrase[k] * ln(phrase score k)      (per applied phrase)
  + w_lm * ln p_LM(output)                       (natural log, with <s> and </s>)
  + w_distortion * -|start - prev_end - 1|       (per applied phrase)
  + w_word_penalty * -(number of output words)
  + OOV_PENALTY per unknown source word copied through

Mask tokens always translate to themselves, with no penalty.
"""

from __future__ import annotations

import logging
import math
import multiprocessing as mp
import os
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .ngramlm import LN10, NGramLanguageModel
from .phrasetable import PhraseTable
from .textnorm import MASK_TOKENS

log = logging.getLogger(__name__)

OOV_PENALTY = -100.0


@dataclass(frozen=True)
class DecodingWeights:
    w_phrase: tuple[float, float, float, float] = (0.2, 0.2, 0.2, 0.2)
    w_lm: float = 0.5
    w_distortion: float = 0.3
    w_word_penalty: float = -1.0

    def __post_init__(self):
        object.__setattr__(self, "w_phrase", tuple(float(x) for x in self.w_phrase))
        if len(self.w_phrase) != 4:
            raise ValueError("w_phrase needs exactly 4 weights")
        for v in self.as_dict().values():
            if not math.isfinite(v):
                raise ValueError(f"non-finite weight {v}")

    def as_dict(self) -> dict[str, float]:
        d = {f"w_phrase_{k}": w for k, w in enumerate(self.w_phrase)}
        d.update(w_lm=self.w_lm, w_distortion=self.w_distortion, w_word_penalty=self.w_word_penalty)
        return d

    @classmethod
    def from_dict(cls, d: dict[str, float]) -> "DecodingWeights":
        expected = set(cls().as_dict())
        if set(d) != expected:
            raise ValueError(f"weights need exactly the keys {sorted(expected)}, got {sorted(d)}")
        return cls(tuple(float(d[f"w_phrase_{k}"]) for k in range(4)), float(d["w_lm"]),
                   float(d["w_distortion"]), float(d["w_word_penalty"]))

    def scaled(self, c: float) -> "DecodingWeights":
        return DecodingWeights(tuple(c * w for w in self.w_phrase), c * self.w_lm,
                               c * self.w_distortion, c * self.w_word_penalty)

    def dumps(self) -> str:
        return "".join(f"{k} = {v!r}\n" for k, v in self.as_dict().items())

    @classmethod
    def loads(cls, text: str) -> "DecodingWeights":
        d = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"weights line {lineno}: expected 'key = value'")
            k, v = (x.strip() for x in line.split("=", 1))
            d[k] = float(v)
        return cls.from_dict(d)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "DecodingWeights":
        return cls.loads(Path(path).read_text(encoding="utf-8"))


@dataclass(frozen=True)
class DecoderConfig:
    beam_size: int = 100
    distortion_limit: int = 6  # negative: unlimited
    max_phrase_len: int = 7
    max_sentence_len: int = 100

    def __post_init__(self):
        if self.beam_size < 1:
            raise ValueError("beam_size must be >= 1")


@dataclass(frozen=True)
class Option:
    start: int
    end: int  # exclusive
    tgt: tuple[str, ...]
    static: float  # weighted phrase features + word penalty (+ OOV penalty)
    oov: bool = False


class Hypothesis:
    __slots__ = ("score", "coverage", "lm_state", "last_end", "back", "option", "covered")

    def __init__(self, score, coverage, lm_state, last_end, back, option, covered):
        self.score = score
        self.coverage = coverage
        self.lm_state = lm_state
        self.last_end = last_end  # index of the last source word of the latest phrase
        self.back = back
        self.option = option
        self.covered = covered

    def output(self) -> list[str]:
        parts = []
        h = self
        while h.option is not None:
            parts.append(h.option.tgt)
            h = h.back
        return [w for p in reversed(parts) for w in p]

    def phrases(self) -> list[Option]:
        out = []
        h = self
        while h.option is not None:
            out.append(h.option)
            h = h.back
        return out[::-1]


def translation_options(sentence: Sequence[str], table: PhraseTable, weights: DecodingWeights,
                        max_phrase_len: int = 7) -> list[list[list[Option]]]:
    """``opts[i][j]`` lists the options covering source span [i, j)."""
    n = len(sentence)
    opts: list[list[list[Option]]] = [[[] for _ in range(n + 1)] for _ in range(n + 1)]
    wp = weights.w_phrase
    for i in range(n):
        for j in range(i + 1, min(n, i + max_phrase_len) + 1):
            span = tuple(sentence[i:j])
            if any(w in MASK_TOKENS for w in span):
                continue
            for o in table.get(span):
                tm = sum(w * math.log(s) for w, s in zip(wp, o.scores))
                opts[i][j].append(Option(i, j, o.tgt, tm - weights.w_word_penalty * len(o.tgt)))
        if not opts[i][i + 1]:
            word = sentence[i]
            oov = word not in MASK_TOKENS
            opts[i][i + 1].append(
                Option(i, i + 1, (word,), -weights.w_word_penalty + (OOV_PENALTY if oov else 0.0), oov)
            )
    return opts


def precompute_future_cost(sentence: Sequence[str], table: PhraseTable, lm: NGramLanguageModel,
                           weights: DecodingWeights, max_phrase_len: int = 7,
                           options=None) -> list[list[float]]:
    """Best achievable score estimate for every span [i, j), ignoring distortion.

    A phrase's LM part is scored without left context. Spans combine by the best
    split, so ``cost[i][k] >= cost[i][j] + cost[j][k]``.
    """
    n = len(sentence)
    if options is None:
        options = translation_options(sentence, table, weights, max_phrase_len)
    lm_w = weights.w_lm * LN10
    cost = [[-math.inf] * (n + 1) for _ in range(n + 1)]
    for i in range(n):
        for j in range(i + 1, n + 1):
            for o in options[i][j]:
                est = o.static + lm_w * lm.score_sequence(o.tgt, bos=False, eos=False)
                if est > cost[i][j]:
                    cost[i][j] = est
    for length in range(2, n + 1):
        for i in range(n - length + 1):
            j = i + length
            best = cost[i][j]
            for k in range(i + 1, j):
                c = cost[i][k] + cost[k][j]
                if c > best:
                    best = c
            cost[i][j] = best
    return cost


class Decoder:
    def __init__(self, table: PhraseTable, lm: NGramLanguageModel,
                 weights: DecodingWeights = DecodingWeights(), config: DecoderConfig = DecoderConfig()):
        self.table = table
        self.lm = lm
        self.weights = weights
        self.config = config

    def decode(self, sentence: Sequence[str]) -> list[str]:
        return self.decode_with_score(sentence)[0]

    def decode_with_score(self, sentence: Sequence[str]) -> tuple[list[str], float]:
        hyp = self.search(sentence)
        if hyp is None:
            return [], 0.0
        return hyp.output(), hyp.score

    def search(self, sentence: Sequence[str]) -> Hypothesis | None:
        n = len(sentence)
        if n == 0:
            return None
        cfg = self.config
        if n > cfg.max_sentence_len:
            raise ValueError(f"sentence has {n} tokens, above the cap of {cfg.max_sentence_len}")
        best = self._search(sentence, cfg.distortion_limit)
        if best is None:
            # distortion constraints can strand every hypothesis; monotone search always completes
            log.warning("no complete hypothesis under distortion limit %d; retrying monotone",
                        cfg.distortion_limit)
            best = self._search(sentence, 0)
        if best is None:
            raise RuntimeError("decoder produced no complete hypothesis")
        return best

    def _search(self, sentence, limit: int) -> Hypothesis | None:
        n = len(sentence)
        cfg, lm, w = self.config, self.lm, self.weights
        options = translation_options(sentence, self.table, w, cfg.max_phrase_len)
        fc = precompute_future_cost(sentence, self.table, lm, w, cfg.max_phrase_len, options)
        lm_w = w.w_lm * LN10
        w_dist = w.w_distortion
        full = (1 << n) - 1
        unlimited = limit < 0

        # (end, coverage mask, static score, target, option) for spans starting at each position
        by_start = [[(j, ((1 << j) - 1) ^ ((1 << i) - 1), o.static, o.tgt, o)
                     for j in range(i + 1, n + 1) for o in options[i][j]] for i in range(n)]

        fc_cache: dict[int, float] = {}
        phrase_lm: dict[tuple, tuple[float, tuple]] = {}

        def future(coverage: int) -> float:
            v = fc_cache.get(coverage)
            if v is not None:
                return v
            total = 0.0
            i = 0
            while i < n:
                if coverage >> i & 1:
                    i += 1
                    continue
                j = i
                while j < n and not coverage >> j & 1:
                    j += 1
                total += fc[i][j]
                i = j
            fc_cache[coverage] = total
            return total

        stacks: list[dict] = [dict() for _ in range(n + 1)]
        root = Hypothesis(0.0, 0, lm.begin(), -1, None, None, 0)
        stacks[0][(0, root.lm_state, -1)] = root

        for k in range(n):
            stack = stacks[k]
            if not stack:
                continue
            hyps = list(stack.values())
            if len(hyps) > cfg.beam_size:
                hyps = sorted(hyps, key=lambda h: -(h.score + future(h.coverage)))[:cfg.beam_size]
            for h in hyps:
                cov = h.coverage
                first_gap = 0
                while cov >> first_gap & 1:
                    first_gap += 1
                for s in range(first_gap, n):
                    if cov >> s & 1:
                        continue
                    jump = s - h.last_end - 1
                    if not unlimited and abs(jump) > limit:
                        continue
                    dist = -abs(jump) * w_dist
                    # a phrase starting past the first gap must leave that gap reachable
                    check_gap = not unlimited and first_gap < s
                    base = h.score + dist
                    h_state = h.lm_state
                    for end, m, static, tgt, o in by_start[s]:
                        if cov & m:
                            continue
                        new_cov = cov | m
                        if check_gap and new_cov != full and end - first_gap > limit:
                            continue
                        pk = (h_state, tgt)
                        hit = phrase_lm.get(pk)
                        if hit is None:
                            state = h_state
                            lm_sum = 0.0
                            for word in tgt:
                                lp, state = lm.score_word(state, word)
                                lm_sum += lp
                            hit = phrase_lm[pk] = (lm_sum, state)
                        lm_sum, state = hit
                        if new_cov == full:
                            lm_sum += lm.end_score(state)
                        score = base + static + lm_w * lm_sum
                        covered = h.covered + end - s
                        key = (new_cov, state, end - 1)
                        target = stacks[covered]
                        old = target.get(key)
                        if old is None or score > old.score:
                            target[key] = Hypothesis(score, new_cov, state, end - 1, h, o, covered)
        final = stacks[n]
        if not final:
            return None
        best = None
        for h in final.values():
            if best is None or h.score > best.score:
                best = h
        return best


def decode(sentence: Sequence[str], table: PhraseTable, lm: NGramLanguageModel,
           weights: DecodingWeights = DecodingWeights(), config: DecoderConfig = DecoderConfig()) -> list[str]:
    return Decoder(table, lm, weights, config).decode(sentence)


# ---------------------------------------------------------------------------
# corpus decoding

_worker_decoder: Decoder | None = None


def _init_worker(decoder: Decoder) -> None:
    global _worker_decoder
    _worker_decoder = decoder


def _decode_one(sentence):
    assert _worker_decoder is not None
    return _worker_decoder.decode(sentence)


def resolve_workers(workers: int) -> int:
    return workers if workers > 0 else (os.cpu_count() or 1)


def decode_corpus(sentences: Sequence[Sequence[str]], decoder: Decoder, workers: int = 1) -> list[list[str]]:
    """Decode sentences in input order; results do not depend on ``workers``."""
    workers = resolve_workers(workers)
    if workers == 1 or len(sentences) < 2:
        return [decoder.decode(s) for s in sentences]
    ctx = mp.get_context("fork") if "fork" in mp.get_all_start_methods() else mp.get_context()
    chunk = max(1, len(sentences) // (workers * 4))
    with ctx.Pool(workers, initializer=_init_worker, initargs=(decoder,)) as pool:
        return pool.map(_decode_one, [list(s) for s in sentences], chunksize=chunk)


# ---------------------------------------------------------------------------
# tuning


def _perturb(base: DecodingWeights, rng: random.Random) -> DecodingWeights:
    def mult(x):
        return x * math.exp(rng.uniform(-1.0, 1.0))

    return DecodingWeights(
        tuple(mult(x) for x in base.w_phrase),
        mult(base.w_lm),
        mult(base.w_distortion),
        base.w_word_penalty + rng.uniform(-1.0, 1.0),
    )


def tune_weights(dev: Sequence[tuple[Sequence[str], str]], table: PhraseTable, lm: NGramLanguageModel,
                 config: DecoderConfig = DecoderConfig(), trials: int = 10, seed: int = 0,
                 base: DecodingWeights = DecodingWeights(), workers: int = 1) -> DecodingWeights:
    """Random search around ``base`` maximizing corpus BLEU on ``dev``.

    ``dev`` holds (source tokens, reference text). The base weights are scored
    first and only strictly better candidates replace them.
    """
    from .bleu import corpus_score

    if trials <= 0:
        return base
    if not dev:
        raise ValueError("tuning needs a non-empty dev set")
    sources = [list(s) for s, _ in dev]
    refs = [r for _, r in dev]

    def dev_bleu(weights):
        hyps = decode_corpus(sources, Decoder(table, lm, weights, config), workers)
        return corpus_score([" ".join(h) for h in hyps], refs)

    rng = random.Random(seed)
    best, best_bleu = base, dev_bleu(base)
    log.info("tuning: base weights dev BLEU %.2f", best_bleu)
    for t in range(trials):
        cand = _perturb(base, rng)
        b = dev_bleu(cand)
        log.info("tuning: trial %d dev BLEU %.2f", t + 1, b)
        if b > best_bleu:
            best, best_bleu = cand, b
    return best

