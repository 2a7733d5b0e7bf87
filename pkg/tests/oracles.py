"""Independent reference implementations shared by the unit and acceptance tests."""

import math

from stif.decoder import OOV_PENALTY
from stif.ngramlm import EOS, LN10
from stif.phrasetable import PhraseOption, PhraseTable
from stif.textnorm import MASK_TOKENS, is_punct


def span_choices(sentence, table, max_phrase_len):
    """(start, end, target, feature scores or None, is_oov) for every usable span."""
    n = len(sentence)
    out = []
    for i in range(n):
        single = False
        for j in range(i + 1, min(n, i + max_phrase_len) + 1):
            span = tuple(sentence[i:j])
            if any(w in MASK_TOKENS for w in span):
                continue
            for opt in table.get(span):
                out.append((i, j, opt.tgt, opt.scores, False))
                single |= j == i + 1
        if not single:
            out.append((i, i + 1, (sentence[i],), None, sentence[i] not in MASK_TOKENS))
    return out


def derivation_score(derivation, lm, weights):
    """Model score of a complete derivation, computed term by term."""
    total = 0.0
    prev_end = -1
    output = []
    for start, end, tgt, scores, oov in derivation:
        if scores is not None:
            total += sum(w * math.log(s) for w, s in zip(weights.w_phrase, scores))
        if oov:
            total += OOV_PENALTY
        total += weights.w_distortion * -abs(start - prev_end - 1)
        prev_end = end - 1
        output.extend(tgt)
    total += weights.w_word_penalty * -len(output)
    total += weights.w_lm * LN10 * lm.score_sequence(output)
    return total, output


def exhaustive_decode(sentence, table, lm, weights, distortion_limit, max_phrase_len=7):
    """Best (score, output) over every segmentation, ordering and option choice.

    A step is legal when its jump is within the limit and, unless it completes
    the sentence, the first uncovered position stays within the limit of the
    phrase end.
    """
    n = len(sentence)
    if n == 0:
        return None
    choices = span_choices(sentence, table, max_phrase_len)
    by_start = {}
    for c in choices:
        by_start.setdefault(c[0], []).append(c)
    best = [None]
    full = (1 << n) - 1

    def rec(cov, last_end, derivation):
        if cov == full:
            score, output = derivation_score(derivation, lm, weights)
            if best[0] is None or score > best[0][0]:
                best[0] = (score, output)
            return
        first_gap = next(k for k in range(n) if not cov >> k & 1)
        for s in range(n):
            if cov >> s & 1:
                continue
            if distortion_limit >= 0 and abs(s - last_end - 1) > distortion_limit:
                continue
            for c in by_start.get(s, ()):
                end = c[1]
                mask = ((1 << end) - 1) ^ ((1 << s) - 1)
                if cov & mask:
                    continue
                new_cov = cov | mask
                if (distortion_limit >= 0 and new_cov != full and first_gap < s
                        and end - first_gap > distortion_limit):
                    continue
                derivation.append(c)
                rec(new_cov, end - 1, derivation)
                derivation.pop()

    rec(0, -1, [])
    return best[0]


def dictionary_table(dictionary):
    """Single-word phrase table with one certain option per dictionary entry."""
    options = {}
    for key, value in dictionary.entries.items():
        if key in MASK_TOKENS or is_punct(key):
            continue
        options[(key,)] = [PhraseOption(tuple(value.split()), (1.0, 1.0, 1.0, 1.0))]
    return PhraseTable(options)


def brute_force_boxes(n_src, n_tgt, links, max_len):
    """Every (source span, target span) box with a link inside and none crossing its edges."""
    out = set()
    for s1 in range(n_src):
        for s2 in range(s1, min(n_src, s1 + max_len)):
            for t1 in range(n_tgt):
                for t2 in range(t1, min(n_tgt, t1 + max_len)):
                    inside = False
                    consistent = True
                    for i, j in links:
                        in_s, in_t = s1 <= i <= s2, t1 <= j <= t2
                        if in_s and in_t:
                            inside = True
                        elif in_s or in_t:
                            consistent = False
                            break
                    if inside and consistent:
                        out.add((s1, s2, t1, t2))
    return out


def backoff_logp(lm, history, word):
    """log10 p(word | history) from the stored tables by plain backoff recursion."""
    ctx = tuple(history)[-(lm.order - 1):] if lm.order > 1 else ()
    if word not in lm.vocab and word != EOS:
        return lm.unk_logprob
    bow = 0.0
    while True:
        if ctx + (word,) in lm.logprob:
            return lm.logprob[ctx + (word,)] + bow
        bow += lm.backoff.get(ctx, 0.0)
        ctx = ctx[1:]
