"""IBM Model 1 word alignment, Viterbi links and symmetrization."""

from __future__ import annotations

import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

log = logging.getLogger(__name__)

NULL = "<NULL>"
FLOOR = 1e-7
PRUNE = 1e-6

Pair = tuple[Sequence[str], Sequence[str]]


@dataclass
class TranslationTable:
    """``t[source][target]`` = p(target | source); includes the NULL source row."""

    t: dict[str, dict[str, float]] = field(default_factory=dict)
    log_likelihoods: list[float] = field(default_factory=list)

    def prob(self, source: str, target: str, floor: float = 0.0) -> float:
        p = self.t.get(source, {}).get(target, 0.0)
        return p if p > floor else floor

    def __getitem__(self, key: tuple[str, str]) -> float:
        return self.prob(*key)

    def row_sums(self) -> dict[str, float]:
        return {s: math.fsum(row.values()) for s, row in self.t.items()}

    def dump(self) -> list[str]:
        """``source target prob`` lines, sorted."""
        return [f"{s} {w} {p!r}" for s in sorted(self.t) for w, p in sorted(self.t[s].items())]


@dataclass
class AlignmentMatrix:
    links: frozenset[tuple[int, int]]
    source_len: int
    target_len: int

    def __post_init__(self):
        self.links = frozenset(self.links)
        for i, j in self.links:
            if not (0 <= i < self.source_len and 0 <= j < self.target_len):
                raise ValueError(f"link {i}-{j} out of range for {self.source_len}x{self.target_len}")

    def transpose(self) -> "AlignmentMatrix":
        return AlignmentMatrix(frozenset((j, i) for i, j in self.links), self.target_len, self.source_len)

    def to_pharaoh(self) -> str:
        return " ".join(f"{i}-{j}" for i, j in sorted(self.links))

    @classmethod
    def from_pharaoh(cls, line: str, source_len: int, target_len: int) -> "AlignmentMatrix":
        links = set()
        for item in line.split():
            i, j = item.split("-")
            links.add((int(i), int(j)))
        return cls(frozenset(links), source_len, target_len)


def _clean(corpus: Iterable[Pair]) -> list[tuple[tuple[str, ...], tuple[str, ...]]]:
    pairs = []
    skipped = 0
    for src, tgt in corpus:
        if not src or not tgt:
            skipped += 1
            continue
        pairs.append((tuple(src), tuple(tgt)))
    if skipped:
        log.warning("skipped %d pairs with an empty side", skipped)
    return pairs


def corpus_log_likelihood(pairs, t: dict[str, dict[str, float]] | None) -> float:
    """Sum over target words of ln( mean over NULL+source of t(target|source) ).

    ``t=None`` means the uniform initial model, which only needs the target vocabulary size.
    """
    if t is None:
        vocab = {w for _, tgt in pairs for w in tgt}
        return -sum(len(tgt) for _, tgt in pairs) * math.log(len(vocab))
    ll = 0.0
    for src, tgt in pairs:
        rows = [t[NULL]] + [t[s] for s in src]
        norm = math.log(len(rows))
        for w in tgt:
            ll += math.log(sum(r.get(w, 0.0) for r in rows)) - norm
    return ll


def train_ibm1(corpus: Iterable[Pair], iterations: int = 5,
               on_iteration: Callable[[int, TranslationTable], None] | None = None) -> TranslationTable:
    """EM for IBM Model 1 from a uniform start, NULL prepended to every source sentence.

    ``log_likelihoods[k]`` is the corpus log-likelihood of the model after ``k``
    EM iterations (entry 0 is the uniform start). ``on_iteration`` sees the table
    after every M-step.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    pairs = _clean(corpus)
    if not pairs:
        raise ValueError("cannot train IBM Model 1 on an empty corpus")

    lls = [corpus_log_likelihood(pairs, None)]
    t: dict[str, dict[str, float]] | None = None
    for it in range(iterations):
        counts: dict[str, dict[str, float]] = defaultdict(lambda: defaultdict(float))
        for src, tgt in pairs:
            sources = (NULL,) + src
            if t is None:
                # uniform model: every source position equally likely
                share = 1.0 / len(sources)
                for w in tgt:
                    for s in sources:
                        counts[s][w] += share
                continue
            rows = [t[s] for s in sources]
            for w in tgt:
                probs = [r.get(w, 0.0) for r in rows]
                z = sum(probs)
                for s, p in zip(sources, probs):
                    if p > 0.0:
                        counts[s][w] += p / z
        t = {}
        for s, row in counts.items():
            total = sum(row.values())
            t[s] = {w: c / total for w, c in row.items()}
        table = TranslationTable(t, lls)
        lls.append(corpus_log_likelihood(pairs, t))
        if on_iteration is not None:
            on_iteration(it + 1, table)
    assert t is not None
    return TranslationTable(_prune(t), lls)


def _prune(t: dict[str, dict[str, float]], threshold: float = PRUNE) -> dict[str, dict[str, float]]:
    out = {}
    for s, row in t.items():
        kept = {w: p for w, p in row.items() if p >= threshold}
        if not kept:
            kept = {max(row, key=row.get): 1.0}
        total = sum(kept.values())
        out[s] = {w: p / total for w, p in kept.items()}
    return out


def viterbi_align(pair: Pair, table: TranslationTable, floor: float = FLOOR) -> AlignmentMatrix:
    """Link each target word to its most probable source word, or leave it unlinked when NULL wins.

    Ties go to the smaller source index, and a source word beats NULL on a tie.
    Words whose best probability does not exceed ``floor`` stay unlinked.
    """
    src, tgt = pair
    null_row = table.t.get(NULL, {})
    rows = [table.t.get(s, {}) for s in src]
    links = set()
    for j, w in enumerate(tgt):
        best_i, best_p = -1, 0.0
        for i, row in enumerate(rows):
            p = row.get(w, 0.0)
            if p > best_p:
                best_i, best_p = i, p
        if best_i >= 0 and best_p > floor and best_p >= null_row.get(w, 0.0):
            links.add((best_i, j))
    return AlignmentMatrix(frozenset(links), len(src), len(tgt))


NEIGHBORS = ((-1, 0), (0, -1), (1, 0), (0, 1), (-1, -1), (-1, 1), (1, -1), (1, 1))
HEURISTICS = ("intersection", "union", "grow-diag", "grow-diag-final", "grow-diag-final-and")


def symmetrize(fwd: AlignmentMatrix, rev: AlignmentMatrix, heuristic: str = "grow-diag-final-and") -> AlignmentMatrix:
    """Combine a source->target alignment with a target->source one.

    ``rev`` is indexed (target, source); it is transposed before merging.
    """
    if heuristic not in HEURISTICS:
        raise ValueError(f"unknown heuristic {heuristic!r}; choose from {HEURISTICS}")
    if (rev.source_len, rev.target_len) != (fwd.target_len, fwd.source_len):
        raise ValueError(
            f"dimension mismatch: forward is {fwd.source_len}x{fwd.target_len}, "
            f"reverse is {rev.source_len}x{rev.target_len}"
        )
    n_src, n_tgt = fwd.source_len, fwd.target_len
    e2f = set(fwd.links)
    f2e = {(i, j) for j, i in rev.links}
    inter = e2f & f2e
    union = e2f | f2e
    if heuristic == "intersection":
        return AlignmentMatrix(frozenset(inter), n_src, n_tgt)
    if heuristic == "union":
        return AlignmentMatrix(frozenset(union), n_src, n_tgt)

    alignment = set(inter)
    src_aligned = {i for i, _ in alignment}
    tgt_aligned = {j for _, j in alignment}

    def add(i, j):
        alignment.add((i, j))
        src_aligned.add(i)
        tgt_aligned.add(j)

    # target positions in the outer loop, as in the published pseudocode
    added = True
    while added:
        added = False
        for j in range(n_tgt):
            for i in range(n_src):
                if (i, j) not in alignment:
                    continue
                for di, dj in NEIGHBORS:
                    ni, nj = i + di, j + dj
                    if (ni not in src_aligned or nj not in tgt_aligned) and (ni, nj) in union:
                        add(ni, nj)
                        added = True

    if heuristic != "grow-diag":
        both = heuristic == "grow-diag-final-and"
        for directed in (e2f, f2e):
            for j in range(n_tgt):
                for i in range(n_src):
                    if (i, j) not in directed:
                        continue
                    if both:
                        ok = i not in src_aligned and j not in tgt_aligned
                    else:
                        ok = i not in src_aligned or j not in tgt_aligned
                    if ok:
                        add(i, j)
    return AlignmentMatrix(frozenset(alignment), n_src, n_tgt)


def align_corpus(pairs: Sequence[Pair], fwd: TranslationTable, rev: TranslationTable,
                 heuristic: str = "grow-diag-final-and") -> list[AlignmentMatrix]:
    """Symmetrized Viterbi alignments; ``fwd`` is p(target|source), ``rev`` p(source|target)."""
    out = []
    for src, tgt in pairs:
        a = viterbi_align((src, tgt), fwd)
        b = viterbi_align((tgt, src), rev)
        out.append(symmetrize(a, b, heuristic))
    return out


def lexical_tables(pairs: Sequence[Pair], alignments: Sequence[AlignmentMatrix]) -> tuple[TranslationTable, TranslationTable]:
    """Word translation tables estimated from word-aligned pairs.

    Returns ``(w(target|source), w(source|target))``; unaligned words are
    counted against NULL.
    """
    fwd: dict[str, dict[str, float]] = defaultdict(lambda: defaultdict(float))
    rev: dict[str, dict[str, float]] = defaultdict(lambda: defaultdict(float))
    for (src, tgt), a in zip(pairs, alignments):
        src_linked = {i for i, _ in a.links}
        tgt_linked = {j for _, j in a.links}
        for i, j in sorted(a.links):
            fwd[src[i]][tgt[j]] += 1
            rev[tgt[j]][src[i]] += 1
        for j, w in enumerate(tgt):
            if j not in tgt_linked:
                fwd[NULL][w] += 1
        for i, w in enumerate(src):
            if i not in src_linked:
                rev[NULL][w] += 1

    def norm(c):
        out = {}
        for s, row in c.items():
            total = sum(row.values())
            out[s] = {w: n / total for w, n in row.items()}
        return TranslationTable(out)

    return norm(fwd), norm(rev)
