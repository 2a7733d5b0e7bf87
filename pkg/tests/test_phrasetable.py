import math

import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_force_boxes
from stif.phrasetable import (
    PhraseOption,
    PhrasePair,
    PhraseTable,
    extract_phrases,
    read_phrase_table,
    score_table,
    write_phrase_table,
)
from stif.wordalign import AlignmentMatrix, TranslationTable, align_corpus, lexical_tables, train_ibm1




def phrase_list(pairs):
    return sorted((p.src, p.tgt) for p in pairs)


def boxes_to_phrases(boxes, src, tgt):
    return sorted((tuple(src[s1:s2 + 1]), tuple(tgt[t1:t2 + 1])) for s1, s2, t1, t2 in boxes)


@st.composite
def aligned_pairs(draw, max_n=10):
    n_src, n_tgt = draw(st.integers(1, max_n)), draw(st.integers(1, max_n))
    links = draw(st.frozensets(st.tuples(st.integers(0, n_src - 1), st.integers(0, n_tgt - 1)),
                               max_size=2 * max(n_src, n_tgt)))
    # distinct words so each extracted pair identifies its box
    src = [f"s{i}" for i in range(n_src)]
    tgt = [f"t{j}" for j in range(n_tgt)]
    return src, tgt, AlignmentMatrix(links, n_src, n_tgt)


@settings(max_examples=400, deadline=None)
@given(aligned_pairs(), st.integers(1, 7))
def test_extraction_matches_brute_force(case, max_len):
    src, tgt, a = case
    got = extract_phrases((src, tgt), a, max_len)
    want = boxes_to_phrases(brute_force_boxes(len(src), len(tgt), a.links, max_len), src, tgt)
    assert phrase_list(got) == want
    for p in got:
        assert 1 <= len(p.src) <= max_len and 1 <= len(p.tgt) <= max_len


@settings(max_examples=200, deadline=None)
@given(aligned_pairs(max_n=8))
def test_extraction_is_symmetric_under_transpose(case):
    src, tgt, a = case
    fwd = {(p.src, p.tgt) for p in extract_phrases((src, tgt), a)}
    rev = {(p.tgt, p.src) for p in extract_phrases((tgt, src), a.transpose())}
    assert fwd == rev


def test_extraction_examples():
    pair = ("gak bisa".split(), "tidak bisa".split())
    got = {(" ".join(p.src), " ".join(p.tgt)) for p in
           extract_phrases(pair, AlignmentMatrix(frozenset({(0, 0), (1, 1)}), 2, 2), 7)}
    assert got == {("gak", "tidak"), ("bisa", "bisa"), ("gak bisa", "tidak bisa")}
    assert extract_phrases(pair, AlignmentMatrix(frozenset(), 2, 2)) == []
    full = AlignmentMatrix(frozenset({(0, 0), (0, 1), (1, 0), (1, 1)}), 2, 2)
    assert [(p.src, p.tgt) for p in extract_phrases(pair, full)] == [(tuple(pair[0]), tuple(pair[1]))]


def test_inner_alignment_is_relative():
    pair = ("a b c".split(), "x y".split())
    got = {(p.src, p.tgt): p.alignment
           for p in extract_phrases(pair, AlignmentMatrix(frozenset({(1, 0), (2, 1)}), 3, 2))}
    assert got[(("b", "c"), ("x", "y"))] == ((0, 0), (1, 1))


def test_relative_frequency():
    pairs = [PhrasePair(("gak",), ("tidak",), 8), PhrasePair(("gak",), ("enggak",), 2)]
    lex = TranslationTable({"gak": {"tidak": 0.8, "enggak": 0.2}})
    rev = TranslationTable({"tidak": {"gak": 1.0}, "enggak": {"gak": 1.0}})
    table = score_table(pairs, lex, rev)
    opts = table.get(("gak",))
    assert [o.tgt for o in opts] == [("tidak",), ("enggak",)]
    assert opts[0].scores[0] == 0.8 and opts[1].scores[0] == 0.2
    assert opts[0].scores[1] == 1.0


def test_lexical_weight_uses_null_for_unaligned():
    pair = PhrasePair(("a",), ("x", "y"), 1, ((0, 0),))
    lex_fwd = TranslationTable({"a": {"x": 0.5}, "<NULL>": {"y": 0.25}})
    lex_rev = TranslationTable({"x": {"a": 0.4}})
    (opt,) = score_table([pair], lex_fwd, lex_rev).get(("a",))
    assert opt.scores == (1.0, 1.0, 0.125, 0.4)


def test_singleton_scores():
    pair = PhrasePair(("a",), ("x",), 1, ((0, 0),))
    (opt,) = score_table([pair], TranslationTable({"a": {"x": 1.0}}),
                         TranslationTable({"x": {"a": 1.0}})).get(("a",))
    assert opt.scores == (1.0, 1.0, 1.0, 1.0)


def test_toy_pipeline():
    toy = [("gak bisa".split(), "tidak bisa".split()), ("gak mau".split(), "tidak mau".split())]
    fwd = train_ibm1(toy, 10)
    rev = train_ibm1([(t, s) for s, t in toy], 10)
    aligns = align_corpus(toy, fwd, rev)
    extracted = [pp for p, a in zip(toy, aligns) for pp in extract_phrases(p, a)]
    table = score_table(extracted, *lexical_tables(toy, aligns))
    assert table.get(("gak",))[0] == PhraseOption(("tidak",), table.get(("gak",))[0].scores)
    assert table.get(("gak",))[0].scores[0] == 1.0


def test_top_k_truncation_and_order():
    pairs = [PhrasePair(("s",), (f"t{k}",), k + 1) for k in range(30)]
    lex = TranslationTable({"s": {f"t{k}": 1 / 30 for k in range(30)}})
    rev = TranslationTable({f"t{k}": {"s": 1.0} for k in range(30)})
    opts = score_table(pairs, lex, rev, top_k=20).get(("s",))
    assert len(opts) == 20
    phis = [o.scores[0] for o in opts]
    assert phis == sorted(phis, reverse=True)
    assert sum(phis) <= 1 + 1e-6


@st.composite
def phrase_pair_lists(draw):
    words_s, words_t = st.sampled_from(["a", "b", "c"]), st.sampled_from(["x", "y", "z"])
    out = []
    for _ in range(draw(st.integers(1, 25))):
        s = tuple(draw(st.lists(words_s, min_size=1, max_size=3)))
        t = tuple(draw(st.lists(words_t, min_size=1, max_size=3)))
        out.append(PhrasePair(s, t, draw(st.integers(1, 5)), ((0, 0),)))
    return out


def uniform_lex():
    fw = {s: {t: 1 / 3 for t in "xyz"} for s in "abc"}
    rv = {t: {s: 1 / 3 for s in "abc"} for t in "xyz"}
    return TranslationTable(fw), TranslationTable(rv)


@given(phrase_pair_lists())
def test_scores_in_unit_interval_and_phi_sums(pairs):
    table = score_table(pairs, *uniform_lex(), top_k=1000)
    for src, opts in table.options.items():
        assert math.fsum(o.scores[0] for o in opts) == pytest.approx(1.0, abs=1e-5)
        for o in opts:
            assert all(0 < x <= 1 for x in o.scores)
        phis = [o.scores[0] for o in opts]
        assert phis == sorted(phis, reverse=True)


@settings(max_examples=50, deadline=None)
@given(phrase_pair_lists())
def test_file_round_trip_is_byte_identical(tmp_path_factory, pairs):
    d = tmp_path_factory.mktemp("pt")
    table = score_table(pairs, *uniform_lex())
    write_phrase_table(table, d / "a.txt")
    again = read_phrase_table(d / "a.txt")
    assert again == table
    write_phrase_table(again, d / "b.txt")
    assert (d / "a.txt").read_bytes() == (d / "b.txt").read_bytes()


def test_reader_ignores_extra_fields_and_rejects_bad_lines(tmp_path):
    p = tmp_path / "pt.txt"
    p.write_text("a b ||| x ||| 0.5 0.5 0.25 1 ||| 0-0 1-0 ||| 2 2 1\n")
    table = read_phrase_table(p)
    assert table.get(("a", "b")) == [PhraseOption(("x",), (0.5, 0.5, 0.25, 1.0))]
    p.write_text("a ||| x\n")
    with pytest.raises(ValueError):
        read_phrase_table(p)


def test_truncated():
    t = PhraseTable({("a",): [PhraseOption(("x",), (0.6,) * 4), PhraseOption(("y",), (0.4,) * 4)]})
    assert t.truncated(1).get(("a",)) == [PhraseOption(("x",), (0.6,) * 4)]
    assert t.max_source_len == 1 and ("a",) in t and len(t) == 1
