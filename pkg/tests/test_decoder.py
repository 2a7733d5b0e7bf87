import math

import pytest
from hypothesis import assume, given, settings, strategies as st

from oracles import dictionary_table, exhaustive_decode
from stif.decoder import (
    Decoder,
    DecoderConfig,
    DecodingWeights,
    decode,
    decode_corpus,
    precompute_future_cost,
    translation_options,
    tune_weights,
)
from stif.lexicon import InformalDictionary, translate_word_level
from stif.ngramlm import train_lm
from stif.phrasetable import PhraseOption, PhraseTable

LM = train_lm([s.split() for s in [
    "saya tidak bisa login", "saya sudah transfer tetapi saldo tidak bertambah",
    "tolong cek paket saya", "paket saya belum sampai", "yang tidak bisa",
    "terima kasih admin", "admin tolong cek saldo saya", "x y z", "y x z z",
]], 3)

SRC_WORDS = ["a", "b", "c", "d", "ga", "yg"]
TGT_WORDS = ["saya", "tidak", "bisa", "yang", "x", "y", "z", "admin"]


@st.composite
def small_tables(draw, all_single=False):
    opts = {}
    phrases = draw(st.lists(st.lists(st.sampled_from(SRC_WORDS), min_size=1, max_size=3),
                            max_size=10))
    if all_single:
        phrases += [[w] for w in SRC_WORDS]
    prob = st.floats(0.05, 1.0)
    for src in phrases:
        n = draw(st.integers(1, 3))
        opts[tuple(src)] = [
            PhraseOption(tuple(draw(st.lists(st.sampled_from(TGT_WORDS), min_size=1, max_size=2))),
                         tuple(draw(prob) for _ in range(4)))
            for _ in range(n)
        ]
    return PhraseTable(opts)


weights_strategy = st.builds(
    DecodingWeights,
    st.tuples(*[st.floats(0.05, 1.0)] * 4), st.floats(0.05, 1.0), st.floats(0.0, 1.0), st.floats(-2.0, 2.0))

sentences = st.lists(st.sampled_from(SRC_WORDS + ["<num>", "zz"]), min_size=1, max_size=5)


def test_empty_input():
    assert decode([], PhraseTable(), LM) == []


def test_dictionary_example():
    table = dictionary_table(InformalDictionary({"yg": "yang", "ga": "tidak"}))
    out = decode("yg ga bisa".split(), table, LM, config=DecoderConfig(distortion_limit=0))
    assert out == ["yang", "tidak", "bisa"]


@settings(max_examples=150, deadline=None)
@given(small_tables(), weights_strategy, sentences, st.sampled_from([-1, 0, 1, 2, 4]))
def test_matches_exhaustive_search(table, weights, sentence, limit):
    cfg = DecoderConfig(beam_size=10**6, distortion_limit=limit)
    out, score = Decoder(table, LM, weights, cfg).decode_with_score(sentence)
    best_score, best_out = exhaustive_decode(sentence, table, LM, weights, limit)
    assert score == pytest.approx(best_score, abs=1e-6)
    if out != best_out:
        # a different output is only acceptable as an exact tie
        assert abs(score - best_score) <= 1e-6


@settings(max_examples=40, deadline=None)
@given(small_tables(), weights_strategy,
       st.lists(st.sampled_from(SRC_WORDS), min_size=6, max_size=8))
def test_monotone_matches_exhaustive_up_to_8_tokens(table, weights, sentence):
    cfg = DecoderConfig(beam_size=10**6, distortion_limit=0)
    _, score = Decoder(table, LM, weights, cfg).decode_with_score(sentence)
    assert score == pytest.approx(exhaustive_decode(sentence, table, LM, weights, 0)[0], abs=1e-6)


@settings(max_examples=100, deadline=None)
@given(small_tables(), sentences)
def test_oov_tokens_survive_once(table, sentence):
    out = decode(sentence, table, LM)
    covered = {w for src in table.options for w in src}
    for w in set(sentence):
        if w not in covered:
            assert out.count(w) == sentence.count(w)


def test_masks_pass_through_even_with_table_entry():
    table = PhraseTable({("<num>",): [PhraseOption(("angka",), (1.0,) * 4)],
                         ("a", "<num>"): [PhraseOption(("x",), (1.0,) * 4)]})
    assert decode(["a", "<num>"], table, LM) == ["a", "<num>"]


@settings(max_examples=60, deadline=None)
@given(small_tables(all_single=True), weights_strategy, sentences.filter(lambda s: "zz" not in s),
       st.floats(0.1, 10.0))
def test_argmax_invariant_to_weight_scaling(table, weights, sentence, c):
    cfg = DecoderConfig(beam_size=10**6)
    a, sa = Decoder(table, LM, weights, cfg).decode_with_score(sentence)
    b, sb = Decoder(table, LM, weights.scaled(c), cfg).decode_with_score(sentence)
    # sentences containing masks carry no OOV penalty, so the whole model scales
    assert sb == pytest.approx(c * sa, rel=1e-9, abs=1e-9)
    if a != b:
        ta = exhaustive_decode(sentence, table, LM, weights, cfg.distortion_limit)
        assert ta[0] == pytest.approx(sa, abs=1e-6)


@settings(max_examples=60, deadline=None)
@given(small_tables(), weights_strategy, st.lists(st.sampled_from(SRC_WORDS), min_size=1, max_size=7))
def test_larger_beam_never_scores_lower(table, weights, sentence):
    scores = [Decoder(table, LM, weights, DecoderConfig(beam_size=b)).decode_with_score(sentence)[1]
              for b in (1, 2, 5, 50)]
    assert all(b >= a - 1e-9 for a, b in zip(scores, scores[1:]))


@settings(max_examples=60, deadline=None)
@given(small_tables(), weights_strategy, sentences)
def test_future_cost_properties(table, weights, sentence):
    opts = translation_options(sentence, table, weights)
    fc = precompute_future_cost(sentence, table, LM, weights, options=opts)
    n = len(sentence)
    for i in range(n):
        for j in range(i + 1, n + 1):
            for k in range(i + 1, j):
                assert fc[i][j] >= fc[i][k] + fc[k][j] - 1e-9
            assert math.isfinite(fc[i][j])


def test_future_cost_single_option_base_case():
    table = PhraseTable({("a",): [PhraseOption(("x",), (0.5, 0.5, 0.5, 0.5))]})
    w = DecodingWeights()
    fc = precompute_future_cost(["a"], table, LM, w)
    expected = 0.8 * math.log(0.5) + 1.0 + w.w_lm * math.log(10) * LM.score_sequence(["x"], False, False)
    assert fc[0][1] == pytest.approx(expected)


def test_sentence_length_cap():
    with pytest.raises(ValueError, match="cap"):
        Decoder(PhraseTable(), LM, config=DecoderConfig(max_sentence_len=3)).decode(["a"] * 4)


def test_weights_validation_and_round_trip(tmp_path):
    with pytest.raises(ValueError):
        DecodingWeights(w_lm=math.inf)
    with pytest.raises(ValueError):
        DecodingWeights((0.1, 0.2))
    with pytest.raises(ValueError):
        DecodingWeights.from_dict({"w_lm": 1.0})
    with pytest.raises(ValueError):
        DecoderConfig(beam_size=0)


finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@given(st.tuples(finite, finite, finite, finite), finite, finite, finite)
def test_weights_file_round_trip_is_byte_identical(tmp_path_factory, wp, lm, dist, wpen):
    d = tmp_path_factory.mktemp("w")
    w = DecodingWeights(wp, lm, dist, wpen)
    w.save(d / "a.txt")
    again = DecodingWeights.load(d / "a.txt")
    assert again == w
    again.save(d / "b.txt")
    assert (d / "a.txt").read_bytes() == (d / "b.txt").read_bytes()


def test_decode_corpus_independent_of_workers():
    table = PhraseTable({("a",): [PhraseOption(("x",), (0.5,) * 4), PhraseOption(("y",), (0.4,) * 4)],
                         ("b", "c"): [PhraseOption(("z", "z"), (0.9,) * 4)]})
    dec = Decoder(table, LM)
    sents = [["a", "b", "c"], ["c", "a"], ["b"], ["a", "a", "zz"]] * 5
    assert decode_corpus(sents, dec, 1) == decode_corpus(sents, dec, 3)


def test_tuning_contract():
    table = PhraseTable({("ga",): [PhraseOption(("tidak",), (0.6,) * 4), PhraseOption(("y",), (0.4,) * 4)],
                         ("yg",): [PhraseOption(("yang",), (0.7,) * 4)]})
    dev = [(["yg", "ga", "bisa"], "yang tidak bisa"), (["ga", "bisa"], "tidak bisa")]
    base = DecodingWeights()
    assert tune_weights(dev, table, LM, trials=0) == base
    a = tune_weights(dev, table, LM, trials=5, seed=3)
    assert a == tune_weights(dev, table, LM, trials=5, seed=3)
    from stif.bleu import corpus_score

    def bleu(w):
        return corpus_score([" ".join(Decoder(table, LM, w).decode(s)) for s, _ in dev], [r for _, r in dev])
    assert bleu(a) >= bleu(base)
    with pytest.raises(ValueError):
        tune_weights([], table, LM, trials=1)


def test_dictionary_equivalence_property():
    d = InformalDictionary({"yg": "yang", "ga": "tidak", "knp": "kenapa", "makasih": "terima kasih"})
    table = dictionary_table(d)
    dec = Decoder(table, LM, config=DecoderConfig(distortion_limit=0))
    for s in (["yg", "ga", "bisa", "."], ["makasih", "min", "<num>"], ["knp", "?"]):
        assert dec.decode(s) == translate_word_level(s, d)
