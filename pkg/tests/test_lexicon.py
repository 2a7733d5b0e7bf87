import logging

import pytest
from hypothesis import given, strategies as st

from stif.lexicon import InformalDictionary, load_dictionary, parse_dictionary, translate_word_level


def test_parse_tab_and_comma():
    d = parse_dictionary(["yg\tyang", "ga,tidak", "", "Knp\tkenapa"])
    assert d.entries == {"yg": "yang", "ga": "tidak", "knp": "kenapa"}


def test_last_duplicate_wins_and_self_maps_dropped():
    d = parse_dictionary(["gk\tgak", "gk\ttidak", "bisa\tbisa"])
    assert d.entries == {"gk": "tidak"}


def test_malformed_line_reports_line_number():
    with pytest.raises(ValueError, match=":2:"):
        parse_dictionary(["yg\tyang", "no separator here"])
    with pytest.raises(ValueError, match=":1:"):
        parse_dictionary(["a\tb\tc"])


def test_empty_file_warns(tmp_path, caplog):
    p = tmp_path / "empty.tsv"
    p.write_text("")
    with caplog.at_level(logging.WARNING):
        d = load_dictionary(p)
    assert len(d) == 0
    assert "empty" in caplog.text


def test_non_idempotent_warns(caplog):
    with caplog.at_level(logging.WARNING):
        d = parse_dictionary(["gk\tga", "ga\ttidak"])
    assert not d.idempotent
    assert "idempotent" in caplog.text


def test_translate_examples():
    d = parse_dictionary(["yg\tyang", "ga\ttidak", "gini\tbegini"])
    assert translate_word_level(["yg", "ga", "bisa"], d) == ["yang", "tidak", "bisa"]
    assert translate_word_level(["saya", "bisa"], d) == ["saya", "bisa"]
    assert translate_word_level(["kaya", "gini"], d) == ["kaya", "begini"]


def test_punct_and_masks_never_match():
    d = InformalDictionary({".": "titik", "<num>": "angka", "?": "tanya"})
    assert translate_word_level([".", "<num>", "?"], d) == [".", "<num>", "?"]


def test_multiword_values_split():
    d = parse_dictionary(["makasih\tterima kasih"])
    assert d.multiword
    assert translate_word_level(["makasih", "min"], d) == ["terima", "kasih", "min"]


keys = st.sampled_from(["yg", "ga", "gk", "knp", "tp", "udh", "min"])
vals = st.sampled_from(["yang", "tidak", "kenapa", "tetapi", "sudah", "admin"])
tokens = st.lists(st.sampled_from(["yg", "ga", "bisa", "saya", ".", "<num>", "knp", "tp"]), max_size=12)


@given(st.dictionaries(keys, vals), tokens)
def test_single_word_dictionary_properties(entries, toks):
    d = InformalDictionary(entries)
    out = translate_word_level(toks, d)
    assert len(out) == len(toks)
    # value set is disjoint from key set here, so translation is idempotent
    assert d.idempotent
    assert translate_word_level(out, d) == out
