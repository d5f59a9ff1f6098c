from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from stylocloak.errors import LexiconParseError, MissingFileError
from stylocloak.textcore import (
    INVISIBLE_CHARS,
    Document,
    FunctionWordList,
    LemmaTable,
    Token,
    TokenMode,
    lemma_of,
    load_lexicons,
    surfaces,
    tokenize,
)
from .conftest import AURELIUS

ZWSP = "​"


def test_aurelius_counts():
    tokens = tokenize(AURELIUS, TokenMode.RAW)
    assert len(tokens) == 33
    assert len({t.surface for t in tokens}) == 28
    assert tokenize(AURELIUS, TokenMode.SANITIZED) == tokens


def test_empty_text():
    assert tokenize("", TokenMode.RAW) == []
    assert tokenize("", TokenMode.SANITIZED) == []


def test_invisible_splits_raw_but_not_sanitized():
    text = f"pri{ZWSP}vacy"
    assert surfaces(text, TokenMode.RAW) == ["pri", "vacy"]
    assert surfaces(text, TokenMode.SANITIZED) == ["privacy"]


def test_positions_consecutive():
    tokens = tokenize("one two three", TokenMode.RAW)
    assert [t.position for t in tokens] == [0, 1, 2]


def test_nonalpha_separates_and_lowercases():
    assert surfaces("Don't stop2believin'!", TokenMode.RAW) == ["don", "t", "stop", "believin"]


def test_all_invisible_chars_separate():
    for ch in INVISIBLE_CHARS:
        assert surfaces(f"ab{ch}cd", TokenMode.RAW) == ["ab", "cd"]
        assert surfaces(f"ab{ch}cd", TokenMode.SANITIZED) == ["abcd"]


@given(st.text(max_size=80))
def test_raw_equals_sanitized_without_invisibles(text):
    clean = "".join(ch for ch in text if ch not in INVISIBLE_CHARS)
    assert tokenize(clean, TokenMode.RAW) == tokenize(clean, TokenMode.SANITIZED)


@given(st.text(max_size=80))
def test_tokenize_idempotent_under_space_join(text):
    first = surfaces(text, TokenMode.RAW)
    assert surfaces(" ".join(first), TokenMode.RAW) == first


def test_document_requires_id():
    with pytest.raises(ValueError):
        Document("", "text")
    assert Document("d", "").text == ""


def test_lemma_of_identity_fallback(identity_lemmas):
    assert lemma_of(Token("running", 0), identity_lemmas) == "running"
    table = LemmaTable({"running": "run", "are": "be"})
    assert lemma_of(Token("running", 0), table) == "run"
    assert lemma_of("are", table) == "be"


def test_load_lexicons_and_dedup(tmp_path):
    fw = tmp_path / "fw.txt"
    fw.write_text("the\nand\nthe\n# comment\n\n", encoding="utf-8")
    lm = tmp_path / "lm.tsv"
    lm.write_text("ran\trun\nBetter\tgood\tC\n", encoding="utf-8")
    fwl, table = load_lexicons(fw, lm)
    assert len(fwl) == 2 and "the" in fwl and "and" in fwl
    assert table.lookup("ran") == "run"
    assert table.lookup("better") == "good"
    assert table.is_content_lemma("good")
    assert not table.is_content_lemma("run")


def test_lemma_parse_error_has_line(tmp_path):
    lm = tmp_path / "lm.tsv"
    lm.write_text("ran\trun\nran run extra\n", encoding="utf-8")
    with pytest.raises(LexiconParseError) as err:
        LemmaTable.load(lm)
    assert err.value.line_no == 2


def test_function_word_parse_error(tmp_path):
    fw = tmp_path / "fw.txt"
    fw.write_text("the\nnot a word\n", encoding="utf-8")
    with pytest.raises(LexiconParseError):
        FunctionWordList.load(fw)


def test_missing_files():
    with pytest.raises(MissingFileError):
        FunctionWordList.load("/nonexistent/fw.txt")
    with pytest.raises(MissingFileError):
        LemmaTable.load("/nonexistent/lm.tsv")


def test_unicode_alphabetic_tokens():
    assert surfaces("Grüße aus Köln", TokenMode.RAW) == ["grüße", "aus", "köln"]
    assert surfaces("naïve café ☕ 123", TokenMode.RAW) == ["naïve", "café"]
