"""Unicode-aware tokenization and lexicon loading.

Tokens are maximal runs of alphabetic code points, lowercased; every other
code point separates tokens.  Two views of the same string exist: RAW keeps
invisible code points as separators (the vulnerable parser), SANITIZED
deletes them before segmentation (the defended parser).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import LexiconParseError, MissingFileError

# Zero-width code points shared by the tokenizer and the steganographic codec:
# ZWSP, ZWNJ, ZWJ, WORD JOINER, BOM/ZWNBSP.
INVISIBLE_CHARS = frozenset("​‌‍⁠﻿")

_INVISIBLE_TRANSLATION = {ord(c): None for c in INVISIBLE_CHARS}


class TokenMode(enum.Enum):
    RAW = "raw"
    SANITIZED = "sanitized"


@dataclass(frozen=True)
class Document:
    id: str
    text: str

    def __post_init__(self):
        if not self.id:
            raise ValueError("document id must be non-empty")


@dataclass(frozen=True)
class Token:
    surface: str
    position: int


def remove_invisible(text: str) -> str:
    """Delete every invisible code point, preserving all others in order."""
    return text.translate(_INVISIBLE_TRANSLATION)


def tokenize(text: str, mode: TokenMode = TokenMode.RAW) -> list[Token]:
    """Split ``text`` into lowercased alphabetic-run tokens.

    RAW: invisible code points act as separators exactly like
    whitespace (being non-alphabetic, they end the current run).
    SANITIZED: invisible code points are deleted before segmentation, so a
    word carrying them re-fuses.  Positions are consecutive from 0.
    """
    if mode is TokenMode.SANITIZED:
        text = remove_invisible(text)
    tokens = []
    run = []
    for ch in text:
        if ch.isalpha():
            run.append(ch)
        elif run:
            tokens.append(Token("".join(run).lower(), len(tokens)))
            run = []
    if run:
        tokens.append(Token("".join(run).lower(), len(tokens)))
    return tokens


def surfaces(text: str, mode: TokenMode = TokenMode.RAW) -> list[str]:
    return [t.surface for t in tokenize(text, mode)]


class FunctionWordList:
    """Set of lowercase function words ("the grammatical backbone")."""

    def __init__(self, entries):
        self.entries = frozenset(entries)

    def __contains__(self, word: str) -> bool:
        return word in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    @classmethod
    def load(cls, path) -> "FunctionWordList":
        """One word per line; '#' comments and blank lines allowed."""
        entries = set()
        for line_no, line in _read_lines(path):
            word = line.strip().lower()
            if not word.isalpha():
                raise LexiconParseError(path, line_no, f"not a word: {line.strip()!r}")
            entries.add(word)
        return cls(entries)


class LemmaTable:
    """Surface word -> lemma map with identity fallback, plus the set of
    lemmas recognized as content words."""

    def __init__(self, mapping=None, content_lemmas=()):
        self.mapping = dict(mapping or {})
        self.content_lemmas = frozenset(content_lemmas)

    def lookup(self, word: str) -> str:
        return self.mapping.get(word, word)

    def is_content_lemma(self, lemma: str) -> bool:
        return lemma in self.content_lemmas

    @classmethod
    def load(cls, path) -> "LemmaTable":
        """TSV ``surface<TAB>lemma`` with optional third column flag ``C``
        marking the lemma as a content-lexicon member."""
        mapping = {}
        content = set()
        for line_no, line in _read_lines(path):
            fields = line.rstrip("\n").split("\t")
            if len(fields) not in (2, 3):
                raise LexiconParseError(path, line_no, f"expected 2 or 3 tab-separated fields, got {len(fields)}")
            surface = fields[0].strip().lower()
            lemma = fields[1].strip().lower()
            if not surface.isalpha() or not lemma.isalpha():
                raise LexiconParseError(path, line_no, "surface and lemma must be alphabetic")
            if len(fields) == 3:
                if fields[2].strip() != "C":
                    raise LexiconParseError(path, line_no, f"unknown flag {fields[2].strip()!r}")
                content.add(lemma)
            mapping[surface] = lemma
        return cls(mapping, content)


def lemma_of(token, table: LemmaTable) -> str:
    """Lemma of a token (or bare surface string); unmapped words map to
    themselves."""
    surface = token.surface if isinstance(token, Token) else token
    return table.lookup(surface)


def load_lexicons(function_path, lemma_path) -> tuple[FunctionWordList, LemmaTable]:
    return FunctionWordList.load(function_path), LemmaTable.load(lemma_path)


def _read_lines(path):
    """Yield (line_no, line) for content lines of a UTF-8 lexicon file."""
    path = Path(path)
    if not path.is_file():
        raise MissingFileError(f"no such file: {path}")
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            yield line_no, line


def bundled_path(*parts) -> Path:
    """Path of a data file shipped inside the package."""
    return Path(resources.files("stylocloak").joinpath(*parts))


def default_function_words() -> FunctionWordList:
    return FunctionWordList.load(bundled_path("lexicons", "function_words.txt"))


def default_lemma_table() -> LemmaTable:
    return LemmaTable.load(bundled_path("lexicons", "lemmas.tsv"))
