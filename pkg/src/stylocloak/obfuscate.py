"""Paraphrase stage: seeded synonym substitution over content words.

Substitution is keyed by a stable hash of (seed, token position) rather than
a stateful RNG, so the choice made at token i never depends on what happened
elsewhere in the text.
"""

from __future__ import annotations

from .errors import LexiconParseError
from .hashing import position_hash
from .textcore import FunctionWordList, LemmaTable, bundled_path, _read_lines

MIN_SUBSTITUTION_LENGTH = 3


class SynonymLexicon:
    """Lemma -> ordered synonym list."""

    def __init__(self, mapping):
        self.mapping = {k: tuple(v) for k, v in mapping.items()}

    def get(self, lemma: str):
        return self.mapping.get(lemma)

    def __len__(self) -> int:
        return len(self.mapping)

    @classmethod
    def load(cls, path) -> "SynonymLexicon":
        """TSV ``lemma<TAB>syn1,syn2,...``; synonyms are kept in file order."""
        mapping = {}
        for line_no, line in _read_lines(path):
            fields = line.rstrip("\n").split("\t")
            if len(fields) != 2:
                raise LexiconParseError(path, line_no, "expected lemma<TAB>synonyms")
            lemma = fields[0].strip().lower()
            seen = []
            for raw in fields[1].split(","):
                syn = raw.strip().lower()
                if not syn:
                    continue
                if not syn.isalpha():
                    raise LexiconParseError(path, line_no, f"synonym not alphabetic: {syn!r}")
                if syn == lemma:
                    raise LexiconParseError(path, line_no, f"synonym equals its key: {syn!r}")
                if syn not in seen:
                    seen.append(syn)
            if not lemma.isalpha():
                raise LexiconParseError(path, line_no, f"lemma not alphabetic: {lemma!r}")
            if not seen:
                raise LexiconParseError(path, line_no, f"no synonyms for {lemma!r}")
            mapping[lemma] = seen
        return cls(mapping)

    @classmethod
    def bundled(cls) -> "SynonymLexicon":
        return cls.load(bundled_path("lexicons", "synonyms.tsv"))


def paraphrase(
    text: str,
    lex: SynonymLexicon,
    fwl: FunctionWordList,
    seed: int,
    lemmas: LemmaTable | None = None,
) -> str:
    """Replace eligible words with synonyms chosen by the position hash.

    A token is eligible when it is at least 3 characters long, is not a
    function word, and its surface or its lemma (surface itself when no
    lemma table is given) has a synonym list; an exact-surface entry wins,
    which keeps inflected lexicon entries agreeing in form.  The
    replacement is ``synonyms[h mod k]`` with
    ``h = position_hash(seed, position)``; first-letter capitalization
    carries over.  Whitespace, punctuation, and untouched tokens are
    preserved verbatim.
    """
    out = []
    prev = 0
    position = 0
    for start, end in _alpha_runs(text):
        word = text[start:end]
        surface = word.lower()
        replacement = None
        if len(surface) >= MIN_SUBSTITUTION_LENGTH and surface not in fwl:
            synonyms = lex.get(surface)
            if synonyms is None and lemmas is not None:
                synonyms = lex.get(lemmas.lookup(surface))
            if synonyms:
                chosen = synonyms[position_hash(seed, position) % len(synonyms)]
                if word[0].isupper():
                    chosen = chosen[0].upper() + chosen[1:]
                replacement = chosen
        out.append(text[prev:start])
        out.append(replacement if replacement is not None else word)
        prev = end
        position += 1
    out.append(text[prev:])
    return "".join(out)


def _alpha_runs(text: str):
    start = None
    for i, ch in enumerate(text):
        if ch.isalpha():
            if start is None:
                start = i
        elif start is not None:
            yield start, i
            start = None
    if start is not None:
        yield start, len(text)
