"""Round-trip translation stage.

Two backends: a deterministic offline stub that reifies the typical damage of
machine-translation round trips (articles vanish, proper nouns collapse into
function words, vocabulary drifts), and a generic HTTP client for a real
service.
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass, field

import requests

from .errors import (
    BackendMalformedResponseError,
    BackendTimeoutError,
    BackendUnavailableError,
    ConfigError,
    LexiconParseError,
)
from .textcore import bundled_path, _read_lines

LANG_CODE_RE = re.compile(r"^[a-z]{2}$")

_SENTENCE_END = frozenset(".!?")


class DriftLexicon:
    """Word replacement map plus the article set and the proper-noun
    placeholder used by the stub backend."""

    def __init__(self, mapping, articles=("the", "a", "an"), placeholder="they"):
        self.mapping = dict(mapping)
        self.articles = frozenset(w.lower() for w in articles)
        self.placeholder = placeholder.lower()

    @classmethod
    def load(cls, path) -> "DriftLexicon":
        """TSV ``word<TAB>replacement`` with optional header directives
        ``@articles the,a,an`` and ``@placeholder they``."""
        mapping = {}
        articles = ("the", "a", "an")
        placeholder = "they"
        for line_no, line in _read_lines(path):
            stripped = line.strip()
            if stripped.startswith("@articles"):
                articles = tuple(w.strip().lower() for w in stripped[len("@articles"):].split(",") if w.strip())
                continue
            if stripped.startswith("@placeholder"):
                placeholder = stripped[len("@placeholder"):].strip().lower()
                continue
            fields = stripped.split("\t")
            if len(fields) != 2:
                raise LexiconParseError(path, line_no, f"expected word<TAB>replacement, got {stripped!r}")
            word, replacement = fields[0].strip().lower(), fields[1].strip().lower()
            if not word.isalpha() or not replacement.isalpha():
                raise LexiconParseError(path, line_no, "drift entries must be alphabetic")
            mapping[word] = replacement
        return cls(mapping, articles, placeholder)

    @classmethod
    def bundled(cls) -> "DriftLexicon":
        return cls.load(bundled_path("lexicons", "drift.tsv"))


@dataclass
class RoundTripConfig:
    pivots: list[str] = field(default_factory=lambda: ["de"])
    source: str = "en"
    backend: str = "stub"            # "stub" | "http"
    endpoint: str | None = None
    api_key_header: str | None = None
    api_key: str | None = None
    timeout: float = 10.0
    retries: int = 2
    backoff: float = 0.5

    def __post_init__(self):
        for code in [self.source, *self.pivots]:
            if not LANG_CODE_RE.match(code):
                raise ConfigError(f"bad language code: {code!r}")
        if self.timeout <= 0:
            raise ConfigError("timeout must be positive")
        if self.retries < 0:
            raise ConfigError("retries must be >= 0")
        if self.backend not in ("stub", "http"):
            raise ConfigError(f"unknown translation backend: {self.backend!r}")
        if self.backend == "http" and not self.endpoint:
            raise ConfigError("http translation backend requires an endpoint URL")


def _split_chunk(chunk: str) -> tuple[str, str, str]:
    """Split a whitespace-delimited chunk into (lead, core, trail) where the
    core is the span between the first and last alphabetic character."""
    i, j = 0, len(chunk)
    while i < j and not chunk[i].isalpha():
        i += 1
    while j > i and not chunk[j - 1].isalpha():
        j -= 1
    return chunk[:i], chunk[i:j], chunk[j:]


def stub_translate(text: str, source: str, target: str, lex: DriftLexicon) -> str:
    """Deterministic single-hop "translation".

    Rules, in order, over whitespace-delimited words: (1) words in the
    article set are deleted; (2) a capitalized word that does not open a
    sentence is replaced by the placeholder function word; (3) surviving
    untouched words are mapped through the drift table.  Sentence-initial
    capitalization is preserved, surviving words are joined by single spaces,
    and punctuation travels with its word (a deleted word donates its
    trailing punctuation to the previous surviving one).

    Sentence starts are judged on the input sequence, before any deletion,
    which keeps the three rules independent of one another.  Language codes
    are accepted for interface parity with real backends; the stub applies
    the same rules for every pair.
    """
    chunks = text.split()
    parsed = [_split_chunk(c) for c in chunks]

    initial_flags = []
    sentence_start = True
    for lead, core, trail in parsed:
        initial_flags.append(sentence_start if core else False)
        if core:
            sentence_start = False
        if any(ch in _SENTENCE_END for ch in trail) or (not core and any(ch in _SENTENCE_END for ch in lead)):
            sentence_start = True

    out: list[str] = []
    for (lead, core, trail), initial in zip(parsed, initial_flags):
        if not core:
            if lead or trail:
                out.append(lead + trail)
            continue
        low = core.lower()
        if low in lex.articles:
            if trail and out:
                out[-1] += trail
            continue
        if core[0].isupper() and not initial:
            new_core = lex.placeholder
        else:
            new_core = lex.mapping.get(low, core)
            if new_core is not core and core[0].isupper():
                new_core = new_core[0].upper() + new_core[1:]
        out.append(lead + new_core + trail)
    return " ".join(out)


class HttpTranslator:
    """Client for the wire contract: POST {"q", "source", "target"} to the
    endpoint, expect 200 with {"translatedText": ...}."""

    def __init__(self, cfg: RoundTripConfig):
        self.cfg = cfg

    def __call__(self, text: str, source: str, target: str) -> str:
        headers = {}
        if self.cfg.api_key_header and self.cfg.api_key:
            headers[self.cfg.api_key_header] = self.cfg.api_key
        last_error = None
        for attempt in range(self.cfg.retries + 1):
            if attempt:
                time.sleep(self.cfg.backoff)
            try:
                resp = requests.post(
                    self.cfg.endpoint,
                    json={"q": text, "source": source, "target": target},
                    headers=headers,
                    timeout=self.cfg.timeout,
                )
            except requests.Timeout as exc:
                last_error = BackendTimeoutError(f"translation request timed out: {exc}")
                continue
            except requests.RequestException as exc:
                last_error = BackendUnavailableError(f"translation backend unreachable: {exc}")
                continue
            if resp.status_code != 200:
                last_error = BackendUnavailableError(f"translation backend returned status {resp.status_code}")
                continue
            try:
                body = resp.json()
                translated = body["translatedText"]
            except (ValueError, KeyError, TypeError):
                raise BackendMalformedResponseError("translation response lacks 'translatedText'") from None
            if not isinstance(translated, str):
                raise BackendMalformedResponseError("'translatedText' is not a string")
            return translated
        raise last_error


def round_trip(text: str, cfg: RoundTripConfig, lex: DriftLexicon | None = None) -> str:
    """Translate through each pivot and back to the source language.

    With pivots [p1..pk] the hops are source->p1, p1->p2, ..., pk->source;
    an empty pivot list returns the text unchanged without touching any
    backend.
    """
    if not cfg.pivots:
        return text
    if cfg.backend == "stub":
        lex = lex or DriftLexicon.bundled()
        hop = lambda t, a, b: stub_translate(t, a, b, lex)  # noqa: E731
    else:
        hop = HttpTranslator(cfg)
    langs = [cfg.source, *cfg.pivots, cfg.source]
    for a, b in zip(langs, langs[1:]):
        text = hop(text, a, b)
    return text
