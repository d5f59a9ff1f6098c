"""Persona-conditioned revision stage that never loses the hidden payload.

The payload is extracted before revision and re-embedded afterwards;
instructing a backend to preserve invisible characters is hopeless because
revision services routinely normalize Unicode.
"""

from __future__ import annotations

import random
import re
import time
from dataclasses import dataclass, field

import requests

from .errors import (
    BackendMalformedResponseError,
    BackendTimeoutError,
    BackendUnavailableError,
    ConfigError,
    EmptyPoolError,
    NoFrameError,
    PayloadLostError,
)
from .stego import capacity, embed, extract, strip
from .textcore import bundled_path

_MASK64 = (1 << 64) - 1

DEFAULT_GENDERS = ("female", "male", "nonbinary")
DEFAULT_AGE_BANDS = ("18-25", "26-35", "36-50", "51-65", "66+")
DEFAULT_EDUCATIONS = ("secondary", "vocational", "bachelor", "master", "doctorate")
DEFAULT_NATIONALITIES = (
    "american", "australian", "brazilian", "british", "canadian",
    "dutch", "german", "indian", "irish", "japanese",
    "mexican", "nigerian", "polish", "spanish", "swedish",
)

_TEMPLATE_FIELDS = ("gender", "age", "education", "nationality")


@dataclass(frozen=True)
class Persona:
    gender: str
    age_band: str
    education: str
    nationality: str


@dataclass(frozen=True)
class PersonaPools:
    genders: tuple = DEFAULT_GENDERS
    age_bands: tuple = DEFAULT_AGE_BANDS
    educations: tuple = DEFAULT_EDUCATIONS
    nationalities: tuple = DEFAULT_NATIONALITIES


def default_prompt_template() -> str:
    return bundled_path("config", "prompt.txt").read_text(encoding="utf-8")


@dataclass
class ImitationConfig:
    backend: str = "stub"            # "stub" | "http"
    endpoint: str | None = None
    prompt_template: str | None = None
    pools: PersonaPools = field(default_factory=PersonaPools)
    timeout: float = 10.0
    retries: int = 2
    backoff: float = 0.5

    def __post_init__(self):
        if self.backend not in ("stub", "http"):
            raise ConfigError(f"unknown revision backend: {self.backend!r}")
        if self.backend == "http" and not self.endpoint:
            raise ConfigError("http revision backend requires an endpoint URL")
        if self.prompt_template is None:
            self.prompt_template = default_prompt_template()
        missing = [f for f in _TEMPLATE_FIELDS if ("{%s}" % f) not in self.prompt_template]
        if missing:
            raise ConfigError(f"prompt template must reference {{{'}, {'.join(missing)}}}")


def sample_persona(pools: PersonaPools, seed: int) -> Persona:
    """Draw each persona field uniformly and independently from its pool.

    Deterministic per seed: equal seeds give equal personas.
    """
    for name in ("genders", "age_bands", "educations", "nationalities"):
        if not getattr(pools, name):
            raise EmptyPoolError(f"persona pool {name!r} is empty")
    rng = random.Random(seed & _MASK64)
    return Persona(
        gender=rng.choice(pools.genders),
        age_band=rng.choice(pools.age_bands),
        education=rng.choice(pools.educations),
        nationality=rng.choice(pools.nationalities),
    )


def render_prompt(template: str, persona: Persona) -> str:
    return template.format(
        gender=persona.gender,
        age=persona.age_band,
        education=persona.education,
        nationality=persona.nationality,
    )


_WS_RUN = re.compile(r"\s+")


def stub_revise(text: str) -> str:
    """Offline proofreading rules, in order: trim the ends, collapse
    whitespace runs to single spaces, uppercase the first letter of each
    sentence, and add a final period when no terminal punctuation exists."""
    text = _WS_RUN.sub(" ", text.strip())
    chars = list(text)
    sentence_start = True
    for i, ch in enumerate(chars):
        if ch.isalpha():
            if sentence_start:
                chars[i] = ch.upper()
            sentence_start = False
        elif ch in ".!?":
            sentence_start = True
    revised = "".join(chars)
    if revised and revised[-1] not in ".!?":
        revised += "."
    return revised


class HttpReviser:
    """Client for the wire contract: POST {"prompt", "text", "seed"},
    expect 200 with {"revised": ...}."""

    def __init__(self, cfg: ImitationConfig):
        self.cfg = cfg

    def __call__(self, prompt: str, text: str, seed: int) -> str:
        last_error = None
        for attempt in range(self.cfg.retries + 1):
            if attempt:
                time.sleep(self.cfg.backoff)
            try:
                resp = requests.post(
                    self.cfg.endpoint,
                    json={"prompt": prompt, "text": text, "seed": seed},
                    timeout=self.cfg.timeout,
                )
            except requests.Timeout as exc:
                last_error = BackendTimeoutError(f"revision request timed out: {exc}")
                continue
            except requests.RequestException as exc:
                last_error = BackendUnavailableError(f"revision backend unreachable: {exc}")
                continue
            if resp.status_code != 200:
                last_error = BackendUnavailableError(f"revision backend returned status {resp.status_code}")
                continue
            try:
                revised = resp.json()["revised"]
            except (ValueError, KeyError, TypeError):
                raise BackendMalformedResponseError("revision response lacks 'revised'") from None
            if not isinstance(revised, str):
                raise BackendMalformedResponseError("'revised' is not a string")
            return revised
        raise last_error


def imitate(text: str, cfg: ImitationConfig, seed: int, persona: Persona | None = None) -> str:
    """Revise the visible text under a sampled persona, keeping the payload.

    Any frame present in the input is extracted first and re-embedded into
    the revised text; if the revision leaves too little capacity the stage
    raises PayloadLost instead of silently dropping the payload.  The stub
    backend ignores the persona (it is pure proofreading rules); the HTTP
    backend receives it interpolated into the prompt.
    """
    try:
        payload = extract(text)
    except NoFrameError:
        payload = None
    visible = strip(text)
    if persona is None:
        persona = sample_persona(cfg.pools, seed)
    if cfg.backend == "stub":
        revised = stub_revise(visible)
    else:
        revised = HttpReviser(cfg)(render_prompt(cfg.prompt_template, persona), visible, seed)
        revised = strip(revised)  # backends may echo invisible characters
    if payload is None:
        return revised
    needed = 8 * len(payload) + 2
    available = capacity(revised)
    if needed > available:
        raise PayloadLostError(
            f"revised text has capacity {available}, payload needs {needed}"
        )
    return embed(revised, payload)
