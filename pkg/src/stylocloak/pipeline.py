"""Pipeline orchestration over single texts and corpora.

Every record's output is a pure function of (document, config): per-record
seeds are derived by hashing the record id, never its corpus position, and
parallel execution assembles results back in input order.
"""

from __future__ import annotations

import enum
import json
import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

from . import imitate as imitate_mod
from . import obfuscate as obfuscate_mod
from . import stego as stego_mod
from . import translate as translate_mod
from .errors import ConfigError, DuplicateIdsError, StylocloakError
from .hashing import derive_seed, record_seed
from .imitate import ImitationConfig, Persona, PersonaPools, sample_persona
from .obfuscate import SynonymLexicon
from .textcore import Document, FunctionWordList, LemmaTable, bundled_path
from .translate import DriftLexicon, RoundTripConfig

_MASK64 = (1 << 64) - 1


class StepId(enum.Enum):
    TRANSLATE = "translate"
    OBFUSCATE = "obfuscate"
    STEGO = "stego"
    IMITATE = "imitate"


V1_STEPS = (StepId.TRANSLATE, StepId.OBFUSCATE, StepId.STEGO)
V2_STEPS = (StepId.TRANSLATE, StepId.OBFUSCATE, StepId.STEGO, StepId.IMITATE)

PRESETS = {"v1": V1_STEPS, "v2": V2_STEPS}


@dataclass(frozen=True)
class PayloadPolicy:
    """Either a fixed byte payload for every record or k random bytes drawn
    from each record's seed."""
    fixed: bytes | None = None
    random_len: int | None = 8

    def __post_init__(self):
        if (self.fixed is None) == (self.random_len is None):
            raise ConfigError("payload policy needs exactly one of fixed bytes or random length")
        size = len(self.fixed) if self.fixed is not None else self.random_len
        if not 0 <= size <= stego_mod.MAX_PAYLOAD_BYTES:
            raise ConfigError(f"payload length {size} outside 0..{stego_mod.MAX_PAYLOAD_BYTES}")

    def payload_for(self, seed: int) -> bytes:
        if self.fixed is not None:
            return self.fixed
        rng = random.Random(derive_seed(seed, "payload") & _MASK64)
        return rng.randbytes(self.random_len)


@dataclass
class LexiconPaths:
    function_words: str | None = None
    lemmas: str | None = None
    synonyms: str | None = None
    drift: str | None = None


@dataclass
class Resources:
    """Loaded lexicons shared across records; immutable after load."""
    fwl: FunctionWordList
    lemmas: LemmaTable
    synonyms: SynonymLexicon
    drift: DriftLexicon

    @classmethod
    def load(cls, paths: LexiconPaths | None = None) -> "Resources":
        paths = paths or LexiconPaths()
        return cls(
            fwl=FunctionWordList.load(paths.function_words or bundled_path("lexicons", "function_words.txt")),
            lemmas=LemmaTable.load(paths.lemmas or bundled_path("lexicons", "lemmas.tsv")),
            synonyms=SynonymLexicon.load(paths.synonyms or bundled_path("lexicons", "synonyms.tsv")),
            drift=DriftLexicon.load(paths.drift or bundled_path("lexicons", "drift.tsv")),
        )


@dataclass
class PipelineConfig:
    steps: tuple[StepId, ...] = V2_STEPS
    master_seed: int = 0
    translate: RoundTripConfig = field(default_factory=RoundTripConfig)
    imitate: ImitationConfig = field(default_factory=ImitationConfig)
    payload: PayloadPolicy = field(default_factory=PayloadPolicy)
    lexicons: LexiconPaths = field(default_factory=LexiconPaths)
    parallelism: int = 1
    fail_fast: bool = False

    def __post_init__(self):
        if len(set(self.steps)) != len(self.steps):
            raise ConfigError("pipeline steps must be distinct")
        if self.parallelism < 1:
            raise ConfigError("parallelism must be >= 1")


@dataclass(frozen=True)
class StageError:
    stage: StepId
    code: str
    message: str


@dataclass
class RecordResult:
    record_id: str
    seed: int
    snapshots: list[tuple[StepId, str]]
    final_text: str | None
    payload: bytes | None = None
    persona: Persona | None = None
    error: StageError | None = None

    @property
    def ok(self) -> bool:
        return self.error is None

    def to_json(self) -> dict:
        out = {
            "id": self.record_id,
            "seed": self.seed,
            "status": "OK" if self.ok else "FAILED",
            "snapshots": [{"step": step.value, "text": text} for step, text in self.snapshots],
            "final": self.final_text,
            "payload_hex": self.payload.hex() if self.payload is not None else None,
            "persona": None,
        }
        if self.persona is not None:
            out["persona"] = {
                "gender": self.persona.gender,
                "age_band": self.persona.age_band,
                "education": self.persona.education,
                "nationality": self.persona.nationality,
            }
        if self.error is not None:
            out["error"] = {"stage": self.error.stage.value, "code": self.error.code,
                            "message": self.error.message}
        return out


def run_record(doc: Document, cfg: PipelineConfig, resources: Resources | None = None) -> RecordResult:
    """Apply the configured steps in order, snapshotting after each stage."""
    res = resources or Resources.load(cfg.lexicons)
    seed = record_seed(cfg.master_seed, doc.id)
    text = doc.text
    snapshots: list[tuple[StepId, str]] = []
    payload = None
    persona = None
    for step in cfg.steps:
        try:
            if step is StepId.TRANSLATE:
                text = translate_mod.round_trip(text, cfg.translate, res.drift)
            elif step is StepId.OBFUSCATE:
                text = obfuscate_mod.paraphrase(text, res.synonyms, res.fwl, seed, res.lemmas)
            elif step is StepId.STEGO:
                payload = cfg.payload.payload_for(seed)
                text = stego_mod.embed(text, payload)
            elif step is StepId.IMITATE:
                persona = sample_persona(cfg.imitate.pools, seed)
                text = imitate_mod.imitate(text, cfg.imitate, seed, persona)
        except StylocloakError as exc:
            return RecordResult(
                doc.id, seed, snapshots, None, payload, persona,
                StageError(step, getattr(exc, "code", "error"), str(exc)),
            )
        snapshots.append((step, text))
    return RecordResult(doc.id, seed, snapshots, text, payload, persona)


def run_corpus(docs: list[Document], cfg: PipelineConfig) -> list[RecordResult]:
    """Run every record; results come back in input order.

    With fail_fast the returned list stops at the first failed record (in
    input order); otherwise failures are recorded per record and processing
    continues.
    """
    ids = [doc.id for doc in docs]
    if len(set(ids)) != len(ids):
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        raise DuplicateIdsError(f"duplicate record ids: {', '.join(dupes)}")
    res = Resources.load(cfg.lexicons)
    if cfg.parallelism == 1:
        results = []
        for doc in docs:
            result = run_record(doc, cfg, res)
            results.append(result)
            if cfg.fail_fast and not result.ok:
                break
        return results
    with ThreadPoolExecutor(max_workers=cfg.parallelism) as pool:
        futures = [pool.submit(run_record, doc, cfg, res) for doc in docs]
        results = []
        for future in futures:
            result = future.result()
            results.append(result)
            if cfg.fail_fast and not result.ok:
                for remaining in futures:
                    remaining.cancel()
                break
    return results


# --- config file -------------------------------------------------------------------


def config_from_json(obj: dict, base: PipelineConfig | None = None) -> PipelineConfig:
    """Build a PipelineConfig from the documented JSON schema (docs/config.md).

    Unknown keys are rejected; API keys are read from the named environment
    variable and never logged.
    """
    cfg = base or PipelineConfig()
    known = {"preset", "steps", "seed", "parallelism", "fail_fast", "payload",
             "translate", "imitate", "lexicons"}
    unknown = set(obj) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")

    steps = cfg.steps
    if "preset" in obj:
        if obj["preset"] not in PRESETS:
            raise ConfigError(f"unknown preset: {obj['preset']!r}")
        steps = PRESETS[obj["preset"]]
    if "steps" in obj:
        try:
            steps = tuple(StepId(s) for s in obj["steps"])
        except ValueError as exc:
            raise ConfigError(f"bad step name: {exc}") from None

    payload = cfg.payload
    if "payload" in obj:
        spec = obj["payload"]
        if "hex" in spec:
            try:
                payload = PayloadPolicy(fixed=bytes.fromhex(spec["hex"]), random_len=None)
            except ValueError:
                raise ConfigError(f"bad payload hex: {spec['hex']!r}") from None
        elif "random_bytes" in spec:
            payload = PayloadPolicy(random_len=int(spec["random_bytes"]))
        else:
            raise ConfigError("payload must give 'hex' or 'random_bytes'")

    translate_cfg = cfg.translate
    if "translate" in obj:
        t = dict(obj["translate"])
        api_key = None
        env_name = t.pop("api_key_env", None)
        if env_name:
            api_key = os.environ.get(env_name)
        translate_cfg = RoundTripConfig(
            pivots=list(t.pop("pivots", translate_cfg.pivots)),
            source=t.pop("source", translate_cfg.source),
            backend=t.pop("backend", translate_cfg.backend),
            endpoint=t.pop("endpoint", translate_cfg.endpoint),
            api_key_header=t.pop("api_key_header", translate_cfg.api_key_header),
            api_key=api_key if api_key is not None else translate_cfg.api_key,
            timeout=float(t.pop("timeout", translate_cfg.timeout)),
            retries=int(t.pop("retries", translate_cfg.retries)),
            backoff=float(t.pop("backoff", translate_cfg.backoff)),
        )
        if t:
            raise ConfigError(f"unknown translate config keys: {', '.join(sorted(t))}")

    imitate_cfg = cfg.imitate
    if "imitate" in obj:
        m = dict(obj["imitate"])
        pools = imitate_cfg.pools
        if "pools" in m:
            p = m.pop("pools")
            pools = PersonaPools(
                genders=tuple(p.get("genders", pools.genders)),
                age_bands=tuple(p.get("age_bands", pools.age_bands)),
                educations=tuple(p.get("educations", pools.educations)),
                nationalities=tuple(p.get("nationalities", pools.nationalities)),
            )
        template = imitate_cfg.prompt_template
        template_path = m.pop("prompt_template_path", None)
        if template_path:
            with open(template_path, encoding="utf-8") as fh:
                template = fh.read()
        imitate_cfg = ImitationConfig(
            backend=m.pop("backend", imitate_cfg.backend),
            endpoint=m.pop("endpoint", imitate_cfg.endpoint),
            prompt_template=template,
            pools=pools,
            timeout=float(m.pop("timeout", imitate_cfg.timeout)),
            retries=int(m.pop("retries", imitate_cfg.retries)),
            backoff=float(m.pop("backoff", imitate_cfg.backoff)),
        )
        if m:
            raise ConfigError(f"unknown imitate config keys: {', '.join(sorted(m))}")

    lexicons = cfg.lexicons
    if "lexicons" in obj:
        lx = dict(obj["lexicons"])
        lexicons = LexiconPaths(
            function_words=lx.pop("function_words", lexicons.function_words),
            lemmas=lx.pop("lemmas", lexicons.lemmas),
            synonyms=lx.pop("synonyms", lexicons.synonyms),
            drift=lx.pop("drift", lexicons.drift),
        )
        if lx:
            raise ConfigError(f"unknown lexicon config keys: {', '.join(sorted(lx))}")

    return PipelineConfig(
        steps=steps,
        master_seed=int(obj.get("seed", cfg.master_seed)),
        translate=translate_cfg,
        imitate=imitate_cfg,
        payload=payload,
        lexicons=lexicons,
        parallelism=int(obj.get("parallelism", cfg.parallelism)),
        fail_fast=bool(obj.get("fail_fast", cfg.fail_fast)),
    )


def load_config(path, base: PipelineConfig | None = None) -> PipelineConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"no such config file: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    return config_from_json(obj, base)
