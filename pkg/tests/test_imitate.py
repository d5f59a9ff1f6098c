from __future__ import annotations

import json
import threading
from collections import Counter
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from stylocloak.errors import (
    BackendMalformedResponseError,
    ConfigError,
    EmptyPoolError,
    PayloadLostError,
)
from stylocloak.imitate import (
    ImitationConfig,
    PersonaPools,
    imitate,
    render_prompt,
    sample_persona,
    stub_revise,
)
from stylocloak.stego import capacity, embed, extract
from stylocloak.textcore import INVISIBLE_CHARS


def test_stub_revise_rules():
    assert stub_revise("hello world") == "Hello world."
    assert stub_revise("  spaced   out\ttext  ") == "Spaced out text."
    assert stub_revise("first. second! third?") == "First. Second! Third?"
    assert stub_revise("ends with bang!") == "Ends with bang!"
    assert stub_revise("") == ""


def test_sample_persona_deterministic():
    pools = PersonaPools()
    assert sample_persona(pools, 123) == sample_persona(pools, 123)


def test_sample_persona_empty_pool():
    with pytest.raises(EmptyPoolError):
        sample_persona(PersonaPools(genders=()), 1)


def test_sample_persona_roughly_uniform():
    pools = PersonaPools(genders=("a", "b"), age_bands=("1", "2"),
                         educations=("x", "y"), nationalities=("p", "q"))
    counts = Counter(sample_persona(pools, seed) for seed in range(10000))
    expected = 10000 / 16
    assert len(counts) == 16
    for combo, count in counts.items():
        assert abs(count - expected) <= 0.2 * expected, (combo, count)


def test_imitate_stub_no_payload():
    cfg = ImitationConfig()
    assert imitate("hello world", cfg, seed=1) == "Hello world."


def test_imitate_preserves_payload():
    cfg = ImitationConfig()
    carrier = "the stubborn carrier sentence keeps marching along without complaint"
    for payload in (b"", b"\x00", b"\xde\xad\xbe\xef"):
        stego = embed(carrier, payload)
        out = imitate(stego, cfg, seed=5)
        assert extract(out) == payload
        visible = "".join(ch for ch in out if ch not in INVISIBLE_CHARS)
        assert visible == stub_revise(carrier)


def test_imitate_payload_lost(monkeypatch):
    carrier = "abcdefghij klmnopqrst uvwxyzabcd efghijklmn"
    stego = embed(carrier, bytes(4))
    cfg = ImitationConfig(backend="http", endpoint="http://invalid.example/x")
    # backend that shrinks the text so far the payload can no longer fit
    monkeypatch.setattr("stylocloak.imitate.HttpReviser",
                        lambda cfg: (lambda prompt, text, seed: "ab"))
    with pytest.raises(PayloadLostError):
        imitate(stego, cfg, seed=5)


def test_template_validation():
    with pytest.raises(ConfigError):
        ImitationConfig(prompt_template="no placeholders at all")
    cfg = ImitationConfig(prompt_template="{gender} {age} {education} {nationality}")
    persona = sample_persona(cfg.pools, 7)
    prompt = render_prompt(cfg.prompt_template, persona)
    assert persona.gender in prompt and persona.age_band in prompt


def test_default_template_mentions_all_fields():
    cfg = ImitationConfig()
    for field in ("{gender}", "{age}", "{education}", "{nationality}"):
        assert field in cfg.prompt_template


class _ReviseHandler(BaseHTTPRequestHandler):
    behavior = "ok"
    seen = []

    def do_POST(self):
        body = json.loads(self.rfile.read(int(self.headers["Content-Length"])))
        type(self).seen.append(body)
        if self.behavior == "ok":
            out = json.dumps({"revised": body["text"].title()}).encode()
            self.send_response(200)
            self.end_headers()
            self.wfile.write(out)
        else:
            self.send_response(200)
            self.end_headers()
            self.wfile.write(b"{}")

    def log_message(self, *args):
        pass


@pytest.fixture
def revise_server():
    server = ThreadingHTTPServer(("127.0.0.1", 0), _ReviseHandler)
    threading.Thread(target=server.serve_forever, daemon=True).start()
    _ReviseHandler.seen = []
    yield f"http://127.0.0.1:{server.server_address[1]}/revise"
    server.shutdown()


def test_http_revision_contract(revise_server):
    _ReviseHandler.behavior = "ok"
    cfg = ImitationConfig(backend="http", endpoint=revise_server, retries=0, backoff=0.0)
    out = imitate("hello there world", cfg, seed=11)
    assert out == "Hello There World"
    body = _ReviseHandler.seen[0]
    assert body["text"] == "hello there world"
    assert body["seed"] == 11
    persona = sample_persona(cfg.pools, 11)
    assert persona.gender in body["prompt"]


def test_http_revision_malformed(revise_server):
    _ReviseHandler.behavior = "missing-key"
    cfg = ImitationConfig(backend="http", endpoint=revise_server, retries=0, backoff=0.0)
    with pytest.raises(BackendMalformedResponseError):
        imitate("hello", cfg, seed=1)


def test_imitate_round_trip_random_cases():
    import random

    cfg = ImitationConfig()
    rng = random.Random(4242)
    for _ in range(50):
        words = ["".join(rng.choice("abcdefghijklmnop") for _ in range(rng.randint(3, 9)))
                 for _ in range(rng.randint(6, 14))]
        carrier = " ".join(words)
        payload = rng.randbytes(rng.randint(0, 4))
        if capacity(carrier) < 8 * len(payload) + 2:
            continue
        out = imitate(embed(carrier, payload), cfg, seed=rng.randrange(2**32))
        assert extract(out) == payload
