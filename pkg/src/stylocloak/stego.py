"""Zero-width steganographic codec: capacity, embed, extract, strip.

Payload bytes are framed as WORD JOINER + bit characters + WORD JOINER, one
bit per character (ZWNJ = 0, ZWJ = 1, MSB first).  Frame characters are
placed in word-interior slots so that a naive tokenizer sees each carrier
word shatter into fragments while the visible rendering is unchanged.
"""

from __future__ import annotations

from .errors import (
    CapacityError,
    DirtyCarrierError,
    NoFrameError,
    PayloadTooLargeError,
    RaggedFrameError,
)
from .textcore import INVISIBLE_CHARS, remove_invisible

MARKER = "⁠"   # WORD JOINER frames the payload at both ends
BIT0 = "‌"     # ZERO WIDTH NON-JOINER
BIT1 = "‍"     # ZERO WIDTH JOINER

MAX_PAYLOAD_BYTES = 8192

_FRAME_ALPHABET = frozenset((MARKER, BIT0, BIT1))


def _words(text: str) -> list[tuple[int, int]]:
    """(start, length) of each maximal alphabetic run, in document order."""
    words = []
    start = None
    for i, ch in enumerate(text):
        if ch.isalpha():
            if start is None:
                start = i
        elif start is not None:
            words.append((start, i - start))
            start = None
    if start is not None:
        words.append((start, len(text) - start))
    return words


def _check_clean(text: str) -> None:
    if any(ch in INVISIBLE_CHARS for ch in text):
        raise DirtyCarrierError("carrier already contains invisible code points")


def capacity(text: str) -> int:
    """Number of insertion slots: sum over words of (length - 1).

    Only word-interior positions count; a length-1 word contributes none.
    """
    _check_clean(text)
    return sum(length - 1 for _, length in _words(text))


def _slot_positions(text: str, count: int) -> list[int]:
    """Absolute insertion positions for the first ``count`` slots.

    Slots are selected round by round: round r takes, for each word in
    document order with more than r interior offsets available, the offset
    r + 1.  This spreads the frame across many words.  The selected
    positions are then sorted so the frame reads back in document order.
    """
    words = _words(text)
    positions = []
    r = 0
    while len(positions) < count:
        placed = False
        for start, length in words:
            if length - 1 > r:
                positions.append(start + r + 1)
                placed = True
                if len(positions) == count:
                    break
        if not placed:  # capacity was checked; defensive
            raise CapacityError(count, len(positions))
        r += 1
    return sorted(positions)


def encode_frame(payload: bytes) -> str:
    bits = []
    for byte in payload:
        for shift in range(7, -1, -1):
            bits.append(BIT1 if (byte >> shift) & 1 else BIT0)
    return MARKER + "".join(bits) + MARKER


def embed(text: str, payload: bytes) -> str:
    """Hide ``payload`` in ``text``; the visible projection is unchanged."""
    if len(payload) > MAX_PAYLOAD_BYTES:
        raise PayloadTooLargeError(f"payload is {len(payload)} bytes; cap is {MAX_PAYLOAD_BYTES}")
    frame = encode_frame(payload)
    available = capacity(text)  # raises DirtyCarrier on unclean input
    if len(frame) > available:
        raise CapacityError(len(frame), available)
    positions = _slot_positions(text, len(frame))
    out = []
    prev = 0
    for pos, ch in zip(positions, frame):
        out.append(text[prev:pos])
        out.append(ch)
        prev = pos
    out.append(text[prev:])
    return "".join(out)


def extract(text: str) -> bytes:
    """Decode the first complete frame found by scanning code points in order.

    Only the frame alphabet is considered; other invisible characters are
    ignored.
    """
    kept = [ch for ch in text if ch in _FRAME_ALPHABET]
    try:
        start = kept.index(MARKER)
        end = kept.index(MARKER, start + 1)
    except ValueError:
        raise NoFrameError("no complete marker pair found") from None
    bits = kept[start + 1:end]
    if len(bits) % 8 != 0:
        raise RaggedFrameError(f"frame carries {len(bits)} bits, not a multiple of 8")
    out = bytearray()
    for i in range(0, len(bits), 8):
        byte = 0
        for ch in bits[i:i + 8]:
            byte = (byte << 1) | (1 if ch == BIT1 else 0)
        out.append(byte)
    return bytes(out)


def strip(text: str) -> str:
    """Remove every invisible code point; all others are preserved in order."""
    return remove_invisible(text)
