"""Seed derivation via 64-bit FNV-1a.

All derived randomness in the toolkit bottoms out here so that outputs are
bit-stable across platforms and runs.
"""

from __future__ import annotations

_FNV64_OFFSET = 0xCBF29CE484222325
_FNV64_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1


def fnv1a64(data: bytes) -> int:
    h = _FNV64_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV64_PRIME) & _MASK64
    return h


def _seed_bytes(seed: int) -> bytes:
    return (seed & _MASK64).to_bytes(8, "little")


def position_hash(seed: int, position: int) -> int:
    """Hash of (seed, token position): little-endian seed bytes followed by
    the decimal position."""
    return fnv1a64(_seed_bytes(seed) + str(position).encode("ascii"))


def derive_seed(seed: int, tag: str) -> int:
    """Stable sub-seed for a named purpose (payload draw, per-tree seeds...)."""
    return fnv1a64(_seed_bytes(seed) + tag.encode("utf-8"))


def record_seed(master_seed: int, record_id: str) -> int:
    """Per-record seed: hash of master seed bytes followed by the record id.

    Keyed by id, not by corpus position, so filtering or reordering a corpus
    never changes any individual record's output.
    """
    return fnv1a64(_seed_bytes(master_seed) + record_id.encode("utf-8"))
