"""Deterministic derivation of decorrelated RNG seeds."""

from __future__ import annotations

import hashlib

_MASK64 = (1 << 64) - 1


def derive_seed(master: int, *labels) -> int:
    """Derive a 64-bit unsigned seed from a master seed and a label path.

    Hashes ``"master:label0:label1:..."`` with SHA-256 and keeps the first
    eight bytes. Distinct label paths give decorrelated streams while the
    whole run stays reproducible from a single master seed.
    """
    text = ":".join([str(int(master))] + [str(label) for label in labels])
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") & _MASK64
