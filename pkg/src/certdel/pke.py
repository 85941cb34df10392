"""Pluggable classical public-key encryption with a toy default.

The deletion layer only needs a PKE with fixed-length bit-string
ciphertexts. ``toy-K`` schemes are a keyed bijective mixing of a K-bit block
and provide NO security whatsoever: the public key alone determines the
permutation, so anyone holding ``pk`` can invert it. They exist so that the
rest of the package has a deterministic, dependency-free black box with the
right shape.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .bits import BitString
from .errors import LengthMismatch, MalformedCiphertext, UnsupportedScheme

DEFAULT_SCHEME = "toy-16"
ROUNDS = 6


@dataclass(frozen=True)
class PublicKey:
    scheme: str
    pk: bytes
    lam: int = 128
    m: int | None = None

    @property
    def k(self) -> int:
        return get_scheme(self.scheme).k

    @property
    def plaintext_bits(self) -> int:
        return self.k if self.m is None else self.m

    def to_json(self) -> str:
        return json.dumps({"scheme": self.scheme, "lambda": self.lam,
                           "plaintext_bits": self.plaintext_bits, "pk_hex": self.pk.hex()},
                          indent=2)


@dataclass(frozen=True)
class SecretKey:
    scheme: str
    sk: bytes
    lam: int = 128
    m: int | None = None

    def __repr__(self) -> str:
        return f"SecretKey(scheme={self.scheme!r}, lam={self.lam}, sk=<hidden>)"

    @property
    def public(self) -> PublicKey:
        return PublicKey(self.scheme, get_scheme(self.scheme).derive_pk(self.sk), self.lam, self.m)

    def to_json(self) -> str:
        return json.dumps({"scheme": self.scheme, "lambda": self.lam,
                           "plaintext_bits": self.public.plaintext_bits,
                           "pk_hex": self.public.pk.hex(), "sk_hex": self.sk.hex()},
                          indent=2)


@dataclass(frozen=True)
class KeyPair:
    public: PublicKey
    secret: SecretKey


class ToyScheme:
    """Keyed invertible mixing of a k-bit block. Cryptographically void."""

    def __init__(self, k: int):
        if not 1 <= k <= 64:
            raise UnsupportedScheme(f"toy scheme block size must be in [1, 64], got {k}")
        self.k = k
        self.name = f"toy-{k}"
        self._mask = (1 << k) - 1
        self._shift = max(1, k // 2)

    def derive_pk(self, sk: bytes) -> bytes:
        return hashlib.sha256(b"certdel-toy-pk" + sk).digest()[:16]

    @lru_cache(maxsize=64)
    def _round_keys(self, pk: bytes) -> tuple:
        keys = []
        for r in range(ROUNDS):
            h = hashlib.sha256(pk + bytes([r])).digest()
            add = int.from_bytes(h[:8], "big") & self._mask
            mult = (int.from_bytes(h[8:16], "big") | 1) & self._mask or 1
            keys.append((add, mult, pow(mult, -1, 1 << self.k)))
        return tuple(keys)

    def permute(self, pk: bytes, x: int) -> int:
        for add, mult, _ in self._round_keys(pk):
            x ^= add
            x = (x * mult) & self._mask
            x ^= x >> self._shift
        return x

    def unpermute(self, pk: bytes, y: int) -> int:
        for add, _, inv in reversed(self._round_keys(pk)):
            x, s = y, self._shift
            while s < self.k:
                x ^= y >> s
                s += self._shift
            y = (x * inv) & self._mask
            y ^= add
        return y


@lru_cache(maxsize=None)
def get_scheme(scheme: str) -> ToyScheme:
    m = re.fullmatch(r"toy-(\d+)", scheme)
    if not m:
        raise UnsupportedScheme(f"unsupported PKE scheme {scheme!r}")
    return ToyScheme(int(m.group(1)))


def keygen(scheme: str, lam: int, rng: np.random.Generator, m: int | None = None) -> KeyPair:
    """Fresh key pair; ``m`` is the plaintext length (defaults to the block size)."""
    sch = get_scheme(scheme)
    if m is not None and not 1 <= m <= sch.k:
        raise LengthMismatch(f"plaintext length {m} must be in [1, {sch.k}]")
    sk = SecretKey(scheme, rng.bytes(16), int(lam), m)
    return KeyPair(sk.public, sk)


def pke_encrypt(pk: PublicKey, plaintext: BitString, rng: np.random.Generator) -> BitString:
    """Encrypt to exactly ``k`` bits; any ``k - m`` slack bits are random padding."""
    sch = get_scheme(pk.scheme)
    m = pk.plaintext_bits
    if len(plaintext) != m:
        raise LengthMismatch(f"plaintext must be {m} bits, got {len(plaintext)}")
    block = plaintext.to_int() << (sch.k - m)
    if sch.k > m:
        block |= int(rng.integers(0, 1 << (sch.k - m)))
    return BitString.from_int(sch.permute(pk.pk, block), sch.k)


def pke_decrypt(sk: SecretKey, ct: BitString) -> BitString:
    sch = get_scheme(sk.scheme)
    if len(ct) != sch.k:
        raise MalformedCiphertext(f"ciphertext must be {sch.k} bits, got {len(ct)}")
    m = sk.public.plaintext_bits
    block = sch.unpermute(sch.derive_pk(sk.sk), ct.to_int())
    return BitString.from_int(block >> (sch.k - m), m)


def load_public_key(data: dict) -> PublicKey:
    sch = get_scheme(data["scheme"])
    m = data.get("plaintext_bits")
    return PublicKey(data["scheme"], bytes.fromhex(data["pk_hex"]), int(data.get("lambda", 128)),
                     None if m in (None, sch.k) else int(m))


def load_secret_key(data: dict) -> SecretKey:
    if "sk_hex" not in data:
        raise UnsupportedScheme("file holds no secret key")
    sch = get_scheme(data["scheme"])
    m = data.get("plaintext_bits")
    return SecretKey(data["scheme"], bytes.fromhex(data["sk_hex"]), int(data.get("lambda", 128)),
                     None if m in (None, sch.k) else int(m))
