"""Binary linear block codes with bounded-distance decoding.

Two families are provided:

* :class:`BCHCode` - narrow-sense primitive BCH codes over GF(2^m), decoded
  with syndromes, Berlekamp-Massey and a Chien search.
* :class:`MatrixCode` - systematic codes given by a generator matrix
  ``[I_k | P]`` and decoded from a syndrome table of all error patterns of
  weight <= e (Hamming and repetition codes).

Encoding is systematic for every code: the k message bits are the first k
codeword bits and the parity bits follow. Internally words are packed into
Python ints with bit string position 0 as the most significant bit.

Decoding never guesses beyond the correction radius: ``decode`` returns
``None`` whenever the received word is farther than ``e`` from every
codeword.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from .bits import BitString
from .errors import BallTooLarge, LengthMismatch

BALL_CAP = 10 ** 6

# Primitive polynomials, bit i = coefficient of x^i.
PRIMITIVE_POLYS = {
    3: 0b1011,       # x^3 + x + 1
    4: 0b10011,      # x^4 + x + 1
    5: 0b100101,     # x^5 + x^2 + 1
    6: 0b1000011,    # x^6 + x + 1
    7: 0b10001001,   # x^7 + x^3 + 1
    8: 0b100011101,  # x^8 + x^4 + x^3 + x^2 + 1
}


class LinearCode:
    """Common interface; subclasses provide ``encode_int`` / ``decode_int``."""

    name: str
    n: int
    k: int
    d: int

    @property
    def e(self) -> int:
        return (self.d - 1) // 2

    def encode_int(self, message: int) -> int:
        raise NotImplementedError

    def decode_int(self, word: int) -> int | None:
        raise NotImplementedError

    def encode(self, message: BitString) -> BitString:
        if len(message) != self.k:
            raise LengthMismatch(f"{self.name} encodes {self.k} bits, got {len(message)}")
        return BitString.from_int(self.encode_int(message.to_int()), self.n)

    def decode(self, word: BitString) -> BitString | None:
        """Message of the unique codeword within distance e, else ``None``."""
        if len(word) != self.n:
            raise LengthMismatch(f"{self.name} decodes {self.n} bits, got {len(word)}")
        msg = self.decode_int(word.to_int())
        return None if msg is None else BitString.from_int(msg, self.k)

    def codewords(self):
        """Yield ``(message_int, codeword_int)`` for every message."""
        for m in range(2 ** self.k):
            yield m, self.encode_int(m)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name!r}, n={self.n}, k={self.k}, d={self.d})"


def _popcount(x: int) -> int:
    return bin(x).count("1")


class MatrixCode(LinearCode):
    """Systematic code from a ``k x (n-k)`` parity block ``P``.

    The syndrome table holds every error pattern of weight <= e; building it
    fails if two such patterns share a syndrome (i.e. the claimed d is wrong).
    """

    def __init__(self, name: str, parity: np.ndarray, d: int):
        parity = np.asarray(parity, dtype=np.uint8) % 2
        self.name = name
        self.k, r = parity.shape
        self.n = self.k + r
        self.d = d
        self._r = r
        # parity contribution of message bit i (position i, MSB-first)
        self._row_parity = [int("".join(map(str, row)), 2) if r else 0 for row in parity]
        # syndrome contribution of a single error at string position j
        cols = []
        for j in range(self.n):
            if j < self.k:
                cols.append(self._row_parity[j])
            else:
                cols.append(1 << (self.n - 1 - j))
        self._col_syndrome = cols
        self._table = self._build_table()

    def _build_table(self) -> dict[int, int]:
        table = {}
        for w in range(self.e + 1):
            for pos in combinations(range(self.n), w):
                pattern = 0
                syn = 0
                for j in pos:
                    pattern |= 1 << (self.n - 1 - j)
                    syn ^= self._col_syndrome[j]
                if syn in table:
                    raise ValueError(f"{self.name}: minimum distance below {self.d}")
                table[syn] = pattern
        return table

    def _syndrome(self, word: int) -> int:
        msg = word >> self._r
        par = word & ((1 << self._r) - 1)
        return self._parity(msg) ^ par

    def _parity(self, message: int) -> int:
        p = 0
        for i in range(self.k):
            if (message >> (self.k - 1 - i)) & 1:
                p ^= self._row_parity[i]
        return p

    def encode_int(self, message: int) -> int:
        return (message << self._r) | self._parity(message)

    def decode_int(self, word: int) -> int | None:
        pattern = self._table.get(self._syndrome(word))
        if pattern is None:
            return None
        return (word ^ pattern) >> self._r


def hamming_7_4() -> MatrixCode:
    parity = np.array([[1, 1, 0],
                       [1, 0, 1],
                       [0, 1, 1],
                       [1, 1, 1]])
    return MatrixCode("hamming-7-4-3", parity, d=3)


def repetition(n: int) -> MatrixCode:
    if n < 1:
        raise ValueError("repetition length must be positive")
    return MatrixCode(f"repetition-{n}", np.ones((1, n - 1), dtype=np.uint8), d=n)


class GF2m:
    """Log/antilog tables for GF(2^m) built from a primitive polynomial."""

    def __init__(self, m: int, poly: int | None = None):
        self.m = m
        self.poly = PRIMITIVE_POLYS[m] if poly is None else poly
        self.order = (1 << m) - 1
        self.exp = [0] * (2 * self.order)
        self.log = [0] * (1 << m)
        x = 1
        for i in range(self.order):
            self.exp[i] = x
            self.log[x] = i
            x <<= 1
            if x >> m:
                x ^= self.poly
        if x != 1:
            raise ValueError(f"polynomial {self.poly:#b} is not primitive for m={m}")
        for i in range(self.order, 2 * self.order):
            self.exp[i] = self.exp[i - self.order]

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError
        if a == 0:
            return 0
        return self.exp[(self.log[a] - self.log[b]) % self.order]


def _gf2_polymul(a: int, b: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def _gf2_polymod(a: int, g: int) -> int:
    dg = g.bit_length() - 1
    while a.bit_length() - 1 >= dg:
        a ^= g << (a.bit_length() - 1 - dg)
    return a


class BCHCode(LinearCode):
    """Narrow-sense primitive binary BCH code of length ``2^m - 1``.

    The generator polynomial is the product of the distinct minimal
    polynomials of ``alpha^1 .. alpha^(2t)``.
    """

    def __init__(self, m: int, t: int, poly: int | None = None, name: str | None = None):
        self.field = gf = GF2m(m, poly)
        self.n = gf.order
        self.t = t
        self.generator = self._generator_poly()
        self.k = self.n - (self.generator.bit_length() - 1)
        if self.k <= 0:
            raise ValueError(f"no BCH code with m={m}, t={t}")
        self.d = 2 * t + 1
        self.name = name or f"bch-{self.n}-{self.k}-{self.d}"

    def _generator_poly(self) -> int:
        gf = self.field
        seen = set()
        g = 1
        for i in range(1, 2 * self.t + 1):
            if i % self.n in seen:
                continue
            coset = []
            j = i % self.n
            while j not in coset:
                coset.append(j)
                j = (2 * j) % self.n
            seen.update(coset)
            # minimal polynomial prod (x - alpha^j), coefficients in GF(2^m)
            mp = [1]
            for j in coset:
                root = gf.exp[j]
                nxt = [0] * (len(mp) + 1)
                for deg, c in enumerate(mp):
                    nxt[deg + 1] ^= c
                    nxt[deg] ^= gf.mul(c, root)
                mp = nxt
            if any(c not in (0, 1) for c in mp):
                raise AssertionError("minimal polynomial not binary")
            g = _gf2_polymul(g, sum(c << deg for deg, c in enumerate(mp)))
        return g

    def encode_int(self, message: int) -> int:
        shifted = message << (self.n - self.k)
        return shifted ^ _gf2_polymod(shifted, self.generator)

    def syndromes(self, word: int) -> list[int]:
        gf = self.field
        powers = [j for j in range(self.n) if (word >> j) & 1]
        out = []
        for i in range(1, 2 * self.t + 1):
            s = 0
            for j in powers:
                s ^= gf.exp[(i * j) % self.n]
            out.append(s)
        return out

    def _berlekamp_massey(self, syn: list[int]) -> list[int]:
        gf = self.field
        c = [1] + [0] * len(syn)
        b = [1] + [0] * len(syn)
        L, shift, bd = 0, 1, 1
        for r, s in enumerate(syn):
            delta = s
            for i in range(1, L + 1):
                delta ^= gf.mul(c[i], syn[r - i])
            if delta == 0:
                shift += 1
                continue
            coef = gf.div(delta, bd)
            prev = list(c)
            for i in range(len(c) - shift):
                c[i + shift] ^= gf.mul(coef, b[i])
            if 2 * L <= r:
                L = r + 1 - L
                b, bd, shift = prev, delta, 1
            else:
                shift += 1
        return c[:L + 1]

    def decode_int(self, word: int) -> int | None:
        syn = self.syndromes(word)
        if not any(syn):
            return word >> (self.n - self.k)
        locator = self._berlekamp_massey(syn)
        nerr = len(locator) - 1
        if nerr > self.t:
            return None
        gf = self.field
        positions = []
        # Chien search: an error at x^j makes alpha^-j a root of the locator
        for j in range(self.n):
            acc = 0
            for deg, c in enumerate(locator):
                if c:
                    acc ^= gf.exp[(gf.log[c] - j * deg) % gf.order]
            if acc == 0:
                positions.append(j)
        if len(positions) != nerr:
            return None
        for j in positions:
            word ^= 1 << j
        if any(self.syndromes(word)):
            return None
        return word >> (self.n - self.k)


@lru_cache(maxsize=None)
def get_code(name: str) -> LinearCode:
    """Look up a code by id: ``bch-N-K-D``, ``hamming-7-4-3``, ``repetition-N``."""
    if name == "hamming-7-4-3":
        return hamming_7_4()
    m = re.fullmatch(r"repetition-(\d+)", name)
    if m:
        return repetition(int(m.group(1)))
    m = re.fullmatch(r"bch-(\d+)-(\d+)-(\d+)", name)
    if m:
        n, k, d = map(int, m.groups())
        mm = (n + 1).bit_length() - 1
        if (1 << mm) - 1 != n or mm not in PRIMITIVE_POLYS or d % 2 == 0:
            raise ValueError(f"unsupported BCH parameters {name}")
        code = BCHCode(mm, (d - 1) // 2)
        if code.k != k:
            raise ValueError(f"BCH with n={n}, d={d} has k={code.k}, not {k}")
        return code
    raise ValueError(f"unknown code {name!r}")


def ball_size(n: int, radius: int) -> int:
    return sum(comb(n, i) for i in range(radius + 1))


def ball_ints(center: int, n: int, radius: int) -> list[int]:
    out = []
    for w in range(radius + 1):
        for pos in combinations(range(n), w):
            x = center
            for j in pos:
                x ^= 1 << (n - 1 - j)
            out.append(x)
    return out


def hamming_ball(center: BitString, radius: int, cap: int = BALL_CAP) -> set[BitString]:
    """All strings within Hamming distance ``radius`` of ``center``."""
    n = len(center)
    size = ball_size(n, radius)
    if size > cap:
        raise BallTooLarge(f"ball of radius {radius} in {n} bits has {size} points (cap {cap})")
    return {BitString.from_int(x, n) for x in ball_ints(center.to_int(), n, radius)}


def ball_partition(code: LinearCode, cap: int = BALL_CAP) -> np.ndarray:
    """Label every n-bit string by the codeword whose radius-e ball holds it.

    Labels are message integers in ``[0, 2^k)``; strings outside every ball get
    label ``2^k``.
    """
    total = ball_size(code.n, code.e) * 2 ** code.k
    if total > cap:
        raise BallTooLarge(f"{code.name}: {total} ball points exceed cap {cap}")
    labels = np.full(2 ** code.n, 2 ** code.k, dtype=np.int64)
    for m, cw in code.codewords():
        idx = ball_ints(cw, code.n, code.e)
        if (labels[idx] != 2 ** code.k).any():
            raise ValueError(f"{code.name}: radius-{code.e} balls overlap")
        labels[idx] = m
    return labels


@dataclass(frozen=True)
class CodeReport:
    name: str
    n: int
    k: int
    claimed_d: int
    min_distance: int
    exhaustive: bool
    perfect: bool
    systematic: bool
    linear: bool
    samples: int

    @property
    def ok(self) -> bool:
        return self.min_distance >= self.claimed_d and self.systematic and self.linear


def verify_code(code: LinearCode, rng: np.random.Generator | None = None,
                samples: int = 10 ** 5, exhaustive: bool | None = None) -> CodeReport:
    """Measure minimum distance and check structural properties.

    Exhaustive enumeration of all codewords is used for ``n <= 20`` (or when
    forced); otherwise ``samples`` random codeword pairs are compared, which
    only bounds the distance from above.
    """
    if exhaustive is None:
        exhaustive = code.n <= 20
    if rng is None:
        rng = np.random.default_rng(0)
    mask = (1 << code.k) - 1
    systematic = linear = True
    if exhaustive:
        words = [cw for _, cw in code.codewords()]
        dmin = min(_popcount(cw) for cw in words[1:]) if len(words) > 1 else code.n
        for m, cw in enumerate(words):
            systematic &= (cw >> (code.n - code.k)) == m
        checked = len(words)
        for _ in range(min(1000, checked)):
            a, b = (int(v) for v in rng.integers(0, 2 ** code.k, size=2))
            linear &= words[a] ^ words[b] == words[a ^ b]
    else:
        dmin = code.n
        checked = samples
        for _ in range(samples):
            a, b = (int(v) for v in rng.integers(0, 2 ** code.k, size=2, dtype=np.uint64))
            if a == b:
                continue
            ca, cb = code.encode_int(a), code.encode_int(b)
            dmin = min(dmin, _popcount(ca ^ cb))
            systematic &= (ca >> (code.n - code.k)) == (a & mask)
            linear &= ca ^ cb == code.encode_int(a ^ b)
    perfect = ball_size(code.n, code.e) * 2 ** code.k == 2 ** code.n
    return CodeReport(code.name, code.n, code.k, code.d, dmin, exhaustive, perfect,
                      systematic, linear, checked)
