"""Conjugate-coding PKE-CD and the decrypt-then-certify attack on it.

A bit ``b`` is hidden as a register ``|x>_theta`` (qubit i in the
computational basis when ``theta_i = 0``, Hadamard otherwise) together with a
classical encryption of ``theta`` and the masked bit
``b XOR (XOR of x_i over theta_i = 0)``.

The deletion certificate is the full Hadamard-basis measurement record; it is
checked only where ``theta_i = 1``. Because the computational-basis qubits can
be read without disturbing them, a receiver holding the secret key can learn
``b`` and still produce a certificate that verifies (:func:`attack_original`).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bits import BitString
from .errors import AlreadyConsumed, LengthMismatch, MalformedCiphertext
from .pke import KeyPair, PublicKey, SecretKey, keygen, pke_decrypt, pke_encrypt
from .qubit import COMPUTATIONAL, HADAMARD, ProductRegister
from .rng import derive_rng, trial_rng

DEFAULT_N = 8


@dataclass
class OriginalCiphertext:
    classical: BitString
    register: ProductRegister

    @property
    def n(self) -> int:
        return len(self.register)


@dataclass(frozen=True)
class OriginalSecret:
    b: int
    x: BitString
    theta: BitString

    def __post_init__(self):
        if len(self.x) != len(self.theta):
            raise LengthMismatch("x and theta must have equal length")


def scheme_for(n: int) -> str:
    """PKE block size needed to carry ``theta`` plus the masked bit."""
    return f"toy-{n + 1}"


def original_keygen(n: int, rng: np.random.Generator, lam: int = 128) -> KeyPair:
    return keygen(scheme_for(n), lam, rng)


def masked_parity(x: BitString, theta: BitString) -> int:
    p = 0
    for xi, ti in zip(x, theta):
        if ti == 0:
            p ^= xi
    return p


def encode_register(x: BitString, theta: BitString) -> ProductRegister:
    return ProductRegister.from_bits(x, [HADAMARD if t else COMPUTATIONAL for t in theta])


def _sample_theta(n: int, rng: np.random.Generator) -> BitString:
    while True:
        theta = BitString.random(n, rng)
        if 0 < theta.weight() < n:
            return theta


def enc_original(pk: PublicKey, b: int, n: int, rng: np.random.Generator, *,
                 x: BitString | None = None,
                 theta: BitString | None = None) -> tuple[OriginalCiphertext, OriginalSecret]:
    """Encrypt one bit.

    ``theta`` is resampled until it contains both 0s and 1s. ``x`` and
    ``theta`` may be pinned to replay a fixed instance.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if pk.plaintext_bits != n + 1:
        raise LengthMismatch(f"PKE must carry {n + 1} plaintext bits, not {pk.plaintext_bits}")
    x = BitString.random(n, rng) if x is None else x
    theta = _sample_theta(n, rng) if theta is None else theta
    if len(x) != n or len(theta) != n:
        raise LengthMismatch(f"x and theta must have length {n}")
    masked = b ^ masked_parity(x, theta)
    classical = pke_encrypt(pk, theta + BitString([masked]), rng)
    return OriginalCiphertext(classical, encode_register(x, theta)), OriginalSecret(b, x, theta)


def _open_classical(sk: SecretKey, ct: OriginalCiphertext) -> tuple[BitString, int]:
    packed = pke_decrypt(sk, ct.classical)
    if len(packed) != ct.n + 1:
        raise MalformedCiphertext(f"packed plaintext has {len(packed)} bits for n={ct.n}")
    return packed[:ct.n], packed[ct.n]


def honest_decrypt_original(sk: SecretKey, ct: OriginalCiphertext,
                            rng: np.random.Generator) -> int:
    """Recover ``b`` by reading the computational-basis positions only."""
    theta, masked = _open_classical(sk, ct)
    parity = 0
    for i, t in enumerate(theta):
        if t == 0:
            parity ^= ct.register.measure(i, COMPUTATIONAL, rng)
    return masked ^ parity


def honest_delete_original(ct: OriginalCiphertext,
                           rng: np.random.Generator) -> BitString:
    if ct.register.any_consumed():
        raise AlreadyConsumed("register has already been measured")
    return BitString(ct.register.measure_all(HADAMARD, rng))


def verify_delete_original(secret: OriginalSecret, cert: BitString) -> bool:
    if len(cert) != len(secret.x):
        raise LengthMismatch(f"certificate has {len(cert)} bits, expected {len(secret.x)}")
    return all(c == xi for c, xi, t in zip(cert, secret.x, secret.theta) if t == 1)


def attack_original(sk: SecretKey, ct: OriginalCiphertext,
                    rng: np.random.Generator) -> tuple[int, BitString]:
    """Read ``b`` and forge a certificate from the same register.

    Computational positions are measured in their own basis (no disturbance),
    Hadamard positions in Hadamard; the don't-care certificate positions are
    filled with random bits.
    """
    theta, masked = _open_classical(sk, ct)
    parity = 0
    cert = []
    for i, t in enumerate(theta):
        if t == 0:
            parity ^= ct.register.measure(i, COMPUTATIONAL, rng)
            cert.append(int(rng.integers(0, 2)))
        else:
            cert.append(ct.register.measure(i, HADAMARD, rng))
    return masked ^ parity, BitString(cert)


def run_attack_trials(n: int, trials: int, seed: int) -> dict:
    """Seeded batch of independent attack instances; returns success rates."""
    kp = original_keygen(n, derive_rng(seed, "original-keygen"))
    recovered = accepted = joint = 0
    for t in range(trials):
        rng = trial_rng(seed, t)
        b = int(rng.integers(0, 2))
        ct, secret = enc_original(kp.public, b, n, rng)
        b_hat, cert = attack_original(kp.secret, ct, rng)
        ok_b = b_hat == b
        ok_c = verify_delete_original(secret, cert)
        recovered += ok_b
        accepted += ok_c
        joint += ok_b and ok_c
    return {"n": n, "trials": trials, "seed": seed,
            "recovery_rate": recovered / trials,
            "cert_accept_rate": accepted / trials,
            "joint_rate": joint / trials}
