"""ECC-based PKE-CD where reading the plaintext destroys the certificate.

Alice encrypts with the classical PKE, encodes the ciphertext with a linear
code, and prepares every codeword bit in one global conjugate basis. She then
overwrites ``e`` random positions with random bits prepared in random bases.
Bob, holding the secret key, may either

* guess the global basis, measure everything, decode and decrypt (succeeds
  when the guess is right), or
* hand back the untouched register, which Alice checks qubit by qubit
  against the bases and bits she recorded.

Measuring in the global basis randomizes the error qubits, so a reader can
no longer return a state that passes verification with certainty.

Every Bob-side operation claims the bundle's register exactly once; a second
call raises :class:`~certdel.errors.AlreadyConsumed`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Union

import numpy as np

from .bits import BitString
from .codes import LinearCode, ball_partition, get_code
from .errors import AlreadyConsumed, LengthMismatch, RegisterTooLarge
from .pke import PublicKey, SecretKey, pke_decrypt, pke_encrypt
from .qubit import (
    CONJUGATE_BASES, DENSE_CAP, Basis, DenseState, ProductRegister, basis_state,
    dense_measure_qubit, dense_project_onto_strings, to_dense,
)

ERROR_MODES = ("bloch", "conjugate")

ReturnedState = Union[ProductRegister, DenseState]


@dataclass(frozen=True)
class ErrorEntry:
    position: int
    value: int
    basis: Basis


@dataclass(frozen=True)
class AliceRecord:
    """Alice's secret verification data for one ciphertext."""

    global_basis: Basis
    codeword: BitString
    errors: tuple[ErrorEntry, ...]
    code: str
    ciphertext: BitString
    error_mode: str = "bloch"

    def __post_init__(self):
        code = get_code(self.code)
        if len(self.codeword) != code.n:
            raise LengthMismatch(f"codeword has {len(self.codeword)} bits, code n={code.n}")
        positions = [err.position for err in self.errors]
        if len(set(positions)) != len(positions):
            raise ValueError(f"duplicate error positions {positions}")
        if any(not 0 <= p < code.n for p in positions):
            raise ValueError(f"error position out of range: {positions}")
        if len(self.errors) > code.e:
            raise ValueError(f"{len(self.errors)} error qubits exceed correction radius {code.e}")

    @property
    def n(self) -> int:
        return len(self.codeword)

    def error_map(self) -> dict[int, ErrorEntry]:
        return {err.position: err for err in self.errors}

    def expected(self) -> list[tuple[Basis, int]]:
        """(basis, bit) Alice prepared at each position."""
        errs = self.error_map()
        out = []
        for i, bit in enumerate(self.codeword):
            err = errs.get(i)
            out.append((err.basis, err.value) if err else (self.global_basis, bit))
        return out


class CiphertextBundle:
    """The quantum ciphertext as handed to Bob.

    Only the protocol functions in this module touch the register, and each
    of them claims it at most once.
    """

    def __init__(self, register: ProductRegister, code: str):
        if len(register) != get_code(code).n:
            raise LengthMismatch("register length must equal code length")
        self._register = register
        self.code = code
        self.used_by: str | None = None

    @property
    def n(self) -> int:
        return len(self._register)

    @property
    def consumed(self) -> bool:
        return self.used_by is not None

    def _take(self, operation: str) -> ProductRegister:
        if self.used_by is not None:
            raise AlreadyConsumed(f"bundle already used by {self.used_by!r}")
        self.used_by = operation
        return self._register


def _as_code(code) -> LinearCode:
    return get_code(code) if isinstance(code, str) else code


def random_conjugate_basis(rng: np.random.Generator) -> Basis:
    return CONJUGATE_BASES[int(rng.integers(0, 2))]


def _error_basis(mode: str, rng: np.random.Generator) -> Basis:
    if mode == "bloch":
        return Basis.random_general(rng)
    if mode == "conjugate":
        return random_conjugate_basis(rng)
    raise ValueError(f"unknown error mode {mode!r}; expected one of {ERROR_MODES}")


def encrypt_enhanced(pk: PublicKey, message: BitString, code, error_mode: str,
                     rng: np.random.Generator, *,
                     n_errors: int | None = None,
                     global_basis: Basis | None = None,
                     error_positions: Sequence[int] | None = None,
                     error_values: Sequence[int] | None = None,
                     error_bases: Sequence[Basis] | None = None,
                     ) -> tuple[CiphertextBundle, AliceRecord]:
    """Encrypt ``message`` into a quantum bundle plus Alice's record.

    Parameters
    ----------
    pk : PublicKey
        Bob's key; its ciphertext length must equal the code dimension k.
    message : BitString
    code : str or LinearCode
    error_mode : {"bloch", "conjugate"}
        Bases of the error qubits: uniform random Bloch angles, or a random
        choice of computational/Hadamard.
    rng : numpy.random.Generator
    n_errors : int, optional
        Number of error qubits, at most ``code.e`` (default ``code.e``).
    global_basis, error_positions, error_values, error_bases : optional
        Pin individual random choices (0-indexed positions) for replays.
    """
    code = _as_code(code)
    if error_mode not in ERROR_MODES:
        raise ValueError(f"unknown error mode {error_mode!r}; expected one of {ERROR_MODES}")
    if pk.k != code.k:
        raise LengthMismatch(f"PKE ciphertext is {pk.k} bits but {code.name} has k={code.k}")
    ct = pke_encrypt(pk, message, rng)
    codeword = code.encode(ct)
    beta = random_conjugate_basis(rng) if global_basis is None else global_basis

    e = code.e if n_errors is None else n_errors
    if not 0 <= e <= code.e:
        raise ValueError(f"n_errors must be in [0, {code.e}]")
    if error_positions is None:
        positions = [int(p) for p in rng.choice(code.n, size=e, replace=False)] if e else []
    else:
        positions = [int(p) for p in error_positions]
        e = len(positions)
    values = ([int(v) for v in rng.integers(0, 2, size=e)] if error_values is None
              else [int(v) for v in error_values])
    bases = ([_error_basis(error_mode, rng) for _ in range(e)] if error_bases is None
             else list(error_bases))
    if not len(values) == len(bases) == e:
        raise LengthMismatch("error positions, values and bases must have equal length")
    errors = tuple(ErrorEntry(p, v, B) for p, v, B in zip(positions, values, bases))

    record = AliceRecord(beta, codeword, errors, code.name, ct, error_mode)
    qubits = [basis_state(B, b) for B, b in record.expected()]
    return CiphertextBundle(ProductRegister(qubits), code.name), record


def _decode_and_decrypt(sk: SecretKey, code: LinearCode, word: int) -> BitString | None:
    msg = code.decode_int(word)
    if msg is None:
        return None
    return pke_decrypt(sk, BitString.from_int(msg, code.k))


def _bits_to_int(bits: Sequence[int]) -> int:
    v = 0
    for b in bits:
        v = (v << 1) | b
    return v


def bob_decrypt(sk: SecretKey, bundle: CiphertextBundle, rng: np.random.Generator,
                guess: Basis | None = None) -> BitString | None:
    """Measure everything in one guessed basis, decode and decrypt.

    Returns the plaintext, or ``None`` when decoding fails. A random guess is
    drawn unless ``guess`` pins it.
    """
    code = get_code(bundle.code)
    reg = bundle._take("decrypt")
    g = random_conjugate_basis(rng) if guess is None else guess
    bits = reg.measure_all(g, rng)
    return _decode_and_decrypt(sk, code, _bits_to_int(bits))


def bob_delete_quantum(bundle: CiphertextBundle) -> ProductRegister:
    """Return the register to Alice; Bob keeps nothing."""
    return bundle._take("delete")


def alice_verify_quantum(record: AliceRecord, returned: ReturnedState,
                         rng: np.random.Generator) -> bool:
    """Measure each qubit in its preparation basis; accept iff all bits match."""
    expected = record.expected()
    if isinstance(returned, DenseState):
        if returned.n != record.n:
            raise LengthMismatch(f"returned state has {returned.n} qubits, expected {record.n}")
        state = returned
        for i, (B, bit) in enumerate(expected):
            got, state = dense_measure_qubit(state, i, B, rng)
            if got != bit:
                return False
        return True
    if len(returned) != record.n:
        raise LengthMismatch(f"returned register has {len(returned)} qubits, expected {record.n}")
    for i, (B, bit) in enumerate(expected):
        if returned.measure(i, B, rng) != bit:
            return False
    return True


def make_classical_challenge(record: AliceRecord, rng: np.random.Generator) -> list[Basis]:
    """Fresh random Bloch bases, except the recorded bases at error positions."""
    errs = record.error_map()
    return [errs[i].basis if i in errs else Basis.random_general(rng) for i in range(record.n)]


def bob_answer_challenge(bundle: CiphertextBundle, challenge: Sequence[Basis],
                         rng: np.random.Generator) -> BitString:
    if len(challenge) != bundle.n:
        raise LengthMismatch(f"challenge has {len(challenge)} bases for {bundle.n} qubits")
    reg = bundle._take("respond")
    return BitString(reg.measure_all(list(challenge), rng))


def alice_verify_classical(record: AliceRecord, cert: BitString) -> bool:
    """Accept iff the certificate reproduces every recorded error value."""
    if len(cert) != record.n:
        raise LengthMismatch(f"certificate has {len(cert)} bits, expected {record.n}")
    return all(cert[err.position] == err.value for err in record.errors)


def classical_uniformity_pvalue(record: AliceRecord, cert: BitString) -> float:
    """Two-sided binomial test that non-error certificate bits look fair.

    Diagnostic only; it does not enter the accept/reject decision.
    """
    from scipy.stats import binomtest

    errs = record.error_map()
    rest = [b for i, b in enumerate(cert) if i not in errs]
    if not rest:
        return 1.0
    return float(binomtest(sum(rest), len(rest), 0.5).pvalue)


def random_classical_certificate(n: int, rng: np.random.Generator) -> BitString:
    return BitString.random(n, rng)


def cheat_measure_forge(sk: SecretKey, bundle: CiphertextBundle, rng: np.random.Generator,
                        guess: Basis | None = None) -> tuple[BitString | None, ProductRegister]:
    """Decrypt as an honest reader, then return the collapsed register anyway."""
    code = get_code(bundle.code)
    reg = bundle._take("measure-forge")
    g = random_conjugate_basis(rng) if guess is None else guess
    bits = reg.measure_all(g, rng)
    return _decode_and_decrypt(sk, code, _bits_to_int(bits)), reg


@lru_cache(maxsize=None)
def _ball_labels(code_name: str) -> np.ndarray:
    labels = ball_partition(get_code(code_name))
    labels.setflags(write=False)
    return labels


def cheat_ball_povm(sk: SecretKey, bundle: CiphertextBundle, guess: Basis | None,
                    rng: np.random.Generator,
                    cap: int = DENSE_CAP) -> tuple[BitString | None, DenseState]:
    """Joint measurement onto the radius-e Hamming balls around codewords.

    The register is densified and projected, in the guessed basis, onto one
    subspace per codeword ball plus the remainder. When the guess matches
    the global basis the whole state already lies inside one ball, so the
    projection leaves it untouched and the returned state still verifies.
    """
    code = get_code(bundle.code)
    if code.n > cap:
        raise RegisterTooLarge(f"{code.name} has {code.n} qubits, dense cap is {cap}")
    labels = _ball_labels(code.name)
    reg = bundle._take("ball-povm")
    g = random_conjugate_basis(rng) if guess is None else guess
    label, post = dense_project_onto_strings(to_dense(reg, cap), labels, rng, basis=g)
    if label == 2 ** code.k:
        return None, post
    return pke_decrypt(sk, BitString.from_int(int(label), code.k)), post
