"""Bit-exact replays of the two worked examples.

Each check is a ``(label, passed, detail)`` triple so callers can print or
assert them.
"""

from __future__ import annotations

from itertools import product

from .bits import BitString
from .codes import get_code
from .enhanced import (
    alice_verify_quantum, bob_decrypt, bob_delete_quantum, encrypt_enhanced,
)
from .original import (
    attack_original, enc_original, masked_parity, original_keygen, verify_delete_original,
)
from .pke import keygen, pke_decrypt
from .qubit import COMPUTATIONAL, HADAMARD, ProductRegister, basis_state, render_register, same_state
from .rng import derive_rng

CONJUGATE_X = BitString.from_str("1011 0110")
CONJUGATE_THETA = BitString.from_str("0011 1001")
CONJUGATE_KET = "10++-11-"
CERT_PATTERN = "**110**0"

TOY_C = BitString.from_str("1000 1001 1010 1011")
TOY_HADAMARD_PREFIX = "+---+--++-+-+-++"
TOY_ERROR_POSITIONS = (0, 2, 6)
TOY_ERROR_VALUES = (1, 1, 0)


def _pattern_fillings(pattern: str):
    stars = pattern.count("*")
    for fill in product("01", repeat=stars):
        it = iter(fill)
        yield BitString.from_str("".join(next(it) if ch == "*" else ch for ch in pattern))


def replay_conjugate_example(seed: int = 0) -> list[tuple[str, bool, str]]:
    checks = []
    x, theta = CONJUGATE_X, CONJUGATE_THETA
    parity = masked_parity(x, theta)
    checks.append(("parity over computational positions = 1", parity == 1, f"parity={parity}"))

    kp = original_keygen(8, derive_rng(seed, "replay-original"))
    ct, secret = enc_original(kp.public, 0, 8, derive_rng(seed, "replay-enc"), x=x, theta=theta)
    ket = render_register(ct.register)
    checks.append(("register renders |10++-11->", ket == CONJUGATE_KET, f"|{ket}>"))

    masked = pke_decrypt(kp.secret, ct.classical)[8]
    checks.append(("masked bit for b=0 equals 1", masked == 1, f"masked={masked}"))

    probe = ProductRegister(ct.register.qubits)
    rng = derive_rng(seed, "replay-probe")
    had = "".join(str(probe.measure(i, HADAMARD, rng)) for i in range(8) if theta[i] == 1)
    checks.append(("Hadamard positions read 1100", had == "1100", had))

    all_ok = all(verify_delete_original(secret, c) for c in _pattern_fillings(CERT_PATTERN))
    checks.append(("every filling of **110**0 verifies", all_ok, f"{2 ** 4} fillings"))

    flipped = BitString.from_str("00010000")
    checks.append(("certificate with a flipped checked bit is rejected",
                   not verify_delete_original(secret, flipped), str(flipped)))

    for b in (0, 1):
        ct, secret = enc_original(kp.public, b, 8, derive_rng(seed, "replay-attack", b),
                                  x=x, theta=theta)
        b_hat, cert = attack_original(kp.secret, ct, derive_rng(seed, "replay-attack-run", b))
        ok = b_hat == b and verify_delete_original(secret, cert)
        checks.append((f"attack recovers b={b} and its certificate verifies", ok,
                       f"b_hat={b_hat} cert={cert}"))
    return checks


def replay_toy_example(seed: int = 0) -> list[tuple[str, bool, str]]:
    checks = []
    code = get_code("bch-31-16-7")
    D = code.encode(TOY_C)
    checks.append(("codeword starts with the ciphertext", D[:16] == TOY_C, D.grouped()))
    had = "".join("+" if b else "-" for b in D[:16])
    checks.append(("Hadamard rendering of the systematic part", had == TOY_HADAMARD_PREFIX, had))

    kp = keygen("toy-16", 128, derive_rng(seed, "replay-toy-keys"))
    message = pke_decrypt(kp.secret, TOY_C)
    for beta in (COMPUTATIONAL, HADAMARD):
        rng = derive_rng(seed, "replay-toy", beta.kind)
        bundle, record = encrypt_enhanced(
            kp.public, message, code, "bloch", rng, global_basis=beta,
            error_positions=TOY_ERROR_POSITIONS, error_values=TOY_ERROR_VALUES)
        checks.append((f"[{beta.kind}] ciphertext reproduced", record.ciphertext == TOY_C,
                       str(record.ciphertext)))
        checks.append((f"[{beta.kind}] 31 qubits with 3 error entries",
                       bundle.n == 31 and len(record.errors) == 3,
                       f"n={bundle.n} errors={[(e.position + 1, e.value) for e in record.errors]}"))
        reg = bundle._register
        eig = all(same_state(reg.qubits[i], basis_state(beta, D[i]))
                  for i in range(31) if i not in TOY_ERROR_POSITIONS)
        checks.append((f"[{beta.kind}] non-error qubits are eigenstates of D", eig, ""))

        plain = bob_decrypt(kp.secret, bundle, rng, guess=beta)
        checks.append((f"[{beta.kind}] correct-basis reader recovers B", plain == message,
                       "" if plain is None else plain.grouped()))

        bundle, record = encrypt_enhanced(
            kp.public, message, code, "bloch", rng, global_basis=beta,
            error_positions=TOY_ERROR_POSITIONS, error_values=TOY_ERROR_VALUES)
        ok = alice_verify_quantum(record, bob_delete_quantum(bundle), rng)
        checks.append((f"[{beta.kind}] returned register verifies", ok, ""))
    return checks


def replay_all(seed: int = 0) -> list[tuple[str, bool, str]]:
    return replay_conjugate_example(seed) + replay_toy_example(seed)
