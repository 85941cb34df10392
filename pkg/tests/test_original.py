import pytest

from certdel.bits import BitString
from certdel.errors import AlreadyConsumed, LengthMismatch
from certdel.original import (
    attack_original, enc_original, honest_decrypt_original, honest_delete_original,
    masked_parity, original_keygen, run_attack_trials, verify_delete_original,
)
from certdel.pke import pke_decrypt
from certdel.qubit import COMPUTATIONAL, HADAMARD, measure_qubit, render_register
from certdel.rng import make_rng, trial_rng

X = BitString.from_str("1011 0110")
THETA = BitString.from_str("0011 1001")


@pytest.fixture(scope="module")
def kp():
    return original_keygen(8, make_rng(1))


def test_worked_example_register(kp):
    ct, _ = enc_original(kp.public, 0, 8, make_rng(0), x=X, theta=THETA)
    assert render_register(ct.register) == "10++-11-"


def test_worked_example_mask(kp):
    assert masked_parity(X, THETA) == 1
    ct, _ = enc_original(kp.public, 0, 8, make_rng(0), x=X, theta=THETA)
    packed = pke_decrypt(kp.secret, ct.classical)
    assert packed[:8] == THETA and packed[8] == 1


def test_worked_example_decrypt(kp):
    for b in (0, 1):
        ct, _ = enc_original(kp.public, b, 8, make_rng(b), x=X, theta=THETA)
        assert honest_decrypt_original(kp.secret, ct, make_rng(3)) == b


def test_pattern_certificates(kp):
    _, secret = enc_original(kp.public, 0, 8, make_rng(0), x=X, theta=THETA)
    for fill in range(16):
        f = [(fill >> i) & 1 for i in range(4)]
        cert = BitString([f[0], f[1], 1, 1, 0, f[2], f[3], 0])
        assert verify_delete_original(secret, cert)
    for pos in (2, 3, 4, 7):
        bits = [0, 0, 1, 1, 0, 0, 0, 0]
        bits[pos] ^= 1
        assert not verify_delete_original(secret, BitString(bits))
    with pytest.raises(LengthMismatch):
        verify_delete_original(secret, BitString.zeros(7))


def test_theta_never_degenerate(kp):
    rng = make_rng(4)
    for _ in range(500):
        _, secret = enc_original(kp.public, 0, 8, rng)
        assert 0 < secret.theta.weight() < 8


def test_recovery_rate_is_one(kp):
    for t in range(1000):
        rng = trial_rng(5, t)
        b = int(rng.integers(0, 2))
        ct, _ = enc_original(kp.public, b, 8, rng)
        assert honest_decrypt_original(kp.secret, ct, rng) == b


def test_decrypt_leaves_computational_positions_intact(kp):
    rng = make_rng(6)
    for _ in range(100):
        ct, secret = enc_original(kp.public, 1, 8, rng)
        honest_decrypt_original(kp.secret, ct, rng)
        for i, t in enumerate(secret.theta):
            if t == 0:
                assert measure_qubit(ct.register.qubits[i], COMPUTATIONAL, rng)[0] == secret.x[i]


def test_honest_delete_verifies(kp):
    for t in range(1000):
        rng = trial_rng(7, t)
        ct, secret = enc_original(kp.public, 0, 8, rng)
        cert = honest_delete_original(ct, rng)
        assert verify_delete_original(secret, cert)
        assert all(c == x for c, x, th in zip(cert, secret.x, secret.theta) if th)


def test_honest_delete_consumes(kp):
    rng = make_rng(8)
    ct, _ = enc_original(kp.public, 0, 8, rng)
    honest_delete_original(ct, rng)
    with pytest.raises(AlreadyConsumed):
        honest_delete_original(ct, rng)


def test_delete_computational_positions_are_fair(kp):
    rng = make_rng(9)
    ones = total = 0
    for _ in range(10_000):
        ct, secret = enc_original(kp.public, 0, 8, rng, x=X, theta=THETA)
        cert = honest_delete_original(ct, rng)
        ones += cert[0]
        total += 1
    assert abs(ones / total - 0.5) <= 0.02


def test_random_certificate_rate(kp):
    _, secret = enc_original(kp.public, 0, 8, make_rng(0), x=X, theta=THETA)
    rng = make_rng(10)
    N = 100_000
    hits = sum(verify_delete_original(secret, BitString.random(8, rng)) for _ in range(N))
    assert abs(hits / N - 1 / 16) <= 0.01


def test_attack_worked_example(kp):
    for b in (0, 1):
        ct, secret = enc_original(kp.public, b, 8, make_rng(11 + b), x=X, theta=THETA)
        b_hat, cert = attack_original(kp.secret, ct, make_rng(20 + b))
        assert b_hat == b
        assert str(cert)[2:5] == "110" and str(cert)[7] == "0"
        assert verify_delete_original(secret, cert)


def test_attack_joint_success_is_certain():
    report = run_attack_trials(8, 1000, seed=12)
    assert report["joint_rate"] == 1.0
    assert report["recovery_rate"] == report["cert_accept_rate"] == 1.0


def test_measurement_order_independence(kp):
    # reading computational positions first or last gives the same certificate law
    rng = make_rng(13)
    for _ in range(200):
        ct, secret = enc_original(kp.public, 0, 8, rng)
        had = [i for i, t in enumerate(secret.theta) if t]
        first = [ct.register.measure(i, HADAMARD, rng) for i in had]
        honest_decrypt_original(kp.secret, ct, rng)
        assert first == [secret.x[i] for i in had]
