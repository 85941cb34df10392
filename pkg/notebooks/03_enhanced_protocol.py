# %% [markdown]
# # Reading destroys the certificate
#
# The codeword is prepared in one hidden conjugate basis, with `e` qubits
# replaced by random states. The code absorbs those errors for a reader who
# guesses the basis. Measuring randomizes them, so a returned register no
# longer passes verification.

# %%
from certdel.bits import BitString
from certdel.enhanced import (
    alice_verify_quantum, bob_decrypt, bob_delete_quantum, cheat_measure_forge,
    encrypt_enhanced,
)
from certdel.pke import keygen
from certdel.rng import make_rng

rng = make_rng(0)
kp = keygen("toy-16", 128, rng)
msg = BitString.from_hex("beef", 16)
bundle, record = encrypt_enhanced(kp.public, msg, "bch-31-16-7", "bloch", rng)
record.global_basis, [(e.position, e.value) for e in record.errors]

# %%
bob_decrypt(kp.secret, bundle, rng, guess=record.global_basis) == msg

# %%
bundle, record = encrypt_enhanced(kp.public, msg, "bch-31-16-7", "bloch", rng)
alice_verify_quantum(record, bob_delete_quantum(bundle), rng)

# %%
hits = 0
for _ in range(2000):
    bundle, record = encrypt_enhanced(kp.public, msg, "bch-31-16-7", "bloch", rng)
    _, kept = cheat_measure_forge(kp.secret, bundle, rng, guess=record.global_basis)
    hits += alice_verify_quantum(record, kept, rng)
hits / 2000  # about 0.33 for three error qubits
