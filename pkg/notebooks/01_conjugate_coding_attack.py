# %% [markdown]
# # Conjugate-coding deletion and why it breaks
#
# A bit `b` is masked with the parity of the computational-basis positions
# of a random string `x`. Positions with `theta=1` are sent in the Hadamard
# basis and double as the deletion check.

# %%
from certdel.bits import BitString
from certdel.original import (
    attack_original, enc_original, masked_parity, original_keygen, run_attack_trials,
    verify_delete_original,
)
from certdel.qubit import render_register
from certdel.rng import make_rng

x = BitString.from_str("1011 0110")
theta = BitString.from_str("0011 1001")
masked_parity(x, theta)

# %%
kp = original_keygen(8, make_rng(0))
ct, secret = enc_original(kp.public, 0, 8, make_rng(1), x=x, theta=theta)
print(render_register(ct.register))

# %% [markdown]
# Once the key reveals `theta`, a receiver can measure every qubit in its
# own basis. That yields the plaintext and the certificate at once.

# %%
b_hat, cert = attack_original(kp.secret, ct, make_rng(2))
print(b_hat, cert, verify_delete_original(secret, cert))

# %%
run_attack_trials(8, 1000, seed=3)
