# %% [markdown]
# # Codes used as the classical layer
#
# Hamming(7,4,3) is perfect: radius-1 balls tile all 128 words.
# BCH(31,16,7) corrects three errors by bounded-distance decoding.

# %%
import numpy as np

from certdel.bits import BitString
from certdel.codes import ball_partition, get_code, verify_code
from certdel.rng import make_rng

ham = get_code("hamming-7-4-3")
labels = ball_partition(ham)
np.bincount(labels)

# %%
bch = get_code("bch-31-16-7")
c = BitString.from_str("1000 1001 1010 1011")
word = bch.encode(c)
print(word.grouped())

# %%
# three flips are repaired, four usually are not
noisy = list(word)
for i in (0, 2, 6):
    noisy[i] ^= 1
bch.decode(BitString(noisy)) == c

# %%
verify_code(bch, make_rng(0), samples=2000)
