"""Pauli words: encoding, commutation, and products.

Every n-qubit tensor product of I, X, Y, Z is addressed by an integer
index whose base-4 digits (least significant first) name the letter on
each qubit.  Two masks (x_mask, z_mask) encode the word; Y is the qubit
carrying both bits, with the phase convention Y = i X Z.
"""
import numpy as np

from rqcd import commutes, index_of, word_from_index
from rqcd.oracle import dense_of
from rqcd.pauli import multiply

n = 2

print("All 16 two-qubit words, by index (letters are qubit-0-first):")
for j in range(4**n):
    w = word_from_index(j, n)
    assert index_of(w) == j
    print(f"  {j:2d} -> {w}")

######################################################################
# Commutation is a parity statement on the masks: two words commute
# exactly when an even number of qubit positions anticommute.  The
# symplectic rule agrees with the dense matrices everywhere.

xx = word_from_index(5, n)
zz = word_from_index(15, n)
xi = word_from_index(1, n)
print(f"\n[{xx}, {zz}] = 0?  {commutes(xx, zz)}")
print(f"[{xi}, {zz}] = 0?  {commutes(xi, zz)}")

pairs = [(a, b) for a in range(1, 16) for b in range(a + 1, 16)]
n_commuting = sum(commutes(word_from_index(a, n), word_from_index(b, n)) for a, b in pairs)
print(f"commuting fraction over distinct non-identity pairs: {n_commuting}/{len(pairs)}")

######################################################################
# Products close up to a power of i.  The bookkeeping never touches a
# matrix, but the dense check below confirms it.

k, r = multiply(xi, zz)
print(f"\n{xi} * {zz} = i^{k} * {r}")
lhs = dense_of(xi) @ dense_of(zz)
assert np.allclose(lhs, 1j**k * dense_of(r))
print("dense check passed")
