"""The periodic Heisenberg XXZ chain and its exact ground energy.

The error metric of every experiment is the gap to the exact ground
energy, computed by dense diagonalization with the package's own Jacobi
solver (through the real embedding of the Hermitian matrix).
"""
from rqcd import StateVector, build_xxz, expectation, ground_energy
from rqcd.hamiltonian import spectrum

for n in (2, 3, 4, 5):
    op = build_xxz(n, 0.5)
    print(f"N={n}: {len(op)} terms, ground energy {ground_energy(op):+.6f}")

######################################################################
# On two qubits both periodic bonds coincide, so the operator collapses
# to three doubled terms and the ground energy is -5 by hand.

op2 = build_xxz(2, 0.5)
print("\ntwo-qubit operator:")
print(op2.dump())
print("spectrum:", [round(v, 6) for v in spectrum(op2)])

######################################################################
# The uniform superposition is far from the ground state; every
# optimizer in this package starts there.

for n in (2, 4):
    op = build_xxz(n, 0.5)
    f0 = expectation(op, StateVector.uniform(n))
    print(f"\nN={n}: uniform-state energy {f0:+.3f}, ground {ground_energy(op):+.3f}")
