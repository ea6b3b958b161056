"""
Spin up, spin down
==================

A Haar-random spinor has a uniformly distributed up-probability.  For N
qubits, a random product state keeps that spread on its first qubit, while a
random entangled state pins the first-qubit up-probability near 1/2.
"""

from typicality_lab import StateVector
from typicality_lab.qubits import bloch_vector, haar_first_qubit_variance, spin_experiment, up_probability

print(bloch_vector(StateVector([1, 1], normalize=True)))
print("equator:", up_probability(StateVector([1, 1j], normalize=True)))

rep = spin_experiment(20_000, seed=5, n_qubits=10)
for p, est in rep.fraction_p.items():
    print(f"P(up >= {1 - p:.2f}) = {est.value:.4f}   (expected {p})")
print("product states, first qubit up >= 0.9:", rep.product_high.value)
print("entangled states outside [0.4, 0.6]:", rep.haar_outside_band.value)
print("entangled first-qubit stdev:", haar_first_qubit_variance(10) ** 0.5)
