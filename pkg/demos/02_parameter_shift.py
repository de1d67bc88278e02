"""Parameter-shift rules on the exact simulator.

The expectation of an observable after the rotation exp(i x P / 2) is a
sinusoid in x, so its derivatives at 0 are exact combinations of values
at shifted angles: no finite differences, no step-size tuning.
"""
import numpy as np

from rqcd import (
    PauliSum,
    StateVector,
    eval_shifted,
    grad_component,
    hess_diag,
    word_from_index,
)

z = word_from_index(3, 1)
y = word_from_index(2, 1)
op = PauliSum(1, [(1.0, z)])
plus = StateVector.uniform(1)

print("g(x) = <Z> after exp(i x Y / 2) on |+>:")
for x in np.linspace(0, np.pi, 5):
    print(f"  g({x:5.3f}) = {eval_shifted(plus, op, y, x):+.6f}   sin(x) = {np.sin(x):+.6f}")

######################################################################
# The two-point rule gives the unnormalized gradient component
# g(-pi/2) - g(pi/2); on this state it is exactly -2.

g = grad_component(plus, op, y)
print(f"\ngradient component along Y at |+>: {g:+.6f}")

######################################################################
# Curvature along a direction needs no extra circuits: the same two
# shifted values plus the current energy give the diagonal entry.

zero = StateVector.zero(1)
x_word = word_from_index(1, 1)
g_plus = eval_shifted(zero, op, x_word, np.pi / 2)
g_minus = eval_shifted(zero, op, x_word, -np.pi / 2)
curvature = hess_diag(1.0, g_plus, g_minus)
print(f"diagonal curvature along X at |0>: {curvature:+.6f}  (hand value: -4)")

######################################################################
# Against a central difference: the shift rule is exact, the finite
# difference is not.

h = 1e-5
fd = (eval_shifted(plus, op, y, h) - eval_shifted(plus, op, y, -h)) / (2 * h)
rule = 0.5 * (eval_shifted(plus, op, y, np.pi / 2) - eval_shifted(plus, op, y, -np.pi / 2))
print(f"\ng'(0): finite difference {fd:.10f} vs shift rule {rule:.10f}")
