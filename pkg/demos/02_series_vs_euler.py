"""The carried series integrator reproduces explicit Euler to rounding error."""
import numpy as np

from mca import builtin, compare, euler, integrate_full, integrate_split

tau, n = 2.0 ** -10, 10_000
sys = builtin("lorenz")
full = integrate_full(sys, (3, 2, 15), tau, n)
split = integrate_split(sys, (3, 2, 15), tau, n)
ref = euler(sys, (3, 2, 15), tau, n)

print("full  vs Euler:", compare(full, ref).as_dict())
print("split vs Euler:", compare(split, ref).as_dict())
print("largest |a_m|*tau:", np.max(np.abs(full.series_states[:, :, 1:])) * tau)
print("final state:", full.states[-1])
