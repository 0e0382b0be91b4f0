"""Piecewise-linear skeleton of the Van der Pol oscillator and the Lorenz system."""
from mca import build, builtin
from mca.linear_approx import to_table

vdp = build(builtin("vanderpol", {"lambda": 1.0}), (0, 1), 0.01, 11.67)
print(to_table(vdp))
print()

lz = build(builtin("lorenz"), (3, 2, 15), 0.01, 1.01)
print(to_table(lz))
