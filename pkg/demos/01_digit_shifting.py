"""Normalising a tau-series: carries ripple from the smallest digit upward."""
from mca import ShiftFunction, ShiftKind, TauSeries, normalize, value

s = TauSeries(0.1, [5, 2, 15])
print("raw      ", s.coeffs, "value", value(s))
out = normalize(s)
print("mod-carry", out.coeffs, "value", value(out))

saw = normalize(s, ShiftFunction(ShiftKind.SYMMETRIC_SAWTOOTH, 0.1))
print("sawtooth ", saw.coeffs, "value", value(saw))
