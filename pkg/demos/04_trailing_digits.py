"""The lowest retained digit of a Lorenz run behaves like a uniform sequence."""
from mca import builtin, extract_random_part, integrate_full, uniformity_report

traj = integrate_full(builtin("lorenz"), (3, 2, 15), 2.0 ** -10, 10_000)
for comp in (None, 0, 1, 2):
    u = extract_random_part(traj, traj.p, comp)
    r = uniformity_report(u)
    label = "pooled" if comp is None else traj.names[comp]
    print(f"{label:>6}: n={r['n']} chi2 p={r['chi2_pvalue']:.3f} KS={r['ks']:.4f}")
