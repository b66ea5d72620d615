"""Gate-end fidelity over the (p, delta_e) plane.

F(T) equals one exactly on both noise-free edges, falls monotonically with
the field step, is convex in p near p = 0 (each extra bit of jump
probability hurts less once the walk is already spreading), and concave in
delta_e near delta_e = 0.  A coarse grid at reduced N shows all four
features in about a minute.
"""
import numpy as np

from jcmsim import JcmParams
from jcmsim.engine import sweep_fidelity_surface

jcm = JcmParams(N=10_000)
p_values = np.linspace(0.0, 0.3, 4)
de_values = np.linspace(0.0, 316.0, 4)

res = sweep_fidelity_surface(p_values, de_values, jcm, M=2_000, master_seed=5)

print(f"F(T), N = {jcm.N}, M = 2000 per vertex (rows: p, columns: delta_e)\n")
header = "p \\ dE " + "".join(f"{de:>10.0f}" for de in de_values)
print(header)
for i, p in enumerate(p_values):
    print(f"{p:6.3f}" + "".join(f"{res.F[i, j]:10.4f}"
                                for j in range(de_values.size)))

f0, f1, f2 = res.F[0, -1], res.F[1, -1], res.F[2, -1]
print(f"\nsecond difference in p at the strongest field: "
      f"{f0 - 2*f1 + f2:+.4f} (positive: convex)")
g0, g1, g2 = res.F[-1, 0], res.F[-1, 1], res.F[-1, 2]
print(f"second difference in delta_e at the largest p: "
      f"{g0 - 2*g1 + g2:+.4f} (negative: concave)")
