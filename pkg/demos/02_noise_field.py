"""The three-branch random-walk field and its statistics.

Each time step the field jumps by -delta_e, 0, or +delta_e with
probabilities (p, 1-2p, p).  Endpoint moments follow the random-walk laws
var = 2*delta_e^2*p*n and <E^4> ~ 12*delta_e^4*p^2*n^2, and for n >> 1/(2p)
the endpoint distribution is indistinguishable from a centered normal.
"""
import numpy as np

from jcmsim import NoiseParams, generate_path, variance_theory, fourth_moment_theory
from jcmsim.noise import endpoint_levels, histogram_from_levels, moments_of_values, reduced_chi2

params = NoiseParams(p=0.2, delta_e=50.0, master_seed=2026, M=20_000)

path = generate_path(20, params, stream_id=0)
print("one sample path (first 21 values, units of delta_e):")
print(" ", path.levels.tolist(), "\n")

checkpoints = [100, 1_000, 10_000]
levels = endpoint_levels(params, checkpoints)
print(f"endpoint moments over M = {params.M} samples:")
print("n        var_emp      var_theory   ratio    m4_emp       m4_theory    ratio")
for n in checkpoints:
    st = moments_of_values(levels[n] * params.delta_e)
    v_th = variance_theory(params, n)
    m4_th = fourth_moment_theory(params, n)
    print(f"{n:<8d} {st.m2:<12.4g} {v_th:<12.4g} {st.m2/v_th:<8.4f} "
          f"{st.m4:<12.4g} {m4_th:<12.4g} {st.m4/m4_th:.4f}")

hist = histogram_from_levels(levels[10_000], params.delta_e, 10_000, params=params)
chi2, nbins, red = reduced_chi2(hist, min_expected=10.0)
print(f"\nendpoint histogram at n = 10000 vs the normal law:")
print(f"  {nbins} bins with expected count >= 10, reduced chi2 = {red:.3f}")
peak = np.argmax(hist.counts)
print(f"  peak bin at E = {hist.centers[peak]:g}: "
      f"count {hist.counts[peak]}, expected {hist.expected[peak]:.1f}")
