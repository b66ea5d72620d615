"""Longitudinal and transverse relaxation of the atom under field noise.

Averaging many noisy trajectories dephases the atom: the longitudinal
component Sz relaxes toward zero (T1-type) and the transverse component
and total Bloch length shrink (T2-type).  The noise-free run is the
baseline; the stronger the field step, the faster both relaxations.

Production scale uses N = 1e5 steps and tens of thousands of samples; this
demo runs a tenth of the steps with a matched-variance field (damage scales
with delta_e^2 * p * N) so it finishes in under a minute.
"""
from jcmsim import JcmParams, NoiseParams
from jcmsim import exact_evolve, make_initial_state
from jcmsim.engine import run_ensemble
from jcmsim.states import bloch_of_state

jcm = JcmParams(N=10_000)
M = 4_000

print(f"initial state (|g,0>+|g,1>+|g,2>)/sqrt(3); N = {jcm.N}, M = {M}\n")
runs = {}
for de in (0.0, 158.0, 316.0):
    noise = NoiseParams(p=0.2, delta_e=de, master_seed=7, M=M)
    runs[de] = run_ensemble("g012", jcm, noise, record_stride=jcm.N // 10)

steps = runs[0.0].steps
print("t/T     " + "".join(f"   Sz(dE={de:g})" for de in runs)
      + "".join(f"  |S|^2(dE={de:g})" for de in runs))
for i in range(len(steps)):
    row = f"{steps[i]/jcm.N:5.2f}  "
    for de in runs:
        row += f"{runs[de].Sz[i]:12.4f}"
    for de in runs:
        s = runs[de]
        row += f"{s.Sx[i]**2 + s.Sy[i]**2 + s.Sz[i]**2:14.4f}"
    print(row)

noiseless = bloch_of_state(
    exact_evolve(make_initial_state("g012", jcm.K), jcm.gate_time, jcm))
strong = runs[316.0]
print(f"\nat t = T: noise-free Sz = {noiseless.Sz:.4f}, "
      f"strongest-noise Sz = {strong.Sz[-1]:.4f} (T1 relaxation toward 0)")
print(f"noise-free |S|^2 = {noiseless.norm_sq():.4f}, "
      f"strongest-noise |S|^2 = "
      f"{strong.Sx[-1]**2 + strong.Sy[-1]**2 + strong.Sz[-1]**2:.4f} "
      f"(T2 shrinkage)")
