"""Monte Carlo decay against the closed-form cubic law.

The second-order treatment gives F = 1 - (9 pi^2/4) delta_e^2 p N / g^2
* (t/T)^3 inside the window dt/(2p) << t << 1/g.  Its derivation freezes
the endpoint field value over the whole interval; the accumulated
random-walk covariance integrates to one third of that, so the simulated
1 - F tracks the predicted shape (slope 3, amplitude scaling) at close to
one third of the predicted magnitude.  The demo prints both, plus the
ratio, across the validity window.
"""
from jcmsim import JcmParams, NoiseParams, predicted_fidelity, validity_window
from jcmsim.engine import run_ensemble

jcm = JcmParams()
noise = NoiseParams(p=0.1, delta_e=5.0, master_seed=23, M=4_000)

t_min, t_max, lo, hi = validity_window(jcm, noise)
print(f"validity window: {t_min:.3g} s << t << {t_max:.3g} s "
      f"({lo:.3g} << t/T << {hi:.3g})\n")

stats = run_ensemble("0plus", jcm, noise, record_stride=200, n_steps=10_000)
print("t/T      1-F (simulated)   1-F (predicted)   ratio   in window")
for i in range(0, stats.steps.size, 5):
    tt = stats.t_over_T[i]
    mc = 1.0 - stats.F[i]
    f_pred, in_win = predicted_fidelity(tt, jcm, noise)
    pred = 1.0 - f_pred
    ratio = mc / pred if pred > 0 else float("nan")
    print(f"{tt:6.3f}   {mc:15.4e}   {pred:15.4e}   {ratio:5.3f}   {in_win}")

print("\nthe ratio settles near 1/3 = 0.333 inside the window: the")
print("frozen-endpoint average overcounts the accumulated field variance")
print("by the factor <E(t)^2> t^2 / <(integral E)^2> = 3.")
