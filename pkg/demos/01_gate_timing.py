"""Gate timing and the closed-form sign-shift coefficients.

The resonant atom-photon ladder rotates each pair (|g,k>, |e,k-1>) at the
Rabi rate g*sqrt(k).  Holding the interaction for t = (2m+1)*pi/(sqrt(2)*g)
returns |g,2> with its sign flipped exactly, while |g,0> is untouched and
|g,1> survives with coefficient d(m), leaking error probability |c(m)|^2
into the excited atom.  Small |c|^2 therefore means a good approximate
sign-shift gate; m = 1 and m = 3 are the practical choices.
"""
import numpy as np

from jcmsim import JcmParams, exact_evolve, make_initial_state, ns_gate_coeffs

params = JcmParams()  # g = 1e6/70 rad/s, K = 5
print(f"coupling g = {params.g:.6g} rad/s")
print(f"gate time T(m=1) = {params.gate_time:.6g} s\n")

print("m    error |c(m)|^2    survivor d(m)")
for m in range(8):
    c_sq, d = ns_gate_coeffs(m)
    print(f"{m}    {c_sq:12.4f}    {d:13.4f}")

print("\naction on (|g,0> + |g,1> + |g,2>)/sqrt(3) at t = T(m=1):")
state = exact_evolve(make_initial_state("g012", params.K),
                     params.gate_time, params)
for label, amp in [("g,0", state.g[0]), ("g,1", state.g[1]),
                   ("g,2", state.g[2]), ("e,0", state.e[0])]:
    print(f"  |{label}>  amplitude {amp:+.4f}   probability {abs(amp)**2:.4f}")

print("\nthe |g,2> amplitude is exactly -1/sqrt(3) =", f"{-1/np.sqrt(3):.6f};")
print("conditioning on the atom staying in |g> leaves an approximate")
print("sign-shift gate with error probability |c(1)|^2/3 =",
      f"{ns_gate_coeffs(1)[0]/3:.4f}")
