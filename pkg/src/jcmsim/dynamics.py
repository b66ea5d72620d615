"""Resonant atom-photon dynamics in the interaction picture.

Two propagation routes are provided for the same physics:

* :func:`exact_evolve` applies the closed-form finite-time propagator by
  phasing the coupled-basis coefficients, exp(-+ i g sqrt(n+1) t) on the
  |n,+-> pair.  It is exact but refuses states with weight on the orphaned
  top level |e,K|.
* :func:`build_step_operator` / :func:`apply_jcm_step` implement the
  truncated per-step propagator used by the Monte Carlo loop: each pair
  (|g,k>, |e,k-1>) rotates by the angle g*sqrt(k)*dt, |g,0> is left alone,
  and the top level |e,K> is damped by cos(g*sqrt(K+1)*dt) because its
  partner |g,K+1> lies outside the truncation.  This damping is the only
  norm leak in the whole simulation and is monitored by the ensemble code.

The sign-shift gate runs for t = (2m+1)*pi/(sqrt(2)*g), at which the |g,2>
amplitude is exactly negated while |g,1> picks up the coefficients
(c(m), d(m)) returned by :func:`ns_gate_coeffs`.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .states import SQRT2, StateVector, from_blocks

#: amplitude on |e,K> above which exact dressed evolution is refused
TOP_LEVEL_TOL = 1e-12

# Rubidium Rydberg transition used for the default parameter set
# (63p_3/2 <-> 61d_5/2 of 85Rb); frequency in Hz, wavelength in m.
DEFAULT_TRANSITION_HZ = 21456.0e6
DEFAULT_WAVELENGTH_M = 1.39724e-2
DEFAULT_COUPLING = 1.0e6 / 70.0  # rad/s


@dataclass(frozen=True)
class JcmParams:
    """Coupling, truncation and gate-timing parameters.

    ``g`` is the atom-photon coupling (rad/s, real positive), ``K`` the
    photon-number cutoff, ``m`` the gate timing integer and ``N`` the number
    of time steps per gate time.  The gate time T and the step dt are
    derived, never stored independently.  ``f`` and ``wavelength`` are
    metadata only; resonance removes the free Hamiltonian from the dynamics.
    """

    g: float = DEFAULT_COUPLING
    K: int = 5
    m: int = 1
    N: int = 100_000
    f: float = field(default=DEFAULT_TRANSITION_HZ, compare=False)
    wavelength: float = field(default=DEFAULT_WAVELENGTH_M, compare=False)

    def __post_init__(self):
        if not self.g > 0.0:
            raise ValueError(f"coupling g must be positive (got {self.g})")
        if self.K < 1:
            raise ValueError(f"truncation K must be >= 1 (got {self.K})")
        if self.m < 0:
            raise ValueError(f"gate integer m must be >= 0 (got {self.m})")
        if self.N < 1:
            raise ValueError(f"step count N must be >= 1 (got {self.N})")

    @property
    def gate_time(self) -> float:
        """T = (2m+1)*pi/(sqrt(2)*g) in seconds."""
        return (2 * self.m + 1) * np.pi / (SQRT2 * self.g)

    @property
    def dt(self) -> float:
        return self.gate_time / self.N


@dataclass(frozen=True)
class JcmStepOperator:
    """Precomputed per-step rotation coefficients.

    ``cos_pair[k-1]``/``sin_pair[k-1]`` hold cos/sin of g*sqrt(k)*dt for the
    (|g,k>, |e,k-1>) pair, k = 1..K; ``cos_top`` damps the lone |e,K> level.
    Built once per (g, dt, K) and shared read-only across all samples.
    """

    cos_pair: np.ndarray
    sin_pair: np.ndarray
    cos_top: float
    K: int
    dt: float


def build_step_operator(params: JcmParams, dt: float | None = None) -> JcmStepOperator:
    """Step propagator for one interval dt (default: the gate step T/N)."""
    if dt is None:
        dt = params.dt
    k = np.arange(1, params.K + 1)
    angles = params.g * np.sqrt(k) * dt
    top = params.g * np.sqrt(params.K + 1.0) * dt
    return JcmStepOperator(
        cos_pair=np.cos(angles),
        sin_pair=np.sin(angles),
        cos_top=float(np.cos(top)),
        K=params.K,
        dt=dt,
    )


def apply_jcm_step(s: StateVector, op: JcmStepOperator) -> StateVector:
    """One truncated propagator step.

    Norm is preserved exactly on any state with no |e,K> amplitude and is
    non-increasing otherwise.
    """
    if s.K != op.K:
        raise ValueError(f"truncation mismatch: state K={s.K}, operator K={op.K}")
    g = s.g
    e = s.e
    new_g = g.copy()
    new_e = e.copy()
    new_g[1:] = op.cos_pair * g[1:] - 1j * (op.sin_pair * e[:-1])
    new_e[:-1] = -1j * (op.sin_pair * g[1:]) + op.cos_pair * e[:-1]
    new_e[-1] = op.cos_top * e[-1]
    return from_blocks(new_g, new_e, s.K)


def exact_evolve(s: StateVector, t: float, params: JcmParams) -> StateVector:
    """Closed-form propagation by time t via coupled-basis phases.

    Raises if the state has weight above TOP_LEVEL_TOL on |e,K>, where the
    truncated ladder has no exact evolution; callers should raise K instead.
    """
    if t < 0.0:
        raise ValueError(f"time must be >= 0 (got {t})")
    if s.K != params.K:
        raise ValueError(f"truncation mismatch: state K={s.K}, params K={params.K}")
    if abs(s.e[-1]) > TOP_LEVEL_TOL:
        raise ValueError(
            f"|e,K| amplitude {abs(s.e[-1]):.2e} exceeds {TOP_LEVEL_TOL}; "
            "exact evolution is undefined on the orphaned top level - raise K"
        )
    cp = (s.e[:-1] + s.g[1:]) / SQRT2
    cm = (s.e[:-1] - s.g[1:]) / SQRT2
    phase = np.exp(-1j * params.g * np.sqrt(np.arange(1, params.K + 1)) * t)
    cp = cp * phase
    cm = cm * np.conj(phase)
    g = np.zeros(params.K + 1, dtype=np.complex128)
    e = np.zeros(params.K + 1, dtype=np.complex128)
    g[0] = s.g[0]
    e[:-1] = (cp + cm) / SQRT2
    g[1:] = (cp - cm) / SQRT2
    return from_blocks(g, e, s.K)


def ns_gate_coeffs(m: int) -> tuple[float, float]:
    """(|c(m)|^2, d(m)) for the gate time t = (2m+1)*pi/(sqrt(2)*g).

    |c|^2 = sin^2((2m+1)*pi/sqrt(2)) is the probability of leaving the atom
    excited (the gate error channel); d = cos((2m+1)*pi/sqrt(2)) is the
    surviving |g,1> coefficient.  |c|^2 + d^2 = 1.
    """
    if m < 0:
        raise ValueError(f"gate integer m must be >= 0 (got {m})")
    x = (2 * m + 1) * np.pi / SQRT2
    return float(np.sin(x) ** 2), float(np.cos(x))


def recorded_steps(n_steps: int, record_stride: int) -> np.ndarray:
    """Step indices {0, stride, 2*stride, ...} plus the final step."""
    if record_stride < 1:
        raise ValueError(f"record_stride must be >= 1 (got {record_stride})")
    steps = np.arange(0, n_steps + 1, record_stride, dtype=np.int64)
    if steps[-1] != n_steps:
        steps = np.append(steps, n_steps)
    return steps


def reference_trajectory(
    initial: StateVector, params: JcmParams, record_stride: int, n_steps: int | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Noise-free trajectory sampled on the recording grid.

    Returns (steps, states) with ``states[i]`` the exact amplitudes after
    ``steps[i]`` intervals of length dt.  This is the fidelity reference: for
    a no-noise run it agrees with repeated stepping because the per-step
    factors commute with their product.
    """
    if n_steps is None:
        n_steps = params.N
    steps = recorded_steps(n_steps, record_stride)
    states = np.empty((steps.size, 2 * (params.K + 1)), dtype=np.complex128)
    for i, n in enumerate(steps):
        states[i] = exact_evolve(initial, n * params.dt, params).amplitudes
    return steps, states
