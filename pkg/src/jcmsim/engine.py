"""Monte Carlo ensembles of noisy gate trajectories.

A single sample interleaves the stochastic atom rotation with the ladder
step, rightmost factor first: step n applies the rotation with angle
dt*E(n*dt)/2 and then the truncated ladder propagator.  E(0) is generated
but never enters the dynamics (step 1 already uses E(dt)).

Ensembles average per-sample fidelity against the closed-form noise-free
trajectory, the photon-traced atom density matrix, and the squared norm.
Samples are independent work items: sample i consumes the stream keyed by
(master_seed, stream_offset + i), chunks of samples are reduced in a fixed
order (numpy pairwise sum within a chunk, exact fsum across chunks), and the
compiled chunk kernel writes one slot per sample.  Results are therefore
bit-reproducible for any thread count and chunking is invisible at the
1e-12 level; the default fixed chunk size makes repeated runs byte-identical.

Noise-free configurations (p = 0 or delta_e = 0) collapse to one
deterministic trajectory, so a single sample is evolved and its statistics
stand for the whole ensemble (zero statistical error).
"""
from __future__ import annotations

import math
import os
import sys
from dataclasses import dataclass, field, replace

import numpy as np

from .dephasing import apply_atom_rotation, rotation_angle
from .dynamics import (
    JcmParams,
    JcmStepOperator,
    apply_jcm_step,
    build_step_operator,
    recorded_steps,
    reference_trajectory,
)
from .noise import FieldPath, NoiseParams, increments_from_draws, sample_stream
from .states import (
    BlochVector,
    StateVector,
    bloch_from_density,
    make_initial_state,
    reduced_atom_density,
)

DEFAULT_RECORD_STRIDE = 100
_CHUNK = 4096
_BLOCK = 2048


def set_threads(n: int | None) -> int:
    """Pin the compiled-kernel thread count; returns the effective value.

    The request is clamped to numba's process-wide maximum.  When numba has
    not been imported yet the maximum itself is raised via NUMBA_NUM_THREADS,
    so a CLI-set value takes effect even above the core count.  Outputs do
    not depend on the thread count either way.
    """
    if n is None:
        import numba

        return numba.get_num_threads()
    n = max(1, int(n))
    if "numba" not in sys.modules:
        os.environ["NUMBA_NUM_THREADS"] = str(n)
    import numba

    eff = min(n, numba.config.NUMBA_NUM_THREADS)
    numba.set_num_threads(eff)
    return eff


@dataclass(frozen=True)
class TrajectoryRecord:
    """Per-recorded-step observables of one noisy sample."""

    steps: np.ndarray          # recorded step indices
    fidelity: np.ndarray       # |<ref_n|psi_n>|^2
    atom_density: np.ndarray   # (R, 2, 2) photon-traced density contribution
    norm_sq: np.ndarray


@dataclass(frozen=True)
class EnsembleStats:
    """Ensemble averages on the recording grid plus run metadata."""

    steps: np.ndarray
    t_over_T: np.ndarray
    F: np.ndarray
    stderr_F: np.ndarray
    Sx: np.ndarray
    Sy: np.ndarray
    Sz: np.ndarray
    norm_sq: np.ndarray
    M: int
    initial: str
    jcm: JcmParams
    noise: NoiseParams
    record_stride: int
    n_steps: int
    atom_density: np.ndarray = field(repr=False, default=None)

    def bloch_final(self) -> BlochVector:
        return BlochVector(float(self.Sx[-1]), float(self.Sy[-1]), float(self.Sz[-1]))

    def norm_deficit_final(self) -> float:
        return 1.0 - float(self.norm_sq[-1])


def run_trajectory(
    initial: StateVector,
    op: JcmStepOperator,
    path: FieldPath,
    reference: np.ndarray,
    record_stride: int = DEFAULT_RECORD_STRIDE,
) -> TrajectoryRecord:
    """Evolve one sample along a field path, recording on the stride grid.

    ``reference`` holds the noise-free amplitudes aligned with the recorded
    steps (see :func:`jcmsim.dynamics.reference_trajectory`).  The squared
    norm is non-increasing; it drops only through the top-level damping.
    """
    n_steps = len(path) - 1
    steps = recorded_steps(n_steps, record_stride)
    reference = np.asarray(reference)
    if reference.shape != (steps.size, initial.amplitudes.size):
        raise ValueError(
            f"reference shape {reference.shape} does not match "
            f"{(steps.size, initial.amplitudes.size)} for this path and stride"
        )
    if op.K != initial.K:
        raise ValueError(f"truncation mismatch: state K={initial.K}, operator K={op.K}")
    fid = np.empty(steps.size)
    dens = np.empty((steps.size, 2, 2), dtype=np.complex128)
    norms = np.empty(steps.size)
    s = initial
    values = path.values
    ri = 0

    def record(state: StateVector):
        nonlocal ri
        ov = np.vdot(reference[ri], state.amplitudes)
        fid[ri] = ov.real**2 + ov.imag**2
        dens[ri] = reduced_atom_density(state)
        norms[ri] = dens[ri, 0, 0].real + dens[ri, 1, 1].real
        ri += 1

    record(s)
    for n in range(1, n_steps + 1):
        s = apply_atom_rotation(s, rotation_angle(op.dt, values[n]))
        s = apply_jcm_step(s, op)
        if ri < steps.size and n == steps[ri]:
            record(s)
    return TrajectoryRecord(steps, fid, dens, norms)


def _initial_state(initial: str | StateVector, K: int) -> tuple[StateVector, str]:
    if isinstance(initial, StateVector):
        return initial, "custom"
    return make_initial_state(initial, K), initial


def _stats_from_sums(sums, steps, M, initial_label, jcm, noise, record_stride, n_steps,
                     keep_density=False):
    """Assemble EnsembleStats from fixed-order sample sums per recorded step."""
    f_sum, f2_sum, ee, gg, eg_re, eg_im = (np.asarray(c) for c in sums)
    F = f_sum / M
    if M > 1:
        var = np.maximum(f2_sum - f_sum**2 / M, 0.0) / (M - 1)
        stderr = np.sqrt(var / M)
    else:
        stderr = np.zeros_like(F)
    sx = np.empty_like(F)
    sy = np.empty_like(F)
    sz = np.empty_like(F)
    dens = np.empty((F.size, 2, 2), dtype=np.complex128) if keep_density else None
    for i in range(F.size):
        rho = np.array(
            [[ee[i] / M, (eg_re[i] + 1j * eg_im[i]) / M],
             [(eg_re[i] - 1j * eg_im[i]) / M, gg[i] / M]]
        )
        b = bloch_from_density(rho)
        sx[i], sy[i], sz[i] = b
        if keep_density:
            dens[i] = rho
    norm_sq = (ee + gg) / M
    t_over_T = steps / jcm.N
    return EnsembleStats(steps, t_over_T, F, stderr, sx, sy, sz, norm_sq,
                         M, initial_label, jcm, noise, record_stride, n_steps,
                         atom_density=dens)


def run_ensemble(
    initial: str | StateVector,
    jcm: JcmParams,
    noise: NoiseParams,
    record_stride: int = DEFAULT_RECORD_STRIDE,
    n_steps: int | None = None,
    threads: int | None = None,
    bitrepro: bool = True,
    stream_offset: int = 0,
    keep_density: bool = False,
    chunk_size: int | None = None,
    block_size: int | None = None,
) -> EnsembleStats:
    """Average M noisy samples of the gate evolution.

    ``n_steps`` (default N) truncates the run to an initial segment of the
    gate window without changing dt, i.e. the physics on [0, n_steps*dt] is
    identical to a full run.  ``bitrepro`` is accepted for interface
    stability; reductions are always performed in fixed order, so results
    are bit-reproducible regardless.  ``chunk_size``/``block_size`` tune the
    sample/time tiling; they move chunk boundaries of the reduction and so
    may shift results at the last-ulp level, never beyond.
    """
    del bitrepro
    chunk = _CHUNK if chunk_size is None else max(1, int(chunk_size))
    block = _BLOCK if block_size is None else max(1, int(block_size))
    sv, label = _initial_state(initial, jcm.K)
    if n_steps is None:
        n_steps = jcm.N
    steps, ref = reference_trajectory(sv, jcm, record_stride, n_steps)
    op = build_step_operator(jcm)
    set_threads(threads)

    noise_free = noise.p == 0.0 or noise.delta_e == 0.0
    m_run = 1 if noise_free else noise.M

    kp1 = jcm.K + 1
    ref_g_conj = np.ascontiguousarray(np.conj(ref[:, :kp1]))
    ref_e_conj = np.ascontiguousarray(np.conj(ref[:, kp1:]))
    half = 0.5 * op.dt * noise.delta_e
    tab_lv = np.arange(-n_steps, n_steps + 1)
    cos_tab = np.cos(half * tab_lv)
    sin_tab = np.sin(half * tab_lv)
    offset = n_steps

    from . import _kernel

    # step-0 record: every sample still sits in the initial state, whose
    # fidelity against the reference (the state itself) is 1 by definition
    rho0 = np.outer(sv.e, np.conj(sv.g))
    ee0 = float(np.vdot(sv.e, sv.e).real)
    gg0 = float(np.vdot(sv.g, sv.g).real)
    eg0 = complex(np.trace(rho0))
    n_rec = steps.size
    chunk_sums = []
    for lo in range(0, m_run, chunk):
        hi = min(lo + chunk, m_run)
        csz = hi - lo
        g = np.tile(sv.g, (csz, 1))
        e = np.tile(sv.e, (csz, 1))
        gens = [sample_stream(noise.master_seed, stream_offset + i) for i in range(lo, hi)]
        rec_out_chunks = []
        draws = np.empty((csz, block))
        level0 = np.zeros(csz, dtype=np.int32)
        n = 0
        while n < n_steps:
            b = min(block, n_steps - n)
            for i in range(csz):
                gens[i].random(out=draws[i, :b])
            levels = np.cumsum(increments_from_draws(draws[:, :b], noise.p),
                               axis=1, dtype=np.int32)
            levels += level0[:, None]
            level0 = levels[:, -1].copy()
            # recorded steps that fall inside this block, as in-block offsets
            in_blk = steps[(steps > n) & (steps <= n + b)]
            rec_pos = (in_blk - n - 1).astype(np.int64)
            ref_sel = np.searchsorted(steps, in_blk)
            rec_out = np.empty((csz, rec_pos.size, 5))
            _kernel.evolve_block(
                g, e, levels, cos_tab, sin_tab, offset,
                op.cos_pair, op.sin_pair, op.cos_top,
                rec_pos, ref_g_conj[ref_sel], ref_e_conj[ref_sel], rec_out,
            )
            if rec_pos.size:
                rec_out_chunks.append(rec_out)
            n += b
        rec = (np.concatenate(rec_out_chunks, axis=1) if rec_out_chunks
               else np.empty((csz, 0, 5)))
        partial = np.empty((n_rec, 6))
        partial[0] = [csz * 1.0, csz * 1.0, csz * ee0, csz * gg0,
                      csz * eg0.real, csz * eg0.imag]
        if n_rec > 1:
            partial[1:, 0] = rec[:, :, 0].sum(axis=0)
            partial[1:, 1] = (rec[:, :, 0] ** 2).sum(axis=0)
            partial[1:, 2:] = rec[:, :, 1:].sum(axis=0)
        chunk_sums.append(partial)

    sums = [
        np.array([math.fsum(c[r, q] for c in chunk_sums) for r in range(n_rec)])
        for q in range(6)
    ]
    # in the noise-free case the single evolved sample IS every sample, so
    # its statistics stand for the full ensemble with zero statistical error
    stats = _stats_from_sums(sums, steps, m_run, label, jcm, noise,
                             record_stride, n_steps, keep_density=keep_density)
    if m_run != noise.M:
        stats = replace(stats, M=noise.M)
    return stats


def convergence_study(
    initial: str | StateVector,
    jcm: JcmParams,
    noise: NoiseParams,
    m_list: list[int],
    **kwargs,
) -> list[EnsembleStats]:
    """One ensemble per sample count, on disjoint stream ranges."""
    if not m_list:
        raise ValueError("m_list must not be empty")
    out = []
    offset = kwargs.pop("stream_offset", 0)
    for m in m_list:
        np_m = NoiseParams(noise.p, noise.delta_e, noise.master_seed, int(m))
        out.append(run_ensemble(initial, jcm, np_m, stream_offset=offset, **kwargs))
        offset += int(m)
    return out


@dataclass(frozen=True)
class SweepResult:
    """Gate-end fidelity over a (p, delta_e) grid, row-major in p."""

    p_values: np.ndarray
    delta_e_values: np.ndarray
    F: np.ndarray        # (len(p), len(delta_e))
    stderr: np.ndarray


def sweep_fidelity_surface(
    p_values,
    delta_e_values,
    jcm: JcmParams,
    M: int,
    master_seed: int = 1,
    initial: str | StateVector = "g012",
    threads: int | None = None,
) -> SweepResult:
    """F at t = T for every vertex of the (p, delta_e) grid.

    All vertices reuse the same sample streams, so fidelity differences
    along a grid line are positively correlated and monotone trends emerge
    above the statistical noise quickly.
    """
    p_values = np.asarray(list(p_values), dtype=float)
    de_values = np.asarray(list(delta_e_values), dtype=float)
    if p_values.size == 0 or de_values.size == 0:
        raise ValueError("grid lists must not be empty")
    F = np.empty((p_values.size, de_values.size))
    err = np.empty_like(F)
    for i, p in enumerate(p_values):
        for j, de in enumerate(de_values):
            noise = NoiseParams(p=float(p), delta_e=float(de),
                                master_seed=master_seed, M=M)
            stats = run_ensemble(initial, jcm, noise,
                                 record_stride=jcm.N, threads=threads)
            F[i, j] = stats.F[-1]
            err[i, j] = stats.stderr_F[-1]
    return SweepResult(p_values, de_values, F, err)
