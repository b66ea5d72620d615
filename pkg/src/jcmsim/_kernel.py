"""Compiled inner loop of the batched trajectory evolution.

One call advances a chunk of samples through a block of time steps.  Each
sample is fully independent (own row of the level array, own state), so the
parallel loop is race-free and results are bit-identical for any thread
count.  Trig of the noise rotation is read from lookup tables indexed by the
integer walk level; table entries are built from the same product
half_angle * level that a direct evaluation would use.
"""
import numpy as np
from numba import njit, prange


@njit(parallel=True, cache=True)
def evolve_block(g, e, levels, cos_tab, sin_tab, offset,
                 cos_pair, sin_pair, cos_top,
                 rec_pos, ref_g_conj, ref_e_conj, rec_out):
    """Advance states in place and write per-sample records.

    g, e           -- (C, K+1) complex128 state blocks, updated in place
    levels         -- (C, B) int32 walk levels E/delta_e for steps of the block
    cos_tab/sin_tab-- trig tables indexed by level + offset
    cos_pair/sin_pair/cos_top -- fixed ladder-step coefficients
    rec_pos        -- ascending in-block step indices to record (may be empty)
    ref_g_conj/ref_e_conj -- (R, K+1) conjugated reference amplitudes
    rec_out        -- (C, R, 5) output: fidelity, ee, gg, Re eg, Im eg
    """
    C = g.shape[0]
    B = levels.shape[1]
    kp1 = g.shape[1]
    R = rec_pos.shape[0]
    for i in prange(C):
        ri = 0
        for j in range(B):
            lv = levels[i, j]
            c = cos_tab[lv + offset]
            s = sin_tab[lv + offset]
            for k in range(kp1):
                gk = g[i, k]
                ek = e[i, k]
                g[i, k] = c * gk + s * ek
                e[i, k] = c * ek - s * gk
            for k in range(1, kp1):
                gk = g[i, k]
                ek = e[i, k - 1]
                g[i, k] = cos_pair[k - 1] * gk - 1j * (sin_pair[k - 1] * ek)
                e[i, k - 1] = -1j * (sin_pair[k - 1] * gk) + cos_pair[k - 1] * ek
            e[i, kp1 - 1] = cos_top * e[i, kp1 - 1]
            if ri < R and j == rec_pos[ri]:
                ov = 0.0 + 0.0j
                ee = 0.0
                gg = 0.0
                eg = 0.0 + 0.0j
                for k in range(kp1):
                    gk = g[i, k]
                    ek = e[i, k]
                    ov += ref_g_conj[ri, k] * gk + ref_e_conj[ri, k] * ek
                    ee += ek.real * ek.real + ek.imag * ek.imag
                    gg += gk.real * gk.real + gk.imag * gk.imag
                    eg += ek * np.conj(gk)
                rec_out[i, ri, 0] = ov.real * ov.real + ov.imag * ov.imag
                rec_out[i, ri, 1] = ee
                rec_out[i, ri, 2] = gg
                rec_out[i, ri, 3] = eg.real
                rec_out[i, ri, 4] = eg.imag
                ri += 1
