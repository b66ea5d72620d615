"""State vectors on the truncated atom-photon ladder.

The Hilbert space is a two-level atom tensored with a photon mode cut off
at photon number ``K``.  Amplitudes are stored in a single complex array of
length ``2*(K+1)`` with the ground-atom block first::

    [(g,0), (g,1), ..., (g,K), (e,0), (e,1), ..., (e,K)]

Atom convention: ``|e> = (1,0)^T``, ``|g> = (0,1)^T``, so ``sigma_z|e> = +|e>``.
Energies are stored throughout as angular frequencies (rad/s); hbar never
appears explicitly.

Besides the bare basis this module provides the coupled (dressed) basis

    |g,0>,   |n,+-> = (|e,n> +- |g,n+1>) / sqrt(2)   for n = 0..K-1,

which diagonalizes the resonant atom-photon interaction.  The top bare level
|e,K> has no |g,K+1> partner inside the truncation; transforms report its
amplitude in a residual slot instead of failing.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

SQRT2 = np.sqrt(2.0)

#: presets accepted by :func:`make_initial_state`
PRESETS = ("g012", "0plus", "g1", "custom")


class DressedIndex(NamedTuple):
    """Label of one coupled-basis vector.

    kind is one of ``"ground0"`` (the uncoupled |g,0>), ``"plus"`` /
    ``"minus"`` (the pair built on |e,n> and |g,n+1>), or ``"top"`` (the
    orphaned |e,K> amplitude).  ``n`` is meaningful for plus/minus only.
    """

    kind: str
    n: int = 0


class BlochVector(NamedTuple):
    Sx: float
    Sy: float
    Sz: float

    def norm_sq(self) -> float:
        return self.Sx**2 + self.Sy**2 + self.Sz**2


@dataclass(frozen=True)
class StateVector:
    """Complex amplitudes over the truncated bare basis.

    ``amplitudes[k]`` is the |g,k> amplitude and ``amplitudes[K+1+k]`` the
    |e,k> amplitude, k = 0..K.
    """

    amplitudes: np.ndarray
    K: int

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=np.complex128)
        if amp.shape != (2 * (self.K + 1),):
            raise ValueError(
                f"amplitude array has length {amp.shape}, expected {2 * (self.K + 1)}"
            )
        object.__setattr__(self, "amplitudes", amp)

    @property
    def g(self) -> np.ndarray:
        """View of the |g,k> block, k = 0..K."""
        return self.amplitudes[: self.K + 1]

    @property
    def e(self) -> np.ndarray:
        """View of the |e,k> block, k = 0..K."""
        return self.amplitudes[self.K + 1 :]

    def norm_sq(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)


def from_blocks(g: np.ndarray, e: np.ndarray, K: int) -> StateVector:
    """Assemble a StateVector from separate g/e amplitude blocks."""
    return StateVector(np.concatenate([g, e]), K)


def basis_state(atom: str, k: int, K: int) -> StateVector:
    """Unit vector |atom,k> with atom in {"g","e"} and 0 <= k <= K."""
    if atom not in ("g", "e") or not 0 <= k <= K:
        raise ValueError(f"no basis vector |{atom},{k}> with truncation K={K}")
    amp = np.zeros(2 * (K + 1), dtype=np.complex128)
    amp[k if atom == "g" else K + 1 + k] = 1.0
    return StateVector(amp, K)


def make_initial_state(
    preset: str, K: int, amplitudes: Sequence[complex] | None = None
) -> StateVector:
    """Build one of the named unit-norm initial states.

    Presets: ``g012`` = (|g,0>+|g,1>+|g,2>)/sqrt(3); ``0plus`` = the lowest
    coupled pair (|e,0>+|g,1>)/sqrt(2); ``g1`` = |g,1>; ``custom`` takes an
    explicit amplitude list of length 2*(K+1), which is normalized.
    """
    if preset not in PRESETS:
        raise ValueError(f"unknown preset {preset!r}; expected one of {PRESETS}")
    if K < 2:
        raise ValueError(f"presets require K >= 2 (got K={K})")
    amp = np.zeros(2 * (K + 1), dtype=np.complex128)
    if preset == "g012":
        amp[0] = amp[1] = amp[2] = 1.0 / np.sqrt(3.0)
    elif preset == "0plus":
        amp[1] = 1.0 / SQRT2          # |g,1>
        amp[K + 1] = 1.0 / SQRT2      # |e,0>
    elif preset == "g1":
        amp[1] = 1.0
    else:
        if amplitudes is None:
            raise ValueError("preset 'custom' requires an amplitude list")
        amp = np.asarray(amplitudes, dtype=np.complex128)
        if amp.shape != (2 * (K + 1),):
            raise ValueError(
                f"custom amplitudes have length {amp.size}, expected {2 * (K + 1)}"
            )
        nrm = np.linalg.norm(amp)
        if nrm < 1e-300:
            raise ValueError("custom amplitudes are not normalizable (zero vector)")
        amp = amp / nrm
    return StateVector(amp, K)


def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugate-linear in the first argument."""
    if a.K != b.K:
        raise ValueError(f"truncation mismatch: K={a.K} vs K={b.K}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def bare_to_dressed(s: StateVector) -> dict[DressedIndex, complex]:
    """Expand a state in the coupled basis.

    Returns the coefficient map {ground0, plus(n), minus(n) for n=0..K-1,
    top}; the ``top`` entry carries the orphaned |e,K> amplitude unchanged.
    """
    K = s.K
    coeffs: dict[DressedIndex, complex] = {DressedIndex("ground0"): complex(s.g[0])}
    cp = (s.e[:-1] + s.g[1:]) / SQRT2
    cm = (s.e[:-1] - s.g[1:]) / SQRT2
    for n in range(K):
        coeffs[DressedIndex("plus", n)] = complex(cp[n])
        coeffs[DressedIndex("minus", n)] = complex(cm[n])
    coeffs[DressedIndex("top")] = complex(s.e[-1])
    return coeffs


def dressed_to_bare(coeffs: dict[DressedIndex, complex], K: int) -> StateVector:
    """Inverse of :func:`bare_to_dressed`."""
    g = np.zeros(K + 1, dtype=np.complex128)
    e = np.zeros(K + 1, dtype=np.complex128)
    g[0] = coeffs.get(DressedIndex("ground0"), 0.0)
    e[-1] = coeffs.get(DressedIndex("top"), 0.0)
    for n in range(K):
        cp = coeffs.get(DressedIndex("plus", n), 0.0)
        cm = coeffs.get(DressedIndex("minus", n), 0.0)
        e[n] += (cp + cm) / SQRT2
        g[n + 1] += (cp - cm) / SQRT2
    return from_blocks(g, e, K)


def reduced_atom_density(s: StateVector) -> np.ndarray:
    """Trace out the photon mode; 2x2 Hermitian matrix in (e,g) ordering.

    The trace equals the squared norm of the state, so for leaky
    (sub-normalized) states it is below one.
    """
    ee = np.vdot(s.e, s.e).real
    gg = np.vdot(s.g, s.g).real
    eg = np.vdot(s.g, s.e)  # sum_k e_k * conj(g_k)
    return np.array([[ee, eg], [np.conj(eg), gg]], dtype=np.complex128)


def bloch_from_density(rho: np.ndarray) -> BlochVector:
    """Bloch vector S with rho = (I + S.sigma)/2, renormalized by the trace.

    A trace slightly below one (photon-truncation leakage) is divided out;
    the deficit itself is tracked by callers via the squared norm.
    """
    rho = np.asarray(rho)
    tr = rho[0, 0].real + rho[1, 1].real
    if tr <= 0.0:
        raise ValueError("density matrix has non-positive trace")
    sx = 2.0 * rho[0, 1].real / tr
    sy = -2.0 * rho[0, 1].imag / tr
    sz = (rho[0, 0].real - rho[1, 1].real) / tr
    return BlochVector(sx, sy, sz)


def bloch_of_state(s: StateVector) -> BlochVector:
    """Convenience composition: atom Bloch vector of a pure joint state."""
    return bloch_from_density(reduced_atom_density(s))
