"""Three-branch random-walk field and its sample statistics.

The field E(t) starts at zero and once per time step either jumps down by
delta_e (probability p), stays (probability 1-2p), or jumps up by delta_e
(probability p), driven by one uniform draw r in [0,1) per step:

    r < p        ->  E - delta_e
    p <= r < 1-p ->  E
    r >= 1-p     ->  E + delta_e

The walk lives on the integer lattice E = level * delta_e, so paths are
stored as integer levels.  Endpoint statistics follow the random-walk laws
var = 2*delta_e^2*p*n and <E^4> -> 12*delta_e^4*p^2*n^2, and for n >> 1/(2p)
the endpoint distribution approaches a centered normal.

Every sample owns an independent, reproducible generator derived from
(master_seed, stream_id); ensembles are therefore deterministic and
order-independent.  Moment accumulation uses exact compensated summation
(math.fsum) because fourth moments reach 1e16 at production scale.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


@dataclass(frozen=True)
class NoiseParams:
    """Jump probability, step amplitude (rad/s), seed and sample count."""

    p: float
    delta_e: float
    master_seed: int = 1
    M: int = 1

    def __post_init__(self):
        if not 0.0 <= self.p <= 0.5:
            raise ValueError(f"jump probability p must lie in [0, 1/2] (got {self.p})")
        if self.delta_e < 0.0:
            raise ValueError(f"step amplitude delta_e must be >= 0 (got {self.delta_e})")
        if self.M < 1:
            raise ValueError(f"sample count M must be >= 1 (got {self.M})")


def sample_stream(master_seed: int, stream_id: int) -> np.random.Generator:
    """Independent PCG64 generator for one sample, keyed on (seed, id)."""
    return np.random.default_rng(np.random.SeedSequence((master_seed, stream_id)))


def next_field(E: float, r: float, params: NoiseParams) -> float:
    """One field update from a uniform draw r in [0,1)."""
    if not 0.0 <= r < 1.0:
        raise ValueError(f"uniform draw must lie in [0, 1) (got {r})")
    if r < params.p:
        return E - params.delta_e
    if r >= 1.0 - params.p:
        return E + params.delta_e
    return E


@dataclass(frozen=True)
class FieldPath:
    """One realization E(0), E(dt), ..., E(n*dt) on the delta_e lattice."""

    levels: np.ndarray  # int32, length n+1, levels[0] == 0
    delta_e: float

    @property
    def values(self) -> np.ndarray:
        """Field values in rad/s."""
        return self.levels * self.delta_e

    def __len__(self) -> int:
        return int(self.levels.size)


def increments_from_draws(draws: np.ndarray, p: float) -> np.ndarray:
    """Map uniform draws to walk increments in {-1, 0, +1} (int32)."""
    up = (draws >= 1.0 - p).astype(np.int32)
    up -= draws < p
    return up


def generate_path(n: int, params: NoiseParams, stream_id: int) -> FieldPath:
    """Random-walk path of n steps, a pure function of (master_seed, stream_id)."""
    if n < 0:
        raise ValueError(f"step count must be >= 0 (got {n})")
    levels = np.zeros(n + 1, dtype=np.int32)
    if n > 0:
        draws = sample_stream(params.master_seed, stream_id).random(n)
        np.cumsum(increments_from_draws(draws, params.p), out=levels[1:])
    return FieldPath(levels, params.delta_e)


def endpoint_levels(
    params: NoiseParams,
    checkpoints: Sequence[int],
    stream_offset: int = 0,
    chunk: int = 4096,
    block: int = 8192,
) -> dict[int, np.ndarray]:
    """Walk levels of all M samples at each checkpoint step.

    Streams the M x max(checkpoints) increment field in (chunk, block)
    tiles so production sizes (M=1e5, n=1e5) never materialize full paths.
    Returns {n: int32 array of M levels}.
    """
    checkpoints = sorted(set(int(c) for c in checkpoints))
    if not checkpoints or checkpoints[0] < 0:
        raise ValueError("checkpoints must be non-negative step indices")
    n_max = checkpoints[-1]
    out = {c: np.zeros(params.M, dtype=np.int32) for c in checkpoints}
    draws = np.empty((min(chunk, params.M), block), dtype=np.float64)
    for lo in range(0, params.M, chunk):
        hi = min(lo + chunk, params.M)
        c_sz = hi - lo
        gens = [sample_stream(params.master_seed, stream_offset + i) for i in range(lo, hi)]
        level = np.zeros(c_sz, dtype=np.int32)
        n = 0
        while n < n_max:
            b = min(block, n_max - n)
            for i in range(c_sz):
                gens[i].random(out=draws[i, :b])
            levels = np.cumsum(increments_from_draws(draws[:c_sz, :b], params.p),
                               axis=1, dtype=np.int32)
            levels += level[:, None]
            level = levels[:, -1].copy()
            for c in checkpoints:
                if n < c <= n + b:
                    out[c][lo:hi] = levels[:, c - n - 1]
            n += b
        for c in checkpoints:
            if c == 0:
                out[c][lo:hi] = 0
    return out


@dataclass(frozen=True)
class MomentStats:
    """Sample moments of the endpoint field value with standard errors."""

    mean: float
    m2: float
    m4: float
    stderr_mean: float
    stderr2: float
    stderr4: float
    n_samples: int


def moments_of_values(values: np.ndarray) -> MomentStats:
    m = values.size
    if m == 0:
        raise ValueError("no samples")
    v = [float(x) for x in values]
    mean = math.fsum(v) / m
    v2 = [x * x for x in v]
    v4 = [x * x for x in v2]
    m2 = math.fsum(v2) / m
    m4 = math.fsum(v4) / m
    m8 = math.fsum(x * x for x in v4) / m
    var1 = max(m2 - mean * mean, 0.0)
    var2 = max(m4 - m2 * m2, 0.0)
    var4 = max(m8 - m4 * m4, 0.0)
    rt = math.sqrt(m)
    return MomentStats(mean, m2, m4,
                       math.sqrt(var1) / rt, math.sqrt(var2) / rt, math.sqrt(var4) / rt,
                       m)


def path_moment_stats(paths: Iterable[FieldPath], n: int) -> MomentStats:
    """Mean, second and fourth moment of {E_m(n*dt)} over a path collection."""
    vals = []
    for path in paths:
        if len(path) < n + 1:
            raise ValueError(f"path of length {len(path)} has no step {n}")
        vals.append(path.levels[n] * path.delta_e)
    return moments_of_values(np.asarray(vals, dtype=np.float64))


def moment_stats_at(params: NoiseParams, checkpoints: Sequence[int],
                    stream_offset: int = 0) -> dict[int, MomentStats]:
    """Endpoint moments of M fresh paths at each checkpoint (streaming)."""
    levels = endpoint_levels(params, checkpoints, stream_offset=stream_offset)
    return {n: moments_of_values(lv * params.delta_e) for n, lv in levels.items()}


def variance_theory(params: NoiseParams, n: int) -> float:
    """Random-walk law var E(n*dt) = 2*delta_e^2*p*n."""
    return 2.0 * params.delta_e**2 * params.p * n


def fourth_moment_theory(params: NoiseParams, n: int) -> float:
    """Leading-order fourth moment 12*delta_e^4*p^2*n^2."""
    return 12.0 * params.delta_e**4 * params.p**2 * n**2


@dataclass(frozen=True)
class HistogramResult:
    """Endpoint-value histogram with its normal-law prediction.

    ``expected[i]`` is M * bin_width * P(centers[i]) for the centered normal
    of variance 2*delta_e^2*p*n.  ``degenerate`` flags the p = 0 case where
    the distribution is a single spike and no Gaussian comparison is made.
    """

    centers: np.ndarray
    counts: np.ndarray
    expected: np.ndarray
    n_step: int
    n_samples: int
    bin_width: float
    degenerate: bool


def _histogram_of_levels(levels: np.ndarray, params: NoiseParams, n: int,
                         bin_factor: int = 1) -> HistogramResult:
    m = levels.size
    if bin_factor < 1:
        raise ValueError("bin width must be a positive multiple of delta_e")
    # aggregate bin_factor adjacent lattice sites; centers stay on the lattice
    idx = np.floor_divide(levels + (bin_factor // 2), bin_factor)
    lo, hi = int(idx.min()), int(idx.max())
    counts = np.bincount(idx - lo, minlength=hi - lo + 1)
    centers = (np.arange(lo, hi + 1) * bin_factor) * params.delta_e
    width = bin_factor * params.delta_e
    if params.p == 0.0:
        return HistogramResult(centers, counts, np.zeros_like(centers),
                               n, m, width, degenerate=True)
    sigma2 = variance_theory(params, n)
    gauss = np.exp(-centers**2 / (2.0 * sigma2)) / np.sqrt(2.0 * np.pi * sigma2)
    return HistogramResult(centers, counts, m * width * gauss, n, m, width,
                           degenerate=False)


def normality_histogram(paths: Iterable[FieldPath], n: int, params: NoiseParams,
                        bin_width: float | None = None) -> HistogramResult:
    """Histogram of {E_m(n*dt)} with expected normal counts per bin.

    Bins are centered on multiples of the lattice spacing delta_e (the
    default bin width); wider bins must be integer multiples of it.  The
    comparison is meaningful for n >> 1/(2p).
    """
    levels = []
    for path in paths:
        if len(path) < n + 1:
            raise ValueError(f"path of length {len(path)} has no step {n}")
        levels.append(path.levels[n])
    if not levels:
        raise ValueError("no paths")
    return histogram_from_levels(np.asarray(levels, dtype=np.int64),
                                 params.delta_e, n, bin_width, params=params)


def histogram_from_levels(levels: np.ndarray, delta_e: float, n: int,
                          bin_width: float | None = None, p: float | None = None,
                          params: NoiseParams | None = None) -> HistogramResult:
    """Histogram directly from integer endpoint levels (streaming-friendly)."""
    if params is None:
        if p is None:
            raise ValueError("either params or p must be given")
        params = NoiseParams(p=p, delta_e=delta_e, M=max(levels.size, 1))
    if bin_width is None:
        bin_factor = 1
    else:
        bin_factor = int(round(bin_width / params.delta_e)) if params.delta_e > 0 else 1
        if bin_factor < 1 or abs(bin_factor * params.delta_e - bin_width) > 1e-9 * bin_width:
            raise ValueError("bin width must be a positive multiple of delta_e")
    return _histogram_of_levels(np.asarray(levels), params, n, bin_factor)


def reduced_chi2(hist: HistogramResult, min_expected: float = 10.0) -> tuple[float, int, float]:
    """(chi2, n_bins, chi2/n_bins) over bins with expected count >= threshold."""
    if hist.degenerate:
        raise ValueError("degenerate (p = 0) histogram has no Gaussian expectation")
    mask = hist.expected >= min_expected
    n_bins = int(mask.sum())
    if n_bins == 0:
        raise ValueError(f"no bins with expected count >= {min_expected}")
    chi2 = float(((hist.counts[mask] - hist.expected[mask]) ** 2 / hist.expected[mask]).sum())
    return chi2, n_bins, chi2 / n_bins
