"""Symbol detectors for multipath LoRa reception.

Two equivalent families are provided. The matched-filter (mf) route
multiplies the dechirped window by the conjugate channel coefficient of
each hypothesis and reads a single DFT bin; the tap-combining (rake)
route computes one spectrum and sums conjugate-weighted shifted bins.
Both evaluate the same statistic, and candidate variants restrict the
hypothesis search to a few high-magnitude bins. The module also holds
the genie-aided ideal detector, the per-symbol interference indicators,
and a pilot-correlation baseline (tdel) that needs no gain estimates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import DechirpedGains, channel_coefficient, dechirped_gain, rotate_gains
from .waveform import LoRaParams

__all__ = [
    "CandidateSet",
    "CorrelationTable",
    "DetectionStatistic",
    "auto_cross_correlation",
    "mf_statistic",
    "rake_statistic",
    "mf_filter_bank",
    "ideal_mf_detect",
    "detect",
    "select_candidates_fixed",
    "select_candidates_threshold",
    "delta_indicator",
    "tdel_detect",
]


@dataclass(frozen=True)
class CandidateSet:
    """Hypothesis bins to test, with a record of how they were chosen."""

    indices: np.ndarray
    selection_mode: str
    degenerate: bool = False

    def __post_init__(self) -> None:
        idx = np.asarray(self.indices, dtype=np.int64).reshape(-1)
        if idx.size == 0:
            raise ValueError("candidate set must be nonempty")
        if idx.min() < 0:
            raise ValueError("candidate indices must be nonnegative")
        if np.unique(idx).size != idx.size:
            raise ValueError("candidate indices must be unique")
        idx.setflags(write=False)
        object.__setattr__(self, "indices", idx)

    @classmethod
    def full(cls, m: int) -> "CandidateSet":
        return cls(np.arange(m, dtype=np.int64), "full")

    @property
    def n_c(self) -> int:
        return int(self.indices.size)


@dataclass(frozen=True)
class CorrelationTable:
    """Tap cross-correlation values on the signed lag grid [-l_max, l_max]."""

    lags: np.ndarray
    values: np.ndarray

    @property
    def l_max(self) -> int:
        return int(self.lags[-1])

    def at(self, lag: int) -> complex:
        """Value at a signed lag; exactly zero outside the stored range."""
        if -self.l_max <= lag <= self.l_max:
            return complex(self.values[lag + self.l_max])
        return 0j


@dataclass(frozen=True)
class DetectionStatistic:
    """Per-candidate statistics and the winning symbol."""

    symbol: int
    candidates: CandidateSet
    values: np.ndarray
    scores: np.ndarray


def _padded_taps(g: DechirpedGains) -> np.ndarray:
    v = np.zeros(g.k_max + 1, dtype=np.complex128)
    v[np.asarray(g.delays)] = g.gains
    return v


def auto_cross_correlation(
    params: LoRaParams, g: DechirpedGains, a: int, b: int
) -> CorrelationTable:
    """Correlate the hypothesis-a and hypothesis-b rotated tap vectors.

    Lag l holds sum_m v_a[m] * conj(v_b[m - l]) over the zero-padded tap
    vectors; for a == b, lag 0 is the channel energy.
    """
    va = _padded_taps(rotate_gains(params, g, a))
    vb = _padded_taps(rotate_gains(params, g, b))
    values = np.convolve(va, np.conj(vb[::-1]))
    l_max = va.size - 1
    return CorrelationTable(np.arange(-l_max, l_max + 1), values)


def mf_statistic(params: LoRaParams, r_dechirped, g: DechirpedGains, b: int) -> complex:
    """Matched-filter statistic for hypothesis b.

    Multiplies the dechirped window by conj(C_b) and evaluates the DFT at
    bin b only; no full transform is taken.
    """
    r = np.asarray(r_dechirped)
    cb = channel_coefficient(params, g, b)
    k = np.arange(params.m)
    twiddle = np.exp(-2j * np.pi * ((k * int(b)) % params.m) / params.m)
    return complex(np.sum(np.conj(cb) * r * twiddle))


def rake_statistic(params: LoRaParams, spectrum, g: DechirpedGains, b: int) -> complex:
    """Tap-combining statistic: conjugated rotated gains times shifted spectrum bins."""
    spec = np.asarray(spectrum)
    gb = rotate_gains(params, g, b)
    bins = (int(b) - np.asarray(gb.delays)) % params.m
    return complex(np.sum(np.conj(gb.gains) * spec[bins]))


def mf_filter_bank(params: LoRaParams, g: DechirpedGains) -> np.ndarray:
    """M x M matrix whose row b turns a dechirped window into the hypothesis-b statistic.

    Row b is conj(C_b[k]) * exp(-2j*pi*b*k/M), so scores for a batch of
    windows are simply windows @ bank.T. Also the factor whose Gram matrix
    is the statistic-noise covariance (see fastsim).
    """
    m = params.m
    grid = np.arange(m)
    h = channel_coefficient(params, g, 0)
    cmat = h[(grid[:, None] + grid[None, :]) % m]
    twiddle = np.exp(-2j * np.pi * ((grid[:, None] * grid[None, :]) % m) / m)
    return np.conj(cmat) * twiddle


def ideal_mf_detect(params: LoRaParams, r_dechirped, g: DechirpedGains, true_a: int) -> int:
    """Genie-aided bound: filter with the true symbol's coefficient, argmax of Re."""
    ca = channel_coefficient(params, g, true_a)
    spectrum = np.fft.fft(np.conj(ca) * np.asarray(r_dechirped))
    return int(np.argmax(spectrum.real))


def detect(
    params: LoRaParams, received, g: DechirpedGains, cand: CandidateSet, kind: str
) -> DetectionStatistic:
    """Run the matched-filter or tap-combining detector over a candidate set.

    kind "mf" expects the dechirped time window; kind "rake" expects its
    DFT, computed once and shared by all candidates. The winner is the
    candidate with the largest real part; ties resolve to the lowest
    symbol index.
    """
    idx = cand.indices
    if kind == "mf":
        values = np.array([mf_statistic(params, received, g, int(b)) for b in idx])
    elif kind == "rake":
        values = np.array([rake_statistic(params, received, g, int(b)) for b in idx])
    else:
        raise ValueError(f"unknown detector kind {kind!r}")
    scores = values.real
    symbol = int(idx[scores == scores.max()].min())
    return DetectionStatistic(symbol, cand, values, scores)


def select_candidates_fixed(spectrum, n_c: int) -> CandidateSet:
    """The n_c highest-magnitude bins, magnitude-descending, ties to the lower index."""
    mag = np.abs(np.asarray(spectrum))
    if not 1 <= n_c <= mag.size:
        raise ValueError(f"n_c must be in [1, {mag.size}], got {n_c}")
    order = np.argsort(-mag, kind="stable")
    return CandidateSet(order[:n_c].astype(np.int64), f"fixed({n_c})")


def select_candidates_threshold(spectrum, rho_c: float) -> CandidateSet:
    """All bins whose magnitude strictly exceeds rho_c times the peak magnitude.

    An all-zero spectrum has no qualifying bin; the set then degenerates
    to {0} and is flagged.
    """
    if not 0.0 <= rho_c < 1.0:
        raise ValueError(f"rho_c must be in [0, 1), got {rho_c}")
    mag = np.abs(np.asarray(spectrum))
    keep = np.flatnonzero(mag > rho_c * float(mag.max()))
    if keep.size == 0:
        return CandidateSet(np.array([0], dtype=np.int64), f"threshold({rho_c})", degenerate=True)
    return CandidateSet(keep.astype(np.int64), f"threshold({rho_c})")


_DELTA_VARIANTS = ("coh", "noncoh", "ideal_mf", "mf")


def delta_indicator(params: LoRaParams, ch, a: int, variant: str) -> float:
    """Largest parasitic-peak score relative to the peak of interest for symbol a.

    Variants "coh"/"noncoh" rate the legacy detectors (echo gains against
    the first-path gain); "ideal_mf"/"mf" rate the matched-filter spectra
    via the tap correlation table. The maximum runs over the lags where
    the correlation can be nonzero (pairwise delay differences) and may be
    negative for the real-part variants; a single-path channel gives 0.
    """
    if variant not in _DELTA_VARIANTS:
        raise ValueError(f"variant must be one of {_DELTA_VARIANTS}, got {variant!r}")
    g = dechirped_gain(params, ch)
    a0 = complex(np.asarray(ch.gains).reshape(-1)[0])
    if variant in ("coh", "noncoh"):
        if g.n_paths == 1:
            return 0.0
        if variant == "noncoh":
            # rotations are phase-only, so echo magnitudes equal the raw tap
            # magnitudes; evaluating them directly keeps the ratio exact
            mags = np.abs(np.asarray(ch.gains, dtype=np.complex128).reshape(-1))
            return float(np.max(mags[1:]) / mags[0])
        echoes = rotate_gains(params, g, a).gains[1:]
        # align the first-path phase before taking real parts
        return float(np.max((echoes * np.conj(a0) / abs(a0)).real) / abs(a0))
    delays = g.delays
    lags = sorted({di - dj for di in delays for dj in delays} - {0})
    if not lags:
        return 0.0
    denom = auto_cross_correlation(params, g, a, a).at(0).real
    if variant == "ideal_mf":
        table = auto_cross_correlation(params, g, a, a)
        return max(table.at(l).real for l in lags) / denom
    # mf: each parasitic peak is scored by the hypothesis b = a - l at its own bin
    best = -np.inf
    for l in lags:
        b = (a - l) % params.m
        best = max(best, auto_cross_correlation(params, g, a, b).at(l).real)
    return best / denom


def tdel_detect(avg_pilot_spectrum, data_spectrum, rho_tdel: float):
    """Threshold-and-correlate detector on magnitude spectra.

    The averaged pilot magnitude profile is thresholded at rho_tdel times
    its peak (bins strictly below the threshold are zeroed; if that would
    zero every bin, the single peak bin is kept). The profile is then
    cyclically cross-correlated with the data magnitude spectrum and the
    argmax shift is the symbol estimate. Magnitude-only, so global phase
    never matters. Accepts (..., M) batches of data spectra.
    """
    if rho_tdel <= 0:
        raise ValueError(f"rho_tdel must be > 0, got {rho_tdel}")
    p = np.abs(np.asarray(avg_pilot_spectrum, dtype=np.complex128).reshape(-1))
    kept = np.where(p >= rho_tdel * float(p.max()), p, 0.0)
    if not kept.any() and p.any():
        # threshold above the peak: fall back to the peak bin alone
        kept = np.zeros_like(p)
        kept[int(np.argmax(p))] = float(p.max())
    q = np.abs(np.asarray(data_spectrum))
    corr = np.fft.ifft(np.conj(np.fft.fft(kept)) * np.fft.fft(q, axis=-1), axis=-1).real
    dec = np.argmax(corr, axis=-1)
    return int(dec) if np.ndim(dec) == 0 else dec
