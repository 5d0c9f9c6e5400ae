"""Integer-delay multipath channels, burst frames, and dechirped-gain algebra.

The channel is a sparse FIR filter c[k] = sum_i gains[i] * delta[k - d_i]
with the receiver synchronized on the first path (d_0 = 0). After
dechirping, each path appears as a phase-rotated gain at a known spectral
offset; the helpers here carry taps through that transformation.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass

import numpy as np

from .waveform import LoRaParams, chirp_samples

__all__ = [
    "MultipathChannel",
    "DechirpedGains",
    "Frame",
    "C1",
    "C2",
    "CHANNEL_ALIASES",
    "build_frame",
    "apply_channel",
    "add_awgn",
    "complex_noise",
    "dechirped_gain",
    "rotate_gains",
    "channel_coefficient",
    "channel_energy",
    "load_channel_file",
    "parse_channel",
]


@dataclass(frozen=True)
class MultipathChannel:
    """Static multipath profile: strictly increasing integer delays, delays[0] == 0."""

    delays: tuple[int, ...]
    gains: tuple[complex, ...]

    def __post_init__(self) -> None:
        delays = tuple(int(d) for d in self.delays)
        gains = tuple(complex(g) for g in self.gains)
        if len(delays) == 0 or len(delays) != len(gains):
            raise ValueError("need one gain per delay and at least one tap")
        if delays[0] != 0:
            raise ValueError(f"first delay must be 0 (synchronized first path), got {delays[0]}")
        if any(b <= a for a, b in zip(delays, delays[1:])):
            raise ValueError(f"delays must be strictly increasing, got {delays}")
        if gains[0] == 0:
            raise ValueError("first-path gain must be nonzero")
        object.__setattr__(self, "delays", delays)
        object.__setattr__(self, "gains", gains)

    @classmethod
    def from_taps(cls, taps) -> "MultipathChannel":
        """Build from (delay, gain) pairs given in any order."""
        pairs = sorted(((int(d), complex(g)) for d, g in taps), key=lambda t: t[0])
        return cls(tuple(d for d, _ in pairs), tuple(g for _, g in pairs))

    @property
    def n_paths(self) -> int:
        return len(self.delays)

    @property
    def k_max(self) -> int:
        return self.delays[-1]

    def energy(self) -> float:
        return float(sum(abs(g) ** 2 for g in self.gains))


C1 = MultipathChannel.from_taps([(0, 1.0), (2, 0.8), (3, 0.5)])
"""Three-path benchmark channel (energy 1.89)."""

C2 = MultipathChannel.from_taps([(0, 1.0), (5, 0.8)])
"""Two-path benchmark channel (energy 1.64)."""

CHANNEL_ALIASES = {"c1": C1, "c2": C2}


@dataclass(frozen=True)
class DechirpedGains:
    """Per-path complex gains as seen after dechirping, with their delays.

    The dechirp rotation is phase-only, so magnitudes always equal the raw
    tap magnitudes. Also the shape returned by the pilot estimator.
    """

    delays: tuple[int, ...]
    gains: np.ndarray

    def __post_init__(self) -> None:
        delays = tuple(int(d) for d in self.delays)
        gains = np.array(self.gains, dtype=np.complex128).reshape(-1)
        if len(delays) == 0 or len(delays) != gains.size:
            raise ValueError("need one gain per delay and at least one tap")
        if delays[0] != 0:
            raise ValueError(f"first delay must be 0, got {delays[0]}")
        if any(b <= a for a, b in zip(delays, delays[1:])):
            raise ValueError(f"delays must be strictly increasing, got {delays}")
        gains.setflags(write=False)
        object.__setattr__(self, "delays", delays)
        object.__setattr__(self, "gains", gains)

    @property
    def n_paths(self) -> int:
        return len(self.delays)

    @property
    def k_max(self) -> int:
        return self.delays[-1]

    def energy(self) -> float:
        return float(np.sum(np.abs(self.gains) ** 2))


@dataclass(frozen=True)
class Frame:
    """Pilot-prefixed symbol burst and its concatenated transmit samples."""

    n_p: int
    n_d: int
    symbols: np.ndarray
    samples: np.ndarray


def build_frame(params: LoRaParams, pilots: int, data) -> Frame:
    """Concatenate pilot chirps (symbol 0) and data chirps into one burst."""
    if pilots < 0:
        raise ValueError(f"pilot count must be >= 0, got {pilots}")
    data = np.asarray(data, dtype=np.int64).reshape(-1)
    if data.size and (data.min() < 0 or data.max() >= params.m):
        raise ValueError(f"data symbols must be in [0, {params.m})")
    symbols = np.concatenate([np.zeros(pilots, dtype=np.int64), data])
    m = params.m
    k = np.arange(m)
    base = chirp_samples(params, 0, k)
    # x_a[k] = x_0[k] * exp(2j*pi*a*k/M); reduce a*k mod M to keep phases exact
    rows = base[None, :] * np.exp(2j * np.pi * (np.outer(symbols, k) % m) / m)
    return Frame(int(pilots), int(data.size), symbols, rows.reshape(-1))


def apply_channel(params: LoRaParams, frame, ch: MultipathChannel) -> np.ndarray:
    """Exact linear convolution with the channel taps, truncated to the input length.

    A burst starts from silence, so the opening samples carry partial echo
    energy; inside the burst the first k_max samples of each symbol window
    inherit energy from the previous symbol. Accepts a Frame or a raw
    complex sample vector.
    """
    if ch.k_max >= params.m:
        raise ValueError(f"max delay {ch.k_max} must be < M={params.m}")
    s = np.asarray(getattr(frame, "samples", frame), dtype=np.complex128)
    out = np.zeros_like(s)
    for d, g in zip(ch.delays, ch.gains):
        if d == 0:
            out += g * s
        else:
            out[d:] += g * s[: s.size - d]
    return out


def complex_noise(shape, sigma2: float, rng: np.random.Generator) -> np.ndarray:
    """Circular complex Gaussian samples with total per-sample variance sigma2."""
    if sigma2 < 0:
        raise ValueError(f"noise variance must be >= 0, got {sigma2}")
    scale = math.sqrt(sigma2 / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def add_awgn(samples, sigma2: float, rng: np.random.Generator) -> np.ndarray:
    """Return samples plus white circular complex Gaussian noise."""
    samples = np.asarray(samples, dtype=np.complex128)
    if sigma2 == 0:
        return samples.copy()
    return samples + complex_noise(samples.shape, sigma2, rng)


def dechirped_gain(params: LoRaParams, ch: MultipathChannel) -> DechirpedGains:
    """Rotate raw tap gains into the dechirped domain: gain_i * x_0[-d_i]."""
    rot = chirp_samples(params, 0, -np.asarray(ch.delays, dtype=np.float64))
    return DechirpedGains(ch.delays, np.asarray(ch.gains) * rot)


def rotate_gains(params: LoRaParams, g: DechirpedGains, b: int) -> DechirpedGains:
    """Gains as seen under symbol hypothesis b: extra phase -2*pi*d_i*b/M per tap."""
    d = np.asarray(g.delays, dtype=np.int64)
    phase = np.exp(-2j * np.pi * ((d * int(b)) % params.m) / params.m)
    return DechirpedGains(g.delays, g.gains * phase)


def channel_coefficient(params: LoRaParams, g: DechirpedGains, b: int) -> np.ndarray:
    """Length-M multiplicative channel seen by the hypothesis-b matched filter.

    Equals the DFT of the zero-padded, hypothesis-rotated gain vector.
    """
    if g.k_max >= params.m:
        raise ValueError(f"max delay {g.k_max} must be < M={params.m}")
    gb = rotate_gains(params, g, b)
    padded = np.zeros(params.m, dtype=np.complex128)
    padded[np.asarray(gb.delays)] = gb.gains
    return np.fft.fft(padded)


def channel_energy(taps) -> float:
    """Sum of squared tap magnitudes (MultipathChannel or DechirpedGains)."""
    return taps.energy()


def load_channel_file(path) -> MultipathChannel:
    """Read taps from a CSV file with header delay,gain_re,gain_im."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        need = {"delay", "gain_re", "gain_im"}
        if reader.fieldnames is None or not need.issubset(set(reader.fieldnames)):
            raise ValueError(f"channel file {path} needs columns delay,gain_re,gain_im")
        taps = [
            (int(row["delay"]), float(row["gain_re"]) + 1j * float(row["gain_im"]))
            for row in reader
        ]
    if not taps:
        raise ValueError(f"channel file {path} has no taps")
    return MultipathChannel.from_taps(taps)


def parse_channel(spec) -> MultipathChannel:
    """Resolve a channel argument: alias, inline taps, file path, or channel object.

    Inline syntax is comma-separated delay:gain pairs with complex-literal
    gains, e.g. "0:1,2:0.8,3:0.5" or "0:1,5:0.4+0.3j".
    """
    if isinstance(spec, MultipathChannel):
        return spec
    text = str(spec).strip()
    alias = CHANNEL_ALIASES.get(text.lower())
    if alias is not None:
        return alias
    if ":" in text:
        taps = []
        for part in text.split(","):
            try:
                delay_s, gain_s = part.split(":")
                taps.append((int(delay_s), complex(gain_s.strip())))
            except ValueError as exc:
                raise ValueError(f"bad inline channel tap {part!r}: {exc}") from None
        return MultipathChannel.from_taps(taps)
    if os.path.exists(text):
        return load_channel_file(text)
    raise ValueError(
        f"channel {text!r} is not an alias ({', '.join(sorted(CHANNEL_ALIASES))}), "
        "an inline tap list, or an existing file"
    )
