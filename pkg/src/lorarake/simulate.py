"""Monte Carlo experiment engine: SER sweeps, indicator reports, cost
tables, estimation studies, and candidate-count sweeps.

Each trial builds one pilot-prefixed frame, passes it through the exact
channel convolution, adds one shared noise realization, and runs every
configured detector on the same data, so detector comparisons are
paired. Trials are independent Monte Carlo units with their own RNG
substream keyed by (master_seed, trial, Eb/N0), which makes results
reproducible for any worker count and lets separate runs share noise
point by point.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .channel import (
    MultipathChannel,
    apply_channel,
    build_frame,
    complex_noise,
    dechirped_gain,
    DechirpedGains,
    parse_channel,
)
from .complexity import OpCount, complexity_ratio, op_count
from .detectors import mf_filter_bank, tdel_detect
from .estimator import EstimatorConfig, detect_paths
from .waveform import LoRaParams, dechirp, noise_variance, snr_ebn0_convert

__all__ = [
    "ConfigError",
    "SimConfig",
    "SerPoint",
    "DeltaRow",
    "ComplexityRow",
    "StudyRow",
    "CandSweepRow",
    "DETECTOR_IDS",
    "run_ser_sweep",
    "run_delta_report",
    "run_complexity_report",
    "run_estimation_study",
    "run_candidate_sweep",
]

DETECTOR_IDS = (
    "noncoh",
    "coh",
    "coh-awgn",
    "ideal-mf",
    "mf",
    "cand-mf",
    "rake",
    "cand-rake",
    "tdel",
)

# detectors whose per-symbol cost formulas exist; everything else reports 0
_OP_KINDS = {"mf": "mf", "rake": "rake", "cand-mf": "cand_mf", "cand-rake": "cand_rake"}

_CAND_DETECTORS = ("cand-mf", "cand-rake")

_DEFAULT_RHO_C = 0.3


class ConfigError(ValueError):
    """Invalid simulation configuration; names the offending field."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field_name = field_name


@dataclass(frozen=True)
class SimConfig:
    """Everything one Monte Carlo sweep needs; resolve() validates."""

    sf: int = 7
    channel: object = "c2"
    detectors: tuple[str, ...] = ("noncoh", "coh", "rake")
    ebn0_db: tuple[float, ...] = (-4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0, 4.0)
    n_trials: int = 100
    n_d: int = 1000
    n_p: int = 6
    rho_p: float = 0.4
    k_max: int = 10
    known_k: bool = False
    csir: str = "perfect"
    forced_khat: tuple[int, ...] | None = None
    rho_c: float | None = None
    n_c: int | None = None
    rho_tdel: float = 0.2
    master_seed: int = 0
    workers: int = 1

    _FIELD_NAMES = (
        "sf", "channel", "detectors", "ebn0_db", "n_trials", "n_d", "n_p",
        "rho_p", "k_max", "known_k", "csir", "forced_khat", "rho_c", "n_c",
        "rho_tdel", "master_seed", "workers",
    )

    @classmethod
    def from_dict(cls, values: dict) -> "SimConfig":
        """Build from a plain mapping, rejecting unknown keys."""
        unknown = set(values) - set(cls._FIELD_NAMES)
        if unknown:
            raise ConfigError(sorted(unknown)[0], "unknown config field")
        clean = dict(values)
        for key in ("detectors", "ebn0_db", "forced_khat"):
            if clean.get(key) is not None:
                clean[key] = tuple(clean[key])
        return cls(**clean)

    def candidate_rule(self) -> tuple[str, float] | None:
        """("fixed", n_c) or ("threshold", rho_c) when a candidate detector runs."""
        if not any(d in self.detectors for d in _CAND_DETECTORS):
            return None
        if self.n_c is not None:
            return ("fixed", self.n_c)
        return ("threshold", self.rho_c if self.rho_c is not None else _DEFAULT_RHO_C)

    def resolve(self) -> tuple[LoRaParams, MultipathChannel]:
        """Validate every field; return the parameter set and channel."""
        try:
            params = LoRaParams(self.sf)
        except ValueError as exc:
            raise ConfigError("sf", str(exc)) from None
        try:
            ch = parse_channel(self.channel)
        except ValueError as exc:
            raise ConfigError("channel", str(exc)) from None
        m = params.m
        if ch.k_max >= m:
            raise ConfigError("channel", f"max delay {ch.k_max} must be < M={m}")
        if not self.detectors:
            raise ConfigError("detectors", "need at least one detector")
        for det in self.detectors:
            if det not in DETECTOR_IDS:
                raise ConfigError("detectors", f"unknown detector {det!r}; choose from {DETECTOR_IDS}")
        if len(set(self.detectors)) != len(self.detectors):
            raise ConfigError("detectors", "duplicate detector ids")
        if not self.ebn0_db:
            raise ConfigError("ebn0_db", "need at least one Eb/N0 point")
        if any(not math.isfinite(e) for e in self.ebn0_db):
            raise ConfigError("ebn0_db", "Eb/N0 values must be finite")
        if self.n_trials < 1:
            raise ConfigError("n_trials", f"must be >= 1, got {self.n_trials}")
        if self.n_d < 1:
            raise ConfigError("n_d", f"must be >= 1, got {self.n_d}")
        if self.n_p < 0:
            raise ConfigError("n_p", f"must be >= 0, got {self.n_p}")
        if self.csir not in ("perfect", "estimated", "forced"):
            raise ConfigError("csir", f"must be perfect, estimated, or forced, got {self.csir!r}")
        needs_pilots = self.csir != "perfect" or "tdel" in self.detectors
        if needs_pilots and self.n_p < 1:
            raise ConfigError("n_p", "pilot symbols required for estimation or tdel")
        if not 0.0 < self.rho_p < 1.0:
            raise ConfigError("rho_p", f"must be in (0, 1), got {self.rho_p}")
        if not 1 <= self.k_max < m:
            raise ConfigError("k_max", f"must be in [1, {m}), got {self.k_max}")
        if self.csir == "forced":
            if not self.forced_khat:
                raise ConfigError("forced_khat", "required when csir is 'forced'")
            kh = self.forced_khat
            if kh[0] != 0 or any(b <= a for a, b in zip(kh, kh[1:])) or kh[-1] >= m:
                raise ConfigError(
                    "forced_khat", f"delays must start at 0, increase strictly, and stay < M={m}"
                )
        elif self.forced_khat is not None:
            raise ConfigError("forced_khat", "only valid when csir is 'forced'")
        if self.rho_c is not None and self.n_c is not None:
            raise ConfigError("rho_c", "give rho_c or n_c, not both")
        if self.rho_c is not None and not 0.0 < self.rho_c < 1.0:
            raise ConfigError("rho_c", f"must be in (0, 1), got {self.rho_c}")
        if self.n_c is not None and not 1 <= self.n_c <= m:
            raise ConfigError("n_c", f"must be in [1, {m}], got {self.n_c}")
        if not 0.0 < self.rho_tdel < 1.0:
            raise ConfigError("rho_tdel", f"must be in (0, 1), got {self.rho_tdel}")
        if self.master_seed < 0:
            raise ConfigError("master_seed", f"must be >= 0, got {self.master_seed}")
        if self.workers < 1:
            raise ConfigError("workers", f"must be >= 1, got {self.workers}")
        return params, ch


@dataclass(frozen=True)
class SerPoint:
    """One (detector, Eb/N0) row of a sweep."""

    detector: str
    ebn0_db: float
    errors: int
    symbols: int
    ser: float
    ci95: float
    nc_avg: float
    cmult: float
    cadd: float

    @classmethod
    def from_counts(cls, detector, ebn0_db, errors, symbols, nc_avg, cmult, cadd):
        ser = errors / symbols
        ci95 = 1.96 * math.sqrt(ser * (1.0 - ser) / symbols)
        return cls(detector, float(ebn0_db), int(errors), int(symbols), ser, ci95,
                   float(nc_avg), float(cmult), float(cadd))


# ---------------------------------------------------------------------------
# per-trial machinery
# ---------------------------------------------------------------------------


def _ebn0_stream_key(ebn0_db: float) -> int:
    # key the substream on the Eb/N0 value itself so different sweeps with
    # the same seed share noise at equal operating points
    return int(round(ebn0_db * 1000.0)) % (2**32)


def _trial_rng(master_seed: int, trial: int, ebn0_db: float) -> np.random.Generator:
    return np.random.default_rng([master_seed, trial, _ebn0_stream_key(ebn0_db)])


@dataclass
class _TrialData:
    data: np.ndarray
    data_dech: np.ndarray
    data_spec: np.ndarray
    pilot_avg: np.ndarray | None
    gains: DechirpedGains
    coh_ref: complex
    noise: np.ndarray
    frame_samples: np.ndarray


def _forced_gains(params: LoRaParams, avg: np.ndarray, khat: tuple[int, ...]) -> DechirpedGains:
    bins = [0 if k == 0 else params.m - k for k in khat]
    return DechirpedGains(tuple(khat), np.asarray(avg)[bins] / params.m)


def _trial_setup(params, ch, cfg, ebn0_db, trial) -> _TrialData:
    """Draw one frame and noise realization; estimate gains per the CSIR mode."""
    m = params.m
    rng = _trial_rng(cfg.master_seed, trial, ebn0_db)
    data = rng.integers(0, m, size=cfg.n_d)
    frame = build_frame(params, cfg.n_p, data)
    clean = apply_channel(params, frame, ch)
    sigma2 = noise_variance(snr_ebn0_convert(params, ebn0_db, "ebn0_to_snr"))
    noise = complex_noise(clean.shape, sigma2, rng)

    windows = (clean + noise).reshape(-1, m)
    dech = dechirp(params, windows)
    spectra = np.fft.fft(dech, axis=1)
    pilot_avg = spectra[: cfg.n_p].mean(axis=0) if cfg.n_p else None

    if cfg.csir == "perfect":
        gains = dechirped_gain(params, ch)
        coh_ref = complex(ch.gains[0])
    elif cfg.csir == "forced":
        gains = _forced_gains(params, pilot_avg, cfg.forced_khat)
        coh_ref = complex(gains.gains[0])
    else:
        est = EstimatorConfig(
            n_p=cfg.n_p,
            rho_p=cfg.rho_p,
            k_max=cfg.k_max,
            known_k=ch.n_paths if cfg.known_k else None,
        )
        gains = detect_paths(params, pilot_avg, est)
        coh_ref = complex(gains.gains[0])

    return _TrialData(
        data=data,
        data_dech=dech[cfg.n_p :],
        data_spec=spectra[cfg.n_p :],
        pilot_avg=pilot_avg,
        gains=gains,
        coh_ref=coh_ref,
        noise=noise,
        frame_samples=frame.samples,
    )


def _rake_scores(params: LoRaParams, data_spec: np.ndarray, g: DechirpedGains) -> np.ndarray:
    """Batched tap-combining scores: rows are symbols, columns tested bins."""
    m = params.m
    bgrid = np.arange(m)
    z = np.zeros(data_spec.shape, dtype=np.complex128)
    for d, gain in zip(g.delays, g.gains):
        phase = np.exp(2j * np.pi * ((d * bgrid) % m) / m)
        z += (np.conj(gain) * phase) * np.roll(data_spec, d, axis=1)
    return z.real


def _mf_scores(params: LoRaParams, data_dech: np.ndarray, g: DechirpedGains) -> np.ndarray:
    """Batched matched-filter scores via the filter bank (independent of the
    rake roll construction, so the two can cross-check each other)."""
    return (data_dech @ mf_filter_bank(params, g).T).real


def _ideal_scores(params: LoRaParams, data_dech: np.ndarray, g: DechirpedGains,
                  true_symbols: np.ndarray) -> np.ndarray:
    m = params.m
    from .channel import channel_coefficient  # local import avoids a cycle at module load

    h = channel_coefficient(params, g, 0)
    k = np.arange(m)
    crows = h[(true_symbols[:, None] + k[None, :]) % m]
    return np.fft.fft(np.conj(crows) * data_dech, axis=1).real


def _candidate_masks(mag: np.ndarray, rule: tuple[str, float]) -> np.ndarray:
    kind, val = rule
    if kind == "fixed":
        order = np.argsort(-mag, axis=1, kind="stable")
        mask = np.zeros(mag.shape, dtype=bool)
        np.put_along_axis(mask, order[:, : int(val)], True, axis=1)
        return mask
    mask = mag > val * mag.max(axis=1, keepdims=True)
    dead = np.flatnonzero(~mask.any(axis=1))
    if dead.size:
        mask[dead, np.argmax(mag[dead], axis=1)] = True
    return mask


def _masked_argmax(scores: np.ndarray, mask: np.ndarray) -> np.ndarray:
    return np.argmax(np.where(mask, scores, -np.inf), axis=1)


def _cand_op_sums(kind: str, params, n_paths: int, n_d: int, nc_total: float):
    # counts are affine in n_c, so sums follow from the base and unit slopes
    base = op_count(kind, params, n_paths, 0)
    unit = op_count(kind, params, n_paths, 1)
    cmult = n_d * base.cmult + (unit.cmult - base.cmult) * nc_total
    cadd = n_d * base.cadd + (unit.cadd - base.cadd) * nc_total
    return cmult, cadd


def _run_point_trial(params, ch, cfg, ebn0_db, trial) -> dict:
    """One frame at one operating point.

    Returns detector -> (errors, candidate_count_sum, cmult_sum, cadd_sum).
    """
    m = params.m
    st = _trial_setup(params, ch, cfg, ebn0_db, trial)
    rule = cfg.candidate_rule()
    cache: dict = {}

    def rake_scores():
        if "rake" not in cache:
            cache["rake"] = _rake_scores(params, st.data_spec, st.gains)
        return cache["rake"]

    def mf_scores():
        if "mf" not in cache:
            cache["mf"] = _mf_scores(params, st.data_dech, st.gains)
        return cache["mf"]

    def masks():
        if "mask" not in cache:
            cache["mask"] = _candidate_masks(np.abs(st.data_spec), rule)
        return cache["mask"]

    out = {}
    n_d = cfg.n_d
    k_hat = st.gains.n_paths
    for det in cfg.detectors:
        nc_sum = float(n_d * m)
        cmult = cadd = 0.0
        if det == "noncoh":
            dec = np.argmax(np.abs(st.data_spec), axis=1)
        elif det == "coh":
            dec = np.argmax((np.conj(st.coh_ref) * st.data_spec).real, axis=1)
        elif det == "coh-awgn":
            # flat single-tap reference carrying the same energy, same noise
            start = cfg.n_p * m
            flat = math.sqrt(ch.energy()) * st.frame_samples[start:] + st.noise[start:]
            spec = np.fft.fft(dechirp(params, flat.reshape(-1, m)), axis=1)
            dec = np.argmax(spec.real, axis=1)
        elif det == "ideal-mf":
            dec = np.argmax(_ideal_scores(params, st.data_dech, st.gains, st.data), axis=1)
        elif det == "mf":
            dec = np.argmax(mf_scores(), axis=1)
            oc = op_count("mf", params, k_hat)
            cmult, cadd = float(n_d * oc.cmult), float(n_d * oc.cadd)
        elif det == "rake":
            dec = np.argmax(rake_scores(), axis=1)
            oc = op_count("rake", params, k_hat)
            cmult, cadd = float(n_d * oc.cmult), float(n_d * oc.cadd)
        elif det in ("cand-mf", "cand-rake"):
            mask = masks()
            scores = mf_scores() if det == "cand-mf" else rake_scores()
            dec = _masked_argmax(scores, mask)
            nc_sum = float(mask.sum())
            cmult, cadd = _cand_op_sums(_OP_KINDS[det], params, k_hat, n_d, nc_sum)
        elif det == "tdel":
            dec = tdel_detect(st.pilot_avg, st.data_spec, cfg.rho_tdel)
        else:  # pragma: no cover - resolve() rejects unknown ids
            raise ValueError(f"unknown detector {det!r}")
        out[det] = (int(np.sum(dec != st.data)), nc_sum, cmult, cadd)
    return out


def _point_trial_star(args):
    return _run_point_trial(*args)


# ---------------------------------------------------------------------------
# sweep drivers
# ---------------------------------------------------------------------------


def run_ser_sweep(cfg: SimConfig) -> list[SerPoint]:
    """Monte Carlo SER sweep over the configured Eb/N0 axis.

    Every detector sees the same frames and noise within a trial; each
    (trial, Eb/N0) pair owns an RNG substream, so results do not depend
    on scheduling or worker count.
    """
    params, ch = cfg.resolve()
    tasks = [
        (params, ch, cfg, float(ebn0), trial)
        for ebn0 in cfg.ebn0_db
        for trial in range(cfg.n_trials)
    ]
    if cfg.workers > 1:
        chunk = max(1, len(tasks) // (cfg.workers * 4))
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_point_trial_star, tasks, chunksize=chunk))
    else:
        results = [_run_point_trial(*t) for t in tasks]

    points = []
    symbols = cfg.n_trials * cfg.n_d
    for i, ebn0 in enumerate(cfg.ebn0_db):
        block = results[i * cfg.n_trials : (i + 1) * cfg.n_trials]
        for det in cfg.detectors:
            errors = sum(r[det][0] for r in block)
            nc_sum = sum(r[det][1] for r in block)
            cmult = sum(r[det][2] for r in block)
            cadd = sum(r[det][3] for r in block)
            points.append(
                SerPoint.from_counts(
                    det, ebn0, errors, symbols,
                    nc_sum / symbols, cmult / symbols, cadd / symbols,
                )
            )
    return points


@dataclass(frozen=True)
class DeltaRow:
    """Interference indicators for one transmitted symbol."""

    a: int
    coh: float
    noncoh: float
    ideal_mf: float
    mf: float


def run_delta_report(channel, sf: int) -> tuple[list[DeltaRow], float]:
    """Per-symbol interference indicators plus the coh-to-ideal max ratio.

    The ratio of the worst legacy-coherent indicator to the worst ideal
    matched-filter indicator measures how much the channel energy spreads
    the legacy detector's margin; it is nan for a single-path channel
    (both maxima are 0).
    """
    from .detectors import delta_indicator

    params = LoRaParams(sf)
    ch = parse_channel(channel)
    rows = [
        DeltaRow(
            a,
            delta_indicator(params, ch, a, "coh"),
            delta_indicator(params, ch, a, "noncoh"),
            delta_indicator(params, ch, a, "ideal_mf"),
            delta_indicator(params, ch, a, "mf"),
        )
        for a in range(params.m)
    ]
    max_coh = max(r.coh for r in rows)
    max_ideal = max(r.ideal_mf for r in rows)
    ratio = max_coh / max_ideal if max_ideal != 0 else float("nan")
    return rows, ratio


@dataclass(frozen=True)
class ComplexityRow:
    """Cost-table row for one (sf, n_c) pair at fixed tap count."""

    sf: int
    k: int
    n_c: int
    mf: OpCount
    rake: OpCount
    cand_mf: OpCount
    cand_rake: OpCount
    ratio_full: float
    ratio_cand: float
    wall_us: dict | None = None


def _bench_channel(k: int) -> MultipathChannel:
    gains = [1.0 / math.sqrt(k)] * k
    return MultipathChannel.from_taps(list(zip(range(k), gains)))


def _bench_kernels(params, k: int, n_c: int, repeats: int, symbols: int, seed: int) -> dict:
    """Median per-symbol wall time (microseconds) of the batched detector kernels."""
    ch = _bench_channel(k)
    g = dechirped_gain(params, ch)
    rng = np.random.default_rng(seed)
    dech = (rng.standard_normal((symbols, params.m)) + 1j * rng.standard_normal((symbols, params.m)))
    spec = np.fft.fft(dech, axis=1)
    mag = np.abs(spec)

    def mf():
        _mf_scores(params, dech, g)

    def rake():
        np.fft.fft(dech, axis=1)
        _rake_scores(params, spec, g)

    def cand_mf():
        mask = _candidate_masks(mag, ("fixed", n_c))
        _masked_argmax(_mf_scores(params, dech, g), mask)

    def cand_rake():
        np.fft.fft(dech, axis=1)
        mask = _candidate_masks(mag, ("fixed", n_c))
        _masked_argmax(_rake_scores(params, spec, g), mask)

    out = {}
    for name, fn in (("mf", mf), ("rake", rake), ("cand_mf", cand_mf), ("cand_rake", cand_rake)):
        fn()  # warmup
        times = []
        for _ in range(repeats):
            t0 = time.perf_counter()
            fn()
            times.append(time.perf_counter() - t0)
        times.sort()
        out[name] = times[len(times) // 2] / symbols * 1e6
    return out


def run_complexity_report(
    sf_list,
    n_paths: int,
    nc_list,
    bench_repeats: int = 0,
    bench_symbols: int = 256,
    seed: int = 0,
) -> list[ComplexityRow]:
    """Closed-form cost rows, optionally with measured kernel wall times.

    Wall times are machine-specific medians over bench_repeats runs after
    a warmup pass; they are off by default and only the relative ordering
    is meaningful.
    """
    if n_paths < 1:
        raise ConfigError("k", f"must be >= 1, got {n_paths}")
    rows = []
    for sf in sf_list:
        params = LoRaParams(sf)
        mf = op_count("mf", params, n_paths)
        rake = op_count("rake", params, n_paths)
        for n_c in nc_list:
            if not 1 <= n_c <= params.m:
                raise ConfigError("nc", f"must be in [1, {params.m}] for sf={sf}, got {n_c}")
            cm = op_count("cand_mf", params, n_paths, n_c)
            cr = op_count("cand_rake", params, n_paths, n_c)
            wall = None
            if bench_repeats > 0:
                wall = _bench_kernels(params, n_paths, n_c, bench_repeats, bench_symbols, seed)
            rows.append(
                ComplexityRow(
                    sf, n_paths, int(n_c), mf, rake, cm, cr,
                    complexity_ratio(mf, rake), complexity_ratio(cm, cr), wall,
                )
            )
    return rows


# ---------------------------------------------------------------------------
# studies
# ---------------------------------------------------------------------------

NP_STUDY = (1, 2, 3, 4, 6, 8)
RHO_P_STUDY = (0.2, 0.4, 0.6, 0.8)
KHAT_STUDY = ((0,), (0, 2), (0, 2, 4), (0, 2, 3), (0, 2, 3, 5), (0, 2, 3, 5, 9))


@dataclass(frozen=True)
class StudyRow:
    """One sweep row labeled by the study and the varied parameter."""

    study: str
    param: str
    point: SerPoint


def run_estimation_study(cfg: SimConfig) -> list[StudyRow]:
    """Pilot-count, threshold, and forced-delay studies with references.

    The pilot-count study (path count treated as known) and the threshold
    study run on the two-path benchmark channel; the forced-delay study
    runs on the three-path one, where misses, ghosts, and the single-path
    extreme all show distinct behavior. cfg supplies sf, the Eb/N0 axis,
    trial counts, seed, and workers.
    """
    base = replace(cfg, detectors=("rake",), csir="estimated",
                   known_k=False, forced_khat=None, channel="c2")
    rows: list[StudyRow] = []

    rows += [StudyRow("pilots", "perfect", p)
             for p in run_ser_sweep(replace(base, csir="perfect"))]
    for n_p in NP_STUDY:
        for p in run_ser_sweep(replace(base, n_p=n_p, known_k=True)):
            rows.append(StudyRow("pilots", str(n_p), p))

    rows += [StudyRow("rho_p", "known_k", p)
             for p in run_ser_sweep(replace(base, known_k=True))]
    for rho in RHO_P_STUDY:
        for p in run_ser_sweep(replace(base, rho_p=rho)):
            rows.append(StudyRow("rho_p", str(rho), p))

    c1 = replace(base, channel="c1")
    rows += [StudyRow("khat", "perfect", p)
             for p in run_ser_sweep(replace(c1, csir="perfect"))]
    rows += [StudyRow("khat", "coh", p)
             for p in run_ser_sweep(replace(c1, detectors=("coh",)))]
    for khat in KHAT_STUDY:
        label = "-".join(str(k) for k in khat)
        for p in run_ser_sweep(replace(c1, csir="forced", forced_khat=khat)):
            rows.append(StudyRow("khat", label, p))
    return rows


DEFAULT_NC_GRID = (0.01, 0.02, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5, 0.75, 1.0)


@dataclass(frozen=True)
class CandSweepRow:
    """SER of the fixed-size candidate detector at one (Eb/N0, n_c)."""

    sf: int
    ebn0_db: float
    n_c: int
    nc_norm: float
    errors: int
    symbols: int
    ser: float
    ci95: float


def run_candidate_sweep(cfg: SimConfig, nc_norm_grid=DEFAULT_NC_GRID) -> list[CandSweepRow]:
    """Sweep the candidate-set size, pairing every n_c on the same trials.

    All grid values reuse the same frames, noise, spectra, and scores, so
    the curves differ only through the candidate restriction; the full
    alphabet (nc_norm = 1) reproduces the unrestricted detector exactly.
    """
    params, ch = cfg.resolve()
    m = params.m
    if not nc_norm_grid:
        raise ConfigError("nc_grid", "need at least one candidate fraction")
    if any(not 0.0 < x <= 1.0 for x in nc_norm_grid):
        raise ConfigError("nc_grid", "fractions must lie in (0, 1]")
    nc_list = sorted({min(m, max(1, round(x * m))) for x in nc_norm_grid})
    counts = {(float(e), n): 0 for e in cfg.ebn0_db for n in nc_list}
    for ebn0 in cfg.ebn0_db:
        for trial in range(cfg.n_trials):
            st = _trial_setup(params, ch, cfg, float(ebn0), trial)
            scores = _rake_scores(params, st.data_spec, st.gains)
            order = np.argsort(-np.abs(st.data_spec), axis=1, kind="stable")
            for n_c in nc_list:
                mask = np.zeros(scores.shape, dtype=bool)
                np.put_along_axis(mask, order[:, :n_c], True, axis=1)
                dec = _masked_argmax(scores, mask)
                counts[(float(ebn0), n_c)] += int(np.sum(dec != st.data))
    symbols = cfg.n_trials * cfg.n_d
    rows = []
    for ebn0 in cfg.ebn0_db:
        for n_c in nc_list:
            errors = counts[(float(ebn0), n_c)]
            ser = errors / symbols
            ci95 = 1.96 * math.sqrt(ser * (1.0 - ser) / symbols)
            rows.append(CandSweepRow(params.sf, float(ebn0), n_c, n_c / m,
                                     errors, symbols, ser, ci95))
    return rows
