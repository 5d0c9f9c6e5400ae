"""Chirp-modulation multipath detection library and simulation harness.

Layers, bottom up: waveform (chirps, dechirping, DFT detection),
channel (multipath model, frames, noise), detectors (matched filter,
tap combining, candidate pruning, pilot correlation), estimator (pilot
based path detection), complexity (operation counts), fastsim
(spectrum-domain shortcut sampler), simulate (Monte Carlo drivers),
cli (command line front end).
"""

from .channel import (
    C1,
    C2,
    DechirpedGains,
    Frame,
    MultipathChannel,
    apply_channel,
    build_frame,
    channel_coefficient,
    channel_energy,
    complex_noise,
    add_awgn,
    dechirped_gain,
    load_channel_file,
    parse_channel,
    rotate_gains,
)
from .complexity import OpCount, complexity_ratio, op_count
from .detectors import (
    CandidateSet,
    CorrelationTable,
    auto_cross_correlation,
    delta_indicator,
    detect,
    ideal_mf_detect,
    mf_filter_bank,
    mf_statistic,
    rake_statistic,
    select_candidates_fixed,
    select_candidates_threshold,
    tdel_detect,
)
from .estimator import EstimatorConfig, average_pilot_dft, detect_paths
from .fastsim import (
    FastSimModel,
    build_fast_sim,
    edge_statistics,
    sample_correlated_noise,
    simulate_ser,
)
from .simulate import (
    ConfigError,
    SerPoint,
    SimConfig,
    run_candidate_sweep,
    run_complexity_report,
    run_delta_report,
    run_estimation_study,
    run_ser_sweep,
)
from .waveform import (
    LoRaParams,
    chirp_samples,
    dechirp,
    detect_legacy,
    dft,
    gen_chirp,
    idft,
    instantaneous_frequency,
    noise_variance,
    snr_ebn0_convert,
)

__version__ = "0.1.0"

__all__ = [
    "C1",
    "C2",
    "CandidateSet",
    "ConfigError",
    "CorrelationTable",
    "DechirpedGains",
    "EstimatorConfig",
    "FastSimModel",
    "Frame",
    "LoRaParams",
    "MultipathChannel",
    "OpCount",
    "SerPoint",
    "SimConfig",
    "add_awgn",
    "apply_channel",
    "auto_cross_correlation",
    "average_pilot_dft",
    "build_fast_sim",
    "build_frame",
    "channel_coefficient",
    "channel_energy",
    "chirp_samples",
    "complex_noise",
    "complexity_ratio",
    "dechirp",
    "dechirped_gain",
    "delta_indicator",
    "detect",
    "detect_legacy",
    "detect_paths",
    "dft",
    "edge_statistics",
    "gen_chirp",
    "ideal_mf_detect",
    "idft",
    "instantaneous_frequency",
    "load_channel_file",
    "mf_filter_bank",
    "mf_statistic",
    "noise_variance",
    "op_count",
    "parse_channel",
    "rake_statistic",
    "rotate_gains",
    "run_candidate_sweep",
    "run_complexity_report",
    "run_delta_report",
    "run_estimation_study",
    "run_ser_sweep",
    "sample_correlated_noise",
    "select_candidates_fixed",
    "select_candidates_threshold",
    "simulate_ser",
    "snr_ebn0_convert",
    "tdel_detect",
    "__version__",
]
