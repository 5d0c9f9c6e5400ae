"""Closed-form per-symbol operation counts for the detector inner loops.

The matched-filter route pays for building each hypothesis coefficient,
the per-sample product, and a single-bin DFT sum; the tap-combining
route pays one radix-2 FFT plus a few multiply-adds per tap and tested
bin. Candidate variants replace the full M-bin scan by n_c bins. All
counts are exact integers.
"""

from __future__ import annotations

from dataclasses import dataclass

from .waveform import LoRaParams

__all__ = ["OpCount", "op_count", "complexity_ratio", "DETECTOR_KINDS"]

DETECTOR_KINDS = ("mf", "cand_mf", "rake", "cand_rake")


@dataclass(frozen=True)
class OpCount:
    """Complex multiplication and addition counts per detected symbol."""

    cmult: int
    cadd: int

    def __post_init__(self) -> None:
        cmult, cadd = int(self.cmult), int(self.cadd)
        if cmult != self.cmult or cadd != self.cadd:
            raise ValueError("operation counts must be integers")
        if cmult < 0 or cadd < 0:
            raise ValueError("operation counts must be nonnegative")
        object.__setattr__(self, "cmult", cmult)
        object.__setattr__(self, "cadd", cadd)

    @property
    def total(self) -> int:
        return self.cmult + self.cadd


def op_count(detector: str, params: LoRaParams, n_paths: int, n_c: int | None = None) -> OpCount:
    """Evaluate the per-symbol cost formulas for one detector.

    n_paths is the tap count K of the gains in use; candidate detectors
    additionally need the candidate count n_c (n_c = M reduces them to
    their full-search counterparts). The FFT term uses the exact radix-2
    budget (M/2)*log2(M) multiplies and M*log2(M) adds.
    """
    m, sf, k = params.m, params.sf, int(n_paths)
    if k < 1:
        raise ValueError(f"n_paths must be >= 1, got {n_paths}")
    if detector in ("cand_mf", "cand_rake"):
        if n_c is None:
            raise ValueError(f"{detector} requires n_c")
        n_c = int(n_c)
        if n_c < 0:
            raise ValueError(f"n_c must be >= 0, got {n_c}")
    if detector == "mf":
        return OpCount(m * (2 * m + k * m + k), m * (m * k - 1))
    if detector == "cand_mf":
        return OpCount(n_c * (2 * m + k * m + k), n_c * (m * k - 1))
    if detector == "rake":
        return OpCount((m // 2) * sf + 2 * k * m, m * sf + (k - 1) * m)
    if detector == "cand_rake":
        return OpCount((m // 2) * sf + 2 * k * n_c, m * sf + (k - 1) * n_c)
    raise ValueError(f"detector must be one of {DETECTOR_KINDS}, got {detector!r}")


def complexity_ratio(a: OpCount, b: OpCount) -> float:
    """Ratio of total operation counts (cmult + cadd) of a over b."""
    return a.total / b.total
