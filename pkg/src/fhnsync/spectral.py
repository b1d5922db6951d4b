"""Periodograms and signal-to-noise ratios of ensemble-mean signals."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import get_window

from .errors import ConfigError, OutOfBand, TooShort

MIN_SAMPLES = 16


@dataclass(frozen=True)
class TimeSeries:
    values: np.ndarray
    dt: float
    t_start: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if not self.dt > 0:
            raise ConfigError("sample spacing must be positive")
        if self.values.ndim != 1 or self.values.size < MIN_SAMPLES:
            raise TooShort(f"need at least {MIN_SAMPLES} samples, got {self.values.size}")

    @property
    def t(self) -> np.ndarray:
        return self.t_start + self.dt * np.arange(self.values.size)

    def after(self, t0: float) -> "TimeSeries":
        """The part of the series with ``t >= t0``."""
        k = max(0, int(math.ceil((t0 - self.t_start) / self.dt - 1e-9)))
        return TimeSeries(self.values[k:], self.dt, self.t_start + k * self.dt)


@dataclass(frozen=True)
class SnrResult:
    snr_db: float
    f_signal: float
    peak_power: float
    background_power: float


def periodogram(series: TimeSeries, pad: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """One-sided Hann-windowed power spectrum of the mean-removed series.

    Scaled so the bins sum to ``mean((x w)**2) / mean(w**2)``, which for a
    stationary signal is its variance.  ``pad > 1`` zero-pads to ``pad``
    times the length for a finer frequency grid (the bin sum then no longer
    equals the variance).
    """
    x = series.values
    n = x.size
    if n < MIN_SAMPLES:
        raise TooShort(f"need at least {MIN_SAMPLES} samples")
    w = get_window("hann", n)
    xw = (x - x.mean()) * w
    nfft = n * max(1, int(pad))
    spec = np.abs(np.fft.rfft(xw, nfft)) ** 2
    power = spec / (n * n * np.mean(w * w))
    power[1 : (nfft + 1) // 2] *= 2.0
    freqs = np.fft.rfftfreq(nfft, series.dt)
    return freqs, power


def snr(series: TimeSeries, f_signal: float, flank: int = 20, guard: int = 2) -> SnrResult:
    """Peak power near ``f_signal`` over the median of the flanking bins, in dB.

    The peak is the largest bin within one bin of ``f_signal``; the
    background is the median of ``flank`` bins on each side, skipping
    ``guard`` bins next to the signal bin.
    """
    n = series.values.size
    df = 1.0 / (n * series.dt)
    if not df < f_signal < 0.5 / series.dt:
        raise OutOfBand(f"f = {f_signal} not resolvable with df = {df:.4g}, Nyquist = {0.5 / series.dt:.4g}")
    freqs, power = periodogram(series)
    k0 = int(round(f_signal / df))
    peak = float(power[max(k0 - 1, 0) : k0 + 2].max())
    lo = np.arange(k0 - guard - flank, k0 - guard)
    hi = np.arange(k0 + guard + 1, k0 + guard + 1 + flank)
    idx = np.concatenate([lo, hi])
    idx = idx[(idx > 0) & (idx < power.size)]
    if idx.size == 0:
        raise OutOfBand("no background bins around the signal")
    background = float(np.median(power[idx]))
    if background <= 0:
        background = np.finfo(float).tiny
    return SnrResult(10.0 * math.log10(peak / background) if peak > 0 else -math.inf, f_signal, peak, background)


def dominant_frequency(series: TimeSeries, pad: int = 8) -> float:
    """Frequency of the largest non-zero periodogram bin (zero-padded grid).

    A series that is flat to roundoff has no dominant frequency; 0 is returned.
    """
    x = series.values
    if np.ptp(x) <= 1e-9 * max(1.0, float(np.abs(x).max())):
        return 0.0
    freqs, power = periodogram(series, pad=pad)
    if not np.any(power[1:] > 0):
        return 0.0
    return float(freqs[1 + np.argmax(power[1:])])
