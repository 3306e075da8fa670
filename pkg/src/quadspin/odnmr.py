"""Optically detected NMR of a driven four-level spin system.

Constant-amplitude drive of the two Zeeman classes, transmitted-intensity
proxy built from the probed ground populations, and its windowed spectrum.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .drive import FourLevelDrive, build_A
from .units import ANGULAR_PER_KHZ


class AliasedSampling(ValueError):
    """Sampling step too coarse for the fastest oscillation present."""


# basis ordering of the driven four-level space
S_MINUS, S_PLUS, G_MINUS, G_PLUS = 0, 1, 2, 3

SAMPLES_PER_PERIOD = 8


def _g_projector() -> np.ndarray:
    p = np.zeros((4, 4))
    p[G_MINUS, G_MINUS] = 1.0
    p[G_PLUS, G_PLUS] = 1.0
    return p


def _default_classes() -> list[tuple[np.ndarray, int]]:
    rho = 0.5 * _g_projector()
    return [(rho, G_MINUS), (rho, G_PLUS)]


@dataclass
class ClassEnsemble:
    """Weighted ion classes: (initial density operator, probed basis index).

    The default models the unpolarized-Zeeman experiment: both classes start
    in an even mixture of the two ground sublevels; one class is probed on
    the lower sublevel, the other on the upper one.
    """

    classes: list[tuple[np.ndarray, int]] = field(default_factory=_default_classes)
    weights: tuple[float, ...] = (1.0, 1.0)

    def __post_init__(self):
        if len(self.weights) != len(self.classes):
            raise ValueError("one weight per class required")
        for rho, idx in self.classes:
            rho = np.asarray(rho)
            if rho.shape != (4, 4):
                raise ValueError("class state must be a 4x4 density operator")
            if not np.allclose(rho, rho.conj().T, atol=1e-12):
                raise ValueError("class state must be Hermitian")
            vals = np.linalg.eigvalsh(rho)
            if vals.min() < -1e-12:
                raise ValueError("class state must be positive semidefinite")
            if abs(np.trace(rho).real - 1.0) > 1e-9:
                raise ValueError("class state must have unit trace")
            if idx not in range(4):
                raise ValueError("probe index out of range")

    @classmethod
    def single_class(cls, probe: int = G_MINUS) -> "ClassEnsemble":
        """One class prepared purely in the probed sublevel.

        With a pure start the (1,4) and (2,3) tone coefficients are products
        of squared overlaps and strictly positive; only the two-class
        mixed-state ensemble makes them vanish at zero drive detuning.
        """
        rho = np.zeros((4, 4))
        rho[probe, probe] = 1.0
        return cls(classes=[(rho, probe)], weights=(1.0,))


@dataclass
class TimeTrace:
    times: np.ndarray  # us
    intensity: np.ndarray


@dataclass
class Spectrum:
    freqs: np.ndarray  # kHz
    amps: np.ndarray  # complex, window-corrected
    window: str
    padding: int

    @property
    def power(self) -> np.ndarray:
        return np.abs(self.amps) ** 2


def mode_frequencies(zetas: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Distinct observable beat frequencies |zeta_k - zeta_l| / 2 in kHz.

    The state amplitudes carry phases exp(i zeta_k t / 2), so a population
    beats at half the eigenvalue difference; at zero field this is exactly
    the Rabi frequency.  Zero (degenerate) differences are dropped.
    """
    z = np.asarray(zetas, dtype=float)
    floor = tol * max(1.0, np.abs(z).max())
    diffs = 0.5 * np.abs(z[:, None] - z[None, :])
    vals = np.sort(diffs[np.triu_indices(len(z), k=1)])
    keep = []
    for v in vals:
        if v < floor:
            continue
        if not keep or v - keep[-1] > tol * max(1.0, abs(v)):
            keep.append(v)
    return np.array(keep)


def _eigensystem(drive: FourLevelDrive):
    A = build_A(drive)
    w, v = np.linalg.eigh(A)
    # angular rad/us back to ordinary kHz
    return w / ANGULAR_PER_KHZ, v


def fourier_coefficients(drive: FourLevelDrive,
                         ensemble: ClassEnsemble | None = None) -> dict:
    """Amplitude of each (k, l) tone in the transmitted-intensity proxy.

    The probed population of one class expands into a double sum over the
    drive eigenvectors; the coefficient multiplying exp(i(zeta_k-zeta_l)t/2)
    is B^(k) B^(l)* summed over the initial mixture.  Returns a dict keyed
    by (k, l) with k < l, plus frequencies under key "zetas".
    """
    if ensemble is None:
        ensemble = ClassEnsemble()
    zetas, v = _eigensystem(drive)
    out = {"zetas": zetas}
    for k in range(4):
        for l in range(k + 1, 4):
            c = 0.0 + 0.0j
            for w, (rho, probe) in zip(ensemble.weights, ensemble.classes):
                # B^(k) B^(l)* averaged over the mixture: <x|v_k><v_k|rho|v_l><v_l|x>
                c += w * (v[probe, k] * (v[:, k].conj() @ rho @ v[:, l])
                          * v[probe, l].conj())
            out[(k, l)] = c
    return out


def cancellation_check(drive: FourLevelDrive,
                       ensemble: ClassEnsemble | None = None) -> dict:
    """Residual two-class tone amplitudes on the (1,4) and (2,3) pairs.

    At zero drive detuning the spectrum symmetry zeta_4 = -zeta_1 and
    zeta_3 = -zeta_2 makes these two contributions of the two classes
    cancel exactly; the returned residuals are normalized to the largest
    tone amplitude so they can be compared against a relative threshold.
    """
    coeffs = fourier_coefficients(drive, ensemble)
    pairs = [(k, l) for k in range(4) for l in range(k + 1, 4)]
    scale = max(abs(coeffs[p]) for p in pairs)
    if scale == 0.0:
        scale = 1.0
    return {
        "residual_14": abs(coeffs[(0, 3)]) / scale,
        "residual_23": abs(coeffs[(1, 2)]) / scale,
        "scale": scale,
    }


def odnmr_trace(drive: FourLevelDrive, ensemble: ClassEnsemble | None,
                duration: float, dt: float,
                damping: float = 0.0) -> TimeTrace:
    """Probe-intensity proxy I(t) over a uniform time grid.

    duration, dt in us; damping is an optional exponential decay rate in
    1/us applied as an envelope on the oscillating part (artifact knob,
    defaults off).  Raises AliasedSampling when dt undersamples the
    fastest transition frequency.
    """
    if ensemble is None:
        ensemble = ClassEnsemble()
    zetas, v = _eigensystem(drive)
    freqs = mode_frequencies(zetas)
    fmax = freqs[-1] if len(freqs) else 0.0
    if fmax > 0.0:
        # period in us of the fastest tone is 1000 / f_kHz
        if dt > 1000.0 / (SAMPLES_PER_PERIOD * fmax):
            raise AliasedSampling(
                f"dt={dt} us undersamples the {fmax:.3f} kHz tone")
    times = np.arange(0.0, duration + 0.5 * dt, dt)
    phases = np.exp(1j * 0.5 * ANGULAR_PER_KHZ * np.outer(times, zetas))
    intensity = np.zeros_like(times)
    mean = 0.0
    for w, (rho, probe) in zip(ensemble.weights, ensemble.classes):
        # alpha_x(t) for each pure component of the mixture
        vals, vecs = np.linalg.eigh(rho)
        for p, chi in zip(vals, vecs.T):
            if p < 1e-14:
                continue
            B = v[probe, :] * (v.conj().T @ chi)  # B^(k) coefficients
            alpha = phases @ B
            contrib = w * p * np.abs(alpha) ** 2
            intensity += contrib
    if damping > 0.0:
        mean = intensity.mean()
        intensity = mean + (intensity - mean) * np.exp(-damping * times)
    return TimeTrace(times=times, intensity=intensity)


def spectrum(trace: TimeTrace, padding: int = 4) -> Spectrum:
    """Windowed, zero-padded discrete Fourier transform of a time trace.

    Hann window with coherent-gain correction, so a unit-amplitude cosine
    reports |amp| = 0.5 at its tone (two-sided convention folded onto the
    positive axis keeps the DC term unscaled).
    """
    t = np.asarray(trace.times)
    y = np.asarray(trace.intensity, dtype=float)
    dt = t[1] - t[0]
    if not np.allclose(np.diff(t), dt, rtol=1e-9, atol=1e-12):
        raise ValueError("spectrum requires uniform sampling")
    n = len(y)
    win = np.hanning(n)
    gain = win.sum()
    nfft = padding * n
    amps = np.fft.rfft((y - y.mean()) * win, n=nfft) / gain
    freqs = np.fft.rfftfreq(nfft, d=dt) * 1e3  # kHz
    return Spectrum(freqs=freqs, amps=amps, window="hann", padding=padding)


def peak_positions(spec: Spectrum, rel_threshold: float = 0.05) -> list[tuple[float, float]]:
    """Local maxima of the power spectrum above a relative threshold.

    Returns (frequency kHz, power) pairs, frequency refined by parabolic
    interpolation on log power.
    """
    p = spec.power
    if p.max() == 0.0:
        return []
    floor = rel_threshold * p.max()
    peaks = []
    for i in range(1, len(p) - 1):
        if p[i] >= floor and p[i] > p[i - 1] and p[i] >= p[i + 1]:
            lm, l0, lp = np.log(p[i - 1] + 1e-300), np.log(p[i] + 1e-300), np.log(p[i + 1] + 1e-300)
            denom = lm - 2 * l0 + lp
            shift = 0.5 * (lm - lp) / denom if denom != 0 else 0.0
            df = spec.freqs[1] - spec.freqs[0]
            peaks.append((spec.freqs[i] + shift * df, p[i]))
    return peaks


def parseval_ratio(trace: TimeTrace, spec: Spectrum) -> float:
    """Ratio of spectral to temporal energy of the windowed, mean-removed signal."""
    t = np.asarray(trace.times)
    y = np.asarray(trace.intensity, dtype=float)
    n = len(y)
    win = np.hanning(n)
    yw = (y - y.mean()) * win
    e_time = np.sum(yw ** 2)
    gain = win.sum()
    nfft = spec.padding * n
    full = np.fft.fft(yw, n=nfft) / gain
    e_freq = np.sum(np.abs(full) ** 2) * gain ** 2 / nfft
    return e_freq / e_time
