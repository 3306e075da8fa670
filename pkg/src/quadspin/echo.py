"""Single-ion toy model of the spin-wave storage echo sequence.

Six levels (two spin doublets s, g and one optical doublet e), ideal-area
optical rotations, exact RF propagators and diagonal free evolution are
composed into the full storage sequence; the echo amplitude is read from
the branching-weighted optical coherences.  A tone-enumeration oracle
propagates per-path phase-accumulation rates through the same operator
zero-pattern and predicts every beat frequency of the storage-time sweep.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .drive import FourLevelDrive, propagator_exact
from .odnmr import Spectrum, TimeTrace, peak_positions, spectrum
from .units import angular

# basis ordering of the six-level space
LEVELS = ("s-", "s+", "g-", "g+", "e-", "e+")
S_BLOCK = (0, 1)
G_BLOCK = (2, 3)
E_BLOCK = (4, 5)

UNITARITY_TOL = 1e-10


@dataclass(frozen=True)
class EchoSequence:
    """Free-evolution intervals and RF pulse length of the XX sequence (us).

    The storage time is T_s = t1 + t2 + t3 + 2 tau0; both RF pulses share
    the same phase (XX).
    """

    t1: float
    t2: float
    t3: float
    tau0: float

    def __post_init__(self):
        if min(self.t1, self.t2, self.t3, self.tau0) < 0:
            raise ValueError("intervals must be nonnegative")

    @property
    def storage_time(self) -> float:
        return self.t1 + self.t2 + self.t3 + 2.0 * self.tau0

    @classmethod
    def from_fractions(cls, Ts: float, tau0: float, fractions) -> "EchoSequence":
        f = np.asarray(fractions, dtype=float)
        if abs(f.sum() - 1.0) > 1e-12 or np.any(f < 0):
            raise ValueError("fractions must be nonnegative and sum to 1")
        free = Ts - 2.0 * tau0
        if free < 0:
            raise ValueError("storage time shorter than the two RF pulses")
        return cls(t1=f[0] * free, t2=f[1] * free, t3=f[2] * free, tau0=tau0)

    @classmethod
    def centered(cls, Ts: float, tau0: float) -> "EchoSequence":
        """First pulse at T_s/4, second at 3T_s/4 (2 t1 = t2 = t3 limit)."""
        return cls.from_fractions(Ts, tau0, CENTERED)

    @classmethod
    def shifted(cls, Ts: float, tau0: float) -> "EchoSequence":
        """First pulse moved to T_s/8 at the same total storage time."""
        return cls.from_fractions(Ts, tau0, SHIFTED)


CENTERED = (0.25, 0.5, 0.25)
SHIFTED = (0.125, 0.5, 0.375)


@dataclass(frozen=True)
class EchoModel:
    """Everything the sequence acts on.

    delta_s, delta_g, delta_e: Zeeman splittings in kHz; rf: resonant
    four-level drive on the s <-> g transition; v_ge, v_se: SU(2) overlap
    matrices of the two optical transitions.
    """

    delta_s: float
    delta_g: float
    delta_e: float
    rf: FourLevelDrive
    v_ge: np.ndarray
    v_se: np.ndarray

    def __post_init__(self):
        for v in (self.v_ge, self.v_se):
            v = np.asarray(v)
            if v.shape != (2, 2):
                raise ValueError("optical couplings must be 2x2")
            if np.linalg.norm(v.conj().T @ v - np.eye(2)) > UNITARITY_TOL:
                raise ValueError("optical couplings must be unitary")


def _phase_rates(model: EchoModel) -> np.ndarray:
    """Free-evolution phase rate of each level in ordinary kHz.

    Doublet members sit at -+ delta/2 around their doublet center; the
    rotating frame removes the centers.
    """
    return 0.5 * np.array([
        -model.delta_s, model.delta_s,
        -model.delta_g, model.delta_g,
        -model.delta_e, model.delta_e,
    ])


def free_evolution(model: EchoModel, t: float) -> np.ndarray:
    if t < 0:
        raise ValueError("t must be nonnegative")
    return np.diag(np.exp(-1j * angular(_phase_rates(model)) * t))


def optical_op(v: np.ndarray, area: float, lower_block) -> np.ndarray:
    """Ideal-area rotation between a ground doublet and the e doublet.

    cos(area/2) on the two doublets, -i sin(area/2) V coupling them,
    identity on the remaining doublet.
    """
    u = np.eye(6, dtype=complex)
    c, s = np.cos(0.5 * area), np.sin(0.5 * area)
    for a in lower_block:
        u[a, a] = c
    for b in E_BLOCK:
        u[b, b] = c
    v = np.asarray(v, dtype=complex)
    for i, a in enumerate(lower_block):
        for j, b in enumerate(E_BLOCK):
            u[a, b] = -1j * s * v[i, j]
            u[b, a] = -1j * s * np.conj(v[i, j])
    return u


def rf_pulse(model: EchoModel, tau: float) -> np.ndarray:
    """Exact s <-> g propagator over tau, identity on the optical doublet."""
    u = np.eye(6, dtype=complex)
    u[:4, :4] = propagator_exact(model.rf, tau).U
    return u


def sequence_operator(model: EchoModel, seq: EchoSequence) -> np.ndarray:
    """The composed storage sequence after the initial pi/2 excitation."""
    op = optical_op(model.v_ge, 0.5 * np.pi, G_BLOCK)
    op = optical_op(model.v_se, np.pi, S_BLOCK) @ op
    op = free_evolution(model, seq.t1) @ op
    op = rf_pulse(model, seq.tau0) @ op
    op = free_evolution(model, seq.t2) @ op
    op = rf_pulse(model, seq.tau0) @ op
    op = free_evolution(model, seq.t3) @ op
    op = optical_op(model.v_se, np.pi, S_BLOCK) @ op
    if np.linalg.norm(op.conj().T @ op - np.eye(6)) > UNITARITY_TOL:
        raise AssertionError("composed sequence lost unitarity")
    return op


def echo_amplitude(model: EchoModel, seq: EchoSequence,
                   psi_in: np.ndarray | None = None) -> complex:
    """Branching-weighted optical coherence of the output state.

    The emitted field sums the g <-> e coherences with the transition
    amplitudes of v_ge as weights; by Cauchy-Schwarz its modulus never
    exceeds 1 for a normalized input.
    """
    if psi_in is None:
        psi_in = np.zeros(6, dtype=complex)
        psi_in[G_BLOCK[0]] = 1.0
    psi = sequence_operator(model, seq) @ np.asarray(psi_in, dtype=complex)
    amp = 0.0 + 0.0j
    for i, a in enumerate(G_BLOCK):
        for j, b in enumerate(E_BLOCK):
            amp += np.conj(model.v_ge[i, j]) * psi[b] * np.conj(psi[a])
    return amp


def efficiency_sweep(model: EchoModel, Ts_grid, tau0: float,
                     fractions=(0.25, 0.5, 0.25),
                     psi_in: np.ndarray | None = None) -> TimeTrace:
    """|echo amplitude|^2 over a storage-time grid (us)."""
    Ts_grid = np.asarray(Ts_grid, dtype=float)
    eff = np.empty_like(Ts_grid)
    for n, Ts in enumerate(Ts_grid):
        seq = EchoSequence.from_fractions(Ts, tau0, fractions)
        eff[n] = abs(echo_amplitude(model, seq, psi_in)) ** 2
    return TimeTrace(times=Ts_grid, intensity=eff)


def beat_spectrum(trace: TimeTrace, padding: int = 4) -> Spectrum:
    """Spectrum of the efficiency-versus-storage-time trace."""
    return spectrum(trace, padding=padding)


def predicted_beats(model: EchoModel, tau0: float,
                    fractions=(0.25, 0.5, 0.25),
                    psi_in: np.ndarray | None = None,
                    weight_floor: float = 1e-6,
                    return_weights: bool = False):
    """Beat frequencies of the storage-time sweep from path enumeration.

    Each quantum path through the sequence accumulates phase at a rate set
    by which doublet member it occupies during the three free intervals.
    Propagating per-level dictionaries {phase rate: amplitude} through the
    same operators (with the interval lengths replaced by the timing
    fractions) turns the echo amplitude into a finite tone sum; the
    efficiency then beats at every pairwise tone difference whose combined
    weight is above weight_floor relative to the strongest one.  Returned
    in kHz, sorted.
    """
    if psi_in is None:
        psi_in = np.zeros(6, dtype=complex)
        psi_in[G_BLOCK[0]] = 1.0
    f = np.asarray(fractions, dtype=float)
    rates = _phase_rates(model)

    # state: per level, {tone rate (kHz per unit storage time): amplitude}
    state = [dict() for _ in range(6)]
    for a in range(6):
        if abs(psi_in[a]) > 0:
            state[a][0.0] = complex(psi_in[a])

    def apply_matrix(u):
        new = [dict() for _ in range(6)]
        for b in range(6):
            for a in range(6):
                if abs(u[b, a]) < 1e-14:
                    continue
                for rate, amp in state[a].items():
                    new[b][rate] = new[b].get(rate, 0.0) + u[b, a] * amp
        return new

    def apply_free(fraction):
        # the tau0-dependent part of each interval is a fixed phase offset,
        # absorbed into the amplitudes; only the fraction scales with T_s
        nonlocal state
        new = [dict() for _ in range(6)]
        for a in range(6):
            for rate, amp in state[a].items():
                r = round(rate + fraction * rates[a], 12)
                phase = np.exp(-2j * angular(rates[a]) * fraction * tau0)
                new[a][r] = new[a].get(r, 0.0) + amp * phase
        state = new

    state = apply_matrix(optical_op(model.v_ge, 0.5 * np.pi, G_BLOCK))
    state = apply_matrix(optical_op(model.v_se, np.pi, S_BLOCK))
    apply_free(f[0])
    state = apply_matrix(rf_pulse(model, tau0))
    apply_free(f[1])
    state = apply_matrix(rf_pulse(model, tau0))
    apply_free(f[2])
    state = apply_matrix(optical_op(model.v_se, np.pi, S_BLOCK))

    # echo amplitude as a tone sum over (g, e) coherence pairs
    tones: dict[float, complex] = {}
    for i, a in enumerate(G_BLOCK):
        for j, b in enumerate(E_BLOCK):
            w = np.conj(model.v_ge[i, j])
            if abs(w) < 1e-14:
                continue
            for rg, ag in state[a].items():
                for re, ae in state[b].items():
                    r = round(re - rg, 12)
                    tones[r] = tones.get(r, 0.0) + w * ae * np.conj(ag)

    keys = sorted(tones)
    amps = np.array([tones[k] for k in keys])
    keys = np.array(keys)
    keep = np.abs(amps) > 1e-12
    keys, amps = keys[keep], amps[keep]

    # efficiency beats at every pairwise tone difference; the complex sum
    # keeps the interference between path pairs sharing one difference
    cplx: dict[float, complex] = {}
    for p in range(len(keys)):
        for q in range(len(keys)):
            d = round(keys[p] - keys[q], 9)
            if d <= 0.0:
                continue
            cplx[d] = cplx.get(d, 0.0) + amps[p] * np.conj(amps[q])
    beats = {d: abs(c) for d, c in cplx.items()}
    if not beats:
        empty = np.array([])
        return (empty, empty) if return_weights else empty
    top = max(beats.values())
    pairs = sorted((d, w) for d, w in beats.items() if w > weight_floor * top)
    # merge near-degenerate entries, pooling their weights
    merged: list[list[float]] = []
    for d, w in pairs:
        if merged and d - merged[-1][0] < 1e-6:
            merged[-1][1] += w
        else:
            merged.append([d, w])
    freqs = np.array([d for d, _ in merged])
    weights = np.array([w for _, w in merged])
    if return_weights:
        return freqs, weights
    return freqs


def match_peak_sets(simulated, predicted, tol: float) -> dict:
    """Symmetric set comparison of two frequency lists within a tolerance."""
    simulated = np.asarray(simulated, dtype=float)
    predicted = np.asarray(predicted, dtype=float)
    unmatched_sim = [s for s in simulated
                     if predicted.size == 0 or np.abs(predicted - s).min() > tol]
    unmatched_pred = [p for p in predicted
                      if simulated.size == 0 or np.abs(simulated - p).min() > tol]
    return {
        "unmatched_simulated": unmatched_sim,
        "unmatched_predicted": unmatched_pred,
        "ok": not unmatched_sim and not unmatched_pred,
    }
