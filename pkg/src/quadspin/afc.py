"""Atomic-frequency-comb preparation under a weak bias field.

Spectral hole burning in a four-level system (split ground and excited
doublets plus a long-lived auxiliary reservoir) simulated as discrete
pump/relax cycles over ion frequency classes on a 1 kHz grid, the
resulting comb absorption profile, and the two-level echo efficiency.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class NonConvergence(RuntimeError):
    """Populations still changing at the pump-cycle cap."""


GRID_STEP = 1.0  # kHz, frequency-class resolution
CONVERGENCE_TOL = 1e-6


@dataclass(frozen=True)
class CombSpec:
    """Square-tooth comb parameters and the echo-efficiency inputs.

    delta_afc and bandwidth in kHz; finesse is period over tooth width;
    d_eff is the effective optical depth of the rephasing teeth; eta_deph
    collects intrinsic dephasing (1 means none).
    """

    delta_afc: float
    bandwidth: float
    finesse: float = 4.0
    d_eff: float = 0.0
    eta_deph: float = 1.0

    def __post_init__(self):
        if self.finesse <= 1:
            raise ValueError("finesse must exceed 1")
        if self.bandwidth < self.delta_afc:
            raise ValueError("bandwidth must cover at least one period")
        if not 0.0 <= self.eta_deph <= 1.0:
            raise ValueError("eta_deph must lie in [0, 1]")


@dataclass
class HoleSpectrum:
    detunings: np.ndarray  # kHz, relative to band center
    absorption: np.ndarray  # alpha(f)/alpha0, dimensionless
    ground_populations: np.ndarray | None = None  # (2, n classes)
    aux_population: np.ndarray | None = None

    def __post_init__(self):
        if np.any(np.asarray(self.absorption) < -1e-12):
            raise ValueError("absorption must be nonnegative")

    def depth_at(self, f: float) -> float:
        """Hole depth 1 - alpha/alpha0 at the grid point nearest f."""
        i = int(np.argmin(np.abs(self.detunings - f)))
        return 1.0 - float(self.absorption[i])


@dataclass
class PumpingModel:
    """Four-level pumping bookkeeping.

    delta_g, delta_e: Zeeman splittings (kHz) of the ground and excited
    doublets; branching: 2x2 relative transition strengths b_ij between
    ground sublevel i and excited sublevel j (rows and columns sum to 1,
    as for |V_ij|^2 of a unitary coupling); r_aux: fraction of each
    relaxation that ends in the auxiliary reservoir; pump_rate: excitation
    probability per cycle on a fully pumped, unit-strength transition.
    """

    delta_g: float
    delta_e: float
    branching: np.ndarray = field(
        default_factory=lambda: np.array([[0.9, 0.1], [0.1, 0.9]])
    )
    r_aux: float = 0.5
    pump_rate: float = 0.5

    def __post_init__(self):
        b = np.asarray(self.branching, dtype=float)
        if b.shape != (2, 2) or np.any(b < 0):
            raise ValueError("branching must be a nonnegative 2x2 matrix")
        if not (np.allclose(b.sum(axis=0), 1.0, atol=1e-9)
                and np.allclose(b.sum(axis=1), 1.0, atol=1e-9)):
            raise ValueError("branching rows and columns must sum to 1")
        if not 0.0 < self.r_aux <= 1.0:
            raise ValueError("r_aux must lie in (0, 1]")
        self.branching = b


def comb_efficiency(spec: CombSpec) -> float:
    """Two-level echo efficiency d_eff^2 exp(-d_eff) times the dephasing factor."""
    d = spec.d_eff
    return float(spec.eta_deph * d * d * np.exp(-d))


def satellite_positions(delta_g: float, delta_e: float, f0: float = 0.0) -> dict:
    """Side-hole and anti-hole frequencies created by pumping at f0.

    Side holes (extra transparency) appear at f0 +- delta_e; anti-holes
    (extra absorption) at f0 +- delta_g and the four satellites
    f0 +- |delta_g +- delta_e|.  Zero offsets are dropped and duplicates
    merged.
    """
    if delta_g < 0 or delta_e < 0:
        raise ValueError("splittings must be nonnegative")

    def offsets(vals):
        out = []
        for v in vals:
            if v <= 0:
                continue
            for s in (f0 - v, f0 + v):
                if not any(abs(s - o) < 1e-9 for o in out):
                    out.append(s)
        return sorted(out)

    side = offsets([delta_e])
    anti = offsets([delta_g, abs(delta_g + delta_e), abs(delta_g - delta_e)])
    return {"side_holes": side, "anti_holes": anti}


def matching_conditions(B: float, g_e: float, g_g: float, n_max: int) -> dict:
    """Comb periods that hide the side holes and anti-holes.

    Side holes coincide with transparency when delta_afc = B g_e / n;
    anti-holes coincide with absorption when delta_afc = B g_g / (n - 1/2).
    At B = 0 both conditions are degenerate (every period works) and the
    returned lists are empty.
    """
    if B < 0 or g_e < 0 or g_g < 0:
        raise ValueError("field and g factors must be nonnegative")
    ns = np.arange(1, n_max + 1)
    if B == 0.0:
        return {"side_hole": [], "anti_hole": []}
    return {
        "side_hole": list(B * g_e / ns),
        "anti_hole": list(B * g_g / (ns - 0.5)),
    }


def comb_mask(spec: CombSpec, grid: np.ndarray) -> np.ndarray:
    """Boolean pump mask on the frequency grid: True where transparency is burned.

    Teeth (absorption kept) are square windows of width delta_afc/finesse
    centered on integer multiples of delta_afc within the bandwidth; the
    rest of the band is pumped.
    """
    half_band = 0.5 * spec.bandwidth
    in_band = np.abs(grid) <= half_band
    tooth_half = 0.5 * spec.delta_afc / spec.finesse
    # distance to the nearest tooth center
    dist = np.abs(grid - spec.delta_afc * np.round(grid / spec.delta_afc))
    on_tooth = dist <= tooth_half
    return in_band & ~on_tooth


def _class_grid(spec: CombSpec, model: PumpingModel) -> np.ndarray:
    """Ion-class center frequencies covering the band plus satellite margins."""
    margin = abs(model.delta_g) + abs(model.delta_e) + 2 * spec.delta_afc
    half = 0.5 * spec.bandwidth + margin
    n = int(np.ceil(half / GRID_STEP))
    return GRID_STEP * np.arange(-n, n + 1)


def burn_comb(model: PumpingModel, spec: CombSpec, cycles: int = 200,
              track: bool = False, pump_mask: np.ndarray | None = None,
              require_convergence: bool = True):
    """Pump the comb mask for a number of cycles; return the absorption profile.

    Ion classes are labeled by the frequency of their lower-to-lower
    transition.  Each cycle excites ground population on pumped
    transitions (probability pump_rate times the branching strength) and
    relaxes it with fraction r_aux to the auxiliary reservoir and the rest
    back through the optical branching.  Raises NonConvergence when the
    populations still move more than 1e-6 per cycle at the cap.

    With track=True also returns the per-cycle absorption profiles.
    """
    if cycles < 1:
        raise ValueError("cycles must be at least 1")
    nu = _class_grid(spec, model)
    grid = nu.copy()
    mask = comb_mask(spec, grid) if pump_mask is None else np.asarray(pump_mask, bool)
    if len(mask) != len(grid):
        raise ValueError("pump mask must match the class grid")

    dg = int(round(model.delta_g / GRID_STEP))
    de = int(round(model.delta_e / GRID_STEP))
    # transition frequency offsets (in grid steps) from the class label for
    # (ground i, excited j); the label is the (g lower, e lower) transition
    offs = {(0, 0): 0, (0, 1): de, (1, 0): -dg, (1, 1): de - dg}
    b = model.branching

    def mask_at(off):
        idx = np.arange(len(nu)) + off
        ok = (idx >= 0) & (idx < len(nu))
        out = np.zeros(len(nu), dtype=bool)
        out[ok] = mask[idx[ok]]
        return out

    pumped = {ij: mask_at(off) for ij, off in offs.items()}
    p = np.full((2, len(nu)), 0.5)
    aux = np.zeros(len(nu))
    total0 = p.sum(axis=0) + aux

    history = []
    converged = False
    for _ in range(cycles):
        exc = np.zeros((2, len(nu)))  # excited amount per e sublevel
        loss = np.zeros_like(p)
        for (i, j), sel in pumped.items():
            x = model.pump_rate * b[i, j] * sel
            amt = p[i] * x
            loss[i] += amt
            exc[j] += amt
        newp = p - loss
        for j in range(2):
            back = (1.0 - model.r_aux) * exc[j]
            for i in range(2):
                newp[i] += b[i, j] * back
        aux = aux + model.r_aux * exc.sum(axis=0)
        step = np.abs(newp - p).max()
        p = newp
        if track:
            history.append(_absorption(p, offs, b, nu))
        if step < CONVERGENCE_TOL:
            converged = True
            break
    if require_convergence and not converged and step >= CONVERGENCE_TOL:
        raise NonConvergence(f"populations still moving {step:.2e} per cycle")

    drift = np.abs(p.sum(axis=0) + aux - total0).max()
    if drift > 1e-9:
        raise AssertionError(f"population bookkeeping leaked {drift:.2e}")

    spectrum = HoleSpectrum(detunings=grid, absorption=_absorption(p, offs, b, nu),
                            ground_populations=p, aux_population=aux)
    if track:
        return spectrum, history
    return spectrum


def _absorption(p, offs, b, nu):
    """alpha(f)/alpha0 on the class grid from per-class ground populations."""
    alpha = np.zeros(len(nu))
    for (i, j), off in offs.items():
        idx = np.arange(len(nu)) + off
        ok = (idx >= 0) & (idx < len(nu))
        np.add.at(alpha, idx[ok], b[i, j] * p[i][ok])
    return alpha  # unburned flat ensemble gives 1 away from the edges


def effective_depth(spectrum: HoleSpectrum, spec: CombSpec, d0: float) -> float:
    """Effective optical depth of the comb teeth.

    Average absorption over the tooth windows, scaled by the peak depth d0
    and diluted by the finesse (a tooth of depth d and duty cycle 1/F
    rephases like an effective depth d/F).
    """
    grid = spectrum.detunings
    in_band = np.abs(grid) <= 0.5 * spec.bandwidth
    tooth = in_band & ~comb_mask(spec, grid)
    if not np.any(tooth):
        return 0.0
    return float(d0 * spectrum.absorption[tooth].mean() / spec.finesse)


def efficiency_ratio_map(g_g: float, g_e: float, B_grid, dafc_grid,
                         branching: np.ndarray | None = None,
                         bandwidth_periods: int = 10, finesse: float = 4.0,
                         d0: float | None = None, cycles: int = 400) -> np.ndarray:
    """Echo efficiency with field over efficiency without, on (delta_afc, B).

    Rows follow dafc_grid, columns follow B_grid.  eta_deph cancels in the
    ratio.  Cells where the burn fails to converge are NaN.
    """
    B_grid = np.asarray(B_grid, dtype=float)
    dafc_grid = np.asarray(dafc_grid, dtype=float)
    if d0 is None:
        # peak depth that puts the unperturbed comb at the d_eff = 2 optimum,
        # so any preparation damage lowers the efficiency
        d0 = 2.0 * finesse
    out = np.full((len(dafc_grid), len(B_grid)), np.nan)
    kw = {} if branching is None else {"branching": np.asarray(branching)}
    for i, dafc in enumerate(dafc_grid):
        spec = CombSpec(delta_afc=dafc, bandwidth=bandwidth_periods * dafc,
                        finesse=finesse)
        ref_model = PumpingModel(delta_g=0.0, delta_e=0.0, **kw)
        ref = comb_efficiency(
            _with_depth(spec, burn_comb(ref_model, spec, cycles), d0))
        for j, B in enumerate(B_grid):
            model = PumpingModel(delta_g=abs(g_g * B), delta_e=abs(g_e * B), **kw)
            try:
                spectrum = burn_comb(model, spec, cycles)
            except NonConvergence:
                continue
            eff = comb_efficiency(_with_depth(spec, spectrum, d0))
            out[i, j] = eff / ref if ref > 0 else np.nan
    return out


def linear_side_ratio(branching: np.ndarray) -> float:
    """Side-hole to central-hole depth ratio in the weak-pump limit.

    Pumping a single frequency addresses four ion classes, one per
    transition; enumerating their read-out contributions at the pump
    frequency and at the +-delta_e satellites gives
    (b00 b01 + b10 b11) / (b00^2 + b01^2 + b10^2 + b11^2),
    fixed by the branching matrix alone.
    """
    b = np.asarray(branching, dtype=float)
    return float((b[0, 0] * b[0, 1] + b[1, 0] * b[1, 1]) / (b * b).sum())


def _with_depth(spec: CombSpec, spectrum: HoleSpectrum, d0: float) -> CombSpec:
    from dataclasses import replace

    return replace(spec, d_eff=effective_depth(spectrum, spec, d0))
