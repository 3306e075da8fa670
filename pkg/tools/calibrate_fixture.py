"""Calibrate the Eu:Y2SiO5 tensor fixture against published observables.

The source publications characterize the spin Hamiltonian through derived
quantities (level gaps, direction-dependent effective gyromagnetic ratios,
transition moments and coupling coefficients).  This script least-squares
fits quadrupole and Zeeman tensors to those observables and writes the
frozen fixture TOML used by the test suite.

Run from the repository root:  python3 tools/calibrate_fixture.py
"""

from __future__ import annotations

import sys

import numpy as np
from scipy.optimize import least_squares
from scipy.spatial.transform import Rotation

from quadspin.levels import FieldVector, TensorParams, solve_levels, transition_coupling
from quadspin.spin_algebra import SpinQuantum

SPIN = SpinQuantum(3)  # I = 5/2
B_AXIS = np.array([0.0, 0.0, 1.0])
PHI_I, PHI_II, PHI_III = 0.0, np.deg2rad(65.0), np.deg2rad(120.0)


def unpack(x):
    E, D = x[0], x[1]
    R = Rotation.from_euler("zyz", x[2:5]).as_matrix()
    m = x[5:11]
    M = np.array(
        [[m[0], m[3], m[4]], [m[3], m[1], m[5]], [m[4], m[5], m[2]]]
    )
    return TensorParams(E=E, D=D, R_Q=R, M=M)


def structure(params, phi):
    return solve_levels(params, FieldVector(B=1.0, theta=0.0, phi=phi), SPIN)


def level_quantities(params, phi):
    st = structure(params, phi)
    idx = {m: st.doublet_index(m) for m in (1, 3, 5)}
    return st, idx


def ground_residuals(x):
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        p = unpack(x)
        res = []
        st0, idx = level_quantities(p, 0.0)
        # energy ordering 1/2 < 3/2 < 5/2 with the published gaps (MHz)
        e = st0.energies
        res += [
            5.0 * (e[idx[3]] - e[idx[1]] - 34.54),
            5.0 * (e[idx[5]] - e[idx[3]] - 46.25),
            50.0 * max(0.0, -(e[idx[3]] - e[idx[1]])),
            50.0 * max(0.0, -(e[idx[5]] - e[idx[3]])),
        ]
        # direction I: g(1/2) = 4 kHz/mT and minimal there
        gI = st0.g[idx[1]]
        gp = structure(p, 0.12).g[idx[1]]
        gm = structure(p, -0.12).g[idx[1]]
        res += [2.0 * (gI - 4.0), 1.0 * (gp - gm), 2.0 * max(0.0, gI - gp), 2.0 * max(0.0, gI - gm)]
        # direction II: g(1/2) = g(3/2) = 14
        stII, idxII = level_quantities(p, PHI_II)
        res += [2.0 * (stII.g[idxII[1]] - 14.0), 2.0 * (stII.g[idxII[3]] - 14.0)]
        # direction III: g(1/2) = 12
        stIII, idxIII = level_quantities(p, PHI_III)
        res += [2.0 * (stIII.g[idxIII[1]] - 12.0)]
        # RF drive along b on 1/2 <-> 3/2: mu = 20 kHz/mT, |u1| = 0.856 at II
        cII = transition_coupling(stII, idxII[1], idxII[3], B_AXIS)
        res += [1.0 * (cII.mu - 20.0), 20.0 * (abs(cII.u1) - 0.856)]
        # soft targets: dir I g(3/2) moderate, dir III |u2| minimal
        res += [0.3 * (st0.g[idx[3]] - 10.0)]
        cIII = transition_coupling(stIII, idxIII[1], idxIII[3], B_AXIS)
        res += [1.0 * abs(cIII.u2)]
        return np.array(res)


def excited_residuals(x):
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        p = unpack(x)
        res = []
        st0, idx = level_quantities(p, 0.0)
        e = st0.energies
        res += [
            5.0 * (e[idx[3]] - e[idx[1]] - 102.0),
            5.0 * (e[idx[5]] - e[idx[3]] - 75.0),
            50.0 * max(0.0, -(e[idx[3]] - e[idx[1]])),
            50.0 * max(0.0, -(e[idx[5]] - e[idx[3]])),
        ]
        # direction I: g(5/2) = 24
        res += [2.0 * (st0.g[idx[5]] - 24.0)]
        # direction III: g(5/2) = 2.5 and minimal there
        stIII, idxIII = level_quantities(p, PHI_III)
        gIII = stIII.g[idxIII[5]]
        gp = structure(p, PHI_III + 0.12).g[idxIII[5]]
        gm = structure(p, PHI_III - 0.12).g[idxIII[5]]
        res += [4.0 * (gIII - 2.5), 1.0 * (gp - gm),
                4.0 * max(0.0, gIII - gp), 4.0 * max(0.0, gIII - gm)]
        # keep the Zeeman tensor at plausible magnitudes
        res += list(0.02 * (x[5:8] - 10.0))
        return np.array(res)


def fit(residuals, seeds, d_sign, good_enough=1e-3):
    best = None
    rng = np.random.default_rng(7)
    for i in range(seeds):
        x0 = np.concatenate(
            [
                [rng.uniform(2, 15), d_sign * rng.uniform(10, 40)],
                rng.uniform(-np.pi, np.pi, 3),
                rng.uniform(2, 18, 3),
                rng.uniform(-8, 8, 3),
            ]
        )
        try:
            sol = least_squares(residuals, x0, method="lm", max_nfev=1200)
        except Exception:
            continue
        if best is None or sol.cost < best.cost:
            best = sol
            print(f"  seed {i}: cost {sol.cost:.6g}", file=sys.stderr)
        if best.cost < good_enough:
            break
    return best


def fmt(p: TensorParams, label: str) -> str:
    eul = Rotation.from_matrix(p.R_Q).as_euler("zyz", degrees=True)
    rows = ",\n    ".join(
        "[" + ", ".join(f"{v:.6f}" for v in row) + "]" for row in p.M
    )
    return (
        f"[{label}]\n"
        f"E = {p.E:.6f}\n"
        f"D = {p.D:.6f}\n"
        f"euler_deg = [{eul[0]:.4f}, {eul[1]:.4f}, {eul[2]:.4f}]\n"
        f"M = [\n    {rows}\n]\n"
    )


def main():
    gsol = fit(ground_residuals, 14, -1.0)
    esol = fit(excited_residuals, 14, 1.0)
    print("ground cost:", gsol.cost, " excited cost:", esol.cost, file=sys.stderr)
    gp, ep = unpack(gsol.x), unpack(esol.x)

    header = (
        "# 151Eu:Y2SiO5 (site 1) spin-Hamiltonian fixture.\n"
        "# Tensors calibrated by tools/calibrate_fixture.py against published\n"
        "# observables: quadrupole gaps 34.54/46.25 MHz (ground) and 102/75 MHz\n"
        "# (excited), direction-dependent effective gyromagnetic ratios\n"
        "# (4, 14, 12 kHz/mT ground; 24, 2.5 kHz/mT excited), the b-axis RF\n"
        "# transition moment (10 kHz/mT per unit drive field, i.e. mu = 20)\n"
        "# and |u1| = 0.856 on the 1/2<->3/2 ground transition at direction II.\n"
        "# Frame: lab axes are (D1, D2, b); field angles phi are in-plane.\n\n"
        "[meta]\n"
        'material = "151Eu:Y2SiO5 site 1"\n'
        "version = 1\n\n"
        "[directions]\n"
        "I = 0.0\n"
        "II = 65.0\n"
        "III = 120.0\n\n"
    )
    out = header + fmt(gp, "ground") + "\n" + fmt(ep, "excited")
    path = "src/quadspin/fixtures/eu_yso.toml"
    with open(path, "w") as fh:
        fh.write(out)
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
