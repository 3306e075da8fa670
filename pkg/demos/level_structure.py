"""Level structure of the shipped fixture: g-factors per field direction.

For each of the three static-field directions, solve the quadrupole +
Zeeman problem for both electronic manifolds and print the doublet
energies, first-order g-factors, and the RF coupling amplitudes between
the two lowest ground doublets.  Writes levels.csv next to this script.
"""

import csv
from pathlib import Path

import numpy as np

import quadspin.levels as lv
from quadspin.fixture import builtin_fixture
from quadspin.spin_algebra import SpinQuantum

OUT = Path(__file__).with_name("levels.csv")


def main():
    fx = builtin_fixture()
    spin = SpinQuantum(3)
    z = np.array([0.0, 0.0, 1.0])
    rows = []
    for direction in sorted(fx.directions):
        for name, params in (("ground", fx.ground), ("excited", fx.excited)):
            st = lv.solve_levels(params, fx.field(direction, 1.0), spin)
            print(f"direction {direction}, {name}:")
            for k in range(st.n):
                print(f"  |+-{st.labels[k]}/2>  E = {st.energies[k]:8.2f} MHz"
                      f"   g = {st.g[k]:6.3f} kHz/mT")
                rows.append((direction, name, st.labels[k],
                             st.energies[k], st.g[k]))
            if name == "ground":
                c = lv.transition_coupling(st, st.doublet_index(1),
                                           st.doublet_index(3), z)
                print(f"  RF coupling 1/2 <-> 3/2: |u1| = {abs(c.u1):.3f},"
                      f" |u2| = {abs(c.u2):.3f}")
    with open(OUT, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["direction", "manifold", "m_doublet_x2",
                    "energy_mhz", "g_khz_per_mt"])
        w.writerows(rows)
    print(f"\nwrote {OUT}")


if __name__ == "__main__":
    main()
