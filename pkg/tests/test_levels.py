import numpy as np
import pytest

import quadspin.levels as lv
from quadspin.fixture import builtin_fixture, load_fixture, FixtureMissing
from quadspin.spin_algebra import SpinQuantum

SPIN = SpinQuantum(3)
FX = builtin_fixture()
Z = np.array([0.0, 0.0, 1.0])


def solve(manifold, direction, B=1.0):
    params = FX.ground if manifold == "ground" else FX.excited
    return lv.solve_levels(params, FX.field(direction, B), SPIN)


def test_three_doublets_increasing():
    st = solve("ground", "I")
    assert st.n == 3
    assert np.all(np.diff(st.energies) > 0)
    assert set(st.labels) == {1, 3, 5}


def test_eigenbasis_unitary():
    st = solve("ground", "II")
    U = st.eigenbasis
    assert np.linalg.norm(U @ U.conj().T - np.eye(6)) <= 1e-10


def test_g_factors_positive_and_linear():
    st1 = solve("ground", "I", B=1.0)
    st2 = solve("ground", "I", B=2.0)
    assert np.all(st1.g > 0)
    # first-order splittings scale linearly with the field
    assert np.allclose(st2.delta, 2.0 * st1.delta, rtol=1e-3)


def test_quadrupole_gaps_match_fixture_targets():
    st = solve("ground", "I")
    gaps = np.diff(st.energies)
    assert gaps[0] == pytest.approx(34.54e0, rel=0.05)
    assert gaps[1] == pytest.approx(46.25e0, rel=0.05)
    ste = solve("excited", "I")
    egaps = np.diff(ste.energies)
    assert egaps[0] == pytest.approx(102.0, rel=0.05)
    assert egaps[1] == pytest.approx(75.0, rel=0.05)


def test_transition_coupling_su2():
    st = solve("ground", "II")
    c = lv.transition_coupling(st, st.doublet_index(1), st.doublet_index(3), Z)
    U = np.array([[c.u1, -np.conj(c.u2)], [c.u2, np.conj(c.u1)]])
    assert abs(abs(c.u1) ** 2 + abs(c.u2) ** 2 - 1.0) <= 1e-9
    assert np.linalg.norm(U @ U.conj().T - np.eye(2)) <= 1e-9


def test_optical_coupling_unitary():
    stg = solve("ground", "I")
    ste = solve("excited", "I")
    c = lv.optical_coupling(stg, ste, stg.doublet_index(5), ste.doublet_index(1))
    assert np.linalg.norm(c.U @ c.U.conj().T - np.eye(2)) <= 1e-9


def test_missing_fixture_raises():
    with pytest.raises(FixtureMissing):
        load_fixture("/nonexistent/fixture.toml")


def test_unknown_direction_raises():
    with pytest.raises(KeyError):
        FX.field("IV", 1.0)
