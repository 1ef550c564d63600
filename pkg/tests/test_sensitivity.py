import numpy as np
import pytest

from conftest import PARAM_GRID, curve_for, grid_id
from lvresilience.errors import InvalidParameters, NotStrongCompetition
from lvresilience.model import NondimParams, coexistence_point
from lvresilience.separatrix import eval_s
from lvresilience.sensitivity import (PARAM_NAMES, coefficient_a, coefficient_b, dAB_dparam,
                                      finite_difference_sensitivity, initial_value_C,
                                      monotonicity_report, regular_expansion,
                                      sensitivity_table, separatrix_sensitivity)

# z at x = 0.2 and 0.6 for alpha = beta = 2, delta = 0.5 (A = 1/3)
FROZEN = {
    "alpha": (-0.2146708310486353, -0.4082035340769812),
    "beta": (0.17388701887428948, 0.36296868007501376),
    "delta": (-0.11443103836100892, 0.25107755252737385),
}


def test_dAB_symmetric_values():
    assert dAB_dparam(NondimParams(2, 2, 1)) == pytest.approx((1 / 9, -2 / 9, -2 / 9, 1 / 9))


@pytest.mark.parametrize("ab", [(1.5, 4.0), (3.0, 1.2), (2.0, 2.0)])
def test_dAB_finite_differences(ab):
    a, b = ab
    dA_da, dB_da, dA_db, dB_db = dAB_dparam(NondimParams(a, b, 1))
    assert (dA_da > 0, dB_da < 0, dA_db < 0, dB_db > 0) == (True,) * 4
    h = 1e-5
    fd = lambda i, j: (coexistence_point(NondimParams(a + h * (j == 0), b + h * (j == 1), 1))[i]
                       - coexistence_point(NondimParams(a - h * (j == 0), b - h * (j == 1), 1))[i]
                       ) / (2 * h)
    assert dA_da == pytest.approx(fd(0, 0), rel=1e-6)
    assert dB_da == pytest.approx(fd(1, 0), rel=1e-6)
    assert dA_db == pytest.approx(fd(0, 1), rel=1e-6)
    assert dB_db == pytest.approx(fd(1, 1), rel=1e-6)


def test_initial_value_C():
    q = NondimParams(2, 2, 1)
    assert initial_value_C(q, "alpha") == pytest.approx(-1 / 3)
    assert initial_value_C(q, "beta") == pytest.approx(1 / 3)
    assert initial_value_C(NondimParams(1.7, 3.1, 0.2), "delta") == 0.0
    with pytest.raises(InvalidParameters):
        initial_value_C(q, "gamma")
    with pytest.raises(NotStrongCompetition):
        dAB_dparam(NondimParams(0.5, 2, 1))


@pytest.mark.parametrize("name", PARAM_NAMES)
def test_frozen_values(name):
    c = curve_for(NondimParams(2, 2, 0.5))
    z = separatrix_sensitivity(c, name, [0.2, 0.6]).z
    assert z == pytest.approx(FROZEN[name], rel=1e-7)


def test_value_at_saddle_is_C():
    c = curve_for(NondimParams(2, 2, 1))
    for name in PARAM_NAMES:
        sol = separatrix_sensitivity(c, name, [c.A])
        assert sol.z[0] == pytest.approx(sol.C, abs=1e-15)
        assert sol.samples == [(c.A, sol.z[0])]


def test_delta_one_symmetric_exact():
    # s = x along the diagonal family alpha = beta; z = -x, +x for alpha, beta
    c = curve_for(NondimParams(2, 2, 1))
    xs = np.array([0.05, 0.2, 0.5, 1.2])
    assert np.allclose(separatrix_sensitivity(c, "alpha", xs).z, -xs, rtol=1e-8)
    assert np.allclose(separatrix_sensitivity(c, "beta", xs).z, xs, rtol=1e-8)


@pytest.mark.parametrize("q", PARAM_GRID[::3], ids=grid_id)
def test_matches_finite_differences(q):
    c = curve_for(q)
    xs = np.array([0.5 * c.A, min(2 * c.A, c.x_max)])
    for name in PARAM_NAMES:
        z = separatrix_sensitivity(c, name, xs).z
        fd = finite_difference_sensitivity(q, name, xs)
        assert np.all(np.abs(z - fd) <= 1e-3 * np.abs(fd))


def test_pole_of_a_at_saddle():
    # u a(A + u) tends to a nonzero negative residue from both sides
    q = NondimParams(2, 2, 1)
    c = curve_for(q)
    for sign in (1, -1):
        u = sign * np.array([1e-3, 1e-4, 1e-5])
        r = u * coefficient_a(q, c.A + u, eval_s(c, c.A + u))
        assert np.all(r < 0)
        assert r[-1] == pytest.approx(-1 / 3, rel=1e-3)


@pytest.mark.parametrize("q", PARAM_GRID, ids=grid_id)
def test_b_sign_pattern(q):
    c = curve_for(q)
    xs = np.linspace(1e-3, c.x_max, 500)
    xs = xs[np.abs(xs - c.A) > 1e-6]
    ys = eval_s(c, xs)
    left = xs < c.A
    ba = coefficient_b(q, "alpha", xs, ys)
    bb = coefficient_b(q, "beta", xs, ys)
    assert np.all(ba[left] > 0) and np.all(ba[~left] < 0)
    assert np.all(bb[left] < 0) and np.all(bb[~left] > 0)
    assert np.all(coefficient_b(q, "delta", xs, ys) > 0)


@pytest.mark.parametrize("q", PARAM_GRID[1::5], ids=grid_id)
def test_seeding_robust(q):
    c = curve_for(q)
    xs = np.array([c.A - 2e-4, c.A + 2e-4, 0.5 * c.A, 1.5 * c.A])
    for name in PARAM_NAMES:
        z4 = separatrix_sensitivity(c, name, xs, h_start=1e-4).z
        z5 = separatrix_sensitivity(c, name, xs, h_start=1e-5).z
        assert np.max(np.abs(z4 - z5)) < 1e-6


def test_regular_expansion_first_order():
    c = curve_for(NondimParams(2, 3, 0.5))
    C = initial_value_C(c.params, "alpha")
    z1, _ = regular_expansion(c, "alpha", C)
    z = separatrix_sensitivity(c, "alpha", [c.A - 1e-3, c.A + 1e-3]).z
    assert (z[1] - z[0]) / 2e-3 == pytest.approx(z1, rel=1e-4)


def test_delta_sign_matches_log_at_delta_one():
    c = curve_for(NondimParams(2, 3, 1))
    xs = np.array([0.05, 0.1, 0.15, 0.3, 0.8])
    z = separatrix_sensitivity(c, "delta", xs).z
    assert np.array_equal(np.sign(z), np.sign(np.log(xs / c.A)))


def test_monotonicity_report_passes():
    q = NondimParams(2.5, 1.8, 0.6)
    rows = monotonicity_report(q, np.linspace(0.01, 1.0, 40))
    assert len(rows) == 120 and all(r.ok for r in rows)


def test_table_and_grid_checks():
    c = curve_for(NondimParams(2, 3, 1))
    t = sensitivity_table(c, [0.1, 0.5])
    assert t.shape == (2, 4)
    with pytest.raises(InvalidParameters):
        separatrix_sensitivity(c, "alpha", [0.0, 0.5])
    with pytest.raises(InvalidParameters):
        separatrix_sensitivity(c, "alpha", [c.x_max + 1])
