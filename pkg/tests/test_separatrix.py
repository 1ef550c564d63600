import itertools

import numpy as np
import pytest

from conftest import PARAM_GRID, curve_for, grid_id
from lvresilience.errors import (FCloseToZero, InvalidParameters, NotStrongCompetition,
                                 OutOfDomain)
from lvresilience.model import NondimParams, saddle_spectrum
from lvresilience.separatrix import (SeparatrixBuildConfig, bisection_oracle,
                                     bisection_oracle_many, compute_separatrix, eval_s,
                                     integral_residual, inverse_s, knot_grid, model_separatrix,
                                     offset_discrepancy, residual_integrand, slope_field)

# s(0.5), frozen from the manifold construction; the bisection oracle agrees to ~1e-10
FROZEN = {
    (2.0, 3.0, 0.5): 0.7141366805576373,
    (2.0, 3.0, 2.0): 1.7075905635735285,
    (1.5, 4.0, 0.3): 1.2392090262321698,
    (4.0, 1.5, 3.0): 0.06583826416856356,
}


@pytest.mark.parametrize("params,value", FROZEN.items())
def test_frozen_heights(params, value):
    c = compute_separatrix(NondimParams(*params))
    assert eval_s(c, 0.5) == pytest.approx(value, abs=1e-9)


@pytest.mark.parametrize("ab", list(itertools.product((1.5, 2.0, 4.0), repeat=2)))
def test_delta_one_is_a_line(ab):
    q = NondimParams(ab[0], ab[1], 1.0)
    c = curve_for(q)
    xs = np.linspace(0.0, 2.0, 2001)
    assert np.max(np.abs(eval_s(c, xs) - c.B / c.A * xs)) < 1e-6


@pytest.mark.parametrize("q", PARAM_GRID, ids=grid_id)
def test_curve_structure(q):
    c = curve_for(q)
    assert c.x[0] == 0.0 and c.y[0] == 0.0
    assert np.all(np.diff(c.x) > 0) and np.all(np.diff(c.y) > 0)
    assert eval_s(c, c.A) == c.B
    lx, ly = c.left_branch
    assert np.all(lx < c.A) and np.all(ly < c.B)
    rx, ry = c.right_branch
    assert np.all(rx > c.A) and np.all(ry > c.B)
    xk, yk = c.resample()
    assert xk.size == 512 and xk[0] == 0.0 and xk[-1] == c.x_max
    assert np.all(np.diff(yk) > 0)


def test_slope_at_saddle_matches_m():
    q = NondimParams(2.0, 3.0, 0.5)
    c = curve_for(q)
    h = 1e-6
    d = (eval_s(c, c.A + h) - eval_s(c, c.A - h)) / (2 * h)
    assert d == pytest.approx(c.spectrum.m, rel=1e-5)


def test_model_separatrix():
    q = NondimParams(2, 3, 0.5)
    sp = saddle_spectrum(q)
    assert model_separatrix(q, sp.A) == pytest.approx(sp.B)
    assert model_separatrix(q, 0.0) == 0.0
    assert np.allclose(model_separatrix(NondimParams(2, 3, 1), [0.1, 0.3]), [0.2, 0.6])


def test_eval_s_domain():
    c = curve_for(NondimParams(2, 2, 1))
    with pytest.raises(OutOfDomain):
        eval_s(c, -0.1)
    with pytest.raises(OutOfDomain):
        eval_s(c, c.x_max + 1e-9)
    assert eval_s(c, 0.0) == 0.0


def test_inverse_s_roundtrip():
    c = curve_for(NondimParams(2.0, 4.0, 0.3))
    xs = np.array([0.05, 0.2, c.A, 0.7])
    assert np.allclose(inverse_s(c, eval_s(c, xs)), xs, atol=1e-12)
    with pytest.raises(OutOfDomain):
        inverse_s(c, -1.0)


def test_slope_field():
    q = NondimParams(2, 2, 1)
    sp = saddle_spectrum(q)
    assert slope_field((sp.A, sp.B), q) == sp.m
    assert slope_field((0.2, 0.1), q) == pytest.approx(0.1 * (1 - 0.1 - 0.4) / (0.2 * (1 - 0.2 - 0.2)))
    with pytest.raises(FCloseToZero):
        slope_field((0.5, 0.25), q)


@pytest.mark.parametrize("q", PARAM_GRID[::4], ids=grid_id)
def test_integral_residual(q):
    c = curve_for(q)
    for x in (0.1 * c.A, 0.5 * c.A, 1.5 * c.A, 0.9 * c.x_max):
        s = eval_s(c, x)
        assert abs(integral_residual(c, x)) < 1e-4 * max(s, 1e-3)


def test_integrand_vanishes_at_delta_one():
    c = curve_for(NondimParams(4.0, 1.5, 1.0))
    ts = np.linspace(1e-3, 2.0, 300)
    assert max(abs(residual_integrand(c, t)) for t in ts) < 1e-10


def test_oracle_matches_curve():
    q = NondimParams(2.0, 4.0, 0.3)
    c = curve_for(q)
    xs = np.array([0.02, 0.2, 0.6, 1.0])
    ys = bisection_oracle_many(q, xs, tol=1e-8)
    assert np.max(np.abs(ys - eval_s(c, xs))) < 1e-5
    assert bisection_oracle(q, 0.2, tol=1e-8) == pytest.approx(ys[1], abs=2e-8)


def test_offset_consistency():
    for q in (NondimParams(2, 3, 0.3), NondimParams(4, 1.5, 3)):
        assert offset_discrepancy(q) < 1e-8


def test_extreme_delta_builds():
    lo = compute_separatrix(NondimParams(2, 3, 0.01))
    hi = compute_separatrix(NondimParams(2, 3, 100.0))
    assert np.all(np.diff(lo.y) > 0) and np.all(np.diff(hi.y) > 0)
    # for large delta the right branch rises almost vertically and hits the height cap
    assert hi.x_max < 1.0 and eval_s(hi, hi.x_max) > 1.0


def test_build_errors():
    with pytest.raises(NotStrongCompetition):
        compute_separatrix(NondimParams(0.9, 2, 1))
    with pytest.raises(InvalidParameters):
        compute_separatrix(NondimParams(2, 2, 1), SeparatrixBuildConfig(x_max=0.2))


def test_knot_grid_contains_anchors():
    g = knot_grid(0.25, 2.0, 64)
    assert g.size == 64 and g[0] == 0.0 and g[-1] == 2.0 and 0.25 in g
    assert np.all(np.diff(g) > 0)
