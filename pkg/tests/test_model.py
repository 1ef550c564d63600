import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lvresilience.errors import InvalidParameters, NotStrongCompetition
from lvresilience.model import (DimensionalParams, NondimParams, Regime, classify_regime,
                                coexistence_point, equilibria, jacobian, nondimensionalize,
                                require_strong, saddle_spectrum, stability_label,
                                tangent_lines, vector_field)

strong = st.floats(1.01, 10.0)
rates = st.floats(0.01, 100.0)


def test_nondimensionalize_unit_scales():
    q = nondimensionalize(DimensionalParams(r_N=1, r_I=1, K_N=1, K_I=1, a=2, b=3))
    assert (q.alpha, q.beta, q.delta) == (2.0, 3.0, 1.0)


def test_nondimensionalize_general():
    q = nondimensionalize(DimensionalParams(r_N=2, r_I=5, K_N=4, K_I=8, a=1.5, b=0.75))
    assert q.alpha == pytest.approx(1.5 * 8 / 4)
    assert q.beta == pytest.approx(0.75 * 4 / 8)
    assert q.delta == pytest.approx(2.5)


@pytest.mark.parametrize("bad", [0.0, -1.0, math.nan, math.inf])
def test_params_reject_nonpositive(bad):
    with pytest.raises(InvalidParameters):
        NondimParams(bad, 2.0, 1.0)
    with pytest.raises(InvalidParameters):
        DimensionalParams(1, 1, 1, 1, bad, 1)


def test_replace_and_dict():
    q = NondimParams(2, 3, 1)
    assert q.replace(delta=0.5) == NondimParams(2, 3, 0.5)
    assert q.as_dict() == {"alpha": 2.0, "beta": 3.0, "delta": 1.0}


def test_regime():
    assert classify_regime(NondimParams(2, 2, 1)).kind is Regime.STRONG
    r = classify_regime(NondimParams(0.5, 2, 1))
    assert r.kind is Regime.OTHER and "alpha" in r.condition
    with pytest.raises(NotStrongCompetition) as info:
        require_strong(NondimParams(2, 1.0, 1))
    assert "beta" in info.value.condition


def test_vector_field_vectorized():
    q = NondimParams(2, 3, 0.5)
    xs = np.array([0.1, 0.4])
    ys = np.array([0.2, 0.7])
    f, g = vector_field((xs, ys), q)
    for i in range(2):
        fi, gi = vector_field((xs[i], ys[i]), q)
        assert f[i] == fi and g[i] == gi


def test_equilibria_symmetric():
    eq = equilibria(NondimParams(2, 2, 1))
    assert eq.PC == pytest.approx((1 / 3, 1 / 3))
    assert eq.labels == {"P0": "unstable node", "PN": "stable node",
                         "PI": "stable node", "PC": "saddle"}
    assert eq.warning is None


def test_equilibria_weak_regime_warns():
    eq = equilibria(NondimParams(0.5, 0.5, 1))
    assert eq.warning is not None
    # weak competition: interior point exists and is stable
    assert eq.labels["PC"] == "stable node"
    with pytest.raises(NotStrongCompetition):
        equilibria(NondimParams(0.5, 2, 1), strict=True)


def test_equilibria_no_interior_point():
    eq = equilibria(NondimParams(0.5, 2, 1))
    assert eq.PC is None and "PC" not in eq.labels


def test_spectrum_symmetric_values():
    sp = saddle_spectrum(NondimParams(2, 2, 1))
    assert sp.A == pytest.approx(1 / 3) and sp.B == pytest.approx(1 / 3)
    assert sp.m == pytest.approx(1.0)
    assert sp.m_u == pytest.approx(-1.0)
    assert sp.lambda1 == pytest.approx(-1.0)
    assert sp.lambda2 == pytest.approx(1 / 3)


def test_spectrum_delta_one_slope():
    sp = saddle_spectrum(NondimParams(2, 3, 1))
    assert sp.m == pytest.approx(sp.B / sp.A, rel=1e-14)


@settings(max_examples=100, deadline=None)
@given(strong, strong, rates)
def test_spectrum_matches_eig(alpha, beta, delta):
    q = NondimParams(alpha, beta, delta)
    sp = saddle_spectrum(q)
    J = jacobian((sp.A, sp.B), q)
    w, V = np.linalg.eig(J)
    order = np.argsort(w.real)
    w, V = w.real[order], V.real[:, order]
    assert sp.lambda1 == pytest.approx(w[0], rel=1e-9, abs=1e-13)
    assert sp.lambda2 == pytest.approx(w[1], rel=1e-9, abs=1e-13)
    assert sp.lambda1 < 0 < sp.lambda2
    assert sp.m > 0 > sp.m_u
    assert np.allclose(J @ np.array(sp.v1), sp.lambda1 * np.array(sp.v1),
                       rtol=1e-8, atol=1e-10 * max(1.0, abs(sp.lambda1)))


def test_coexistence_point_formula():
    a, b = coexistence_point(NondimParams(2, 3, 1))
    assert (a, b) == pytest.approx((0.2, 0.4))


def test_stability_label_cases():
    assert stability_label(np.diag([-1.0, -2.0])) == "stable node"
    assert stability_label(np.diag([1.0, 2.0])) == "unstable node"
    assert stability_label(np.diag([-1.0, 2.0])) == "saddle"


def test_tangent_lines_pass_through_saddle():
    sp = saddle_spectrum(NondimParams(2, 3, 0.5))
    ys, yu = tangent_lines(sp, sp.A)
    assert ys == pytest.approx(sp.B) and yu == pytest.approx(sp.B)


@settings(max_examples=20, deadline=None)
@given(strong, strong, rates, st.integers(0, 2**31 - 1))
def test_sign_regions(alpha, beta, delta, seed):
    # K_L = (0, A) x (0, B), K_R = (A, inf) x (B, inf)
    q = NondimParams(alpha, beta, delta)
    A, B = coexistence_point(q)
    rng = np.random.default_rng(seed)
    x = rng.uniform(0, A, 200)
    y = rng.uniform(0, B, 200)
    f, g = vector_field((x, y), q)
    assert np.all(f > 0) and np.all(g > 0)
    x = A + rng.uniform(0, 2, 200)
    y = B + rng.uniform(0, 2, 200)
    f, g = vector_field((x, y), q)
    assert np.all(f < 0) and np.all(g < 0)
