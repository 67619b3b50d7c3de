import math

import numpy as np
import pytest

from ch2lab import fixtures as fx
from ch2lab.errors import DivergentIntegralError, IncompatibleGridError, RejectedInputError
from ch2lab.spectral import Grid, derivative, make_field, sobolev_norm
from ch2lab.system import (State, SystemParams, algebra_constants, d_squared, pairing, rhs,
                           weighted_h2_pairing)


def test_algebra_constants_closed_forms():
    a1, a2 = algebra_constants(1), algebra_constants(2)
    assert a1.d_s == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    assert a1.c_small_s == pytest.approx(math.sqrt(5 * math.pi), rel=1e-14)
    assert a2.c_small_s == pytest.approx(math.sqrt(17 * math.pi / 2), rel=1e-14)
    assert a2.c_s == 8.0 and a2.C_s == 144.0


def test_noninteger_d_squared_quadrature():
    # Beta-function closed form: sqrt(pi) Gamma(s - 1/2) / Gamma(s)
    s = 1.7
    expect = math.sqrt(math.pi) * math.gamma(s - 0.5) / math.gamma(s)
    assert d_squared(s) == pytest.approx(expect, rel=1e-11)


def test_d_squared_divergent():
    with pytest.raises(DivergentIntegralError):
        d_squared(0.5)


def test_c_s_override():
    assert algebra_constants(2, 10.0).C_s == 180.0
    with pytest.raises(RejectedInputError):
        algebra_constants(2, -1.0)


def test_rhs_closed_form_trig():
    # u = cos x, v = 0, alpha = 0, beta = 1:
    # -u u_x = sin(2x)/2 and u^2 + u_x^2/2 = 3/4 + cos(2x)/4, so F1 = 3/5 sin(2x), F2 = sin x
    g = Grid(1, 64)
    u = make_field(g, np.cos)
    F = rhs(State(u, 0 * u), SystemParams(0.0, 1.0))
    x = g.x
    assert np.abs(F.u.samples - 0.6 * np.sin(2 * x)).max() < 1e-14
    assert np.abs(F.v.samples - np.sin(x)).max() < 1e-13


def test_rhs_zero_state(grid, params):
    F = rhs(State.zeros(grid), params)
    assert F.u.is_zero() and F.v.is_zero()


def test_rhs_mean_free(gauss_state, params):
    F = rhs(gauss_state, SystemParams(0.7, 1.3))
    assert abs(F.u.spectrum[0]) == 0.0 and abs(F.v.spectrum[0]) == 0.0


def test_state_basics(grid, small_grid):
    st = State(fx.gaussian(grid), fx.gaussian(grid, -2.0))
    assert st.min_v() == pytest.approx(-2.0)
    assert not st.is_admissible()
    with pytest.raises(IncompatibleGridError):
        State(fx.gaussian(grid), fx.gaussian(small_grid))
    with pytest.raises(AttributeError):
        st.u = None


def test_global_admissibility():
    assert SystemParams(0, 1).globally_admissible
    assert not SystemParams(0, 2).globally_admissible
    assert not SystemParams(0, -0.1).globally_admissible


def test_weighted_pairing_single_term(gauss_state):
    u = gauss_state.u
    val = weighted_h2_pairing(u, u, -0.4, 1, 1, 1)
    assert val == pytest.approx(sobolev_norm(derivative(u), 2) ** 2, rel=1e-13)


def test_pairing_zero_for_zero(grid, params):
    assert pairing(State.zeros(grid), params, -1.0, 4) == 0.0
