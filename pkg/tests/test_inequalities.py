import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ch2lab import fixtures as fx
from ch2lab.errors import RejectedInputError
from ch2lab.inequalities import (AB_NAMES, ab_lhs, assemble_constants, check_a2, check_ab,
                                 check_lemma11, check_prop15, eq_report, le_report, main_estimate,
                                 random_analytic_field, run_case, section_signs, sectional_bounds,
                                 sectional_terms, summarize)
from ch2lab.spectral import Grid
from ch2lab.system import State, SystemParams, pairing


def test_tolerance_policy():
    assert le_report("x", 1.0 + 5e-10, 1.0).passed
    assert not le_report("x", 1.0 + 2e-9, 1.0).passed
    assert le_report("x", 5e-13, 0.0).passed
    assert eq_report("x", 1.0, 1.0 + 5e-11).passed
    assert not eq_report("x", 1.0, 1.0 + 5e-10).passed


def test_lemma11_gaussian(grid):
    g = fx.gaussian(grid)
    reps = check_lemma11(g, g, g, 2.0)
    assert all(r.passed for r in reps)
    names = {r.name for r in reps}
    for item in ("i", "ii", "iii", "iv", "v", "vi"):
        assert f"lemma11.{item}" in names


def test_lemma11_skips_below_threshold(grid):
    g = fx.gaussian(grid)
    reps = {r.name: r for r in check_lemma11(g, g, g, 0.5)}
    assert reps["lemma11.ii"].kind == "skip"
    assert reps["lemma11.v"].kind == "skip"
    assert reps["lemma11.vi"].kind == "skip"


def test_product_specialisation_is_loose_on_gaussian(grid):
    # ||g^2||_1 = 1.6305 against 4 ||g||_1^2 = 10.0265 (closed-form oracle)
    g = fx.gaussian(grid)
    rep = {r.name: r for r in check_lemma11(g, g, g, 2.0)}["lemma11.vi.four"]
    assert rep.lhs == pytest.approx(1.6305461589167827177, rel=1e-12)
    assert rep.rhs == pytest.approx(10.02651309852400201, rel=1e-12)


def test_prop15_rejects_bad_deltas(grid):
    g = fx.gaussian(grid)
    with pytest.raises(RejectedInputError):
        check_prop15(g, g, 0.5, 0.5, 2)
    with pytest.raises(RejectedInputError):
        check_prop15(g, g, 0.2, 0.5, 1.5)


def test_prop15_sech(grid):
    u, v = fx.sech(grid), fx.sech2(grid, 0.5)
    assert all(r.passed for r in check_prop15(u, v, 0.1, 0.3, 2.0))


def test_ab_rejects_negative():
    with pytest.raises(RejectedInputError):
        ab_lhs([1.0, -1.0, 0.5], [1.0, 1.0, 1.0], 2)
    with pytest.raises(RejectedInputError):
        ab_lhs([1.0, 1.0], [1.0, 1.0, 1.0], 2)


def test_ab_zero_sequences():
    reps = check_ab(np.zeros(5), np.zeros(5), 4)
    assert [r.name for r in reps] == list(AB_NAMES)
    assert all(r.passed and r.lhs == 0 and r.rhs == 0 for r in reps)


@settings(max_examples=100, deadline=None)
@given(m=st.integers(1, 30), seed=st.integers(0, 2**32 - 1), rate=st.floats(0.0, 3.0))
def test_ab_bounds_property(m, seed, rate):
    rng = np.random.default_rng(seed)
    a = rng.uniform(size=m + 1) * np.exp(-rate * np.arange(m + 1))
    b = rng.uniform(size=m + 1) * np.exp(-rate * np.arange(m + 1))
    assert all(r.passed for r in check_ab(a, b, m))


def test_a2_relations(gauss_state):
    reps = check_a2(gauss_state, -0.5, 4)
    assert all(r.passed for r in reps)
    assert reps[2].kind == "eq"


def test_sectional_terms_reassemble_pairing(strip_state):
    for p in (SystemParams(0.0, 1.0), SystemParams(1.3, 2.5), SystemParams(-0.4, 0.2)):
        terms = sectional_terms(strip_state, -0.7, 4)
        combo = float(section_signs(p) @ terms)
        assert combo == pytest.approx(pairing(strip_state, p, -0.7, 4), rel=1e-12, abs=1e-15)


def test_sectional_and_main(strip_state, params):
    assert all(r.passed for r in sectional_bounds(strip_state, params, -1.0, 4))
    rep = main_estimate(strip_state, params, -1.0, 4)
    assert rep.passed
    assert rep.lhs <= rep.extra["triangle"] * (1 + 1e-12) <= rep.rhs
    assert rep.rhs <= rep.extra["shaped_rhs"] * (1 + 1e-12)


def test_assembled_constants_beta_one():
    k = assemble_constants(SystemParams(0.0, 1.0), 0.0)
    assert k["K1"] == 5.0
    # 96 + 192 + 32 + 8 + 82 at sigma = 0
    assert k["K2"] == pytest.approx(410.0)
    assert k["L1"] == pytest.approx(8 * math.pi / math.sqrt(6))
    assert k["M1"] == 2.0 and k["M3"] == 4.0
    assert k["M2"] == pytest.approx(16 + 32 + 8 + 8)


def test_random_field_band_limited(grid, rng):
    f = random_analytic_field(grid, rng, 1.0)
    assert np.all(f.spectrum[np.abs(grid.xi) > grid.N / (6 * grid.P)] == 0)
    assert np.abs(f.samples).max() > 0
    np.testing.assert_allclose(f.spectrum[1], np.conj(f.spectrum[-1]))


def test_run_case_deterministic(small_grid, params):
    a = [r.lhs for r in run_case(small_grid, 7, params)]
    b = [r.lhs for r in run_case(small_grid, 7, params)]
    assert a == b


def test_summarize_counts(small_grid, params):
    reps = run_case(small_grid, 1, params) + run_case(small_grid, 2, params)
    s = summarize(reps)
    assert s["est1"]["count"] == 2 and s["est1"]["failures"] == 0
    assert s["main_estimate"]["min_margin"] > 0


def test_scaled_fixture_equalities(grid):
    # the identity reports survive rescaling by large factors
    u = 1e3 * fx.sech(grid)
    st = State(u, u)
    assert check_a2(st, -1.0, 3)[2].passed
