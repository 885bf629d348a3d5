import math

import numpy as np
import pytest

from rabispec import analytic, rabi
from rabispec.errors import ConvergenceError, TruncationLeakageError


def test_closed_form_at_zero_coupling():
    for n in range(6):
        assert analytic.delta_n_closed_form(1.7, 0.0, n) == 1.7


def test_closed_form_one_photon_zero():
    # L_1(4 beta^2) vanishes at beta = 1/2
    assert analytic.delta_n_closed_form(2.0, 0.5, 1) == 0.0


def test_closed_form_strong_coupling_value():
    delta, beta = 1.68, 7.27 / 6.345
    got = analytic.delta_n_closed_form(delta, beta, 0)
    assert got == pytest.approx(delta * math.exp(-2.0 * beta**2), rel=1e-13)
    assert abs(got - 0.1216) < 1e-3  # close to the tabulated 0.122


def test_closed_form_validates():
    with pytest.raises(ValueError):
        analytic.delta_n_closed_form(0.0, 0.5, 1)
    with pytest.raises(ValueError):
        analytic.delta_n_closed_form(1.0, -0.1, 1)


def test_two_photon_zeros():
    z1, z2 = analytic.delta_2_zeros()
    assert abs(z1 - 0.3827) < 1e-3
    assert abs(z2 - 0.9239) < 1e-3
    from rabispec.specfun import laguerre

    assert abs(laguerre(2, 4.0 * z1**2)) < 1e-12
    assert abs(laguerre(2, 4.0 * z2**2)) < 1e-12


def test_overlap_trivial_point():
    res = analytic.overlap_integral(0, 0.0)
    assert res.value_closed_form == 1.0
    assert res.value_quadrature == pytest.approx(1.0, abs=1e-10)


def test_overlap_quadrature_matches_closed_form():
    for n in range(6):
        for beta in np.linspace(0.0, 2.0, 21):
            res = analytic.overlap_integral(n, float(beta))
            assert abs(res.value_quadrature - res.value_closed_form) < 1e-8


def test_overlap_two_photon_extrema():
    # stationary points of e^(-2b^2) L_2(4b^2) solve x^2 - 8x + 10 = 0
    # with x = 4 b^2, giving the interior minimum and maximum below
    b_min = math.sqrt(4.0 - math.sqrt(6.0)) / 2.0
    b_max = math.sqrt(4.0 + math.sqrt(6.0)) / 2.0
    grid = np.linspace(0.0, 1.6, 161)
    ratio = np.array(
        [analytic.overlap_integral(2, float(b)).value_quadrature for b in grid]
    )
    assert grid[int(np.argmin(ratio))] == pytest.approx(b_min, abs=0.01)
    interior = (grid > 1.0) & (grid < 1.6)
    assert grid[interior][int(np.argmax(ratio[interior]))] == pytest.approx(
        b_max, abs=0.01
    )
    assert b_min == pytest.approx(0.622, abs=1e-3)
    assert b_max == pytest.approx(1.27, abs=2e-3)


def test_overlap_reports_bad_quadrature():
    with pytest.raises(ConvergenceError):
        analytic.overlap_integral(5, 2.0, num_points=51)


def test_cat_state_bare_limit():
    p = rabi.CircuitParams(delta=1.2, omega=6.0, g=0.0)
    cat = analytic.cat_state(p, ("g", 0), 10)
    want = np.zeros(22)
    want[0] = want[11] = 1.0 / math.sqrt(2.0)
    assert np.allclose(cat.amplitudes, want, atol=1e-14)
    assert cat.leakage == pytest.approx(0.0, abs=1e-14)


def test_cat_state_equal_weight_branches():
    # equal-weight superposition of the two persistent-current branches
    p = rabi.CircuitParams(delta=1.68, omega=6.345, g=7.27)
    for kind in ("g", "e"):
        cat = analytic.cat_state(p, (kind, 1), 40)
        upper, lower = cat.amplitudes[:41], cat.amplitudes[41:]
        assert np.linalg.norm(upper) == pytest.approx(np.linalg.norm(lower), abs=1e-12)
        # opposite displacements mirror each Fock amplitude up to a sign
        assert np.allclose(np.abs(upper), np.abs(lower), atol=1e-12)


def test_cat_states_orthogonal():
    p = rabi.CircuitParams(delta=1.68, omega=6.345, g=7.27)
    for n in range(3):
        g_cat = analytic.cat_state(p, ("g", n), 40)
        e_cat = analytic.cat_state(p, ("e", n), 40)
        assert abs(g_cat.amplitudes @ e_cat.amplitudes) < 1e-9


def test_cat_state_leakage_reported():
    p = rabi.CircuitParams(delta=1.0, omega=6.0, g=9.0)  # beta = 1.5
    with pytest.raises(TruncationLeakageError):
        analytic.cat_state(p, ("g", 2), 4)


def test_cat_fidelity_strong_coupling(reference):
    fid = analytic.cat_state_fidelity(reference["H"].params, ("g", 0), 40)
    assert fid > 0.99


def test_cat_fidelity_all_reference_sets(reference):
    for ref in reference.values():
        assert ref.params.delta < ref.params.omega
        for kind in ("g", "e"):
            assert analytic.cat_state_fidelity(ref.params, (kind, 0), 40) > 0.95


def test_shift_curves_rows():
    rows = analytic.normalized_shift_curves(np.array([0.0, 0.5, 7.27 / 6.345]), 2)
    assert np.allclose(rows[0], [0.0, 1.0, 1.0, 1.0])
    assert rows[1, 2] == 0.0  # one-photon curve crosses zero at beta = 1/2
    beta = 7.27 / 6.345
    assert rows[2, 1] == pytest.approx(math.exp(-2.0 * beta**2), rel=1e-12)
    assert rows[2, 1] == pytest.approx(0.0724, abs=1e-4)


def test_numeric_vs_closed_no_coupling():
    p = rabi.CircuitParams(delta=1.2, omega=6.0, g=0.0)
    numeric, closed = analytic.delta_n_numeric_vs_closed(p, 20, 1)
    assert numeric == pytest.approx(1.2, abs=1e-9)
    assert closed == 1.2


def test_numeric_vs_closed_set_b(reference):
    numeric, _ = analytic.delta_n_numeric_vs_closed(reference["B"].params, 40, 0)
    assert numeric == pytest.approx(0.229, abs=2e-3)


def test_numeric_vs_closed_differ_at_large_delta(reference):
    # delta/omega = 0.933: the asymptotic formula is visibly off the numerics
    p = reference["E"].params
    numeric, closed = analytic.delta_n_numeric_vs_closed(p, 40, 1)
    assert numeric == pytest.approx(-1.741, abs=2e-3)
    beta = p.beta
    want_closed = p.delta * math.exp(-2 * beta**2) * (1.0 - 4.0 * beta**2)
    assert closed == pytest.approx(want_closed, rel=1e-12)
    assert abs(numeric - closed) > 0.1


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_sign_alternation(n):
    beta = np.linspace(1e-6, 3.0, 2000)
    values = np.array([analytic.delta_n_closed_form(1.0, float(b), n) for b in beta])
    changes = int(np.sum(np.abs(np.diff(np.sign(values))) > 1))
    assert changes == n
