import math

import pytest

from kratzerml.oracle import (
    NonIntegrableError,
    QuadratureResult,
    QuadratureSpec,
    ToleranceError,
    correction_via_expectations,
    expectation_inverse_power,
    expectation_potential,
    expectation_potential_sq,
)
from kratzerml.physmodel import (
    KratzerCouplings,
    Molecule,
    QuantumNumbers,
    couplings_from_kratzer,
    gamma_of,
)
from kratzerml.spectrum import (
    correction_general,
    energy_unperturbed,
    matrix_element_closed,
)
from kratzerml.wavefunctions import make_radial_state

H2 = Molecule("H2", 78844.9005, 0.73652, 0.5039, zpe_exp_cm1=2179.3)

GL = QuadratureSpec(scheme="gauss-laguerre")


def test_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(scheme="monte-carlo")
    with pytest.raises(ValueError):
        QuadratureSpec(rel_tol=1e-13)
    with pytest.raises(ValueError):
        QuadratureSpec(abs_tol=-1.0)
    default = QuadratureSpec()
    assert default.scheme == "adaptive"
    assert default.rel_tol == 1e-10


def test_result_certification():
    spec = QuadratureSpec()
    assert QuadratureResult(1.0, 1e-11, "adaptive").within(spec)
    assert not QuadratureResult(1.0, 1e-9, "adaptive").within(spec)


def test_norm_integral_both_schemes():
    state = make_radial_state(5.0, QuantumNumbers(2, 1), 1.0)
    for spec in (QuadratureSpec(), GL):
        out = expectation_inverse_power(0, state, spec)
        assert out.value == pytest.approx(1.0, abs=1e-10)
        assert out.scheme == spec.scheme


def test_moments_match_closed_forms():
    """Quadrature oracle vs closed forms, both backends, to 1e-8."""
    for gamma in (2.0, 5.0, 35.755):
        for n in (0, 2):
            for l in (0, 2):
                qn = QuantumNumbers(n, l)
                state = make_radial_state(gamma, qn, 1.0)
                scale = gamma * gamma  # s = gamma^2 / re with re = 1
                for p in (1, 2, 3, 4):
                    closed = matrix_element_closed(p, qn, state.shape, scale)
                    a = expectation_inverse_power(p, state).value
                    g = expectation_inverse_power(p, state, GL).value
                    assert a == pytest.approx(closed, rel=1e-8)
                    assert g == pytest.approx(closed, rel=1e-8)
                    assert a == pytest.approx(g, rel=1e-8)


def test_moment_power_validation():
    state = make_radial_state(2.0, QuantumNumbers(0, 0), 1.0)
    with pytest.raises(ValueError):
        expectation_inverse_power(5, state)
    with pytest.raises(ValueError):
        expectation_inverse_power(-1, state)


def test_shallow_state_not_integrable():
    # 2 lam - 4 <= -1 for gamma = 0.5, l = 0: the r^-4 moment diverges
    state = make_radial_state(0.5, QuantumNumbers(0, 0), 1.0)
    with pytest.raises(NonIntegrableError):
        expectation_inverse_power(4, state)
    with pytest.raises(NonIntegrableError):
        expectation_potential_sq(state, KratzerCouplings(g1=1.0, g2=1.0))
    # the r^-3 moment is still fine there
    expectation_inverse_power(3, state)


def test_potential_assembly_cross_check():
    """<V> integrated whole equals g1 <r^-2> - g2 <r^-1> to 1e-9."""
    c = couplings_from_kratzer(H2)
    state = make_radial_state(gamma_of(H2), QuantumNumbers(1, 0), H2.re_m)
    for spec in (QuadratureSpec(), GL):
        whole = expectation_potential(state, c, spec).value
        m1 = expectation_inverse_power(1, state, spec).value
        m2 = expectation_inverse_power(2, state, spec).value
        assert whole == pytest.approx(c.g1 * m2 - c.g2 * m1, rel=1e-9)


def test_potential_sq_assembly_cross_check():
    c = couplings_from_kratzer(H2)
    state = make_radial_state(gamma_of(H2), QuantumNumbers(0, 1), H2.re_m)
    whole = expectation_potential_sq(state, c).value
    m = {
        p: expectation_inverse_power(p, state).value for p in (2, 3, 4)
    }
    assembled = c.g1**2 * m[4] - 2.0 * c.g1 * c.g2 * m[3] + c.g2**2 * m[2]
    assert whole == pytest.approx(assembled, rel=1e-9)


def test_ground_state_sits_above_potential_mean():
    """<V> <= E0 < 0 for the nodeless state: kinetic energy is positive."""
    c = couplings_from_kratzer(H2)
    for l in (0, 1, 3):
        qn = QuantumNumbers(0, l)
        state = make_radial_state(gamma_of(H2), qn, H2.re_m)
        e0 = energy_unperturbed(H2, qn)
        v = expectation_potential(state, c).value
        assert v <= e0 < 0.0


def test_potential_linear_in_g2():
    """d<V>/dg2 = -<1/r> with the state held fixed."""
    state = make_radial_state(5.0, QuantumNumbers(1, 1), 1.0)
    g1 = 0.3
    a = expectation_potential(state, KratzerCouplings(g1=g1, g2=1.0)).value
    b = expectation_potential(state, KratzerCouplings(g1=g1, g2=2.5)).value
    m1 = expectation_inverse_power(1, state).value
    assert (b - a) / 1.5 == pytest.approx(-m1, rel=1e-8)


def test_correction_matches_closed_form_across_beta():
    """Quadrature route to the shift vs the closed form, three decades."""
    c = couplings_from_kratzer(H2)
    mu = H2.mu_kg
    for qn in (QuantumNumbers(0, 0), QuantumNumbers(2, 1)):
        state = make_radial_state(gamma_of(H2), qn, H2.re_m)
        for beta in (1e-50, 1e-46, 1e-42):
            via_quad = correction_via_expectations(state, c, mu, beta)
            closed = correction_general(c, mu, beta, qn)
            assert via_quad.value == pytest.approx(closed, rel=1e-8)
            assert via_quad.value >= 0.0


def test_correction_exactly_linear_in_beta():
    c = couplings_from_kratzer(H2)
    state = make_radial_state(gamma_of(H2), QuantumNumbers(0, 0), H2.re_m)
    one = correction_via_expectations(state, c, H2.mu_kg, 1e-46).value
    two = correction_via_expectations(state, c, H2.mu_kg, 2e-46).value
    assert two == 2.0 * one


def test_correction_input_validation():
    c = couplings_from_kratzer(H2)
    state = make_radial_state(gamma_of(H2), QuantumNumbers(0, 0), H2.re_m)
    with pytest.raises(ValueError):
        correction_via_expectations(state, c, -1.0, 1e-46)
    with pytest.raises(ValueError):
        correction_via_expectations(state, c, H2.mu_kg, -1e-46)


def test_error_estimates_are_honest():
    """Tightening rel_tol 100x moves the value by less than the old
    error estimate, for both backends and a singular moment."""
    state = make_radial_state(35.755, QuantumNumbers(2, 0), 1.0)
    for p in (1, 4):
        loose = expectation_inverse_power(
            p, state, QuadratureSpec(rel_tol=1e-8)
        )
        tight = expectation_inverse_power(
            p, state, QuadratureSpec(rel_tol=1e-10)
        )
        assert abs(loose.value - tight.value) < loose.error_estimate


def test_gl_rule_size_floor():
    state = make_radial_state(5.0, QuantumNumbers(5, 0), 1.0)
    with pytest.raises(ValueError):
        expectation_inverse_power(0, state, QuadratureSpec(
            scheme="gauss-laguerre", nodes=3
        ))


def test_starved_adaptive_rule_fails_loudly():
    """With subdivision starved out, certification must raise, not lie."""
    state = make_radial_state(35.755, QuantumNumbers(3, 0), 1.0)
    with pytest.raises(ToleranceError):
        expectation_inverse_power(
            4, state, QuadratureSpec(subdivisions=2, rel_tol=1e-10)
        )
