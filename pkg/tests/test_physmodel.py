import math

import pytest
from hypothesis import given, strategies as st

from kratzerml.physmodel import (
    AMU_TO_KG,
    ANGSTROM_TO_M,
    HBAR,
    PLANCK_H,
    SI,
    SPEED_OF_LIGHT,
    WAVENUMBER_TO_JOULE,
    Deformation,
    KratzerCouplings,
    LambdaGuardError,
    Molecule,
    Nu,
    QuantumNumbers,
    couplings_from_kratzer,
    gamma_of,
    minimal_length,
    require_lambda_regular,
    shape_numbers,
)

H2 = Molecule("H2", 78844.9005, 0.73652, 0.5039, zpe_exp_cm1=2179.3)


def test_fixed_constants():
    assert PLANCK_H == 6.62607015e-34
    assert SPEED_OF_LIGHT == 299792458.0
    assert HBAR == PLANCK_H / (2.0 * math.pi)
    assert AMU_TO_KG == 1.66053906660e-27
    assert WAVENUMBER_TO_JOULE == PLANCK_H * SPEED_OF_LIGHT * 100.0


def test_energy_unit_round_trip():
    for unit in SI.ENERGY_UNITS:
        x = 123.456
        assert SI.energy_from_joule(SI.energy_to_joule(x, unit), unit) == pytest.approx(
            x, rel=1e-15
        )
    with pytest.raises(ValueError):
        SI.energy_to_joule(1.0, "hartree")


def test_wavenumber_to_ev():
    # 1 cm^-1 = h c / (1 cm) expressed in eV
    ev = SI.energy_from_joule(SI.energy_to_joule(1.0, "cm-1"), "eV")
    assert ev == pytest.approx(1.239841984e-4, rel=1e-9)


def test_molecule_validation():
    with pytest.raises(ValueError):
        Molecule("bad", -1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        Molecule("bad", 1.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        Molecule("bad", 1.0, 1.0, math.inf)
    mol = Molecule("ok", 1000.0, 1.0, 1.0)
    assert mol.zpe_exp_cm1 is None
    assert mol.de_joule == 1000.0 * WAVENUMBER_TO_JOULE
    assert mol.re_m == 1.0 * ANGSTROM_TO_M
    assert mol.mu_kg == 1.0 * AMU_TO_KG


def test_h2_gamma():
    """The H2 constants give the well-shape number used throughout."""
    assert gamma_of(H2) == pytest.approx(35.7557, abs=5e-4)


def test_quantum_numbers():
    qn = QuantumNumbers(2, 3)
    assert qn.principal == 6
    with pytest.raises(ValueError):
        QuantumNumbers(-1, 0)
    with pytest.raises(TypeError):
        QuantumNumbers(1.5, 0)


def test_couplings_molecular_branch():
    c = couplings_from_kratzer(H2)
    de, re = H2.de_joule, H2.re_m
    assert c.g1 == de * re * re
    assert c.g2 == 2.0 * de * re
    # sigma1 equals gamma^2 on the molecular branch
    assert c.sigma1(H2.mu_kg) == pytest.approx(gamma_of(H2) ** 2, rel=1e-14)


def test_couplings_validation():
    with pytest.raises(ValueError):
        KratzerCouplings(g1=0.0, g2=-1.0)
    # negative g1 (attractive inverse-square) is a valid general input
    KratzerCouplings(g1=-1e-48, g2=0.0)


def test_nu_regimes():
    assert Nu.from_sigma1(0.0) == Nu("real", 0.5)
    assert Nu.from_sigma1(2.0).magnitude == pytest.approx(1.5)
    sing = Nu.from_sigma1(-1.0)
    assert not sing.is_real
    assert sing.as_complex == pytest.approx(1j * math.sqrt(0.75))


@given(
    gamma=st.floats(min_value=0.0, max_value=200.0),
    n=st.integers(min_value=0, max_value=12),
    l=st.integers(min_value=0, max_value=12),
)
def test_shape_numbers_properties(gamma, n, l):
    shape = shape_numbers(gamma, QuantumNumbers(n, l))
    # lam = 1/2 + sqrt((l+1/2)^2 + gamma^2) >= l + 1 >= 1
    assert shape.lam >= l + 1.0 - 1e-12
    assert shape.lam == pytest.approx(
        0.5 + math.hypot(l + 0.5, gamma), rel=1e-15
    )
    assert shape.alpha == pytest.approx(gamma * gamma / (shape.lam + n), rel=1e-15)
    assert shape.nu == pytest.approx(math.hypot(0.5, gamma), rel=1e-15)


def test_shape_numbers_never_raises_at_gamma_zero():
    shape = shape_numbers(0.0, QuantumNumbers(0, 0))
    assert shape.lam == 1.0
    assert shape.near_singular  # lambda sits exactly on the pivot 1


def test_lambda_guard():
    require_lambda_regular(2.0, 1.5)  # fine
    with pytest.raises(LambdaGuardError):
        require_lambda_regular(1.5, 1.5)
    with pytest.raises(LambdaGuardError):
        require_lambda_regular(1.5 + 5e-7, 1.5)
    with pytest.raises(LambdaGuardError):
        require_lambda_regular(1.2, 1.5)  # below the largest pivot
    with pytest.raises(LambdaGuardError):
        require_lambda_regular(1.0 + 5e-7, 1.0)
    # pivots above the requested minimum are not in play
    require_lambda_regular(1.2, 1.0)


def test_deformation_specialized_and_min_length():
    d = Deformation.specialized(4.0e43)
    assert d.beta_prime == 2.0 * d.beta
    assert d.is_specialized
    # minimal length hbar sqrt(3 beta + beta') = hbar sqrt(5 beta)
    assert minimal_length(d) == pytest.approx(
        HBAR * math.sqrt(5.0 * 4.0e43), rel=1e-15
    )


@given(x=st.floats(min_value=1e-15, max_value=1e-10))
def test_min_length_round_trip(x):
    d = Deformation.from_min_length(x)
    assert minimal_length(d) == pytest.approx(x, rel=1e-12)


def test_deformation_validation():
    with pytest.raises(ValueError):
        Deformation(beta=-1.0, beta_prime=0.0)
    with pytest.raises(ValueError):
        Deformation.from_min_length(-1e-12)
    general = Deformation(beta=1.0e43, beta_prime=5.0e43)
    assert not general.is_specialized
    assert minimal_length(general) == pytest.approx(
        HBAR * math.sqrt(8.0e43), rel=1e-15
    )
