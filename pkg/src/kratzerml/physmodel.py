"""Physical constants, unit conversions, and the core domain types.

Everything downstream works in SI units; wavenumbers, angstroms, atomic
mass units and electronvolts appear only at input/output boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

# CODATA-2018 fixed constants of the build (read-only module attributes).
PLANCK_H = 6.62607015e-34        # J s, exact
SPEED_OF_LIGHT = 299792458.0     # m / s, exact
HBAR = PLANCK_H / (2.0 * math.pi)
AMU_TO_KG = 1.66053906660e-27    # kg per unified atomic mass unit
EV_TO_JOULE = 1.602176634e-19    # J per eV, exact
WAVENUMBER_TO_JOULE = PLANCK_H * SPEED_OF_LIGHT * 100.0   # J per cm^-1
ANGSTROM_TO_M = 1.0e-10

#: guard half-width around the lambda values that make closed-form
#: denominators vanish (1/2, 1, 3/2)
LAMBDA_GUARD_TOL = 1.0e-6

_SINGULAR_LAMBDAS = (0.5, 1.0, 1.5)


class LambdaGuardError(ValueError):
    """Raised when lambda sits too close to a singular denominator value."""

    def __init__(self, lam: float, pivot: float) -> None:
        self.lam = lam
        self.pivot = pivot
        super().__init__(
            f"lambda = {lam!r} is within {LAMBDA_GUARD_TOL} of the singular "
            f"value {pivot}; closed-form denominators are unreliable here"
        )


def require_lambda_regular(lam: float, minimum: float) -> None:
    """Check that lambda exceeds `minimum` with a safe margin.

    `minimum` is the largest denominator pivot appearing in the closed
    form being evaluated (one of 1/2, 1, 3/2).  Values of lambda at or
    below the pivot, or within LAMBDA_GUARD_TOL of any pivot up to it,
    raise LambdaGuardError instead of returning a poisoned float.
    """
    for pivot in _SINGULAR_LAMBDAS:
        if pivot > minimum + LAMBDA_GUARD_TOL:
            break
        if lam <= pivot + LAMBDA_GUARD_TOL and lam >= pivot - LAMBDA_GUARD_TOL:
            raise LambdaGuardError(lam, pivot)
        if pivot == minimum and lam <= pivot:
            raise LambdaGuardError(lam, pivot)


@dataclass(frozen=True)
class UnitSystem:
    """Conversion factors into the internal SI representation."""

    hbar: float = field(default=HBAR, metadata={"unit": "J s"})
    amu_to_kg: float = field(default=AMU_TO_KG, metadata={"unit": "kg"})
    wavenumber_to_joule: float = field(
        default=WAVENUMBER_TO_JOULE, metadata={"unit": "J per cm^-1"}
    )
    angstrom_to_m: float = field(default=ANGSTROM_TO_M, metadata={"unit": "m"})
    ev_to_joule: float = field(default=EV_TO_JOULE, metadata={"unit": "J"})

    def __post_init__(self) -> None:
        for name in (
            "hbar",
            "amu_to_kg",
            "wavenumber_to_joule",
            "angstrom_to_m",
            "ev_to_joule",
        ):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(f"{name} must be a positive finite number")

    #: energy units accepted at I/O boundaries
    ENERGY_UNITS = ("cm-1", "eV", "J")

    def _energy_factor(self, unit: str) -> float:
        if unit == "cm-1":
            return self.wavenumber_to_joule
        if unit == "eV":
            return self.ev_to_joule
        if unit == "J":
            return 1.0
        raise ValueError(f"unknown energy unit {unit!r}; expected one of "
                         f"{', '.join(self.ENERGY_UNITS)}")

    def energy_to_joule(self, value: float, unit: str) -> float:
        return value * self._energy_factor(unit)

    def energy_from_joule(self, value: float, unit: str) -> float:
        return value / self._energy_factor(unit)


#: the fixed unit system used throughout the package
SI = UnitSystem()


@dataclass(frozen=True)
class Molecule:
    """Constants of a diatomic species in conventional spectroscopic units.

    Parameters
    ----------
    name : str
        Species label, e.g. "H2".
    de_cm1 : float
        Dissociation energy (potential well depth) in cm^-1.
    re_angstrom : float
        Equilibrium internuclear distance in angstrom.
    mu_amu : float
        Reduced mass in unified atomic mass units.
    zpe_exp_cm1 : float, optional
        Experimental zero-point energy G = E00 + De in cm^-1.
    """

    name: str
    de_cm1: float = field(metadata={"unit": "cm^-1"})
    re_angstrom: float = field(metadata={"unit": "angstrom"})
    mu_amu: float = field(metadata={"unit": "amu"})
    zpe_exp_cm1: float | None = field(default=None, metadata={"unit": "cm^-1"})

    def __post_init__(self) -> None:
        for label, value in (
            ("de_cm1", self.de_cm1),
            ("re_angstrom", self.re_angstrom),
            ("mu_amu", self.mu_amu),
        ):
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(f"{label} must be positive, got {value!r}")
        if self.zpe_exp_cm1 is not None and not math.isfinite(self.zpe_exp_cm1):
            raise ValueError("zpe_exp_cm1 must be finite when present")

    @property
    def de_joule(self) -> float:
        return self.de_cm1 * WAVENUMBER_TO_JOULE

    @property
    def re_m(self) -> float:
        return self.re_angstrom * ANGSTROM_TO_M

    @property
    def mu_kg(self) -> float:
        return self.mu_amu * AMU_TO_KG

    @property
    def omega(self) -> float:
        """Classical small-vibration angular frequency, 2 De / (hbar gamma)."""
        return 2.0 * self.de_joule / (HBAR * gamma_of(self))


@dataclass(frozen=True)
class QuantumNumbers:
    """Radial (vibrational) and orbital (rotational) quantum numbers."""

    n: int
    l: int

    def __post_init__(self) -> None:
        if not (isinstance(self.n, int) and isinstance(self.l, int)):
            raise TypeError("quantum numbers must be integers")
        if self.n < 0 or self.l < 0:
            raise ValueError("quantum numbers must be nonnegative")

    @property
    def principal(self) -> int:
        """Principal quantum number n + l + 1 of the Coulomb limit."""
        return self.n + self.l + 1


@dataclass(frozen=True)
class KratzerCouplings:
    """Couplings of the general potential V(r) = g1/r^2 - g2/r, in SI.

    The molecular branch has g1 = De re^2 and g2 = 2 De re, both positive.
    The general branch admits any real g1 (the strongly attractive regime
    sigma1 <= -1/4 included) and g2 >= 0.
    """

    g1: float = field(metadata={"unit": "J m^2"})
    g2: float = field(metadata={"unit": "J m"})

    def __post_init__(self) -> None:
        if not (math.isfinite(self.g1) and math.isfinite(self.g2)):
            raise ValueError("couplings must be finite")
        if self.g2 < 0.0:
            raise ValueError("g2 must be nonnegative")

    def sigma1(self, mu_kg: float) -> float:
        """Dimensionless inverse-square coupling 2 mu g1 / hbar^2."""
        return 2.0 * mu_kg * self.g1 / (HBAR * HBAR)

    def sigma2(self, mu_kg: float) -> float:
        """Momentum-scaled Coulomb coupling mu g2 / hbar."""
        return mu_kg * self.g2 / HBAR


@dataclass(frozen=True)
class Nu:
    """The exponent parameter nu = sqrt(1/4 + sigma1), tagged by regime.

    For sigma1 <= -1/4 the square root turns imaginary; the magnitude
    sqrt(-1/4 - sigma1) is stored with kind "imaginary" rather than
    producing a NaN, because the strongly attractive regime is a valid
    input of the momentum-space analysis.
    """

    kind: str            # "real" or "imaginary"
    magnitude: float

    def __post_init__(self) -> None:
        if self.kind not in ("real", "imaginary"):
            raise ValueError("kind must be 'real' or 'imaginary'")
        if self.magnitude < 0.0:
            raise ValueError("magnitude must be nonnegative")

    @classmethod
    def from_sigma1(cls, sigma1: float) -> "Nu":
        radicand = 0.25 + sigma1
        if radicand >= 0.0:
            return cls("real", math.sqrt(radicand))
        return cls("imaginary", math.sqrt(-radicand))

    @property
    def is_real(self) -> bool:
        return self.kind == "real"

    @property
    def as_complex(self) -> complex:
        if self.is_real:
            return complex(self.magnitude, 0.0)
        return complex(0.0, self.magnitude)


@dataclass(frozen=True)
class ShapeNumbers:
    """Dimensionless shape numbers of the bound-state problem.

    gamma = (re/hbar) sqrt(2 mu De), lam = 1/2 + sqrt((l+1/2)^2 + gamma^2),
    alpha = gamma^2 / (lam + n) and nu = sqrt(1/4 + gamma^2).  The flag
    near_singular marks lambda within LAMBDA_GUARD_TOL of 1/2, 1 or 3/2.
    """

    gamma: float
    lam: float
    alpha: float
    nu: float
    near_singular: bool = False

    def __post_init__(self) -> None:
        if self.lam < 1.0 - LAMBDA_GUARD_TOL:
            raise ValueError("lambda must satisfy lam >= 1")


@dataclass(frozen=True)
class Deformation:
    """Deformation parameters of the modified Heisenberg algebra.

    Both carry dimension (momentum)^-2.  The specialized branch used by
    the spectrum machinery enforces beta_prime = 2 beta.
    """

    beta: float = field(metadata={"unit": "(kg m/s)^-2"})
    beta_prime: float = field(metadata={"unit": "(kg m/s)^-2"})

    def __post_init__(self) -> None:
        if self.beta < 0.0 or self.beta_prime < 0.0:
            raise ValueError("deformation parameters must be nonnegative")

    @classmethod
    def specialized(cls, beta: float) -> "Deformation":
        """The beta_prime = 2 beta branch, minimal length hbar sqrt(5 beta)."""
        return cls(beta=beta, beta_prime=2.0 * beta)

    @classmethod
    def from_min_length(cls, x_min_m: float) -> "Deformation":
        """Invert hbar sqrt(5 beta) = x_min on the specialized branch."""
        if x_min_m < 0.0:
            raise ValueError("minimal length must be nonnegative")
        return cls.specialized((x_min_m / HBAR) ** 2 / 5.0)

    @property
    def is_specialized(self) -> bool:
        return self.beta_prime == 2.0 * self.beta


def gamma_of(mol: Molecule) -> float:
    """Dimensionless well-shape number gamma = (re/hbar) sqrt(2 mu De)."""
    gamma = mol.re_m * math.sqrt(2.0 * mol.mu_kg * mol.de_joule) / HBAR
    if not math.isfinite(gamma):
        raise ValueError("gamma is not finite; molecular constants invalid")
    return gamma


def couplings_from_kratzer(mol: Molecule) -> KratzerCouplings:
    """Molecular-branch couplings g1 = De re^2, g2 = 2 De re in SI."""
    de = mol.de_joule
    re = mol.re_m
    return KratzerCouplings(g1=de * re * re, g2=2.0 * de * re)


def shape_numbers(gamma: float, qn: QuantumNumbers) -> ShapeNumbers:
    """Shape numbers (gamma, lambda, alpha, nu) for one level.

    The returned nu corresponds to sigma1 = gamma^2, which is always in
    the real regime.  Lambda within LAMBDA_GUARD_TOL of a singular
    denominator value is reported through the near_singular flag; the
    operations that actually divide by those factors raise.
    """
    if not (math.isfinite(gamma) and gamma >= 0.0):
        raise ValueError("gamma must be a nonnegative finite number")
    lam = 0.5 + math.hypot(qn.l + 0.5, gamma)
    alpha = gamma * gamma / (lam + qn.n)
    nu = math.hypot(0.5, gamma)
    near = any(abs(lam - pivot) < LAMBDA_GUARD_TOL for pivot in _SINGULAR_LAMBDAS)
    return ShapeNumbers(gamma=gamma, lam=lam, alpha=alpha, nu=nu, near_singular=near)


def minimal_length(d: Deformation) -> float:
    """Minimal position uncertainty hbar sqrt(3 beta + beta_prime), in m."""
    return HBAR * math.sqrt(3.0 * d.beta + d.beta_prime)
