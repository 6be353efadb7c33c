"""Momentum-space machinery for the deformed Kratzer problem.

Numerical integration of the deformed and undeformed momentum-space
equations, large-momentum exponent analysis, the s-wave quantization
rule, and the Heun-type parameterizations with their Fuchsian checks.

All integrations work on phi = p psi, which is regular at the origin
where psi itself is not; solutions are reported as psi on the grid.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .physmodel import KratzerCouplings, Nu

__all__ = [
    "BRANCHES",
    "REGIMES",
    "VARIANTS",
    "GridError",
    "QuantizationBreakdownError",
    "StiffnessError",
    "MomentumProblem",
    "OdeSolution",
    "HeunParams",
    "HeunParamsIS",
    "HypergeometricParams",
    "RegularizationReport",
    "ode_rhs_deformed",
    "default_p_range",
    "integrate_branch",
    "fit_slope",
    "indicial_exponents",
    "regularization_witness",
    "quantize_swave",
    "heun_params_general",
    "heun_params_inverse_square",
    "hypergeometric_params",
    "heun_residual",
]

BRANCHES = ("fast-decay", "slow-decay")
REGIMES = ("deformed", "undeformed")
VARIANTS = ("as-printed", "dimensional")

#: density floor for grids; also the finite-difference coarseness cutoff
MIN_POINTS_PER_DECADE = 200


class StiffnessError(RuntimeError):
    """The adaptive integrator collapsed its step size and gave up."""


class QuantizationBreakdownError(ValueError):
    """s-wave quantization requested in the singular regime sigma1 <= -1/4."""


class GridError(ValueError):
    """Solution grid too coarse for the finite-difference residual."""


@dataclass(frozen=True)
class MomentumProblem:
    """Parameter set of the momentum-space equation.

    sigma1 is the dimensionless inverse-square coupling 2 mu g1/hbar^2;
    any sign is admissible, sigma1 <= -1/4 being the singular regime.
    sigma2 = mu g2/hbar and k = sqrt(-2 mu E) carry momentum units and
    beta inverse momentum squared.
    """

    sigma1: float
    sigma2: float
    k: float
    beta: float = 0.0

    def __post_init__(self) -> None:
        if not self.k > 0.0:
            raise ValueError("k must be positive for bound-state analyses")
        if self.beta < 0.0:
            raise ValueError("beta must be nonnegative")

    @classmethod
    def from_couplings(
        cls, c: KratzerCouplings, mu: float, energy: float, beta: float = 0.0
    ) -> "MomentumProblem":
        """Problem at a given bound-state energy E < 0 (SI units)."""
        if mu <= 0.0:
            raise ValueError("reduced mass must be positive")
        if energy >= 0.0:
            raise ValueError("bound states require energy < 0")
        return cls(
            sigma1=c.sigma1(mu),
            sigma2=c.sigma2(mu),
            k=math.sqrt(-2.0 * mu * energy),
            beta=beta,
        )


def _coefficients(prob: MomentumProblem, p):
    """A, B, C of A phi'' + B phi' + C phi = 0 (works on scalars or arrays)."""
    beta = prob.beta
    k2 = prob.k * prob.k
    p2 = p * p
    a = (p2 + k2) * (1.0 + 6.0 * beta * p2)
    b = (
        2.0 * beta * p * (p2 + k2)
        + 4.0 * p * (1.0 + 6.0 * beta * p2)
        + 2.0j * prob.sigma2 * (1.0 + 3.0 * beta * p2)
    )
    c = (
        4.0 * (1.0 + 7.0 * beta * p2)
        - 2.0 * beta * (p2 + k2)
        - 2.0 * (1.0 + 6.0 * beta * p2)
        - 4.0j * beta * prob.sigma2 * p
        - prob.sigma1
    )
    return a, b, c


def ode_rhs_deformed(
    prob: MomentumProblem, p: float, phi: complex, dphi: complex
) -> complex:
    """phi'' solved from the deformed equation for phi = p psi.

    At beta = 0 the coefficients reduce to the undeformed ones,
    (p^2 + k^2) phi'' + (4 p + 2 i sigma2) phi' + (2 - sigma1) phi = 0,
    with no special-casing.  p = 0 is a singular point of the
    coefficients: start integrations at p > 0.
    """
    if p <= 0.0:
        raise ValueError("p must be positive; p = 0 is a singular point")
    a, b, c = _coefficients(prob, p)
    return -(b * dphi + c * phi) / a


def default_p_range(prob: MomentumProblem) -> tuple[float, float]:
    """(1e-3 k, 1e3 max(k, 1/sqrt(6 beta))): three-plus decades with the
    top well inside the asymptotic power-law regime."""
    top = prob.k
    if prob.beta > 0.0:
        top = max(top, 1.0 / math.sqrt(6.0 * prob.beta))
    return 1e-3 * prob.k, 1e3 * top


def indicial_exponents(
    prob: MomentumProblem, regime: str
) -> tuple[complex, complex]:
    """Large-p power-law exponents of psi, as a (fast, slow) pair.

    Deformed: the phi equation at p >> 1 is the Euler equation
    3 s(s-1) + 13 s + 7 = 0; shifting by -1 for psi = phi/p gives
    {-10/3, -2} independent of sigma1, sigma2.  Undeformed:
    -5/2 -+ nu with nu = sqrt(1/4 + sigma1), a complex-conjugate pair
    once sigma1 < -1/4.
    """
    if regime == "deformed":
        disc = math.sqrt(10.0 * 10.0 - 4.0 * 3.0 * 7.0)
        fast = (-10.0 - disc) / 6.0 - 1.0
        slow = (-10.0 + disc) / 6.0 - 1.0
        return (complex(fast), complex(slow))
    if regime == "undeformed":
        nu = Nu.from_sigma1(prob.sigma1).as_complex
        return (-2.5 - nu, -2.5 + nu)
    raise ValueError(f"regime must be one of {REGIMES}, got {regime!r}")


def _branch_phi_exponent(prob: MomentumProblem, branch: str) -> complex:
    regime = "deformed" if prob.beta > 0.0 else "undeformed"
    fast, slow = indicial_exponents(prob, regime)
    s = fast if branch == "fast-decay" else slow
    return s + 1.0  # psi -> phi = p psi raises the exponent by one


@dataclass(frozen=True)
class OdeSolution:
    """psi(p) and psi'(p) on an ascending log-spaced grid."""

    grid: np.ndarray
    values: np.ndarray
    derivs: np.ndarray
    branch: str

    def __post_init__(self) -> None:
        grid = np.array(self.grid, dtype=float)
        values = np.array(self.values, dtype=complex)
        derivs = np.array(self.derivs, dtype=complex)
        if grid.ndim != 1 or grid.size < 2:
            raise ValueError("grid must be one-dimensional with >= 2 points")
        if values.shape != grid.shape or derivs.shape != grid.shape:
            raise ValueError("values and derivs must match the grid shape")
        if np.any(np.diff(grid) <= 0.0):
            raise ValueError("grid must be strictly increasing")
        steps = np.diff(np.log10(grid))
        if steps.max() > (1.0 / MIN_POINTS_PER_DECADE) * (1.0 + 1e-9):
            raise ValueError(
                f"grid coarser than {MIN_POINTS_PER_DECADE} points per decade"
            )
        for name, arr in (("grid", grid), ("values", values), ("derivs", derivs)):
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        if self.branch not in BRANCHES:
            raise ValueError(f"branch must be one of {BRANCHES}, got {self.branch!r}")


def integrate_branch(
    prob: MomentumProblem,
    branch: str,
    p_range: tuple[float, float] | None = None,
    *,
    rtol: float = 1e-10,
    points_per_decade: int = MIN_POINTS_PER_DECADE,
    ic: tuple[complex, complex] | None = None,
) -> OdeSolution:
    """Integrate one decay branch inward from p_max.

    Initial conditions at p_max follow the branch's asymptotic power law
    phi = p^s, phi' = s p^(s-1) with s = -7/3 (fast) or -1 (slow) when
    beta > 0 and s = -3/2 -+ nu when beta = 0; pass ic=(phi, dphi) to
    override them (used by continuity checks that pin identical starting
    data on two problems).  Inward integration is the stable direction:
    the fast branch grows relative to the slow one as p decreases, so
    contamination decays; integrating outward would bury it.

    The range must span at least three decades when the power-law
    initial conditions are used, so that p_max sits in the asymptotic
    regime.  Adaptive 8th-order Runge-Kutta with embedded error control
    at the given rtol; output on a log grid with points_per_decade
    (>= 200) nodes per decade.  Raises StiffnessError if the integrator
    gives up.
    """
    if branch not in BRANCHES:
        raise ValueError(f"branch must be one of {BRANCHES}, got {branch!r}")
    if points_per_decade < MIN_POINTS_PER_DECADE:
        raise ValueError(f"points_per_decade must be >= {MIN_POINTS_PER_DECADE}")
    if p_range is None:
        p_range = default_p_range(prob)
    p_min, p_max = p_range
    if not (0.0 < p_min < p_max):
        raise ValueError("p_range must satisfy 0 < p_min < p_max")
    decades = math.log10(p_max / p_min)
    if ic is None and decades < 3.0 * (1.0 - 1e-12):
        raise ValueError(
            "p_range must span >= 3 decades for asymptotic initial conditions"
        )

    if ic is None:
        s = _branch_phi_exponent(prob, branch)
        log0 = s * cmath.log(p_max)
        # integrate the unit-normalized ray and restore the power-law
        # amplitude afterwards; skip the restore only if p_max^s is not
        # representable (the ray is the same up to that constant)
        scale = cmath.exp(log0) if abs(log0.real) < 690.0 else 1.0 + 0.0j
        phi0 = 1.0 + 0.0j
        dphi0 = s / p_max
    else:
        phi_raw, dphi_raw = complex(ic[0]), complex(ic[1])
        norm = max(abs(phi_raw), abs(dphi_raw) * p_max)
        if norm == 0.0:
            raise ValueError("initial conditions must not both vanish")
        scale = complex(norm)
        phi0 = phi_raw / norm
        dphi0 = dphi_raw / norm

    def rhs(p: float, y: np.ndarray) -> list[complex]:
        a, b, c = _coefficients(prob, p)
        return [y[1], -(b * y[1] + c * y[0]) / a]

    n_points = int(math.ceil(points_per_decade * decades)) + 1
    grid = np.geomspace(p_min, p_max, n_points)
    result = solve_ivp(
        rhs,
        (p_max, p_min),
        np.array([phi0, dphi0], dtype=complex),
        method="DOP853",
        rtol=rtol,
        atol=1e-12,
        t_eval=grid[::-1],
        dense_output=False,
    )
    if not result.success:
        raise StiffnessError(
            f"integration failed between p = {p_max:g} and {p_min:g}: "
            f"{result.message}"
        )
    phi = result.y[0][::-1] * scale
    dphi = result.y[1][::-1] * scale
    psi = phi / grid
    dpsi = dphi / grid - phi / grid**2
    return OdeSolution(grid=grid, values=psi, derivs=dpsi, branch=branch)


def fit_slope(solution: OdeSolution, window_decades: float = 1.0) -> float:
    """Least-squares log-log slope of |psi| over the top decade(s).

    The window is anchored at the top of the grid because the power laws
    are asymptotic statements; the default single decade is where the
    branch exponents are clean of both subleading terms and the
    contamination that inward integration leaves near p_min.
    """
    if window_decades <= 0.0:
        raise ValueError("window_decades must be positive")
    p = solution.grid
    mag = np.abs(solution.values)
    mask = p >= p[-1] / 10.0**window_decades
    if int(mask.sum()) < 2:
        raise ValueError("fewer than two points in the fit window")
    if np.any(mag[mask] == 0.0):
        raise ValueError("|psi| vanishes inside the fit window")
    slope, _ = np.polyfit(np.log(p[mask]), np.log(mag[mask]), 1)
    return float(slope)


@dataclass(frozen=True)
class RegularizationReport:
    """Exponent-gap evidence that the deformation regularizes the problem."""

    sigma1: float
    deformed_exponents: tuple[float, float]
    deformed_gap: float
    deformed_selects_unique: bool
    undeformed_exponents: tuple[complex, complex]
    undeformed_regime: str
    undeformed_selects_unique: bool
    summary: str


def regularization_witness(sigma1: float) -> RegularizationReport:
    """Compare branch selection with and without the deformation.

    Deformed decay exponents are {-10/3, -2} for every sigma1, so the
    faster branch is always uniquely selected by p^2 psi -> 0.  Without
    the deformation the exponents -5/2 -+ nu separate only for
    sigma1 > -1/4; at -1/4 they degenerate and below it they form a
    complex pair of equal modulus, leaving no decay-based selection.
    """
    fast = -10.0 / 3.0
    slow = -2.0
    nu = Nu.from_sigma1(sigma1)
    undeformed = (-2.5 - nu.as_complex, -2.5 + nu.as_complex)
    radicand = 0.25 + sigma1
    if radicand > 0.0:
        regime = "real-separated"
        unique = True
        tail = "the undeformed exponents are real and separated"
    elif radicand == 0.0:
        regime = "degenerate"
        unique = False
        tail = "the undeformed exponents degenerate at -5/2 (boundary case)"
    else:
        regime = "complex"
        unique = False
        tail = (
            "the undeformed exponents are complex conjugates of equal "
            "modulus; both branches are admissible"
        )
    summary = (
        f"sigma1 = {sigma1:g}: deformed decay exponents -10/3 and -2 "
        f"(gap 4/3) select a unique branch for any coupling; {tail}."
    )
    return RegularizationReport(
        sigma1=sigma1,
        deformed_exponents=(fast, slow),
        deformed_gap=slow - fast,
        deformed_selects_unique=True,
        undeformed_exponents=undeformed,
        undeformed_regime=regime,
        undeformed_selects_unique=unique,
        summary=summary,
    )


def quantize_swave(prob: MomentumProblem, n_max: int, mu: float) -> list[float]:
    """Bound energies from the s-wave pole condition, n = 0..n_max.

    k_n = sigma2/(n + 1/2 + nu) and E_n = -k_n^2/(2 mu); the k field of
    prob is not consulted (it is the unknown here).  Requires the
    regular regime sigma1 > -1/4 where nu is real.
    """
    if prob.sigma1 <= -0.25:
        raise QuantizationBreakdownError(
            "sigma1 <= -1/4: the pole condition no longer selects a "
            "discrete real spectrum"
        )
    if prob.sigma2 <= 0.0:
        raise ValueError("sigma2 must be positive for an attractive tail")
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    if mu <= 0.0:
        raise ValueError("reduced mass must be positive")
    nu = math.sqrt(0.25 + prob.sigma1)
    energies = []
    for n in range(n_max + 1):
        k_n = prob.sigma2 / (n + 0.5 + nu)
        energies.append(-k_n * k_n / (2.0 * mu))
    return energies


@dataclass(frozen=True)
class HeunParams:
    """Five-regular-point form in z = (1 - i sqrt(6 beta) p)/2, phi = p psi.

    Two parameter readings are carried: "as-printed" keeps sigma1 in the
    c, d, e, f, rho1 slots and the sqrt(beta) part of rho2 (with sigma2
    in the flat part), exactly as the source prints them; "dimensional"
    swaps sigma1 and sigma2 throughout those slots, which is what
    dimensional analysis demands (sigma1 sqrt(beta) and sigma1/k are not
    dimensionless) and what the numerical residual check confirms.
    Neither is silently corrected into the other.
    """

    a: float
    b: float
    c: float
    d: float
    e: float
    f: float
    rho1: float
    rho2: float
    z1: float
    z2: float
    variant: str
    k: float
    beta: float

    def fuchsian_residual(self) -> float:
        return abs(self.a + self.b + 1.0 - (self.c + self.d + self.e + self.f))


@dataclass(frozen=True)
class HeunParamsIS:
    """Four-regular-point form of the sigma2 = 0 (inverse-square) case.

    The substitution record documents the chart: the equation lives in
    xi = 6 beta p^2/(1 + 6 beta p^2) with psi = (1 - xi) phi.
    """

    a: float
    b: float
    c: float
    d: float
    e: float
    q: float
    xi0: float
    mu: float
    energy: float
    beta: float
    substitution: tuple[str, str] = (
        "xi = 6 beta p^2 / (1 + 6 beta p^2)",
        "psi = (1 - xi) phi",
    )

    def fuchsian_residual(self) -> float:
        return abs(self.a + self.b + 1.0 - (self.c + self.d + self.e))


@dataclass(frozen=True)
class HypergeometricParams:
    """beta = 0 reduction: phi = p psi in x = 1/2 + i p/(2 k).

    a b = 2 - sigma1 and a + b = 3; a, b turn complex together with nu
    in the singular regime.
    """

    a: complex
    b: complex
    c: float
    k: float


def heun_params_general(
    prob: MomentumProblem, variant: str = "dimensional"
) -> HeunParams:
    """Parameters of the five-point form for beta > 0.

    Both variants give c + d = 1/3 and e + f = 4 exactly (the sigma
    terms cancel pairwise), hence the same Fuchsian sum 13/3.
    """
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    if prob.beta <= 0.0:
        raise ValueError(
            "beta must be positive: at beta = 0 the singular points "
            "coalesce; use hypergeometric_params instead"
        )
    k = prob.k
    beta = prob.beta
    root = math.sqrt(6.0 * beta)
    denom = 1.0 - 6.0 * beta * k * k
    if abs(denom) < 1e-12:
        raise ValueError("parameter pole: 6 beta k^2 = 1")
    if variant == "as-printed":
        s_cd = s_ef = s_rho1 = s_rho2_root = prob.sigma1
        s_rho2_flat = prob.sigma2
    else:
        s_cd = s_ef = s_rho1 = s_rho2_root = prob.sigma2
        s_rho2_flat = prob.sigma1
    half_cd = 0.5 * s_cd * root / denom
    half_ef = (s_ef / k) * (1.0 - 3.0 * beta * k * k) / denom
    return HeunParams(
        a=1.0,
        b=7.0 / 3.0,
        c=1.0 / 6.0 + half_cd,
        d=1.0 / 6.0 - half_cd,
        e=2.0 + half_ef,
        f=2.0 - half_ef,
        rho1=-7.0 / 3.0 - (s_rho1 / 3.0) * root,
        rho2=0.5 * beta * k * k + (s_rho2_root / 6.0) * root + 1.0 / 12.0
        + 0.25 * s_rho2_flat,
        z1=0.5 + 0.5 * k * root,
        z2=0.5 - 0.5 * k * root,
        variant=variant,
        k=k,
        beta=beta,
    )


def heun_params_inverse_square(
    sigma1: float, mu: float, energy: float, beta: float
) -> HeunParamsIS:
    """Parameters of the four-point form on the sigma2 = 0 branch."""
    if mu <= 0.0:
        raise ValueError("reduced mass must be positive")
    if energy >= 0.0:
        raise ValueError("bound states require energy < 0")
    if beta <= 0.0:
        raise ValueError("beta must be positive for the deformed chart")
    denom = 1.0 + 12.0 * mu * beta * energy
    if abs(denom) < 1e-12:
        raise ValueError("parameter pole: 1 + 12 mu beta E = 0")
    xi0 = 12.0 * mu * beta * energy / denom
    if xi0 >= 0.0:
        raise ValueError(
            "xi0 must be negative for a bound-state chart; "
            "6 beta k^2 exceeds 1 here"
        )
    return HeunParamsIS(
        a=11.0 / 6.0,
        b=1.0,
        c=1.5,
        d=1.0 / 3.0,
        e=2.0,
        q=-1.5 + 0.25 * sigma1 / denom,
        xi0=xi0,
        mu=mu,
        energy=energy,
        beta=beta,
    )


def hypergeometric_params(prob: MomentumProblem) -> HypergeometricParams:
    """Parameters of the beta = 0 reduction (a = 3/2 + nu, b = 3/2 - nu,
    c = 2 + sigma2/k)."""
    if prob.beta != 0.0:
        raise ValueError("the hypergeometric reduction holds only at beta = 0")
    nu = Nu.from_sigma1(prob.sigma1).as_complex
    return HypergeometricParams(
        a=1.5 + nu, b=1.5 - nu, c=2.0 + prob.sigma2 / prob.k, k=prob.k
    )


def _fd_derivatives(x: np.ndarray, f: np.ndarray):
    # non-uniform three-point stencils at interior nodes; complex-safe
    # since the transformed abscissae lie on a straight line where the
    # solutions are analytic
    h1 = x[1:-1] - x[:-2]
    h2 = x[2:] - x[1:-1]
    f0, f1, f2 = f[:-2], f[1:-1], f[2:]
    d1 = (
        -(h2 / (h1 * (h1 + h2))) * f0
        + ((h2 - h1) / (h1 * h2)) * f1
        + (h1 / (h2 * (h1 + h2))) * f2
    )
    d2 = 2.0 * (
        f0 / (h1 * (h1 + h2)) - f1 / (h1 * h2) + f2 / (h2 * (h1 + h2))
    )
    return d1, d2


def _max_normalized_residual(t1, t2, t3) -> float:
    num = np.abs(t1 + t2 + t3)
    den = np.abs(t1) + np.abs(t2) + np.abs(t3)
    out = np.zeros_like(num)
    live = den > 0.0
    out[live] = num[live] / den[live]
    return float(out.max()) if out.size else 0.0


def heun_residual(
    params: HeunParams | HeunParamsIS | HypergeometricParams,
    solution: OdeSolution,
    *,
    min_points_per_decade: int = MIN_POINTS_PER_DECADE,
) -> float:
    """Max normalized residual of a transformed solution in the Heun form.

    Pushes the numerical (p, psi) data through the substitution matching
    the params type and differentiates by finite differences on the
    transformed abscissae, so the check is independent of the original
    equation.  The residual at each interior node is |sum of the three
    terms| / (sum of their moduli); an identically-zero solution gives 0.
    Raises GridError when the grid cannot support the stencils.
    """
    p = solution.grid
    if p.size < 5:
        raise GridError("need at least 5 grid points for finite differences")
    steps = np.diff(np.log10(p))
    if steps.max() > (1.0 / min_points_per_decade) * (1.0 + 1e-9):
        raise GridError(
            f"grid coarser than {min_points_per_decade} points per decade"
        )
    psi = solution.values
    if isinstance(params, HeunParams):
        x = 0.5 * (1.0 - 1.0j * math.sqrt(6.0 * params.beta) * p)
        f = p * psi
        d1, d2 = _fd_derivatives(x, f)
        xm = x[1:-1]
        fm = f[1:-1]
        pre = (
            params.c / xm
            + params.d / (xm - 1.0)
            + params.e / (xm - params.z1)
            + params.f / (xm - params.z2)
        )
        rat = (params.a * params.b * xm * xm + params.rho1 * xm + params.rho2) / (
            xm * (xm - 1.0) * (xm - params.z1) * (xm - params.z2)
        )
        return _max_normalized_residual(d2, pre * d1, rat * fm)
    if isinstance(params, HeunParamsIS):
        blow = 1.0 + 6.0 * params.beta * p * p
        x = 6.0 * params.beta * p * p / blow
        f = psi * blow  # psi = (1 - xi) phi
        d1, d2 = _fd_derivatives(x.astype(complex), f)
        xm = x[1:-1]
        fm = f[1:-1]
        pre = params.c / xm + params.d / (xm - 1.0) + params.e / (xm - params.xi0)
        rat = (params.a * params.b * xm + params.q) / (
            xm * (xm - 1.0) * (xm - params.xi0)
        )
        return _max_normalized_residual(d2, pre * d1, rat * fm)
    if isinstance(params, HypergeometricParams):
        x = 0.5 + 0.5j * p / params.k
        f = p * psi
        d1, d2 = _fd_derivatives(x, f)
        xm = x[1:-1]
        fm = f[1:-1]
        t1 = xm * (1.0 - xm) * d2
        t2 = (params.c - (params.a + params.b + 1.0) * xm) * d1
        t3 = -params.a * params.b * fm
        return _max_normalized_residual(t1, t2, t3)
    raise TypeError(f"unsupported parameter object {type(params).__name__}")
