"""Exact normalized radial bound-state wavefunctions and their special functions.

The radial part is R(r) = N (r/re)^(lam-1) exp(-alpha r/re) M(-n, 2 lam; 2 alpha r/re)
with M a terminating confluent hypergeometric (Kummer) polynomial and

    N = re^(-3/2) (2 alpha)^(lam+1/2) / Gamma(2 lam) * sqrt(Gamma(2 lam + n) / (2 n! (lam + n))).

The normalization constant is assembled in log space: Gamma(2 lam + n)
overflows double precision already for gamma around 36.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .physmodel import Nu, QuantumNumbers, ShapeNumbers, shape_numbers

__all__ = [
    "KummerParameterError",
    "NonQuantizedError",
    "RadialState",
    "kummer_polynomial",
    "log_gamma",
    "make_radial_state",
    "radial_wavefunction",
    "momentum_wavefunction_undeformed",
]


class KummerParameterError(ValueError):
    """Second Kummer parameter too close to a nonpositive integer."""


class NonQuantizedError(ValueError):
    """Momentum k does not satisfy the s-wave quantization condition."""


def kummer_polynomial(n: int, b: float, z: float) -> float:
    """Terminating Kummer function M(-n, b; z) summed by forward recurrence.

    Parameters
    ----------
    n : int
        Degree of the polynomial; the first Kummer parameter is -n.
    b : float
        Second Kummer parameter, positive.
    z : float
        Argument.

    Returns
    -------
    float
        sum_{k=0}^{n} [(-n)_k / (b)_k] z^k / k!

    The terms are generated by the stable ratio recurrence
    t_{k+1} = t_k * (k - n) * z / ((b + k) (k + 1)) and accumulated with
    compensated summation.
    """
    if n < 0 or not isinstance(n, int):
        raise ValueError("polynomial degree n must be a nonnegative integer")
    if not math.isfinite(b):
        raise ValueError("parameter b must be finite")
    if abs(b - round(b)) < 1.0e-12 and round(b) <= 0:
        raise KummerParameterError(
            f"b = {b!r} is within 1e-12 of a nonpositive integer"
        )
    terms = []
    t = 1.0
    for k in range(n):
        terms.append(t)
        t *= (k - n) * z / ((b + k) * (k + 1.0))
    terms.append(t)
    return math.fsum(terms)


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for x > 0.

    Delegates to the C library lgamma, whose relative error is a few ulp,
    comfortably inside the 1e-13 contract for positive arguments.
    """
    if not (math.isfinite(x) and x > 0.0):
        raise ValueError(f"log_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


@dataclass(frozen=True)
class RadialState:
    """One normalized radial bound state.

    Attributes
    ----------
    qn : QuantumNumbers
    shape : ShapeNumbers
    re : float
        Length scale of the state in m (the equilibrium distance on the
        molecular branch, gamma^2/scale in general).
    norm : float
        Normalization constant N in m^(-3/2).
    log_norm : float
        log N, kept for log-space integrand assembly.
    """

    qn: QuantumNumbers
    shape: ShapeNumbers
    re: float
    norm: float
    log_norm: float


def _log_norm(qn: QuantumNumbers, shape: ShapeNumbers, re: float) -> float:
    lam, alpha, n = shape.lam, shape.alpha, qn.n
    if alpha <= 0.0:
        raise ValueError("alpha must be positive for a bound state")
    return (
        -1.5 * math.log(re)
        + (lam + 0.5) * math.log(2.0 * alpha)
        - log_gamma(2.0 * lam)
        + 0.5 * (
            log_gamma(2.0 * lam + n)
            - math.log(2.0)
            - log_gamma(n + 1.0)
            - math.log(lam + n)
        )
    )


def make_radial_state(gamma: float, qn: QuantumNumbers, re: float) -> RadialState:
    """Build the radial state for shape number gamma and length scale re."""
    if re <= 0.0:
        raise ValueError("length scale re must be positive")
    shape = shape_numbers(gamma, qn)
    log_n = _log_norm(qn, shape, re)
    return RadialState(qn=qn, shape=shape, re=re, norm=math.exp(log_n), log_norm=log_n)


def radial_wavefunction(state: RadialState, r: float) -> float:
    """Radial wavefunction R(r) in m^(-3/2), assembled in log space."""
    if r <= 0.0:
        raise ValueError("r must be positive")
    lam, alpha, n = state.shape.lam, state.shape.alpha, state.qn.n
    u = r / state.re
    poly = kummer_polynomial(n, 2.0 * lam, 2.0 * alpha * u)
    if poly == 0.0:
        return 0.0
    log_mag = state.log_norm + (lam - 1.0) * math.log(u) - alpha * u + math.log(abs(poly))
    return math.copysign(math.exp(log_mag), poly)


def _hyp2f1_terminating(a: complex, n: int, c: complex, z: complex) -> complex:
    # F(a, -n; c; z) with integer n >= 0: finite Gauss series of degree n
    total = complex(1.0)
    term = complex(1.0)
    for k in range(n):
        term *= (a + k) * (k - n) * z / ((c + k) * (k + 1.0))
        total += term
    return total


def momentum_wavefunction_undeformed(p: float, n: int, prob) -> complex:
    """Unnormalized momentum-space bound-state wavefunction, beta = 0.

    psi(p) = (1/p) (1 + i p/k)^(-3/2 - nu) F(3/2 + nu, -n, 1 + 2 nu; 2/(1 + i p/k))

    where nu = sqrt(1/4 + sigma1) must be real and k must satisfy the
    s-wave quantization condition sigma2/k = n + 1/2 + nu to within 1e-9,
    which makes the hypergeometric series terminate at degree n.  Complex
    powers are taken on the principal branch; 1 + i p/k stays in the right
    half-plane for p real and k > 0, so the branch is unambiguous.
    """
    if p <= 0.0:
        raise ValueError("p must be positive")
    nu = Nu.from_sigma1(prob.sigma1)
    if not nu.is_real:
        raise NonQuantizedError("sigma1 <= -1/4: no quantized s-wave states")
    second = 0.5 - prob.sigma2 / prob.k + nu.magnitude
    if abs(second + n) > 1.0e-9:
        raise NonQuantizedError(
            f"k does not satisfy the quantization condition: "
            f"1/2 - sigma2/k + nu = {second!r} is not -{n}"
        )
    w = 1.0 + 1j * p / prob.k
    a = 1.5 + nu.magnitude
    c = 1.0 + 2.0 * nu.magnitude
    poly = _hyp2f1_terminating(a, n, c, 2.0 / w)
    return poly * w ** (-1.5 - nu.magnitude) / p
