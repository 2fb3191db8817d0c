"""Polylogarithms and the one- and two-loop ladder functions.

Li_N is evaluated on the principal branch (cut along [1, oo)) either by
the defining power series (small |z|) or by the integral representation

    Li_N(z) = (-1)^N/(N-1)! * Int_0^1 ln^(N-1)(xi) / (xi - 1/z) dxi,

rewritten with xi = e^-u as a Bose-Einstein-type integral on [0, oo).

The ladder functions Phi^(1), Phi^(2) take cross-ratio arguments x, y
in the region x, y > 0, lambda^2 = (1-x-y)^2 - 4xy > 0, x + y < 1,
where both Li arguments -rho*x, -rho*y lie on the negative real axis,
safely away from the branch cut.

The constant term of Phi^(1) defaults to pi^3/3 ("printed"); a pi^2/3
variant is selectable because the polylogarithm-ladder literature
normalizes with the squared power.  Neither variant is asserted
correct here.
"""

from __future__ import annotations

import cmath
import math

from scipy.integrate import quad

__all__ = [
    "li",
    "li_series",
    "li_integral",
    "lambda_rho",
    "phi1",
    "phi2",
    "PHI1_CONSTANTS",
]

_SERIES_RADIUS = 0.5
_SERIES_TOL = 1e-17

# Selectable constant term of Phi^(1): "printed" keeps pi^3/3,
# "pi-squared" uses the pi^2/3 of the usual ladder normalization.
PHI1_CONSTANTS = {
    "printed": math.pi**3 / 3.0,
    "pi-squared": math.pi**2 / 3.0,
}


def _check_branch(z: complex) -> None:
    if z.imag == 0 and z.real >= 1.0:
        raise ValueError(f"Li argument {z} lies on the branch cut [1, oo)")


def li_series(N: int, z: complex, tol: float = _SERIES_TOL, max_terms: int = 10_000) -> complex:
    """Power series sum_{j>=1} z^j / j^N; converges for |z| < 1."""
    if abs(z) >= 1.0:
        raise ValueError("series representation requires |z| < 1")
    total = 0.0 + 0.0j
    term = 1.0 + 0.0j
    for j in range(1, max_terms + 1):
        term = term * z
        inc = term / j**N
        total += inc
        if abs(inc) <= tol * max(abs(total), 1e-300):
            return total
    raise RuntimeError("polylogarithm series did not converge")


def li_integral(N: int, z: complex) -> complex:
    """Integral representation, as z/(N-1)! Int_0^oo u^(N-1) e^-u/(1 - z e^-u) du."""
    if N < 1:
        raise ValueError("polylogarithm order must be >= 1")
    _check_branch(complex(z))
    if z == 0:
        return 0.0 + 0.0j
    fac = math.factorial(N - 1)

    def integrand(u: float) -> complex:
        eu = math.exp(-u)
        return u ** (N - 1) * eu / (1.0 - z * eu)

    re, _ = quad(lambda u: integrand(u).real, 0.0, math.inf, limit=200)
    im, _ = quad(lambda u: integrand(u).imag, 0.0, math.inf, limit=200)
    return z * complex(re, im) / fac


def li(N: int, z: complex) -> complex:
    """Principal-branch polylogarithm Li_N(z) for integer N >= 1.

    Li_1(z) = -ln(1-z) in closed form; otherwise the power series for
    |z| <= 1/2 and the integral representation elsewhere.
    """
    if N < 1:
        raise ValueError("polylogarithm order must be >= 1")
    z = complex(z)
    _check_branch(z)
    if N == 1:
        return -cmath.log(1.0 - z)
    if abs(z) <= _SERIES_RADIUS:
        return li_series(N, z)
    return li_integral(N, z)


def lambda_rho(x: float, y: float) -> tuple[float, float]:
    """The auxiliary pair lambda = sqrt((1-x-y)^2 - 4xy), rho = 2/(1-x-y+lambda)."""
    if x <= 0 or y <= 0:
        raise ValueError("arguments must be positive")
    lam2 = (1.0 - x - y) ** 2 - 4.0 * x * y
    if lam2 <= 0:
        raise ValueError(f"lambda^2 = {lam2} is not positive at (x, y) = ({x}, {y})")
    lam = math.sqrt(lam2)
    rho = 2.0 / (1.0 - x - y + lam)
    return lam, rho


def _check_region(x: float, y: float) -> tuple[float, float]:
    lam, rho = lambda_rho(x, y)
    if rho * x <= 0 or rho * y <= 0:
        raise ValueError(f"(x, y) = ({x}, {y}) leaves the principal region (rho*x, rho*y must be > 0)")
    return lam, rho


def phi1(x: float, y: float, constant: str = "printed") -> float:
    """One-loop ladder function: five dilogarithm/logarithm terms over lambda.

    Symmetric in (x, y): the 2 Li_2 terms and ln(rho x) ln(rho y) are
    manifestly symmetric, while ln(y/x) and ln((1+rho y)/(1+rho x))
    both flip sign under the swap.
    """
    lam, rho = _check_region(x, y)
    c = PHI1_CONSTANTS[constant]
    val = (
        2.0 * li(2, -rho * x).real
        + 2.0 * li(2, -rho * y).real
        + math.log(y / x) * math.log((1.0 + rho * y) / (1.0 + rho * x))
        + math.log(rho * x) * math.log(rho * y)
        + c
    )
    return val / lam


def phi2(x: float, y: float) -> float:
    """Two-loop ladder function: eight polylogarithm terms over lambda."""
    lam, rho = _check_region(x, y)
    lyx = math.log(y / x)
    val = (
        6.0 * li(4, -rho * x).real
        + 6.0 * li(4, -rho * y).real
        + 3.0 * lyx * (li(3, -rho * x).real - li(3, -rho * y).real)
        + 0.5 * lyx**2 * (li(2, -rho * x).real - li(2, -rho * y).real)
        + 0.25 * math.log(rho * x) ** 2 * math.log(rho * y) ** 2
        + 0.5 * math.pi**2 * math.log(rho * x) * math.log(rho * y)
        + math.pi**2 * lyx / 12.0
        + 7.0 * math.pi**4 / 60.0
    )
    return val / lam
