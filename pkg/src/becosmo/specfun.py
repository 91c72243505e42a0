"""Gamma and fractional-order Bessel/Hankel functions.

Self-contained kernel for the fractional orders appearing in the analytic
mode solutions of the expanding condensate (nu = +-1/3, +-2/3, plus any
non-integer order in (-2, 2)).

Evaluation uses two branches:
  * ascending power series (extended-precision accumulation) for x < X_SWITCH,
  * Hankel asymptotic expansion (modulus/phase form) for x >= X_SWITCH.

Guaranteed relative accuracy is 1e-10 for x in [1e-3, 100] away from zeros
of the individual functions; both branches remain usable outside that range.
Integer orders are rejected: they would hit the logarithmic branch of Y_nu,
which this kernel deliberately does not implement.
"""

from __future__ import annotations

import math

import numpy as np

X_SWITCH = 12.0
_INTEGER_EPS = 1e-9
_LD = np.longdouble
_LD_EPS = float(np.finfo(_LD).eps)

# Lanczos coefficients, g = 607/128, 15 terms (Godfrey set).
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_C = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    3.3994649984811888699e-5,
    4.6523628927048575665e-5,
    -9.8374475304879564677e-5,
    1.5808870322491248884e-4,
    -2.1026444172410488319e-4,
    2.1743961811521264320e-4,
    -1.6431810653676389022e-4,
    8.4418223983852743293e-5,
    -2.6190838401581408670e-5,
    3.6899182659531622704e-6,
)


def gamma(x: float) -> float:
    """Gamma function for real non-pole arguments, ~1e-13 relative accuracy."""
    x = float(x)
    if x <= 0.0 and x == math.floor(x):
        raise ValueError(f"gamma pole at non-positive integer x={x}")
    if x < 0.5:
        # reflection keeps the Lanczos sum on its accurate half-line
        return math.pi / (math.sin(math.pi * x) * gamma(1.0 - x))
    xm1 = x - 1.0
    acc = _LANCZOS_C[0]
    for k in range(1, len(_LANCZOS_C)):
        acc += _LANCZOS_C[k] / (xm1 + k)
    t = xm1 + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (xm1 + 0.5) * math.exp(-t) * acc


def _check_order(nu: float) -> float:
    nu = float(nu)
    if not -2.0 < nu < 2.0:
        raise ValueError(f"order nu={nu} outside supported range (-2, 2)")
    return nu


def _check_noninteger(nu: float) -> float:
    nu = _check_order(nu)
    if abs(nu - round(nu)) < _INTEGER_EPS:
        raise ValueError(f"integer order nu={nu} not supported (logarithmic branch)")
    return nu


def _series_j(nu: float, x: float) -> float:
    """Ascending series for J_nu, accumulated in extended precision."""
    xl = _LD(x)
    half = xl / 2
    pref = np.exp(_LD(nu) * np.log(half)) / _LD(gamma(nu + 1.0))
    neg_q = -half * half
    term = _LD(1.0)
    total = term
    peak = _LD(1.0)
    for k in range(1, 400):
        term = term * neg_q / (_LD(k) * (_LD(nu) + _LD(k)))
        total += term
        if abs(term) > peak:
            peak = abs(term)
        elif abs(term) < _LD_EPS * peak:
            break
    return float(pref * total)


def _hankel1_asymptotic(nu: float, x: float) -> complex:
    """Large-argument expansion of H^(1)_nu, truncated at the smallest term."""
    mu4 = 4.0 * nu * nu
    total = 1.0 + 0.0j
    t = 1.0
    ik = 1.0 + 0.0j
    prev = math.inf
    for k in range(1, 60):
        t *= (mu4 - (2 * k - 1) ** 2) / (8.0 * k * x)
        if abs(t) >= prev:
            break
        prev = abs(t)
        ik *= 1j
        total += ik * t
        if abs(t) < 1e-18:
            break
    chi = x - nu * (math.pi / 2.0) - math.pi / 4.0
    return math.sqrt(2.0 / (math.pi * x)) * complex(math.cos(chi), math.sin(chi)) * total


def bessel_j(nu: float, x: float) -> float:
    """Bessel function of the first kind, fractional order."""
    nu = _check_order(nu)
    x = float(x)
    if x <= 0.0:
        raise ValueError(f"x={x} must be positive")
    if x < X_SWITCH:
        return _series_j(nu, x)
    return _hankel1_asymptotic(nu, x).real


def bessel_y(nu: float, x: float) -> float:
    """Bessel function of the second kind via the non-integer connection formula."""
    nu = _check_noninteger(nu)
    x = float(x)
    if x <= 0.0:
        raise ValueError(f"x={x} must be positive")
    if x < X_SWITCH:
        s, c = math.sin(nu * math.pi), math.cos(nu * math.pi)
        return (_series_j(nu, x) * c - _series_j(-nu, x)) / s
    return _hankel1_asymptotic(nu, x).imag


def hankel1(nu: float, x: float) -> complex:
    """H^(1)_nu = J_nu + i Y_nu."""
    nu = _check_noninteger(nu)
    x = float(x)
    if x <= 0.0:
        raise ValueError(f"x={x} must be positive")
    if x < X_SWITCH:
        return complex(bessel_j(nu, x), bessel_y(nu, x))
    return _hankel1_asymptotic(nu, x)


def hankel2(nu: float, x: float) -> complex:
    """H^(2)_nu, the complex conjugate of H^(1)_nu for real order and argument."""
    return hankel1(nu, x).conjugate()


def bessel_jp(nu: float, x: float) -> float:
    """dJ_nu/dx through the downward order recurrence."""
    return bessel_j(nu - 1.0, x) - (nu / x) * bessel_j(nu, x)


def bessel_yp(nu: float, x: float) -> float:
    """dY_nu/dx through the downward order recurrence."""
    return bessel_y(nu - 1.0, x) - (nu / x) * bessel_y(nu, x)


def hankel1p(nu: float, x: float) -> complex:
    """dH^(1)_nu/dx through the downward order recurrence."""
    return hankel1(nu - 1.0, x) - (nu / x) * hankel1(nu, x)


def wronskian_jy(nu: float, x: float) -> float:
    """J_nu(x) Y'_nu(x) - J'_nu(x) Y_nu(x); identically 2/(pi x)."""
    return bessel_j(nu, x) * bessel_yp(nu, x) - bessel_jp(nu, x) * bessel_y(nu, x)


def identity_table(nu_values=(1.0 / 3.0, 2.0 / 3.0), n_points: int = 25) -> list[dict]:
    """Self-test table: Wronskian residuals and branch continuity at the switch.

    Returns one row per check with the measured relative residual.
    """
    rows = []
    xs = np.geomspace(1e-3, 100.0, n_points)
    for nu in nu_values:
        worst = 0.0
        for x in xs:
            expected = 2.0 / (math.pi * x)
            worst = max(worst, abs(wronskian_jy(nu, x) / expected - 1.0))
        rows.append({"check": f"wronskian nu={nu:.6f}", "residual": worst, "budget": 1e-10})
        # continuity across the series/asymptotic switch point
        below = complex(_series_j(nu, X_SWITCH * (1 - 1e-12)),
                        bessel_y(nu, X_SWITCH * (1 - 1e-12)))
        above = _hankel1_asymptotic(nu, X_SWITCH * (1 + 1e-12))
        rows.append({
            "check": f"branch continuity nu={nu:.6f}",
            "residual": abs(below - above) / abs(above),
            "budget": 1e-9,
        })
        h1 = hankel1(nu, 7.7)
        rows.append({
            "check": f"conjugacy nu={nu:.6f}",
            "residual": abs(hankel2(nu, 7.7) - h1.conjugate()),
            "budget": 0.0,
        })
    return rows
