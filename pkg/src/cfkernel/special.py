"""Bessel functions, Gegenbauer polynomials and Gauss quadrature rules.

Everything is written from the series and recurrences, vectorised over
the argument.  Bessel functions are real-order, real-argument only.

Small arguments (``z <= SERIES_CUTOFF``) use the power series; larger
ones use Miller's downward recurrence normalised with

    (z/2)^nu0 = sum_k (nu0 + 2k) Gamma(nu0 + k) / k! * J_{nu0+2k}(z),

where ``nu0`` is the fractional part of the order.  Downward recurrence is
stable for every order, so there is no separate asymptotic branch.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

NU_MAX = 250.0
Z_MAX = 250.0
SERIES_CUTOFF = 8.0

_BIG = 1e250


def gamma(x):
    """Gamma function of a real argument."""
    return math.gamma(x)


def _check_envelope(nu, z):
    if nu < 0 or nu > NU_MAX:
        raise ValueError(f"order {nu} outside [0, {NU_MAX}]")
    z = np.asarray(z, dtype=float)
    if np.any(z < 0) or np.any(z > Z_MAX) or not np.all(np.isfinite(z)):
        raise ValueError(f"argument outside [0, {Z_MAX}]")
    return z


def _series_ratio(nu, z):
    """sum_k (-z^2/4)^k / (2^nu k! Gamma(nu+k+1)), i.e. J_nu(z)/z^nu."""
    q = -0.25 * z * z
    lead = math.exp(-nu * math.log(2.0) - math.lgamma(nu + 1.0))
    term = np.full_like(z, lead)
    total = term.copy()
    k = 0
    while True:
        k += 1
        term = term * q / (k * (nu + k))
        total = total + term
        if np.all(np.abs(term) <= 1e-17 * np.abs(total) + 1e-300) and k > 2:
            break
        if k > 500:
            raise ArithmeticError("Bessel series failed to converge")
    return total


def _miller(nu0, z, n):
    """J_{nu0+k}(z) for k < n by downward recurrence; z > 0 array."""
    frac = nu0 - math.floor(nu0)
    first = int(round(nu0 - frac))
    need = first + n
    zmax = float(np.max(z))
    top = int(max(need, zmax) + 30 + math.ceil(math.sqrt(60.0 * max(need, zmax, 1.0))))
    top += top % 2  # top index even so the normalisation sum ends cleanly

    out = np.zeros((n,) + z.shape)
    f_hi = np.zeros_like(z)  # J_{frac+j+1}
    f = np.full_like(z, 1e-300)  # J_{frac+j}
    norm = np.zeros_like(z)
    # g_j = Gamma(frac + j/2) / (j/2)! along even j, built downward is awkward,
    # so collect the even-index values and weight them afterwards
    evens = {}
    for j in range(top, -1, -1):
        if first <= j < need:
            out[j - first] = f
        if j % 2 == 0:
            evens[j] = f.copy()
        if j == 0:
            break
        nu = frac + j
        f_lo = (2.0 * nu / z) * f - f_hi
        f_hi, f = f, f_lo
        big = np.abs(f) > _BIG
        if np.any(big):
            s = np.where(big, 1.0 / _BIG, 1.0)
            f = f * s
            f_hi = f_hi * s
            out *= s
            for key in evens:
                evens[key] = evens[key] * s
    if frac == 0.0:
        for j, val in evens.items():
            norm = norm + (val if j == 0 else 2.0 * val)
        target = np.ones_like(z)
    else:
        # weights (frac + 2k) Gamma(frac + k) / k!, started from Gamma(1 + frac)
        # so that a tiny fractional order neither overflows nor cancels
        g = math.gamma(1.0 + frac)
        norm = g * evens[0]
        for k in range(1, top // 2 + 1):
            if k > 1:
                g *= (frac + (k - 1)) / k
            norm = norm + (frac + 2 * k) * g * evens[2 * k]
        target = (0.5 * z) ** frac
    return out * (target / norm)


def bessel_j_sequence(nu0, z, n):
    """Array of ``J_{nu0+k}(z)`` for ``k = 0..n-1``; shape ``(n,) + z.shape``."""
    z = _check_envelope(nu0 + n - 1, z)
    _check_envelope(nu0, 0.0)
    out = np.empty((n,) + z.shape)
    small = z <= SERIES_CUTOFF
    if np.any(small):
        zs = z[small]
        for k in range(n):
            nu = nu0 + k
            with np.errstate(under="ignore"):
                out[k][small] = _series_ratio(nu, zs) * zs**nu
    if np.any(~small):
        out[:, ~small] = _miller(nu0, z[~small], n)
    return out


def bessel_ratio_sequence(nu0, z, n):
    """Array of ``J_{nu0+k}(z) / z^{nu0+k}`` for ``k = 0..n-1``, finite at ``z = 0``."""
    z = _check_envelope(nu0 + n - 1, z)
    out = np.empty((n,) + z.shape)
    small = z <= SERIES_CUTOFF
    if np.any(small):
        zs = z[small]
        for k in range(n):
            with np.errstate(under="ignore"):
                out[k][small] = _series_ratio(nu0 + k, zs)
    if np.any(~small):
        zl = z[~small]
        j = _miller(nu0, zl, n)
        logz = np.log(zl)
        for k in range(n):
            with np.errstate(under="ignore", divide="ignore"):
                out[k][~small] = np.sign(j[k]) * np.exp(np.log(np.abs(j[k])) - (nu0 + k) * logz)
    return out


def bessel_j(nu, z):
    """Bessel function of the first kind, ``J_nu(z)``, for real ``nu >= 0``, ``z >= 0``."""
    zz = np.asarray(z, dtype=float)
    out = bessel_j_sequence(nu, np.atleast_1d(zz), 1)[0]
    return out.reshape(zz.shape) if zz.ndim else float(out[0])


def bessel_ratio(nu, z):
    """``J_nu(z) / z^nu`` with the removable singularity at 0 filled in."""
    zz = np.asarray(z, dtype=float)
    out = bessel_ratio_sequence(nu, np.atleast_1d(zz), 1)[0]
    return out.reshape(zz.shape) if zz.ndim else float(out[0])


def gegenbauer_sequence(n, lam, x):
    """``C_k^lam(x)`` for ``k = 0..n-1`` by the three-term recurrence.

    ``lam = 0`` returns the limit normalisation ``2 T_k(x) / k`` for ``k >= 1``.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((n,) + x.shape)
    if n == 0:
        return out
    out[0] = 1.0
    if lam == 0:
        # T_k by its own recurrence
        if n > 1:
            t_prev, t = np.ones_like(x), x.copy()
            out[1] = 2.0 * t
            for k in range(2, n):
                t_prev, t = t, 2.0 * x * t - t_prev
                out[k] = 2.0 * t / k
        return out
    if n > 1:
        out[1] = 2.0 * lam * x
    for k in range(2, n):
        out[k] = (2.0 * (k + lam - 1) * x * out[k - 1] - (k + 2 * lam - 2) * out[k - 2]) / k
    return out


def gegenbauer(k, lam, x):
    """Gegenbauer polynomial ``C_k^lam(x)``."""
    if k < 0 or k > 2000:
        raise ValueError("degree must be in 0..2000")
    out = gegenbauer_sequence(k + 1, lam, x)[k]
    return out if np.ndim(out) else float(out)


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    domain: str

    def integrate(self, f):
        return np.tensordot(self.weights, f(self.nodes), axes=(0, 0))

    def mapped(self, a, b):
        """Affine image of a ``[-1, 1]`` rule on ``[a, b]``."""
        if self.domain != "[-1,1]":
            raise ValueError("only [-1,1] rules can be mapped")
        h = 0.5 * (b - a)
        return QuadratureRule(a + h * (self.nodes + 1.0), h * self.weights, f"[{a},{b}]")


def _newton(step, x, what):
    for _ in range(100):
        dx = step(x)
        x = x - dx
        if np.max(np.abs(dx)) <= 1e-15 * max(1.0, float(np.max(np.abs(x)))):
            return x
    raise ArithmeticError(f"{what} node solve did not converge")


@functools.lru_cache(maxsize=64)
def gauss_legendre(n):
    """Gauss-Legendre rule with ``n`` nodes on ``[-1, 1]``."""
    if not 1 <= n <= 512:
        raise ValueError("n must be in 1..512")

    def legendre(x):
        p0, p1 = np.ones_like(x), x.copy()
        for k in range(2, n + 1):
            p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
        if n == 1:
            p0, p1 = np.ones_like(x), x.copy()
        dp = n * (x * p1 - p0) / (x * x - 1.0)
        return p1, dp

    i = np.arange(1, n + 1)
    x = np.cos(np.pi * (i - 0.25) / (n + 0.5))

    def step(x):
        p, dp = legendre(x)
        return p / dp

    x = _newton(step, x, "Gauss-Legendre")
    _, dp = legendre(x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    order = np.argsort(x)
    nodes, weights = x[order], w[order]
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(nodes, weights, "[-1,1]")


@functools.lru_cache(maxsize=64)
def gauss_hermite(n):
    """Gauss-Hermite rule for the weight ``exp(-x^2)`` on the real line."""
    if not 1 <= n <= 512:
        raise ValueError("n must be in 1..512")

    def orthonormal(z):
        # p_k orthonormal w.r.t. exp(-x^2); returns p_n and p_{n-1}
        p1, p2 = np.pi**-0.25, 0.0
        for j in range(1, n + 1):
            p1, p2 = z * math.sqrt(2.0 / j) * p1 - math.sqrt((j - 1) / j) * p2, p1
        return p1, p2

    roots = []
    half = (n + 1) // 2
    for i in range(half):
        # classical initial guesses, each from the previous roots
        if i == 0:
            z = math.sqrt(2 * n + 1) - 1.85575 * (2 * n + 1) ** (-0.16667)
        elif i == 1:
            z = z - 1.14 * n**0.426 / z
        elif i == 2:
            z = 1.86 * z - 0.86 * roots[0]
        elif i == 3:
            z = 1.91 * z - 0.91 * roots[1]
        else:
            z = 2.0 * z - roots[i - 2]
        for _ in range(100):
            p, pm = orthonormal(z)
            dp = math.sqrt(2.0 * n) * pm
            dz = p / dp
            z -= dz
            if abs(dz) <= 1e-15 * max(1.0, abs(z)):
                break
        else:
            raise ArithmeticError("Gauss-Hermite node solve did not converge")
        roots.append(z)
    pos = np.array(roots)
    pm = np.array([orthonormal(z)[1] for z in pos])
    w = 2.0 / (2.0 * n * pm * pm)
    if n % 2:
        nodes = np.concatenate([pos[:-1], [0.0], -pos[:-1]])
        weights = np.concatenate([w[:-1], [w[-1]], w[:-1]])
    else:
        nodes = np.concatenate([pos, -pos])
        weights = np.concatenate([w, w])
    order = np.argsort(nodes)
    nodes, weights = nodes[order], weights[order]
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(nodes, weights, "hermite")


def half_line_rule(T, n):
    """Gauss-Legendre mapped to ``[0, T]`` for integrands decaying like ``exp(-s t)``."""
    if T <= 0:
        raise ValueError("horizon must be positive")
    r = gauss_legendre(n).mapped(0.0, T)
    return QuadratureRule(r.nodes, r.weights, "half-line")


def quarter_circle_rule(n):
    """Gauss-Legendre on ``phi in [0, pi/2]``, used after trigonometric substitutions."""
    return gauss_legendre(n).mapped(0.0, 0.5 * math.pi)
