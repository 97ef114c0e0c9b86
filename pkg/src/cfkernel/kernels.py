"""Direct representations of the fractional Clifford-Fourier kernel.

``K_m^p(x, y) = exp(i p Gamma_y) exp(-i (x, y))`` takes values in the plane
algebra ``span{1, x^y}`` and depends on ``(x, y)`` only through the frame
``(u, v, t)``.  This module evaluates it through

* the Gegenbauer plane-wave series (``m >= 3``, any ``p``),
* the finite Bessel sum for ``m = 4n`` at ``p = pi/2``,
* the one-dimensional integral representation (``m >= 3``, ``p = pi/2``),
* the exact two-dimensional kernel ``exp(-i u cos p) exp(x^y sin p)``,

and :func:`kernel` dispatches between them (and the generating-function
and brute-force routes from sibling modules).
"""
from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass

import numpy as np

from .clifford import GeometricFrame, PlaneValue, sinc
from .special import (
    NU_MAX,
    bessel_j_sequence,
    bessel_ratio,
    bessel_ratio_sequence,
    gegenbauer_sequence,
    quarter_circle_rule,
)

HALF_PI = 0.5 * math.pi
REFERENCE_FRAME = (0.3, 0.7)


class Strategy(str, enum.Enum):
    AUTO = "auto"
    SERIES = "series"
    CLOSED_EVEN = "closed_even"
    INTEGRAL = "integral"
    GENFUN = "genfun"
    BRUTEFORCE = "bruteforce"
    DIM2 = "dim2"


@dataclass(frozen=True)
class KernelRequest:
    m: int
    p: float
    frame: GeometricFrame
    tol: float = 1e-12
    strategy: Strategy = Strategy.AUTO

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("m must be at least 2")
        if not 1e-14 <= self.tol <= 1e-2:
            raise ValueError("tol must lie in [1e-14, 1e-2]")
        object.__setattr__(self, "strategy", Strategy(self.strategy))


def _arrays(frame):
    u = np.asarray(frame.u, dtype=float)
    v = np.asarray(frame.v, dtype=float)
    t = np.asarray(frame.t, dtype=float)
    return u, v, t


def _finish(frame, alpha, beta, rep, err):
    if np.ndim(alpha) == 0:
        alpha = complex(alpha)
        beta = complex(beta)
    return PlaneValue(alpha, beta, frame, rep=rep, err_est=err)


def _is_half_pi(p):
    return abs(p - HALF_PI) <= 1e-15


# --- Gegenbauer series -------------------------------------------------------


def _series_terms_needed(m, lam, t_max, tol):
    """First ``K`` after which five consecutive a-priori term bounds are below ``tol``."""
    if t_max == 0:
        return 2
    lg2 = math.log(2.0)
    below = 0
    pref = abs(math.log(2.0 ** (m / 2 - 1) * math.gamma(m / 2))) + math.log(4.0)
    k = 0
    while True:
        nu = lam + k
        # |t^-lam J_{lam+k}(t)| <= t^k / (2^nu Gamma(nu+1)); Gegenbauer at 1 bounds the angle part
        log_rad = k * math.log(t_max) - nu * lg2 - math.lgamma(nu + 1)
        log_geg = math.lgamma(k + 2 * lam + 1) - math.lgamma(2 * lam + 1) - math.lgamma(k + 1)
        log_geg_c = math.lgamma(k + m - 1) - math.lgamma(m) - math.lgamma(k) if k >= 1 else 0.0
        bound = math.exp(pref + log_rad + max(log_geg + math.log(k + lam + 1), log_geg_c - math.log(t_max)))
        below = below + 1 if bound < tol else 0
        if below >= 5:
            return k + 1
        k += 1
        if lam + k + 1 > NU_MAX:
            raise ValueError(f"series needs Bessel orders beyond {NU_MAX} at t = {t_max}")


def _radial_terms(lam, t, n):
    """``P_k = t^-lam J_{lam+k}(t)`` and ``Q_k = t^-(lam+1) J_{lam+k}(t)`` for k < n.

    ``Q_0`` is never used and is returned as 0.
    """
    P = np.zeros((n,) + t.shape)
    Q = np.zeros((n,) + t.shape)
    small = t <= 1.0
    if np.any(small):
        ts = t[small]
        R = bessel_ratio_sequence(lam, ts, n)
        with np.errstate(under="ignore"):
            for k in range(n):
                P[k][small] = ts**k * R[k]
                if k >= 1:
                    Q[k][small] = ts ** (k - 1) * R[k]
    if np.any(~small):
        tl = t[~small]
        J = bessel_j_sequence(lam, tl, n)
        P[:, ~small] = J * tl**-lam
        Q[:, ~small] = J * tl ** -(lam + 1)
        Q[0][~small] = 0.0
    return P, Q


def kernel_series(m, p, frame, tol=1e-14):
    """Plane-wave (Gegenbauer) series of ``K_m^p``, ``m >= 3``.

    ``K = A + B + (x^y) C`` with, writing ``lam = m/2 - 1``, ``c = cos(theta)``
    and ``ph_k^{+-} = i^-k (exp(ip(k+m-2)) +- exp(-ipk))``::

        A = -2^(m/2-2) Gamma(m/2)   sum_k ph_k^-            t^-lam J_{lam+k}(t) C_k^lam(c)
        B =  2^(m/2-2) Gamma(m/2-1) sum_k (k+lam) ph_k^+    t^-lam J_{lam+k}(t) C_k^lam(c)
        C =  2^(m/2-1) Gamma(m/2)   sum_{k>=1} ph_k^-     t^-(lam+1) J_{lam+k}(t) C_{k-1}^(m/2)(c)

    The ``B`` prefactor carries ``Gamma(m/2-1)``; with ``Gamma(m/2)`` the
    series would return ``(m/2-1) exp(-iu)`` at ``p = 0``.  The two agree
    for ``m = 4``.
    """
    if m == 2:
        raise ValueError("the series needs m >= 3; use kernel_dim2 for m = 2")
    if m < 2:
        raise ValueError("m must be at least 3")
    u, v, t = _arrays(frame)
    shape = np.broadcast_shapes(u.shape, v.shape, t.shape)
    u, v, t = (np.broadcast_to(a, shape).ravel() for a in (u, v, t))
    lam = 0.5 * m - 1.0
    t_max = float(np.max(t)) if t.size else 0.0
    n = _series_terms_needed(m, lam, t_max, tol)
    with np.errstate(invalid="ignore", divide="ignore"):
        c = np.where(t > 0, u / np.where(t > 0, t, 1.0), 0.0)
    c = np.clip(c, -1.0, 1.0)

    P, Q = _radial_terms(lam, t, n)
    G_lam = gegenbauer_sequence(n, lam, c)
    G_up = gegenbauer_sequence(n, lam + 1.0, c)

    k = np.arange(n)
    ik = (-1j) ** k
    e_up = np.exp(1j * p * (k + m - 2))
    e_dn = np.exp(-1j * p * k)
    ph_minus = ik * (e_up - e_dn)
    ph_plus = ik * (e_up + e_dn)

    a_pref = -(2.0 ** (m / 2 - 2)) * math.gamma(m / 2)
    b_pref = 2.0 ** (m / 2 - 2) * math.gamma(m / 2 - 1)
    c_pref = 2.0 ** (m / 2 - 1) * math.gamma(m / 2)

    ang_ab = P * G_lam
    A = a_pref * np.tensordot(ph_minus, ang_ab, axes=(0, 0))
    B = b_pref * np.tensordot(ph_plus * (k + lam), ang_ab, axes=(0, 0))
    G_shift = np.zeros_like(G_up)
    G_shift[1:] = G_up[:-1]
    C = c_pref * np.tensordot(ph_minus, Q * G_shift, axes=(0, 0))

    last = np.max(np.abs(ph_plus[-5:, None] * (k[-5:, None] + lam) * ang_ab[-5:]), initial=0.0)
    alpha = (A + B).reshape(shape)
    beta = C.reshape(shape)
    err = float(max(last * abs(b_pref), 1e-16 * float(np.max(np.abs(alpha), initial=1.0))))
    return _finish(frame, alpha, beta, "series", err)


# --- even-dimensional closed form --------------------------------------------

PRINTED_PREFACTOR = math.sqrt(HALF_PI)


def closed_even_parts(m, u, v, coefficients="corrected"):
    """The finite Bessel sums ``A_m, B_m, C_m`` for ``m = 4n``, without the prefactor.

    With ``h = m/2`` and ``R_nu(v) = J_nu(v) / v^nu``::

        A = sum_l u^(h-2-2l) / (2^l l!) * f_A(l) * R_{(m-2l-3)/2}(v)
        B = -sum_l u^(h-1-2l) / (2^l l!) * f_B(l) * R_{(m-2l-3)/2}(v)
        C = -sum_l u^(h-1-2l) / (2^l l!) * f_B(l) * R_{(m-2l-1)/2}(v)

    for ``l = 0 .. m/4 - 1``.  ``"printed"`` uses ``f_A = h!/(h-2l-1)!`` and
    ``f_B = h!/(h-2l)!``.  ``"corrected"`` uses ``f_A = (h-1)!/(h-2l-2)!``
    and ``f_B = (h-1)!/(h-2l-1)!``, which is what inverting the
    Laplace-domain kernel term by term produces.
    """
    if m < 4 or m % 4:
        raise ValueError("the closed form needs m divisible by 4")
    if coefficients not in ("corrected", "printed"):
        raise ValueError(f"unknown coefficient set {coefficients!r}")
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    h = m // 2
    top = h if coefficients == "printed" else h - 1
    fact = math.factorial
    A = np.zeros(np.broadcast_shapes(u.shape, v.shape))
    B = np.zeros_like(A)
    C = np.zeros_like(A)
    for l in range(m // 4):
        w = 1.0 / (2.0**l * fact(l))
        r_low = bessel_ratio((m - 2 * l - 3) / 2, v)
        r_high = bessel_ratio((m - 2 * l - 1) / 2, v)
        f_a = fact(top) / fact(top - 2 * l - 1)
        f_b = fact(top) / fact(top - 2 * l)
        A = A + u ** (h - 2 - 2 * l) * w * f_a * r_low
        B = B - u ** (h - 1 - 2 * l) * w * f_b * r_low
        C = C - u ** (h - 1 - 2 * l) * w * f_b * r_high
    return A, B, C


@functools.lru_cache(maxsize=None)
def closed_even_constant(m):
    """One-point constant ``c_m`` matching the printed sums to the series at the reference frame.

    Returns ``(c_m, spread)`` where ``spread`` is the relative disagreement
    between the constants implied by the scalar and the bivector parts; a
    pure normalisation error would give ``spread ~ 0``.
    """
    u0, v0 = REFERENCE_FRAME
    ref = kernel_series(m, HALF_PI, GeometricFrame.from_uv(u0, v0))
    A, B, C = closed_even_parts(m, u0, v0, "printed")
    c_scalar = ref.scalar.real / float(A + B)
    c_biv = ref.bivector_coeff.real / float(C)
    return c_scalar, abs(c_scalar - c_biv) / abs(c_scalar)


def kernel_closed_even(m, frame, normalization="corrected"):
    """Finite Bessel sum for ``K_m`` at ``p = pi/2``, ``m = 4n``.

    ``normalization``:

    * ``"corrected"``: corrected coefficients, prefactor ``sqrt(pi/2)``;
    * ``"as-printed"``: printed coefficients, prefactor ``sqrt(pi/2)``;
    * ``"calibrated"``: printed coefficients times :func:`closed_even_constant`;
    * a number: printed coefficients times that number.
    """
    coefficients = "printed"
    if normalization == "corrected":
        c_m, coefficients = PRINTED_PREFACTOR, "corrected"
    elif normalization == "calibrated":
        c_m = closed_even_constant(m)[0]
    elif normalization == "as-printed":
        c_m = PRINTED_PREFACTOR
    else:
        c_m = float(normalization)
    u, v, _ = _arrays(frame)
    A, B, C = closed_even_parts(m, u, v, coefficients)
    alpha = c_m * (A + B) + 0j
    beta = c_m * C + 0j
    err = 1e-14 * float(np.max(np.abs(alpha), initial=1.0))
    return _finish(frame, alpha, beta, "closed_even", err)


# --- integral representation --------------------------------------------------


def _integral_terms(m, u, t, rule):
    """The six integrals of the representation, after ``s = sin(phi)^2``."""
    phi = rule.nodes.reshape((-1,) + (1,) * u.ndim)
    w = rule.weights.reshape(phi.shape)
    sp, cp = np.sin(phi), np.cos(phi)
    s = sp * sp
    q = cp * np.sqrt(1.0 + s)  # sqrt(1 - s^2)
    arg = t * q
    J = bessel_j_sequence(0.0, np.broadcast_to(arg, np.broadcast_shapes(arg.shape, u.shape)).copy(), 2)
    J0, J1 = J[0], J[1]
    # ds = 2 sin cos dphi; (1-s^2)^(-1/2) ds = 2 sin / sqrt(1+s) dphi
    d1 = 2.0 * sp / np.sqrt(1.0 + s) * s ** (m / 2 - 1)
    d2 = 2.0 * sp ** (m - 3) * cp
    d3 = 2.0 * sp ** (m - 1) * cp
    out = {}
    for sign in (-1, 1):
        e = np.exp(sign * u * s)
        out[("J1", sign)] = np.sum(w * d1 * J1 * e, axis=0)
        out[("J0lo", sign)] = np.sum(w * d2 * J0 * e, axis=0)
        out[("J0hi", sign)] = np.sum(w * d3 * J0 * e, axis=0)
    return out


def _integral_combine(m, u, t, I):
    phase = 1j**m  # exp(i m pi / 2)
    alpha = (
        0.5 * np.exp(-u)
        - 0.5 * t * I[("J1", -1)]
        + 0.25 * (m - 2) * I[("J0lo", -1)]
        - phase * (0.5 * np.exp(u) - 0.5 * t * I[("J1", 1)] - 0.25 * (m - 2) * I[("J0lo", 1)])
    )
    beta = 0.5 * I[("J0hi", -1)] - phase * 0.5 * I[("J0hi", 1)]
    return alpha + 0j, beta + 0j


def kernel_integral(m, frame, n=48, tol=1e-9):
    """Integral representation of ``K_m`` at ``p = pi/2`` for ``m >= 3``.

    Every integral over ``[0, 1]`` is taken with ``s = sin(phi)^2``, which
    removes both the ``(1 - s^2)^(-1/2)`` endpoint singularity and the
    ``s^(-1/2)`` factor that appears for ``m = 3``.  The error estimate is
    the difference to a rule with ``n + n//2`` nodes.
    """
    if m == 2:
        raise ValueError("the integral representation diverges for m = 2; use kernel_dim2")
    if m < 3:
        raise ValueError("m must be at least 3")
    u, v, t = _arrays(frame)
    shape = np.broadcast_shapes(u.shape, t.shape)
    u = np.broadcast_to(u, shape)
    t = np.broadcast_to(t, shape)
    coarse = _integral_combine(m, u, t, _integral_terms(m, u, t, quarter_circle_rule(n)))
    fine = _integral_combine(m, u, t, _integral_terms(m, u, t, quarter_circle_rule(n + n // 2)))
    err = float(
        max(np.max(np.abs(fine[0] - coarse[0]), initial=0.0), np.max(np.abs(fine[1] - coarse[1]), initial=0.0))
    )
    scale = max(1.0, float(np.max(np.abs(fine[0]), initial=0.0)))
    if err > tol * scale:
        raise ArithmeticError(f"integral rule too coarse: estimated error {err:.2e} > {tol:.1e}")
    return _finish(frame, fine[0], fine[1], "integral", err)


# --- two dimensions -----------------------------------------------------------


def kernel_dim2(p, frame):
    """``K_2^p = exp(-i u cos p) exp((x^y) sin p)``."""
    u, v, _ = _arrays(frame)
    phase = np.exp(-1j * u * math.cos(p))
    sp = math.sin(p)
    alpha = phase * np.cos(v * sp)
    beta = phase * sp * sinc(v * sp)
    return _finish(frame, alpha, beta, "dim2", 1e-16)


# --- dispatcher ---------------------------------------------------------------


def kernel(req):
    """Evaluate ``K_m^p`` for a :class:`KernelRequest`.

    The automatic strategy picks the exact form for ``m = 2``, the
    corrected closed form for ``m = 4n`` at ``p = pi/2`` and the series
    otherwise.
    """
    m, p, frame, strat = req.m, req.p, req.frame, req.strategy
    if strat is Strategy.AUTO:
        if m == 2:
            strat = Strategy.DIM2
        elif m % 4 == 0 and _is_half_pi(p):
            strat = Strategy.CLOSED_EVEN
        else:
            strat = Strategy.SERIES
    if strat is Strategy.DIM2:
        if m != 2:
            raise ValueError("dim2 strategy needs m = 2")
        return kernel_dim2(p, frame)
    if strat is Strategy.SERIES:
        return kernel_series(m, p, frame, tol=min(req.tol, 1e-12))
    if strat is Strategy.CLOSED_EVEN:
        if not _is_half_pi(p):
            raise ValueError("the closed form is only available at p = pi/2")
        return kernel_closed_even(m, frame)
    if strat is Strategy.INTEGRAL:
        if not _is_half_pi(p):
            raise ValueError("the integral representation is only available at p = pi/2")
        return kernel_integral(m, frame, tol=max(req.tol, 1e-10))
    if strat is Strategy.GENFUN:
        from .genfun import kernel_from_genfun

        return kernel_from_genfun(m, p, frame)
    if strat is Strategy.BRUTEFORCE:
        from .gamma_ops import kernel_bruteforce_frame

        if np.ndim(frame.u):
            raise ValueError("the brute-force strategy takes a single frame")
        return kernel_bruteforce_frame(m, p, frame)[0]
    raise ValueError(f"unknown strategy {strat}")
