"""Laplace-domain form of the kernel and a quadrature round trip.

For ``Re(s) > t`` the transform ``L(tau^(m/2-1) K_m^p(tau x, y))(s)`` is a
two-term algebraic expression in ``s``, ``(x, y)``, ``t^2`` and ``yx``.
The oscillatory variant transforms ``e^{ip Gamma} e^{-i tau (x,y)}`` (the
kernel proper); the exponential variant transforms
``e^{ip Gamma} e^{tau (x,y)}``.  They are the same function after
``x -> -i x``, which the complex-frame core below makes explicit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .clifford import GeometricFrame, PlaneValue
from .kernels import KernelRequest, kernel
from .special import gauss_legendre

VARIANTS = ("oscillatory", "exponential")
PANEL_WIDTH = 2.0
PANEL_NODES = 24


@dataclass(frozen=True)
class LaplaceDomainValue:
    s: complex
    value: PlaneValue
    half_integer_branch: bool  # True when an odd m forced a principal-branch half-integer power


def _principal_power(z, h):
    return np.exp(h * np.log(z))


def _laplace_parts(m, p, s, u, t2, variant):
    """Scalar and bivector parts of the Laplace-domain kernel.

    ``u`` and ``t2`` may be complex, which is how the two variants are
    related.  The bivector part multiplies the unit with ``yx = -u - W``.
    """
    h = 0.5 * m
    emip = complex(math.cos(p), -math.sin(p))
    cp, sp = math.cos(p), math.sin(p)
    if variant == "oscillatory":
        root = np.sqrt(s * s + t2 + 0j)
        lin = 1j * u  # + i (x, y)
        yx_coef = -1j * emip  # numerators carry - i e^{-ip} yx
    else:
        root = np.sqrt(s * s - t2 + 0j)
        lin = -u
        yx_coef = emip
    # yx = -u - W
    num_scalar = -yx_coef * u
    num_biv = -yx_coef
    d_plus = emip * (s * cp + 1j * root * sp + lin)
    d_minus = np.conj(emip) * (s * cp - 1j * root * sp + lin)
    P_plus = _principal_power(d_plus, h)
    P_minus = _principal_power(d_minus, h)
    eimp = complex(math.cos(m * p), math.sin(m * p))
    pref = math.gamma(h) / (2.0 * root)
    alpha = pref * ((s + root + num_scalar) / P_plus - eimp * (s - root + num_scalar) / P_minus)
    beta = pref * num_biv * (1.0 / P_plus - eimp / P_minus)
    return alpha, beta


def _check_abscissa(s, frame):
    t = float(np.max(np.asarray(frame.t, dtype=float)))
    if not s.real > t:
        raise ValueError(f"need Re(s) > t; got Re(s) = {s.real}, t = {t}")


def laplace_domain_value(m, p, s, frame, variant="oscillatory"):
    if m < 2:
        raise ValueError("m must be at least 2")
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    s = complex(s)
    _check_abscissa(s, frame)
    u = np.asarray(frame.u, dtype=float)
    t2 = np.asarray(frame.t, dtype=float) ** 2
    alpha, beta = _laplace_parts(m, p, s, u, t2, variant)
    if np.ndim(alpha) == 0:
        alpha, beta = complex(alpha), complex(beta)
    value = PlaneValue(alpha, beta, frame, rep=f"laplace_{variant}")
    return LaplaceDomainValue(s, value, bool(m % 2))


def laplace_kernel(m, p, s, frame, variant="oscillatory"):
    """Closed Laplace-domain kernel; principal branch for the ``m/2`` power."""
    return laplace_domain_value(m, p, s, frame, variant).value


def laplace_kernel_complex_frame(m, p, s, u, t2, variant):
    """Same expression at a complex frame ``(u, t^2)``; returns ``(scalar, bivector)``.

    Only used to check that ``x -> -i x`` maps one variant onto the other.
    """
    return _laplace_parts(m, p, complex(s), u, t2, variant)


def default_horizon(m, s, t):
    return (30.0 + m) / (complex(s).real - t)


def _panel_rule(T, per_panel=PANEL_NODES, width=PANEL_WIDTH):
    panels = max(1, math.ceil(T / width))
    base = gauss_legendre(per_panel)
    edges = np.linspace(0.0, T, panels + 1)
    nodes = []
    weights = []
    for a, b in zip(edges[:-1], edges[1:]):
        r = base.mapped(a, b)
        nodes.append(r.nodes)
        weights.append(r.weights)
    return np.concatenate(nodes), np.concatenate(weights)


def numeric_laplace_check(m, p, s, frame, T=None, n=PANEL_NODES):
    """``int_0^T e^{-s tau} tau^(m/2-1) K_m^p(tau x, y) d tau`` by panel Gauss-Legendre.

    The kernel comes from the automatic dispatcher on the scaled frames.
    Odd ``m`` uses ``tau = sigma^2`` so that the integrand is smooth at 0.
    The bivector coefficient is returned relative to the unscaled ``x^y``.
    """
    s = complex(s)
    if np.ndim(frame.u):
        raise ValueError("numeric_laplace_check takes a single frame")
    t = float(frame.t)
    gap = s.real - t
    if gap <= 0:
        raise ValueError("need Re(s) > t")
    T = default_horizon(m, s, t) if T is None else float(T)
    if math.exp(-gap * T) >= 1e-12:
        raise ValueError(f"horizon T = {T} too short for Re(s) - t = {gap}")
    if m % 2:
        sig, w = _panel_rule(math.sqrt(T), n, PANEL_WIDTH / 2)
        tau = sig * sig
        weight = w * 2.0 * sig ** (m - 1)
    else:
        tau, w = _panel_rule(T, n)
        weight = w * tau ** (m // 2 - 1)
    scaled = GeometricFrame(frame.u * tau, frame.v * tau, frame.t * tau)
    K = kernel(KernelRequest(m, p, scaled))
    damp = np.exp(-s * tau) * weight
    alpha = complex(np.sum(damp * K.scalar))
    # (tau x)^y = tau (x^y)
    beta = complex(np.sum(damp * K.bivector_coeff * tau))
    return PlaneValue(alpha, beta, frame, rep="laplace_quadrature")
