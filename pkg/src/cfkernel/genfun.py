"""Generating function of the even-dimensional kernels.

    G_p(x, y, a) = sum_{m = 2, 4, ...} K_m^p(x, y) a^(m/2 - 1) / Gamma(m/2)

has the closed form

    G_p = exp(-c) (cos d + (x^y - i a e^{ip}) sin(p) sin(d) / d),
    c = (i u - a e^{ip}) cos p,   d^2 = sin(p)^2 (t^2 + (i u - a e^{ip})^2).

Only ``d^2`` enters, through the entire functions ``C(z) = cos(sqrt z)`` and
``S(z) = sin(sqrt z)/sqrt z``, so no square-root branch is ever chosen.
Kernels are recovered as Taylor coefficients in ``a`` by running the same
formula in truncated power-series (jet) arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._expm import expm
from .clifford import GeometricFrame, PlaneValue, sinc
from .special import bessel_j_sequence, bessel_ratio_sequence, quarter_circle_rule

MAX_ORDER = 20


def _cos_sqrt(z):
    return np.cos(np.sqrt(np.asarray(z, dtype=complex)))


def _sinc_sqrt(z):
    return sinc(np.sqrt(np.asarray(z, dtype=complex)))


def _as_complex(x):
    x = np.asarray(x, dtype=complex)
    return x if x.ndim else complex(x)


# --- closed form --------------------------------------------------------------


def genfun_closed(p, frame, a):
    """``G_p(x, y, a)`` as a plane value; ``a`` may be complex."""
    u = np.asarray(frame.u, dtype=float)
    v = np.asarray(frame.v, dtype=float)
    eip = complex(math.cos(p), math.sin(p))
    sp, cp = math.sin(p), math.cos(p)
    shifted = 1j * u - a * eip
    c = shifted * cp
    # t^2 + (iu)^2 = v^2 is taken exactly to avoid cancellation
    z = sp * sp * (v * v - 2j * u * a * eip + (a * eip) ** 2)
    damp = np.exp(-c)
    S = _sinc_sqrt(z)
    alpha = damp * (_cos_sqrt(z) - 1j * a * eip * sp * S)
    beta = damp * sp * S
    return PlaneValue(_as_complex(alpha), _as_complex(beta), frame, rep="genfun_closed")


# --- matrix form --------------------------------------------------------------


def _regular(alpha, beta, v2):
    """2x2 real-structure image of ``alpha + beta W`` with ``W^2 = -v2``."""
    return np.array([[alpha, -v2 * beta], [beta, alpha]], dtype=complex)


def _block_matrix(entries, v2):
    top = [_regular(*entries[0][0], v2), _regular(*entries[0][1], v2)]
    bottom = [_regular(*entries[1][0], v2), _regular(*entries[1][1], v2)]
    return np.block([top, bottom])


def _matrix_entries(p, u, v, a):
    """Plane-algebra entries ``(alpha, beta)`` of the 2x2 exponent matrix."""
    if abs(p - 0.5 * math.pi) <= 1e-15:
        # (a - u) diag(1, -1) + [[0, -xy], [yx, 0]], xy = -u + W, yx = -u - W
        return [[(a - u, 0.0), (u, -1.0)], [(-u, -1.0), (u - a, 0.0)]]
    eip = complex(math.cos(p), math.sin(p))
    sp, cp = math.sin(p), math.cos(p)
    shifted = 1j * u - a * eip
    root = np.sqrt(-(u * u + v * v) - shifted * shifted + 0j)
    beta_plus = -shifted * cp + sp * root
    beta_minus = -shifted * cp - sp * root
    # -(-yx sin p + i u e^{ip} - a e^{2ip} + beta_plus), with -yx = u + W
    low = -(u * sp + 1j * u * eip - a * eip * eip + beta_plus)
    return [[(-beta_plus, 0.0), (0.0, 0.0)], [(low, -sp), (-beta_minus, 0.0)]]


def _genfun_matrix_single(p, u, v, a):
    entries = _matrix_entries(p, u, v, a)
    E = expm(-_block_matrix(entries, v * v))
    # (0 1) E (1 1)^T: sum of the two blocks in the second block row
    alpha = E[2, 0] + E[2, 2]
    beta = E[3, 0] + E[3, 2]
    return complex(alpha), complex(beta)


def genfun_matrix(p, frame, a):
    """``(0 1) exp(-M) (1 1)^T`` with the 2x2 plane-algebra matrix ``M``.

    Entries ``alpha + beta W`` are represented as ``[[alpha, -v^2 beta],
    [beta, alpha]]``, which is faithful also at ``v = 0``.
    """
    u = np.asarray(frame.u, dtype=float)
    v = np.asarray(frame.v, dtype=float)
    if u.ndim == 0 and v.ndim == 0:
        alpha, beta = _genfun_matrix_single(p, float(u), float(v), a)
        return PlaneValue(alpha, beta, frame, rep="genfun_matrix")
    u, v = np.broadcast_arrays(u, v)
    alpha = np.empty(u.shape, dtype=complex)
    beta = np.empty(u.shape, dtype=complex)
    for idx in np.ndindex(u.shape):
        alpha[idx], beta[idx] = _genfun_matrix_single(p, float(u[idx]), float(v[idx]), a)
    return PlaneValue(alpha, beta, frame, rep="genfun_matrix")


# --- integral form ------------------------------------------------------------


def _integral_value(frame, a, rule, printed=False):
    u = np.asarray(frame.u, dtype=float)
    v = np.asarray(frame.v, dtype=float)
    t = np.asarray(frame.t, dtype=float)
    shape = np.broadcast_shapes(u.shape, v.shape, t.shape)
    u, v, t = (np.broadcast_to(q, shape) for q in (u, v, t))
    th = rule.nodes.reshape((-1,) + (1,) * len(shape))
    w = rule.weights.reshape(th.shape)
    s, c = np.sin(th), np.cos(th)
    b = u - a
    # sigma = sin(theta) turns (1 - sigma^2)^(-1/2) d sigma into d theta
    Jc = bessel_j_sequence(0.0, np.broadcast_to(t * c, np.broadcast_shapes(th.shape, shape)).copy(), 2)
    Js = bessel_j_sequence(0.0, np.broadcast_to(t * s, np.broadcast_shapes(th.shape, shape)).copy(), 2)
    i1 = np.sum(w * Jc[1] * np.cosh(b * s), axis=0)
    i2 = np.sum(w * np.sinh(b * c) * Js[1] * c, axis=0)
    if printed:
        # + yx * int J0 sinh, with yx = -u - W
        i3 = np.sum(w * Jc[0] * np.sinh(b * s) * c, axis=0)
        return np.exp(-b) - t * i1 + t * i2 - u * i3, -i3
    # - yx * int J0 cosh: both halves of the Laplace-domain sum carry -yx
    i3 = np.sum(w * Jc[0] * np.cosh(b * s) * c, axis=0)
    return np.exp(-b) - t * i1 + t * i2 + u * i3, i3


def genfun_integral(frame, a, rule=None, tol=1e-9, form="corrected"):
    """``G_{pi/2}(x, y, a)`` for real ``a`` from its integral representation.

    With ``b = (x, y) - a``::

        G = e^{-b} - t int_0^1 (1-s^2)^(-1/2) J1(t sqrt(1-s^2)) cosh(b s) ds
                   + t int_0^1 sinh(b sqrt(1-s^2)) J1(t s) ds
                   - yx int_0^1 J0(t sqrt(1-s^2)) cosh(b s) ds

    ``form="printed"`` replaces the last term by ``+ yx int J0 sinh(b s)``,
    which does not reduce to ``exp(x^y)`` at ``a = 0``; it is kept only for
    comparison.

    ``rule`` is a quadrature rule on ``[0, pi/2]`` (default 48 Gauss-Legendre
    nodes) in ``s = sin(theta)``.  A second rule with half as many nodes again
    supplies the error estimate; exceeding ``tol`` raises ``ArithmeticError``.
    """
    if form not in ("corrected", "printed"):
        raise ValueError(f"unknown form {form!r}")
    printed = form == "printed"
    if np.iscomplexobj(a) and np.imag(a) != 0:
        raise ValueError("the integral form is only available for real a")
    a = float(np.real(a))
    rule = rule or quarter_circle_rule(48)
    n = len(rule.nodes)
    alpha, beta = _integral_value(frame, a, rule, printed)
    alpha2, beta2 = _integral_value(frame, a, quarter_circle_rule(n + n // 2), printed)
    err = float(max(np.max(np.abs(alpha - alpha2)), np.max(np.abs(beta - beta2))))
    if err > tol * max(1.0, float(np.max(np.abs(alpha2)))):
        raise ArithmeticError(f"quadrature error estimate {err:.2e} exceeds {tol:.1e}")
    return PlaneValue(_as_complex(alpha2), _as_complex(beta2), frame, rep="genfun_integral", err_est=err)


# --- jets ---------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TaylorJet:
    """Truncated power series in ``a`` with plane-algebra coefficients.

    ``alpha[k]`` and ``beta[k]`` are the scalar and bivector parts of the
    coefficient of ``a^k``; they may carry trailing frame-array axes.
    """

    alpha: np.ndarray
    beta: np.ndarray
    frame: GeometricFrame

    @property
    def order(self):
        return self.alpha.shape[0] - 1

    @property
    def coefficients(self):
        return tuple(PlaneValue(_as_complex(al), _as_complex(be), self.frame) for al, be in zip(self.alpha, self.beta))

    @classmethod
    def constant(cls, value, order, frame):
        if isinstance(value, PlaneValue):
            al, be = value.scalar, value.bivector_coeff
        else:
            al, be = value, 0.0
        al = np.asarray(al, dtype=complex)
        be = np.asarray(be, dtype=complex)
        shape = np.broadcast_shapes(al.shape, be.shape, np.shape(frame.v))
        alpha = np.zeros((order + 1,) + shape, dtype=complex)
        beta = np.zeros_like(alpha)
        alpha[0] = al
        beta[0] = be
        return cls(alpha, beta, frame)

    @classmethod
    def scalar_series(cls, coeffs, order, frame):
        """Jet with scalar coefficients ``coeffs[k]`` (missing ones are zero)."""
        shape = np.broadcast_shapes(np.shape(frame.v), *(np.shape(c) for c in coeffs))
        alpha = np.zeros((order + 1,) + shape, dtype=complex)
        for k, c in enumerate(coeffs[: order + 1]):
            alpha[k] = c
        return cls(alpha, np.zeros_like(alpha), frame)

    def _coerce(self, other):
        if isinstance(other, TaylorJet):
            if other.order != self.order or not self.frame.same_as(other.frame):
                raise ValueError("jets differ in order or frame")
            return other
        return TaylorJet.constant(other, self.order, self.frame)

    def __add__(self, other):
        other = self._coerce(other)
        return TaylorJet(self.alpha + other.alpha, self.beta + other.beta, self.frame)

    __radd__ = __add__

    def __neg__(self):
        return TaylorJet(-self.alpha, -self.beta, self.frame)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if np.isscalar(other):
            return TaylorJet(self.alpha * other, self.beta * other, self.frame)
        other = self._coerce(other)
        v2 = np.asarray(self.frame.v, dtype=float) ** 2
        n = self.order
        alpha = np.zeros(np.broadcast_shapes(self.alpha.shape, other.alpha.shape), dtype=complex)
        beta = np.zeros_like(alpha)
        for i in range(n + 1):
            j = n + 1 - i
            a1, b1 = self.alpha[i], self.beta[i]
            a2, b2 = other.alpha[:j], other.beta[:j]
            alpha[i:] += a1 * a2 - v2 * b1 * b2
            beta[i:] += a1 * b2 + b1 * a2
        return TaylorJet(alpha, beta, self.frame)

    __rmul__ = __mul__

    def compose(self, taylor):
        """``f(jet)`` for a scalar jet, given ``taylor[k] = f^(k)(jet_0) / k!``."""
        if np.any(self.beta != 0):
            raise ValueError("only scalar jets can be composed with analytic functions")
        shift = TaylorJet(self.alpha.copy(), self.beta, self.frame)
        shift.alpha[0] = 0.0
        out = TaylorJet.constant(0.0, self.order, self.frame)
        out.alpha[0] = taylor[self.order]
        for k in range(self.order - 1, -1, -1):
            out = out * shift
            out.alpha[0] = out.alpha[0] + taylor[k]
        return out

    def exp(self):
        base = np.exp(self.alpha[0])
        return self.compose([base / math.factorial(k) for k in range(self.order + 1)])


def _sinc_sqrt_taylor(z0, n):
    """``S^(k)(z0)/k!`` for ``k <= n`` at real ``z0 >= 0``.

    Uses ``S^(k)(z) = (-1/2)^k sqrt(pi/2) J_{k+1/2}(w) / w^(k+1/2)`` with
    ``w = sqrt(z)``.
    """
    w = np.sqrt(np.maximum(np.asarray(z0, dtype=float), 0.0))
    R = bessel_ratio_sequence(0.5, np.atleast_1d(w), n + 1).reshape((n + 1,) + w.shape)
    k = np.arange(n + 1).reshape((-1,) + (1,) * w.ndim)
    fact = np.array([math.factorial(j) for j in range(n + 1)], dtype=float).reshape(k.shape)
    return math.sqrt(0.5 * math.pi) * (-0.5) ** k * R / fact


def _cos_sqrt_taylor(z0, n, s_taylor):
    """``C^(k)(z0)/k!`` from ``C' = -S/2``."""
    out = [np.cos(np.sqrt(np.maximum(np.asarray(z0, dtype=float), 0.0)))]
    for k in range(1, n + 1):
        out.append(-0.5 * s_taylor[k - 1] / k)
    return out


def genfun_jet(p, frame, order):
    """The generating function as a :class:`TaylorJet` in ``a`` about ``a = 0``."""
    if not 0 <= order <= MAX_ORDER:
        raise ValueError(f"order must lie in 0..{MAX_ORDER}")
    u = np.asarray(frame.u, dtype=float)
    v = np.asarray(frame.v, dtype=float)
    eip = complex(math.cos(p), math.sin(p))
    sp, cp = math.sin(p), math.cos(p)
    n = order
    minus_c = TaylorJet.scalar_series([-1j * u * cp, eip * cp], n, frame)
    s2 = sp * sp
    z0 = s2 * v * v
    z = TaylorJet.scalar_series([z0, -2j * u * eip * s2, eip * eip * s2], n, frame)
    s_taylor = _sinc_sqrt_taylor(z0, n)
    S = z.compose(list(s_taylor))
    C = z.compose(_cos_sqrt_taylor(z0, n, s_taylor))
    factor = TaylorJet.scalar_series([0.0, -1j * eip * sp], n, frame)
    factor.beta[0] = sp
    return minus_c.exp() * (C + factor * S)


def genfun_coeffs(p, frame, N):
    """Even-dimensional kernels ``K_m^p`` for ``m = 2, 4, ..., 2N + 2``."""
    if not 0 <= N <= MAX_ORDER:
        raise ValueError(f"N must lie in 0..{MAX_ORDER}")
    jet = genfun_jet(p, frame, N)
    out = []
    for j, coeff in enumerate(jet.coefficients):
        val = coeff * float(math.factorial(j))
        out.append(PlaneValue(val.scalar, val.bivector_coeff, frame, rep="genfun", err_est=1e-14))
    return out


def kernel_from_genfun(m, p, frame):
    """``K_m^p`` for even ``m`` as a generating-function coefficient."""
    if m < 2 or m % 2:
        raise ValueError("the generating function only yields even dimensions")
    return genfun_coeffs(p, frame, m // 2 - 1)[-1]
