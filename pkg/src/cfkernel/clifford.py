"""Dense arithmetic in the complexified Clifford algebra Cl_{0,m}^c.

Basis blades are stored by bitmask: bit ``i`` set means the generator
``e_{i+1}`` is present, and indices inside a blade are kept increasing.
So for ``m = 3`` the coefficient order is::

    1, e1, e2, e12, e3, e13, e23, e123

Every Clifford-Fourier kernel value lies in the commutative plane algebra
spanned by ``1`` and ``x^y``.  :class:`GeometricFrame` carries the three
invariants those formulas need and :class:`PlaneValue` carries the two
coefficients.  Both accept numpy arrays for vectorised evaluation.
"""
from __future__ import annotations

import functools
import threading
from dataclasses import dataclass, field

import numpy as np

MAX_DIM = 10

_table_lock = threading.Lock()


def _popcount(a):
    return bin(a).count("1")


def blade_grade(index):
    return _popcount(index)


def blade_name(index):
    """``'1'`` for the scalar, else e.g. ``'e13'``."""
    if index == 0:
        return "1"
    return "e" + "".join(str(i + 1) for i in range(MAX_DIM) if index >> i & 1)


def blade_index(indices):
    """Bitmask of the blade e_{i1}...e_{ik} (1-based, increasing)."""
    out = 0
    for i in indices:
        out |= 1 << (i - 1)
    return out


def _reorder_sign(a, b):
    # transpositions needed to sort e_A e_B, then one -1 per repeated generator
    swaps = 0
    a >>= 1
    while a:
        swaps += _popcount(a & b)
        a >>= 1
    return -1 if swaps & 1 else 1


@functools.lru_cache(maxsize=None)
def _tables(m):
    with _table_lock:
        n = 1 << m
        idx = np.arange(n)
        xor = idx[:, None] ^ idx[None, :]
        sign = np.empty((n, n), dtype=np.int8)
        for a in range(n):
            for b in range(n):
                s = _reorder_sign(a, b)
                if _popcount(a & b) & 1:
                    s = -s
                sign[a, b] = s
        xor.setflags(write=False)
        sign.setflags(write=False)
        return xor, sign


def product_tables(m):
    """``(xor, sign)`` such that ``e_a e_b = sign[a, b] * e_{xor[a, b]}``."""
    if not 1 <= m <= MAX_DIM:
        raise ValueError(f"dimension must be in 1..{MAX_DIM}, got {m}")
    return _tables(m)


@functools.lru_cache(maxsize=None)
def grades(m):
    g = np.array([_popcount(a) for a in range(1 << m)])
    g.setflags(write=False)
    return g


class Multivector:
    """Element of Cl_{0,m}^c with dense complex coefficients."""

    __slots__ = ("dim", "coeffs")

    def __init__(self, dim, coeffs=None):
        if not 1 <= dim <= MAX_DIM:
            raise ValueError(f"dimension must be in 1..{MAX_DIM}, got {dim}")
        n = 1 << dim
        if coeffs is None:
            c = np.zeros(n, dtype=complex)
        else:
            c = np.array(coeffs, dtype=complex)
            if c.shape != (n,):
                raise ValueError(f"expected {n} coefficients, got shape {c.shape}")
        c.setflags(write=False)
        self.dim = dim
        self.coeffs = c

    @classmethod
    def scalar(cls, dim, value):
        c = np.zeros(1 << dim, dtype=complex)
        c[0] = value
        return cls(dim, c)

    @classmethod
    def blade(cls, dim, indices, value=1.0):
        c = np.zeros(1 << dim, dtype=complex)
        c[blade_index(indices)] = value
        return cls(dim, c)

    @classmethod
    def vector(cls, x):
        x = np.asarray(x, dtype=complex)
        m = x.shape[0]
        c = np.zeros(1 << m, dtype=complex)
        c[1 << np.arange(m)] = x
        return cls(m, c)

    def __getitem__(self, blade):
        if isinstance(blade, (tuple, list)):
            blade = blade_index(blade)
        return self.coeffs[blade]

    def grade(self, k):
        return Multivector(self.dim, np.where(grades(self.dim) == k, self.coeffs, 0))

    def _check(self, other):
        if not isinstance(other, Multivector):
            return Multivector.scalar(self.dim, other)
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return other

    def __add__(self, other):
        other = self._check(other)
        return Multivector(self.dim, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __neg__(self):
        return Multivector(self.dim, -self.coeffs)

    def __sub__(self, other):
        other = self._check(other)
        return Multivector(self.dim, self.coeffs - other.coeffs)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Multivector):
            return mv_product(self, other)
        return Multivector(self.dim, self.coeffs * other)

    def __rmul__(self, other):
        return Multivector(self.dim, other * self.coeffs)

    def __truediv__(self, other):
        return Multivector(self.dim, self.coeffs / other)

    def allclose(self, other, atol=1e-12):
        other = self._check(other)
        return bool(np.allclose(self.coeffs, other.coeffs, rtol=0, atol=atol))

    def __repr__(self):
        terms = [
            f"{c:.6g}*{blade_name(i)}"
            for i, c in enumerate(self.coeffs)
            if c != 0
        ]
        return f"Multivector(m={self.dim}: " + (" + ".join(terms) or "0") + ")"


def mv_product(a, b):
    """Geometric product ``a b``."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    xor, sign = product_tables(a.dim)
    nz_a = np.flatnonzero(a.coeffs)
    nz_b = np.flatnonzero(b.coeffs)
    out = np.zeros(1 << a.dim, dtype=complex)
    if nz_a.size and nz_b.size:
        terms = sign[np.ix_(nz_a, nz_b)] * np.outer(a.coeffs[nz_a], b.coeffs[nz_b])
        np.add.at(out, xor[np.ix_(nz_a, nz_b)].ravel(), terms.ravel())
    return Multivector(a.dim, out)


def conjugate(a):
    """Clifford conjugation: the linear map with e_{j1}..e_{jl} -> (-1)^l e_{jl}..e_{j1}.

    The complex unit is left alone.
    """
    g = grades(a.dim)
    sign = np.where((g * (g + 1) // 2) % 2 == 0, 1, -1)
    return Multivector(a.dim, sign * a.coeffs)


def clifford_norm_sq(a):
    """``a * conjugate(a)`` (sum-of-squares norm for vectors, no hermitian conjugate)."""
    return mv_product(a, conjugate(a))


def _as_pair(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or x.shape != y.shape:
        raise ValueError(f"vectors must have equal dimension, got {x.shape} and {y.shape}")
    return x, y


def wedge_coefficients(x, y):
    """Bivector coefficients of ``x^y`` as a dense array of length 2^m."""
    x, y = _as_pair(x, y)
    m = x.shape[0]
    c = np.zeros(1 << m, dtype=complex)
    for j in range(m):
        for k in range(j + 1, m):
            c[(1 << j) | (1 << k)] = x[j] * y[k] - x[k] * y[j]
    return c


def vector_products(x, y):
    """Return ``((x, y), x^y)``, the inner product and the wedge bivector."""
    x, y = _as_pair(x, y)
    return float(x @ y), Multivector(x.shape[0], wedge_coefficients(x, y))


@dataclass(frozen=True)
class GeometricFrame:
    """Invariants ``u = (x, y)``, ``v = |x^y|``, ``t = |x||y|`` of a vector pair.

    Fields may be floats or broadcast-compatible arrays.
    """

    u: float
    v: float
    t: float

    @property
    def cos_theta(self):
        t = np.asarray(self.t, dtype=float)
        with np.errstate(invalid="ignore", divide="ignore"):
            c = np.where(t > 0, np.asarray(self.u) / np.where(t > 0, t, 1.0), 0.0)
        return c if c.ndim else float(c)

    @classmethod
    def from_uv(cls, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        if np.any(v < 0):
            raise ValueError("v must be non-negative")
        t = np.hypot(u, v)
        if u.ndim == 0 and v.ndim == 0:
            return cls(float(u), float(v), float(t))
        u, v, t = np.broadcast_arrays(u, v, t)
        return cls(u, v, t)

    def scaled(self, s):
        """Frame of ``(s x, y)`` for real ``s >= 0``."""
        return GeometricFrame(self.u * s, self.v * s, self.t * s)

    def same_as(self, other, rtol=1e-12):
        if self is other:
            return True
        scale = np.maximum(np.abs(self.t), np.abs(other.t))
        tol = rtol * np.maximum(scale, 1.0)
        return bool(
            np.all(np.abs(np.asarray(self.u) - np.asarray(other.u)) <= tol)
            and np.all(np.abs(np.asarray(self.v) - np.asarray(other.v)) <= tol)
        )

    def representative(self, m):
        """Concrete vectors ``x = e1``-scaled and ``y`` in the e1e2 plane with this frame."""
        if m < 2:
            raise ValueError("a frame with a wedge needs m >= 2")
        x = np.zeros(m)
        y = np.zeros(m)
        if self.t == 0:
            return x, y
        x[0] = 1.0
        y[0] = self.u
        y[1] = self.v
        return x, y


def frame_of(x, y):
    """Compute the :class:`GeometricFrame` of two real vectors."""
    x, y = _as_pair(x, y)
    u = float(x @ y)
    t = float(np.sqrt(x @ x) * np.sqrt(y @ y))
    d = t * t - u * u
    if d < 0:
        if d < -1e-12 * t * t:
            raise ArithmeticError(f"Cauchy-Schwarz violated: t^2-u^2 = {d}")
        d = 0.0
    # direct wedge norm is more accurate than sqrt(t^2-u^2) when v << t
    w = wedge_coefficients(x, y).real
    v = float(np.sqrt(w @ w)) if t > 0 else 0.0
    if not np.isfinite(v):
        v = float(np.sqrt(d))
    return GeometricFrame(u, v, t)


@dataclass(frozen=True)
class PlaneValue:
    """``scalar + bivector_coeff * (x^y)`` with ``(x^y)^2 = -v^2``.

    ``rep`` and ``err_est`` are optional annotations set by evaluators.
    """

    scalar: complex
    bivector_coeff: complex
    frame: GeometricFrame
    rep: str | None = field(default=None, compare=False)
    err_est: float | None = field(default=None, compare=False)

    @classmethod
    def one(cls, frame):
        return cls(1.0 + 0j, 0j, frame)

    def _check(self, other):
        if not isinstance(other, PlaneValue):
            return PlaneValue(other, 0.0, self.frame)
        if not self.frame.same_as(other.frame):
            raise ValueError("plane values belong to different frames")
        return other

    def __add__(self, other):
        other = self._check(other)
        return PlaneValue(self.scalar + other.scalar, self.bivector_coeff + other.bivector_coeff, self.frame)

    __radd__ = __add__

    def __neg__(self):
        return PlaneValue(-self.scalar, -self.bivector_coeff, self.frame)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __mul__(self, other):
        if isinstance(other, PlaneValue):
            return plane_mul(self, other)
        return PlaneValue(self.scalar * other, self.bivector_coeff * other, self.frame)

    __rmul__ = __mul__

    def embed(self, x, y):
        """The multivector ``scalar + bivector_coeff * (x^y)`` for concrete vectors."""
        x, y = _as_pair(x, y)
        c = self.bivector_coeff * wedge_coefficients(x, y)
        c[0] += self.scalar
        return Multivector(x.shape[0], c)

    def characters(self):
        """Images under the two characters ``W -> +iv`` and ``W -> -iv``."""
        iv = 1j * np.asarray(self.frame.v)
        return self.scalar + iv * self.bivector_coeff, self.scalar - iv * self.bivector_coeff

    def max_abs_diff(self, other):
        return float(
            np.max(
                np.maximum(
                    np.abs(np.asarray(self.scalar) - np.asarray(other.scalar)),
                    np.abs(np.asarray(self.bivector_coeff) - np.asarray(other.bivector_coeff)),
                )
            )
        )

    def isfinite(self):
        return bool(np.all(np.isfinite(self.scalar)) and np.all(np.isfinite(self.bivector_coeff)))


def plane_mul(a, b):
    """Product in the plane algebra, using ``W^2 = -v^2``."""
    if not a.frame.same_as(b.frame):
        raise ValueError("plane values belong to different frames")
    v2 = np.asarray(a.frame.v) ** 2
    return PlaneValue(
        a.scalar * b.scalar - a.bivector_coeff * b.bivector_coeff * v2,
        a.scalar * b.bivector_coeff + a.bivector_coeff * b.scalar,
        a.frame,
    )


def sinc(v):
    """``sin(v)/v`` with the value 1 at 0; accepts complex input."""
    v = np.asarray(v)
    small = np.abs(v) < 1e-4
    safe = np.where(small, 1.0, v)
    z2 = v * v
    series = 1 - z2 / 6 * (1 - z2 / 20 * (1 - z2 / 42))
    out = np.where(small, series, np.sin(safe) / safe)
    return out if out.ndim else out[()]


def exp_simple_bivector(frame, scale=1.0):
    """``exp(scale * x^y)`` as a plane value: ``cos(s v) + s sinc(s v) W``."""
    sv = np.asarray(scale) * np.asarray(frame.v)
    return PlaneValue(np.cos(sv) + 0j, scale * sinc(sv) + 0j, frame)
