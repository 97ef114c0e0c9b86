"""Polynomial Clifford fields and the Dirac, Euler and Gamma operators.

:class:`PolyField` stores a polynomial ``R^m -> Cl_{0,m}`` as a mapping
``(monomial exponents, blade bitmask) -> coefficient``.  Coefficients are
``fractions.Fraction`` by default so operator identities can be checked
exactly; floats and complex numbers work as well.

The brute-force kernel builds the action of ``Gamma_y`` on each space of
homogeneous degree-``k`` polynomials as a sparse matrix, applies
``exp(i p Gamma)`` to the degree-``k`` part of ``exp(-i(x, y))`` and sums.
"""
from __future__ import annotations

import functools
import math
from fractions import Fraction
from itertools import combinations

import numpy as np
import scipy.sparse as sps

from ._expm import expm
from .clifford import GeometricFrame, Multivector, PlaneValue, frame_of, product_tables


def monomials(m, k):
    """Exponent tuples of degree ``k`` in ``m`` variables, graded lexicographic (descending)."""
    if m == 1:
        return [(k,)]
    out = []
    for a in range(k, -1, -1):
        for rest in monomials(m - 1, k - a):
            out.append((a,) + rest)
    return out


class PolyField:
    """Polynomial with Clifford-algebra coefficients in ``m`` variables."""

    def __init__(self, dim, terms=None):
        self.dim = dim
        self.terms = {}
        for key, c in (terms or {}).items():
            if c != 0:
                self.terms[key] = c

    @classmethod
    def monomial(cls, dim, exponents, blade=0, coeff=Fraction(1)):
        return cls(dim, {(tuple(exponents), blade): coeff})

    @classmethod
    def coordinate(cls, dim, j, coeff=Fraction(1)):
        """The scalar polynomial ``y_j`` (1-based)."""
        e = [0] * dim
        e[j - 1] = 1
        return cls.monomial(dim, e, 0, coeff)

    @classmethod
    def vector_variable(cls, dim):
        """``y = sum_j e_j y_j``."""
        terms = {}
        for j in range(dim):
            e = [0] * dim
            e[j] = 1
            terms[(tuple(e), 1 << j)] = Fraction(1)
        return cls(dim, terms)

    @classmethod
    def radial(cls, dim, power=1):
        """Scalar ``|y|^(2 power)``."""
        out = cls(dim, {((0,) * dim, 0): Fraction(1)})
        r2 = cls(dim, {})
        for j in range(1, dim + 1):
            r2 = r2 + cls.coordinate(dim, j) * cls.coordinate(dim, j)
        for _ in range(power):
            out = out * r2
        return out

    def __eq__(self, other):
        return isinstance(other, PolyField) and self.dim == other.dim and self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, 0) + c
        return PolyField(self.dim, out)

    def __neg__(self):
        return PolyField(self.dim, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        return PolyField(self.dim, {k: s * c for k, c in self.terms.items()})

    def __mul__(self, other):
        """Product of fields: monomials multiply, blades via the Clifford product."""
        if not isinstance(other, PolyField):
            return self.scale(other)
        xor, sign = product_tables(self.dim)
        out = {}
        for (ea, ba), ca in self.terms.items():
            for (eb, bb), cb in other.terms.items():
                key = (tuple(i + j for i, j in zip(ea, eb)), int(xor[ba, bb]))
                out[key] = out.get(key, 0) + int(sign[ba, bb]) * ca * cb
        return PolyField(self.dim, out)

    __rmul__ = scale

    def left_blade(self, blade, coeff=1):
        """``coeff * e_blade * f``."""
        xor, sign = product_tables(self.dim)
        out = {}
        for (e, b), c in self.terms.items():
            key = (e, int(xor[blade, b]))
            out[key] = out.get(key, 0) + int(sign[blade, b]) * coeff * c
        return PolyField(self.dim, out)

    def partial(self, j):
        """Derivative in ``y_j`` (0-based)."""
        out = {}
        for (e, b), c in self.terms.items():
            if e[j]:
                ne = list(e)
                ne[j] -= 1
                key = (tuple(ne), b)
                out[key] = out.get(key, 0) + e[j] * c
        return PolyField(self.dim, out)

    def times_coordinate(self, j):
        """Multiply by ``y_j`` (0-based)."""
        out = {}
        for (e, b), c in self.terms.items():
            ne = list(e)
            ne[j] += 1
            out[(tuple(ne), b)] = c
        return PolyField(self.dim, out)

    def homogeneous(self, k):
        return PolyField(self.dim, {key: c for key, c in self.terms.items() if sum(key[0]) == k})

    def degrees(self):
        return sorted({sum(e) for e, _ in self.terms})

    def evaluate(self, y):
        y = np.asarray(y)
        c = np.zeros(1 << self.dim, dtype=complex)
        for (e, b), coeff in self.terms.items():
            c[b] += complex(coeff) * np.prod(y ** np.array(e))
        return Multivector(self.dim, c)

    def __repr__(self):
        return f"PolyField(m={self.dim}, {len(self.terms)} terms)"


def dirac_apply(f):
    """``D f = sum_j e_j d_j f`` with left multiplication."""
    out = PolyField(f.dim)
    for j in range(f.dim):
        out = out + f.partial(j).left_blade(1 << j)
    return out


def euler_apply(f):
    """``E f = sum_j y_j d_j f``."""
    out = PolyField(f.dim)
    for j in range(f.dim):
        out = out + f.partial(j).times_coordinate(j)
    return out


def vector_left(f):
    """``y f`` with ``y = sum_j y_j e_j``."""
    out = PolyField(f.dim)
    for j in range(f.dim):
        out = out + f.times_coordinate(j).left_blade(1 << j)
    return out


def gamma_apply(f):
    """``Gamma f = -sum_{j<k} e_j e_k (y_j d_k - y_k d_j) f``."""
    out = PolyField(f.dim)
    for j, k in combinations(range(f.dim), 2):
        rot = f.partial(k).times_coordinate(j) - f.partial(j).times_coordinate(k)
        out = out + rot.left_blade((1 << j) | (1 << k), -1)
    return out


def gamma_apply_dirac_form(f):
    """``Gamma f = -y D f - E f``."""
    return -(vector_left(dirac_apply(f)) + euler_apply(f))


def monogenic_from_harmonic(h, k):
    """Spherical monogenic ``h + y D h / (m + 2k - 2)`` of a degree-``k`` harmonic ``h``."""
    if k == 0:
        return h  # constants are monogenic; the formula would divide by zero when m = 2
    return h + vector_left(dirac_apply(h)).scale(Fraction(1, h.dim + 2 * k - 2))


# --- sparse matrix realisation ------------------------------------------------

MAX_MATRIX_M = 5
MAX_MATRIX_K = 8


class GammaMatrix:
    """Matrix of ``Gamma_y`` on homogeneous degree-``k`` polynomials.

    The basis is ``monomials(m, k)`` (outer) times the blades in ``blades``
    (inner), so ``index = mono * len(blades) + blade_position``.
    """

    def __init__(self, m, k, matrix, monos, blades):
        self.dim = m
        self.degree = k
        self.matrix = matrix
        self.monomials = monos
        self.blades = blades

    @property
    def size(self):
        return self.matrix.shape[0]

    def dense(self):
        return self.matrix.toarray()

    def vector_of(self, f):
        """Coefficient vector of a degree-``k`` field."""
        pos = {b: i for i, b in enumerate(self.blades)}
        mono = {e: i for i, e in enumerate(self.monomials)}
        v = np.zeros(self.size, dtype=complex)
        nb = len(self.blades)
        for (e, b), c in f.terms.items():
            if sum(e) != self.degree:
                raise ValueError("field is not homogeneous of the matrix degree")
            v[mono[e] * nb + pos[b]] += complex(c)
        return v

    def field_of(self, vec):
        nb = len(self.blades)
        terms = {}
        for idx in np.flatnonzero(vec):
            terms[(self.monomials[idx // nb], self.blades[idx % nb])] = vec[idx]
        return PolyField(self.dim, terms)


@functools.lru_cache(maxsize=64)
def _gamma_sparse(m, k, even_only):
    monos = monomials(m, k)
    index = {e: i for i, e in enumerate(monos)}
    blades = [b for b in range(1 << m) if not even_only or bin(b).count("1") % 2 == 0]
    bpos = {b: i for i, b in enumerate(blades)}
    nb = len(blades)
    xor, sign = product_tables(m)
    expo = np.array(monos, dtype=np.int64).reshape(len(monos), m)
    barr = np.array(blades)
    rows, cols, vals = [], [], []
    for j, l in combinations(range(m), 2):
        pair = (1 << j) | (1 << l)
        new_blade = np.array([bpos[int(xor[pair, b])] for b in blades])
        bsign = np.array([int(sign[pair, b]) for b in blades], dtype=float)
        # -e_j e_l y_j d_l  and  +e_j e_l y_l d_j
        for src, dst, factor in ((l, j, -1.0), (j, l, 1.0)):
            ok = np.flatnonzero(expo[:, src] > 0)
            if ok.size == 0:
                continue
            target = expo[ok].copy()
            target[:, src] -= 1
            target[:, dst] += 1
            tidx = np.array([index[tuple(r)] for r in target])
            mult = factor * expo[ok, src]
            r = (tidx[:, None] * nb + new_blade[None, :]).ravel()
            c = (ok[:, None] * nb + np.arange(nb)[None, :]).ravel()
            v = (mult[:, None] * bsign[None, :]).ravel()
            rows.append(r)
            cols.append(c)
            vals.append(v)
    n = len(monos) * nb
    if rows:
        mat = sps.csr_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
        )
    else:
        mat = sps.csr_matrix((n, n))
    return mat, monos, barr


def gamma_matrix(m, k):
    """Sparse matrix of ``Gamma_y`` on P_k (all blades), for ``m <= 5``, ``k <= 8``."""
    if not (1 <= m <= MAX_MATRIX_M and 0 <= k <= MAX_MATRIX_K):
        raise ValueError(f"gamma_matrix needs m <= {MAX_MATRIX_M} and k <= {MAX_MATRIX_K}")
    mat, monos, blades = _gamma_sparse(m, k, False)
    return GammaMatrix(m, k, mat, monos, [int(b) for b in blades])


def expm_action_krylov(a, vec, scale, tol=1e-15, max_dim=None):
    """``exp(scale * A) vec`` via an Arnoldi basis and a dense ``expm`` of the projection.

    Returns ``(result, krylov_dim)``.  The iteration stops at breakdown or
    once the standard a-posteriori estimate drops below ``tol * |vec|``.
    """
    beta = np.linalg.norm(vec)
    if beta == 0:
        return np.zeros_like(vec, dtype=complex), 0
    n = vec.shape[0]
    max_dim = min(n, max_dim or 200)
    basis = [vec / beta]
    h = np.zeros((max_dim + 1, max_dim), dtype=complex)
    anorm = abs(scale) * max(1.0, float(abs(a).sum(axis=0).max()))
    for j in range(max_dim):
        w = a @ basis[j]
        for _ in range(2):
            for i, q in enumerate(basis):
                c = np.vdot(q, w)
                h[i, j] += c
                w = w - c * q
        hn = np.linalg.norm(w)
        h[j + 1, j] = hn
        small = expm(scale * h[: j + 1, : j + 1])
        if hn <= 1e-13 * anorm / abs(scale or 1.0) or j + 1 == max_dim:
            break
        if abs(scale) * hn * abs(small[j, 0]) <= tol:
            break
        basis.append(w / hn)
    dim = j + 1
    coeff = beta * small[:, 0]
    out = np.zeros(n, dtype=complex)
    for i in range(dim):
        out += coeff[i] * basis[i]
    return out, dim


@functools.lru_cache(maxsize=4096)
def _canonical_degree(m, p, k):
    """Restriction of ``exp(i p Gamma)(y_1^k)`` to monomials in ``y_1, y_2`` only.

    Returns an array ``g[a, blade]`` for the monomial ``y_1^(k-a) y_2^a``.
    """
    mat, monos, blades = _gamma_sparse(m, k, True)
    nb = len(blades)
    vec = np.zeros(mat.shape[0], dtype=complex)
    vec[monos.index((k,) + (0,) * (m - 1)) * nb] = 1.0
    res, _ = expm_action_krylov(mat, vec, 1j * p)
    res = res.reshape(len(monos), nb)
    out = np.zeros((k + 1, nb), dtype=complex)
    for a in range(k + 1):
        e = (k - a, a) + (0,) * (m - 2)
        out[a] = res[monos.index(e)]
    out.setflags(write=False)
    return out, tuple(int(b) for b in blades)


TAIL_TOL = 1e-12
PLANE_TOL = 1e-10
BRUTEFORCE_MAX_M = 6  # the even subalgebra times P_k outgrows memory beyond this


def default_truncation(t, tail=1e-16):
    """Smallest ``N`` with ``t^(N+1)/(N+1)! < tail``."""
    n = 0
    while t ** (n + 1) / math.factorial(n + 1) >= tail:
        n += 1
    return n


def _tail_guard(t, n):
    if t ** (n + 1) / math.factorial(n + 1) >= TAIL_TOL:
        raise ValueError(f"truncation degree {n} too small for t = {t}")


def kernel_bruteforce_frame(m, p, frame, n=None):
    """Brute-force kernel at a frame, using ``x = e_1`` and ``y = u e_1 + v e_2``.

    Returns the plane value together with the out-of-plane residual.
    """
    if not 2 <= m <= BRUTEFORCE_MAX_M:
        raise ValueError(f"brute force needs 2 <= m <= {BRUTEFORCE_MAX_M}")
    u, v, t = float(frame.u), float(frame.v), float(frame.t)
    if n is None:
        n = default_truncation(t)
    _tail_guard(t, n)
    e12 = 0b11
    alpha = 0j
    beta = 0j
    residual_terms = {}
    for k in range(n + 1):
        g, blades = _canonical_degree(m, float(p), k)
        w = (-1j) ** k / math.factorial(k)
        powers = np.array([u ** (k - a) * v**a for a in range(k + 1)])
        vals = w * (powers @ g)
        for bi, b in enumerate(blades):
            if b == 0:
                alpha += vals[bi]
            elif b == e12:
                # divide the e12 part by v exactly: drop one power of v
                beta += w * sum(
                    g[a, bi] * u ** (k - a) * v ** (a - 1) for a in range(1, k + 1)
                )
                residual_terms[-1] = residual_terms.get(-1, 0) + w * g[0, bi] * u**k
            else:
                residual_terms[b] = residual_terms.get(b, 0) + vals[bi]
    residual = max((abs(r) for r in residual_terms.values()), default=0.0)
    if residual > PLANE_TOL:
        raise ArithmeticError(f"brute-force kernel left the plane algebra (residual {residual:.3g})")
    err = max(residual, t ** (n + 1) / math.factorial(n + 1))
    return PlaneValue(alpha, beta, frame, rep="bruteforce", err_est=err), residual


def kernel_bruteforce(m, p, x, y, n=None):
    """``exp(i p Gamma_y) exp(-i(x, y))`` projected onto ``span{1, x^y}``.

    The value depends on ``(x, y)`` only through their frame, so the
    computation runs at a canonical pair with the same frame.
    """
    x = np.asarray(x, dtype=float)
    if x.shape[0] != m:
        raise ValueError("vector dimension does not match m")
    frame = frame_of(x, y)
    value, _ = kernel_bruteforce_frame(m, p, frame, n)
    return value


def kernel_bruteforce_direct(m, p, x, y, n=None):
    """Brute force at the given vectors, without moving to a canonical pair.

    Slower; used to confirm the canonical shortcut.  Returns the plane value
    and the out-of-plane residual.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if not 2 <= m <= BRUTEFORCE_MAX_M or x.shape[0] != m:
        raise ValueError(f"brute force needs 2 <= m <= {BRUTEFORCE_MAX_M} and m-vectors")
    frame = frame_of(x, y)
    t = frame.t
    if n is None:
        n = default_truncation(t)
    _tail_guard(t, n)
    total = np.zeros(1 << m, dtype=complex)
    for k in range(n + 1):
        mat, monos, blades = _gamma_sparse(m, k, True)
        nb = len(blades)
        vec = np.zeros(mat.shape[0], dtype=complex)
        for i, e in enumerate(monos):
            vec[i * nb] = math.factorial(k) / np.prod([math.factorial(a) for a in e]) * np.prod(
                x ** np.array(e)
            )
        res, _ = expm_action_krylov(mat, vec, 1j * p)
        res = res.reshape(len(monos), nb)
        ymono = np.array([np.prod(y ** np.array(e)) for e in monos])
        total[np.asarray(blades)] += (-1j) ** k / math.factorial(k) * (ymono @ res)
    from .clifford import wedge_coefficients

    w = wedge_coefficients(x, y)
    ww = float(np.real(np.vdot(w, w)))
    alpha = total[0]
    beta = np.vdot(w, total) / ww if ww > 0 else 0j
    rest = total.copy()
    rest[0] = 0
    rest -= beta * w
    return PlaneValue(alpha, beta, frame, rep="bruteforce"), float(np.max(np.abs(rest)))
