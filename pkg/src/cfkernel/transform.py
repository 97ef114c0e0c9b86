"""Clifford-Fourier transform of sampled multivector functions.

    F(f)(y) = (2 pi)^(-m/2) sum_nodes w(x) K_m^p(x, y) f(x)

on a tensor Gauss-Hermite grid.  Nodes are ``x = sqrt(2) xi`` and the
weights carry ``2^(m/2) exp(|xi|^2)``, so integrands decaying like
``exp(-|x|^2/2)`` are integrated without the Hermite weight appearing.
"""
from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .clifford import GeometricFrame, Multivector, grades, product_tables
from .kernels import KernelRequest, kernel
from .special import gauss_hermite

SUPPORTED_DIMS = (2, 3, 4)
MAX_ORDER = {2: 128, 3: 48, 4: 24}
CHUNK = 65536


def hermite_grid(m, order):
    """Nodes ``(N, m)`` and weights ``(N,)`` for ``int_{R^m} g(x) dx``."""
    if order > MAX_ORDER.get(m, 0):
        raise ValueError(f"grid order {order} too large for m = {m}")
    rule = gauss_hermite(order)
    xi = rule.nodes
    w1 = rule.weights * np.exp(xi * xi) * math.sqrt(2.0)
    grids = np.meshgrid(*([math.sqrt(2.0) * xi] * m), indexing="ij")
    wgrids = np.meshgrid(*([w1] * m), indexing="ij")
    nodes = np.stack([g.ravel() for g in grids], axis=1)
    weights = np.prod(np.stack([g.ravel() for g in wgrids], axis=1), axis=1)
    return nodes, weights


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """A multivector-valued function known at quadrature nodes.

    ``values[i, b]`` is the coefficient of blade ``b`` at node ``i``.
    """

    dim: int
    nodes: np.ndarray
    weights: np.ndarray
    values: np.ndarray
    grid_order: int | None = None

    def __post_init__(self):
        if self.dim not in SUPPORTED_DIMS:
            raise ValueError(f"unsupported dimension {self.dim}")
        n = self.nodes.shape[0]
        if self.nodes.shape != (n, self.dim) or self.weights.shape != (n,):
            raise ValueError("nodes and weights do not match")
        if self.values.shape != (n, 2**self.dim):
            raise ValueError("values must have one multivector per node")

    @classmethod
    def on_hermite_grid(cls, m, order, func):
        """Sample ``func(nodes) -> (N,) scalars or (N, 2^m) multivectors``."""
        nodes, weights = hermite_grid(m, order)
        vals = np.asarray(func(nodes), dtype=complex)
        if vals.ndim == 1:
            full = np.zeros((vals.shape[0], 2**m), dtype=complex)
            full[:, 0] = vals
            vals = full
        return cls(m, nodes, weights, vals, order)

    @classmethod
    def gaussian(cls, m, order):
        return cls.on_hermite_grid(m, order, lambda x: np.exp(-0.5 * np.sum(x * x, axis=1)))

    @classmethod
    def from_spec(cls, spec):
        """Build from ``{"dim", "grid_order", "channels": {blade: [term, ...]}}``.

        Each term is ``{"coeff": c or [re, im], "powers": [k_1..k_m],
        "gaussian": g}`` and contributes ``c x^k exp(-g |x|^2)``.
        """
        m = int(spec["dim"])
        order = int(spec["grid_order"])
        channels = spec.get("channels", {})

        def func(x):
            out = np.zeros((x.shape[0], 2**m), dtype=complex)
            r2 = np.sum(x * x, axis=1)
            for blade, terms in channels.items():
                b = int(blade)
                if not 0 <= b < 2**m:
                    raise ValueError(f"blade index {b} out of range for m = {m}")
                for term in terms:
                    c = term.get("coeff", 1.0)
                    c = complex(*c) if isinstance(c, (list, tuple)) else complex(c)
                    powers = term.get("powers", [0] * m)
                    if len(powers) != m:
                        raise ValueError("powers must list one exponent per coordinate")
                    mono = np.prod(x ** np.asarray(powers, dtype=float), axis=1)
                    out[:, b] += c * mono * np.exp(-float(term.get("gaussian", 0.0)) * r2)
            return out

        return cls.on_hermite_grid(m, order, func)

    def __add__(self, other):
        self._same_grid(other)
        return SampledFunction(self.dim, self.nodes, self.weights, self.values + other.values, self.grid_order)

    def __mul__(self, c):
        return SampledFunction(self.dim, self.nodes, self.weights, self.values * c, self.grid_order)

    __rmul__ = __mul__

    def _same_grid(self, other):
        if self.dim != other.dim or self.nodes.shape != other.nodes.shape or not np.array_equal(self.nodes, other.nodes):
            raise ValueError("functions live on different grids")


@functools.lru_cache(maxsize=None)
def _left_matrices(m):
    """Matrices of left multiplication by each grade-2 blade, acting on coefficient rows."""
    xor, sign = product_tables(m)
    n = 2**m
    mats = []
    for b in _grade2(m):
        L = np.zeros((n, n))
        L[np.arange(n), xor[b]] = sign[b]  # row c maps to column xor[b, c]
        mats.append(L)
    return np.stack(mats)


def _bivector_left(m, wedge, f):
    """``(sum_b wedge[:, b] e_b) f`` for grade-2 blades ``b``, row-wise."""
    out = np.zeros_like(f)
    for k, L in enumerate(_left_matrices(m)):
        out += wedge[:, k : k + 1] * (f @ L)
    return out


def _grade2(m):
    return [int(b) for b in range(2**m) if grades(m)[b] == 2]


def _wedge_components(x, y):
    """Coefficients of ``x^y`` on the grade-2 blades, in blade-index order."""
    m = x.shape[1]
    cols = []
    for b in _grade2(m):
        i, j = [k for k in range(m) if b >> k & 1]
        cols.append(x[:, i] * y[j] - x[:, j] * y[i])
    return np.stack(cols, axis=1)


def cft_apply(f, p, targets):
    """Transform ``f`` with kernel ``K_m^p`` at each target vector; returns Multivectors."""
    m = f.dim
    targets = np.atleast_2d(np.asarray(targets, dtype=float))
    if targets.shape[1] != m:
        raise ValueError("targets must be m-vectors")
    norm = (2.0 * math.pi) ** (-0.5 * m)
    out = []
    for y in targets:
        acc = np.zeros(2**m, dtype=complex)
        for lo in range(0, f.nodes.shape[0], CHUNK):
            x = f.nodes[lo : lo + CHUNK]
            vals = f.values[lo : lo + CHUNK]
            w = f.weights[lo : lo + CHUNK]
            wedge = _wedge_components(x, y)
            u = x @ y
            v = np.sqrt(np.sum(wedge * wedge, axis=1))
            t = np.sqrt(np.sum(x * x, axis=1)) * math.sqrt(float(y @ y))
            K = kernel(KernelRequest(m, p, GeometricFrame(u, v, t)))
            Kf = K.scalar[:, None] * vals + K.bivector_coeff[:, None] * _bivector_left(m, wedge, vals)
            acc += np.tensordot(w, Kf, axes=(0, 0))
        out.append(Multivector(m, norm * acc))
    return out


def sphere_targets(m, radius, n_radii=5, n_dirs=8, seed=0):
    """Deterministic target set: ``n_dirs`` directions times radii in ``[0, radius]``."""
    rng = np.random.default_rng(seed)
    dirs = rng.normal(size=(n_dirs, m))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    radii = np.linspace(0.0, radius, n_radii)
    return np.array([r * d for r, d in itertools.product(radii, dirs)])


def gaussian_invariance_report(m, p, grid_order, target_radius=2.0, n_radii=5, n_dirs=8):
    """Run ``exp(-|x|^2/2)`` through :func:`cft_apply` and compare with itself."""
    f = SampledFunction.gaussian(m, grid_order)
    targets = sphere_targets(m, target_radius, n_radii, n_dirs)
    results = cft_apply(f, p, targets)
    rel = []
    for y, F in zip(targets, results):
        expected = math.exp(-0.5 * float(y @ y))
        diff = F.coeffs.copy()
        diff[0] -= expected
        rel.append(float(np.linalg.norm(diff)) / expected)
    rel = np.array(rel)
    return {"max_rel": float(rel.max()), "mean_rel": float(rel.mean()), "n_targets": int(rel.size)}
