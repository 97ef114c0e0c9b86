import math
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cfkernel._expm import expm
from cfkernel.clifford import GeometricFrame, frame_of
from cfkernel.gamma_ops import (
    PolyField,
    default_truncation,
    dirac_apply,
    euler_apply,
    expm_action_krylov,
    gamma_apply,
    gamma_apply_dirac_form,
    gamma_matrix,
    kernel_bruteforce,
    kernel_bruteforce_direct,
    kernel_bruteforce_frame,
    monogenic_from_harmonic,
    monomials,
    vector_left,
)


def zero(m):
    return PolyField(m)


def complex_power_parts(m, k, a=1, b=2):
    """Real and imaginary parts of ``(y_a + i y_b)^k``, both harmonic."""
    re, im = PolyField(m), PolyField(m)
    for j in range(k + 1):
        e = [0] * m
        e[a - 1] += k - j
        e[b - 1] += j
        c = Fraction(math.comb(k, j))
        term = PolyField.monomial(m, e, 0, c)
        # i^j
        if j % 4 == 0:
            re = re + term
        elif j % 4 == 1:
            im = im + term
        elif j % 4 == 2:
            re = re - term
        else:
            im = im - term
    return re, im


def harmonics(m, k):
    out = list(complex_power_parts(m, k))
    if m >= 3 and k >= 1:
        out.extend(h.times_coordinate(2) for h in complex_power_parts(m, k - 1))
        out.extend(complex_power_parts(m, k, 2, 3))
    return [h for h in out if h.terms]


def laplacian(f):
    out = PolyField(f.dim)
    for j in range(f.dim):
        out = out + f.partial(j).partial(j)
    return out


def test_monomial_count():
    assert len(monomials(3, 4)) == math.comb(6, 2)
    assert monomials(2, 2) == [(2, 0), (1, 1), (0, 2)]


@pytest.mark.parametrize("m", [2, 3, 4])
@pytest.mark.parametrize("k", [0, 1, 2, 3, 4])
def test_gamma_eigenrelations_exact(m, k):
    for h in harmonics(m, k):
        assert laplacian(h) == zero(m)
        M = monogenic_from_harmonic(h, k)
        assert dirac_apply(M) == zero(m)
        # Gamma M_k = -k M_k
        assert gamma_apply(M) == M.scale(-k)
        # Gamma (y M_k) = (k + m - 1) y M_k, i.e. eigenvalue (k+1) + m - 2
        yM = vector_left(M)
        assert gamma_apply(yM) == yM.scale(k + m - 1)


@pytest.mark.parametrize("m", [2, 3, 4, 5])
@pytest.mark.parametrize("power", [0, 1, 2])
def test_gamma_annihilates_radial_scalars(m, power):
    assert gamma_apply(PolyField.radial(m, power)) == zero(m)


fields = st.dictionaries(
    st.tuples(st.tuples(*[st.integers(0, 2)] * 3), st.integers(0, 7)),
    st.fractions(min_value=-5, max_value=5, max_denominator=7),
    max_size=6,
)


@given(fields)
@settings(max_examples=60, deadline=None)
def test_two_forms_of_gamma_agree(terms):
    f = PolyField(3, terms)
    assert gamma_apply(f) == gamma_apply_dirac_form(f)


@given(fields)
@settings(max_examples=30, deadline=None)
def test_euler_operator_counts_degree(terms):
    f = PolyField(3, terms)
    for k in f.degrees():
        fk = f.homogeneous(k)
        assert euler_apply(fk) == fk.scale(k)


@pytest.mark.parametrize("m,k", [(2, 3), (3, 2), (3, 3), (4, 2)])
def test_gamma_matrix_matches_operator_and_spectrum(m, k):
    G = gamma_matrix(m, k)
    rng = np.random.default_rng(m * 10 + k)
    vec = rng.normal(size=G.size)
    f = G.field_of(vec)
    assert np.allclose(G.vector_of(gamma_apply(f)), G.matrix @ vec)
    eig = np.linalg.eigvals(G.dense())
    allowed = {-l for l in range(k + 1)} | {l + m - 2 for l in range(1, k + 1)}
    assert np.allclose(eig.imag, 0, atol=1e-9)
    assert {int(round(e)) for e in eig.real} <= allowed


def test_gamma_matrix_guard():
    with pytest.raises(ValueError):
        gamma_matrix(6, 2)


def test_krylov_matches_dense_exponential():
    G = gamma_matrix(3, 3)
    rng = np.random.default_rng(0)
    vec = rng.normal(size=G.size) + 0j
    ref = expm(0.7j * G.dense()) @ vec
    got, dim = expm_action_krylov(G.matrix, vec, 0.7j)
    assert np.allclose(got, ref, atol=1e-12)
    assert dim <= G.size
    assert expm_action_krylov(G.matrix, np.zeros(G.size), 1j)[1] == 0


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_bruteforce_at_p_zero_is_plane_wave(m):
    f = GeometricFrame.from_uv(0.6, 0.8)
    val = kernel_bruteforce_frame(m, 0.0, f)[0]
    assert val.scalar == pytest.approx(np.exp(-0.6j), abs=1e-13)
    assert abs(val.bivector_coeff) < 1e-13


def test_bruteforce_two_dimensions_is_bivector_exponential():
    val, residual = kernel_bruteforce_frame(2, 0.5 * math.pi, GeometricFrame.from_uv(0.0, 1.0))
    assert val.scalar == pytest.approx(math.cos(1.0), abs=1e-13)
    assert val.bivector_coeff == pytest.approx(math.sin(1.0), abs=1e-13)
    assert residual < 1e-13


@pytest.mark.parametrize("p", [0.3, 0.5 * math.pi, 2.0])
def test_canonical_pair_matches_direct_computation(p):
    rng = np.random.default_rng(7)
    x, y = rng.normal(size=3) * 0.6, rng.normal(size=3) * 0.6
    direct, residual = kernel_bruteforce_direct(3, p, x, y)
    assert residual < 1e-12
    assert kernel_bruteforce(3, p, x, y).max_abs_diff(direct) < 1e-12


def test_bruteforce_truncation_guard():
    assert default_truncation(1.0) >= 17
    with pytest.raises(ValueError):
        kernel_bruteforce_frame(3, 1.0, GeometricFrame.from_uv(1.0, 1.0), n=3)
    with pytest.raises(ValueError):
        kernel_bruteforce(3, 1.0, [1.0, 0.0], [0.0, 1.0])
    with pytest.raises(ValueError):
        kernel_bruteforce_frame(7, 1.0, GeometricFrame.from_uv(0.1, 0.1))
