import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

from s3polygons import su2
from s3polygons.errors import AntipodalLog

from conftest import as_matrix, from_matrix, pure_matrix

finite = st.floats(-3, 3, allow_nan=False, allow_infinity=False)
vectors = st.tuples(finite, finite, finite).map(np.array)
quats = st.tuples(finite, finite, finite, finite).filter(
    lambda q: np.linalg.norm(q) > 1e-3).map(lambda q: su2.normalize(np.array(q)))


def test_mul_basis_identities():
    assert np.allclose(su2.mul(su2.I, su2.J), su2.K)
    assert np.allclose(su2.mul(su2.J, su2.K), su2.I)
    assert np.allclose(su2.mul(su2.I, su2.I), su2.MINUS_ONE)
    g = su2.random_unit(np.random.default_rng(1))
    assert np.allclose(su2.mul(su2.ONE, g), g)


@given(quats, quats)
def test_mul_matches_matrix_product(a, b):
    assert np.allclose(as_matrix(su2.mul(a, b)), as_matrix(a) @ as_matrix(b), atol=1e-12)


def test_mul_broadcasts(rng):
    a = su2.random_unit(rng, 7)
    b = su2.random_unit(rng, 7)
    stacked = su2.mul(a, b)
    for k in range(7):
        assert np.allclose(stacked[k], su2.mul(a[k], b[k]), atol=1e-15)


@given(quats, quats, quats)
def test_associativity(a, b, c):
    lhs = su2.mul(su2.mul(a, b), c)
    rhs = su2.mul(a, su2.mul(b, c))
    assert np.abs(lhs - rhs).max() < 1e-12


def test_trace_examples():
    assert su2.trace(su2.ONE) == 2.0
    assert su2.trace(su2.I) == 0.0
    assert abs(su2.trace(su2.exp_alg(np.pi / 3 * su2.BASIS[0])) - 1.0) < 1e-15


@given(quats, quats)
def test_trace_is_matrix_trace_and_cyclic(g, h):
    assert abs(su2.trace(g) - np.trace(as_matrix(g)).real) < 1e-12
    assert abs(su2.trace(su2.mul(g, h)) - su2.trace(su2.mul(h, g))) < 1e-12


def test_exp_examples():
    assert np.array_equal(su2.exp_alg(np.zeros(3)), su2.ONE)
    assert np.allclose(su2.exp_alg(np.pi / 2 * su2.BASIS[2]), su2.K, atol=1e-15)
    assert np.allclose(su2.exp_alg(np.pi * su2.BASIS[0]), su2.MINUS_ONE, atol=1e-15)


@given(vectors)
def test_exp_matches_matrix_exponential(v):
    assert np.allclose(as_matrix(su2.exp_alg(v)), expm(pure_matrix(v)), atol=1e-12)


def test_exp_series_branch_is_continuous():
    v = np.array([3e-7, -2e-7, 1e-7])
    w = v * (1.0 + 1e-9)
    big = np.array([3e-6, -2e-6, 1e-6])
    assert np.allclose(su2.exp_alg(v), [1, *v], atol=1e-13)
    assert np.abs(su2.exp_alg(w) - su2.exp_alg(v)).max() < 1e-14
    assert np.allclose(su2.exp_alg(big), [np.cos(np.linalg.norm(big)), *big], atol=1e-15)


def test_log_examples():
    assert np.array_equal(su2.log_group(su2.ONE), np.zeros(3))
    assert np.allclose(su2.log_group(su2.K), [0, 0, np.pi / 2])
    with pytest.raises(AntipodalLog):
        su2.log_group(su2.MINUS_ONE)


def test_log_near_identity_uses_series():
    g = su2.exp_alg(np.array([1e-8, 2e-8, -1e-8]))
    assert np.allclose(su2.log_group(g), [1e-8, 2e-8, -1e-8], rtol=1e-9, atol=0)


@settings(max_examples=200)
@given(st.tuples(finite, finite, finite).filter(lambda v: 1e-4 < np.linalg.norm(v)),
       st.floats(0, np.pi - 1e-6))
def test_log_inverts_exp(direction, radius):
    v = np.array(direction) / np.linalg.norm(direction) * radius
    assert np.abs(su2.log_group(su2.exp_alg(v)) - v).max() < 1e-10


@given(quats)
def test_exp_inverts_log(g):
    if su2.trace(g) > -2 + 1e-6:
        assert np.abs(su2.exp_alg(su2.log_group(g)) - g).max() < 1e-12


def test_adjoint_examples():
    v = np.array([0.3, -1.0, 2.0])
    assert np.allclose(su2.adjoint(su2.ONE, v), v)
    assert np.allclose(su2.adjoint(su2.I, [0, 1, 0]), [0, -1, 0])
    assert np.array_equal(su2.adjoint(su2.random_unit(np.random.default_rng(0)), np.zeros(3)),
                          np.zeros(3))


@given(quats, vectors, vectors)
def test_adjoint_preserves_killing(g, u, v):
    lhs = su2.killing(su2.adjoint(g, u), su2.adjoint(g, v))
    assert abs(lhs - su2.killing(u, v)) < 1e-12 * max(1.0, np.linalg.norm(u) * np.linalg.norm(v))


@given(quats, vectors)
def test_adjoint_matches_matrix_conjugation(g, v):
    m = as_matrix(g)
    expected = m @ pure_matrix(v) @ m.conj().T
    assert np.allclose(pure_matrix(su2.adjoint(g, v)), expected, atol=1e-11)


def test_killing_examples():
    assert su2.killing(su2.BASIS[0], su2.BASIS[0]) == 1.0
    assert su2.killing(su2.BASIS[0], su2.BASIS[1]) == 0.0
    assert su2.killing([2, 1, 0], [0, 1, 0]) == 1.0


@given(vectors, vectors)
def test_killing_is_minus_half_trace(u, v):
    expected = -0.5 * np.trace(pure_matrix(u) @ pure_matrix(v)).real
    assert abs(su2.killing(u, v) - expected) < 1e-10


def test_geodesic_distance_examples():
    assert su2.geodesic_distance(su2.ONE, su2.ONE) == 0.0
    assert abs(su2.geodesic_distance(su2.ONE, su2.I) - np.pi / 2) < 1e-15
    assert abs(su2.geodesic_distance(su2.ONE, su2.MINUS_ONE) - np.pi) < 1e-15


def test_long_products_stay_normalized(rng):
    g = su2.random_unit(rng, 10_000)
    p = su2.product(g)
    assert abs(np.linalg.norm(p) - 1) < 1e-12
    m = np.eye(2, dtype=complex)
    for q in g[:50]:
        m = m @ as_matrix(q)
    assert np.allclose(su2.product(g[:50]), from_matrix(m), atol=1e-12)


def test_constants_are_read_only():
    with pytest.raises(ValueError):
        su2.ONE[0] = 2.0
