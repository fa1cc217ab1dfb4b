import numpy as np
import pytest

from s3polygons import bending, moduli, su2
from s3polygons import quasipoisson as qp
from s3polygons.errors import BadIndex

from conftest import matrix_product, pure_matrix, as_matrix


def matrix_trace_word(word):
    # Independent evaluator working with 2x2 matrices.
    def f(t):
        m = np.eye(2, dtype=complex)
        for a in word:
            q = as_matrix(t.g[abs(a) - 1])
            m = m @ (q if a > 0 else q.conj().T)
        return float(np.trace(m).real)
    return qp.InvariantFunction(f)


def fd_right(f, t, i, h=1e-5):
    out = np.zeros(3)
    for a in range(3):
        vals = []
        for s in (h, -h):
            g = np.array(t.g)
            x = np.zeros(3)
            x[a] = s
            g[i - 1] = su2.qmul(su2.exp_alg(x), g[i - 1])
            vals.append(f(moduli.HolonomyTuple(g, check=False)))
        out[a] = (vals[0] - vals[1]) / (2 * h)
    return out


def random_word(rng, n, length):
    return [int(rng.integers(1, n + 1)) * int(rng.choice([-1, 1])) for _ in range(length)]


def test_d_right_of_single_trace(closed5):
    f = qp.trace_word([1])
    expected = -(2 * su2.im(closed5.g[0]))
    assert np.allclose(qp.d_right(f, closed5, 1), expected, atol=1e-14)
    fd = qp.InvariantFunction(f.evaluator)
    assert np.allclose(qp.d_right(fd, closed5, 1), expected, atol=1e-9)


def test_trivial_derivatives(closed5):
    c = qp.constant(1.5)
    assert np.array_equal(qp.d_right(c, closed5, 2), np.zeros(3))
    assert np.array_equal(qp.d_left(c, closed5, 2), np.zeros(3))
    f = qp.trace_word([1, 2])
    assert np.array_equal(qp.d_right(f, closed5, 4), np.zeros(3))
    with pytest.raises(BadIndex):
        qp.d_right(f, closed5, 6)


def test_left_right_relation(closed5):
    for f in (qp.trace_word([1, 2]), qp.InvariantFunction(qp.trace_word([2, -4, 3]).evaluator)):
        for i in range(1, 6):
            d = qp.d_right(f, closed5, i)
            dp = qp.d_left(f, closed5, i)
            assert np.allclose(su2.adjoint(closed5.g[i - 1], dp), d, atol=1e-9)


def test_d_left_second_slot_by_central_differences(closed5):
    f = qp.trace_word([1, 2])
    oracle = matrix_trace_word([1, 2])
    h = 1e-5
    fd = np.zeros(3)
    for a in range(3):
        vals = []
        for s in (h, -h):
            g = np.array(closed5.g)
            x = np.zeros(3)
            x[a] = s
            g[1] = su2.qmul(g[1], su2.exp_alg(x))
            vals.append(oracle(moduli.HolonomyTuple(g, check=False)))
        fd[a] = (vals[0] - vals[1]) / (2 * h)
    assert np.abs(qp.d_left(f, closed5, 2) - fd).max() < 1e-9


def test_trace_word_gradients_match_matrix_oracle(rng):
    for trial in range(20):
        n = int(rng.integers(2, 7))
        t = moduli.HolonomyTuple(su2.random_unit(rng, n))
        word = random_word(rng, n, int(rng.integers(1, 6)))
        f = qp.trace_word(word)
        oracle = matrix_trace_word(word)
        assert abs(f(t) - oracle(t)) < 1e-12
        for i in range(1, n + 1):
            assert np.abs(qp.d_right(f, t, i) - fd_right(oracle, t, i)).max() < 1e-8


def test_length_function_gradient(closed5):
    f = qp.length_function([2, 3, 4])
    fd = qp.InvariantFunction(f.evaluator)
    a, _ = qp.gradients(f, closed5)
    b, _ = qp.gradients(fd, closed5)
    assert np.abs(a - b).max() < 1e-8


def test_psi_accum(closed5):
    f = qp.trace_word([2, 3])
    assert np.allclose(qp.psi_accum(f, closed5, 1), qp.d_right(f, closed5, 1))
    fj = qp.prefix_trace(3)
    d1 = qp.d_right(fj, closed5, 1)
    for i in (1, 2, 3):
        assert np.allclose(qp.psi_accum(fj, closed5, i), d1, atol=1e-13)
    assert np.abs(qp.psi_accum(qp.constant(), closed5, 4)).max() == 0
    with pytest.raises(BadIndex):
        qp.psi_accum(f, closed5, 0)


def test_prefix_gradient_is_minus_capital_f(closed5):
    for j in range(1, 6):
        assert np.allclose(qp.d_right(qp.prefix_trace(j), closed5, 1),
                           -bending.f_cap(closed5, j), atol=1e-13)


def test_bracket_examples(closed5):
    f = qp.trace_word([1, 3])
    assert abs(qp.bracket(f, f, closed5)) < 1e-14
    for i in range(1, 6):
        for j in range(1, 6):
            assert abs(qp.bracket(qp.prefix_trace(i), qp.prefix_trace(j), closed5)) < 1e-12


def test_bracket_is_derivative_along_integrated_field(closed5):
    f = qp.trace_word([1, 2])
    g = qp.trace_word([2, 3])
    h = 1e-5
    plus = bending.integrate_field(g, closed5, h, 1)
    minus = bending.integrate_field(g, closed5, -h, 1)
    fd = (f(plus) - f(minus)) / (2 * h)
    assert abs(qp.bracket(f, g, closed5) - fd) < 1e-7
    assert abs(qp.bracket(f, g, closed5)) > 1e-3


def test_ham_field_examples(closed5):
    assert np.abs(qp.ham_field(qp.constant(), closed5).xi).max() == 0
    j = 3
    X = qp.ham_field(qp.prefix_trace(j), closed5)
    F = su2.pure(bending.f_cap(closed5, j))
    v = X.velocities()
    for i in range(5):
        g = closed5.g[i]
        expected = su2.qmul(F, g) - su2.qmul(g, F) if i < j else np.zeros(4)
        assert np.abs(v[i] - expected).max() < 1e-13


def test_directional_consistency(rng):
    for trial in range(10):
        t = moduli.random_closed(int(rng.integers(4, 7)), seed=rng)
        f = qp.trace_word(random_word(rng, t.n, 3))
        h = qp.trace_word(random_word(rng, t.n, 2))
        X = qp.ham_field(f, t)
        assert abs(qp.directional_derivative(h, X) - qp.bracket(h, f, t)) < 1e-7


def test_invariance_defect(closed5):
    assert qp.invariance_defect(qp.trace_word(range(1, 6)), closed5) < 1e-8
    assert qp.invariance_defect(qp.trace_word([1]), closed5) < 1e-8
    assert qp.invariance_defect(qp.InvariantFunction(qp.trace_word([1]).evaluator), closed5) < 1e-8
    x_component = qp.InvariantFunction(lambda t: t.g[0][1])
    assert qp.invariance_defect(x_component, closed5) > 0.1


def test_k_invariance_of_trace_words(closed5, rng):
    f = qp.trace_word([1, -3, 4, 2])
    k = su2.random_unit(rng)
    assert abs(f(moduli.diagonal_conjugate(k, closed5)) - f(closed5)) < 1e-9


def test_antisymmetry_and_leibniz(rng):
    for trial in range(20):
        t = moduli.random_closed(int(rng.integers(4, 8)), seed=rng)
        f, g, h = (qp.trace_word(random_word(rng, t.n, 3)) for _ in range(3))
        assert abs(qp.bracket(f, g, t) + qp.bracket(g, f, t)) < 1e-9
        lhs = qp.bracket(f * g, h, t)
        rhs = f(t) * qp.bracket(g, h, t) + g(t) * qp.bracket(f, h, t)
        assert abs(lhs - rhs) < 1e-7
        fd = qp.InvariantFunction((f * g).evaluator)
        assert abs(qp.bracket(fd, h, t) - lhs) < 1e-7


def test_jacobi(rng):
    for trial in range(5):
        t = moduli.random_closed(5, seed=rng)
        f, g, h = (qp.trace_word(random_word(rng, 5, 2)) for _ in range(3))
        total = (qp.bracket(f, qp.bracket_function(g, h), t)
                 + qp.bracket(g, qp.bracket_function(h, f), t)
                 + qp.bracket(h, qp.bracket_function(f, g), t))
        assert abs(total) < 1e-5


def test_ham_field_preserves_closure(closed5):
    X = qp.ham_field(qp.trace_word([2, 4]), closed5)
    h = 1e-4
    drift = (su2.log_group(X.curve(h).product()) - su2.log_group(X.curve(-h).product())) / (2 * h)
    assert np.abs(drift).max() < 1e-7


def test_ham_field_is_first_order_tangent_to_levels(closed5):
    X = qp.ham_field(qp.trace_word([2, 4]), closed5)
    jac = moduli.closure_jacobian(closed5.g)
    assert np.abs(jac @ X.xi.reshape(-1)).max() < 1e-12


def test_bivector_reproduces_bracket_and_fields(closed5, rng):
    f = qp.trace_word([1, -3, 4])
    h = qp.trace_word([2, 5])
    df, _ = qp.gradients(f, closed5)
    dh, _ = qp.gradients(h, closed5)
    assert abs(qp.bivector(closed5, df, dh) - qp.bracket(f, h, closed5)) < 1e-13
    beta = rng.standard_normal((5, 3))
    V = qp.contraction(closed5, dh)
    assert abs(np.sum(beta * V) - qp.bivector(closed5, beta, dh)) < 1e-13
    assert np.allclose(V, qp.ham_field(h, closed5).right_trivialized(), atol=1e-13)


def test_moment_one_form_by_differences(rng):
    t = moduli.HolonomyTuple(su2.random_unit(rng, 4))
    x = rng.standard_normal(3)
    comp = qp.moment_one_form(t, x)
    h = 1e-5
    mu = t.product()
    for i in range(1, 5):
        for a in range(3):
            y = h * su2.BASIS[a]
            vals = []
            for s in (1, -1):
                g = np.array(t.g)
                g[i - 1] = su2.qmul(su2.exp_alg(s * y), g[i - 1])
                m = matrix_product(g)
                # (x, mu^{-1} dmu) via -1/2 Tr(x M)
                rel = as_matrix(su2.conj(mu)) @ m
                vals.append(-0.5 * np.trace(pure_matrix(x) @ rel).real)
            assert abs((vals[0] - vals[1]) / (2 * h) - comp[i - 1, a]) < 1e-9


def test_moment_compatibility(rng, closed5):
    assert qp.moment_compatibility(closed5, np.zeros(3)) == 0.0
    assert qp.moment_compatibility(closed5, rng.standard_normal(3)) < 1e-7
    for n in range(1, 8):
        t = moduli.HolonomyTuple(su2.random_unit(rng, n))
        assert qp.moment_compatibility(t, rng.standard_normal(3)) < 1e-7
