"""Randomized verification suites run by ``s3polygons verify``.

Each check draws trial ``k`` from ``SeedSequence([seed, k])`` and reports
the worst residual against its tolerance.
"""

from dataclasses import asdict, dataclass

import numpy as np

from . import bending, braid, charvar, moduli, su2
from . import quasipoisson as qp
from .errors import NoSolution

SUITES = ("algebra", "bracket", "flows", "braid", "forms")


@dataclass
class CheckResult:
    suite: str
    name: str
    measured: float
    tolerance: float
    trials: int

    @property
    def passed(self):
        return bool(np.isfinite(self.measured) and self.measured < self.tolerance)

    def as_dict(self):
        d = asdict(self)
        d["passed"] = self.passed
        return d


def trial_rng(seed, trial):
    return np.random.default_rng(np.random.SeedSequence([seed, trial]))


def _closed(rng, n_lo=4, n_hi=8):
    n = int(rng.integers(n_lo, n_hi + 1))
    return moduli.random_closed(n, rng)


def _bending_regular(rng, n_lo=4, n_hi=8, margin=1e-3):
    while True:
        t = _closed(rng, n_lo, n_hi)
        if all(abs(bending.f_val(t, j)) < 2 - margin for j in range(1, t.n)):
            return t


def _random_trace_function(rng, t):
    # Trace words, or geodesic lengths of words that stay away from +-1.
    k = int(rng.integers(1, 4))
    word = [int(rng.integers(1, t.n + 1)) * int(rng.choice([-1, 1])) for _ in range(k)]
    if rng.random() < 0.5 and abs(su2.trace(qp.word_value(t, word))) < 1.9:
        return qp.length_function(word)
    return qp.trace_word(word)


# ---- algebra

def check_associativity(seed, trials):
    worst = 0.0
    for k in range(trials):
        a, b, c = su2.random_unit(trial_rng(seed, k), 3)
        worst = max(worst, np.abs(su2.mul(su2.mul(a, b), c) - su2.mul(a, su2.mul(b, c))).max())
    return worst


def check_killing_invariance(seed, trials):
    worst = 0.0
    for k in range(trials):
        rng = trial_rng(seed, k)
        g = su2.random_unit(rng)
        u, v = rng.standard_normal((2, 3))
        lhs = su2.killing(su2.adjoint(g, u), su2.adjoint(g, v))
        worst = max(worst, abs(lhs - su2.killing(u, v)))
    return worst


def check_log_exp(seed, trials):
    worst = 0.0
    for k in range(trials):
        rng = trial_rng(seed, k)
        v = su2.random_direction(rng) * rng.uniform(0, np.pi - 1e-3)
        worst = max(worst, np.abs(su2.log_group(su2.exp_alg(v)) - v).max())
    return worst


def check_closure_solver(seed, trials):
    worst = 0.0
    for k in range(trials):
        rng = trial_rng(seed, k)
        n = 3 + k % 6
        r = moduli.side_length(moduli.random_closed(n, rng, margin=0.05).g)
        t = moduli.solve_closure(r, rng)
        worst = max(worst, moduli.closure_residual(t), np.abs(moduli.side_length(t.g) - r).max())
    return worst


def check_infeasible(seed, trials):
    try:
        moduli.solve_closure([0.1, 0.1, 3.0], seed)
    except NoSolution:
        return 0.0
    return 1.0


def check_equivariance(seed, trials):
    worst = 0.0
    for k in range(trials):
        rng = trial_rng(seed, k)
        t = _closed(rng)
        q = su2.random_unit(rng)
        a = moduli.to_polygon(moduli.diagonal_conjugate(q, t)).vertices
        b = su2.conjugate(q, moduli.to_polygon(t).vertices)
        worst = max(worst, np.abs(a - b).max())
    return worst


def check_reduced_dimension(seed, trials):
    worst = 0.0
    for k in range(trials):
        t = _closed(trial_rng(seed, k))
        worst = max(worst, abs(len(moduli.reduced_tangent_basis(t)) - (2 * t.n - 6)))
    return worst


# ---- bracket

def check_bracket_vs_flow(seed, trials, h=1e-5):
    worst = 0.0
    for k in range(trials):
        rng = trial_rng(seed, k)
        t = _closed(rng, 4, 6)
        f = _random_trace_function(rng, t)
        g = _random_trace_function(rng, t)
        plus = bending.integrate_field(g, t, h, 1)
        minus = bending.integrate_field(g, t, -h, 1)
        fd = (f(plus) - f(minus)) / (2 * h)
        worst = max(worst, abs(qp.bracket(f, g, t) - fd))
    return worst


def check_antisymmetry(seed, trials):
    worst = 0.0
    for k in range(trials):
        rng = trial_rng(seed, k)
        t = _closed(rng)
        f = _random_trace_function(rng, t)
        g = _random_trace_function(rng, t)
        worst = max(worst, abs(qp.bracket(f, g, t) + qp.bracket(g, f, t)))
    return worst


def check_jacobi(seed, trials):
    worst = 0.0
    for k in range(trials):
        rng = trial_rng(seed, k)
        t = _closed(rng, 4, 6)
        f, g, h = (_random_trace_function(rng, t) for _ in range(3))
        total = (qp.bracket(f, qp.bracket_function(g, h), t)
                 + qp.bracket(g, qp.bracket_function(h, f), t)
                 + qp.bracket(h, qp.bracket_function(f, g), t))
        worst = max(worst, abs(total))
    return worst


def check_leibniz(seed, trials):
    worst = 0.0
    for k in range(trials):
        rng = trial_rng(seed, k)
        t = _closed(rng)
        f, g, h = (_random_trace_function(rng, t) for _ in range(3))
        lhs = qp.bracket(f * g, h, t)
        rhs = f(t) * qp.bracket(g, h, t) + g(t) * qp.bracket(f, h, t)
        worst = max(worst, abs(lhs - rhs))
    return worst


def check_moment(seed, trials):
    worst = 0.0
    for k in range(trials):
        rng = trial_rng(seed, k)
        n = int(rng.integers(2, 9))
        t = moduli.HolonomyTuple(su2.random_unit(rng, n))
        if k % 2:
            t = _closed(rng)
        worst = max(worst, qp.moment_compatibility(t, rng.standard_normal(3)))
    return worst


# ---- flows

def check_periodicity(seed, trials):
    worst = 0.0
    for k in range(trials):
        t = _bending_regular(trial_rng(seed, k))
        for j in range(1, t.n):
            back = bending.flow_f(t, j, bending.period_f(t, j))
            worst = max(worst, np.linalg.norm(back.g - t.g))
    return worst


def check_conservation(seed, trials):
    worst = 0.0
    for k in range(trials):
        rng = trial_rng(seed, k)
        t = _closed(rng)
        before = np.array([bending.f_val(t, m) for m in range(1, t.n + 1)])
        for j in range(1, t.n + 1):
            s = rng.uniform(-3, 3)
            moved = bending.flow_f(t, j, s)
            after = np.array([bending.f_val(moved, m) for m in range(1, t.n + 1)])
            worst = max(worst, np.abs(after - before).max())
    return worst


def check_commutation(seed, trials):
    worst = 0.0
    for k in range(trials):
        rng = trial_rng(seed, k)
        t = _closed(rng)
        i, j = sorted(rng.choice(np.arange(1, t.n + 1), 2, replace=False))
        s, u = rng.uniform(-3, 3, 2)
        a = bending.flow_f(bending.flow_f(t, i, s), j, u)
        b = bending.flow_f(bending.flow_f(t, j, u), i, s)
        worst = max(worst, np.abs(a.g - b.g).max())
    return worst


def check_integrator(seed, trials):
    worst = 0.0
    for k in range(trials):
        rng = trial_rng(seed, k)
        t = _closed(rng, 4, 6)
        j = int(rng.integers(2, t.n - 1))
        ode = bending.integrate_field(qp.prefix_trace(j), t, 1.0, 400)
        worst = max(worst, np.abs(ode.g - bending.flow_f(t, j, 1.0).g).max())
    return worst


# ---- braid

def check_braid_inverse(seed, trials):
    worst = 0.0
    for k in range(trials):
        rng = trial_rng(seed, k)
        t = moduli.HolonomyTuple(su2.random_unit(rng, 6))
        i = int(rng.integers(1, 6))
        worst = max(worst, np.abs(braid.r_prime_move(braid.r_move(t, i), i).g - t.g).max(),
                    np.abs(braid.r_move(braid.r_prime_move(t, i), i).g - t.g).max())
    return worst


def check_braid_relation(seed, trials):
    worst = 0.0
    for k in range(trials):
        rng = trial_rng(seed, k)
        t = moduli.HolonomyTuple(su2.random_unit(rng, 6))
        i = int(rng.integers(1, 5))
        a = braid.r_move(braid.r_move(braid.r_move(t, i), i + 1), i)
        b = braid.r_move(braid.r_move(braid.r_move(t, i + 1), i), i + 1)
        worst = max(worst, np.abs(a.g - b.g).max())
    return worst


def check_time_one(seed, trials):
    worst = 0.0
    for k in range(trials):
        rng = trial_rng(seed, k)
        t = _closed(rng)
        i, j = sorted(rng.choice(np.arange(1, t.n + 1), 2, replace=False))
        a = braid.normalized_braid_flow(t, i, j, 1.0)
        worst = max(worst, np.abs(a.g - braid.a_generator(t, i, j).g).max())
    return worst


def check_exp_reconstruct(seed, trials):
    worst = 0.0
    for k in range(trials):
        g = su2.random_unit(trial_rng(seed, k))
        worst = max(worst, np.abs(braid.exp_reconstruct(g) - g).max())
    return worst


def check_braid_closure(seed, trials):
    worst = 0.0
    for k in range(trials):
        rng = trial_rng(seed, k)
        t = _closed(rng)
        i, j = sorted(rng.choice(np.arange(1, t.n + 1), 2, replace=False))
        s = rng.uniform(-3, 3)
        worst = max(worst, moduli.closure_residual(braid.braid_flow(t, i, j, s)),
                    moduli.closure_residual(braid.a_generator(t, i, j)))
    return worst


# ---- forms

def _cocycle_pair(rng, n):
    t = moduli.random_closed(n, rng)
    c = charvar.make_cocycle(t, rng.standard_normal((n, 3)), project=True)
    c2 = charvar.make_cocycle(t, rng.standard_normal((n, 3)), project=True)
    return t, c, c2


def check_form_equality(seed, trials):
    worst = 0.0
    for n in range(4, 9):
        for k in range(trials):
            _, c, c2 = _cocycle_pair(trial_rng(seed, 1000 * n + k), n)
            worst = max(worst, abs(charvar.goldman_form(c, c2) - charvar.pullback_form(c, c2)))
    return worst


def check_coboundary(seed, trials):
    worst = 0.0
    for n in range(4, 9):
        for k in range(trials):
            rng = trial_rng(seed, 1000 * n + k)
            t, c, _ = _cocycle_pair(rng, n)
            b = charvar.coboundary(t, rng.standard_normal(3))
            worst = max(worst, abs(charvar.goldman_form(c, b)), abs(charvar.goldman_form(b, c)),
                        abs(charvar.pullback_form(c, b)), abs(charvar.pullback_form(b, c)))
    return worst


def check_form_antisymmetry(seed, trials):
    worst = 0.0
    for k in range(trials):
        rng = trial_rng(seed, k)
        _, c, c2 = _cocycle_pair(rng, int(rng.integers(4, 9)))
        for form in (charvar.goldman_form, charvar.pullback_form):
            worst = max(worst, abs(form(c, c2) + form(c2, c)), abs(form(c, c)))
    return worst


def check_nondegeneracy(seed, trials):
    # Reported as the reciprocal of the least singular value.
    worst = 0.0
    for k in range(trials):
        t = _closed(trial_rng(seed, k))
        cs = [charvar.make_cocycle(t, v.xi) for v in moduli.reduced_tangent_basis(t)]
        s = np.linalg.svd(charvar.form_matrix(charvar.pullback_form, cs), compute_uv=False)
        worst = max(worst, 1.0 / s.min())
    return worst


# (suite, name, function, tolerance, default trials)
CHECKS = [
    ("algebra", "associativity", check_associativity, 1e-12, 200),
    ("algebra", "killing_invariance", check_killing_invariance, 1e-12, 200),
    ("algebra", "log_exp_inverse", check_log_exp, 1e-10, 200),
    ("algebra", "closure_solver", check_closure_solver, 1e-10, 100),
    ("algebra", "infeasible_triple", check_infeasible, 0.5, 1),
    ("algebra", "phi_equivariance", check_equivariance, 1e-10, 50),
    ("algebra", "reduced_dimension", check_reduced_dimension, 0.5, 50),
    ("bracket", "bracket_vs_flow", check_bracket_vs_flow, 1e-6, 50),
    ("bracket", "antisymmetry", check_antisymmetry, 1e-9, 50),
    ("bracket", "jacobi", check_jacobi, 1e-5, 20),
    ("bracket", "leibniz", check_leibniz, 1e-7, 50),
    ("bracket", "moment_compatibility", check_moment, 1e-7, 100),
    ("flows", "periodicity", check_periodicity, 1e-8, 100),
    ("flows", "conservation", check_conservation, 1e-10, 100),
    ("flows", "commutation", check_commutation, 1e-8, 100),
    ("flows", "integrator_agreement", check_integrator, 1e-6, 3),
    ("braid", "r_r_prime_inverse", check_braid_inverse, 1e-12, 100),
    ("braid", "braid_relation", check_braid_relation, 1e-12, 100),
    ("braid", "time_one_flow", check_time_one, 1e-9, 100),
    ("braid", "exp_reconstruction", check_exp_reconstruct, 1e-12, 1000),
    ("braid", "closure_preserved", check_braid_closure, 1e-9, 100),
    ("forms", "form_equality", check_form_equality, 1e-8, 100),
    ("forms", "coboundary_kernel", check_coboundary, 1e-8, 20),
    ("forms", "antisymmetry", check_form_antisymmetry, 1e-9, 50),
    ("forms", "nondegeneracy", check_nondegeneracy, 1e6, 20),
]


def run_suite(suite="all", seed=0, tol=None, trials=None):
    """Run the checks of one suite (or all); ``tol`` overrides every tolerance."""
    if suite != "all" and suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    results = []
    for name_suite, name, fn, default_tol, default_trials in CHECKS:
        if suite != "all" and name_suite != suite:
            continue
        count = default_trials if trials is None else max(1, min(trials, default_trials))
        measured = float(fn(seed, count))
        results.append(CheckResult(name_suite, name, measured,
                                   default_tol if tol is None else tol, count))
    return results
