import math

import numpy as np
import pytest

from gausspen.asymptotics import (
    SimSpec,
    ridge_rootn_bias,
    run_bias_experiment,
    run_consistency_experiment,
    simulate_linear_data,
    theoretical_rootn_bias,
)
from gausspen.errors import ConfigurationError


def limit_criterion(u, C, beta, lam0, kappa):
    # V(u) with the noise term at its mean (W = 0)
    u = np.asarray(u, dtype=float)
    slope_term = 2.0 * lam0 * kappa * np.sum(u * beta * np.exp(-kappa * beta**2))
    return float(u @ C @ u + slope_term)


def golden_min(fn, lo, hi, iters=160):
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c, d = b - phi * (b - a), a + phi * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - phi * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + phi * (b - a)
            fd = fn(d)
    return (a + b) / 2.0


def golden_then_polish(fn, lo, hi):
    # golden section localizes to ~sqrt(eps); bisecting the central
    # finite-difference slope then recovers full double precision
    v = golden_min(fn, lo, hi, iters=90)
    h = 1e-3

    def slope(x):
        return (fn(x + h) - fn(x - h)) / (2.0 * h)

    a, b = v - 1e-2, v + 1e-2
    while slope(a) > 0.0:
        a -= 1e-1
    while slope(b) < 0.0:
        b += 1e-1
    for _ in range(90):
        mid = 0.5 * (a + b)
        if slope(mid) > 0.0:
            b = mid
        else:
            a = mid
    return 0.5 * (a + b)


def minimize_limit_criterion(C, beta, lam0, kappa):
    """Value-only minimizer of V: 1-D searches along Cholesky-rotated
    coordinates, where the quadratic part separates exactly."""
    p = len(beta)
    L = np.linalg.cholesky(C)
    Linv_t = np.linalg.inv(L).T

    def as_u(v):
        return Linv_t @ v

    v = np.zeros(p)
    for k in range(p):
        def along(t, k=k):
            w = v.copy()
            w[k] = t
            return limit_criterion(as_u(w), C, beta, lam0, kappa)

        v[k] = golden_then_polish(along, -50.0, 50.0)
    return as_u(v)


# --- simulation --------------------------------------------------------------


def base_spec(**overrides):
    defaults = dict(
        beta_true=[1.0],
        C=np.eye(1),
        sigma=1.0,
        n=400,
        lambda_rule="sqrt_n",
        lambda0=1.0,
        kappa=1.0,
        replicates=50,
        seed=123,
    )
    defaults.update(overrides)
    return SimSpec(**defaults)


def test_spec_validation():
    with pytest.raises(ConfigurationError):
        base_spec(C=np.array([[1.0, 0.5], [0.4, 1.0]]), beta_true=[1.0, 1.0])
    with pytest.raises(ConfigurationError):
        base_spec(C=-np.eye(1))
    with pytest.raises(ConfigurationError):
        base_spec(sigma=0.0)
    with pytest.raises(ConfigurationError):
        base_spec(lambda_rule="n_squared")
    with pytest.raises(ConfigurationError):
        base_spec(lambda_rule="o_of_n", r=1.0)


def test_simulated_data_is_centered_and_deterministic():
    spec = base_spec(beta_true=[0.5, -1.0], C=np.eye(2), n=300)
    a = simulate_linear_data(spec, 7)
    b = simulate_linear_data(spec, 7)
    assert np.array_equal(a.X, b.X) and np.array_equal(a.y, b.y)
    c = simulate_linear_data(spec, 8)
    assert not np.array_equal(a.X, c.X)
    assert np.abs(a.X.mean(axis=0)).max() < 1e-12
    assert abs(a.y.mean()) < 1e-12


def test_pure_noise_variance():
    spec = base_spec(beta_true=[0.0], sigma=2.0, n=4000)
    problem = simulate_linear_data(spec, 0)
    assert abs(problem.y.mean()) < 1e-12
    assert problem.y.var() == pytest.approx(4.0, rel=3.0 / math.sqrt(4000))


def test_gram_approaches_identity():
    spec = base_spec(beta_true=[0.0, 0.0, 0.0], C=np.eye(3), n=10_000)
    problem = simulate_linear_data(spec, 1)
    gram = problem.X.T @ problem.X / problem.n
    assert np.linalg.norm(gram - np.eye(3)) < 0.05


# --- closed-form limit mean ----------------------------------------------------


def test_bias_zero_for_zero_beta():
    assert np.array_equal(
        theoretical_rootn_bias(np.eye(3), np.zeros(3), 2.0, 5.0), np.zeros(3)
    )


def test_bias_scalar_value():
    value = theoretical_rootn_bias(np.eye(1), [1.0], 1.0, 1.0)
    assert value[0] == pytest.approx(-math.exp(-1.0), abs=1e-12)


def test_bias_underflows_for_large_beta():
    value = theoretical_rootn_bias(np.eye(1), [5.0], 1.0, 10.0)
    assert abs(value[0]) <= 1e-100


def test_bias_matches_numeric_minimizer():
    rng = np.random.default_rng(10)
    for _ in range(50):
        p = int(rng.integers(1, 4))
        A = rng.standard_normal((p, p))
        C = A @ A.T + (0.5 + rng.uniform()) * np.eye(p)
        beta = rng.uniform(-2.0, 2.0, size=p)
        lam0 = rng.uniform(0.0, 3.0)
        kappa = rng.uniform(0.2, 5.0)
        closed = theoretical_rootn_bias(C, beta, lam0, kappa)
        numeric = minimize_limit_criterion(C, beta, lam0, kappa)
        assert np.abs(closed - numeric).max() < 1e-8


def test_exponential_decay_ratio():
    # |bias| proportional to |beta| exp(-kappa beta^2) with C = I
    lam0, kappa = 1.3, 2.0
    ratios = []
    for beta in (0.5, 1.0, 2.0):
        bias = theoretical_rootn_bias(np.eye(1), [beta], lam0, kappa)[0]
        ratios.append(abs(bias) / (beta * math.exp(-kappa * beta * beta)))
    assert max(ratios) - min(ratios) < 1e-8


def test_ridge_contrast():
    # Gaussian bias collapses by > 1e10 from beta=0.3 to beta=3 (kappa=10);
    # the ridge analogue grows linearly instead
    g_small = abs(theoretical_rootn_bias(np.eye(1), [0.3], 1.0, 10.0)[0])
    g_large = abs(theoretical_rootn_bias(np.eye(1), [3.0], 1.0, 10.0)[0])
    assert g_small / g_large > 1e10
    r_small = abs(ridge_rootn_bias(np.eye(1), [0.3], 1.0)[0])
    r_large = abs(ridge_rootn_bias(np.eye(1), [3.0], 1.0)[0])
    assert r_large == pytest.approx(10.0 * r_small)


# --- Monte Carlo experiments ---------------------------------------------------


def test_bias_experiment_lambda0_zero_is_centered():
    spec = base_spec(lambda0=0.0, n=200, replicates=120)
    report = run_bias_experiment(spec)
    assert np.array_equal(report.theoretical_bias, np.zeros(1))
    assert np.all(report.z_scores <= 3.0)


def test_bias_experiment_reproducible():
    spec = base_spec(replicates=30)
    a = run_bias_experiment(spec)
    b = run_bias_experiment(spec)
    assert np.array_equal(a.empirical_mean, b.empirical_mean)
    assert np.array_equal(a.empirical_se, b.empirical_se)
    assert np.array_equal(a.z_scores, b.z_scores)


def test_bias_experiment_requires_sqrt_rule():
    with pytest.raises(ConfigurationError):
        run_bias_experiment(base_spec(lambda_rule="o_of_n", r=0.5))


def test_consistency_rate_matches_root_n():
    # unpenalized: median error should shrink like 1/sqrt(n)
    spec = base_spec(
        beta_true=[1.0, -2.0], C=np.eye(2), lambda_rule="o_of_n", lambda0=0.0,
        replicates=200, seed=77,
    )
    table = run_consistency_experiment(spec, [250, 1000])
    ratio = table[1][1] / table[0][1]
    assert abs(ratio - 0.5) < 0.15


def test_consistency_violating_rule_has_error_floor():
    # lam_n ~ 5n is not o(n): the limit criterion keeps a penalty term whose
    # global argmin sits near 0, so the estimation error stalls above a
    # positive floor instead of vanishing
    spec = base_spec(
        beta_true=[1.0, -2.0], C=np.eye(2), lambda_rule="o_of_n", lambda0=5.0,
        r=0.999, kappa=10.0, replicates=60, seed=5,
    )
    table = run_consistency_experiment(spec, [100, 400, 1600])
    assert all(err > 2.0 for _, err in table)  # near ||beta|| = sqrt(5)
