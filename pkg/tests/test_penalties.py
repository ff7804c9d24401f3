import math

import numpy as np
import pytest

from gausspen.errors import ConfigurationError, DomainError, SingularityError
from gausspen.penalties import (
    PenaltySpec,
    lipschitz_on_interval,
    penalty_bounds,
    penalty_grad,
    penalty_value,
    penalty_vector,
)

ALL_SPECS = [
    PenaltySpec("none"),
    PenaltySpec("lasso"),
    PenaltySpec("ridge"),
    PenaltySpec("bridge", q=0.5),
    PenaltySpec("bridge", q=1.5),
    PenaltySpec("elastic_net", mix=0.5),
    PenaltySpec("scad", a=3.7),
    PenaltySpec("mcp", b=1.5),
    PenaltySpec("mcp", b=5.0),
    PenaltySpec("laplace", epsilon=1e-7),
    PenaltySpec("arctan", gamma=1.0),
    PenaltySpec("arctan", gamma=100.0),
    PenaltySpec("gaussian", kappa=10.0),
    PenaltySpec("gaussian", kappa=1.0),
]


def golden_section_max(fn, lo, hi, iters=200):
    # derivative-free maximizer, independent of any closed form
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - phi * (b - a)
    d = a + phi * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(iters):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - phi * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + phi * (b - a)
            fd = fn(d)
    x = (a + b) / 2.0
    return x, fn(x)


# --- spec construction -------------------------------------------------------


def test_defaults():
    spec = PenaltySpec("gaussian")
    assert spec.kappa == 10.0
    assert spec.a == 3.7
    assert spec.b == 5.0
    assert spec.epsilon == 1e-7
    assert spec.gamma == 1.0


def test_invalid_hyperparameters_rejected():
    with pytest.raises(ConfigurationError):
        PenaltySpec("gaussian", kappa=0.0)
    with pytest.raises(ConfigurationError):
        PenaltySpec("scad", a=2.0)
    with pytest.raises(ConfigurationError):
        PenaltySpec("elastic_net", mix=1.5)
    with pytest.raises(ConfigurationError):
        PenaltySpec("nonsense")


def test_irrelevant_hyperparameters_ignored():
    # a negative kappa is fine as long as the family never reads it
    spec = PenaltySpec("lasso", kappa=-5.0)
    assert penalty_value(spec, -2.0) == 2.0


def test_non_finite_beta_rejected():
    spec = PenaltySpec("gaussian")
    with pytest.raises(DomainError):
        penalty_value(spec, float("nan"))
    with pytest.raises(DomainError):
        penalty_grad(spec, float("inf"))


# --- values ------------------------------------------------------------------


def test_value_examples():
    assert penalty_value(PenaltySpec("gaussian", kappa=1.0), 0.0) == 0.0
    assert abs(penalty_value(PenaltySpec("gaussian", kappa=10.0), 3.0) - 1.0) < 1e-12
    assert penalty_value(PenaltySpec("lasso"), -2.0) == 2.0
    assert penalty_value(PenaltySpec("arctan", gamma=1.0), 0.0) == 0.0
    assert penalty_value(PenaltySpec("ridge"), 1.5) == 2.25
    assert penalty_value(PenaltySpec("arctan", gamma=1.0), 1.0) == pytest.approx(
        2.0 / math.pi * math.atan(1.0)
    )


def test_scad_mcp_piecewise_continuity():
    scad = PenaltySpec("scad", a=3.7)
    # knots of the piecewise definition
    for knot in (1.0, 3.7):
        below = penalty_value(scad, knot - 1e-9)
        above = penalty_value(scad, knot + 1e-9)
        assert abs(below - above) < 1e-8
    assert penalty_value(scad, 100.0) == pytest.approx((3.7 + 1.0) / 2.0)
    mcp = PenaltySpec("mcp", b=5.0)
    assert penalty_value(mcp, 5.0) == pytest.approx(2.5)
    assert penalty_value(mcp, 50.0) == pytest.approx(2.5)


def test_vector_sums_coordinates():
    spec = PenaltySpec("gaussian", kappa=1.0)
    assert penalty_vector(spec, [0.0, 0.0, 0.0]) == 0.0
    x = 0.7315
    assert penalty_vector(spec, [x]) == penalty_value(spec, x)
    assert penalty_vector(spec, [1.0, 1.0]) == pytest.approx(2.0 * (1.0 - math.exp(-1.0)))
    rng = np.random.default_rng(5)
    v = rng.standard_normal(40)
    assert penalty_vector(spec, v) == pytest.approx(penalty_vector(spec, v[::-1]))


# --- gradients ---------------------------------------------------------------


def test_grad_examples():
    assert penalty_grad(PenaltySpec("gaussian", kappa=3.0), 0.0) == 0.0
    for kappa in (0.5, 1.0, 10.0):
        spec = PenaltySpec("gaussian", kappa=kappa)
        peak = 1.0 / math.sqrt(2.0 * kappa)
        assert penalty_grad(spec, peak) == pytest.approx(math.sqrt(2.0 * kappa) * math.exp(-0.5))


def test_grad_matches_finite_difference():
    rng = np.random.default_rng(42)
    h = 1e-6
    for spec in ALL_SPECS:
        if spec.family == "bridge" and spec.q < 1:
            continue  # unbounded derivative magnifies FD error near 0
        betas = rng.uniform(-3.0, 3.0, size=1000)
        betas = betas[np.abs(betas) >= 1e-3]
        for beta in betas:
            fd = (penalty_value(spec, beta + h) - penalty_value(spec, beta - h)) / (2 * h)
            g = penalty_grad(spec, beta)
            assert g == pytest.approx(fd, rel=1e-5, abs=1e-9), spec.label()


def test_grad_is_odd():
    rng = np.random.default_rng(3)
    betas = rng.uniform(0.001, 3.0, size=200)
    for spec in ALL_SPECS:
        for beta in betas:
            assert penalty_grad(spec, beta) == -penalty_grad(spec, -beta)


def test_kink_requires_convention():
    for family in ("lasso", "scad", "mcp", "laplace", "arctan"):
        spec = PenaltySpec(family)
        with pytest.raises(SingularityError, match=family):
            penalty_grad(spec, 0.0)
        assert penalty_grad(spec, 0.0, zero_at_kink=True) == 0.0
    # smooth families never raise at 0
    for family in ("none", "ridge", "gaussian"):
        assert penalty_grad(PenaltySpec(family), 0.0) == 0.0


# --- bounds ------------------------------------------------------------------


def test_bounds_gaussian_oracle():
    # maximize |P'| by dense grid + golden section, no closed form involved
    spec = PenaltySpec("gaussian", kappa=10.0)
    grid = np.linspace(0.0, 2.0, 4001)
    vals = [abs(penalty_grad(spec, b)) for b in grid]
    i = int(np.argmax(vals))
    _, peak = golden_section_max(
        lambda b: abs(penalty_grad(spec, b)), grid[max(i - 1, 0)], grid[min(i + 1, 4000)]
    )
    bounds = penalty_bounds(spec)
    assert bounds.lipschitz == pytest.approx(peak, abs=1e-10)
    assert bounds.lipschitz == pytest.approx(2.7124875711104828)
    assert bounds.sup_value == 1.0
    assert bounds.convexity_radius == pytest.approx(1.0 / math.sqrt(20.0))


def test_bounds_other_families():
    assert penalty_bounds(PenaltySpec("gaussian", kappa=0.5)).lipschitz == pytest.approx(
        math.exp(-0.5)
    )
    assert penalty_bounds(PenaltySpec("lasso")).lipschitz == 1.0
    ridge = penalty_bounds(PenaltySpec("ridge"))
    assert math.isinf(ridge.lipschitz)
    assert lipschitz_on_interval(PenaltySpec("ridge"), 4.0) == 8.0
    assert penalty_bounds(PenaltySpec("mcp", b=5.0)).sup_value == 2.5
    assert penalty_bounds(PenaltySpec("scad", a=3.7)).sup_value == pytest.approx(2.35)
    assert math.isinf(lipschitz_on_interval(PenaltySpec("bridge", q=0.5), 1.0))


def test_interval_lipschitz_dominates_samples():
    rng = np.random.default_rng(9)
    for spec in ALL_SPECS:
        if spec.family == "bridge" and spec.q < 1:
            continue
        bound = lipschitz_on_interval(spec, 2.0)
        xs = rng.uniform(-2.0, 2.0, size=500)
        ys = rng.uniform(-2.0, 2.0, size=500)
        gap = np.abs(
            np.array([penalty_value(spec, x) for x in xs])
            - np.array([penalty_value(spec, y) for y in ys])
        )
        assert np.all(gap <= bound * np.abs(xs - ys) + 1e-12), spec.label()


# --- invariants from the module contract -------------------------------------


def test_symmetry_exact():
    rng = np.random.default_rng(0)
    betas = rng.uniform(-5.0, 5.0, size=10_000)
    for spec in ALL_SPECS:
        for beta in betas[:: len(ALL_SPECS)]:  # spread the budget across families
            assert penalty_value(spec, beta) == penalty_value(spec, -beta)
    # and the full 1e4 batch for the centerpiece family
    spec = PenaltySpec("gaussian", kappa=10.0)
    from gausspen.penalties import value_array

    assert np.array_equal(value_array(spec, betas), value_array(spec, -betas))


def test_gaussian_lipschitz_inequality():
    rng = np.random.default_rng(1)
    for kappa in (0.5, 10.0):
        spec = PenaltySpec("gaussian", kappa=kappa)
        constant = math.sqrt(2.0 * kappa) * math.exp(-0.5)
        x = rng.uniform(-10.0, 10.0, size=10_000)
        y = rng.uniform(-10.0, 10.0, size=10_000)
        from gausspen.penalties import value_array

        lhs = np.abs(value_array(spec, x) - value_array(spec, y))
        assert np.all(lhs <= constant * np.abs(x - y) + 1e-12)


def test_near_origin_ridge_equivalence():
    # 0 <= kappa*b^2 - P(b) <= (kappa*b^2)^2 / 2 near the origin
    rng = np.random.default_rng(2)
    for kappa in (1.0, 10.0):
        spec = PenaltySpec("gaussian", kappa=kappa)
        betas = rng.uniform(-1e-2, 1e-2, size=2000)
        for beta in betas:
            gap = kappa * beta * beta - penalty_value(spec, beta)
            assert 0.0 <= gap <= (kappa * beta * beta) ** 2 / 2.0 + 1e-18


def test_gaussian_bounded_and_monotone():
    spec = PenaltySpec("gaussian", kappa=10.0)
    rng = np.random.default_rng(4)
    # strict < 1 where 1 - exp(-kappa b^2) is representable below 1
    betas = rng.uniform(-1.9, 1.9, size=5000)
    values = np.array([penalty_value(spec, b) for b in betas])
    assert np.all(values >= 0.0)
    assert np.all(values < 1.0)
    order = np.argsort(np.abs(betas))
    assert np.all(np.diff(values[order]) >= -1e-16)
    # far out the value saturates to the supremum exactly (float rounding)
    far = np.array([penalty_value(spec, b) for b in rng.uniform(2.0, 50.0, size=500)])
    assert np.all(far <= 1.0)
    assert penalty_value(spec, 1e6) == 1.0


def test_gaussian_convexity_split():
    for kappa in (0.5, 10.0):
        spec = PenaltySpec("gaussian", kappa=kappa)
        radius = 1.0 / math.sqrt(2.0 * kappa)
        h = 1e-3 / math.sqrt(kappa)

        def second_diff(b):
            return (
                penalty_value(spec, b + h)
                - 2.0 * penalty_value(spec, b)
                + penalty_value(spec, b - h)
            ) / (h * h)

        rng = np.random.default_rng(8)
        inside = rng.uniform(-radius + 1e-4, radius - 1e-4, size=200)
        outside = np.concatenate(
            [
                rng.uniform(radius + 1e-4, 1.3 / math.sqrt(kappa), size=100),
                rng.uniform(-1.3 / math.sqrt(kappa), -radius - 1e-4, size=100),
            ]
        )
        assert all(second_diff(b) > 0.0 for b in inside)
        assert all(second_diff(b) < 0.0 for b in outside)
