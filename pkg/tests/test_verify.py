import numpy as np
import pytest

from wronskian_duality.cli import dump_json
from wronskian_duality.verify import (
    DEGENERATE, GATED, PASS, DuplicateRates, InvalidGrid, exponential_oracle, grid_points,
    sweep_grid, verify_sample,
)
from wronskian_duality.wronskian import FunctionSystem, build_wronskian, solve_coefficients

from oracles import FIXTURES, monomial_mix, random_exponential_system, random_mixed_system


def system(*sources):
    return FunctionSystem.from_strings(sources)


def test_exponential_oracle_examples():
    assert exponential_oracle([1, 2]) == [3, -2]
    assert exponential_oracle([1, -1, 2]) == [2, 1, -2]
    assert exponential_oracle([0]) == [0]
    with pytest.raises(DuplicateRates):
        exponential_oracle([1, 1])


def test_exponential_oracle_against_numpy_poly():
    rng = np.random.default_rng(11)
    for _ in range(20):
        rates = list(rng.choice(np.arange(-6, 7), size=int(rng.integers(1, 7)), replace=False))
        # prod(lambda - r) = lambda^n - p_1 lambda^(n-1) - ... - p_n
        np.testing.assert_allclose(exponential_oracle(rates), -np.poly(rates)[1:], atol=1e-9)


def test_verify_sample_euler():
    r = verify_sample(system("t", "t^2"), 1.0, seed=0)
    assert r.p == (2, -2) and r.q_desc == (2, -2)
    for k in ("duality_identity", "abel_trace", "det_sign"):
        assert r.residuals[k] == 0
    assert r.passed


def test_verify_sample_polynomials():
    r = verify_sample(system("1", "t", "t^2"), 0.5, seed=3)
    assert r.p == (0, 0, 0) and r.q_desc == (0, 0, 0)
    assert all(v <= 1e-13 for v in r.residuals.values())


def test_verify_sample_domain_error():
    r = verify_sample(system("ln(t)"), -1.0, seed=0)
    assert r.domain_error is not None
    assert r.residuals == {} and r.passed is None


def test_verify_sample_reports_reversed_reading():
    r = verify_sample(system("exp(t)", "exp(2*t)"), 0.0, seed=0)
    assert r.residuals["duality_reversed"] == 5
    assert r.passed


def test_grid_points():
    np.testing.assert_array_equal(grid_points(0, 1, 5), [0, 0.25, 0.5, 0.75, 1])
    np.testing.assert_array_equal(grid_points(2, 2, 1), [2])
    with pytest.raises(InvalidGrid):
        grid_points(1, 0, 3)
    with pytest.raises(InvalidGrid):
        grid_points(0, 1, 0)


def test_sweep_exponentials():
    rep = sweep_grid(system("exp(t)", "exp(2*t)"), 0, 1, 11, seed=1)
    assert rep.verdict == PASS
    for r in rep.results:
        np.testing.assert_allclose(r.p, (3, -2), atol=1e-12)


def test_sweep_euler_through_zero():
    rep = sweep_grid(system("t", "t^2"), -1, 1, 21, seed=1)
    flagged = [r.t for r in rep.results if r.degenerate]
    assert len(flagged) == 1 and abs(flagged[0]) < 1e-12
    assert rep.verdict == PASS


def test_sweep_dependent_functions():
    rep = sweep_grid(system("t", "2*t"), 0, 1, 7, seed=1)
    assert rep.degenerate_count == 7
    assert rep.verdict == DEGENERATE


def test_tolerance_multiplier_can_fail_a_sweep():
    rep = sweep_grid(system("exp(0.3*t)", "sin(1.7*t)", "t^3"), 0.2, 1.0, 5, seed=1, tol=1e-30)
    assert rep.verdict == "fail"
    assert rep.summary()["failed_samples"] > 0


def test_random_exponential_systems_match_oracle():
    rng = np.random.default_rng(2024)
    for _ in range(30):
        sources, rates = random_exponential_system(rng)
        expected = np.array(exponential_oracle(rates))
        rep = sweep_grid(system(*sources), 0, 1, 5, seed=int(rng.integers(1000)))
        assert rep.verdict == PASS
        for r in rep.usable:
            assert np.abs(np.array(r.p) - expected).max() <= 1e-7 * (1 + np.abs(expected).max())
            assert r.residuals["duality_identity"] <= 1e-7


def test_monomial_mixes_have_zero_coefficients():
    rng = np.random.default_rng(7)
    for _ in range(100):
        n = int(rng.integers(2, 7))
        T = rng.uniform(-1, 1, (n, n))
        if abs(np.linalg.det(T)) < 0.1:
            continue
        sys_ = system(*monomial_mix(T))
        for t in (0.3, 1.1):
            d = build_wronskian(sys_, t)
            assert not d.degenerate
            assert np.abs(solve_coefficients(d)).max() <= 1e-7 * d.kappa


def test_sweeps_are_deterministic():
    sys_ = system("sin(t)", "exp(-t)*cos(2*t)", "t^2")
    a = sweep_grid(sys_, 0, 2, 9, seed=5)
    b = sweep_grid(sys_, 0, 2, 9, seed=5)
    ja = dump_json([r.as_dict() for r in a.results] + [a.summary()])
    jb = dump_json([r.as_dict() for r in b.results] + [b.summary()])
    assert ja == jb


def test_duplicated_function_makes_sweep_degenerate():
    rng = np.random.default_rng(9)
    for _ in range(10):
        sources = random_mixed_system(rng, max_n=4)
        dup = sources + [sources[int(rng.integers(len(sources)))]]
        assert sweep_grid(system(*dup), 0.1, 1, 5, seed=0).verdict == DEGENERATE


def test_fixture_sweeps_pass():
    for sources, t0, t1 in FIXTURES:
        rep = sweep_grid(system(*sources), t0, t1, 7, seed=3)
        assert rep.verdict == PASS, (sources, rep.summary())
        worst = rep.summary()["worst"]
        assert set(GATED) <= set(worst)


def test_per_index_residuals_for_both_readings():
    r = verify_sample(system("exp(t)", "exp(2*t)"), 0.0, seed=0)
    assert r.per_index["identity"] == pytest.approx((0, 0), abs=1e-13)
    assert r.per_index["reversed"] == pytest.approx((5, 5), abs=1e-13)
    assert r.as_dict()["per_index"]["reversed"] == pytest.approx([5, 5], abs=1e-13)
