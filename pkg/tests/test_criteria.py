"""Tests for the L2 measures and distance criteria.

Slow pure-Python reference implementations written directly from the
closed forms serve as an independent route; the library's vectorized
versions must agree to near machine precision.
"""

import math

import numpy as np
import pytest

from sfdesign import (
    CriterionKind,
    CriterionSpec,
    Direction,
    centered_l2,
    evaluate,
    generate_random_lhs,
    generate_srs,
    mc_discrepancy_oracle,
    mindist,
    phi_p,
    star_l2,
    star_l2_squared,
    wraparound_l2,
)


# --- reference implementations (independent route, plain loops) -------------


def c2_squared_reference(m: np.ndarray) -> float:
    n, d = m.shape
    total = (13.0 / 12.0) ** d
    for i in range(n):
        prod = 1.0
        for k in range(d):
            x = m[i, k]
            prod *= 1 + 0.5 * abs(x - 0.5) - 0.5 * (x - 0.5) ** 2
        total -= (2.0 / n) * prod
    for i in range(n):
        for j in range(n):
            prod = 1.0
            for k in range(d):
                xi, xj = m[i, k], m[j, k]
                prod *= (
                    1 + 0.5 * abs(xi - 0.5) + 0.5 * abs(xj - 0.5) - 0.5 * abs(xi - xj)
                )
            total += prod / n**2
    return total


def w2_squared_reference(m: np.ndarray) -> float:
    n, d = m.shape
    total = -((4.0 / 3.0) ** d)
    for i in range(n):
        for j in range(n):
            prod = 1.0
            for k in range(d):
                delta = abs(m[i, k] - m[j, k])
                prod *= 1.5 - delta * (1 - delta)
            total += prod / n**2
    return total


def star_squared_reference(m: np.ndarray) -> float:
    n, d = m.shape
    total = (1.0 / 3.0) ** d
    for i in range(n):
        prod = 1.0
        for k in range(d):
            prod *= (1 - m[i, k] ** 2) / 2
        total -= (2.0 / n) * prod
    for i in range(n):
        for j in range(n):
            prod = 1.0
            for k in range(d):
                prod *= 1 - max(m[i, k], m[j, k])
            total += prod / n**2
    return total


def phi_p_reference(m: np.ndarray, p: float) -> float:
    n = m.shape[0]
    total = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            dist = math.dist(m[i], m[j])
            total += dist**-p
    return total ** (1.0 / p)


class TestAnalyticValues:
    def test_c2_single_midpoint_2d(self):
        value = centered_l2(np.array([[0.5, 0.5]])).value
        assert value == pytest.approx(25.0 / 144.0, abs=1e-12)

    def test_c2_single_origin_1d(self):
        value = centered_l2(np.array([[0.0]])).value
        assert value == pytest.approx(1.0 / 3.0, abs=1e-12)

    def test_w2_single_point_1d(self):
        # any single point: the self-pair kernel is constant
        for x in (0.0, 0.3, 0.5, 1.0):
            value = wraparound_l2(np.array([[x]])).value
            assert value == pytest.approx(1.0 / 6.0, abs=1e-12)

    def test_w2_two_points_1d(self):
        # closed form: 1/6 - delta(1-delta)/2 at separation delta
        delta = 0.5
        value = wraparound_l2(np.array([[0.25], [0.75]])).value
        assert value == pytest.approx(1.0 / 6.0 - delta * (1 - delta) / 2.0, abs=1e-12)

    def test_star_single_midpoint_1d(self):
        # squared form is (x - 1/2)^2 + 1/12, minimized at the midpoint
        value = star_l2(np.array([[0.5]])).value
        assert value == pytest.approx(math.sqrt(1.0 / 12.0), abs=1e-12)

    def test_phi_p_two_points_unit_distance(self):
        m = np.array([[0.0, 0.0], [1.0, 0.0]])
        assert phi_p(m, 50.0).value == pytest.approx(1.0, abs=1e-12)

    def test_phi_p_equilateral_triangle(self):
        # three unit distances: (3 * 1^-p)^(1/p) = 3^(1/p)
        m = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3) / 2]])
        assert phi_p(m, 50.0).value == pytest.approx(3 ** (1 / 50), rel=1e-12)

    def test_mindist_square_corners(self):
        m = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
        assert mindist(m).value == pytest.approx(1.0, abs=1e-15)


class TestAgainstReference:
    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_c2_matches_loops(self, seed):
        m = generate_srs(15, 3, seed=seed).matrix
        assert centered_l2(m).value == pytest.approx(
            c2_squared_reference(m), rel=1e-12
        )

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_w2_matches_loops(self, seed):
        m = generate_srs(15, 3, seed=seed).matrix
        assert wraparound_l2(m).value == pytest.approx(
            w2_squared_reference(m), rel=1e-12
        )

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_star_matches_loops(self, seed):
        m = generate_srs(15, 3, seed=seed).matrix
        assert star_l2_squared(m) == pytest.approx(
            star_squared_reference(m), rel=1e-12
        )
        assert star_l2(m).value == pytest.approx(
            math.sqrt(star_squared_reference(m)), rel=1e-12
        )

    @pytest.mark.parametrize("seed", [0, 1])
    @pytest.mark.parametrize("p", [2.0, 15.0, 50.0])
    def test_phi_p_matches_loops(self, seed, p):
        m = generate_srs(12, 3, seed=seed).matrix
        assert phi_p(m, p).value == pytest.approx(phi_p_reference(m, p), rel=1e-10)

    def test_mindist_matches_loops(self):
        m = generate_srs(25, 4, seed=3).matrix
        brute = min(
            math.dist(m[i], m[j]) for i in range(25) for j in range(i + 1, 25)
        )
        assert mindist(m).value == pytest.approx(brute, rel=1e-14)


class TestInvariances:
    def test_w2_circular_shift_invariant(self):
        m = generate_srs(30, 3, seed=1).matrix
        shifted = (m + np.array([0.37, 0.11, 0.83])) % 1.0
        assert wraparound_l2(shifted).value == pytest.approx(
            wraparound_l2(m).value, abs=1e-12
        )

    def test_c2_reflection_invariant(self):
        m = generate_srs(30, 3, seed=2).matrix
        reflected = m.copy()
        reflected[:, 0] = 1.0 - reflected[:, 0]
        reflected[:, 2] = 1.0 - reflected[:, 2]
        assert centered_l2(reflected).value == pytest.approx(
            centered_l2(m).value, abs=1e-12
        )

    def test_star_not_reflection_invariant(self):
        # the star measure is anchored at the origin
        m = generate_srs(30, 2, seed=3).matrix
        reflected = 1.0 - m
        assert abs(star_l2(m).value - star_l2(reflected).value) > 1e-6

    def test_criteria_invariant_to_row_order(self):
        m = generate_srs(20, 3, seed=4).matrix
        perm = np.random.default_rng(0).permutation(20)
        for spec in [CriterionSpec(k) for k in ("c2", "w2", "l2star", "mindist")]:
            assert evaluate(m[perm], spec).value == pytest.approx(
                evaluate(m, spec).value, rel=1e-12
            )


class TestPhipMindistRelation:
    def test_product_bounds(self):
        # phi_p * mindist lies in [1, (N(N-1)/2)^(1/p)]
        n, p = 20, 50.0
        upper = (n * (n - 1) / 2) ** (1 / p)
        for seed in range(20):
            m = generate_srs(n, 3, seed=seed).matrix
            prod = phi_p(m, p).value * mindist(m).value
            assert 1.0 <= prod <= upper + 1e-12

    def test_phi_p_approaches_reciprocal_mindist(self):
        m = generate_srs(15, 3, seed=7).matrix
        tight = phi_p(m, 200.0).value
        assert tight == pytest.approx(1.0 / mindist(m).value, rel=0.05)


class TestDegenerateInputs:
    def test_mindist_coincident_points(self):
        m = np.array([[0.2, 0.2], [0.2, 0.2], [0.8, 0.8]])
        value = mindist(m)
        assert value.value == 0.0
        assert value.degenerate

    def test_phi_p_coincident_points(self):
        m = np.array([[0.2, 0.2], [0.2, 0.2]])
        value = phi_p(m, 50.0)
        assert math.isinf(value.value)
        assert value.degenerate
        assert value.to_json()["degenerate"] is True


class TestSpecAndJson:
    def test_spec_accepts_strings(self):
        spec = CriterionSpec("c2")
        assert spec.kind is CriterionKind.C2

    def test_spec_rejects_bad_p(self):
        with pytest.raises(ValueError):
            CriterionSpec("phip", 0.5)

    def test_directions(self):
        assert CriterionSpec("mindist").direction is Direction.MAXIMIZE
        for kind in ("c2", "w2", "l2star", "phip"):
            assert CriterionSpec(kind).direction is Direction.MINIMIZE

    def test_evaluate_json_schema(self):
        m = generate_random_lhs(10, 2, seed=0)
        out = evaluate(m, CriterionSpec("phip", 30.0)).to_json()
        assert set(out) == {"criterion", "p", "value"}
        assert out["criterion"] == "phip"
        assert out["p"] == 30.0

    def test_evaluate_unknown_kind(self):
        with pytest.raises(ValueError):
            CriterionSpec("entropy")


class TestMcOracle:
    def test_star_oracle_small_case(self):
        m = generate_srs(8, 2, seed=0)
        exact = star_l2_squared(m)
        est, se = mc_discrepancy_oracle(m, n_samples=500_000, seed=1)
        assert abs(est - exact) <= 4 * se

    def test_oracle_reproducible(self):
        m = generate_srs(8, 2, seed=0)
        a = mc_discrepancy_oracle(m, n_samples=100_000, seed=5)
        b = mc_discrepancy_oracle(m, n_samples=100_000, seed=5)
        assert a == b
