"""Tests for the swap-based optimizers and the comparison harness."""

import numpy as np
import pytest

from sfdesign import (
    CompareScenario,
    CompareVariant,
    CriterionSpec,
    OptimizerConfig,
    Termination,
    compare_optimizers,
    evaluate,
    generate_random_lhs,
    mindist,
    optimize,
    optimize_ese,
    optimize_geometric_sa,
    optimize_mm_sa,
    validate_lhs,
)


def small_run(algorithm: str, budget: int = 2000, seed: int = 0, **kw):
    if algorithm != "ese":
        kw.setdefault("t0", 0.1)
    initial = generate_random_lhs(16, 3, seed=seed)
    config = OptimizerConfig(algorithm, budget=budget, seed=seed, **kw)
    return optimize(initial, CriterionSpec("phip", 50.0), config)


class TestCommonContract:
    @pytest.mark.parametrize("algorithm", ["geometric-sa", "mm-sa", "ese"])
    def test_budget_honored(self, algorithm):
        result = small_run(algorithm, budget=2000)
        assert result.trace.records[-1].perturbations <= 2000
        if result.termination is Termination.BUDGET_EXHAUSTED:
            assert result.trace.records[-1].perturbations >= 2000 - 100

    @pytest.mark.parametrize("algorithm", ["geometric-sa", "mm-sa", "ese"])
    def test_result_is_valid_lhs(self, algorithm):
        result = small_run(algorithm)
        ok, violations = validate_lhs(result.best_design)
        assert ok, violations

    @pytest.mark.parametrize("algorithm", ["geometric-sa", "mm-sa", "ese"])
    def test_traced_best_is_monotone(self, algorithm):
        result = small_run(algorithm)
        best = [rec.best for rec in result.trace.records]
        assert all(b1 >= b2 - 1e-12 for b1, b2 in zip(best, best[1:]))

    @pytest.mark.parametrize("algorithm", ["geometric-sa", "mm-sa", "ese"])
    def test_best_improves_on_initial(self, algorithm):
        initial = generate_random_lhs(16, 3, seed=5)
        start = evaluate(initial, CriterionSpec("phip", 50.0)).value
        result = optimize(
            initial,
            CriterionSpec("phip", 50.0),
            OptimizerConfig(algorithm, budget=3000, seed=5, t0=0.1),
        )
        assert result.best_value.value < start

    @pytest.mark.parametrize("algorithm", ["geometric-sa", "mm-sa", "ese"])
    def test_reproducible_bit_for_bit(self, algorithm):
        a = small_run(algorithm, seed=7)
        b = small_run(algorithm, seed=7)
        np.testing.assert_array_equal(a.best_design.matrix, b.best_design.matrix)
        assert a.trace.records == b.trace.records
        assert a.best_value.value == b.best_value.value

    def test_seeds_change_outcome(self):
        a = small_run("ese", seed=1)
        b = small_run("ese", seed=2)
        assert not np.array_equal(a.best_design.matrix, b.best_design.matrix)

    @pytest.mark.parametrize("algorithm", ["geometric-sa", "mm-sa", "ese"])
    def test_best_value_matches_recomputation(self, algorithm):
        result = small_run(algorithm, seed=3)
        recomputed = evaluate(result.best_design.matrix, CriterionSpec("phip", 50.0))
        assert result.best_value.value == pytest.approx(recomputed.value, abs=1e-9)
        assert result.trace.metadata["traced_best"] == pytest.approx(
            recomputed.value, abs=1e-9
        )

    def test_maximizing_criterion(self):
        initial = generate_random_lhs(20, 3, seed=9)
        start = mindist(initial.matrix).value
        result = optimize(
            initial,
            CriterionSpec("mindist"),
            OptimizerConfig("ese", budget=4000, seed=9),
        )
        assert result.best_value.value > start
        best = [rec.best for rec in result.trace.records]
        assert all(b2 >= b1 - 1e-12 for b1, b2 in zip(best, best[1:]))

    def test_rejects_invalid_initial(self):
        bad = generate_random_lhs(10, 2, seed=0)
        m = bad.matrix.copy()
        m[0, 0] = m[1, 0]  # collapse two rows into one stratum
        from sfdesign import LhsDesign

        with pytest.raises(ValueError):
            doctored = LhsDesign(m, bad.permutations, bad.variant)
            optimize(
                doctored,
                CriterionSpec("c2"),
                OptimizerConfig("ese", budget=100, seed=0),
            )

    def test_report_criterion_traced(self):
        initial = generate_random_lhs(16, 3, seed=11)
        result = optimize(
            initial,
            CriterionSpec("phip", 50.0),
            OptimizerConfig("ese", budget=2000, seed=11),
            report_spec=CriterionSpec("mindist"),
        )
        final = result.trace.records[-1]
        assert final.report == pytest.approx(
            mindist(result.best_design.matrix).value, rel=1e-12
        )


class TestSchedules:
    def test_cold_geometric_sa_is_greedy(self):
        # with a near-zero starting temperature only improving swaps pass
        initial = generate_random_lhs(16, 3, seed=13)
        result = optimize(
            initial,
            CriterionSpec("c2"),
            OptimizerConfig("geometric-sa", budget=3000, seed=13, t0=1e-300),
        )
        currents = [rec.current for rec in result.trace.records]
        assert all(c1 >= c2 - 1e-12 for c1, c2 in zip(currents, currents[1:]))

    def test_mm_sa_stalls_with_small_patience(self):
        initial = generate_random_lhs(16, 3, seed=14)
        result = optimize(
            initial,
            CriterionSpec("phip", 50.0),
            OptimizerConfig(
                "mm-sa", budget=500_000, seed=14, t0=0.01, c=0.9, i_max=50
            ),
        )
        assert result.termination is Termination.STALLED
        assert result.trace.records[-1].perturbations < 500_000

    def test_mm_sa_temperature_decays(self):
        result = small_run("mm-sa", budget=5000, seed=15, c=0.8, i_max=20)
        temps = [rec.temperature for rec in result.trace.records]
        assert temps[-1] < temps[0]

    def test_fast_cooling_warns_in_high_dimension(self):
        initial = generate_random_lhs(30, 21, seed=19)
        config = OptimizerConfig("geometric-sa", budget=200, seed=19, t0=0.1, c=0.9)
        with pytest.warns(UserWarning, match="cooling"):
            optimize(initial, CriterionSpec("c2"), config)

    def test_slow_cooling_silent_in_high_dimension(self):
        import warnings

        initial = generate_random_lhs(30, 21, seed=19)
        config = OptimizerConfig("geometric-sa", budget=200, seed=19, t0=0.1, c=0.99)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            optimize(initial, CriterionSpec("c2"), config)

    def test_ese_minimal_inner_loop(self):
        initial = generate_random_lhs(10, 2, seed=16)
        result = optimize(
            initial,
            CriterionSpec("c2"),
            OptimizerConfig("ese", budget=200, seed=16, m_inner=1, j_candidates=1),
        )
        ok, _ = validate_lhs(result.best_design)
        assert ok

    def test_direct_entry_points_match_dispatch(self):
        initial = generate_random_lhs(12, 2, seed=17)
        spec = CriterionSpec("w2")
        for algorithm, fn in [
            ("geometric-sa", optimize_geometric_sa),
            ("mm-sa", optimize_mm_sa),
            ("ese", optimize_ese),
        ]:
            config = OptimizerConfig(algorithm, budget=1000, seed=17, t0=0.05)
            via_dispatch = optimize(initial, spec, config)
            direct = fn(initial, spec, config)
            np.testing.assert_array_equal(
                via_dispatch.best_design.matrix, direct.best_design.matrix
            )

    def test_snapshots_on_grid(self):
        initial = generate_random_lhs(12, 3, seed=18)
        result = optimize(
            initial,
            CriterionSpec("c2"),
            OptimizerConfig("ese", budget=2000, seed=18),
            snapshot_interval=500,
        )
        counts = [c for c, _ in result.snapshots]
        assert counts[0] == 0
        assert counts[-1] == result.trace.records[-1].perturbations
        assert counts == sorted(counts)
        final_count, final_matrix = result.snapshots[-1]
        np.testing.assert_array_equal(final_matrix, result.best_design.matrix)
        from sfdesign import lhs_from_matrix

        for _, snap in result.snapshots:
            ok, _ = validate_lhs(lhs_from_matrix(snap))
            assert ok

    def test_no_snapshots_by_default(self):
        assert small_run("ese", budget=500).snapshots == ()


class TestConfigValidation:
    def test_unknown_algorithm(self):
        with pytest.raises(ValueError):
            OptimizerConfig("tabu", budget=100, seed=0)

    def test_sa_requires_t0(self):
        with pytest.raises(ValueError):
            OptimizerConfig("geometric-sa", budget=100, seed=0)
        with pytest.raises(ValueError):
            OptimizerConfig("mm-sa", budget=100, seed=0)

    def test_ese_needs_no_t0(self):
        OptimizerConfig("ese", budget=100, seed=0)

    def test_bad_numbers(self):
        with pytest.raises(ValueError):
            OptimizerConfig("ese", budget=0, seed=0)
        with pytest.raises(ValueError):
            OptimizerConfig("geometric-sa", budget=100, seed=0, t0=-1.0)
        with pytest.raises(ValueError):
            OptimizerConfig("mm-sa", budget=100, seed=0, t0=0.1, c=1.5)
        with pytest.raises(ValueError):
            OptimizerConfig("mm-sa", budget=100, seed=0, t0=0.1, i_max=0)
        with pytest.raises(ValueError):
            OptimizerConfig("ese", budget=100, seed=0, m_inner=0)
        with pytest.raises(ValueError):
            OptimizerConfig("ese", budget=100, seed=0, j_candidates=0)


class TestCompareOptimizers:
    def scenario(self, **kw) -> CompareScenario:
        variants = (
            CompareVariant(
                "greedy",
                CriterionSpec("phip", 50.0),
                OptimizerConfig("geometric-sa", budget=1500, seed=0, t0=1e-300),
            ),
            CompareVariant(
                "ese",
                CriterionSpec("phip", 50.0),
                OptimizerConfig("ese", budget=1500, seed=0),
            ),
        )
        kw.setdefault("n", 12)
        kw.setdefault("d", 3)
        kw.setdefault("variants", variants)
        kw.setdefault("replicates", 3)
        kw.setdefault("seed", 100)
        return CompareScenario(**kw)

    def test_report_shape(self):
        report = compare_optimizers(self.scenario(checkpoints=10))
        assert report.paired is True
        text = report.to_csv_text()
        lines = text.strip().splitlines()
        assert lines[0] == "checkpoint,variant,q05,q25,q50,q75,q95"
        labels = {line.split(",")[1] for line in lines[1:]}
        assert labels == {"greedy", "ese"}

    def test_quantiles_ordered(self):
        report = compare_optimizers(self.scenario(checkpoints=10))
        for line in report.to_csv_text().strip().splitlines()[1:]:
            fields = line.split(",")
            q = [float(x) for x in fields[2:]]
            assert q == sorted(q)

    def test_jobs_do_not_change_result(self):
        serial = compare_optimizers(self.scenario(checkpoints=5))
        threaded = compare_optimizers(self.scenario(checkpoints=5), jobs=4)
        assert serial.to_csv_text() == threaded.to_csv_text()

    def test_common_report_metric(self):
        report = compare_optimizers(
            self.scenario(report=CriterionSpec("mindist"), checkpoints=5)
        )
        text = report.to_csv_text()
        # mindist values of 12-point designs are below 1; phip(50) would not be
        final = [
            float(line.split(",")[4])
            for line in text.strip().splitlines()[1:]
        ]
        assert all(0.0 < v < 1.0 for v in final)

    def test_label_uniqueness_enforced(self):
        v = CompareVariant(
            "x", CriterionSpec("c2"), OptimizerConfig("ese", budget=100, seed=0)
        )
        with pytest.raises(ValueError):
            CompareScenario(n=10, d=2, variants=(v, v), replicates=2, seed=0)
