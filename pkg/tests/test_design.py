"""Tests for design construction, validation, swaps and CSV round-trips."""

import numpy as np
import pytest

from sfdesign import (
    DesignIoError,
    DesignMatrix,
    LhsDesign,
    LhsVariant,
    elementary_swap,
    extract_subprojection,
    format_design_csv,
    generate_centered_lhs,
    generate_random_lhs,
    generate_srs,
    lhs_from_matrix,
    lhs_from_permutations,
    read_design_csv,
    validate_lhs,
    write_design_csv,
)


class TestGenerators:
    def test_random_lhs_shape_and_range(self):
        d = generate_random_lhs(10, 3, seed=1)
        assert d.matrix.shape == (10, 3)
        assert d.permutations.shape == (10, 3)
        assert (d.matrix >= 0).all() and (d.matrix < 1).all()
        assert d.n == 10 and d.d == 3

    def test_random_lhs_is_valid(self):
        d = generate_random_lhs(25, 6, seed=3)
        ok, violations = validate_lhs(d)
        assert ok and violations == []

    def test_random_lhs_one_point_per_stratum(self):
        d = generate_random_lhs(8, 2, seed=0)
        for j in range(2):
            strata = np.floor(d.matrix[:, j] * 8).astype(int)
            assert sorted(strata) == list(range(8))

    def test_centered_lhs_exact_midpoints(self):
        d = generate_centered_lhs(5, 2, seed=9)
        expected = (d.permutations - 0.5) / 5.0
        np.testing.assert_array_equal(d.matrix, expected)
        assert d.variant is LhsVariant.CENTERED
        ok, _ = validate_lhs(d)
        assert ok

    def test_reproducible_and_seed_sensitive(self):
        a = generate_random_lhs(12, 4, seed=7)
        b = generate_random_lhs(12, 4, seed=7)
        c = generate_random_lhs(12, 4, seed=8)
        np.testing.assert_array_equal(a.matrix, b.matrix)
        assert not np.array_equal(a.matrix, c.matrix)

    def test_srs_shape_and_range(self):
        m = generate_srs(30, 2, seed=4)
        assert isinstance(m, DesignMatrix)
        assert m.matrix.shape == (30, 2)
        assert (m.matrix >= 0).all() and (m.matrix <= 1).all()

    def test_srs_is_usually_not_lhs(self):
        # 20 iid points essentially never hit 20 distinct strata
        m = generate_srs(20, 1, seed=5)
        with pytest.raises(DesignIoError):
            lhs_from_matrix(m)


class TestDesignMatrixValidation:
    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            DesignMatrix(np.array([[0.1, 1.2]]))

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            DesignMatrix(np.array([[0.1, np.nan]]))

    def test_rejects_wrong_rank(self):
        with pytest.raises(ValueError):
            DesignMatrix(np.array([0.1, 0.2]))


class TestPermutationConstructors:
    def test_from_permutations_centered(self):
        perms = np.array([[1, 3], [2, 1], [3, 2]])
        d = lhs_from_permutations(perms)
        np.testing.assert_allclose(d.matrix[:, 0], [0.5 / 3, 1.5 / 3, 2.5 / 3])
        ok, _ = validate_lhs(d)
        assert ok

    def test_from_permutations_jittered(self):
        perms = np.array([[1, 2], [2, 1]])
        d = lhs_from_permutations(perms, variant=LhsVariant.RANDOM_IN_CELL, seed=0)
        ok, _ = validate_lhs(d)
        assert ok

    def test_from_permutations_rejects_non_permutation(self):
        with pytest.raises(ValueError):
            lhs_from_permutations(np.array([[1, 1], [1, 2]]))

    def test_from_matrix_recovers_permutations(self):
        d = generate_random_lhs(15, 3, seed=2)
        rebuilt = lhs_from_matrix(d.as_design_matrix())
        np.testing.assert_array_equal(rebuilt.permutations, d.permutations)


class TestValidateLhs:
    def test_flags_duplicate_stratum(self):
        d = generate_random_lhs(6, 2, seed=1)
        broken = d.matrix.copy()
        broken[0, 0] = broken[1, 0]  # two points in one stratum
        fake = LhsDesign(
            matrix=broken,
            permutations=d.permutations,
            variant=d.variant,
        )
        ok, violations = validate_lhs(fake)
        assert not ok
        assert any(v.column == 1 for v in violations)

    def test_violation_reports_one_based_rows(self):
        d = generate_centered_lhs(4, 1, seed=0)
        shifted = d.matrix.copy()
        shifted[2, 0] += 0.01  # no longer the stratum midpoint
        fake = LhsDesign(matrix=shifted, permutations=d.permutations, variant=d.variant)
        ok, violations = validate_lhs(fake)
        assert not ok
        assert violations[0].row == 3


class TestElementarySwap:
    def test_swap_preserves_lhs(self):
        d = generate_random_lhs(9, 3, seed=11)
        swapped = elementary_swap(d, column=2, row_a=1, row_b=5)
        ok, _ = validate_lhs(swapped)
        assert ok

    def test_swap_exchanges_exactly_two_entries(self):
        d = generate_random_lhs(9, 3, seed=11)
        swapped = elementary_swap(d, column=2, row_a=1, row_b=5)
        diff = swapped.matrix != d.matrix
        assert diff.sum() == 2
        assert diff[0, 1] and diff[4, 1]
        assert swapped.matrix[0, 1] == d.matrix[4, 1]
        assert swapped.matrix[4, 1] == d.matrix[0, 1]

    def test_swap_is_involution(self):
        d = generate_random_lhs(7, 2, seed=3)
        back = elementary_swap(elementary_swap(d, 1, 2, 6), 1, 2, 6)
        np.testing.assert_array_equal(back.matrix, d.matrix)
        np.testing.assert_array_equal(back.permutations, d.permutations)

    def test_swap_does_not_mutate_input(self):
        d = generate_random_lhs(7, 2, seed=3)
        before = d.matrix.copy()
        elementary_swap(d, 1, 1, 2)
        np.testing.assert_array_equal(d.matrix, before)

    def test_swap_rejects_bad_indices(self):
        d = generate_random_lhs(5, 2, seed=0)
        with pytest.raises(ValueError):
            elementary_swap(d, 3, 1, 2)
        with pytest.raises(ValueError):
            elementary_swap(d, 1, 0, 2)
        with pytest.raises(ValueError):
            elementary_swap(d, 1, 2, 2)


class TestSubprojection:
    def test_column_subset_keeps_order(self):
        d = generate_random_lhs(10, 4, seed=6)
        sub = extract_subprojection(d, [3, 1])
        np.testing.assert_array_equal(sub.matrix[:, 0], d.matrix[:, 2])
        np.testing.assert_array_equal(sub.matrix[:, 1], d.matrix[:, 0])

    def test_lhs_subprojection_is_lhs(self):
        d = generate_random_lhs(10, 4, seed=6)
        sub = extract_subprojection(d, [2, 4])
        assert isinstance(sub, LhsDesign)
        ok, _ = validate_lhs(sub)
        assert ok

    def test_rejects_duplicates_and_out_of_range(self):
        d = generate_random_lhs(5, 3, seed=1)
        with pytest.raises(ValueError):
            extract_subprojection(d, [1, 1])
        with pytest.raises(ValueError):
            extract_subprojection(d, [0])


class TestCsvRoundTrip:
    def test_write_read_bit_exact(self, tmp_path):
        d = generate_random_lhs(20, 5, seed=13)
        path = tmp_path / "design.csv"
        write_design_csv(d, path)
        back = read_design_csv(path)
        np.testing.assert_array_equal(back.matrix, d.matrix)

    def test_format_contains_shape_line(self):
        d = generate_random_lhs(4, 2, seed=0)
        text = format_design_csv(d)
        first = text.splitlines()[0]
        assert "n=4" in first and "d=2" in first

    def test_reads_headerless_body(self, tmp_path):
        path = tmp_path / "plain.csv"
        path.write_text("0.25,0.75\n0.75,0.25\n")
        m = read_design_csv(path)
        assert m.matrix.shape == (2, 2)

    def test_empty_file_is_io_error(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(DesignIoError):
            read_design_csv(path)

    def test_ragged_rows_is_io_error(self, tmp_path):
        path = tmp_path / "ragged.csv"
        path.write_text("0.1,0.2\n0.3\n")
        with pytest.raises(DesignIoError):
            read_design_csv(path)

    def test_non_numeric_is_io_error(self, tmp_path):
        path = tmp_path / "alpha.csv"
        path.write_text("0.1,zebra\n")
        with pytest.raises(DesignIoError):
            read_design_csv(path)

    def test_out_of_range_is_io_error(self, tmp_path):
        path = tmp_path / "range.csv"
        path.write_text("0.5,1.5\n")
        with pytest.raises(DesignIoError):
            read_design_csv(path)

    def test_shape_line_mismatch_is_io_error(self, tmp_path):
        path = tmp_path / "mismatch.csv"
        path.write_text("# sfd-design n=3 d=2\n0.1,0.2\n0.3,0.4\n")
        with pytest.raises(DesignIoError):
            read_design_csv(path)
