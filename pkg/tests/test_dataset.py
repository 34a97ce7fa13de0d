"""Dataset loading, normalization, partitions, and grid construction."""

import hashlib
from importlib import resources

import numpy as np
import pytest

from fuzzident.dataset import (
    BUILTIN_DATASETS,
    ConstantColumnError,
    DataFormatError,
    load_builtin,
    load_csv,
    load_precipitation,
    load_security,
    normalize_inputs,
    partitions_from_dataset,
    build_grid_rulebase,
    PartitionSpec,
)
from fuzzident.rulebase import GAUSSIAN, TRIANGULAR

# Pin the bundled files byte-for-byte: every accuracy figure in the
# acceptance tests is meaningless if the fixtures drift.
FIXTURE_MD5 = {
    "precipitation.csv": "a5c2271196f51c0faa019441f0bd125d",
    "security.csv": "b08bb59c3f45008d7c5bf2ec5889505a",
}


class TestBuiltins:
    @pytest.mark.parametrize("fname,digest", sorted(FIXTURE_MD5.items()))
    def test_fixture_checksums(self, fname, digest):
        blob = resources.files("fuzzident.data").joinpath(fname).read_bytes()
        assert hashlib.md5(blob).hexdigest() == digest

    def test_precipitation_shape_and_endpoints(self):
        ds = load_precipitation()
        assert len(ds) == 26
        assert ds.input_dim == 2
        assert ds.input_names == ("factor1", "factor2")
        assert ds.target_name == "precipitation_mm"
        assert ds.inputs[0].tolist() == [0.73, -5.28]
        assert ds.targets[0] == 283.0
        assert ds.inputs[-1].tolist() == [-0.59, 7.15]
        assert ds.targets[-1] == 796.0

    def test_security_shape_and_endpoints(self):
        ds = load_security()
        assert len(ds) == 60
        assert ds.input_dim == 3
        assert ds.target_name == "situation"
        assert ds.inputs[0].tolist() == [1.0, 2.0, 7.0]
        assert ds.targets[0] == 13.792
        assert ds.inputs[-1].tolist() == [3.0, 2.0, 4.0]
        assert ds.targets[-1] == 21.914

    def test_load_builtin_dispatch(self):
        for name in BUILTIN_DATASETS:
            assert len(load_builtin(name)) > 0
        with pytest.raises(ValueError, match="unknown dataset"):
            load_builtin("weather")


class TestCsvParsing:
    def write(self, tmp_path, text):
        p = tmp_path / "data.csv"
        p.write_text(text)
        return p

    def test_basic_load_with_target_column(self, tmp_path):
        p = self.write(tmp_path, "a,b,y\n1,2,3\n4,5,6\n")
        ds = load_csv(p, target_column="b")
        assert ds.input_names == ("a", "y")
        assert ds.targets.tolist() == [2.0, 5.0]

    def test_last_column_is_default_target(self, tmp_path):
        p = self.write(tmp_path, "a,y\n1,2\n3,4\n")
        ds = load_csv(p)
        assert ds.target_name == "y"
        assert ds.inputs.tolist() == [[1.0], [3.0]]

    def test_missing_target_column(self, tmp_path):
        p = self.write(tmp_path, "a,y\n1,2\n")
        with pytest.raises(DataFormatError, match="no column named"):
            load_csv(p, target_column="z")

    def test_bad_value_reports_row_and_column(self, tmp_path):
        p = self.write(tmp_path, "a,y\n1,2\nx,4\n")
        with pytest.raises(DataFormatError, match=r"row 3, column 'a'"):
            load_csv(p)

    def test_ragged_row_rejected(self, tmp_path):
        p = self.write(tmp_path, "a,b,y\n1,2,3\n4,5\n")
        with pytest.raises(DataFormatError, match="row 3 has 2 cells"):
            load_csv(p)

    def test_no_rows_rejected(self, tmp_path):
        p = self.write(tmp_path, "a,y\n")
        with pytest.raises(DataFormatError, match="no data rows"):
            load_csv(p)

    def test_single_column_rejected(self, tmp_path):
        p = self.write(tmp_path, "y\n1\n")
        with pytest.raises(DataFormatError, match="at least one input"):
            load_csv(p)


class TestNormalization:
    def test_inputs_map_to_unit_interval(self):
        ds = load_precipitation()
        norm, maps = normalize_inputs(ds)
        assert np.allclose(norm.inputs.min(axis=0), [-1.0, -1.0], atol=1e-12)
        assert np.allclose(norm.inputs.max(axis=0), [1.0, 1.0], atol=1e-12)
        assert (np.abs(norm.inputs) <= 1.0 + 1e-12).all()
        # Targets pass through untouched.
        assert (norm.targets == ds.targets).all()
        # The returned maps reproduce the normalized columns and invert exactly.
        for j, am in enumerate(maps):
            col = am.apply(ds.inputs[:, j])
            assert np.allclose(col, norm.inputs[:, j], rtol=0, atol=0)
            assert np.allclose(am.invert(col), ds.inputs[:, j], rtol=1e-15, atol=1e-12)

    def test_constant_column_rejected(self, tmp_path):
        p = tmp_path / "data.csv"
        p.write_text("a,b,y\n1,5,3\n2,5,6\n")
        with pytest.raises(ConstantColumnError, match="'b'"):
            normalize_inputs(load_csv(p))


class TestPartitions:
    def test_spec_validation(self):
        with pytest.raises(ValueError):
            PartitionSpec(sets=1, lo=0.0, hi=1.0)
        with pytest.raises(ValueError):
            PartitionSpec(sets=3, lo=1.0, hi=1.0)

    def test_centers_cover_the_range(self):
        spec = PartitionSpec(sets=6, lo=-1.0, hi=1.0)
        centers = spec.centers
        assert len(centers) == 6
        assert centers[0] == -1.0 and centers[-1] == 1.0
        assert spec.spacing == pytest.approx(0.4)

    def test_from_dataset(self):
        norm, _ = normalize_inputs(load_precipitation())
        parts = partitions_from_dataset(norm, 6)
        assert len(parts) == 2
        assert all(p.sets == 6 for p in parts)
        assert parts[0].lo == pytest.approx(-1.0, abs=1e-12)
        assert parts[0].hi == pytest.approx(1.0, abs=1e-12)


class TestGridRuleBase:
    def test_grid_size_and_zero_consequents(self):
        norm, _ = normalize_inputs(load_precipitation())
        rb = build_grid_rulebase(partitions_from_dataset(norm, 6), TRIANGULAR)
        assert len(rb) == 36
        assert rb.input_dim == 2
        assert (rb.coefficients == 0.0).all()

    def test_triangle_supports_reach_adjacent_centers(self):
        norm, _ = normalize_inputs(load_precipitation())
        rb = build_grid_rulebase(partitions_from_dataset(norm, 6), TRIANGULAR)
        params = rb.antecedent_params
        spacing = 2.0 / 5.0
        # Every triangle's half-widths equal the grid spacing, including
        # at the edges (supports extend past the data range there).
        assert np.allclose(params[:, :, 1] - params[:, :, 0], spacing)
        assert np.allclose(params[:, :, 2] - params[:, :, 1], spacing)

    def test_neighboring_sets_cross_at_half(self):
        # Both kinds are built so adjacent memberships meet at 0.5 halfway
        # between centers.
        norm, _ = normalize_inputs(load_precipitation())
        parts = partitions_from_dataset(norm, 6)
        tri = build_grid_rulebase(parts, TRIANGULAR)
        gau = build_grid_rulebase(parts, GAUSSIAN)
        centers = parts[0].centers
        mid = 0.5 * (centers[0] + centers[1])
        t0 = tri.rules[0].antecedents[0]
        g0 = gau.rules[0].antecedents[0]
        assert t0.membership(mid) == pytest.approx(0.5)
        assert g0.membership(mid) == pytest.approx(0.5)

    def test_rule_order_is_row_major_product(self):
        norm, _ = normalize_inputs(load_precipitation())
        parts = partitions_from_dataset(norm, 3)
        rb = build_grid_rulebase(parts, TRIANGULAR)
        centers0 = [r.antecedents[0].center for r in rb.rules]
        centers1 = [r.antecedents[1].center for r in rb.rules]
        # First dimension varies slowest.
        assert centers0[:3] == [centers0[0]] * 3
        assert centers1[:3] == list(parts[1].centers)

    def test_labels_attached(self):
        norm, _ = normalize_inputs(load_precipitation())
        rb = build_grid_rulebase(partitions_from_dataset(norm, 3), TRIANGULAR)
        assert rb.partition_labels is not None
        assert all(r.labels is not None for r in rb.rules)
