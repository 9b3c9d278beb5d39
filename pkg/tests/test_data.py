import numpy as np
import pytest

from dcovselect.data import Dataset, emit, ingest, response_kind, synth_generate
from dcovselect.errors import DataValidationError
from dcovselect.screening import marginal_rank


def write(tmp_path, text, name="data.csv"):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestIngest:
    def test_small_csv(self, tmp_path):
        path = write(tmp_path, "g1,g2,label\n1.0,2.0,a\n3.5,4.0,b\n5.0,6.5,a\n")
        ds = ingest(path, label_column="label")
        assert (ds.n, ds.p) == (3, 2)
        assert ds.feature_names == ["g1", "g2"]
        assert response_kind(ds) == "classes"

    def test_positive_label_maps_to_signs(self, tmp_path):
        path = write(tmp_path, "g1,label\n1.0,yes\n2.0,no\n3.0,yes\n")
        ds = ingest(path, label_column="label", positive_label="yes")
        assert np.array_equal(ds.y, [1.0, -1.0, 1.0])
        assert response_kind(ds) == "binary"

    def test_numeric_labels_become_real_response(self, tmp_path):
        path = write(tmp_path, "g1,label\n1.0,0.5\n2.0,1.5\n")
        ds = ingest(path, label_column="label")
        assert response_kind(ds) == "real"

    def test_missing_cell_names_location(self, tmp_path):
        path = write(tmp_path, "g1,g2,label\n1.0,NA,a\n2.0,3.0,b\n")
        with pytest.raises(DataValidationError, match=r"row 1, column 'g2'"):
            ingest(path, label_column="label")

    def test_non_numeric_cell_names_location(self, tmp_path):
        path = write(tmp_path, "g1,label\nfoo,a\n1.0,b\n")
        with pytest.raises(DataValidationError, match=r"non-numeric.*row 1"):
            ingest(path, label_column="label")

    def test_log_transform_rejects_nonpositive(self, tmp_path):
        path = write(tmp_path, "g1,label\n0.0,a\n1.0,b\n")
        with pytest.raises(DataValidationError, match="log transform"):
            ingest(path, label_column="label", log_transform=True)

    def test_log_transform_applies(self, tmp_path):
        path = write(tmp_path, "g1,label\n1.0,a\n7.389056098930650,b\n")
        ds = ingest(path, label_column="label", log_transform=True)
        assert ds.X[0, 0] == 0.0
        assert ds.X[1, 0] == pytest.approx(2.0)

    def test_duplicate_columns_rejected(self, tmp_path):
        path = write(tmp_path, "g1,g1,label\n1.0,2.0,a\n3.0,4.0,b\n")
        with pytest.raises(DataValidationError, match="duplicate"):
            ingest(path, label_column="label")

    def test_missing_label_column(self, tmp_path):
        path = write(tmp_path, "g1,g2\n1.0,2.0\n")
        with pytest.raises(DataValidationError, match="label column"):
            ingest(path, label_column="label")

    def test_ragged_row_rejected(self, tmp_path):
        path = write(tmp_path, "g1,g2,label\n1.0,a\n")
        with pytest.raises(DataValidationError, match="cells"):
            ingest(path, label_column="label")


class TestRoundTrip:
    def test_bit_for_bit(self, tmp_path):
        rng = np.random.default_rng(0)
        ds = Dataset(
            X=rng.normal(size=(7, 3)) * 1e3,
            feature_names=["a", "b", "c"],
            y=np.where(rng.uniform(size=7) < 0.5, 1.0, -1.0),
            subject_ids=[f"s{i+1}" for i in range(7)],
        )
        path = tmp_path / "roundtrip.csv"
        emit(ds, path)
        back = ingest(path, label_column="label")
        assert np.array_equal(back.X, ds.X)
        assert np.array_equal(back.y, ds.y)
        assert back.feature_names == ds.feature_names

    def test_class_labels_roundtrip(self, tmp_path):
        ds, _ = synth_generate(12, 4, model="multiclass", classes=2, seed=1)
        path = tmp_path / "classes.csv"
        emit(ds, path)
        back = ingest(path, label_column=ds.label_name)
        assert np.array_equal(back.X, ds.X)
        assert list(back.y) == list(ds.y)


class TestSynth:
    def test_linear_noise_free_driver_ranks_first(self):
        ds, truth = synth_generate(60, 10, model="linear", active=[3], noise=0.0, seed=2)
        ranking, _ = marginal_rank(ds.X, ds.y)
        assert ranking[0] == 3
        assert truth["active"] == [3]

    def test_multiclass_tumor_panel_shape(self):
        ds, truth = synth_generate(63, 2308, model="multiclass", classes=4, seed=3)
        assert (ds.n, ds.p) == (63, 2308)
        values, counts = np.unique(ds.y, return_counts=True)
        assert len(values) == 4
        assert counts.sum() == 63
        assert len(truth["active"]) == 8

    def test_logistic_exact_counts(self):
        ds, truth = synth_generate(
            279, 50, model="logistic", active=4, prior=191 / 279, class_counts=(191, 88), seed=4
        )
        assert int((ds.y == 1.0).sum()) == 191
        assert int((ds.y == -1.0).sum()) == 88
        assert len(truth["eta"]) == 279

    def test_logistic_imbalanced_cohort_shape(self):
        ds, _ = synth_generate(
            279, 12042, model="logistic", active=4, prior=191 / 279,
            class_counts=(191, 88), seed=4,
        )
        assert (ds.n, ds.p) == (279, 12042)
        assert int((ds.y == 1.0).sum()) == 191

    def test_logistic_eta_in_unit_interval(self):
        _, truth = synth_generate(100, 10, model="logistic", active=3, prior=0.6, seed=5)
        eta = np.array(truth["eta"])
        assert np.all((eta > 0) & (eta < 1))
        assert abs(eta.mean() - 0.6) < 1e-6

    def test_reproducible(self):
        a, _ = synth_generate(30, 5, model="linear", active=2, seed=6)
        b, _ = synth_generate(30, 5, model="linear", active=2, seed=6)
        assert np.array_equal(a.X, b.X)
        assert np.array_equal(a.y, b.y)

    def test_bad_arguments_rejected(self):
        with pytest.raises(ValueError):
            synth_generate(10, 3, model="multiclass", classes=4, seed=0)
        with pytest.raises(ValueError):
            synth_generate(10, 3, model="linear", active=[5], seed=0)
        with pytest.raises(ValueError):
            synth_generate(10, 3, model="nonsense")

    def test_class_counts_must_sum(self):
        with pytest.raises(ValueError):
            synth_generate(10, 3, model="logistic", active=1, class_counts=(5, 6), seed=0)


class TestDatasetValidation:
    def test_nonfinite_matrix_rejected(self):
        with pytest.raises(DataValidationError):
            Dataset(
                X=np.array([[1.0, np.inf]]),
                feature_names=["a", "b"],
                y=np.array([1.0]),
                subject_ids=["s1"],
            )

    def test_duplicate_names_rejected(self):
        with pytest.raises(DataValidationError):
            Dataset(
                X=np.zeros((2, 2)),
                feature_names=["a", "a"],
                y=np.ones(2),
                subject_ids=["s1", "s2"],
            )
