import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smoothrank.data import (BinarizationSpec, ClassLabel, SurvivalDataset,
                             SurvivalRecord, binarize, binarize_labels, impute_knn,
                             load_csv, save_csv, select_threshold)


def write_csv(path, text):
    path.write_text(text)
    return path


def make_dataset(times, events, covariates=None, n_features=1):
    times = np.asarray(times, float)
    if covariates is None:
        covariates = np.zeros((times.size, n_features))
    covariates = np.asarray(covariates, float)
    return SurvivalDataset(covariates=covariates, times=times,
                           events=np.asarray(events, bool),
                           feature_names=tuple(f"x{i}" for i in range(covariates.shape[1])))


class TestLoadCsv:
    def test_missing_cells(self, tmp_path):
        p = write_csv(tmp_path / "d.csv",
                      "time,event,a,b\n1,1,0.5,2\n2,0,,3\n3,1,NA,4\n")
        ds = load_csv(p, "time", "event")
        assert ds.n_records == 3 and ds.n_features == 2
        assert np.isnan(ds.covariates[1, 0]) and np.isnan(ds.covariates[2, 0])
        assert np.count_nonzero(np.isnan(ds.covariates)) == 2

    def test_nonpositive_time_names_row(self, tmp_path):
        p = write_csv(tmp_path / "d.csv", "time,event,a\n1,1,0\n0,0,1\n2,1,2\n")
        with pytest.raises(ValueError, match="row 2"):
            load_csv(p, "time", "event")

    def test_bad_event_value(self, tmp_path):
        p = write_csv(tmp_path / "d.csv", "time,event,a\n1,1,0\n2,2,1\n")
        with pytest.raises(ValueError, match="event"):
            load_csv(p, "time", "event")

    def test_missing_time_rejected(self, tmp_path):
        p = write_csv(tmp_path / "d.csv", "time,event,a\n1,1,0\nNA,0,1\n")
        with pytest.raises(ValueError, match="row 2"):
            load_csv(p, "time", "event")

    def test_unparseable_cell_names_location(self, tmp_path):
        p = write_csv(tmp_path / "d.csv", "time,event,a\n1,1,0\n2,1,abc\n")
        with pytest.raises(ValueError, match="row 2, column 'a'"):
            load_csv(p, "time", "event")

    def test_unknown_column(self, tmp_path):
        p = write_csv(tmp_path / "d.csv", "time,event,a\n1,1,0\n2,1,1\n")
        with pytest.raises(ValueError, match="no column"):
            load_csv(p, "time", "event", feature_cols=["zz"])

    def test_explicit_feature_selection(self, tmp_path):
        p = write_csv(tmp_path / "d.csv", "time,event,a,b,c\n1,1,0,5,9\n2,0,1,6,8\n")
        ds = load_csv(p, "time", "event", feature_cols=["c", "a"])
        assert ds.feature_names == ("c", "a")
        assert ds.covariates[0, 0] == 9.0

    def test_round_trip_preserves_cells(self, tmp_path):
        rng = np.random.default_rng(0)
        x = rng.normal(size=(20, 4))
        x[rng.uniform(size=x.shape) < 0.25] = np.nan
        ds = SurvivalDataset(covariates=x, times=rng.uniform(0.5, 9, 20),
                             events=rng.uniform(size=20) < 0.5,
                             feature_names=("a", "b", "c", "d"))
        path = tmp_path / "rt.csv"
        save_csv(ds, path)
        back = load_csv(path, "time", "event")
        assert back.feature_names == ds.feature_names
        assert np.array_equal(back.times, ds.times)
        assert np.array_equal(back.events, ds.events)
        assert np.array_equal(np.isnan(back.covariates), np.isnan(ds.covariates))
        both = ~np.isnan(ds.covariates)
        assert np.array_equal(back.covariates[both], ds.covariates[both])


class TestDatasetModel:
    def test_record_views(self):
        ds = make_dataset([1.0, 2.0], [True, False],
                          covariates=[[0.5, np.nan], [1.5, 2.5]])
        rec = ds.record(0)
        assert rec == SurvivalRecord(covariates=(0.5, None), time=1.0, event=True)
        again = SurvivalDataset.from_records(ds.records, ds.feature_names)
        assert np.array_equal(np.isnan(again.covariates), np.isnan(ds.covariates))

    def test_invariants(self):
        with pytest.raises(ValueError):
            make_dataset([1.0], [True])  # fewer than 2 records
        with pytest.raises(ValueError):
            make_dataset([1.0, -2.0], [True, False])
        with pytest.raises(ValueError):
            SurvivalDataset(covariates=np.zeros((2, 2)), times=np.array([1.0, 2.0]),
                            events=np.array([True, False]), feature_names=("only",))


class TestSelectThreshold:
    def test_balanced_six_events(self):
        ds = make_dataset([1, 2, 3, 4, 5, 6], [True] * 6)
        assert select_threshold(ds).threshold == 3.0

    def test_degenerate_single_time(self):
        ds = make_dataset([5, 5, 5], [True, True, True])
        with pytest.raises(ValueError):
            select_threshold(ds)

    def test_no_events(self):
        ds = make_dataset([1, 2, 3], [False] * 3)
        with pytest.raises(ValueError):
            select_threshold(ds)

    def test_ties_prefer_smaller_threshold(self):
        # thresholds 1 and 2 both give |1 - 2| = 1 and |2 - 1| = 1
        ds = make_dataset([1, 2, 3], [True, True, True])
        assert select_threshold(ds).threshold == 1.0

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10_000))
    def test_optimal_against_exhaustive_scan(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(4, 40))
        ds = make_dataset(np.round(rng.uniform(1, 10, n), 1),
                          rng.uniform(size=n) < 0.6)
        try:
            spec = select_threshold(ds)
        except ValueError:
            return
        labels = binarize_labels(ds, spec)
        gap = abs(np.sum(labels == 1) - np.sum(labels == 2))
        for t in np.unique(ds.times[ds.events]):
            n1 = np.sum(ds.events & (ds.times <= t))
            n2 = np.sum(ds.times > t)
            if n1 and n2:
                assert gap <= abs(n1 - n2)
                if abs(n1 - n2) == gap:
                    assert spec.threshold <= t

    def test_validates_threshold(self):
        with pytest.raises(ValueError):
            BinarizationSpec(threshold=0.0)


class TestBinarize:
    def test_class_assignment_rules(self):
        ds = make_dataset([2.0, 3.0, 5.0], [False, True, False])
        spec = BinarizationSpec(threshold=3.0)
        samples = binarize(ds, spec)
        # censored at 2 <= threshold: excluded; event at 3: class 1;
        # censored at 5 > threshold: class 2
        assert len(samples) == 2
        assert samples[0].class_label is ClassLabel.CLASS1
        assert samples[1].class_label is ClassLabel.CLASS2

    def test_empty_class_is_error(self):
        ds = make_dataset([1.0, 2.0], [True, True])
        with pytest.raises(ValueError):
            binarize(ds, BinarizationSpec(threshold=5.0))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10_000))
    def test_censored_before_threshold_never_labeled(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(4, 50))
        ds = make_dataset(np.round(rng.uniform(1, 10, n), 1),
                          rng.uniform(size=n) < 0.5)
        try:
            spec = select_threshold(ds)
        except ValueError:
            return
        labels = binarize_labels(ds, spec)
        excluded = ~ds.events & (ds.times <= spec.threshold)
        assert np.all(labels[excluded] == 0)
        assert np.all(labels[ds.events & (ds.times <= spec.threshold)] == 1)
        assert np.all(labels[ds.times > spec.threshold] == 2)


class TestImputeKnn:
    def test_complete_dataset_identity(self):
        rng = np.random.default_rng(1)
        ds = make_dataset(rng.uniform(1, 5, 8), [True] * 8,
                          covariates=rng.normal(size=(8, 3)))
        out = impute_knn(ds, k=5)
        assert np.array_equal(out.covariates, ds.covariates)

    def test_five_nearest_mean_oracle(self):
        rng = np.random.default_rng(2)
        x = rng.normal(size=(6, 3))
        x[0, 1] = np.nan
        ds = make_dataset(rng.uniform(1, 5, 6), [True] * 6, covariates=x)
        out = impute_knn(ds, k=5)

        # oracle: standardize, shared-feature distance / count, 5 nearest
        mean = np.nanmean(x, axis=0)
        sd = np.nanstd(x, axis=0)
        z = (x - mean) / sd
        dists = []
        for i in range(1, 6):
            shared = [j for j in (0, 2)]  # column 1 is the target cell
            d = np.sqrt(sum((z[0, j] - z[i, j]) ** 2 for j in shared)) / len(shared)
            dists.append((d, i))
        nearest = [i for _, i in sorted(dists)[:5]]
        assert out.covariates[0, 1] == pytest.approx(np.mean(x[nearest, 1]), rel=1e-12)

    def test_fewer_candidates_than_k(self):
        x = np.array([[1.0, np.nan], [2.0, 5.0], [3.0, 6.0]])
        ds = make_dataset([1, 2, 3], [True] * 3, covariates=x)
        out = impute_knn(ds, k=5)
        assert out.covariates[0, 1] == pytest.approx(5.5)

    def test_never_changes_present_cells_and_fills_all(self):
        rng = np.random.default_rng(3)
        x = rng.normal(size=(12, 4))
        x[rng.uniform(size=x.shape) < 0.2] = np.nan
        x[:, 0] = rng.normal(size=12)  # keep one complete feature
        ds = make_dataset(rng.uniform(1, 5, 12), [True] * 12, covariates=x)
        out = impute_knn(ds, k=3)
        present = ~np.isnan(x)
        assert np.array_equal(out.covariates[present], x[present])
        assert not np.any(np.isnan(out.covariates))

    def test_idempotent(self):
        rng = np.random.default_rng(4)
        x = rng.normal(size=(10, 3))
        x[2, 1] = np.nan
        ds = make_dataset(rng.uniform(1, 5, 10), [True] * 10, covariates=x)
        once = impute_knn(ds, k=5)
        twice = impute_knn(once, k=5)
        assert np.array_equal(once.covariates, twice.covariates)

    def test_single_feature_error(self):
        x = np.array([[1.0], [np.nan], [3.0]])
        ds = make_dataset([1, 2, 3], [True] * 3, covariates=x)
        with pytest.raises(ValueError):
            impute_knn(ds, k=5)

    def test_feature_missing_everywhere_error(self):
        x = np.array([[1.0, np.nan], [2.0, np.nan], [3.0, np.nan]])
        ds = make_dataset([1, 2, 3], [True] * 3, covariates=x)
        with pytest.raises(ValueError, match="missing in every record"):
            impute_knn(ds, k=5)
