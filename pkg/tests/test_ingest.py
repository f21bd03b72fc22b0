import numpy as np
import pytest

from mgae.errors import (
    CellError,
    ConfigError,
    FormatError,
    InsufficientDataError,
    OrderingError,
    SchemaError,
)
from mgae.ingest import (
    PeriodSpec,
    ReturnsMatrix,
    clean_panel,
    load_returns_csv,
    split_periods,
    write_returns_csv,
)


def write(tmp_path, text, name="panel.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadReturnsCsv:
    def test_small_panel(self, tmp_path):
        path = write(tmp_path, "date,AAA,BBB\n2020-01-01,0.1,0.2\n2020-01-02,-0.1,0.0\n2020-01-03,0.3,0.1\n")
        panel = load_returns_csv(path)
        assert panel.n_obs == 3
        assert panel.n_assets == 2
        assert panel.assets == ("AAA", "BBB")
        assert panel.dates[0] == "2020-01-01"
        np.testing.assert_array_equal(panel.values[1], [-0.1, 0.0])

    def test_duplicate_asset_column(self, tmp_path):
        path = write(tmp_path, "date,AAA,AAA\n2020-01-01,0.1,0.2\n")
        with pytest.raises(SchemaError, match="AAA"):
            load_returns_csv(path)

    def test_date_out_of_order(self, tmp_path):
        path = write(tmp_path, "date,AAA\n2020-01-02,0.1\n2020-01-01,0.2\n")
        with pytest.raises(OrderingError):
            load_returns_csv(path)

    def test_bad_header(self, tmp_path):
        path = write(tmp_path, "day,AAA\n2020-01-01,0.1\n")
        with pytest.raises(FormatError, match="date"):
            load_returns_csv(path)

    def test_unparsable_cell_names_coordinates(self, tmp_path):
        path = write(tmp_path, "date,AAA,BBB\n2020-01-01,0.1,oops\n")
        with pytest.raises(CellError, match="line 2.*BBB"):
            load_returns_csv(path)

    def test_missing_cells_become_nan(self, tmp_path):
        path = write(tmp_path, "date,AAA,BBB\n2020-01-01,,0.2\n2020-01-02,0.1,0.3\n")
        panel = load_returns_csv(path)
        assert np.isnan(panel.values[0, 0])
        assert panel.has_missing()

    def test_bad_date_cell(self, tmp_path):
        path = write(tmp_path, "date,AAA\n2020-13-45,0.1\n")
        with pytest.raises(CellError):
            load_returns_csv(path)

    def test_ragged_row(self, tmp_path):
        path = write(tmp_path, "date,AAA,BBB\n2020-01-01,0.1\n")
        with pytest.raises(FormatError, match="line 2"):
            load_returns_csv(path)


def panel_of(dates, assets, values):
    return ReturnsMatrix(dates=tuple(dates), assets=tuple(assets), values=np.asarray(values, dtype=float))


class TestCleanPanel:
    def test_drops_gapped_rows(self):
        values = np.ones((5, 2))
        values[2, 1] = np.nan
        panel = panel_of([f"2020-01-0{i}" for i in range(1, 6)], ["A", "B"], values)
        cleaned = clean_panel(panel)
        assert cleaned.n_obs == 4
        assert "2020-01-03" not in cleaned.dates
        assert cleaned.assets == panel.assets

    def test_identity_when_complete(self):
        panel = panel_of(["2020-01-01", "2020-01-02"], ["A"], [[0.1], [0.2]])
        assert clean_panel(panel) is panel

    def test_all_rows_gapped(self):
        values = np.full((3, 2), np.nan)
        panel = panel_of(["2020-01-01", "2020-01-02", "2020-01-03"], ["A", "B"], values)
        with pytest.raises(InsufficientDataError):
            clean_panel(panel)

    def test_row_count_conservation(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            T = int(rng.integers(2, 30))
            values = rng.normal(size=(T, 3))
            gaps = rng.random(size=T) < 0.3
            values[gaps, int(rng.integers(0, 3))] = np.nan
            dates = [f"2020-{1 + i // 28:02d}-{1 + i % 28:02d}" for i in range(T)]
            panel = panel_of(dates, ["A", "B", "C"], values)
            dropped = int(np.isnan(panel.values).any(axis=1).sum())
            if T - dropped < 2:
                with pytest.raises(InsufficientDataError):
                    clean_panel(panel)
            else:
                assert clean_panel(panel).n_obs + dropped == T


class TestSplitPeriods:
    def make_panel(self, start_year=2004, years=16):
        dates = [f"{start_year + i // 12}-{1 + i % 12:02d}-15" for i in range(years * 12)]
        values = np.arange(len(dates) * 2, dtype=float).reshape(-1, 2)
        return panel_of(dates, ["A", "B"], values)

    def test_paper_spans(self):
        panel = self.make_panel()
        specs = [
            PeriodSpec("before", "2004-10-27", "2007-06-27"),
            PeriodSpec("during", "2007-06-29", "2010-08-24"),
            PeriodSpec("after", "2010-08-25", "2019-03-15"),
        ]
        parts = split_periods(panel, specs)
        assert [spec.name for spec, _ in parts] == ["before", "during", "after"]
        for spec, sub in parts:
            assert sub.dates[0] >= spec.start
            assert sub.dates[-1] <= spec.end
            assert sub.assets == panel.assets

    def test_single_spec_identity(self):
        panel = self.make_panel()
        [(_, sub)] = split_periods(panel, [PeriodSpec("all", "2000-01-01", "2030-01-01")])
        assert sub.dates == panel.dates
        np.testing.assert_array_equal(sub.values, panel.values)

    def test_window_before_all_dates(self):
        panel = self.make_panel()
        with pytest.raises(InsufficientDataError, match="early"):
            split_periods(panel, [PeriodSpec("early", "1990-01-01", "1990-12-31")])

    def test_overlap_rejected(self):
        panel = self.make_panel()
        specs = [
            PeriodSpec("x", "2005-01-01", "2006-01-01"),
            PeriodSpec("y", "2005-06-01", "2007-01-01"),
        ]
        with pytest.raises(ConfigError, match="overlap"):
            split_periods(panel, specs)

    def test_tiling_specs_reconstruct_panel(self):
        panel = self.make_panel(years=4)
        specs = [
            PeriodSpec("p1", "2004-01-01", "2005-06-30"),
            PeriodSpec("p2", "2005-07-01", "2006-12-31"),
            PeriodSpec("p3", "2007-01-01", "2008-12-31"),
        ]
        parts = split_periods(panel, specs)
        dates = sum((list(sub.dates) for _, sub in parts), [])
        values = np.concatenate([sub.values for _, sub in parts])
        assert dates == list(panel.dates)
        np.testing.assert_array_equal(values, panel.values)


class TestRoundTrip:
    def test_write_then_load_is_exact(self, tmp_path):
        rng = np.random.default_rng(3)
        panel = panel_of(
            ["2020-01-01", "2020-01-02", "2020-01-03"],
            ["A", "B", "C"],
            rng.normal(size=(3, 3)),
        )
        path = write_returns_csv(panel, tmp_path / "out.csv")
        loaded = load_returns_csv(path)
        assert loaded.dates == panel.dates
        assert loaded.assets == panel.assets
        np.testing.assert_array_equal(loaded.values, panel.values)

    def test_load_is_deterministic(self, tmp_path):
        path = write(tmp_path, "date,AAA\n2020-01-01,0.125\n2020-01-02,-0.5\n")
        a = load_returns_csv(path)
        b = load_returns_csv(path)
        assert a.dates == b.dates
        np.testing.assert_array_equal(a.values, b.values)


class TestInvariantEnforcement:
    def test_duplicate_assets_rejected_in_constructor(self):
        with pytest.raises(SchemaError):
            panel_of(["2020-01-01"], ["A", "A"], [[1.0, 2.0]])

    def test_period_spec_validates_dates(self):
        with pytest.raises(ConfigError):
            PeriodSpec("bad", "2021-01-01", "2020-01-01")
        with pytest.raises(ConfigError):
            PeriodSpec("bad", "not-a-date", "2020-01-01")
