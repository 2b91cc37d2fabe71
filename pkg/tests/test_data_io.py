import numpy as np
import pytest

from hfhe.data_io import (DataError, PriceTable, ScenarioMatrix, load_prices, rolling_windows,
                          save_prices, to_returns)
from conftest import write_csv


def test_load_three_rows(tmp_path):
    p = write_csv(tmp_path / "p.csv", "date,A\n2020-01-01,100\n2020-01-02,110\n2020-01-03,99\n")
    pt = load_prices(p)
    assert len(pt) == 3 and pt.n_assets == 1
    assert pt.prices[:, 0].tolist() == [100, 110, 99]


def test_zero_price_names_row(tmp_path):
    p = write_csv(tmp_path / "p.csv", "date,A\n2020-01-01,100\n2020-01-02,0\n")
    with pytest.raises(DataError, match="non-positive price at row 2"):
        load_prices(p)


def test_dates_out_of_order(tmp_path):
    p = write_csv(tmp_path / "p.csv", "date,A\n2020-01-02,100\n2020-01-01,101\n")
    with pytest.raises(DataError, match="dates not strictly increasing"):
        load_prices(p)


@pytest.mark.parametrize("body, message", [
    ("2020-01-01,100,abc\n", "non-numeric value 'abc' at row 1, column B"),
    ("2020-01-01,100\n", "ragged row 1"),
    ("2020-01-01,100,-3\n", "non-positive price at row 1, column B"),
])
def test_distinct_errors(tmp_path, body, message):
    p = write_csv(tmp_path / "p.csv", "date,A,B\n" + body)
    with pytest.raises(DataError, match=message):
        load_prices(p)


def test_missing_file(tmp_path):
    with pytest.raises(DataError, match="not found"):
        load_prices(tmp_path / "nope.csv")


def test_returns_hand_values():
    pt = PriceTable(["d1", "d2", "d3"], ["A"], np.array([[100.0], [110.0], [99.0]]))
    assert np.allclose(to_returns(pt).returns[:, 0], [0.10, -0.10], atol=1e-15)
    flat = PriceTable(["d1", "d2", "d3"], ["A"], np.full((3, 1), 50.0))
    assert to_returns(flat).returns.tolist() == [[0.0], [0.0]]
    two = PriceTable(["d1", "d2"], ["A", "B"], np.array([[1.0, 2.0], [2.0, 4.0]]))
    assert to_returns(two).returns.tolist() == [[1.0, 1.0]]


def test_returns_need_two_rows():
    with pytest.raises(DataError, match="insufficient observations"):
        to_returns(PriceTable(["d1"], ["A"], np.array([[1.0]])))


def test_round_trip_compounding(rng):
    p = np.cumprod(1 + rng.normal(0, 0.02, (50, 3)), axis=0) * 40
    pt = PriceTable([f"{i:04d}" for i in range(50)], ["A", "B", "C"], p)
    r = to_returns(pt).returns
    rebuilt = np.vstack([p[0], p[0] * np.cumprod(1 + r, axis=0)])
    assert np.max(np.abs(rebuilt / p - 1)) < 1e-12


def test_save_and_load(tmp_path, rng):
    p = 10 + rng.random((5, 2))
    pt = PriceTable([f"2020-01-0{i + 1}" for i in range(5)], ["X", "Y"], p)
    save_prices(pt, tmp_path / "out.csv")
    back = load_prices(tmp_path / "out.csv")
    assert back.tickers == ["X", "Y"] and np.array_equal(back.prices, p)


def test_scenario_matrix_uniform():
    sm = ScenarioMatrix(np.zeros((4, 2)))
    assert sm.scenario_prob.tolist() == [0.25] * 4
    with pytest.raises(DataError):
        ScenarioMatrix(np.array([[np.nan]]))


@pytest.mark.parametrize("T, count, last", [(3715, 161, 15), (501, 1, 1), (540, 2, 20)])
def test_window_counts(T, count, last):
    ws = rolling_windows(T, 500, 20)
    assert len(ws) == count and ws[-1].out_len == last
    assert ws[-1].out_end == T - 1


def test_window_tiling():
    ws = rolling_windows(3715, 500, 20)
    covered = np.concatenate([np.arange(w.out_start, w.out_end + 1) for w in ws])
    assert covered.tolist() == list(range(500, 3715))
    for a, b in zip(ws, ws[1:]):
        assert b.in_start - a.in_start == 20
    for w in ws:
        assert w.in_end - w.in_start + 1 == 500 and w.out_start == w.in_end + 1 and w.out_len <= 20


def test_no_out_of_sample():
    with pytest.raises(DataError, match="no out-of-sample data"):
        rolling_windows(500, 500, 20)
