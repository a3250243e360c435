"""Smoke tests for the python module, driven off the shipped demo spec."""

import math
import os
import pathlib

import pytest

import _entrovol as ev

SOURCE_DIR = pathlib.Path(os.environ.get("ENTROVOL_SOURCE_DIR", "."))


@pytest.fixture(scope="module")
def market():
    spec = (SOURCE_DIR / "fixtures" / "demo_spec.txt").read_text()
    panel = ev.generate_market(spec)
    return panel, ev.generate_index(panel)


def test_generate_market(market):
    panel, index = market
    assert panel.day_count == 780
    assert panel.symbol_count == 12
    assert panel.bar_count == 780 * 12
    assert panel.sparsity == 0.0
    assert "ALFA" in panel.symbols
    assert len(index) == 780


def test_snapshot_round_trip(market, tmp_path):
    panel, _ = market
    path = tmp_path / "snap.csv"
    path.write_text(ev.snapshot_csv(panel))
    again = ev.load_snapshot(str(path))
    assert ev.snapshot_csv(again) == ev.snapshot_csv(panel)


def test_csie_series(market):
    panel, _ = market
    series = ev.csie_series(panel, "2019-01-01", "2019-12-31")
    assert len(series) > 200
    date, value = series[0]
    assert date == "2019-01-02"
    assert math.isfinite(value)


def test_ie_series(market):
    panel, _ = market
    series = ev.ie_series(panel, "ALFA", "2019-01-01", "2019-12-31", window=10)
    full = ev.csie_series(panel, "2019-01-01", "2019-12-31")
    assert len(series) == len(full) - 9
    assert ev.weight_f(10) == pytest.approx(0.34 / (1.34 + 11.0 / 9.0))


def test_unknown_symbol_raises(market):
    panel, _ = market
    with pytest.raises(ValueError):
        ev.ie_series(panel, "NOPE", "2019-01-01", "2019-12-31")


def test_betas_and_screen(market):
    panel, index = market
    records = ev.betas(panel, index, "2019-01-01", "2019-12-31", window=10)
    assert records[0].subject == "INDEX"
    assert len(records) == 13  # index + 12 symbols

    report = ev.screen(panel, index, "2019-01-01", "2019-12-31", window=10)
    assert report.n_selected == len(report.members)
    for member in report.members:
        assert member.beta <= report.index_beta
        assert member.ror_pct >= report.index_ror_pct
    assert report.csv().startswith("# start=")
    assert report.scatter_svg().startswith("<svg")


def test_backtest_matches_golden(market):
    panel, index = market
    golden = (SOURCE_DIR / "fixtures" / "demo_backtest_golden.csv").read_text()
    csv = ev.backtest_csv(panel, index, [2019, 2020, 2021], window=10)
    assert csv == golden


def test_portfolio_variance(market):
    panel, _ = market
    var = ev.portfolio_variance(
        panel, ["ALFA", "BRVO"], [0.5, 0.5], "2019-01-01", "2019-12-31"
    )
    assert var >= 0.0
    with pytest.raises(ValueError):
        ev.portfolio_variance(
            panel, ["ALFA", "BRVO"], [0.9, 0.3], "2019-01-01", "2019-12-31"
        )
