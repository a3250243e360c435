"""Entropy-based market volatility analytics."""

from ._entrovol import (
    BetaRecord,
    DataError,
    IndexSeries,
    MarketPanel,
    NumericError,
    SelectionReport,
    backtest_csv,
    betas,
    csie_series,
    generate_index,
    generate_market,
    ie_series,
    load_index,
    load_snapshot,
    portfolio_variance,
    screen,
    snapshot_csv,
    weight_f,
)

__all__ = [
    "BetaRecord",
    "DataError",
    "IndexSeries",
    "MarketPanel",
    "NumericError",
    "SelectionReport",
    "backtest_csv",
    "betas",
    "csie_series",
    "generate_index",
    "generate_market",
    "ie_series",
    "load_index",
    "load_snapshot",
    "portfolio_variance",
    "screen",
    "snapshot_csv",
    "weight_f",
]
