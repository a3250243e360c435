#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "entrovol/eod_io.hpp"
#include "entrovol/panel.hpp"

namespace entrovol {

// Blend parameter between the open-close and open-low-high-close entropy
// components; 1.34 follows the drift-minimizing choice for OHLC
// estimators of this family.
struct EntropyParams {
    double alpha = 1.34;
};

void validate(const EntropyParams& params);  // requires 1 < alpha <= 1.5

// Per-member shares of one day's total traded value. Members with zero
// traded value are dropped before normalization, so every weight is
// strictly positive and the weights sum to 1.
struct WeightVector {
    std::vector<std::size_t> member;  // indices into the input set
    std::vector<double> psi;
    std::size_t size() const { return psi.size(); }
};

WeightVector traded_value_weights(std::span<const OhlcvBar> bars);

// (alpha - 1) / (alpha + (m + 1)/(m - 1)); requires m >= 2.
double weight_f(std::size_t m, const EntropyParams& params);

// Open-close entropy component: -sum (C/O - 1) psi ln psi. Signed.
double csie_oc(std::span<const OhlcvBar> bars, const WeightVector& weights);

// Range entropy component:
// -sum [(H/O - 1)(H/C - 1) + (L/O - 1)(L/C - 1)] psi ln psi.
// Non-negative for bars satisfying the OHLC ordering invariants.
double csie_olhc(std::span<const OhlcvBar> bars, const WeightVector& weights);

// One day's cross-sectional intrinsic entropy over a symbol set:
// (1 - f) H_oc + f H_olhc with f computed from the number of members
// that actually traded. Requires at least two such members.
double csie_day(std::span<const OhlcvBar> bars, const EntropyParams& params);

enum class SeriesKind { RawDaily, WindowAveraged };

// Daily entropy values aligned to a panel view. day_index[k] is the
// panel day the value describes; window-averaged values are indexed by
// the window's first day.
struct EntropySeries {
    SeriesKind kind = SeriesKind::RawDaily;
    std::size_t window = 1;
    std::vector<std::size_t> day_index;
    std::vector<double> values;
    std::size_t size() const { return values.size(); }
};

// Daily CSIE over a view. With a subset, membership is fixed to the
// subset and weights renormalize within it (portfolio mode); without
// one, each day uses whichever symbols traded that day (market mode).
EntropySeries csie_series(const PanelView& view, const EntropyParams& params,
                          unsigned threads = 1);

EntropySeries moving_average(const EntropySeries& series, std::size_t window);

// Longitudinal intrinsic entropy of one instrument over consecutive
// days: the cross-sectional construction transposed, days taking the
// role of symbols.
double ie_window(std::span<const OhlcvBar> bars, const EntropyParams& params);

// Rolling ie_window over a view; output aligns with moving_average of
// the same window (length t - w + 1, indexed by window start).
EntropySeries ie_series(std::span<const OhlcvBar> bars, const PanelView& view,
                        std::size_t window, const EntropyParams& params);

// ie_series for a panel symbol (must be eligible over the whole view).
EntropySeries ie_series_symbol(const PanelView& view, std::uint32_t sym,
                               std::size_t window, const EntropyParams& params);

// ie_series for an external index series covering the view's dates.
EntropySeries ie_series_index(const IndexSeries& index, const PanelView& view,
                              std::size_t window, const EntropyParams& params);

// CSV emission: header "date,value", ISO dates, 9 significant digits.
std::string series_csv(const EntropySeries& series, const TradingCalendar& calendar);

}  // namespace entrovol
