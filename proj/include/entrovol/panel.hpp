#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "entrovol/date.hpp"
#include "entrovol/ohlcv.hpp"

namespace entrovol {

// Strictly increasing sequence of trading days.
class TradingCalendar {
public:
    TradingCalendar() = default;
    explicit TradingCalendar(std::vector<Date> dates);

    std::size_t size() const { return dates_.size(); }
    bool empty() const { return dates_.empty(); }
    Date operator[](std::size_t i) const { return dates_[i]; }
    const std::vector<Date>& dates() const { return dates_; }

    std::optional<std::size_t> index_of(Date d) const;
    // First trading day >= d / last trading day <= d.
    std::optional<std::size_t> snap_forward(Date d) const;
    std::optional<std::size_t> snap_backward(Date d) const;

    bool operator==(const TradingCalendar&) const = default;

private:
    std::vector<Date> dates_;
};

// Sparse day x symbol container of OHLCV bars, immutable after build.
//
// Bars are stored column-wise (structure of arrays) sorted by
// (day, symbol), with per-day row offsets; a per-symbol index holds the
// positions of each symbol's bars in day order. This keeps a full
// 5000-symbol, 5600-day market (~28M bars) under 2 GB and makes both
// cross-sectional and longitudinal scans contiguous.
class MarketPanel {
public:
    friend class PanelBuilder;

    std::size_t day_count() const { return calendar_.size(); }
    std::size_t symbol_count() const { return symbols_.size(); }
    std::size_t bar_count() const { return open_.size(); }

    const TradingCalendar& calendar() const { return calendar_; }
    const std::vector<std::string>& symbols() const { return symbols_; }
    std::optional<std::uint32_t> symbol_id(std::string_view symbol) const;

    // Number of symbols with a bar on the given day.
    std::size_t daily_count(std::size_t day) const {
        return day_offsets_[day + 1] - day_offsets_[day];
    }

    // Fraction of empty cells in the day x symbol matrix.
    double sparsity() const;

    // Cross-sectional access: bars of one day, symbols ascending.
    struct DayRow {
        std::span<const std::uint32_t> symbol_ids;
        std::span<const double> open, high, low, close;
        std::span<const std::int64_t> volume;
        std::size_t size() const { return symbol_ids.size(); }
    };
    DayRow day_row(std::size_t day) const;

    // Longitudinal access: positions of one symbol's bars, days ascending.
    std::span<const std::uint32_t> symbol_days(std::uint32_t sym) const;
    std::span<const std::uint32_t> symbol_positions(std::uint32_t sym) const;

    OhlcvBar bar_at(std::size_t pos) const {
        return {open_[pos], high_[pos], low_[pos], close_[pos], volume_[pos]};
    }
    double close_at(std::size_t pos) const { return close_[pos]; }
    double traded_value_at(std::size_t pos) const {
        return close_[pos] * static_cast<double>(volume_[pos]);
    }

    std::optional<OhlcvBar> find(std::size_t day, std::uint32_t sym) const;

    bool operator==(const MarketPanel&) const = default;

private:
    TradingCalendar calendar_;
    std::vector<std::string> symbols_;

    // Global bar arrays sorted by (day, symbol).
    std::vector<double> open_, high_, low_, close_;
    std::vector<std::int64_t> volume_;
    std::vector<std::uint32_t> sym_;
    std::vector<std::size_t> day_offsets_;  // day_count + 1 entries

    // Per-symbol index into the global arrays.
    std::vector<std::size_t> sym_offsets_;  // symbol_count + 1 entries
    std::vector<std::uint32_t> sym_day_;
    std::vector<std::uint32_t> sym_pos_;
};

// Incremental panel construction with symbol/date interning; records may
// arrive in any order. An exact duplicate (same symbol, date, bar) is
// accepted once; a conflicting duplicate is an error at build().
class PanelBuilder {
public:
    void add(std::string_view symbol, Date date, const OhlcvBar& bar);
    std::size_t pending() const { return row_day_.size(); }
    MarketPanel build();

private:
    std::vector<std::string> names_;  // intern order (first seen)
    std::unordered_map<std::string, std::uint32_t> name_ids_;
    std::uint32_t intern_symbol(std::string_view symbol);

    std::vector<std::int32_t> row_day_;  // date serials
    std::vector<std::uint32_t> row_sym_;  // intern-order ids
    std::vector<double> open_, high_, low_, close_;
    std::vector<std::int64_t> volume_;
};

MarketPanel build_panel(const std::vector<EodRecord>& records);

// Day-range (and optionally symbol-subset) window into a panel.
class PanelView {
public:
    PanelView(const MarketPanel& panel, std::size_t first_day, std::size_t last_day,
              std::optional<std::vector<std::uint32_t>> subset = std::nullopt);

    const MarketPanel& panel() const { return *panel_; }
    std::size_t first_day() const { return first_day_; }
    std::size_t last_day() const { return last_day_; }
    std::size_t length() const { return last_day_ - first_day_ + 1; }
    Date start_date() const { return panel_->calendar()[first_day_]; }
    Date end_date() const { return panel_->calendar()[last_day_]; }
    const std::optional<std::vector<std::uint32_t>>& subset() const { return subset_; }

    bool contains_symbol(std::uint32_t sym) const;

private:
    const MarketPanel* panel_;
    std::size_t first_day_;
    std::size_t last_day_;
    std::optional<std::vector<std::uint32_t>> subset_;  // sorted ids
};

// Snap endpoints inward to trading days; errors when the range covers no
// trading day or a subset symbol is unknown.
PanelView slice(const MarketPanel& panel, Date start, Date end,
                const std::optional<std::vector<std::string>>& subset = std::nullopt);

// Symbols holding a positive-volume bar on every day of the view.
std::vector<std::uint32_t> eligible_symbols(const PanelView& view);

// True when the symbol has a positive-volume bar on every day of the view.
bool symbol_eligible(const PanelView& view, std::uint32_t sym);

}  // namespace entrovol
