#pragma once

#include <optional>
#include <string>
#include <vector>

#include "entrovol/beta.hpp"

namespace entrovol {

struct ScreenConfig {
    Date start;
    Date end;
    std::size_t window = 10;
    EntropyParams params;
    bool require_positive_beta = false;
    std::size_t top_k = 15;
    unsigned threads = 1;
};

struct SelectionSummary {
    double max_ror_pct = 0.0;
    double beta_of_max = 0.0;
    double min_ror_pct = 0.0;
    double beta_of_min = 0.0;
    double avg_ror_pct = 0.0;
};

// One screening run: benchmark stats, the selected members sorted by
// ascending beta, and the portfolio-level figures.
struct SelectionReport {
    ScreenConfig config;
    Date resolved_start;  // after snapping to trading days
    Date resolved_end;
    std::string index_name;
    double index_ror_pct = 0.0;
    double index_beta = 0.0;
    std::size_t n_selected = 0;       // under the base (<=, >=) predicate
    std::size_t n_positive_beta = 0;  // of those, with beta > 0
    std::vector<BetaRecord> members;  // the active constraint set
    std::optional<BetaRecord> portfolio;  // absent when |members| < 2
    std::optional<SelectionSummary> summary;  // absent when members empty
};

// Selects every eligible symbol whose beta is at most the index beta and
// whose return is at least the index return; with require_positive_beta
// the symbol beta must additionally be strictly positive. Members are
// sorted ascending by beta, ties by descending return then symbol.
SelectionReport screen(const ScreenConfig& config, const MarketPanel& panel,
                       const IndexSeries& index);

// First min(k, size) members; members are already in least-risky order.
std::vector<BetaRecord> top_k_least_risky(const SelectionReport& report, std::size_t k);

struct BacktestRow {
    int year = 0;
    std::optional<SelectionReport> report;  // absent when the year failed
    std::string error;                      // failure reason when absent
};

std::vector<BacktestRow> annual_backtest(const MarketPanel& panel, const IndexSeries& index,
                                         const std::vector<int>& years, std::size_t window,
                                         const EntropyParams& params,
                                         bool require_positive_beta, unsigned threads = 1);

// Report CSV: "# key=value" config echo lines, then member rows
// symbol,ror_pct,beta.
std::string selection_report_csv(const SelectionReport& report);

// Backtest CSV with the fixed header
// year,index_ror_pct,index_beta,n_selected,n_positive_beta,
// max_ror_pct,beta_of_max,min_ror_pct,beta_of_min,avg_ror_pct,set_beta.
// Empty summaries render as "-".
std::string backtest_csv(const std::vector<BacktestRow>& rows);

}  // namespace entrovol
