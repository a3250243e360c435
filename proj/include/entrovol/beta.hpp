#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "entrovol/entropy.hpp"

namespace entrovol {

// Result of one beta computation: who, their interval return, and their
// entropy beta relative to the market's smoothed cross-sectional series.
struct BetaRecord {
    std::string subject;
    double ror_pct = 0.0;
    double beta = 0.0;
    std::size_t window = 0;
    Date start;
    Date end;
};

double sample_cov(std::span<const double> a, std::span<const double> b);
double sample_var(std::span<const double> a);

// Cov(subject, market) / Var(market). Both series must share the view,
// window and length; a flat market series is an error.
double beta(const EntropySeries& subject, const EntropySeries& market);

// Close-to-close simple return over a view, in percent.
double rate_of_return(std::span<const OhlcvBar> bars);
double rate_of_return_symbol(const PanelView& view, std::uint32_t sym);
double rate_of_return_index(const IndexSeries& index, const PanelView& view);

// Market-wide smoothed CSIE: moving_average(csie_series(market mode), w).
// Computed once and shared across all beta calls for the interval.
EntropySeries market_smoothed_csie(const PanelView& view, std::size_t window,
                                   const EntropyParams& params, unsigned threads = 1);

BetaRecord index_beta(const IndexSeries& index, const PanelView& view, std::size_t window,
                      const EntropyParams& params, const EntropySeries& market_smoothed);

BetaRecord symbol_beta(std::uint32_t sym, const PanelView& view, std::size_t window,
                       const EntropyParams& params, const EntropySeries& market_smoothed);

BetaRecord portfolio_beta(const std::vector<std::uint32_t>& set, const PanelView& view,
                          std::size_t window, const EntropyParams& params,
                          const EntropySeries& market_smoothed);

// CSV emission: header subject,ror_pct,beta,window,start,end;
// ror to 2 decimals, beta to 6 significant digits.
std::string beta_records_csv(std::span<const BetaRecord> records);
std::string format_ror(double ror_pct);
std::string format_beta(double beta);

}  // namespace entrovol
