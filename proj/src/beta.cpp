#include "entrovol/beta.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "entrovol/accumulate.hpp"
#include "entrovol/errors.hpp"

namespace entrovol {

double sample_cov(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw NumericError("covariance needs equal-length series");
    const std::size_t n = a.size();
    if (n < 2) throw NumericError("covariance needs at least 2 observations");
    KahanSum ma, mb;
    for (std::size_t i = 0; i < n; ++i) {
        ma.add(a[i]);
        mb.add(b[i]);
    }
    const double mean_a = ma.value() / static_cast<double>(n);
    const double mean_b = mb.value() / static_cast<double>(n);
    KahanSum acc;
    for (std::size_t i = 0; i < n; ++i)
        acc.add((a[i] - mean_a) * (b[i] - mean_b));
    return acc.value() / static_cast<double>(n - 1);
}

double sample_var(std::span<const double> a) { return sample_cov(a, a); }

double beta(const EntropySeries& subject, const EntropySeries& market) {
    if (subject.kind != SeriesKind::WindowAveraged ||
        market.kind != SeriesKind::WindowAveraged)
        throw NumericError("beta requires window-averaged series");
    if (subject.window != market.window)
        throw NumericError("beta requires matching windows");
    if (subject.size() != market.size())
        throw NumericError("beta requires equal-length series");
    const double var = sample_var(market.values);
    if (var == 0.0) throw NumericError("degenerate market series: zero variance");
    return sample_cov(subject.values, market.values) / var;
}

double rate_of_return(std::span<const OhlcvBar> bars) {
    if (bars.empty()) throw DataError("rate of return needs at least one bar");
    const double first = bars.front().close;
    const double last = bars.back().close;
    return (last / first - 1.0) * 100.0;
}

double rate_of_return_symbol(const PanelView& view, std::uint32_t sym) {
    const auto& panel = view.panel();
    const auto first = panel.find(view.first_day(), sym);
    const auto last = panel.find(view.last_day(), sym);
    if (!first || !last)
        throw DataError("symbol '" + panel.symbols()[sym] +
                        "' missing a bar at an interval endpoint");
    return (last->close / first->close - 1.0) * 100.0;
}

double rate_of_return_index(const IndexSeries& index, const PanelView& view) {
    auto close_on = [&](Date d) {
        auto it = std::lower_bound(index.dates.begin(), index.dates.end(), d);
        if (it == index.dates.end() || *it != d)
            throw DataError("index '" + index.name + "' has no bar on " + d.to_iso());
        return index.bars[static_cast<std::size_t>(it - index.dates.begin())].close;
    };
    return (close_on(view.end_date()) / close_on(view.start_date()) - 1.0) * 100.0;
}

EntropySeries market_smoothed_csie(const PanelView& view, std::size_t window,
                                   const EntropyParams& params, unsigned threads) {
    PanelView market_view(view.panel(), view.first_day(), view.last_day());
    return moving_average(csie_series(market_view, params, threads), window);
}

BetaRecord index_beta(const IndexSeries& index, const PanelView& view, std::size_t window,
                      const EntropyParams& params, const EntropySeries& market_smoothed) {
    BetaRecord rec;
    rec.subject = index.name;
    rec.window = window;
    rec.start = view.start_date();
    rec.end = view.end_date();
    rec.beta = beta(ie_series_index(index, view, window, params), market_smoothed);
    rec.ror_pct = rate_of_return_index(index, view);
    return rec;
}

BetaRecord symbol_beta(std::uint32_t sym, const PanelView& view, std::size_t window,
                       const EntropyParams& params, const EntropySeries& market_smoothed) {
    BetaRecord rec;
    rec.subject = view.panel().symbols()[sym];
    rec.window = window;
    rec.start = view.start_date();
    rec.end = view.end_date();
    rec.beta = beta(ie_series_symbol(view, sym, window, params), market_smoothed);
    rec.ror_pct = rate_of_return_symbol(view, sym);
    return rec;
}

BetaRecord portfolio_beta(const std::vector<std::uint32_t>& set, const PanelView& view,
                          std::size_t window, const EntropyParams& params,
                          const EntropySeries& market_smoothed) {
    if (set.size() < 2)
        throw NumericError("portfolio entropy needs at least 2 constituents");
    PanelView portfolio_view(view.panel(), view.first_day(), view.last_day(),
                             std::vector<std::uint32_t>(set));
    const EntropySeries smoothed =
        moving_average(csie_series(portfolio_view, params), window);
    BetaRecord rec;
    rec.subject = "portfolio";
    rec.window = window;
    rec.start = view.start_date();
    rec.end = view.end_date();
    rec.beta = beta(smoothed, market_smoothed);
    // Equal weights, buy and hold: the portfolio return is the mean of
    // the constituents' returns.
    KahanSum acc;
    for (auto sym : set) acc.add(rate_of_return_symbol(view, sym));
    rec.ror_pct = acc.value() / static_cast<double>(set.size());
    return rec;
}

std::string format_ror(double ror_pct) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", ror_pct);
    return buf;
}

std::string format_beta(double b) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", b);
    return buf;
}

std::string beta_records_csv(std::span<const BetaRecord> records) {
    std::string out = "subject,ror_pct,beta,window,start,end\n";
    for (const auto& r : records) {
        out += r.subject;
        out += ',';
        out += format_ror(r.ror_pct);
        out += ',';
        out += format_beta(r.beta);
        out += ',';
        out += std::to_string(r.window);
        out += ',';
        out += r.start.to_iso();
        out += ',';
        out += r.end.to_iso();
        out += '\n';
    }
    return out;
}

}  // namespace entrovol
