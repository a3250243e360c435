#include "entrovol/entropy.hpp"

#include <cmath>
#include <cstdio>
#include <thread>

#include "entrovol/accumulate.hpp"
#include "entrovol/errors.hpp"

namespace entrovol {

void validate(const EntropyParams& params) {
    if (!(params.alpha > 1.0) || !(params.alpha <= 1.5))
        throw DataError("alpha must lie in (1, 1.5]");
}

double weight_f(std::size_t m, const EntropyParams& params) {
    validate(params);
    if (m < 2) throw NumericError("entropy weight needs at least 2 members");
    const double md = static_cast<double>(m);
    return (params.alpha - 1.0) / (params.alpha + (md + 1.0) / (md - 1.0));
}

WeightVector traded_value_weights(std::span<const OhlcvBar> bars) {
    WeightVector w;
    KahanSum total;
    for (std::size_t j = 0; j < bars.size(); ++j) {
        const double lambda = bars[j].traded_value();
        if (lambda > 0.0) {
            w.member.push_back(j);
            w.psi.push_back(lambda);
            total.add(lambda);
        }
    }
    if (w.psi.empty())
        throw NumericError("all traded values are zero; weights undefined");
    const double inv = 1.0 / total.value();
    for (auto& p : w.psi) p *= inv;
    return w;
}

namespace {

// The two entropy components accumulated over the included (positive
// traded value) members of one cross section, plus the member count.
// bar_at(j) must return the j-th bar of the set; the layout behind it
// (panel columns or a plain bar vector) does not matter.
struct Components {
    double oc = 0.0;
    double olhc = 0.0;
    std::size_t members = 0;
};

template <class BarFn>
Components entropy_components(std::size_t n, BarFn&& bar_at) {
    KahanSum total;
    std::size_t members = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const OhlcvBar b = bar_at(j);
        const double lambda = b.traded_value();
        if (lambda > 0.0) {
            total.add(lambda);
            ++members;
        }
    }
    Components out;
    out.members = members;
    if (members == 0) return out;
    const double inv = 1.0 / total.value();
    KahanSum oc, olhc;
    for (std::size_t j = 0; j < n; ++j) {
        const OhlcvBar b = bar_at(j);
        const double lambda = b.traded_value();
        if (!(lambda > 0.0)) continue;
        const double psi = lambda * inv;
        const double psi_ln = psi * std::log(psi);
        oc.add((b.close / b.open - 1.0) * psi_ln);
        const double h_o = b.high / b.open - 1.0;
        const double h_c = b.high / b.close - 1.0;
        const double l_o = b.low / b.open - 1.0;
        const double l_c = b.low / b.close - 1.0;
        olhc.add((h_o * h_c + l_o * l_c) * psi_ln);
    }
    out.oc = -oc.value();
    out.olhc = -olhc.value();
    return out;
}

template <class BarFn>
double entropy_value(std::size_t n, BarFn&& bar_at, const EntropyParams& params) {
    const Components c = entropy_components(n, bar_at);
    if (c.members < 2)
        throw NumericError("cross section has fewer than 2 members with positive traded value");
    const double f = weight_f(c.members, params);
    return (1.0 - f) * c.oc + f * c.olhc;
}

double weighted_component(std::span<const OhlcvBar> bars, const WeightVector& w,
                          bool range_term) {
    KahanSum acc;
    for (std::size_t k = 0; k < w.size(); ++k) {
        const OhlcvBar& b = bars[w.member[k]];
        if (!(b.open > 0.0)) throw NumericError("zero open price");
        const double psi = w.psi[k];
        const double psi_ln = psi * std::log(psi);
        if (range_term) {
            const double h = (b.high / b.open - 1.0) * (b.high / b.close - 1.0);
            const double l = (b.low / b.open - 1.0) * (b.low / b.close - 1.0);
            acc.add((h + l) * psi_ln);
        } else {
            acc.add((b.close / b.open - 1.0) * psi_ln);
        }
    }
    return -acc.value();
}

}  // namespace

double csie_oc(std::span<const OhlcvBar> bars, const WeightVector& weights) {
    return weighted_component(bars, weights, false);
}

double csie_olhc(std::span<const OhlcvBar> bars, const WeightVector& weights) {
    return weighted_component(bars, weights, true);
}

double csie_day(std::span<const OhlcvBar> bars, const EntropyParams& params) {
    validate(params);
    return entropy_value(bars.size(), [&](std::size_t j) { return bars[j]; }, params);
}

double ie_window(std::span<const OhlcvBar> bars, const EntropyParams& params) {
    validate(params);
    return entropy_value(bars.size(), [&](std::size_t j) { return bars[j]; }, params);
}

namespace {

double csie_day_in_view(const PanelView& view, std::size_t day, const EntropyParams& params) {
    const auto row = view.panel().day_row(day);
    auto bar_of_row = [&](std::size_t j) -> OhlcvBar {
        return {row.open[j], row.high[j], row.low[j], row.close[j], row.volume[j]};
    };
    try {
        if (!view.subset())
            return entropy_value(row.size(), bar_of_row, params);
        // Portfolio mode: walk the sorted subset against the sorted row.
        const auto& subset = *view.subset();
        std::vector<OhlcvBar> bars;
        bars.reserve(subset.size());
        std::size_t j = 0;
        for (auto sym : subset) {
            while (j < row.size() && row.symbol_ids[j] < sym) ++j;
            if (j < row.size() && row.symbol_ids[j] == sym) bars.push_back(bar_of_row(j));
        }
        return entropy_value(bars.size(), [&](std::size_t k) { return bars[k]; }, params);
    } catch (const NumericError&) {
        throw NumericError("cross-sectional entropy undefined on " +
                           view.panel().calendar()[day].to_iso() +
                           ": fewer than 2 members with positive traded value");
    }
}

}  // namespace

EntropySeries csie_series(const PanelView& view, const EntropyParams& params,
                          unsigned threads) {
    validate(params);
    EntropySeries out;
    out.kind = SeriesKind::RawDaily;
    out.window = 1;
    const std::size_t t = view.length();
    out.day_index.resize(t);
    out.values.resize(t);
    for (std::size_t k = 0; k < t; ++k) out.day_index[k] = view.first_day() + k;

    auto run = [&](std::size_t lo, std::size_t hi, std::exception_ptr& err) {
        try {
            for (std::size_t k = lo; k < hi; ++k)
                out.values[k] = csie_day_in_view(view, view.first_day() + k, params);
        } catch (...) {
            err = std::current_exception();
        }
    };

    const unsigned n_workers =
        std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(t)));
    if (n_workers == 1) {
        std::exception_ptr err;
        run(0, t, err);
        if (err) std::rethrow_exception(err);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errs(n_workers);
        const std::size_t chunk = (t + n_workers - 1) / n_workers;
        for (unsigned w = 0; w < n_workers; ++w)
            pool.emplace_back(run, std::min<std::size_t>(w * chunk, t),
                              std::min<std::size_t>((w + 1) * chunk, t),
                              std::ref(errs[w]));
        for (auto& th : pool) th.join();
        for (auto& e : errs)
            if (e) std::rethrow_exception(e);
    }
    return out;
}

EntropySeries moving_average(const EntropySeries& series, std::size_t window) {
    if (window < 1) throw NumericError("window must be at least 1");
    if (window > series.size())
        throw NumericError("window exceeds series length");
    EntropySeries out;
    out.kind = SeriesKind::WindowAveraged;
    out.window = window;
    const std::size_t n = series.size() - window + 1;
    out.day_index.resize(n);
    out.values.resize(n);
    const double inv = 1.0 / static_cast<double>(window);
    for (std::size_t k = 0; k < n; ++k) {
        KahanSum acc;
        for (std::size_t i = 0; i < window; ++i) acc.add(series.values[k + i]);
        out.day_index[k] = series.day_index[k];
        out.values[k] = acc.value() * inv;
    }
    return out;
}

EntropySeries ie_series(std::span<const OhlcvBar> bars, const PanelView& view,
                        std::size_t window, const EntropyParams& params) {
    validate(params);
    if (window < 2) throw NumericError("rolling window must be at least 2 days");
    const std::size_t t = view.length();
    if (bars.size() != t) throw DataError("bar series does not cover the view");
    if (window > t) throw NumericError("window exceeds interval length");
    EntropySeries out;
    out.kind = SeriesKind::WindowAveraged;
    out.window = window;
    const std::size_t n = t - window + 1;
    out.day_index.resize(n);
    out.values.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.day_index[k] = view.first_day() + k;
        out.values[k] = ie_window(bars.subspan(k, window), params);
    }
    return out;
}

EntropySeries ie_series_symbol(const PanelView& view, std::uint32_t sym,
                               std::size_t window, const EntropyParams& params) {
    const auto& panel = view.panel();
    if (!symbol_eligible(view, sym))
        throw DataError("symbol '" + panel.symbols()[sym] +
                        "' is not traded on every day of the interval");
    const auto days = panel.symbol_days(sym);
    const auto pos = panel.symbol_positions(sym);
    auto it = std::lower_bound(days.begin(), days.end(),
                               static_cast<std::uint32_t>(view.first_day()));
    const std::size_t base = static_cast<std::size_t>(it - days.begin());
    std::vector<OhlcvBar> bars;
    bars.reserve(view.length());
    for (std::size_t k = 0; k < view.length(); ++k)
        bars.push_back(panel.bar_at(pos[base + k]));
    return ie_series(bars, view, window, params);
}

EntropySeries ie_series_index(const IndexSeries& index, const PanelView& view,
                              std::size_t window, const EntropyParams& params) {
    std::vector<OhlcvBar> bars;
    bars.reserve(view.length());
    std::size_t i = 0;
    for (std::size_t day = view.first_day(); day <= view.last_day(); ++day) {
        const Date d = view.panel().calendar()[day];
        while (i < index.size() && index.dates[i] < d) ++i;
        if (i >= index.size() || index.dates[i] != d)
            throw DataError("index '" + index.name + "' has no bar on " + d.to_iso());
        if (index.bars[i].volume <= 0)
            throw DataError("index '" + index.name + "' has zero volume on " + d.to_iso());
        bars.push_back(index.bars[i]);
    }
    return ie_series(bars, view, window, params);
}

std::string series_csv(const EntropySeries& series, const TradingCalendar& calendar) {
    std::string out = "date,value\n";
    char buf[64];
    for (std::size_t k = 0; k < series.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.9g", series.values[k]);
        out += calendar[series.day_index[k]].to_iso();
        out += ',';
        out += buf;
        out += '\n';
    }
    return out;
}

}  // namespace entrovol
