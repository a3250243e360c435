#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "entrovol/beta.hpp"
#include "entrovol/errors.hpp"
#include "test_helpers.hpp"

using namespace entrovol;

namespace {

const EntropyParams kDefault{};

EntropySeries window_series(std::vector<double> values, std::size_t window = 5) {
    EntropySeries s;
    s.kind = SeriesKind::WindowAveraged;
    s.window = window;
    s.values = std::move(values);
    s.day_index.resize(s.values.size());
    for (std::size_t i = 0; i < s.day_index.size(); ++i) s.day_index[i] = i;
    return s;
}

}  // namespace

TEST_CASE("sample covariance hand values") {
    const std::vector<double> a = {1, 2, 3};
    const std::vector<double> down = {3, 2, 1};
    const std::vector<double> flat = {7, 7, 7};
    const std::vector<double> two = {1, 2};
    const std::vector<double> one = {1.0};
    CHECK(sample_cov(a, a) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sample_cov(a, down) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(sample_cov(a, flat) == 0.0);
    CHECK_THROWS_AS(sample_cov(a, two), NumericError);
    CHECK_THROWS_AS(sample_cov(one, one), NumericError);
}

TEST_CASE("beta basics") {
    const auto market = window_series({0.1, -0.2, 0.3, 0.05});
    CHECK(beta(market, market) == doctest::Approx(1.0).epsilon(1e-12));

    auto doubled = market;
    for (auto& v : doubled.values) v = 2.0 * v + 0.7;
    CHECK(beta(doubled, market) == doctest::Approx(2.0).epsilon(1e-12));

    CHECK(beta(window_series({0.4, 0.4, 0.4, 0.4}), market) == 0.0);

    const auto flat_market = window_series({0.2, 0.2, 0.2, 0.2});
    CHECK_THROWS_WITH_AS(beta(market, flat_market),
                         doctest::Contains("degenerate"), NumericError);

    auto mismatched = window_series({0.1, 0.2, 0.3});
    CHECK_THROWS_AS(beta(mismatched, market), NumericError);
    auto other_window = window_series({0.1, -0.2, 0.3, 0.05}, 7);
    CHECK_THROWS_AS(beta(other_window, market), NumericError);
}

TEST_CASE("beta affine and shift invariance on random series") {
    Xoshiro256pp rng(999);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 3 + static_cast<std::size_t>(rng.uniform() * 30);
        std::vector<double> m(n), s(n);
        for (std::size_t i = 0; i < n; ++i) {
            m[i] = rng.normal();
            s[i] = rng.normal();
        }
        const auto market = window_series(m);
        const auto subject = window_series(s);
        const double base = beta(subject, market);

        const double a = rng.uniform() * 4.0 - 2.0;
        const double c = rng.uniform() * 10.0 - 5.0;
        auto scaled = subject;
        for (auto& v : scaled.values) v = a * v + c;
        CHECK(beta(scaled, market) == doctest::Approx(a * base).epsilon(1e-9));

        auto shifted_market = market;
        for (auto& v : shifted_market.values) v += c;
        CHECK(beta(subject, shifted_market) == doctest::Approx(base).epsilon(1e-9));
    }
}

TEST_CASE("rate of return") {
    std::vector<OhlcvBar> path = {{100, 100, 100, 100, 1}, {110, 110, 100, 110, 1}};
    CHECK(rate_of_return(path) == doctest::Approx(10.0).epsilon(1e-12));

    std::vector<OhlcvBar> flat = {{100, 100, 100, 100, 1}, {100, 100, 100, 100, 1}};
    CHECK(rate_of_return(flat) == 0.0);

    std::vector<OhlcvBar> down = {{100, 100, 94, 100, 1}, {95, 95, 94, 94.23, 1}};
    CHECK(rate_of_return(down) == doctest::Approx(-5.77).epsilon(1e-3));

    // Unit-free: a power-of-two rescale of the closes leaves the return
    // bit-identical.
    Xoshiro256pp rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<OhlcvBar> bars = {testkit::random_bar(rng), testkit::random_bar(rng)};
        std::vector<OhlcvBar> scaled = bars;
        for (auto& b : scaled) {
            b.open *= 4.0;
            b.high *= 4.0;
            b.low *= 4.0;
            b.close *= 4.0;
        }
        CHECK(rate_of_return(scaled) == rate_of_return(bars));
    }
}

namespace {

struct Market {
    MarketPanel panel;
    IndexSeries index;
};

Market synthetic_market(std::uint64_t seed, std::size_t symbols = 6,
                        std::size_t days = 40) {
    Xoshiro256pp rng(seed);
    const MarketSpec spec = testkit::random_market_spec(rng, symbols, days);
    MarketPanel panel = generate_market(spec);
    IndexSeries index = generate_index(panel);
    return {std::move(panel), std::move(index)};
}

}  // namespace

TEST_CASE("index beta on synthetic data") {
    auto market = synthetic_market(8881);
    const PanelView view = slice(market.panel, market.panel.calendar()[0],
                                 market.panel.calendar()[market.panel.day_count() - 1]);
    const std::size_t w = 5;
    const EntropySeries smoothed = market_smoothed_csie(view, w, kDefault);

    const BetaRecord rec = index_beta(market.index, view, w, kDefault, smoothed);
    CHECK(std::isfinite(rec.beta));
    CHECK(std::isfinite(rec.ror_pct));
    CHECK(rec.window == w);

    // The index is built from the same panel, so it should co-move with
    // the market entropy rather than be degenerate.
    CHECK(rec.beta != 0.0);
}

TEST_CASE("flat index gives beta zero") {
    auto market = synthetic_market(777);
    const PanelView view = slice(market.panel, market.panel.calendar()[0],
                                 market.panel.calendar()[market.panel.day_count() - 1]);
    IndexSeries flat;
    flat.name = "FLAT";
    flat.dates = market.index.dates;
    flat.bars.assign(market.index.size(), {100, 100, 100, 100, 1000});
    const EntropySeries smoothed = market_smoothed_csie(view, 5, kDefault);
    CHECK(index_beta(flat, view, 5, kDefault, smoothed).beta == 0.0);
}

TEST_CASE("symbol beta matches an independent recomputation") {
    auto market = synthetic_market(4242);
    const PanelView view = slice(market.panel, market.panel.calendar()[0],
                                 market.panel.calendar()[market.panel.day_count() - 1]);
    const std::size_t w = 5;
    const EntropySeries smoothed = market_smoothed_csie(view, w, kDefault);

    for (std::uint32_t sym : eligible_symbols(view)) {
        const BetaRecord rec = symbol_beta(sym, view, w, kDefault, smoothed);

        // Oracle: naive per-day entropies, naive mean smoothing, naive
        // covariance ratio.
        std::vector<double> market_raw;
        for (std::size_t day = view.first_day(); day <= view.last_day(); ++day) {
            std::vector<OhlcvBar> bars;
            const auto row = market.panel.day_row(day);
            for (std::size_t j = 0; j < row.size(); ++j)
                bars.push_back({row.open[j], row.high[j], row.low[j], row.close[j],
                                row.volume[j]});
            market_raw.push_back(testkit::naive_csie_day(bars, kDefault.alpha));
        }
        std::vector<double> market_avg, subject_ie;
        for (std::size_t k = 0; k + w <= market_raw.size(); ++k) {
            double sum = 0.0;
            for (std::size_t i = 0; i < w; ++i) sum += market_raw[k + i];
            market_avg.push_back(sum / static_cast<double>(w));
            std::vector<OhlcvBar> window;
            for (std::size_t i = 0; i < w; ++i)
                window.push_back(*market.panel.find(view.first_day() + k + i, sym));
            subject_ie.push_back(testkit::naive_csie_day(window, kDefault.alpha));
        }
        const double want = testkit::naive_cov(subject_ie, market_avg) /
                            testkit::naive_cov(market_avg, market_avg);
        CHECK(rec.beta == doctest::Approx(want).epsilon(1e-9));
    }
}

TEST_CASE("portfolio beta over the whole market is one") {
    auto market = synthetic_market(1357);
    const PanelView view = slice(market.panel, market.panel.calendar()[0],
                                 market.panel.calendar()[market.panel.day_count() - 1]);
    const std::size_t w = 5;
    const EntropySeries smoothed = market_smoothed_csie(view, w, kDefault);
    std::vector<std::uint32_t> all;
    for (std::uint32_t s = 0; s < market.panel.symbol_count(); ++s) all.push_back(s);
    const BetaRecord rec = portfolio_beta(all, view, w, kDefault, smoothed);
    CHECK(rec.beta == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(portfolio_beta({0}, view, w, kDefault, smoothed), NumericError);
}

TEST_CASE("beta record CSV formatting") {
    BetaRecord rec;
    rec.subject = "AAA";
    rec.ror_pct = 12.3456;
    rec.beta = 0.123456789;
    rec.window = 10;
    rec.start = Date(2022, 3, 1);
    rec.end = Date(2022, 8, 26);
    CHECK(beta_records_csv(std::vector<BetaRecord>{rec}) ==
          "subject,ror_pct,beta,window,start,end\n"
          "AAA,12.35,0.123457,10,2022-03-01,2022-08-26\n");
}
