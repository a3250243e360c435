#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "entrovol/errors.hpp"
#include "entrovol/screener.hpp"
#include "entrovol/svg_plot.hpp"
#include "test_helpers.hpp"

using namespace entrovol;

namespace {

const EntropyParams kDefault{};

struct Market {
    MarketPanel panel;
    IndexSeries index;
};

Market make_market(std::uint64_t seed, std::size_t symbols, std::size_t days) {
    Xoshiro256pp rng(seed);
    const MarketSpec spec = testkit::random_market_spec(rng, symbols, days);
    MarketPanel panel = generate_market(spec);
    IndexSeries index = generate_index(panel);
    return {std::move(panel), std::move(index)};
}

ScreenConfig config_for(const Market& market, std::size_t window,
                        bool positive_beta = false) {
    ScreenConfig config;
    config.start = market.panel.calendar()[0];
    config.end = market.panel.calendar()[market.panel.day_count() - 1];
    config.window = window;
    config.require_positive_beta = positive_beta;
    return config;
}

// Brute force: the per-symbol predicate applied directly, one symbol at
// a time, independent of the screen plumbing.
std::set<std::string> brute_force_members(const Market& market, const ScreenConfig& config) {
    const PanelView view = slice(market.panel, config.start, config.end);
    const EntropySeries smoothed =
        market_smoothed_csie(view, config.window, config.params);
    const BetaRecord index_rec =
        index_beta(market.index, view, config.window, config.params, smoothed);
    std::set<std::string> members;
    for (std::uint32_t sym : eligible_symbols(view)) {
        const BetaRecord rec =
            symbol_beta(sym, view, config.window, config.params, smoothed);
        bool keep = rec.beta <= index_rec.beta && rec.ror_pct >= index_rec.ror_pct;
        if (config.require_positive_beta) keep = keep && rec.beta > 0.0;
        if (keep) members.insert(rec.subject);
    }
    return members;
}

std::set<std::string> member_names(const SelectionReport& report) {
    std::set<std::string> names;
    for (const auto& m : report.members) names.insert(m.subject);
    return names;
}

}  // namespace

TEST_CASE("screen equals the brute-force predicate filter") {
    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
        const Market market = make_market(seed, 10 + seed * 3, 60 + seed * 10);
        for (std::size_t w : {5, 10}) {
            const ScreenConfig config = config_for(market, w);
            const SelectionReport report = screen(config, market.panel, market.index);
            CHECK(member_names(report) == brute_force_members(market, config));
        }
    }
}

TEST_CASE("positive-beta refinement selects a subset") {
    const Market market = make_market(77, 20, 80);
    const ScreenConfig base = config_for(market, 5);
    ScreenConfig refined = base;
    refined.require_positive_beta = true;

    const auto all = member_names(screen(base, market.panel, market.index));
    const auto positive = member_names(screen(refined, market.panel, market.index));
    CHECK(std::includes(all.begin(), all.end(), positive.begin(), positive.end()));
}

TEST_CASE("members re-satisfy the predicate, non-members fail it") {
    const Market market = make_market(31, 15, 70);
    const ScreenConfig config = config_for(market, 5);
    const SelectionReport report = screen(config, market.panel, market.index);

    const PanelView view = slice(market.panel, config.start, config.end);
    const EntropySeries smoothed =
        market_smoothed_csie(view, config.window, config.params);
    const auto members = member_names(report);
    for (std::uint32_t sym : eligible_symbols(view)) {
        const BetaRecord rec =
            symbol_beta(sym, view, config.window, config.params, smoothed);
        const bool satisfies =
            rec.beta <= report.index_beta && rec.ror_pct >= report.index_ror_pct;
        CHECK(satisfies == (members.count(rec.subject) > 0));
    }
}

TEST_CASE("member ordering and summary consistency") {
    const Market market = make_market(55, 25, 90);
    const SelectionReport report =
        screen(config_for(market, 5), market.panel, market.index);
    for (std::size_t i = 1; i < report.members.size(); ++i)
        CHECK(report.members[i - 1].beta <= report.members[i].beta);
    if (report.summary) {
        double max_ror = report.members[0].ror_pct, min_ror = report.members[0].ror_pct;
        double sum = 0.0;
        for (const auto& m : report.members) {
            max_ror = std::max(max_ror, m.ror_pct);
            min_ror = std::min(min_ror, m.ror_pct);
            sum += m.ror_pct;
        }
        CHECK(report.summary->max_ror_pct == max_ror);
        CHECK(report.summary->min_ror_pct == min_ror);
        CHECK(report.summary->avg_ror_pct ==
              doctest::Approx(sum / static_cast<double>(report.members.size()))
                  .epsilon(1e-12));
    }
    CHECK(report.n_positive_beta <= report.n_selected);
}

TEST_CASE("screen is deterministic across thread counts") {
    const Market market = make_market(21, 18, 60);
    ScreenConfig config = config_for(market, 5);
    const std::string single = selection_report_csv(screen(config, market.panel, market.index));
    config.threads = 8;
    const std::string threaded =
        selection_report_csv(screen(config, market.panel, market.index));
    CHECK(single == threaded);
}

TEST_CASE("ties at the constraint boundary are included") {
    // Use one symbol's own bars as the benchmark index: that symbol ties
    // the index bit-for-bit on both beta and return, and the (<=, >=)
    // predicate must keep it.
    Market market = make_market(5, 6, 50);
    const std::uint32_t sym = *market.panel.symbol_id("S00");
    IndexSeries twin;
    twin.name = "TWIN";
    for (std::size_t day = 0; day < market.panel.day_count(); ++day) {
        twin.dates.push_back(market.panel.calendar()[day]);
        twin.bars.push_back(*market.panel.find(day, sym));
    }
    const SelectionReport report =
        screen(config_for(market, 5), market.panel, twin);
    CHECK(member_names(report).count("S00") == 1);
}

TEST_CASE("top k least risky") {
    const Market market = make_market(17, 30, 80);
    const SelectionReport report =
        screen(config_for(market, 5), market.panel, market.index);
    const auto top = top_k_least_risky(report, 3);
    CHECK(top.size() == std::min<std::size_t>(3, report.members.size()));
    const auto all = top_k_least_risky(report, 1000);
    CHECK(all.size() == report.members.size());
    CHECK_THROWS_AS(top_k_least_risky(report, 0), DataError);

    // Equal betas order by descending return.
    SelectionReport tied;
    BetaRecord a, b;
    a.subject = "AAA";
    a.beta = 0.5;
    a.ror_pct = 1.0;
    b.subject = "BBB";
    b.beta = 0.5;
    b.ror_pct = 2.0;
    tied.members = {b, a};  // already sorted by the screen's comparator
    CHECK(top_k_least_risky(tied, 1)[0].subject == "BBB");
}

TEST_CASE("annual backtest produces one row per year") {
    MarketSpec spec;
    spec.days = 500;  // roughly two calendar years of weekdays
    spec.seed = 404;
    spec.start = Date(2020, 1, 2);
    spec.factor_drift = 0.0004;
    spec.factor_vol = 0.012;
    for (int j = 0; j < 8; ++j) {
        Xoshiro256pp rng(static_cast<std::uint64_t>(j) + 1);
        spec.symbols.push_back({"S" + std::to_string(j),
                                (rng.uniform() - 0.5) * 0.004,
                                0.005 + rng.uniform() * 0.02, rng.uniform(),
                                5000.0 + rng.uniform() * 5000.0, 0.2});
    }
    const MarketPanel panel = generate_market(spec);
    const IndexSeries index = generate_index(panel);

    const auto rows = annual_backtest(panel, index, {2020, 2021, 2035}, 10, kDefault, false);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].report.has_value());
    CHECK(rows[1].report.has_value());
    CHECK_FALSE(rows[2].report.has_value());  // year not in the panel
    CHECK_FALSE(rows[2].error.empty());

    const std::string csv = backtest_csv(rows);
    CHECK(csv.rfind("year,index_ror_pct,index_beta,n_selected,n_positive_beta,"
                    "max_ror_pct,beta_of_max,min_ror_pct,beta_of_min,avg_ror_pct,"
                    "set_beta\n",
                    0) == 0);
    CHECK(csv.find("2035,-,-,-,-,-,-,-,-,-,-\n") != std::string::npos);

    // Summaries in the CSV match an independent recomputation from members.
    for (const auto& row : rows) {
        if (!row.report || row.report->members.empty()) continue;
        double max_ror = row.report->members[0].ror_pct;
        for (const auto& m : row.report->members) max_ror = std::max(max_ror, m.ror_pct);
        CHECK(row.report->summary->max_ror_pct == max_ror);
    }
}

TEST_CASE("zero-member years render dash cells") {
    SelectionReport empty;
    empty.index_ror_pct = 5.0;
    empty.index_beta = -0.01;
    empty.n_selected = 0;
    empty.n_positive_beta = 0;
    BacktestRow row;
    row.year = 2017;
    row.report = empty;
    const std::string csv = backtest_csv({row});
    CHECK(csv.find("2017,5.00,-0.01,0,0,-,-,-,-,-,-\n") != std::string::npos);
}

TEST_CASE("selection report CSV carries the config echo") {
    const Market market = make_market(9, 12, 60);
    const SelectionReport report =
        screen(config_for(market, 5), market.panel, market.index);
    const std::string csv = selection_report_csv(report);
    CHECK(csv.find("# index=INDEX\n") != std::string::npos);
    CHECK(csv.find("# window=5\n") != std::string::npos);
    CHECK(csv.find("symbol,ror_pct,beta\n") != std::string::npos);
}

TEST_CASE("scatter SVG contains reference lines and member points") {
    const Market market = make_market(13, 20, 70);
    const SelectionReport report =
        screen(config_for(market, 5), market.panel, market.index);
    const std::string svg = selection_scatter_svg(report, 15);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("stroke-dasharray") != std::string::npos);
    const std::size_t points = std::min<std::size_t>(15, report.members.size());
    std::size_t circles = 0, at = 0;
    while ((at = svg.find("<circle", at)) != std::string::npos) {
        ++circles;
        at += 7;
    }
    CHECK(circles == points);
}

TEST_CASE("interval shorter than window fails cleanly") {
    const Market market = make_market(3, 10, 30);
    ScreenConfig config = config_for(market, 5);
    config.end = market.panel.calendar()[3];
    CHECK_THROWS_AS(screen(config, market.panel, market.index), DataError);
    config = config_for(market, 1);
    CHECK_THROWS_AS(screen(config, market.panel, market.index), DataError);
}
