#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "entrovol/eod_io.hpp"
#include "entrovol/errors.hpp"
#include "entrovol/panel.hpp"
#include "test_helpers.hpp"

using namespace entrovol;

TEST_CASE("parse maps fields directly") {
    auto result = parse_eod_records("AAA,2022-03-01,100,110,95,105,1000\n",
                                    EodFormat::LongFile);
    REQUIRE(result.errors.empty());
    REQUIRE(result.records.size() == 1);
    const auto& r = result.records[0];
    CHECK(r.symbol == "AAA");
    CHECK(r.date == Date(2022, 3, 1));
    CHECK(r.bar == OhlcvBar{100, 110, 95, 105, 1000});
}

TEST_CASE("bar invariant violations are row errors") {
    auto result = parse_eod_records("AAA,2022-03-01,100,90,95,105,1000\n",
                                    EodFormat::LongFile);
    CHECK(result.records.empty());
    REQUIRE(result.errors.size() == 1);
    CHECK(result.errors[0].line == 1);
    CHECK(result.errors[0].message.find("high") != std::string::npos);
}

TEST_CASE("malformed row keeps its line number, parsing continues") {
    const std::string text =
        "AAA,2022-03-01,100,110,95,105,1000\n"
        "BBB,2022-03-01,nope,110,95,105,1000\n"
        "CCC,2022-03-01,50,55,49,52,500\n";
    auto result = parse_eod_records(text, EodFormat::LongFile);
    CHECK(result.records.size() == 2);
    REQUIRE(result.errors.size() == 1);
    CHECK(result.errors[0].line == 2);
}

TEST_CASE("empty input parses to nothing") {
    auto result = parse_eod_records("", EodFormat::LongFile);
    CHECK(result.records.empty());
    CHECK(result.errors.empty());
}

TEST_CASE("header lines are skipped in both formats") {
    auto long_result = parse_eod_records(
        "symbol,date,open,high,low,close,volume\nAAA,2022-03-01,1,2,0.5,1.5,10\n",
        EodFormat::LongFile);
    CHECK(long_result.records.size() == 1);
    CHECK(long_result.errors.empty());

    auto day_result = parse_eod_records("symbol,open,high,low,close,volume\nAAA,1,2,0.5,1.5,10\n",
                                        EodFormat::PerDayFile, Date(2022, 3, 1));
    REQUIRE(day_result.records.size() == 1);
    CHECK(day_result.records[0].date == Date(2022, 3, 1));
}

TEST_CASE("per-day file names carry the date") {
    CHECK(date_from_per_day_filename("/data/NYSE_20220301.txt") == Date(2022, 3, 1));
    CHECK_THROWS_AS(date_from_per_day_filename("notes.txt"), DataError);
}

TEST_CASE("build_panel assembles a sparse panel with daily counts") {
    std::vector<EodRecord> records = {
        {"AAA", Date(2022, 3, 1), {1, 2, 0.5, 1.5, 10}},
        {"BBB", Date(2022, 3, 1), {1, 2, 0.5, 1.5, 10}},
        {"AAA", Date(2022, 3, 2), {1, 2, 0.5, 1.5, 10}},
        {"BBB", Date(2022, 3, 2), {1, 2, 0.5, 1.5, 10}},
        {"AAA", Date(2022, 3, 3), {1, 2, 0.5, 1.5, 10}},
    };
    const MarketPanel panel = build_panel(records);
    CHECK(panel.day_count() == 3);
    CHECK(panel.symbol_count() == 2);
    CHECK(panel.daily_count(0) == 2);
    CHECK(panel.daily_count(1) == 2);
    CHECK(panel.daily_count(2) == 1);
    CHECK(panel.sparsity() == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("empty record set builds an empty panel") {
    const MarketPanel panel = build_panel({});
    CHECK(panel.day_count() == 0);
    CHECK(panel.symbol_count() == 0);
}

TEST_CASE("identical duplicates merge, conflicting duplicates throw") {
    std::vector<EodRecord> same = {
        {"AAA", Date(2022, 3, 1), {1, 2, 0.5, 1.5, 10}},
        {"AAA", Date(2022, 3, 1), {1, 2, 0.5, 1.5, 10}},
    };
    CHECK(build_panel(same).bar_count() == 1);

    std::vector<EodRecord> conflict = {
        {"AAA", Date(2022, 3, 1), {1, 2, 0.5, 1.5, 10}},
        {"AAA", Date(2022, 3, 1), {1, 2, 0.5, 1.5, 11}},
    };
    CHECK_THROWS_WITH_AS(build_panel(conflict),
                         doctest::Contains("AAA"), DataError);
}

TEST_CASE("build_panel is order independent") {
    Xoshiro256pp rng(77);
    std::vector<EodRecord> records;
    for (int d = 0; d < 6; ++d)
        for (int s = 0; s < 5; ++s) {
            if (rng.uniform() < 0.3) continue;  // leave gaps
            records.push_back({"SYM" + std::to_string(s),
                               Date(2022, 3, static_cast<unsigned>(1 + d)),
                               testkit::random_bar(rng)});
        }
    const MarketPanel forward = build_panel(records);
    std::shuffle(records.begin(), records.end(), std::mt19937(123));
    const MarketPanel shuffled = build_panel(records);
    CHECK(forward == shuffled);
}

TEST_CASE("snapshot round trip reproduces the panel byte for byte") {
    Xoshiro256pp rng(5);
    std::vector<EodRecord> records;
    for (int d = 0; d < 4; ++d)
        for (int s = 0; s < 4; ++s)
            records.push_back({"S" + std::to_string(s),
                               Date(2021, 6, static_cast<unsigned>(7 + d)),
                               testkit::random_bar(rng)});
    const MarketPanel panel = build_panel(records);
    const std::string snapshot = snapshot_string(panel);
    const auto reparsed = parse_eod_records(snapshot, EodFormat::LongFile);
    REQUIRE(reparsed.errors.empty());
    const MarketPanel rebuilt = build_panel(reparsed.records);
    CHECK((panel == rebuilt));
    CHECK(snapshot_string(rebuilt) == snapshot);
}

TEST_CASE("slice snaps endpoints inward and validates subsets") {
    std::vector<EodRecord> records;
    // Tue Mar 1 .. Mon Mar 7 2022, weekdays only.
    for (unsigned d : {1u, 2u, 3u, 4u, 7u})
        records.push_back({"AAA", Date(2022, 3, d), {1, 2, 0.5, 1.5, 10}});
    const MarketPanel panel = build_panel(records);

    const PanelView full = slice(panel, Date(2022, 3, 1), Date(2022, 3, 7));
    CHECK(full.length() == 5);

    // Sat/Sun endpoints snap to Monday.
    const PanelView snapped = slice(panel, Date(2022, 3, 5), Date(2022, 3, 7));
    CHECK(snapped.length() == 1);
    CHECK(snapped.start_date() == Date(2022, 3, 7));

    CHECK_THROWS_AS(slice(panel, Date(2022, 3, 5), Date(2022, 3, 6)), DataError);
    CHECK_THROWS_WITH_AS(
        slice(panel, Date(2022, 3, 1), Date(2022, 3, 7),
              std::vector<std::string>{"ZZZ"}),
        doctest::Contains("ZZZ"), DataError);

    const PanelView restricted = slice(panel, Date(2022, 3, 1), Date(2022, 3, 7),
                                       std::vector<std::string>{"AAA"});
    REQUIRE(restricted.subset());
    CHECK(restricted.subset()->size() == 1);
}

TEST_CASE("eligibility requires presence with positive volume every day") {
    std::vector<EodRecord> records;
    for (unsigned d : {1u, 2u, 3u}) {
        records.push_back({"FULL", Date(2022, 3, d), {1, 2, 0.5, 1.5, 10}});
        if (d != 2)
            records.push_back({"GAP", Date(2022, 3, d), {1, 2, 0.5, 1.5, 10}});
        records.push_back(
            {"ZVOL", Date(2022, 3, d), {1, 2, 0.5, 1.5, d == 1 ? 0 : 10}});
    }
    const MarketPanel panel = build_panel(records);
    const PanelView view = slice(panel, Date(2022, 3, 1), Date(2022, 3, 3));
    const auto eligible = eligible_symbols(view);
    REQUIRE(eligible.size() == 1);
    CHECK(panel.symbols()[eligible[0]] == "FULL");
}

TEST_CASE("eligible symbols all have bars on the first view day") {
    Xoshiro256pp rng(11);
    std::vector<EodRecord> records;
    for (int d = 0; d < 5; ++d)
        for (int s = 0; s < 8; ++s) {
            if (rng.uniform() < 0.25) continue;
            records.push_back({"S" + std::to_string(s),
                               Date(2022, 4, static_cast<unsigned>(4 + d)),
                               testkit::random_bar(rng, true)});
        }
    const MarketPanel panel = build_panel(records);
    const PanelView view = slice(panel, panel.calendar()[0],
                                 panel.calendar()[panel.day_count() - 1]);
    for (auto sym : eligible_symbols(view))
        CHECK(panel.find(view.first_day(), sym).has_value());
}

TEST_CASE("daily_count matches per-day presence") {
    Xoshiro256pp rng(19);
    std::vector<EodRecord> records;
    for (int d = 0; d < 7; ++d)
        for (int s = 0; s < 6; ++s) {
            if (rng.uniform() < 0.4) continue;
            records.push_back({"S" + std::to_string(s),
                               Date(2022, 5, static_cast<unsigned>(2 + d)),
                               testkit::random_bar(rng)});
        }
    const MarketPanel panel = build_panel(records);
    for (std::size_t day = 0; day < panel.day_count(); ++day) {
        std::size_t present = 0;
        for (std::uint32_t sym = 0; sym < panel.symbol_count(); ++sym)
            if (panel.find(day, sym)) ++present;
        CHECK(panel.daily_count(day) == present);
    }
}
