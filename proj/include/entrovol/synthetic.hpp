#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "entrovol/eod_io.hpp"
#include "entrovol/panel.hpp"

namespace entrovol {

// xoshiro256++ seeded through splitmix64. Spelled out here (not the
// platform engine) so identical specs regenerate byte-identical fixtures
// on every toolchain.
class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed);
    std::uint64_t next();
    double uniform();              // [0, 1) with 53 random bits
    double normal();               // standard normal, Marsaglia polar
    double bounded(double scale);  // uniform in (-scale, scale)

private:
    std::uint64_t s_[4];
    bool have_spare_ = false;
    double spare_ = 0.0;
};

struct SymbolSpec {
    std::string id;
    double drift = 0.0;       // mean log-return per day
    double volatility = 0.0;  // log-return standard deviation per day
    double loading = 0.0;     // weight of the common factor, in [0, 1]
    double volume_base = 10000.0;
    double volume_noise = 0.2;  // relative volume jitter, in [0, 1)
};

struct MarketSpec {
    std::vector<SymbolSpec> symbols;
    std::size_t days = 0;
    double factor_drift = 0.0;
    double factor_vol = 0.0;
    std::uint64_t seed = 0;
    Date start = Date(2020, 1, 1);  // calendar start; weekends skipped
};

void validate(const MarketSpec& spec);

// Factor-model OHLCV generator: each symbol's daily log-return blends a
// shared factor draw with an idiosyncratic draw by its loading, prices
// evolve multiplicatively from 100 with open = previous close.
MarketPanel generate_market(const MarketSpec& spec);

// Traded-value-weighted composite of the panel, normalized to close 100
// on the first day; volume is the summed member volume.
IndexSeries generate_index(const MarketPanel& panel, const std::string& name = "INDEX");

// Key-value spec file, one `key = value` per line, symbols as
// `symbol = ID drift=.. vol=.. loading=.. volume_base=.. volume_noise=..`.
MarketSpec parse_market_spec(const std::string& text);
std::string market_spec_string(const MarketSpec& spec);

}  // namespace entrovol
