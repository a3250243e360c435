#include "entrovol/synthetic.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "entrovol/errors.hpp"

namespace entrovol {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Xoshiro256pp::Xoshiro256pp(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& s : s_) s = splitmix64(sm);
}

std::uint64_t Xoshiro256pp::next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Xoshiro256pp::uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Xoshiro256pp::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double mul = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * mul;
    have_spare_ = true;
    return u * mul;
}

double Xoshiro256pp::bounded(double scale) { return (2.0 * uniform() - 1.0) * scale; }

void validate(const MarketSpec& spec) {
    if (spec.days < 2) throw DataError("market spec needs at least 2 days");
    if (spec.symbols.size() < 2) throw DataError("market spec needs at least 2 symbols");
    for (const auto& s : spec.symbols) {
        if (s.id.empty()) throw DataError("symbol spec with empty id");
        if (s.volatility < 0.0) throw DataError("negative volatility for " + s.id);
        if (s.loading < 0.0 || s.loading > 1.0)
            throw DataError("loading outside [0, 1] for " + s.id);
        if (!(s.volume_base > 0.0)) throw DataError("non-positive volume base for " + s.id);
        if (s.volume_noise < 0.0 || s.volume_noise >= 1.0)
            throw DataError("volume noise outside [0, 1) for " + s.id);
    }
    if (spec.factor_vol < 0.0) throw DataError("negative factor volatility");
}

namespace {

bool is_weekend(Date d) {
    // 1970-01-01 was a Thursday; serial 2 is the first Saturday.
    const int dow = ((d.serial() % 7) + 7) % 7;
    return dow == 2 || dow == 3;
}

std::vector<Date> weekday_calendar(Date start, std::size_t days) {
    std::vector<Date> out;
    out.reserve(days);
    std::int32_t serial = start.serial();
    while (out.size() < days) {
        Date d(serial++);
        if (!is_weekend(d)) out.push_back(d);
    }
    return out;
}

}  // namespace

MarketPanel generate_market(const MarketSpec& spec) {
    validate(spec);
    const std::vector<Date> dates = weekday_calendar(spec.start, spec.days);

    Xoshiro256pp factor_rng(spec.seed);
    std::vector<double> factor(spec.days);
    for (std::size_t i = 0; i < spec.days; ++i)
        factor[i] = spec.factor_drift + spec.factor_vol * factor_rng.normal();

    PanelBuilder builder;
    for (std::size_t j = 0; j < spec.symbols.size(); ++j) {
        const SymbolSpec& sym = spec.symbols[j];
        // Per-symbol stream keyed off the spec seed, independent of
        // generation order.
        Xoshiro256pp rng(spec.seed ^ (0x517cc1b727220a95ULL * (j + 1)));
        double close = 100.0;
        for (std::size_t i = 0; i < spec.days; ++i) {
            const double idio = sym.drift + sym.volatility * rng.normal();
            const double log_ret = sym.loading * factor[i] + (1.0 - sym.loading) * idio;
            OhlcvBar bar;
            bar.open = close;
            close *= std::exp(log_ret);
            bar.close = close;
            const double range = std::abs(rng.bounded(0.5)) * sym.volatility * 4.0;
            const double wick = std::min(range, 0.99);
            bar.high = std::max(bar.open, bar.close) * (1.0 + wick);
            bar.low = std::min(bar.open, bar.close) * (1.0 - wick);
            const double vol =
                sym.volume_base * (1.0 + rng.bounded(sym.volume_noise));
            bar.volume = std::max<std::int64_t>(1, static_cast<std::int64_t>(vol));
            builder.add(sym.id, dates[i], bar);
        }
    }
    return builder.build();
}

IndexSeries generate_index(const MarketPanel& panel, const std::string& name) {
    if (panel.day_count() == 0) throw DataError("cannot build an index of an empty panel");
    IndexSeries index;
    index.name = name;
    index.dates.reserve(panel.day_count());
    index.bars.reserve(panel.day_count());
    double scale = 1.0;
    for (std::size_t day = 0; day < panel.day_count(); ++day) {
        const auto row = panel.day_row(day);
        double total = 0.0, open = 0.0, high = 0.0, low = 0.0, close = 0.0;
        std::int64_t volume = 0;
        for (std::size_t j = 0; j < row.size(); ++j) {
            const double lambda =
                row.close[j] * static_cast<double>(row.volume[j]);
            total += lambda;
            open += lambda * row.open[j];
            high += lambda * row.high[j];
            low += lambda * row.low[j];
            close += lambda * row.close[j];
            volume += row.volume[j];
        }
        if (!(total > 0.0))
            throw DataError("no traded value on " + panel.calendar()[day].to_iso());
        OhlcvBar bar{open / total, high / total, low / total, close / total, volume};
        if (day == 0) scale = 100.0 / bar.close;
        bar.open *= scale;
        bar.high *= scale;
        bar.low *= scale;
        bar.close *= scale;
        index.dates.push_back(panel.calendar()[day]);
        index.bars.push_back(bar);
    }
    return index;
}

namespace {

double parse_double_or_throw(std::string_view text, const std::string& context) {
    double v;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || p != text.data() + text.size())
        throw DataError("bad number '" + std::string(text) + "' in " + context);
    return v;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

SymbolSpec parse_symbol_line(std::string_view value) {
    SymbolSpec sym;
    std::istringstream tokens{std::string(value)};
    std::string tok;
    if (!(tokens >> tok)) throw DataError("symbol line without an id");
    sym.id = tok;
    while (tokens >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos)
            throw DataError("bad symbol attribute '" + tok + "'");
        const std::string key = tok.substr(0, eq);
        const double v = parse_double_or_throw(tok.substr(eq + 1), "symbol " + sym.id);
        if (key == "drift") sym.drift = v;
        else if (key == "vol") sym.volatility = v;
        else if (key == "loading") sym.loading = v;
        else if (key == "volume_base") sym.volume_base = v;
        else if (key == "volume_noise") sym.volume_noise = v;
        else throw DataError("unknown symbol attribute '" + key + "'");
    }
    return sym;
}

}  // namespace

MarketSpec parse_market_spec(const std::string& text) {
    MarketSpec spec;
    std::istringstream lines(text);
    std::string raw;
    while (std::getline(lines, raw)) {
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw DataError("spec line without '=': '" + std::string(line) + "'");
        const std::string key{trim(line.substr(0, eq))};
        const std::string_view value = trim(line.substr(eq + 1));
        if (key == "days") spec.days = static_cast<std::size_t>(
            parse_double_or_throw(value, key));
        else if (key == "seed") spec.seed = static_cast<std::uint64_t>(
            parse_double_or_throw(value, key));
        else if (key == "factor_drift") spec.factor_drift = parse_double_or_throw(value, key);
        else if (key == "factor_vol") spec.factor_vol = parse_double_or_throw(value, key);
        else if (key == "start") spec.start = Date::parse_iso(std::string(value));
        else if (key == "symbol") spec.symbols.push_back(parse_symbol_line(value));
        else throw DataError("unknown spec key '" + key + "'");
    }
    validate(spec);
    return spec;
}

std::string market_spec_string(const MarketSpec& spec) {
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    std::string out;
    out += "days = " + std::to_string(spec.days) + "\n";
    out += "seed = " + std::to_string(spec.seed) + "\n";
    out += "start = " + spec.start.to_iso() + "\n";
    out += "factor_drift = " + num(spec.factor_drift) + "\n";
    out += "factor_vol = " + num(spec.factor_vol) + "\n";
    for (const auto& s : spec.symbols) {
        out += "symbol = " + s.id + " drift=" + num(s.drift) + " vol=" + num(s.volatility) +
               " loading=" + num(s.loading) + " volume_base=" + num(s.volume_base) +
               " volume_noise=" + num(s.volume_noise) + "\n";
    }
    return out;
}

}  // namespace entrovol
