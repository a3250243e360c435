#include "entrovol/eod_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "entrovol/errors.hpp"

namespace entrovol {

namespace {

// Splits one CSV line in place; returns false on wrong field count.
bool split_fields(std::string_view line, std::size_t want,
                  std::array<std::string_view, 7>& out) {
    std::size_t n = 0;
    std::size_t begin = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            if (n >= want) return false;
            out[n++] = line.substr(begin, i - begin);
            begin = i + 1;
        }
    }
    return n == want;
}

bool parse_price(std::string_view f, double& out) {
    auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), out);
    return ec == std::errc{} && p == f.data() + f.size();
}

bool parse_volume(std::string_view f, std::int64_t& out) {
    auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), out);
    return ec == std::errc{} && p == f.data() + f.size();
}

std::string format_price(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

}  // namespace

namespace {

// Per-line state shared by the in-memory and file-streaming entry
// points: header detection happens on the first fed line only.
struct LineParser {
    bool long_format;
    std::optional<Date> file_date;
    const RecordSink& sink;
    const ErrorSink& on_error;
    std::size_t line_no = 0;
    bool first_line = true;

    void feed(std::string_view line) {
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++line_no;
        if (line.empty()) return;

        const std::size_t n_fields = long_format ? 7 : 6;
        std::array<std::string_view, 7> f;
        if (!split_fields(line, n_fields, f)) {
            if (first_line) { first_line = false; return; }  // ragged header
            on_error({line_no, "wrong field count"});
            return;
        }

        // Header detection: the second field of a data row is a date
        // (long) or a price (per-day); anything unparseable on line 1 is
        // treated as a header.
        if (first_line) {
            first_line = false;
            if (long_format) {
                bool is_date = f[1].size() == 10 && f[1][4] == '-';
                if (!is_date) return;
            } else {
                double dummy;
                if (!parse_price(f[1], dummy)) return;
            }
        }

        const std::string_view symbol = f[0];
        Date date;
        std::size_t k = 1;
        if (long_format) {
            try {
                date = Date::parse_iso(std::string(f[1]));
            } catch (const std::exception& e) {
                on_error({line_no, e.what()});
                return;
            }
            k = 2;
        } else {
            date = *file_date;
        }

        OhlcvBar bar;
        if (!parse_price(f[k], bar.open) || !parse_price(f[k + 1], bar.high) ||
            !parse_price(f[k + 2], bar.low) || !parse_price(f[k + 3], bar.close) ||
            !parse_volume(f[k + 4], bar.volume)) {
            on_error({line_no, "unparseable numeric field"});
            return;
        }
        if (auto why = bar_violation(bar)) {
            on_error({line_no, *why});
            return;
        }
        if (symbol.empty()) {
            on_error({line_no, "empty symbol"});
            return;
        }
        sink(symbol, date, bar);
    }
};

}  // namespace

void parse_eod_stream(std::string_view text, EodFormat format,
                      std::optional<Date> file_date, const RecordSink& sink,
                      const ErrorSink& on_error) {
    const bool long_format = format == EodFormat::LongFile;
    if (!long_format && !file_date)
        throw DataError("per-day format requires a file date");

    LineParser parser{long_format, file_date, sink, on_error};
    std::size_t begin = 0;
    while (begin <= text.size()) {
        std::size_t end = text.find('\n', begin);
        if (end == std::string_view::npos) end = text.size();
        const bool last = end == text.size();
        parser.feed(text.substr(begin, end - begin));
        begin = end + 1;
        if (last) break;
    }
}

void parse_eod_file(const std::string& path, EodFormat format,
                    std::optional<Date> file_date, const RecordSink& sink,
                    const ErrorSink& on_error) {
    const bool long_format = format == EodFormat::LongFile;
    if (!long_format && !file_date)
        throw DataError("per-day format requires a file date");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");

    LineParser parser{long_format, file_date, sink, on_error};
    std::string line;
    while (std::getline(in, line)) parser.feed(line);
}

ParseResult parse_eod_records(std::string_view text, EodFormat format,
                              std::optional<Date> file_date) {
    ParseResult out;
    parse_eod_stream(
        text, format, file_date,
        [&](std::string_view symbol, Date date, const OhlcvBar& bar) {
            out.records.push_back({std::string(symbol), date, bar});
        },
        [&](const RowError& e) { out.errors.push_back(e); });
    return out;
}

Date date_from_per_day_filename(const std::string& path) {
    std::size_t slash = path.find_last_of("/\\");
    std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
    std::size_t dot = name.find_last_of('.');
    if (dot != std::string::npos) name = name.substr(0, dot);
    std::size_t us = name.find_last_of('_');
    if (us == std::string::npos || name.size() - us - 1 != 8)
        throw DataError("file name '" + path + "' does not match <MARKET>_YYYYMMDD");
    return Date::parse_compact(name.substr(us + 1));
}

void write_snapshot(const MarketPanel& panel, std::ostream& out) {
    out << "symbol,date,open,high,low,close,volume\n";
    std::string buf;
    for (std::size_t day = 0; day < panel.day_count(); ++day) {
        const std::string date = panel.calendar()[day].to_iso();
        const auto row = panel.day_row(day);
        for (std::size_t j = 0; j < row.size(); ++j) {
            buf.clear();
            buf += panel.symbols()[row.symbol_ids[j]];
            buf += ',';
            buf += date;
            buf += ',';
            buf += format_price(row.open[j]);
            buf += ',';
            buf += format_price(row.high[j]);
            buf += ',';
            buf += format_price(row.low[j]);
            buf += ',';
            buf += format_price(row.close[j]);
            buf += ',';
            buf += std::to_string(row.volume[j]);
            buf += '\n';
            out << buf;
        }
    }
}

std::string snapshot_string(const MarketPanel& panel) {
    std::ostringstream ss;
    write_snapshot(panel, ss);
    return ss.str();
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

MarketPanel read_snapshot(const std::string& path) {
    PanelBuilder builder;
    parse_eod_file(
        path, EodFormat::LongFile, std::nullopt,
        [&](std::string_view symbol, Date date, const OhlcvBar& bar) {
            builder.add(symbol, date, bar);
        },
        [&](const RowError& e) {
            throw DataError(path + ":" + std::to_string(e.line) + ": " + e.message);
        });
    return builder.build();
}

IndexSeries read_index_series(const std::string& path) {
    const std::string text = read_file(path);
    IndexSeries series;
    parse_eod_stream(
        text, EodFormat::LongFile, std::nullopt,
        [&](std::string_view symbol, Date date, const OhlcvBar& bar) {
            if (series.name.empty())
                series.name = std::string(symbol);
            else if (series.name != symbol)
                throw DataError(path + ": expected a single symbol, found '" +
                                std::string(symbol) + "' after '" + series.name + "'");
            series.dates.push_back(date);
            series.bars.push_back(bar);
        },
        [&](const RowError& e) {
            throw DataError(path + ":" + std::to_string(e.line) + ": " + e.message);
        });
    // Rows may arrive unsorted; order by date and reject duplicates.
    std::vector<std::size_t> order(series.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return series.dates[a] < series.dates[b];
    });
    IndexSeries sorted;
    sorted.name = series.name;
    sorted.dates.reserve(series.size());
    sorted.bars.reserve(series.size());
    for (auto i : order) {
        if (!sorted.dates.empty() && sorted.dates.back() == series.dates[i])
            throw DataError(path + ": duplicate date " + series.dates[i].to_iso());
        sorted.dates.push_back(series.dates[i]);
        sorted.bars.push_back(series.bars[i]);
    }
    return sorted;
}

}  // namespace entrovol
