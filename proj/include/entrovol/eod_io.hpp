#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "entrovol/panel.hpp"

namespace entrovol {

// Two supported comma-separated layouts:
//   LongFile:   symbol,date,open,high,low,close,volume  (ISO dates)
//   PerDayFile: symbol,open,high,low,close,volume       (date from file name)
enum class EodFormat { LongFile, PerDayFile };

struct RowError {
    std::size_t line = 0;  // 1-based
    std::string message;
};

struct ParseResult {
    std::vector<EodRecord> records;
    std::vector<RowError> errors;
};

using RecordSink = std::function<void(std::string_view symbol, Date date, const OhlcvBar&)>;
using ErrorSink = std::function<void(const RowError&)>;

// Streaming parser; malformed rows go to on_error and parsing continues.
// An optional header line is detected from the second field. file_date is
// required for PerDayFile and ignored for LongFile.
void parse_eod_stream(std::string_view text, EodFormat format,
                      std::optional<Date> file_date, const RecordSink& sink,
                      const ErrorSink& on_error);

// Same contract, reading the file line by line; memory use stays flat
// regardless of file size.
void parse_eod_file(const std::string& path, EodFormat format,
                    std::optional<Date> file_date, const RecordSink& sink,
                    const ErrorSink& on_error);

ParseResult parse_eod_records(std::string_view text, EodFormat format,
                              std::optional<Date> file_date = std::nullopt);

// Date encoded in a per-day file name, pattern <MARKET>_YYYYMMDD.<ext>.
Date date_from_per_day_filename(const std::string& path);

// Canonical snapshot: long-file layout with header, sorted by (date,
// symbol), shortest round-trip numeric formatting. Byte-stable.
void write_snapshot(const MarketPanel& panel, std::ostream& out);
std::string snapshot_string(const MarketPanel& panel);

// Load a panel from a snapshot (or any long-format file); throws
// DataError when any row is malformed.
MarketPanel read_snapshot(const std::string& path);

// Ordered per-day OHLCV series for a single instrument (market index).
struct IndexSeries {
    std::string name;
    std::vector<Date> dates;
    std::vector<OhlcvBar> bars;
    std::size_t size() const { return dates.size(); }
};

// Reads a long-format file holding exactly one symbol.
IndexSeries read_index_series(const std::string& path);

}  // namespace entrovol
