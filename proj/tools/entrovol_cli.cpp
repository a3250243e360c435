// entrovol: entropy-based market volatility analytics over end-of-day
// OHLCV panels. Subcommands cover ingestion, cross-sectional and
// longitudinal entropy series, beta computation, symbol screening,
// annual backtests, synthetic fixture generation and plot emission.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "entrovol/beta.hpp"
#include "entrovol/entropy.hpp"
#include "entrovol/eod_io.hpp"
#include "entrovol/errors.hpp"
#include "entrovol/manifest.hpp"
#include "entrovol/parallel.hpp"
#include "entrovol/screener.hpp"
#include "entrovol/svg_plot.hpp"
#include "entrovol/synthetic.hpp"

namespace fs = std::filesystem;
using namespace entrovol;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

struct CommonOpts {
    std::string start;
    std::string end;
    std::size_t window = 10;
    double alpha = 1.34;
    unsigned threads = 1;
};

void add_interval_flags(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--start", opts.start, "Interval start, ISO date")->required();
    cmd->add_option("--end", opts.end, "Interval end, ISO date")->required();
    cmd->add_option("--window", opts.window, "Rolling window length in days")
        ->default_val(10);
    cmd->add_option("--alpha", opts.alpha, "Entropy blend parameter")->default_val(1.34);
    cmd->add_option("--threads", opts.threads, "Worker thread cap")->default_val(1);
}

void write_text(const std::string& path, const std::string& text) {
    if (auto dir = fs::path(path).parent_path(); !dir.empty())
        fs::create_directories(dir);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << text;
}

RunManifest make_manifest(const std::string& command,
                          std::map<std::string, std::string> config,
                          const std::vector<std::string>& inputs) {
    RunManifest m;
    m.command = command;
    m.config = std::move(config);
    for (const auto& p : inputs) m.input_digests[p] = file_digest_hex(p);
    m.timestamp = utc_timestamp_now();
    return m;
}

std::vector<int> parse_years(const std::string& text) {
    std::vector<int> years;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        const auto dash = part.find('-');
        if (dash == std::string::npos) {
            years.push_back(std::stoi(part));
        } else {
            const int lo = std::stoi(part.substr(0, dash));
            const int hi = std::stoi(part.substr(dash + 1));
            if (hi < lo) throw DataError("bad year range '" + part + "'");
            for (int y = lo; y <= hi; ++y) years.push_back(y);
        }
    }
    if (years.empty()) throw DataError("no years given");
    return years;
}

int run_ingest(const std::vector<std::string>& inputs, const std::string& format,
               const std::string& output) {
    std::vector<std::string> files;
    for (const auto& in : inputs) {
        if (fs::is_directory(in)) {
            for (const auto& entry : fs::directory_iterator(in))
                if (entry.is_regular_file()) files.push_back(entry.path().string());
        } else {
            files.push_back(in);
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw DataError("no input files");

    PanelBuilder builder;
    bool any_whole_file_failed = false;
    std::size_t total_rows = 0, total_errors = 0;
    for (const auto& path : files) {
        EodFormat fmt = EodFormat::LongFile;
        std::optional<Date> file_date;
        if (format == "perday" || (format == "auto" && [&] {
                try {
                    date_from_per_day_filename(path);
                    return true;
                } catch (const DataError&) {
                    return false;
                }
            }())) {
            fmt = EodFormat::PerDayFile;
            file_date = date_from_per_day_filename(path);
        }

        std::size_t rows = 0, errors = 0;
        try {
            parse_eod_file(
                path, fmt, file_date,
                [&](std::string_view symbol, Date date, const OhlcvBar& bar) {
                    builder.add(symbol, date, bar);
                    ++rows;
                },
                [&](const RowError& e) {
                    std::cerr << path << ":" << e.line << ": " << e.message << "\n";
                    ++errors;
                });
        } catch (const DataError& e) {
            std::cerr << e.what() << "\n";
            any_whole_file_failed = true;
            continue;
        }
        total_rows += rows;
        total_errors += errors;
        if (rows == 0 && errors > 0) any_whole_file_failed = true;
    }
    if (builder.pending() == 0) throw DataError("no valid rows in any input file");

    auto manifest = make_manifest(
        "ingest", {{"format", format}, {"output", output}}, files);
    const MarketPanel panel = builder.build();
    {
        if (auto dir = fs::path(output).parent_path(); !dir.empty())
            fs::create_directories(dir);
        std::ofstream out(output, std::ios::binary);
        if (!out) throw DataError("cannot write '" + output + "'");
        write_snapshot(panel, out);
    }
    write_manifest(manifest, output);
    std::cout << "days=" << panel.day_count() << " symbols=" << panel.symbol_count()
              << " bars=" << panel.bar_count() << " sparsity="
              << format_ror(panel.sparsity() * 100.0) << "%"
              << " rows=" << total_rows << " row_errors=" << total_errors << "\n";
    return any_whole_file_failed ? kExitData : 0;
}

void run_csie(const std::string& input, const CommonOpts& opts,
              const std::vector<std::string>& subset, const std::string& output) {
    const MarketPanel panel = read_snapshot(input);
    std::optional<std::vector<std::string>> names;
    if (!subset.empty()) names = subset;
    const PanelView view =
        slice(panel, Date::parse_iso(opts.start), Date::parse_iso(opts.end), names);
    const EntropyParams params{opts.alpha};
    const EntropySeries raw = csie_series(view, params, opts.threads);
    const EntropySeries smoothed = moving_average(raw, opts.window);

    // Combined emission: raw value per day, smoothed value on rows that
    // start a full window.
    std::string csv = "date,csie,csie_w" + std::to_string(opts.window) + "\n";
    char buf[64];
    for (std::size_t k = 0; k < raw.size(); ++k) {
        csv += panel.calendar()[raw.day_index[k]].to_iso();
        std::snprintf(buf, sizeof buf, "%.9g", raw.values[k]);
        csv += ',';
        csv += buf;
        csv += ',';
        if (k < smoothed.size()) {
            std::snprintf(buf, sizeof buf, "%.9g", smoothed.values[k]);
            csv += buf;
        }
        csv += '\n';
    }
    write_text(output, csv);
    write_manifest(make_manifest("csie",
                                 {{"input", input},
                                  {"start", opts.start},
                                  {"end", opts.end},
                                  {"window", std::to_string(opts.window)},
                                  {"alpha", format_beta(opts.alpha)},
                                  {"subset", subset.empty() ? "" : CLI::detail::join(subset)},
                                  {"threads", std::to_string(opts.threads)},
                                  {"output", output}},
                                 {input}),
                   output);
}

void run_ie(const std::string& input, const std::string& symbol,
            const std::string& index_path, const CommonOpts& opts,
            const std::string& output) {
    const MarketPanel panel = read_snapshot(input);
    const PanelView view =
        slice(panel, Date::parse_iso(opts.start), Date::parse_iso(opts.end));
    const EntropyParams params{opts.alpha};
    EntropySeries series;
    if (!symbol.empty()) {
        const auto sym = panel.symbol_id(symbol);
        if (!sym) throw DataError("unknown symbol '" + symbol + "'");
        series = ie_series_symbol(view, *sym, opts.window, params);
    } else if (!index_path.empty()) {
        series = ie_series_index(read_index_series(index_path), view, opts.window, params);
    } else {
        throw DataError("ie needs --symbol or --index");
    }
    write_text(output, series_csv(series, panel.calendar()));
    std::vector<std::string> inputs{input};
    if (!index_path.empty()) inputs.push_back(index_path);
    write_manifest(make_manifest("ie",
                                 {{"input", input},
                                  {"symbol", symbol},
                                  {"index", index_path},
                                  {"start", opts.start},
                                  {"end", opts.end},
                                  {"window", std::to_string(opts.window)},
                                  {"alpha", format_beta(opts.alpha)},
                                  {"output", output}},
                                 inputs),
                   output);
}

void run_betas(const std::string& input, const std::string& index_path,
               const CommonOpts& opts, const std::string& output) {
    const MarketPanel panel = read_snapshot(input);
    const IndexSeries index = read_index_series(index_path);
    const PanelView view =
        slice(panel, Date::parse_iso(opts.start), Date::parse_iso(opts.end));
    const EntropyParams params{opts.alpha};
    const EntropySeries market =
        market_smoothed_csie(view, opts.window, params, opts.threads);

    std::vector<BetaRecord> records;
    records.push_back(index_beta(index, view, opts.window, params, market));
    const auto symbols = eligible_symbols(view);
    std::vector<BetaRecord> symbol_records(symbols.size());
    parallel_for(symbols.size(), opts.threads, [&](std::size_t i) {
        symbol_records[i] = symbol_beta(symbols[i], view, opts.window, params, market);
    });
    records.insert(records.end(), symbol_records.begin(), symbol_records.end());
    write_text(output, beta_records_csv(records));
    write_manifest(make_manifest("betas",
                                 {{"input", input},
                                  {"index", index_path},
                                  {"start", opts.start},
                                  {"end", opts.end},
                                  {"window", std::to_string(opts.window)},
                                  {"alpha", format_beta(opts.alpha)},
                                  {"threads", std::to_string(opts.threads)},
                                  {"output", output}},
                                 {input, index_path}),
                   output);
}

void run_screen(const std::string& input, const std::string& index_path,
                const CommonOpts& opts, bool positive_beta, std::size_t top_k,
                const std::string& output_dir) {
    const MarketPanel panel = read_snapshot(input);
    const IndexSeries index = read_index_series(index_path);
    ScreenConfig config;
    config.start = Date::parse_iso(opts.start);
    config.end = Date::parse_iso(opts.end);
    config.window = opts.window;
    config.params.alpha = opts.alpha;
    config.require_positive_beta = positive_beta;
    config.top_k = top_k;
    config.threads = opts.threads;
    const SelectionReport report = screen(config, panel, index);

    fs::create_directories(output_dir);
    const std::string report_path = (fs::path(output_dir) / "report.csv").string();
    const std::string svg_path = (fs::path(output_dir) / "scatter.svg").string();
    write_text(report_path, selection_report_csv(report));
    write_text(svg_path, selection_scatter_svg(report, top_k));
    write_manifest(make_manifest("screen",
                                 {{"input", input},
                                  {"index", index_path},
                                  {"start", opts.start},
                                  {"end", opts.end},
                                  {"window", std::to_string(opts.window)},
                                  {"alpha", format_beta(opts.alpha)},
                                  {"positive_beta", positive_beta ? "true" : "false"},
                                  {"top_k", std::to_string(top_k)},
                                  {"threads", std::to_string(opts.threads)},
                                  {"output", output_dir}},
                                 {input, index_path}),
                   report_path);
    std::cout << "selected=" << report.n_selected
              << " positive_beta=" << report.n_positive_beta << "\n";
}

void run_backtest(const std::string& input, const std::string& index_path,
                  const std::string& years_text, std::size_t window, double alpha,
                  bool positive_beta, unsigned threads, bool verbose_members,
                  const std::string& output) {
    const MarketPanel panel = read_snapshot(input);
    const IndexSeries index = read_index_series(index_path);
    const std::vector<int> years = parse_years(years_text);
    const EntropyParams params{alpha};
    const auto rows =
        annual_backtest(panel, index, years, window, params, positive_beta, threads);
    write_text(output, backtest_csv(rows));
    if (verbose_members) {
        for (const auto& row : rows) {
            if (!row.report) continue;
            const std::string member_path =
                (fs::path(output).parent_path() /
                 ("members_" + std::to_string(row.year) + ".csv"))
                    .string();
            write_text(member_path, selection_report_csv(*row.report));
        }
    }
    for (const auto& row : rows)
        if (!row.report)
            std::cerr << "year " << row.year << ": " << row.error << "\n";
    write_manifest(make_manifest("backtest",
                                 {{"input", input},
                                  {"index", index_path},
                                  {"years", years_text},
                                  {"window", std::to_string(window)},
                                  {"alpha", format_beta(alpha)},
                                  {"positive_beta", positive_beta ? "true" : "false"},
                                  {"threads", std::to_string(threads)},
                                  {"verbose_members", verbose_members ? "true" : "false"},
                                  {"output", output}},
                                 {input, index_path}),
                   output);
}

void run_generate(const std::string& spec_path, const std::string& snapshot_path,
                  const std::string& index_path) {
    std::ifstream in(spec_path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + spec_path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    const MarketSpec spec = parse_market_spec(ss.str());
    const MarketPanel panel = generate_market(spec);
    {
        if (auto dir = fs::path(snapshot_path).parent_path(); !dir.empty())
            fs::create_directories(dir);
        std::ofstream out(snapshot_path, std::ios::binary);
        if (!out) throw DataError("cannot write '" + snapshot_path + "'");
        write_snapshot(panel, out);
    }
    const IndexSeries index = generate_index(panel);
    std::string csv = "symbol,date,open,high,low,close,volume\n";
    char buf[64];
    for (std::size_t i = 0; i < index.size(); ++i) {
        const OhlcvBar& b = index.bars[i];
        csv += index.name + "," + index.dates[i].to_iso();
        for (double v : {b.open, b.high, b.low, b.close}) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            csv += ',';
            csv += buf;
        }
        csv += ',' + std::to_string(b.volume) + '\n';
    }
    write_text(index_path, csv);
    write_manifest(make_manifest("generate",
                                 {{"spec", spec_path},
                                  {"snapshot", snapshot_path},
                                  {"index", index_path}},
                                 {spec_path}),
                   snapshot_path);
    std::cout << "days=" << panel.day_count() << " symbols=" << panel.symbol_count()
              << "\n";
}

// Rebuilds a report from its CSV so plots can be regenerated without
// rerunning the screen.
SelectionReport parse_report_csv(const std::string& text) {
    SelectionReport report;
    std::istringstream lines(text);
    std::string line;
    bool in_members = false;
    while (std::getline(lines, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.rfind("# ", 0) == 0) {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = line.substr(2, eq - 2);
            const std::string value = line.substr(eq + 1);
            if (key == "index") report.index_name = value;
            else if (key == "index_ror_pct") report.index_ror_pct = std::stod(value);
            else if (key == "index_beta") report.index_beta = std::stod(value);
            else if (key == "start") report.resolved_start = Date::parse_iso(value);
            else if (key == "end") report.resolved_end = Date::parse_iso(value);
            else if (key == "window") report.config.window = std::stoul(value);
            continue;
        }
        if (line == "symbol,ror_pct,beta") {
            in_members = true;
            continue;
        }
        if (!in_members) throw DataError("unexpected report line: '" + line + "'");
        std::stringstream fields(line);
        std::string symbol, ror, beta_text;
        if (!std::getline(fields, symbol, ',') || !std::getline(fields, ror, ',') ||
            !std::getline(fields, beta_text))
            throw DataError("bad member row: '" + line + "'");
        BetaRecord rec;
        rec.subject = symbol;
        rec.ror_pct = std::stod(ror);
        rec.beta = std::stod(beta_text);
        rec.window = report.config.window;
        report.members.push_back(rec);
    }
    return report;
}

void run_plot(const std::string& report_path, std::size_t top_k,
              const std::string& output) {
    std::ifstream in(report_path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + report_path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    const SelectionReport report = parse_report_csv(ss.str());
    write_text(output, selection_scatter_svg(report, top_k));
    write_manifest(make_manifest("plot",
                                 {{"report", report_path},
                                  {"top_k", std::to_string(top_k)},
                                  {"output", output}},
                                 {report_path}),
                   output);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"entropy-based market volatility analytics"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Key-value config file");

    // ingest
    std::vector<std::string> ingest_inputs;
    std::string ingest_format = "auto";
    std::string ingest_output;
    auto* ingest = app.add_subcommand("ingest", "Parse EOD files into a panel snapshot");
    ingest->add_option("inputs", ingest_inputs, "Input files or directories")->required();
    ingest->add_option("--format", ingest_format, "auto | long | perday")
        ->check(CLI::IsMember({"auto", "long", "perday"}))
        ->default_val("auto");
    ingest->add_option("--output", ingest_output, "Snapshot output path")->required();

    // csie
    std::string csie_input, csie_output;
    std::vector<std::string> csie_subset;
    CommonOpts csie_opts;
    auto* csie = app.add_subcommand("csie", "Cross-sectional entropy series");
    csie->add_option("--input", csie_input, "Panel snapshot")->required();
    add_interval_flags(csie, csie_opts);
    csie->add_option("--subset", csie_subset, "Restrict to these symbols");
    csie->add_option("--output", csie_output, "CSV output path")->required();

    // ie
    std::string ie_input, ie_symbol, ie_index, ie_output;
    CommonOpts ie_opts;
    auto* ie = app.add_subcommand("ie", "Longitudinal entropy series");
    ie->add_option("--input", ie_input, "Panel snapshot")->required();
    ie->add_option("--symbol", ie_symbol, "Panel symbol to analyse");
    ie->add_option("--index", ie_index, "Index OHLCV file to analyse");
    add_interval_flags(ie, ie_opts);
    ie->add_option("--output", ie_output, "CSV output path")->required();

    // betas
    std::string betas_input, betas_index, betas_output;
    CommonOpts betas_opts;
    auto* betas = app.add_subcommand("betas", "Entropy betas for all eligible symbols");
    betas->add_option("--input", betas_input, "Panel snapshot")->required();
    betas->add_option("--index", betas_index, "Benchmark index OHLCV file")->required();
    add_interval_flags(betas, betas_opts);
    betas->add_option("--output", betas_output, "CSV output path")->required();

    // screen
    std::string screen_input, screen_index, screen_output;
    CommonOpts screen_opts;
    bool screen_positive = false;
    std::size_t screen_top_k = 15;
    auto* screen_cmd = app.add_subcommand("screen", "Discover symbols beating the index");
    screen_cmd->add_option("--input", screen_input, "Panel snapshot")->required();
    screen_cmd->add_option("--index", screen_index, "Benchmark index OHLCV file")->required();
    add_interval_flags(screen_cmd, screen_opts);
    screen_cmd->add_flag("--positive-beta", screen_positive,
                         "Require strictly positive symbol beta");
    screen_cmd->add_option("--top-k", screen_top_k, "Plotted member cap")->default_val(15);
    screen_cmd->add_option("--output", screen_output, "Output directory")->required();

    // backtest
    std::string bt_input, bt_index, bt_years, bt_output;
    std::size_t bt_window = 10;
    double bt_alpha = 1.34;
    unsigned bt_threads = 1;
    bool bt_positive = false, bt_verbose = false;
    auto* backtest = app.add_subcommand("backtest", "Annual buy-and-hold screening");
    backtest->add_option("--input", bt_input, "Panel snapshot")->required();
    backtest->add_option("--index", bt_index, "Benchmark index OHLCV file")->required();
    backtest->add_option("--years", bt_years, "Years, e.g. 2001-2021 or 2007,2009")
        ->required();
    backtest->add_option("--window", bt_window, "Rolling window length")->default_val(10);
    backtest->add_option("--alpha", bt_alpha, "Entropy blend parameter")->default_val(1.34);
    backtest->add_flag("--positive-beta", bt_positive,
                       "Require strictly positive symbol beta");
    backtest->add_option("--threads", bt_threads, "Worker thread cap")->default_val(1);
    backtest->add_flag("--verbose-members", bt_verbose, "Also dump per-year member lists");
    backtest->add_option("--output", bt_output, "CSV output path")->required();

    // generate
    std::string gen_spec, gen_snapshot, gen_index;
    auto* generate = app.add_subcommand("generate", "Generate a synthetic market fixture");
    generate->add_option("--spec", gen_spec, "Market spec file")->required();
    generate->add_option("--output-snapshot", gen_snapshot, "Snapshot output path")
        ->required();
    generate->add_option("--output-index", gen_index, "Index output path")->required();

    // plot
    std::string plot_report, plot_output;
    std::size_t plot_top_k = 15;
    auto* plot = app.add_subcommand("plot", "Render a scatter SVG from a report CSV");
    plot->add_option("--report", plot_report, "Selection report CSV")->required();
    plot->add_option("--top-k", plot_top_k, "Plotted member cap")->default_val(15);
    plot->add_option("--output", plot_output, "SVG output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Collapse CLI11's per-error exit codes onto the usage code.
        return app.exit(e) == 0 ? 0 : kExitUsage;
    }

    try {
        if (*ingest) return run_ingest(ingest_inputs, ingest_format, ingest_output);
        if (*csie) run_csie(csie_input, csie_opts, csie_subset, csie_output);
        if (*ie) run_ie(ie_input, ie_symbol, ie_index, ie_opts, ie_output);
        if (*betas) run_betas(betas_input, betas_index, betas_opts, betas_output);
        if (*screen_cmd)
            run_screen(screen_input, screen_index, screen_opts, screen_positive,
                       screen_top_k, screen_output);
        if (*backtest)
            run_backtest(bt_input, bt_index, bt_years, bt_window, bt_alpha, bt_positive,
                         bt_threads, bt_verbose, bt_output);
        if (*generate) run_generate(gen_spec, gen_snapshot, gen_index);
        if (*plot) run_plot(plot_report, plot_top_k, plot_output);
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return 0;
}
