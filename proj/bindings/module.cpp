// Python bindings for the core analytics. Dates cross the boundary as
// ISO strings; tabular results come back as lightweight record objects.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "entrovol/beta.hpp"
#include "entrovol/entropy.hpp"
#include "entrovol/eod_io.hpp"
#include "entrovol/errors.hpp"
#include "entrovol/markowitz.hpp"
#include "entrovol/screener.hpp"
#include "entrovol/svg_plot.hpp"
#include "entrovol/synthetic.hpp"

namespace py = pybind11;
using namespace entrovol;

namespace {

PanelView view_of(const MarketPanel& panel, const std::string& start,
                  const std::string& end,
                  const std::optional<std::vector<std::string>>& subset = std::nullopt) {
    return slice(panel, Date::parse_iso(start), Date::parse_iso(end), subset);
}

std::vector<std::pair<std::string, double>> series_pairs(const EntropySeries& series,
                                                         const TradingCalendar& calendar) {
    std::vector<std::pair<std::string, double>> out;
    out.reserve(series.size());
    for (std::size_t k = 0; k < series.size(); ++k)
        out.emplace_back(calendar[series.day_index[k]].to_iso(), series.values[k]);
    return out;
}

MarketPanel load_snapshot(const std::string& path) { return read_snapshot(path); }

MarketPanel generate_from_spec(const std::string& spec_text) {
    return generate_market(parse_market_spec(spec_text));
}

}  // namespace

PYBIND11_MODULE(_entrovol, m) {
    m.doc() = "entropy-based market volatility analytics";

    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

    py::class_<MarketPanel>(m, "MarketPanel")
        .def_property_readonly("day_count", &MarketPanel::day_count)
        .def_property_readonly("symbol_count", &MarketPanel::symbol_count)
        .def_property_readonly("bar_count", &MarketPanel::bar_count)
        .def_property_readonly("symbols",
                               [](const MarketPanel& p) { return p.symbols(); })
        .def_property_readonly("dates",
                               [](const MarketPanel& p) {
                                   std::vector<std::string> out;
                                   out.reserve(p.day_count());
                                   for (Date d : p.calendar().dates())
                                       out.push_back(d.to_iso());
                                   return out;
                               })
        .def_property_readonly("sparsity", &MarketPanel::sparsity)
        .def("__repr__", [](const MarketPanel& p) {
            std::ostringstream ss;
            ss << "MarketPanel(days=" << p.day_count()
               << ", symbols=" << p.symbol_count() << ", bars=" << p.bar_count() << ")";
            return ss.str();
        });

    py::class_<IndexSeries>(m, "IndexSeries")
        .def_property_readonly("name", [](const IndexSeries& s) { return s.name; })
        .def("__len__", &IndexSeries::size);

    py::class_<BetaRecord>(m, "BetaRecord")
        .def_readonly("subject", &BetaRecord::subject)
        .def_readonly("ror_pct", &BetaRecord::ror_pct)
        .def_readonly("beta", &BetaRecord::beta)
        .def_readonly("window", &BetaRecord::window)
        .def_property_readonly("start",
                               [](const BetaRecord& r) { return r.start.to_iso(); })
        .def_property_readonly("end", [](const BetaRecord& r) { return r.end.to_iso(); })
        .def("__repr__", [](const BetaRecord& r) {
            return "BetaRecord(" + r.subject + ", ror=" + format_ror(r.ror_pct) +
                   ", beta=" + format_beta(r.beta) + ")";
        });

    py::class_<SelectionReport>(m, "SelectionReport")
        .def_property_readonly("start",
                               [](const SelectionReport& r) {
                                   return r.resolved_start.to_iso();
                               })
        .def_property_readonly("end",
                               [](const SelectionReport& r) {
                                   return r.resolved_end.to_iso();
                               })
        .def_readonly("index_name", &SelectionReport::index_name)
        .def_readonly("index_ror_pct", &SelectionReport::index_ror_pct)
        .def_readonly("index_beta", &SelectionReport::index_beta)
        .def_readonly("n_selected", &SelectionReport::n_selected)
        .def_readonly("n_positive_beta", &SelectionReport::n_positive_beta)
        .def_readonly("members", &SelectionReport::members)
        .def_property_readonly("set_beta",
                               [](const SelectionReport& r) -> std::optional<double> {
                                   if (!r.portfolio) return std::nullopt;
                                   return r.portfolio->beta;
                               })
        .def("csv", &selection_report_csv)
        .def("scatter_svg",
             [](const SelectionReport& r, std::size_t top_k) {
                 return selection_scatter_svg(r, top_k);
             },
             py::arg("top_k") = 15);

    m.def("load_snapshot", &load_snapshot, py::arg("path"),
          "Read a long-format OHLCV snapshot into a panel");
    m.def("generate_market", &generate_from_spec, py::arg("spec_text"),
          "Generate a deterministic synthetic market from a spec string");
    m.def("generate_index",
          [](const MarketPanel& panel, const std::string& name) {
              return generate_index(panel, name);
          },
          py::arg("panel"), py::arg("name") = "INDEX");
    m.def("load_index", &read_index_series, py::arg("path"));
    m.def("snapshot_csv", &snapshot_string, py::arg("panel"));

    m.def("csie_series",
          [](const MarketPanel& panel, const std::string& start, const std::string& end,
             double alpha, const std::optional<std::vector<std::string>>& subset,
             unsigned threads) {
              const PanelView view = view_of(panel, start, end, subset);
              return series_pairs(csie_series(view, EntropyParams{alpha}, threads),
                                  panel.calendar());
          },
          py::arg("panel"), py::arg("start"), py::arg("end"), py::arg("alpha") = 1.34,
          py::arg("subset") = std::nullopt, py::arg("threads") = 1,
          "Daily cross-sectional entropy as (date, value) pairs");

    m.def("ie_series",
          [](const MarketPanel& panel, const std::string& symbol, const std::string& start,
             const std::string& end, std::size_t window, double alpha) {
              const PanelView view = view_of(panel, start, end);
              const auto sym = panel.symbol_id(symbol);
              if (!sym) throw DataError("unknown symbol '" + symbol + "'");
              return series_pairs(
                  ie_series_symbol(view, *sym, window, EntropyParams{alpha}),
                  panel.calendar());
          },
          py::arg("panel"), py::arg("symbol"), py::arg("start"), py::arg("end"),
          py::arg("window") = 10, py::arg("alpha") = 1.34,
          "Rolling longitudinal entropy of one symbol, indexed by window start");

    m.def("betas",
          [](const MarketPanel& panel, const IndexSeries& index, const std::string& start,
             const std::string& end, std::size_t window, double alpha, unsigned threads) {
              const PanelView view = view_of(panel, start, end);
              const EntropyParams params{alpha};
              const EntropySeries market =
                  market_smoothed_csie(view, window, params, threads);
              std::vector<BetaRecord> records;
              records.push_back(index_beta(index, view, window, params, market));
              for (std::uint32_t sym : eligible_symbols(view))
                  records.push_back(symbol_beta(sym, view, window, params, market));
              return records;
          },
          py::arg("panel"), py::arg("index"), py::arg("start"), py::arg("end"),
          py::arg("window") = 10, py::arg("alpha") = 1.34, py::arg("threads") = 1,
          "Index beta followed by every eligible symbol's beta");

    m.def("screen",
          [](const MarketPanel& panel, const IndexSeries& index, const std::string& start,
             const std::string& end, std::size_t window, double alpha, bool positive_beta,
             std::size_t top_k, unsigned threads) {
              ScreenConfig config;
              config.start = Date::parse_iso(start);
              config.end = Date::parse_iso(end);
              config.window = window;
              config.params.alpha = alpha;
              config.require_positive_beta = positive_beta;
              config.top_k = top_k;
              config.threads = threads;
              return screen(config, panel, index);
          },
          py::arg("panel"), py::arg("index"), py::arg("start"), py::arg("end"),
          py::arg("window") = 10, py::arg("alpha") = 1.34,
          py::arg("positive_beta") = false, py::arg("top_k") = 15, py::arg("threads") = 1,
          "Select symbols with beta at most and return at least the index's");

    m.def("backtest_csv",
          [](const MarketPanel& panel, const IndexSeries& index, std::vector<int> years,
             std::size_t window, double alpha, bool positive_beta, unsigned threads) {
              return backtest_csv(annual_backtest(panel, index, years, window,
                                                  EntropyParams{alpha}, positive_beta,
                                                  threads));
          },
          py::arg("panel"), py::arg("index"), py::arg("years"), py::arg("window") = 10,
          py::arg("alpha") = 1.34, py::arg("positive_beta") = false,
          py::arg("threads") = 1, "Annual screening summary in the fixed CSV schema");

    m.def("portfolio_variance",
          [](const MarketPanel& panel, const std::vector<std::string>& symbols,
             const std::vector<double>& weights, const std::string& start,
             const std::string& end) {
              const PanelView view = view_of(panel, start, end);
              std::vector<std::uint32_t> ids;
              for (const auto& s : symbols) {
                  const auto sym = panel.symbol_id(s);
                  if (!sym) throw DataError("unknown symbol '" + s + "'");
                  ids.push_back(*sym);
              }
              return portfolio_variance(price_matrix(view, ids),
                                        WeightAllocation(weights));
          },
          py::arg("panel"), py::arg("symbols"), py::arg("weights"), py::arg("start"),
          py::arg("end"),
          "Price-based covariance portfolio variance over the interval");

    m.def("weight_f",
          [](std::size_t m_members, double alpha) {
              return weight_f(m_members, EntropyParams{alpha});
          },
          py::arg("m"), py::arg("alpha") = 1.34);
}
