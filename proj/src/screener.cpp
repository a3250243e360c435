#include "entrovol/screener.hpp"

#include <algorithm>
#include <cmath>

#include "entrovol/accumulate.hpp"
#include "entrovol/errors.hpp"
#include "entrovol/parallel.hpp"

namespace entrovol {

namespace {

bool member_order(const BetaRecord& a, const BetaRecord& b) {
    if (a.beta != b.beta) return a.beta < b.beta;
    if (a.ror_pct != b.ror_pct) return a.ror_pct > b.ror_pct;
    return a.subject < b.subject;
}

SelectionSummary summarize(const std::vector<BetaRecord>& members) {
    SelectionSummary s;
    s.max_ror_pct = members.front().ror_pct;
    s.beta_of_max = members.front().beta;
    s.min_ror_pct = members.front().ror_pct;
    s.beta_of_min = members.front().beta;
    KahanSum acc;
    for (const auto& m : members) {
        acc.add(m.ror_pct);
        // Members are sorted by ascending beta, so on return ties the
        // lower-beta record wins; deterministic either way.
        if (m.ror_pct > s.max_ror_pct) {
            s.max_ror_pct = m.ror_pct;
            s.beta_of_max = m.beta;
        }
        if (m.ror_pct < s.min_ror_pct) {
            s.min_ror_pct = m.ror_pct;
            s.beta_of_min = m.beta;
        }
    }
    s.avg_ror_pct = acc.value() / static_cast<double>(members.size());
    return s;
}

}  // namespace

SelectionReport screen(const ScreenConfig& config, const MarketPanel& panel,
                       const IndexSeries& index) {
    validate(config.params);
    if (config.window < 2) throw DataError("screen window must be at least 2 days");
    const PanelView view = slice(panel, config.start, config.end);
    if (view.length() < config.window + 1)
        throw DataError("interval too short: need at least window + 1 trading days");

    SelectionReport report;
    report.config = config;
    report.resolved_start = view.start_date();
    report.resolved_end = view.end_date();
    report.index_name = index.name;

    const EntropySeries market =
        market_smoothed_csie(view, config.window, config.params, config.threads);
    const BetaRecord index_rec =
        index_beta(index, view, config.window, config.params, market);
    report.index_ror_pct = index_rec.ror_pct;
    report.index_beta = index_rec.beta;

    const std::vector<std::uint32_t> candidates = eligible_symbols(view);
    std::vector<BetaRecord> records(candidates.size());
    parallel_for(candidates.size(), config.threads, [&](std::size_t i) {
        records[i] = symbol_beta(candidates[i], view, config.window, config.params, market);
    });

    std::vector<std::uint32_t> selected_ids;
    std::vector<BetaRecord> selected;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const BetaRecord& r = records[i];
        if (r.beta <= report.index_beta && r.ror_pct >= report.index_ror_pct) {
            selected.push_back(r);
            selected_ids.push_back(candidates[i]);
        }
    }
    report.n_selected = selected.size();
    report.n_positive_beta = static_cast<std::size_t>(
        std::count_if(selected.begin(), selected.end(),
                      [](const BetaRecord& r) { return r.beta > 0.0; }));

    std::vector<std::uint32_t> member_ids;
    if (config.require_positive_beta) {
        for (std::size_t i = 0; i < selected.size(); ++i) {
            if (selected[i].beta > 0.0) {
                report.members.push_back(selected[i]);
                member_ids.push_back(selected_ids[i]);
            }
        }
    } else {
        report.members = std::move(selected);
        member_ids = std::move(selected_ids);
    }

    std::sort(report.members.begin(), report.members.end(), member_order);

    if (report.members.size() >= 2)
        report.portfolio = portfolio_beta(member_ids, view, config.window,
                                          config.params, market);
    if (!report.members.empty())
        report.summary = summarize(report.members);
    return report;
}

std::vector<BetaRecord> top_k_least_risky(const SelectionReport& report, std::size_t k) {
    if (k < 1) throw DataError("top-k needs k >= 1");
    const std::size_t n = std::min(k, report.members.size());
    return {report.members.begin(), report.members.begin() + static_cast<std::ptrdiff_t>(n)};
}

std::vector<BacktestRow> annual_backtest(const MarketPanel& panel, const IndexSeries& index,
                                         const std::vector<int>& years, std::size_t window,
                                         const EntropyParams& params,
                                         bool require_positive_beta, unsigned threads) {
    std::vector<BacktestRow> rows;
    rows.reserve(years.size());
    for (int year : years) {
        BacktestRow row;
        row.year = year;
        try {
            ScreenConfig config;
            config.start = Date(year, 1, 1);
            config.end = Date(year, 12, 31);
            config.window = window;
            config.params = params;
            config.require_positive_beta = require_positive_beta;
            config.threads = threads;
            row.report = screen(config, panel, index);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string selection_report_csv(const SelectionReport& report) {
    std::string out;
    out += "# start=" + report.resolved_start.to_iso() + "\n";
    out += "# end=" + report.resolved_end.to_iso() + "\n";
    out += "# window=" + std::to_string(report.config.window) + "\n";
    out += "# alpha=" + format_beta(report.config.params.alpha) + "\n";
    out += "# positive_beta=" +
           std::string(report.config.require_positive_beta ? "true" : "false") + "\n";
    out += "# index=" + report.index_name + "\n";
    out += "# index_ror_pct=" + format_ror(report.index_ror_pct) + "\n";
    out += "# index_beta=" + format_beta(report.index_beta) + "\n";
    out += "# n_selected=" + std::to_string(report.n_selected) + "\n";
    out += "# n_positive_beta=" + std::to_string(report.n_positive_beta) + "\n";
    out += "# set_beta=" +
           (report.portfolio ? format_beta(report.portfolio->beta)
                             : std::string("insufficient members")) +
           "\n";
    out += "symbol,ror_pct,beta\n";
    for (const auto& m : report.members)
        out += m.subject + "," + format_ror(m.ror_pct) + "," + format_beta(m.beta) + "\n";
    return out;
}

std::string backtest_csv(const std::vector<BacktestRow>& rows) {
    std::string out =
        "year,index_ror_pct,index_beta,n_selected,n_positive_beta,"
        "max_ror_pct,beta_of_max,min_ror_pct,beta_of_min,avg_ror_pct,set_beta\n";
    for (const auto& row : rows) {
        out += std::to_string(row.year);
        if (!row.report) {
            // A failed year keeps its row; every data cell renders "-".
            for (int i = 0; i < 10; ++i) out += ",-";
            out += '\n';
            continue;
        }
        const SelectionReport& r = *row.report;
        out += ',' + format_ror(r.index_ror_pct);
        out += ',' + format_beta(r.index_beta);
        out += ',' + std::to_string(r.n_selected);
        out += ',' + std::to_string(r.n_positive_beta);
        if (r.summary) {
            out += ',' + format_ror(r.summary->max_ror_pct);
            out += ',' + format_beta(r.summary->beta_of_max);
            out += ',' + format_ror(r.summary->min_ror_pct);
            out += ',' + format_beta(r.summary->beta_of_min);
            out += ',' + format_ror(r.summary->avg_ror_pct);
        } else {
            out += ",-,-,-,-,-";
        }
        out += ',';
        out += r.portfolio ? format_beta(r.portfolio->beta) : "-";
        out += '\n';
    }
    return out;
}

}  // namespace entrovol
