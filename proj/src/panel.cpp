#include "entrovol/panel.hpp"

#include <algorithm>
#include <cstring>

#include "entrovol/errors.hpp"

namespace entrovol {

std::optional<std::string> bar_violation(const OhlcvBar& bar) {
    if (!(bar.open > 0.0) || !(bar.high > 0.0) || !(bar.low > 0.0) || !(bar.close > 0.0))
        return "non-positive price";
    if (bar.low > std::min(bar.open, bar.close))
        return "low above min(open, close)";
    if (bar.high < std::max(bar.open, bar.close))
        return "high below max(open, close)";
    if (bar.volume < 0)
        return "negative volume";
    return std::nullopt;
}

TradingCalendar::TradingCalendar(std::vector<Date> dates) : dates_(std::move(dates)) {
    for (std::size_t i = 1; i < dates_.size(); ++i)
        if (!(dates_[i - 1] < dates_[i]))
            throw DataError("trading calendar not strictly increasing at " +
                            dates_[i].to_iso());
}

std::optional<std::size_t> TradingCalendar::index_of(Date d) const {
    auto it = std::lower_bound(dates_.begin(), dates_.end(), d);
    if (it == dates_.end() || *it != d) return std::nullopt;
    return static_cast<std::size_t>(it - dates_.begin());
}

std::optional<std::size_t> TradingCalendar::snap_forward(Date d) const {
    auto it = std::lower_bound(dates_.begin(), dates_.end(), d);
    if (it == dates_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - dates_.begin());
}

std::optional<std::size_t> TradingCalendar::snap_backward(Date d) const {
    auto it = std::upper_bound(dates_.begin(), dates_.end(), d);
    if (it == dates_.begin()) return std::nullopt;
    return static_cast<std::size_t>(it - dates_.begin()) - 1;
}

std::optional<std::uint32_t> MarketPanel::symbol_id(std::string_view symbol) const {
    auto it = std::lower_bound(symbols_.begin(), symbols_.end(), symbol);
    if (it == symbols_.end() || *it != symbol) return std::nullopt;
    return static_cast<std::uint32_t>(it - symbols_.begin());
}

double MarketPanel::sparsity() const {
    const double cells = static_cast<double>(day_count()) * static_cast<double>(symbol_count());
    if (cells == 0.0) return 0.0;
    return 1.0 - static_cast<double>(bar_count()) / cells;
}

MarketPanel::DayRow MarketPanel::day_row(std::size_t day) const {
    const std::size_t b = day_offsets_[day], e = day_offsets_[day + 1];
    return {{sym_.data() + b, e - b},   {open_.data() + b, e - b},
            {high_.data() + b, e - b},  {low_.data() + b, e - b},
            {close_.data() + b, e - b}, {volume_.data() + b, e - b}};
}

std::span<const std::uint32_t> MarketPanel::symbol_days(std::uint32_t sym) const {
    return {sym_day_.data() + sym_offsets_[sym], sym_offsets_[sym + 1] - sym_offsets_[sym]};
}

std::span<const std::uint32_t> MarketPanel::symbol_positions(std::uint32_t sym) const {
    return {sym_pos_.data() + sym_offsets_[sym], sym_offsets_[sym + 1] - sym_offsets_[sym]};
}

std::optional<OhlcvBar> MarketPanel::find(std::size_t day, std::uint32_t sym) const {
    const auto row = day_row(day);
    auto it = std::lower_bound(row.symbol_ids.begin(), row.symbol_ids.end(), sym);
    if (it == row.symbol_ids.end() || *it != sym) return std::nullopt;
    const std::size_t pos = day_offsets_[day] +
                            static_cast<std::size_t>(it - row.symbol_ids.begin());
    return bar_at(pos);
}

std::uint32_t PanelBuilder::intern_symbol(std::string_view symbol) {
    auto it = name_ids_.find(std::string(symbol));
    if (it != name_ids_.end()) return it->second;
    const auto id = static_cast<std::uint32_t>(names_.size());
    names_.emplace_back(symbol);
    name_ids_.emplace(names_.back(), id);
    return id;
}

void PanelBuilder::add(std::string_view symbol, Date date, const OhlcvBar& bar) {
    if (auto why = bar_violation(bar))
        throw DataError("invalid bar for " + std::string(symbol) + " on " + date.to_iso() +
                        ": " + *why);
    row_day_.push_back(date.serial());
    row_sym_.push_back(intern_symbol(symbol));
    open_.push_back(bar.open);
    high_.push_back(bar.high);
    low_.push_back(bar.low);
    close_.push_back(bar.close);
    volume_.push_back(bar.volume);
}

MarketPanel PanelBuilder::build() {
    MarketPanel p;
    const std::size_t n_rows = row_day_.size();

    // Calendar: sorted distinct date serials.
    std::vector<std::int32_t> serials(row_day_);
    std::sort(serials.begin(), serials.end());
    serials.erase(std::unique(serials.begin(), serials.end()), serials.end());
    {
        std::vector<Date> dates;
        dates.reserve(serials.size());
        for (auto s : serials) dates.emplace_back(s);
        p.calendar_ = TradingCalendar(std::move(dates));
    }

    // Symbols: sorted distinct names; map intern-order ids to sorted ids.
    std::vector<std::uint32_t> order(names_.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::uint32_t a, std::uint32_t b) { return names_[a] < names_[b]; });
    std::vector<std::uint32_t> new_id(names_.size());
    p.symbols_.reserve(names_.size());
    for (std::uint32_t k = 0; k < order.size(); ++k) {
        new_id[order[k]] = k;
        p.symbols_.push_back(std::move(names_[order[k]]));
    }

    // Per-row day index and sorted symbol id.
    std::vector<std::uint32_t> row_dayidx(n_rows);
    for (std::size_t r = 0; r < n_rows; ++r) {
        auto it = std::lower_bound(serials.begin(), serials.end(), row_day_[r]);
        row_dayidx[r] = static_cast<std::uint32_t>(it - serials.begin());
        row_sym_[r] = new_id[row_sym_[r]];
    }
    row_day_ = {};
    serials = {};

    // Counting sort by day, then sort each day's rows by symbol.
    const std::size_t n_days = p.calendar_.size();
    std::vector<std::size_t> counts(n_days + 1, 0);
    for (auto d : row_dayidx) ++counts[d + 1];
    for (std::size_t i = 1; i <= n_days; ++i) counts[i] += counts[i - 1];
    std::vector<std::uint32_t> perm(n_rows);
    {
        std::vector<std::size_t> cursor(counts.begin(), counts.end() - 1);
        for (std::size_t r = 0; r < n_rows; ++r)
            perm[cursor[row_dayidx[r]]++] = static_cast<std::uint32_t>(r);
    }
    for (std::size_t d = 0; d < n_days; ++d)
        std::sort(perm.begin() + counts[d], perm.begin() + counts[d + 1],
                  [&](std::uint32_t a, std::uint32_t b) {
                      return row_sym_[a] != row_sym_[b] ? row_sym_[a] < row_sym_[b] : a < b;
                  });

    // Collapse duplicates: identical bars merge, conflicting bars are errors.
    std::size_t kept = 0;
    for (std::size_t i = 0; i < n_rows; ++i) {
        const std::uint32_t r = perm[i];
        if (kept > 0) {
            const std::uint32_t q = perm[kept - 1];
            if (row_dayidx[q] == row_dayidx[r] && row_sym_[q] == row_sym_[r]) {
                const bool same = open_[q] == open_[r] && high_[q] == high_[r] &&
                                  low_[q] == low_[r] && close_[q] == close_[r] &&
                                  volume_[q] == volume_[r];
                if (!same)
                    throw DataError("conflicting bars for " + p.symbols_[row_sym_[r]] +
                                    " on " + p.calendar_[row_dayidx[r]].to_iso());
                continue;
            }
        }
        perm[kept++] = r;
    }
    perm.resize(kept);

    // Gather into the panel, releasing each staging array as it is consumed.
    auto gather = [&perm](auto& src) {
        std::remove_reference_t<decltype(src)> dst(perm.size());
        for (std::size_t i = 0; i < perm.size(); ++i) dst[i] = src[perm[i]];
        src = {};
        return dst;
    };
    p.open_ = gather(open_);
    p.high_ = gather(high_);
    p.low_ = gather(low_);
    p.close_ = gather(close_);
    p.volume_ = gather(volume_);
    p.sym_ = gather(row_sym_);
    std::vector<std::uint32_t> dayidx = gather(row_dayidx);

    p.day_offsets_.assign(n_days + 1, 0);
    for (auto d : dayidx) ++p.day_offsets_[d + 1];
    for (std::size_t i = 1; i <= n_days; ++i) p.day_offsets_[i] += p.day_offsets_[i - 1];

    // Per-symbol index, day-ascending because the global order is day-major.
    const std::size_t n_syms = p.symbols_.size();
    p.sym_offsets_.assign(n_syms + 1, 0);
    for (auto s : p.sym_) ++p.sym_offsets_[s + 1];
    for (std::size_t i = 1; i <= n_syms; ++i) p.sym_offsets_[i] += p.sym_offsets_[i - 1];
    p.sym_day_.resize(kept);
    p.sym_pos_.resize(kept);
    {
        std::vector<std::size_t> cursor(p.sym_offsets_.begin(), p.sym_offsets_.end() - 1);
        for (std::size_t pos = 0; pos < kept; ++pos) {
            const std::uint32_t s = p.sym_[pos];
            p.sym_day_[cursor[s]] = dayidx[pos];
            p.sym_pos_[cursor[s]] = static_cast<std::uint32_t>(pos);
            ++cursor[s];
        }
    }

    names_ = {};
    name_ids_ = {};
    return p;
}

MarketPanel build_panel(const std::vector<EodRecord>& records) {
    PanelBuilder b;
    for (const auto& r : records) b.add(r.symbol, r.date, r.bar);
    return b.build();
}

PanelView::PanelView(const MarketPanel& panel, std::size_t first_day, std::size_t last_day,
                     std::optional<std::vector<std::uint32_t>> subset)
    : panel_(&panel), first_day_(first_day), last_day_(last_day), subset_(std::move(subset)) {
    if (first_day_ > last_day_ || last_day_ >= panel.day_count())
        throw DataError("view day range out of calendar bounds");
    if (subset_) std::sort(subset_->begin(), subset_->end());
}

bool PanelView::contains_symbol(std::uint32_t sym) const {
    if (!subset_) return sym < panel_->symbol_count();
    return std::binary_search(subset_->begin(), subset_->end(), sym);
}

PanelView slice(const MarketPanel& panel, Date start, Date end,
                const std::optional<std::vector<std::string>>& subset) {
    if (end < start) throw DataError("interval end precedes start");
    const auto lo = panel.calendar().snap_forward(start);
    const auto hi = panel.calendar().snap_backward(end);
    if (!lo || !hi || *lo > *hi)
        throw DataError("no trading days between " + start.to_iso() + " and " + end.to_iso());
    std::optional<std::vector<std::uint32_t>> ids;
    if (subset) {
        ids.emplace();
        ids->reserve(subset->size());
        for (const auto& name : *subset) {
            const auto id = panel.symbol_id(name);
            if (!id) throw DataError("unknown symbol '" + name + "'");
            ids->push_back(*id);
        }
    }
    return PanelView(panel, *lo, *hi, std::move(ids));
}

bool symbol_eligible(const PanelView& view, std::uint32_t sym) {
    const auto& panel = view.panel();
    const auto days = panel.symbol_days(sym);
    const auto first = static_cast<std::uint32_t>(view.first_day());
    auto it = std::lower_bound(days.begin(), days.end(), first);
    const std::size_t have = static_cast<std::size_t>(days.end() - it);
    if (have < view.length()) return false;
    // Day indices are strictly increasing, so full coverage means the next
    // length() entries are exactly first..last.
    if (*it != first || it[view.length() - 1] != static_cast<std::uint32_t>(view.last_day()))
        return false;
    const auto pos = panel.symbol_positions(sym);
    const std::size_t base = static_cast<std::size_t>(it - days.begin());
    for (std::size_t k = 0; k < view.length(); ++k) {
        const OhlcvBar bar = panel.bar_at(pos[base + k]);
        if (bar.volume <= 0) return false;
    }
    return true;
}

std::vector<std::uint32_t> eligible_symbols(const PanelView& view) {
    std::vector<std::uint32_t> out;
    if (view.subset()) {
        for (auto sym : *view.subset())
            if (symbol_eligible(view, sym)) out.push_back(sym);
    } else {
        for (std::uint32_t sym = 0; sym < view.panel().symbol_count(); ++sym)
            if (symbol_eligible(view, sym)) out.push_back(sym);
    }
    return out;
}

}  // namespace entrovol
