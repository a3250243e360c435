#include "entrovol/markowitz.hpp"

#include <cmath>
#include <cstdio>

#include "entrovol/accumulate.hpp"
#include "entrovol/errors.hpp"

namespace entrovol {

PriceMatrix::PriceMatrix(std::size_t days, std::size_t assets, std::vector<double> values,
                         std::vector<std::string> day_labels,
                         std::vector<std::string> asset_labels)
    : days_(days), assets_(assets), values_(std::move(values)),
      day_labels_(std::move(day_labels)), asset_labels_(std::move(asset_labels)) {
    if (values_.size() != days_ * assets_)
        throw DataError("price matrix shape does not match value count");
    for (double v : values_)
        if (!(v > 0.0)) throw DataError("price matrix requires positive prices");
}

PriceMatrix price_matrix(const PanelView& view, const std::vector<std::uint32_t>& symbols) {
    const auto& panel = view.panel();
    const std::size_t t = view.length();
    std::vector<double> values(t * symbols.size());
    std::vector<std::string> asset_labels;
    asset_labels.reserve(symbols.size());
    for (std::size_t j = 0; j < symbols.size(); ++j) {
        if (!symbol_eligible(view, symbols[j]))
            throw DataError("symbol '" + panel.symbols()[symbols[j]] +
                            "' is not traded on every day of the interval");
        asset_labels.push_back(panel.symbols()[symbols[j]]);
        const auto days = panel.symbol_days(symbols[j]);
        const auto pos = panel.symbol_positions(symbols[j]);
        auto it = std::lower_bound(days.begin(), days.end(),
                                   static_cast<std::uint32_t>(view.first_day()));
        const std::size_t base = static_cast<std::size_t>(it - days.begin());
        for (std::size_t i = 0; i < t; ++i)
            values[i * symbols.size() + j] = panel.close_at(pos[base + i]);
    }
    std::vector<std::string> day_labels;
    day_labels.reserve(t);
    for (std::size_t i = 0; i < t; ++i)
        day_labels.push_back(panel.calendar()[view.first_day() + i].to_iso());
    return PriceMatrix(t, symbols.size(), std::move(values), std::move(day_labels),
                       std::move(asset_labels));
}

WeightAllocation::WeightAllocation(std::vector<double> weights)
    : weights_(std::move(weights)) {
    KahanSum sum;
    for (double w : weights_) {
        if (w < 0.0) throw DataError("allocation is long-only; negative weight");
        sum.add(w);
    }
    if (std::abs(sum.value() - 1.0) > 1e-12)
        throw DataError("allocation weights must sum to 1");
}

WeightAllocation WeightAllocation::equal(std::size_t assets) {
    if (assets == 0) throw DataError("allocation needs at least one asset");
    std::vector<double> w(assets, 1.0 / static_cast<double>(assets));
    // Nudge the last weight so the sum is exactly 1 despite rounding.
    KahanSum sum;
    for (std::size_t i = 0; i + 1 < assets; ++i) sum.add(w[i]);
    w[assets - 1] = 1.0 - sum.value();
    return WeightAllocation(std::move(w));
}

std::vector<double> mean_vector(const PriceMatrix& prices) {
    const std::size_t n = prices.days(), m = prices.assets();
    if (n < 1) throw NumericError("mean needs at least one day");
    std::vector<double> mu(m);
    for (std::size_t j = 0; j < m; ++j) {
        KahanSum acc;
        for (std::size_t i = 0; i < n; ++i) acc.add(prices.at(i, j));
        mu[j] = acc.value() / static_cast<double>(n);
    }
    return mu;
}

std::vector<double> covariance_matrix(const PriceMatrix& prices) {
    const std::size_t n = prices.days(), m = prices.assets();
    if (n < 2) throw NumericError("covariance needs at least two days");
    const std::vector<double> mu = mean_vector(prices);
    std::vector<double> cov(m * m);
    const double inv = 1.0 / static_cast<double>(n - 1);
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t l = k; l < m; ++l) {
            KahanSum acc;
            for (std::size_t i = 0; i < n; ++i)
                acc.add((prices.at(i, k) - mu[k]) * (prices.at(i, l) - mu[l]));
            const double c = acc.value() * inv;
            cov[k * m + l] = c;
            cov[l * m + k] = c;
        }
    }
    return cov;
}

double portfolio_variance(const PriceMatrix& prices, const WeightAllocation& weights) {
    const std::size_t m = prices.assets();
    if (weights.size() != m)
        throw DataError("allocation size does not match asset count");
    const std::vector<double> cov = covariance_matrix(prices);
    KahanSum acc;
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < m; ++l)
            acc.add(weights[k] * cov[k * m + l] * weights[l]);
    return acc.value();
}

std::string covariance_csv(const PriceMatrix& prices) {
    const std::vector<double> cov = covariance_matrix(prices);
    const std::size_t m = prices.assets();
    auto label = [&](std::size_t j) {
        return prices.asset_labels().empty() ? "a" + std::to_string(j)
                                             : prices.asset_labels()[j];
    };
    std::string out = "symbol";
    for (std::size_t j = 0; j < m; ++j) out += "," + label(j);
    out += '\n';
    char buf[64];
    for (std::size_t k = 0; k < m; ++k) {
        out += label(k);
        for (std::size_t l = 0; l < m; ++l) {
            std::snprintf(buf, sizeof buf, "%.9g", cov[k * m + l]);
            out += ',';
            out += buf;
        }
        out += '\n';
    }
    return out;
}

}  // namespace entrovol
