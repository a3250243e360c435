#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "entrovol/panel.hpp"

namespace entrovol {

// Gap-free n-day x m-asset matrix of closing prices, row-major.
class PriceMatrix {
public:
    PriceMatrix(std::size_t days, std::size_t assets, std::vector<double> values,
                std::vector<std::string> day_labels = {},
                std::vector<std::string> asset_labels = {});

    std::size_t days() const { return days_; }
    std::size_t assets() const { return assets_; }
    double at(std::size_t day, std::size_t asset) const {
        return values_[day * assets_ + asset];
    }
    const std::vector<std::string>& asset_labels() const { return asset_labels_; }
    const std::vector<std::string>& day_labels() const { return day_labels_; }

private:
    std::size_t days_;
    std::size_t assets_;
    std::vector<double> values_;
    std::vector<std::string> day_labels_;
    std::vector<std::string> asset_labels_;
};

// Closing prices of eligible symbols over a view.
PriceMatrix price_matrix(const PanelView& view, const std::vector<std::uint32_t>& symbols);

// Long-only allocation summing to 1.
class WeightAllocation {
public:
    explicit WeightAllocation(std::vector<double> weights);
    static WeightAllocation equal(std::size_t assets);

    std::size_t size() const { return weights_.size(); }
    double operator[](std::size_t i) const { return weights_[i]; }
    const std::vector<double>& values() const { return weights_; }

private:
    std::vector<double> weights_;
};

std::vector<double> mean_vector(const PriceMatrix& prices);

// Sample covariance of prices, denominator n - 1; symmetric by
// construction (upper triangle mirrored). Row-major m x m.
std::vector<double> covariance_matrix(const PriceMatrix& prices);

// w' Cov w.
double portfolio_variance(const PriceMatrix& prices, const WeightAllocation& weights);

// Debug emission: header row/column of asset labels, 9 significant digits.
std::string covariance_csv(const PriceMatrix& prices);

}  // namespace entrovol
