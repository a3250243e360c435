#pragma once

#include <cstddef>

namespace entrovol {

// Neumaier compensated summation. Keeps long reductions (cross sections
// run to thousands of terms) accurate enough for 1e-12 oracle tolerances.
class KahanSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if ((sum_ >= x ? sum_ : -sum_) >= (x >= 0 ? x : -x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace entrovol
