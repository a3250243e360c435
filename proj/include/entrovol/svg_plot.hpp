#pragma once

#include <string>

#include "entrovol/screener.hpp"

namespace entrovol {

// Scatter of the top-k selected symbols, return on x, beta on y, with a
// vertical reference line at the index return and a horizontal one at
// the index beta. Plain text SVG with fixed numeric formatting, suitable
// for golden-file comparison.
std::string selection_scatter_svg(const SelectionReport& report, std::size_t top_k);

}  // namespace entrovol
