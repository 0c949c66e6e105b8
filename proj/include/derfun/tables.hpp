#pragma once

#include "derfun/doldkan.hpp"
#include "derfun/exactlin.hpp"

#include <string>

namespace derfun {

/// One evaluated table entry and the engines that produced it.
struct Cell {
    AbGroupType group;
    std::string engine;
};

/// H_{n+i}(K(Z^r, n)) for 1 <= n <= 11 and 0 <= i <= 10, assembled as
/// sum_d L_{n+i-2d} Gamma^d(Z^r, n-2). Weights 5 and 6 come from the n = 1
/// formula, the stable range, or the integer engine for the one cell left.
Cell appendix_b_cell(int n, int i, int r, const EngineOptions& opts = {});

/// L_{n+i} Gamma^4(Z^r, n) for 1 <= n <= 4 and 0 <= i <= 12.
Cell appendix_c_cell(int n, int i, int r);

}  // namespace derfun
