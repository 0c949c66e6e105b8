#include "derfun/tables.hpp"

#include "derfun/cartan.hpp"
#include "derfun/closedform.hpp"

#include <set>

namespace derfun {

namespace {

std::string join(const std::set<std::string>& s) {
    std::string out;
    for (const auto& e : s) out += (out.empty() ? "" : "+") + e;
    return out;
}

AbGroupType at(const GradedGroup& g, int i) {
    auto it = g.find(i);
    return it == g.end() ? AbGroupType{} : it->second;
}

}  // namespace

Cell appendix_b_cell(int n, int i, int r, const EngineOptions& opts) {
    if (n < 1 || n > 11 || i < 0 || i > 10) throw InputError("appendix-b covers 1 <= n <= 11, 0 <= i <= 10");
    if (n == 1) return {AbGroupType::free(binomial(r, i + 1).get_ui()), "closed-form"};
    if (n == 2) {
        if (i == 0) return {AbGroupType::free(std::uint64_t(r)), "closed-form"};
        if (i % 2) return {{}, "closed-form"};
        return {AbGroupType::free(binomial(r + (2 + i) / 2 - 1, (2 + i) / 2).get_ui()), "closed-form"};
    }
    int m = n - 2;
    AbGroupType total;
    std::set<std::string> engines;
    for (int d = 1; 2 * d <= i + 2; ++d) {
        int j = n + i - 2 * d;
        int k = j - m;  // relative degree
        if (k < 0) continue;
        if (d <= 4) {
            total = total + at(*integral_closed(d, m, r), j);
            engines.insert(m == 1 && d >= 2 ? "koszul-cycles" : "closed-form");
        } else if (m == 1) {
            total = total + at(integral_n1(d, r), j);
            engines.insert("koszul-cycles");
        } else if (k < m) {
            total = total + at(stable_gamma_d(d, r, k), k);
            engines.insert("stable");
        } else {
            total = total + derived_functor(FunctorExpr::gamma(d), std::size_t(r), m, j, opts);
            engines.insert("dold-kan-integer");
        }
    }
    return {total, join(engines)};
}

Cell appendix_c_cell(int n, int i, int r) {
    if (n < 1 || n > 4 || i < 0 || i > 12) throw InputError("appendix-c covers 1 <= n <= 4, 0 <= i <= 12");
    return {at(integral_gamma4(n, r), n + i), "closed-form"};
}

}  // namespace derfun
