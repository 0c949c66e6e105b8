#include "derfun/closedform.hpp"
#include "derfun/doldkan.hpp"
#include "derfun/koszul.hpp"

#include "doctest.h"

using namespace derfun;

namespace {

AbGroupType el(long p, std::uint64_t k) { return AbGroupType::elementary(p, k); }

DimTable nonzero(const std::map<int, std::uint64_t>& m) {
    DimTable out;
    for (const auto& [i, v] : m)
        if (v) out[i] = v;
    return out;
}

}  // namespace

TEST_CASE("char2_all small values") {
    CHECK(char2_all(4, 1, 1) == DimTable{{1, 1}, {2, 1}, {3, 1}, {4, 1}});
    for (int n = 1; n <= 4; ++n) CHECK(char2_all(1, n, 3) == DimTable{{n, 3}});
    // summand families of the weight-4 example at n = 2, counted by hand
    CHECK(char2_all(4, 2, 1) == DimTable{{2, 1}, {3, 1}, {4, 1}, {5, 2}, {6, 2}, {7, 1}, {8, 1}});
}

TEST_CASE("char2_all against the mod 2 engine") {
    for (int d = 1; d <= 4; ++d)
        for (int n = 1; n <= 2; ++n)
            for (int r = 1; r <= 2; ++r) {
                CAPTURE(d);
                CAPTURE(n);
                CAPTURE(r);
                CHECK(char2_all(d, n, r) == nonzero(derived_dims_mod_p(FunctorExpr::gamma(d), std::size_t(r), n, 2)));
            }
}

TEST_CASE("oddp_n1") {
    CHECK(oddp_n1(3, 3, 1) == DimTable{{1, 1}, {2, 1}});
    CHECK(oddp_n1(3, 1, 4) == DimTable{{1, 4}});
    CHECK(oddp_n1(5, 4, 1).empty());
    CHECK(oddp_n1(5, 4, 4) == DimTable{{4, 1}});
    CHECK_THROWS_AS(oddp_n1(2, 3, 1), InputError);
    for (std::uint32_t p : {3u, 5u})
        for (int d = 1; d <= 5; ++d)
            for (int r = 1; r <= 2; ++r)
                CHECK(oddp_n1(p, d, r) == nonzero(derived_dims_mod_p(FunctorExpr::gamma(d), std::size_t(r), 1, p)));
}

TEST_CASE("integral_n1") {
    auto g = integral_n1(4, 1);
    CHECK(g[1] == AbGroupType::cyclic(2));
    CHECK(g[2] == AbGroupType::cyclic(3));
    CHECK(g[3] == AbGroupType::cyclic(2));
    CHECK(!g.count(4));
    auto h = integral_n1(2, 2);
    CHECK(h[1] == el(2, 2));
    CHECK(h[2] == AbGroupType::free(1));
    for (int d = 1; d <= 4; ++d)
        for (int r = 1; r <= 2; ++r) CHECK(same_groups(integral_n1(d, r), derived_functor_all(FunctorExpr::gamma(d), std::size_t(r), 1)));
}

TEST_CASE("up to filtration formula equals the cycle dimensions") {
    for (std::uint32_t p : {2u, 3u})
        for (int d = 1; d <= 6; ++d)
            for (int r = 1; r <= 3; ++r) {
                auto formula = uptofiltration_n1(d, p, r);
                auto w = p == 2 ? skew_koszul_weight_complex(d, r) : koszul_weight_complex(p, d, r);
                for (int i = 1; i < d; ++i) {
                    CAPTURE(p);
                    CAPTURE(d);
                    CAPTURE(r);
                    CAPTURE(i);
                    CHECK((formula.count(i) ? formula.at(i) : 0) == cycles(w, i).dim);
                }
            }
    CHECK(uptofiltration_n1(1, 3, 2).empty());
    CHECK(uptofiltration_n1(4, 2, 1) == DimTable{{1, 1}, {3, 1}});
}

TEST_CASE("Gamma^2 and Gamma^3") {
    auto g = integral_gamma2(3, 1);
    CHECK(g == GradedGroup{{3, el(2, 1)}, {5, el(2, 1)}});
    CHECK(integral_gamma2(0, 3) == GradedGroup{{0, AbGroupType::free(6)}});
    CHECK(integral_gamma3(2, 1) == GradedGroup{{2, el(3, 1)}, {4, el(2, 1)}, {6, AbGroupType::free(1)}});
    for (int n = 1; n <= 2; ++n)
        for (int r = 1; r <= 2; ++r) {
            CHECK(same_groups(integral_gamma2(n, r), derived_functor_all(FunctorExpr::gamma(2), std::size_t(r), n)));
            CHECK(same_groups(integral_gamma3(n, r), derived_functor_all(FunctorExpr::gamma(3), std::size_t(r), n)));
        }
}

TEST_CASE("Gamma^4") {
    CHECK(gamma2_of_mod2(1) == AbGroupType::cyclic(4));
    CHECK(gamma2_of_mod2(2) == AbGroupType::from_factors(0, {4, 4, 2}));
    auto g = integral_gamma4(2, 1);
    CHECK(g[4] == AbGroupType::cyclic(12));
    CHECK(same_groups(integral_gamma4(1, 1), integral_n1(4, 1)));
    for (int r = 1; r <= 3; ++r) CHECK(same_groups(integral_gamma4(1, r), integral_n1(4, r)));
    CHECK(integral_gamma4(4, 1)[16] == AbGroupType::free(1));
    for (int n = 3; n <= 8; ++n)
        for (int r = 1; r <= 4; ++r)
            CHECK(same_groups(integral_gamma4_direct(n, r), integral_gamma4_recursive(n, r)));
}

TEST_CASE("closed forms vanish outside [n, nd]") {
    for (int n = 1; n <= 6; ++n)
        for (int d = 1; d <= 4; ++d)
            for (int r = 1; r <= 3; ++r) {
                auto g = integral_closed(d, n, r);
                REQUIRE(g);
                for (const auto& [i, a] : *g) {
                    CHECK(i >= n);
                    CHECK(i <= n * d);
                }
                for (const auto& [i, v] : char2_all(d, n, r)) {
                    CHECK(i >= n);
                    CHECK(i <= n * d);
                }
            }
}

TEST_CASE("char 2 recursion") {
    CHECK(char2_correction_dim(3, 10, 2) == 6);
    CHECK(char2_correction_dim(3, 3, 5) == 5);
    auto bad = char2_recursion_check(6);
    for (const auto& b : bad) MESSAGE("n=" << b.n << " i=" << b.i << " r=" << b.r << " " << b.expected << " vs " << b.got);
    CHECK(bad.empty());
}

TEST_CASE("universal coefficients") {
    for (int n = 1; n <= 4; ++n)
        for (int r = 1; r <= 3; ++r) {
            auto bad = uct_check(n, r);
            for (const auto& b : bad) MESSAGE("n=" << b.n << " i=" << b.i << " r=" << b.r);
            CHECK(bad.empty());
        }
}

TEST_CASE("functor expressions") {
    CHECK(eval_functor_expr("A/2", 3) == el(2, 3));
    CHECK(eval_functor_expr("A * A/3", 2) == el(3, 4));
    CHECK(eval_functor_expr("G2Z + A*A/3", 1) == AbGroupType::cyclic(12));
    CHECK(eval_functor_expr("Phi4 + A/5", 1) == AbGroupType::cyclic(10));
    CHECK(eval_functor_expr("L4", 5) == AbGroupType::free(5));
    CHECK(eval_functor_expr("0", 2).is_zero());
    CHECK_THROWS_AS(eval_functor_expr("Q7", 2), InputError);
}
