#include "derfun/doldkan.hpp"

#include "doctest.h"

using namespace derfun;

namespace {

const FunctorExpr G1 = FunctorExpr::gamma(1);
const FunctorExpr G2 = FunctorExpr::gamma(2);

AbGroupType el(long p, std::uint64_t k) { return AbGroupType::elementary(p, k); }

}  // namespace

TEST_CASE("ranks of K") {
    auto k = kan_of_shift(1, 2, 5);
    CHECK(k.rank(3) == 3);
    CHECK(k.rank(1) == 0);
    CHECK(kan_of_shift(1, 1, 6).rank(6) == 6);
    CHECK(kan_of_shift(3, 2, 5).rank(4) == 18);
}

TEST_CASE("simplicial identities hold") {
    kan_of_shift(2, 2, 6).validate();
    kan_of_shift(1, 0, 4).validate();
    kan_of_shift(1, 3, 6).validate();
    kan_of_two_term(IntMatrix::from_dense({{2, 1}, {0, 3}}), 1, 5).validate();
    kan_of_two_term(IntMatrix::from_dense({{2}}), 0, 5).validate();
}

TEST_CASE("normalized chains of K recover the complex") {
    auto k = kan_of_shift(1, 2, 5);
    auto c = moore_or_normalized(k, G1, ChainMode::Normalized);
    for (int m = c.lo(); m <= c.hi(); ++m) CHECK(c.rank(m) == (m == 2 ? 1u : 0u));
    auto h = homology(moore_or_normalized(k, G1, ChainMode::Moore));
    CHECK(h[2] == AbGroupType::free(1));
    for (int m = 0; m < 5; ++m)
        if (m != 2) CHECK(h[m].is_zero());
}

TEST_CASE("two-term complexes") {
    auto f0 = IntMatrix(1, 0);
    CHECK(derived_of_complex(G1, IntMatrix::from_dense({{2}}), 0, 0) == AbGroupType::cyclic(2));
    CHECK(derived_of_complex(G1, IntMatrix::from_dense({{3}}), 0, 0) == AbGroupType::cyclic(3));
    CHECK(derived_of_complex(G1, IntMatrix::from_dense({{3}}), 0, 1).is_zero());
    CHECK(derived_of_complex(G2, IntMatrix::from_dense({{2}}), 0, 0) == AbGroupType::cyclic(4));
    auto two = IntMatrix::from_dense({{2, 0}, {0, 2}});
    CHECK(derived_of_complex(FunctorExpr::lambda(2), two, 0, 0) == AbGroupType::cyclic(2));
    CHECK(derived_of_complex(FunctorExpr::lambda(2), two, 0, 1) == el(2, 3));
    CHECK(derived_of_complex(G1, f0, 0, 0) == AbGroupType::free(1));
}

TEST_CASE("derived functors of Gamma on free modules") {
    CHECK(derived_functor(G2, 1, 1, 1) == AbGroupType::cyclic(2));
    CHECK(derived_functor(G2, 2, 1, 2) == AbGroupType::free(1));
    CHECK(derived_functor(FunctorExpr::gamma(4), 2, 1, 3) == el(2, 5));
    for (int n = 0; n <= 3; ++n) {
        for (std::size_t r = 1; r <= 3; ++r) {
            for (int i = 0; i <= 4; ++i) {
                REQUIRE(derived_functor(G1, r, n, i) == (i == n ? AbGroupType::free(r) : AbGroupType{}));
            }
        }
    }
}

TEST_CASE("moore and normalized chains agree") {
    auto k = kan_of_shift(1, 1, 4);
    auto a = homology(moore_or_normalized(k, G2, ChainMode::Moore));
    auto b = homology(moore_or_normalized(k, G2, ChainMode::Normalized));
    for (int i = 0; i < 4; ++i) REQUIRE(a[i] == b[i]);
    for (int m = 0; m <= 2; ++m) {
        auto ka = kan_of_shift(2, 1, 4);
        REQUIRE(moore_or_normalized(ka, FunctorExpr::lambda(2), ChainMode::Normalized).rank(m) <=
                moore_or_normalized(ka, FunctorExpr::lambda(2), ChainMode::Moore).rank(m));
    }
    EngineOptions moore;
    moore.mode = ChainMode::Moore;
    auto f = IntMatrix::from_dense({{2, 1}, {0, 2}});
    for (int i = 0; i <= 4; ++i) {
        REQUIRE(derived_of_complex(FunctorExpr::sym(2), f, 0, i, moore) ==
                derived_of_complex(FunctorExpr::sym(2), f, 0, i));
    }
}

TEST_CASE("vanishing window and top degree") {
    for (int d = 1; d <= 3; ++d) {
        for (int n = 1; n <= 2; ++n) {
            for (std::size_t r = 1; r <= 2; ++r) {
                auto all = derived_functor_all(FunctorExpr::gamma(d), r, n);
                for (const auto& [i, g] : all) {
                    REQUIRE(i >= n);
                    REQUIRE(i <= n * d);
                }
                auto top = n % 2 ? FunctorExpr::lambda(d) : FunctorExpr::gamma(d);
                AbGroupType expect = AbGroupType::free(eval_dim(top, r));
                REQUIRE(derived_functor(FunctorExpr::gamma(d), r, n, n * d) == expect);
            }
        }
    }
}

TEST_CASE("decalage in weight two") {
    for (std::size_t r = 1; r <= 2; ++r) {
        auto a = derived_functor_all(G2, r, 1);
        auto b = derived_functor_all(FunctorExpr::lambda(2), r, 2);
        auto c = derived_functor_all(FunctorExpr::sym(2), r, 3);
        CHECK(same_groups(shift(a, 2), b));
        CHECK(same_groups(shift(a, 4), c));
    }
}

TEST_CASE("truncation independence in Moore mode") {
    EngineOptions a, b;
    a.mode = b.mode = ChainMode::Moore;
    a.truncation = 5;
    b.truncation = 6;
    for (int i = 0; i < 5; ++i) CHECK(derived_functor(G2, 2, 2, i, a) == derived_functor(G2, 2, 2, i, b));
}

TEST_CASE("results do not depend on the thread count") {
    auto k = kan_of_shift(2, 2, 8);
    EngineOptions one, four;
    four.threads = 4;
    auto a = moore_or_normalized(k, FunctorExpr::gamma(3), ChainMode::Normalized, one);
    auto b = moore_or_normalized(k, FunctorExpr::gamma(3), ChainMode::Normalized, four);
    for (int m = a.lo() + 1; m <= a.hi(); ++m) REQUIRE(a.differential(m) == b.differential(m));
}

TEST_CASE("budget refusal") {
    CHECK_THROWS_AS(derived_functor_all(FunctorExpr::gamma(4), 1, 3), BudgetExceeded);
    auto p = predict(FunctorExpr::gamma(4), IntMatrix(1, 0), 3, ChainMode::Normalized, 0, 12, Budget{});
    CHECK_FALSE(p.feasible);
    CHECK(p.reason.find("exceeds cap") != std::string::npos);
}

TEST_CASE("mod p dimensions") {
    auto d = derived_dims_mod_p(G2, 1, 1, 2);
    CHECK(d[1] == 1);
    CHECK(d[2] == 1);
    CHECK(d.size() == 2);
}
