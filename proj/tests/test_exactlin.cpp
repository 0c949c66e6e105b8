#include "derfun/exactlin.hpp"

#include "doctest.h"

#include <random>

using namespace derfun;

namespace {

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, long lo, long hi) {
    std::uniform_int_distribution<long> d(lo, hi);
    std::vector<std::vector<long>> rows(r, std::vector<long>(c));
    for (auto& row : rows)
        for (auto& x : row) x = d(rng);
    return IntMatrix::from_dense(rows);
}

IntMatrix random_unimodular(std::mt19937_64& rng, std::size_t n) {
    IntMatrix u = IntMatrix::identity(n);
    std::uniform_int_distribution<std::size_t> idx(0, n - 1);
    std::uniform_int_distribution<long> mult(-3, 3);
    for (int k = 0; k < 3 * int(n); ++k) {
        std::size_t i = idx(rng), j = idx(rng);
        if (i == j) continue;
        std::vector<Entry> es;
        for (std::size_t t = 0; t < n; ++t) es.push_back({std::uint32_t(t), std::uint32_t(t), 1});
        es.push_back({std::uint32_t(i), std::uint32_t(j), mult(rng)});
        u = IntMatrix::from_triplets(n, n, es) * u;
    }
    return u;
}

}  // namespace

TEST_CASE("abelian group canonical form") {
    auto g = AbGroupType::from_factors(1, {Int(6), Int(4), Int(1)});
    CHECK(g.torsion == std::vector<Int>{2, 12});
    CHECK(g.to_string() == "Z ⊕ Z/2 ⊕ Z/12");
    CHECK(AbGroupType{}.to_string() == "0");
    CHECK(g.p_order(2) == 8);
    CHECK(g.mod_p_dim(2) == 3);
    CHECK(g.mod_p_dim(3) == 2);
    CHECK(g.p_torsion_dim(3) == 1);
    CHECK(AbGroupType::free(3).to_string() == "Z^3");
    CHECK((AbGroupType::cyclic(2) + AbGroupType::cyclic(3)) == AbGroupType::cyclic(6));
}

TEST_CASE("smith normal form small cases") {
    auto m = IntMatrix::from_dense({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}});
    auto s = smith_normal_form(m);
    CHECK(s.rank == 3);
    CHECK(s.factors == std::vector<Int>{2, 6, 12});
    CHECK(smith_normal_form(IntMatrix(3, 4)).rank == 0);
    CHECK(group_of_two_term(IntMatrix::from_dense({{2}})) == AbGroupType::cyclic(2));
    CHECK(group_of_two_term(IntMatrix::from_dense({{2, 0}, {0, 0}})) ==
          AbGroupType::from_factors(1, {Int(2)}));
}

TEST_CASE("sparse smith agrees with dense oracle on random matrices") {
    std::mt19937_64 rng(20260101);
    std::uniform_int_distribution<std::size_t> dim(1, 12);
    for (int trial = 0; trial < 500; ++trial) {
        auto m = random_matrix(rng, dim(rng), dim(rng), -4, 4);
        auto a = smith_normal_form(m), b = dense_smith_normal_form(m);
        REQUIRE(a.rank == b.rank);
        REQUIRE(a.factors == b.factors);
    }
}

TEST_CASE("smith invariants are unchanged by unimodular transforms") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t r = 2 + trial % 7, c = 2 + (trial * 5) % 8;
        auto m = random_matrix(rng, r, c, -6, 6);
        auto base = smith_normal_form(m);
        auto t = random_unimodular(rng, r) * m * random_unimodular(rng, c);
        auto s = smith_normal_form(t);
        REQUIRE(s.factors == base.factors);
    }
}

TEST_CASE("large entries promote to arbitrary precision") {
    Int big = Int(1) << 70;
    auto m = IntMatrix::from_triplets(2, 2, {{0, 0, big}, {1, 1, big * 3}, {0, 1, big + 1}});
    auto a = smith_normal_form(m), b = dense_smith_normal_form(m);
    CHECK(a.factors == b.factors);
}

TEST_CASE("fp rank counts factors prime to p") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        auto m = random_matrix(rng, 1 + trial % 9, 1 + (trial * 7) % 10, -4, 4);
        auto s = smith_normal_form(m);
        for (std::uint32_t p : {2u, 3u, 5u}) {
            std::size_t div = 0;
            for (const auto& f : s.factors)
                if (mpz_divisible_ui_p(f.get_mpz_t(), p)) ++div;
            REQUIRE(fp_rank(m, p) == s.rank - div);
        }
        REQUIRE(modular_rank(m) == s.rank);
    }
}

TEST_CASE("homology of small complexes") {
    // Z --(2)--> Z --(0)--> Z
    ChainComplex c(0, 2);
    for (int i = 0; i <= 2; ++i) c.set_rank(i, 1);
    c.set_differential(2, IntMatrix::from_dense({{0}}));
    c.set_differential(1, IntMatrix::from_dense({{2}}));
    c.validate();
    auto h = homology(c);
    CHECK(h[0] == AbGroupType::cyclic(2));
    CHECK(h[1].is_zero());
    CHECK(h[2] == AbGroupType::free(1));

    ChainComplex bad(0, 2);
    for (int i = 0; i <= 2; ++i) bad.set_rank(i, 1);
    bad.set_differential(2, IntMatrix::from_dense({{1}}));
    bad.set_differential(1, IntMatrix::from_dense({{1}}));
    CHECK_THROWS_AS(bad.validate(), StructuralError);

    ChainComplex f(0, 1, 2u);
    f.set_rank(0, 2);
    f.set_rank(1, 2);
    f.set_differential(1, IntMatrix::from_dense({{1, 1}, {1, 1}}, 2u));
    CHECK(homology_at(f, 0) == AbGroupType::elementary(2, 1));
    CHECK(homology_at(f, 1) == AbGroupType::elementary(2, 1));
}

TEST_CASE("kernel over F_p") {
    auto m = IntMatrix::from_dense({{1, 2, 3}, {2, 4, 6}}, 7u);
    auto k = fp_kernel(m, 7);
    CHECK(k.cols() == 2);
    CHECK((m * k).is_zero());
}

TEST_CASE("kronecker and block diagonal shapes") {
    auto a = IntMatrix::from_dense({{1, 2}, {3, 4}});
    auto b = IntMatrix::from_dense({{0, 1}});
    auto k = kronecker(a, b);
    CHECK(k.rows() == 2);
    CHECK(k.cols() == 4);
    CHECK(k.at(1, 3) == 4);
    auto d = block_diagonal({a, b});
    CHECK(d.rows() == 3);
    CHECK(d.cols() == 4);
    CHECK(d.at(2, 3) == 1);
}
