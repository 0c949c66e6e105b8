#include "derfun/suites.hpp"

#include "derfun/cartan.hpp"
#include "derfun/closedform.hpp"
#include "derfun/conjecture.hpp"
#include "derfun/koszul.hpp"
#include "derfun/polyfunc.hpp"

#include <functional>
#include <set>

namespace derfun {

namespace {

using Params = std::map<std::string, long>;

struct Runner {
    std::vector<Check> out;

    void run(std::string name, Params params, const std::function<std::string()>& body) {
        Check c{std::move(name), std::move(params), false, {}};
        try {
            c.detail = body();
            c.pass = c.detail.empty();
        } catch (const std::exception& e) {
            c.detail = std::string("exception: ") + e.what();
        }
        out.push_back(std::move(c));
    }
};

std::string diff(const GradedGroup& a, const GradedGroup& b) {
    if (same_groups(a, b)) return {};
    std::string s = "expected {";
    for (const auto& [i, g] : normalized(a)) s += " " + std::to_string(i) + ":" + g.to_string();
    s += " } got {";
    for (const auto& [i, g] : normalized(b)) s += " " + std::to_string(i) + ":" + g.to_string();
    return s + " }";
}

std::string mismatches(const std::vector<RecursionMismatch>& bad) {
    if (bad.empty()) return {};
    const auto& b = bad.front();
    return std::to_string(bad.size()) + " mismatches, first n=" + std::to_string(b.n) + " i=" + std::to_string(b.i) +
           " r=" + std::to_string(b.r);
}

void koszul_suite(Runner& R) {
    for (std::uint32_t p : {2u, 3u, 5u})
        for (int d = 1; d <= 8; ++d)
            for (int r = 1; r <= 4; ++r)
                R.run("koszul-acyclic", {{"p", p}, {"d", d}, {"r", r}}, [=]() -> std::string {
                    auto w = koszul_weight_complex(p, d, r);
                    w.validate();
                    auto top = std::size_t(eval_dim(FunctorExpr::lambda(d), std::size_t(r)));
                    for (int i = w.complex.lo(); i <= w.complex.hi(); ++i) {
                        std::size_t want = i == d ? top : 0;
                        if (w.homology_dim(i) != want)
                            return "degree " + std::to_string(i) + ": " + std::to_string(w.homology_dim(i)) + " vs " +
                                   std::to_string(want);
                    }
                    return {};
                });
    for (int d = 1; d <= 8; ++d)
        for (int r = 1; r <= 4; ++r)
            R.run("skew-koszul-acyclic", {{"d", d}, {"r", r}}, [=]() -> std::string {
                auto w = skew_koszul_weight_complex(d, r);
                w.validate();
                auto top = std::size_t(eval_dim(FunctorExpr::lambda(d), std::size_t(r)));
                for (int i = w.complex.lo(); i <= w.complex.hi(); ++i)
                    if (w.homology_dim(i) != (i == d ? top : 0)) return "degree " + std::to_string(i);
                return {};
            });
    for (int d = 1; d <= 6; ++d)
        for (int r = 1; r <= 3; ++r)
            R.run("skew-vs-koszul-cycles", {{"d", d}, {"r", r}}, [=]() -> std::string {
                auto k = koszul_weight_complex(2, d, r);
                auto s = skew_koszul_weight_complex(d, r);
                for (int i = 0; i <= d; ++i)
                    if (k.dim(i) != s.dim(i)) return "term " + std::to_string(i);
                return {};
            });
}

void closedform_suite(Runner& R) {
    for (std::uint32_t p : {2u, 3u})
        for (int d = 2; d <= 6; ++d)
            for (int r = 1; r <= 3; ++r)
                R.run("up-to-filtration", {{"p", p}, {"d", d}, {"r", r}}, [=]() -> std::string {
                    auto f = uptofiltration_n1(d, p, r);
                    auto w = p == 2 ? skew_koszul_weight_complex(d, r) : koszul_weight_complex(p, d, r);
                    for (int i = 1; i < d; ++i) {
                        auto got = f.count(i) ? f.at(i) : 0;
                        if (got != cycles(w, i).dim) return "degree " + std::to_string(i);
                    }
                    return {};
                });
    for (int n = 3; n <= 8; ++n)
        for (int r = 1; r <= 4; ++r)
            R.run("gamma4-direct-vs-recursive", {{"n", n}, {"r", r}},
                  [=] { return diff(integral_gamma4_direct(n, r), integral_gamma4_recursive(n, r)); });
    R.run("char2-recursion", {{"n_max", 6}}, [] { return mismatches(char2_recursion_check(6)); });
    for (int n = 1; n <= 4; ++n)
        for (int r = 1; r <= 3; ++r)
            R.run("uct-bockstein", {{"n", n}, {"r", r}}, [=] { return mismatches(uct_check(n, r)); });
}

void stable_suite(Runner& R) {
    for (int r = 1; r <= 3; ++r)
        R.run("stable-words-vs-st", {{"r", r}, {"i_max", 24}},
              [=] { return diff(stable_homology_words(r, 24), stable_homology_st(r, 24)); });
    for (int r = 1; r <= 3; ++r)
        R.run("stable-gamma-weights", {{"r", r}, {"i_max", 16}}, [=] {
            GradedGroup sum;
            for (int d = 1; 2 * d - 2 <= 16; ++d)
                for (const auto& [j, a] : stable_gamma_d(d, r, 16))
                    if (j + 2 * d - 2 <= 16) add_into(sum, j + 2 * d - 2, a);
            return diff(stable_homology(r, 16), sum);
        });
    for (std::uint32_t p : {2u, 3u, 5u})
        R.run("xi-chi-bijection", {{"p", p}, {"max_degree", 24}}, [=]() -> std::string {
            std::set<AdmissibleWord> second, image;
            for (const auto& w : enumerate_words(p, 24, false)) {
                if (!w.first_type()) {
                    second.insert(w);
                    continue;
                }
                auto v = xi(w);
                if (word_stats(v).degree != word_stats(w).degree) return "xi changes degree at " + w.to_string();
                image.insert(v);
                if (w.restricted() && chi_inverse(chi(w)) != w) return "chi is not invertible at " + w.to_string();
            }
            return image == second ? "" : "xi is not onto the second type";
        });
}

void conjecture_suite(Runner& R, const SuiteOptions& o) {
    for (int r = 1; r <= o.max_rank; ++r)
        R.run("conjecture-vs-closed", {{"d", o.d}, {"r", r}, {"n_max", 5}}, [=]() -> std::string {
            auto bad = conjecture_check(o.d, 5, r);
            if (bad.empty()) return {};
            const auto& b = bad.front();
            return "n=" + std::to_string(b.n) + " s=" + std::to_string(b.s) + " p=" + std::to_string(b.p) + ": " +
                   b.expected + " vs " + b.got;
        });
    for (int r = 1; r <= o.max_rank; ++r)
        R.run("conjecture-n1-complex", {{"d", o.d}, {"r", r}}, [=]() -> std::string {
            auto rhs = conjecture_rhs(o.d, 1, r);
            for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
                if (long(p) > o.d) break;
                auto cx = n1_complex_homology(o.d, p, r);
                for (int s = 0; s <= o.d; ++s) {
                    auto a = cx.count(s) ? cx.at(s).p_order(p) : Int(1);
                    auto b = rhs.count(s) ? rhs.at(s).p_order(p) : Int(1);
                    if (a != b) return "p=" + std::to_string(p) + " s=" + std::to_string(s);
                }
            }
            return {};
        });
}

void brute_cross_suite(Runner& R, const SuiteOptions& o) {
    for (int d = 1; d <= 4; ++d)
        for (int r = 1; r <= o.max_rank; ++r)
            R.run("integral-n1-vs-dold-kan", {{"d", d}, {"r", r}}, [=] {
                return diff(integral_n1(d, r), derived_functor_all(FunctorExpr::gamma(d), std::size_t(r), 1, o.engine));
            });
    for (int d = 2; d <= 4; ++d)
        for (int n = 1; n <= 2; ++n)
            for (int r = 1; r <= o.max_rank; ++r)
                R.run("char2-vs-mod2-engine", {{"d", d}, {"n", n}, {"r", r}}, [=]() -> std::string {
                    auto want = char2_all(d, n, r);
                    auto got = derived_dims_mod_p(FunctorExpr::gamma(d), std::size_t(r), n, 2, o.engine);
                    for (int i = 0; i <= n * d + 1; ++i) {
                        auto a = want.count(i) ? want.at(i) : 0;
                        auto b = got.count(i) ? got.at(i) : 0;
                        if (a != b) return "degree " + std::to_string(i);
                    }
                    return {};
                });
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"koszul", "closedform", "stable", "conjecture", "brute-cross"};
    return names;
}

std::vector<Check> run_suite(const std::string& suite, const SuiteOptions& opts) {
    Runner R;
    if (suite == "koszul")
        koszul_suite(R);
    else if (suite == "closedform")
        closedform_suite(R);
    else if (suite == "stable")
        stable_suite(R);
    else if (suite == "conjecture")
        conjecture_suite(R, opts);
    else if (suite == "brute-cross")
        brute_cross_suite(R, opts);
    else
        throw InputError("unknown suite '" + suite + "'");
    return R.out;
}

}  // namespace derfun
