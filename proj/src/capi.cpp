#include "derfun.h"

#include "derfun/cartan.hpp"
#include "derfun/closedform.hpp"
#include "derfun/doldkan.hpp"
#include "derfun/polyfunc.hpp"
#include "derfun/suites.hpp"
#include "derfun/tables.hpp"

#include "json.hpp"

#include <optional>
#include <sstream>
#include <string>

using json = nlohmann::ordered_json;
using namespace derfun;

struct derfun_ctx {
    EngineOptions opts;
    std::string error;
};

struct derfun_result {
    std::string text;
    bool passed = true;
};

namespace {

json int_json(const Int& v) {
    if (v.fits_slong_p()) return v.get_si();
    return v.get_str();
}

json group_json(const AbGroupType& a) {
    json t = json::array();
    for (const auto& f : a.torsion) t.push_back(int_json(f));
    return {{"free_rank", a.free_rank}, {"torsion", t}, {"text", a.to_string()}};
}

json graded_json(const GradedGroup& g, int degree) {
    json out = json::object();
    if (degree >= 0) {
        auto it = g.find(degree);
        out[std::to_string(degree)] = group_json(it == g.end() ? AbGroupType{} : it->second);
        return out;
    }
    for (const auto& [i, a] : normalized(g)) out[std::to_string(i)] = group_json(a);
    return out;
}

std::optional<Family> parse_family(const std::string& s) {
    if (s == "gamma") return Family::Gamma;
    if (s == "lambda") return Family::Lambda;
    if (s == "sym") return Family::Sym;
    return std::nullopt;
}

std::string family_name(Family f) { return f == Family::Gamma ? "Gamma" : f == Family::Lambda ? "Lambda" : "Sym"; }

/// Closed forms through the decalage shifts L Lambda^d(A, n) = L Gamma^d(A, n-1)[d]
/// and L S^d(A, n) = L Lambda^d(A, n-1)[d].
std::optional<std::pair<GradedGroup, std::string>> closed_for(Family f, int d, int n, int r) {
    int m = n, by = 0;
    if (f == Family::Lambda && n >= 1) m = n - 1, by = d;
    if (f == Family::Sym && n >= 2) m = n - 2, by = 2 * d;
    if (f == Family::Sym && n == 1) {
        return std::make_pair(GradedGroup{{d, AbGroupType::free(binomial(r, d).get_ui())}}, std::string("closed-form"));
    }
    if (f != Family::Gamma && m == n) {
        // n = 0: F^d of a free module
        return std::make_pair(GradedGroup{{0, AbGroupType::free(eval_dim(FunctorExpr::power(f, d), std::size_t(r)))}},
                              std::string("closed-form"));
    }
    auto g = integral_closed(d, m, r);
    if (!g) return std::nullopt;
    std::string tag = m == 1 && d >= 2 ? "koszul-cycles" : "closed-form";
    return std::make_pair(normalized(shift(*g, by)), tag);
}

derfun_result* make(std::string text, bool passed) { return new derfun_result{std::move(text), passed}; }

template <class F>
derfun_status guarded(derfun_ctx* ctx, F&& body) {
    if (!ctx) return DERFUN_E_ARG;
    ctx->error.clear();
    try {
        return body();
    } catch (const InputError& e) {
        ctx->error = e.what();
        return DERFUN_E_INPUT;
    } catch (const StructuralError& e) {
        ctx->error = e.what();
        return DERFUN_E_STRUCTURAL;
    } catch (const std::exception& e) {
        ctx->error = e.what();
        return DERFUN_E_INTERNAL;
    }
}

}  // namespace

extern "C" {

derfun_ctx* derfun_ctx_new(void) { return new (std::nothrow) derfun_ctx{}; }

void derfun_ctx_free(derfun_ctx* ctx) { delete ctx; }

derfun_status derfun_set_budget(derfun_ctx* ctx, unsigned long long max_rank, unsigned long long max_nonzeros) {
    if (!ctx) return DERFUN_E_ARG;
    ctx->opts.budget.max_rank = std::size_t(max_rank);
    ctx->opts.budget.max_nonzeros = std::size_t(max_nonzeros);
    return DERFUN_OK;
}

derfun_status derfun_set_threads(derfun_ctx* ctx, unsigned threads) {
    if (!ctx) return DERFUN_E_ARG;
    ctx->opts.threads = threads;
    return DERFUN_OK;
}

const char* derfun_last_error(const derfun_ctx* ctx) { return ctx ? ctx->error.c_str() : ""; }

derfun_status derfun_derive(derfun_ctx* ctx, const char* family, int d, int n, int rank, const char* engine,
                            int degree, unsigned prime, derfun_result** out) {
    if (!family || !engine || !out) return DERFUN_E_ARG;
    *out = nullptr;
    return guarded(ctx, [&]() -> derfun_status {
        auto fam = parse_family(family);
        if (!fam) throw InputError(std::string("unknown functor family '") + family + "'");
        if (d < 0 || n < 0 || rank < 1) throw InputError("need d >= 0, n >= 0, rank >= 1");
        std::string mode = engine;
        auto F = FunctorExpr::power(*fam, d);
        json j{{"functor", family_name(*fam) + "^" + std::to_string(d)}, {"n", n}, {"rank", rank}};
        try {
            if (mode == "mod-p") {
                if (!is_prime(prime)) throw InputError("mod-p needs a prime");
                auto dims = derived_dims_mod_p(F, std::size_t(rank), n, prime, ctx->opts);
                json g = json::object();
                for (const auto& [i, k] : dims)
                    if ((degree < 0 && k) || i == degree) g[std::to_string(i)] = {{"dim", k}};
                if (degree >= 0 && !g.contains(std::to_string(degree))) g[std::to_string(degree)] = {{"dim", 0}};
                j["engine"] = "dold-kan-mod-p";
                j["prime"] = prime;
                j["groups"] = g;
                *out = make(j.dump(), true);
                return DERFUN_OK;
            }
            std::optional<GradedGroup> brute;
            std::optional<std::pair<GradedGroup, std::string>> closed;
            if (mode == "integer" || mode == "both") {
                if (degree >= 0)
                    brute = GradedGroup{{degree, derived_functor(F, std::size_t(rank), n, degree, ctx->opts)}};
                else
                    brute = derived_functor_all(F, std::size_t(rank), n, ctx->opts);
            }
            if (mode == "closed-form" || mode == "both") {
                closed = closed_for(*fam, d, n, rank);
                if (!closed) throw InputError("no closed form for this functor, degree and n");
            }
            if (!brute && !closed) throw InputError("unknown engine '" + mode + "'");
            bool agree = true;
            if (brute && closed) {
                GradedGroup c = closed->first;
                if (degree >= 0) c = GradedGroup{{degree, c.count(degree) ? c.at(degree) : AbGroupType{}}};
                agree = same_groups(*brute, c);
                j["engine"] = "dold-kan-integer+" + closed->second;
                j["agree"] = agree;
            } else {
                j["engine"] = brute ? "dold-kan-integer" : closed->second;
            }
            j["groups"] = graded_json(brute ? *brute : closed->first, degree);
            *out = make(j.dump(), agree);
            return DERFUN_OK;
        } catch (const BudgetExceeded& e) {
            json pr = json::object();
            for (const auto& [i, k] : e.prediction.ranks) pr[std::to_string(i)] = int_json(k);
            j["error"] = {{"kind", "budget"},
                          {"message", e.what()},
                          {"predicted", {{"ranks", pr}, {"nonzeros", int_json(e.prediction.nonzeros)}}},
                          {"caps", {{"max_rank", ctx->opts.budget.max_rank}, {"max_nonzeros", ctx->opts.budget.max_nonzeros}}}};
            *out = make(j.dump(), false);
            ctx->error = e.what();
            return DERFUN_E_BUDGET;
        }
    });
}

derfun_status derfun_table(derfun_ctx* ctx, const char* which, int rank, int n_lo, int n_hi, int i_lo, int i_hi,
                           derfun_result** out) {
    if (!which || !out) return DERFUN_E_ARG;
    *out = nullptr;
    return guarded(ctx, [&]() -> derfun_status {
        std::string w = which;
        bool b = w == "appendix-b";
        if (!b && w != "appendix-c") throw InputError("unknown table '" + w + "'");
        if (rank < 1) throw InputError("rank must be positive");
        if (n_lo < 0) n_lo = 1;
        if (n_hi < 0) n_hi = b ? 11 : 4;
        if (i_lo < 0) i_lo = 0;
        if (i_hi < 0) i_hi = b ? 10 : 12;
        std::ostringstream s;
        s << "n,i,group,engine\n";
        for (int n = n_lo; n <= n_hi; ++n)
            for (int i = i_lo; i <= i_hi; ++i) {
                Cell c = b ? appendix_b_cell(n, i, rank, ctx->opts) : appendix_c_cell(n, i, rank);
                s << n << ',' << i << ',' << c.group.to_string() << ',' << c.engine << '\n';
            }
        *out = make(s.str(), true);
        return DERFUN_OK;
    });
}

derfun_status derfun_verify(derfun_ctx* ctx, const char* suite, int d, int max_rank, derfun_result** out) {
    if (!suite || !out) return DERFUN_E_ARG;
    *out = nullptr;
    return guarded(ctx, [&]() -> derfun_status {
        SuiteOptions o;
        o.d = d;
        o.max_rank = max_rank;
        o.engine = ctx->opts;
        if (d < 1 || d > 4) throw InputError("conjecture checks need 1 <= d <= 4");
        if (max_rank < 1) throw InputError("max-rank must be positive");
        auto checks = run_suite(suite, o);
        bool all = true;
        json arr = json::array();
        for (const auto& c : checks) {
            all = all && c.pass;
            arr.push_back({{"name", c.name}, {"params", c.params}, {"pass", c.pass}, {"detail", c.detail}});
        }
        json j{{"suite", suite}, {"passed", all}, {"count", checks.size()}, {"checks", arr}};
        *out = make(j.dump(), all);
        return DERFUN_OK;
    });
}

derfun_status derfun_stable(derfun_ctx* ctx, int rank, int i_max, derfun_result** out) {
    if (!out) return DERFUN_E_ARG;
    *out = nullptr;
    return guarded(ctx, [&]() -> derfun_status {
        if (rank < 1) throw InputError("rank must be positive");
        if (i_max < 0 || i_max > 40) throw InputError("i_max must lie in [0, 40]");
        auto h = stable_homology(rank, i_max);
        json terms = json::array();
        for (const auto& t : stable_terms(rank, i_max))
            terms.push_back({{"degree", t.degree}, {"p", t.p}, {"word", t.word}, {"group", t.group.to_string()}});
        json g = json::object();
        for (int i = 0; i <= i_max; ++i) g[std::to_string(i)] = group_json(h.count(i) ? h.at(i) : AbGroupType{});
        json j{{"rank", rank}, {"i_max", i_max}, {"engine", "stable"}, {"groups", g}, {"words", terms}};
        *out = make(j.dump(), true);
        return DERFUN_OK;
    });
}

const char* derfun_result_text(const derfun_result* res) { return res ? res->text.c_str() : ""; }

int derfun_result_passed(const derfun_result* res) { return res && res->passed ? 1 : 0; }

void derfun_result_free(derfun_result* res) { delete res; }

}  // extern "C"
