#include "derfun.h"

#include "CLI11.hpp"

#include <cstdio>
#include <string>
#include <vector>

namespace {

int exit_code(derfun_status s) {
    switch (s) {
        case DERFUN_OK: return 0;
        case DERFUN_E_INPUT:
        case DERFUN_E_ARG: return 2;
        case DERFUN_E_BUDGET: return 3;
        default: return 4;
    }
}

std::string quoted(const std::string& s) {
    std::string o = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') o += '\\';
        o += c;
    }
    return o + "\"";
}

/// Prints the result (or an error object) and maps the outcome to an exit code.
int finish(derfun_ctx* ctx, derfun_status s, derfun_result* res) {
    if (res) std::printf("%s\n", derfun_result_text(res));
    int code = exit_code(s);
    if (s != DERFUN_OK && !res)
        std::printf("{\"error\":{\"status\":%d,\"message\":%s}}\n", int(s), quoted(derfun_last_error(ctx)).c_str());
    if (s != DERFUN_OK) std::fprintf(stderr, "error: %s\n", derfun_last_error(ctx));
    if (s == DERFUN_OK && !derfun_result_passed(res)) code = 1;
    derfun_result_free(res);
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Derived functors of Gamma, Lambda and Sym on free abelian groups"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value file; flags override it");

    unsigned long long max_rank = 50000, max_nonzeros = 10000000;
    unsigned threads = 1;
    std::vector<unsigned> primes{2};
    app.add_option("--max-rank", max_rank, "cap on any predicted chain rank")->capture_default_str();
    app.add_option("--max-nonzeros", max_nonzeros, "cap on predicted differential nonzeros")->capture_default_str();
    app.add_option("--threads", threads, "worker threads, 0 for all cores")->capture_default_str();
    app.add_option("--primes", primes, "primes for the mod-p engine")->delimiter(',');

    auto* derive = app.add_subcommand("derive", "L_*F^d(Z^r, n) as JSON");
    derive->fallthrough();
    std::string family = "gamma", engine = "closed-form";
    int d = 2, n = 1, rank = 1, degree = -1;
    derive->add_option("--functor", family, "gamma, lambda or sym")
        ->check(CLI::IsMember({"gamma", "lambda", "sym"}))
        ->capture_default_str();
    derive->add_option("--d", d, "weight")->required();
    derive->add_option("--n", n, "shift")->required();
    derive->add_option("--rank", rank)->capture_default_str();
    derive->add_option("--degree", degree, "report one degree only");
    derive->add_option("--engine", engine)
        ->check(CLI::IsMember({"integer", "mod-p", "closed-form", "both"}))
        ->capture_default_str();

    auto* table = app.add_subcommand("table", "Appendix tables as CSV");
    table->fallthrough();
    std::string which;
    int t_rank = 1, n_lo = -1, n_hi = -1, i_lo = -1, i_hi = -1;
    table->add_option("which", which)->required()->check(CLI::IsMember({"appendix-b", "appendix-c"}));
    table->add_option("--rank", t_rank)->capture_default_str();
    table->add_option("--n-min", n_lo);
    table->add_option("--n-max", n_hi);
    table->add_option("--i-min", i_lo);
    table->add_option("--i-max", i_hi);

    auto* verify = app.add_subcommand("verify", "Run a cross-check suite");
    verify->fallthrough();
    std::string suite;
    int v_d = 4, v_rank = 2;
    verify->add_option("suite", suite)
        ->required()
        ->check(CLI::IsMember({"koszul", "closedform", "stable", "conjecture", "brute-cross"}));
    verify->add_option("--d", v_d)->capture_default_str();
    verify->add_option("--max-rank", v_rank)->capture_default_str();

    auto* stable = app.add_subcommand("stable", "Stable homology with word provenance");
    stable->fallthrough();
    int s_rank = 1, s_imax = 10;
    stable->add_option("--rank", s_rank)->capture_default_str();
    stable->add_option("--i-max", s_imax)->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    derfun_ctx* ctx = derfun_ctx_new();
    derfun_set_budget(ctx, max_rank, max_nonzeros);
    derfun_set_threads(ctx, threads);
    int code = 0;
    if (*derive) {
        if (engine == "mod-p") {
            for (unsigned p : primes) {
                derfun_result* res = nullptr;
                auto s = derfun_derive(ctx, family.c_str(), d, n, rank, engine.c_str(), degree, p, &res);
                code = std::max(code, finish(ctx, s, res));
            }
        } else {
            derfun_result* res = nullptr;
            auto s = derfun_derive(ctx, family.c_str(), d, n, rank, engine.c_str(), degree, 0, &res);
            code = finish(ctx, s, res);
        }
    } else if (*table) {
        derfun_result* res = nullptr;
        auto s = derfun_table(ctx, which.c_str(), t_rank, n_lo, n_hi, i_lo, i_hi, &res);
        if (res) {
            std::fputs(derfun_result_text(res), stdout);
            derfun_result_free(res);
            res = nullptr;
            code = 0;
        } else {
            code = finish(ctx, s, nullptr);
        }
    } else if (*verify) {
        derfun_result* res = nullptr;
        auto s = derfun_verify(ctx, suite.c_str(), v_d, v_rank, &res);
        code = finish(ctx, s, res);
    } else if (*stable) {
        derfun_result* res = nullptr;
        auto s = derfun_stable(ctx, s_rank, s_imax, &res);
        code = finish(ctx, s, res);
    }
    derfun_ctx_free(ctx);
    return code;
}
