#include "derfun.h"

#include "doctest.h"
#include "json.hpp"

#include <string>

namespace {

struct Ctx {
    derfun_ctx* c = derfun_ctx_new();
    ~Ctx() { derfun_ctx_free(c); }
};

nlohmann::json take(derfun_result* r) {
    auto j = nlohmann::json::parse(derfun_result_text(r));
    derfun_result_free(r);
    return j;
}

}  // namespace

TEST_CASE("c api: derive") {
    Ctx ctx;
    derfun_result* r = nullptr;
    REQUIRE(derfun_derive(ctx.c, "gamma", 4, 2, 1, "closed-form", 4, 0, &r) == DERFUN_OK);
    auto j = take(r);
    CHECK(j["functor"] == "Gamma^4");
    CHECK(j["engine"] == "closed-form");
    CHECK(j["groups"]["4"]["torsion"] == nlohmann::json::array({12}));
    CHECK(j["groups"]["4"]["free_rank"] == 0);

    REQUIRE(derfun_derive(ctx.c, "gamma", 2, 1, 1, "both", -1, 0, &r) == DERFUN_OK);
    CHECK(derfun_result_passed(r) == 1);
    j = take(r);
    CHECK(j["agree"] == true);
    CHECK(j["groups"].size() == 1);
}

TEST_CASE("c api: refusals and errors") {
    Ctx ctx;
    derfun_result* r = nullptr;
    REQUIRE(derfun_derive(ctx.c, "gamma", 4, 3, 1, "integer", -1, 0, &r) == DERFUN_E_BUDGET);
    REQUIRE(r != nullptr);
    CHECK(derfun_result_passed(r) == 0);
    auto j = take(r);
    CHECK(j["error"]["kind"] == "budget");
    CHECK(j["error"]["predicted"]["ranks"].size() > 0);
    CHECK(std::string(derfun_last_error(ctx.c)).find("budget") != std::string::npos);

    CHECK(derfun_derive(ctx.c, "delta", 2, 1, 1, "integer", -1, 0, &r) == DERFUN_E_INPUT);
    CHECK(r == nullptr);
    CHECK(derfun_derive(ctx.c, "gamma", 5, 3, 1, "closed-form", -1, 0, &r) == DERFUN_E_INPUT);
    CHECK(derfun_table(ctx.c, "appendix-z", 1, -1, -1, -1, -1, &r) == DERFUN_E_INPUT);
    CHECK(derfun_stable(ctx.c, 1, 41, &r) == DERFUN_E_INPUT);
    CHECK(derfun_derive(nullptr, "gamma", 2, 1, 1, "integer", -1, 0, &r) == DERFUN_E_ARG);
    CHECK(derfun_derive(ctx.c, "gamma", 2, 1, 1, "integer", -1, 0, nullptr) == DERFUN_E_ARG);
    CHECK(derfun_set_budget(nullptr, 1, 1) == DERFUN_E_ARG);
}

TEST_CASE("c api: table csv") {
    Ctx ctx;
    derfun_result* r = nullptr;
    REQUIRE(derfun_table(ctx.c, "appendix-b", 1, 3, 3, 4, 4, &r) == DERFUN_OK);
    CHECK(std::string(derfun_result_text(r)) == "n,i,group,engine\n3,4,Z/3,closed-form+koszul-cycles\n");
    derfun_result_free(r);
}

TEST_CASE("c api: stable and verify") {
    Ctx ctx;
    derfun_result* r = nullptr;
    REQUIRE(derfun_stable(ctx.c, 1, 4, &r) == DERFUN_OK);
    auto j = take(r);
    CHECK(j["groups"]["2"]["torsion"] == nlohmann::json::array({2}));
    CHECK(j["groups"]["4"]["torsion"] == nlohmann::json::array({6}));
    bool has_sgss = false;
    for (const auto& w : j["words"]) has_sgss = has_sgss || w["word"] == "sgss";
    CHECK(has_sgss);

    REQUIRE(derfun_verify(ctx.c, "stable", 4, 2, &r) == DERFUN_OK);
    CHECK(derfun_result_passed(r) == 1);
    j = take(r);
    CHECK(j["passed"] == true);
    CHECK(j["checks"].size() == j["count"]);
    CHECK(derfun_verify(ctx.c, "nope", 4, 2, &r) == DERFUN_E_INPUT);
}
