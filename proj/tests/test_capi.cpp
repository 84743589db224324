#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rtslearn/rtslearn.h"

#include <cstring>
#include <string>
#include <thread>

namespace {

const char* kConfig = R"({"alpha": 0.5, "horizon": 20, "labor_supply": 10, "seed": 4,
  "sectors": [{"zeta_star": 0.5, "sigma": 0.1, "tau": 0.1, "zeta0": 0.1}]})";

}  // namespace

TEST_CASE("config handles") {
    rts_config* c = nullptr;
    REQUIRE(rts_config_from_json(kConfig, &c) == RTS_OK);
    const char* text = nullptr;
    REQUIRE(rts_config_to_json(c, &text) == RTS_OK);
    CHECK(std::string(text).find("\"seed\": 4") != std::string::npos);
    CHECK(rts_config_set_seed(c, 11) == RTS_OK);
    rts_config_to_json(c, &text);
    CHECK(std::string(text).find("\"seed\": 11") != std::string::npos);
    rts_config_free(c);

    rts_config* bad = nullptr;
    CHECK(rts_config_from_json("{\"alpha\": 2}", &bad) == RTS_ERR_CONFIG);
    CHECK(bad == nullptr);
    CHECK(std::strlen(rts_last_error()) > 0);
    CHECK(rts_config_from_json(nullptr, &bad) == RTS_ERR_ARGUMENT);
    CHECK(rts_config_set_seed(nullptr, 1) == RTS_ERR_ARGUMENT);
    rts_config_free(nullptr);
    rts_result_free(nullptr);
}

TEST_CASE("simulate, ensemble and moments") {
    rts_config* c = nullptr;
    REQUIRE(rts_config_from_json(kConfig, &c) == RTS_OK);
    rts_result* r = nullptr;
    REQUIRE(rts_simulate(c, 0, &r) == RTS_OK);
    REQUIRE(rts_result_count(r) == 1);
    CHECK(std::string(rts_result_name(r, 0)) == "trajectory");
    CHECK(std::string(rts_result_csv(r, 0)).rfind("t,sector,w,l,x,p,zeta,zeta_hat,gdp,labor_share", 0) == 0);
    CHECK(rts_result_csv(r, 5) == nullptr);
    rts_result_free(r);

    rts_result *e1 = nullptr, *e2 = nullptr;
    REQUIRE(rts_ensemble(c, 16, 1, &e1) == RTS_OK);
    REQUIRE(rts_ensemble(c, 16, 4, &e2) == RTS_OK);
    REQUIRE(rts_result_count(e1) == rts_result_count(e2));
    for (size_t i = 0; i < rts_result_count(e1); ++i)
        CHECK(std::string(rts_result_csv(e1, i)) == rts_result_csv(e2, i));
    CHECK(std::string(rts_result_summary_json(e1)).find("mean_abs_err") != std::string::npos);
    rts_result_free(e1);
    rts_result_free(e2);
    CHECK(rts_ensemble(c, 0, 1, &e1) == RTS_ERR_ARGUMENT);

    REQUIRE(rts_moments(c, &r) == RTS_OK);
    CHECK(std::string(rts_result_name(r, 0)) == "moments");
    rts_result_free(r);
    rts_config_free(c);
}

TEST_CASE("scenarios and high-dimensional runs") {
    CHECK(rts_scenario_count() == 6);
    CHECK(rts_scenario_name(100) == nullptr);
    rts_result* r = nullptr;
    CHECK(rts_scenario("nope", 1, 10, 1, 0, &r) == RTS_ERR_ARGUMENT);
    CHECK(r == nullptr);
    REQUIRE(rts_scenario("appendixE", 1, 10, 1, 20, &r) == RTS_OK);
    CHECK(rts_result_count(r) == 2);
    rts_result_free(r);

    const char* hd = R"({"beta_star": [[0.3, 0.2], [0.1, 0.4]], "phi": 0.5, "sigma": 0.1, "tau": 0.5, "horizon": 10})";
    REQUIRE(rts_highdim(hd, 1, 9, &r) == RTS_OK);
    CHECK(std::string(rts_result_summary_json(r)).find("\"seed\": 9") != std::string::npos);
    rts_result_free(r);
    CHECK(rts_highdim("{\"beta_star\": 3}", 0, 0, &r) == RTS_ERR_CONFIG);
}

TEST_CASE("numerical failures map to their own code") {
    const char* cfg = R"({"alpha": 0.01, "horizon": 3, "labor_supply": 1e300, "l0": 0,
      "sectors": [{"zeta_star": 0.5, "sigma": 0.1, "tau": 0.1, "zeta0": 0.1}]})";
    rts_config* c = nullptr;
    REQUIRE(rts_config_from_json(cfg, &c) == RTS_OK);
    rts_result* r = nullptr;
    CHECK(rts_simulate(c, 0, &r) == RTS_ERR_NUMERIC);
    CHECK(std::string(rts_last_error()).find("period") != std::string::npos);
    rts_config_free(c);
}

TEST_CASE("last error is per thread") {
    rts_config* bad = nullptr;
    CHECK(rts_config_from_json("{", &bad) == RTS_ERR_CONFIG);
    std::string other;
    std::thread th([&] { other = rts_last_error(); });
    th.join();
    CHECK(other.empty());
    CHECK(std::strlen(rts_last_error()) > 0);
}
