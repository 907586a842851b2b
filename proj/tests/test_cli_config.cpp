#include "doctest.h"

#include "config.hpp"

using namespace symspace;
using namespace symspace::cli;
using nlohmann::json;

namespace {

std::string error_path(const json& j) {
    try {
        parse_config(j);
    } catch (const ConfigError& e) {
        return e.path();
    }
    return "";
}

}  // namespace

TEST_CASE("valid configurations and defaults") {
    const RunConfig c = parse_config(json::parse(R"({"suite": "spherical-verify", "space": [4, 0]})"));
    CHECK(c.space.d == 5);
    CHECK(c.space.rho == 2.0);
    CHECK(c.grids.t_points == 640);
    const RunConfig n = parse_config(json::parse(R"({"suite": "norm-lab", "space": {"m1": 2, "m2": 0}})"));
    CHECK(n.translates.size() == 10);
    CHECK(n.grids.Lambda == 20.0);
    const RunConfig w = parse_config(json::parse(R"({"suite": "complex-reduce"})"));
    REQUIRE(w.weyl.has_value());
    CHECK(w.weyl->order() == 2);
}

TEST_CASE("validation errors name the offending field") {
    CHECK(error_path(json::parse(R"({"suite": "unknown"})")) == "suite");
    CHECK(error_path(json::parse(R"({"space": [2, 0]})")) == "suite");
    CHECK(error_path(json::parse(R"({"suite": "norm-lab", "p": 2.5})")) == "p");
    CHECK(error_path(json::parse(R"({"suite": "norm-lab", "space": [0, 0]})")) == "space");
    CHECK(error_path(json::parse(R"({"suite": "transference", "space": [2, 1]})")) == "space");
    CHECK(error_path(json::parse(R"({"suite": "transform-verify", "grids": {"t_points": 50}})")) == "grids.t_points");
    CHECK(error_path(json::parse(R"({"suite": "transform-verify", "grids": {"Lambda": "x"}})")) == "grids.Lambda");
    CHECK(error_path(json::parse(R"({"suite": "transform-verify", "extra": 1})")) == "extra");
    CHECK(error_path(json::parse(R"({"suite": "norm-lab", "sweep": {"p": [1.2, "a"]}})")) == "sweep.p[1]");
    CHECK(error_path(json::parse(R"({"suite": "geometry-verify", "weyl": {"type": "A2"}})")) == "weyl");
    CHECK(error_path(json::parse(R"({"suite": "complex-reduce", "weyl": {"type": "B2"}})")) == "weyl.type");
}

TEST_CASE("Weyl data round-trips through JSON") {
    for (const auto& wd : {WeylData::rank_one(), WeylData::a2()}) {
        const WeylData back = weyl_from_json(weyl_to_json(wd), "weyl");
        REQUIRE(back.order() == wd.order());
        for (std::size_t k = 0; k < wd.order(); ++k) {
            CHECK(back.det[k] == wd.det[k]);
            for (int e = 0; e < wd.rank * wd.rank; ++e) CHECK(back.W[k][e] == wd.W[k][e]);
        }
        CHECK(back.rho[0] == doctest::Approx(wd.rho[0]).epsilon(1e-14));
        CHECK(back.rho[1] == doctest::Approx(wd.rho[1]).epsilon(1e-14));
        CHECK(back.dimension == wd.dimension);
    }
    // Dropping an element breaks closure.
    json j = weyl_to_json(WeylData::a2());
    j["matrices"].erase(j["matrices"].begin());
    j["det"].erase(j["det"].begin());
    CHECK_THROWS_AS(weyl_from_json(j, "weyl"), ConfigError);
}
