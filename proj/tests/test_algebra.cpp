#include <catch2/catch_amalgamated.hpp>

#include <fstream>

#include "opcalc/algebra.hpp"

using namespace opcalc;
using nlohmann::json;

namespace {

json load(const std::string& name) {
    std::ifstream in(std::string(OPCALC_DATA_DIR) + "/" + name);
    REQUIRE(in.good());
    json j;
    in >> j;
    return j;
}

}  // namespace

TEST_CASE("dual numbers load and adapt") {
    auto alg = algebra_from_json(load("dualnumbers.json"), RationalField{});
    REQUIRE(alg.dim() == 2);
    CHECK(alg.labels()[0] == "1");
    CHECK(alg.labels()[1] == "x");
    // x*x = 0 in adapted coordinates
    CHECK(alg.field().is_zero(alg.product(1, 1)[0]));
    CHECK(alg.field().is_zero(alg.product(1, 1)[1]));
    CHECK(alg.has_form());
    // <1,x> = 1, <1,1> = 0
    CHECK(alg.pairing(0, 1) == 1);
    CHECK(alg.pairing(0, 0) == 0);
}

TEST_CASE("QxQ adapts unit-first with recomputed structure constants") {
    auto alg = algebra_from_json(load("qxq.json"), RationalField{});
    REQUIRE(alg.dim() == 2);
    CHECK(alg.labels()[0] == "1");
    // adapted second vector is e1; e1*e1 = e1 has coordinates in {1, e1}:
    // e1 = 0*unit + 1*e1
    CHECK(alg.product(1, 1)[0] == 0);
    CHECK(alg.product(1, 1)[1] == 1);
    CHECK(alg.has_form());
}

TEST_CASE("upper triangular 2x2 loads without a form") {
    auto alg = algebra_from_json(load("uppertri2.json"), RationalField{});
    REQUIRE(alg.dim() == 3);
    CHECK(!alg.has_form());
    CHECK(alg.labels()[0] == "1");
}

TEST_CASE("unitality violations are rejected") {
    auto j = load("dualnumbers.json");
    j["mul"][0][1] = {0, 0};  // 1*x := 0
    CHECK_THROWS_AS(algebra_from_json(j, RationalField{}), Error);
}

TEST_CASE("associativity violations are rejected") {
    auto j = load("uppertri2.json");
    j["mul"][2][1] = {1, 0, 0};  // e12*e22 := e11 breaks (e12*e22)*e22
    CHECK_THROWS_AS(algebra_from_json(j, RationalField{}), Error);
}

TEST_CASE("non-symmetric form is rejected") {
    auto j = load("dualnumbers.json");
    j["frobenius_form"] = {{0, 1}, {-1, 0}};
    CHECK_THROWS_AS(algebra_from_json(j, RationalField{}), Error);
}

TEST_CASE("degenerate form is rejected") {
    auto j = load("dualnumbers.json");
    j["frobenius_form"] = {{1, 0}, {0, 0}};
    CHECK_THROWS_AS(algebra_from_json(j, RationalField{}), Error);
}

TEST_CASE("non-invariant form is rejected") {
    auto j = load("uppertri2.json");
    j["frobenius_form"] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    CHECK_THROWS_AS(algebra_from_json(j, RationalField{}), Error);
}

TEST_CASE("algebras load over a prime field") {
    auto alg = algebra_from_json(load("qxq.json"), PrimeField(101));
    CHECK(alg.dim() == 2);
    CHECK(alg.has_form());
}

TEST_CASE("rational string coefficients parse") {
    json j = {{"basis", {"e"}}, {"unit", {"2/2"}}, {"mul", {{{"1"}}}}};
    auto alg = algebra_from_json(j, RationalField{});
    CHECK(alg.dim() == 1);
}
