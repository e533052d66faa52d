#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <memory>

#include "opcalc/complexes.hpp"
#include "opcalc/op_module.hpp"

using namespace opcalc;
using nlohmann::json;

namespace {

using RF = RationalField;
using Mix = MixedComplex<RF>;
using UC = UWindowComplex<RF>;

json load(const std::string& name) {
    std::ifstream in(std::string(OPCALC_DATA_DIR) + "/" + name);
    REQUIRE(in.good());
    json j;
    in >> j;
    return j;
}

/// Normalized Hochschild mixed complex of an algebra, regraded to cochain
/// convention M^i := Nbar_{-i}; truncated at the low end (the chain top).
std::shared_ptr<Mix> hochschild_mixed(const std::string& file, std::size_t n_max) {
    RF k;
    auto alg = algebra_from_json(load(file), k);
    auto op = std::make_shared<OperadInstance<RF>>(end_operad(alg, n_max));
    auto ch = chains_module<RF>(alg, op, n_max);
    auto sd = simplicial(ch);
    auto bar = normalized_chains(ch, sd);
    auto dims = [bar](long i) { return bar.dim(static_cast<std::size_t>(-i)); };
    auto b = [bar, sd, k](long i) {
        std::size_t n = static_cast<std::size_t>(-i);
        return normalized_matrix(bar, n, n - 1, sd.b[n], k);
    };
    auto B = [bar, sd, k](long i) {
        std::size_t n = static_cast<std::size_t>(-i);
        return normalized_matrix(bar, n, n + 1, sd.connes_b[n], k);
    };
    return std::make_shared<Mix>(k, -static_cast<long>(n_max), 0, true, false, dims, b, B,
                                 "chain");
}

/// M concentrated in degree 0 with the given dimension, b = B = 0.
std::shared_ptr<Mix> point_complex(std::size_t d) {
    RF k;
    auto dims = [d](long i) { return i == 0 ? d : std::size_t(0); };
    auto b = [k, dims](long i) { return Matrix<RF>(k, dims(i + 1), dims(i)); };
    auto B = [k, dims](long i) { return Matrix<RF>(k, dims(i - 1), dims(i)); };
    return std::make_shared<Mix>(k, -1, 1, false, false, dims, b, B, "cochain");
}

}  // namespace

TEST_CASE("validate_mixed trivial cases") {
    RF k;
    // B = 0, b squaring to zero: a two-step complex Q -> Q -> 0 with b = 0
    auto dims = [](long i) { return (i == 0 || i == 1) ? std::size_t(1) : std::size_t(0); };
    auto zero_map = [k, &dims](long i) { return Matrix<RF>(k, dims(i + 1), dims(i)); };
    auto zero_B = [k, &dims](long i) { return Matrix<RF>(k, dims(i - 1), dims(i)); };
    Mix mc(k, 0, 1, false, false, dims, zero_map, zero_B);
    CHECK(validate_mixed(mc).pass());
}

TEST_CASE("hochschild mixed complex of the dual numbers validates") {
    auto mc = hochschild_mixed("dualnumbers.json", 5);
    auto rep = validate_mixed(*mc);
    CAPTURE(rep.violations.empty() ? "" : rep.violations.front().relation);
    CHECK(rep.pass());
}

TEST_CASE("homology of the mixed complex") {
    SECTION("zero differentials: dim 3 space stays dim 3") {
        auto mc = point_complex(3);
        CHECK(mc->h_dim(0) == 3);
    }
    SECTION("dual numbers: 2,1,1,1 on trusted degrees") {
        auto mc = hochschild_mixed("dualnumbers.json", 6);
        CHECK(mc->h_dim(0) == 2);
        for (long i = -4; i <= -1; ++i) CHECK(mc->h_dim(i) == 1);
        // trusted: distance >= 2 from the truncated low end
        CHECK(mc->trusted_h(-4));
        CHECK(!mc->trusted_h(-5));
        CHECK(mc->trusted_h(0));
    }
    SECTION("QxQ: 2,0,0,... and vanishing-certified sides at even windows") {
        auto mc = hochschild_mixed("qxq.json", 6);
        CHECK(mc->h_dim(0) == 2);
        for (long i = -4; i <= -1; ++i) CHECK(mc->h_dim(i) == 0);
        CHECK(mc->side_ok_lo());

        auto mc5 = hochschild_mixed("qxq.json", 5);
        CHECK(!mc5->side_ok_lo());  // phantom kernel at the odd cut
    }
}

TEST_CASE("u-window complexes of a point") {
    auto mc = point_complex(2);

    // CC = M[[u]] (u of degree 2), so a degree-0 point contributes at
    // n = 2j >= 0; the negative variant has the j <= 0 representatives.
    SECTION("cyclic variant lives in degrees 0,2,4,...") {
        UC cc(mc, UVariant::Cyclic);
        CHECK(cc.dim(0) == 2);
        CHECK(cc.dim(2) == 2);
        CHECK(cc.dim(1) == 0);
        CHECK(cc.dim(-2) == 0);
        CHECK(cc.trusted(0));
        CHECK(cc.h_dim(0) == 2);
        CHECK(cc.h_dim(2) == 2);
    }
    SECTION("negative variant lives in degrees 0,-2,-4,...") {
        UC cc(mc, UVariant::Negative);
        CHECK(cc.dim(0) == 2);
        CHECK(cc.dim(-2) == 2);
        CHECK(cc.dim(2) == 0);
        CHECK(cc.h_dim(-2) == 2);
    }
    SECTION("periodic variant sees both directions") {
        UC cc(mc, UVariant::Periodic);
        CHECK(cc.dim(0) == 2);
        CHECK(cc.dim(2) == 2);
        CHECK(cc.dim(-2) == 2);
    }
    SECTION("pi is an isomorphism at the concentration degree (CC)") {
        UC cc(mc, UVariant::Cyclic);
        auto s = sbi_maps(cc, 0);
        CHECK(s.pi_or_j.rows() == 2);
        CHECK(s.pi_or_j.cols() == 2);
        CHECK(rank(s.pi_or_j) == 2);
        CHECK(s.beta.is_zero());  // B = 0
    }
}

TEST_CASE("d_u squares to zero on all variants (dual numbers)") {
    auto mc = hochschild_mixed("dualnumbers.json", 5);
    for (auto v : {UVariant::Cyclic, UVariant::Negative, UVariant::Periodic}) {
        UC cc(mc, v);
        for (long n = mc->lo() - 1; n <= mc->hi(); ++n) {
            CHECK((cc.du(n + 1) * cc.du(n)).is_zero());
        }
    }
}

TEST_CASE("B = 0 gives the direct-sum pattern for HC") {
    // dual numbers chains have B != 0; take the same dims with B := 0 and
    // compare against the direct-sum oracle sum_j H^{n-2j}.
    RF k;
    auto base = hochschild_mixed("dualnumbers.json", 6);
    auto dims = [base](long i) { return base->dim(i); };
    auto b = [base](long i) { return base->b_at(i); };
    auto B0 = [base, k](long i) { return Matrix<RF>(k, base->dim(i - 1), base->dim(i)); };
    auto mc = std::make_shared<Mix>(k, base->lo(), base->hi(), true, false, dims, b, B0, "chain");

    UC cc(mc, UVariant::Cyclic);
    for (long n = -3; n <= 0; ++n) {
        if (!cc.trusted(n)) continue;
        std::size_t expect = 0;
        for (long j = 0;; ++j) {
            long i = n - 2 * j;
            if (i < mc->lo()) break;
            expect += mc->h_dim(i);
        }
        CHECK(cc.h_dim(n) == expect);
    }
}

TEST_CASE("euler characteristic consistency on the u-complex") {
    auto mc = hochschild_mixed("qxq.json", 5);
    for (auto v : {UVariant::Cyclic, UVariant::Negative}) {
        UC cc(mc, v);
        for (long n = -4; n <= 1; ++n) {
            std::size_t lhs = cc.dim(n);
            CHECK(cc.h_dim(n) == lhs - rank(cc.du(n)) - rank(cc.du(n - 1)));
        }
    }
}

TEST_CASE("SBI exactness spot checks and beta = [B m]") {
    auto mc = hochschild_mixed("qxq.json", 6);

    SECTION("cyclic: pi S = 0, beta pi = 0, S beta = 0") {
        UC cc(mc, UVariant::Cyclic);
        for (long n = -3; n <= 0; ++n) {
            if (!cc.trusted(n) || !cc.trusted(n - 2) || !cc.trusted(n + 1)) continue;
            auto s_n = sbi_maps(cc, n);
            CHECK((s_n.pi_or_j * s_n.S).is_zero());
            auto s_next = sbi_maps(cc, n + 1);
            // beta: H^n -> HC^{n-1}; pi: HC^n -> H^n
            CHECK((s_n.beta * s_n.pi_or_j).is_zero());
            // S: HC^{n-1} -> HC^{n+1}: compose with beta at n
            auto s_up = induced_map(cc.u_mult(n - 1), cc.homology(n - 1), cc.homology(n + 1));
            CHECK((s_up * s_n.beta).is_zero());
        }
    }

    SECTION("negative: S j = 0, beta S = 0, j beta = 0, beta j = induced B") {
        UC cc(mc, UVariant::Negative);
        for (long n = -2; n <= 0; ++n) {
            if (!cc.trusted(n) || !cc.trusted(n + 2)) continue;
            auto s_n = sbi_maps(cc, n);
            CHECK((s_n.S * s_n.pi_or_j).is_zero());
            auto s_up = sbi_maps(cc, n + 2);
            CHECK((s_up.beta * s_n.S).is_zero());
            // j at n-1 after beta at n
            auto j_dn = induced_map(cc.include0(n - 1), mc->homology(n - 1), cc.homology(n - 1));
            CHECK((j_dn * s_n.beta).is_zero());
            // beta o j = induced B on H
            auto indB = induced_map(mc->B_at(n), mc->homology(n), mc->homology(n - 1));
            CHECK(s_n.beta * s_n.pi_or_j == indB);
        }
    }
}

TEST_CASE("untrusted degrees are refused by sbi_maps") {
    auto mc = hochschild_mixed("dualnumbers.json", 4);
    // The cyclic variant reaches down through the cut and the dual numbers
    // have nonvanishing homology there: nothing is trusted.
    UC cc(mc, UVariant::Cyclic);
    CHECK(!cc.trusted(0));
    CHECK_THROWS_AS(sbi_maps(cc, 0), Error);
}
