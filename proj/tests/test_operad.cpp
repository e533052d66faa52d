#include <catch2/catch_amalgamated.hpp>

#include <fstream>

#include "opcalc/operad.hpp"

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

AlgebraSpec<RationalField> dual_numbers() {
    return algebra_from_json(load("dualnumbers.json"), RationalField{});
}

AlgebraSpec<RationalField> rationals_algebra() {
    return algebra_from_json(load("q.json"), RationalField{});
}

/// Cohomology dimension of (O, delta) at arity p via ranks.
template <class F>
std::size_t h_dim(const OperadInstance<F>& op, std::size_t p) {
    std::size_t rk_out = rank(op.delta_matrix(p));
    std::size_t rk_in = p == 0 ? 0 : rank(op.delta_matrix(p - 1));
    return op.dim(p) - rk_out - rk_in;
}

}  // namespace

TEST_CASE("end operad dimensions") {
    auto q = end_operad(rationals_algebra(), 3);
    for (std::size_t p = 0; p <= 4; ++p) CHECK(q.dim(p) == 1);

    auto dn = end_operad(dual_numbers(), 3);
    CHECK(dn.dim(2) == 8);  // 2^3
    CHECK(dn.dim(0) == 2);
}

TEST_CASE("operad axioms validate exhaustively (dual numbers, n_max=3)") {
    auto op = end_operad(dual_numbers(), 3);
    auto v = validate_operad(op);
    CAPTURE(v.report.violations.size());
    CHECK(v.report.pass());
    CHECK(v.report.checks > 1000);
}

TEST_CASE("operad axioms validate for End(Q)") {
    auto op = end_operad(rationals_algebra(), 4);
    CHECK(validate_operad(op).report.pass());
}

TEST_CASE("a corrupted composition tensor is reported with its triple") {
    auto op = end_operad(dual_numbers(), 2);
    auto& t = op.comp(1, 1, 1);
    RationalField k;
    t.column(0).add_term(k, 1, k.one());  // deliberate corruption
    auto v = validate_operad(op);
    CHECK(!v.report.pass());
    REQUIRE(!v.report.violations.empty());
    CHECK(v.report.violations.front().indices.size() >= 3);
}

TEST_CASE("cosimplicial identities") {
    auto op = end_operad(dual_numbers(), 3);

    SECTION("sigma_j delta_j = id and sigma_j delta_{j+1} = id") {
        for (std::size_t p = 1; p + 1 <= op.arity_max(); ++p) {
            for (std::size_t a = 0; a < op.dim(p); ++a) {
                auto phi = op.basis_elem(p, a);
                for (std::size_t j = 1; j <= p; ++j) {
                    auto lhs = op.degeneracy(p + 1, j, op.face(p, j, phi));
                    CHECK(lhs == phi);
                }
                for (std::size_t j = 0; j <= p; ++j) {
                    auto lhs = op.degeneracy(p + 1, j, op.face(p, j + 1, phi));
                    CHECK(lhs == phi);
                }
            }
        }
    }

    SECTION("delta squares to zero") {
        for (std::size_t p = 0; p + 2 <= op.arity_max(); ++p) {
            auto d1 = op.delta_matrix(p + 1);
            auto d0 = op.delta_matrix(p);
            CHECK((d1 * d0).is_zero());
        }
    }

    SECTION("delta of the operadic identity is mu") {
        // delta_0(1) = delta_1(1) = delta_2(1) = mu, so the alternating sum
        // leaves a single mu
        auto d = op.delta_elem(1, op.one());
        CHECK(d == op.mu());
    }

    SECTION("delta equals {mu,-}") {
        for (std::size_t p = 0; p + 1 <= op.arity_max(); ++p) {
            for (std::size_t a = 0; a < op.dim(p); ++a) {
                auto phi = op.basis_elem(p, a);
                auto lhs = op.delta_elem(p, phi);
                auto rhs = op.gerstenhaber(2, op.mu(), p, phi);
                CHECK(lhs == rhs);
            }
        }
    }
}

TEST_CASE("End(Q) cohomology: Q in degree zero only") {
    auto op = end_operad(rationals_algebra(), 4);
    CHECK(h_dim(op, 0) == 1);
    for (std::size_t p = 1; p + 1 <= op.arity_max(); ++p) CHECK(h_dim(op, p) == 0);
}

TEST_CASE("brace and cup algebra") {
    auto op = end_operad(dual_numbers(), 3);

    SECTION("{mu, mu} = 0") {
        CHECK(op.is_zero_elem(op.gerstenhaber(2, op.mu(), 2, op.mu())));
    }

    SECTION("e is a two-sided cup unit") {
        for (std::size_t p = 0; p + 1 <= op.arity_max(); ++p)
            for (std::size_t a = 0; a < op.dim(p); ++a) {
                auto phi = op.basis_elem(p, a);
                CHECK(op.cup(0, op.e(), p, phi) == phi);
                CHECK(op.cup(p, phi, 0, op.e()) == phi);
            }
    }

    SECTION("cup is associative on basis triples") {
        for (std::size_t p = 0; p <= 1; ++p)
            for (std::size_t q = 0; q <= 1; ++q)
                for (std::size_t r = 0; r <= 2 && p + q + r <= op.arity_max(); ++r)
                    for (std::size_t a = 0; a < op.dim(p); ++a)
                        for (std::size_t b = 0; b < op.dim(q); ++b)
                            for (std::size_t c = 0; c < op.dim(r); ++c) {
                                auto x = op.basis_elem(p, a);
                                auto y = op.basis_elem(q, b);
                                auto z = op.basis_elem(r, c);
                                auto lhs = op.cup(p + q, op.cup(p, x, q, y), r, z);
                                auto rhs = op.cup(p, x, q + r, op.cup(q, y, r, z));
                                CHECK(lhs == rhs);
                            }
    }

    SECTION("gerstenhaber antisymmetry with sign") {
        RationalField k;
        for (std::size_t p = 1; p <= 2; ++p)
            for (std::size_t q = 1; q <= 2; ++q)
                for (std::size_t a = 0; a < op.dim(p); ++a)
                    for (std::size_t b = 0; b < op.dim(q); ++b) {
                        auto x = op.basis_elem(p, a);
                        auto y = op.basis_elem(q, b);
                        auto lhs = op.gerstenhaber(p, x, q, y);
                        auto rhs = op.gerstenhaber(q, y, p, x);
                        bool neg = ((p - 1) * (q - 1)) % 2 == 0;
                        if (neg) rhs = op.scale(std::move(rhs), k.neg(k.one()));
                        CHECK(lhs == rhs);
                    }
    }
}

TEST_CASE("cyclic structure from the trace form") {
    auto alg = dual_numbers();
    auto op = end_operad(alg, 3);
    op.set_tau(cyclic_structure_from_frobenius(alg, op));

    auto rep = validate_cyclic_operad(op);
    CAPTURE(rep.violations.size());
    CHECK(rep.pass());

    SECTION("tau fixes the operadic identity") {
        auto t = op.apply_tau(1, op.one());
        CHECK(t == op.one());
    }

    SECTION("corrupting tau is caught") {
        auto bad = op;
        std::vector<SparseMat<RationalField>> taus;
        for (std::size_t p = 0; p <= bad.arity_max(); ++p) taus.push_back(bad.tau(p));
        RationalField k;
        taus[2].column(0).add_term(k, 3, k.one());
        bad.set_tau(std::move(taus));
        CHECK(!validate_cyclic_operad(bad).pass());
    }
}

TEST_CASE("cyclic structure for QxQ and End(Q)") {
    auto qq = algebra_from_json(load("qxq.json"), RationalField{});
    auto op = end_operad(qq, 3);
    op.set_tau(cyclic_structure_from_frobenius(qq, op));
    CHECK(validate_cyclic_operad(op).pass());

    auto q1 = rationals_algebra();
    auto opq = end_operad(q1, 3);
    opq.set_tau(cyclic_structure_from_frobenius(q1, opq));
    CHECK(validate_cyclic_operad(opq).pass());
    // one-dimensional: tau must be the identity everywhere
    for (std::size_t p = 0; p <= opq.arity_max(); ++p) {
        auto v = opq.basis_elem(p, 0);
        CHECK(opq.apply_tau(p, v) == v);
    }
}

TEST_CASE("normalized suboperad") {
    auto alg = dual_numbers();
    auto op = end_operad(alg, 4);
    auto bar = normalized(op);

    SECTION("bar O(0) is all of O(0)") { CHECK(bar.dim(0) == op.dim(0)); }

    SECTION("bar O(1) kills the unit: dimension 2") { CHECK(bar.dim(1) == 2); }

    SECTION("structural coordinate route was taken") {
        for (std::size_t p = 0; p <= op.arity_max(); ++p) CHECK(bar.coordinate[p]);
    }

    SECTION("structural route agrees with generic kernels for small arities") {
        RationalField k;
        for (std::size_t p = 1; p <= 3; ++p) {
            Matrix<RationalField> stack(k, p * op.dim(p - 1), op.dim(p));
            for (std::size_t a = 0; a < op.dim(p); ++a)
                for (std::size_t j = 0; j < p; ++j) {
                    auto img = op.degeneracy(p, j, op.basis_elem(p, a));
                    for (std::size_t r = 0; r < img.size(); ++r)
                        stack(j * op.dim(p - 1) + r, a) = img[r];
                }
            auto ker = kernel_basis(stack);
            CHECK(ker.dim() == bar.dim(p));
            for (std::size_t c = 0; c < bar.bar[p].dim(); ++c)
                CHECK(ker.contains(bar.bar[p].basis.col(c)));
        }
    }

    SECTION("delta preserves the normalized part") {
        CHECK(delta_preserves_normalized(op, bar));
    }

    SECTION("normalized inclusion is a quasi-isomorphism on cohomology dims") {
        RationalField k;
        for (std::size_t p = 0; p + 1 < op.arity_max(); ++p) {
            auto restrict_delta = [&](std::size_t ar) {
                Matrix<RationalField> m(k, bar.dim(ar + 1), bar.dim(ar));
                for (std::size_t c = 0; c < bar.dim(ar); ++c) {
                    auto v = op.delta_elem(ar, bar.bar[ar].basis.col(c));
                    auto x = solve(bar.bar[ar + 1].basis, v);
                    REQUIRE(x.has_value());
                    m.set_col(c, *x);
                }
                return m;
            };
            std::size_t rk_out = rank(restrict_delta(p));
            std::size_t rk_in = p == 0 ? 0 : rank(restrict_delta(p - 1));
            CHECK(bar.dim(p) - rk_out - rk_in == h_dim(op, p));
        }
    }
}
