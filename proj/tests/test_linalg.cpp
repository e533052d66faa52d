#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "opcalc/linalg.hpp"

using namespace opcalc;

namespace {

using QMat = Matrix<RationalField>;

QMat qmat(std::initializer_list<std::initializer_list<long>> rows) {
    RationalField k;
    std::size_t r = rows.size(), c = rows.begin()->size();
    QMat m(k, r, c);
    std::size_t i = 0;
    for (auto& row : rows) {
        std::size_t j = 0;
        for (auto v : row) m(i, j++) = k.from_long(v);
        ++i;
    }
    return m;
}

template <class F>
Matrix<F> random_int_matrix(F k, std::size_t r, std::size_t c, std::mt19937& rng) {
    Matrix<F> m(k, r, c);
    std::uniform_int_distribution<int> d(-4, 4);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = k.from_long(d(rng));
    return m;
}

}  // namespace

TEST_CASE("rank on the pinned examples") {
    RationalField k;
    CHECK(rank(QMat::identity(k, 3)) == 3);
    CHECK(rank(QMat::zero(k, 2, 2)) == 0);
    CHECK(rank(qmat({{1, 2}, {2, 4}})) == 1);
}

TEST_CASE("kernel_basis on the pinned examples") {
    RationalField k;
    CHECK(kernel_basis(QMat::identity(k, 3)).dim() == 0);
    CHECK(kernel_basis(QMat::zero(k, 2, 3)).dim() == 3);

    auto ker = kernel_basis(qmat({{1, 1}}));
    REQUIRE(ker.dim() == 1);
    // forced up to scalar: (1,-1)
    auto v = ker.basis.col(0);
    CHECK(v[0] == -v[1]);
    CHECK(v[0] != 0);
}

TEST_CASE("image_basis on the pinned examples") {
    RationalField k;
    CHECK(image_basis(QMat::identity(k, 4)).dim() == 4);
    CHECK(image_basis(QMat::zero(k, 3, 2)).dim() == 0);

    auto im = image_basis(qmat({{1, 1}, {0, 0}}));
    REQUIRE(im.dim() == 1);
    CHECK(im.basis(0, 0) == 1);
    CHECK(im.basis(1, 0) == 0);
}

TEST_CASE("subquotient on the pinned examples") {
    RationalField k;
    auto full2 = Subspace<RationalField>::full(k, 2);
    auto zero2 = Subspace<RationalField>::zero(k, 2);

    CHECK(subquotient(full2, zero2).dim() == 2);
    CHECK(subquotient(full2, full2).dim() == 0);

    auto diag = Subspace<RationalField>::span(qmat({{1}, {1}}));
    auto q = subquotient(full2, diag);
    REQUIRE(q.dim() == 1);
    // section vector lies outside span{(1,1)}
    auto s = q.section().col(0);
    CHECK(s[0] != s[1]);

    CHECK_THROWS_AS(subquotient(diag, full2), Error);
}

TEST_CASE("induced_map on the pinned examples") {
    RationalField k;
    auto full = Subspace<RationalField>::full(k, 2);
    auto diag = Subspace<RationalField>::span(qmat({{1}, {1}}));
    auto q = subquotient(full, diag);

    auto id2 = QMat::identity(k, 2);
    auto ind = induced_map(id2, q, q);
    CHECK(ind == QMat::identity(k, 1));

    auto z = QMat::zero(k, 2, 2);
    CHECK(induced_map(z, q, q).is_zero());

    // f mapping cycles into boundaries -> zero on homology
    auto into_diag = qmat({{1, 1}, {1, 1}});
    CHECK(induced_map(into_diag, q, q).is_zero());
}

TEST_CASE("rank-nullity and rref/bareiss agreement on random matrices") {
    std::mt19937 rng(20240817);
    RationalField q;
    for (int t = 0; t < 40; ++t) {
        std::size_t r = 1 + rng() % 7, c = 1 + rng() % 7;
        auto m = random_int_matrix(q, r, c, rng);
        auto rk = rank(m);
        CHECK(rk == rref(m).rank());
        CHECK(rk + kernel_basis(m).dim() == m.cols());
        CHECK(image_basis(m).dim() == rk);
    }
}

TEST_CASE("specialization to F_p can only drop rank") {
    std::mt19937 rng(987123);
    RationalField q;
    PrimeField fp(5);
    for (int t = 0; t < 40; ++t) {
        std::size_t r = 1 + rng() % 6, c = 1 + rng() % 6;
        Matrix<RationalField> mq(q, r, c);
        Matrix<PrimeField> mp(fp, r, c);
        std::uniform_int_distribution<int> d(-9, 9);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) {
                int v = d(rng);
                mq(i, j) = q.from_long(v);
                mp(i, j) = fp.from_long(v);
            }
        CHECK(rank(mq) >= rank(mp));
    }
}

TEST_CASE("induced_map is functorial") {
    std::mt19937 rng(7771);
    RationalField k;
    // Build a random three-term situation with matching sub/quotient data:
    // ambient Q^4, cycles = ker(row), boundaries = im of a map into cycles.
    for (int t = 0; t < 12; ++t) {
        auto row = random_int_matrix(k, 1, 4, rng);
        auto cyc = kernel_basis(row);
        if (cyc.dim() < 2) continue;
        auto inj = random_int_matrix(k, cyc.dim(), 1, rng);
        auto bnd = Subspace<RationalField>::span(cyc.basis * inj);
        auto q1 = subquotient(cyc, bnd);

        // endomorphisms preserving cycles and boundaries: scalar maps
        auto f = QMat::identity(k, 4).scaled(k.from_long(3));
        auto g = QMat::identity(k, 4).scaled(k.from_long(-2));
        auto fg = f * g;
        CHECK(induced_map(fg, q1, q1) == induced_map(f, q1, q1) * induced_map(g, q1, q1));
    }
}

TEST_CASE("solve returns the pivot-supported solution or reports inconsistency") {
    RationalField k;
    auto m = qmat({{1, 2, 0}, {0, 0, 1}});
    auto x = solve(m, {k.from_long(5), k.from_long(7)});
    REQUIRE(x.has_value());
    CHECK((*x)[0] == 5);
    CHECK((*x)[1] == 0);
    CHECK((*x)[2] == 7);

    auto bad = solve(qmat({{1, 1}, {1, 1}}), {k.from_long(0), k.from_long(1)});
    CHECK(!bad.has_value());
}

TEST_CASE("prime field arithmetic basics") {
    PrimeField k(101);
    auto a = k.from_long(-7);
    CHECK(a == 94);
    CHECK(k.mul(k.inv(a), a) == 1);
    CHECK(k.parse("3/4") == k.div(3, 4));
    CHECK_THROWS_AS(PrimeField(91), Error);  // 91 = 7*13
}
