#ifndef OPCALC_STRUCTURES_HPP
#define OPCALC_STRUCTURES_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "opcalc/identity_suites.hpp"

namespace opcalc {

/*
 * Homology-level structure extraction: the regraded homotopy
 * Cartan-Gerstenhaber calculus, duality (Palladio) cocycles, the twisted
 * semidirect product with its quasi-isomorphism, and the induced brackets
 * (the cyclic-cohomology bracket, the BV structure, the string-topology
 * bracket on negative cyclic cohomology, and the e3 bracket when the
 * Gerstenhaber bracket vanishes).
 *
 * Two regrades produce a mixed cochain complex M carrying a calculus of
 * the dg-Lie algebra g^k := Obar(k+1) (differential -delta and, on the
 * opposite route, the operadic bracket and cup in displayed order):
 *
 *   opposite route:  M^k := Nbar(d-k-1)   (chain side; operators verbatim)
 *   cyclic route:    M^k := Mbar(d+k+1)   (module side; adjoint operators)
 *
 * On the cyclic route the adjoints satisfy the calculus laws only after
 * quadratic regrading signs
 *     L'_f := lam(p) L_phi,  iota'_f := lam(p)(-1)^{p+1} iota_phi,
 *     S'_f := lam(p)(-1)^{p+1} S_phi,       lam(p) := (-1)^{p(p-1)/2},
 * under which cup and bracket transport as
 *     f cup_G g = (-1)^{pf pg + 1} (phi_g cup phi_f),
 *     {f, g}_G  = -{phi_f, phi_g}.
 * The regrade suite re-checks every law, so the convention is enforced
 * rather than assumed.
 */

enum class Route { Opposite, Cyclic };

template <class F>
class RegradedContext {
  public:
    using Field = F;
    using Elem = typename F::Elem;
    using Vec = std::vector<Elem>;

    RegradedContext(std::shared_ptr<OppositeCalculus<F>> opp, long d)
        : route_(Route::Opposite), d_(d), opp_(std::move(opp)) {
        long nmax = static_cast<long>(opp_->nmax());
        mixed_ = std::make_shared<MixedComplex<F>>(
            field(), d_ - 1 - nmax, d_ - 1, true, false,
            [this](long k) { return opp_->dim_at(chain_of(k)); },
            [this](long k) { return opp_->b_mat(chain_of(k)); },
            [this](long k) { return opp_->B_mat(chain_of(k)); }, "chain");
    }

    RegradedContext(std::shared_ptr<CyclicCalculus<F>> cyc, long d)
        : route_(Route::Cyclic), d_(d), cyc_(std::move(cyc)) {
        long qmax = static_cast<long>(cyc_->qmax());
        mixed_ = std::make_shared<MixedComplex<F>>(
            field(), -d_ - 1, qmax - d_ - 1, false, true,
            [this](long k) { return cyc_->dim_at(chain_of(k)); },
            [this](long k) {
                long q = chain_of(k);
                return q < 0 ? Matrix<F>(field(), dimM(k + 1), 0) : cyc_->b_mat(q);
            },
            [this](long k) {
                long q = chain_of(k);
                return q <= 0 ? Matrix<F>(field(), dimM(k - 1), dimM(k)) : cyc_->B_mat(q);
            },
            "cochain");
    }

    Route route() const { return route_; }
    long d() const { return d_; }
    const F& field() const {
        return route_ == Route::Opposite ? opp_->field() : cyc_->field();
    }
    const OperadInstance<F>& operad() const {
        return route_ == Route::Opposite ? opp_->operad() : cyc_->operad();
    }
    const NormalizedOperad<F>& obar() const {
        return route_ == Route::Opposite ? opp_->obar() : cyc_->obar();
    }
    std::shared_ptr<const MixedComplex<F>> mixed() const { return mixed_; }

    long chain_of(long k) const { return route_ == Route::Opposite ? d_ - 1 - k : d_ + k + 1; }
    std::size_t dimM(long k) const { return mixed_->dim(k); }

    // ---- g-side ----------------------------------------------------------

    long g_lo() const { return -1; }
    long g_hi() const { return static_cast<long>(operad().arity_max()) - 1; }
    std::size_t g_dim(long k) const {
        return (k < g_lo() || k > g_hi()) ? 0 : obar().bar[k + 1].dim();
    }
    Vec g_basis_vec(long k, std::size_t a) const {
        Vec f(g_dim(k), field().zero());
        f[a] = field().one();
        return f;
    }

    /// delta_g = -delta on normalized coordinates, g^k -> g^{k+1}.
    Matrix<F> delta_g(long k) const {
        const F& kf = field();
        Matrix<F> m(kf, g_dim(k + 1), g_dim(k));
        if (k < g_lo() || k + 1 > g_hi()) return m;
        for (std::size_t a = 0; a < g_dim(k); ++a) {
            auto img = operad().delta_elem(k + 1, lift(k, g_basis_vec(k, a)));
            auto coords = solve(obar().bar[k + 2].basis, img);
            if (!coords) raise(Errc::BadInput, "delta does not preserve the normalized part");
            for (std::size_t r = 0; r < m.rows(); ++r) m(r, a) = kf.neg((*coords)[r]);
        }
        return m;
    }

    /// The g-side as a mixed complex with B = 0 (homology, trust flags).
    std::shared_ptr<const MixedComplex<F>> g_mixed() const {
        if (!gmix_) {
            const F& kf = field();
            gmix_ = std::make_shared<MixedComplex<F>>(
                kf, g_lo(), g_hi(), false, true, [this](long k) { return g_dim(k); },
                [this](long k) { return delta_g(k); },
                [this, kf](long k) { return Matrix<F>(kf, g_dim(k - 1), g_dim(k)); },
                "cochain");
        }
        return gmix_;
    }

    /// {f, g}_G in normalized coordinates of g^{kf+kg+1}.
    Vec g_bracket(long kf, const Vec& f, long kg, const Vec& g) const {
        const F& kfld = field();
        std::size_t pf = kf + 1, pg = kg + 1;
        Vec out(g_dim(kf + kg + 1), kfld.zero());
        if (pf + pg == 0) return out;
        auto br = operad().gerstenhaber(pf, lift(kf, f), pg, lift(kg, g));
        auto coords = solve(obar().bar[pf + pg].basis, br);
        if (!coords) raise(Errc::BadInput, "bracket leaves the normalized part");
        bool neg = route_ == Route::Cyclic;
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = neg ? kfld.neg((*coords)[i]) : (*coords)[i];
        return out;
    }

    /// f cup_G g in normalized coordinates of g^{kf+kg+2}.
    Vec g_cup(long kf, const Vec& f, long kg, const Vec& g) const {
        const F& kfld = field();
        std::size_t pf = kf + 1, pg = kg + 1;
        Vec cup = route_ == Route::Opposite
                      ? operad().cup(pf, lift(kf, f), pg, lift(kg, g))
                      : operad().cup(pg, lift(kg, g), pf, lift(kf, f));
        auto coords = solve(obar().bar[pf + pg].basis, cup);
        if (!coords) raise(Errc::BadInput, "cup leaves the normalized part");
        bool neg = route_ == Route::Cyclic && (pf * pg + 1) % 2 == 1;
        Vec out(g_dim(kf + kg + 1), kfld.zero());
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = neg ? kfld.neg((*coords)[i]) : (*coords)[i];
        return out;
    }

    // ---- calculus operators in M-degrees -----------------------------------

    /// iota_f : M^k -> M^{k+kf+1}
    Matrix<F> iota(long kf, const Vec& f, long k) const {
        std::size_t p = kf + 1;
        if (route_ == Route::Opposite) return opp_->cap(p, lift(kf, f), chain_of(k));
        long q = chain_of(k);
        auto m = (q < 0 || q > (long)cyc_->qmax())
                     ? Matrix<F>(field(), dimM(k + kf + 1), dimM(k))
                     : cyc_->cap(p, lift(kf, f), q);
        return signed_mat(std::move(m), lam(p) * parity(p + 1));
    }

    /// L_f : M^k -> M^{k+kf}
    Matrix<F> lie(long kf, const Vec& f, long k) const {
        std::size_t p = kf + 1;
        if (route_ == Route::Opposite) return opp_->lie(p, lift(kf, f), chain_of(k));
        long q = chain_of(k);
        auto m = (q < 0 || q > (long)cyc_->qmax())
                     ? Matrix<F>(field(), dimM(k + kf), dimM(k))
                     : cyc_->lie(p, lift(kf, f), q);
        return signed_mat(std::move(m), lam(p));
    }

    /// S_f : M^k -> M^{k+kf-1}
    Matrix<F> s_op(long kf, const Vec& f, long k) const {
        std::size_t p = kf + 1;
        if (route_ == Route::Opposite) return opp_->s_hom(p, lift(kf, f), chain_of(k));
        long q = chain_of(k);
        auto m = (q < 0 || q > (long)cyc_->qmax())
                     ? Matrix<F>(field(), dimM(k + kf - 1), dimM(k))
                     : cyc_->s_hom(p, lift(kf, f), q);
        return signed_mat(std::move(m), lam(p) * parity(p + 1));
    }

    static int lam(std::size_t p) { return (p * (p - 1) / 2) % 2 == 0 ? 1 : -1; }
    static int parity(std::size_t e) { return e % 2 == 0 ? 1 : -1; }

    Vec lift(long kf, const Vec& f) const {
        const auto& basis = obar().bar[kf + 1].basis;
        const F& kfld = field();
        Vec out(basis.rows(), kfld.zero());
        for (std::size_t c = 0; c < basis.cols(); ++c) {
            if (kfld.is_zero(f[c])) continue;
            for (std::size_t r = 0; r < basis.rows(); ++r)
                out[r] = kfld.add(out[r], kfld.mul(basis(r, c), f[c]));
        }
        return out;
    }

  private:
    Matrix<F> signed_mat(Matrix<F> m, int s) const { return s == 1 ? m : -m; }

    Route route_;
    long d_;
    std::shared_ptr<OppositeCalculus<F>> opp_;
    std::shared_ptr<CyclicCalculus<F>> cyc_;
    std::shared_ptr<MixedComplex<F>> mixed_;
    mutable std::shared_ptr<MixedComplex<F>> gmix_;
};

// ------------------------------------------------------------------- suite

/// Re-checks the abstract calculus laws for the regraded operators; this is
/// what certifies the regrading signs.
template <class F>
IdentitySuiteResult regrade_suite(const RegradedContext<F>& ctx) {
    IdentitySuiteResult out{"regrade", "dellera1/schonlos2/g-module-structure", 0, 0, {}};
    const auto& mc = *ctx.mixed();
    const long lo = mc.lo(), hi = mc.hi();
    const long ghi = ctx.g_hi();

    auto comm = [](const Matrix<F>& ab, const Matrix<F>& ba, long parity) {
        return ((parity % 2) + 2) % 2 == 0 ? ab - ba : ab + ba;
    };

    for (long kf = -1; kf + 1 <= ghi; ++kf) {
        std::size_t p = kf + 1;
        for (std::size_t a = 0; a < ctx.g_dim(kf); ++a) {
            auto f = ctx.g_basis_vec(kf, a);
            auto df = ctx.delta_g(kf).col(a);
            for (long k = lo - 1; k <= hi + 1; ++k) {
                if (std::max({k + kf + 2, k + 1}) > hi || k < lo) {
                    ++out.skipped;
                    continue;
                }
                auto i_f = ctx.iota(kf, f, k);
                auto bi = mc.b_at(k + kf + 1) * i_f;
                auto ib = ctx.iota(kf, f, k + 1) * mc.b_at(k);
                auto lhs = comm(bi, ib, p) + ctx.iota(kf + 1, df, k);
                ++out.instances;
                if (!lhs.is_zero()) out.failures.push_back({"regrade-i", {kf, (long)a, k}});

                auto L = ctx.lie(kf, f, k);
                auto Bi = mc.B_at(k + kf + 1) * i_f;
                auto iB = ctx.iota(kf, f, k - 1) * mc.B_at(k);
                auto bS = mc.b_at(k + kf - 1) * ctx.s_op(kf, f, k);
                auto Sb = ctx.s_op(kf, f, k + 1) * mc.b_at(k);
                auto rhs = comm(Bi, iB, p) + comm(bS, Sb, p) + ctx.s_op(kf + 1, df, k);
                ++out.instances;
                if (!(L - rhs).is_zero()) out.failures.push_back({"regrade-L", {kf, (long)a, k}});

                auto BS = mc.B_at(k + kf - 1) * ctx.s_op(kf, f, k);
                auto SB = ctx.s_op(kf, f, k - 1) * mc.B_at(k);
                ++out.instances;
                if (!comm(BS, SB, p).is_zero())
                    out.failures.push_back({"regrade-BS", {kf, (long)a, k}});

                auto bL = mc.b_at(k + kf) * L;
                auto Lb = ctx.lie(kf, f, k - 1) * mc.b_at(k);
                auto chain = comm(bL, Lb, p - 1) - ctx.lie(kf + 1, df, k);
                ++out.instances;
                if (!chain.is_zero()) out.failures.push_back({"regrade-bL", {kf, (long)a, k}});

                auto BL = mc.B_at(k + kf) * L;
                auto LB = ctx.lie(kf, f, k + 1) * mc.B_at(k);
                ++out.instances;
                if (!comm(BL, LB, p - 1).is_zero())
                    out.failures.push_back({"regrade-BL", {kf, (long)a, k}});
            }
        }
    }

    for (long kf = -1; kf <= ghi; ++kf)
        for (long kg = -1; kf + kg + 2 <= ghi && kg <= ghi; ++kg)
            for (std::size_t a = 0; a < ctx.g_dim(kf); ++a)
                for (std::size_t b = 0; b < ctx.g_dim(kg); ++b) {
                    auto f = ctx.g_basis_vec(kf, a);
                    auto g = ctx.g_basis_vec(kg, b);
                    auto cup = ctx.g_cup(kf, f, kg, g);
                    auto br = ctx.g_bracket(kf, f, kg, g);
                    for (long k = lo; k <= hi; ++k) {
                        if (std::max({k + kf + kg + 2, k + kg + 1, k + kf + 1}) > hi) {
                            ++out.skipped;
                            continue;
                        }
                        auto lhs = ctx.iota(kf + kg + 1, cup, k);
                        auto rhs = ctx.iota(kf, f, k + kg + 1) * ctx.iota(kg, g, k);
                        ++out.instances;
                        if (!(lhs - rhs).is_zero())
                            out.failures.push_back(
                                {"regrade-cup", {kf, kg, k, (long)a, (long)b}});

                        auto Lbr = ctx.lie(kf + kg + 1, br, k);
                        auto LL = ctx.lie(kf, f, k + kg) * ctx.lie(kg, g, k);
                        auto LL2 = ctx.lie(kg, g, k + kf) * ctx.lie(kf, f, k);
                        auto cc = comm(LL, LL2, kf * kg);
                        ++out.instances;
                        if (!(Lbr - cc).is_zero())
                            out.failures.push_back(
                                {"regrade-Lie", {kf, kg, k, (long)a, (long)b}});
                    }
                }
    return out;
}

// ------------------------------------------------------------- certificates

template <class F>
struct PalladioCertificate {
    std::vector<typename F::Elem> zeta;  // in M^{-1}
    bool b_zeta_zero = false;
    bool B_exactness_waived = false;  // H^{-2}(g) = 0 verified
    std::optional<std::vector<typename F::Elem>> eta;
    std::vector<std::pair<long, std::size_t>> iso_ranks;  // (degree, rank)
};

/// The cochain map g^k -> M^k, f |-> (-1)^k iota_f zeta.
template <class F>
Matrix<F> palladio_map(const RegradedContext<F>& ctx, const std::vector<typename F::Elem>& zeta,
                       long kg) {
    const F& k = ctx.field();
    Matrix<F> m(k, ctx.dimM(kg), ctx.g_dim(kg));
    for (std::size_t a = 0; a < ctx.g_dim(kg); ++a) {
        auto col = ctx.iota(kg, ctx.g_basis_vec(kg, a), -1).apply(zeta);
        bool neg = ((kg % 2) + 2) % 2 == 1;
        for (std::size_t r = 0; r < col.size(); ++r) m(r, a) = neg ? k.neg(col[r]) : col[r];
    }
    return m;
}

template <class F>
PalladioCertificate<F> verify_palladio(const RegradedContext<F>& ctx,
                                       const std::vector<typename F::Elem>& zeta) {
    const auto& mc = *ctx.mixed();
    const F& k = ctx.field();
    PalladioCertificate<F> cert;
    cert.zeta = zeta;

    if (zeta.size() != mc.dim(-1)) raise(Errc::BadInput, "zeta must live in M^{-1}");
    for (const auto& c : mc.b_at(-1).apply(zeta))
        if (!k.is_zero(c)) raise(Errc::NotACocycle, "b zeta != 0");
    cert.b_zeta_zero = true;

    const auto& gm = *ctx.g_mixed();
    if (gm.h_dim(-2) == 0 && gm.trusted_h(-2)) cert.B_exactness_waived = true;
    {
        auto Bz = mc.B_at(-1).apply(zeta);
        auto sol = solve(mc.b_at(-3), Bz);
        if (sol)
            cert.eta = *sol;
        else if (!cert.B_exactness_waived)
            raise(Errc::BNotExact, "B zeta is not exact and H^{-2}(g) does not vanish");
    }

    for (long kg = ctx.g_lo(); kg <= ctx.g_hi(); ++kg) {
        if (!gm.trusted_h(kg) || !mc.trusted_h(kg)) continue;
        auto ind = induced_map(palladio_map(ctx, zeta, kg), gm.homology(kg), mc.homology(kg));
        if (ind.rows() != ind.cols() || rank(ind) != ind.rows())
            raise(Errc::NotQuasiIso, "contraction is not an isomorphism at degree " +
                                         std::to_string(kg));
        cert.iso_ranks.emplace_back(kg, ind.rows());
    }
    if (cert.iso_ranks.empty())
        raise(Errc::UntrustedDegree, "no trusted degrees to certify the duality on");
    return cert;
}

// --------------------------------------------------------------------- lift

/// A d_u-cocycle zeta-hat in CC^{-1} whose constant term is cohomologous to
/// zeta; the constant power series is tried first.
template <class F>
std::vector<typename F::Elem> lift_palladio(const RegradedContext<F>& ctx,
                                            const UWindowComplex<F>& cc,
                                            const PalladioCertificate<F>& cert) {
    const F& k = ctx.field();
    const auto& mc = *ctx.mixed();
    auto blocks = cc.blocks(-1);
    std::vector<typename F::Elem> cand(UWindowComplex<F>::total(blocks), k.zero());
    if (const auto* blk = UWindowComplex<F>::find(blocks, -1, 0)) {
        for (std::size_t i = 0; i < cert.zeta.size(); ++i) cand[blk->offset + i] = cert.zeta[i];
        bool closed = true;
        for (const auto& c : cc.du(-1).apply(cand))
            if (!k.is_zero(c)) {
                closed = false;
                break;
            }
        if (closed) return cand;
    }
    // solve d_u x = 0, ev0 x = zeta + b y
    auto du = cc.du(-1);
    auto ev = cc.ev0(-1);
    auto bm = mc.b_at(-2);
    std::size_t nx = du.cols(), ny = bm.cols();
    Matrix<F> sys(k, du.rows() + ev.rows(), nx + ny);
    std::vector<typename F::Elem> rhs(du.rows() + ev.rows(), k.zero());
    for (std::size_t r = 0; r < du.rows(); ++r)
        for (std::size_t c = 0; c < nx; ++c) sys(r, c) = du(r, c);
    for (std::size_t r = 0; r < ev.rows(); ++r) {
        for (std::size_t c = 0; c < nx; ++c) sys(du.rows() + r, c) = ev(r, c);
        for (std::size_t c = 0; c < ny; ++c) sys(du.rows() + r, nx + c) = k.neg(bm(r, c));
        rhs[du.rows() + r] = cert.zeta[r];
    }
    auto sol = solve(sys, rhs);
    if (!sol) raise(Errc::LiftNotFound, "no cocycle lift in this window; enlarge n_max");
    return std::vector<typename F::Elem>(sol->begin(), sol->begin() + nx);
}

// ------------------------------------------------------------ bracket table

/// Structure constants of a bilinear homology-level operation.  The entry
/// at degree pair (k1,k2) is a matrix with one column per basis-class pair
/// (x,y), column index x*dim2+y, expressing the result in the target basis.
template <class F>
struct BracketTable {
    std::string name;
    long result_shift = 0;  // target degree = k1 + k2 + result_shift
    std::map<std::pair<long, long>, Matrix<F>> entries;
    std::map<long, std::size_t> dims;  // degree -> homology dimension

    bool has(long k1, long k2) const { return entries.count({k1, k2}) > 0; }

    std::vector<typename F::Elem> apply(const F& f, long k1, std::size_t x, long k2,
                                        std::size_t y) const {
        const auto& m = entries.at({k1, k2});
        std::size_t d2 = dims.at(k2);
        std::vector<typename F::Elem> out(m.rows(), f.zero());
        for (std::size_t r = 0; r < m.rows(); ++r) out[r] = m(r, x * d2 + y);
        return out;
    }
};

/// Antisymmetry [x,y] = -(-1)^{k1 k2} [y,x] on every stored pair.
template <class F>
bool table_antisymmetric(const F& f, const BracketTable<F>& t) {
    for (const auto& [degs, m] : t.entries) {
        auto [k1, k2] = degs;
        if (!t.has(k2, k1)) return false;
        std::size_t d1 = t.dims.at(k1), d2 = t.dims.at(k2);
        for (std::size_t x = 0; x < d1; ++x)
            for (std::size_t y = 0; y < d2; ++y) {
                auto lhs = t.apply(f, k1, x, k2, y);
                auto rhs = t.apply(f, k2, y, k1, x);
                bool neg = ((k1 * k2) % 2 + 2) % 2 == 0;  // -(-1)^{k1k2}
                for (std::size_t r = 0; r < lhs.size(); ++r) {
                    auto want = neg ? f.neg(rhs[r]) : rhs[r];
                    if (!f.eq(lhs[r], want)) return false;
                }
            }
    }
    return true;
}

/// Graded Jacobi [x,[y,z]] = [[x,y],z] + (-1)^{k1 k2}[y,[x,z]] whenever all
/// intermediate degree pairs are present in the table.
template <class F>
bool table_jacobi(const F& f, const BracketTable<F>& t) {
    for (const auto& [degs_yz, myz] : t.entries) {
        auto [k2, k3] = degs_yz;
        long kyz = k2 + k3 + t.result_shift;
        for (const auto& [degs_x, mx] : t.entries) {
            auto [k1, kyz2] = degs_x;
            if (kyz2 != kyz) continue;
            if (!t.has(k1, k2) || !t.has(k1 + k2 + t.result_shift, k3) || !t.has(k2, k1 + k3 + t.result_shift) ||
                !t.has(k1, k3))
                continue;
            std::size_t d1 = t.dims.at(k1), d2 = t.dims.at(k2), d3 = t.dims.at(k3);
            for (std::size_t x = 0; x < d1; ++x)
                for (std::size_t y = 0; y < d2; ++y)
                    for (std::size_t z = 0; z < d3; ++z) {
                        auto yz = t.apply(f, k2, y, k3, z);
                        std::vector<typename F::Elem> lhs(t.dims.count(k1 + kyz + t.result_shift)
                                                              ? t.dims.at(k1 + kyz + t.result_shift)
                                                              : 0,
                                                          f.zero());
                        {
                            const auto& m = t.entries.at({k1, kyz});
                            std::size_t dyz = t.dims.at(kyz);
                            lhs.assign(m.rows(), f.zero());
                            for (std::size_t w = 0; w < dyz; ++w)
                                if (!f.is_zero(yz[w]))
                                    for (std::size_t r = 0; r < m.rows(); ++r)
                                        lhs[r] = f.add(lhs[r], f.mul(m(r, x * dyz + w), yz[w]));
                        }
                        // [[x,y],z]
                        auto xy = t.apply(f, k1, x, k2, y);
                        long kxy = k1 + k2 + t.result_shift;
                        std::vector<typename F::Elem> t1;
                        {
                            const auto& m = t.entries.at({kxy, k3});
                            t1.assign(m.rows(), f.zero());
                            for (std::size_t w = 0; w < t.dims.at(kxy); ++w)
                                if (!f.is_zero(xy[w]))
                                    for (std::size_t r = 0; r < m.rows(); ++r)
                                        t1[r] = f.add(t1[r], f.mul(m(r, w * d3 + z), xy[w]));
                        }
                        // (-1)^{k1 k2} [y, [x,z]]
                        auto xz = t.apply(f, k1, x, k3, z);
                        long kxz = k1 + k3 + t.result_shift;
                        std::vector<typename F::Elem> t2;
                        {
                            const auto& m = t.entries.at({k2, kxz});
                            t2.assign(m.rows(), f.zero());
                            for (std::size_t w = 0; w < t.dims.at(kxz); ++w)
                                if (!f.is_zero(xz[w]))
                                    for (std::size_t r = 0; r < m.rows(); ++r)
                                        t2[r] = f.add(t2[r], f.mul(m(r, y * t.dims.at(kxz) + w),
                                                                   xz[w]));
                        }
                        bool neg = ((k1 * k2) % 2 + 2) % 2 == 1;
                        for (std::size_t r = 0; r < lhs.size(); ++r) {
                            auto rhs = f.add(t1[r], neg ? f.neg(t2[r]) : t2[r]);
                            if (!f.eq(lhs[r], rhs)) return false;
                        }
                    }
        }
    }
    return true;
}

// ------------------------------------------------------- transferred algebra

/// The Gerstenhaber structure moved from H(g) to H(M) through p_zeta.
template <class F>
struct TransferredStructure {
    std::vector<long> degrees;                    // trusted degrees with p_zeta iso
    std::map<long, Matrix<F>> p, p_inv;           // H^k(g) <-> H^k(M)
    BracketTable<F> cup;                          // result_shift +1
    BracketTable<F> bracket;                      // result_shift 0
    std::map<long, Matrix<F>> induced_B;          // H^k(M) -> H^{k-1}(M)
    long unit_degree = -1;
    std::vector<typename F::Elem> unit_class;     // class of zeta in H^{-1}(M)
};

template <class F>
TransferredStructure<F> transfer_structure(const RegradedContext<F>& ctx,
                                           const PalladioCertificate<F>& cert) {
    const F& k = ctx.field();
    const auto& mc = *ctx.mixed();
    const auto& gm = *ctx.g_mixed();
    TransferredStructure<F> out;
    out.cup.name = "cup";
    out.cup.result_shift = 1;
    out.bracket.name = "gerstenhaber";
    out.bracket.result_shift = 0;

    for (auto [kg, rk] : cert.iso_ranks) {
        auto pm = induced_map(palladio_map(ctx, cert.zeta, kg), gm.homology(kg),
                              mc.homology(kg));
        auto e = rref(pm.hcat(Matrix<F>::identity(k, pm.rows())));
        Matrix<F> inv(k, pm.rows(), pm.rows());
        for (std::size_t i = 0; i < pm.rows(); ++i)
            for (std::size_t j = 0; j < pm.rows(); ++j) inv(i, j) = e.r(i, pm.rows() + j);
        out.degrees.push_back(kg);
        out.p[kg] = std::move(pm);
        out.p_inv[kg] = std::move(inv);
        out.cup.dims[kg] = mc.h_dim(kg);
        out.bracket.dims[kg] = mc.h_dim(kg);
        out.induced_B[kg] = Matrix<F>(k, 0, 0);  // filled below when possible
    }

    // induced B on H(M) where source and target are trusted
    for (long kg : out.degrees) {
        if (!mc.trusted_h(kg - 1)) continue;
        out.induced_B[kg] = induced_map(mc.B_at(kg), mc.homology(kg), mc.homology(kg - 1));
    }

    // tables: transfer class-by-class through representatives
    auto g_class_of = [&](long kg, const typename RegradedContext<F>::Vec& v) {
        return gm.homology(kg).reduce(v);
    };
    for (long k1 : out.degrees)
        for (long k2 : out.degrees) {
            long kc = k1 + k2 + 1, kb = k1 + k2;
            bool do_cup = std::count(out.degrees.begin(), out.degrees.end(), kc) > 0;
            bool do_br = std::count(out.degrees.begin(), out.degrees.end(), kb) > 0;
            if (!do_cup && !do_br) continue;
            std::size_t d1 = mc.h_dim(k1), d2 = mc.h_dim(k2);
            Matrix<F> mcup(k, do_cup ? mc.h_dim(kc) : 0, d1 * d2);
            Matrix<F> mbr(k, do_br ? mc.h_dim(kb) : 0, d1 * d2);
            for (std::size_t x = 0; x < d1; ++x) {
                auto fx = out.p_inv.at(k1).col(x);  // class coords in H(g)
                // g-side representative element
                typename RegradedContext<F>::Vec frep(ctx.g_dim(k1), k.zero());
                for (std::size_t c = 0; c < fx.size(); ++c) {
                    if (k.is_zero(fx[c])) continue;
                    auto sec = gm.homology(k1).section().col(c);
                    for (std::size_t r = 0; r < frep.size(); ++r)
                        frep[r] = k.add(frep[r], k.mul(sec[r], fx[c]));
                }
                for (std::size_t y = 0; y < d2; ++y) {
                    auto gy = out.p_inv.at(k2).col(y);
                    typename RegradedContext<F>::Vec grep(ctx.g_dim(k2), k.zero());
                    for (std::size_t c = 0; c < gy.size(); ++c) {
                        if (k.is_zero(gy[c])) continue;
                        auto sec = gm.homology(k2).section().col(c);
                        for (std::size_t r = 0; r < grep.size(); ++r)
                            grep[r] = k.add(grep[r], k.mul(sec[r], gy[c]));
                    }
                    if (do_cup) {
                        auto cls = g_class_of(kc, ctx.g_cup(k1, frep, k2, grep));
                        auto img = out.p.at(kc).apply(cls);
                        for (std::size_t r = 0; r < img.size(); ++r)
                            mcup(r, x * d2 + y) = img[r];
                    }
                    if (do_br) {
                        auto cls = g_class_of(kb, ctx.g_bracket(k1, frep, k2, grep));
                        auto img = out.p.at(kb).apply(cls);
                        for (std::size_t r = 0; r < img.size(); ++r) mbr(r, x * d2 + y) = img[r];
                    }
                }
            }
            if (do_cup) out.cup.entries[{k1, k2}] = std::move(mcup);
            if (do_br) out.bracket.entries[{k1, k2}] = std::move(mbr);
        }

    if (std::count(out.degrees.begin(), out.degrees.end(), -1) > 0)
        out.unit_class = mc.homology(-1).reduce(cert.zeta);
    return out;
}

}  // namespace opcalc

#endif
