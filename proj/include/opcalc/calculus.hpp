#ifndef OPCALC_CALCULUS_HPP
#define OPCALC_CALCULUS_HPP

#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include "opcalc/complexes.hpp"
#include "opcalc/op_module.hpp"

namespace opcalc {

/*
 * The chain-level homotopy-calculus operators of a cyclic unital opposite
 * module over an operad with multiplication, materialized degreewise as
 * matrices on the normalized complex Nbar:
 *
 *   cap:   i_phi x = (mu o_2 phi) bullet_0 x                 : N(n) -> N(n-p)
 *   lie:   L_phi x = sum_{i=1}^{n-p+1} (-1)^{(p-1)(i-1)} phi bullet_i x
 *                  + sum_{i=1}^{p} (-1)^{n(i-1)+p-1} phi bullet_0 t^{i-1}(x)
 *   s_hom: S_phi x = sum_{j=1}^{n-p+1} sum_{i=j}^{n-p+1}
 *                    (-1)^{n(j-1)+(p-1)(i-1)} e bullet_0 (phi bullet_i t^{j-1}(x))
 *   t_hom: T(phi,psi) x = sum_{j=1}^{p-1} sum_{i=j}^{p-1}
 *                    (-1)^{n(j-1)+(q-1)(i-j)+p} (phi o_{p-i+j} psi) bullet_0 t^{j-1}(x)
 *
 * All four are materialized for normalized operadic arguments only: on a
 * degenerate chain, a non-normalized phi can consume the inserted unit and
 * produce a non-degenerate chain, so the quotient matrix would be invalid.
 * Descent is verified column-by-column; a violation raises.
 */
template <class F>
class OppositeCalculus {
  public:
    using Field = F;
    using Elem = typename F::Elem;
    using Vec = std::vector<Elem>;

    OppositeCalculus(std::shared_ptr<const OperadInstance<F>> op, OppositeModule<F> chains)
        : op_(std::move(op)), chains_(std::move(chains)) {
        obar_ = normalized(*op_);
        sd_ = simplicial(chains_);
        nbar_ = normalized_chains(chains_, sd_);
    }

    const F& field() const { return op_->field(); }
    const OperadInstance<F>& operad() const { return *op_; }
    std::shared_ptr<const OperadInstance<F>> operad_ptr() const { return op_; }
    const OppositeModule<F>& chains() const { return chains_; }
    const SimplicialData<F>& simplicial_data() const { return sd_; }
    const NormalizedOperad<F>& obar() const { return obar_; }
    const NormalizedChains<F>& nbar() const { return nbar_; }
    std::size_t nmax() const { return chains_.degree_max(); }
    std::size_t arity_max() const { return op_->arity_max(); }

    std::size_t obar_dim(std::size_t p) const { return obar_.bar[p].dim(); }
    Vec obar_elem(std::size_t p, std::size_t idx) const { return obar_.bar[p].basis.col(idx); }

    bool is_normalized(std::size_t p, const Vec& phi) const {
        return obar_.bar[p].contains(phi);
    }

    std::size_t dim_at(long n) const {
        return (n < 0 || n > static_cast<long>(nmax())) ? 0 : nbar_.dim(n);
    }

    /// b : Nbar(n) -> Nbar(n-1)
    Matrix<F> b_mat(long n) const {
        const F& k = field();
        if (n <= 0 || n > static_cast<long>(nmax()))
            return Matrix<F>(k, dim_at(n - 1), dim_at(n));
        return normalized_matrix(nbar_, n, n - 1, sd_.b[n], k);
    }

    /// Connes B (normalized form) : Nbar(n) -> Nbar(n+1); the zero map when
    /// the target leaves the window is not provided - callers gate on that.
    Matrix<F> B_mat(long n) const {
        const F& k = field();
        if (n < 0) return Matrix<F>(k, dim_at(n + 1), 0);
        if (n + 1 > static_cast<long>(nmax()))
            raise(Errc::ArityOverflow, "B leaves the degree window");
        if (!descends(nbar_, n, n + 1, sd_.connes_b[n], k))
            raise(Errc::DegeneracyNotPreserved, "B does not descend");
        return normalized_matrix(nbar_, n, n + 1, sd_.connes_b[n], k);
    }

    /// i_phi x = (mu o_2 phi) bullet_0 x : Nbar(n) -> Nbar(n-p), normalized
    /// phi; zero when p > n.  At the top arity the operadic intermediate
    /// mu o_2 phi leaves the window, so the equivalent module route
    /// mu bullet_0 (phi bullet_1 x) (the i = 0 composition law) is used.
    Matrix<F> cap(std::size_t p, const Vec& phi, long n) const {
        require_normalized(p, phi, "cap");
        const F& k = field();
        if (p + 1 <= op_->arity_max()) {
            auto mu2phi = op_->lc_elem(op_->compose(2, op_->mu(), p, phi, 2));  // O(p+1)
            return quotiented(n, n - static_cast<long>(p), "cap", [&](const LinComb<F>& x) {
                if (p > static_cast<std::size_t>(n)) return LinComb<F>{};
                return chains_.act_lc(p + 1, mu2phi, static_cast<std::size_t>(n), x, 0);
            });
        }
        auto phi_lc = op_->lc_elem(phi);
        auto mu_lc = op_->lc_elem(op_->mu());
        return quotiented(n, n - static_cast<long>(p), "cap", [&](const LinComb<F>& x) {
            if (p > static_cast<std::size_t>(n) || p < 1) return LinComb<F>{};
            std::size_t nn = static_cast<std::size_t>(n);
            auto inner = chains_.act_lc(p, phi_lc, nn, x, 1);
            auto res = chains_.act_lc(2, mu_lc, nn - p + 1, inner, 0);
            res.prune(k);
            return res;
        });
    }

    /// L_phi : Nbar(n) -> Nbar(n-p+1) for normalized phi; zero when p > n+1.
    Matrix<F> lie(std::size_t p, const Vec& phi, long n) const {
        require_normalized(p, phi, "lie");
        const F& k = field();
        auto phi_lc = op_->lc_elem(phi);
        return quotiented(n, n - static_cast<long>(p) + 1, "lie", [&](const LinComb<F>& x) {
            LinComb<F> acc;
            if (static_cast<long>(p) > n + 1) return acc;
            std::size_t nn = static_cast<std::size_t>(n);
            if (p <= nn)
                for (std::size_t i = 1; i + p <= nn + 1; ++i) {
                    auto term = chains_.act_lc(p, phi_lc, nn, x, i);
                    bool neg = ((p - 1) * (i - 1)) % 2 == 1;
                    for (const auto& [r, v] : term.terms) acc.add_term(k, r, neg ? k.neg(v) : v);
                }
            auto w = x;
            for (std::size_t i = 1; i <= p; ++i) {
                auto term = chains_.act_lc(p, phi_lc, nn, w, 0);
                bool neg = (nn * (i - 1) + p - 1) % 2 == 1;
                for (const auto& [r, v] : term.terms) acc.add_term(k, r, neg ? k.neg(v) : v);
                if (i < p) w = chains_.t_lc(nn, w);
            }
            acc.prune(k);
            return acc;
        });
    }

    /// S_phi : Nbar(n) -> Nbar(n-p+2) for normalized phi; zero when p > n.
    Matrix<F> s_hom(std::size_t p, const Vec& phi, long n) const {
        require_normalized(p, phi, "s_hom");
        const F& k = field();
        auto phi_lc = op_->lc_elem(phi);
        auto e_lc = op_->lc_elem(op_->e());
        return quotiented(n, n - static_cast<long>(p) + 2, "s_hom", [&](const LinComb<F>& x) {
            LinComb<F> acc;
            if (p > static_cast<std::size_t>(n)) return acc;
            std::size_t nn = static_cast<std::size_t>(n);
            auto w = x;
            for (std::size_t j = 1; j + p <= nn + 1; ++j) {
                for (std::size_t i = j; i + p <= nn + 1; ++i) {
                    auto inner = chains_.act_lc(p, phi_lc, nn, w, i);
                    auto term = chains_.act_lc(0, e_lc, nn - p + 1, inner, 0);
                    bool neg = (nn * (j - 1) + (p - 1) * (i - 1)) % 2 == 1;
                    for (const auto& [r, v] : term.terms) acc.add_term(k, r, neg ? k.neg(v) : v);
                }
                if (j + p <= nn) w = chains_.t_lc(nn, w);
            }
            acc.prune(k);
            return acc;
        });
    }

    /// T(phi, psi) : Nbar(n) -> Nbar(n-p-q+2) for normalized phi, psi;
    /// identically zero when p <= 1 (empty summation range).
    Matrix<F> t_hom(std::size_t p, const Vec& phi, std::size_t q, const Vec& psi, long n) const {
        require_normalized(p, phi, "t_hom");
        require_normalized(q, psi, "t_hom");
        const F& k = field();
        long target = n - static_cast<long>(p) - static_cast<long>(q) + 2;
        if (p > 1 && p + q - 1 > op_->arity_max())
            raise(Errc::ArityOverflow, "T composite leaves the arity window");
        std::vector<LinComb<F>> comp(p + 1);
        if (p > 1)
            for (std::size_t slot = 2; slot <= p; ++slot)
                comp[slot] = op_->lc_elem(op_->compose(p, phi, q, psi, slot));
        return quotiented(n, target, "t_hom", [&](const LinComb<F>& x) {
            LinComb<F> acc;
            if (p <= 1) return acc;
            std::size_t nn = static_cast<std::size_t>(n);
            auto w = x;
            for (std::size_t j = 1; j + 1 <= p; ++j) {
                for (std::size_t i = j; i + 1 <= p; ++i) {
                    std::size_t slot = p - i + j;  // runs over [j+1, p]
                    auto term = chains_.act_lc(p + q - 1, comp[slot], nn, w, 0);
                    bool neg = (nn * (j - 1) + (q - 1) * (i - j) + p + q + 1) % 2 == 1;
                    for (const auto& [r, v] : term.terms) acc.add_term(k, r, neg ? k.neg(v) : v);
                }
                if (j + 2 <= p) w = chains_.t_lc(nn, w);
            }
            acc.prune(k);
            return acc;
        });
    }

    // -- operadic element helpers ------------------------------------------

    Vec delta(std::size_t p, const Vec& phi) const { return op_->delta_elem(p, phi); }
    Vec cup_elems(std::size_t q, const Vec& psi, std::size_t p, const Vec& phi) const {
        return op_->cup(q, psi, p, phi);
    }
    Vec gerst(std::size_t p, const Vec& phi, std::size_t q, const Vec& psi) const {
        return op_->gerstenhaber(p, phi, q, psi);
    }

  private:
    void require_normalized(std::size_t p, const Vec& phi, const char* what) const {
        if (!is_normalized(p, phi))
            raise(Errc::NotNormalized, std::string(what) + " needs a normalized argument");
    }

    /// Quotient matrix of an operator given on the full complex: built on
    /// every basis vector; degenerate inputs must produce degenerate images.
    template <class Fn>
    Matrix<F> quotiented(long n_src, long n_dst, const char* what, Fn&& apply) const {
        const F& k = field();
        // A target above the window would be silently cut by the quotient
        // data; refuse instead so identity checks can never compare against
        // zero-padded garbage.  Targets below zero belong to operators that
        // are zero by the composition conventions.
        if (n_dst > static_cast<long>(nmax()) && n_src >= 0 &&
            n_src <= static_cast<long>(nmax()) && dim_at(n_src) > 0)
            raise(Errc::ArityOverflow, std::string(what) + ": target leaves the degree window");
        Matrix<F> out(k, dim_at(n_dst), dim_at(n_src));
        if (n_src < 0 || n_src > static_cast<long>(nmax()) || n_dst < 0) return out;
        std::size_t nn = static_cast<std::size_t>(n_src);
        for (std::size_t bidx = 0; bidx < chains_.dim(nn); ++bidx) {
            auto img = apply(LinComb<F>::basis(bidx, k));
            img.prune(k);
            auto it_src = nbar_.pos[nn].find(bidx);
            const bool src_kept = it_src != nbar_.pos[nn].end();
            const auto& pm = nbar_.pos[static_cast<std::size_t>(n_dst)];
            for (const auto& [r, v] : img.terms) {
                auto it = pm.find(r);
                if (it == pm.end()) continue;  // projected away by the quotient
                if (!src_kept)
                    raise(Errc::DegeneracyNotPreserved,
                          std::string(what) + " does not preserve the degenerate subcomplex");
                out(it->second, it_src->second) = k.add(out(it->second, it_src->second), v);
            }
        }
        return out;
    }

    std::shared_ptr<const OperadInstance<F>> op_;
    OppositeModule<F> chains_;
    SimplicialData<F> sd_;
    NormalizedOperad<F> obar_;
    NormalizedChains<F> nbar_;
};

/*
 * The dual-side operators of a cyclic module over a cyclic operad with
 * multiplication, on the normalized subcomplex Mbar(q) = {m : m o_i e = 0}:
 *
 *   b m   = mu o_2 m + sum_i (-1)^i m o_i mu + (-1)^{q+1} mu o_1 m
 *   B m   = sum_{i=0}^{q-1} (-1)^{(q-1)i} tau^i(tau m o_q e)
 *   iota_phi m = (mu o_2 m) o_1 phi
 *   L_phi m = sum_{i=1}^{q} (-1)^{(p-1)(i-1)} m o_i phi
 *           + sum_{i=1}^{p} (-1)^{(p-1)i + q(i-1)} tau^i(phi) o_{p-i+1} m
 *   S_phi m = sum_{i=1}^{q-1} sum_{j=1}^{i} (-1)^{p(i-j)+q(j-1)+i-1}
 *             (tau^j(m) o_{q-j+1} e) o_{i-j+1} phi
 *   T(phi,psi) m = sum_{j=1}^{p-1} sum_{i=j}^{p-1}
 *             (-1)^{q(j-1)+r(i-1)+(p-1)j+i} (tau^j(phi) o_{p-j+1} m) o_{p-i} psi
 *
 * Operators restrict to Mbar; the restriction is verified per column.
 */
template <class F>
class CyclicCalculus {
  public:
    using Elem = typename F::Elem;
    using Vec = std::vector<Elem>;

    explicit CyclicCalculus(CyclicModule<F> mod) : mod_(std::move(mod)) {
        const F& k = field();
        const auto& O = mod_.operad();
        obar_ = normalized(O);
        coords_.resize(mod_.degree_max() + 1);
        pos_.resize(mod_.degree_max() + 1);
        auto e_lc = O.lc_elem(O.e());
        for (std::size_t q = 0; q <= mod_.degree_max(); ++q) {
            std::vector<bool> keep(mod_.dim(q), true);
            for (std::size_t i = 1; i <= q && q >= 1; ++i) {
                if (q - 1 > mod_.degree_max()) continue;
                for (std::size_t m = 0; m < mod_.dim(q); ++m) {
                    if (!keep[m]) continue;
                    auto img = mod_.right_lc(q, LinComb<F>::basis(m, k), 0, e_lc, i);
                    if (!img.empty_after_prune(k)) keep[m] = false;
                }
            }
            for (std::size_t m = 0; m < mod_.dim(q); ++m)
                if (keep[m]) {
                    pos_[q][m] = coords_[q].size();
                    coords_[q].push_back(m);
                }
        }
    }

    const F& field() const { return mod_.field(); }
    const OperadInstance<F>& operad() const { return mod_.operad(); }
    const CyclicModule<F>& module() const { return mod_; }
    const NormalizedOperad<F>& obar() const { return obar_; }
    std::size_t qmax() const { return mod_.degree_max(); }

    std::size_t dim(std::size_t q) const { return q <= qmax() ? coords_[q].size() : 0; }
    std::size_t dim_at(long q) const {
        return (q < 0 || q > static_cast<long>(qmax())) ? 0 : dim(q);
    }
    std::size_t include(std::size_t q, std::size_t c) const { return coords_[q][c]; }
    const std::unordered_map<std::size_t, std::size_t>& positions(std::size_t q) const {
        return pos_[q];
    }

    std::size_t obar_dim(std::size_t p) const { return obar_.bar[p].dim(); }
    Vec obar_elem(std::size_t p, std::size_t idx) const { return obar_.bar[p].basis.col(idx); }

    bool is_normalized_op(std::size_t p, const Vec& phi) const {
        return obar_.bar[p].contains(phi);
    }

    /// b : Mbar(q) -> Mbar(q+1)
    Matrix<F> b_mat(std::size_t q) const {
        const F& k = field();
        const auto& O = operad();
        auto mu = O.lc_elem(O.mu());
        return restricted(q, static_cast<long>(q) + 1, "b", [&](const LinComb<F>& m) {
            LinComb<F> acc = mod_.left_lc(2, mu, q, m, 2);
            for (std::size_t i = 1; i <= q; ++i) {
                auto t = mod_.right_lc(q, m, 2, mu, i);
                for (const auto& [r, v] : t.terms)
                    acc.add_term(k, r, i % 2 == 1 ? k.neg(v) : v);
            }
            auto t = mod_.left_lc(2, mu, q, m, 1);
            for (const auto& [r, v] : t.terms)
                acc.add_term(k, r, (q + 1) % 2 == 1 ? k.neg(v) : v);
            acc.prune(k);
            return acc;
        });
    }

    /// B : Mbar(q) -> Mbar(q-1)
    Matrix<F> B_mat(std::size_t q) const {
        const F& k = field();
        const auto& O = operad();
        auto e_lc = O.lc_elem(O.e());
        return restricted(q, static_cast<long>(q) - 1, "B", [&](const LinComb<F>& m) {
            LinComb<F> acc;
            if (q == 0) return acc;
            auto base = mod_.right_lc(q, mod_.tau_lc(q, m), 0, e_lc, q);  // tau(m) o_q e
            for (std::size_t i = 0; i + 1 <= q; ++i) {
                bool neg = ((q - 1) * i) % 2 == 1;
                for (const auto& [r, v] : base.terms) acc.add_term(k, r, neg ? k.neg(v) : v);
                if (i + 2 <= q) base = mod_.tau_lc(q - 1, base);
            }
            acc.prune(k);
            return acc;
        });
    }

    /// iota_phi m = (mu o_2 m) o_1 phi : Mbar(q) -> Mbar(q+p).  Computed in
    /// the associativity-equivalent form (mu o_1 phi) o_{p+1} m when that
    /// operadic intermediate fits the arity window, else through M(q+1);
    /// the two routes agree by the validated module laws.
    Matrix<F> cap(std::size_t p, const Vec& phi, std::size_t q) const {
        const F& k = field();
        const auto& O = operad();
        if (p + 1 <= O.arity_max()) {
            auto planted = O.lc_elem(O.compose(2, O.mu(), p, phi, 1));  // O(p+1)
            return restricted(q, static_cast<long>(q + p), "iota", [&](const LinComb<F>& m) {
                auto res = mod_.left_lc(p + 1, planted, q, m, p + 1);
                res.prune(k);
                return res;
            });
        }
        auto mu = O.lc_elem(O.mu());
        auto phi_lc = O.lc_elem(phi);
        return restricted(q, static_cast<long>(q + p), "iota", [&](const LinComb<F>& m) {
            auto inner = mod_.left_lc(2, mu, q, m, 2);
            auto res = mod_.right_lc(q + 1, inner, p, phi_lc, 1);
            res.prune(k);
            return res;
        });
    }

    /// L_phi : Mbar(q) -> Mbar(q+p-1)
    Matrix<F> lie(std::size_t p, const Vec& phi, std::size_t q) const {
        const F& k = field();
        const auto& O = operad();
        auto phi_lc = O.lc_elem(phi);
        return restricted(q, static_cast<long>(q + p) - 1, "L", [&](const LinComb<F>& m) {
            LinComb<F> acc;
            for (std::size_t i = 1; i <= q; ++i) {
                auto t = mod_.right_lc(q, m, p, phi_lc, i);
                bool neg = ((p - 1) * (i - 1)) % 2 == 1;
                for (const auto& [r, v] : t.terms) acc.add_term(k, r, neg ? k.neg(v) : v);
            }
            auto tphi = phi_lc;
            for (std::size_t i = 1; i <= p; ++i) {
                tphi = O.tau_lc(p, tphi);
                auto t = mod_.left_lc(p, tphi, q, m, p - i + 1);
                bool neg = ((p - 1) * i + q * (i - 1)) % 2 == 1;
                for (const auto& [r, v] : t.terms) acc.add_term(k, r, neg ? k.neg(v) : v);
            }
            acc.prune(k);
            return acc;
        });
    }

    /// S_phi : Mbar(q) -> Mbar(q+p-2), normalized phi; zero for q <= 1.
    Matrix<F> s_hom(std::size_t p, const Vec& phi, std::size_t q) const {
        const F& k = field();
        const auto& O = operad();
        if (!is_normalized_op(p, phi)) raise(Errc::NotNormalized, "S needs a normalized argument");
        auto phi_lc = O.lc_elem(phi);
        auto e_lc = O.lc_elem(O.e());
        return restricted(q, static_cast<long>(q + p) - 2, "S", [&](const LinComb<F>& m) {
            LinComb<F> acc;
            if (q >= 2) {
                auto tm = m;
                for (std::size_t j = 1; j + 1 <= q; ++j) {
                    tm = mod_.tau_lc(q, tm);
                    auto contracted = mod_.right_lc(q, tm, 0, e_lc, q - j + 1);
                    for (std::size_t i = j; i + 1 <= q; ++i) {
                        auto t = mod_.right_lc(q - 1, contracted, p, phi_lc, i - j + 1);
                        bool neg = (p * (i - j) + q * (j - 1) + i - 1) % 2 == 1;
                        for (const auto& [r, v] : t.terms)
                            acc.add_term(k, r, neg ? k.neg(v) : v);
                    }
                }
            }
            acc.prune(k);
            return acc;
        });
    }

    /// T(phi, psi) : Mbar(q) -> Mbar(q+p+r-2), normalized arguments; zero
    /// for p <= 1.
    Matrix<F> t_hom(std::size_t p, const Vec& phi, std::size_t r, const Vec& psi,
                    std::size_t q) const {
        const F& k = field();
        const auto& O = operad();
        if (!is_normalized_op(p, phi) || !is_normalized_op(r, psi))
            raise(Errc::NotNormalized, "T needs normalized arguments");
        if (p >= 2 && p + q - 1 > qmax() && dim(q) > 0)
            raise(Errc::ArityOverflow, "T intermediate leaves the degree window");
        auto phi_lc = O.lc_elem(phi);
        auto psi_lc = O.lc_elem(psi);
        return restricted(q, static_cast<long>(q + p + r) - 2, "T", [&](const LinComb<F>& m) {
            LinComb<F> acc;
            if (p <= 1) return acc;
            auto tphi = phi_lc;
            for (std::size_t j = 1; j + 1 <= p; ++j) {
                tphi = O.tau_lc(p, tphi);
                auto planted = mod_.left_lc(p, tphi, q, m, p - j + 1);
                for (std::size_t i = j; i + 1 <= p; ++i) {
                    auto t = mod_.right_lc(p + q - 1, planted, r, psi_lc, p - i);
                    bool neg = (q * (j - 1) + r * (i - 1) + (p - 1) * j + i + r + 1) % 2 == 1;
                    for (const auto& [rr, v] : t.terms) acc.add_term(k, rr, neg ? k.neg(v) : v);
                }
            }
            acc.prune(k);
            return acc;
        });
    }

  private:
    template <class Fn>
    Matrix<F> restricted(std::size_t q_src, long q_dst, const char* what, Fn&& apply) const {
        const F& k = field();
        if (q_dst > static_cast<long>(qmax()) && q_src <= qmax() && dim(q_src) > 0)
            raise(Errc::ArityOverflow, std::string(what) + ": target leaves the degree window");
        Matrix<F> out(k, dim_at(q_dst), dim_at(static_cast<long>(q_src)));
        if (q_src > qmax() || q_dst < 0) return out;
        const auto& pm = pos_[static_cast<std::size_t>(q_dst)];
        for (std::size_t c = 0; c < dim(q_src); ++c) {
            auto img = apply(LinComb<F>::basis(include(q_src, c), k));
            img.prune(k);
            for (const auto& [r, v] : img.terms) {
                auto it = pm.find(r);
                if (it == pm.end())
                    raise(Errc::DegeneracyNotPreserved,
                          std::string(what) + " leaves the normalized subcomplex");
                out(it->second, c) = k.add(out(it->second, c), v);
            }
        }
        return out;
    }

    CyclicModule<F> mod_;
    NormalizedOperad<F> obar_;
    std::vector<std::vector<std::size_t>> coords_;
    std::vector<std::unordered_map<std::size_t, std::size_t>> pos_;
};

}  // namespace opcalc

#endif
