#ifndef OPCALC_OP_MODULE_HPP
#define OPCALC_OP_MODULE_HPP

#include <memory>
#include <unordered_map>
#include <vector>

#include "opcalc/operad.hpp"

namespace opcalc {

/*
 * Cyclic (unital) opposite modules over an operad with multiplication:
 * degree-graded based spaces N(n) with actions
 *
 *     bullet_i : O(p) (x) N(n) -> N(n-p+1),   i = 1..n-p+1,
 *     bullet_0 : O(p) (x) N(n) -> N(n-p+1),   0 <= p <= n+1,
 *
 * and a cyclic operator t per degree.  Tensors are column-sparse with
 * column index a*dimN(n) + x.
 */
template <class F>
class OppositeModule {
  public:
    using Elem = typename F::Elem;
    using Vec = std::vector<Elem>;

    OppositeModule() = default;
    OppositeModule(std::shared_ptr<const OperadInstance<F>> op, std::size_t n_max,
                   std::vector<std::size_t> dims)
        : op_(std::move(op)), n_max_(n_max), dims_(std::move(dims)) {
        const F& k = field();
        act_.resize(op_->arity_max() + 1);
        act0_.resize(op_->arity_max() + 1);
        for (std::size_t p = 0; p <= op_->arity_max(); ++p) {
            act_[p].resize(n_max_ + 1);
            act0_[p].resize(n_max_ + 1);
            for (std::size_t n = 0; n <= n_max_; ++n) {
                if (p <= n) {
                    act_[p][n].assign(n - p + 1,
                                      SparseMat<F>(k, dim(n - p + 1), op_->dim(p) * dim(n)));
                }
                if (p <= n + 1)
                    act0_[p][n] = SparseMat<F>(k, dim(n - p + 1), op_->dim(p) * dim(n));
            }
        }
        t_.assign(n_max_ + 1, SparseMat<F>());
        for (std::size_t n = 0; n <= n_max_; ++n) t_[n] = SparseMat<F>(k, dim(n), dim(n));
    }

    const F& field() const { return op_->field(); }
    const OperadInstance<F>& operad() const { return *op_; }
    std::shared_ptr<const OperadInstance<F>> operad_ptr() const { return op_; }
    std::size_t degree_max() const { return n_max_; }
    std::size_t dim(std::size_t n) const { return n <= n_max_ ? dims_[n] : 0; }

    /// bullet_i tensor; i = 0 is the extra composition.
    SparseMat<F>& action(std::size_t p, std::size_t n, std::size_t i) {
        return i == 0 ? act0_[p][n] : act_[p][n][i - 1];
    }
    const SparseMat<F>& action(std::size_t p, std::size_t n, std::size_t i) const {
        if (n > n_max_ || p > op_->arity_max()) raise(Errc::ArityOverflow, "action out of window");
        if (i == 0) {
            if (p > n + 1) raise(Errc::ArityOverflow, "bullet_0 needs p <= n+1");
            return act0_[p][n];
        }
        if (p > n || i > n - p + 1) raise(Errc::ArityOverflow, "bullet_i out of range");
        return act_[p][n][i - 1];
    }

    SparseMat<F>& t_op(std::size_t n) { return t_[n]; }
    const SparseMat<F>& t_op(std::size_t n) const { return t_[n]; }

    /// phi bullet_i x as sparse vectors; out-of-range actions are zero maps
    /// (the conventions of the defining relations), not errors.
    LinComb<F> act_lc(std::size_t p, const LinComb<F>& phi, std::size_t n, const LinComb<F>& x,
                      std::size_t i) const {
        const F& k = field();
        LinComb<F> out;
        if (i == 0 ? (p > n + 1) : (p > n || i > n - p + 1)) return out;
        const auto& tsr = action(p, n, i);
        for (const auto& [a, ca] : phi.terms)
            for (const auto& [b, cb] : x.terms) {
                auto c = k.mul(ca, cb);
                if (k.is_zero(c)) continue;
                for (const auto& [row, coeff] : tsr.column(a * dim(n) + b).terms)
                    out.add_term(k, row, k.mul(coeff, c));
            }
        return out;
    }

    LinComb<F> t_lc(std::size_t n, const LinComb<F>& x) const {
        const F& k = field();
        LinComb<F> out;
        for (const auto& [b, cb] : x.terms)
            for (const auto& [row, coeff] : t_[n].column(b).terms)
                out.add_term(k, row, k.mul(coeff, cb));
        return out;
    }

  private:
    std::shared_ptr<const OperadInstance<F>> op_;
    std::size_t n_max_ = 0;
    std::vector<std::size_t> dims_;
    std::vector<std::vector<std::vector<SparseMat<F>>>> act_;  // [p][n][i-1]
    std::vector<std::vector<SparseMat<F>>> act0_;              // [p][n]
    std::vector<SparseMat<F>> t_;
};

/// Chain module N_A(n) = A^(x)(n+1) over End_A with slot substitution,
/// the extra composition acting at slot 0, and t the cyclic rotation.
template <class F>
OppositeModule<F> chains_module(const AlgebraSpec<F>& alg,
                                std::shared_ptr<const OperadInstance<F>> op, std::size_t n_max) {
    const F& k = alg.field();
    const std::size_t d = alg.dim();
    std::vector<std::size_t> dims(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) dims[n] = endop::pow_sz(d, n + 1);
    OppositeModule<F> mod(std::move(op), n_max, dims);

    std::vector<std::size_t> tup, v, merged;
    std::size_t beta;
    auto decode_tup = [&](std::size_t idx, std::size_t n, std::vector<std::size_t>& out) {
        out.assign(n + 1, 0);
        for (std::size_t s = n + 1; s-- > 0;) {
            out[s] = idx % d;
            idx /= d;
        }
    };
    auto encode_tup = [&](const std::vector<std::size_t>& t2) {
        std::size_t idx = 0;
        for (auto y : t2) idx = idx * d + y;
        return idx;
    };

    const auto& O = mod.operad();
    for (std::size_t n = 0; n <= n_max; ++n) {
        for (std::size_t p = 0; p <= O.arity_max() && p <= n + 1; ++p) {
            if (n - p + 1 > n_max) continue;  // result degree above the window
            // i = 0: phi consumes slots 0..p-1; i >= 1: slots i..i+p-1
            std::size_t i_hi = (p <= n) ? n - p + 1 : 0;
            for (std::size_t i = 0; i <= i_hi; ++i) {
                if (i == 0 && p > n + 1) continue;
                auto& tsr = mod.action(p, n, i);
                for (std::size_t a = 0; a < O.dim(p); ++a) {
                    endop::decode(a, p, d, v, beta);
                    for (std::size_t b = 0; b < mod.dim(n); ++b) {
                        decode_tup(b, n, tup);
                        bool match = true;
                        for (std::size_t s = 0; s < p; ++s)
                            if (tup[i + s] != v[s]) {
                                match = false;
                                break;
                            }
                        if (!match) continue;
                        merged.clear();
                        merged.insert(merged.end(), tup.begin(), tup.begin() + i);
                        merged.push_back(beta);
                        merged.insert(merged.end(), tup.begin() + i + p, tup.end());
                        tsr.column(a * mod.dim(n) + b).add_term(k, encode_tup(merged), k.one());
                    }
                }
            }
        }
        // t: (x_0..x_n) -> (x_n, x_0..x_{n-1})
        auto& t = mod.t_op(n);
        for (std::size_t b = 0; b < mod.dim(n); ++b) {
            decode_tup(b, n, tup);
            std::vector<std::size_t> rot;
            rot.push_back(tup[n]);
            rot.insert(rot.end(), tup.begin(), tup.end() - 1);
            t.column(b).add_term(k, encode_tup(rot), k.one());
        }
    }
    return mod;
}

/// Exhaustive check of the opposite-module relations (all composition
/// cases including i = 0), unitality, and the cyclic-operator laws.
template <class F>
struct ModuleValidation {
    ValidationReport report;
    std::size_t skipped = 0;
};

template <class F>
ModuleValidation<F> validate_opposite(const OppositeModule<F>& mod) {
    const F& k = mod.field();
    const auto& O = mod.operad();
    ModuleValidation<F> out;
    auto& rep = out.report;
    const std::size_t nmax = mod.degree_max();

    // composition relations phi bullet_i (psi bullet_j x)
    for (std::size_t n = 0; n <= nmax; ++n) {
        for (std::size_t q = 0; q <= O.arity_max() && q <= n + 1; ++q) {
            const std::size_t m = n - q + 1;  // inner result degree
            if (m > nmax) {
                ++out.skipped;
                continue;
            }
            for (std::size_t p = 0; p <= O.arity_max() && p <= m + 1; ++p) {
                std::size_t j_hi = (q <= n) ? n - q + 1 : 0;
                std::size_t i_hi = (p <= m) ? m - p + 1 : 0;
                const std::size_t fdeg = n + 2 - p - q;  // final degree (p+q <= n+2 here)
                for (std::size_t j = 0; j <= j_hi; ++j) {
                    if (j == 0 && q > n + 1) continue;
                    for (std::size_t i = 0; i <= i_hi; ++i) {
                        if (i == 0 && p > m + 1) continue;
                        if (fdeg > nmax) {
                            ++out.skipped;
                            continue;
                        }
                        // classify per the defining relations
                        int kind;  // 0: j<i commute-up, 1: inner composition, 2: i<=j-p commute-down
                        if (j < i)
                            kind = 0;
                        else if (p > 0 && j < i + p)
                            kind = 1;  // j - p < i <= j
                        else
                            kind = 2;  // i <= j - p (and p = 0 collapses here)
                        // admissibility of the right-hand side (intermediates in-window)
                        if (kind == 1 && p + q - 1 > O.arity_max()) {
                            ++out.skipped;
                            continue;
                        }
                        if ((kind == 0 || kind == 2) && n - p + 1 > nmax) {
                            ++out.skipped;
                            continue;
                        }
                        for (std::size_t a = 0; a < O.dim(p); ++a) {
                            auto phi = LinComb<F>::basis(a, k);
                            for (std::size_t b = 0; b < O.dim(q); ++b) {
                                auto psi = LinComb<F>::basis(b, k);
                                for (std::size_t xb = 0; xb < mod.dim(n); ++xb) {
                                    auto x = LinComb<F>::basis(xb, k);
                                    auto inner = mod.act_lc(q, psi, n, x, j);
                                    auto lhs = mod.act_lc(p, phi, m, inner, i);
                                    LinComb<F> rhs;
                                    if (kind == 0) {
                                        auto t = mod.act_lc(p, phi, n, x, i + q - 1);
                                        rhs = mod.act_lc(q, psi, n - p + 1, t, j);
                                    } else if (kind == 1) {
                                        auto comp = O.compose_lc(p, phi, q, psi, j - i + 1);
                                        rhs = mod.act_lc(p + q - 1, comp, n, x, i);
                                    } else {
                                        auto t = mod.act_lc(p, phi, n, x, i);
                                        rhs = mod.act_lc(q, psi, n - p + 1, t,
                                                         p > 0 ? j - p + 1 : j + 1);
                                    }
                                    rep.count();
                                    if (!lc_equal(k, lhs, rhs))
                                        rep.fail("module-composition",
                                                 {(long)p, (long)q, (long)n, (long)i, (long)j,
                                                  (long)a, (long)b, (long)xb});
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    // unitality: 1 bullet_i x = x for i = 0..n
    auto one_lc = O.lc_elem(O.one());
    for (std::size_t n = 1; n <= nmax; ++n) {
        for (std::size_t xb = 0; xb < mod.dim(n); ++xb) {
            auto x = LinComb<F>::basis(xb, k);
            for (std::size_t i = 0; i <= n; ++i) {
                rep.count();
                if (!lc_equal(k, mod.act_lc(1, one_lc, n, x, i), x))
                    rep.fail("module-unit", {(long)n, (long)i, (long)xb});
            }
        }
    }

    // t relations
    for (std::size_t n = 0; n <= nmax; ++n) {
        for (std::size_t xb = 0; xb < mod.dim(n); ++xb) {
            auto x = LinComb<F>::basis(xb, k);
            auto w = x;
            for (std::size_t s = 0; s <= n; ++s) w = mod.t_lc(n, w);
            rep.count();
            if (!lc_equal(k, w, x)) rep.fail("t-order", {(long)n, (long)xb});
        }
        // t(phi bullet_i x) = phi bullet_{i+1} t(x), i = 0..n-p
        for (std::size_t p = 0; p <= O.arity_max() && p <= n; ++p) {
            if (n - p + 1 > nmax) continue;
            for (std::size_t i = 0; i + p <= n; ++i) {
                for (std::size_t a = 0; a < O.dim(p); ++a) {
                    auto phi = LinComb<F>::basis(a, k);
                    for (std::size_t xb = 0; xb < mod.dim(n); ++xb) {
                        auto x = LinComb<F>::basis(xb, k);
                        auto lhs = mod.t_lc(n - p + 1, mod.act_lc(p, phi, n, x, i));
                        auto rhs = mod.act_lc(p, phi, n, mod.t_lc(n, x), i + 1);
                        rep.count();
                        if (!lc_equal(k, lhs, rhs))
                            rep.fail("t-compat", {(long)p, (long)n, (long)i, (long)a, (long)xb});
                    }
                }
            }
        }
    }
    return out;
}

// --- simplicial structure and normalization ------------------------------

/// Faces, degeneracies, the extra degeneracy, b, and the normalized B of a
/// cyclic unital opposite module, as sparse per-degree maps on N.
template <class F>
struct SimplicialData {
    // face(n, i): N(n) -> N(n-1), 0 <= i <= n, n >= 1
    // degen(n, j): N(n) -> N(n+1), 0 <= j <= n
    // s_minus1(n): N(n) -> N(n+1)
    // b(n): N(n) -> N(n-1); norm(n): the norm operator on N(n)
    std::vector<std::vector<SparseMat<F>>> face, degen;
    std::vector<SparseMat<F>> s_minus1;
    std::vector<SparseMat<F>> b;
    // Connes operator in its normalized form B(x) = sum (-1)^{in} e bullet_0 t^i(x),
    // valid on the normalized quotient only.
    std::vector<SparseMat<F>> connes_b;
};

template <class F>
SparseMat<F> act_matrix(const OppositeModule<F>& mod, std::size_t p,
                        const typename OperadInstance<F>::Vec& phi, std::size_t n,
                        std::size_t i) {
    const F& k = mod.field();
    SparseMat<F> m(k, mod.dim(n - p + 1), mod.dim(n));
    auto phi_lc = mod.operad().lc_elem(phi);
    for (std::size_t x = 0; x < mod.dim(n); ++x) {
        auto out = mod.act_lc(p, phi_lc, n, LinComb<F>::basis(x, k), i);
        m.column(x) = std::move(out);
    }
    return m;
}

template <class F>
SimplicialData<F> simplicial(const OppositeModule<F>& mod) {
    const F& k = mod.field();
    const auto& O = mod.operad();
    const std::size_t nmax = mod.degree_max();
    SimplicialData<F> s;
    s.face.resize(nmax + 1);
    s.degen.resize(nmax + 1);
    s.s_minus1.resize(nmax + 1);
    s.b.resize(nmax + 1);

    for (std::size_t n = 0; n <= nmax; ++n) {
        if (n >= 1) {
            s.face[n].reserve(n + 1);
            for (std::size_t i = 0; i < n; ++i)
                s.face[n].push_back(act_matrix(mod, 2, O.mu(), n, i));
            // d_n = mu bullet_0 t
            SparseMat<F> dn(k, mod.dim(n - 1), mod.dim(n));
            auto mu_lc = O.lc_elem(O.mu());
            for (std::size_t x = 0; x < mod.dim(n); ++x)
                dn.column(x) =
                    mod.act_lc(2, mu_lc, n, mod.t_lc(n, LinComb<F>::basis(x, k)), 0);
            s.face[n].push_back(std::move(dn));

            // b = sum (-1)^i d_i
            SparseMat<F> b(k, mod.dim(n - 1), mod.dim(n));
            for (std::size_t x = 0; x < mod.dim(n); ++x) {
                LinComb<F> acc;
                for (std::size_t i = 0; i <= n; ++i) {
                    const auto& col = s.face[n][i].column(x);
                    for (const auto& [r, c] : col.terms)
                        acc.add_term(k, r, i % 2 == 0 ? c : k.neg(c));
                }
                acc.prune(k);
                b.column(x) = std::move(acc);
            }
            s.b[n] = std::move(b);
        } else {
            s.b[0] = SparseMat<F>(k, 0, mod.dim(0));
        }

        if (n + 1 <= nmax) {
            s.degen[n].reserve(n + 1);
            for (std::size_t j = 0; j <= n; ++j)
                s.degen[n].push_back(act_matrix(mod, 0, O.e(), n, j + 1));
            s.s_minus1[n] = act_matrix(mod, 0, O.e(), n, 0);
        }
    }

    s.connes_b.resize(nmax + 1);
    auto e_lc = O.lc_elem(O.e());
    for (std::size_t n = 0; n + 1 <= nmax; ++n) {
        SparseMat<F> bb(k, mod.dim(n + 1), mod.dim(n));
        for (std::size_t x = 0; x < mod.dim(n); ++x) {
            LinComb<F> acc;
            auto w = LinComb<F>::basis(x, k);
            for (std::size_t i = 0; i <= n; ++i) {
                auto term = mod.act_lc(0, e_lc, n, w, 0);
                bool neg = (i * n) % 2 == 1;
                for (const auto& [r, c] : term.terms) acc.add_term(k, r, neg ? k.neg(c) : c);
                if (i < n) w = mod.t_lc(n, w);
            }
            acc.prune(k);
            bb.column(x) = std::move(acc);
        }
        s.connes_b[n] = std::move(bb);
    }
    return s;
}

/// Checks the simplicial identities and b^2 = 0, exhaustively per degree.
template <class F>
ValidationReport validate_simplicial(const OppositeModule<F>& mod, const SimplicialData<F>& s) {
    const F& k = mod.field();
    ValidationReport rep;
    const std::size_t nmax = mod.degree_max();

    auto col_of = [&](const SparseMat<F>& m, const LinComb<F>& v) {
        LinComb<F> out;
        for (const auto& [b, cb] : v.terms)
            for (const auto& [r, c] : m.column(b).terms) out.add_term(k, r, k.mul(c, cb));
        return out;
    };

    for (std::size_t n = 2; n <= nmax; ++n) {
        // d_i d_j = d_{j-1} d_i for i < j
        for (std::size_t j = 1; j <= n; ++j)
            for (std::size_t i = 0; i < j; ++i)
                for (std::size_t x = 0; x < mod.dim(n); ++x) {
                    auto v = LinComb<F>::basis(x, k);
                    auto lhs = col_of(s.face[n - 1][i], col_of(s.face[n][j], v));
                    auto rhs = col_of(s.face[n - 1][j - 1], col_of(s.face[n][i], v));
                    rep.count();
                    if (!lc_equal(k, lhs, rhs)) rep.fail("dd", {(long)n, (long)i, (long)j, (long)x});
                }
    }
    for (std::size_t n = 0; n + 2 <= nmax; ++n) {
        // s_i s_j = s_{j+1} s_i for i <= j
        for (std::size_t j = 0; j <= n; ++j)
            for (std::size_t i = 0; i <= j; ++i)
                for (std::size_t x = 0; x < mod.dim(n); ++x) {
                    auto v = LinComb<F>::basis(x, k);
                    auto lhs = col_of(s.degen[n + 1][i], col_of(s.degen[n][j], v));
                    auto rhs = col_of(s.degen[n + 1][j + 1], col_of(s.degen[n][i], v));
                    rep.count();
                    if (!lc_equal(k, lhs, rhs)) rep.fail("ss", {(long)n, (long)i, (long)j, (long)x});
                }
    }
    for (std::size_t n = 1; n + 1 <= nmax; ++n) {
        // d_i s_j relations
        for (std::size_t j = 0; j <= n; ++j)
            for (std::size_t i = 0; i <= n + 1; ++i)
                for (std::size_t x = 0; x < mod.dim(n); ++x) {
                    auto v = LinComb<F>::basis(x, k);
                    auto lhs = col_of(s.face[n + 1][i], col_of(s.degen[n][j], v));
                    LinComb<F> rhs;
                    if (i == j || i == j + 1)
                        rhs = v;
                    else if (i < j)
                        rhs = col_of(s.degen[n - 1][j - 1], col_of(s.face[n][i], v));
                    else
                        rhs = col_of(s.degen[n - 1][j], col_of(s.face[n][i - 1], v));
                    rep.count();
                    if (!lc_equal(k, lhs, rhs)) rep.fail("ds", {(long)n, (long)i, (long)j, (long)x});
                }
    }
    // b^2 = 0
    for (std::size_t n = 2; n <= nmax; ++n) {
        for (std::size_t x = 0; x < mod.dim(n); ++x) {
            auto v = LinComb<F>::basis(x, k);
            auto w = col_of(s.b[n - 1], col_of(s.b[n], v));
            rep.count();
            if (!w.empty_after_prune(k)) rep.fail("b-squared", {(long)n, (long)x});
        }
    }
    return rep;
}

/*
 * The normalized complex: quotient of N by the span of the degeneracy
 * images, realized as a coordinate subspace.  This requires the
 * degeneracies to be monomial with unit coefficients and injective,
 * pairwise-disjoint targets, which holds for every instance built here (the
 * adapted algebra basis makes degenerate basis tensors literal basis
 * elements).  The deterministic echelon section is then the coordinate
 * inclusion.
 */
template <class F>
struct NormalizedChains {
    std::vector<std::vector<std::size_t>> coords;       // kept basis indices per degree
    std::vector<std::unordered_map<std::size_t, std::size_t>> pos;  // index -> position

    std::size_t dim(std::size_t n) const { return n < coords.size() ? coords[n].size() : 0; }

    /// Projection N(n) ->> Nbar(n) of a sparse vector; drops degenerate coords.
    template <class LC>
    LC project(std::size_t n, const LC& v) const {
        LC out;
        for (const auto& [i, c] : v.terms) {
            auto it = pos[n].find(i);
            if (it != pos[n].end()) out.terms.emplace_back(it->second, c);
        }
        return out;
    }

    std::size_t include(std::size_t n, std::size_t position) const { return coords[n][position]; }
};

template <class F>
NormalizedChains<F> normalized_chains(const OppositeModule<F>& mod, const SimplicialData<F>& s) {
    const F& k = mod.field();
    const std::size_t nmax = mod.degree_max();
    NormalizedChains<F> out;
    out.coords.resize(nmax + 1);
    out.pos.resize(nmax + 1);
    for (std::size_t n = 0; n <= nmax; ++n) {
        std::vector<bool> degenerate(mod.dim(n), false);
        if (n >= 1) {
            for (std::size_t j = 0; j < n; ++j) {
                const auto& sj = s.degen[n - 1][j];
                for (std::size_t x = 0; x < mod.dim(n - 1); ++x) {
                    const auto& col = sj.column(x);
                    if (col.terms.empty()) continue;
                    if (col.terms.size() != 1 || !k.eq(col.terms[0].second, k.one()))
                        raise(Errc::DegeneracyNotPreserved,
                              "degeneracies are not monomial; no coordinate normalization");
                    degenerate[col.terms[0].first] = true;
                }
            }
        }
        for (std::size_t i = 0; i < mod.dim(n); ++i) {
            if (!degenerate[i]) {
                out.pos[n][i] = out.coords[n].size();
                out.coords[n].push_back(i);
            }
        }
    }
    return out;
}

/// True when X maps the degenerate subspace into itself at this degree
/// (a requirement for X to descend to the quotient).
template <class F>
bool descends(const NormalizedChains<F>& bar, std::size_t n_src, std::size_t n_dst,
              const SparseMat<F>& x, const F& k) {
    std::vector<bool> keep_src(x.cols(), false), keep_dst(x.rows(), false);
    for (auto i : bar.coords[n_src]) keep_src[i] = true;
    for (auto i : bar.coords[n_dst]) keep_dst[i] = true;
    for (std::size_t c = 0; c < x.cols(); ++c) {
        if (keep_src[c]) continue;
        for (const auto& [r, v] : x.column(c).terms)
            if (keep_dst[r] && !k.is_zero(v)) return false;
    }
    return true;
}

/// Dense matrix of the induced map Nbar(n_src) -> Nbar(n_dst): project o X o include.
/// Callers must have checked descends() where the quotient reading matters.
template <class F>
Matrix<F> normalized_matrix(const NormalizedChains<F>& bar, std::size_t n_src, std::size_t n_dst,
                            const SparseMat<F>& x, const F& k) {
    Matrix<F> m(k, bar.dim(n_dst), bar.dim(n_src));
    for (std::size_t c = 0; c < bar.dim(n_src); ++c) {
        const auto& col = x.column(bar.include(n_src, c));
        for (const auto& [r, v] : col.terms) {
            auto it = bar.pos[n_dst].find(r);
            if (it != bar.pos[n_dst].end()) m(it->second, c) = k.add(m(it->second, c), v);
        }
    }
    return m;
}

// --- cyclic modules over cyclic operads ----------------------------------

/*
 * A module over an operad with left and right partial compositions, plus a
 * cyclic operator tau.  The operad acting on itself is the canonical
 * instance.  Degrees run on [0, q_max].
 */
template <class F>
class CyclicModule {
  public:
    using Elem = typename F::Elem;
    using Vec = std::vector<Elem>;

    CyclicModule() = default;
    CyclicModule(std::shared_ptr<const OperadInstance<F>> op, std::size_t q_max,
                 std::vector<std::size_t> dims)
        : op_(std::move(op)), q_max_(q_max), dims_(std::move(dims)) {
        const F& k = field();
        left_.resize(op_->arity_max() + 1);
        for (std::size_t p = 1; p <= op_->arity_max(); ++p) {
            left_[p].resize(q_max_ + 1);
            for (std::size_t q = 0; q <= q_max_; ++q) {
                if (p + q - 1 > q_max_) continue;
                left_[p][q].assign(p, SparseMat<F>(k, dim(p + q - 1), op_->dim(p) * dim(q)));
            }
        }
        right_.resize(q_max_ + 1);
        for (std::size_t q = 1; q <= q_max_; ++q) {
            right_[q].resize(op_->arity_max() + 1);
            for (std::size_t p = 0; p <= op_->arity_max(); ++p) {
                if (p + q - 1 > q_max_) continue;
                right_[q][p].assign(q, SparseMat<F>(k, dim(q + p - 1), dim(q) * op_->dim(p)));
            }
        }
        tau_.assign(q_max_ + 1, SparseMat<F>());
        for (std::size_t q = 0; q <= q_max_; ++q) tau_[q] = SparseMat<F>(k, dim(q), dim(q));
    }

    const F& field() const { return op_->field(); }
    const OperadInstance<F>& operad() const { return *op_; }
    std::shared_ptr<const OperadInstance<F>> operad_ptr() const { return op_; }
    std::size_t degree_max() const { return q_max_; }
    std::size_t dim(std::size_t q) const { return q <= q_max_ ? dims_[q] : 0; }

    SparseMat<F>& left(std::size_t p, std::size_t q, std::size_t i) { return left_[p][q][i - 1]; }
    const SparseMat<F>& left(std::size_t p, std::size_t q, std::size_t i) const {
        if (p < 1 || p > op_->arity_max() || q > q_max_ || i < 1 || i > p ||
            p + q - 1 > q_max_)
            raise(Errc::ArityOverflow, "left composition out of window");
        return left_[p][q][i - 1];
    }
    SparseMat<F>& right(std::size_t q, std::size_t p, std::size_t i) { return right_[q][p][i - 1]; }
    const SparseMat<F>& right(std::size_t q, std::size_t p, std::size_t i) const {
        if (q < 1 || q > q_max_ || p > op_->arity_max() || i < 1 || i > q ||
            p + q - 1 > q_max_)
            raise(Errc::ArityOverflow, "right composition out of window");
        return right_[q][p][i - 1];
    }

    SparseMat<F>& tau(std::size_t q) { return tau_[q]; }
    const SparseMat<F>& tau(std::size_t q) const { return tau_[q]; }

    LinComb<F> left_lc(std::size_t p, const LinComb<F>& phi, std::size_t q, const LinComb<F>& m,
                       std::size_t i) const {
        const F& k = field();
        LinComb<F> out;
        const auto& tsr = left(p, q, i);
        for (const auto& [a, ca] : phi.terms)
            for (const auto& [b, cb] : m.terms) {
                auto c = k.mul(ca, cb);
                for (const auto& [row, coeff] : tsr.column(a * dim(q) + b).terms)
                    out.add_term(k, row, k.mul(coeff, c));
            }
        return out;
    }

    LinComb<F> right_lc(std::size_t q, const LinComb<F>& m, std::size_t p, const LinComb<F>& phi,
                        std::size_t i) const {
        const F& k = field();
        LinComb<F> out;
        const auto& tsr = right(q, p, i);
        for (const auto& [b, cb] : m.terms)
            for (const auto& [a, ca] : phi.terms) {
                auto c = k.mul(cb, ca);
                for (const auto& [row, coeff] : tsr.column(b * op_->dim(p) + a).terms)
                    out.add_term(k, row, k.mul(coeff, c));
            }
        return out;
    }

    LinComb<F> tau_lc(std::size_t q, const LinComb<F>& m) const {
        const F& k = field();
        LinComb<F> out;
        for (const auto& [b, cb] : m.terms)
            for (const auto& [row, coeff] : tau_[q].column(b).terms)
                out.add_term(k, row, k.mul(coeff, cb));
        return out;
    }

  private:
    std::shared_ptr<const OperadInstance<F>> op_;
    std::size_t q_max_ = 0;
    std::vector<std::size_t> dims_;
    std::vector<std::vector<std::vector<SparseMat<F>>>> left_;   // [p][q][i-1]
    std::vector<std::vector<std::vector<SparseMat<F>>>> right_;  // [q][p][i-1]
    std::vector<SparseMat<F>> tau_;
};

/// The operad as a cyclic module over itself: both compositions are the
/// operadic partial compositions, tau is the operadic cyclic operator.
template <class F>
CyclicModule<F> operad_as_module(std::shared_ptr<const OperadInstance<F>> op) {
    const auto& O = *op;
    if (!O.has_tau()) raise(Errc::NoFrobeniusForm, "operad-as-module needs a cyclic operad");
    std::vector<std::size_t> dims(O.arity_max() + 1);
    for (std::size_t q = 0; q <= O.arity_max(); ++q) dims[q] = O.dim(q);
    CyclicModule<F> m(op, O.arity_max(), dims);
    for (std::size_t p = 1; p <= O.arity_max(); ++p)
        for (std::size_t q = 0; p + q >= 1 && p + q - 1 <= O.arity_max(); ++q)
            for (std::size_t i = 1; i <= p; ++i) m.left(p, q, i) = O.comp(p, q, i);
    for (std::size_t q = 1; q <= O.arity_max(); ++q)
        for (std::size_t p = 0; p + q - 1 <= O.arity_max(); ++p)
            for (std::size_t i = 1; i <= q; ++i) m.right(q, p, i) = O.comp(q, p, i);
    for (std::size_t q = 0; q <= O.arity_max(); ++q) m.tau(q) = O.tau(q);
    return m;
}

/// Composition-law and cyclic-law validation for a module over a cyclic
/// operad: the operadic associativity cases for the three placements of the
/// module factor, plus the tau laws of a cyclic module.
template <class F>
ModuleValidation<F> validate_cyclic_module(const CyclicModule<F>& mod) {
    const F& k = mod.field();
    const auto& O = mod.operad();
    ModuleValidation<F> out;
    auto& rep = out.report;
    const std::size_t qmax = mod.degree_max();
    const std::size_t amax = O.arity_max();

    // (x o_i y) o_j z with the module in each of the three slots.
    // Slot layout mirrors the operadic law; "M" marks the module factor.
    enum Shape { MOO, OMO, OOM };
    for (int shape_i = 0; shape_i < 3; ++shape_i) {
        Shape shape = static_cast<Shape>(shape_i);
        for (std::size_t p = 1; p <= (shape == MOO ? qmax : amax); ++p) {
            for (std::size_t q = 0; p + q >= 1 && p + q - 1 <= (shape == OOM ? amax : qmax);
                 ++q) {
                if (shape == OMO && q > qmax) continue;
                if (shape == MOO && q > amax) continue;
                for (std::size_t r = 0; p + q + r >= 2 && p + q + r - 2 <= qmax; ++r) {
                    if (shape == OOM && r > qmax) continue;
                    if (shape != OOM && r > amax) continue;
                    if (shape != OOM && p + q - 1 > qmax) continue;
                    for (std::size_t i = 1; i <= p; ++i) {
                        for (std::size_t j = 1; j <= p + q - 1; ++j) {
                            enum { BELOW, INSIDE, ABOVE } c;
                            if (j < i)
                                c = BELOW;
                            else if (j < q + i)
                                c = INSIDE;
                            else
                                c = ABOVE;
                            // window admissibility of intermediates
                            bool ok = true;
                            if (c == BELOW || c == ABOVE)
                                ok = p + r >= 1 &&
                                     p + r - 1 <= (shape == OMO ? amax : qmax);
                            else
                                ok = q + r >= 1 &&
                                     q + r - 1 <= (shape == MOO ? amax : qmax);
                            if (!ok) {
                                ++out.skipped;
                                continue;
                            }
                            // dispatchers for the three shapes
                            auto comp_xy = [&](const LinComb<F>& x, const LinComb<F>& y,
                                               std::size_t pp, std::size_t qq, std::size_t ii,
                                               bool x_is_mod, bool y_is_mod) {
                                if (x_is_mod) return mod.right_lc(pp, x, qq, y, ii);
                                if (y_is_mod) return mod.left_lc(pp, x, qq, y, ii);
                                return O.compose_lc(pp, x, qq, y, ii);
                            };
                            bool xm = shape == MOO, ym = shape == OMO, zm = shape == OOM;
                            for (std::size_t a = 0; a < (xm ? mod.dim(p) : O.dim(p)); ++a) {
                                auto x = LinComb<F>::basis(a, k);
                                for (std::size_t b = 0; b < (ym ? mod.dim(q) : O.dim(q)); ++b) {
                                    auto y = LinComb<F>::basis(b, k);
                                    auto xy = comp_xy(x, y, p, q, i, xm, ym);
                                    for (std::size_t cc = 0; cc < (zm ? mod.dim(r) : O.dim(r));
                                         ++cc) {
                                        auto z = LinComb<F>::basis(cc, k);
                                        auto lhs =
                                            comp_xy(xy, z, p + q - 1, r, j, xm || ym, zm);
                                        LinComb<F> rhs;
                                        if (c == BELOW) {
                                            auto t = comp_xy(x, z, p, r, j, xm, zm);
                                            rhs = comp_xy(t, y, p + r - 1, q, i + r - 1,
                                                          xm || zm, ym);
                                        } else if (c == INSIDE) {
                                            auto t = comp_xy(y, z, q, r, j - i + 1, ym, zm);
                                            rhs = comp_xy(x, t, p, q + r - 1, i, xm, ym || zm);
                                        } else {
                                            auto t = comp_xy(x, z, p, r, j - q + 1, xm, zm);
                                            rhs = comp_xy(t, y, p + r - 1, q, i, xm || zm, ym);
                                        }
                                        rep.count();
                                        if (!lc_equal(k, lhs, rhs))
                                            rep.fail("module-associativity",
                                                     {(long)shape_i, (long)p, (long)q, (long)r,
                                                      (long)i, (long)j, (long)a, (long)b,
                                                      (long)cc});
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    // cyclic-module tau laws
    for (std::size_t q = 0; q <= qmax; ++q) {
        for (std::size_t b = 0; b < mod.dim(q); ++b) {
            auto m = LinComb<F>::basis(b, k);
            auto w = m;
            for (std::size_t s = 0; s <= q; ++s) w = mod.tau_lc(q, w);
            rep.count();
            if (!lc_equal(k, w, m)) rep.fail("tau-order", {(long)q, (long)b});
        }
    }
    for (std::size_t p = 1; p <= amax; ++p) {
        for (std::size_t q = 0; p + q >= 1 && p + q - 1 <= qmax; ++q) {
            for (std::size_t a = 0; a < O.dim(p); ++a) {
                auto phi = LinComb<F>::basis(a, k);
                auto tphi = O.tau_lc(p, phi);
                for (std::size_t b = 0; b < mod.dim(q); ++b) {
                    auto m = LinComb<F>::basis(b, k);
                    for (std::size_t i = 2; i <= p; ++i) {
                        auto lhs = mod.tau_lc(p + q - 1, mod.left_lc(p, phi, q, m, i));
                        auto rhs = mod.left_lc(p, tphi, q, m, i - 1);
                        rep.count();
                        if (!lc_equal(k, lhs, rhs))
                            rep.fail("module-tau-compat",
                                     {(long)p, (long)q, (long)i, (long)a, (long)b});
                    }
                    if (q >= 1) {
                        auto lhs = mod.tau_lc(p + q - 1, mod.left_lc(p, phi, q, m, 1));
                        auto rhs = mod.right_lc(q, mod.tau_lc(q, m), p, tphi, q);
                        rep.count();
                        if (!lc_equal(k, lhs, rhs))
                            rep.fail("module-tau-first-slot",
                                     {(long)p, (long)q, (long)a, (long)b});
                    }
                }
            }
        }
    }
    return out;
}

/*
 * Dualization: the linear dual of a cyclic module over a cyclic operad is a
 * cyclic unital opposite module.  In the dual bases the actions are the
 * transposed tensors:
 *     <phi bullet_i x, m> = <x, m o_i phi>           (i = 1..q)
 *     <t x, m>            = <x, tau m>
 *     <phi bullet_0 x, m> = <x, tau(phi) o_p m>      (p >= 1)
 * and for p = 0 the extra action is t o bullet_{n+1}.
 */
template <class F>
OppositeModule<F> dualize(const CyclicModule<F>& m) {
    const F& k = m.field();
    const auto& O = m.operad();
    const std::size_t qmax = m.degree_max();
    std::vector<std::size_t> dims(qmax + 1);
    for (std::size_t q = 0; q <= qmax; ++q) dims[q] = m.dim(q);
    OppositeModule<F> dual(m.operad_ptr(), qmax, dims);

    // t = tau^T
    for (std::size_t n = 0; n <= qmax; ++n) {
        auto& t = dual.t_op(n);
        for (std::size_t b = 0; b < m.dim(n); ++b)
            for (const auto& [r, c] : m.tau(n).column(b).terms) t.column(r).add_term(k, b, c);
    }

    // bullet_i, i >= 1: transpose of right composition.
    // x in N(n), n = q + p - 1, result N(q):  <phi bullet_i x, e_m> = right(q,p,i)[(m,a)](x)
    for (std::size_t p = 0; p <= O.arity_max(); ++p) {
        for (std::size_t n = p >= 1 ? p : 0; n <= qmax; ++n) {
            const std::size_t q = n - p + 1;  // target degree, i runs 1..q
            if (q < 1 || q > qmax) continue;
            for (std::size_t i = 1; i <= q; ++i) {
                auto& tsr = dual.action(p, n, i);
                for (std::size_t mm = 0; mm < m.dim(q); ++mm) {
                    auto mb = LinComb<F>::basis(mm, k);
                    for (std::size_t a = 0; a < O.dim(p); ++a) {
                        auto res = m.right_lc(q, mb, p, LinComb<F>::basis(a, k), i);
                        for (const auto& [r, c] : res.terms)
                            tsr.column(a * dual.dim(n) + r).add_term(k, mm, c);
                    }
                }
            }
        }
    }

    // bullet_0 for p >= 1: <phi bullet_0 x, m> = <x, tau(phi) o_p m>
    for (std::size_t p = 1; p <= O.arity_max(); ++p) {
        for (std::size_t n = p >= 1 ? p - 1 : 0; n <= qmax; ++n) {
            if (p > n + 1) continue;
            const std::size_t q = n - p + 1;
            if (q > qmax || p + q - 1 > qmax) continue;
            auto& tsr = dual.action(p, n, 0);
            for (std::size_t a = 0; a < O.dim(p); ++a) {
                auto tphi = O.tau_lc(p, LinComb<F>::basis(a, k));
                for (std::size_t mm = 0; mm < m.dim(q); ++mm) {
                    auto res = m.left_lc(p, tphi, q, LinComb<F>::basis(mm, k), p);
                    for (const auto& [r, c] : res.terms)
                        tsr.column(a * dual.dim(n) + r).add_term(k, mm, c);
                }
            }
        }
    }

    // bullet_0 for p = 0: t o bullet_{n+1}
    for (std::size_t n = 0; n + 1 <= qmax; ++n) {
        auto& tsr = dual.action(0, n, 0);
        for (std::size_t a = 0; a < O.dim(0); ++a) {
            auto phi = LinComb<F>::basis(a, k);
            for (std::size_t x = 0; x < dual.dim(n); ++x) {
                auto res = dual.act_lc(0, phi, n, LinComb<F>::basis(x, k), n + 1);
                tsr.column(a * dual.dim(n) + x) = dual.t_lc(n + 1, res);
            }
        }
    }
    return dual;
}

}  // namespace opcalc

#endif
