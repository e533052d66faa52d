#ifndef OPCALC_OPERAD_HPP
#define OPCALC_OPERAD_HPP

#include <optional>
#include <string>
#include <vector>

#include "opcalc/algebra.hpp"
#include "opcalc/linalg.hpp"
#include "opcalc/validation.hpp"

namespace opcalc {

/*
 * Non-symmetric operads with multiplication on a finite arity window, held
 * as based data: dimensions per arity, partial-composition tensors, the
 * distinguished elements (identity, multiplication, unit) and an optional
 * cyclic operator.  Every structure map is a column-sparse matrix; for
 * endomorphism operads the columns are monomial.
 *
 * Elements of O(p) are dense coefficient vectors.  Operations that would
 * leave the arity window raise ArityOverflow rather than truncating.
 */
template <class F>
class OperadInstance {
  public:
    using Elem = typename F::Elem;
    using Vec = std::vector<Elem>;

    OperadInstance() = default;
    OperadInstance(F field, std::size_t arity_max, std::vector<std::size_t> dims)
        : field_(field), arity_max_(arity_max), dims_(std::move(dims)) {
        if (dims_.size() != arity_max_ + 1) raise(Errc::BadInput, "dims/arity window mismatch");
        comp_.resize(arity_max_ + 1);
        for (std::size_t p = 1; p <= arity_max_; ++p) {
            comp_[p].resize(arity_max_ + 2);
            for (std::size_t q = 0; q + p <= arity_max_ + 1; ++q) {
                if (p + q < 1 || p + q - 1 > arity_max_) continue;
                comp_[p][q].assign(p, SparseMat<F>(field_, dims_[p + q - 1], dims_[p] * dims_[q]));
            }
        }
    }

    const F& field() const { return field_; }
    std::size_t arity_max() const { return arity_max_; }
    std::size_t dim(std::size_t p) const { return p <= arity_max_ ? dims_[p] : 0; }

    bool in_window(std::size_t p) const { return p <= arity_max_; }

    SparseMat<F>& comp(std::size_t p, std::size_t q, std::size_t i) {
        return comp_[p][q][i - 1];
    }
    const SparseMat<F>& comp(std::size_t p, std::size_t q, std::size_t i) const {
        if (p < 1 || p > arity_max_ || i < 1 || i > p || p + q - 1 > arity_max_)
            raise(Errc::ArityOverflow, "composition outside arity window");
        return comp_[p][q][i - 1];
    }

    void set_identity(Vec one) { one_ = std::move(one); }
    void set_multiplication(Vec mu, Vec e) {
        mu_ = std::move(mu);
        e_ = std::move(e);
    }
    void set_tau(std::vector<SparseMat<F>> tau) { tau_ = std::move(tau); }

    const Vec& one() const { return one_; }
    const Vec& mu() const { return mu_; }
    const Vec& e() const { return e_; }

    bool has_tau() const { return tau_.has_value(); }
    const SparseMat<F>& tau(std::size_t p) const {
        if (!tau_) raise(Errc::NoFrobeniusForm, "no cyclic operator on this instance");
        return (*tau_)[p];
    }
    void drop_tau() { tau_.reset(); }

    Vec zero_elem(std::size_t p) const { return Vec(dim(p), field_.zero()); }

    Vec basis_elem(std::size_t p, std::size_t idx) const {
        Vec v = zero_elem(p);
        v[idx] = field_.one();
        return v;
    }

    bool is_zero_elem(const Vec& v) const {
        for (const auto& c : v)
            if (!field_.is_zero(c)) return false;
        return true;
    }

    Vec add(Vec a, const Vec& b) const {
        for (std::size_t i = 0; i < a.size(); ++i) a[i] = field_.add(a[i], b[i]);
        return a;
    }
    Vec scale(Vec a, const Elem& c) const {
        for (auto& x : a) x = field_.mul(x, c);
        return a;
    }

    /// phi o_i psi for phi in O(p), psi in O(q), 1 <= i <= p.
    Vec compose(std::size_t p, const Vec& phi, std::size_t q, const Vec& psi,
                std::size_t i) const {
        const auto& t = comp(p, q, i);
        Vec out(dim(p + q - 1), field_.zero());
        for (std::size_t a = 0; a < dim(p); ++a) {
            if (field_.is_zero(phi[a])) continue;
            for (std::size_t b = 0; b < dim(q); ++b) {
                if (field_.is_zero(psi[b])) continue;
                auto c = field_.mul(phi[a], psi[b]);
                for (const auto& [row, coeff] : t.column(a * dim(q) + b).terms)
                    out[row] = field_.add(out[row], field_.mul(coeff, c));
            }
        }
        return out;
    }

    /// Sparse composition: used by the exhaustive validators, where inputs
    /// are basis elements and results have very few terms.
    LinComb<F> compose_lc(std::size_t p, const LinComb<F>& phi, std::size_t q,
                          const LinComb<F>& psi, std::size_t i) const {
        const auto& t = comp(p, q, i);
        LinComb<F> out;
        for (const auto& [a, ca] : phi.terms)
            for (const auto& [b, cb] : psi.terms) {
                auto c = field_.mul(ca, cb);
                if (field_.is_zero(c)) continue;
                for (const auto& [row, coeff] : t.column(a * dim(q) + b).terms)
                    out.add_term(field_, row, field_.mul(coeff, c));
            }
        return out;
    }

    LinComb<F> tau_lc(std::size_t p, const LinComb<F>& v) const {
        const auto& t = tau(p);
        LinComb<F> out;
        for (const auto& [a, ca] : v.terms)
            for (const auto& [row, coeff] : t.column(a).terms)
                out.add_term(field_, row, field_.mul(coeff, ca));
        return out;
    }

    LinComb<F> lc_elem(const Vec& v) const {
        LinComb<F> out;
        for (std::size_t i = 0; i < v.size(); ++i)
            if (!field_.is_zero(v[i])) out.terms.emplace_back(i, v[i]);
        return out;
    }

    Vec apply_tau(std::size_t p, const Vec& v) const {
        const auto& t = tau(p);
        Vec out(dim(p), field_.zero());
        for (std::size_t a = 0; a < dim(p); ++a) {
            if (field_.is_zero(v[a])) continue;
            for (const auto& [row, coeff] : t.column(a).terms)
                out[row] = field_.add(out[row], field_.mul(coeff, v[a]));
        }
        return out;
    }

    // --- cosimplicial structure (faces, degeneracies) -------------------

    /// delta_i phi, 0 <= i <= p+1:  mu o_1 phi | phi o_{p-i+1} mu | mu o_2 phi.
    Vec face(std::size_t p, std::size_t i, const Vec& phi) const {
        if (i == 0) return compose(2, mu_, p, phi, 1);
        if (i == p + 1) return compose(2, mu_, p, phi, 2);
        return compose(p, phi, 2, mu_, p - i + 1);
    }

    /// sigma_j phi = phi o_{p-j} e, 0 <= j <= p-1.
    Vec degeneracy(std::size_t p, std::size_t j, const Vec& phi) const {
        return compose(p, phi, 0, e_, p - j);
    }

    /// Cosimplicial differential delta = sum (-1)^i delta_i : O(p) -> O(p+1).
    Vec delta_elem(std::size_t p, const Vec& phi) const {
        Vec out = zero_elem(p + 1);
        for (std::size_t i = 0; i <= p + 1; ++i) {
            Vec t = face(p, i, phi);
            out = (i % 2 == 0) ? add(std::move(out), t)
                               : add(std::move(out), scale(std::move(t), field_.neg(field_.one())));
        }
        return out;
    }

    Matrix<F> delta_matrix(std::size_t p) const {
        Matrix<F> m(field_, dim(p + 1), dim(p));
        for (std::size_t a = 0; a < dim(p); ++a) m.set_col(a, delta_elem(p, basis_elem(p, a)));
        return m;
    }

    // --- cup, brace, Gerstenhaber ---------------------------------------

    /// psi cup phi := (mu o_2 psi) o_1 phi in O(q+p).
    Vec cup(std::size_t q, const Vec& psi, std::size_t p, const Vec& phi) const {
        Vec inner = compose(2, mu_, q, psi, 2);
        return compose(q + 1, inner, p, phi, 1);
    }

    /// Brace phi{psi} = sum_i (-1)^{(q-1)(i-1)} phi o_i psi in O(p+q-1).
    Vec brace(std::size_t p, const Vec& phi, std::size_t q, const Vec& psi) const {
        Vec out = zero_elem(p + q - 1);
        for (std::size_t i = 1; i <= p; ++i) {
            Vec t = compose(p, phi, q, psi, i);
            bool negate = ((q - 1) * (i - 1)) % 2 == 1;
            out = negate ? add(std::move(out), scale(std::move(t), field_.neg(field_.one())))
                         : add(std::move(out), t);
        }
        return out;
    }

    /// {phi, psi} = phi{psi} - (-1)^{(p-1)(q-1)} psi{phi}.
    Vec gerstenhaber(std::size_t p, const Vec& phi, std::size_t q, const Vec& psi) const {
        Vec out = brace(p, phi, q, psi);
        Vec sw = brace(q, psi, p, phi);
        bool negate = ((p - 1) * (q - 1)) % 2 == 0;
        return negate ? add(std::move(out), scale(std::move(sw), field_.neg(field_.one())))
                      : add(std::move(out), sw);
    }

  private:
    F field_;
    std::size_t arity_max_ = 0;
    std::vector<std::size_t> dims_;
    // comp_[p][q][i-1]: O(p) (x) O(q) -> O(p+q-1), column index a*dim(q)+b
    std::vector<std::vector<std::vector<SparseMat<F>>>> comp_;
    Vec one_, mu_, e_;
    std::optional<std::vector<SparseMat<F>>> tau_;
};

/*
 * Endomorphism operad of a finite-dimensional algebra.  O(p) = maps
 * A^(x)p -> A with the basis ordered lexicographically in (input
 * multi-index, output index); composition substitutes into the i-th slot,
 * which on basis maps is a monomial operation.
 */
namespace endop {

inline std::size_t pow_sz(std::size_t b, std::size_t e) {
    std::size_t r = 1;
    while (e--) r *= b;
    return r;
}

/// index <-> (input multi-index, output) helpers
inline std::size_t encode(const std::vector<std::size_t>& v, std::size_t w, std::size_t d) {
    std::size_t idx = 0;
    for (auto x : v) idx = idx * d + x;
    return idx * d + w;
}

inline void decode(std::size_t idx, std::size_t p, std::size_t d, std::vector<std::size_t>& v,
                   std::size_t& w) {
    w = idx % d;
    idx /= d;
    v.assign(p, 0);
    for (std::size_t k = p; k-- > 0;) {
        v[k] = idx % d;
        idx /= d;
    }
}

}  // namespace endop

template <class F>
OperadInstance<F> end_operad(const AlgebraSpec<F>& alg, std::size_t n_max) {
    if (n_max < 1) raise(Errc::BadInput, "n_max must be at least 1");
    const F& k = alg.field();
    const std::size_t d = alg.dim();
    const std::size_t arity_max = n_max + 1;

    std::vector<std::size_t> dims(arity_max + 1);
    for (std::size_t p = 0; p <= arity_max; ++p) dims[p] = endop::pow_sz(d, p + 1);
    OperadInstance<F> op(k, arity_max, dims);

    std::vector<std::size_t> v, s, merged;
    std::size_t beta, gamma;
    for (std::size_t p = 1; p <= arity_max; ++p) {
        for (std::size_t q = 0; p + q - 1 <= arity_max && p + q >= 1; ++q) {
            for (std::size_t i = 1; i <= p; ++i) {
                auto& t = op.comp(p, q, i);
                for (std::size_t a = 0; a < dims[p]; ++a) {
                    endop::decode(a, p, d, v, beta);
                    for (std::size_t b = 0; b < dims[q]; ++b) {
                        endop::decode(b, q, d, s, gamma);
                        if (v[i - 1] != gamma) continue;
                        merged.clear();
                        merged.insert(merged.end(), v.begin(), v.begin() + (i - 1));
                        merged.insert(merged.end(), s.begin(), s.end());
                        merged.insert(merged.end(), v.begin() + i, v.end());
                        t.column(a * dims[q] + b)
                            .add_term(k, endop::encode(merged, beta, d), k.one());
                    }
                }
            }
        }
    }

    // identity: sum_g e_{(g),g}
    auto one = op.zero_elem(1);
    for (std::size_t g = 0; g < d; ++g) one[endop::encode({g}, g, d)] = k.one();
    op.set_identity(std::move(one));

    // multiplication from structure constants; unit = adapted basis 0
    auto mu = op.zero_elem(2);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const auto& prod = alg.product(i, j);
            for (std::size_t x = 0; x < d; ++x)
                if (!k.is_zero(prod[x]))
                    mu[endop::encode({i, j}, x, d)] = k.add(mu[endop::encode({i, j}, x, d)], prod[x]);
        }
    auto e = op.zero_elem(0);
    e[0] = k.one();
    op.set_multiplication(std::move(mu), std::move(e));
    return op;
}

/// Cyclic operator on an endomorphism operad from a symmetric invariant
/// nondegenerate form.  Writing Phi(y_0,..,y_p) := <y_0, phi(y_1..y_p)>,
/// tau rotates Phi-slots down: Phi_{tau phi}(y_0,..,y_p) =
/// Phi_phi(y_p, y_0,..,y_{p-1}), i.e.
///     <(tau phi)(a_1..a_p), a_{p+1}> := <a_p, phi(a_{p+1}, a_1..a_{p-1})>.
/// The opposite rotation satisfies tau(phi o_i psi) = tau(phi) o_{i+1} psi
/// and is rejected by the axiom validator.  The definition is only accepted
/// if the cyclic-operad axioms validate; callers should run
/// validate_cyclic_operad and abort on failure.
template <class F>
std::vector<SparseMat<F>> cyclic_structure_from_frobenius(const AlgebraSpec<F>& alg,
                                                          const OperadInstance<F>& op) {
    if (!alg.has_form()) raise(Errc::NoFrobeniusForm, "algebra has no frobenius form");
    const F& k = alg.field();
    const std::size_t d = alg.dim();
    std::vector<SparseMat<F>> tau;
    tau.reserve(op.arity_max() + 1);
    for (std::size_t p = 0; p <= op.arity_max(); ++p) {
        SparseMat<F> t(k, op.dim(p), op.dim(p));
        if (p == 0) {
            for (std::size_t a = 0; a < op.dim(0); ++a) t.column(a).add_term(k, a, k.one());
        } else {
            std::vector<std::size_t> v, nv;
            std::size_t beta;
            for (std::size_t a = 0; a < op.dim(p); ++a) {
                endop::decode(a, p, d, v, beta);
                // tau e_{(v,beta)} = sum_{u,k'} g_{u,beta} (g^{-1})_{k',v_1}
                //                    e_{(v_2..v_p,u), k'}
                for (std::size_t u = 0; u < d; ++u) {
                    if (k.is_zero(alg.pairing(u, beta))) continue;
                    for (std::size_t kp = 0; kp < d; ++kp) {
                        auto c = k.mul(alg.pairing(u, beta), alg.pairing_inv(kp, v[0]));
                        if (k.is_zero(c)) continue;
                        nv.assign(v.begin() + 1, v.end());
                        nv.push_back(u);
                        t.column(a).add_term(k, endop::encode(nv, kp, d), c);
                    }
                }
            }
        }
        tau.push_back(std::move(t));
    }
    return tau;
}

// --- validation ----------------------------------------------------------

/// Exhaustive check of the partial-composition associativity relations, the
/// operadic unit, and the multiplication axioms, over all in-window basis
/// triples.  Triples whose intermediates leave the window are skipped and
/// counted, never treated as passes.
template <class F>
struct OperadValidation {
    ValidationReport report;
    std::size_t skipped = 0;
};

template <class F>
OperadValidation<F> validate_operad(const OperadInstance<F>& op) {
    const F& k = op.field();
    OperadValidation<F> out;
    auto& rep = out.report;
    const std::size_t amax = op.arity_max();

    // associativity relations, three index regimes
    for (std::size_t p = 1; p <= amax; ++p) {
        for (std::size_t q = 0; p + q >= 1 && p + q - 1 <= amax; ++q) {
            for (std::size_t r = 0; p + q + r >= 2 && p + q + r - 2 <= amax; ++r) {
                for (std::size_t i = 1; i <= p; ++i) {
                    for (std::size_t j = 1; j <= p + q - 1; ++j) {
                        // classify (cases of the associativity law)
                        enum { BELOW, INSIDE, ABOVE } c;
                        if (j < i)
                            c = BELOW;
                        else if (j < q + i)
                            c = INSIDE;
                        else
                            c = ABOVE;
                        // window admissibility of the right-hand side
                        if ((c == BELOW || c == ABOVE) && (p + r < 1 || p + r - 1 > amax)) {
                            ++out.skipped;
                            continue;
                        }
                        if (c == INSIDE && (q + r < 1 || q + r - 1 > amax)) {
                            ++out.skipped;
                            continue;
                        }
                        for (std::size_t a = 0; a < op.dim(p); ++a) {
                            auto phi = LinComb<F>::basis(a, k);
                            for (std::size_t b = 0; b < op.dim(q); ++b) {
                                auto psi = LinComb<F>::basis(b, k);
                                auto lhs_inner = op.compose_lc(p, phi, q, psi, i);
                                for (std::size_t cc = 0; cc < op.dim(r); ++cc) {
                                    auto chi = LinComb<F>::basis(cc, k);
                                    auto lhs = op.compose_lc(p + q - 1, lhs_inner, r, chi, j);
                                    LinComb<F> rhs;
                                    if (c == BELOW) {
                                        auto t = op.compose_lc(p, phi, r, chi, j);
                                        rhs = op.compose_lc(p + r - 1, t, q, psi, i + r - 1);
                                    } else if (c == INSIDE) {
                                        auto t = op.compose_lc(q, psi, r, chi, j - i + 1);
                                        rhs = op.compose_lc(p, phi, q + r - 1, t, i);
                                    } else {
                                        auto t = op.compose_lc(p, phi, r, chi, j - q + 1);
                                        rhs = op.compose_lc(p + r - 1, t, q, psi, i);
                                    }
                                    rep.count();
                                    if (!lc_equal(k, lhs, rhs))
                                        rep.fail("associativity",
                                                 {(long)p, (long)q, (long)r, (long)i, (long)j,
                                                  (long)a, (long)b, (long)cc});
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    // unit axioms: 1 o_1 phi = phi, phi o_i 1 = phi
    auto one_lc = op.lc_elem(op.one());
    for (std::size_t p = 0; p <= amax; ++p) {
        for (std::size_t a = 0; a < op.dim(p); ++a) {
            auto phi = LinComb<F>::basis(a, k);
            rep.count();
            if (!lc_equal(k, op.compose_lc(1, one_lc, p, phi, 1), phi))
                rep.fail("left-unit", {(long)p, (long)a});
            for (std::size_t i = 1; i <= p; ++i) {
                rep.count();
                if (!lc_equal(k, op.compose_lc(p, phi, 1, one_lc, i), phi))
                    rep.fail("right-unit", {(long)p, (long)i, (long)a});
            }
        }
    }

    // multiplication axioms
    auto mu_lc = op.lc_elem(op.mu());
    auto e_lc = op.lc_elem(op.e());
    rep.count();
    if (!lc_equal(k, op.compose_lc(2, mu_lc, 2, mu_lc, 1), op.compose_lc(2, mu_lc, 2, mu_lc, 2)))
        rep.fail("mu-associativity", {});
    rep.count();
    if (!lc_equal(k, op.compose_lc(2, mu_lc, 0, e_lc, 1), one_lc))
        rep.fail("mu-unit-left", {});
    rep.count();
    if (!lc_equal(k, op.compose_lc(2, mu_lc, 0, e_lc, 2), one_lc))
        rep.fail("mu-unit-right", {});

    return out;
}

/// Cyclic-operad axioms, exhaustive on basis elements.
template <class F>
ValidationReport validate_cyclic_operad(const OperadInstance<F>& op) {
    const F& k = op.field();
    ValidationReport rep;
    const std::size_t amax = op.arity_max();

    // tau^{p+1} = id
    for (std::size_t p = 0; p <= amax; ++p) {
        for (std::size_t a = 0; a < op.dim(p); ++a) {
            auto v = LinComb<F>::basis(a, k);
            auto w = v;
            for (std::size_t t = 0; t <= p; ++t) w = op.tau_lc(p, w);
            rep.count();
            if (!lc_equal(k, w, v)) rep.fail("tau-order", {(long)p, (long)a});
        }
    }

    // tau(phi o_i psi) = tau(phi) o_{i-1} psi for 2 <= i <= p
    // tau(phi o_1 psi) = tau(psi) o_q tau(phi) for p >= 1, q >= 1
    for (std::size_t p = 1; p <= amax; ++p) {
        for (std::size_t q = 0; p + q >= 1 && p + q - 1 <= amax; ++q) {
            for (std::size_t a = 0; a < op.dim(p); ++a) {
                auto phi = LinComb<F>::basis(a, k);
                auto tphi = op.tau_lc(p, phi);
                for (std::size_t b = 0; b < op.dim(q); ++b) {
                    auto psi = LinComb<F>::basis(b, k);
                    for (std::size_t i = 2; i <= p; ++i) {
                        auto lhs = op.tau_lc(p + q - 1, op.compose_lc(p, phi, q, psi, i));
                        auto rhs = op.compose_lc(p, tphi, q, psi, i - 1);
                        rep.count();
                        if (!lc_equal(k, lhs, rhs))
                            rep.fail("tau-compat", {(long)p, (long)q, (long)i, (long)a, (long)b});
                    }
                    if (q >= 1) {
                        auto lhs = op.tau_lc(p + q - 1, op.compose_lc(p, phi, q, psi, 1));
                        auto rhs = op.compose_lc(q, op.tau_lc(q, psi), p, tphi, q);
                        rep.count();
                        if (!lc_equal(k, lhs, rhs))
                            rep.fail("tau-first-slot", {(long)p, (long)q, (long)a, (long)b});
                    }
                }
            }
        }
    }

    // tau(mu) = mu
    {
        auto mu_lc = op.lc_elem(op.mu());
        rep.count();
        if (!lc_equal(k, op.tau_lc(2, mu_lc), mu_lc)) rep.fail("tau-mu", {});
    }
    return rep;
}

// --- normalization -------------------------------------------------------

/// The normalized suboperad: per arity, the intersection of the kernels of
/// the codegeneracies.  When every codegeneracy column is monomial with
/// pairwise-distinct targets (endomorphism operads in the adapted basis),
/// the kernel is a coordinate subspace and is certified structurally;
/// otherwise a generic kernel computation is used.
template <class F>
struct NormalizedOperad {
    std::vector<Subspace<F>> bar;                    // per arity
    std::vector<std::vector<std::size_t>> coords;    // coordinate indices when coordinate
    std::vector<bool> coordinate;

    std::size_t dim(std::size_t p) const { return bar[p].dim(); }
};

template <class F>
NormalizedOperad<F> normalized(const OperadInstance<F>& op) {
    const F& k = op.field();
    NormalizedOperad<F> out;
    out.bar.resize(op.arity_max() + 1);
    out.coords.resize(op.arity_max() + 1);
    out.coordinate.resize(op.arity_max() + 1, false);

    for (std::size_t p = 0; p <= op.arity_max(); ++p) {
        if (p == 0) {
            out.bar[0] = Subspace<F>::full(k, op.dim(0));
            out.coords[0].resize(op.dim(0));
            for (std::size_t i = 0; i < op.dim(0); ++i) out.coords[0][i] = i;
            out.coordinate[0] = true;
            continue;
        }
        // try the structural route: all codegeneracy columns monomial with
        // unit coefficient and injective targets per j
        bool structural = true;
        std::vector<bool> keep(op.dim(p), true);
        for (std::size_t j = 0; j < p && structural; ++j) {
            std::vector<bool> seen(op.dim(p - 1), false);
            for (std::size_t a = 0; a < op.dim(p); ++a) {
                auto img = op.degeneracy(p, j, op.basis_elem(p, a));
                std::size_t nz = 0, row = 0;
                for (std::size_t r = 0; r < img.size(); ++r)
                    if (!k.is_zero(img[r])) {
                        ++nz;
                        row = r;
                    }
                if (nz == 0) continue;
                if (nz > 1 || !k.eq(img[row], k.one()) || seen[row]) {
                    structural = false;
                    break;
                }
                seen[row] = true;
                keep[a] = false;
            }
        }
        if (structural) {
            std::vector<std::size_t> idx;
            for (std::size_t a = 0; a < op.dim(p); ++a)
                if (keep[a]) idx.push_back(a);
            Matrix<F> basis(k, op.dim(p), idx.size());
            for (std::size_t c = 0; c < idx.size(); ++c) basis(idx[c], c) = k.one();
            out.bar[p] = Subspace<F>{op.dim(p), std::move(basis)};
            out.coords[p] = std::move(idx);
            out.coordinate[p] = true;
        } else {
            // kernel of the stacked codegeneracies
            Matrix<F> stack(k, p * op.dim(p - 1), op.dim(p));
            for (std::size_t a = 0; a < op.dim(p); ++a) {
                for (std::size_t j = 0; j < p; ++j) {
                    auto img = op.degeneracy(p, j, op.basis_elem(p, a));
                    for (std::size_t r = 0; r < img.size(); ++r)
                        stack(j * op.dim(p - 1) + r, a) = img[r];
                }
            }
            out.bar[p] = kernel_basis(stack);
        }
    }
    return out;
}

/// Checks that delta maps each normalized arity into the next one.
template <class F>
bool delta_preserves_normalized(const OperadInstance<F>& op, const NormalizedOperad<F>& bar) {
    for (std::size_t p = 0; p + 1 <= op.arity_max(); ++p) {
        for (std::size_t c = 0; c < bar.bar[p].dim(); ++c) {
            auto v = op.delta_elem(p, bar.bar[p].basis.col(c));
            if (!bar.bar[p + 1].contains(v)) return false;
        }
    }
    return true;
}

}  // namespace opcalc

#endif
