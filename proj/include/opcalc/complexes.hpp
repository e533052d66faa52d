#ifndef OPCALC_COMPLEXES_HPP
#define OPCALC_COMPLEXES_HPP

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "opcalc/linalg.hpp"
#include "opcalc/validation.hpp"

namespace opcalc {

/*
 * Mixed cochain complexes on a finite degree window and the finite total
 * complexes realizing the cyclic, negative cyclic, and periodic theories.
 *
 * A window side is either genuine (the complex is provably zero beyond it;
 * nothing was cut) or truncated.  Truncation can only corrupt kernels and
 * images near the cut, so trust in any computed homology is decided from
 * distance-to-cut plus, for boundary degrees, verified vanishing of the
 * windowed homology there (which is a sound certificate for the true
 * homology: at a cut the windowed group only ever overcounts).  The
 * stability check re-runs with a larger window and must reproduce every
 * trusted verdict.
 */
template <class F>
class MixedComplex {
  public:
    using Elem = typename F::Elem;

    MixedComplex() = default;

    /// dims(i), b(i): M^i -> M^{i+1], B(i): M^i -> M^{i-1} for lo <= i <= hi.
    /// Maps whose source or target leaves the window are never queried.
    MixedComplex(F field, long lo, long hi, bool truncated_lo, bool truncated_hi,
                 const std::function<std::size_t(long)>& dims,
                 const std::function<Matrix<F>(long)>& b,
                 const std::function<Matrix<F>(long)>& B, std::string orientation = "cochain")
        : field_(field),
          lo_(lo),
          hi_(hi),
          trunc_lo_(truncated_lo),
          trunc_hi_(truncated_hi),
          orientation_(std::move(orientation)) {
        if (hi_ < lo_) raise(Errc::BadInput, "empty degree window");
        dims_.resize(hi_ - lo_ + 1);
        for (long i = lo_; i <= hi_; ++i) dims_[i - lo_] = dims(i);
        b_.resize(hi_ - lo_ + 1);
        bb_.resize(hi_ - lo_ + 1);
        for (long i = lo_; i <= hi_; ++i) {
            if (i + 1 <= hi_) {
                b_[i - lo_] = b(i);
                if (b_[i - lo_]->rows() != dim(i + 1) || b_[i - lo_]->cols() != dim(i))
                    raise(Errc::BadInput, "b map shape mismatch at degree " + std::to_string(i));
            }
            if (i - 1 >= lo_) {
                bb_[i - lo_] = B(i);
                if (bb_[i - lo_]->rows() != dim(i - 1) || bb_[i - lo_]->cols() != dim(i))
                    raise(Errc::BadInput, "B map shape mismatch at degree " + std::to_string(i));
            }
        }
    }

    const F& field() const { return field_; }
    long lo() const { return lo_; }
    long hi() const { return hi_; }
    bool truncated_lo() const { return trunc_lo_; }
    bool truncated_hi() const { return trunc_hi_; }
    const std::string& orientation() const { return orientation_; }

    std::size_t dim(long i) const { return (i < lo_ || i > hi_) ? 0 : dims_[i - lo_]; }

    /// b at degree i (zero-shaped outside the window).
    Matrix<F> b_at(long i) const {
        if (i >= lo_ && i < hi_ && b_[i - lo_].has_value()) return *b_[i - lo_];
        return Matrix<F>(field_, dim(i + 1), dim(i));
    }

    Matrix<F> B_at(long i) const {
        if (i > lo_ && i <= hi_ && bb_[i - lo_].has_value()) return *bb_[i - lo_];
        return Matrix<F>(field_, dim(i - 1), dim(i));
    }

    /// Windowed homology at degree i: ker(b_i)/im(b_{i-1}) with maps beyond
    /// the window read as zero.  Exact (equal to the true homology) away
    /// from truncated sides; at a cut it can only overcount.
    const Subquotient<F>& homology(long i) const {
        auto it = h_cache_.find(i);
        if (it != h_cache_.end()) return it->second;
        auto cyc = kernel_basis(b_at(i));
        auto bnd = image_basis(b_at(i - 1));
        // image columns live in M^i; both are subspaces of the same space
        auto q = subquotient(std::move(cyc), Subspace<F>{dim(i), bnd.basis});
        return h_cache_.emplace(i, std::move(q)).first->second;
    }

    std::size_t h_dim(long i) const {
        if (i < lo_ || i > hi_) return 0;
        return homology(i).dim();
    }

    /// Degree whose homology is exactly the true one, with the spec's guard
    /// band of one extra degree on each truncated side.
    bool exact_degree(long i) const {
        if (i < lo_ || i > hi_) return false;
        if (trunc_hi_ && i > hi_ - 2) return false;
        if (trunc_lo_ && i < lo_ + 2) return false;
        return true;
    }

    /// in-window contribution is harmless: exact, or verified zero.
    bool chain_ok(long i) const {
        if (i < lo_ || i > hi_) return !out_of_window_risky(i);
        return exact_degree(i) || h_dim(i) == 0;
    }

    /// Are there (in truth) nonzero degrees beyond this side?
    bool out_of_window_risky(long i) const {
        if (i > hi_) return trunc_hi_;
        if (i < lo_) return trunc_lo_;
        return false;
    }

    /// A truncated side is vanishing-certified when the two boundary
    /// degrees have zero windowed homology.
    bool side_ok_hi() const { return !trunc_hi_ || (h_dim(hi_) == 0 && h_dim(hi_ - 1) == 0); }
    bool side_ok_lo() const { return !trunc_lo_ || (h_dim(lo_) == 0 && h_dim(lo_ + 1) == 0); }

    /// Trusted homology degree of the mixed complex itself.
    bool trusted_h(long i) const { return exact_degree(i); }

  private:
    F field_;
    long lo_ = 0, hi_ = 0;
    bool trunc_lo_ = false, trunc_hi_ = false;
    std::string orientation_;
    std::vector<std::size_t> dims_;
    std::vector<std::optional<Matrix<F>>> b_, bb_;
    mutable std::map<long, Subquotient<F>> h_cache_;
};

/// Per-degree report of the mixed complex laws b^2 = B^2 = [B,b] = 0.
template <class F>
ValidationReport validate_mixed(const MixedComplex<F>& mc) {
    ValidationReport rep;
    for (long i = mc.lo(); i <= mc.hi(); ++i) {
        if (i + 2 <= mc.hi()) {
            rep.count();
            if (!(mc.b_at(i + 1) * mc.b_at(i)).is_zero()) rep.fail("b-squared", {i});
        }
        if (i - 2 >= mc.lo()) {
            rep.count();
            if (!(mc.B_at(i - 1) * mc.B_at(i)).is_zero()) rep.fail("B-squared", {i});
        }
        if (i + 1 <= mc.hi() && i - 1 >= mc.lo()) {
            rep.count();
            auto anti = mc.B_at(i + 1) * mc.b_at(i) + mc.b_at(i - 1) * mc.B_at(i);
            if (!anti.is_zero()) rep.fail("Bb+bB", {i});
        }
    }
    return rep;
}

enum class UVariant { Cyclic, Negative, Periodic };

inline const char* variant_name(UVariant v) {
    switch (v) {
        case UVariant::Cyclic: return "cyclic";
        case UVariant::Negative: return "negative";
        case UVariant::Periodic: return "periodic";
    }
    return "?";
}

/*
 * The finite window of M[[u,u^-1]] realizing one of CC, CC_-, CC_per.
 * A total degree n is the direct sum of blocks M^i u^j with i+2j = n and
 * the variant's j-constraint; d_u = b + uB acts blockwise.  CC_- elements
 * are represented by their unique j <= 0 representatives.
 */
template <class F>
class UWindowComplex {
  public:
    struct Block {
        long i, j;
        std::size_t offset, dim;
    };

    UWindowComplex() = default;
    UWindowComplex(std::shared_ptr<const MixedComplex<F>> mc, UVariant variant)
        : mc_(std::move(mc)), variant_(variant) {
        n_lo_ = mc_->lo() - 2;
        n_hi_ = mc_->hi() + 2;
    }

    const MixedComplex<F>& mixed() const { return *mc_; }
    UVariant variant() const { return variant_; }
    long n_lo() const { return n_lo_; }
    long n_hi() const { return n_hi_; }

    bool j_allowed(long j) const {
        switch (variant_) {
            case UVariant::Cyclic: return j >= 0;
            case UVariant::Negative: return j <= 0;
            case UVariant::Periodic: return true;
        }
        return false;
    }

    /// Blocks at total degree n, ordered by ascending j.
    std::vector<Block> blocks(long n) const {
        std::vector<Block> out;
        // i = n - 2j in [lo, hi]  =>  j in [(n-hi)/2, (n-lo)/2]
        long jmin = ceil_div(n - mc_->hi(), 2), jmax = floor_div(n - mc_->lo(), 2);
        std::size_t off = 0;
        for (long j = jmin; j <= jmax; ++j) {
            if (!j_allowed(j)) continue;
            long i = n - 2 * j;
            std::size_t d = mc_->dim(i);
            if (d == 0) continue;
            out.push_back(Block{i, j, off, d});
            off += d;
        }
        return out;
    }

    std::size_t dim(long n) const {
        std::size_t d = 0;
        for (const auto& b : blocks(n)) d += b.dim;
        return d;
    }

    /// d_u : CC^n -> CC^{n+1}, blockwise b + uB.
    Matrix<F> du(long n) const {
        const F& k = mc_->field();
        auto src = blocks(n), dst = blocks(n + 1);
        Matrix<F> m(k, total(dst), total(src));
        for (const auto& s : src) {
            // b-component: (i,j) -> (i+1, j)
            if (const Block* t = find(dst, s.i + 1, s.j)) {
                auto bm = mc_->b_at(s.i);
                paste(m, *t, s, bm, k.one(), k);
            }
            // uB-component: (i,j) -> (i-1, j+1)
            if (const Block* t = find(dst, s.i - 1, s.j + 1)) {
                auto Bm = mc_->B_at(s.i);
                paste(m, *t, s, Bm, k.one(), k);
            }
        }
        return m;
    }

    /// Multiplication by u: CC^n -> CC^{n+2}; on the negative variant the
    /// j = 0 blocks die in the quotient.
    Matrix<F> u_mult(long n) const {
        const F& k = mc_->field();
        auto src = blocks(n), dst = blocks(n + 2);
        Matrix<F> m(k, total(dst), total(src));
        for (const auto& s : src) {
            if (!j_allowed(s.j + 1)) continue;
            if (const Block* t = find(dst, s.i, s.j + 1))
                paste_identity(m, *t, s, k);
        }
        return m;
    }

    /// Evaluation at u = 0: CC^n -> M^n.
    Matrix<F> ev0(long n) const {
        const F& k = mc_->field();
        auto src = blocks(n);
        Matrix<F> m(k, mc_->dim(n), total(src));
        for (const auto& s : src)
            if (s.j == 0)
                for (std::size_t r = 0; r < s.dim; ++r) m(r, s.offset + r) = k.one();
        return m;
    }

    /// Inclusion of M^n as constant (Laurent) series: M^n -> CC^n.
    Matrix<F> include0(long n) const {
        const F& k = mc_->field();
        auto dst = blocks(n);
        Matrix<F> m(k, total(dst), mc_->dim(n));
        for (const auto& t : dst)
            if (t.j == 0)
                for (std::size_t r = 0; r < t.dim; ++r) m(t.offset + r, r) = k.one();
        return m;
    }

    /// Windowed homology of (CC, d_u) at total degree n.
    const Subquotient<F>& homology(long n) const {
        auto it = h_cache_.find(n);
        if (it != h_cache_.end()) return it->second;
        auto cyc = kernel_basis(du(n));
        auto bnd = image_basis(du(n - 1));
        auto q = subquotient(std::move(cyc), Subspace<F>{dim(n), bnd.basis});
        return h_cache_.emplace(n, std::move(q)).first->second;
    }

    std::size_t h_dim(long n) const { return homology(n).dim(); }

    /// Trust rule: every block contributing at n-1, n, n+1 must be exact or
    /// verified-vanishing, and any side whose out-of-window degrees the
    /// variant genuinely touches must be vanishing-certified.
    bool trusted(long n) const {
        for (long np = n - 1; np <= n + 1; ++np) {
            for (const auto& blk : blocks(np))
                if (!mc_->chain_ok(blk.i)) return false;
            if (touches_above(np) && !mc_->side_ok_hi()) return false;
            if (touches_below(np) && !mc_->side_ok_lo()) return false;
        }
        return true;
    }

    /// Does total degree n in truth receive contributions above/below the window?
    bool touches_above(long n) const {
        switch (variant_) {
            case UVariant::Cyclic: return n > mc_->hi();  // i = n - 2j <= n for j >= 0
            case UVariant::Negative: return true;         // j arbitrarily negative
            case UVariant::Periodic: return true;
        }
        return true;
    }
    bool touches_below(long n) const {
        switch (variant_) {
            case UVariant::Cyclic: return true;
            case UVariant::Negative: return n < mc_->lo();
            case UVariant::Periodic: return true;
        }
        return true;
    }

    static std::size_t total(const std::vector<Block>& bs) {
        return bs.empty() ? 0 : bs.back().offset + bs.back().dim;
    }

    static const Block* find(const std::vector<Block>& bs, long i, long j) {
        for (const auto& b : bs)
            if (b.i == i && b.j == j) return &b;
        return nullptr;
    }

  private:
    static long floor_div(long a, long b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }
    static long ceil_div(long a, long b) { return a >= 0 ? (a + b - 1) / b : -((-a) / b); }

    static void paste(Matrix<F>& m, const Block& t, const Block& s, const Matrix<F>& sub,
                      const typename F::Elem& scale, const F& k) {
        for (std::size_t r = 0; r < sub.rows(); ++r)
            for (std::size_t c = 0; c < sub.cols(); ++c)
                if (!k.is_zero(sub(r, c)))
                    m(t.offset + r, s.offset + c) =
                        k.add(m(t.offset + r, s.offset + c), k.mul(scale, sub(r, c)));
    }

    static void paste_identity(Matrix<F>& m, const Block& t, const Block& s, const F& k) {
        for (std::size_t r = 0; r < s.dim; ++r) m(t.offset + r, s.offset + r) = k.one();
    }

    std::shared_ptr<const MixedComplex<F>> mc_;
    UVariant variant_ = UVariant::Cyclic;
    long n_lo_ = 0, n_hi_ = 0;
    mutable std::map<long, Subquotient<F>> h_cache_;
};

/*
 * A u-linear operator family on the window complex: a sum of terms
 * (chain-degree family X_i : M^i -> M^{i+shift}, u-power jshift, sign),
 * materialized as a block matrix CC^n -> CC^{n + shift + 2 jshift}.
 */
template <class F>
struct UOpTerm {
    std::function<Matrix<F>(long)> family;  // per source degree i
    long shift;                             // degree shift of the family
    long jshift;                            // power of u carried by the term
    typename F::Elem scale;
};

template <class F>
Matrix<F> u_operator(const UWindowComplex<F>& cc, long n, const std::vector<UOpTerm<F>>& terms,
                     long out_degree) {
    const F& k = cc.mixed().field();
    auto src = cc.blocks(n);
    auto dst = cc.blocks(out_degree);
    Matrix<F> m(k, UWindowComplex<F>::total(dst), UWindowComplex<F>::total(src));
    for (const auto& term : terms) {
        for (const auto& s : src) {
            long ti = s.i + term.shift, tj = s.j + term.jshift;
            if (ti + 2 * tj != out_degree) continue;
            if (!cc.j_allowed(tj)) continue;
            const auto* t = UWindowComplex<F>::find(dst, ti, tj);
            if (!t) continue;
            auto sub = term.family(s.i);
            if (sub.rows() != t->dim || sub.cols() != s.dim)
                raise(Errc::BadInput, "u-operator family shape mismatch");
            for (std::size_t r = 0; r < sub.rows(); ++r)
                for (std::size_t c = 0; c < sub.cols(); ++c)
                    if (!k.is_zero(sub(r, c)))
                        m(t->offset + r, s.offset + c) = k.add(
                            m(t->offset + r, s.offset + c), k.mul(term.scale, sub(r, c)));
        }
    }
    return m;
}

/*
 * SBI data on homology bases.
 *
 * Cyclic:    ... -> HC^{n-2} --S--> HC^n --pi--> H^n --beta--> HC^{n-1} -> ...
 * Negative:  ... -> H^n --j--> HC_-^n --S--> HC_-^{n+2} --beta--> H^{n+1} -> ...
 * with S = multiplication by u, pi = ev_0, j = inclusion of constants,
 * beta[m] = [B m] resp. beta[f] = [B f_0].
 */
template <class F>
struct SbiMaps {
    UVariant variant;
    long degree;          // the degree n the maps are anchored at
    Matrix<F> S, pi_or_j, beta;
};

template <class F>
SbiMaps<F> sbi_maps(const UWindowComplex<F>& cc, long n) {
    const auto& mc = cc.mixed();
    const F& k = mc.field();
    if (!cc.trusted(n)) raise(Errc::UntrustedDegree, "sbi_maps outside the trusted range");

    SbiMaps<F> out;
    out.variant = cc.variant();
    out.degree = n;

    if (cc.variant() == UVariant::Cyclic) {
        out.S = induced_map(cc.u_mult(n - 2), cc.homology(n - 2), cc.homology(n));
        out.pi_or_j = induced_map(cc.ev0(n), cc.homology(n), mc.homology(n));
        // beta[m] = [B m]: on representatives of H^n(M), B lands in the
        // constant block of CC^{n-1}
        const auto& hm = mc.homology(n);
        auto Bm = mc.B_at(n);
        auto inc = cc.include0(n - 1);
        Matrix<F> beta(k, cc.homology(n - 1).dim(), hm.dim());
        for (std::size_t c = 0; c < hm.dim(); ++c) {
            auto v = inc.apply(Bm.apply(hm.section().col(c)));
            beta.set_col(c, cc.homology(n - 1).reduce(v));
        }
        out.beta = std::move(beta);
    } else if (cc.variant() == UVariant::Negative) {
        out.pi_or_j = induced_map(cc.include0(n), mc.homology(n), cc.homology(n));
        out.S = induced_map(cc.u_mult(n), cc.homology(n), cc.homology(n + 2));
        // beta[f] = [B f_0]: f_0 is the u^0 coefficient of a representative
        const auto& hc = cc.homology(n);
        auto ev = cc.ev0(n);
        auto Bm = mc.B_at(n);
        Matrix<F> beta(k, mc.homology(n - 1).dim(), hc.dim());
        for (std::size_t c = 0; c < hc.dim(); ++c) {
            auto f0 = ev.apply(hc.section().col(c));
            beta.set_col(c, mc.homology(n - 1).reduce(Bm.apply(f0)));
        }
        out.beta = std::move(beta);
    } else {
        raise(Errc::BadInput, "sbi_maps: periodic variant has no SBI sequence");
    }
    return out;
}

}  // namespace opcalc

#endif
