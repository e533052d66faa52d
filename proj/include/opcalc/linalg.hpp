#ifndef OPCALC_LINALG_HPP
#define OPCALC_LINALG_HPP

#include <optional>
#include <vector>

#include "opcalc/matrix.hpp"

namespace opcalc {

/*
 * Exact linear algebra: ranks, kernels, images, subquotients and induced
 * maps on them.  Pivot choice is deterministic everywhere (first nonzero in
 * row-major scan order), so bases, sections and all downstream reports are
 * reproducible bit for bit.
 */

template <class F>
struct Rref {
    Matrix<F> r;                      // reduced row echelon form
    std::vector<std::size_t> pivots;  // pivot column per pivot row
    std::size_t rank() const { return pivots.size(); }
};

template <class F>
Rref<F> rref(Matrix<F> m) {
    const F& k = m.field();
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t piv = row;
        while (piv < m.rows() && k.is_zero(m(piv, col))) ++piv;
        if (piv == m.rows()) continue;
        m.swap_rows(row, piv);
        auto inv = k.inv(m(row, col));
        for (std::size_t c = col; c < m.cols(); ++c) m(row, c) = k.mul(m(row, c), inv);
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == row || k.is_zero(m(r, col))) continue;
            auto f = m(r, col);
            for (std::size_t c = col; c < m.cols(); ++c)
                m(r, c) = k.sub(m(r, c), k.mul(f, m(row, c)));
        }
        pivots.push_back(col);
        ++row;
    }
    return Rref<F>{std::move(m), std::move(pivots)};
}

namespace detail {

/// Fraction-free Bareiss elimination on an integer matrix; returns the rank.
inline std::size_t bareiss_rank(std::vector<std::vector<mpz_class>> a) {
    const std::size_t rows = a.size();
    const std::size_t cols = rows ? a[0].size() : 0;
    mpz_class prev(1);
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows; ++col) {
        std::size_t piv = row;
        while (piv < rows && a[piv][col] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(a[row], a[piv]);
        for (std::size_t r = row + 1; r < rows; ++r) {
            for (std::size_t c = col + 1; c < cols; ++c) {
                mpz_class num = a[row][col] * a[r][c] - a[r][col] * a[row][c];
                mpz_divexact(a[r][c].get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
            }
            a[r][col] = 0;
        }
        prev = a[row][col];
        ++row;
    }
    return row;
}

inline std::size_t rank_impl(const Matrix<RationalField>& m) {
    // Clear denominators per row, then run integer Bareiss.
    std::vector<std::vector<mpz_class>> a(m.rows(), std::vector<mpz_class>(m.cols(), 0));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        mpz_class lcm(1);
        for (std::size_t j = 0; j < m.cols(); ++j) {
            mpz_class den = m(i, j).get_den();
            mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), den.get_mpz_t());
        }
        for (std::size_t j = 0; j < m.cols(); ++j) {
            mpq_class scaled = m(i, j) * mpq_class(lcm);
            a[i][j] = scaled.get_num();
        }
    }
    return bareiss_rank(std::move(a));
}

inline std::size_t rank_impl(const Matrix<PrimeField>& m) { return rref(m).rank(); }

}  // namespace detail

/// Rank over the field: fraction-free (Bareiss) elimination over Q,
/// ordinary elimination over F_p.
template <class F>
std::size_t rank(const Matrix<F>& m) {
    return detail::rank_impl(m);
}

/// Solves m x = b; returns nullopt when inconsistent.  The solution with
/// zero free coordinates is returned, which is unique per pivot choice.
template <class F>
std::optional<std::vector<typename F::Elem>> solve(const Matrix<F>& m,
                                                   const std::vector<typename F::Elem>& b) {
    const F& k = m.field();
    Matrix<F> rhs(k, m.rows(), 1);
    rhs.set_col(0, b);
    auto e = rref(m.hcat(rhs));
    // A pivot in the appended column means inconsistency.
    for (auto p : e.pivots)
        if (p == m.cols()) return std::nullopt;
    std::vector<typename F::Elem> x(m.cols(), k.zero());
    for (std::size_t i = 0; i < e.pivots.size(); ++i) x[e.pivots[i]] = e.r(i, m.cols());
    return x;
}

/// A subspace of k^ambient, held as a matrix of linearly independent
/// columns.  `canonicalize` replaces the basis by the column-echelon one.
template <class F>
struct Subspace {
    std::size_t ambient_dim = 0;
    Matrix<F> basis;

    std::size_t dim() const { return basis.cols(); }

    static Subspace zero(F field, std::size_t ambient) {
        return Subspace{ambient, Matrix<F>(field, ambient, 0)};
    }

    static Subspace full(F field, std::size_t ambient) {
        return Subspace{ambient, Matrix<F>::identity(field, ambient)};
    }

    /// Span of arbitrary columns: reduced to the canonical echelon basis.
    static Subspace span(const Matrix<F>& cols) {
        auto e = rref(cols.transposed());
        Matrix<F> b(cols.field(), cols.rows(), e.rank());
        for (std::size_t i = 0; i < e.rank(); ++i)
            for (std::size_t j = 0; j < cols.rows(); ++j) b(j, i) = e.r(i, j);
        return Subspace{cols.rows(), std::move(b)};
    }

    bool contains(const std::vector<typename F::Elem>& v) const {
        return solve(basis, v).has_value();
    }

    bool contains(const Subspace& other) const {
        for (std::size_t j = 0; j < other.basis.cols(); ++j)
            if (!contains(other.basis.col(j))) return false;
        return true;
    }
};

template <class F>
Subspace<F> kernel_basis(const Matrix<F>& m) {
    const F& k = m.field();
    auto e = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : e.pivots) is_pivot[p] = true;
    Matrix<F> basis(k, m.cols(), m.cols() - e.rank());
    std::size_t out = 0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        if (is_pivot[j]) continue;
        basis(j, out) = k.one();
        for (std::size_t i = 0; i < e.pivots.size(); ++i)
            basis(e.pivots[i], out) = k.neg(e.r(i, j));
        ++out;
    }
    return Subspace<F>{m.cols(), std::move(basis)};
}

/// Column span with a pivot-column basis (original columns at the pivots).
template <class F>
Subspace<F> image_basis(const Matrix<F>& m) {
    auto e = rref(m);
    Matrix<F> basis(m.field(), m.rows(), e.rank());
    for (std::size_t i = 0; i < e.pivots.size(); ++i) basis.set_col(i, m.col(e.pivots[i]));
    return Subspace<F>{m.rows(), std::move(basis)};
}

/*
 * Subquotient cycles/boundaries with a deterministic section.
 *
 * Internally everything happens in cycle coordinates: the boundaries are
 * expressed in the cycle basis, that coordinate subspace is put in echelon
 * form, and the section is spanned by the cycle basis columns at the
 * non-pivot coordinates.  reduce() maps any ambient vector lying in
 * `cycles` to its class coordinates in the section basis.
 */
template <class F>
class Subquotient {
  public:
    Subquotient() = default;

    Subquotient(Subspace<F> cycles, Subspace<F> boundaries)
        : ambient_(cycles.ambient_dim), cycles_(std::move(cycles)), boundaries_(std::move(boundaries)) {
        const F& k = cycles_.basis.field();
        if (boundaries_.ambient_dim != ambient_)
            raise(Errc::BadInput, "subquotient ambient mismatch");
        // boundary columns in cycle coordinates
        Matrix<F> bc(k, cycles_.dim(), boundaries_.dim());
        for (std::size_t j = 0; j < boundaries_.dim(); ++j) {
            auto x = solve(cycles_.basis, boundaries_.basis.col(j));
            if (!x) raise(Errc::ContainmentViolation, "boundaries not contained in cycles");
            bc.set_col(j, *x);
        }
        auto eb = Subspace<F>::span(bc);  // echelon basis of the boundary coordinate space
        std::vector<bool> piv(cycles_.dim(), false);
        std::vector<std::size_t> pivot_row(eb.dim());
        for (std::size_t j = 0; j < eb.dim(); ++j) {
            std::size_t r = 0;
            while (r < cycles_.dim() && k.is_zero(eb.basis(r, j))) ++r;
            pivot_row[j] = r;
            piv[r] = true;
        }
        for (std::size_t r = 0; r < cycles_.dim(); ++r)
            if (!piv[r]) free_coords_.push_back(r);

        // Echelon columns touch their own pivot coordinate only, so one
        // pass kills all pivot coordinates: x -> x - sum_j x[p_j] * eb_j.
        reduce_ = Matrix<F>::identity(k, cycles_.dim());
        for (std::size_t j = 0; j < eb.dim(); ++j)
            for (std::size_t r = 0; r < cycles_.dim(); ++r)
                reduce_(r, pivot_row[j]) = k.sub(reduce_(r, pivot_row[j]), eb.basis(r, j));

        section_ = Matrix<F>(k, ambient_, free_coords_.size());
        for (std::size_t j = 0; j < free_coords_.size(); ++j)
            section_.set_col(j, cycles_.basis.col(free_coords_[j]));
    }

    std::size_t ambient_dim() const { return ambient_; }
    std::size_t dim() const { return free_coords_.size(); }
    const Subspace<F>& cycles() const { return cycles_; }
    const Subspace<F>& boundaries() const { return boundaries_; }
    const Matrix<F>& section() const { return section_; }

    /// Class coordinates (in the section basis) of an ambient vector lying
    /// in the cycle subspace.
    std::vector<typename F::Elem> reduce(const std::vector<typename F::Elem>& v) const {
        auto x = solve(cycles_.basis, v);
        if (!x) raise(Errc::ContainmentViolation, "vector not a cycle");
        auto red = reduce_.apply(*x);
        std::vector<typename F::Elem> out;
        out.reserve(free_coords_.size());
        for (auto r : free_coords_) out.push_back(red[r]);
        return out;
    }

    bool is_cycle(const std::vector<typename F::Elem>& v) const { return cycles_.contains(v); }

  private:
    std::size_t ambient_ = 0;
    Subspace<F> cycles_, boundaries_;
    std::vector<std::size_t> free_coords_;
    Matrix<F> reduce_;   // cycle coords -> reduced cycle coords
    Matrix<F> section_;  // ambient representatives, one column per class
};

template <class F>
Subquotient<F> subquotient(Subspace<F> cycles, Subspace<F> boundaries) {
    return Subquotient<F>(std::move(cycles), std::move(boundaries));
}

/// Matrix of the map induced by f on the chosen section bases.  Checks that
/// f maps cycles into cycles and boundaries into boundaries.
template <class F>
Matrix<F> induced_map(const Matrix<F>& f, const Subquotient<F>& src, const Subquotient<F>& dst) {
    const F& k = f.field();
    for (std::size_t j = 0; j < src.boundaries().dim(); ++j) {
        auto v = f.apply(src.boundaries().basis.col(j));
        if (!dst.boundaries().contains(v))
            raise(Errc::NotAChainMap, "image of a boundary is not a boundary");
    }
    for (std::size_t j = 0; j < src.cycles().dim(); ++j) {
        auto v = f.apply(src.cycles().basis.col(j));
        if (!dst.is_cycle(v)) raise(Errc::NotAChainMap, "image of a cycle is not a cycle");
    }
    Matrix<F> m(k, dst.dim(), src.dim());
    for (std::size_t j = 0; j < src.dim(); ++j)
        m.set_col(j, dst.reduce(f.apply(src.section().col(j))));
    return m;
}

}  // namespace opcalc

#endif
