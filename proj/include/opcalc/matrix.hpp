#ifndef OPCALC_MATRIX_HPP
#define OPCALC_MATRIX_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "opcalc/error.hpp"
#include "opcalc/field.hpp"

namespace opcalc {

/// Dense matrix over a field F, row-major.  Every operator in the engine is
/// eventually materialized as one of these, so the type stays deliberately
/// plain: value semantics, no views, no lazy evaluation.
template <class F>
class Matrix {
  public:
    using Elem = typename F::Elem;

    Matrix() : field_(), rows_(0), cols_(0) {}
    Matrix(F field, std::size_t rows, std::size_t cols)
        : field_(field), rows_(rows), cols_(cols), a_(rows * cols, field.zero()) {}

    static Matrix identity(F field, std::size_t n) {
        Matrix m(field, n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
        return m;
    }

    static Matrix zero(F field, std::size_t rows, std::size_t cols) {
        return Matrix(field, rows, cols);
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const F& field() const { return field_; }

    Elem& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    const Elem& operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    bool is_zero() const {
        for (const Elem& x : a_)
            if (!field_.is_zero(x)) return false;
        return true;
    }

    bool operator==(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) return false;
        for (std::size_t i = 0; i < a_.size(); ++i)
            if (!field_.eq(a_[i], o.a_[i])) return false;
        return true;
    }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    Matrix operator+(const Matrix& o) const {
        check_same_shape(o);
        Matrix r = *this;
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = field_.add(r.a_[i], o.a_[i]);
        return r;
    }

    Matrix operator-(const Matrix& o) const {
        check_same_shape(o);
        Matrix r = *this;
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = field_.sub(r.a_[i], o.a_[i]);
        return r;
    }

    Matrix operator-() const {
        Matrix r = *this;
        for (auto& x : r.a_) x = field_.neg(x);
        return r;
    }

    Matrix scaled(const Elem& c) const {
        Matrix r = *this;
        for (auto& x : r.a_) x = field_.mul(x, c);
        return r;
    }

    // Zero entries dominate in this code base, so the inner loop is skipped
    // whenever the left entry vanishes.
    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) raise(Errc::BadInput, "matrix product shape mismatch");
        Matrix r(field_, rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t k = 0; k < cols_; ++k) {
                const Elem& aik = (*this)(i, k);
                if (field_.is_zero(aik)) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) {
                    const Elem& bkj = o(k, j);
                    if (field_.is_zero(bkj)) continue;
                    r(i, j) = field_.add(r(i, j), field_.mul(aik, bkj));
                }
            }
        }
        return r;
    }

    std::vector<Elem> apply(const std::vector<Elem>& v) const {
        if (v.size() != cols_) raise(Errc::BadInput, "matrix apply shape mismatch");
        std::vector<Elem> r(rows_, field_.zero());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Elem& aik = (*this)(i, k);
                if (field_.is_zero(aik) || field_.is_zero(v[k])) continue;
                r[i] = field_.add(r[i], field_.mul(aik, v[k]));
            }
        return r;
    }

    Matrix transposed() const {
        Matrix r(field_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    void swap_rows(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(i, c), (*this)(j, c));
    }

    std::vector<Elem> col(std::size_t j) const {
        std::vector<Elem> v(rows_, field_.zero());
        for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }

    void set_col(std::size_t j, const std::vector<Elem>& v) {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
    }

    /// Columns of `cols` appended to the right of *this.
    Matrix hcat(const Matrix& o) const {
        if (rows_ != o.rows_) raise(Errc::BadInput, "hcat shape mismatch");
        Matrix r(field_, rows_, cols_ + o.cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j);
            for (std::size_t j = 0; j < o.cols_; ++j) r(i, cols_ + j) = o(i, j);
        }
        return r;
    }

    static Matrix from_cols(F field, std::size_t rows, const std::vector<std::vector<Elem>>& cols) {
        Matrix r(field, rows, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) r.set_col(j, cols[j]);
        return r;
    }

  private:
    void check_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) raise(Errc::BadInput, "matrix shape mismatch");
    }

    F field_;
    std::size_t rows_, cols_;
    std::vector<Elem> a_;
};

/// Sparse vector: a sorted list of (index, coefficient) with no zero
/// coefficients and no repeated indices.  Structure maps (operadic
/// compositions, module actions, cyclic operators) produce these.
template <class F>
struct LinComb {
    using Elem = typename F::Elem;
    std::vector<std::pair<std::size_t, Elem>> terms;

    void add_term(const F& field, std::size_t idx, const Elem& c) {
        if (field.is_zero(c)) return;
        for (auto& [i, v] : terms) {
            if (i == idx) {
                v = field.add(v, c);
                return;
            }
        }
        terms.emplace_back(idx, c);
    }

    void prune(const F& field) {
        std::size_t w = 0;
        for (std::size_t r = 0; r < terms.size(); ++r)
            if (!field.is_zero(terms[r].second)) terms[w++] = terms[r];
        terms.resize(w);
    }

    bool empty_after_prune(const F& field) const {
        for (const auto& [i, v] : terms)
            if (!field.is_zero(v)) return false;
        return true;
    }

    static LinComb basis(std::size_t idx, const F& field) {
        LinComb lc;
        lc.terms.emplace_back(idx, field.one());
        return lc;
    }
};

/// a - b == 0 as sparse vectors.
template <class F>
bool lc_equal(const F& field, const LinComb<F>& a, const LinComb<F>& b) {
    LinComb<F> d = a;
    for (const auto& [i, v] : b.terms) d.add_term(field, i, field.neg(v));
    return d.empty_after_prune(field);
}

/// Column-sparse matrix: per column, the list of (row, coefficient).
/// Composition tensors are stored this way; for endomorphism-operad
/// instances nearly every column has at most one entry.
template <class F>
class SparseMat {
  public:
    using Elem = typename F::Elem;

    SparseMat() : field_(), rows_(0) {}
    SparseMat(F field, std::size_t rows, std::size_t cols)
        : field_(field), rows_(rows), cols_(cols_init(cols)) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_.size(); }
    const F& field() const { return field_; }

    LinComb<F>& column(std::size_t j) { return cols_[j]; }
    const LinComb<F>& column(std::size_t j) const { return cols_[j]; }

    void apply_into(const LinComb<F>& v, LinComb<F>& out, const Elem& scale) const {
        for (const auto& [j, c] : v.terms) {
            Elem cs = field_.mul(c, scale);
            if (field_.is_zero(cs)) continue;
            for (const auto& [i, a] : cols_[j].terms) out.add_term(field_, i, field_.mul(a, cs));
        }
    }

    Matrix<F> dense() const {
        Matrix<F> m(field_, rows_, cols());
        for (std::size_t j = 0; j < cols(); ++j)
            for (const auto& [i, a] : cols_[j].terms) m(i, j) = field_.add(m(i, j), a);
        return m;
    }

  private:
    static std::vector<LinComb<F>> cols_init(std::size_t n) { return std::vector<LinComb<F>>(n); }

    F field_;
    std::size_t rows_;
    std::vector<LinComb<F>> cols_;
};

}  // namespace opcalc

#endif
