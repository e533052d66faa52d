#ifndef OPCALC_ALGEBRA_HPP
#define OPCALC_ALGEBRA_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "opcalc/linalg.hpp"

namespace opcalc {

/*
 * A finite-dimensional unital associative algebra given by structure
 * constants, with an optional Frobenius form.  This is the single input
 * format of the engine: everything else (endomorphism operads, chain
 * modules, calculi) is built from one of these.
 *
 * Internally the basis is replaced by the "adapted" basis whose first
 * vector is the unit.  Normalized subspaces of every derived object then
 * become coordinate subspaces (a basis tensor is degenerate exactly when
 * some interior slot carries index 0), which keeps all sections
 * deterministic and cheap.  The adaptation is itself deterministic:
 * reduced-echelon completion of {unit} by the original basis vectors in
 * order.
 */
template <class F>
class AlgebraSpec {
  public:
    using Elem = typename F::Elem;

    AlgebraSpec() = default;

    /// `mul[i][j][k]` is the coefficient of basis k in (basis i)*(basis j).
    AlgebraSpec(F field, std::vector<std::string> labels,
                std::vector<std::vector<std::vector<Elem>>> mul, std::vector<Elem> unit,
                std::vector<std::vector<Elem>> form = {})
        : field_(field) {
        dim_ = labels.size();
        if (dim_ == 0) raise(Errc::InvalidAlgebra, "empty basis");
        if (mul.size() != dim_ || unit.size() != dim_)
            raise(Errc::InvalidAlgebra, "structure constant shape mismatch");
        adapt_basis(labels, mul, unit, form);
        validate();
    }

    const F& field() const { return field_; }
    std::size_t dim() const { return dim_; }
    bool has_form() const { return !form_.empty(); }

    /// Labels in the adapted (unit-first) basis.
    const std::vector<std::string>& labels() const { return labels_; }

    /// Product of adapted basis elements, as a dense coefficient vector.
    const std::vector<Elem>& product(std::size_t i, std::size_t j) const {
        return mul_[i * dim_ + j];
    }

    /// Frobenius pairing <b_i, b_j> in the adapted basis.
    const Elem& pairing(std::size_t i, std::size_t j) const { return form_[i * dim_ + j]; }
    /// Inverse Gram matrix entry.
    const Elem& pairing_inv(std::size_t i, std::size_t j) const { return form_inv_[i * dim_ + j]; }

  private:
    void adapt_basis(const std::vector<std::string>& labels,
                     const std::vector<std::vector<std::vector<Elem>>>& mul,
                     const std::vector<Elem>& unit, const std::vector<std::vector<Elem>>& form) {
        const F& k = field_;
        bool unit_is_zero = true;
        for (auto& c : unit)
            if (!k.is_zero(c)) unit_is_zero = false;
        if (unit_is_zero) raise(Errc::InvalidAlgebra, "unit is zero");

        // change-of-basis T: columns are adapted basis vectors in the old basis
        Matrix<F> t(k, dim_, dim_);
        t.set_col(0, unit);
        std::size_t filled = 1;
        for (std::size_t j = 0; j < dim_ && filled < dim_; ++j) {
            Matrix<F> probe(k, dim_, filled + 1);
            for (std::size_t c = 0; c < filled; ++c) probe.set_col(c, t.col(c));
            std::vector<Elem> ej(dim_, k.zero());
            ej[j] = k.one();
            probe.set_col(filled, ej);
            if (rank(probe) == filled + 1) {
                t.set_col(filled, ej);
                ++filled;
            }
        }
        if (filled != dim_) raise(Errc::InvalidAlgebra, "could not complete unit to a basis");

        auto t_rref = rref(t.hcat(Matrix<F>::identity(k, dim_)));
        Matrix<F> tinv(k, dim_, dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j) tinv(i, j) = t_rref.r(i, dim_ + j);

        labels_.resize(dim_);
        labels_[0] = "1";
        for (std::size_t j = 1; j < dim_; ++j) {
            // adapted vectors beyond the unit are original basis vectors
            std::size_t orig = 0;
            for (std::size_t i = 0; i < dim_; ++i)
                if (!k.is_zero(t(i, j))) orig = i;
            labels_[j] = labels[orig];
        }

        // structure constants in the adapted basis
        mul_.assign(dim_ * dim_, std::vector<Elem>(dim_, k.zero()));
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j) {
                auto bi = t.col(i);
                auto bj = t.col(j);
                std::vector<Elem> prod(dim_, k.zero());
                for (std::size_t a = 0; a < dim_; ++a)
                    for (std::size_t b = 0; b < dim_; ++b) {
                        if (k.is_zero(bi[a]) || k.is_zero(bj[b])) continue;
                        auto c = k.mul(bi[a], bj[b]);
                        for (std::size_t x = 0; x < dim_; ++x)
                            prod[x] = k.add(prod[x], k.mul(c, mul[a][b][x]));
                    }
                mul_[i * dim_ + j] = tinv.apply(prod);
            }

        if (!form.empty()) {
            if (form.size() != dim_) raise(Errc::InvalidAlgebra, "form shape mismatch");
            form_.assign(dim_ * dim_, k.zero());
            for (std::size_t i = 0; i < dim_; ++i)
                for (std::size_t j = 0; j < dim_; ++j) {
                    Elem s = k.zero();
                    for (std::size_t a = 0; a < dim_; ++a)
                        for (std::size_t b = 0; b < dim_; ++b) {
                            if (k.is_zero(t(a, i)) || k.is_zero(t(b, j))) continue;
                            s = k.add(s, k.mul(k.mul(t(a, i), t(b, j)), form[a][b]));
                        }
                    form_[i * dim_ + j] = s;
                }
        }
    }

    void validate() {
        const F& k = field_;
        // unitality in the adapted basis: b_0 * x = x * b_0 = x
        for (std::size_t i = 0; i < dim_; ++i) {
            for (std::size_t x = 0; x < dim_; ++x) {
                Elem want = (x == i) ? k.one() : k.zero();
                if (!k.eq(product(0, i)[x], want) || !k.eq(product(i, 0)[x], want))
                    raise(Errc::InvalidAlgebra, "unit axiom fails");
            }
        }
        // associativity on all basis triples
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j)
                for (std::size_t l = 0; l < dim_; ++l) {
                    std::vector<Elem> lhs(dim_, k.zero()), rhs(dim_, k.zero());
                    for (std::size_t m = 0; m < dim_; ++m) {
                        if (!k.is_zero(product(i, j)[m]))
                            for (std::size_t x = 0; x < dim_; ++x)
                                lhs[x] = k.add(lhs[x], k.mul(product(i, j)[m], product(m, l)[x]));
                        if (!k.is_zero(product(j, l)[m]))
                            for (std::size_t x = 0; x < dim_; ++x)
                                rhs[x] = k.add(rhs[x], k.mul(product(j, l)[m], product(i, m)[x]));
                    }
                    for (std::size_t x = 0; x < dim_; ++x)
                        if (!k.eq(lhs[x], rhs[x]))
                            raise(Errc::InvalidAlgebra, "associativity fails on basis triple");
                }

        if (has_form()) {
            Matrix<F> g(k, dim_, dim_);
            for (std::size_t i = 0; i < dim_; ++i)
                for (std::size_t j = 0; j < dim_; ++j) {
                    g(i, j) = pairing(i, j);
                    if (!k.eq(pairing(i, j), pairing(j, i)))
                        raise(Errc::InvalidAlgebra, "form is not symmetric");
                }
            if (rank(g) != dim_) raise(Errc::InvalidAlgebra, "form is degenerate");
            // invariance <ab, c> = <a, bc> on basis triples
            for (std::size_t a = 0; a < dim_; ++a)
                for (std::size_t b = 0; b < dim_; ++b)
                    for (std::size_t c = 0; c < dim_; ++c) {
                        Elem lhs = k.zero(), rhs = k.zero();
                        for (std::size_t m = 0; m < dim_; ++m) {
                            lhs = k.add(lhs, k.mul(product(a, b)[m], pairing(m, c)));
                            rhs = k.add(rhs, k.mul(product(b, c)[m], pairing(a, m)));
                        }
                        if (!k.eq(lhs, rhs)) raise(Errc::InvalidAlgebra, "form is not invariant");
                    }
            auto ge = rref(g.hcat(Matrix<F>::identity(k, dim_)));
            form_inv_.assign(dim_ * dim_, k.zero());
            for (std::size_t i = 0; i < dim_; ++i)
                for (std::size_t j = 0; j < dim_; ++j) form_inv_[i * dim_ + j] = ge.r(i, dim_ + j);
        }
    }

    F field_;
    std::size_t dim_ = 0;
    std::vector<std::string> labels_;
    std::vector<std::vector<Elem>> mul_;  // dim x dim products, dense coefficient vectors
    std::vector<Elem> form_, form_inv_;
};

/// Parses the canonical JSON algebra document over the requested field.
/// Shape: {"field": "Q"|{"Fp": p}, "basis": [...], "unit": [...],
///         "mul": [[[c_k...] per j] per i], "frobenius_form": [[...]] }.
/// The "field" entry in the file is a default; `field` wins when given.
template <class F>
AlgebraSpec<F> algebra_from_json(const nlohmann::json& doc, F field) {
    using Elem = typename F::Elem;
    auto parse_scalar = [&](const nlohmann::json& v) -> Elem {
        if (v.is_number_integer()) return field.from_long(v.get<long>());
        if (v.is_string()) return field.parse(v.get<std::string>());
        raise(Errc::BadInput, "scalar entries must be integers or strings");
    };

    for (const char* key : {"basis", "unit", "mul"})
        if (!doc.contains(key)) raise(Errc::BadInput, std::string("missing field '") + key + "'");

    std::vector<std::string> labels = doc.at("basis").get<std::vector<std::string>>();
    const std::size_t d = labels.size();

    std::vector<Elem> unit;
    for (const auto& v : doc.at("unit")) unit.push_back(parse_scalar(v));

    const auto& mj = doc.at("mul");
    if (mj.size() != d) raise(Errc::BadInput, "mul must have one row per basis element");
    std::vector<std::vector<std::vector<Elem>>> mul(d);
    for (std::size_t i = 0; i < d; ++i) {
        if (mj[i].size() != d) raise(Errc::BadInput, "mul rows must have one entry per basis element");
        mul[i].resize(d);
        for (std::size_t j = 0; j < d; ++j) {
            if (mj[i][j].size() != d) raise(Errc::BadInput, "mul entries must be coefficient vectors");
            for (const auto& v : mj[i][j]) mul[i][j].push_back(parse_scalar(v));
        }
    }

    std::vector<std::vector<Elem>> form;
    if (doc.contains("frobenius_form") && !doc.at("frobenius_form").is_null()) {
        for (const auto& row : doc.at("frobenius_form")) {
            form.emplace_back();
            for (const auto& v : row) form.back().push_back(parse_scalar(v));
        }
    }

    return AlgebraSpec<F>(field, std::move(labels), std::move(mul), std::move(unit),
                          std::move(form));
}

}  // namespace opcalc

#endif
