#ifndef OPCALC_FIELD_HPP
#define OPCALC_FIELD_HPP

#include <cstdint>
#include <string>
#include <variant>

#include <gmpxx.h>

#include "opcalc/error.hpp"

namespace opcalc {

/*
 * Two coefficient fields back every computation: the rationals (exact, via
 * GMP) and a prime field F_p with runtime modulus.  All matrix and tensor
 * code is templated on the field and talks to it through the small
 * interface below, so a field object travels with every matrix.
 *
 * RationalField is stateless; PrimeField carries its modulus.  Elements of
 * PrimeField are stored reduced, so equality is plain integer equality.
 */

struct RationalField {
    using Elem = mpq_class;

    static Elem zero() { return Elem(0); }
    static Elem one() { return Elem(1); }
    static Elem from_long(long v) { return Elem(v); }

    static Elem add(const Elem& a, const Elem& b) { return a + b; }
    static Elem sub(const Elem& a, const Elem& b) { return a - b; }
    static Elem mul(const Elem& a, const Elem& b) { return a * b; }
    static Elem neg(const Elem& a) { return -a; }

    static Elem inv(const Elem& a) {
        if (sgn(a) == 0) raise(Errc::BadInput, "division by zero");
        return 1 / a;
    }
    static Elem div(const Elem& a, const Elem& b) { return a * inv(b); }

    static bool is_zero(const Elem& a) { return sgn(a) == 0; }
    static bool eq(const Elem& a, const Elem& b) { return a == b; }

    static std::string str(const Elem& a) { return a.get_str(); }

    /// Parses "a" or "a/b".
    static Elem parse(const std::string& s) {
        Elem q;
        if (q.set_str(s, 10) != 0) raise(Errc::BadInput, "bad rational literal '" + s + "'");
        q.canonicalize();
        return q;
    }

    static const char* name() { return "Q"; }
    bool operator==(const RationalField&) const { return true; }
};

class PrimeField {
  public:
    using Elem = std::uint64_t;

    PrimeField() : p_(2) {}
    explicit PrimeField(std::uint64_t p) : p_(p) {
        if (p < 2 || !is_prime(p)) raise(Errc::BadInput, "modulus must be prime");
    }

    std::uint64_t modulus() const { return p_; }

    Elem zero() const { return 0; }
    Elem one() const { return 1 % p_; }
    Elem from_long(long v) const {
        long r = v % static_cast<long>(p_);
        if (r < 0) r += static_cast<long>(p_);
        return static_cast<Elem>(r);
    }

    Elem add(Elem a, Elem b) const {
        Elem s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + p_ - b; }
    Elem mul(Elem a, Elem b) const {
        return static_cast<Elem>((static_cast<unsigned __int128>(a) * b) % p_);
    }
    Elem neg(Elem a) const { return a == 0 ? 0 : p_ - a; }

    Elem inv(Elem a) const {
        if (a == 0) raise(Errc::BadInput, "division by zero");
        return pow(a, p_ - 2);
    }
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

    bool is_zero(Elem a) const { return a == 0; }
    bool eq(Elem a, Elem b) const { return a == b; }

    std::string str(Elem a) const { return std::to_string(a); }

    Elem parse(const std::string& s) const {
        // accept "a" or "a/b" so the same input files work over both fields
        auto slash = s.find('/');
        if (slash == std::string::npos) {
            mpz_class z;
            if (z.set_str(s, 10) != 0) raise(Errc::BadInput, "bad integer literal '" + s + "'");
            return from_mpz(z);
        }
        mpz_class num, den;
        if (num.set_str(s.substr(0, slash), 10) != 0 || den.set_str(s.substr(slash + 1), 10) != 0)
            raise(Errc::BadInput, "bad rational literal '" + s + "'");
        return div(from_mpz(num), from_mpz(den));
    }

    const char* name() const { return "Fp"; }
    bool operator==(const PrimeField& o) const { return p_ == o.p_; }

  private:
    Elem pow(Elem b, std::uint64_t e) const {
        Elem r = 1 % p_;
        while (e) {
            if (e & 1) r = mul(r, b);
            b = mul(b, b);
            e >>= 1;
        }
        return r;
    }

    Elem from_mpz(const mpz_class& z) const {
        mpz_class m = z % static_cast<unsigned long>(p_);
        if (m < 0) m += static_cast<unsigned long>(p_);
        return m.get_ui();
    }

    static bool is_prime(std::uint64_t n) {
        if (n < 4) return n >= 2;
        if (n % 2 == 0) return false;
        for (std::uint64_t d = 3; d * d <= n; d += 2)
            if (n % d == 0) return false;
        return true;
    }

    std::uint64_t p_;
};

/// Runtime field selector, as ingested from job configs: rationals or F_p.
struct FieldSpec {
    std::variant<RationalField, PrimeField> which;

    static FieldSpec rationals() { return FieldSpec{RationalField{}}; }
    static FieldSpec prime(std::uint64_t p) { return FieldSpec{PrimeField(p)}; }

    bool is_rational() const { return std::holds_alternative<RationalField>(which); }
    std::string describe() const {
        if (is_rational()) return "Q";
        return "F" + std::to_string(std::get<PrimeField>(which).modulus());
    }
};

}  // namespace opcalc

#endif
