#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

#include <gmpxx.h>
#include <Eigen/Core>

namespace cdg {

/// Arbitrary precision rational.  Plain value semantics over mpq_class so
/// that no gmp expression templates leak into Eigen.
class Rational {
public:
    Rational() = default;
    Rational(int v) : q_(v) {}
    Rational(long v) : q_(v) {}
    Rational(long num, long den) : q_(num, den) {
        if (den == 0) throw std::domain_error("zero denominator");
        q_.canonicalize();
    }
    explicit Rational(const mpq_class& q) : q_(q) {}

    static Rational parse(const std::string& s) {
        mpq_class q;
        if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational '" + s + "'");
        if (q.get_den() == 0) throw std::invalid_argument("bad rational '" + s + "'");
        q.canonicalize();
        return Rational(q);
    }

    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw std::domain_error("division by zero");
        q_ /= o.q_;
        return *this;
    }
    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    Rational operator-() const { return Rational(mpq_class(-q_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.q_ != b.q_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.q_ < b.q_; }

    bool is_zero() const { return sgn(q_) == 0; }
    Rational inverse() const { return Rational(1) / *this; }
    std::string str() const { return q_.get_str(); }
    const mpq_class& raw() const { return q_; }

    static std::string field_name() { return "Q"; }

private:
    mpq_class q_;
};

/// Element of F_p.  The modulus is a per-thread runtime setting, changed
/// through ModP::Scope; representatives are kept in [0, p).
class ModP {
public:
    class Scope {
    public:
        explicit Scope(std::uint32_t p) : saved_(modulus_) { set_modulus(p); }
        ~Scope() { modulus_ = saved_; }
        Scope(const Scope&) = delete;
        Scope& operator=(const Scope&) = delete;

    private:
        std::uint32_t saved_;
    };

    ModP() = default;
    ModP(int v) : v_(reduce(static_cast<std::int64_t>(v))) {}
    ModP(long v) : v_(reduce(static_cast<std::int64_t>(v))) {}
    ModP(long num, long den) : ModP(ModP(num) / ModP(den)) {}

    static ModP parse(const std::string& s) {
        auto slash = s.find('/');
        try {
            if (slash == std::string::npos) return ModP(mpz_mod_p(s));
            return ModP(mpz_mod_p(s.substr(0, slash))) / ModP(mpz_mod_p(s.substr(slash + 1)));
        } catch (const std::domain_error&) {
            throw std::invalid_argument("bad F_p element '" + s + "'");
        }
    }

    static std::uint32_t modulus() { return modulus_; }
    static void set_modulus(std::uint32_t p) {
        if (p < 2 || mpz_probab_prime_p(mpz_class(p).get_mpz_t(), 30) == 0)
            throw std::invalid_argument("modulus " + std::to_string(p) + " is not prime");
        modulus_ = p;
    }

    ModP& operator+=(const ModP& o) { v_ = static_cast<std::uint32_t>((std::uint64_t(v_) + o.v_) % modulus_); return *this; }
    ModP& operator-=(const ModP& o) { v_ = static_cast<std::uint32_t>((std::uint64_t(v_) + modulus_ - o.v_) % modulus_); return *this; }
    ModP& operator*=(const ModP& o) { v_ = static_cast<std::uint32_t>((std::uint64_t(v_) * o.v_) % modulus_); return *this; }
    ModP& operator/=(const ModP& o) { return *this *= o.inverse(); }
    friend ModP operator+(ModP a, const ModP& b) { return a += b; }
    friend ModP operator-(ModP a, const ModP& b) { return a -= b; }
    friend ModP operator*(ModP a, const ModP& b) { return a *= b; }
    friend ModP operator/(ModP a, const ModP& b) { return a /= b; }
    ModP operator-() const { ModP r; r.v_ = v_ == 0 ? 0 : modulus_ - v_; return r; }

    friend bool operator==(const ModP& a, const ModP& b) { return a.v_ == b.v_; }
    friend bool operator!=(const ModP& a, const ModP& b) { return a.v_ != b.v_; }
    friend bool operator<(const ModP& a, const ModP& b) { return a.v_ < b.v_; }

    bool is_zero() const { return v_ == 0; }
    ModP inverse() const {
        if (v_ == 0) throw std::domain_error("division by zero");
        // extended Euclid on (v, p)
        std::int64_t a = v_, b = modulus_, x0 = 1, x1 = 0;
        while (b != 0) {
            std::int64_t q = a / b;
            std::int64_t t = a - q * b; a = b; b = t;
            t = x0 - q * x1; x0 = x1; x1 = t;
        }
        return ModP(static_cast<long>(x0 % static_cast<std::int64_t>(modulus_)));
    }
    std::uint32_t value() const { return v_; }
    std::string str() const { return std::to_string(v_); }

    static std::string field_name() { return "F_" + std::to_string(modulus_); }

private:
    static std::uint32_t reduce(std::int64_t v) {
        std::int64_t m = static_cast<std::int64_t>(modulus_);
        v %= m;
        if (v < 0) v += m;
        return static_cast<std::uint32_t>(v);
    }
    static long mpz_mod_p(const std::string& s) {
        mpz_class z;
        if (z.set_str(s, 10) != 0) throw std::invalid_argument("bad integer '" + s + "'");
        mpz_class r = z % modulus_;
        if (r < 0) r += modulus_;
        return r.get_si();
    }

    std::uint32_t v_ = 0;
    static inline thread_local std::uint32_t modulus_ = 2147483647u;
};

inline std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }
inline std::ostream& operator<<(std::ostream& os, const ModP& r) { return os << r.str(); }

template <class S>
concept ExactField = requires(S a, S b, const std::string& s) {
    { a + b } -> std::convertible_to<S>;
    { a - b } -> std::convertible_to<S>;
    { a * b } -> std::convertible_to<S>;
    { a / b } -> std::convertible_to<S>;
    { -a } -> std::convertible_to<S>;
    { a == b } -> std::convertible_to<bool>;
    { a.is_zero() } -> std::convertible_to<bool>;
    { a.inverse() } -> std::convertible_to<S>;
    { a.str() } -> std::convertible_to<std::string>;
    { S::parse(s) } -> std::convertible_to<S>;
    S(1);
};

template <class S>
inline bool is_zero(const S& s) { return s.is_zero(); }

/// (-1)^e as a field element.
template <class S>
inline S sign(long e) { return (e & 1) ? S(-1) : S(1); }

inline int parity(long e) { return static_cast<int>(e & 1); }

}  // namespace cdg

namespace Eigen {

template <>
struct NumTraits<cdg::Rational> : GenericNumTraits<cdg::Rational> {
    using Real = cdg::Rational;
    using NonInteger = cdg::Rational;
    using Nested = cdg::Rational;
    using Literal = cdg::Rational;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 8,
        AddCost = 32,
        MulCost = 64
    };
    static inline Real epsilon() { return Real(0); }
    static inline Real dummy_precision() { return Real(0); }
    static inline int digits10() { return 0; }
};

template <>
struct NumTraits<cdg::ModP> : GenericNumTraits<cdg::ModP> {
    using Real = cdg::ModP;
    using NonInteger = cdg::ModP;
    using Nested = cdg::ModP;
    using Literal = cdg::ModP;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 0,
        RequireInitialization = 0,
        ReadCost = 1,
        AddCost = 2,
        MulCost = 4
    };
    static inline Real epsilon() { return Real(0); }
    static inline Real dummy_precision() { return Real(0); }
    static inline int digits10() { return 0; }
};

}  // namespace Eigen
