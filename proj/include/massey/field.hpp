#pragma once

// Exact ground fields: the rationals (GMP) and prime fields F_p.
//
// Every algorithm in the library is a template over a field descriptor F with
//   F::Scalar            value type supporting + - * and unary -
//   f.zero(), f.one(), f.from_int(k), f.inv(x), f.parse(str), f.to_string(x)
// Scalars of a prime field carry their modulus so that arithmetic operators
// need no global state; a default constructed Zp is a modulus-free zero.

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

#include "massey/error.hpp"

namespace massey {

inline bool is_zero(const mpq_class& x) { return sgn(x) == 0; }

struct Zp {
    std::uint32_t v = 0;
    std::uint32_t p = 0;

    friend bool operator==(const Zp& a, const Zp& b) { return a.v == b.v; }
    friend bool operator!=(const Zp& a, const Zp& b) { return a.v != b.v; }

    static std::uint32_t modulus_of(const Zp& a, const Zp& b) { return a.p ? a.p : b.p; }

    friend Zp operator+(const Zp& a, const Zp& b) {
        std::uint32_t p = modulus_of(a, b);
        if (p == 0) return {};
        std::uint64_t s = std::uint64_t(a.v) + b.v;
        if (s >= p) s -= p;
        return {static_cast<std::uint32_t>(s), p};
    }
    friend Zp operator-(const Zp& a) {
        if (a.v == 0) return {0, a.p};
        return {a.p - a.v, a.p};
    }
    friend Zp operator-(const Zp& a, const Zp& b) { return a + (-b); }
    friend Zp operator*(const Zp& a, const Zp& b) {
        std::uint32_t p = modulus_of(a, b);
        if (p == 0) return {};
        return {static_cast<std::uint32_t>((std::uint64_t(a.v) * b.v) % p), p};
    }
    Zp& operator+=(const Zp& o) { return *this = *this + o; }
    Zp& operator-=(const Zp& o) { return *this = *this - o; }
    Zp& operator*=(const Zp& o) { return *this = *this * o; }

    friend std::ostream& operator<<(std::ostream& os, const Zp& a) { return os << a.v; }
};

inline bool is_zero(const Zp& x) { return x.v == 0; }

/// The field Q with arbitrary precision numerators and denominators.
struct Rationals {
    using Scalar = mpq_class;

    Scalar zero() const { return Scalar(0); }
    Scalar one() const { return Scalar(1); }
    Scalar from_int(long k) const { return Scalar(k); }
    Scalar inv(const Scalar& x) const {
        if (is_zero(x)) throw Error(ErrorKind::DomainError, "inverse of zero");
        Scalar r = 1 / x;
        return r;
    }
    Scalar parse(const std::string& s) const {
        auto slash = s.find('/');
        auto part = [&](const std::string& t) {
            mpz_class z;
            bool ok = !t.empty() && t.find_first_not_of("+-0123456789") == std::string::npos;
            if (ok && t[0] == '+') ok = t.size() > 1 && z.set_str(t.substr(1), 10) == 0;
            else if (ok) ok = z.set_str(t, 10) == 0;
            if (!ok) throw Error(ErrorKind::InvalidInput, "malformed rational '" + s + "'");
            return z;
        };
        mpz_class num = part(s.substr(0, slash));
        mpz_class den = slash == std::string::npos ? mpz_class(1) : part(s.substr(slash + 1));
        if (den == 0) throw Error(ErrorKind::InvalidInput, "zero denominator in '" + s + "'");
        Scalar r(num, den);
        r.canonicalize();
        return r;
    }
    std::string to_string(const Scalar& x) const {
        return x.get_num().get_str() + "/" + x.get_den().get_str();
    }
    std::string name() const { return "q"; }
    bool operator==(const Rationals&) const { return true; }
};

inline bool is_prime(std::uint64_t p) {
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

/// The prime field F_p; p must be prime and below 2^31.
struct PrimeField {
    using Scalar = Zp;
    std::uint32_t p;

    explicit PrimeField(std::uint32_t prime) : p(prime) {
        if (!is_prime(prime) || prime >= (1u << 31))
            throw Error(ErrorKind::InvalidInput, "modulus " + std::to_string(prime) + " is not a usable prime");
    }

    Scalar zero() const { return {0, p}; }
    Scalar one() const { return {1 % p, p}; }
    Scalar from_int(long k) const {
        long r = k % static_cast<long>(p);
        if (r < 0) r += p;
        return {static_cast<std::uint32_t>(r), p};
    }
    Scalar inv(const Scalar& x) const {
        if (x.v == 0) throw Error(ErrorKind::DomainError, "inverse of zero");
        // extended Euclid
        std::int64_t a = x.v, m = p, u = 1, w = 0;
        while (m != 0) {
            std::int64_t q = a / m;
            std::int64_t t = a - q * m;
            a = m;
            m = t;
            t = u - q * w;
            u = w;
            w = t;
        }
        u %= static_cast<std::int64_t>(p);
        if (u < 0) u += p;
        return {static_cast<std::uint32_t>(u), p};
    }
    Scalar parse(const std::string& s) const {
        mpq_class q = Rationals{}.parse(s);
        mpz_class num = q.get_num() % p, den = q.get_den() % p;
        if (num < 0) num += p;
        if (den == 0) throw Error(ErrorKind::InvalidInput, "denominator of '" + s + "' vanishes mod p");
        return from_int(num.get_si()) * inv(from_int(den.get_si()));
    }
    std::string to_string(const Scalar& x) const { return std::to_string(x.v) + "/1"; }
    std::string name() const { return "fp:" + std::to_string(p); }
    bool operator==(const PrimeField& o) const { return p == o.p; }
};

}  // namespace massey
