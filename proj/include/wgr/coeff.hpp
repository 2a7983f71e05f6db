#pragma once

// Coefficient domains. Each domain is a small value type whose member
// functions implement the arithmetic on its Elem type; polynomial code is
// written against this interface only.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

#include "wgr/errors.hpp"

namespace wgr {

enum class CoeffKind { ZZ, QQ, FP };

struct CoeffSpec {
    CoeffKind kind = CoeffKind::ZZ;
    uint64_t prime = 0;

    std::string cli_name() const;   // zz | qq | fp:P
    std::string gma_name() const;   // ZZ | QQ | GF(P)
    bool operator==(const CoeffSpec&) const = default;
};

CoeffSpec parse_coeff_cli(const std::string& s);
CoeffSpec parse_coeff_gma(const std::string& s);
bool is_prime(uint64_t p);

struct Integers {
    using Elem = mpz_class;
    static constexpr bool is_field = false;
    static constexpr CoeffKind kind = CoeffKind::ZZ;

    CoeffSpec spec() const { return {CoeffKind::ZZ, 0}; }
    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    Elem from_mpz(const mpz_class& v) const { return v; }
    bool is_zero(const Elem& a) const { return sgn(a) == 0; }
    bool is_one(const Elem& a) const { return a == 1; }
    int sign(const Elem& a) const { return sgn(a); }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem neg(const Elem& a) const { return -a; }
    // r := r - a*b
    void submul(Elem& r, const Elem& a, const Elem& b) const {
        mpz_submul(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    }
    bool divides(const Elem& a, const Elem& b) const {
        return mpz_divisible_p(b.get_mpz_t(), a.get_mpz_t()) != 0;
    }
    Elem exact_div(const Elem& a, const Elem& b) const {
        Elem q;
        mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        return q;
    }
    // floor quotient for b > 0; remainder lands in [0, b)
    Elem floor_div(const Elem& a, const Elem& b) const {
        Elem q;
        mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        return q;
    }
    Elem gcd(const Elem& a, const Elem& b) const {
        Elem g;
        mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        return g;
    }
    Elem lcm(const Elem& a, const Elem& b) const {
        Elem l;
        mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        return l;
    }
    // g = u*a + v*b
    void gcdext(Elem& g, Elem& u, Elem& v, const Elem& a, const Elem& b) const {
        mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    }
    std::string str(const Elem& a) const { return a.get_str(); }
    bool equal(const Elem& a, const Elem& b) const { return a == b; }
};

struct Rationals {
    using Elem = mpq_class;
    static constexpr bool is_field = true;
    static constexpr CoeffKind kind = CoeffKind::QQ;

    CoeffSpec spec() const { return {CoeffKind::QQ, 0}; }
    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    Elem from_mpz(const mpz_class& v) const { return Elem(v); }
    bool is_zero(const Elem& a) const { return sgn(a) == 0; }
    bool is_one(const Elem& a) const { return a == 1; }
    int sign(const Elem& a) const { return sgn(a); }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem neg(const Elem& a) const { return -a; }
    void submul(Elem& r, const Elem& a, const Elem& b) const { r -= a * b; }
    Elem inv(const Elem& a) const { return 1 / a; }
    Elem div(const Elem& a, const Elem& b) const { return a / b; }
    std::string str(const Elem& a) const { return a.get_str(); }
    bool equal(const Elem& a, const Elem& b) const { return a == b; }
};

struct PrimeField {
    using Elem = uint64_t;
    static constexpr bool is_field = true;
    static constexpr CoeffKind kind = CoeffKind::FP;

    uint64_t p = 5;

    PrimeField() = default;
    explicit PrimeField(uint64_t prime) : p(prime) {
        if (prime < 2 || prime >= (uint64_t(1) << 31) || !is_prime(prime))
            throw InputError("prime field modulus must be a prime below 2^31, got " + std::to_string(prime));
    }
    CoeffSpec spec() const { return {CoeffKind::FP, p}; }
    Elem zero() const { return 0; }
    Elem one() const { return 1 % p; }
    Elem from_mpz(const mpz_class& v) const {
        mpz_class r;
        mpz_fdiv_r_ui(r.get_mpz_t(), v.get_mpz_t(), p);
        return r.get_ui();
    }
    bool is_zero(const Elem& a) const { return a == 0; }
    bool is_one(const Elem& a) const { return a == 1; }
    int sign(const Elem& a) const { return a == 0 ? 0 : 1; }
    Elem add(Elem a, Elem b) const { Elem s = a + b; return s >= p ? s - p : s; }
    Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + p - b; }
    Elem mul(Elem a, Elem b) const { return (a * b) % p; }
    Elem neg(Elem a) const { return a == 0 ? 0 : p - a; }
    void submul(Elem& r, Elem a, Elem b) const { r = sub(r, mul(a, b)); }
    Elem pow(Elem a, uint64_t e) const {
        Elem r = 1 % p;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    Elem inv(Elem a) const {
        if (a == 0) throw MathError("inverse of zero in GF(p)");
        return pow(a, p - 2);
    }
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
    std::string str(const Elem& a) const { return std::to_string(a); }
    bool equal(const Elem& a, const Elem& b) const { return a == b; }
};

}  // namespace wgr
