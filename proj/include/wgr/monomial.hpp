#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <functional>

#include "wgr/errors.hpp"

namespace wgr {

inline constexpr int kMaxVars = 24;

// Exponent vector plus a module position. Positions are 0 for ring
// elements. mask has bit i set iff e[i] > 0; deg is the total degree.
struct Monomial {
    std::array<uint16_t, kMaxVars> e{};
    uint32_t deg = 0;
    uint32_t pos = 0;
    uint32_t mask = 0;

    static Monomial var(int i, uint16_t k = 1) {
        Monomial m;
        m.e[i] = k;
        m.deg = k;
        m.mask = k ? (1u << i) : 0u;
        return m;
    }
    bool is_one() const { return deg == 0; }
    bool operator==(const Monomial& o) const {
        return pos == o.pos && deg == o.deg && mask == o.mask && e == o.e;
    }
    void refresh() {
        deg = 0;
        mask = 0;
        for (int i = 0; i < kMaxVars; ++i) {
            deg += e[i];
            if (e[i]) mask |= 1u << i;
        }
    }
};

inline Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r;
    for (int i = 0; i < kMaxVars; ++i) {
        uint32_t s = uint32_t(a.e[i]) + b.e[i];
        if (s > 0xFFFF) throw MathError("exponent overflow");
        r.e[i] = uint16_t(s);
    }
    r.deg = a.deg + b.deg;
    r.mask = a.mask | b.mask;
    r.pos = a.pos + b.pos;
    return r;
}

// Exponent divisibility only; positions are compared by callers.
inline bool divides(const Monomial& a, const Monomial& b) {
    if ((a.mask & ~b.mask) != 0 || a.deg > b.deg) return false;
    for (int i = 0; i < kMaxVars; ++i)
        if (a.e[i] > b.e[i]) return false;
    return true;
}

// b / a, assuming divides(a, b); result has position 0.
inline Monomial quotient(const Monomial& b, const Monomial& a) {
    Monomial r;
    for (int i = 0; i < kMaxVars; ++i) r.e[i] = uint16_t(b.e[i] - a.e[i]);
    r.deg = b.deg - a.deg;
    r.mask = 0;
    for (int i = 0; i < kMaxVars; ++i)
        if (r.e[i]) r.mask |= 1u << i;
    return r;
}

// Exponent lcm; keeps a's position.
inline Monomial lcm(const Monomial& a, const Monomial& b) {
    Monomial r;
    for (int i = 0; i < kMaxVars; ++i) r.e[i] = a.e[i] > b.e[i] ? a.e[i] : b.e[i];
    r.mask = a.mask | b.mask;
    r.deg = 0;
    for (int i = 0; i < kMaxVars; ++i) r.deg += r.e[i];
    r.pos = a.pos;
    return r;
}

inline bool coprime(const Monomial& a, const Monomial& b) { return (a.mask & b.mask) == 0; }

struct MonomialHash {
    size_t operator()(const Monomial& m) const {
        size_t h = std::hash<uint32_t>()(m.pos) ^ (size_t(m.deg) << 7);
        for (int i = 0; i < kMaxVars; ++i) h = h * 1000003u + m.e[i];
        return h;
    }
};

enum class OrderKind { DegRevLex, Lex };

// Total order on module monomials: position over term, lower position
// index ranks higher; within a position the ring order decides.
inline int compare_monomials(OrderKind ord, int nvars, const Monomial& a, const Monomial& b) {
    if (a.pos != b.pos) return a.pos < b.pos ? 1 : -1;
    if (ord == OrderKind::DegRevLex) {
        if (a.deg != b.deg) return a.deg > b.deg ? 1 : -1;
        for (int i = nvars - 1; i >= 0; --i)
            if (a.e[i] != b.e[i]) return a.e[i] < b.e[i] ? 1 : -1;
        return 0;
    }
    for (int i = 0; i < nvars; ++i)
        if (a.e[i] != b.e[i]) return a.e[i] > b.e[i] ? 1 : -1;
    return 0;
}

}  // namespace wgr
