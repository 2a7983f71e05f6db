#include "wgr/coeff.hpp"

#include <cctype>

namespace wgr {

bool is_prime(uint64_t p) {
    if (p < 2) return false;
    for (uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

std::string CoeffSpec::cli_name() const {
    switch (kind) {
        case CoeffKind::ZZ: return "zz";
        case CoeffKind::QQ: return "qq";
        default: return "fp:" + std::to_string(prime);
    }
}

std::string CoeffSpec::gma_name() const {
    switch (kind) {
        case CoeffKind::ZZ: return "ZZ";
        case CoeffKind::QQ: return "QQ";
        default: return "GF(" + std::to_string(prime) + ")";
    }
}

static uint64_t parse_prime_digits(const std::string& digits, const std::string& whole) {
    if (digits.empty() || digits.size() > 12) throw InputError("invalid coefficient domain: " + whole);
    for (char ch : digits)
        if (!std::isdigit(static_cast<unsigned char>(ch))) throw InputError("invalid coefficient domain: " + whole);
    uint64_t p = std::stoull(digits);
    if (p >= (uint64_t(1) << 31) || !is_prime(p))
        throw InputError("coefficient domain " + whole + ": modulus must be a prime below 2^31");
    return p;
}

CoeffSpec parse_coeff_cli(const std::string& s) {
    if (s == "zz") return {CoeffKind::ZZ, 0};
    if (s == "qq") return {CoeffKind::QQ, 0};
    if (s.rfind("fp:", 0) == 0) return {CoeffKind::FP, parse_prime_digits(s.substr(3), s)};
    throw InputError("invalid coefficient domain: " + s + " (expected zz, qq or fp:P)");
}

CoeffSpec parse_coeff_gma(const std::string& s) {
    if (s == "ZZ") return {CoeffKind::ZZ, 0};
    if (s == "QQ") return {CoeffKind::QQ, 0};
    if (s.rfind("GF(", 0) == 0 && s.size() > 4 && s.back() == ')')
        return {CoeffKind::FP, parse_prime_digits(s.substr(3, s.size() - 4), s)};
    throw InputError("invalid coefficient domain: " + s + " (expected ZZ, QQ or GF(P))");
}

}  // namespace wgr
