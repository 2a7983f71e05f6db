#pragma once

// Weighted polynomial rings, sparse term lists and their arithmetic.
//
// A Poly is a term list sorted strictly descending in the ring's module
// order with no zero coefficients. Ring elements use position 0; module
// elements (vectors) use the position field of each monomial.

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "wgr/coeff.hpp"
#include "wgr/errors.hpp"
#include "wgr/monomial.hpp"

namespace wgr {

template <class D>
struct Term {
    Monomial m;
    typename D::Elem c;
};

template <class D>
using Poly = std::vector<Term<D>>;

template <class D>
class Ring;

template <class D>
struct GroebnerBasis;

template <class D>
class Ring {
public:
    std::string name;
    std::vector<std::string> vars;
    std::vector<int64_t> weights;
    D dom;
    OrderKind order = OrderKind::DegRevLex;
    std::vector<Poly<D>> relations;

    Ring(std::string nm, std::vector<std::string> vs, std::vector<int64_t> ws, D d,
         OrderKind ord = OrderKind::DegRevLex)
        : name(std::move(nm)), vars(std::move(vs)), weights(std::move(ws)), dom(d), order(ord) {
        if (vars.size() > size_t(kMaxVars))
            throw InputError("ring " + name + " has more than " + std::to_string(kMaxVars) + " variables");
        if (weights.empty()) weights.assign(vars.size(), 0);
        if (weights.size() != vars.size())
            throw InputError("ring " + name + ": weight count does not match variable count");
        for (size_t i = 0; i < vars.size(); ++i)
            for (size_t j = i + 1; j < vars.size(); ++j)
                if (vars[i] == vars[j]) throw InputError("ring " + name + ": duplicate variable " + vars[i]);
    }
    Ring(const Ring&) = delete;
    Ring& operator=(const Ring&) = delete;

    int nvars() const { return int(vars.size()); }
    int cmp(const Monomial& a, const Monomial& b) const { return compare_monomials(order, nvars(), a, b); }
    bool greater(const Monomial& a, const Monomial& b) const { return cmp(a, b) > 0; }

    int var_index(const std::string& v) const {
        for (int i = 0; i < nvars(); ++i)
            if (vars[i] == v) return i;
        return -1;
    }

    int64_t weight(const Monomial& m) const {
        int64_t w = 0;
        for (int i = 0; i < nvars(); ++i) w += weights[i] * int64_t(m.e[i]);
        return w;
    }

    // Reduced GB of the relation ideal in the free polynomial ring.
    // Computed once; concurrent callers block on the same computation.
    const GroebnerBasis<D>& relation_gb() const;

    // Canonical representative modulo the relation ideal, per position.
    Poly<D> reduce(const Poly<D>& p) const;

    bool has_relations() const { return !relations.empty(); }

    // Descriptor used for cache keys and report text.
    std::string descriptor() const;

private:
    mutable std::once_flag gb_once_;
    mutable std::unique_ptr<GroebnerBasis<D>> gb_;
};

// ---------------------------------------------------------------------------
// Term-list arithmetic

template <class D>
Poly<D> poly_const(const Ring<D>& R, const typename D::Elem& c, uint32_t pos = 0) {
    if (R.dom.is_zero(c)) return {};
    Term<D> t{Monomial{}, c};
    t.m.pos = pos;
    return {t};
}

template <class D>
Poly<D> poly_var(const Ring<D>& R, int i) {
    return {Term<D>{Monomial::var(i), R.dom.one()}};
}

template <class D>
Poly<D> poly_add(const Ring<D>& R, const Poly<D>& a, const Poly<D>& b) {
    Poly<D> r;
    r.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        int c = R.cmp(a[i].m, b[j].m);
        if (c > 0) r.push_back(a[i++]);
        else if (c < 0) r.push_back(b[j++]);
        else {
            auto s = R.dom.add(a[i].c, b[j].c);
            if (!R.dom.is_zero(s)) r.push_back(Term<D>{a[i].m, s});
            ++i;
            ++j;
        }
    }
    while (i < a.size()) r.push_back(a[i++]);
    while (j < b.size()) r.push_back(b[j++]);
    return r;
}

template <class D>
Poly<D> poly_neg(const Ring<D>& R, const Poly<D>& a) {
    Poly<D> r = a;
    for (auto& t : r) t.c = R.dom.neg(t.c);
    return r;
}

template <class D>
Poly<D> poly_sub(const Ring<D>& R, const Poly<D>& a, const Poly<D>& b) {
    return poly_add(R, a, poly_neg(R, b));
}

template <class D>
Poly<D> poly_scale(const Ring<D>& R, const Poly<D>& a, const typename D::Elem& c) {
    if (R.dom.is_zero(c)) return {};
    Poly<D> r;
    r.reserve(a.size());
    for (auto& t : a) {
        auto v = R.dom.mul(t.c, c);
        if (!R.dom.is_zero(v)) r.push_back(Term<D>{t.m, v});
    }
    return r;
}

// c * m * a, where m carries position 0 (or a has position 0 and m carries one).
template <class D>
Poly<D> poly_mul_term(const Ring<D>& R, const Poly<D>& a, const typename D::Elem& c, const Monomial& m) {
    Poly<D> r;
    if (R.dom.is_zero(c)) return r;
    r.reserve(a.size());
    for (auto& t : a) {
        auto v = R.dom.mul(t.c, c);
        if (!R.dom.is_zero(v)) r.push_back(Term<D>{t.m * m, v});
    }
    return r;
}

// a - c * m * b, merged in one pass.
template <class D>
Poly<D> poly_sub_mul(const Ring<D>& R, const Poly<D>& a, const typename D::Elem& c, const Monomial& m,
                     const Poly<D>& b, size_t a_start = 0) {
    Poly<D> r;
    r.reserve(a.size() - a_start + b.size());
    size_t i = a_start, j = 0;
    Monomial bm;
    bool have = false;
    while (i < a.size() || j < b.size()) {
        if (j < b.size() && !have) {
            bm = b[j].m * m;
            have = true;
        }
        int cmpv;
        if (i >= a.size()) cmpv = -1;
        else if (j >= b.size()) cmpv = 1;
        else cmpv = R.cmp(a[i].m, bm);
        if (cmpv > 0) {
            r.push_back(a[i++]);
        } else if (cmpv < 0) {
            auto v = R.dom.mul(b[j].c, c);
            v = R.dom.neg(v);
            if (!R.dom.is_zero(v)) r.push_back(Term<D>{bm, v});
            ++j;
            have = false;
        } else {
            auto v = a[i].c;
            R.dom.submul(v, b[j].c, c);
            if (!R.dom.is_zero(v)) r.push_back(Term<D>{bm, v});
            ++i;
            ++j;
            have = false;
        }
    }
    return r;
}

template <class D>
Poly<D> poly_from_terms(const Ring<D>& R, std::vector<Term<D>> ts) {
    std::sort(ts.begin(), ts.end(), [&](const Term<D>& x, const Term<D>& y) { return R.cmp(x.m, y.m) > 0; });
    Poly<D> r;
    for (auto& t : ts) {
        if (!r.empty() && r.back().m == t.m) {
            r.back().c = R.dom.add(r.back().c, t.c);
            if (R.dom.is_zero(r.back().c)) r.pop_back();
        } else if (!R.dom.is_zero(t.c)) {
            r.push_back(std::move(t));
        }
    }
    return r;
}

// Free-ring product; at most one factor may carry nonzero positions.
template <class D>
Poly<D> poly_mul(const Ring<D>& R, const Poly<D>& a, const Poly<D>& b) {
    if (a.empty() || b.empty()) return {};
    if (a.size() == 1) return poly_mul_term(R, b, a[0].c, a[0].m);
    if (b.size() == 1) return poly_mul_term(R, a, b[0].c, b[0].m);
    std::vector<Term<D>> ts;
    ts.reserve(a.size() * b.size());
    for (auto& x : a)
        for (auto& y : b) ts.push_back(Term<D>{x.m * y.m, R.dom.mul(x.c, y.c)});
    return poly_from_terms(R, std::move(ts));
}

template <class D>
bool poly_equal(const Ring<D>& R, const Poly<D>& a, const Poly<D>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!(a[i].m == b[i].m) || !R.dom.equal(a[i].c, b[i].c)) return false;
    return true;
}

// Move every term to position pos (input must be single-position).
template <class D>
Poly<D> at_position(const Poly<D>& a, uint32_t pos) {
    Poly<D> r = a;
    for (auto& t : r) t.m.pos = pos;
    return r;
}

// Split a vector into its per-position components (each at position 0).
template <class D>
std::vector<Poly<D>> components(const Poly<D>& v, int rank) {
    std::vector<Poly<D>> out(rank);
    for (auto& t : v) {
        if (int(t.m.pos) >= rank) throw MathError("vector position out of range");
        Term<D> u = t;
        u.m.pos = 0;
        out[t.m.pos].push_back(u);
    }
    return out;
}

template <class D>
Poly<D> from_components(const std::vector<Poly<D>>& comps, uint32_t offset = 0) {
    Poly<D> r;
    for (size_t i = 0; i < comps.size(); ++i)
        for (auto& t : comps[i]) {
            Term<D> u = t;
            u.m.pos = uint32_t(i) + offset;
            r.push_back(u);
        }
    return r;  // POT: concatenation in ascending position is already sorted
}

// Weight of a homogeneous ring element.
template <class D>
int64_t weight_of(const Ring<D>& R, const Poly<D>& f) {
    if (f.empty()) throw ZeroWeightError();
    int64_t w = R.weight(f[0].m);
    for (size_t i = 1; i < f.size(); ++i) {
        int64_t wi = R.weight(f[i].m);
        if (wi != w)
            throw InhomogeneousError("inhomogeneous polynomial: term of weight " + std::to_string(w) +
                                     " and term of weight " + std::to_string(wi));
    }
    return w;
}

template <class D>
std::string monomial_str(const Ring<D>& R, const Monomial& m) {
    std::string s;
    for (int i = 0; i < R.nvars(); ++i) {
        if (!m.e[i]) continue;
        if (!s.empty()) s += "*";
        s += R.vars[i];
        if (m.e[i] > 1) s += "^" + std::to_string(m.e[i]);
    }
    return s;
}

// Canonical text: descending terms, "coeff*var^e*...", e.g. "a1p*b0 + a0*b1".
template <class D>
std::string poly_str(const Ring<D>& R, const Poly<D>& f) {
    if (f.empty()) return "0";
    std::string s;
    bool first = true;
    for (auto& t : f) {
        std::string cs = R.dom.str(t.c);
        bool negc = false;
        if constexpr (D::kind != CoeffKind::FP) {
            if (R.dom.sign(t.c) < 0) {
                negc = true;
                cs = R.dom.str(R.dom.neg(t.c));
            }
        }
        if (first) s += negc ? "-" : "";
        else s += negc ? " - " : " + ";
        first = false;
        std::string ms = monomial_str(R, t.m);
        if (ms.empty()) s += cs;
        else if (cs == "1") s += ms;
        else s += cs + "*" + ms;
    }
    return s;
}

template <class D>
std::string vec_str(const Ring<D>& R, const Poly<D>& v, int rank) {
    auto cs = components(v, rank);
    std::string s = "[";
    for (int i = 0; i < rank; ++i) {
        if (i) s += ", ";
        s += poly_str(R, cs[i]);
    }
    return s + "]";
}

template <class D>
std::string Ring<D>::descriptor() const {
    std::string s = name + "=" + dom.spec().gma_name() + "[";
    for (int i = 0; i < nvars(); ++i) s += (i ? "," : "") + vars[i];
    s += "|weights ";
    for (int i = 0; i < nvars(); ++i) s += (i ? "," : "") + std::to_string(weights[i]);
    s += order == OrderKind::DegRevLex ? "|degrevlex]" : "|lex]";
    s += "/(";
    for (size_t i = 0; i < relations.size(); ++i) s += (i ? ";" : "") + poly_str(*this, relations[i]);
    return s + ")";
}

}  // namespace wgr
