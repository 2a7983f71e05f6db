#pragma once

// Shared helpers for the unit tests and the acceptance binary: small
// documents built from text, random polynomial instances and the engine
// property checks.

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "wgr/model.hpp"

namespace wgr::testing {

// A document plus its model over one domain. The document must outlive the
// model, so both live here.
template <class D>
struct Env {
    Document doc;
    std::unique_ptr<Model<D>> m;

    explicit Env(const std::string& text, CoeffSpec spec = {}) : doc(parse_gma(text)) {
        m = std::make_unique<Model<D>>(doc, spec);
    }
    const Ring<D>& R(const std::string& name) const { return m->ring(name); }
    Poly<D> p(const std::string& ring, const std::string& expr) const {
        return m->eval_scalar(m->ring(ring), parse_expr(expr));
    }
    const ModuleMap<D>& map(const std::string& name) const { return m->map(name).map; }
};

inline CoeffSpec zz() { return {CoeffKind::ZZ, 0}; }
inline CoeffSpec qq() { return {CoeffKind::QQ, 0}; }
inline CoeffSpec fp(uint64_t p) { return {CoeffKind::FP, p}; }

// Coefficient of a ring element as a small integer, for building random
// instances uniformly across domains.
template <class D>
typename D::Elem elem(const D& dom, long v);

template <>
inline Integers::Elem elem(const Integers&, long v) { return mpz_class(v); }
template <>
inline Rationals::Elem elem(const Rationals&, long v) { return mpq_class(v); }
template <>
inline PrimeField::Elem elem(const PrimeField& d, long v) {
    long p = long(d.p);
    return PrimeField::Elem(((v % p) + p) % p);
}

template <class D>
Poly<D> random_poly(const Ring<D>& R, std::mt19937_64& rng, int terms, int maxdeg, int coef) {
    std::uniform_int_distribution<int> ed(0, maxdeg), cd(-coef, coef);
    std::vector<Term<D>> ts;
    for (int k = 0; k < terms; ++k) {
        Monomial m;
        int left = maxdeg;
        for (int i = 0; i < R.nvars(); ++i) {
            int e = std::min(left, ed(rng));
            m.e[i] = uint16_t(e);
            left -= e;
        }
        m.refresh();
        int c = cd(rng);
        if (c == 0) c = 1;
        ts.push_back({m, elem(R.dom, c)});
    }
    return poly_from_terms(R, ts);
}

// Homogeneous in the standard grading: every term has total degree d.
template <class D>
Poly<D> random_homogeneous(const Ring<D>& R, std::mt19937_64& rng, int terms, int d, int coef) {
    std::uniform_int_distribution<int> cd(-coef, coef), vd(0, R.nvars() - 1);
    std::vector<Term<D>> ts;
    for (int k = 0; k < terms; ++k) {
        Monomial m;
        for (int j = 0; j < d; ++j) m.e[vd(rng)]++;
        m.refresh();
        int c = cd(rng);
        if (c == 0) c = 1;
        ts.push_back({m, elem(R.dom, c)});
    }
    return poly_from_terms(R, ts);
}

template <class D>
bool same_basis(const Ring<D>& R, const GroebnerBasis<D>& a, const GroebnerBasis<D>& b) {
    if (a.elems.size() != b.elems.size()) return false;
    for (size_t i = 0; i < a.elems.size(); ++i)
        if (!poly_equal(R, a.elems[i], b.elems[i])) return false;
    return true;
}

struct PropertyOutcome {
    int instances = 0, failures = 0;
    std::string first_failure;
    void fail(const std::string& what) {
        if (!failures++) first_failure = what;
    }
};

// Reduced GB of a random ideal is unchanged by shuffling and rescaling the
// generators, and every generator reduces to zero.
template <class D>
PropertyOutcome gb_canonicity(const D& dom, int instances, uint64_t seed) {
    PropertyOutcome out;
    std::mt19937_64 rng(seed);
    for (int k = 0; k < instances; ++k) {
        Ring<D> R("R", {"x", "y", "z"}, {}, dom);
        std::vector<Poly<D>> gens;
        int n = 2 + int(rng() % 2);
        for (int j = 0; j < n; ++j) {
            auto f = random_poly(R, rng, 2 + int(rng() % 2), 2 + int(rng() % 2), 3);
            if (!f.empty()) gens.push_back(f);
        }
        auto G1 = groebner_basis(R, 1, gens, {false}, false);
        auto perm = gens;
        std::shuffle(perm.begin(), perm.end(), rng);
        if constexpr (!D::is_field) {
            // Over Z the ideal is preserved by adding multiples of one
            // generator to another.
            if (perm.size() > 1) perm[0] = poly_add(R, perm[0], poly_mul(R, perm[1], poly_var(R, 0)));
        } else {
            for (auto& f : perm) f = poly_scale(R, f, elem(dom, 2));
        }
        auto G2 = groebner_basis(R, 1, perm, {false}, false);
        ++out.instances;
        if (!same_basis(R, G1, G2)) out.fail("instance " + std::to_string(k) + ": bases differ");
        for (auto& f : gens)
            if (!G1.normal_form(f).empty()) out.fail("instance " + std::to_string(k) + ": generator not reduced to 0");
    }
    return out;
}

// Every emitted syzygy of random generators maps to zero.
template <class D>
PropertyOutcome syzygy_soundness(const D& dom, int instances, uint64_t seed) {
    PropertyOutcome out;
    std::mt19937_64 rng(seed);
    for (int k = 0; k < instances; ++k) {
        Ring<D> R("R", {"x", "y", "z"}, {}, dom);
        ModuleMap<D> f;
        int r = 1 + int(rng() % 2), n = 2 + int(rng() % 2);
        f.tgt.degs.assign(r, 0);
        f.src.degs.assign(n, 0);
        for (int j = 0; j < n; ++j) {
            std::vector<Poly<D>> comps;
            for (int i = 0; i < r; ++i) comps.push_back(random_poly(R, rng, 2, 2, 3));
            f.cols.push_back(from_components(comps));
        }
        auto syz = syzygy_basis(R, f);
        ++out.instances;
        for (auto& s : syz)
            if (!apply_map(R, f, s).empty()) out.fail("instance " + std::to_string(k) + ": syzygy does not map to 0");
    }
    return out;
}

// Dense linear algebra over F_p: rank of a list of row vectors.
inline int rank_mod_p(std::vector<std::vector<uint64_t>> rows, uint64_t p) {
    int rank = 0;
    size_t ncols = rows.empty() ? 0 : rows[0].size();
    auto inv = [p](uint64_t a) {
        uint64_t r = 1, e = p - 2;
        while (e) {
            if (e & 1) r = r * a % p;
            a = a * a % p;
            e >>= 1;
        }
        return r;
    };
    for (size_t c = 0; c < ncols && rank < int(rows.size()); ++c) {
        int piv = -1;
        for (int i = rank; i < int(rows.size()); ++i)
            if (rows[i][c]) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(rows[rank], rows[piv]);
        uint64_t iv = inv(rows[rank][c]);
        for (auto& x : rows[rank]) x = x * iv % p;
        for (int i = 0; i < int(rows.size()); ++i) {
            if (i == rank || !rows[i][c]) continue;
            uint64_t f = rows[i][c];
            for (size_t j = 0; j < ncols; ++j) rows[i][j] = (rows[i][j] + (p - f) * rows[rank][j]) % p;
        }
        ++rank;
    }
    return rank;
}

// Monomials of total degree d in n variables.
inline std::vector<Monomial> monomials_of_degree(int n, int d) {
    std::vector<Monomial> out;
    Monomial m;
    std::function<void(int, int)> rec = [&](int i, int left) {
        if (i == n - 1) {
            m.e[i] = uint16_t(left);
            m.refresh();
            out.push_back(m);
            m.e[i] = 0;
            return;
        }
        for (int e = left; e >= 0; --e) {
            m.e[i] = uint16_t(e);
            rec(i + 1, left - e);
        }
        m.e[i] = 0;
    };
    rec(0, d);
    return out;
}

// Syzygy completeness over F_p. For homogeneous generators f_1..f_k, the
// degree-t syzygies form the kernel of sum_j S_{t-d_j} -> S_t; its
// dimension (by linear algebra) must equal the dimension of the degree-t
// part of the module spanned by the emitted syzygies, for all t <= tmax.
inline PropertyOutcome syzygy_completeness(int instances, int tmax, uint64_t seed, uint64_t p = 5) {
    PropertyOutcome out;
    std::mt19937_64 rng(seed);
    PrimeField F(p);
    for (int inst = 0; inst < instances; ++inst) {
        int n = 2 + int(rng() % 2);
        std::vector<std::string> vars = {"x", "y", "z"};
        vars.resize(n);
        Ring<PrimeField> R("R", vars, std::vector<int64_t>(n, 1), F);
        int k = 2 + int(rng() % 2);
        std::vector<int> deg;
        ModuleMap<PrimeField> f;
        f.tgt.degs = {0};
        for (int j = 0; j < k; ++j) {
            int d = 1 + int(rng() % 3);
            Poly<PrimeField> g;
            while (g.empty()) g = random_homogeneous(R, rng, 1 + int(rng() % 3), d, 2);
            deg.push_back(d);
            f.src.degs.push_back(d);
            f.cols.push_back(g);
        }
        auto syz = syzygy_basis(R, f);
        // Split each emitted syzygy into standard-degree components; each
        // component is again a syzygy.
        std::vector<std::pair<int, Poly<PrimeField>>> hs;
        for (auto& s : syz) {
            std::map<int, std::vector<Term<PrimeField>>> parts;
            for (auto& t : s) parts[int(t.m.deg) + deg[t.m.pos]].push_back(t);
            for (auto& [t, ts] : parts) hs.push_back({t, poly_from_terms(R, ts)});
        }
        for (auto& [t, h] : hs)
            if (!apply_map(R, f, h).empty()) out.fail("instance " + std::to_string(inst) + ": unsound syzygy");
        for (int t = 0; t <= tmax; ++t) {
            // Coordinates of S^k in degree t: (j, monomial of degree t - d_j).
            std::vector<std::pair<int, Monomial>> coords;
            for (int j = 0; j < k; ++j)
                if (t >= deg[j])
                    for (auto& m : monomials_of_degree(n, t - deg[j])) coords.push_back({j, m});
            if (coords.empty()) continue;
            auto tgt = monomials_of_degree(n, t);
            auto idx_tgt = [&](const Monomial& m) {
                for (size_t i = 0; i < tgt.size(); ++i)
                    if (tgt[i].e == m.e) return int(i);
                return -1;
            };
            // Kernel dimension = #coords - rank of the image vectors.
            std::vector<std::vector<uint64_t>> img;
            for (auto& [j, m] : coords) {
                std::vector<uint64_t> row(tgt.size(), 0);
                for (auto& tm : f.cols[j]) {
                    Monomial mm = tm.m * m;
                    mm.pos = 0;
                    mm.refresh();
                    int i = idx_tgt(mm);
                    row[i] = (row[i] + tm.c) % p;
                }
                img.push_back(row);
            }
            int kernel_dim = int(coords.size()) - rank_mod_p(img, p);
            // Span of monomial multiples of the emitted homogeneous syzygies.
            std::vector<std::vector<uint64_t>> span;
            for (auto& [sd, h] : hs) {
                if (sd > t) continue;
                for (auto& m : monomials_of_degree(n, t - sd)) {
                    std::vector<uint64_t> row(coords.size(), 0);
                    for (auto& tm : h) {
                        Monomial mm = tm.m * m;
                        int j = int(tm.m.pos);
                        for (size_t c = 0; c < coords.size(); ++c)
                            if (coords[c].first == j && coords[c].second.e == mm.e) {
                                row[c] = (row[c] + tm.c) % p;
                                break;
                            }
                    }
                    span.push_back(row);
                }
            }
            int span_dim = span.empty() ? 0 : rank_mod_p(span, p);
            if (span_dim != kernel_dim)
                out.fail("instance " + std::to_string(inst) + " degree " + std::to_string(t) + ": kernel dimension " +
                         std::to_string(kernel_dim) + ", emitted syzygies span " + std::to_string(span_dim));
        }
        ++out.instances;
    }
    return out;
}

}  // namespace wgr::testing
