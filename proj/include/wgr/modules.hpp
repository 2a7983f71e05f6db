#pragma once

// Graded free modules over S = P/I, homogeneous maps, subquotients,
// chain complexes and the homological checks built on module Gröbner
// bases. Vectors are Polys whose positions index free-module generators.
// Every computation happens in P^r with I adjoined at each position.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wgr/groebner.hpp"

namespace wgr {

// Generator degrees; the twist S(m) has its generator in degree -m.
struct FreeModule {
    std::string name;
    std::vector<int64_t> degs;
    int rank() const { return int(degs.size()); }
    bool same_shape(const FreeModule& o) const { return degs == o.degs; }
};

template <class D>
using Vec = Poly<D>;

template <class D>
struct ModuleMap {
    std::string name;
    FreeModule src, tgt;
    std::vector<Vec<D>> cols;  // cols[j] = image of source generator j
};

template <class D>
Vec<D> basis_vec(const Ring<D>& R, int i) {
    return poly_const(R, R.dom.one(), uint32_t(i));
}

template <class D>
std::vector<Vec<D>> basis(const Ring<D>& R, int rank) {
    std::vector<Vec<D>> out;
    for (int i = 0; i < rank; ++i) out.push_back(basis_vec(R, i));
    return out;
}

template <class D>
Poly<D> map_entry(const ModuleMap<D>& f, int i, int j) {
    Poly<D> e;
    for (auto& t : f.cols[j])
        if (int(t.m.pos) == i) {
            Term<D> u = t;
            u.m.pos = 0;
            e.push_back(u);
        }
    return e;
}

// Degree-0 check: weight(entry(i,j)) = src_j - tgt_i for nonzero entries.
template <class D>
void validate_map(const Ring<D>& R, const ModuleMap<D>& f) {
    if (int(f.cols.size()) != f.src.rank())
        throw MathError("map " + f.name + ": column count does not match source rank");
    for (int j = 0; j < f.src.rank(); ++j) {
        for (auto& t : f.cols[j])
            if (int(t.m.pos) >= f.tgt.rank()) throw MathError("map " + f.name + ": entry outside target rank");
        for (int i = 0; i < f.tgt.rank(); ++i) {
            Poly<D> e = map_entry(f, i, j);
            if (e.empty()) continue;
            int64_t expect = f.src.degs[j] - f.tgt.degs[i];
            int64_t w;
            try {
                w = weight_of(R, e);
            } catch (const InhomogeneousError& ex) {
                throw InhomogeneousError("map " + f.name + " entry (" + std::to_string(i + 1) + "," +
                                         std::to_string(j + 1) + ") is not homogeneous, expected weight " +
                                         std::to_string(expect) + ": " + ex.what());
            }
            if (w != expect)
                throw InhomogeneousError("map " + f.name + " entry (" + std::to_string(i + 1) + "," +
                                         std::to_string(j + 1) + ") = " + poly_str(R, e) + " has weight " +
                                         std::to_string(w) + ", expected " + std::to_string(expect));
        }
    }
}

// Degree of a nonzero homogeneous vector in a graded free module.
template <class D>
int64_t vec_degree(const Ring<D>& R, const FreeModule& F, const Vec<D>& v) {
    if (v.empty()) throw ZeroWeightError();
    int64_t d = R.weight(v[0].m) + F.degs[v[0].m.pos];
    for (auto& t : v)
        if (R.weight(t.m) + F.degs[t.m.pos] != d)
            throw InhomogeneousError("vector " + vec_str(R, v, F.rank()) + " is not homogeneous");
    return d;
}

// sum_k coeffs_k * vs_k, reduced modulo I.
template <class D>
Vec<D> combine(const Ring<D>& R, const std::vector<Poly<D>>& coeffs, const std::vector<Vec<D>>& vs) {
    std::vector<Term<D>> acc;
    for (size_t k = 0; k < coeffs.size() && k < vs.size(); ++k) {
        if (coeffs[k].empty() || vs[k].empty()) continue;
        for (auto& a : coeffs[k])
            for (auto& b : vs[k]) acc.push_back(Term<D>{b.m * a.m, R.dom.mul(a.c, b.c)});
    }
    return R.reduce(poly_from_terms(R, std::move(acc)));
}

template <class D>
Vec<D> apply_map(const Ring<D>& R, const ModuleMap<D>& f, const Vec<D>& v) {
    return combine(R, components(v, f.src.rank()), f.cols);
}

// f after g.
template <class D>
ModuleMap<D> compose(const Ring<D>& R, const ModuleMap<D>& f, const ModuleMap<D>& g) {
    if (!g.tgt.same_shape(f.src) && g.tgt.rank() != f.src.rank())
        throw MathError("cannot compose " + f.name + " after " + g.name + ": endpoint mismatch");
    ModuleMap<D> h;
    h.name = "(" + f.name + "*" + g.name + ")";
    h.src = g.src;
    h.tgt = f.tgt;
    for (auto& c : g.cols) h.cols.push_back(apply_map(R, f, c));
    return h;
}

template <class D>
GroebnerBasis<D> module_gb(const Ring<D>& R, int rank, const std::vector<Vec<D>>& gens) {
    return groebner_basis(R, rank, gens);
}

// GB of {(g_j, e_{r+j})} with I on the first r positions only. Elements
// whose lead lies in a tag position are syzygies; normal forms of (z, 0)
// give membership certificates.
template <class D>
struct Augmented {
    const Ring<D>* R = nullptr;
    int r = 0, k = 0;
    GroebnerBasis<D> G;

    std::vector<Vec<D>> syzygies() const {
        std::vector<Vec<D>> out;
        for (auto& g : G.elems) {
            if (int(g[0].m.pos) < r) continue;
            Vec<D> s;
            for (auto& t : g) {
                Term<D> u = t;
                u.m.pos -= uint32_t(r);
                s.push_back(u);
            }
            s = R->reduce(s);
            if (!s.empty()) out.push_back(std::move(s));
        }
        return out;
    }

    // Coefficients l with z = sum l_j g_j modulo I, or nothing if z is
    // outside the span.
    std::optional<std::vector<Poly<D>>> lift(const Vec<D>& z) const {
        Vec<D> nf = G.normal_form(z);
        if (!nf.empty() && int(nf[0].m.pos) < r) return std::nullopt;
        std::vector<Poly<D>> l(k);
        for (auto& t : nf) {
            Term<D> u{t.m, R->dom.neg(t.c)};
            int j = int(u.m.pos) - r;
            u.m.pos = 0;
            l[j].push_back(u);
        }
        for (auto& p : l) p = R->reduce(p);
        return l;
    }
};

template <class D>
Augmented<D> augment(const Ring<D>& R, int r, const std::vector<Vec<D>>& gens) {
    Augmented<D> A;
    A.R = &R;
    A.r = r;
    A.k = int(gens.size());
    std::vector<Vec<D>> aug;
    for (size_t j = 0; j < gens.size(); ++j) {
        Vec<D> v = gens[j];
        v.push_back(Term<D>{Monomial{}, R.dom.one()});
        v.back().m.pos = uint32_t(r + int(j));
        aug.push_back(std::move(v));
    }
    std::vector<bool> relpos(r + A.k, false);
    for (int i = 0; i < r; ++i) relpos[i] = true;
    A.G = groebner_basis(R, r + A.k, aug, relpos);
    return A;
}

// Syzygies of the columns of d modulo I.
template <class D>
std::vector<Vec<D>> syzygy_basis(const Ring<D>& R, const ModuleMap<D>& d) {
    return augment(R, d.tgt.rank(), d.cols).syzygies();
}

// Witness for a failed containment: an element of one side that is not in
// the span of the other.
template <class D>
struct EqualityResult {
    bool equal = true;
    Vec<D> witness;
    int side = 0;  // 1: left element outside right, 2: right outside left
};

template <class D>
EqualityResult<D> submodule_equal(const Ring<D>& R, int rank, const std::vector<Vec<D>>& A,
                                  const std::vector<Vec<D>>& B, const std::vector<Vec<D>>& rel = {}) {
    EqualityResult<D> res;
    auto with_rel = [&](const std::vector<Vec<D>>& X) {
        std::vector<Vec<D>> out = X;
        out.insert(out.end(), rel.begin(), rel.end());
        return out;
    };
    GroebnerBasis<D> GA = module_gb(R, rank, with_rel(A));
    GroebnerBasis<D> GB = module_gb(R, rank, with_rel(B));
    for (auto& a : A)
        if (!GB.normal_form(a).empty()) return {false, R.reduce(a), 1};
    for (auto& b : B)
        if (!GA.normal_form(b).empty()) return {false, R.reduce(b), 2};
    return res;
}

// ---------------------------------------------------------------------------
// Subquotients and complexes

// Sub/Rel inside a graded free module; Sub is everything when all is set.
// Rel is contained in Sub.
template <class D>
struct SubQ {
    FreeModule amb;
    bool all = true;
    std::vector<Vec<D>> sub;
    std::vector<Vec<D>> rel;

    std::vector<Vec<D>> gens(const Ring<D>& R) const { return all ? basis(R, amb.rank()) : sub; }
};

template <class D>
SubQ<D> free_term(const FreeModule& F) {
    SubQ<D> s;
    s.amb = F;
    return s;
}

template <class D>
SubQ<D> coker_module(const ModuleMap<D>& phi) {
    SubQ<D> s;
    s.amb = phi.tgt;
    s.rel = phi.cols;
    return s;
}

// Elements x of the ambient of `src` gens with f(x) in Rel(tgt): returns
// generators of {sum a_j s_j : sum a_j f(s_j) in Rel}.
template <class D>
std::vector<Vec<D>> preimage_of_rel(const Ring<D>& R, const ModuleMap<D>& f, const std::vector<Vec<D>>& src_gens,
                                    const std::vector<Vec<D>>& tgt_rel, bool src_is_basis) {
    std::vector<Vec<D>> cols;
    for (auto& s : src_gens) cols.push_back(apply_map(R, f, s));
    size_t k = cols.size();
    cols.insert(cols.end(), tgt_rel.begin(), tgt_rel.end());
    auto syz = augment(R, f.tgt.rank(), cols).syzygies();
    std::vector<Vec<D>> out;
    for (auto& s : syz) {
        auto comps = components(s, int(cols.size()));
        comps.resize(k);
        Vec<D> z = src_is_basis ? R.reduce(from_components(comps)) : combine(R, comps, src_gens);
        if (!z.empty()) out.push_back(std::move(z));
    }
    return out;
}

// Homological indexing: d[i] maps term i to term i-1 for 1 <= i <= n;
// d[0] is unused. Cohomological complexes (hom into a module) are stored
// reversed; coh_top maps a cohomological index c to position coh_top - c.
template <class D>
struct ChainComplex {
    std::string name;
    std::vector<SubQ<D>> terms;
    std::vector<ModuleMap<D>> d;
    bool cohomological = false;
    int coh_top = 0;

    int length() const { return int(terms.size()) - 1; }
    int position(int idx) const { return cohomological ? coh_top - idx : idx; }
};

template <class D>
struct ComplexCheck {
    bool ok = true;
    std::string message;
    Vec<D> witness;
    int rank = 0;
};

// d_i maps Sub_i into Sub_{i-1} and Rel_i into Rel_{i-1}; d_{i-1} d_i
// lands in Rel_{i-2}.
template <class D>
ComplexCheck<D> check_complex(const Ring<D>& R, const ChainComplex<D>& C) {
    int n = C.length();
    for (int i = 1; i <= n; ++i) {
        const auto& f = C.d[i];
        if (!f.src.same_shape(C.terms[i].amb) || !f.tgt.same_shape(C.terms[i - 1].amb))
            return {false, "differential " + std::to_string(i) + " does not match its terms", {}, 0};
    }
    for (int i = 1; i <= n; ++i) {
        const auto& f = C.d[i];
        const auto& T = C.terms[i];
        const auto& U = C.terms[i - 1];
        if (!U.all) {
            std::vector<Vec<D>> sr = U.sub;
            sr.insert(sr.end(), U.rel.begin(), U.rel.end());
            auto G = module_gb(R, U.amb.rank(), sr);
            for (auto& s : T.gens(R)) {
                Vec<D> img = apply_map(R, f, s);
                if (!G.normal_form(img).empty())
                    return {false, "d" + std::to_string(i) + " does not map into the submodule of term " +
                                       std::to_string(i - 1), img, U.amb.rank()};
            }
        }
        if (!T.rel.empty()) {
            auto G = module_gb(R, U.amb.rank(), U.rel);
            for (auto& s : T.rel) {
                Vec<D> img = apply_map(R, f, s);
                if (!G.normal_form(img).empty())
                    return {false, "d" + std::to_string(i) + " does not preserve relations", img, U.amb.rank()};
            }
        }
    }
    for (int i = 2; i <= n; ++i) {
        const auto& W = C.terms[i - 2];
        auto G = module_gb(R, W.amb.rank(), W.rel);
        for (auto& s : C.terms[i].gens(R)) {
            Vec<D> img = apply_map(R, C.d[i - 1], apply_map(R, C.d[i], s));
            if (!G.normal_form(img).empty())
                return {false, "d" + std::to_string(i - 1) + " * d" + std::to_string(i) + " is nonzero", img,
                        W.amb.rank()};
        }
    }
    return {};
}

template <class D>
struct Lift {
    Vec<D> cycle;       // kernel generator z
    Vec<D> preimage;    // l in the ambient of the next term
    Vec<D> rel_coeffs;  // coefficients on the relations of this term
};

template <class D>
struct HomologyResult {
    bool zero = true;
    std::vector<Vec<D>> cycles, boundaries;
    Vec<D> bad;
    std::vector<Lift<D>> lifts;
    int rank = 0;
};

template <class D>
std::vector<Vec<D>> cycles_at(const Ring<D>& R, const ChainComplex<D>& C, int i) {
    const auto& T = C.terms[i];
    if (i == 0) {
        std::vector<Vec<D>> z;
        for (auto& g : T.gens(R)) {
            auto r = R.reduce(g);
            if (!r.empty()) z.push_back(r);
        }
        return z;
    }
    return preimage_of_rel(R, C.d[i], T.gens(R), C.terms[i - 1].rel, T.all);
}

template <class D>
std::vector<Vec<D>> boundaries_at(const Ring<D>& R, const ChainComplex<D>& C, int i) {
    std::vector<Vec<D>> b;
    if (i + 1 <= C.length())
        for (auto& s : C.terms[i + 1].gens(R)) {
            auto v = apply_map(R, C.d[i + 1], s);
            if (!v.empty()) b.push_back(v);
        }
    for (auto& r : C.terms[i].rel) b.push_back(r);
    return b;
}

// Exact certificates: for every cycle z, d(l) + sum r_k rel_k - z reduces
// to the zero vector modulo I (termwise, after canonical reduction).
template <class D>
std::vector<Vec<D>> degree_part(const Ring<D>& R, const FreeModule& F, const std::vector<Vec<D>>& gens, int64_t d);

// With `degree` set, only the cycles of that internal degree are checked
// (generators over S_0 of the degree part of the cycle module).
template <class D>
HomologyResult<D> homology_is_zero(const Ring<D>& R, const ChainComplex<D>& C, int i,
                                   std::optional<int64_t> degree = std::nullopt) {
    if (i < 0 || i > C.length())
        throw InputError("homology index " + std::to_string(i) + " out of range for complex " + C.name);
    HomologyResult<D> res;
    res.rank = C.terms[i].amb.rank();
    res.cycles = cycles_at(R, C, i);
    if (degree) res.cycles = degree_part(R, C.terms[i].amb, res.cycles, *degree);
    res.boundaries = boundaries_at(R, C, i);
    if (res.cycles.empty()) return res;
    if (res.boundaries.empty()) {
        res.zero = false;
        res.bad = res.cycles[0];
        return res;
    }
    auto A = augment(R, res.rank, res.boundaries);
    size_t nb = 0;
    std::vector<Vec<D>> next_gens;
    if (i + 1 <= C.length()) {
        next_gens = C.terms[i + 1].gens(R);
        nb = 0;
        for (auto& s : next_gens)
            if (!apply_map(R, C.d[i + 1], s).empty()) ++nb;
    }
    for (auto& z : res.cycles) {
        auto l = A.lift(z);
        if (!l) {
            res.zero = false;
            res.bad = z;
            res.lifts.clear();
            return res;
        }
        Lift<D> lf;
        lf.cycle = z;
        // Map boundary coefficients back to the next term's ambient.
        std::vector<Poly<D>> pre;
        std::vector<Vec<D>> pre_gens;
        size_t idx = 0;
        for (auto& s : next_gens) {
            if (apply_map(R, C.d[i + 1], s).empty()) continue;
            pre.push_back((*l)[idx++]);
            pre_gens.push_back(s);
        }
        lf.preimage = combine(R, pre, pre_gens);
        std::vector<Poly<D>> rc(l->begin() + nb, l->end());
        lf.rel_coeffs = R.reduce(from_components(rc));
        // Re-verify exactly.
        Vec<D> back = i + 1 <= C.length() ? apply_map(R, C.d[i + 1], lf.preimage) : Vec<D>{};
        back = poly_add(R, back, combine(R, rc, C.terms[i].rel));
        Vec<D> diff = R.reduce(poly_sub(R, back, z));
        if (!diff.empty()) throw MathError("internal: homology lift failed re-verification");
        res.lifts.push_back(std::move(lf));
    }
    return res;
}

template <class D>
SubQ<D> homology_presentation(const Ring<D>& R, const ChainComplex<D>& C, int i) {
    SubQ<D> h;
    h.amb = C.terms[i].amb;
    h.all = false;
    h.sub = cycles_at(R, C, i);
    h.rel = boundaries_at(R, C, i);
    return h;
}

// ---------------------------------------------------------------------------
// Hom modules

// Hom(F, G) as a free module; position i*n + a holds the (a, i) entry.
inline FreeModule hom_ambient(const FreeModule& F, const FreeModule& G) {
    FreeModule H;
    H.name = "Hom(" + F.name + "," + G.name + ")";
    for (int i = 0; i < F.rank(); ++i)
        for (int a = 0; a < G.rank(); ++a) H.degs.push_back(G.degs[a] - F.degs[i]);
    return H;
}

template <class D>
Vec<D> vectorize(const ModuleMap<D>& f) {
    int n = f.tgt.rank();
    Vec<D> v;
    for (int i = 0; i < f.src.rank(); ++i)
        for (auto& t : f.cols[i]) {
            Term<D> u = t;
            u.m.pos = uint32_t(i * n) + t.m.pos;
            v.push_back(u);
        }
    return v;
}

template <class D>
ModuleMap<D> devectorize(const Vec<D>& v, const FreeModule& F, const FreeModule& G) {
    ModuleMap<D> f;
    f.src = F;
    f.tgt = G;
    f.cols.assign(F.rank(), {});
    int n = G.rank();
    for (auto& t : v) {
        Term<D> u = t;
        int i = int(t.m.pos) / n;
        u.m.pos = t.m.pos % n;
        f.cols[i].push_back(u);
    }
    return f;
}

// alpha |-> alpha * d as a map Hom(F, G) -> Hom(F', G) for d: F' -> F.
template <class D>
ModuleMap<D> precompose_map(const Ring<D>& R, const ModuleMap<D>& d, const FreeModule& G) {
    int n = G.rank();
    ModuleMap<D> m;
    m.name = "Hom(" + d.name + "," + G.name + ")";
    m.src = hom_ambient(d.tgt, G);
    m.tgt = hom_ambient(d.src, G);
    for (int i = 0; i < d.tgt.rank(); ++i)
        for (int a = 0; a < n; ++a) {
            std::vector<Term<D>> ts;
            for (int k = 0; k < d.src.rank(); ++k)
                for (auto& t : d.cols[k])
                    if (int(t.m.pos) == i) {
                        Term<D> u = t;
                        u.m.pos = uint32_t(k * n + a);
                        ts.push_back(u);
                    }
            m.cols.push_back(poly_from_terms(R, std::move(ts)));
        }
    return m;
}

// Relations of Hom(F, G/U): U placed in each column block.
template <class D>
std::vector<Vec<D>> hom_relations(const FreeModule& F, const FreeModule& G, const std::vector<Vec<D>>& U) {
    std::vector<Vec<D>> out;
    int n = G.rank();
    for (int i = 0; i < F.rank(); ++i)
        for (auto& u : U) {
            Vec<D> v = u;
            for (auto& t : v) t.m.pos += uint32_t(i * n);
            out.push_back(v);
        }
    return out;
}

// Homi(coker phi, G/U) inside Hom(F0, G), phi: F1 -> F0.
template <class D>
SubQ<D> hom_module(const Ring<D>& R, const ModuleMap<D>& phi, const FreeModule& G, const std::vector<Vec<D>>& U) {
    SubQ<D> h;
    h.amb = hom_ambient(phi.tgt, G);
    h.all = false;
    ModuleMap<D> pre = precompose_map(R, phi, G);
    h.sub = preimage_of_rel(R, pre, basis(R, h.amb.rank()), hom_relations<D>(phi.src, G, U), true);
    h.rel = hom_relations<D>(phi.tgt, G, U);
    return h;
}

// Cohomological complex Hom(F_., G/U) from a chain complex of free modules.
template <class D>
ChainComplex<D> hom_complex(const Ring<D>& R, const ChainComplex<D>& C, const FreeModule& G,
                            const std::vector<Vec<D>>& U, const std::string& name) {
    int n = C.length();
    ChainComplex<D> H;
    H.name = name;
    H.cohomological = true;
    H.coh_top = n;
    H.terms.resize(n + 1);
    H.d.resize(n + 1);
    for (int j = 0; j <= n; ++j) {
        const FreeModule& F = C.terms[n - j].amb;
        SubQ<D> t;
        t.amb = hom_ambient(F, G);
        t.rel = hom_relations<D>(F, G, U);
        H.terms[j] = t;
    }
    for (int j = 1; j <= n; ++j) H.d[j] = precompose_map(R, C.d[n - j + 1], G);
    return H;
}

// ---------------------------------------------------------------------------
// Weight-zero monoid, degree parts, annihilators and Hilbert values

// Minimal nonzero exponent vectors of weight 0. Minimal solutions of a
// single linear equation have coordinates bounded by max |w|.
template <class D>
std::vector<std::vector<int>> weight_zero_hilbert_basis(const Ring<D>& R) {
    int n = R.nvars();
    int64_t W = 1;
    for (auto w : R.weights) W = std::max<int64_t>(W, w < 0 ? -w : w);
    double count = 1;
    for (int i = 0; i < n; ++i) count *= double(W + 1);
    if (count > 5e6) throw MathError("weight-zero monoid too large to enumerate");
    std::vector<std::vector<int>> sols;
    std::vector<int> e(n, 0);
    std::function<void(int, int64_t)> rec = [&](int i, int64_t w) {
        if (i == n) {
            bool nz = false;
            for (int x : e) nz |= x > 0;
            if (nz && w == 0) sols.push_back(e);
            return;
        }
        for (int x = 0; x <= W; ++x) {
            e[i] = x;
            rec(i + 1, w + R.weights[i] * x);
        }
        e[i] = 0;
    };
    rec(0, 0);
    auto leq = [](const std::vector<int>& a, const std::vector<int>& b) {
        for (size_t i = 0; i < a.size(); ++i)
            if (a[i] > b[i]) return false;
        return true;
    };
    std::vector<std::vector<int>> hb;
    for (auto& s : sols) {
        bool minimal = true;
        for (auto& t : sols)
            if (&t != &s && t != s && leq(t, s)) {
                minimal = false;
                break;
            }
        if (minimal) hb.push_back(s);
    }
    return hb;
}

inline Monomial monomial_of(const std::vector<int>& e) {
    Monomial m;
    for (size_t i = 0; i < e.size(); ++i) m.e[i] = uint16_t(e[i]);
    m.refresh();
    return m;
}

// Monomials of weight w with no nonconstant weight-0 divisor.
template <class D>
std::vector<Monomial> minimal_monomials(const Ring<D>& R, int64_t w) {
    auto hb = weight_zero_hilbert_basis(R);
    std::vector<Monomial> hbm;
    for (auto& h : hb) hbm.push_back(monomial_of(h));
    int n = R.nvars();
    int64_t W = 1;
    for (auto x : R.weights) W = std::max<int64_t>(W, x < 0 ? -x : x);
    int64_t cap = (w < 0 ? -w : w) + int64_t(n) * W * W + W;
    std::vector<Monomial> out;
    Monomial m;
    std::function<void(int, int64_t)> rec = [&](int i, int64_t cw) {
        if (i == n) {
            if (cw == w) out.push_back(m);
            return;
        }
        int64_t lim = R.weights[i] == 0 ? 0 : cap;
        for (int64_t x = 0; x <= lim; ++x) {
            m.e[i] = uint16_t(x);
            m.refresh();
            bool bad = false;
            for (auto& h : hbm)
                if (divides(h, m)) {
                    bad = true;
                    break;
                }
            if (bad) break;
            rec(i + 1, cw + R.weights[i] * x);
        }
        m.e[i] = 0;
        m.refresh();
    };
    rec(0, 0);
    return out;
}

// Generators over S_0 of the degree-d part of the submodule spanned by gens.
template <class D>
std::vector<Vec<D>> degree_part(const Ring<D>& R, const FreeModule& F, const std::vector<Vec<D>>& gens, int64_t d) {
    std::vector<Vec<D>> out;
    for (auto& g : gens) {
        Vec<D> gr = R.reduce(g);
        if (gr.empty()) continue;
        int64_t dg = vec_degree(R, F, gr);
        for (auto& m : minimal_monomials(R, d - dg)) {
            Vec<D> v = R.reduce(poly_mul_term(R, gr, R.dom.one(), m));
            if (!v.empty()) out.push_back(std::move(v));
        }
    }
    return out;
}

// Ann(Sub/Rel): kernel of S -> (F/Rel)^k, 1 |-> (s_1, ..., s_k).
template <class D>
std::vector<Poly<D>> annihilator(const Ring<D>& R, const SubQ<D>& M) {
    auto gens = M.gens(R);
    int r = M.amb.rank();
    int k = int(gens.size());
    ModuleMap<D> f;
    f.src.degs = {0};
    f.tgt.degs.assign(size_t(r) * k, 0);
    Vec<D> col;
    for (int j = 0; j < k; ++j)
        for (auto& t : gens[j]) {
            Term<D> u = t;
            u.m.pos += uint32_t(j * r);
            col.push_back(u);
        }
    f.cols = {col};
    std::vector<Vec<D>> rel;
    for (int j = 0; j < k; ++j)
        for (auto& u : M.rel) {
            Vec<D> v = u;
            for (auto& t : v) t.m.pos += uint32_t(j * r);
            rel.push_back(v);
        }
    if (k == 0) return {poly_const(R, R.dom.one())};
    auto z = preimage_of_rel(R, f, {basis_vec(R, 0)}, rel, true);
    auto G = module_gb(R, 1, z);
    std::vector<Poly<D>> out;
    for (auto& g : G.elems) {
        auto r = R.reduce(g);
        if (!r.empty()) out.push_back(r);
    }
    return out;
}

// Presentation S^k/K of Sub/Rel with generator degrees.
template <class D>
struct Presentation {
    FreeModule free;
    std::vector<Vec<D>> kernel;
};

template <class D>
Presentation<D> present(const Ring<D>& R, const SubQ<D>& M) {
    Presentation<D> p;
    if (M.all) {
        p.free = M.amb;
        p.kernel = M.rel;
        return p;
    }
    ModuleMap<D> f;
    for (auto& s : M.sub) {
        Vec<D> sr = R.reduce(s);
        if (sr.empty()) continue;
        f.src.degs.push_back(vec_degree(R, M.amb, sr));
        f.cols.push_back(sr);
    }
    f.tgt = M.amb;
    p.free = f.src;
    p.kernel = preimage_of_rel(R, f, basis(R, f.src.rank()), M.rel, true);
    return p;
}

// dim_k of the degree-d piece of S^k/K over a field.
template <class D>
struct HilbertCounter {
    const Ring<D>* R;
    Presentation<D> P;
    GroebnerBasis<D> G;
    std::vector<std::vector<int>> hb;

    HilbertCounter(const Ring<D>& ring, Presentation<D> p) : R(&ring), P(std::move(p)) {
        if constexpr (!D::is_field) throw MathError("unsupported: Hilbert values need field coefficients");
        G = module_gb(ring, P.free.rank(), P.kernel);
        hb = weight_zero_hilbert_basis(ring);
    }

    // Smallest N with h^N divisible by a lead at position j, or -1.
    int nil_exponent(const std::vector<int>& h, int j) const {
        int best = -1;
        for (int k : G.by_pos[j]) {
            const Monomial& L = G.elems[k][0].m;
            int need = 0;
            bool ok = true;
            for (int i = 0; i < R->nvars(); ++i) {
                if (!L.e[i]) continue;
                if (!h[i]) {
                    ok = false;
                    break;
                }
                need = std::max(need, (L.e[i] + h[i] - 1) / h[i]);
            }
            if (ok && (best < 0 || need < best)) best = need;
        }
        return best;
    }

    uint64_t value(int64_t d) const {
        uint64_t total = 0;
        int n = R->nvars();
        int64_t W = 1;
        for (auto x : R->weights) W = std::max<int64_t>(W, x < 0 ? -x : x);
        for (int j = 0; j < P.free.rank(); ++j) {
            int64_t t = d - P.free.degs[j];
            bool unit = false;
            for (int k : G.by_pos[j]) unit |= G.elems[k][0].m.deg == 0;
            if (unit) continue;
            int64_t T = 1;
            for (auto& h : hb) {
                int N = nil_exponent(h, j);
                if (N < 0)
                    throw InfinitePieceError("graded piece of degree " + std::to_string(d) +
                                             " is infinite: a weight-zero monomial is not nilpotent at generator " +
                                             std::to_string(j + 1));
                int mx = 0;
                for (int x : h) mx = std::max(mx, x);
                T = std::max<int64_t>(T, int64_t(N) * mx);
            }
            int64_t cap = (t < 0 ? -t : t) + int64_t(n) * T * W + T;
            Monomial m;
            m.pos = uint32_t(j);
            std::function<void(int, int64_t)> rec = [&](int i, int64_t cw) {
                if (i == n) {
                    if (cw == t) ++total;
                    return;
                }
                for (int64_t x = 0; x <= cap; ++x) {
                    m.e[i] = uint16_t(x);
                    m.refresh();
                    if (x > 0 && G.find_reducer(m) >= 0) break;
                    rec(i + 1, cw + R->weights[i] * x);
                }
                m.e[i] = 0;
                m.refresh();
            };
            rec(0, 0);
        }
        return total;
    }
};

template <class D>
uint64_t hilbert_value(const Ring<D>& R, const SubQ<D>& M, int64_t d) {
    return HilbertCounter<D>(R, present(R, M)).value(d);
}

// Verdict of the cyclic-quotient comparison.
template <class D>
struct CyclicMatch {
    bool ok = true;
    std::string reason;
    Vec<D> generator;
    std::vector<Poly<D>> ann;
    EqualityResult<D> ann_cmp;
    int64_t bad_degree = 0;
    uint64_t have = 0, want = 0;
};

template <class D>
CyclicMatch<D> match_cyclic_quotient(const Ring<D>& R, const SubQ<D>& M, const std::vector<Poly<D>>& J, int64_t gdeg,
                                     int64_t bound, bool compare_hilbert) {
    CyclicMatch<D> res;
    int r = M.amb.rank();
    auto relgb = module_gb(R, r, M.rel);
    std::vector<Vec<D>> gens;
    for (auto& g : M.gens(R)) {
        Vec<D> gr = R.reduce(g);
        if (!relgb.normal_form(gr).empty()) gens.push_back(gr);
    }
    std::optional<Vec<D>> gen;
    for (auto& cand : gens) {
        if (vec_degree(R, M.amb, cand) != gdeg) continue;
        std::vector<Vec<D>> span = M.rel;
        span.push_back(cand);
        auto G = module_gb(R, r, span);
        bool all_in = true;
        for (auto& g : gens)
            if (!G.normal_form(g).empty()) {
                all_in = false;
                break;
            }
        if (all_in) {
            gen = cand;
            break;
        }
    }
    if (!gen) {
        res.ok = false;
        res.reason = gens.empty() ? "module is zero" : "no single generator of degree " + std::to_string(gdeg);
        return res;
    }
    res.generator = *gen;
    SubQ<D> cyc;
    cyc.amb = M.amb;
    cyc.all = false;
    cyc.sub = {*gen};
    cyc.rel = M.rel;
    res.ann = annihilator(R, cyc);
    std::vector<Vec<D>> Jv(J.begin(), J.end());
    res.ann_cmp = submodule_equal(R, 1, res.ann, Jv);
    if (!res.ann_cmp.equal) {
        res.ok = false;
        res.reason = "annihilator differs";
        return res;
    }
    if (compare_hilbert) {
        HilbertCounter<D> hm(R, present(R, M));
        Presentation<D> pq;
        pq.free.degs = {gdeg};
        pq.kernel = Jv;
        HilbertCounter<D> hq(R, pq);
        for (int64_t d = -bound; d <= bound; ++d) {
            if (((d - gdeg) % 2 + 2) % 2 != 0) continue;
            uint64_t a = hm.value(d), b = hq.value(d);
            if (a != b) {
                res.ok = false;
                res.reason = "Hilbert values differ";
                res.bad_degree = d;
                res.have = a;
                res.want = b;
                return res;
            }
        }
    }
    return res;
}

// MN = NM = f * I after reduction.
template <class D>
std::optional<std::string> verify_matrix_factorization(const Ring<D>& R, const ModuleMap<D>& M, const ModuleMap<D>& N,
                                                       const Poly<D>& f) {
    if (M.src.rank() != M.tgt.rank() || N.src.rank() != N.tgt.rank() || M.src.rank() != N.src.rank())
        throw MathError("matrix factorization needs square matrices of equal size");
    for (int pass = 0; pass < 2; ++pass) {
        ModuleMap<D> P = pass == 0 ? compose(R, M, N) : compose(R, N, M);
        for (int j = 0; j < P.src.rank(); ++j) {
            Vec<D> want = R.reduce(at_position(f, uint32_t(j)));
            if (!poly_equal(R, P.cols[j], want))
                return std::string(pass == 0 ? "M*N" : "N*M") + " column " + std::to_string(j + 1) + " is " +
                       vec_str(R, P.cols[j], P.tgt.rank());
        }
    }
    return std::nullopt;
}

}  // namespace wgr
