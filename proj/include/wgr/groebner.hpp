#pragma once

// Gröbner bases of submodules of P^rank, P the free polynomial ring of a
// Ring. Over a field: Buchberger with sugar selection, the coprime and
// chain criteria, reduced monic output. Over Z: strong bases built from
// S- and G-polynomials, minimal, auto-reduced, positive leads.
//
// The relation ideal of the ring can be adjoined at chosen positions, which
// realizes submodules of S^rank for S = P/I.

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "wgr/cache.hpp"
#include "wgr/ring.hpp"

namespace wgr {

template <class D>
struct GroebnerBasis {
    const Ring<D>* ring = nullptr;
    int rank = 1;
    std::vector<Poly<D>> elems;
    std::vector<std::vector<int>> by_pos;

    void index() {
        by_pos.assign(rank, {});
        for (size_t i = 0; i < elems.size(); ++i) by_pos[elems[i][0].m.pos].push_back(int(i));
    }

    // Reducer for term c*m: any divisor over a field; over Z the divisor of
    // least lead coefficient, so that remainders are canonical.
    int find_reducer(const Monomial& m) const {
        if (int(m.pos) >= rank) return -1;
        int best = -1;
        for (int k : by_pos[m.pos]) {
            const auto& lt = elems[k][0];
            if (!divides(lt.m, m)) continue;
            if constexpr (D::is_field) return k;
            else {
                if (best < 0 || cmp(lt.c, elems[best][0].c) < 0) best = k;
                if (lt.c == 1) return k;
            }
        }
        return best;
    }

    Poly<D> normal_form(const Poly<D>& f) const;
    bool contains(const Poly<D>& f) const { return normal_form(f).empty(); }
};

namespace detail {

// Full reduction of f by the elements of `basis` (indexed by position).
template <class D>
Poly<D> reduce_full(const Ring<D>& R, const GroebnerBasis<D>& G, Poly<D> f) {
    Poly<D> r;
    size_t start = 0;
    while (start < f.size()) {
        const Term<D>& t = f[start];
        int k = G.find_reducer(t.m);
        if (k < 0) {
            r.push_back(t);
            ++start;
            continue;
        }
        const Poly<D>& g = G.elems[k];
        Monomial q = quotient(t.m, g[0].m);
        q.pos = 0;
        if constexpr (D::is_field) {
            auto c = R.dom.is_one(g[0].c) ? t.c : R.dom.div(t.c, g[0].c);
            f = poly_sub_mul(R, f, c, q, g, start);
            start = 0;
        } else {
            auto c = R.dom.floor_div(t.c, g[0].c);
            if (R.dom.is_zero(c)) {
                r.push_back(t);
                ++start;
                continue;
            }
            f = poly_sub_mul(R, f, c, q, g, start);
            start = 0;
        }
    }
    return r;
}

template <class D>
void normalize_lead(const Ring<D>& R, Poly<D>& h) {
    if (h.empty()) return;
    if constexpr (D::is_field) {
        if (!R.dom.is_one(h[0].c)) h = poly_scale(R, h, R.dom.inv(h[0].c));
    } else {
        if (R.dom.sign(h[0].c) < 0) h = poly_neg(R, h);
    }
}

template <class D>
std::string serialize_poly_raw(const Ring<D>& R, const Poly<D>& p) {
    std::string s;
    for (auto& t : p) {
        s += std::to_string(t.m.pos);
        for (int i = 0; i < R.nvars(); ++i) s += " " + std::to_string(t.m.e[i]);
        s += " " + R.dom.str(t.c) + ";";
    }
    return s;
}

template <class D>
Poly<D> parse_poly_raw(const Ring<D>& R, const std::string& s) {
    Poly<D> p;
    std::istringstream in(s);
    std::string rec;
    while (std::getline(in, rec, ';')) {
        if (rec.empty()) continue;
        std::istringstream tin(rec);
        Term<D> t;
        tin >> t.m.pos;
        for (int i = 0; i < R.nvars(); ++i) {
            unsigned v;
            tin >> v;
            t.m.e[i] = uint16_t(v);
        }
        std::string cs;
        tin >> cs;
        if constexpr (D::kind == CoeffKind::FP) t.c = std::stoull(cs);
        else t.c = typename D::Elem(cs);
        t.m.refresh();
        p.push_back(t);
    }
    return p;
}

template <class D>
struct Pair {
    uint32_t sugar;
    Monomial lcm;
    int i, j;
    int kind;  // 0 = S-polynomial, 1 = G-polynomial
};

template <class D>
class Buchberger {
public:
    Buchberger(const Ring<D>& R, int rank) : R_(R), rank_(rank), pairs_(PairLess{&R}) {
        work_.ring = &R;
        work_.rank = rank;
        work_.by_pos.assign(rank, {});
    }

    void add_relation_block(const std::vector<Poly<D>>& rel_gb, uint32_t pos) {
        size_t first = work_.elems.size();
        for (auto& g : rel_gb) add_element(at_position(g, pos), true, first);
    }

    void add_input(Poly<D> h) {
        h = detail::reduce_full(R_, work_, std::move(h));
        if (!h.empty()) add_element(std::move(h), false, 0);
    }

    void run() {
        while (!pairs_.empty()) {
            Pair<D> p = *pairs_.begin();
            pairs_.erase(pairs_.begin());
            mark(p.i, p.j);
            if (p.kind == 0 && chain_criterion(p)) continue;
            Poly<D> h = p.kind == 0 ? spoly(p) : gpoly(p);
            h = detail::reduce_full(R_, work_, std::move(h));
            if (!h.empty()) add_element(std::move(h), false, 0, p.sugar);
        }
    }

    // Minimal, auto-reduced, normalized and sorted.
    GroebnerBasis<D> finish() {
        auto& E = work_.elems;
        std::vector<bool> keep(E.size(), true);
        for (size_t a = 0; a < E.size(); ++a) {
            for (size_t b = 0; b < E.size() && keep[a]; ++b) {
                if (a == b || !keep[b]) continue;
                if (lead_divides(E[b][0], E[a][0])) {
                    bool same = E[b][0].m == E[a][0].m && R_.dom.equal(E[b][0].c, E[a][0].c);
                    if (!same || b < a) keep[a] = false;
                }
            }
        }
        GroebnerBasis<D> G;
        G.ring = &R_;
        G.rank = rank_;
        for (size_t a = 0; a < E.size(); ++a)
            if (keep[a]) G.elems.push_back(E[a]);
        G.index();
        std::vector<Poly<D>> out;
        for (size_t a = 0; a < G.elems.size(); ++a) {
            Poly<D> tail(G.elems[a].begin() + 1, G.elems[a].end());
            Poly<D> red = detail::reduce_full(R_, G, tail);
            Poly<D> g{G.elems[a][0]};
            g.insert(g.end(), red.begin(), red.end());
            normalize_lead(R_, g);
            out.push_back(std::move(g));
        }
        std::sort(out.begin(), out.end(), [&](const Poly<D>& x, const Poly<D>& y) {
            return R_.cmp(x[0].m, y[0].m) < 0;
        });
        G.elems = std::move(out);
        G.index();
        return G;
    }

private:
    struct PairLess {
        const Ring<D>* R;
        bool operator()(const Pair<D>& a, const Pair<D>& b) const {
            if (a.sugar != b.sugar) return a.sugar < b.sugar;
            int c = R->cmp(a.lcm, b.lcm);
            if (c != 0) return c < 0;
            if (a.i != b.i) return a.i < b.i;
            if (a.j != b.j) return a.j < b.j;
            return a.kind < b.kind;
        }
    };

    const Ring<D>& R_;
    int rank_;
    GroebnerBasis<D> work_;
    std::vector<uint32_t> sugar_;
    std::vector<int> block_;  // relation block id or -1
    std::vector<std::vector<bool>> done_;
    std::set<Pair<D>, PairLess> pairs_;

    static uint32_t sugar_of(const Poly<D>& p) {
        uint32_t s = 0;
        for (auto& t : p) s = std::max(s, t.m.deg);
        return s;
    }

    bool lead_divides(const Term<D>& a, const Term<D>& b) const {
        if (a.m.pos != b.m.pos || !divides(a.m, b.m)) return false;
        if constexpr (D::is_field) return true;
        else return R_.dom.divides(a.c, b.c);
    }

    void mark(int i, int j) {
        done_[i][j] = true;
        done_[j][i] = true;
    }
    bool is_done(int i, int j) const { return done_[i][j]; }

    void add_element(Poly<D> h, bool relation, size_t block_first, uint32_t sugar = 0) {
        normalize_lead(R_, h);
        int idx = int(work_.elems.size());
        uint32_t sg = std::max(sugar, sugar_of(h));
        work_.elems.push_back(std::move(h));
        sugar_.push_back(sg);
        block_.push_back(relation ? int(block_first) : -1);
        for (auto& row : done_) row.push_back(false);
        done_.emplace_back(work_.elems.size(), false);
        const Poly<D>& g = work_.elems[idx];
        uint32_t pos = g[0].m.pos;
        work_.by_pos[pos].push_back(idx);
        for (int k : work_.by_pos[pos]) {
            if (k == idx) continue;
            if (block_[k] >= 0 && block_[k] == block_[idx]) {
                mark(k, idx);
                continue;
            }
            make_pairs(k, idx);
        }
    }

    void make_pairs(int i, int j) {
        const auto& fi = work_.elems[i];
        const auto& fj = work_.elems[j];
        Monomial L = lcm(fi[0].m, fj[0].m);
        uint32_t s = std::max(sugar_[i] + L.deg - fi[0].m.deg, sugar_[j] + L.deg - fj[0].m.deg);
        bool need_s = true;
        if (rank_ == 1 && coprime(fi[0].m, fj[0].m)) {
            if constexpr (D::is_field) need_s = false;
            else need_s = !R_.dom.is_one(R_.dom.gcd(fi[0].c, fj[0].c));
        }
        bool need_g = false;
        if constexpr (!D::is_field)
            need_g = !R_.dom.divides(fi[0].c, fj[0].c) && !R_.dom.divides(fj[0].c, fi[0].c);
        if (need_s) pairs_.insert(Pair<D>{s, L, i, j, 0});
        if (need_g) pairs_.insert(Pair<D>{s, L, i, j, 1});
        if (!need_s && !need_g) mark(i, j);
    }

    bool chain_criterion(const Pair<D>& p) const {
        const auto& ci = work_.elems[p.i][0].c;
        const auto& cj = work_.elems[p.j][0].c;
        for (int k : work_.by_pos[p.lcm.pos]) {
            if (k == p.i || k == p.j) continue;
            const auto& lk = work_.elems[k][0];
            if (!divides(lk.m, p.lcm)) continue;
            if constexpr (!D::is_field) {
                if (!R_.dom.divides(lk.c, R_.dom.lcm(ci, cj))) continue;
            }
            if (is_done(p.i, k) && is_done(p.j, k)) return true;
        }
        return false;
    }

    Poly<D> spoly(const Pair<D>& p) const {
        const auto& f = work_.elems[p.i];
        const auto& g = work_.elems[p.j];
        Monomial qf = quotient(p.lcm, f[0].m), qg = quotient(p.lcm, g[0].m);
        qf.pos = qg.pos = 0;
        if constexpr (D::is_field) {
            Poly<D> a = poly_mul_term(R_, f, R_.dom.inv(f[0].c), qf);
            return poly_sub_mul(R_, a, R_.dom.inv(g[0].c), qg, g);
        } else {
            auto l = R_.dom.lcm(f[0].c, g[0].c);
            Poly<D> a = poly_mul_term(R_, f, R_.dom.exact_div(l, f[0].c), qf);
            return poly_sub_mul(R_, a, R_.dom.exact_div(l, g[0].c), qg, g);
        }
    }

    Poly<D> gpoly(const Pair<D>& p) const {
        if constexpr (D::is_field) {
            return {};
        } else {
            const auto& f = work_.elems[p.i];
            const auto& g = work_.elems[p.j];
            Monomial qf = quotient(p.lcm, f[0].m), qg = quotient(p.lcm, g[0].m);
            qf.pos = qg.pos = 0;
            typename D::Elem d, u, v;
            R_.dom.gcdext(d, u, v, f[0].c, g[0].c);
            Poly<D> a = poly_mul_term(R_, f, u, qf);
            return poly_sub_mul(R_, a, R_.dom.neg(v), qg, g);
        }
    }
};

template <class D>
std::string gb_cache_key(const Ring<D>& R, int rank, const std::vector<bool>& relpos,
                         const std::vector<Poly<D>>& gens) {
    std::vector<std::string> gs;
    for (auto& g : gens) gs.push_back(serialize_poly_raw(R, g));
    std::sort(gs.begin(), gs.end());
    std::string key = "wgr-gb-v1\n" + R.descriptor() + "\nrank " + std::to_string(rank) + "\nrel ";
    for (bool b : relpos) key += b ? '1' : '0';
    key += "\n";
    for (auto& s : gs) key += s + "\n";
    return key;
}

}  // namespace detail

// Gröbner basis of the submodule of P^rank generated by gens together with
// I*e_p for every position p with relpos[p] set (all positions if relpos
// is empty).
template <class D>
GroebnerBasis<D> groebner_basis(const Ring<D>& R, int rank, const std::vector<Poly<D>>& gens,
                                std::vector<bool> relpos = {}, bool use_cache = true) {
    if (relpos.empty()) relpos.assign(rank, true);
    bool any_rel = R.has_relations() && std::find(relpos.begin(), relpos.end(), true) != relpos.end();
    std::string key;
    GBCache& cache = GBCache::instance();
    if (use_cache) {
        key = detail::gb_cache_key(R, rank, relpos, gens);
        if (auto hit = cache.get(key)) {
            GroebnerBasis<D> G;
            G.ring = &R;
            G.rank = rank;
            std::istringstream in(*hit);
            std::string line;
            while (std::getline(in, line))
                if (!line.empty()) G.elems.push_back(detail::parse_poly_raw(R, line));
            G.index();
            return G;
        }
    }
    detail::Buchberger<D> bb(R, rank);
    if (any_rel) {
        const auto& rg = R.relation_gb();
        for (int p = 0; p < rank; ++p)
            if (relpos[p]) bb.add_relation_block(rg.elems, uint32_t(p));
    }
    for (auto& g : gens) {
        for (auto& t : g)
            if (int(t.m.pos) >= rank) throw MathError("generator position exceeds module rank");
        if (!g.empty()) bb.add_input(g);
    }
    bb.run();
    GroebnerBasis<D> G = bb.finish();
    if (use_cache) {
        std::string val;
        for (auto& e : G.elems) val += detail::serialize_poly_raw(R, e) + "\n";
        cache.put(key, val);
    }
    return G;
}

template <class D>
Poly<D> GroebnerBasis<D>::normal_form(const Poly<D>& f) const {
    return detail::reduce_full(*ring, *this, f);
}

template <class D>
const GroebnerBasis<D>& Ring<D>::relation_gb() const {
    std::call_once(gb_once_, [this] {
        auto g = std::make_unique<GroebnerBasis<D>>(groebner_basis(*this, 1, relations, {false}, false));
        gb_ = std::move(g);
    });
    return *gb_;
}

template <class D>
Poly<D> Ring<D>::reduce(const Poly<D>& p) const {
    if (relations.empty() || p.empty()) return p;
    const auto& G = relation_gb();
    // Reduce each position separately against the rank-one relation basis.
    uint32_t maxpos = 0;
    for (auto& t : p) maxpos = std::max(maxpos, t.m.pos);
    if (maxpos == 0) return G.normal_form(p);
    Poly<D> out;
    size_t i = 0;
    while (i < p.size()) {
        uint32_t pos = p[i].m.pos;
        Poly<D> comp;
        while (i < p.size() && p[i].m.pos == pos) {
            Term<D> t = p[i++];
            t.m.pos = 0;
            comp.push_back(t);
        }
        Poly<D> red = G.normal_form(comp);
        for (auto& t : red) {
            t.m.pos = pos;
            out.push_back(t);
        }
    }
    return out;
}

}  // namespace wgr
