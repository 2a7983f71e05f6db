#include "wgr/model.hpp"

#include <algorithm>

namespace wgr {

namespace {

const std::set<std::string> kClaimKinds = {
    "matrix_factorization", "complex_is_complex",   "homology_zero_at",    "homology_matches_cyclic",
    "submodule_equality",   "hom_generators_match", "composition_identity", "annihilator_equals",
    "basis_of_quotient",    "identity_in_matrix_ring"};

}  // namespace

template <class D>
void Model<D>::fail_at(const SrcPos& p, const std::string& msg) const {
    throw ParseError(p.line ? p.line : 1, p.col ? p.col : 1, msg);
}

template <class D>
Model<D>::Model(const Document& doc, CoeffSpec spec) : doc_(doc), spec_(spec), dom_(make_domain<D>(spec)) {
    std::set<std::string> transposed;
    for (auto& s : doc.stmts)
        if (auto* t = std::get_if<TransposeStmt>(&s)) {
            if (!transposed.insert(t->name).second) fail_at(t->pos, "map " + t->name + " is transposed twice");
        }
    std::set<std::string> names;
    auto claim_name = [&](const SrcPos& p, const std::string& n) {
        if (!names.insert(n).second) fail_at(p, "name " + n + " is defined twice");
    };
    for (auto& s : doc.stmts) {
        if (auto* r = std::get_if<RingStmt>(&s)) {
            claim_name(r->pos, r->name);
            build_ring(*r);
        } else if (auto* f = std::get_if<FreeStmt>(&s)) {
            claim_name(f->pos, f->name);
            build_free(*f);
        } else if (auto* m = std::get_if<MapStmt>(&s)) {
            claim_name(m->pos, m->name);
            build_map(*m, transposed.count(m->name) > 0);
        } else if (auto* mo = std::get_if<ModuleStmt>(&s)) {
            claim_name(mo->pos, mo->name);
            module_stmts_[mo->name] = mo;
        } else if (auto* c = std::get_if<ComplexStmt>(&s)) {
            claim_name(c->pos, c->name);
            complex_stmts_[c->name] = c;
        } else if (auto* t = std::get_if<TermStmt>(&s)) {
            if (!complex_stmts_.count(t->complex)) fail_at(t->pos, "unknown complex " + t->complex);
            term_stmts_[t->complex].push_back(t);
        }
    }
    for (auto& s : doc.stmts)
        if (auto* t = std::get_if<TransposeStmt>(&s))
            if (!maps_.count(t->name)) fail_at(t->pos, "transpose-of names an unknown map " + t->name);
}

template <class D>
const Ring<D>& Model<D>::ring(const std::string& n) const {
    auto it = rings_.find(n);
    if (it == rings_.end()) throw InputError("unknown ring " + n);
    return *it->second;
}

template <class D>
const typename Model<D>::FreeEntry& Model<D>::free(const std::string& n) const {
    auto it = frees_.find(n);
    if (it == frees_.end()) throw InputError("unknown free module " + n);
    return it->second;
}

template <class D>
const typename Model<D>::MapEntry& Model<D>::map(const std::string& n) const {
    auto it = maps_.find(n);
    if (it == maps_.end()) throw InputError("unknown map " + n);
    return it->second;
}

template <class D>
bool Model<D>::extends(const std::string& big, const std::string& small) const {
    std::string cur = big;
    for (;;) {
        if (cur == small) return true;
        auto it = ring_base_.find(cur);
        if (it == ring_base_.end()) return false;
        cur = it->second;
    }
}

template <class D>
std::string Model<D>::join(const std::string& a, const std::string& b) const {
    if (a.empty()) return b;
    if (b.empty()) return a;
    if (extends(a, b)) return a;
    if (extends(b, a)) return b;
    throw InputError("objects over unrelated rings " + a + " and " + b);
}

template <class D>
void Model<D>::build_ring(const RingStmt& r) {
    try {
        if (!r.invert_base.empty()) {
            if (!rings_.count(r.invert_base)) fail_at(r.pos, "unknown ring " + r.invert_base);
            const Ring<D>& B = *rings_.at(r.invert_base);
            std::vector<std::string> vars = B.vars;
            std::vector<int64_t> ws = B.weights;
            std::vector<int> zi;
            for (size_t k = 0; k < r.inverted.size(); ++k) {
                std::string z = "z" + std::to_string(k + 1);
                while (std::find(vars.begin(), vars.end(), z) != vars.end()) z += "_";
                zi.push_back(int(vars.size()));
                vars.push_back(z);
                ws.push_back(0);
            }
            auto R = std::make_unique<Ring<D>>(r.name, vars, ws, dom_, B.order);
            R->relations = B.relations;
            for (size_t k = 0; k < r.inverted.size(); ++k) {
                Poly<D> f = B.reduce(eval_scalar(B, r.inverted[k]));
                if (f.empty()) fail_at(r.pos, "cannot invert zero in ring " + r.name);
                if (weight_of(B, f) != 0) fail_at(r.pos, "only elements of weight 0 can be inverted");
                Poly<D> rel = poly_sub(*R, poly_mul(*R, poly_var(*R, zi[k]), f), poly_const(*R, dom_.one()));
                R->relations.push_back(poly_from_terms(*R, rel));
            }
            ring_base_[r.name] = r.invert_base;
            rings_[r.name] = std::move(R);
        } else {
            CoeffSpec declared = parse_coeff_gma(r.coeff);
            if (declared.kind != CoeffKind::ZZ && !(declared == spec_))
                fail_at(r.pos, "ring " + r.name + " is declared over " + r.coeff + " and cannot be used over " +
                                   spec_.gma_name());
            OrderKind ord = r.order == "lex" ? OrderKind::Lex : OrderKind::DegRevLex;
            auto R = std::make_unique<Ring<D>>(r.name, r.vars, r.weights, dom_, ord);
            // Evaluate every relation before attaching any: evaluation reduces
            // modulo the relations, and the relation basis is computed once.
            std::vector<Poly<D>> rels;
            for (auto& e : r.relations) rels.push_back(eval_scalar(*R, e));
            for (size_t k = 0; k < rels.size(); ++k) {
                Poly<D> f = std::move(rels[k]);
                if (f.empty()) continue;
                try {
                    weight_of(*R, f);
                } catch (const InhomogeneousError& e) {
                    fail_at(r.pos, "relation " + std::to_string(k + 1) + " of ring " + r.name +
                                       " is not homogeneous: " + e.what());
                }
                R->relations.push_back(std::move(f));
            }
            rings_[r.name] = std::move(R);
        }
        ring_order_.push_back(r.name);
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        fail_at(r.pos, e.what());
    }
}

template <class D>
void Model<D>::build_free(const FreeStmt& f) {
    FreeEntry fe;
    fe.F.name = f.name;
    for (auto& s : f.parts) {
        if (!rings_.count(s.ring)) fail_at(f.pos, "unknown ring " + s.ring);
        if (fe.ring.empty()) fe.ring = s.ring;
        else if (fe.ring != s.ring) fail_at(f.pos, "summands of " + f.name + " lie over different rings");
        for (int64_t k = 0; k < s.power; ++k) fe.F.degs.push_back(-s.twist);
    }
    frees_[f.name] = fe;
}

template <class D>
Mat<D> Model<D>::to_mat(const ModuleMap<D>& f) {
    Mat<D> m;
    m.rows = f.tgt.rank();
    m.cols = f.src.rank();
    m.src = f.src;
    m.tgt = f.tgt;
    m.e.assign(size_t(m.rows) * m.cols, {});
    for (int j = 0; j < m.cols; ++j)
        for (auto& t : f.cols[j]) {
            Term<D> u = t;
            u.m.pos = 0;
            m.at(int(t.m.pos), j).push_back(u);
        }
    return m;
}

template <class D>
ModuleMap<D> Model<D>::to_map(const Mat<D>& m, const std::string& name) {
    ModuleMap<D> f;
    f.name = name;
    f.src = m.src;
    f.tgt = m.tgt;
    if (f.src.rank() != m.cols) f.src.degs.assign(m.cols, 0);
    if (f.tgt.rank() != m.rows) f.tgt.degs.assign(m.rows, 0);
    for (int j = 0; j < m.cols; ++j) {
        std::vector<Poly<D>> col;
        for (int i = 0; i < m.rows; ++i) col.push_back(m.at(i, j));
        f.cols.push_back(from_components(col));
    }
    return f;
}

template <class D>
Mat<D> Model<D>::identity(const Ring<D>& R, int n) const {
    Mat<D> m;
    m.rows = m.cols = n;
    m.e.assign(size_t(n) * n, {});
    for (int i = 0; i < n; ++i) m.at(i, i) = poly_const(R, dom_.one());
    return m;
}

template <class D>
void Model<D>::build_map(const MapStmt& ms, bool transposed) {
    if (!frees_.count(ms.src)) fail_at(ms.pos, "unknown free module " + ms.src);
    if (!frees_.count(ms.tgt)) fail_at(ms.pos, "unknown free module " + ms.tgt);
    const FreeEntry& S = frees_.at(ms.src);
    const FreeEntry& T = frees_.at(ms.tgt);
    std::string rn;
    try {
        rn = join(S.ring, T.ring);
    } catch (const InputError& e) {
        fail_at(ms.pos, e.what());
    }
    const Ring<D>& R = ring(rn);
    int lr = transposed ? S.F.rank() : T.F.rank();
    int lc = transposed ? T.F.rank() : S.F.rank();
    const std::string shape = std::to_string(lr) + "x" + std::to_string(lc);
    Mat<D> lit;
    lit.rows = lr;
    lit.cols = lc;
    lit.e.assign(size_t(lr) * lc, {});
    try {
        if (!ms.block) {
            if (int(ms.rows.size()) != lr) fail_at(ms.pos, "map " + ms.name + " needs a " + shape + " matrix");
            for (int i = 0; i < lr; ++i) {
                if (int(ms.rows[i].size()) != lc)
                    fail_at(ms.pos, "map " + ms.name + " needs a " + shape + " matrix, row " + std::to_string(i + 1) +
                                        " has " + std::to_string(ms.rows[i].size()) + " entries");
                for (int j = 0; j < lc; ++j) lit.at(i, j) = R.reduce(eval_scalar(R, ms.rows[i][j]));
            }
        } else {
            size_t nbr = ms.rows.size(), nbc = nbr ? ms.rows[0].size() : 0;
            std::vector<std::vector<Value<D>>> cells(nbr);
            std::vector<int> h(nbr, -1), w(nbc, -1);
            for (size_t bi = 0; bi < nbr; ++bi) {
                if (ms.rows[bi].size() != nbc) fail_at(ms.pos, "block rows of " + ms.name + " differ in length");
                for (size_t bj = 0; bj < nbc; ++bj) {
                    cells[bi].push_back(eval(R, ms.rows[bi][bj]));
                    const Value<D>& v = cells[bi].back();
                    if (v.scalar) continue;
                    if ((h[bi] >= 0 && h[bi] != v.m.rows) || (w[bj] >= 0 && w[bj] != v.m.cols))
                        fail_at(ms.pos, "block sizes of " + ms.name + " do not line up");
                    h[bi] = v.m.rows;
                    w[bj] = v.m.cols;
                }
            }
            for (auto& x : h) x = x < 0 ? 1 : x;
            for (auto& x : w) x = x < 0 ? 1 : x;
            int tr = 0, tc = 0;
            for (int x : h) tr += x;
            for (int x : w) tc += x;
            if (tr != lr || tc != lc)
                fail_at(ms.pos, "map " + ms.name + " needs a " + shape + " matrix, blocks give " + std::to_string(tr) +
                                    "x" + std::to_string(tc));
            int r0 = 0;
            for (size_t bi = 0; bi < nbr; ++bi) {
                int c0 = 0;
                for (size_t bj = 0; bj < nbc; ++bj) {
                    const Value<D>& v = cells[bi][bj];
                    if (v.scalar) {
                        if (!v.s.empty()) {
                            if (h[bi] != w[bj]) fail_at(ms.pos, "scalar block in " + ms.name + " is not square");
                            for (int k = 0; k < h[bi]; ++k) lit.at(r0 + k, c0 + k) = v.s;
                        }
                    } else {
                        for (int a = 0; a < v.m.rows; ++a)
                            for (int b = 0; b < v.m.cols; ++b) lit.at(r0 + a, c0 + b) = v.m.at(a, b);
                    }
                    c0 += w[bj];
                }
                r0 += h[bi];
            }
        }
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        fail_at(ms.pos, "map " + ms.name + ": " + e.what());
    }
    Mat<D> m;
    if (transposed) {
        m.rows = lc;
        m.cols = lr;
        m.e.assign(size_t(lr) * lc, {});
        for (int i = 0; i < lr; ++i)
            for (int j = 0; j < lc; ++j) m.at(j, i) = lit.at(i, j);
    } else {
        m = std::move(lit);
    }
    m.src = S.F;
    m.tgt = T.F;
    ModuleMap<D> f = to_map(m, ms.name);
    try {
        validate_map(R, f);
    } catch (const MathError& e) {
        fail_at(ms.pos, e.what());
    }
    maps_[ms.name] = MapEntry{rn, std::move(f)};
}

// ---------------------------------------------------------------------------
// Expressions

template <class D>
Mat<D> Model<D>::mat_mul(const Ring<D>& R, const Mat<D>& a, const Mat<D>& b) const {
    if (a.cols != b.rows)
        throw MathError("cannot compose: " + std::to_string(a.rows) + "x" + std::to_string(a.cols) + " after " +
                        std::to_string(b.rows) + "x" + std::to_string(b.cols));
    Mat<D> c;
    c.rows = a.rows;
    c.cols = b.cols;
    c.src = b.src;
    c.tgt = a.tgt;
    c.e.assign(size_t(c.rows) * c.cols, {});
    for (int i = 0; i < c.rows; ++i)
        for (int j = 0; j < c.cols; ++j) {
            Poly<D> s;
            for (int k = 0; k < a.cols; ++k)
                if (!a.at(i, k).empty() && !b.at(k, j).empty()) s = poly_add(R, s, poly_mul(R, a.at(i, k), b.at(k, j)));
            c.at(i, j) = R.reduce(s);
        }
    return c;
}

template <class D>
Mat<D> Model<D>::mat_add(const Ring<D>& R, const Mat<D>& a, const Mat<D>& b, bool sub) const {
    if (a.rows != b.rows || a.cols != b.cols) throw MathError("matrix sizes differ in a sum");
    Mat<D> c = a;
    for (size_t k = 0; k < c.e.size(); ++k) c.e[k] = R.reduce(sub ? poly_sub(R, a.e[k], b.e[k]) : poly_add(R, a.e[k], b.e[k]));
    return c;
}

template <class D>
Poly<D> Model<D>::det(const Ring<D>& R, const Mat<D>& a) const {
    if (a.rows != a.cols) throw MathError("determinant of a non-square matrix");
    int n = a.rows;
    if (n == 0) return poly_const(R, dom_.one());
    if (n == 1) return a.at(0, 0);
    Poly<D> s;
    for (int j = 0; j < n; ++j) {
        if (a.at(0, j).empty()) continue;
        Mat<D> minor;
        minor.rows = minor.cols = n - 1;
        for (int i = 1; i < n; ++i)
            for (int k = 0; k < n; ++k)
                if (k != j) minor.e.push_back(a.at(i, k));
        Poly<D> t = poly_mul(R, a.at(0, j), det(R, minor));
        s = j % 2 ? poly_sub(R, s, t) : poly_add(R, s, t);
    }
    return R.reduce(s);
}

template <class D>
Value<D> Model<D>::promote_add(const Ring<D>& R, const Value<D>& a, const Value<D>& b, bool sub) const {
    Value<D> r;
    if (a.scalar && b.scalar) {
        r.s = R.reduce(sub ? poly_sub(R, a.s, b.s) : poly_add(R, a.s, b.s));
        return r;
    }
    r.scalar = false;
    if (!a.scalar && !b.scalar) {
        r.m = mat_add(R, a.m, b.m, sub);
        return r;
    }
    // scalar s stands for s times the identity
    const Mat<D>& M = a.scalar ? b.m : a.m;
    if (M.rows != M.cols) throw MathError("scalar added to a non-square matrix");
    Mat<D> S = identity(R, M.rows);
    S.src = M.src;
    S.tgt = M.tgt;
    const Poly<D>& s = a.scalar ? a.s : b.s;
    for (int i = 0; i < M.rows; ++i) S.at(i, i) = s;
    r.m = a.scalar ? mat_add(R, S, M, sub) : mat_add(R, M, S, sub);
    return r;
}

template <class D>
Value<D> Model<D>::eval(const Ring<D>& R, const Expr& e) const {
    Value<D> v;
    switch (e.kind) {
        case Expr::Kind::Num:
            v.s = poly_const(R, dom_.from_mpz(mpz_class(e.text)));
            return v;
        case Expr::Kind::Name: {
            int vi = R.var_index(e.text);
            if (vi >= 0) {
                v.s = poly_var(R, vi);
                return v;
            }
            auto it = maps_.find(e.text);
            if (it != maps_.end()) {
                if (!extends(R.name, it->second.ring))
                    throw InputError("map " + e.text + " lives over ring " + it->second.ring + ", not over " + R.name);
                v.scalar = false;
                v.m = to_mat(it->second.map);
                return v;
            }
            if (e.text == "I") {
                v.s = poly_const(R, dom_.one());
                return v;
            }
            throw InputError("unknown name " + e.text + " in ring " + R.name);
        }
        case Expr::Kind::Neg: {
            Value<D> a = eval(R, e.args[0]);
            if (a.scalar) a.s = poly_neg(R, a.s);
            else
                for (auto& p : a.m.e) p = poly_neg(R, p);
            return a;
        }
        case Expr::Kind::Add:
        case Expr::Kind::Sub:
            return promote_add(R, eval(R, e.args[0]), eval(R, e.args[1]), e.kind == Expr::Kind::Sub);
        case Expr::Kind::Mul: {
            Value<D> a = eval(R, e.args[0]), b = eval(R, e.args[1]);
            if (a.scalar && b.scalar) {
                v.s = R.reduce(poly_mul(R, a.s, b.s));
                return v;
            }
            v.scalar = false;
            if (!a.scalar && !b.scalar) {
                v.m = mat_mul(R, a.m, b.m);
                return v;
            }
            v.m = a.scalar ? b.m : a.m;
            const Poly<D>& s = a.scalar ? a.s : b.s;
            for (auto& p : v.m.e) p = R.reduce(poly_mul(R, s, p));
            return v;
        }
        case Expr::Kind::Pow: {
            Value<D> a = eval(R, e.args[0]);
            int n = std::stoi(e.text);
            if (a.scalar) {
                v.s = poly_const(R, dom_.one());
                for (int k = 0; k < n; ++k) v.s = R.reduce(poly_mul(R, v.s, a.s));
                return v;
            }
            if (a.m.rows != a.m.cols) throw MathError("power of a non-square matrix");
            v.scalar = false;
            v.m = identity(R, a.m.rows);
            v.m.src = a.m.src;
            v.m.tgt = a.m.tgt;
            for (int k = 0; k < n; ++k) v.m = mat_mul(R, v.m, a.m);
            return v;
        }
        case Expr::Kind::Call: {
            if ((e.text == "trace" || e.text == "det" || e.text == "transpose") && e.args.size() == 1) {
                Mat<D> m = eval_matrix(R, e.args[0]);
                if (e.text == "transpose") {
                    v.scalar = false;
                    v.m.rows = m.cols;
                    v.m.cols = m.rows;
                    v.m.src = m.tgt;
                    v.m.tgt = m.src;
                    v.m.e.assign(m.e.size(), {});
                    for (int i = 0; i < m.rows; ++i)
                        for (int j = 0; j < m.cols; ++j) v.m.at(j, i) = m.at(i, j);
                    return v;
                }
                if (e.text == "det") {
                    v.s = det(R, m);
                    return v;
                }
                if (m.rows != m.cols) throw MathError("trace of a non-square matrix");
                for (int i = 0; i < m.rows; ++i) v.s = poly_add(R, v.s, m.at(i, i));
                v.s = R.reduce(v.s);
                return v;
            }
            throw InputError("unknown function " + e.text + " with " + std::to_string(e.args.size()) + " arguments");
        }
    }
    return v;
}

template <class D>
Poly<D> Model<D>::eval_scalar(const Ring<D>& R, const Expr& e) const {
    Value<D> v = eval(R, e);
    if (!v.scalar) throw InputError("expected a ring element, got a matrix: " + expr_str(e));
    return v.s;
}

template <class D>
Mat<D> Model<D>::eval_matrix(const Ring<D>& R, const Expr& e) const {
    Value<D> v = eval(R, e);
    if (v.scalar) throw InputError("expected a matrix: " + expr_str(e));
    return v.m;
}

// ---------------------------------------------------------------------------
// Modules and complexes

template <class D>
ModuleMap<D> Model<D>::presentation_map(const Ring<D>& R, const SubQ<D>& M) const {
    ModuleMap<D> phi;
    phi.name = "presentation";
    std::vector<Vec<D>> rels;
    if (M.all) {
        phi.tgt = M.amb;
        rels = M.rel;
    } else {
        Presentation<D> P = present(R, M);
        phi.tgt = P.free;
        rels = P.kernel;
    }
    for (auto& r : rels) {
        Vec<D> rr = R.reduce(r);
        if (rr.empty()) continue;
        phi.src.degs.push_back(vec_degree(R, phi.tgt, rr));
        phi.cols.push_back(rr);
    }
    return phi;
}

template <class D>
SubQ<D> Model<D>::hom_of(const Ring<D>& R, const SubQ<D>& M, const SubQ<D>& N) const {
    if (!N.all) throw InputError("the target of hom must be a quotient of a free module");
    return hom_module(R, presentation_map(R, M), N.amb, N.rel);
}

template <class D>
std::string Model<D>::ring_of(const std::string& name) {
    if (maps_.count(name)) return maps_.at(name).ring;
    if (frees_.count(name)) return frees_.at(name).ring;
    if (module_stmts_.count(name)) return module(name).ring;
    if (complex_stmts_.count(name)) return complex(name).ring;
    return "";
}

template <class D>
const typename Model<D>::ModEntry& Model<D>::module(const std::string& n) {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    auto it = modules_.find(n);
    if (it != modules_.end()) return *it->second;
    auto e = std::make_unique<ModEntry>();
    if (frees_.count(n)) {
        e->ring = frees_.at(n).ring;
        e->m = free_term<D>(frees_.at(n).F);
    } else {
        auto st = module_stmts_.find(n);
        if (st == module_stmts_.end()) throw InputError("unknown module " + n);
        const ModuleStmt& s = *st->second;
        try {
            if (s.kind == "coker" || s.kind == "kernel" || s.kind == "image") {
                const MapEntry& f = map(s.args[0]);
                const Ring<D>& R = ring(f.ring);
                e->ring = f.ring;
                if (s.kind == "coker") {
                    e->m = coker_module(f.map);
                } else if (s.kind == "kernel") {
                    e->m.amb = f.map.src;
                    e->m.all = false;
                    e->m.sub = syzygy_basis(R, f.map);
                } else {
                    e->m.amb = f.map.tgt;
                    e->m.all = false;
                    for (auto& c : f.map.cols) {
                        Vec<D> r = R.reduce(c);
                        if (!r.empty()) e->m.sub.push_back(r);
                    }
                }
            } else if (s.kind == "hom") {
                const ModEntry& M = module(s.args[0]);
                const ModEntry& N = module(s.args[1]);
                e->ring = join(M.ring, N.ring);
                e->m = hom_of(ring(e->ring), M.m, N.m);
                e->m.amb.name = n;
            } else {  // sum
                e->m.amb.name = n;
                bool all = true;
                std::vector<const ModEntry*> parts;
                for (auto& a : s.args) {
                    parts.push_back(&module(a));
                    e->ring = join(e->ring, parts.back()->ring);
                    all = all && parts.back()->m.all;
                }
                const Ring<D>& R = ring(e->ring);
                e->m.all = all;
                uint32_t off = 0;
                for (auto* p : parts) {
                    auto shift = [&](const Vec<D>& v) {
                        Vec<D> w = v;
                        for (auto& t : w) t.m.pos += off;
                        return w;
                    };
                    if (!all)
                        for (auto& g : p->m.gens(R)) e->m.sub.push_back(shift(g));
                    for (auto& r : p->m.rel) e->m.rel.push_back(shift(r));
                    for (auto d : p->m.amb.degs) e->m.amb.degs.push_back(d);
                    off += uint32_t(p->m.amb.rank());
                }
            }
            if (!s.over.empty()) {
                if (!rings_.count(s.over)) fail_at(s.pos, "unknown ring " + s.over);
                if (!extends(s.over, e->ring))
                    fail_at(s.pos, "ring " + s.over + " is not obtained from " + e->ring + " by inverting elements");
                e->ring = s.over;
            }
        } catch (const ParseError&) {
            throw;
        } catch (const InputError& ex) {
            fail_at(s.pos, "module " + n + ": " + ex.what());
        }
    }
    if (e->m.amb.name.empty()) e->m.amb.name = n;
    auto& ref = *e;
    modules_[n] = std::move(e);
    return ref;
}

template <class D>
const typename Model<D>::ComplexEntry& Model<D>::complex(const std::string& n) {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    auto it = complexes_.find(n);
    if (it != complexes_.end()) return *it->second;
    auto st = complex_stmts_.find(n);
    if (st == complex_stmts_.end()) throw InputError("unknown complex " + n);
    const ComplexStmt& s = *st->second;
    auto e = std::make_unique<ComplexEntry>();
    try {
        if (!s.is_hom) {
            ChainComplex<D>& C = e->c;
            C.d.resize(1);
            for (size_t k = 0; k < s.maps.size(); ++k) {
                const MapEntry& f = map(s.maps[k]);
                e->ring = join(e->ring, f.ring);
                if (k == 0) C.terms.push_back(free_term<D>(f.map.tgt));
                else if (!f.map.tgt.same_shape(C.d[k].src))
                    fail_at(s.pos, "map " + s.maps[k] + " does not end where " + s.maps[k - 1] + " starts");
                C.terms.push_back(free_term<D>(f.map.src));
                C.d.push_back(f.map);
            }
        } else {
            const ComplexEntry& B = complex(s.hom_of);
            if (B.c.cohomological) fail_at(s.pos, "hom of a cohomological complex is not supported");
            for (auto& t : B.c.terms)
                if (!t.all || !t.rel.empty()) fail_at(s.pos, "hom needs a complex of free modules");
            const ModEntry& N = module(s.hom_into);
            e->ring = join(B.ring, N.ring);
            if (!N.m.all) fail_at(s.pos, "the target of hom must be a quotient of a free module");
            e->c = hom_complex(ring(e->ring), B.c, N.m.amb, N.m.rel, n);
        }
        e->c.name = n;
        for (const TermStmt* t : term_stmts_[n]) {
            int p = e->c.position(t->index);
            if (p < 0 || p > e->c.length()) fail_at(t->pos, "term index out of range for complex " + n);
            const ModEntry& M = module(t->module);
            e->ring = join(e->ring, M.ring);
            if (!M.m.amb.same_shape(e->c.terms[p].amb))
                fail_at(t->pos, "module " + t->module + " does not live in term " + std::to_string(t->index) + " of " + n);
            e->c.terms[p] = M.m;
        }
    } catch (const ParseError&) {
        throw;
    } catch (const InputError& ex) {
        fail_at(s.pos, "complex " + n + ": " + ex.what());
    }
    auto& ref = *e;
    complexes_[n] = std::move(e);
    return ref;
}

template class Model<Integers>;
template class Model<Rationals>;
template class Model<PrimeField>;

// ---------------------------------------------------------------------------

namespace {

template <class D>
void force_all(const Document& doc, CoeffSpec spec) {
    Model<D> m(doc, spec);
    for (auto& s : doc.stmts) {
        if (auto* mo = std::get_if<ModuleStmt>(&s)) m.module(mo->name);
        if (auto* c = std::get_if<ComplexStmt>(&s)) m.complex(c->name);
    }
}

}  // namespace

Document load_gma(const std::string& text) {
    Document doc = parse_gma(text);
    CoeffSpec spec;
    std::set<std::string> ids;
    for (auto& s : doc.stmts) {
        if (auto* r = std::get_if<RingStmt>(&s)) {
            if (r->invert_base.empty()) {
                CoeffSpec c;
                try {
                    c = parse_coeff_gma(r->coeff);
                } catch (const InputError& e) {
                    throw ParseError(r->pos.line, r->pos.col, e.what());
                }
                if (c.kind != CoeffKind::ZZ) spec = c;
            }
        }
        if (auto* sc = std::get_if<ScenarioStmt>(&s)) {
            if (!ids.insert(sc->id).second)
                throw ParseError(sc->pos.line, sc->pos.col, "scenario " + sc->id + " is defined twice");
            if (sc->coeff.empty()) throw ParseError(sc->pos.line, sc->pos.col, "scenario " + sc->id + " has no coeff line");
            parse_coeff_gma(sc->coeff);
            std::set<std::string> cids;
            for (auto& c : sc->claims) {
                if (!kClaimKinds.count(c.kind))
                    throw ParseError(c.pos.line, c.pos.col, "unknown claim kind " + c.kind);
                if (!cids.insert(c.id).second)
                    throw ParseError(c.pos.line, c.pos.col, "claim " + c.id + " is defined twice in " + sc->id);
            }
        }
    }
    switch (spec.kind) {
        case CoeffKind::ZZ: force_all<Integers>(doc, spec); break;
        case CoeffKind::QQ: force_all<Rationals>(doc, spec); break;
        case CoeffKind::FP: force_all<PrimeField>(doc, spec); break;
    }
    return doc;
}

}  // namespace wgr
