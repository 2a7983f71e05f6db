// Claim checkers. Each claim body is parsed against the model of its
// domain; the checker returns a verdict, a message and a witness.

#include <chrono>
#include <regex>
#include <set>

#include "wgr/model.hpp"
#include "wgr/runner.hpp"

namespace wgr {

template <class M>
M& ModelPool::get(const CoeffSpec& spec) {
    std::lock_guard<std::mutex> lock(mu_);
    auto& slot = models_[spec.cli_name()];
    if (!slot) slot = std::make_shared<M>(doc_, spec);
    return *static_cast<M*>(slot.get());
}

CoeffSpec claim_domain(const ScenarioStmt& s, const ClaimStmt& c, const std::optional<CoeffSpec>& override_coeff) {
    if (override_coeff) return *override_coeff;
    if (auto* v = c.option("coeff")) return parse_coeff_gma(*v);
    return parse_coeff_gma(s.coeff);
}

namespace {

using nlohmann::json;

struct Verdict {
    bool pass = true;
    std::string message;
    json witness;
};

int64_t parse_int_option(const ClaimStmt& c, const std::string& key, int64_t dflt) {
    const std::string* v = c.option(key);
    if (!v) return dflt;
    try {
        size_t used = 0;
        int64_t x = std::stoll(*v, &used);
        if (used != v->size()) throw std::invalid_argument("trailing");
        return x;
    } catch (const std::exception&) {
        throw InputError("option " + key + " expects an integer, got '" + *v + "'");
    }
}

template <class D>
class Checker {
public:
    Checker(Model<D>& m, const ClaimStmt& c, const RunConfig& cfg) : M(m), C(c), cfg_(cfg) {}

    Verdict run() {
        const std::string& k = C.kind;
        if (k == "matrix_factorization") return matrix_factorization();
        if (k == "complex_is_complex") return complex_is_complex();
        if (k == "homology_zero_at") return homology_zero_at();
        if (k == "homology_matches_cyclic") return homology_matches_cyclic();
        if (k == "submodule_equality") return submodule_equality();
        if (k == "hom_generators_match") return hom_generators_match();
        if (k == "composition_identity" || k == "identity_in_matrix_ring") return identities();
        if (k == "annihilator_equals") return annihilator_equals();
        if (k == "basis_of_quotient") return basis_of_quotient();
        throw InputError("unknown claim kind " + k);
    }

private:
    Model<D>& M;
    const ClaimStmt& C;
    const RunConfig& cfg_;

    // Ring of the claim: the largest ring among the objects named in the body.
    const Ring<D>& claim_ring() {
        static const std::regex word("[A-Za-z_][A-Za-z0-9_]*");
        std::string rn;
        for (auto it = std::sregex_iterator(C.body.begin(), C.body.end(), word); it != std::sregex_iterator(); ++it) {
            std::string name = it->str();
            if (M.has_ring(name) && C.kind == "basis_of_quotient") return M.ring(name);
            if (!(M.has_map(name) || M.has_module(name) || M.has_complex(name))) continue;
            rn = M.join(rn, M.ring_of(name));
        }
        if (rn.empty()) {
            auto names = M.ring_names();
            if (names.empty()) throw InputError("document defines no ring");
            rn = names.front();
        }
        return M.ring(rn);
    }

    std::string vs(const Ring<D>& R, const Vec<D>& v, int rank) { return vec_str(R, v, rank); }

    // ---- matrix_factorization: M, N, f
    Verdict matrix_factorization() {
        BodyLexer lx(C.body);
        std::string a = lx.ident();
        lx.expect(",");
        std::string b = lx.ident();
        lx.expect(",");
        Expr fe = lx.expr();
        if (!lx.at_end()) lx.fail("trailing input");
        const Ring<D>& R = claim_ring();
        Poly<D> f = R.reduce(M.eval_scalar(R, fe));
        auto bad = verify_matrix_factorization(R, M.map(a).map, M.map(b).map, f);
        Verdict v;
        v.witness = {{"f", poly_str(R, f)}};
        if (bad) {
            v.pass = false;
            v.message = *bad;
        }
        return v;
    }

    // ---- complex_is_complex: C
    Verdict complex_is_complex() {
        BodyLexer lx(C.body);
        std::string name = lx.ident();
        if (!lx.at_end()) lx.fail("trailing input");
        auto& E = M.complex(name);
        const Ring<D>& R = M.ring(E.ring);
        auto chk = check_complex(R, E.c);
        Verdict v;
        v.witness = {{"length", E.c.length()}};
        if (!chk.ok) {
            v.pass = false;
            v.message = chk.message;
            if (!chk.witness.empty()) v.witness["element"] = vs(R, chk.witness, chk.rank);
        }
        return v;
    }

    // ---- homology_zero_at: C at i, j, ...
public:
    struct HomologyParts {
        std::string complex;
        std::vector<int> at;
    };
    static HomologyParts parse_homology_body(const std::string& body) {
        BodyLexer lx(body);
        HomologyParts h;
        h.complex = lx.ident();
        lx.expect("at");
        h.at.push_back(int(lx.integer()));
        while (lx.accept(",")) h.at.push_back(int(lx.integer()));
        if (!lx.at_end()) lx.fail("trailing input");
        return h;
    }

    Verdict homology_zero_at() {
        HomologyParts h = parse_homology_body(C.body);
        auto& E = M.complex(h.complex);
        const Ring<D>& R = M.ring(E.ring);
        std::optional<int64_t> degree;
        if (C.option("degree")) degree = parse_int_option(C, "degree", 0);
        Verdict v;
        v.witness = json::array();
        for (int idx : h.at) {
            int pos = E.c.position(idx);
            if (pos < 0 || pos > E.c.length())
                throw InputError("index " + std::to_string(idx) + " is outside complex " + h.complex);
            auto res = homology_is_zero(R, E.c, pos, degree);
            json w = {{"index", idx}, {"zero", res.zero}, {"cycles", res.cycles.size()},
                      {"boundaries", res.boundaries.size()}};
            if (degree) w["degree"] = *degree;
            if (!res.zero) {
                v.pass = false;
                w["unbounded_cycle"] = vs(R, res.bad, res.rank);
                if (v.message.empty())
                    v.message = "homology at " + std::to_string(idx) + " is nonzero: cycle " + vs(R, res.bad, res.rank) +
                                " is not a boundary";
            } else if (cfg_.witnesses) {
                json lifts = json::array();
                int next_rank = pos + 1 <= E.c.length() ? E.c.terms[pos + 1].amb.rank() : 0;
                for (auto& l : res.lifts)
                    lifts.push_back({{"cycle", vs(R, l.cycle, res.rank)}, {"preimage", vs(R, l.preimage, next_rank)}});
                w["lifts"] = lifts;
            }
            v.witness.push_back(w);
        }
        return v;
    }

private:
    // Module operand: a module name or H(C, i).
    std::pair<std::string, SubQ<D>> module_operand(BodyLexer& lx) {
        std::string name = lx.ident();
        if (name == "H" && lx.peek() == '(') {
            lx.expect("(");
            std::string cn = lx.ident();
            lx.expect(",");
            int idx = int(lx.integer());
            lx.expect(")");
            auto& E = M.complex(cn);
            int pos = E.c.position(idx);
            if (pos < 0 || pos > E.c.length()) throw InputError("index outside complex " + cn);
            return {E.ring, homology_presentation(M.ring(E.ring), E.c, pos)};
        }
        auto& e = M.module(name);
        return {e.ring, e.m};
    }

    // (e1, e2, ...) where entries(expr) expands to the entries of a matrix.
    std::vector<Poly<D>> ideal_list(BodyLexer& lx, const Ring<D>& R) {
        std::vector<Poly<D>> out;
        lx.expect("(");
        if (lx.accept(")")) return out;
        do {
            Expr e = lx.expr();
            if (e.kind == Expr::Kind::Call && e.text == "entries" && e.args.size() == 1) {
                Mat<D> m = M.eval_matrix(R, e.args[0]);
                for (auto& p : m.e)
                    if (!p.empty()) out.push_back(p);
            } else {
                Poly<D> p = R.reduce(M.eval_scalar(R, e));
                if (!p.empty()) out.push_back(p);
            }
        } while (lx.accept(","));
        lx.expect(")");
        return out;
    }

    json poly_list(const Ring<D>& R, const std::vector<Poly<D>>& ps) {
        json a = json::array();
        for (auto& p : ps) a.push_back(poly_str(R, p));
        return a;
    }

    // ---- homology_matches_cyclic: <module> ~ (J) gdeg g
    Verdict homology_matches_cyclic() {
        BodyLexer lx(C.body);
        auto [rn, mod] = module_operand(lx);
        const Ring<D>& R = M.ring(rn);
        lx.expect("~");
        std::vector<Poly<D>> J = ideal_list(lx, R);
        lx.expect("gdeg");
        int64_t gdeg = lx.integer();
        if (!lx.at_end()) lx.fail("trailing input");
        const std::string* hopt = C.option("hilbert");
        bool hilbert_off = hopt && *hopt == "off";
        const std::string* values = C.option("values");
        if (values && !D::is_field)
            throw InputError("unsupported: Hilbert values need field coefficients, claim runs over " + M.spec().cli_name());
        bool compare = D::is_field && !hilbert_off;
        auto res = match_cyclic_quotient(R, mod, J, gdeg, cfg_.max_degree, compare);
        Verdict v;
        v.witness = {{"generator", res.generator.empty() ? "none" : vs(R, res.generator, mod.amb.rank())},
                     {"annihilator", poly_list(R, res.ann)},
                     {"hilbert_compared", compare},
                     {"degree_bound", cfg_.max_degree}};
        if (!res.ok) {
            v.pass = false;
            v.message = res.reason;
            if (!res.ann_cmp.equal)
                v.witness["annihilator_witness"] = {{"element", poly_str(R, res.ann_cmp.witness)},
                                                    {"side", res.ann_cmp.side == 1 ? "annihilator" : "claimed"}};
            if (res.reason == "Hilbert values differ") {
                v.witness["degree"] = res.bad_degree;
                v.witness["module_value"] = res.have;
                v.witness["quotient_value"] = res.want;
                v.message += " in degree " + std::to_string(res.bad_degree) + ": " + std::to_string(res.have) +
                             " vs " + std::to_string(res.want);
            }
            return v;
        }
        if (values) {
            if constexpr (D::is_field) {
                HilbertCounter<D> hc(R, present(R, mod));
                json table = json::object();
                std::istringstream in(*values);
                std::string item;
                while (in >> item) {
                    auto colon = item.find(':');
                    if (colon == std::string::npos) throw InputError("values expects degree:value pairs");
                    int64_t d = std::stoll(item.substr(0, colon));
                    uint64_t want = std::stoull(item.substr(colon + 1));
                    uint64_t have = hc.value(d);
                    table[std::to_string(d)] = have;
                    if (have != want && v.pass) {
                        v.pass = false;
                        v.message = "Hilbert value in degree " + std::to_string(d) + " is " + std::to_string(have) +
                                    ", expected " + std::to_string(want);
                    }
                }
                v.witness["values"] = table;
            }
        }
        return v;
    }

    // ---- generator sets for submodule comparisons
    struct GenSet {
        bool has_amb = false;
        FreeModule amb;
        std::vector<Vec<D>> gens, rel;
        std::string what;
    };

    ModuleMap<D> map_term(BodyLexer& lx, const Ring<D>& R) {
        std::string name = lx.ident();
        if (name == "hcat" && lx.peek() == '(') {
            lx.expect("(");
            std::vector<ModuleMap<D>> parts;
            do parts.push_back(map_term(lx, R));
            while (lx.accept(","));
            lx.expect(")");
            ModuleMap<D> h = parts[0];
            h.name = "hcat";
            for (size_t k = 1; k < parts.size(); ++k) {
                if (!parts[k].tgt.same_shape(h.tgt)) throw InputError("hcat of maps with different targets");
                for (auto d : parts[k].src.degs) h.src.degs.push_back(d);
                for (auto& c : parts[k].cols) h.cols.push_back(c);
            }
            return h;
        }
        (void)R;
        return M.map(name).map;
    }

    GenSet genset(BodyLexer& lx, const Ring<D>& R) {
        GenSet g;
        std::string head = lx.ident();
        bool call = lx.peek() == '(';
        if (head == "zero" && !call) {
            g.what = "zero";
            return g;
        }
        if (!call) {
            auto& e = M.module(head);
            g.has_amb = true;
            g.amb = e.m.amb;
            for (auto& x : e.m.gens(R)) g.gens.push_back(x);
            g.rel = e.m.rel;
            g.what = head;
            return g;
        }
        lx.expect("(");
        if (head == "image") {
            ModuleMap<D> f = map_term(lx, R);
            g.has_amb = true;
            g.amb = f.tgt;
            for (auto& c : f.cols) {
                Vec<D> r = R.reduce(c);
                if (!r.empty()) g.gens.push_back(r);
            }
        } else if (head == "kernel") {
            ModuleMap<D> f = map_term(lx, R);
            g.has_amb = true;
            g.amb = f.src;
            if (lx.accept("mod")) {
                std::string mn = lx.ident();
                auto& e = M.module(mn);
                if (!e.m.amb.same_shape(f.tgt)) throw InputError("module " + mn + " is not a quotient of the target");
                g.gens = preimage_of_rel(R, f, basis(R, f.src.rank()), e.m.rel, true);
            } else {
                g.gens = syzygy_basis(R, f);
            }
        } else if (head == "hom") {
            std::string a = lx.ident();
            lx.expect(",");
            std::string b = lx.ident();
            SubQ<D> h = M.hom_of(R, M.module(a).m, M.module(b).m);
            g.has_amb = true;
            g.amb = h.amb;
            g.gens = h.sub;
            g.rel = h.rel;
        } else if (head == "maps") {
            std::vector<ModuleMap<D>> fs;
            do fs.push_back(map_term(lx, R));
            while (lx.accept(","));
            g.has_amb = true;
            g.amb = hom_ambient(fs[0].src, fs[0].tgt);
            for (auto& f : fs) {
                if (!f.src.same_shape(fs[0].src) || !f.tgt.same_shape(fs[0].tgt))
                    throw InputError("maps(...) needs maps with equal source and target");
                g.gens.push_back(R.reduce(vectorize(f)));
            }
        } else if (head == "degree") {
            GenSet inner = genset(lx, R);
            lx.expect(",");
            int64_t d = lx.integer();
            if (!inner.has_amb) throw InputError("degree(...) of the zero set");
            g = inner;
            g.gens = degree_part(R, inner.amb, inner.gens, d);
        } else {
            lx.fail("unknown generator set " + head);
        }
        lx.expect(")");
        g.what = head;
        return g;
    }

    Verdict compare_sets(const Ring<D>& R, GenSet a, GenSet b) {
        if (!a.has_amb && !b.has_amb) return {};
        if (!a.has_amb) a.amb = b.amb;
        if (!b.has_amb) b.amb = a.amb;
        if (a.amb.degs != b.amb.degs) throw InputError("the two sides live in different free modules");
        std::vector<Vec<D>> rel = a.rel;
        rel.insert(rel.end(), b.rel.begin(), b.rel.end());
        auto res = submodule_equal(R, a.amb.rank(), a.gens, b.gens, rel);
        Verdict v;
        v.witness = {{"left_generators", a.gens.size()}, {"right_generators", b.gens.size()}};
        if (!res.equal) {
            v.pass = false;
            v.message = std::string(res.side == 1 ? "left" : "right") + " element " +
                        vs(R, res.witness, a.amb.rank()) + " is not in the span of the other side";
            v.witness["element"] = vs(R, res.witness, a.amb.rank());
            v.witness["side"] = res.side == 1 ? "left" : "right";
        }
        return v;
    }

    // ---- submodule_equality: X = Y
    Verdict submodule_equality() {
        const Ring<D>& R = claim_ring();
        BodyLexer lx(C.body);
        GenSet a = genset(lx, R);
        lx.expect("=");
        GenSet b = genset(lx, R);
        if (!lx.at_end()) lx.fail("trailing input");
        return compare_sets(R, a, b);
    }

    // ---- hom_generators_match: hom(A, B) = maps(f, ...)
    Verdict hom_generators_match() {
        const Ring<D>& R = claim_ring();
        BodyLexer lx(C.body);
        GenSet h = genset(lx, R);
        if (h.what != "hom") lx.fail("left side must be hom(A, B)");
        lx.expect("=");
        GenSet f = genset(lx, R);
        if (f.what != "maps") lx.fail("right side must be maps(...)");
        if (!lx.at_end()) lx.fail("trailing input");
        Verdict v;
        json degs = json::array();
        if (C.option("degree")) {
            int64_t d = parse_int_option(C, "degree", 0);
            for (auto& g : f.gens) {
                if (g.empty()) continue;
                int64_t gd = vec_degree(R, f.amb, g);
                degs.push_back(gd);
                if (gd != d) {
                    v.pass = false;
                    v.message = "listed map " + vs(R, g, f.amb.rank()) + " has degree " + std::to_string(gd) +
                                ", expected " + std::to_string(d);
                    v.witness = {{"degrees", degs}};
                    return v;
                }
            }
            h.gens = degree_part(R, h.amb, h.gens, d);
        }
        v = compare_sets(R, h, f);
        v.witness["degrees"] = degs;
        if (!v.pass) return v;
        if (parse_int_option(C, "free", 0) == 1) {
            if (f.gens.size() != 1) {
                v.pass = false;
                v.message = "freeness of rank one needs exactly one listed generator";
                return v;
            }
            SubQ<D> one;
            one.amb = h.amb;
            one.all = false;
            one.sub = f.gens;
            one.rel = h.rel;
            auto ann = annihilator(R, one);
            v.witness["annihilator"] = poly_list(R, ann);
            if (!ann.empty()) {
                v.pass = false;
                v.message = "generator has nonzero annihilator " + poly_str(R, ann[0]) + ", not free";
            }
        }
        return v;
    }

    // ---- composition_identity / identity_in_matrix_ring: lhs = rhs [in M] ; ...
    Verdict identities() {
        const Ring<D>& R = claim_ring();
        Verdict v;
        v.witness = json::array();
        BodyLexer lx(C.body);
        int k = 0;
        do {
            ++k;
            Expr lhs = lx.expr();
            lx.expect("=");
            Expr rhs = lx.expr();
            std::string in;
            if (lx.accept("in")) in = lx.ident();
            Value<D> diff = M.eval(R, Expr{Expr::Kind::Sub, "", {lhs, rhs}});
            json w = {{"equation", expr_str(lhs) + " = " + expr_str(rhs) + (in.empty() ? "" : " in " + in)}};
            bool ok = true;
            std::string resid;
            if (diff.scalar) {
                ok = diff.s.empty();
                resid = poly_str(R, diff.s);
            } else {
                ModuleMap<D> dm = Model<D>::to_map(diff.m, "difference");
                std::vector<Vec<D>> rel;
                if (!in.empty()) {
                    auto& e = M.module(in);
                    if (e.m.amb.rank() != dm.tgt.rank())
                        throw InputError("module " + in + " does not match the target of equation " + std::to_string(k));
                    rel = e.m.rel;
                }
                auto G = module_gb(R, dm.tgt.rank(), rel);
                std::string cols;
                for (size_t j = 0; j < dm.cols.size(); ++j) {
                    Vec<D> r = G.normal_form(dm.cols[j]);
                    if (!r.empty()) ok = false;
                    cols += (j ? " " : "") + vec_str(R, r, dm.tgt.rank());
                }
                resid = cols;
            }
            w["holds"] = ok;
            if (!ok) {
                w["residual"] = resid;
                if (v.pass) v.message = "equation " + std::to_string(k) + " fails, residual " + resid;
                v.pass = false;
            }
            v.witness.push_back(w);
        } while (lx.accept(";"));
        if (!lx.at_end()) lx.fail("trailing input");
        return v;
    }

    // ---- annihilator_equals: ann(X) = (gens)
    Verdict annihilator_equals() {
        BodyLexer lx(C.body);
        bool wrapped = lx.peek_word("ann");
        if (wrapped) {
            lx.expect("ann");
            lx.expect("(");
        }
        auto [rn, mod] = module_operand(lx);
        if (wrapped) lx.expect(")");
        const Ring<D>& R = M.ring(rn);
        lx.expect("=");
        std::vector<Poly<D>> J = ideal_list(lx, R);
        if (!lx.at_end()) lx.fail("trailing input");
        auto ann = annihilator(R, mod);
        std::vector<Vec<D>> A(ann.begin(), ann.end()), B(J.begin(), J.end());
        auto res = submodule_equal(R, 1, A, B);
        Verdict v;
        v.witness = {{"annihilator_size", ann.size()}, {"claimed_size", J.size()}};
        if (cfg_.witnesses) v.witness["annihilator"] = poly_list(R, ann);
        if (!res.equal) {
            v.pass = false;
            v.message = std::string(res.side == 1 ? "annihilator element " : "claimed generator ") +
                        poly_str(R, res.witness) + " is not in the other ideal";
            v.witness["element"] = poly_str(R, res.witness);
        }
        return v;
    }

    // ---- basis_of_quotient: C over x, y = m1, m2, ...
    // With a lex order listing the fiber variables first, monic leads in the
    // fiber variables make the quotient free over the remaining variables
    // with the standard fiber monomials as basis.
    Verdict basis_of_quotient() {
        BodyLexer lx(C.body);
        std::string rn = lx.ident();
        const Ring<D>& R = M.ring(rn);
        lx.expect("over");
        std::vector<int> fiber;
        do {
            std::string x = lx.ident();
            int i = R.var_index(x);
            if (i < 0) throw InputError("unknown variable " + x + " in ring " + rn);
            fiber.push_back(i);
        } while (lx.accept(","));
        lx.expect("=");
        std::set<std::vector<int>> listed;
        do {
            Poly<D> p = M.eval_scalar(R, lx.expr());
            if (p.size() != 1 || !R.dom.is_one(p[0].c)) throw InputError("basis entries must be monomials");
            std::vector<int> e;
            for (int i : fiber) e.push_back(p[0].m.e[i]);
            int total = 0;
            for (int x : e) total += x;
            if (int(p[0].m.deg) != total) throw InputError("basis entries must involve fiber variables only");
            listed.insert(e);
        } while (lx.accept(","));
        if (!lx.at_end()) lx.fail("trailing input");
        Verdict v;
        std::set<int> fset(fiber.begin(), fiber.end());
        for (int i = 0; i < int(fiber.size()); ++i)
            if (!fset.count(i)) {
                v.pass = false;
                v.message = "fiber variables must come first in the ring";
                return v;
            }
        if (R.order != OrderKind::Lex) {
            v.pass = false;
            v.message = "ring " + rn + " must use a lex order";
            return v;
        }
        const auto& G = R.relation_gb();
        std::vector<int> bound(fiber.size(), -1);
        json leads = json::array();
        for (auto& g : G.elems) {
            const Monomial& L = g[0].m;
            leads.push_back(poly_str(R, Poly<D>{g[0]}));
            bool pure = true;
            for (int i = 0; i < R.nvars(); ++i)
                if (L.e[i] && !fset.count(i)) pure = false;
            if (!pure || !R.dom.is_one(g[0].c)) {
                v.pass = false;
                v.message = "leading term " + poly_str(R, Poly<D>{g[0]}) + " is not a monic monomial in the fiber variables";
                v.witness = {{"leads", leads}};
                return v;
            }
            int nz = 0, which = -1;
            for (size_t k = 0; k < fiber.size(); ++k)
                if (L.e[fiber[k]]) ++nz, which = int(k);
            if (nz == 1) {
                int e = L.e[fiber[which]];
                if (bound[which] < 0 || e < bound[which]) bound[which] = e;
            }
        }
        for (size_t k = 0; k < fiber.size(); ++k)
            if (bound[k] < 0) {
                v.pass = false;
                v.message = "no pure power of " + R.vars[fiber[k]] + " is a leading term; the quotient is not finite";
                v.witness = {{"leads", leads}};
                return v;
            }
        std::set<std::vector<int>> standard;
        std::vector<int> e(fiber.size(), 0);
        std::function<void(size_t)> rec = [&](size_t k) {
            if (k == fiber.size()) {
                Monomial m;
                for (size_t t = 0; t < fiber.size(); ++t) m.e[fiber[t]] = uint16_t(e[t]);
                m.refresh();
                if (G.find_reducer(m) < 0) standard.insert(e);
                return;
            }
            for (int x = 0; x < bound[k]; ++x) {
                e[k] = x;
                rec(k + 1);
            }
            e[k] = 0;
        };
        rec(0);
        json sm = json::array();
        for (auto& s : standard) {
            Monomial m;
            for (size_t t = 0; t < fiber.size(); ++t) m.e[fiber[t]] = uint16_t(s[t]);
            m.refresh();
            std::string ms = monomial_str(R, m);
            sm.push_back(ms.empty() ? "1" : ms);
        }
        v.witness = {{"leads", leads}, {"standard_monomials", sm}};
        if (standard != listed) {
            v.pass = false;
            v.message = "standard monomials differ from the listed basis";
        }
        return v;
    }
};

template <class D>
Verdict check_in(ModelPool& pool, const CoeffSpec& spec, const ClaimStmt& c, const RunConfig& cfg) {
    Model<D>& m = pool.get<Model<D>>(spec);
    return Checker<D>(m, c, cfg).run();
}

Verdict check_dispatch(ModelPool& pool, const CoeffSpec& spec, const ClaimStmt& c, const RunConfig& cfg) {
    switch (spec.kind) {
        case CoeffKind::ZZ: return check_in<Integers>(pool, spec, c, cfg);
        case CoeffKind::QQ: return check_in<Rationals>(pool, spec, c, cfg);
        case CoeffKind::FP: return check_in<PrimeField>(pool, spec, c, cfg);
    }
    throw InputError("bad coefficient domain");
}

// Multiplication by p is injective on the ring and on H_0 of the complex.
json torsion_free(Model<Integers>& m, const std::string& complex, uint64_t p, bool& ok) {
    auto& E = m.complex(complex);
    const Ring<Integers>& R = m.ring(E.ring);
    Poly<Integers> pc = poly_const(R, mpz_class(p));
    ModuleMap<Integers> mul;
    mul.src.degs = {0};
    mul.tgt.degs = {0};
    mul.cols = {pc};
    auto ring_kill = preimage_of_rel(R, mul, {basis_vec(R, 0)}, {}, true);
    bool ring_ok = ring_kill.empty();
    const FreeModule& F = E.c.terms[0].amb;
    ModuleMap<Integers> mulF;
    mulF.src = F;
    mulF.tgt = F;
    for (int i = 0; i < F.rank(); ++i) mulF.cols.push_back(poly_const(R, mpz_class(p), uint32_t(i)));
    auto U = boundaries_at(R, E.c, 0);
    auto colon = preimage_of_rel(R, mulF, basis(R, F.rank()), U, true);
    auto G = module_gb(R, F.rank(), U);
    bool h0_ok = true;
    std::string bad;
    for (auto& x : colon)
        if (!G.normal_form(x).empty()) {
            h0_ok = false;
            bad = vec_str(R, x, F.rank());
            break;
        }
    ok = ring_ok && h0_ok;
    json w = {{"ring_torsion_free", ring_ok}, {"h0_torsion_free", h0_ok}};
    if (!h0_ok) w["torsion_element"] = bad;
    return w;
}

Verdict crosscheck(ModelPool& pool, const ScenarioStmt& s, const ClaimStmt& c, const RunConfig& cfg,
                   const std::string& opt) {
    CoeffSpec fp = parse_coeff_cli(opt);
    if (fp.kind != CoeffKind::FP) throw InputError("crosscheck expects fp:P");
    if (cfg.coeff) {
        if (cfg.coeff->kind == CoeffKind::QQ)
            throw InputError("unsupported: the universal-coefficients crosscheck needs an integral run, not qq");
        if (cfg.coeff->kind == CoeffKind::FP) fp = *cfg.coeff;
    }
    (void)s;
    ClaimStmt plain = c;
    plain.options.clear();
    if (auto* d = c.option("degree")) plain.options.push_back({"degree", *d});
    CoeffSpec zz{CoeffKind::ZZ, 0};
    Verdict vz = check_dispatch(pool, zz, plain, cfg);
    bool tf = false;
    auto h = Checker<Integers>::parse_homology_body(c.body);
    json tw = torsion_free(pool.get<Model<Integers>>(zz), h.complex, fp.prime, tf);
    Verdict vp = check_dispatch(pool, fp, plain, cfg);
    Verdict v;
    v.witness = {{"zz", vz.witness}, {fp.cli_name(), vp.witness}, {"torsion", tw}};
    bool predicted = vz.pass && tf;
    v.witness["consistent"] = !predicted || vp.pass;
    v.pass = vz.pass && tf && vp.pass;
    if (!vz.pass) v.message = "integral run: " + vz.message;
    else if (!tf) v.message = "H0 or the ring has " + std::to_string(fp.prime) + "-torsion";
    else if (!vp.pass) v.message = "inconsistent: integral acyclicity and torsion-freeness predict acyclicity over " +
                                   fp.cli_name() + ", but " + vp.message;
    return v;
}

}  // namespace

CheckReport run_claim(ModelPool& pool, const ScenarioStmt& s, const ClaimStmt& c, const RunConfig& cfg) {
    CheckReport r;
    r.scenario = s.id;
    r.claim = c.id;
    r.kind = c.kind;
    r.paper_ref = c.label;
    auto t0 = std::chrono::steady_clock::now();
    try {
        CoeffSpec spec = claim_domain(s, c, cfg.coeff);
        r.coeff = spec.cli_name();
        Verdict v;
        const std::string* cross = c.option("crosscheck");
        if (cross && c.kind == "homology_zero_at") {
            v = crosscheck(pool, s, c, cfg, *cross);
            CoeffSpec fp = parse_coeff_cli(*cross);
            if (cfg.coeff && cfg.coeff->kind == CoeffKind::FP) fp = *cfg.coeff;
            r.coeff = "zz+" + fp.cli_name();
        } else {
            v = check_dispatch(pool, spec, c, cfg);
        }
        r.status = v.pass ? "pass" : "fail";
        r.message = v.message;
        if (!v.pass || cfg.witnesses) r.witness = v.witness;
    } catch (const LexError& e) {
        r.status = "error";
        r.message = "claim body, offset " + std::to_string(e.offset) + ": " + e.what();
    } catch (const std::exception& e) {
        r.status = "error";
        r.message = e.what();
    }
    r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace wgr
