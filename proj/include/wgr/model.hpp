#pragma once

// A Model realizes the objects of a .gma document over one coefficient
// domain. Rings, free modules and maps are built eagerly (this is where
// homogeneity is validated); modules and complexes are built on first use
// and cached. Integer literals and the declared integral rings are base
// changed to the model's domain.

#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "wgr/gma.hpp"
#include "wgr/modules.hpp"

namespace wgr {

template <class D>
D make_domain(const CoeffSpec& spec);

template <>
inline Integers make_domain<Integers>(const CoeffSpec&) { return {}; }
template <>
inline Rationals make_domain<Rationals>(const CoeffSpec&) { return {}; }
template <>
inline PrimeField make_domain<PrimeField>(const CoeffSpec& s) { return PrimeField(s.prime); }

// Dense matrix over a ring, row-major. rows = target rank, cols = source rank.
template <class D>
struct Mat {
    int rows = 0, cols = 0;
    std::vector<Poly<D>> e;
    FreeModule src, tgt;  // shapes; degrees are meaningful only for named maps

    Poly<D>& at(int i, int j) { return e[size_t(i) * cols + j]; }
    const Poly<D>& at(int i, int j) const { return e[size_t(i) * cols + j]; }
};

// Result of evaluating an expression: a ring element or a matrix.
template <class D>
struct Value {
    bool scalar = true;
    Poly<D> s;
    Mat<D> m;
};

template <class D>
class Model {
public:
    struct FreeEntry {
        std::string ring;
        FreeModule F;
    };
    struct MapEntry {
        std::string ring;
        ModuleMap<D> map;
    };
    struct ModEntry {
        std::string ring;
        SubQ<D> m;
    };
    struct ComplexEntry {
        std::string ring;
        ChainComplex<D> c;
    };

    Model(const Document& doc, CoeffSpec spec);
    Model(const Model&) = delete;
    Model& operator=(const Model&) = delete;

    const Document& doc() const { return doc_; }
    const CoeffSpec& spec() const { return spec_; }
    const D& dom() const { return dom_; }

    bool has_ring(const std::string& n) const { return rings_.count(n) > 0; }
    bool has_free(const std::string& n) const { return frees_.count(n) > 0; }
    bool has_map(const std::string& n) const { return maps_.count(n) > 0; }
    bool has_module(const std::string& n) const { return module_stmts_.count(n) > 0 || has_free(n); }
    bool has_complex(const std::string& n) const { return complex_stmts_.count(n) > 0; }

    const Ring<D>& ring(const std::string& n) const;
    const FreeEntry& free(const std::string& n) const;
    const MapEntry& map(const std::string& n) const;
    const ModEntry& module(const std::string& n);
    const ComplexEntry& complex(const std::string& n);
    std::vector<std::string> ring_names() const { return ring_order_; }

    // True if elements of `small` are elements of `big` (same ring, or big
    // is obtained from small by inverting elements).
    bool extends(const std::string& big, const std::string& small) const;
    // The larger of two comparable rings.
    std::string join(const std::string& a, const std::string& b) const;

    Value<D> eval(const Ring<D>& R, const Expr& e) const;
    Poly<D> eval_scalar(const Ring<D>& R, const Expr& e) const;
    Mat<D> eval_matrix(const Ring<D>& R, const Expr& e) const;

    // Ring of the object a name refers to, or "" if the name is not an object.
    std::string ring_of(const std::string& name);

    // Helpers on dense matrices.
    static Mat<D> to_mat(const ModuleMap<D>& f);
    static ModuleMap<D> to_map(const Mat<D>& m, const std::string& name);
    Mat<D> identity(const Ring<D>& R, int n) const;

    // Presentation phi: F1 -> F0 with coker phi = M (for modules given as a
    // quotient of a free module this is the relation matrix).
    ModuleMap<D> presentation_map(const Ring<D>& R, const SubQ<D>& M) const;
    SubQ<D> hom_of(const Ring<D>& R, const SubQ<D>& M, const SubQ<D>& N) const;

private:
    const Document& doc_;
    CoeffSpec spec_;
    D dom_;
    std::map<std::string, std::unique_ptr<Ring<D>>> rings_;
    std::vector<std::string> ring_order_;
    std::map<std::string, std::string> ring_base_;  // invert ring -> base
    std::map<std::string, FreeEntry> frees_;
    std::map<std::string, MapEntry> maps_;
    std::map<std::string, const ModuleStmt*> module_stmts_;
    std::map<std::string, const ComplexStmt*> complex_stmts_;
    std::map<std::string, std::vector<const TermStmt*>> term_stmts_;
    std::recursive_mutex mu_;
    std::map<std::string, std::unique_ptr<ModEntry>> modules_;
    std::map<std::string, std::unique_ptr<ComplexEntry>> complexes_;

    void build_ring(const RingStmt& r);
    void build_free(const FreeStmt& f);
    void build_map(const MapStmt& m, bool transposed);
    [[noreturn]] void fail_at(const SrcPos& p, const std::string& msg) const;
    Mat<D> mat_mul(const Ring<D>& R, const Mat<D>& a, const Mat<D>& b) const;
    Mat<D> mat_add(const Ring<D>& R, const Mat<D>& a, const Mat<D>& b, bool sub) const;
    Poly<D> det(const Ring<D>& R, const Mat<D>& a) const;
    Value<D> promote_add(const Ring<D>& R, const Value<D>& a, const Value<D>& b, bool sub) const;
};

extern template class Model<Integers>;
extern template class Model<Rationals>;
extern template class Model<PrimeField>;

}  // namespace wgr
