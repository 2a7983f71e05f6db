#include "wgr/adhoc.hpp"

#include <sstream>

#include "wgr/model.hpp"

namespace wgr {

CoeffSpec natural_domain(const Document& doc) {
    for (auto& s : doc.stmts)
        if (auto* r = std::get_if<RingStmt>(&s))
            if (r->invert_base.empty()) {
                CoeffSpec c = parse_coeff_gma(r->coeff);
                if (c.kind != CoeffKind::ZZ) return c;
            }
    return {};
}

namespace {

template <class D>
std::string gb_in(const Document& doc, const CoeffSpec& spec, std::string ring) {
    Model<D> m(doc, spec);
    auto names = m.ring_names();
    if (names.empty()) throw InputError("document defines no ring");
    if (ring.empty()) ring = names.back();
    const Ring<D>& R = m.ring(ring);
    std::ostringstream o;
    o << "# " << ring << " over " << spec.cli_name() << ", " << R.relation_gb().elems.size() << " elements\n";
    for (auto& g : R.relation_gb().elems) o << poly_str(R, g) << "\n";
    return o.str();
}

template <class D>
HomologyOutcome homology_in(const Document& doc, const CoeffSpec& spec, const std::string& name, int at,
                            std::optional<int64_t> degree, bool witnesses) {
    Model<D> m(doc, spec);
    auto& E = m.complex(name);
    const Ring<D>& R = m.ring(E.ring);
    int pos = E.c.position(at);
    auto res = homology_is_zero(R, E.c, pos, degree);
    HomologyOutcome out;
    out.zero = res.zero;
    std::ostringstream o;
    o << "H(" << name << ", " << at << ")";
    if (degree) o << " in degree " << *degree;
    o << " over " << spec.cli_name() << ": " << (res.zero ? "zero" : "nonzero") << "\n";
    o << "  cycle generators " << res.cycles.size() << ", boundary generators " << res.boundaries.size() << "\n";
    if (!res.zero) o << "  cycle outside the boundaries: " << vec_str(R, res.bad, res.rank) << "\n";
    if (res.zero && witnesses) {
        int next = pos + 1 <= E.c.length() ? E.c.terms[pos + 1].amb.rank() : 0;
        for (auto& l : res.lifts)
            o << "  " << vec_str(R, l.cycle, res.rank) << " = d(" << vec_str(R, l.preimage, next) << ")\n";
    }
    out.text = o.str();
    return out;
}

}  // namespace

std::string gb_text(const Document& doc, const std::string& ring, const std::optional<CoeffSpec>& coeff) {
    CoeffSpec spec = coeff ? *coeff : natural_domain(doc);
    switch (spec.kind) {
        case CoeffKind::ZZ: return gb_in<Integers>(doc, spec, ring);
        case CoeffKind::QQ: return gb_in<Rationals>(doc, spec, ring);
        case CoeffKind::FP: return gb_in<PrimeField>(doc, spec, ring);
    }
    return {};
}

HomologyOutcome homology_text(const Document& doc, const std::string& complex, int at,
                              const std::optional<CoeffSpec>& coeff, std::optional<int64_t> degree, bool witnesses) {
    CoeffSpec spec = coeff ? *coeff : natural_domain(doc);
    switch (spec.kind) {
        case CoeffKind::ZZ: return homology_in<Integers>(doc, spec, complex, at, degree, witnesses);
        case CoeffKind::QQ: return homology_in<Rationals>(doc, spec, complex, at, degree, witnesses);
        case CoeffKind::FP: return homology_in<PrimeField>(doc, spec, complex, at, degree, witnesses);
    }
    return {};
}

}  // namespace wgr
