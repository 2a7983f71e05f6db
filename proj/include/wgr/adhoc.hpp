#pragma once

// One-off computations on a user-supplied document, for the CLI.

#include <optional>
#include <string>

#include "wgr/coeff.hpp"
#include "wgr/gma.hpp"

namespace wgr {

// Domain the document is written over: the first non-integral ring
// coefficient, else ZZ.
CoeffSpec natural_domain(const Document& doc);

// Reduced Gröbner basis of the relations of `ring` (last ring if empty),
// one element per line.
std::string gb_text(const Document& doc, const std::string& ring, const std::optional<CoeffSpec>& coeff);

struct HomologyOutcome {
    bool zero = true;
    std::string text;
};

// Homology of a named complex at index `at` (cohomological complexes are
// indexed by cohomological degree), optionally in one internal degree.
HomologyOutcome homology_text(const Document& doc, const std::string& complex, int at,
                              const std::optional<CoeffSpec>& coeff, std::optional<int64_t> degree, bool witnesses);

}  // namespace wgr
