#pragma once

// The built-in scenario catalog and the report schema.

#include <string>
#include <vector>

#include <json.hpp>

#include "wgr/gma.hpp"

namespace wgr {

struct CatalogFile {
    std::string name;  // e.g. "ng2.gma"
    std::string text;
    Document doc;
};

// Parsed and validated once, in a fixed order.
const std::vector<CatalogFile>& catalog();
std::vector<const Document*> catalog_documents();

struct ScenarioInfo {
    std::string file, id, label, coeff;
    size_t claims = 0;
};
std::vector<ScenarioInfo> list_scenarios(const std::vector<const Document*>& docs,
                                         const std::vector<std::string>& files = {});

const nlohmann::json& report_schema();

// Checks `doc` against the subset of JSON Schema used by the report schema
// (type, required, properties, additionalProperties, items, enum, pattern,
// minimum, minLength). Returns the violations as "path: problem".
std::vector<std::string> validate_json(const nlohmann::json& doc, const nlohmann::json& schema);

}  // namespace wgr
