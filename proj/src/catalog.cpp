#include "wgr/catalog.hpp"

#include <regex>

#include "wgr/model.hpp"
#include "wgr_embedded.hpp"

namespace wgr {

using nlohmann::json;

const std::vector<CatalogFile>& catalog() {
    static const std::vector<CatalogFile> files = [] {
        std::vector<std::pair<std::string, std::string_view>> src = {{"ss.gma", embedded::ss},
                                                                     {"gps.gma", embedded::gps},
                                                                     {"ng1.gma", embedded::ng1},
                                                                     {"ng2.gma", embedded::ng2}};
        std::vector<CatalogFile> out;
        for (auto& [name, text] : src) {
            try {
                out.push_back({name, std::string(text), load_gma(std::string(text))});
            } catch (const ParseError& e) {
                throw InputError("built-in " + name + ", " + e.what());
            }
        }
        return out;
    }();
    return files;
}

std::vector<const Document*> catalog_documents() {
    std::vector<const Document*> v;
    for (auto& f : catalog()) v.push_back(&f.doc);
    return v;
}

std::vector<ScenarioInfo> list_scenarios(const std::vector<const Document*>& docs,
                                         const std::vector<std::string>& files) {
    std::vector<ScenarioInfo> out;
    for (size_t d = 0; d < docs.size(); ++d)
        for (auto* s : docs[d]->scenarios())
            out.push_back({d < files.size() ? files[d] : "", s->id, s->label, s->coeff, s->claims.size()});
    return out;
}

const json& report_schema() {
    static const json s = json::parse(embedded::report_schema);
    return s;
}

namespace {

bool type_ok(const json& v, const std::string& t) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "integer") return v.is_number_integer();
    if (t == "number") return v.is_number();
    if (t == "boolean") return v.is_boolean();
    if (t == "null") return v.is_null();
    return false;
}

void check(const json& v, const json& s, const std::string& path, std::vector<std::string>& err) {
    if (!s.is_object()) return;
    if (s.contains("type") && !type_ok(v, s["type"])) {
        err.push_back(path + ": expected " + s["type"].get<std::string>());
        return;
    }
    if (s.contains("enum")) {
        bool hit = false;
        for (auto& e : s["enum"]) hit |= e == v;
        if (!hit) err.push_back(path + ": value not in enum");
    }
    if (v.is_string()) {
        auto& str = v.get_ref<const std::string&>();
        if (s.contains("minLength") && str.size() < s["minLength"].get<size_t>())
            err.push_back(path + ": string too short");
        if (s.contains("pattern") && !std::regex_search(str, std::regex(s["pattern"].get<std::string>())))
            err.push_back(path + ": does not match " + s["pattern"].get<std::string>());
    }
    if (v.is_number() && s.contains("minimum") && v.get<double>() < s["minimum"].get<double>())
        err.push_back(path + ": below minimum");
    if (v.is_object()) {
        if (s.contains("required"))
            for (auto& k : s["required"])
                if (!v.contains(k.get<std::string>())) err.push_back(path + ": missing " + k.get<std::string>());
        const json* props = s.contains("properties") ? &s["properties"] : nullptr;
        for (auto& [k, x] : v.items()) {
            if (props && props->contains(k)) check(x, (*props)[k], path + "/" + k, err);
            else if (s.value("additionalProperties", true) == false) err.push_back(path + ": unexpected " + k);
        }
    }
    if (v.is_array() && s.contains("items"))
        for (size_t i = 0; i < v.size(); ++i) check(v[i], s["items"], path + "/" + std::to_string(i), err);
}

}  // namespace

std::vector<std::string> validate_json(const json& doc, const json& schema) {
    std::vector<std::string> err;
    check(doc, schema, "", err);
    return err;
}

}  // namespace wgr
