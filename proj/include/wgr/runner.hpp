#pragma once

// Claim checking, scenario runs and reports.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wgr/coeff.hpp"
#include "wgr/gma.hpp"

namespace wgr {

inline constexpr const char* kToolVersion = "1.0.0";

struct CheckReport {
    std::string scenario, claim, kind;
    std::string status;  // pass | fail | error
    std::string coeff;   // domain the claim ran in, CLI spelling
    std::string paper_ref;
    std::string message;
    double elapsed_ms = 0;
    nlohmann::json witness;  // null when absent
};

struct ScenarioReport {
    std::string id, paper_ref;
    std::vector<CheckReport> claims;
};

struct RunReport {
    std::string run_id, tool_version, coeff;
    int64_t max_degree = 15;
    std::vector<ScenarioReport> scenarios;

    // 0 if every claim passed, 1 otherwise.
    int exit_code() const;
};

struct RunConfig {
    std::vector<std::string> ids;  // empty or {"all"}: everything
    std::optional<CoeffSpec> coeff;
    int64_t max_degree = 15;
    bool witnesses = false;
    std::string format = "json";
    std::string out;
    std::string cache;
    int jobs = 1;
};

// Models of one document, one per coefficient domain, built on demand.
class ModelPool {
public:
    explicit ModelPool(const Document& doc) : doc_(doc) {}
    template <class M>
    M& get(const CoeffSpec& spec);
    const Document& doc() const { return doc_; }

private:
    const Document& doc_;
    std::mutex mu_;
    std::map<std::string, std::shared_ptr<void>> models_;
};

// Domain a claim runs in: override, then the claim's coeff option, then the
// scenario default.
CoeffSpec claim_domain(const ScenarioStmt& s, const ClaimStmt& c, const std::optional<CoeffSpec>& override_coeff);

CheckReport run_claim(ModelPool& pool, const ScenarioStmt& s, const ClaimStmt& c, const RunConfig& cfg);

// Runs the selected scenarios of the given documents on a worker pool of
// cfg.jobs threads. Unknown ids raise InputError.
RunReport run_scenarios(const std::vector<const Document*>& docs, const RunConfig& cfg);

nlohmann::json report_json(const RunReport& r, bool with_timings = true);
std::string report_text(const RunReport& r);

// Writes via a temporary file and rename.
void write_file_atomic(const std::string& path, const std::string& data);

}  // namespace wgr
