#include "wgr/runner.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <unistd.h>

#include "wgr/cache.hpp"
#include "wgr/errors.hpp"

namespace wgr {

using nlohmann::json;

int RunReport::exit_code() const {
    for (auto& s : scenarios)
        for (auto& c : s.claims)
            if (c.status != "pass") return 1;
    return 0;
}

namespace {

std::string run_id_of(const RunConfig& cfg, const std::vector<std::string>& ids) {
    json j = {{"ids", ids},
              {"coeff", cfg.coeff ? cfg.coeff->cli_name() : "declared"},
              {"max_degree", cfg.max_degree},
              {"witnesses", cfg.witnesses},
              {"tool_version", kToolVersion}};
    return sha256_hex(j.dump()).substr(0, 16);
}

}  // namespace

RunReport run_scenarios(const std::vector<const Document*>& docs, const RunConfig& cfg) {
    if (cfg.coeff && cfg.coeff->kind == CoeffKind::FP && cfg.coeff->prime < 5)
        throw InputError("coefficient field " + cfg.coeff->cli_name() + " is not supported; use a prime p >= 5");
    if (cfg.max_degree < 0) throw InputError("--max-degree must be nonnegative");

    struct Sel {
        size_t doc;
        const ScenarioStmt* s;
    };
    std::vector<Sel> sel;
    bool all = cfg.ids.empty() || (cfg.ids.size() == 1 && cfg.ids[0] == "all");
    if (all) {
        for (size_t d = 0; d < docs.size(); ++d)
            for (auto* s : docs[d]->scenarios()) sel.push_back({d, s});
    } else {
        for (auto& id : cfg.ids) {
            bool found = false;
            for (size_t d = 0; d < docs.size() && !found; ++d)
                for (auto* s : docs[d]->scenarios())
                    if (s->id == id) {
                        sel.push_back({d, s});
                        found = true;
                        break;
                    }
            if (!found) throw InputError("unknown scenario id '" + id + "'");
        }
    }

    RunReport rep;
    rep.tool_version = kToolVersion;
    rep.coeff = cfg.coeff ? cfg.coeff->cli_name() : "declared";
    rep.max_degree = cfg.max_degree;
    std::vector<std::string> ids;
    for (auto& x : sel) ids.push_back(x.s->id);
    rep.run_id = run_id_of(cfg, ids);

    std::vector<std::unique_ptr<ModelPool>> pools;
    for (auto* d : docs) pools.push_back(std::make_unique<ModelPool>(*d));

    struct Task {
        size_t scen, claim;
    };
    std::vector<Task> tasks;
    for (size_t i = 0; i < sel.size(); ++i) {
        ScenarioReport sr;
        sr.id = sel[i].s->id;
        sr.paper_ref = sel[i].s->label;
        sr.claims.resize(sel[i].s->claims.size());
        rep.scenarios.push_back(std::move(sr));
        for (size_t k = 0; k < sel[i].s->claims.size(); ++k) tasks.push_back({i, k});
    }

    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t t; (t = next.fetch_add(1)) < tasks.size();) {
            const Sel& s = sel[tasks[t].scen];
            rep.scenarios[tasks[t].scen].claims[tasks[t].claim] =
                run_claim(*pools[s.doc], *s.s, s.s->claims[tasks[t].claim], cfg);
        }
    };
    int jobs = std::max(1, cfg.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> th;
        for (int j = 0; j < jobs; ++j) th.emplace_back(worker);
        for (auto& t : th) t.join();
    }
    return rep;
}

json report_json(const RunReport& r, bool with_timings) {
    json scen = json::array();
    int pass = 0, fail = 0, error = 0;
    for (auto& s : r.scenarios) {
        json claims = json::array();
        for (auto& c : s.claims) {
            json j = {{"id", c.claim},   {"kind", c.kind},   {"status", c.status},
                      {"coeff", c.coeff}, {"paper_ref", c.paper_ref}};
            if (with_timings) j["elapsed_ms"] = std::round(c.elapsed_ms * 1000) / 1000;
            if (!c.message.empty()) j["message"] = c.message;
            if (!c.witness.is_null()) j["witness"] = c.witness;
            claims.push_back(j);
            (c.status == "pass" ? pass : c.status == "fail" ? fail : error)++;
        }
        scen.push_back({{"id", s.id}, {"paper_ref", s.paper_ref}, {"claims", claims}});
    }
    return {{"run_id", r.run_id},
            {"tool_version", r.tool_version},
            {"coeff", r.coeff},
            {"max_degree", r.max_degree},
            {"scenarios", scen},
            {"summary", {{"pass", pass}, {"fail", fail}, {"error", error}}}};
}

std::string report_text(const RunReport& r) {
    std::ostringstream o;
    o << "run " << r.run_id << "  tool " << r.tool_version << "  coeff " << r.coeff << "  max-degree "
      << r.max_degree << "\n";
    int pass = 0, total = 0;
    for (auto& s : r.scenarios) {
        o << "\n" << s.id;
        if (!s.paper_ref.empty()) o << "  (" << s.paper_ref << ")";
        o << "\n";
        for (auto& c : s.claims) {
            ++total;
            pass += c.status == "pass";
            char buf[32];
            std::snprintf(buf, sizeof buf, "%9.1f ms", c.elapsed_ms);
            o << "  " << (c.status == "pass" ? "PASS " : c.status == "fail" ? "FAIL " : "ERROR") << " " << c.claim
              << " [" << c.kind << ", " << c.coeff << "] " << buf << "\n";
            if (!c.message.empty()) o << "        " << c.message << "\n";
        }
    }
    o << "\n" << pass << "/" << total << " claims pass\n";
    return o.str();
}

void write_file_atomic(const std::string& path, const std::string& data) {
    std::string tmp = path + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw InputError("cannot write " + tmp);
        f << data;
        f.flush();
        if (!f) throw InputError("write to " + tmp + " failed");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw InputError("cannot rename " + tmp + " to " + path);
    }
}

}  // namespace wgr
