// wgr: verify the built-in scenario catalog or ad-hoc .gma files.
// Exit codes: 0 all claims pass, 1 some claim fails, 2 input or config error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "wgr/adhoc.hpp"
#include "wgr/cache.hpp"
#include "wgr/catalog.hpp"
#include "wgr/errors.hpp"
#include "wgr/runner.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw wgr::InputError("cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

wgr::Document load_file(const std::string& path) {
    try {
        return wgr::load_gma(read_file(path));
    } catch (const wgr::ParseError& e) {
        throw wgr::InputError(path + ": " + e.what());
    }
}

std::optional<wgr::CoeffSpec> coeff_opt(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return wgr::parse_coeff_cli(s);
}

void setup_cache(const std::string& flag) {
    std::string dir = flag;
    if (dir.empty())
        if (const char* env = std::getenv("WGR_CACHE_DIR")) dir = env;
    if (!dir.empty()) std::filesystem::create_directories(dir);
    wgr::GBCache::instance().set_directory(dir);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gröbner-basis verification of graded module claims"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(wgr::kToolVersion));

    wgr::RunConfig cfg;
    std::string coeff, cache;
    std::vector<std::string> files;
    auto* verify = app.add_subcommand("verify", "check scenarios and write a report");
    verify->add_option("ids", cfg.ids, "scenario ids, or all");
    verify->add_option("--coeff", coeff, "coefficient override: zz, qq or fp:P");
    verify->add_option("--max-degree", cfg.max_degree, "degree bound for Hilbert comparisons")->capture_default_str();
    verify->add_option("--report", cfg.format, "report format")->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();
    verify->add_option("--out", cfg.out, "report path (default: stdout)");
    verify->add_option("--cache", cache, "Gröbner cache directory (default: $WGR_CACHE_DIR)");
    verify->add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::Range(1, 256))->capture_default_str();
    verify->add_flag("--witnesses", cfg.witnesses, "include witnesses for passing claims");
    verify->add_option("--file", files, "verify scenarios of these .gma files instead of the catalog");
    bool no_timings = false;
    verify->add_flag("--no-timings", no_timings, "omit elapsed_ms from JSON reports");

    std::vector<std::string> list_files;
    auto* list = app.add_subcommand("list", "list scenarios");
    list->add_option("--file", list_files, ".gma files to list instead of the catalog");

    std::string gb_file, gb_ring, gb_coeff;
    auto* gb = app.add_subcommand("gb", "print the Gröbner basis of a ring's relations");
    gb->add_option("file", gb_file, ".gma file")->required();
    gb->add_option("--ring", gb_ring, "ring name (default: last ring)");
    gb->add_option("--coeff", gb_coeff, "coefficient override");

    std::string h_file, h_complex, h_coeff;
    int h_at = 0;
    std::optional<int64_t> h_degree;
    bool h_wit = false;
    auto* hom = app.add_subcommand("homology", "test a homology module of a complex for vanishing");
    hom->add_option("file", h_file, ".gma file")->required();
    hom->add_option("--complex", h_complex, "complex name")->required();
    hom->add_option("--at", h_at, "homological (or cohomological) index")->required();
    hom->add_option("--degree", h_degree, "restrict to one internal degree");
    hom->add_option("--coeff", h_coeff, "coefficient override");
    hom->add_flag("--witnesses", h_wit, "print lifts of the cycle generators");

    std::string ex_name = "all", ex_dir;
    auto* exp = app.add_subcommand("export", "write the built-in .gma files");
    exp->add_option("name", ex_name, "file name such as ng2.gma, or all")->capture_default_str();
    exp->add_option("--dir", ex_dir, "output directory (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*verify) {
            cfg.coeff = coeff_opt(coeff);
            cfg.cache = cache;
            setup_cache(cache);
            std::vector<wgr::Document> owned;
            std::vector<const wgr::Document*> docs;
            if (files.empty()) {
                docs = wgr::catalog_documents();
            } else {
                for (auto& f : files) owned.push_back(load_file(f));
                for (auto& d : owned) docs.push_back(&d);
            }
            wgr::RunReport rep = wgr::run_scenarios(docs, cfg);
            std::string out = cfg.format == "json" ? wgr::report_json(rep, !no_timings).dump(2) + "\n"
                                                   : wgr::report_text(rep);
            if (cfg.out.empty()) std::cout << out;
            else wgr::write_file_atomic(cfg.out, out);
            return rep.exit_code();
        }
        if (*list) {
            std::vector<wgr::Document> owned;
            std::vector<const wgr::Document*> docs;
            std::vector<std::string> names;
            if (list_files.empty()) {
                for (auto& f : wgr::catalog()) {
                    docs.push_back(&f.doc);
                    names.push_back(f.name);
                }
            } else {
                for (auto& f : list_files) owned.push_back(load_file(f));
                for (auto& d : owned) docs.push_back(&d);
                names = list_files;
            }
            for (auto& s : wgr::list_scenarios(docs, names))
                std::cout << s.id << "\t" << s.file << "\t" << s.coeff << "\t" << s.claims << " claims\t" << s.label
                          << "\n";
            return 0;
        }
        if (*gb) {
            std::cout << wgr::gb_text(load_file(gb_file), gb_ring, coeff_opt(gb_coeff));
            return 0;
        }
        if (*hom) {
            auto r = wgr::homology_text(load_file(h_file), h_complex, h_at, coeff_opt(h_coeff), h_degree, h_wit);
            std::cout << r.text;
            return r.zero ? 0 : 1;
        }
        if (*exp) {
            bool any = false;
            for (auto& f : wgr::catalog()) {
                if (ex_name != "all" && ex_name != f.name) continue;
                any = true;
                if (ex_dir.empty()) {
                    std::cout << f.text;
                } else {
                    std::filesystem::create_directories(ex_dir);
                    wgr::write_file_atomic((std::filesystem::path(ex_dir) / f.name).string(), f.text);
                }
            }
            if (ex_name == "all" || ex_name == "report.schema.json") {
                any = true;
                std::string text = wgr::report_schema().dump(2) + "\n";
                if (ex_dir.empty()) {
                    std::cout << text;
                } else {
                    std::filesystem::create_directories(ex_dir);
                    wgr::write_file_atomic((std::filesystem::path(ex_dir) / "report.schema.json").string(), text);
                }
            }
            if (!any) throw wgr::InputError("no built-in file named " + ex_name);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "wgr: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
