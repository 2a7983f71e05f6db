#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "wgr/catalog.hpp"
#include "wgr/errors.hpp"
#include "wgr/runner.hpp"

using namespace wgr;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args) {
    std::string cmd = std::string(WGR_CLI) + " " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST(Gma, ShippedFilesRoundTrip) {
    for (auto& f : catalog()) {
        Document again = parse_gma(serialize_gma(f.doc));
        EXPECT_TRUE(again == f.doc) << f.name;
        EXPECT_EQ(serialize_gma(again), serialize_gma(f.doc)) << f.name;
    }
}

TEST(Gma, NonGenericRingHasFiveRelations) {
    Document d = parse_gma(slurp(std::string(WGR_DATA_DIR) + "/ng1.gma"));
    const RingStmt* A = nullptr;
    for (auto& s : d.stmts)
        if (auto* r = std::get_if<RingStmt>(&s); r && r->name == "A") A = r;
    ASSERT_NE(A, nullptr);
    EXPECT_EQ(A->relations.size(), 5u);
}

TEST(Gma, InhomogeneousEntryIsNamed) {
    const char* text = R"(ring S = ZZ[x, y | weights 1, 2]
free F = S(0)
free G = S(-1)
map M : G -> F = [[x + y]]
)";
    try {
        load_gma(text);
        FAIL() << "expected an error";
    } catch (const ParseError& e) {
        std::string msg = e.what();
        EXPECT_EQ(e.line, 4);
        EXPECT_NE(msg.find("(1,1)"), std::string::npos) << msg;
        EXPECT_NE(msg.find("weight"), std::string::npos) << msg;
    }
}

TEST(Gma, SyntaxErrorHasLineAndColumn) {
    try {
        parse_gma("ring S = ZZ[x, y]\nmap f : A -> = [[x]]\n");
        FAIL() << "expected an error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line, 2);
        EXPECT_GT(e.column, 1);
    }
}

TEST(Gma, InhomogeneousRelationIsRejected) {
    EXPECT_THROW(load_gma("ring S = ZZ[x, y | weights 1, 2] / (x + y)\n"), ParseError);
}

TEST(Gma, ClaimValidation) {
    const char* base = "ring S = ZZ[x]\nscenario s1 @ \"one\"\ncoeff ZZ\n";
    EXPECT_THROW(load_gma(std::string(base) + "claim no_such_kind k1 x @ \"x\"\n"), ParseError);
    EXPECT_THROW(load_gma(std::string(base) + "claim composition_identity k1 x = x @ \"a\"\n"
                                              "claim composition_identity k1 x = x @ \"b\"\n"),
                 ParseError);
    EXPECT_THROW(load_gma(std::string(base) + "scenario s1 @ \"again\"\ncoeff ZZ\n"), ParseError);
}

TEST(Catalog, EntriesAreUniqueAndComplete) {
    auto list = list_scenarios(catalog_documents());
    EXPECT_GE(list.size(), 14u);
    std::set<std::string> ids;
    for (auto& s : list) EXPECT_TRUE(ids.insert(s.id).second) << s.id;
    EXPECT_TRUE(ids.count("ng2-matrix-factorization"));
    EXPECT_TRUE(ids.count("ng1-acyclicity"));
}

TEST(Runner, MatrixFactorizationScenarioPasses) {
    RunConfig cfg;
    cfg.ids = {"ng2-matrix-factorization"};
    cfg.coeff = CoeffSpec{CoeffKind::ZZ, 0};
    auto rep = run_scenarios(catalog_documents(), cfg);
    ASSERT_EQ(rep.scenarios.size(), 1u);
    EXPECT_EQ(rep.exit_code(), 0);
    EXPECT_EQ(rep.scenarios[0].claims[0].status, "pass");
}

TEST(Runner, UnknownScenarioIsAnInputError) {
    RunConfig cfg;
    cfg.ids = {"nonexistent"};
    EXPECT_THROW(run_scenarios(catalog_documents(), cfg), InputError);
}

TEST(Runner, SmallPrimesAreRejected) {
    RunConfig cfg;
    cfg.coeff = CoeffSpec{CoeffKind::FP, 3};
    EXPECT_THROW(run_scenarios(catalog_documents(), cfg), InputError);
}

TEST(Runner, NonGenericAcyclicityOverZ) {
    RunConfig cfg;
    cfg.ids = {"ng1-acyclicity"};
    cfg.coeff = CoeffSpec{CoeffKind::ZZ, 0};
    auto rep = run_scenarios(catalog_documents(), cfg);
    for (auto& c : rep.scenarios[0].claims) EXPECT_EQ(c.status, "pass") << c.claim << ": " << c.message;
}

TEST(Runner, FailingClaimCarriesWitness) {
    RunConfig cfg;
    cfg.ids = {"ng1-presentation"};
    auto rep = run_scenarios(catalog_documents(), cfg);
    const CheckReport* u2 = nullptr;
    for (auto& c : rep.scenarios[0].claims)
        if (c.claim == "u-squared") u2 = &c;
    ASSERT_NE(u2, nullptr);
    // u^2 is (2 t1 + t1^2) I, so the claim with the opposite sign on t1^2
    // leaves 2 t1^2 on the diagonal.
    EXPECT_EQ(u2->status, "fail");
    EXPECT_NE(u2->message.find("2*t1^2"), std::string::npos) << u2->message;
    EXPECT_EQ(rep.exit_code(), 1);
}

TEST(Runner, BadClaimBodyIsAnError) {
    Document d = load_gma(R"(ring S = ZZ[x]
free F = S(0)
map f : F -> F = [[x]]
scenario t @ "t"
coeff ZZ
claim complex_is_complex c1 nosuchcomplex @ "missing"
claim composition_identity c2 f * f = x^2 @ "fine"
claim composition_identity c3 f * f = x^3 @ "false"
)");
    RunConfig cfg;
    auto rep = run_scenarios({&d}, cfg);
    auto& cl = rep.scenarios[0].claims;
    EXPECT_EQ(cl[0].status, "error");
    EXPECT_EQ(cl[1].status, "pass");
    EXPECT_EQ(cl[2].status, "fail");
}

TEST(Runner, ParallelRunMatchesSerialRun) {
    RunConfig cfg;
    cfg.ids = {"ng2-hom-modules", "ng2-ring-structure", "gps-ring"};
    auto a = report_json(run_scenarios(catalog_documents(), cfg), false);
    cfg.jobs = 3;
    auto b = report_json(run_scenarios(catalog_documents(), cfg), false);
    EXPECT_EQ(a.dump(), b.dump());
}

TEST(Report, SchemaAndTextAgree) {
    RunConfig cfg;
    cfg.ids = {"gps-ring", "ng1-presentation"};
    auto rep = run_scenarios(catalog_documents(), cfg);
    auto j = report_json(rep);
    EXPECT_TRUE(validate_json(j, report_schema()).empty());
    std::string text = report_text(rep);
    for (auto& s : j["scenarios"]) {
        EXPECT_NE(text.find(s["id"].get<std::string>()), std::string::npos);
        for (auto& c : s["claims"]) {
            std::string st = c["status"] == "pass" ? "PASS " : c["status"] == "fail" ? "FAIL " : "ERROR";
            EXPECT_NE(text.find(st + " " + c["id"].get<std::string>() + " ["), std::string::npos) << c["id"];
        }
    }
}

TEST(Report, ValidatorRejectsMalformedReports) {
    nlohmann::json bad = {{"run_id", "xyz"}, {"tool_version", "1"}, {"coeff", "zz"}, {"scenarios", 3}};
    auto errs = validate_json(bad, report_schema());
    EXPECT_GE(errs.size(), 3u);
}

TEST(Report, AtomicWriteReplacesFile) {
    auto p = std::filesystem::temp_directory_path() / "wgr_atomic_test.txt";
    write_file_atomic(p.string(), "one");
    write_file_atomic(p.string(), "two");
    EXPECT_EQ(slurp(p.string()), "two");
    std::filesystem::remove(p);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run_cli("verify ng2-matrix-factorization --coeff zz --report text"), 0);
    EXPECT_EQ(run_cli("verify bogus"), 2);
    EXPECT_EQ(run_cli("verify ng1-presentation"), 1);
    EXPECT_EQ(run_cli("verify all --coeff fp:3"), 2);
    EXPECT_EQ(run_cli("verify all --coeff fp:4"), 2);
    EXPECT_EQ(run_cli("gb /nonexistent.gma"), 2);
    EXPECT_EQ(run_cli("list"), 0);
}

TEST(Cli, AdHocFiles) {
    auto dir = std::filesystem::temp_directory_path() / "wgr_cli_test";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "k.gma") << R"(ring K = GF(7)[x, y | weights 1, 1]
free K0 = K(0)
free K1 = K(-1) ++ K(-1)
free K2 = K(-2)
map k1 : K1 -> K0 = [[x, y]]
map k2 : K2 -> K1 = [[y], [-x]]
complex Kos = k1 ; k2
scenario kos @ "Koszul"
coeff GF(7)
claim homology_zero_at exact Kos at 1, 2 @ "exact"
)";
    std::ofstream(dir / "bad.gma") << "ring K = ZZ[x, y | weights 1, 2] / (x + y)\n";
    auto k = (dir / "k.gma").string();
    EXPECT_EQ(run_cli("verify --file " + k), 0);
    EXPECT_EQ(run_cli("homology " + k + " --complex Kos --at 1"), 0);
    EXPECT_EQ(run_cli("homology " + k + " --complex Kos --at 0"), 1);
    EXPECT_EQ(run_cli("gb " + k), 0);
    EXPECT_EQ(run_cli("verify --file " + (dir / "bad.gma").string()), 2);
    EXPECT_EQ(run_cli("export ng2.gma --dir " + (dir / "out").string()), 0);
    EXPECT_EQ(slurp((dir / "out" / "ng2.gma").string()), slurp(std::string(WGR_DATA_DIR) + "/ng2.gma"));
    std::filesystem::remove_all(dir);
}
