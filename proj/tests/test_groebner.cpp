#include <gtest/gtest.h>

#include <filesystem>

#include "support.hpp"
#include "wgr/cache.hpp"

using namespace wgr;
using namespace wgr::testing;

namespace {

const char* kHyper = "ring P = ZZ[a0, a1p, b0, b1, c | weights 0, 0, 2, 2, -2]\n";

template <class D>
std::vector<std::string> strs(const Ring<D>& R, const GroebnerBasis<D>& G) {
    std::vector<std::string> v;
    for (auto& g : G.elems) v.push_back(poly_str(R, g));
    return v;
}

}  // namespace

TEST(NormalForm, RelationItselfReducesToZero) {
    Env<Integers> e(kHyper);
    auto& R = e.R("P");
    auto f = e.p("P", "a0*b1 + a1p*b0");
    auto G = groebner_basis(R, 1, {f}, {false}, false);
    EXPECT_TRUE(G.normal_form(f).empty());
    EXPECT_EQ(poly_str(R, G.normal_form(e.p("P", "a0"))), "a0");
}

TEST(NormalForm, OneReductionStep) {
    Env<Integers> e(kHyper);
    auto& R = e.R("P");
    auto f = e.p("P", "a0*b1 + a1p*b0");
    auto G = groebner_basis(R, 1, {f}, {false}, false);
    // Under degrevlex with a0 > a1p > b0 > b1 > c the lead is a1p*b0, so
    // b0*(a0*b1) is already reduced; the other lead choice gives -a1p*b0^2.
    auto nf = G.normal_form(e.p("P", "b0*a0*b1"));
    bool lead_a1p = R.cmp(e.p("P", "a1p*b0")[0].m, e.p("P", "a0*b1")[0].m) > 0;
    EXPECT_TRUE(poly_equal(R, nf, lead_a1p ? e.p("P", "a0*b0*b1") : e.p("P", "-a1p*b0^2")));
    EXPECT_TRUE(G.normal_form(poly_sub(R, nf, e.p("P", "b0*a0*b1"))).empty());
}

TEST(Buchberger, PrincipalIdeal) {
    Env<Integers> e(kHyper);
    auto& R = e.R("P");
    auto G = groebner_basis(R, 1, {e.p("P", "a0*b1 + a1p*b0")}, {false}, false);
    ASSERT_EQ(G.elems.size(), 1u);
}

TEST(Buchberger, HandExampleOverQ) {
    Rationals Q;
    Ring<Rationals> R("R", {"x", "y"}, {}, Q, OrderKind::Lex);
    auto x = poly_var(R, 0), y = poly_var(R, 1), one = poly_const(R, Q.one());
    auto G = groebner_basis(R, 1, {poly_sub(R, poly_mul(R, x, x), one), poly_sub(R, poly_mul(R, x, y), one)}, {false},
                            false);
    EXPECT_EQ(strs(R, G), (std::vector<std::string>{"y^2 - 1", "x - y"}));
}

TEST(Buchberger, StrongBasisOverZ) {
    Integers Z;
    Ring<Integers> R("R", {"x", "y"}, {}, Z);
    auto G = groebner_basis(R, 1, {poly_scale(R, poly_var(R, 0), mpz_class(2)), poly_scale(R, poly_var(R, 1), mpz_class(3))},
                            {false}, false);
    auto s = strs(R, G);
    std::sort(s.begin(), s.end());
    EXPECT_EQ(s, (std::vector<std::string>{"2*x", "3*y", "x*y"}));
}

TEST(Buchberger, MembershipOverZIsNotMembershipOverQ) {
    Integers Z;
    Ring<Integers> R("R", {"x"}, {}, Z);
    auto G = groebner_basis(R, 1, {poly_scale(R, poly_var(R, 0), mpz_class(2))}, {false}, false);
    EXPECT_FALSE(G.normal_form(poly_var(R, 0)).empty());
    EXPECT_TRUE(G.normal_form(poly_scale(R, poly_var(R, 0), mpz_class(6))).empty());
}

TEST(Canonicity, FieldInstances) {
    auto r = gb_canonicity(PrimeField(5), 30, 11);
    auto q = gb_canonicity(Rationals{}, 20, 12);
    EXPECT_EQ(r.failures + q.failures, 0) << r.first_failure << q.first_failure;
    EXPECT_EQ(r.instances + q.instances, 50);
}

TEST(Canonicity, IntegerInstances) {
    auto r = gb_canonicity(Integers{}, 50, 13);
    EXPECT_EQ(r.failures, 0) << r.first_failure;
}

TEST(Cache, MemoryAndDiskRoundTrip) {
    auto dir = std::filesystem::temp_directory_path() / "wgr_cache_test";
    std::filesystem::remove_all(dir);
    auto& C = GBCache::instance();
    C.set_directory(dir.string());
    C.clear_memory();
    Integers Z;
    Ring<Integers> R("R", {"x", "y", "z"}, {}, Z);
    std::vector<Poly<Integers>> gens = {poly_sub(R, poly_mul(R, poly_var(R, 0), poly_var(R, 1)), poly_var(R, 2)),
                                        poly_sub(R, poly_mul(R, poly_var(R, 1), poly_var(R, 1)), poly_var(R, 0))};
    auto cold = groebner_basis(R, 1, gens, {false}, true);
    uint64_t hits = C.hits();
    C.clear_memory();
    auto warm = groebner_basis(R, 1, gens, {false}, true);
    EXPECT_EQ(C.hits(), hits + 1);
    EXPECT_TRUE(same_basis(R, cold, warm));
    EXPECT_FALSE(std::filesystem::is_empty(dir));
    C.set_directory("");
    C.clear_memory();
    std::filesystem::remove_all(dir);
}

TEST(Cache, KeyIsContentAddressed) {
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
