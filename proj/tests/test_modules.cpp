#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "support.hpp"

using namespace wgr;
using namespace wgr::testing;

namespace {

std::string data_file(const std::string& name) {
    std::ifstream f(std::string(WGR_DATA_DIR) + "/" + name);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

const char* kKoszul = R"(
ring K = QQ[x, y | weights 1, 1]
free K0 = K(0)
free K1 = K(-1) ++ K(-1)
free K2 = K(-2)
map k1 : K1 -> K0 = [[x, y]]
map k2 : K2 -> K1 = [[y], [-x]]
map zero1 : K0 -> K0 = [[0]]
complex Kos = k1 ; k2
complex Lone = zero1
)";

}  // namespace

TEST(Syzygy, KoszulRelation) {
    Env<Rationals> e(kKoszul, qq());
    auto& R = e.R("K");
    auto syz = syzygy_basis(R, e.map("k1"));
    auto res = submodule_equal(R, 2, syz, e.map("k2").cols);
    EXPECT_TRUE(res.equal);
}

TEST(Syzygy, ZeroMapKernelIsEverything) {
    Env<Rationals> e(kKoszul, qq());
    auto& R = e.R("K");
    auto syz = syzygy_basis(R, e.map("zero1"));
    EXPECT_TRUE(submodule_equal(R, 1, syz, {basis_vec(R, 0)}).equal);
}

TEST(Syzygy, KernelOfMIsSpanOfN) {
    Env<Integers> e(data_file("ng2.gma"));
    auto& R = e.R("S");
    auto syz = syzygy_basis(R, e.map("d1"));
    EXPECT_TRUE(submodule_equal(R, 2, syz, e.map("d2").cols).equal);
}

TEST(Syzygy, SoundnessOnRandomInstances) {
    auto a = syzygy_soundness(PrimeField(5), 20, 21);
    auto b = syzygy_soundness(Integers{}, 20, 22);
    EXPECT_EQ(a.failures + b.failures, 0) << a.first_failure << b.first_failure;
}

TEST(Syzygy, CompletenessAgainstLinearAlgebra) {
    auto r = syzygy_completeness(12, 8, 23);
    EXPECT_EQ(r.failures, 0) << r.first_failure;
    EXPECT_EQ(r.instances, 12);
}

TEST(SubmoduleEquality, Examples) {
    Env<Rationals> e(kKoszul, qq());
    auto& R = e.R("K");
    auto x = e.p("K", "x"), x2 = e.p("K", "x^2");
    EXPECT_TRUE(submodule_equal(R, 1, {x}, {x, x2}).equal);
    auto r = submodule_equal(R, 1, {x}, {x2});
    EXPECT_FALSE(r.equal);
    EXPECT_EQ(r.side, 1);
    EXPECT_EQ(poly_str(R, r.witness), "x");
}

TEST(SubmoduleEquality, HomQIntoL1) {
    Env<Integers> e(data_file("ng2.gma"));
    auto& R = e.R("S");
    auto H = e.m->hom_of(R, e.m->module("Q").m, e.m->module("L1").m);
    std::vector<Vec<Integers>> want = {vectorize(e.map("phi23_0")), vectorize(e.map("phi23_1"))};
    EXPECT_TRUE(submodule_equal(R, H.amb.rank(), H.sub, want, H.rel).equal);
}

TEST(Homology, ResolutionOfQIsExact) {
    Env<Integers> e(data_file("ng2.gma"));
    auto& E = e.m->complex("ResQ");
    auto& R = e.R("S");
    for (int i = 1; i <= 4; ++i) {
        auto h = homology_is_zero(R, E.c, i);
        ASSERT_TRUE(h.zero) << i;
        // Lifts re-verify: d(preimage) equals the cycle.
        for (auto& l : h.lifts)
            EXPECT_TRUE(R.reduce(poly_sub(R, apply_map(R, E.c.d[i + 1], l.preimage), l.cycle)).empty());
    }
}

TEST(Homology, LoneRingHasHomology) {
    Env<Rationals> e(kKoszul, qq());
    auto& E = e.m->complex("Lone");
    auto& R = e.R("K");
    // 0 -> K -0-> K -> 0: position 1 has cycles K and no boundaries.
    auto h = homology_is_zero(R, E.c, 1);
    EXPECT_FALSE(h.zero);
    EXPECT_EQ(vec_str(R, h.bad, 1), "[1]");
}

TEST(Homology, KoszulMiddleIsExact) {
    Env<Rationals> e(kKoszul, qq());
    auto& E = e.m->complex("Kos");
    auto& R = e.R("K");
    EXPECT_TRUE(homology_is_zero(R, E.c, 1).zero);
    EXPECT_TRUE(homology_is_zero(R, E.c, 2).zero);
    EXPECT_FALSE(homology_is_zero(R, E.c, 0).zero);
}

TEST(Homology, PresentationOfH0IsTheCokernel) {
    Env<Integers> e(data_file("ng2.gma"));
    auto& R = e.R("S");
    auto H0 = homology_presentation(R, e.m->complex("ResQ").c, 0);
    auto& Q = e.m->module("Q").m;
    EXPECT_TRUE(submodule_equal(R, 2, H0.rel, Q.rel).equal);
    EXPECT_TRUE(submodule_equal(R, 2, H0.sub, basis(R, 2)).equal);
}

TEST(Hom, BetweenTwists) {
    Env<Integers> e("ring S = ZZ[x, y | weights 1, 1]\nfree A = S(2)\nfree B = S(-1)\n");
    auto& R = e.R("S");
    auto H = e.m->hom_of(R, e.m->module("A").m, e.m->module("B").m);
    // One free generator, shifted by the difference of the twists.
    ASSERT_EQ(H.amb.rank(), 1);
    auto& A = e.m->free("A").F;
    auto& B = e.m->free("B").F;
    EXPECT_EQ(H.amb.degs[0], B.degs[0] - A.degs[0]);
    EXPECT_NE(A.degs[0], B.degs[0]);
    auto gens = H.gens(R);
    ASSERT_EQ(gens.size(), 1u);
    EXPECT_TRUE(H.rel.empty());
}

TEST(Hom, InclusionGeneratesHomLm1Q) {
    Env<Integers> e(data_file("ng2.gma"));
    auto& R = e.R("S");
    auto H = e.m->hom_of(R, e.m->module("Lm1").m, e.m->module("Q").m);
    auto d0 = degree_part(R, H.amb, H.sub, 0);
    EXPECT_TRUE(submodule_equal(R, H.amb.rank(), d0, {vectorize(e.map("phi31"))}, H.rel).equal);
}

TEST(Annihilator, Examples) {
    Env<Integers> e(R"(
ring S = ZZ[a0, b0, b1 | weights 0, 2, 2]
free F = S(0)
free G = S(-2) ++ S(-2)
map j : G -> F = [[b0, b1]]
module M = coker j
)");
    auto& R = e.R("S");
    auto ann = annihilator(R, e.m->module("M").m);
    std::vector<Vec<Integers>> A(ann.begin(), ann.end());
    EXPECT_TRUE(submodule_equal(R, 1, A, {e.p("S", "b0"), e.p("S", "b1")}).equal);
    EXPECT_TRUE(annihilator(R, e.m->module("G").m).empty());
}

TEST(Hilbert, Examples) {
    Env<PrimeField> e(R"(
ring S = GF(5)[a0, a1p, b0, b1, c | weights 0, 0, 2, 2, -2]
free L3 = S(-3)
free Lm1 = S(1)
free Kb = S(-3) ++ S(-3) ++ S(-1)
free Kc = S(1) ++ S(1) ++ S(-1) ++ S(-1)
map kb : Kb -> L3 = [[a0, a1p, c]]
map kc : Kc -> Lm1 = [[a0, a1p, b0, b1]]
module Mb = coker kb
module Mc = coker kc
free F = S(0)
map one : F -> F = [[1]]
module Zero = coker one
)", fp(5));
    auto& R = e.R("S");
    HilbertCounter<PrimeField> hb(R, present(R, e.m->module("Mb").m));
    EXPECT_EQ(hb.value(3), 1u);
    EXPECT_EQ(hb.value(5), 2u);
    EXPECT_EQ(hb.value(7), 3u);
    EXPECT_EQ(hb.value(4), 0u);
    HilbertCounter<PrimeField> hc(R, present(R, e.m->module("Mc").m));
    for (int d : {-1, -3, -5}) EXPECT_EQ(hc.value(d), 1u) << d;
    for (int d : {-9, -2, 0, 4}) EXPECT_EQ(hilbert_value(R, e.m->module("Zero").m, d), 0u);
}

TEST(Hilbert, InfinitePieceIsReported) {
    Env<PrimeField> e("ring S = GF(5)[a, b | weights 0, 2]\nfree F = S(0)\n", fp(5));
    auto& R = e.R("S");
    EXPECT_THROW(hilbert_value(R, e.m->module("F").m, 0), InfinitePieceError);
}

TEST(CyclicMatch, Examples) {
    Env<PrimeField> e(R"(
ring S = GF(5)[x, y | weights 1, 1]
free F = S(0)
free G = S(-1)
map jx : G -> F = [[x]]
module Mx = coker jx
)", fp(5));
    auto& R = e.R("S");
    auto ok = match_cyclic_quotient(R, e.m->module("Mx").m, {e.p("S", "x")}, 0, 6, true);
    EXPECT_TRUE(ok.ok) << ok.reason;
    auto bad = match_cyclic_quotient(R, e.m->module("Mx").m, {e.p("S", "y")}, 0, 6, true);
    EXPECT_FALSE(bad.ok);
    EXPECT_EQ(bad.reason, "annihilator differs");
    EXPECT_FALSE(bad.ann_cmp.equal);
}

TEST(CyclicMatch, SecondSimpleModuleH0) {
    Env<PrimeField> e(data_file("ng2.gma"), fp(5));
    auto& E = e.m->complex("Simple2");
    auto& R = e.R(E.ring);
    auto H0 = homology_presentation(R, E.c, E.c.position(0));
    auto r = match_cyclic_quotient(R, H0, {e.p("S", "a0"), e.p("S", "a1p"), e.p("S", "c")}, 1, 9, true);
    EXPECT_TRUE(r.ok) << r.reason;
}

TEST(MatrixFactorization, Examples) {
    Env<Integers> e(data_file("ng2.gma"));
    auto& P = e.R("P");
    EXPECT_FALSE(verify_matrix_factorization(P, e.map("Mt"), e.map("Nt"), e.p("P", "a1p*b0 + a0*b1")).has_value());
    EXPECT_TRUE(verify_matrix_factorization(P, e.map("Mt"), e.map("Nt"), e.p("P", "a1p*b0")).has_value());
    Env<Integers> s(R"(
ring R = ZZ[x, y | weights 1, 1]
free A = R(0)
free B = R(1) ++ R(1)
map I2 : B -> B = [[1, 0], [0, 1]]
free C = R(-1)
map mx : C -> A = [[x]]
map my : C -> A = [[y]]
)");
    auto& R = s.R("R");
    EXPECT_FALSE(verify_matrix_factorization(R, s.map("I2"), s.map("I2"), s.p("R", "1")).has_value());
    // 1x1: (x)(y) = xy, read as square matrices of size one.
    ModuleMap<Integers> X = s.map("mx"), Y = s.map("my");
    X.src = X.tgt = Y.src = Y.tgt = FreeModule{"", {0}};
    EXPECT_FALSE(verify_matrix_factorization(R, X, Y, s.p("R", "x*y")).has_value());
}

// Saturation by iterated colon ideals agrees with the Rabinowitsch trick
// (eliminate z from I + (z f - 1)).
TEST(Localization, SaturationMatchesRabinowitsch) {
    std::mt19937_64 rng(31);
    PrimeField F(5);
    for (int k = 0; k < 8; ++k) {
        Ring<PrimeField> S("S", {"x", "y"}, {}, F);
        Ring<PrimeField> T("T", {"z", "x", "y"}, {}, F, OrderKind::Lex);
        std::vector<Poly<PrimeField>> I;
        for (int j = 0; j < 2; ++j) I.push_back(random_poly(S, rng, 2, 3, 2));
        I.push_back(poly_mul(S, poly_var(S, 0), random_poly(S, rng, 2, 2, 2)));
        Poly<PrimeField> f = poly_var(S, 0);
        // Iterated colon.
        ModuleMap<PrimeField> mul;
        mul.src.degs = mul.tgt.degs = {0};
        mul.cols = {f};
        std::vector<Vec<PrimeField>> J = I;
        for (int it = 0; it < 20; ++it) {
            auto next = preimage_of_rel(S, mul, {basis_vec(S, 0)}, J, true);
            if (submodule_equal(S, 1, next, J).equal) break;
            J = next;
        }
        // Elimination.
        auto lift = [&](const Poly<PrimeField>& p) {
            std::vector<Term<PrimeField>> ts;
            for (auto t : p) {
                Monomial m;
                for (int i = 0; i < 2; ++i) m.e[i + 1] = t.m.e[i];
                m.refresh();
                ts.push_back({m, t.c});
            }
            return poly_from_terms(T, ts);
        };
        std::vector<Poly<PrimeField>> gens;
        for (auto& g : I) gens.push_back(lift(g));
        gens.push_back(poly_sub(T, poly_mul(T, poly_var(T, 0), lift(f)), poly_const(T, F.one())));
        auto G = groebner_basis(T, 1, gens, {false}, false);
        std::vector<Vec<PrimeField>> E;
        for (auto& g : G.elems) {
            bool has_z = false;
            for (auto& t : g) has_z |= t.m.e[0] > 0;
            if (has_z) continue;
            std::vector<Term<PrimeField>> ts;
            for (auto t : g) {
                Monomial m;
                for (int i = 0; i < 2; ++i) m.e[i] = t.m.e[i + 1];
                m.refresh();
                ts.push_back({m, t.c});
            }
            E.push_back(poly_from_terms(S, ts));
        }
        EXPECT_TRUE(submodule_equal(S, 1, J, E).equal) << "instance " << k;
    }
}
