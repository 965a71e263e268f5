#include <catch2/catch_amalgamated.hpp>

#include "surf/moduli.hpp"
#include "surf/rng.hpp"

using namespace surf;

TEST_CASE("base automorphism dimensions") {
    SurfaceSpec p2;
    p2.base = BaseKind::Plane;
    CHECK(aut_dim_of_base(p2) == 8);
    SurfaceSpec f;
    f.base = BaseKind::Hirzebruch;
    f.r = 0;
    CHECK(aut_dim_of_base(f) == 6);
    f.r = 1;
    CHECK(aut_dim_of_base(f) == 6);
    f.r = 5;
    CHECK(aut_dim_of_base(f) == 10);
}

TEST_CASE("configuration degrees of freedom accumulate per center") {
    SplitMix64 rng(314);
    for (int trial = 0; trial < 120; ++trial) {
        SurfaceSpec spec;
        spec.base = BaseKind::Hirzebruch;
        spec.r = 0;
        long expected = 0;
        std::map<int, bool> seen;
        int n = static_cast<int>(rng.range(0, 10));
        for (int i = 0; i < n; ++i) {
            switch (rng.range(0, 3)) {
                case 0: {
                    spec.blowups.push_back(BlowupCenter{});
                    expected += 2;
                    break;
                }
                case 1: {
                    BlowupCenter b;
                    b.kind = CenterKind::InfinitelyNear;
                    b.parent = 0;
                    b.tangent = TangentDir::None;
                    spec.blowups.push_back(b);
                    expected += 1;
                    break;
                }
                case 2: {
                    BlowupCenter b;
                    b.kind = CenterKind::InfinitelyNear;
                    b.parent = 0;
                    b.tangent = TangentDir::Fibre;
                    spec.blowups.push_back(b);
                    break;  // pinned direction adds nothing
                }
                case 3: {
                    BlowupCenter b;
                    b.kind = CenterKind::OnCurve;
                    b.curve_group = static_cast<int>(rng.range(1, 3));
                    b.curve_params = 1;
                    spec.blowups.push_back(b);
                    expected += 1;
                    if (!seen[b.curve_group]) {
                        seen[b.curve_group] = true;
                        expected += 1;
                    }
                    break;
                }
            }
        }
        REQUIRE(point_dof(spec) == expected);
    }
}

TEST_CASE("the six families carry their expected dimensions") {
    std::vector<FamilyRecord> fams = surface_families();
    REQUIRE(fams.size() == 6);
    const char* names[] = {"M_1", "M_2", "M_3", "M_4", "M_5", "M_1_0"};
    long chis[] = {20, 17, 31, 28, 25, 24};
    long dims[] = {28, 27, 33, 32, 31, 32};
    for (size_t i = 0; i < fams.size(); ++i) {
        CHECK(fams[i].name == names[i]);
        DimensionResult r = family_dimension(fams[i]);
        CHECK(r.chi_omega == chis[i]);
        CHECK(r.dim == dims[i]);
        CHECK(r.dim == fams[i].expected_dim);
        CHECK(r.assumptions.size() == 2);
    }
    // spot-check the bookkeeping of the first family: chi - 1 + dof - aut
    DimensionResult r1 = family_dimension(fams[0]);
    CHECK(r1.dof == 16);
    CHECK(r1.aut == 7);
    CHECK(r1.dim == 20 - 1 + 16 - 7);
    // and the double-fibre family: ten curve points plus five shared fibres
    DimensionResult r6 = family_dimension(fams[5]);
    CHECK(r6.dof == 15);
    CHECK(r6.aut == 6);
}

TEST_CASE("fractional euler characteristics are rejected") {
    std::vector<FamilyRecord> fams = surface_families();
    FamilyRecord bad = fams[1];
    bad.branch_moving_class = rat(1, 2) * named_class(bad.model, "Gamma");
    CHECK_THROWS(family_dimension(bad));
}

TEST_CASE("conic bundle triple products") {
    PV2Ring ring{23};
    PV2Class H{rat(1), rat(0)}, G{rat(0), rat(1)};
    CHECK(pv2_triple(ring, H, H, H) == 23);
    CHECK(pv2_triple(ring, H, H, G) == 1);
    CHECK(pv2_triple(ring, H, G, G) == 0);
    CHECK(pv2_triple(ring, G, G, G) == 0);

    SplitMix64 rng(555);
    auto rnd = [&]() {
        return PV2Class{rng.rational(9, 4), rng.rational(9, 4)};
    };
    for (int trial = 0; trial < 120; ++trial) {
        PV2Class a = rnd(), b = rnd(), c = rnd();
        Rat t = pv2_triple(ring, a, b, c);
        CHECK(t == pv2_triple(ring, b, a, c));
        CHECK(t == pv2_triple(ring, c, b, a));
        PV2Class a2{a.h + 1, a.g - 2};
        CHECK(pv2_triple(ring, a2, b, c) ==
              t + pv2_triple(ring, PV2Class{rat(1), rat(-2)}, b, c));
    }
}

TEST_CASE("log tangent bound, resolved route") {
    LogTangentBound b = log_tangent_bound(6, 5);
    CHECK(b.ring_degree == 23);
    CHECK(b.chi_tangent_ruled == 6);
    CHECK(b.chi_tangent_resolved == -14);
    CHECK(b.surface_class.h == 3);
    CHECK(b.surface_class.g == -22);
    CHECK(b.adjoint_class.h == 4);
    CHECK(b.adjoint_class.g == -31);
    CHECK(b.conic_class.h == 2);
    CHECK(b.conic_class.g == -12);
    CHECK(b.triple == 46);
    CHECK(b.bound == 32);
    REQUIRE(b.bound_surface.has_value());
    CHECK(*b.bound_surface == 32);
    CHECK(b.assumptions.size() == 2);
}

TEST_CASE("log tangent bound, unresolved cross-check") {
    LogTangentBound b = log_tangent_bound(6, 0);
    CHECK(b.ring_degree == 18);
    CHECK(b.chi_tangent_resolved == 6);
    CHECK(b.triple == 96);
    CHECK(b.bound == 42);
    CHECK_FALSE(b.bound_surface.has_value());
}

TEST_CASE("deformation bookkeeping agrees along both routes") {
    DeformationReport r = deformation_report();
    CHECK(r.chi_neg_d1 == -10);
    CHECK(r.chi_neg_d2 == 0);
    CHECK(r.h1_upstairs == 42);
    CHECK(r.h1_downstairs == 32);
    CHECK(r.kuranishi_floor == 32);
    CHECK(r.h1_upstairs == r.log_bound.bound - r.chi_neg_d1);
    CHECK(r.h1_downstairs == r.kuranishi_floor);
    CHECK(r.log_bound.bound == r.kuranishi_floor);
    CHECK(r.log_bound_unresolved.bound == 42);
    CHECK(r.assumptions.size() == 2);
}
