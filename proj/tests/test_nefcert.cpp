#include <catch2/catch_amalgamated.hpp>

#include "surf/nefcert.hpp"
#include "surf/rng.hpp"

using namespace surf;

namespace {

ModelPtr f0_free(int n) {
    SurfaceSpec spec;
    spec.base = BaseKind::Hirzebruch;
    spec.r = 0;
    for (int i = 0; i < n; ++i) spec.blowups.push_back(BlowupCenter{});
    return build_surface(spec);
}

ModelPtr appendix_style_model() {
    SurfaceSpec spec;
    spec.base = BaseKind::Hirzebruch;
    spec.r = 0;
    spec.blowups.push_back(BlowupCenter{});
    BlowupCenter near;
    near.kind = CenterKind::InfinitelyNear;
    near.parent = 0;
    near.tangent = TangentDir::Section;
    spec.blowups.push_back(near);
    for (int i = 0; i < 7; ++i) spec.blowups.push_back(BlowupCenter{});
    return build_surface(spec);
}

NefPiece named_piece(const ModelPtr& m, const std::string& name, const DivisorClass& cls,
                     std::vector<std::pair<std::string, DivisorClass>> comps) {
    NefPiece p;
    p.name = name;
    p.cls = cls;
    for (auto& [n, c] : comps) p.components.push_back(NamedComponent{n, c});
    return p;
}

}  // namespace

TEST_CASE("weak del pezzo rule accepts and refuses the right bases") {
    WeakDpVerdict ok = weak_dp_nef(f0_free(2));
    CHECK(ok.minus_k_nef);
    CHECK(ok.k2 == 6);
    REQUIRE_FALSE(ok.audit.empty());

    SurfaceSpec f3;
    f3.base = BaseKind::Hirzebruch;
    f3.r = 3;
    WeakDpVerdict steep = weak_dp_nef(build_surface(f3));
    CHECK_FALSE(steep.minus_k_nef);
    CHECK(steep.refusal.find("(-3)-section") != std::string::npos);

    SurfaceSpec f2;
    f2.base = BaseKind::Hirzebruch;
    f2.r = 2;
    f2.blowups.push_back(BlowupCenter{});
    WeakDpVerdict unpromised = weak_dp_nef(build_surface(f2));
    CHECK_FALSE(unpromised.minus_k_nef);
    CHECK(unpromised.refusal == "a blown point may lie on the (-2)-section");
    f2.blowups[0].off_minus_two = true;
    WeakDpVerdict promised = weak_dp_nef(build_surface(f2));
    CHECK(promised.minus_k_nef);
    CHECK(promised.k2 == 7);

    SurfaceSpec p2;
    p2.base = BaseKind::Plane;
    for (int i = 0; i < 10; ++i) p2.blowups.push_back(BlowupCenter{});
    WeakDpVerdict neg = weak_dp_nef(build_surface(p2));
    CHECK_FALSE(neg.minus_k_nef);
    CHECK(neg.refusal == "K^2 = -1 < 0");
}

TEST_CASE("nef certificates from named decompositions") {
    ModelPtr m = f0_free(2);
    DivisorClass gamma = named_class(m, "Gamma");
    NefCertificate ok = certify_nef(m, gamma,
                                    {named_piece(m, "ruling", gamma, {{"Gamma", gamma}})});
    CHECK(ok.valid);
    REQUIRE(ok.pairings.size() == 1);
    CHECK(ok.pairings[0].first == "ruling");
    CHECK(ok.pairings[0].second == 0);

    NefCertificate neg = certify_nef(m, e_class(m, 1), {});
    CHECK_FALSE(neg.valid);
    CHECK(neg.refusal == "necessary condition fails: L.E1 = -1 < 0");

    NefCertificate badsum = certify_nef(
        m, gamma, {named_piece(m, "s", named_class(m, "Delta_inf"),
                               {{"Delta_inf", named_class(m, "Delta_inf")}})});
    CHECK_FALSE(badsum.valid);
    CHECK(badsum.refusal == "decomposition does not sum to the target class");

    DivisorClass L = gamma - named_class(m, "Delta_inf");
    NefCertificate met = certify_nef(
        m, L,
        {named_piece(m, "a", gamma, {{"Gamma", gamma}}),
         named_piece(m, "b", -named_class(m, "Delta_inf"),
                     {{"Delta_inf", -named_class(m, "Delta_inf")}})});
    CHECK_FALSE(met.valid);
    CHECK(met.refusal == "L meets component Gamma of piece a negatively: -1");

    NefCertificate badcomp = certify_nef(
        m, gamma, {named_piece(m, "p", gamma, {{"Delta_inf", named_class(m, "Delta_inf")}})});
    CHECK_FALSE(badcomp.valid);
    CHECK(badcomp.refusal == "components of piece p do not sum to its class");
}

TEST_CASE("nef certificates with interpolated pieces") {
    ModelPtr m = appendix_style_model();
    PointConfig cfg = sample_config(m, 7);
    DivisorClass d = named_class(m, "Delta_inf"), g = named_class(m, "Gamma");
    DivisorClass L1 = 2 * d + 2 * g - sum_e(m, 1, 7) - e_class(m, 8);
    DivisorClass L2 = 2 * d + 2 * g - sum_e(m, 1, 7) - e_class(m, 9);
    DivisorClass L3 = 6 * d + 8 * g - 3 * sum_e(m, 1, 7) - 4 * e_class(m, 8) -
                      4 * e_class(m, 9);
    DivisorClass L = L1 + L2 + L3;
    std::vector<NefPiece> pieces = {
        interpolate_piece(cfg, "L1", L1, 7),
        interpolate_piece(cfg, "L2", L2, 7),
        interpolate_piece(cfg, "L3", L3, 7),
    };
    NefCertificate cert = certify_nef(m, L, pieces);
    REQUIRE(cert.valid);
    REQUIRE(cert.pairings.size() == 3);
    CHECK(cert.pairings[0].second == 4);
    CHECK(cert.pairings[1].second == 4);
    CHECK(cert.pairings[2].second == 7);

    // a piece whose system is overdetermined cannot enter a certificate
    ModelPtr m4 = f0_free(4);
    PointConfig cfg4 = sample_config(m4, 5);
    DivisorClass none = named_class(m4, "Delta_inf") + named_class(m4, "Gamma") -
                        sum_e(m4, 1, 4);
    NefCertificate bad = certify_nef(m4, none, {interpolate_piece(cfg4, "ghost", none, 5)});
    CHECK_FALSE(bad.valid);
    CHECK(bad.refusal == "piece ghost lacks a verified interpolation witness");
}

TEST_CASE("nef evidence combinations validate multipliers and pullbacks") {
    SurfaceSpec f2;
    f2.base = BaseKind::Hirzebruch;
    f2.r = 2;
    for (int i = 0; i < 3; ++i) {
        BlowupCenter b;
        b.off_minus_two = true;
        f2.blowups.push_back(b);
    }
    ModelPtr m = build_surface(f2);
    WeakDpVerdict w = weak_dp_nef(m);
    REQUIRE(w.minus_k_nef);
    DivisorClass K = canonical_class(m);

    SplitMix64 rng(41);
    for (int trial = 0; trial < 120; ++trial) {
        long a = static_cast<long>(rng.range(0, 6));
        long b = static_cast<long>(rng.range(0, 6));
        DivisorClass L = a * -K + b * named_class(m, "Gamma");
        WeakDpCombination comb{w, {{rat(a), "-K"}, {rat(b), "Gamma"}}};
        EvidenceCheck ec = validate_nef_evidence(m, L, comb);
        CHECK(ec.ok);
        // perturbing the target must be rejected
        EvidenceCheck off = validate_nef_evidence(m, L + named_class(m, "Gamma"), comb);
        CHECK_FALSE(off.ok);
        CHECK(off.reason == "combination does not sum to the class");
    }

    WeakDpCombination negmult{w, {{rat(-1), "-K"}}};
    EvidenceCheck nm = validate_nef_evidence(m, K, negmult);
    CHECK_FALSE(nm.ok);
    CHECK(nm.reason == "combination uses a negative multiplier");

    WeakDpCombination nonpull{w, {{rat(1), "E1"}}};
    EvidenceCheck np = validate_nef_evidence(m, e_class(m, 1), nonpull);
    CHECK_FALSE(np.ok);
    CHECK(np.reason.find("not a nef pullback") != std::string::npos);

    // a certificate aimed at a different class is rejected outright
    ModelPtr f0 = f0_free(2);
    DivisorClass gm = named_class(f0, "Gamma");
    NefCertificate cert =
        certify_nef(f0, gm, {named_piece(f0, "ruling", gm, {{"Gamma", gm}})});
    REQUIRE(cert.valid);
    EvidenceCheck wrong = validate_nef_evidence(f0, 2 * gm, NefEvidence{cert});
    CHECK_FALSE(wrong.ok);
    CHECK(wrong.reason == "nef certificate targets a different class");
}

TEST_CASE("adjoint criterion with an odd canonical part") {
    SurfaceSpec f2;
    f2.base = BaseKind::Hirzebruch;
    f2.r = 2;
    for (int i = 0; i < 8; ++i) {
        BlowupCenter b;
        b.off_minus_two = true;
        f2.blowups.push_back(b);
    }
    ModelPtr m = build_surface(f2);
    DivisorClass K = canonical_class(m);
    DivisorClass L = 5 * -K + 2 * named_class(m, "Gamma");
    WeakDpCombination comb{weak_dp_nef(m), {{rat(5), "-K"}, {rat(2), "Gamma"}}};
    BpfVerdict v = reider_bpf(m, L, NefEvidence{comb});
    REQUIRE(v.bpf);
    CHECK(v.rule == "adjoint criterion, odd canonical part");
    CHECK(v.data.at("L^2") == 40);
    CHECK(v.data.at("a") == 0);
    CHECK(v.target == K + L);
    REQUIRE(v.d_class.has_value());
    CHECK(*v.d_class == rat(1, 2) * (L - K));
}

TEST_CASE("adjoint criterion falls back to even canonical multiples") {
    SurfaceSpec p2;
    p2.base = BaseKind::Plane;
    for (int i = 0; i < 7; ++i) p2.blowups.push_back(BlowupCenter{});
    ModelPtr m = build_surface(p2);
    DivisorClass K = canonical_class(m);
    DivisorClass L = 6 * -K;
    WeakDpCombination comb{weak_dp_nef(m), {{rat(6), "-K"}}};
    BpfVerdict v = reider_bpf(m, L, NefEvidence{comb});
    REQUIRE(v.bpf);
    CHECK(v.rule == "adjoint criterion, even canonical multiple");
    CHECK(v.data.at("m") == -3);
    CHECK(v.data.at("L^2") == 72);
    CHECK(v.target == K + L);
}

TEST_CASE("adjoint criterion refusals") {
    ModelPtr m = f0_free(0);
    WeakDpVerdict w = weak_dp_nef(m);
    DivisorClass g = named_class(m, "Gamma"), d = named_class(m, "Delta_inf");

    BpfVerdict small = reider_bpf(m, g, NefEvidence{WeakDpCombination{w, {{rat(1), "Gamma"}}}});
    CHECK_FALSE(small.bpf);
    CHECK(small.refusal == "L^2 = 0 < 5");

    BpfVerdict frac = reider_bpf(m, rat(1, 2) * g, NefEvidence{WeakDpCombination{w, {}}});
    CHECK_FALSE(frac.bpf);
    CHECK(frac.refusal == "L is not an integral class");

    BpfVerdict badev =
        reider_bpf(m, -canonical_class(m),
                   NefEvidence{WeakDpCombination{w, {{rat(-1), "-K"}}}});
    CHECK_FALSE(badev.bpf);
    CHECK(badev.refusal.find("nef evidence rejected") == 0);

    // odd Delta_inf coefficient with even K blocks both decompositions
    DivisorClass L = 3 * d + 2 * g;
    BpfVerdict stuck = reider_bpf(
        m, L, NefEvidence{WeakDpCombination{w, {{rat(3), "Delta_inf"}, {rat(2), "Gamma"}}}});
    CHECK_FALSE(stuck.bpf);
    CHECK(stuck.refusal == "no mod-2 canonical decomposition of L found for |a| <= 10");
    CHECK(stuck.data.at("L^2") == 12);
}

TEST_CASE("pencil and sum rules") {
    ModelPtr m = f0_free(0);
    BpfVerdict p = pencil_bpf(m);
    REQUIRE(p.bpf);
    CHECK(p.rule == "pullback of a base-point-free pencil");
    CHECK(p.target == named_class(m, "Gamma"));

    SurfaceSpec plane;
    plane.base = BaseKind::Plane;
    BpfVerdict noruling = pencil_bpf(build_surface(plane));
    CHECK_FALSE(noruling.bpf);
    CHECK(noruling.refusal == "no ruling pencil on this base");

    BpfVerdict twice = compose_bpf(p, p);
    REQUIRE(twice.bpf);
    CHECK(twice.rule == "sum of base-point-free classes");
    CHECK(twice.target == 2 * named_class(m, "Gamma"));

    BpfVerdict broken = compose_bpf(p, noruling);
    CHECK_FALSE(broken.bpf);
    CHECK(broken.refusal == "a summand is not certified base-point free");
}

TEST_CASE("extension across a (-1)-curve") {
    ModelPtr m = f0_free(7);
    DivisorClass K = canonical_class(m);
    DivisorClass L = 5 * -K;
    WeakDpVerdict w = weak_dp_nef(m);
    REQUIRE(w.minus_k_nef);
    NefEvidence five{WeakDpCombination{w, {{rat(5), "-K"}}}};
    BpfVerdict base = reider_bpf(m, L, five);
    REQUIRE(base.bpf);
    CHECK(base.target == 4 * -K);

    DivisorClass zero = zero_class(m);
    BpfVerdict ext = extend_bpf(base, e_class(m, 1), L, five, zero,
                                {"the extension curve is irreducible"});
    REQUIRE(ext.bpf);
    CHECK(ext.rule == "extension across a (-1)-curve");
    CHECK(ext.target == 4 * -K + e_class(m, 1));
    CHECK(ext.data.at("Omega.E") == 4);
    bool assumed = false;
    for (const auto& a : ext.audit)
        if (a == "assumed: the extension curve is irreducible") assumed = true;
    CHECK(assumed);

    // refusal paths
    BpfVerdict notminus =
        extend_bpf(base, named_class(m, "Gamma"), L, five, zero, {});
    CHECK_FALSE(notminus.bpf);
    CHECK(notminus.refusal == "E is not a (-1)-curve class");

    BpfVerdict orth = extend_bpf(pencil_bpf(m), e_class(m, 1), L, five, zero, {});
    CHECK_FALSE(orth.bpf);
    CHECK(orth.refusal == "Omega.E = 0 is not positive");

    BpfVerdict wrongdec =
        extend_bpf(base, e_class(m, 1), L, five, e_class(m, 2), {});
    CHECK_FALSE(wrongdec.bpf);
    CHECK(wrongdec.refusal == "Omega does not decompose as K + L + D");

    DivisorClass gamma = named_class(m, "Gamma");
    NefEvidence thin{WeakDpCombination{w, {{rat(1), "Gamma"}}}};
    DivisorClass slack = base.target - K - gamma;
    BpfVerdict notbig = extend_bpf(base, e_class(m, 1), gamma, thin, slack, {});
    CHECK_FALSE(notbig.bpf);
    CHECK(notbig.refusal == "L^2 = 0 is not positive, L is not big");
}
