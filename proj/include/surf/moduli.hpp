#pragma once

// dimension counts for the families of branch data, and the deformation
// bookkeeping for the genus-2 degeneration.
//
// a family is recorded by its rational surface model, the moving class of
// the branch curve, and the degrees of freedom of the blown-up points.  its
// expected dimension is
//
//     (chi(Omega) - 1) + point_dof - dim Aut(base)
//
// assuming the higher cohomology of Omega vanishes, so chi counts sections.

#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "surf/classify.hpp"
#include "surf/lattice.hpp"

namespace surf {

inline long aut_dim_of_base(const SurfaceSpec& spec) {
    if (spec.base == BaseKind::Plane) return 8;
    if (spec.r == 0) return 6;
    return spec.r + 5;
}

// degrees of freedom of the blown-up configuration: a free point moves in a
// surface (2), an infinitely near point with free direction moves in a P1
// (1), a prescribed tangent direction pins it (0), a point on a curve moves
// along the curve (1) and the shared curve contributes its own parameters
// once per group
inline long point_dof(const SurfaceSpec& spec) {
    long dof = 0;
    std::map<int, bool> seen_group;
    for (const auto& b : spec.blowups) {
        switch (b.kind) {
            case CenterKind::Free:
                dof += 2;
                break;
            case CenterKind::InfinitelyNear:
                dof += b.tangent == TangentDir::None ? 1 : 0;
                break;
            case CenterKind::OnCurve:
                dof += 1;
                if (!seen_group[b.curve_group]) {
                    seen_group[b.curve_group] = true;
                    dof += b.curve_params;
                }
                break;
        }
    }
    return dof;
}

struct FamilyRecord {
    std::string name;
    ModelPtr model;
    DivisorClass branch_moving_class;
    long expected_dim = 0;
};

struct DimensionResult {
    long dim = 0;
    Rat chi_omega;
    long dof = 0;
    long aut = 0;
    std::vector<std::string> assumptions;
};

inline DimensionResult family_dimension(const FamilyRecord& fam) {
    DimensionResult out;
    out.chi_omega = chi(fam.branch_moving_class);
    if (!is_integer(out.chi_omega))
        throw std::logic_error("chi of the moving class is not an integer");
    out.dof = point_dof(fam.model->spec);
    out.aut = aut_dim_of_base(fam.model->spec);
    out.dim = to_long(out.chi_omega) - 1 + out.dof - out.aut;
    out.assumptions.push_back("higher cohomology of the moving branch class vanishes");
    out.assumptions.push_back("the family is dominated by its branch data");
    return out;
}

namespace detail {

inline BlowupCenter free_pt() { return BlowupCenter{}; }

inline BlowupCenter near_pt(int parent, TangentDir t = TangentDir::None) {
    BlowupCenter b;
    b.kind = CenterKind::InfinitelyNear;
    b.parent = parent;
    b.tangent = t;
    return b;
}

// a point on a fibre of the ruling, shared within a group
inline BlowupCenter fibre_pt(int partial_rank, int group) {
    BlowupCenter b;
    b.kind = CenterKind::OnCurve;
    b.curve.assign(partial_rank, rat(0));
    b.curve[1] = 1;
    b.curve_group = group;
    b.curve_params = 1;
    return b;
}

}  // namespace detail

// the six families of branch data, in the bookkeeping order
inline std::vector<FamilyRecord> surface_families() {
    std::vector<FamilyRecord> fams;
    {
        // F2 blown up in eight general points off the (-2)-section
        SurfaceSpec spec;
        spec.base = BaseKind::Hirzebruch;
        spec.r = 2;
        for (int i = 0; i < 8; ++i) {
            BlowupCenter b = detail::free_pt();
            b.off_minus_two = true;
            spec.blowups.push_back(b);
        }
        ModelPtr m = build_surface(spec);
        DivisorClass omega =
            9 * named_class(m, "Delta_inf") + 18 * named_class(m, "Gamma") - 4 * sum_e(m, 1, 8);
        fams.push_back({"M_1", m, omega, 28});
    }
    {
        // F0 blown up in nine points, one infinitely near pair
        SurfaceSpec spec;
        spec.base = BaseKind::Hirzebruch;
        spec.r = 0;
        spec.blowups.push_back(detail::free_pt());
        spec.blowups.push_back(detail::near_pt(0));
        for (int i = 0; i < 7; ++i) spec.blowups.push_back(detail::free_pt());
        ModelPtr m = build_surface(spec);
        DivisorClass omega = 8 * named_class(m, "Delta_inf") + 10 * named_class(m, "Gamma") -
                             3 * sum_e(m, 1, 2) - 4 * sum_e(m, 3, 9);
        fams.push_back({"M_2", m, omega, 27});
    }
    {
        // the plane blown up in seven points forming three infinitely near pairs
        SurfaceSpec spec;
        spec.base = BaseKind::Plane;
        for (int k = 0; k < 3; ++k) {
            spec.blowups.push_back(detail::free_pt());
            spec.blowups.push_back(detail::near_pt(2 * k));
        }
        spec.blowups.push_back(detail::free_pt());
        ModelPtr m = build_surface(spec);
        DivisorClass omega = 15 * named_class(m, "h") - 5 * sum_e(m, 1, 7);
        fams.push_back({"M_3", m, omega, 33});
    }
    {
        // F0 blown up in seven points: a free pair and a pair tangent to the ruling
        SurfaceSpec spec;
        spec.base = BaseKind::Hirzebruch;
        spec.r = 0;
        spec.blowups.push_back(detail::free_pt());
        spec.blowups.push_back(detail::near_pt(0));
        spec.blowups.push_back(detail::free_pt());
        spec.blowups.push_back(detail::near_pt(2, TangentDir::Fibre));
        for (int i = 0; i < 3; ++i) spec.blowups.push_back(detail::free_pt());
        ModelPtr m = build_surface(spec);
        DivisorClass omega = 8 * named_class(m, "Delta_inf") + 9 * named_class(m, "Gamma") -
                             3 * sum_e(m, 1, 2) - 4 * sum_e(m, 3, 7);
        fams.push_back({"M_4", m, omega, 32});
    }
    {
        // the plane blown up in nine points, three infinitely near pairs
        SurfaceSpec spec;
        spec.base = BaseKind::Plane;
        for (int k = 0; k < 3; ++k) {
            spec.blowups.push_back(detail::free_pt());
            spec.blowups.push_back(detail::near_pt(2 * k));
        }
        for (int i = 0; i < 3; ++i) spec.blowups.push_back(detail::free_pt());
        ModelPtr m = build_surface(spec);
        DivisorClass omega = 12 * named_class(m, "h") - 3 * sum_e(m, 1, 6) - 4 * sum_e(m, 7, 9);
        fams.push_back({"M_5", m, omega, 31});
    }
    {
        // F0 blown up in ten points, two on each of five fibres
        SurfaceSpec spec;
        spec.base = BaseKind::Hirzebruch;
        spec.r = 0;
        for (int k = 0; k < 5; ++k) {
            spec.blowups.push_back(detail::fibre_pt(2 + 2 * k, k + 1));
            spec.blowups.push_back(detail::fibre_pt(3 + 2 * k, k + 1));
        }
        ModelPtr m = build_surface(spec);
        DivisorClass omega = 6 * named_class(m, "Gamma1") + 11 * named_class(m, "Gamma2") -
                             3 * sum_e(m, 1, 10);
        fams.push_back({"M_1_0", m, omega, 32});
    }
    return fams;
}

// ---------------------------------------------------------------------------
// intersection numbers on the conic-bundle threefold P(V2): H is the
// tautological class, G the fibre class, with H^3 = d, H^2 G = 1 and
// H G^2 = G^3 = 0
struct PV2Ring {
    long d = 0;
};

struct PV2Class {
    Rat h, g;
};

inline Rat pv2_triple(const PV2Ring& ring, const PV2Class& a, const PV2Class& b,
                      const PV2Class& c) {
    return a.h * b.h * c.h * ring.d + a.h * b.h * c.g + a.h * b.g * c.h + a.g * b.h * c.h;
}

// h^1 bound for the pair (resolved conic bundle, moving branch curve),
// computed two independent ways
struct LogTangentBound {
    long deg_v1 = 0;  // twist of the rank-2 summand under the second ruling
    long deg_t = 0;   // number of degenerate conics
    long ring_degree = 0;
    Rat chi_tangent_ruled;     // chi(T) of the minimal ruled model
    Rat chi_tangent_resolved;  // after resolving the degenerate conics
    PV2Class surface_class, adjoint_class, conic_class;
    Rat triple;
    Rat bound;                        // threefold route
    std::optional<Rat> bound_surface;  // blown-up surface route, deg_t = 5 case
    std::vector<std::string> assumptions;
};

inline LogTangentBound log_tangent_bound(long deg_v1 = 6, long deg_t = 5) {
    LogTangentBound out;
    out.deg_v1 = deg_v1;
    out.deg_t = deg_t;
    out.ring_degree = 3 * deg_v1 + deg_t;

    SurfaceSpec ruled;
    ruled.base = BaseKind::Hirzebruch;
    ruled.r = static_cast<int>(deg_v1);
    out.chi_tangent_ruled = chi_tangent(build_surface(ruled));
    out.chi_tangent_resolved = out.chi_tangent_ruled - 4 * deg_t;

    PV2Ring ring{out.ring_degree};
    out.surface_class = {rat(3), rat(-2 * (deg_v1 + deg_t))};
    out.conic_class = {rat(2), rat(-2 * deg_v1)};
    PV2Class canonical{rat(-3), rat(out.ring_degree - 2)};
    out.adjoint_class = {out.surface_class.h - out.conic_class.h - canonical.h,
                         out.surface_class.g - out.conic_class.g - canonical.g};
    out.triple = pv2_triple(ring, out.surface_class, out.adjoint_class, out.conic_class);
    out.bound = -out.chi_tangent_resolved - deg_t + out.triple / 2;
    out.assumptions.push_back("the surface sits in the anticanonical system of P(V2)");
    out.assumptions.push_back(
        "h^1 of the log tangent sheaf is bounded by chi-level data of the pair");

    if (deg_t == 5 && deg_v1 == 6) {
        // independent recomputation on the blown-up double-cover model
        SurfaceSpec spec;
        spec.base = BaseKind::Hirzebruch;
        spec.r = 0;
        for (int k = 0; k < 5; ++k) {
            spec.blowups.push_back(detail::fibre_pt(2 + 2 * k, k + 1));
            spec.blowups.push_back(detail::fibre_pt(3 + 2 * k, k + 1));
        }
        ModelPtr m = build_surface(spec);
        DivisorClass bhat = 6 * named_class(m, "Gamma1") + 16 * named_class(m, "Gamma2") -
                            4 * sum_e(m, 1, 10);
        DivisorClass k = canonical_class(m);
        out.bound_surface =
            -chi_tangent(m) + intersect(k - bhat, -1 * bhat) / 2;
    }
    return out;
}

// deformation bookkeeping for the genus-2 degeneration: the obstruction
// spaces on the blown-up double cover and the resulting h^1 count downstairs
struct DeformationReport {
    Rat chi_neg_d1;       // chi(-Gamma1 - 8 Gamma2 + 2 sum E)
    Rat chi_neg_d2;       // chi(-3 Gamma1 - 6 Gamma2 + 2 sum E)
    Rat h1_upstairs;      // tangent cohomology of the blown-up double cover
    Rat h1_downstairs;    // after contracting the ten exceptional curves
    Rat kuranishi_floor;  // 10 chi - 2 K^2 of the general-type surface
    LogTangentBound log_bound;
    LogTangentBound log_bound_unresolved;  // deg_t = 0 cross-check
    std::vector<std::string> assumptions;
};

inline DeformationReport deformation_report() {
    DeformationReport out;
    SurfaceSpec spec;
    spec.base = BaseKind::Hirzebruch;
    spec.r = 0;
    for (int k = 0; k < 5; ++k) {
        spec.blowups.push_back(detail::fibre_pt(2 + 2 * k, k + 1));
        spec.blowups.push_back(detail::fibre_pt(3 + 2 * k, k + 1));
    }
    ModelPtr m = build_surface(spec);
    DivisorClass d1 = -1 * named_class(m, "Gamma1") - 8 * named_class(m, "Gamma2") +
                      2 * sum_e(m, 1, 10);
    DivisorClass d2 = -3 * named_class(m, "Gamma1") - 6 * named_class(m, "Gamma2") +
                      2 * sum_e(m, 1, 10);
    out.chi_neg_d1 = chi(d1);
    out.chi_neg_d2 = chi(d2);
    out.log_bound = log_tangent_bound(6, 5);
    out.log_bound_unresolved = log_tangent_bound(6, 0);
    out.h1_upstairs = out.log_bound.bound - out.chi_neg_d1;
    out.h1_downstairs = out.h1_upstairs - 10;
    out.kuranishi_floor = rat(10 * 5 - 2 * 9);
    out.assumptions.push_back("equisingular deformations stay inside the genus-2 locus");
    out.assumptions.push_back("each of the ten exceptional curves absorbs one tangent direction");
    return out;
}

}  // namespace surf
