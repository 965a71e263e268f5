#pragma once

// positivity certificates on blown-up rational surfaces.
//
// nefness of a class L is certified against a decomposition of L into
// effective pieces: interpolated irreducible curves (backed by a linear
// system of kernel dimension one and an absolute irreducibility
// certificate) and named exceptional classes.  L is nef on the union when
// it meets every piece nonnegatively and the pieces cover an effective
// representative of L.
//
// base-point freeness runs through adjoint classes: the numerical
// criterion for K + L needs nef L with L^2 >= 5 plus a mod-2 canonical
// decomposition L = (2a+1)K + 2D; even multiples L = 2mK get a parity
// argument instead, since the exceptional pairings L.D = 0 with D^2 = -1
// or L.D = 1 are impossible for an even class.  verdicts compose across
// sums, pencil pullbacks and (-1)-curve extensions.

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "surf/interp.hpp"
#include "surf/irreducible.hpp"
#include "surf/lattice.hpp"

namespace surf {

// ---- -K nefness for nearly del pezzo models ----

struct WeakDpVerdict {
    ModelPtr model;
    bool minus_k_nef = false;
    Rat k2;
    std::vector<std::string> audit;
    std::string refusal;
};

inline WeakDpVerdict weak_dp_nef(const ModelPtr& model) {
    WeakDpVerdict v;
    v.model = model;
    v.k2 = k_sq(model);
    if (model->spec.base == BaseKind::Hirzebruch && model->spec.r >= 3) {
        std::ostringstream os;
        os << "-K meets the (-" << model->spec.r << ")-section negatively on the base";
        v.refusal = os.str();
        return v;
    }
    if (model->spec.base == BaseKind::Hirzebruch && model->spec.r == 2) {
        for (const auto& b : model->spec.blowups)
            if (!b.off_minus_two) {
                v.refusal = "a blown point may lie on the (-2)-section";
                return v;
            }
    }
    if (v.k2 < 0) {
        std::ostringstream os;
        os << "K^2 = " << rat_str(v.k2) << " < 0";
        v.refusal = os.str();
        return v;
    }
    v.minus_k_nef = true;
    std::ostringstream os;
    os << "-K nef with K^2 = " << rat_str(v.k2) << " for points in general position";
    v.audit.push_back(os.str());
    return v;
}

// ---- nef certificates ----

struct NamedComponent {
    std::string name;
    DivisorClass cls;
};

struct InterpolatedPiece {
    CurveWitness witness;
    IrredCertificate irred;
};

struct NefPiece {
    std::string name;
    DivisorClass cls;
    bool interpolated = false;
    InterpolatedPiece interp;                // when interpolated
    std::vector<NamedComponent> components;  // otherwise
};

// interpolate the curve realizing cls through the configuration and certify
// its absolute irreducibility
inline NefPiece interpolate_piece(const PointConfig& cfg, const std::string& name,
                                  const DivisorClass& cls, std::uint64_t seed = 0) {
    NefPiece piece;
    piece.name = name;
    piece.cls = cls;
    piece.interpolated = true;
    piece.interp.witness = solve_curve(cfg, cls);
    if (piece.interp.witness.kernel_dim == 1)
        piece.interp.irred = certify_irreducible(piece.interp.witness.polynomial, seed);
    return piece;
}

struct NefCertificate {
    bool valid = false;
    DivisorClass target;
    std::vector<NefPiece> pieces;
    std::vector<std::pair<std::string, Rat>> pairings;
    std::vector<std::string> audit;
    std::string refusal;
};

inline NefCertificate certify_nef(const ModelPtr& model, const DivisorClass& L,
                                  const std::vector<NefPiece>& decomposition) {
    NefCertificate cert;
    cert.target = L;
    cert.pieces = decomposition;

    // necessary pairings against every named negative class of the model
    for (const auto& [name, cls] : model->named) {
        if (name.size() >= 1 && (name[0] == 'E' || name[0] == 'A' || name[0] == 'C')) {
            Rat p = intersect(L, divisor(model, cls));
            if (p < 0) {
                std::ostringstream os;
                os << "necessary condition fails: L." << name << " = " << rat_str(p) << " < 0";
                cert.refusal = os.str();
                return cert;
            }
        }
    }

    DivisorClass sum = zero_class(model);
    for (const auto& piece : decomposition) sum = sum + piece.cls;
    if (!(sum == L)) {
        cert.refusal = "decomposition does not sum to the target class";
        return cert;
    }

    for (const auto& piece : decomposition) {
        if (piece.interpolated) {
            const CurveWitness& w = piece.interp.witness;
            if (w.kernel_dim != 1 || !w.verified) {
                std::ostringstream os;
                os << "piece " << piece.name << " lacks a verified interpolation witness";
                cert.refusal = os.str();
                return cert;
            }
            if (piece.interp.irred.verdict != IrredVerdict::AbsolutelyIrreducible) {
                std::ostringstream os;
                os << "piece " << piece.name << " lacks an irreducibility certificate";
                cert.refusal = os.str();
                return cert;
            }
            std::ostringstream os;
            os << "piece " << piece.name << ": interpolated irreducible curve, "
               << w.unknowns << " unknowns / " << w.rows << " conditions, kernel dimension 1";
            cert.audit.push_back(os.str());
        } else {
            DivisorClass csum = zero_class(model);
            for (const auto& comp : piece.components) {
                csum = csum + comp.cls;
                Rat p = intersect(L, comp.cls);
                if (p < 0) {
                    std::ostringstream os;
                    os << "L meets component " << comp.name << " of piece " << piece.name
                       << " negatively: " << rat_str(p);
                    cert.refusal = os.str();
                    return cert;
                }
            }
            if (!(csum == piece.cls)) {
                std::ostringstream os;
                os << "components of piece " << piece.name << " do not sum to its class";
                cert.refusal = os.str();
                return cert;
            }
            std::ostringstream os;
            os << "piece " << piece.name << ": union of " << piece.components.size()
               << " named classes of the model";
            cert.audit.push_back(os.str());
        }
        Rat p = intersect(L, piece.cls);
        if (p < 0) {
            std::ostringstream os;
            os << "L meets piece " << piece.name << " negatively: " << rat_str(p);
            cert.refusal = os.str();
            return cert;
        }
        cert.pairings.emplace_back(piece.name, p);
    }
    cert.valid = true;
    return cert;
}

// ---- nef evidence for adjoint arguments ----

// a nonnegative combination of -K (nef by the weak del pezzo rule) and
// pullbacks of nef classes from the base
struct WeakDpCombination {
    WeakDpVerdict verdict;
    std::vector<std::pair<Rat, std::string>> parts;  // multiplier, "-K" or named class
};

using NefEvidence = std::variant<NefCertificate, WeakDpCombination>;

struct EvidenceCheck {
    bool ok = false;
    std::string reason;
    std::vector<std::string> audit;
};

namespace detail {

inline bool base_nef_pullback(const ModelPtr& model, const DivisorClass& cls,
                              std::string& why_not) {
    for (size_t i = model->base_rank; i < cls.c.size(); ++i)
        if (cls.c[i] != 0) {
            why_not = "not a pullback from the base";
            return false;
        }
    if (model->spec.base == BaseKind::Plane) {
        if (cls.c[0] < 0) {
            why_not = "negative multiple of a line";
            return false;
        }
        return true;
    }
    Rat a = cls.c[0], b = cls.c[1];
    if (a < 0 || b < a * model->spec.r) {
        why_not = "not nef on the hirzebruch base";
        return false;
    }
    return true;
}

}  // namespace detail

inline EvidenceCheck validate_nef_evidence(const ModelPtr& model, const DivisorClass& L,
                                           const NefEvidence& ev) {
    EvidenceCheck out;
    if (std::holds_alternative<NefCertificate>(ev)) {
        const NefCertificate& cert = std::get<NefCertificate>(ev);
        if (!cert.valid) {
            out.reason = "nef certificate is not valid: " + cert.refusal;
            return out;
        }
        if (!(cert.target == L)) {
            out.reason = "nef certificate targets a different class";
            return out;
        }
        out.ok = true;
        out.audit.push_back("nefness certified against an effective decomposition");
        return out;
    }
    const WeakDpCombination& comb = std::get<WeakDpCombination>(ev);
    if (!comb.verdict.minus_k_nef) {
        out.reason = "weak del pezzo rule refused: " + comb.verdict.refusal;
        return out;
    }
    if (!same_model(comb.verdict.model, L.model)) {
        out.reason = "weak del pezzo verdict lives on a different model";
        return out;
    }
    DivisorClass sum = zero_class(model);
    for (const auto& [mult, name] : comb.parts) {
        if (mult < 0) {
            out.reason = "combination uses a negative multiplier";
            return out;
        }
        DivisorClass part = name == "-K" ? -canonical_class(model) : named_class(model, name);
        if (name != "-K") {
            std::string why;
            if (!detail::base_nef_pullback(model, part, why)) {
                out.reason = "part " + name + " is not a nef pullback: " + why;
                return out;
            }
        }
        sum = sum + mult * part;
        out.audit.push_back("part " + rat_str(mult) + " * " + name);
    }
    if (!(sum == L)) {
        out.reason = "combination does not sum to the class";
        return out;
    }
    out.ok = true;
    return out;
}

// ---- base-point freeness ----

struct BpfVerdict {
    bool bpf = false;
    ModelPtr model;
    DivisorClass target;  // the class certified base-point free
    std::string rule;
    std::map<std::string, Rat> data;
    std::optional<DivisorClass> d_class;
    std::vector<std::string> audit;
    std::string refusal;
};

// adjoint criterion: with nef L, L^2 >= 5 and a decomposition
// L = (2a+1)K + 2D, the class K + L is base-point free
inline BpfVerdict reider_bpf(const ModelPtr& model, const DivisorClass& L,
                             const NefEvidence& evidence) {
    BpfVerdict v;
    v.model = model;
    v.target = divisor(model, canonical_class(model).c) + L;
    v.rule = "adjoint criterion";
    if (!is_integral(L)) {
        v.refusal = "L is not an integral class";
        return v;
    }
    EvidenceCheck ec = validate_nef_evidence(model, L, evidence);
    if (!ec.ok) {
        v.refusal = "nef evidence rejected: " + ec.reason;
        return v;
    }
    for (const auto& a : ec.audit) v.audit.push_back(a);
    Rat l2 = self_int(L);
    v.data["L^2"] = l2;
    if (l2 < 5) {
        v.refusal = "L^2 = " + rat_str(l2) + " < 5";
        return v;
    }
    DivisorClass K = canonical_class(model);
    for (long mag = 0; mag <= 10; ++mag) {
        for (long a : {-mag, mag}) {
            DivisorClass D = rat(1, 2) * (L - rat(2 * a + 1) * K);
            if (!is_integral(D)) continue;
            v.bpf = true;
            v.rule = "adjoint criterion, odd canonical part";
            v.data["a"] = rat(a);
            v.d_class = D;
            std::ostringstream os;
            os << "L = " << (2 * a + 1) << "K + 2D with integral D";
            v.audit.push_back(os.str());
            return v;
        }
    }
    // fallback: an even multiple of the canonical class
    DivisorClass Kc = canonical_class(model);
    int pivot = -1;
    for (size_t i = 0; i < Kc.c.size(); ++i)
        if (Kc.c[i] != 0) { pivot = static_cast<int>(i); break; }
    if (pivot >= 0 && Kc.c[pivot] != 0) {
        Rat c = L.c[pivot] / Kc.c[pivot];
        if (c * Kc == L && is_integer(c) && to_long(c) % 2 == 0) {
            v.bpf = true;
            v.rule = "adjoint criterion, even canonical multiple";
            v.data["m"] = c / 2;
            v.audit.push_back(
                "L = 2mK is even, so the exceptional pairings L.D = 0 with D^2 = -1 "
                "(which would force an even K.D against adjunction parity) and "
                "L.D = 1 (odd) are both impossible");
            return v;
        }
    }
    v.refusal = "no mod-2 canonical decomposition of L found for |a| <= 10";
    return v;
}

// |Gamma| is a free pencil pulled back from the ruling
inline BpfVerdict pencil_bpf(const ModelPtr& model) {
    BpfVerdict v;
    v.model = model;
    v.rule = "pullback of a base-point-free pencil";
    if (model->spec.base != BaseKind::Hirzebruch) {
        v.refusal = "no ruling pencil on this base";
        return v;
    }
    v.target = named_class(model, "Gamma");
    v.bpf = true;
    v.audit.push_back("the ruling pencil is base-point free and pulls back freely");
    return v;
}

inline BpfVerdict compose_bpf(const BpfVerdict& a, const BpfVerdict& b) {
    BpfVerdict v;
    v.model = a.model;
    v.rule = "sum of base-point-free classes";
    if (!a.bpf || !b.bpf) {
        v.refusal = "a summand is not certified base-point free";
        return v;
    }
    if (!same_model(a.model, b.model)) {
        v.refusal = "summands live on different models";
        return v;
    }
    v.target = a.target + b.target;
    v.bpf = true;
    return v;
}

// extension across a (-1)-curve: if Omega is base-point free, Omega.E > 0,
// and Omega = K + L + D with L nef and big and D an annotated effective
// normal crossing part, then Omega + E is base-point free
inline BpfVerdict extend_bpf(const BpfVerdict& base, const DivisorClass& E,
                             const DivisorClass& L, const NefEvidence& l_evidence,
                             const DivisorClass& D,
                             const std::vector<std::string>& facts = {}) {
    BpfVerdict v;
    v.model = base.model;
    v.rule = "extension across a (-1)-curve";
    if (!base.bpf) {
        v.refusal = "the class being extended is not certified base-point free";
        return v;
    }
    const DivisorClass& Omega = base.target;
    if (self_int(E) != -1 || intersect(canonical_class(base.model), E) != -1) {
        v.refusal = "E is not a (-1)-curve class";
        return v;
    }
    Rat pe = intersect(Omega, E);
    v.data["Omega.E"] = pe;
    if (pe <= 0) {
        v.refusal = "Omega.E = " + rat_str(pe) + " is not positive";
        return v;
    }
    if (!(Omega == divisor(base.model, canonical_class(base.model).c) + L + D)) {
        v.refusal = "Omega does not decompose as K + L + D";
        return v;
    }
    EvidenceCheck ec = validate_nef_evidence(base.model, L, l_evidence);
    if (!ec.ok) {
        v.refusal = "nef evidence for L rejected: " + ec.reason;
        return v;
    }
    Rat l2 = self_int(L);
    v.data["L^2"] = l2;
    if (l2 <= 0) {
        v.refusal = "L^2 = " + rat_str(l2) + " is not positive, L is not big";
        return v;
    }
    for (const auto& f : facts) v.audit.push_back("assumed: " + f);
    v.target = Omega + E;
    v.bpf = true;
    return v;
}

}  // namespace surf
