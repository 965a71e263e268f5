#pragma once

// numerical picard lattice of an iterated blow-up of the plane or of a
// hirzebruch surface.  basis = base classes followed by the total transforms
// E1..En of the blown-up points, so the gram matrix is the base block plus a
// -1 diagonal tail.  everything is exact rational arithmetic.

#include <cassert>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "surf/rational.hpp"

namespace surf {

enum class BaseKind { Plane, Hirzebruch };

enum class CenterKind { Free, InfinitelyNear, OnCurve };

// tangent direction for an infinitely near point, in the coordinates where
// sections are {x = c} (tangent along Gamma-direction is "fibre", along the
// section direction is "section").
enum class TangentDir { None, Fibre, Section };

struct BlowupCenter {
    CenterKind kind = CenterKind::Free;
    // index of the previously blown-up point this one is infinitely near to.
    int parent = -1;
    TangentDir tangent = TangentDir::None;
    // class of the curve the center must lie on, as a coefficient vector on
    // the partial model that exists just before this blow-up.
    std::vector<Rat> curve;
    int curve_group = 0;    // centers sharing a group share one curve
    int curve_params = 0;   // moduli of the shared curve, counted once
    std::string label;      // optional human name, e.g. "p3"
    bool off_minus_two = false;  // audited promise: center avoids (-2)-curves
};

struct SurfaceSpec {
    BaseKind base = BaseKind::Plane;
    long r = 0;  // hirzebruch degree; ignored for the plane
    std::vector<BlowupCenter> blowups;
};

struct SurfaceModel {
    SurfaceSpec spec;
    int base_rank = 0;
    int rank = 0;
    std::vector<std::vector<Rat>> gram;
    std::vector<Rat> canonical;
    // named classes: base divisors, exceptional classes, (-2)-classes of
    // infinitely near pairs, strict transforms of shared constraint curves.
    std::map<std::string, std::vector<Rat>> named;
    std::vector<std::string> negative_names;  // names with negative self-int
};

using ModelPtr = std::shared_ptr<const SurfaceModel>;

struct DivisorClass {
    ModelPtr model;
    std::vector<Rat> c;
};

inline ModelPtr build_surface(const SurfaceSpec& spec) {
    auto m = std::make_shared<SurfaceModel>();
    m->spec = spec;
    m->base_rank = (spec.base == BaseKind::Plane) ? 1 : 2;
    if (spec.base == BaseKind::Hirzebruch && spec.r < 0)
        throw std::invalid_argument("hirzebruch degree must be >= 0");
    int n = static_cast<int>(spec.blowups.size());
    m->rank = m->base_rank + n;

    m->gram.assign(m->rank, std::vector<Rat>(m->rank, rat(0)));
    if (spec.base == BaseKind::Plane) {
        m->gram[0][0] = rat(1);
    } else {
        m->gram[0][0] = rat(-spec.r);
        m->gram[0][1] = rat(1);
        m->gram[1][0] = rat(1);
        m->gram[1][1] = rat(0);
    }
    for (int i = m->base_rank; i < m->rank; ++i) m->gram[i][i] = rat(-1);

    m->canonical.assign(m->rank, rat(1));
    if (spec.base == BaseKind::Plane) {
        m->canonical[0] = rat(-3);
    } else {
        m->canonical[0] = rat(-2);
        m->canonical[1] = rat(-(spec.r + 2));
    }

    auto unit = [&](int i) {
        std::vector<Rat> v(m->rank, rat(0));
        v[i] = rat(1);
        return v;
    };

    if (spec.base == BaseKind::Plane) {
        m->named["h"] = unit(0);
    } else {
        m->named["Delta_inf"] = unit(0);
        m->named["Gamma"] = unit(1);
        std::vector<Rat> delta = unit(0);
        delta[1] = rat(spec.r);
        m->named["Delta"] = delta;  // the section of square +r
        if (spec.r == 0) {
            m->named["Gamma1"] = unit(0);  // alternate ruling names on F0,
            m->named["Gamma2"] = unit(1);  // Delta = Gamma1 + Gamma2
        }
    }
    m->named["K"] = m->canonical;

    int near_count = 0;
    std::map<int, std::pair<std::vector<Rat>, std::vector<int>>> groups;
    for (int i = 0; i < n; ++i) {
        const BlowupCenter& b = spec.blowups[i];
        int before_rank = m->base_rank + i;
        int col = before_rank;  // basis slot of this E
        m->named["E" + std::to_string(i + 1)] = unit(col);
        if (!b.label.empty()) m->named["E_" + b.label] = unit(col);
        switch (b.kind) {
            case CenterKind::Free:
                break;
            case CenterKind::InfinitelyNear: {
                if (b.parent < 0 || b.parent >= i)
                    throw std::invalid_argument(
                        "infinitely near center must name an earlier point");
                std::vector<Rat> a = unit(m->base_rank + b.parent);
                a[col] = rat(-1);
                ++near_count;
                std::string nm = "A" + std::to_string(near_count);
                m->named[nm] = a;
                m->negative_names.push_back(nm);
                break;
            }
            case CenterKind::OnCurve: {
                if (static_cast<int>(b.curve.size()) != before_rank)
                    throw std::invalid_argument(
                        "constraint curve class has wrong length");
                if (b.curve_group <= 0)
                    throw std::invalid_argument("curve group must be positive");
                auto it = groups.find(b.curve_group);
                if (it == groups.end()) {
                    groups[b.curve_group] = {b.curve, {i}};
                } else {
                    // same group must mean the same curve, up to the zero
                    // padding of later partial models
                    const auto& first = it->second.first;
                    for (size_t j = 0; j < b.curve.size(); ++j) {
                        Rat want = (j < first.size()) ? first[j] : rat(0);
                        if (b.curve[j] != want)
                            throw std::invalid_argument(
                                "curve group members disagree on the curve");
                    }
                    it->second.second.push_back(i);
                }
                break;
            }
        }
        if (b.tangent != TangentDir::None && b.kind != CenterKind::InfinitelyNear)
            throw std::invalid_argument("tangent only applies to infinitely near centers");
    }

    int gi = 0;
    for (const auto& [gid, data] : groups) {
        (void)gid;
        std::vector<Rat> strict(data.first);
        strict.resize(m->rank, rat(0));
        for (int idx : data.second) strict[m->base_rank + idx] -= 1;
        ++gi;
        std::string nm = "C" + std::to_string(gi);
        m->named[nm] = strict;
        m->negative_names.push_back(nm);
    }

    return m;
}

inline bool same_model(const ModelPtr& a, const ModelPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return a->rank == b->rank && a->gram == b->gram && a->canonical == b->canonical;
}

inline DivisorClass divisor(const ModelPtr& m, std::vector<Rat> coeffs) {
    if (static_cast<int>(coeffs.size()) != m->rank)
        throw std::invalid_argument("coefficient vector has wrong length");
    return DivisorClass{m, std::move(coeffs)};
}

inline DivisorClass zero_class(const ModelPtr& m) {
    return DivisorClass{m, std::vector<Rat>(m->rank, rat(0))};
}

inline DivisorClass named_class(const ModelPtr& m, const std::string& name) {
    auto it = m->named.find(name);
    if (it == m->named.end())
        throw std::invalid_argument("unknown class name: " + name);
    return DivisorClass{m, it->second};
}

inline DivisorClass e_class(const ModelPtr& m, int i) {
    return named_class(m, "E" + std::to_string(i));
}

// sum of E_from .. E_to inclusive, 1-based
inline DivisorClass sum_e(const ModelPtr& m, int from, int to) {
    DivisorClass d = zero_class(m);
    for (int i = from; i <= to; ++i) d.c[m->base_rank + i - 1] += 1;
    return d;
}

inline DivisorClass canonical_class(const ModelPtr& m) {
    return DivisorClass{m, m->canonical};
}

inline DivisorClass operator+(const DivisorClass& a, const DivisorClass& b) {
    assert(same_model(a.model, b.model));
    DivisorClass r = a;
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] += b.c[i];
    return r;
}

inline DivisorClass operator-(const DivisorClass& a, const DivisorClass& b) {
    assert(same_model(a.model, b.model));
    DivisorClass r = a;
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] -= b.c[i];
    return r;
}

inline DivisorClass operator-(const DivisorClass& a) {
    DivisorClass r = a;
    for (auto& x : r.c) x = -x;
    return r;
}

inline DivisorClass operator*(const Rat& s, const DivisorClass& a) {
    DivisorClass r = a;
    for (auto& x : r.c) x *= s;
    return r;
}

inline bool operator==(const DivisorClass& a, const DivisorClass& b) {
    return same_model(a.model, b.model) && a.c == b.c;
}

inline Rat intersect(const DivisorClass& a, const DivisorClass& b) {
    if (!same_model(a.model, b.model))
        throw std::invalid_argument("intersection of classes on different models");
    const auto& g = a.model->gram;
    Rat s = 0;
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (size_t j = 0; j < b.c.size(); ++j) {
            if (b.c[j] == 0) continue;
            s += a.c[i] * g[i][j] * b.c[j];
        }
    }
    return s;
}

inline Rat self_int(const DivisorClass& a) { return intersect(a, a); }

inline bool is_integral(const DivisorClass& a) {
    for (const auto& x : a.c)
        if (!is_integer(x)) return false;
    return true;
}

// riemann-roch euler characteristic, chi(O) = 1 for all our models
inline Rat chi(const DivisorClass& d) {
    DivisorClass k = canonical_class(d.model);
    return 1 + (intersect(d, d) - intersect(d, k)) / 2;
}

// arithmetic genus of a curve in the class
inline Rat genus(const DivisorClass& d) {
    DivisorClass k = canonical_class(d.model);
    return 1 + (intersect(d, d) + intersect(d, k)) / 2;
}

inline Rat k_sq(const ModelPtr& m) {
    DivisorClass k = canonical_class(m);
    return intersect(k, k);
}

// euler characteristic of the tangent sheaf of a rational surface
inline Rat chi_tangent(const ModelPtr& m) { return 2 * k_sq(m) - 10; }

enum class HodgeResult { Violation, NoViolation, NotApplicable };

// signature test: with D1^2 > 0 the index theorem forces
// D1^2 * D2^2 <= (D1.D2)^2; strict excess is a contradiction witness.
inline HodgeResult hodge_violation(const DivisorClass& d1, const DivisorClass& d2) {
    Rat s1 = self_int(d1);
    if (s1 <= 0) return HodgeResult::NotApplicable;
    bool zero = true;
    for (const auto& x : d2.c)
        if (x != 0) { zero = false; break; }
    if (zero) return HodgeResult::NoViolation;
    Rat s2 = self_int(d2);
    Rat p = intersect(d1, d2);
    return (s1 * s2 > p * p) ? HodgeResult::Violation : HodgeResult::NoViolation;
}

// build a class from named parts plus explicit exceptional multiplicities
inline DivisorClass combine(const ModelPtr& m,
                            const std::vector<std::pair<std::string, Rat>>& parts) {
    DivisorClass d = zero_class(m);
    for (const auto& [name, coeff] : parts) d = d + coeff * named_class(m, name);
    return d;
}

}  // namespace surf
