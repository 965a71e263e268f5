#pragma once

// numerology of the quotient by an involution on a surface of general type
// with q = 0.  the involution has tau isolated fixed points and a fixed
// curve R; after resolving, the quotient T-hat carries half-integral
// invariants that must come out integral and nonnegative.  a failed
// requirement is returned as data, never thrown.

#include <algorithm>
#include <string>
#include <vector>

#include "surf/rational.hpp"

namespace surf {

struct Contradiction {
    std::string quantity;
    Rat value;
    std::string requirement;
};

struct QuotientInvariants {
    Rat chi_That;                      // chi(O) of the resolved quotient
    Rat sq_K_plus_deltabar;            // (K + deltabar)^2 on T-hat
    Rat sq_K_plus_deltahat;            // (K + deltahat)^2 on T-hat
    Rat h0_2K_deltahat;                // h^0(2K_That + deltahat)
    Rat pairing_K_deltahat_deltahat;   // (K_That + deltahat) . deltahat
    std::vector<Contradiction> contradictions;

    bool consistent() const { return contradictions.empty(); }
};

inline QuotientInvariants quotient_invariants(long k2_S, long chi_S, long KR,
                                              long tau) {
    QuotientInvariants q;
    q.chi_That = rat(chi_S, 2) - rat(KR - tau, 8);
    q.sq_K_plus_deltabar = rat(k2_S, 2);
    q.sq_K_plus_deltahat = rat(k2_S - tau, 2);
    q.h0_2K_deltahat = (rat(k2_S) + 6 * q.chi_That - rat(2 * chi_S) - rat(tau)) / 2;
    q.pairing_K_deltahat_deltahat = 2 * q.chi_That - 2 + (rat(2 * chi_S) - 4 * q.chi_That);
    // simplifies to 2*chi_S - 2*chi_That - 2; spelled out above to mirror the
    // push-forward decomposition it comes from
    if (!is_integer(q.chi_That))
        q.contradictions.push_back({"chi_That", q.chi_That, "integer"});
    if (!is_integer(q.sq_K_plus_deltahat))
        q.contradictions.push_back({"2*(K+deltahat)^2", 2 * q.sq_K_plus_deltahat,
                                    "even integer"});
    if (!is_integer(q.h0_2K_deltahat))
        q.contradictions.push_back({"h0(2K+deltahat)", q.h0_2K_deltahat, "integer"});
    else if (q.h0_2K_deltahat < 0)
        q.contradictions.push_back({"h0(2K+deltahat)", q.h0_2K_deltahat, ">= 0"});
    return q;
}

struct TauCandidate {
    long tau;
    long h0;  // h^0(2K_That + deltahat) for this tau
    bool regular_quotient;  // true when chi(quotient) = 1
};

struct PgBranchReport {
    long tau;
    long KR;
    QuotientInvariants invariants;
    bool excluded;
};

struct TauEnumeration {
    std::vector<long> taus;
    std::vector<TauCandidate> candidates;
    PgBranchReport pg_branch;  // the branch where pg of the quotient equals pg(S)
};

// recover tau from the h0 count in the pg(quotient) = 0 branch
inline long tau_from_h0(long k2_S, long chi_S, long h0) {
    return k2_S + 6 - 2 * chi_S - 2 * h0;
}

inline TauEnumeration enumerate_tau(long k2_S, long chi_S) {
    TauEnumeration out;

    // branch 1: the quotient keeps all the geometric genus.  then the fixed
    // curve satisfies K.R = 0 and tau is pinned by chi.
    {
        long tau_pg = 4 * chi_S;
        out.pg_branch.tau = tau_pg;
        out.pg_branch.KR = 0;
        out.pg_branch.invariants = quotient_invariants(k2_S, chi_S, 0, tau_pg);
        out.pg_branch.excluded = !out.pg_branch.invariants.consistent();
        if (!out.pg_branch.excluded) {
            out.taus.push_back(tau_pg);
            out.candidates.push_back(
                {tau_pg, static_cast<long>(to_long(out.pg_branch.invariants.h0_2K_deltahat)),
                 false});
        }
    }

    // branch 2: the quotient is regular with pg = 0, so chi(quotient) = 1 and
    // tau = k2 + 6 - 2 chi - 2 h0 for some h0 >= 0, with tau >= 0.
    long top = k2_S + 6 - 2 * chi_S;
    for (long tau = (top % 2 + 2) % 2; tau <= top; tau += 2) {
        // chi(quotient) = 1 forces K.R = tau + 4 chi - 8; the remaining
        // checks are the integrality and positivity of the h0 count
        QuotientInvariants q = quotient_invariants(k2_S, chi_S, tau + 4 * chi_S - 8, tau);
        if (!q.consistent()) continue;
        if (q.chi_That != 1) continue;
        out.taus.push_back(tau);
        out.candidates.push_back({tau, static_cast<long>(to_long(q.h0_2K_deltahat)), true});
    }
    std::sort(out.taus.begin(), out.taus.end());
    out.taus.erase(std::unique(out.taus.begin(), out.taus.end()), out.taus.end());
    return out;
}

}  // namespace surf
