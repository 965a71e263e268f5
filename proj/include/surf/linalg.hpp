#pragma once

// exact dense linear algebra over the rationals, plus modular variants.
// the exact kernel uses fraction-free (bareiss) elimination on integerized
// rows; the modular path supplies fast rank certificates and a crt +
// rational-reconstruction route to exact kernel vectors of big systems.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "surf/rational.hpp"

namespace surf {

struct MatQ {
    int rows = 0, cols = 0;
    std::vector<Rat> a;

    MatQ() = default;
    MatQ(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, rat(0)) {}
    Rat& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const Rat& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

struct KernelQ {
    int rank = 0;
    std::vector<int> pivot_cols;
    std::vector<int> free_cols;
    std::vector<std::vector<Rat>> basis;  // one vector per free column
};

namespace detail {

// integer matrix with the same kernel: each row scaled by the lcm of its
// denominators
inline std::vector<std::vector<Int>> integerize(const MatQ& m) {
    std::vector<std::vector<Int>> z(m.rows, std::vector<Int>(m.cols));
    for (int i = 0; i < m.rows; ++i) {
        Int l = 1;
        for (int j = 0; j < m.cols; ++j)
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), denominator(m.at(i, j)).get_mpz_t());
        for (int j = 0; j < m.cols; ++j) {
            const Rat& q = m.at(i, j);
            z[i][j] = numerator(q) * (l / denominator(q));
        }
    }
    return z;
}

}  // namespace detail

inline KernelQ kernel_exact(const MatQ& m) {
    auto z = detail::integerize(m);
    int rows = m.rows, cols = m.cols;
    KernelQ out;
    Int prev = 1;
    int row = 0;
    for (int col = 0; col < cols && row < rows; ++col) {
        int pr = -1;
        for (int i = row; i < rows; ++i)
            if (z[i][col] != 0) { pr = i; break; }
        if (pr < 0) {
            out.free_cols.push_back(col);
            continue;
        }
        std::swap(z[row], z[pr]);
        for (int i = row + 1; i < rows; ++i) {
            for (int j = col + 1; j < cols; ++j) {
                Int t = z[row][col] * z[i][j] - z[i][col] * z[row][j];
                mpz_divexact(z[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            z[i][col] = 0;
        }
        prev = z[row][col];
        out.pivot_cols.push_back(col);
        ++row;
    }
    for (int col = (out.pivot_cols.empty() ? 0 : out.pivot_cols.back() + 1); col < cols; ++col)
        if (std::find(out.pivot_cols.begin(), out.pivot_cols.end(), col) ==
            out.pivot_cols.end() &&
            std::find(out.free_cols.begin(), out.free_cols.end(), col) == out.free_cols.end())
            out.free_cols.push_back(col);
    out.rank = static_cast<int>(out.pivot_cols.size());

    for (int f : out.free_cols) {
        std::vector<Rat> v(cols, rat(0));
        v[f] = rat(1);
        for (int i = out.rank - 1; i >= 0; --i) {
            int pc = out.pivot_cols[i];
            Rat s = 0;
            for (int j = pc + 1; j < cols; ++j)
                if (v[j] != 0) s += rat(z[i][j]) * v[j];
            v[pc] = -s / rat(z[i][pc]);
        }
        out.basis.push_back(std::move(v));
    }
    return out;
}

inline int rank_exact(const MatQ& m) { return kernel_exact(m).rank; }

// multiply: m * v
inline std::vector<Rat> mat_apply(const MatQ& m, const std::vector<Rat>& v) {
    if (static_cast<int>(v.size()) != m.cols)
        throw std::invalid_argument("vector length mismatch");
    std::vector<Rat> out(m.rows, rat(0));
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j)
            if (m.at(i, j) != 0 && v[j] != 0) out[i] += m.at(i, j) * v[j];
    return out;
}

// ---------------------------------------------------------------------------
// modular path

struct ModResult {
    bool bad_prime = false;   // a denominator vanished mod p
    int rank = 0;
    std::vector<int> pivot_cols;
    std::vector<Int> kernel_vec;  // vector mod p for the first free column; empty if none
};

inline ModResult eliminate_mod_p(const MatQ& m, const Int& p) {
    ModResult out;
    std::vector<std::vector<Int>> z(m.rows, std::vector<Int>(m.cols));
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) {
            const Rat& q = m.at(i, j);
            Int den = denominator(q) % p;
            if (den == 0) {
                out.bad_prime = true;
                return out;
            }
            Int inv;
            if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t()) == 0) {
                out.bad_prime = true;
                return out;
            }
            z[i][j] = ((numerator(q) % p) * inv) % p;
            if (z[i][j] < 0) z[i][j] += p;
        }

    int rows = m.rows, cols = m.cols, row = 0;
    std::vector<int> free_cols;
    for (int col = 0; col < cols && row < rows; ++col) {
        int pr = -1;
        for (int i = row; i < rows; ++i)
            if (z[i][col] != 0) { pr = i; break; }
        if (pr < 0) {
            free_cols.push_back(col);
            continue;
        }
        std::swap(z[row], z[pr]);
        Int inv;
        mpz_invert(inv.get_mpz_t(), z[row][col].get_mpz_t(), p.get_mpz_t());
        for (int j = col; j < cols; ++j) z[row][j] = (z[row][j] * inv) % p;
        for (int i = 0; i < rows; ++i) {
            if (i == row || z[i][col] == 0) continue;
            Int f = z[i][col];
            for (int j = col; j < cols; ++j) {
                z[i][j] = (z[i][j] - f * z[row][j]) % p;
                if (z[i][j] < 0) z[i][j] += p;
            }
        }
        out.pivot_cols.push_back(col);
        ++row;
    }
    for (int col = 0; col < cols; ++col)
        if (std::find(out.pivot_cols.begin(), out.pivot_cols.end(), col) ==
                out.pivot_cols.end() &&
            std::find(free_cols.begin(), free_cols.end(), col) == free_cols.end())
            free_cols.push_back(col);
    std::sort(free_cols.begin(), free_cols.end());
    out.rank = static_cast<int>(out.pivot_cols.size());

    if (!free_cols.empty()) {
        int f = free_cols.front();
        std::vector<Int> v(cols, Int(0));
        v[f] = 1;
        // rows are fully reduced, so each pivot coordinate reads off directly
        for (int i = 0; i < out.rank; ++i) {
            int pc = out.pivot_cols[i];
            Int val = (p - z[i][f] % p) % p;
            v[pc] = val;
        }
        out.kernel_vec = std::move(v);
    }
    return out;
}

inline int rank_mod_p(const MatQ& m, const Int& p, bool& bad_prime) {
    ModResult r = eliminate_mod_p(m, p);
    bad_prime = r.bad_prime;
    return r.rank;
}

// classical rational reconstruction: find n/d = r mod M with
// |n|, d <= sqrt(M/2)
inline std::optional<Rat> rational_reconstruct(const Int& r, const Int& M) {
    Int bound;
    mpz_sqrt(bound.get_mpz_t(), Int(M / 2).get_mpz_t());
    Int r0 = M, r1 = r % M;
    if (r1 < 0) r1 += M;
    Int t0 = 0, t1 = 1;
    while (r1 > bound) {
        Int q = r0 / r1;
        Int r2 = r0 - q * r1;
        Int t2 = t0 - q * t1;
        r0 = r1; r1 = r2;
        t0 = t1; t1 = t2;
    }
    if (t1 == 0) return std::nullopt;
    if (t1 < 0) { t1 = -t1; r1 = -r1; }
    if (t1 > bound) return std::nullopt;
    Int g;
    mpz_gcd(g.get_mpz_t(), t1.get_mpz_t(), M.get_mpz_t());
    if (g != 1) return std::nullopt;
    return rat(r1, t1);
}

inline Int next_prime(const Int& n) {
    Int p;
    mpz_nextprime(p.get_mpz_t(), n.get_mpz_t());
    return p;
}

// exact nonzero kernel vector of a big system, via kernel vectors modulo a
// chain of primes with a consistent pivot structure, combined by crt and
// verified over Q.  returns nullopt when no kernel emerges within the prime
// budget (either the kernel is trivial or the entries are out of reach).
inline std::optional<std::vector<Rat>> kernel_vector_crt(const MatQ& m,
                                                         Int start_prime,
                                                         int max_primes = 64) {
    std::vector<int> ref_pivots;
    int ref_rank = -1;
    std::vector<Int> acc;  // crt accumulator
    Int modulus = 1;
    Int p = start_prime;
    for (int used = 0; used < max_primes;) {
        p = next_prime(p);
        ModResult r = eliminate_mod_p(m, p);
        if (r.bad_prime) continue;
        if (r.kernel_vec.empty()) return std::nullopt;  // full column rank mod p
        if (r.rank > ref_rank) {
            ref_rank = r.rank;
            ref_pivots = r.pivot_cols;
            acc.assign(m.cols, Int(0));
            modulus = 1;
        } else if (r.rank < ref_rank || r.pivot_cols != ref_pivots) {
            continue;  // unlucky prime for this pivot structure
        }
        // crt combine coordinatewise
        if (modulus == 1) {
            acc = r.kernel_vec;
            modulus = p;
        } else {
            Int inv;
            Int mm = modulus % p;
            if (mpz_invert(inv.get_mpz_t(), mm.get_mpz_t(), p.get_mpz_t()) == 0) continue;
            for (int j = 0; j < m.cols; ++j) {
                Int diff = (r.kernel_vec[j] - acc[j] % p) % p;
                if (diff < 0) diff += p;
                acc[j] = acc[j] + modulus * ((diff * inv) % p);
            }
            modulus *= p;
        }
        ++used;

        std::vector<Rat> v(m.cols);
        bool ok = true;
        for (int j = 0; j < m.cols && ok; ++j) {
            auto q = rational_reconstruct(acc[j], modulus);
            if (!q) ok = false;
            else v[j] = *q;
        }
        if (!ok) continue;
        bool nonzero = false;
        for (const auto& x : v)
            if (x != 0) { nonzero = true; break; }
        if (!nonzero) continue;
        auto img = mat_apply(m, v);
        bool is_kernel = true;
        for (const auto& x : img)
            if (x != 0) { is_kernel = false; break; }
        if (is_kernel) return v;
    }
    return std::nullopt;
}

}  // namespace surf
