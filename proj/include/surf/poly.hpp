#pragma once

// exact polynomial arithmetic: dense bivariate polynomials over Q, dense
// univariate polynomials over Q and over F_p, with just enough factorization
// machinery for the irreducibility certifier and its cross-checks:
// rational roots, complete factorization up to degree 4 over Q, and
// distinct-degree + cantor-zassenhaus splitting mod p.

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "surf/rational.hpp"
#include "surf/rng.hpp"

namespace surf {

// ---------------------------------------------------------------------------
// univariate over Q, coefficients ascending

struct UniPoly {
    std::vector<Rat> c;

    int deg() const {
        for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
            if (c[i] != 0) return i;
        return -1;
    }
    bool is_zero() const { return deg() < 0; }
    Rat coeff(int i) const { return (i >= 0 && i < static_cast<int>(c.size())) ? c[i] : rat(0); }
    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
};

inline UniPoly uni(std::vector<Rat> coeffs) {
    UniPoly p{std::move(coeffs)};
    p.trim();
    return p;
}

inline UniPoly operator+(const UniPoly& a, const UniPoly& b) {
    UniPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), rat(0));
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = a.coeff(i) + b.coeff(i);
    r.trim();
    return r;
}

inline UniPoly operator-(const UniPoly& a, const UniPoly& b) {
    UniPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), rat(0));
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = a.coeff(i) - b.coeff(i);
    r.trim();
    return r;
}

inline UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    if (a.is_zero() || b.is_zero()) return UniPoly{};
    UniPoly r;
    r.c.assign(a.c.size() + b.c.size() - 1, rat(0));
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (size_t j = 0; j < b.c.size(); ++j)
            if (b.c[j] != 0) r.c[i + j] += a.c[i] * b.c[j];
    }
    r.trim();
    return r;
}

inline UniPoly operator*(const Rat& s, const UniPoly& a) {
    UniPoly r = a;
    for (auto& x : r.c) x *= s;
    r.trim();
    return r;
}

inline Rat eval(const UniPoly& a, const Rat& x) {
    Rat v = 0;
    for (int i = a.deg(); i >= 0; --i) v = v * x + a.coeff(i);
    return v;
}

inline UniPoly derivative(const UniPoly& a) {
    UniPoly r;
    if (a.deg() < 1) return r;
    r.c.resize(a.deg());
    for (int i = 1; i <= a.deg(); ++i) r.c[i - 1] = rat(i) * a.coeff(i);
    r.trim();
    return r;
}

// division with remainder; divisor must be nonzero
inline std::pair<UniPoly, UniPoly> divmod(const UniPoly& a, const UniPoly& b) {
    if (b.is_zero()) throw std::invalid_argument("division by zero polynomial");
    UniPoly r = a, q;
    int db = b.deg();
    Rat lead = b.coeff(db);
    if (r.deg() >= db) q.c.assign(r.deg() - db + 1, rat(0));
    while (r.deg() >= db) {
        int dr = r.deg();
        Rat f = r.coeff(dr) / lead;
        q.c[dr - db] = f;
        for (int i = 0; i <= db; ++i) r.c[dr - db + i] -= f * b.coeff(i);
        r.trim();
    }
    q.trim();
    return {q, r};
}

inline bool divides(const UniPoly& b, const UniPoly& a) {
    if (b.is_zero()) return a.is_zero();
    return divmod(a, b).second.is_zero();
}

// monic gcd over Q
inline UniPoly gcd(UniPoly a, UniPoly b) {
    while (!b.is_zero()) {
        UniPoly r = divmod(a, b).second;
        a = b;
        b = r;
    }
    if (!a.is_zero()) {
        Rat lead = a.coeff(a.deg());
        a = (1 / lead) * a;
    }
    return a;
}

// scale to integer coefficients with content 1 and positive leading term
inline UniPoly primitive_integer(const UniPoly& a) {
    if (a.is_zero()) return a;
    Int l = 1;
    for (const auto& x : a.c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), denominator(x).get_mpz_t());
    Int g = 0;
    std::vector<Int> z(a.c.size());
    for (size_t i = 0; i < a.c.size(); ++i) {
        z[i] = numerator(a.c[i]) * (l / denominator(a.c[i]));
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z[i].get_mpz_t());
    }
    UniPoly r;
    r.c.resize(a.c.size());
    int sign = (z[a.deg()] < 0) ? -1 : 1;
    for (size_t i = 0; i < z.size(); ++i) r.c[i] = rat(sign * z[i], g);
    r.trim();
    return r;
}

inline std::vector<Int> int_divisors(Int n) {
    if (n < 0) n = -n;
    std::vector<Int> out;
    for (Int d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            if (d * d != n) out.push_back(n / d);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// all rational roots, by the rational root theorem on the primitive form
inline std::vector<Rat> rational_roots(const UniPoly& a) {
    std::vector<Rat> out;
    if (a.deg() < 1) return out;
    UniPoly p = primitive_integer(a);
    // strip powers of x
    int low = 0;
    while (p.coeff(low) == 0) ++low;
    if (low > 0) out.push_back(rat(0));
    Int a0 = numerator(p.coeff(low));
    Int an = numerator(p.coeff(p.deg()));
    for (const Int& num : int_divisors(a0))
        for (const Int& den : int_divisors(an)) {
            for (int s : {1, -1}) {
                Rat cand = rat(s * num, den);
                if (eval(p, cand) == 0 &&
                    std::count(out.begin(), out.end(), cand) == 0)
                    out.push_back(cand);
            }
        }
    std::sort(out.begin(), out.end());
    return out;
}

// complete factorization over Q for degree <= 4 (linear factors by rational
// roots, quadratic splits of quartics by exhaustive divisor enumeration).
// returns monic-normalized irreducible factors with multiplicity; the
// rational unit is dropped.
inline std::vector<UniPoly> factor_up_to_quartic(const UniPoly& input) {
    if (input.deg() > 4)
        throw std::invalid_argument("factor_up_to_quartic limited to degree 4");
    std::vector<UniPoly> factors;
    UniPoly f = input;
    if (f.deg() < 1) return factors;

    bool progress = true;
    while (progress && f.deg() > 0) {
        progress = false;
        for (const Rat& r : rational_roots(f)) {
            UniPoly lin = uni({-r, rat(1)});
            while (divides(lin, f)) {
                factors.push_back(lin);
                f = divmod(f, lin).first;
                progress = true;
            }
        }
    }

    int d = f.deg();
    if (d == 0) return factors;
    if (d == 1) {  // can't happen after root stripping, but keep it total
        factors.push_back((1 / f.coeff(1)) * f);
        return factors;
    }
    if (d == 2 || d == 3) {
        // rootless quadratic or cubic over Q is irreducible
        factors.push_back((1 / f.coeff(d)) * f);
        return factors;
    }
    // rootless quartic: try (a x^2 + b x + c)(e x^2 + g x + h)
    UniPoly p = primitive_integer(f);
    Int lead = numerator(p.coeff(4)), cons = numerator(p.coeff(0));
    Rat f3 = p.coeff(3), f2 = p.coeff(2), f1 = p.coeff(1);
    for (const Int& ai : int_divisors(lead)) {
        Rat a = rat(ai), e = rat(lead) / a;
        for (const Int& ci : int_divisors(cons)) {
            for (int s : {1, -1}) {
                Rat c0 = rat(s * ci), h = rat(cons) / c0;
                // eliminate g: from x^3, g = (f3 - b e)/a; plug into x^2 to get
                // a quadratic in b
                // x^2: a h + c e + b g = f2  ->  b (f3 - b e)/a = f2 - a h - c e
                Rat A = e, B = -f3, C = a * (f2 - a * h - c0 * e);
                Rat disc = B * B - 4 * A * C;
                std::vector<Rat> bs;
                if (A == 0) {
                    if (B != 0) bs.push_back(-C / B);
                } else if (auto sq = rat_sqrt(disc)) {
                    bs.push_back((-B + *sq) / (2 * A));
                    bs.push_back((-B - *sq) / (2 * A));
                }
                for (const Rat& b : bs) {
                    Rat g = (f3 - b * e) / a;
                    UniPoly q1 = uni({c0, b, a}), q2 = uni({h, g, e});
                    if ((q1 * q2 - p).is_zero()) {
                        for (UniPoly q : {q1, q2}) {
                            auto sub = factor_up_to_quartic(q);
                            factors.insert(factors.end(), sub.begin(), sub.end());
                        }
                        return factors;
                    }
                }
            }
        }
    }
    factors.push_back((1 / f.coeff(4)) * f);  // irreducible quartic
    return factors;
}

// ---------------------------------------------------------------------------
// bivariate over Q, dense grid c[i*(ny)+j] = coeff of x^i y^j

struct BiPoly {
    int dx = -1, dy = -1;  // -1/-1 encodes the zero polynomial
    std::vector<Rat> c;

    Rat coeff(int i, int j) const {
        if (i < 0 || j < 0 || i > dx || j > dy) return rat(0);
        return c[static_cast<size_t>(i) * (dy + 1) + j];
    }
    bool is_zero() const { return dx < 0; }
};

inline BiPoly make_bipoly(int dx, int dy, std::vector<Rat> coeffs) {
    if (dx < 0 || dy < 0) return BiPoly{};
    if (static_cast<int>(coeffs.size()) != (dx + 1) * (dy + 1))
        throw std::invalid_argument("coefficient grid size mismatch");
    BiPoly p{dx, dy, std::move(coeffs)};
    // trim to the actual degrees
    int mx = -1, my = -1;
    for (int i = 0; i <= dx; ++i)
        for (int j = 0; j <= dy; ++j)
            if (p.coeff(i, j) != 0) {
                mx = std::max(mx, i);
                my = std::max(my, j);
            }
    if (mx < 0) return BiPoly{};
    BiPoly q{mx, my, std::vector<Rat>(static_cast<size_t>(mx + 1) * (my + 1))};
    for (int i = 0; i <= mx; ++i)
        for (int j = 0; j <= my; ++j) q.c[static_cast<size_t>(i) * (my + 1) + j] = p.coeff(i, j);
    return q;
}

inline BiPoly bipoly_monomial(int i, int j, const Rat& v) {
    if (v == 0) return BiPoly{};
    std::vector<Rat> g(static_cast<size_t>(i + 1) * (j + 1), rat(0));
    g[static_cast<size_t>(i) * (j + 1) + j] = v;
    return make_bipoly(i, j, std::move(g));
}

inline BiPoly operator+(const BiPoly& a, const BiPoly& b) {
    int dx = std::max(a.dx, b.dx), dy = std::max(a.dy, b.dy);
    if (dx < 0) return BiPoly{};
    std::vector<Rat> g(static_cast<size_t>(dx + 1) * (dy + 1), rat(0));
    for (int i = 0; i <= dx; ++i)
        for (int j = 0; j <= dy; ++j)
            g[static_cast<size_t>(i) * (dy + 1) + j] = a.coeff(i, j) + b.coeff(i, j);
    return make_bipoly(dx, dy, std::move(g));
}

inline BiPoly operator-(const BiPoly& a, const BiPoly& b) {
    int dx = std::max(a.dx, b.dx), dy = std::max(a.dy, b.dy);
    if (dx < 0) return BiPoly{};
    std::vector<Rat> g(static_cast<size_t>(dx + 1) * (dy + 1), rat(0));
    for (int i = 0; i <= dx; ++i)
        for (int j = 0; j <= dy; ++j)
            g[static_cast<size_t>(i) * (dy + 1) + j] = a.coeff(i, j) - b.coeff(i, j);
    return make_bipoly(dx, dy, std::move(g));
}

inline BiPoly operator*(const BiPoly& a, const BiPoly& b) {
    if (a.is_zero() || b.is_zero()) return BiPoly{};
    int dx = a.dx + b.dx, dy = a.dy + b.dy;
    std::vector<Rat> g(static_cast<size_t>(dx + 1) * (dy + 1), rat(0));
    for (int i = 0; i <= a.dx; ++i)
        for (int j = 0; j <= a.dy; ++j) {
            Rat v = a.coeff(i, j);
            if (v == 0) continue;
            for (int k = 0; k <= b.dx; ++k)
                for (int l = 0; l <= b.dy; ++l)
                    if (b.coeff(k, l) != 0)
                        g[static_cast<size_t>(i + k) * (dy + 1) + j + l] += v * b.coeff(k, l);
        }
    return make_bipoly(dx, dy, std::move(g));
}

inline BiPoly operator*(const Rat& s, const BiPoly& a) {
    if (s == 0 || a.is_zero()) return BiPoly{};
    BiPoly r = a;
    for (auto& x : r.c) x *= s;
    return r;
}

inline bool operator==(const BiPoly& a, const BiPoly& b) {
    return (a - b).is_zero();
}

inline BiPoly deriv_x(const BiPoly& a) {
    if (a.dx < 1) return BiPoly{};
    std::vector<Rat> g(static_cast<size_t>(a.dx) * (a.dy + 1), rat(0));
    for (int i = 1; i <= a.dx; ++i)
        for (int j = 0; j <= a.dy; ++j)
            g[static_cast<size_t>(i - 1) * (a.dy + 1) + j] = rat(i) * a.coeff(i, j);
    return make_bipoly(a.dx - 1, a.dy, std::move(g));
}

inline BiPoly deriv_y(const BiPoly& a) {
    if (a.dy < 1) return BiPoly{};
    std::vector<Rat> g(static_cast<size_t>(a.dx + 1) * a.dy, rat(0));
    for (int i = 0; i <= a.dx; ++i)
        for (int j = 1; j <= a.dy; ++j)
            g[static_cast<size_t>(i) * a.dy + j - 1] = rat(j) * a.coeff(i, j);
    return make_bipoly(a.dx, a.dy - 1, std::move(g));
}

inline Rat eval(const BiPoly& a, const Rat& x, const Rat& y) {
    Rat v = 0;
    for (int i = a.dx; i >= 0; --i) {
        Rat row = 0;
        for (int j = a.dy; j >= 0; --j) row = row * y + a.coeff(i, j);
        v = v * x + row;
    }
    return v;
}

// substitute y = t, leaving a univariate polynomial in x
inline UniPoly eval_y(const BiPoly& a, const Rat& t) {
    UniPoly r;
    if (a.is_zero()) return r;
    r.c.assign(a.dx + 1, rat(0));
    for (int i = 0; i <= a.dx; ++i) {
        Rat row = 0;
        for (int j = a.dy; j >= 0; --j) row = row * t + a.coeff(i, j);
        r.c[i] = row;
    }
    r.trim();
    return r;
}

inline UniPoly eval_x(const BiPoly& a, const Rat& t) {
    UniPoly r;
    if (a.is_zero()) return r;
    r.c.assign(a.dy + 1, rat(0));
    for (int j = 0; j <= a.dy; ++j) {
        Rat col = 0;
        for (int i = a.dx; i >= 0; --i) col = col * t + a.coeff(i, j);
        r.c[j] = col;
    }
    r.trim();
    return r;
}

inline int total_degree(const BiPoly& a) {
    int d = -1;
    for (int i = 0; i <= a.dx; ++i)
        for (int j = 0; j <= a.dy; ++j)
            if (a.coeff(i, j) != 0) d = std::max(d, i + j);
    return d;
}

// first nonzero coefficient in (i, j) lexicographic order
inline Rat lex_leading_coeff(const BiPoly& a) {
    for (int i = 0; i <= a.dx; ++i)
        for (int j = 0; j <= a.dy; ++j)
            if (a.coeff(i, j) != 0) return a.coeff(i, j);
    return rat(0);
}

// content of f as a polynomial in x: monic gcd over Q of the y-coefficient
// slices; degree > 0 means a y-only factor splits off
inline UniPoly content_in_y(const BiPoly& a) {
    UniPoly g;
    for (int i = 0; i <= a.dx; ++i) {
        UniPoly slice;
        slice.c.assign(a.dy + 1, rat(0));
        for (int j = 0; j <= a.dy; ++j) slice.c[j] = a.coeff(i, j);
        slice.trim();
        if (!slice.is_zero()) g = gcd(g, slice);
    }
    return g;
}

inline UniPoly content_in_x(const BiPoly& a) {
    UniPoly g;
    for (int j = 0; j <= a.dy; ++j) {
        UniPoly slice;
        slice.c.assign(a.dx + 1, rat(0));
        for (int i = 0; i <= a.dx; ++i) slice.c[i] = a.coeff(i, j);
        slice.trim();
        if (!slice.is_zero()) g = gcd(g, slice);
    }
    return g;
}

// exact bivariate division test (single-divisor groebner reduction in lex
// order with x > y); returns the quotient when g divides f
inline std::optional<BiPoly> exact_divide(const BiPoly& f, const BiPoly& g) {
    if (g.is_zero()) throw std::invalid_argument("division by zero polynomial");
    // leading monomial of g in lex order
    int gi = -1, gj = -1;
    for (int i = g.dx; i >= 0 && gi < 0; --i)
        for (int j = g.dy; j >= 0; --j)
            if (g.coeff(i, j) != 0) { gi = i; gj = j; break; }
    BiPoly r = f, q;
    while (!r.is_zero()) {
        int ri = -1, rj = -1;
        for (int i = r.dx; i >= 0 && ri < 0; --i)
            for (int j = r.dy; j >= 0; --j)
                if (r.coeff(i, j) != 0) { ri = i; rj = j; break; }
        if (ri - gi < 0 || rj - gj < 0) return std::nullopt;
        Rat factor = r.coeff(ri, rj) / g.coeff(gi, gj);
        BiPoly t = bipoly_monomial(ri - gi, rj - gj, factor);
        q = q + t;
        r = r - t * g;
    }
    return q;
}

// gcd over Q[x, y] via the primitive prs in x; intended for small inputs
inline BiPoly gcd_bipoly(BiPoly f, BiPoly g) {
    auto to_slices = [](const BiPoly& p) {
        std::vector<UniPoly> s(p.dx + 1);
        for (int i = 0; i <= p.dx; ++i) {
            s[i].c.assign(p.dy + 1, rat(0));
            for (int j = 0; j <= p.dy; ++j) s[i].c[j] = p.coeff(i, j);
            s[i].trim();
        }
        while (!s.empty() && s.back().is_zero()) s.pop_back();
        return s;
    };
    auto from_slices = [](const std::vector<UniPoly>& s) {
        int dx = static_cast<int>(s.size()) - 1, dy = 0;
        for (const auto& u : s) dy = std::max(dy, u.deg());
        if (dx < 0) return BiPoly{};
        std::vector<Rat> grid(static_cast<size_t>(dx + 1) * (dy + 1), rat(0));
        for (int i = 0; i <= dx; ++i)
            for (int j = 0; j <= dy; ++j) grid[static_cast<size_t>(i) * (dy + 1) + j] = s[i].coeff(j);
        return make_bipoly(dx, dy, std::move(grid));
    };
    auto content = [](const std::vector<UniPoly>& s) {
        UniPoly c;
        for (const auto& u : s)
            if (!u.is_zero()) c = gcd(c, u);
        return c;
    };
    auto primitive = [&](std::vector<UniPoly> s) {
        UniPoly c = content(s);
        if (c.deg() > 0 || (c.deg() == 0 && c.coeff(0) != 1)) {
            for (auto& u : s)
                if (!u.is_zero()) u = divmod(u, c).first;
        }
        return s;
    };
    auto deg_x = [](const std::vector<UniPoly>& s) { return static_cast<int>(s.size()) - 1; };

    if (f.is_zero()) return g;
    if (g.is_zero()) return f;
    auto A = to_slices(f), B = to_slices(g);
    UniPoly cont = gcd(content(A), content(B));
    A = primitive(A);
    B = primitive(B);
    if (deg_x(A) < deg_x(B)) std::swap(A, B);
    while (deg_x(B) >= 0) {
        // pseudo remainder of A by B in x
        int da = deg_x(A), db = deg_x(B);
        if (db == 0) {
            // primitive in x and degree 0 means content 1: gcd is the content part
            A = {uni({rat(1)})};
            break;
        }
        UniPoly lb = B[db];
        std::vector<UniPoly> R = A;
        for (int k = da; k >= db; --k) {
            int dr = static_cast<int>(R.size()) - 1;
            if (dr < k) continue;
            UniPoly top = R[k];
            if (top.is_zero()) continue;
            // R = lb * R - top * x^(k-db) * B
            for (auto& u : R) u = lb * u;
            for (int i = 0; i <= db; ++i) R[k - db + i] = R[k - db + i] - top * B[i];
        }
        while (!R.empty() && R.back().is_zero()) R.pop_back();
        A = B;
        B = primitive(R);
    }
    A = primitive(A);
    BiPoly result = from_slices(A);
    // restore the shared content in y
    if (!(cont.deg() == 0)) {
        std::vector<Rat> grid(cont.c.size());
        for (size_t j = 0; j < cont.c.size(); ++j) grid[j] = cont.coeff(static_cast<int>(j));
        result = result * make_bipoly(0, cont.deg(), std::move(grid));
    }
    return result;
}

// ---------------------------------------------------------------------------
// univariate over F_p (p an odd prime as Int), for the specialization
// cross-check of the irreducibility certifier

struct UniPolyP {
    Int p;
    std::vector<Int> c;  // ascending, entries reduced mod p

    int deg() const {
        for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
            if (c[i] != 0) return i;
        return -1;
    }
    Int coeff(int i) const { return (i >= 0 && i < static_cast<int>(c.size())) ? c[i] : Int(0); }
    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
};

inline std::optional<UniPolyP> reduce_mod_p(const UniPoly& a, const Int& p) {
    UniPolyP r;
    r.p = p;
    r.c.resize(a.c.size());
    for (size_t i = 0; i < a.c.size(); ++i) {
        Int den = denominator(a.c[i]) % p;
        if (den == 0) return std::nullopt;
        Int inv;
        if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t()) == 0)
            return std::nullopt;
        r.c[i] = ((numerator(a.c[i]) % p) * inv) % p;
        if (r.c[i] < 0) r.c[i] += p;
    }
    r.trim();
    return r;
}

inline UniPolyP mul(const UniPolyP& a, const UniPolyP& b) {
    UniPolyP r;
    r.p = a.p;
    if (a.deg() < 0 || b.deg() < 0) return r;
    r.c.assign(a.deg() + b.deg() + 1, Int(0));
    for (int i = 0; i <= a.deg(); ++i) {
        if (a.c[i] == 0) continue;
        for (int j = 0; j <= b.deg(); ++j) r.c[i + j] = (r.c[i + j] + a.c[i] * b.c[j]) % a.p;
    }
    r.trim();
    return r;
}

inline UniPolyP sub(const UniPolyP& a, const UniPolyP& b) {
    UniPolyP r;
    r.p = a.p;
    r.c.assign(std::max(a.c.size(), b.c.size()), Int(0));
    for (size_t i = 0; i < r.c.size(); ++i) {
        r.c[i] = (a.coeff(static_cast<int>(i)) - b.coeff(static_cast<int>(i))) % a.p;
        if (r.c[i] < 0) r.c[i] += a.p;
    }
    r.trim();
    return r;
}

inline UniPolyP mod(const UniPolyP& a, const UniPolyP& b) {
    UniPolyP r = a;
    int db = b.deg();
    Int inv;
    mpz_invert(inv.get_mpz_t(), b.coeff(db).get_mpz_t(), a.p.get_mpz_t());
    while (r.deg() >= db) {
        int dr = r.deg();
        Int f = (r.coeff(dr) * inv) % a.p;
        for (int i = 0; i <= db; ++i) {
            r.c[dr - db + i] = (r.c[dr - db + i] - f * b.coeff(i)) % a.p;
            if (r.c[dr - db + i] < 0) r.c[dr - db + i] += a.p;
        }
        r.trim();
    }
    return r;
}

inline UniPolyP gcd(UniPolyP a, UniPolyP b) {
    while (b.deg() >= 0) {
        UniPolyP r = mod(a, b);
        a = b;
        b = r;
    }
    if (a.deg() >= 0) {
        Int inv;
        mpz_invert(inv.get_mpz_t(), a.coeff(a.deg()).get_mpz_t(), a.p.get_mpz_t());
        for (auto& x : a.c) x = (x * inv) % a.p;
    }
    return a;
}

inline UniPolyP derivative(const UniPolyP& a) {
    UniPolyP r;
    r.p = a.p;
    if (a.deg() < 1) return r;
    r.c.resize(a.deg());
    for (int i = 1; i <= a.deg(); ++i) r.c[i - 1] = (a.coeff(i) * i) % a.p;
    r.trim();
    return r;
}

inline UniPolyP powmod(UniPolyP base, Int e, const UniPolyP& m) {
    UniPolyP r;
    r.p = base.p;
    r.c = {Int(1)};
    base = mod(base, m);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = mod(mul(r, base), m);
        base = mod(mul(base, base), m);
        e /= 2;
    }
    return r;
}

// distinct-degree factorization followed by cantor-zassenhaus equal-degree
// splitting; input must be squarefree mod p, p odd.  returns the multiset of
// irreducible factor degrees.
inline std::vector<int> factor_degrees_mod_p(const UniPolyP& input, SplitMix64& rng) {
    std::vector<int> degrees;
    UniPolyP f = input;
    if (f.deg() <= 0) return degrees;
    {
        Int inv;
        mpz_invert(inv.get_mpz_t(), f.coeff(f.deg()).get_mpz_t(), f.p.get_mpz_t());
        for (auto& x : f.c) x = (x * inv) % f.p;
    }
    UniPolyP xp;  // x^(p^d) mod f, iterated
    xp.p = f.p;
    xp.c = {Int(0), Int(1)};
    std::vector<std::pair<int, UniPolyP>> stages;  // (d, product of degree-d factors)
    UniPolyP work = f;
    for (int d = 1; 2 * d <= f.deg() + 1 && work.deg() > 0; ++d) {
        xp = powmod(xp, f.p, work);
        UniPolyP xminus = xp;
        // subtract x
        if (xminus.c.size() < 2) xminus.c.resize(2, Int(0));
        xminus.c[1] = (xminus.c[1] - 1) % f.p;
        if (xminus.c[1] < 0) xminus.c[1] += f.p;
        xminus.trim();
        UniPolyP g = gcd(work, xminus);
        if (g.deg() > 0) {
            stages.push_back({d, g});
            work = [&] {
                // exact division work / g
                UniPolyP q;
                q.p = f.p;
                UniPolyP r = work;
                int dg = g.deg();
                Int inv;
                mpz_invert(inv.get_mpz_t(), g.coeff(dg).get_mpz_t(), f.p.get_mpz_t());
                q.c.assign(r.deg() - dg + 1, Int(0));
                while (r.deg() >= dg) {
                    int dr = r.deg();
                    Int fac = (r.coeff(dr) * inv) % f.p;
                    q.c[dr - dg] = fac;
                    for (int i = 0; i <= dg; ++i) {
                        r.c[dr - dg + i] = (r.c[dr - dg + i] - fac * g.coeff(i)) % f.p;
                        if (r.c[dr - dg + i] < 0) r.c[dr - dg + i] += f.p;
                    }
                    r.trim();
                }
                return q;
            }();
        }
    }
    if (work.deg() > 0) stages.push_back({work.deg(), work});

    for (auto& [d, prod] : stages) {
        // split prod into deg-d irreducibles
        std::vector<UniPolyP> todo = {prod}, done;
        Int exp = 1;
        for (int i = 0; i < d; ++i) exp *= prod.p;
        exp = (exp - 1) / 2;
        while (!todo.empty()) {
            UniPolyP g = todo.back();
            todo.pop_back();
            if (g.deg() == d) {
                done.push_back(g);
                continue;
            }
            // random split
            UniPolyP r;
            r.p = g.p;
            r.c.resize(g.deg());
            bool all_zero = true;
            for (auto& x : r.c) {
                Int v = Int(static_cast<unsigned long>(rng.next() % 1000000007ULL)) % g.p;
                x = v;
                if (v != 0) all_zero = false;
            }
            if (all_zero) {
                todo.push_back(g);
                continue;
            }
            r.trim();
            UniPolyP h = powmod(r, exp, g);
            if (h.c.empty()) h.c = {Int(0)};
            h.c[0] = (h.c[0] - 1) % g.p;
            if (h.c[0] < 0) h.c[0] += g.p;
            h.trim();
            UniPolyP w = gcd(g, h);
            if (w.deg() <= 0 || w.deg() == g.deg()) {
                todo.push_back(g);
                continue;
            }
            // divide g by w and recurse on both halves
            UniPolyP q;
            q.p = g.p;
            {
                UniPolyP rr = g;
                int dw = w.deg();
                Int inv;
                mpz_invert(inv.get_mpz_t(), w.coeff(dw).get_mpz_t(), g.p.get_mpz_t());
                q.c.assign(rr.deg() - dw + 1, Int(0));
                while (rr.deg() >= dw) {
                    int dr = rr.deg();
                    Int fac = (rr.coeff(dr) * inv) % g.p;
                    q.c[dr - dw] = fac;
                    for (int i = 0; i <= dw; ++i) {
                        rr.c[dr - dw + i] = (rr.c[dr - dw + i] - fac * w.coeff(i)) % g.p;
                        if (rr.c[dr - dw + i] < 0) rr.c[dr - dw + i] += g.p;
                    }
                    rr.trim();
                }
            }
            todo.push_back(w);
            todo.push_back(q);
        }
        for (size_t i = 0; i < done.size(); ++i) degrees.push_back(d);
    }
    std::sort(degrees.begin(), degrees.end());
    return degrees;
}

}  // namespace surf
