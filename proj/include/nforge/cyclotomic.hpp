#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nforge/errors.hpp"

namespace nforge {

using Rational = mpq_class;
using Integer = mpz_class;

namespace detail {

// Integer polynomials, dense, index = degree, no trailing zeros.
using ZPoly = std::vector<Integer>;

inline void zp_trim(ZPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

// Exact division, used only where divisibility is guaranteed.
inline ZPoly zp_divexact(const ZPoly& num, const ZPoly& den) {
    ZPoly rem = num, q;
    if (den.empty()) throw InternalInconsistency("zp_divexact by zero");
    q.assign(rem.size() >= den.size() ? rem.size() - den.size() + 1 : 0, Integer(0));
    while (rem.size() >= den.size() && !rem.empty()) {
        size_t shift = rem.size() - den.size();
        Integer c = rem.back() / den.back();
        q[shift] = c;
        for (size_t i = 0; i < den.size(); ++i) rem[shift + i] -= c * den[i];
        zp_trim(rem);
        if (!rem.empty() && rem.size() >= den.size() && rem.back() != 0 &&
            rem.size() - den.size() == shift)
            throw InternalInconsistency("zp_divexact: non-exact division");
    }
    if (!rem.empty()) throw InternalInconsistency("zp_divexact: nonzero remainder");
    zp_trim(q);
    return q;
}

struct CycField {
    std::int64_t n = 1;            // root order N
    size_t phi = 1;                // deg of the cyclotomic polynomial
    ZPoly poly;                    // Phi_N, monic
    std::vector<std::vector<Integer>> powers; // x^k mod Phi_N, k = 0 .. max(N-1, 2 phi - 2)
};

inline const ZPoly& cyclotomic_poly(std::int64_t n);

inline ZPoly compute_cyclotomic_poly(std::int64_t n) {
    // x^n - 1 divided by Phi_d for all proper divisors d of n
    ZPoly p(n + 1, Integer(0));
    p[0] = -1;
    p[n] = 1;
    for (std::int64_t d = 1; d < n; ++d)
        if (n % d == 0) p = zp_divexact(p, cyclotomic_poly(d));
    return p;
}

inline const ZPoly& cyclotomic_poly(std::int64_t n) {
    static std::map<std::int64_t, ZPoly> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    ZPoly p = compute_cyclotomic_poly(n);
    return cache.emplace(n, std::move(p)).first->second;
}

inline const CycField& cyc_field(std::int64_t n) {
    static std::map<std::int64_t, CycField> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    CycField f;
    f.n = n;
    f.poly = cyclotomic_poly(n);
    f.phi = f.poly.size() - 1;
    size_t maxpow = std::max<size_t>(static_cast<size_t>(n), 2 * f.phi > 0 ? 2 * f.phi - 1 : 1);
    f.powers.reserve(maxpow);
    std::vector<Integer> row(f.phi, Integer(0));
    if (f.phi > 0) row[0] = 1;
    f.powers.push_back(row);
    for (size_t k = 1; k < maxpow; ++k) {
        // multiply previous row by x, reduce the overflow with Phi_N (monic)
        std::vector<Integer> next(f.phi, Integer(0));
        Integer top = f.phi > 0 ? f.powers.back()[f.phi - 1] : Integer(0);
        for (size_t i = f.phi; i-- > 1;) next[i] = f.powers.back()[i - 1];
        if (f.phi > 0) next[0] = 0;
        if (top != 0)
            for (size_t i = 0; i < f.phi; ++i) next[i] -= top * f.poly[i];
        f.powers.push_back(std::move(next));
    }
    return cache.emplace(n, std::move(f)).first->second;
}

} // namespace detail

inline std::int64_t euler_phi(std::int64_t n) {
    return static_cast<std::int64_t>(detail::cyc_field(n).phi);
}

// Exact element of the N-th cyclotomic field in the power basis
// 1, z, ..., z^{phi(N)-1} modulo Phi_N. The representation is canonical, so
// structural equality is field equality.
class Cyc {
public:
    Cyc() : n_(1), coeffs_(1, Rational(0)) {}

    explicit Cyc(std::int64_t n) : n_(n), coeffs_(detail::cyc_field(n).phi, Rational(0)) {}

    static Cyc from_rational(std::int64_t n, const Rational& r) {
        Cyc c(n);
        c.coeffs_[0] = r;
        c.canon();
        return c;
    }

    static Cyc zero(std::int64_t n) { return Cyc(n); }
    static Cyc one(std::int64_t n) { return from_rational(n, 1); }

    // z_N^k
    static Cyc zeta_pow(std::int64_t n, std::int64_t k) {
        const auto& f = detail::cyc_field(n);
        k %= n;
        if (k < 0) k += n;
        Cyc c(n);
        for (size_t i = 0; i < f.phi; ++i) c.coeffs_[i] = Rational(f.powers[k][i]);
        c.canon();
        return c;
    }

    // canonical reduction of a raw polynomial sum_k raw[k] * z^k (any length)
    static Cyc make(std::int64_t n, const std::vector<Rational>& raw) {
        const auto& f = detail::cyc_field(n);
        Cyc c(n);
        for (size_t k = 0; k < raw.size(); ++k) {
            if (raw[k] == 0) continue;
            std::int64_t e = static_cast<std::int64_t>(k) % n;
            for (size_t i = 0; i < f.phi; ++i) c.coeffs_[i] += raw[k] * Rational(f.powers[e][i]);
        }
        c.canon();
        return c;
    }

    std::int64_t root_order() const { return n_; }
    const std::vector<Rational>& coeffs() const { return coeffs_; }

    bool is_zero() const {
        for (const auto& c : coeffs_)
            if (c != 0) return false;
        return true;
    }
    bool is_one() const { return *this == one(n_); }

    std::optional<Rational> as_rational() const {
        for (size_t i = 1; i < coeffs_.size(); ++i)
            if (coeffs_[i] != 0) return std::nullopt;
        return coeffs_[0];
    }

    friend bool operator==(const Cyc& a, const Cyc& b) {
        if (a.n_ != b.n_) throw InternalInconsistency("Cyc: mixed root orders");
        return a.coeffs_ == b.coeffs_;
    }
    friend bool operator!=(const Cyc& a, const Cyc& b) { return !(a == b); }
    friend bool operator<(const Cyc& a, const Cyc& b) {
        if (a.n_ != b.n_) throw InternalInconsistency("Cyc: mixed root orders");
        for (size_t i = 0; i < a.coeffs_.size(); ++i) {
            int c = cmp(a.coeffs_[i], b.coeffs_[i]);
            if (c != 0) return c < 0;
        }
        return false;
    }

    friend Cyc operator+(const Cyc& a, const Cyc& b) {
        check_same(a, b);
        Cyc r = a;
        for (size_t i = 0; i < r.coeffs_.size(); ++i) r.coeffs_[i] += b.coeffs_[i];
        r.canon();
        return r;
    }
    friend Cyc operator-(const Cyc& a, const Cyc& b) {
        check_same(a, b);
        Cyc r = a;
        for (size_t i = 0; i < r.coeffs_.size(); ++i) r.coeffs_[i] -= b.coeffs_[i];
        r.canon();
        return r;
    }
    friend Cyc operator-(const Cyc& a) {
        Cyc r = a;
        for (auto& c : r.coeffs_) c = -c;
        return r;
    }
    friend Cyc operator*(const Cyc& a, const Cyc& b) {
        check_same(a, b);
        const auto& f = detail::cyc_field(a.n_);
        size_t phi = f.phi;
        std::vector<Rational> prod(2 * phi > 0 ? 2 * phi - 1 : 1, Rational(0));
        for (size_t i = 0; i < phi; ++i) {
            if (a.coeffs_[i] == 0) continue;
            for (size_t j = 0; j < phi; ++j) {
                if (b.coeffs_[j] == 0) continue;
                prod[i + j] += a.coeffs_[i] * b.coeffs_[j];
            }
        }
        Cyc r(a.n_);
        for (size_t k = 0; k < prod.size(); ++k) {
            if (prod[k] == 0) continue;
            if (k < phi)
                r.coeffs_[k] += prod[k];
            else
                for (size_t i = 0; i < phi; ++i) r.coeffs_[i] += prod[k] * Rational(f.powers[k][i]);
        }
        r.canon();
        return r;
    }
    friend Cyc operator*(const Cyc& a, const Rational& s) {
        Cyc r = a;
        for (auto& c : r.coeffs_) c *= s;
        r.canon();
        return r;
    }
    friend Cyc operator*(const Rational& s, const Cyc& a) { return a * s; }

    Cyc& operator+=(const Cyc& b) { return *this = *this + b; }
    Cyc& operator-=(const Cyc& b) { return *this = *this - b; }
    Cyc& operator*=(const Cyc& b) { return *this = *this * b; }

    // Extended Euclid against Phi_N; inversion of zero is a reported error.
    Cyc inverse() const {
        if (is_zero()) throw InvalidInput("Cyc: inversion of zero");
        using QPoly = std::vector<Rational>;
        const auto& f = detail::cyc_field(n_);
        QPoly a(coeffs_);
        while (!a.empty() && a.back() == 0) a.pop_back();
        QPoly b(f.poly.size());
        for (size_t i = 0; i < f.poly.size(); ++i) b[i] = Rational(f.poly[i]);
        // invariant: r0 = s0 * this (mod Phi), r1 = s1 * this (mod Phi)
        QPoly r0 = b, r1 = a;
        QPoly s0{Rational(0)}, s1{Rational(1)};
        auto trim = [](QPoly& p) {
            while (!p.empty() && p.back() == 0) p.pop_back();
        };
        while (!(r1.size() == 1 || r1.empty())) {
            // divide r0 by r1
            QPoly q(r0.size() >= r1.size() ? r0.size() - r1.size() + 1 : 0, Rational(0));
            QPoly rem = r0;
            while (rem.size() >= r1.size() && !rem.empty()) {
                size_t shift = rem.size() - r1.size();
                Rational c = rem.back() / r1.back();
                q[shift] += c;
                for (size_t i = 0; i < r1.size(); ++i) rem[shift + i] -= c * r1[i];
                trim(rem);
            }
            // s_new = s0 - q*s1
            QPoly snew = s0;
            snew.resize(std::max(snew.size(), q.size() + s1.size()), Rational(0));
            for (size_t i = 0; i < q.size(); ++i) {
                if (q[i] == 0) continue;
                for (size_t j = 0; j < s1.size(); ++j) snew[i + j] -= q[i] * s1[j];
            }
            trim(snew);
            r0 = std::move(r1);
            r1 = std::move(rem);
            s0 = std::move(s1);
            s1 = std::move(snew);
        }
        if (r1.empty()) throw InternalInconsistency("Cyc: gcd with Phi_N not constant");
        Rational g = r1[0];
        std::vector<Rational> inv(s1.size());
        for (size_t i = 0; i < s1.size(); ++i) inv[i] = s1[i] / g;
        return make(n_, inv);
    }

    Cyc pow(std::int64_t e) const {
        if (e < 0) return inverse().pow(-e);
        Cyc base = *this, r = one(n_);
        while (e > 0) {
            if (e & 1) r *= base;
            base *= base;
            e >>= 1;
        }
        return r;
    }

    // smallest m with a^m = 1, or nullopt if a is not a root of unity.
    // The torsion of Q(zeta_N)^x is the group of lcm(2,N)-th roots of unity.
    std::optional<std::int64_t> multiplicative_order() const {
        std::int64_t m = std::lcm<std::int64_t>(2, n_);
        if (!(pow(m) == one(n_))) return std::nullopt;
        std::int64_t best = m;
        for (std::int64_t d = 1; d * d <= m; ++d) {
            if (m % d != 0) continue;
            if (d < best && pow(d) == one(n_)) best = d;
            std::int64_t e = m / d;
            if (e < best && pow(e) == one(n_)) best = e;
        }
        return best;
    }

    std::string str() const {
        std::ostringstream os;
        bool first = true;
        for (size_t i = 0; i < coeffs_.size(); ++i) {
            if (coeffs_[i] == 0) continue;
            Rational c = coeffs_[i];
            if (!first) os << (c > 0 ? " + " : " - ");
            else if (c < 0) os << "-";
            Rational ac = abs(c);
            if (i == 0)
                os << ac.get_str();
            else {
                if (ac != 1) os << ac.get_str() << "*";
                os << "z";
                if (i > 1) os << "^" << i;
            }
            first = false;
        }
        if (first) os << "0";
        return os.str();
    }

private:
    static void check_same(const Cyc& a, const Cyc& b) {
        if (a.n_ != b.n_) throw InternalInconsistency("Cyc: mixed root orders");
    }
    void canon() {
        for (auto& c : coeffs_) c.canonicalize();
    }

    std::int64_t n_;
    std::vector<Rational> coeffs_;
};

} // namespace nforge
