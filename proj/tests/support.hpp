#pragma once

// Shared fixtures for the test suites: small doubles used throughout, and a
// brute-force evaluator for the skew pairing that expands every coproduct by
// full subset enumeration. The evaluator splits products at the *last* factor
// while the library splits at the first, so the two recursion trees are
// genuinely different computations of the same axioms.

#include <random>
#include <vector>

#include "nforge/nichols.hpp"

namespace nftest {

using namespace nforge;

// F = G = Z/2, tau0(g, g) = -1, one index pair (g, g). D is the Drinfeld
// double of the 4-dimensional Sweedler Hopf algebra, dim 16.
inline DoubleDatum sweedler_datum(int max_degree = 6) {
    DoubleDatum d;
    d.f_group = d.g_group = GroupSpec{{2}};
    d.tau0.left = d.tau0.right = d.f_group;
    d.tau0.root_order = 2;
    d.tau0.exponents = {{1}};
    d.index.push_back({{1}, {1}});
    d.max_degree = max_degree;
    d.validate();
    return d;
}

// Frobenius-Lusztig kernel setup: F = G = (Z/l)^I, f_i = g_i = K_i,
// tau0(K_i, K_j) = q^{-d_i a_ij}.
inline DoubleDatum fl_datum(const std::vector<std::vector<std::int64_t>>& cartan,
                            const std::vector<std::int64_t>& sym, std::int64_t l,
                            int max_degree = 12) {
    DoubleDatum dd;
    size_t n = cartan.size();
    dd.f_group = dd.g_group = GroupSpec{Exponents(n, l)};
    dd.tau0.left = dd.tau0.right = dd.f_group;
    dd.tau0.root_order = l;
    dd.tau0.exponents.assign(n, Exponents(n, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            std::int64_t e = (-sym[i] * cartan[i][j]) % l;
            dd.tau0.exponents[i][j] = e < 0 ? e + l : e;
        }
    for (size_t i = 0; i < n; ++i) {
        Exponents f(n, 0), g(n, 0);
        f[i] = g[i] = 1;
        dd.index.push_back({f, g});
    }
    dd.max_degree = max_degree;
    dd.validate();
    return dd;
}

inline DoubleDatum fl_a1(std::int64_t l, int max_degree = 8) {
    return fl_datum({{2}}, {1}, l, max_degree);
}
inline DoubleDatum fl_a2(std::int64_t l, int max_degree = 10) {
    return fl_datum({{2, -1}, {-1, 2}}, {1, 1}, l, max_degree);
}

// random small datum with all group orders equal to N so any exponent matrix
// is well-defined
inline DoubleDatum random_datum(std::mt19937& rng, int max_degree = 5) {
    std::vector<std::int64_t> ns{2, 3, 4, 5, 6};
    std::int64_t n = ns[rng() % ns.size()];
    size_t rf = 1 + rng() % 2, rg = 1 + rng() % 2;
    DoubleDatum d;
    d.f_group = GroupSpec{Exponents(rf, n)};
    d.g_group = GroupSpec{Exponents(rg, n)};
    d.tau0.left = d.f_group;
    d.tau0.right = d.g_group;
    d.tau0.root_order = n;
    d.tau0.exponents.assign(rf, Exponents(rg, 0));
    for (auto& row : d.tau0.exponents)
        for (auto& e : row) e = rng() % n;
    size_t ni = 1 + rng() % 2;
    for (size_t i = 0; i < ni; ++i) {
        Exponents f(rf), g(rg);
        for (auto& e : f) e = rng() % n;
        for (auto& e : g) e = rng() % n;
        d.index.push_back({std::move(f), std::move(g)});
    }
    d.max_degree = max_degree;
    d.validate();
    return d;
}

inline Word random_word(std::mt19937& rng, size_t letters, size_t len) {
    Word w(len);
    for (auto& x : w) x = static_cast<int>(rng() % letters);
    return w;
}

// ---------------------------------------------------------------------------
// brute-force oracle for tau
// ---------------------------------------------------------------------------

struct OraclePair {
    std::vector<HAtom> first, second;
};

// full coproduct of an H-atom sequence: every subset of letter positions
// moves right, group atoms go to both sides
inline std::vector<OraclePair> oracle_coproduct(const DoubleDatum& d,
                                                const std::vector<HAtom>& b) {
    std::vector<size_t> letter_pos;
    for (size_t i = 0; i < b.size(); ++i)
        if (b[i].is_letter()) letter_pos.push_back(i);
    std::vector<OraclePair> out;
    for (size_t mask = 0; mask < (size_t{1} << letter_pos.size()); ++mask) {
        OraclePair t;
        size_t li = 0;
        for (size_t i = 0; i < b.size(); ++i) {
            if (!b[i].is_letter()) {
                t.first.push_back(b[i]);
                t.second.push_back(b[i]);
                continue;
            }
            bool right = mask & (size_t{1} << li);
            ++li;
            if (right) {
                t.first.push_back(HAtom::grp(d.index[b[i].letter].g));
                t.second.push_back(b[i]);
            } else {
                t.first.push_back(b[i]);
            }
        }
        out.push_back(std::move(t));
    }
    return out;
}

inline Cyc oracle_tau(const DoubleDatum& d, const std::vector<BAtom>& a,
                      const std::vector<HAtom>& b) {
    std::int64_t n = d.root_order();
    auto eps_b = [&](const std::vector<HAtom>& s) {
        for (const auto& t : s)
            if (t.is_letter()) return Cyc::zero(n);
        return Cyc::one(n);
    };
    if (a.empty()) return eps_b(b);
    if (b.empty()) {
        for (const auto& t : a)
            if (t.is_letter()) return Cyc::zero(n);
        return Cyc::one(n);
    }
    if (a.size() == 1 && b.size() == 1) {
        const BAtom& x = a[0];
        const HAtom& y = b[0];
        if (x.is_letter() && y.is_letter())
            return x.letter == y.letter ? Cyc::one(n) : Cyc::zero(n);
        if (!x.is_letter() && !y.is_letter()) return d.tau0.eval(x.f, y.g);
        return Cyc::zero(n);
    }
    if (a.size() == 1) {
        // tau(a, h l) = tau(a_1, l) tau(a_2, h), split at the LAST atom
        std::vector<HAtom> h(b.begin(), b.end() - 1);
        std::vector<HAtom> l{b.back()};
        const BAtom& x = a[0];
        if (!x.is_letter())
            return oracle_tau(d, {x}, l) * oracle_tau(d, {x}, h);
        // Delta(v_i) = v_i x 1 + f_i x v_i
        Cyc t1 = oracle_tau(d, {x}, l) * oracle_tau(d, {}, h);
        Cyc t2 = oracle_tau(d, {BAtom::grp(d.index[x.letter].f)}, l) * oracle_tau(d, {x}, h);
        return t1 + t2;
    }
    // tau(bc, h) = tau(b, h_1) tau(c, h_2), split at the LAST atom of a
    std::vector<BAtom> pre(a.begin(), a.end() - 1);
    std::vector<BAtom> last{a.back()};
    Cyc acc = Cyc::zero(n);
    for (const auto& term : oracle_coproduct(d, b))
        acc += oracle_tau(d, pre, term.first) * oracle_tau(d, last, term.second);
    return acc;
}

inline Cyc oracle_tau_words(const DoubleDatum& d, const Word& x, const Word& y) {
    std::vector<BAtom> a;
    std::vector<HAtom> b;
    for (int i : x) a.push_back(BAtom::v(i));
    for (int j : y) b.push_back(HAtom::w(j));
    return oracle_tau(d, a, b);
}

// composite inverse of the antipode on a v-word, as a signed atom sequence:
// Sbar is anti-multiplicative with Sbar(v_i) = -v_i f_i^{-1}
inline std::pair<int, std::vector<BAtom>> sbar_atoms(const DoubleDatum& d, const Word& r) {
    std::vector<BAtom> atoms;
    int sign = (r.size() % 2 == 0) ? 1 : -1;
    for (size_t p = r.size(); p-- > 0;) {
        atoms.push_back(BAtom::v(r[p]));
        atoms.push_back(BAtom::grp(d.f_group.neg(d.index[r[p]].f)));
    }
    return {sign, atoms};
}

} // namespace nftest
