#pragma once

#include <vector>

#include "nforge/abgroup.hpp"
#include "nforge/datum.hpp"

namespace nforge {

// Diagonal Yetter-Drinfeld datum over an abelian group: a list of pairs
// (chi_i, g_i), one per one-dimensional summand (k v_i; chi_i, g_i).
struct YDDatum {
    GroupSpec group;
    struct Entry {
        Character chi;
        Exponents g;
    };
    std::vector<Entry> entries;

    void validate() const {
        if (entries.empty()) throw InvalidInput("YDDatum: index set must be nonempty");
        for (const auto& e : entries) {
            if (!(e.chi.group == group)) throw InvalidInput("YDDatum: character group mismatch");
            e.chi.validate();
        }
    }
};

struct BraidingMatrix {
    std::int64_t root_order = 1;
    std::vector<Exponents> exponents;  // q_ij = zeta ^ exponents[i][j]

    Cyc entry(size_t i, size_t j) const {
        return Cyc::zeta_pow(root_order, exponents[i][j]);
    }
    size_t size() const { return exponents.size(); }
};

// q_ij = chi_j(g_i)
inline BraidingMatrix braiding(const YDDatum& v) {
    BraidingMatrix q;
    q.root_order = v.entries.front().chi.root_order;
    size_t n = v.entries.size();
    q.exponents.assign(n, Exponents(n, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            q.exponents[i][j] = v.entries[j].chi.exponent_of(v.entries[i].g);
    return q;
}

// I' = { i | q_ij q_ji = 1 for all j }: indices of the commutant V'.
inline std::vector<size_t> commutant(const YDDatum& v) {
    BraidingMatrix q = braiding(v);
    std::vector<size_t> result;
    for (size_t i = 0; i < q.size(); ++i) {
        bool symmetric_with_all = true;
        for (size_t j = 0; j < q.size(); ++j)
            if ((q.exponents[i][j] + q.exponents[j][i]) % q.root_order != 0) {
                symmetric_with_all = false;
                break;
            }
        if (symmetric_with_all) result.push_back(i);
    }
    return result;
}

// V, W symmetric iff the two braidings are mutually inverse:
// chi^W_j(g^V_i) chi^V_i(g^W_j) = 1 for all i, j.
inline bool pair_symmetric(const YDDatum& v, const YDDatum& w) {
    if (!(v.group == w.group)) throw InvalidInput("pair_symmetric: different groups");
    for (const auto& ev : v.entries)
        for (const auto& ew : w.entries) {
            std::int64_t n = ev.chi.root_order;
            if ((ew.chi.exponent_of(ev.g) + ev.chi.exponent_of(ew.g)) % n != 0) return false;
        }
    return true;
}

struct AdjacencyReport {
    std::vector<std::pair<size_t, size_t>> edges;  // i < j with tau0(f_i,g_j) tau0(f_j,g_i) != 1
    bool connected = false;
    // for |I| = 1 the dichotomy hypothesis is the scalar condition
    // tau(f_1, g_1)^2 != 1 instead of connectivity
    bool rank_one = false;
    bool rank_one_condition = false;

    bool hypothesis_holds() const { return rank_one ? rank_one_condition : connected; }
};

inline AdjacencyReport adjacency_and_connectivity(const DoubleDatum& d) {
    AdjacencyReport rep;
    size_t n = d.rank();
    std::int64_t order = d.root_order();
    if (n == 1) {
        rep.rank_one = true;
        std::int64_t e = d.tau0.exponent_of(d.index[0].f, d.index[0].g);
        rep.rank_one_condition = (2 * e) % order != 0;
        rep.connected = true;
        return rep;
    }
    std::vector<std::vector<size_t>> adj(n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            std::int64_t e = d.tau0.exponent_of(d.index[i].f, d.index[j].g) +
                             d.tau0.exponent_of(d.index[j].f, d.index[i].g);
            if (e % order != 0) {
                rep.edges.emplace_back(i, j);
                adj[i].push_back(j);
                adj[j].push_back(i);
            }
        }
    std::vector<bool> seen(n, false);
    std::vector<size_t> stack{0};
    seen[0] = true;
    size_t count = 1;
    while (!stack.empty()) {
        size_t x = stack.back();
        stack.pop_back();
        for (size_t y : adj[x])
            if (!seen[y]) {
                seen[y] = true;
                ++count;
                stack.push_back(y);
            }
    }
    rep.connected = count == n;
    return rep;
}

enum class Rank1Nichols { polynomial, truncated_at_2, other };

// Remark 2.1 case split in characteristic zero: B(kv) is k[X] when
// chi(g) = 1 and k[X]/(X^2) when chi(g) = -1. Everything else is handled by
// the pairing engine.
inline Rank1Nichols remark21_classify(const Character& chi, const Exponents& g) {
    Cyc val = chi.eval(g);
    if (val.is_one()) return Rank1Nichols::polynomial;
    if (val == Cyc::from_rational(chi.root_order, -1)) return Rank1Nichols::truncated_at_2;
    return Rank1Nichols::other;
}

// The two Yetter-Drinfeld data of Proposition 3.5(1), upgraded over F x G.
inline YDDatum upgraded_v(const DoubleDatum& d) {
    YDDatum v;
    v.group = d.product_group();
    for (size_t i = 0; i < d.rank(); ++i)
        v.entries.push_back({d.v_character(i), d.v_coaction(i)});
    return v;
}

inline YDDatum upgraded_w(const DoubleDatum& d) {
    YDDatum w;
    w.group = d.product_group();
    for (size_t i = 0; i < d.rank(); ++i)
        w.entries.push_back({d.w_character(i), d.w_coaction(i)});
    return w;
}

} // namespace nforge
