#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

#include "nforge/config.hpp"
#include "nforge/cyclotomic.hpp"
#include "nforge/errors.hpp"
#include "nforge/linalg.hpp"

namespace nforge {

using Exponents = std::vector<std::int64_t>;

// Finite abelian group as a fixed direct sum of cyclic groups, written
// additively. Elements are exponent vectors in canonical residue range.
struct GroupSpec {
    Exponents orders;

    size_t rank() const { return orders.size(); }

    std::int64_t order() const {
        constexpr std::int64_t kHuge = std::int64_t{1} << 60;
        std::int64_t n = 1;
        for (auto o : orders) {
            if (o <= 0) throw InvalidInput("GroupSpec: orders must be >= 1");
            if (n > kHuge / o) return kHuge;  // saturate, still fails every bound
            n *= o;
        }
        return n;
    }

    std::int64_t exponent() const {
        std::int64_t e = 1;
        for (auto o : orders) e = std::lcm(e, o);
        return e;
    }

    Exponents identity() const { return Exponents(orders.size(), 0); }

    Exponents reduce(Exponents v) const {
        for (size_t i = 0; i < orders.size(); ++i) {
            v[i] %= orders[i];
            if (v[i] < 0) v[i] += orders[i];
        }
        return v;
    }

    Exponents add(const Exponents& a, const Exponents& b) const {
        Exponents r(orders.size());
        for (size_t i = 0; i < orders.size(); ++i) r[i] = a[i] + b[i];
        return reduce(std::move(r));
    }

    Exponents neg(const Exponents& a) const {
        Exponents r(orders.size());
        for (size_t i = 0; i < orders.size(); ++i) r[i] = -a[i];
        return reduce(std::move(r));
    }

    Exponents sub(const Exponents& a, const Exponents& b) const { return add(a, neg(b)); }

    Exponents scalar_mul(std::int64_t k, const Exponents& a) const {
        Exponents r(orders.size());
        for (size_t i = 0; i < orders.size(); ++i) r[i] = k * a[i];
        return reduce(std::move(r));
    }

    bool is_identity(const Exponents& a) const {
        for (auto v : a)
            if (v != 0) return false;
        return true;
    }

    std::int64_t element_order(const Exponents& a) const {
        std::int64_t e = 1;
        for (size_t i = 0; i < orders.size(); ++i)
            if (a[i] != 0) e = std::lcm(e, orders[i] / std::gcd(orders[i], a[i]));
        return e;
    }

    // mixed-radix encoding; requires order() within bounds
    std::int64_t encode(const Exponents& a) const {
        std::int64_t idx = 0;
        for (size_t i = 0; i < orders.size(); ++i) idx = idx * orders[i] + a[i];
        return idx;
    }
    Exponents decode(std::int64_t idx) const {
        Exponents a(orders.size());
        for (size_t i = orders.size(); i-- > 0;) {
            a[i] = idx % orders[i];
            idx /= orders[i];
        }
        return a;
    }

    std::vector<Exponents> elements() const {
        std::int64_t n = order();
        if (n > config().max_group_order)
            throw BoundExceeded("group order exceeds bound " +
                                std::to_string(config().max_group_order));
        std::vector<Exponents> all;
        all.reserve(n);
        Exponents cur = identity();
        for (std::int64_t i = 0; i < n; ++i) all.push_back(decode(i));
        return all;
    }

    Exponents generator(size_t i) const {
        Exponents g = identity();
        g[i] = orders[i] == 1 ? 0 : 1;
        return g;
    }

    friend bool operator==(const GroupSpec& a, const GroupSpec& b) {
        return a.orders == b.orders;
    }
};

// direct sum, used for F x G
inline GroupSpec direct_sum(const GroupSpec& a, const GroupSpec& b) {
    GroupSpec s = a;
    s.orders.insert(s.orders.end(), b.orders.begin(), b.orders.end());
    return s;
}

inline Exponents concat(const Exponents& a, const Exponents& b) {
    Exponents r = a;
    r.insert(r.end(), b.begin(), b.end());
    return r;
}

struct Subgroup {
    GroupSpec ambient;
    std::vector<Exponents> elements;   // sorted lexicographically
    std::vector<Exponents> generators;

    std::int64_t order() const { return static_cast<std::int64_t>(elements.size()); }

    bool contains(const Exponents& x) const {
        return std::binary_search(elements.begin(), elements.end(), x);
    }

    friend bool operator==(const Subgroup& a, const Subgroup& b) {
        return a.ambient == b.ambient && a.elements == b.elements;
    }
    friend bool operator<(const Subgroup& a, const Subgroup& b) {
        if (a.elements.size() != b.elements.size())
            return a.elements.size() < b.elements.size();
        return a.elements < b.elements;
    }
};

// Generated subgroup by brute-force closure, elements in lexicographic order.
inline Subgroup closure(const GroupSpec& ambient, const std::vector<Exponents>& gens) {
    std::set<Exponents> seen;
    seen.insert(ambient.identity());
    std::vector<Exponents> frontier{ambient.identity()};
    while (!frontier.empty()) {
        std::vector<Exponents> next;
        for (const auto& x : frontier)
            for (const auto& g : gens) {
                Exponents y = ambient.add(x, g);
                if (seen.insert(y).second) next.push_back(std::move(y));
                if (static_cast<std::int64_t>(seen.size()) > config().max_group_order)
                    throw BoundExceeded("closure: subgroup size exceeds bound " +
                                        std::to_string(config().max_group_order));
            }
        frontier = std::move(next);
    }
    Subgroup s;
    s.ambient = ambient;
    s.elements.assign(seen.begin(), seen.end());
    s.generators = gens;
    return s;
}

inline Subgroup trivial_subgroup(const GroupSpec& ambient) {
    return closure(ambient, {});
}

inline Subgroup full_subgroup(const GroupSpec& ambient) {
    std::vector<Exponents> gens;
    for (size_t i = 0; i < ambient.rank(); ++i) gens.push_back(ambient.generator(i));
    return closure(ambient, gens);
}

// Quotient ambient/T presented again as a direct sum of cyclic groups, with
// explicit projection and a section used to transport characters.
struct QuotientPresentation {
    GroupSpec gamma;
    GroupSpec ambient;
    // internals of the Smith form
    std::vector<std::vector<Integer>> S, Sinv;
    std::vector<Integer> diag;
    std::vector<size_t> kept;   // indices i with diag[i] > 1

    Exponents project(const Exponents& x) const {
        size_t r = ambient.rank();
        Exponents y(kept.size(), 0);
        for (size_t k = 0; k < kept.size(); ++k) {
            size_t i = kept[k];
            Integer acc = 0;
            for (size_t j = 0; j < r; ++j) acc += S[i][j] * Integer(x[j]);
            Integer d = diag[i];
            Integer m = acc % d;
            if (m < 0) m += d;
            y[k] = static_cast<std::int64_t>(m.get_si());
        }
        return y;
    }

    // a preimage of a quotient element
    Exponents section(const Exponents& y) const {
        size_t r = ambient.rank();
        std::vector<Integer> pad(r, 0);
        for (size_t k = 0; k < kept.size(); ++k) pad[kept[k]] = y[k];
        Exponents x(r, 0);
        for (size_t i = 0; i < r; ++i) {
            Integer acc = 0;
            for (size_t j = 0; j < r; ++j) acc += Sinv[i][j] * pad[j];
            Integer m = acc % Integer(ambient.orders[i]);
            if (m < 0) m += Integer(ambient.orders[i]);
            x[i] = static_cast<std::int64_t>(m.get_si());
        }
        return x;
    }
};

inline QuotientPresentation quotient(const GroupSpec& ambient, const Subgroup& t) {
    size_t r = ambient.rank();
    // relation lattice: ambient orders plus generators of T, as columns
    std::vector<Exponents> tg = t.generators.empty() ? t.elements : t.generators;
    size_t cols = r + tg.size();
    std::vector<std::vector<Integer>> m(r, std::vector<Integer>(cols, 0));
    for (size_t i = 0; i < r; ++i) m[i][i] = ambient.orders[i];
    for (size_t j = 0; j < tg.size(); ++j)
        for (size_t i = 0; i < r; ++i) m[i][r + j] = tg[j][i];

    SmithResult snf = smith_normal_form(std::move(m), r, cols);
    QuotientPresentation q;
    q.ambient = ambient;
    q.S = std::move(snf.S);
    q.Sinv = std::move(snf.Sinv);
    q.diag = std::move(snf.diag);
    for (size_t i = 0; i < r; ++i) {
        if (q.diag[i] == 0)
            throw InternalInconsistency("quotient: lattice not of full rank");
        if (q.diag[i] > 1) {
            q.kept.push_back(i);
            q.gamma.orders.push_back(static_cast<std::int64_t>(q.diag[i].get_si()));
        }
    }
    return q;
}

// Bimultiplicative map tau0 : F x G -> k^x given by a zeta-exponent matrix.
// tau0(f, g) = zeta_N ^ (f . E . g).
struct Bicharacter {
    GroupSpec left;    // F
    GroupSpec right;   // G
    std::int64_t root_order = 1;
    std::vector<Exponents> exponents;  // rank(F) x rank(G)

    void validate() const {
        if (exponents.size() != left.rank())
            throw InvalidInput("Bicharacter: exponent matrix has wrong row count");
        for (const auto& row : exponents)
            if (row.size() != right.rank())
                throw InvalidInput("Bicharacter: exponent matrix has wrong column count");
        // well-definedness: the value on a generator pair must be killed by
        // both generator orders
        for (size_t a = 0; a < left.rank(); ++a)
            for (size_t b = 0; b < right.rank(); ++b) {
                std::int64_t e = exponents[a][b];
                if ((e * left.orders[a]) % root_order != 0 ||
                    (e * right.orders[b]) % root_order != 0)
                    throw InvalidInput("Bicharacter: entry (" + std::to_string(a) + "," +
                                       std::to_string(b) + ") is not well-defined");
            }
    }

    std::int64_t exponent_of(const Exponents& f, const Exponents& g) const {
        std::int64_t e = 0;
        for (size_t a = 0; a < left.rank(); ++a) {
            if (f[a] == 0) continue;
            std::int64_t row = 0;
            for (size_t b = 0; b < right.rank(); ++b)
                row = (row + exponents[a][b] % root_order * (g[b] % root_order)) % root_order;
            e = (e + f[a] % root_order * row) % root_order;
        }
        if (e < 0) e += root_order;
        return e;
    }

    Cyc eval(const Exponents& f, const Exponents& g) const {
        return Cyc::zeta_pow(root_order, exponent_of(f, g));
    }
};

// Character of a finite abelian group, stored as zeta exponents on the fixed
// generator list.
struct Character {
    GroupSpec group;
    std::int64_t root_order = 1;
    Exponents zeta_exponents;

    void validate() const {
        if (zeta_exponents.size() != group.rank())
            throw InvalidInput("Character: wrong number of generator values");
        for (size_t i = 0; i < group.rank(); ++i)
            if ((zeta_exponents[i] * group.orders[i]) % root_order != 0)
                throw InvalidInput("Character: value on generator " + std::to_string(i) +
                                   " has wrong order");
    }

    std::int64_t exponent_of(const Exponents& x) const {
        std::int64_t e = 0;
        for (size_t i = 0; i < group.rank(); ++i)
            e = (e + zeta_exponents[i] % root_order * (x[i] % root_order)) % root_order;
        if (e < 0) e += root_order;
        return e;
    }

    Cyc eval(const Exponents& x) const { return Cyc::zeta_pow(root_order, exponent_of(x)); }

    bool is_trivial() const {
        for (size_t i = 0; i < group.rank(); ++i)
            if (exponent_of(group.generator(i)) != 0) return false;
        return true;
    }
};

// Induced symmetric pairing on (F x G) x (F x G):
//   beta(fg, f'g') = tau0(f, g') tau0(f', g).
// Under it F x G is identified with its dual when tau0 is non-degenerate.
inline Bicharacter induced_pairing(const Bicharacter& tau0) {
    Bicharacter beta;
    beta.left = beta.right = direct_sum(tau0.left, tau0.right);
    beta.root_order = tau0.root_order;
    size_t rf = tau0.left.rank(), rg = tau0.right.rank();
    beta.exponents.assign(rf + rg, Exponents(rf + rg, 0));
    for (size_t a = 0; a < rf; ++a)
        for (size_t b = 0; b < rg; ++b) {
            beta.exponents[a][rf + b] = tau0.exponents[a][b];
            beta.exponents[rf + b][a] = tau0.exponents[a][b];
        }
    return beta;
}

struct NondegeneracyReport {
    bool nondegenerate = false;
    std::optional<Exponents> left_kernel_witness;   // f with tau0(f, .) trivial
    std::optional<Exponents> right_kernel_witness;  // g with tau0(., g) trivial
};

// Kernel scan over both factors; a witness is produced on failure.
inline NondegeneracyReport nondegenerate(const Bicharacter& tau0) {
    NondegeneracyReport rep;
    std::int64_t nf = tau0.left.order(), ng = tau0.right.order();
    if (nf > config().max_scan_order || ng > config().max_scan_order)
        throw BoundExceeded("nondegenerate: group order exceeds scan bound");
    for (std::int64_t i = 1; i < nf; ++i) {
        Exponents f = tau0.left.decode(i);
        bool trivial = true;
        for (size_t b = 0; b < tau0.right.rank() && trivial; ++b)
            if (tau0.exponent_of(f, tau0.right.generator(b)) != 0) trivial = false;
        if (trivial) {
            rep.left_kernel_witness = f;
            break;
        }
    }
    for (std::int64_t i = 1; i < ng; ++i) {
        Exponents g = tau0.right.decode(i);
        bool trivial = true;
        for (size_t a = 0; a < tau0.left.rank() && trivial; ++a)
            if (tau0.exponent_of(tau0.left.generator(a), g) != 0) trivial = false;
        if (trivial) {
            rep.right_kernel_witness = g;
            break;
        }
    }
    rep.nondegenerate = !rep.left_kernel_witness && !rep.right_kernel_witness;
    return rep;
}

// S^perp = { x | beta(x, s) = 1 for all s in S } for a pairing beta of a
// group with itself.
inline Subgroup orthogonal(const Bicharacter& beta, const Subgroup& s) {
    if (!(beta.left == beta.right) || !(beta.left == s.ambient))
        throw InvalidInput("orthogonal: pairing/subgroup mismatch");
    if (!nondegenerate(beta).nondegenerate)
        throw InvalidInput("orthogonal: pairing is degenerate");
    std::int64_t n = beta.left.order();
    if (n > config().max_scan_order) throw BoundExceeded("orthogonal: order exceeds scan bound");
    const std::vector<Exponents>& gens = s.generators.empty() ? s.elements : s.generators;
    Subgroup r;
    r.ambient = beta.left;
    for (std::int64_t i = 0; i < n; ++i) {
        Exponents x = beta.left.decode(i);
        bool ok = true;
        for (const auto& g : gens)
            if (beta.exponent_of(x, g) != 0) {
                ok = false;
                break;
            }
        if (ok) r.elements.push_back(std::move(x));
    }
    std::sort(r.elements.begin(), r.elements.end());
    r.generators = r.elements;
    return r;
}

// Group homomorphism Q -> C given by images of the canonical generators of Q.
struct Hom {
    GroupSpec domain;
    GroupSpec codomain;
    std::vector<Exponents> images;  // one per domain generator

    Exponents eval(const Exponents& x) const {
        Exponents y = codomain.identity();
        for (size_t i = 0; i < domain.rank(); ++i)
            y = codomain.add(y, codomain.scalar_mul(x[i], images[i]));
        return y;
    }
};

struct SplitMonoReport {
    bool split = false;
    std::optional<Hom> retraction;  // pi : Q -> ambient-of-C with image in C
};

// Decides whether iota : C -> Q is a split mono by exhaustive search over
// homomorphisms Q -> C in deterministic lexicographic order.
inline SplitMonoReport split_mono_check(const Subgroup& c, const GroupSpec& q,
                                        const std::function<Exponents(const Exponents&)>& iota) {
    if (q.order() > config().max_group_order)
        throw BoundExceeded("split_mono_check: order exceeds bound");
    // candidate images per generator: elements of C with compatible order
    std::vector<std::vector<Exponents>> cands(q.rank());
    for (size_t i = 0; i < q.rank(); ++i)
        for (const auto& e : c.elements)
            if ((q.orders[i] % c.ambient.element_order(e)) == 0) cands[i].push_back(e);

    std::vector<size_t> pick(q.rank(), 0);
    const std::vector<Exponents>& cgens = c.generators.empty() ? c.elements : c.generators;
    while (true) {
        Hom pi;
        pi.domain = q;
        pi.codomain = c.ambient;
        for (size_t i = 0; i < q.rank(); ++i) pi.images.push_back(cands[i][pick[i]]);
        bool ok = true;
        for (const auto& g : cgens)
            if (pi.eval(iota(g)) != g) {
                ok = false;
                break;
            }
        if (ok) return {true, pi};
        // next candidate tuple
        size_t i = q.rank();
        while (i-- > 0) {
            if (++pick[i] < cands[i].size()) break;
            pick[i] = 0;
            if (i == 0) return {false, std::nullopt};
        }
        if (q.rank() == 0) return {true, pi};
    }
}

// All subgroups of C, ordered by (order, element list). Desk scale only.
inline std::vector<Subgroup> all_subgroups(const Subgroup& c) {
    std::set<std::vector<Exponents>> seen;
    std::vector<Subgroup> out;
    std::vector<Subgroup> frontier{trivial_subgroup(c.ambient)};
    // replace ambient-closure by closure inside C: generators always lie in C
    frontier[0].ambient = c.ambient;
    seen.insert(frontier[0].elements);
    out.push_back(frontier[0]);
    while (!frontier.empty()) {
        std::vector<Subgroup> next;
        for (const auto& h : frontier)
            for (const auto& e : c.elements) {
                if (h.contains(e)) continue;
                std::vector<Exponents> gens = h.generators;
                gens.push_back(e);
                Subgroup bigger = closure(c.ambient, gens);
                if (seen.insert(bigger.elements).second) {
                    out.push_back(bigger);
                    next.push_back(std::move(bigger));
                }
            }
        frontier = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace nforge
