#pragma once

#include <cstdint>
#include <vector>

#include "nforge/abgroup.hpp"
#include "nforge/config.hpp"
#include "nforge/errors.hpp"

namespace nforge {

// Full input defining the skew pairing tau and the generalized quantum double:
// abelian groups F, G, a bimultiplicative tau0 : F x G -> k^x and index pairs
// (f_i, g_i). All scalars live in the N-th cyclotomic field with N fixed per
// datum.
struct DoubleDatum {
    GroupSpec f_group;
    GroupSpec g_group;
    Bicharacter tau0;  // left = F, right = G
    struct IndexPair {
        Exponents f;
        Exponents g;
    };
    std::vector<IndexPair> index;
    int max_degree = 12;

    std::int64_t root_order() const { return tau0.root_order; }
    size_t rank() const { return index.size(); }

    void validate() const {
        if (index.empty()) throw InvalidInput("DoubleDatum: index set must be nonempty");
        if (!(tau0.left == f_group) || !(tau0.right == g_group))
            throw InvalidInput("DoubleDatum: tau0 does not match the groups");
        tau0.validate();
        for (const auto& p : index) {
            if (p.f.size() != f_group.rank() || p.g.size() != g_group.rank())
                throw InvalidInput("DoubleDatum: index pair of wrong rank");
        }
        if (max_degree < 1) throw InvalidInput("DoubleDatum: max_degree must be >= 1");
    }

    GroupSpec product_group() const { return direct_sum(f_group, g_group); }

    Exponents fg_element(size_t i) const { return concat(index[i].f, index[i].g); }

    // q^V_{ij} = tau0(f_i, g_j): the braiding matrix of V (equals the scalar in
    // relation w_j v_i = tau0(f_i, g_j) v_i w_j + ...)
    std::int64_t qv_exponent(size_t i, size_t j) const {
        return tau0.exponent_of(index[i].f, index[j].g);
    }
    // q^W_{ij} = tau0(f_j, g_i)^{-1}
    std::int64_t qw_exponent(size_t i, size_t j) const {
        std::int64_t e = -tau0.exponent_of(index[j].f, index[i].g) % root_order();
        return e < 0 ? e + root_order() : e;
    }

    // Characters over F x G per the diagonal Yetter-Drinfeld upgrade:
    // v_i carries (g_i-hat f_i-hat, f_i), w_i carries ((g_i f_i)-hat^{-1}, g_i).
    Character v_character(size_t i) const {
        Character chi;
        chi.group = product_group();
        chi.root_order = root_order();
        for (size_t a = 0; a < f_group.rank(); ++a)
            chi.zeta_exponents.push_back(tau0.exponent_of(f_group.generator(a), index[i].g));
        for (size_t b = 0; b < g_group.rank(); ++b)
            chi.zeta_exponents.push_back(tau0.exponent_of(index[i].f, g_group.generator(b)));
        return chi;
    }
    Character w_character(size_t i) const {
        Character chi = v_character(i);
        for (auto& e : chi.zeta_exponents) {
            e = -e % root_order();
            if (e < 0) e += root_order();
        }
        return chi;
    }

    Exponents v_coaction(size_t i) const { return concat(index[i].f, g_group.identity()); }
    Exponents w_coaction(size_t i) const { return concat(f_group.identity(), index[i].g); }
};

// Minimal-triangular input data: a group G with a skew-symmetric
// non-degenerate tau0, carrier multiplicities n_g and matrices M_g.
struct GelakiDatum {
    GroupSpec group;
    Bicharacter tau0;  // on G x G
    struct Carrier {
        Exponents g;
        std::vector<std::vector<Cyc>> m;  // n_g x n_g over the scalar field
    };
    std::vector<Carrier> carriers;

    std::int64_t root_order() const { return tau0.root_order; }
};

} // namespace nforge
