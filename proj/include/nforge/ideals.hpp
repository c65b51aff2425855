#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nforge/double.hpp"

namespace nforge {

// Thin Hopf ideal datum a(T, Z, zeta): a central subgroup T, a subobject
// Z <= V_T given by spanning columns in v-coordinates, and a mono
// zeta : Z -> W_T given by the image columns in w-coordinates.
struct ThinIdealDatum {
    Subgroup t;
    std::vector<std::vector<Cyc>> z_columns;     // each of length |I|
    std::vector<std::vector<Cyc>> zeta_columns;  // each of length |I|
};

struct Violation {
    std::string code;
    std::string detail;
};

struct IdealValidation {
    std::vector<Violation> violations;
    std::vector<std::string> warnings;
    bool ok() const { return violations.empty(); }
};

namespace detail_ideals {

inline std::vector<size_t> support(const std::vector<Cyc>& col) {
    std::vector<size_t> s;
    for (size_t i = 0; i < col.size(); ++i)
        if (!col[i].is_zero()) s.push_back(i);
    return s;
}

inline bool same_character(const Character& a, const Character& b) {
    for (size_t k = 0; k < a.group.rank(); ++k)
        if (a.exponent_of(a.group.generator(k)) != b.exponent_of(b.group.generator(k)))
            return false;
    return true;
}

} // namespace detail_ideals

inline std::vector<bool> index_in_t(const DoubleDatum& d, const Subgroup& t) {
    std::vector<bool> in(d.rank(), false);
    for (size_t i = 0; i < d.rank(); ++i) in[i] = t.contains(d.fg_element(i));
    return in;
}

inline IdealValidation validate_thin(const DoubleDatum& d, const ThinIdealDatum& datum) {
    IdealValidation rep;
    GroupSpec fg = d.product_group();
    if (!(datum.t.ambient == fg)) {
        rep.violations.push_back({"T/ambient", "T is not a subgroup of F x G"});
        return rep;
    }
    // T must be central: chi^V_i(t) = 1 for every i
    for (const auto& tt : datum.t.elements)
        for (size_t i = 0; i < d.rank(); ++i)
            if (d.v_character(i).exponent_of(tt) != 0) {
                rep.violations.push_back({"T/central",
                                          "T contains a non-central grouplike"});
                goto done_central;
            }
done_central:
    if (datum.z_columns.size() != datum.zeta_columns.size()) {
        rep.violations.push_back({"Z/shape", "Z and zeta have different column counts"});
        return rep;
    }
    {
        QuotientPresentation qp = quotient(fg, datum.t);
        auto in_t = index_in_t(d, datum.t);
        RowSpace zspan(d.rank(), d.root_order()), zetaspan(d.rank(), d.root_order());
        for (size_t k = 0; k < datum.z_columns.size(); ++k) {
            const auto& zc = datum.z_columns[k];
            const auto& wc = datum.zeta_columns[k];
            if (zc.size() != d.rank() || wc.size() != d.rank()) {
                rep.violations.push_back({"Z/shape", "column " + std::to_string(k) +
                                                         " has wrong length"});
                continue;
            }
            auto zs = detail_ideals::support(zc);
            auto ws = detail_ideals::support(wc);
            if (zs.empty() || ws.empty()) {
                rep.violations.push_back({"Z/zero", "column " + std::to_string(k) +
                                                        " is zero on one side"});
                continue;
            }
            for (size_t i : zs)
                if (!in_t[i])
                    rep.violations.push_back(
                        {"Z/I_T", "v-index " + std::to_string(i) + " in column " +
                                      std::to_string(k) + " has f_i g_i outside T"});
            for (size_t j : ws)
                if (!in_t[j])
                    rep.violations.push_back(
                        {"zeta/I_T", "w-index " + std::to_string(j) + " in column " +
                                         std::to_string(k) + " has f_j g_j outside T"});
            // isotype homogeneity and matching over Gamma
            Character zchi = project_character(d.v_character(zs[0]), qp);
            Exponents zco = qp.project(d.v_coaction(zs[0]));
            for (size_t i : zs) {
                if (!detail_ideals::same_character(project_character(d.v_character(i), qp),
                                                   zchi) ||
                    qp.project(d.v_coaction(i)) != zco)
                    rep.violations.push_back({"Z/isotype",
                                              "column " + std::to_string(k) +
                                                  " mixes v-isotypes over Gamma"});
            }
            for (size_t j : ws) {
                if (!detail_ideals::same_character(project_character(d.w_character(j), qp),
                                                   zchi) ||
                    qp.project(d.w_coaction(j)) != zco)
                    rep.violations.push_back({"zeta/isotype",
                                              "column " + std::to_string(k) +
                                                  " does not match the source isotype"});
            }
            if (!zspan.insert(zc))
                rep.violations.push_back({"Z/independent",
                                          "Z columns are linearly dependent"});
            if (!zetaspan.insert(wc))
                rep.violations.push_back({"zeta/injective", "zeta is not injective"});
        }
    }
    // eq 5.6 warning: the classification hypothesis fails when some
    // chi^V_i is trivial; the construction itself stays valid.
    for (size_t i = 0; i < d.rank(); ++i) {
        bool trivial = true;
        GroupSpec fg2 = d.product_group();
        for (size_t a = 0; a < fg2.rank() && trivial; ++a)
            if (d.v_character(i).exponent_of(fg2.generator(a)) != 0) trivial = false;
        if (trivial)
            rep.warnings.push_back("eq 5.6 fails at index " + std::to_string(i) +
                                   ": thin ideals need not all be of the form a(T, Z, zeta)");
    }
    return rep;
}

// ---------------------------------------------------------------------------
// quotient A(T, Z, zeta)
// ---------------------------------------------------------------------------

// weighted combination of engine letters; is_w tells which side
struct LetterCombo {
    struct Term {
        bool is_w;
        int letter;
        Cyc coeff;
    };
    std::vector<Term> terms;
};

struct ThinQuotient {
    DoubleEngine engine;
    QuotientPresentation pres;
    std::vector<LetterCombo> v_image;  // per original index i
    std::vector<LetterCombo> w_image;  // per original index j
    std::vector<size_t> x_letters;     // original indices kept as v-letters
    size_t z_rank = 0;

    Element image_of_letter(const LetterCombo& combo) {
        Element out;
        for (const auto& t : combo.terms) {
            Element g = t.is_w ? engine.w_gen(t.letter) : engine.v_gen(t.letter);
            out = DoubleEngine::add(out, engine.scale(g, t.coeff));
        }
        return out;
    }

    // the Hopf algebra projection D -> A on normal-form elements
    Element project_element(const DoubleEngine& src, const Element& a) {
        Element out;
        for (const auto& [k, c] : a) {
            Element acc = engine.one();
            for (int i : src.vword(k.v)) acc = engine.multiply(acc, image_of_letter(v_image[i]));
            acc = engine.multiply(acc, engine.grouplike(pres.project(src.gamma().decode(k.g))));
            for (int j : src.wword(k.w)) acc = engine.multiply(acc, image_of_letter(w_image[j]));
            out = DoubleEngine::add(out, engine.scale(acc, c));
        }
        return out;
    }
};

inline ThinQuotient quotient_build(const DoubleDatum& d, const ThinIdealDatum& datum,
                                   std::optional<int> max_degree = std::nullopt) {
    IdealValidation val = validate_thin(d, datum);
    if (!val.ok()) throw InvalidInput("quotient_build: invalid datum: " +
                                      val.violations.front().code);
    GroupSpec fg = d.product_group();
    QuotientPresentation qp = quotient(fg, datum.t);
    auto in_t = index_in_t(d, datum.t);
    size_t n = d.rank();
    std::int64_t order = d.root_order();

    // X: lexicographic coordinate complement of span(Z) in V_T
    RowSpace zspan(n, order);
    for (const auto& col : datum.z_columns) zspan.insert(col);
    std::vector<size_t> x_letters;
    for (size_t i = 0; i < n; ++i) {
        if (!in_t[i]) continue;
        std::vector<Cyc> unit(n, Cyc::zero(order));
        unit[i] = Cyc::one(order);
        if (zspan.insert(unit)) x_letters.push_back(i);
    }
    // Y: lexicographic coordinate complement of span(zeta(Z)) in W_T
    RowSpace wspan(n, order);
    for (const auto& col : datum.zeta_columns) wspan.insert(col);
    std::vector<size_t> y_letters;
    for (size_t j = 0; j < n; ++j) {
        if (!in_t[j]) continue;
        std::vector<Cyc> unit(n, Cyc::zero(order));
        unit[j] = Cyc::one(order);
        if (wspan.insert(unit)) y_letters.push_back(j);
    }

    EngineSpec spec;
    spec.gamma = qp.gamma;
    spec.root_order = order;
    spec.max_degree = max_degree.value_or(d.max_degree);

    // v-letters: unit v_i for i outside I_T or in X, ascending
    std::vector<size_t> vunit;
    std::map<size_t, int> vletter_of;
    for (size_t i = 0; i < n; ++i)
        if (!in_t[i] || std::find(x_letters.begin(), x_letters.end(), i) != x_letters.end()) {
            vletter_of[i] = static_cast<int>(vunit.size());
            vunit.push_back(i);
            spec.vletters.push_back({project_character(d.v_character(i), qp),
                                     qp.project(d.v_coaction(i))});
        }
    // w-letters: zeta columns first, then unit w_j for j in Y or outside I_T
    std::vector<std::vector<Cyc>> wvectors;
    for (const auto& col : datum.zeta_columns) {
        size_t j0 = detail_ideals::support(col)[0];
        spec.wletters.push_back({project_character(d.w_character(j0), qp),
                                 qp.project(d.w_coaction(j0))});
        wvectors.push_back(col);
    }
    std::map<size_t, int> wletter_of;
    for (size_t j = 0; j < n; ++j) {
        bool keep = !in_t[j] ||
                    std::find(y_letters.begin(), y_letters.end(), j) != y_letters.end();
        if (!keep) continue;
        wletter_of[j] = static_cast<int>(spec.wletters.size());
        spec.wletters.push_back({project_character(d.w_character(j), qp),
                                 qp.project(d.w_coaction(j))});
        std::vector<Cyc> unit(n, Cyc::zero(order));
        unit[j] = Cyc::one(order);
        wvectors.push_back(std::move(unit));
    }
    // delta pairs survive only outside I_T
    for (size_t i = 0; i < n; ++i)
        if (!in_t[i])
            spec.delta[{vletter_of.at(i), wletter_of.at(i)}] = qp.project(d.fg_element(i));

    ThinQuotient out{DoubleEngine(std::move(spec)), std::move(qp), {}, {}, x_letters,
                     datum.z_columns.size()};

    // w_j = sum of letter combinations: invert the w-letter coordinate matrix
    size_t nw = wvectors.size();
    if (nw != n) throw InternalInconsistency("quotient_build: W letter count mismatch");
    CycMatrix wm(n, nw, order);
    for (size_t col = 0; col < nw; ++col)
        for (size_t i = 0; i < n; ++i) wm.at(i, col) = wvectors[col][i];
    auto winv = wm.inverse();
    if (!winv) throw InternalInconsistency("quotient_build: W letters do not span W");
    out.w_image.resize(n);
    for (size_t j = 0; j < n; ++j)
        for (size_t col = 0; col < nw; ++col) {
            Cyc c = winv->at(col, j);
            if (!c.is_zero())
                out.w_image[j].terms.push_back({true, static_cast<int>(col), c});
        }

    // v_i = combination of v-letters and z-columns; z-column k maps to the
    // zeta letter k
    size_t nv = vunit.size() + datum.z_columns.size();
    if (nv != n) throw InternalInconsistency("quotient_build: V letter count mismatch");
    CycMatrix vm(n, nv, order);
    for (size_t col = 0; col < vunit.size(); ++col) vm.at(vunit[col], col) = Cyc::one(order);
    for (size_t k = 0; k < datum.z_columns.size(); ++k)
        for (size_t i = 0; i < n; ++i)
            vm.at(i, vunit.size() + k) = datum.z_columns[k][i];
    auto vinv = vm.inverse();
    if (!vinv) throw InternalInconsistency("quotient_build: V decomposition singular");
    out.v_image.resize(n);
    for (size_t i = 0; i < n; ++i)
        for (size_t col = 0; col < nv; ++col) {
            Cyc c = vinv->at(col, i);
            if (c.is_zero()) continue;
            if (col < vunit.size())
                out.v_image[i].terms.push_back({false, static_cast<int>(col), c});
            else
                out.v_image[i].terms.push_back({true, static_cast<int>(col - vunit.size()), c});
        }
    return out;
}

// ---------------------------------------------------------------------------
// enumeration of thin ideal data
// ---------------------------------------------------------------------------

enum class ThinFamily { skinny_only, coordinate_family };

inline std::vector<ThinIdealDatum> enumerate_thin(
    const DoubleDatum& d, ThinFamily family,
    const std::vector<Cyc>& scalar_set = {}) {
    std::vector<Cyc> scalars = scalar_set;
    if (scalars.empty())
        scalars = {Cyc::one(d.root_order()), -Cyc::one(d.root_order())};
    CentralData cd = central_grouplikes(d);
    std::vector<ThinIdealDatum> out;
    GroupSpec fg = d.product_group();
    QuotientPresentation qpfull;  // recomputed per T
    for (const Subgroup& t : all_subgroups(cd.c)) {
        out.push_back({t, {}, {}});
        if (family == ThinFamily::skinny_only) continue;
        auto in_t = index_in_t(d, t);
        std::vector<size_t> it_indices;
        for (size_t i = 0; i < d.rank(); ++i)
            if (in_t[i]) it_indices.push_back(i);
        if (it_indices.empty()) continue;
        QuotientPresentation qp = quotient(fg, t);
        // type compatibility table over Gamma
        auto compatible = [&](size_t i, size_t j) {
            return detail_ideals::same_character(project_character(d.v_character(i), qp),
                                                 project_character(d.w_character(j), qp)) &&
                   qp.project(d.v_coaction(i)) == qp.project(d.w_coaction(j));
        };
        size_t m = it_indices.size();
        for (size_t mask = 1; mask < (size_t{1} << m); ++mask) {
            std::vector<size_t> zsup;
            for (size_t a = 0; a < m; ++a)
                if (mask & (size_t{1} << a)) zsup.push_back(it_indices[a]);
            // injections sigma: zsup -> I_T with matching types, then scalars
            std::vector<size_t> sigma(zsup.size());
            std::vector<bool> used(d.rank(), false);
            std::function<void(size_t)> rec = [&](size_t pos) {
                if (pos == zsup.size()) {
                    // all scalar tuples
                    std::vector<size_t> pick(zsup.size(), 0);
                    while (true) {
                        ThinIdealDatum datum{t, {}, {}};
                        for (size_t a = 0; a < zsup.size(); ++a) {
                            std::vector<Cyc> zc(d.rank(), Cyc::zero(d.root_order()));
                            std::vector<Cyc> wc(d.rank(), Cyc::zero(d.root_order()));
                            zc[zsup[a]] = Cyc::one(d.root_order());
                            wc[sigma[a]] = scalars[pick[a]];
                            datum.z_columns.push_back(std::move(zc));
                            datum.zeta_columns.push_back(std::move(wc));
                        }
                        out.push_back(std::move(datum));
                        size_t a = zsup.size();
                        bool done = true;
                        while (a-- > 0) {
                            if (++pick[a] < scalars.size()) {
                                done = false;
                                break;
                            }
                            pick[a] = 0;
                            if (a == 0) break;
                        }
                        if (done) break;
                    }
                    return;
                }
                for (size_t j : it_indices) {
                    if (used[j] || !compatible(zsup[pos], j)) continue;
                    used[j] = true;
                    sigma[pos] = j;
                    rec(pos + 1);
                    used[j] = false;
                }
            };
            rec(0);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Thm 6.1 dichotomy certificate
// ---------------------------------------------------------------------------

struct DichotomyReport {
    AdjacencyReport adjacency;
    bool applicable = false;     // hypothesis (i) or (ii) holds
    size_t skinny_count = 0;
    size_t non_skinny_count = 0;
    bool certified = false;      // every enumerated thin ideal is skinny
};

inline DichotomyReport dichotomy_report(const DoubleDatum& d) {
    DichotomyReport rep;
    rep.adjacency = adjacency_and_connectivity(d);
    rep.applicable = rep.adjacency.hypothesis_holds();
    auto family = enumerate_thin(d, ThinFamily::coordinate_family);
    for (const auto& datum : family) {
        if (datum.z_columns.empty())
            ++rep.skinny_count;
        else
            ++rep.non_skinny_count;
    }
    rep.certified = rep.applicable && rep.non_skinny_count == 0;
    return rep;
}

// ---------------------------------------------------------------------------
// Remark 5.5 fixture: a thin ideal outside the a(T, Z, zeta) family when
// eq 5.6 fails. F = G = Z/2, tau0 trivial, one index pair (g, g); the ideal
// a = (v_1 - (f_1 - 1), f_1 g_1 - 1).
// ---------------------------------------------------------------------------

struct Remark55Report {
    DoubleDatum datum;
    bool cond_511 = false;       // tau0(f_i, g_j) = 1 = tau0(f_j, g_i)
    bool cond_512 = false;       // f_i not in T = <f_i g_i>
    bool projection_multiplicative = false;
    bool thin = false;           // V and W meet the ideal trivially
    bool v_image_in_group_algebra = false;
    size_t family_size = 0;
    bool reproduced_by_family = false;  // stays false: the scan must fail
};

inline Remark55Report remark55_fixture(int max_degree = 4) {
    Remark55Report rep;
    DoubleDatum d;
    d.f_group = d.g_group = GroupSpec{{2}};
    d.tau0.left = d.tau0.right = d.f_group;
    d.tau0.root_order = 2;
    d.tau0.exponents = {{0}};
    d.index.push_back({{1}, {1}});
    d.max_degree = max_degree;
    d.validate();
    rep.datum = d;
    rep.cond_511 = d.tau0.exponent_of(d.index[0].f, d.index[0].g) == 0;

    GroupSpec fg = d.product_group();
    Subgroup t = closure(fg, {d.fg_element(0)});
    rep.cond_512 = !t.contains({1, 0});

    // quotient A = D / (v_1 - (f_1 - 1), f_1 g_1 - 1): an engine over
    // Gamma = (F x G)/T with the single letter w and no deltas
    QuotientPresentation qp = quotient(fg, t);
    EngineSpec spec;
    spec.gamma = qp.gamma;
    spec.root_order = 2;
    spec.max_degree = max_degree;
    spec.wletters.push_back({project_character(d.w_character(0), qp),
                             qp.project(d.w_coaction(0))});
    DoubleEngine a(std::move(spec));

    DoubleEngine dd = build_engine(d);
    // pi on basis triples: v^k (f^b, g^c) w^m -> (fbar - 1)^k gammabar^{b+c} wbar^m
    Element fbar_minus_1 = DoubleEngine::sub(a.grouplike(qp.project({1, 0})), a.one());
    auto pi = [&](const Element& e) {
        Element out;
        for (const auto& [k, c] : e) {
            Element acc = a.one();
            for (size_t t2 = 0; t2 < dd.vword(k.v).size(); ++t2)
                acc = a.multiply(acc, fbar_minus_1);
            acc = a.multiply(acc, a.grouplike(qp.project(dd.gamma().decode(k.g))));
            for (size_t t2 = 0; t2 < dd.wword(k.w).size(); ++t2)
                acc = a.multiply(acc, a.w_gen(0));
            out = DoubleEngine::add(out, a.scale(acc, c));
        }
        return out;
    };

    // pi is multiplicative on the straightening relations
    rep.projection_multiplicative = true;
    {
        Element lhs = pi(dd.multiply(dd.w_gen(0), dd.v_gen(0)));
        Element rhs = a.multiply(pi(dd.w_gen(0)), pi(dd.v_gen(0)));
        if (lhs != rhs) rep.projection_multiplicative = false;
        lhs = pi(dd.multiply(dd.grouplike({0, 1}), dd.v_gen(0)));
        rhs = a.multiply(pi(dd.grouplike({0, 1})), pi(dd.v_gen(0)));
        if (lhs != rhs) rep.projection_multiplicative = false;
    }

    // thinness: V and W embed, i.e. pi(v_1) != 0 != pi(w_1)
    Element piv = pi(dd.v_gen(0));
    Element piw = pi(dd.w_gen(0));
    rep.thin = !piv.empty() && !piw.empty();

    // the obstruction: pi(v_1) lies in the group algebra of Gamma
    rep.v_image_in_group_algebra = !piv.empty();
    for (const auto& [k, c] : piv)
        if (a.word_degree(k) != 0) rep.v_image_in_group_algebra = false;

    // the coordinate-family scan cannot reproduce the ideal: some generator
    // of a survives in every candidate quotient
    auto family = enumerate_thin(d, ThinFamily::coordinate_family);
    rep.family_size = family.size();
    for (const auto& cand : family) {
        ThinQuotient q = quotient_build(d, cand, max_degree);
        Element gen1 = q.project_element(dd, DoubleEngine::sub(
            dd.v_gen(0), DoubleEngine::sub(dd.grouplike({1, 0}), dd.one())));
        Element gen2 = q.project_element(dd, DoubleEngine::sub(
            dd.grouplike(d.fg_element(0)), dd.one()));
        if (gen1.empty() && gen2.empty()) rep.reproduced_by_family = true;
    }
    return rep;
}

} // namespace nforge
