#pragma once

#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "nforge/nichols.hpp"

namespace nforge {

// One-dimensional Yetter-Drinfeld letter over the grouplike group Gamma.
struct EngineLetter {
    Character chi;
    Exponents coact;
};

// Presentation data of a normal-form algebra with basis
// {v-basis word} x Gamma x {w-basis word} and relations
//     gamma . letter = chi_letter(gamma) letter . gamma
//     w_j . v_i = chi_{v_i}(coact w_j) v_i w_j + [delta] (c_ij - 1).
// Both the double D and the quotients A(T, Z, zeta) are engines of this form.
struct EngineSpec {
    GroupSpec gamma;
    std::vector<EngineLetter> vletters, wletters;
    std::map<std::pair<int, int>, Exponents> delta;  // (i, j) -> c_ij in Gamma
    int max_degree = 8;
    std::int64_t root_order = 1;
    std::optional<DoubleDatum> source;  // present when the engine is D itself
    std::vector<std::string> warnings;
};

struct BasisKey {
    int v = 0;
    std::int64_t g = 0;
    int w = 0;
    auto operator<=>(const BasisKey&) const = default;
};

using Element = std::map<BasisKey, Cyc>;
using TensorElement = std::map<std::pair<BasisKey, BasisKey>, Cyc>;
using TripleElement = std::map<std::tuple<BasisKey, BasisKey, BasisKey>, Cyc>;

class DoubleEngine {
public:
    explicit DoubleEngine(EngineSpec spec) : spec_(std::move(spec)) {
        size_t nv = spec_.vletters.size(), nw = spec_.wletters.size();
        BraidingMatrix qv, qw;
        qv.root_order = qw.root_order = spec_.root_order;
        qv.exponents.assign(nv, Exponents(nv, 0));
        for (size_t i = 0; i < nv; ++i)
            for (size_t j = 0; j < nv; ++j)
                qv.exponents[i][j] = spec_.vletters[j].chi.exponent_of(spec_.vletters[i].coact);
        qw.exponents.assign(nw, Exponents(nw, 0));
        for (size_t i = 0; i < nw; ++i)
            for (size_t j = 0; j < nw; ++j)
                qw.exponents[i][j] = spec_.wletters[j].chi.exponent_of(spec_.wletters[i].coact);
        vn_ = DiagonalNichols(qv, spec_.max_degree);
        wn_ = DiagonalNichols(qw, spec_.max_degree);
        index_words(vn_, vwords_, vindex_);
        index_words(wn_, wwords_, windex_);
        truncated_ = !(vn_.finite_within(spec_.max_degree) &&
                       wn_.finite_within(spec_.max_degree));
        gamma_order_ = spec_.gamma.order();
        std::int64_t dim = static_cast<std::int64_t>(vwords_.size()) * gamma_order_ *
                           static_cast<std::int64_t>(wwords_.size());
        if (dim > config().max_engine_dim)
            throw BoundExceeded("engine dimension " + std::to_string(dim) + " exceeds bound " +
                                std::to_string(config().max_engine_dim));
    }

    const EngineSpec& spec() const { return spec_; }
    const GroupSpec& gamma() const { return spec_.gamma; }
    std::int64_t root_order() const { return spec_.root_order; }
    DiagonalNichols& v_nichols() { return vn_; }
    DiagonalNichols& w_nichols() { return wn_; }

    bool truncated() const { return truncated_; }

    std::int64_t dimension() const {
        return static_cast<std::int64_t>(vwords_.size()) * gamma_order_ *
               static_cast<std::int64_t>(wwords_.size());
    }

    std::vector<BasisKey> basis() const {
        std::vector<BasisKey> keys;
        keys.reserve(dimension());
        for (int v = 0; v < static_cast<int>(vwords_.size()); ++v)
            for (std::int64_t g = 0; g < gamma_order_; ++g)
                for (int w = 0; w < static_cast<int>(wwords_.size()); ++w)
                    keys.push_back({v, g, w});
        return keys;
    }

    int word_degree(const BasisKey& k) const {
        return static_cast<int>(vwords_[k.v].size() + wwords_[k.w].size());
    }

    // dimensions of the coradical grading components
    std::vector<std::int64_t> grading_dims() const {
        std::vector<std::int64_t> dims;
        for (const auto& k : basis()) {
            int d = word_degree(k);
            if (static_cast<int>(dims.size()) <= d) dims.resize(d + 1, 0);
            ++dims[d];
        }
        return dims;
    }

    const Word& vword(int idx) const { return vwords_[idx]; }
    const Word& wword(int idx) const { return wwords_[idx]; }

    // --- element constructors -------------------------------------------

    Element zero() const { return {}; }
    Element one() const { return {{BasisKey{0, spec_.gamma.encode(spec_.gamma.identity()), 0},
                                   Cyc::one(spec_.root_order)}}; }
    Element grouplike(const Exponents& g) const {
        return {{BasisKey{0, spec_.gamma.encode(spec_.gamma.reduce(g)), 0},
                 Cyc::one(spec_.root_order)}};
    }
    Element v_gen(int i) const { return element({i}, spec_.gamma.identity(), {}); }
    Element w_gen(int j) const { return element({}, spec_.gamma.identity(), {j}); }

    // assemble v-word . gamma . w-word, reducing both words to the bases
    Element element(const Word& x, const Exponents& g, const Word& y) {
        Element out;
        std::int64_t gi = spec_.gamma.encode(spec_.gamma.reduce(g));
        for (auto& [bx, cx] : vn_.express(x))
            for (auto& [by, cy] : wn_.express(y)) {
                Cyc c = cx * cy;
                if (c.is_zero()) continue;
                add_to(out, {vindex_.at(bx), gi, windex_.at(by)}, c);
            }
        return out;
    }
    Element element(const Word& x, const Exponents& g, const Word& y) const {
        return const_cast<DoubleEngine*>(this)->element(x, g, y);
    }

    // --- algebra ----------------------------------------------------------

    Element multiply(const Element& a, const Element& b) {
        Element out;
        for (const auto& [ka, ca] : a)
            for (const auto& [kb, cb] : b) {
                const Element& prod = basis_product(ka, kb);
                Cyc c = ca * cb;
                for (const auto& [k, pc] : prod) add_to(out, k, c * pc);
            }
        return out;
    }

    Element scale(const Element& a, const Cyc& s) const {
        Element out;
        for (const auto& [k, c] : a) {
            Cyc v = c * s;
            if (!v.is_zero()) out.emplace(k, v);
        }
        return out;
    }

    static Element add(const Element& a, const Element& b) {
        Element out = a;
        for (const auto& [k, c] : b) {
            auto [it, fresh] = out.try_emplace(k, c);
            if (!fresh) {
                it->second += c;
                if (it->second.is_zero()) out.erase(it);
            }
        }
        return out;
    }

    static Element sub(const Element& a, const Element& b) {
        Element nb;
        for (const auto& [k, c] : b) nb.emplace(k, -c);
        return add(a, nb);
    }

    // --- coalgebra ----------------------------------------------------------

    Cyc counit(const Element& a) const {
        Cyc e = Cyc::zero(spec_.root_order);
        for (const auto& [k, c] : a)
            if (word_degree(k) == 0) e += c;
        return e;
    }

    const TensorElement& coproduct_basis(const BasisKey& k) {
        auto it = coproduct_memo_.find(k);
        if (it != coproduct_memo_.end()) return it->second;
        TensorElement out = compute_coproduct(k);
        return coproduct_memo_.emplace(k, std::move(out)).first->second;
    }

    TensorElement coproduct(const Element& a) {
        TensorElement out;
        for (const auto& [k, c] : a)
            for (const auto& [kk, cc] : coproduct_basis(k)) tensor_add(out, kk, c * cc);
        return out;
    }

    // --- tensor-square and tensor-cube helpers ------------------------------

    static void tensor_add(TensorElement& t, const std::pair<BasisKey, BasisKey>& k,
                           const Cyc& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = t.try_emplace(k, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) t.erase(it);
        }
    }

    TensorElement tensor_of(const Element& a, const Element& b) const {
        TensorElement t;
        for (const auto& [ka, ca] : a)
            for (const auto& [kb, cb] : b) {
                Cyc c = ca * cb;
                if (!c.is_zero()) t.emplace(std::make_pair(ka, kb), c);
            }
        return t;
    }

    TensorElement tensor_multiply(const TensorElement& a, const TensorElement& b) {
        TensorElement out;
        for (const auto& [ka, ca] : a)
            for (const auto& [kb, cb] : b) {
                const Element& p1 = basis_product(ka.first, kb.first);
                const Element& p2 = basis_product(ka.second, kb.second);
                Cyc c = ca * cb;
                for (const auto& [k1, c1] : p1)
                    for (const auto& [k2, c2] : p2)
                        tensor_add(out, {k1, k2}, c * c1 * c2);
            }
        return out;
    }

    static TensorElement tensor_flip(const TensorElement& a) {
        TensorElement out;
        for (const auto& [k, c] : a) out.emplace(std::make_pair(k.second, k.first), c);
        return out;
    }

    TensorElement tensor_one() const {
        BasisKey e{0, spec_.gamma.encode(spec_.gamma.identity()), 0};
        return {{std::make_pair(e, e), Cyc::one(spec_.root_order)}};
    }

    static void triple_add(TripleElement& t, const std::tuple<BasisKey, BasisKey, BasisKey>& k,
                           const Cyc& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = t.try_emplace(k, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) t.erase(it);
        }
    }

    TripleElement triple_multiply(const TripleElement& a, const TripleElement& b) {
        TripleElement out;
        for (const auto& [ka, ca] : a)
            for (const auto& [kb, cb] : b) {
                const Element& p1 = basis_product(std::get<0>(ka), std::get<0>(kb));
                const Element& p2 = basis_product(std::get<1>(ka), std::get<1>(kb));
                const Element& p3 = basis_product(std::get<2>(ka), std::get<2>(kb));
                Cyc c = ca * cb;
                for (const auto& [k1, c1] : p1) {
                    Cyc c21 = c * c1;
                    for (const auto& [k2, c2] : p2) {
                        Cyc c22 = c21 * c2;
                        for (const auto& [k3, c3] : p3)
                            triple_add(out, {k1, k2, k3}, c22 * c3);
                    }
                }
            }
        return out;
    }

    // --- scalars -------------------------------------------------------------

    Cyc chi_v(int i, const Exponents& g) const {
        return Cyc::zeta_pow(spec_.root_order, spec_.vletters[i].chi.exponent_of(g));
    }
    Cyc chi_w(int j, const Exponents& g) const {
        return Cyc::zeta_pow(spec_.root_order, spec_.wletters[j].chi.exponent_of(g));
    }

private:
    static void index_words(DiagonalNichols& n, std::vector<Word>& words,
                            std::map<Word, int>& index) {
        for (int d = 0; d <= n.max_degree(); ++d) {
            const auto& piv = n.pivot_words(d);
            if (d > 0 && piv.empty()) break;
            for (const Word& w : piv) {
                index.emplace(w, static_cast<int>(words.size()));
                words.push_back(w);
            }
        }
    }

    static void add_to(Element& e, const BasisKey& k, const Cyc& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = e.try_emplace(k, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) e.erase(it);
        }
    }

    // ---- straightening -------------------------------------------------

    struct StraightTerm {
        Cyc scalar;
        Word x;          // v-word
        Exponents grp;   // middle group element
        Word y;          // w-word
    };

    // y . v_i = sum of scalar . (v_i?) . grp . yrem
    struct PullTerm {
        Cyc scalar;
        bool has_v;
        Exponents grp;
        Word yrem;
    };

    const std::vector<PullTerm>& pull_through(const Word& y, int i) {
        auto key = std::make_pair(y, i);
        auto it = pull_memo_.find(key);
        if (it != pull_memo_.end()) return it->second;
        std::vector<PullTerm> out;
        if (y.empty()) {
            out.push_back({Cyc::one(spec_.root_order), true, spec_.gamma.identity(), {}});
        } else {
            int j = y.back();
            Word ypre(y.begin(), y.end() - 1);
            Cyc q = chi_v(i, spec_.wletters[j].coact);
            for (const PullTerm& t : pull_through(ypre, i)) {
                // q-branch: append w_j
                PullTerm qt = t;
                qt.scalar = t.scalar * q;
                qt.yrem.push_back(j);
                out.push_back(std::move(qt));
            }
            auto dj = spec_.delta.find({i, j});
            if (dj != spec_.delta.end()) {
                const Exponents& c = dj->second;
                if (!spec_.gamma.is_identity(c)) {
                    // y' . (c - 1): move c to the left of y'
                    std::int64_t e = 0;
                    for (int l : ypre) e -= spec_.wletters[l].chi.exponent_of(c);
                    out.push_back({Cyc::zeta_pow(spec_.root_order, e), false, c, ypre});
                    out.push_back({-Cyc::one(spec_.root_order), false, spec_.gamma.identity(),
                                   ypre});
                }
                // when c = 1 the two delta terms cancel
            }
        }
        return pull_memo_.emplace(std::move(key), std::move(out)).first->second;
    }

    const std::vector<StraightTerm>& straighten(const Word& y, const Word& x) {
        auto key = std::make_pair(y, x);
        auto it = straighten_memo_.find(key);
        if (it != straighten_memo_.end()) return it->second;
        std::vector<StraightTerm> out;
        if (x.empty() || y.empty()) {
            out.push_back({Cyc::one(spec_.root_order), x, spec_.gamma.identity(), y});
        } else {
            int i = x.front();
            Word xrest(x.begin() + 1, x.end());
            for (const PullTerm& p : pull_through(y, i)) {
                for (const StraightTerm& s : straighten(p.yrem, xrest)) {
                    // (v_i?) . grp . (s.x) . s.grp . s.y : move grp past s.x
                    std::int64_t e = 0;
                    for (int l : s.x) e += spec_.vletters[l].chi.exponent_of(p.grp);
                    StraightTerm t;
                    t.scalar = p.scalar * s.scalar * Cyc::zeta_pow(spec_.root_order, e);
                    if (p.has_v) {
                        t.x.push_back(i);
                        t.x.insert(t.x.end(), s.x.begin(), s.x.end());
                    } else {
                        t.x = s.x;
                    }
                    t.grp = spec_.gamma.add(p.grp, s.grp);
                    t.y = s.y;
                    out.push_back(std::move(t));
                }
            }
        }
        return straighten_memo_.emplace(std::move(key), std::move(out)).first->second;
    }

    const Element& basis_product(const BasisKey& ka, const BasisKey& kb) {
        auto key = std::make_pair(ka, kb);
        auto it = product_memo_.find(key);
        if (it != product_memo_.end()) return it->second;

        const Word& x1 = vwords_[ka.v];
        const Word& y1 = wwords_[ka.w];
        const Word& x2 = vwords_[kb.v];
        const Word& y2 = wwords_[kb.w];
        Exponents g1 = spec_.gamma.decode(ka.g), g2 = spec_.gamma.decode(kb.g);

        Element out;
        for (const StraightTerm& t : straighten(y1, x2)) {
            // x1 . g1 . (t.x) . t.grp . (t.y) . g2 . y2
            std::int64_t e = 0;
            for (int l : t.x) e += spec_.vletters[l].chi.exponent_of(g1);
            for (int l : t.y) e -= spec_.wletters[l].chi.exponent_of(g2);
            Cyc s = t.scalar * Cyc::zeta_pow(spec_.root_order, e);
            Word xv = x1;
            xv.insert(xv.end(), t.x.begin(), t.x.end());
            Word yw = t.y;
            yw.insert(yw.end(), y2.begin(), y2.end());
            Exponents g = spec_.gamma.add(spec_.gamma.add(g1, t.grp), g2);
            for (auto& [bx, cx] : vn_.express(xv))
                for (auto& [by, cy] : wn_.express(yw))
                    add_to(out, {vindex_.at(bx), spec_.gamma.encode(g), windex_.at(by)},
                           s * cx * cy);
        }
        return product_memo_.emplace(key, std::move(out)).first->second;
    }

    // ---- coproduct -------------------------------------------------------

    TensorElement compute_coproduct(const BasisKey& k) {
        const Word& x = vwords_[k.v];
        const Word& y = wwords_[k.w];
        Exponents g = spec_.gamma.decode(k.g);
        size_t m = x.size() + y.size();

        // combined letters with their characters and coactions
        auto letter_chi_exp = [&](size_t pos, const Exponents& on) -> std::int64_t {
            return pos < x.size() ? spec_.vletters[x[pos]].chi.exponent_of(on)
                                  : spec_.wletters[y[pos - x.size()]].chi.exponent_of(on);
        };
        auto letter_coact = [&](size_t pos) -> const Exponents& {
            return pos < x.size() ? spec_.vletters[x[pos]].coact
                                  : spec_.wletters[y[pos - x.size()]].coact;
        };

        TensorElement out;
        for (size_t mask = 0; mask < (size_t{1} << m); ++mask) {
            // positions in mask go to the left tensor factor; the coactions of
            // the right-going letters collect in the left factor's group slot.
            // Collecting them there crosses left-staying v-letters at later
            // positions (rightward move) and left-staying w-letters at earlier
            // positions (leftward move, inverse scalar); v- and w-zones never
            // cross because the group slot sits between them.
            std::int64_t e = 0;
            Word lx, ly, rx, ry;
            Exponents coact_right = spec_.gamma.identity();
            for (size_t p = 0; p < m; ++p) {
                if (mask & (size_t{1} << p)) {
                    if (p < x.size())
                        lx.push_back(x[p]);
                    else
                        ly.push_back(y[p - x.size()]);
                } else {
                    if (p < x.size()) {
                        rx.push_back(x[p]);
                        for (size_t j = p + 1; j < x.size(); ++j)
                            if (mask & (size_t{1} << j)) e += letter_chi_exp(j, letter_coact(p));
                    } else {
                        ry.push_back(y[p - x.size()]);
                        for (size_t j = x.size(); j < p; ++j)
                            if (mask & (size_t{1} << j)) e -= letter_chi_exp(j, letter_coact(p));
                    }
                    coact_right = spec_.gamma.add(coact_right, letter_coact(p));
                }
            }
            Cyc weight = Cyc::zeta_pow(spec_.root_order, e);
            Element left = element(lx, spec_.gamma.add(coact_right, g), ly);
            Element right = element(rx, g, ry);
            for (const auto& [kl, cl] : left)
                for (const auto& [kr, cr] : right)
                    tensor_add(out, {kl, kr}, weight * cl * cr);
        }
        return out;
    }

    EngineSpec spec_;
    DiagonalNichols vn_, wn_;
    std::vector<Word> vwords_, wwords_;
    std::map<Word, int> vindex_, windex_;
    std::int64_t gamma_order_ = 1;
    bool truncated_ = false;
    std::map<std::pair<Word, int>, std::vector<PullTerm>> pull_memo_;
    std::map<std::pair<Word, Word>, std::vector<StraightTerm>> straighten_memo_;
    std::map<std::pair<BasisKey, BasisKey>, Element> product_memo_;
    std::map<BasisKey, TensorElement> coproduct_memo_;
};

// ---------------------------------------------------------------------------
// engine builders
// ---------------------------------------------------------------------------

inline DoubleEngine build_engine(const DoubleDatum& d) {
    d.validate();
    EngineSpec spec;
    spec.gamma = d.product_group();
    spec.root_order = d.root_order();
    spec.max_degree = d.max_degree;
    spec.source = d;
    for (size_t i = 0; i < d.rank(); ++i) {
        spec.vletters.push_back({d.v_character(i), d.v_coaction(i)});
        spec.wletters.push_back({d.w_character(i), d.w_coaction(i)});
        spec.delta[{static_cast<int>(i), static_cast<int>(i)}] = d.fg_element(i);
        if (d.qv_exponent(i, i) == 0)
            spec.warnings.push_back("tau0(f_i, g_i) = 1 at index " + std::to_string(i) +
                                    ": B(k v_i) is infinite-dimensional in characteristic 0");
    }
    return DoubleEngine(std::move(spec));
}

// A(T, 0, 0): the quotient by the skinny ideal (t - 1 | t in T), presented as
// an engine over Gamma = (F x G)/T with the same letters. Requires T central.
struct SkinnyQuotient {
    DoubleEngine engine;
    QuotientPresentation pres;
};

inline Character project_character(const Character& chi, const QuotientPresentation& qp) {
    Character out;
    out.group = qp.gamma;
    out.root_order = chi.root_order;
    for (size_t k = 0; k < qp.gamma.rank(); ++k)
        out.zeta_exponents.push_back(chi.exponent_of(qp.section(qp.gamma.generator(k))));
    return out;
}

inline SkinnyQuotient build_engine_mod(const DoubleDatum& d, const Subgroup& t,
                                       std::optional<int> max_degree = std::nullopt) {
    d.validate();
    GroupSpec fg = d.product_group();
    if (!(t.ambient == fg)) throw InvalidInput("build_engine_mod: T not a subgroup of F x G");
    // T must consist of central grouplikes: chi^V_i(t) = 1 for all i
    for (const auto& tt : t.elements)
        for (size_t i = 0; i < d.rank(); ++i)
            if (d.v_character(i).exponent_of(tt) != 0)
                throw InvalidInput("build_engine_mod: T is not central");
    QuotientPresentation qp = quotient(fg, t);
    EngineSpec spec;
    spec.gamma = qp.gamma;
    spec.root_order = d.root_order();
    spec.max_degree = max_degree.value_or(d.max_degree);
    for (size_t i = 0; i < d.rank(); ++i) {
        spec.vletters.push_back({project_character(d.v_character(i), qp),
                                 qp.project(d.v_coaction(i))});
        spec.wletters.push_back({project_character(d.w_character(i), qp),
                                 qp.project(d.w_coaction(i))});
        spec.delta[{static_cast<int>(i), static_cast<int>(i)}] = qp.project(d.fg_element(i));
    }
    return {DoubleEngine(std::move(spec)), std::move(qp)};
}

// ---------------------------------------------------------------------------
// central grouplikes and the section-4 reports
// ---------------------------------------------------------------------------

struct CentralData {
    Subgroup c;  // all central grouplikes fg: tau0(f, g_i) tau0(f_i, g) = 1
    Subgroup p;  // <f_i g_i>
};

inline CentralData central_grouplikes(const DoubleDatum& d) {
    GroupSpec fg = d.product_group();
    std::int64_t n = fg.order();
    if (n > config().max_scan_order)
        throw BoundExceeded("central_grouplikes: group order exceeds scan bound");
    CentralData out;
    out.c.ambient = fg;
    for (std::int64_t idx = 0; idx < n; ++idx) {
        Exponents x = fg.decode(idx);
        bool central = true;
        for (size_t i = 0; i < d.rank() && central; ++i)
            if (d.v_character(i).exponent_of(x) != 0) central = false;
        if (central) out.c.elements.push_back(std::move(x));
    }
    std::sort(out.c.elements.begin(), out.c.elements.end());
    out.c.generators = out.c.elements;
    std::vector<Exponents> pgens;
    for (size_t i = 0; i < d.rank(); ++i) pgens.push_back(d.fg_element(i));
    out.p = closure(fg, pgens);
    // cross-check against Thm 4.2(1): C = P^perp under the induced pairing
    if (nondegenerate(d.tau0).nondegenerate) {
        Subgroup perp = orthogonal(induced_pairing(d.tau0), out.p);
        if (!(perp == out.c))
            throw InternalInconsistency("central grouplikes differ from orthogonal(P)");
    }
    return out;
}

struct Thm42Report {
    bool hyp_finite = false;       // eq 4.1
    bool hyp_nondegenerate = false;  // eq 4.2
    bool hyp_index_nontrivial = false;  // eq 4.3: f_i g_i != 1 for all i
    bool applicable = false;
    std::int64_t c_order = 0, p_order = 0, fg_order = 0;
    bool sizes_ok = false;      // |C| |P| = |F| |G|
    bool a_split = false;       // (a)  C -> F x G / P is a split mono
    bool a1_monic = false, a1_epic = false;   // (a')
    bool a2_monic = false, a2_epic = false;   // (a'')
    std::int64_t algebra_map_count = 0;       // n(D) = |F x G / P|
    bool n_matches_c = false;
};

inline Thm42Report thm42_report(const DoubleDatum& d) {
    Thm42Report rep;
    GroupSpec fg = d.product_group();
    rep.fg_order = fg.order();
    rep.hyp_finite = rep.fg_order <= config().max_group_order;
    if (!rep.hyp_finite) throw BoundExceeded("thm42_report: group order exceeds bound");
    rep.hyp_nondegenerate = nondegenerate(d.tau0).nondegenerate;
    rep.hyp_index_nontrivial = true;
    for (size_t i = 0; i < d.rank(); ++i)
        if (fg.is_identity(d.fg_element(i))) rep.hyp_index_nontrivial = false;
    rep.applicable = rep.hyp_finite && rep.hyp_nondegenerate;
    if (!rep.applicable) return rep;

    CentralData cd = central_grouplikes(d);
    rep.c_order = cd.c.order();
    rep.p_order = cd.p.order();
    rep.sizes_ok = rep.c_order * rep.p_order == rep.fg_order;

    QuotientPresentation qp = quotient(fg, cd.p);
    auto iota = [&](const Exponents& c) { return qp.project(c); };
    rep.a_split = split_mono_check(cd.c, qp.gamma, iota).split;

    // (a'): C -> (F x G)/P monic and epic
    std::set<Exponents> image;
    bool monic = true;
    for (const auto& c : cd.c.elements) {
        Exponents y = qp.project(c);
        if (!image.insert(y).second) monic = false;
    }
    rep.a1_monic = monic;
    rep.a1_epic = static_cast<std::int64_t>(image.size()) == qp.gamma.order();

    // (a''): product map C x P -> F x G
    std::set<Exponents> cp;
    for (const auto& c : cd.c.elements)
        for (const auto& p : cd.p.elements) cp.insert(fg.add(c, p));
    rep.a2_epic = static_cast<std::int64_t>(cp.size()) == rep.fg_order;
    rep.a2_monic =
        static_cast<std::int64_t>(cp.size()) == rep.c_order * rep.p_order;

    // algebra maps D -> k: characters of (F x G)/P. The relations force
    // phi(v_i) = 0 = phi(w_i) under (4.2), (4.3): some grouplike conjugates
    // v_i by a nontrivial scalar.
    if (rep.hyp_index_nontrivial)
        for (size_t i = 0; i < d.rank(); ++i) {
            bool killed = false;
            for (size_t a = 0; a < fg.rank() && !killed; ++a)
                if (d.v_character(i).exponent_of(fg.generator(a)) != 0) killed = true;
            if (!killed)
                throw InternalInconsistency(
                    "thm42: relations fail to kill a skew primitive under (4.2)+(4.3)");
        }
    rep.algebra_map_count = rep.fg_order / rep.p_order;
    rep.n_matches_c = rep.algebra_map_count == rep.c_order;
    return rep;
}

// ---------------------------------------------------------------------------
// Prop 4.1 pipeline: the Radford map a -> pi(a_1) (x) abar_2
// ---------------------------------------------------------------------------

struct RetractionWitness {
    QuotientPresentation mod_p;  // F x G -> (F x G)/P
    Hom rho;                     // (F x G)/P -> C (values in F x G)
    Exponents eval(const GroupSpec& fg, const Exponents& x) const {
        return rho.eval(mod_p.project(x));
    }
};

inline std::optional<RetractionWitness> find_retraction(const DoubleDatum& d) {
    CentralData cd = central_grouplikes(d);
    QuotientPresentation qp = quotient(d.product_group(), cd.p);
    auto iota = [&](const Exponents& c) { return qp.project(c); };
    auto rep = split_mono_check(cd.c, qp.gamma, iota);
    if (!rep.split) return std::nullopt;
    return RetractionWitness{std::move(qp), *rep.retraction};
}

struct Prop41Report {
    bool witness_valid = false;
    std::optional<size_t> violated_index;  // index whose delta relation breaks pi
    std::int64_t dim_d = 0, dim_target = 0;
    bool bijective = false;
};

inline Prop41Report prop41_pipeline(const DoubleDatum& d, const RetractionWitness& witness) {
    Prop41Report rep;
    GroupSpec fg = d.product_group();
    CentralData cd = central_grouplikes(d);

    // pi extends to an algebra map iff it kills every f_i g_i (the delta term
    // of relation 3.8); the other straightening relations are scalar-neutral.
    rep.witness_valid = true;
    for (size_t i = 0; i < d.rank(); ++i)
        if (!fg.is_identity(witness.eval(fg, d.fg_element(i)))) {
            rep.witness_valid = false;
            rep.violated_index = i;
            return rep;
        }
    // pi must restrict to the identity on C
    for (const auto& c : cd.c.elements)
        if (witness.eval(fg, c) != c) {
            rep.witness_valid = false;
            return rep;
        }

    DoubleEngine dd = build_engine(d);
    SkinnyQuotient dc = build_engine_mod(d, cd.c);
    rep.dim_d = dd.dimension();
    rep.dim_target = cd.c.order() * dc.engine.dimension();

    // index the target basis kC (x) D_c
    std::map<std::pair<Exponents, BasisKey>, size_t> target_index;
    for (const auto& c : cd.c.elements)
        for (const auto& k : dc.engine.basis())
            target_index.emplace(std::make_pair(c, k), target_index.size());

    auto dbasis = dd.basis();
    std::map<BasisKey, size_t> dindex;
    for (const auto& k : dbasis) dindex.emplace(k, dindex.size());

    CycMatrix m(target_index.size(), dbasis.size(), d.root_order());
    for (size_t col = 0; col < dbasis.size(); ++col) {
        const BasisKey& a = dbasis[col];
        for (const auto& [kk, c] : dd.coproduct_basis(a)) {
            // pi kills anything with letters
            if (dd.word_degree(kk.first) != 0) continue;
            Exponents g1 = fg.decode(kk.first.g);
            Exponents pi_g1 = witness.eval(fg, g1);
            // image of the second leg in D_c
            const Word& x = dd.vword(kk.second.v);
            const Word& y = dd.wword(kk.second.w);
            Exponents g2 = fg.decode(kk.second.g);
            Element img = dc.engine.element(x, dc.pres.project(g2), y);
            for (const auto& [kq, cq] : img) {
                size_t row = target_index.at(std::make_pair(pi_g1, kq));
                m.at(row, col) += c * cq;
            }
        }
    }
    rep.bijective = rep.dim_d == rep.dim_target &&
                    m.rank() == static_cast<size_t>(rep.dim_d);
    return rep;
}

// ---------------------------------------------------------------------------
// Cor 4.3: Frobenius-Lusztig kernels
// ---------------------------------------------------------------------------

struct CartanMatrix {
    std::vector<std::vector<std::int64_t>> a;
    std::vector<std::int64_t> d;  // symmetrizers, d_i a_ij = d_j a_ji
    std::string type;

    std::int64_t det() const {
        std::vector<std::vector<Rational>> m(a.size(), std::vector<Rational>(a.size()));
        for (size_t i = 0; i < a.size(); ++i)
            for (size_t j = 0; j < a.size(); ++j) m[i][j] = Rational(a[i][j]);
        Rational det = 1;
        for (size_t col = 0; col < a.size(); ++col) {
            size_t piv = col;
            while (piv < a.size() && m[piv][col] == 0) ++piv;
            if (piv == a.size()) return 0;
            if (piv != col) {
                std::swap(m[piv], m[col]);
                det = -det;
            }
            det *= m[col][col];
            for (size_t r = col + 1; r < a.size(); ++r) {
                if (m[r][col] == 0) continue;
                Rational f = m[r][col] / m[col][col];
                for (size_t cc = col; cc < a.size(); ++cc) m[r][cc] -= f * m[col][cc];
            }
        }
        det.canonicalize();
        if (det.get_den() != 1) throw InternalInconsistency("Cartan determinant not integral");
        return static_cast<std::int64_t>(det.get_num().get_si());
    }

    bool has_g2_component() const { return type == "G2"; }
};

inline CartanMatrix cartan_matrix(const std::string& type) {
    auto fill_a = [](size_t n) {
        std::vector<std::vector<std::int64_t>> a(n, std::vector<std::int64_t>(n, 0));
        for (size_t i = 0; i < n; ++i) {
            a[i][i] = 2;
            if (i + 1 < n) a[i][i + 1] = a[i + 1][i] = -1;
        }
        return a;
    };
    if (type.size() < 2) throw InvalidInput("cartan_matrix: bad type " + type);
    char fam = type[0];
    size_t n = std::stoul(type.substr(1));
    if (n == 0) throw InvalidInput("cartan_matrix: bad rank in " + type);
    CartanMatrix c;
    c.type = type;
    if (fam == 'A') {
        c.a = fill_a(n);
        c.d.assign(n, 1);
    } else if (fam == 'B' && n >= 2) {
        c.a = fill_a(n);
        c.a[n - 1][n - 2] = -2;  // short root last: a_{n,n-1} = -2
        c.d.assign(n, 2);
        c.d[n - 1] = 1;
    } else if (fam == 'C' && n >= 2) {
        c.a = fill_a(n);
        c.a[n - 2][n - 1] = -2;
        c.d.assign(n, 1);
        c.d[n - 1] = 2;
    } else if (fam == 'D' && n >= 3) {
        c.a = fill_a(n);
        c.a[n - 1][n - 2] = c.a[n - 2][n - 1] = 0;
        c.a[n - 1][n - 3] = c.a[n - 3][n - 1] = -1;
        c.d.assign(n, 1);
    } else if (fam == 'G' && n == 2) {
        c.a = {{2, -1}, {-3, 2}};
        c.d = {3, 1};
    } else if (fam == 'F' && n == 4) {
        c.a = fill_a(4);
        c.a[2][1] = -2;
        c.d = {2, 2, 1, 1};
    } else if (fam == 'E' && (n == 6 || n == 7 || n == 8)) {
        // Bourbaki numbering: node 2 attaches to node 4
        c.a.assign(n, std::vector<std::int64_t>(n, 0));
        for (size_t i = 0; i < n; ++i) c.a[i][i] = 2;
        auto link = [&](size_t i, size_t j) { c.a[i][j] = c.a[j][i] = -1; };
        link(0, 2);
        link(1, 3);
        link(2, 3);
        for (size_t i = 3; i + 1 < n; ++i) link(i, i + 1);
        c.d.assign(n, 1);
    } else {
        throw InvalidInput("cartan_matrix: unsupported type " + type);
    }
    // symmetrizability self-check
    for (size_t i = 0; i < c.a.size(); ++i)
        for (size_t j = 0; j < c.a.size(); ++j)
            if (c.d[i] * c.a[i][j] != c.d[j] * c.a[j][i])
                throw InternalInconsistency("cartan_matrix: symmetrizer mismatch");
    return c;
}

inline DoubleDatum fl_setup(const CartanMatrix& cm, std::int64_t l, int max_degree = 10) {
    if (l <= 1 || l % 2 == 0) throw InvalidInput("fl_setup: l must be an odd integer > 1");
    if (cm.has_g2_component() && l % 3 == 0)
        throw InvalidInput("fl_setup: l must not be a multiple of 3 for type G2");
    size_t n = cm.a.size();
    DoubleDatum d;
    d.f_group = d.g_group = GroupSpec{Exponents(n, l)};
    d.tau0.left = d.tau0.right = d.f_group;
    d.tau0.root_order = l;
    d.tau0.exponents.assign(n, Exponents(n, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            std::int64_t e = (-cm.d[i] * cm.a[i][j]) % l;
            d.tau0.exponents[i][j] = e < 0 ? e + l : e;
        }
    for (size_t i = 0; i < n; ++i) {
        Exponents f(n, 0), g(n, 0);
        f[i] = g[i] = 1;
        d.index.push_back({std::move(f), std::move(g)});
    }
    d.max_degree = max_degree;
    d.validate();
    return d;
}

struct Cor43Report {
    bool t_equals_c = false;      // (i)
    bool c_cap_p_trivial = false; // (ii)
    bool tau0_nondegenerate = false;  // (iii)
    bool l_prime_to_det = false;  // (iv)
    std::int64_t cartan_det = 0;
    bool all_agree = false;
};

inline Cor43Report cor43_report(const CartanMatrix& cm, std::int64_t l) {
    DoubleDatum d = fl_setup(cm, l);
    GroupSpec fg = d.product_group();
    size_t n = cm.a.size();

    Cor43Report rep;
    rep.cartan_det = cm.det();
    rep.l_prime_to_det = std::gcd(l, rep.cartan_det) == 1;
    rep.tau0_nondegenerate = nondegenerate(d.tau0).nondegenerate;

    CentralData cd = central_grouplikes(d);
    std::vector<Exponents> tgens;
    for (size_t i = 0; i < n; ++i) {
        Exponents t(2 * n, 0);
        t[i] = 1;
        t[n + i] = l - 1;  // (K_i, K_i^{-1})
        tgens.push_back(std::move(t));
    }
    Subgroup t = closure(fg, tgens);
    rep.t_equals_c = t == cd.c;

    bool trivial_meet = true;
    for (const auto& x : cd.c.elements)
        if (!fg.is_identity(x) && cd.p.contains(x)) trivial_meet = false;
    rep.c_cap_p_trivial = trivial_meet;

    rep.all_agree = rep.t_equals_c == rep.c_cap_p_trivial &&
                    rep.c_cap_p_trivial == rep.tau0_nondegenerate &&
                    rep.tau0_nondegenerate == rep.l_prime_to_det;
    if (!rep.all_agree)
        throw InternalInconsistency("cor43: conditions (i)-(iv) disagree");
    return rep;
}

// ---------------------------------------------------------------------------
// skew primitives: solve Delta(x) = x (x) g + h (x) x
// ---------------------------------------------------------------------------

struct SkewPrimitiveSpace {
    std::vector<Element> basis;
    size_t dim() const { return basis.size(); }
};

inline SkewPrimitiveSpace skew_primitive_space(DoubleEngine& engine, const Exponents& g,
                                               const Exponents& h) {
    auto keys = engine.basis();
    std::map<BasisKey, size_t> index;
    for (const auto& k : keys) index.emplace(k, index.size());
    BasisKey gk{0, engine.gamma().encode(engine.gamma().reduce(g)), 0};
    BasisKey hk{0, engine.gamma().encode(engine.gamma().reduce(h)), 0};

    // rows: tensor-square coordinates that appear; columns: basis of D
    std::map<std::pair<BasisKey, BasisKey>, std::map<size_t, Cyc>> rows;
    auto add_entry = [&](const std::pair<BasisKey, BasisKey>& kk, size_t col, const Cyc& c) {
        auto& cell = rows[kk].try_emplace(col, Cyc::zero(engine.root_order())).first->second;
        cell += c;
    };
    for (size_t col = 0; col < keys.size(); ++col) {
        for (const auto& [kk, c] : engine.coproduct_basis(keys[col])) add_entry(kk, col, c);
        add_entry({keys[col], gk}, col, -Cyc::one(engine.root_order()));
        add_entry({hk, keys[col]}, col, -Cyc::one(engine.root_order()));
    }
    CycMatrix m(rows.size(), keys.size(), engine.root_order());
    size_t r = 0;
    for (const auto& [kk, entries] : rows) {
        for (const auto& [col, c] : entries)
            if (!c.is_zero()) m.at(r, col) = c;
        ++r;
    }
    SkewPrimitiveSpace out;
    for (const auto& vec : m.nullspace()) {
        Element e;
        for (size_t c = 0; c < keys.size(); ++c)
            if (!vec[c].is_zero()) e.emplace(keys[c], vec[c]);
        out.basis.push_back(std::move(e));
    }
    return out;
}

} // namespace nforge
