#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "nforge/datum.hpp"
#include "nforge/linalg.hpp"
#include "nforge/yd.hpp"

namespace nforge {

// Monomial in the tensor algebra: a sequence of letter indices. Whether the
// letters are v's or w's is decided by the caller.
using Word = std::vector<int>;

inline Word multiset_key(const Word& w) {
    Word k = w;
    std::sort(k.begin(), k.end());
    return k;
}

// ---------------------------------------------------------------------------
// The skew pairing tau : B tensor H -> k of the double, computed by recursive
// application of the axioms
//     tau(bc, h) = tau(b, h_1) tau(c, h_2)
//     tau(b, hl) = tau(b_1, l) tau(b_2, h)      (note the reversal)
// with tau(v_i, w_j) = delta_ij, tau(f, w) = 0 = tau(v, g),
// tau(f, g) = tau0(f, g), and the coproducts
//     Delta(v_i) = v_i x 1 + f_i x v_i,  Delta(w_i) = w_i x 1 + g_i x w_i.
// Arguments are atom sequences: products of letters and group elements.
// ---------------------------------------------------------------------------
struct BAtom {
    int letter = -1;  // v-letter index, or -1 for a group element of F
    Exponents f;
    static BAtom v(int i) { return {i, {}}; }
    static BAtom grp(Exponents e) { return {-1, std::move(e)}; }
    bool is_letter() const { return letter >= 0; }
};
struct HAtom {
    int letter = -1;  // w-letter index, or -1 for a group element of G
    Exponents g;
    static HAtom w(int i) { return {i, {}}; }
    static HAtom grp(Exponents e) { return {-1, std::move(e)}; }
    bool is_letter() const { return letter >= 0; }
};

class SkewPairing {
public:
    explicit SkewPairing(const DoubleDatum& d) : d_(&d) {}

    // tau on pure words: x a v-side word, y a w-side word
    Cyc tau_words(const Word& x, const Word& y) {
        std::vector<BAtom> a;
        std::vector<HAtom> b;
        for (int i : x) a.push_back(BAtom::v(i));
        for (int j : y) b.push_back(HAtom::w(j));
        return tau(a, b);
    }

    Cyc tau(const std::vector<BAtom>& a, const std::vector<HAtom>& b) {
        // counit shortcuts
        if (a.empty()) return letter_free(b) ? Cyc::one(n()) : Cyc::zero(n());
        if (b.empty()) return letter_free(a) ? Cyc::one(n()) : Cyc::zero(n());
        // letters must match as multisets
        Word ma, mb;
        for (const auto& t : a)
            if (t.is_letter()) ma.push_back(t.letter);
        for (const auto& t : b)
            if (t.is_letter()) mb.push_back(t.letter);
        std::sort(ma.begin(), ma.end());
        std::sort(mb.begin(), mb.end());
        if (ma != mb) return Cyc::zero(n());

        auto key = make_key(a, b);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        Cyc result = a.size() == 1 ? tau_single(a[0], b) : tau_split(a, b);
        memo_.emplace(std::move(key), result);
        return result;
    }

private:
    std::int64_t n() const { return d_->root_order(); }

    static bool letter_free(const std::vector<BAtom>& a) {
        for (const auto& t : a)
            if (t.is_letter()) return false;
        return true;
    }
    static bool letter_free(const std::vector<HAtom>& b) {
        for (const auto& t : b)
            if (t.is_letter()) return false;
        return true;
    }

    // single B-atom against an atom sequence, peeling b = h . rest with
    // tau(a, h l) = tau(a_1, l) tau(a_2, h)
    Cyc tau_single(const BAtom& a, const std::vector<HAtom>& b) {
        if (b.size() == 1) return tau_base(a, b[0]);
        if (!a.is_letter()) {
            // grouplike: tau(f, h l) = tau(f, l) tau(f, h); letters kill it
            std::int64_t e = 0;
            for (const auto& h : b) {
                if (h.is_letter()) return Cyc::zero(n());
                e += d_->tau0.exponent_of(a.f, h.g);
            }
            return Cyc::zeta_pow(n(), e);
        }
        const HAtom& h = b.front();
        std::vector<HAtom> rest(b.begin() + 1, b.end());
        if (!h.is_letter()) {
            // (v_i, 1): tau(v_i, rest) * tau0-free counit term
            return tau_single(a, rest);
        }
        // (f_i, v_i) branch: delta_ij * tau(f_i, rest)
        if (h.letter != a.letter) return Cyc::zero(n());
        BAtom fi = BAtom::grp(d_->index[a.letter].f);
        return tau_single(fi, rest);
    }

    Cyc tau_base(const BAtom& a, const HAtom& b) {
        if (a.is_letter() && b.is_letter())
            return a.letter == b.letter ? Cyc::one(n()) : Cyc::zero(n());
        if (!a.is_letter() && !b.is_letter()) return d_->tau0.eval(a.f, b.g);
        return Cyc::zero(n());
    }

    // tau(a . A', B) = sum over Delta(B) of tau(a, B_1) tau(A', B_2).
    // Only terms where tau(a, B_1) can be nonzero are generated: for a letter
    // exactly one letter of B stays left, for a group element none does.
    Cyc tau_split(const std::vector<BAtom>& a, const std::vector<HAtom>& b) {
        BAtom head = a.front();
        std::vector<BAtom> tail(a.begin() + 1, a.end());
        Cyc acc = Cyc::zero(n());
        if (!head.is_letter()) {
            // B_1 = all coactions and group parts, B_2 = B
            std::int64_t e = 0;
            for (const auto& h : b)
                e += d_->tau0.exponent_of(head.f, h.is_letter() ? d_->index[h.letter].g : h.g);
            acc = Cyc::zeta_pow(n(), e) * tau(tail, b);
            return acc;
        }
        for (size_t p = 0; p < b.size(); ++p) {
            if (!b[p].is_letter()) continue;
            // letter at p stays in B_1, every other letter moves to B_2
            std::vector<HAtom> b1, b2;
            for (size_t k = 0; k < b.size(); ++k) {
                if (!b[k].is_letter()) {
                    b1.push_back(b[k]);
                    b2.push_back(b[k]);
                } else if (k == p) {
                    b1.push_back(b[k]);
                } else {
                    b1.push_back(HAtom::grp(d_->index[b[k].letter].g));
                    b2.push_back(b[k]);
                }
            }
            Cyc left = tau_single(head, b1);
            if (left.is_zero()) continue;
            acc += left * tau(tail, b2);
        }
        return acc;
    }

    using Key = std::vector<std::int64_t>;
    Key make_key(const std::vector<BAtom>& a, const std::vector<HAtom>& b) const {
        Key k;
        k.reserve(4 * (a.size() + b.size()));
        for (const auto& t : a) {
            if (t.is_letter())
                k.push_back(t.letter);
            else {
                k.push_back(-1);
                k.insert(k.end(), t.f.begin(), t.f.end());
            }
            k.push_back(-9);
        }
        k.push_back(-7);
        for (const auto& t : b) {
            if (t.is_letter())
                k.push_back(t.letter);
            else {
                k.push_back(-1);
                k.insert(k.end(), t.g.begin(), t.g.end());
            }
            k.push_back(-9);
        }
        return k;
    }

    const DoubleDatum* d_;
    std::map<Key, Cyc> memo_;
};

// ---------------------------------------------------------------------------
// Braided deconcatenation coproduct on words with diagonal braiding q: each
// letter is primitive, and a letter crossing an earlier one picks up q_{ji}
// (j the earlier letter going right, i the later letter going left).
// ---------------------------------------------------------------------------
struct CoproductTerm {
    Word left, right;
    Cyc weight;
};

inline std::vector<CoproductTerm> braided_coproduct(const Word& x, const BraidingMatrix& q) {
    size_t m = x.size();
    std::vector<CoproductTerm> out;
    out.reserve(size_t{1} << m);
    for (size_t mask = 0; mask < (size_t{1} << m); ++mask) {
        CoproductTerm t;
        std::int64_t e = 0;
        for (size_t i = 0; i < m; ++i) {
            if (mask & (size_t{1} << i)) {
                t.left.push_back(x[i]);
                for (size_t j = 0; j < i; ++j)
                    if (!(mask & (size_t{1} << j))) e += q.exponents[x[j]][x[i]];
            } else {
                t.right.push_back(x[i]);
            }
        }
        t.weight = Cyc::zeta_pow(q.root_order, e);
        out.push_back(std::move(t));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Nichols algebra of a diagonal braiding: per-degree pairing matrices against
// the formal dual, ranks (= graded dimensions), deterministic pivot bases and
// the reduction map onto them. The pairing on pure words satisfies
//     tau(x, j . y) = sum over positions p with x_p = j of
//                     (prod_{k > p} q[j][x_k]) tau(x minus p, y),
// which is the axiom recursion specialized to letters.
// ---------------------------------------------------------------------------
class DiagonalNichols {
public:
    DiagonalNichols() = default;
    DiagonalNichols(BraidingMatrix q, int max_degree)
        : q_(std::move(q)), max_degree_(max_degree) {}

    size_t letters() const { return q_.size(); }
    const BraidingMatrix& q() const { return q_; }
    int max_degree() const { return max_degree_; }

    Cyc tau_pure(const Word& x, const Word& y) {
        if (x.size() != y.size()) return Cyc::zero(q_.root_order);
        if (multiset_key(x) != multiset_key(y)) return Cyc::zero(q_.root_order);
        if (x.empty()) return Cyc::one(q_.root_order);
        auto key = std::make_pair(x, y);
        auto it = tau_memo_.find(key);
        if (it != tau_memo_.end()) return it->second;
        int j = y.front();
        Word ytail(y.begin() + 1, y.end());
        Cyc acc = Cyc::zero(q_.root_order);
        for (size_t p = 0; p < x.size(); ++p) {
            if (x[p] != j) continue;
            std::int64_t e = 0;
            for (size_t k = p + 1; k < x.size(); ++k) e += q_.exponents[j][x[k]];
            Word xrest;
            xrest.reserve(x.size() - 1);
            for (size_t k = 0; k < x.size(); ++k)
                if (k != p) xrest.push_back(x[k]);
            acc += Cyc::zeta_pow(q_.root_order, e) * tau_pure(xrest, ytail);
        }
        tau_memo_.emplace(std::move(key), acc);
        return acc;
    }

    // all words of the given degree, lexicographic
    const std::vector<Word>& words(int deg) {
        ensure_words(deg);
        return words_[deg];
    }

    int dim(int deg) {
        ensure_degree(std::min(deg, max_degree_));
        if (deg <= computed_) return dims_[deg];
        if (zero_degree_) return 0;  // past a zero-dimensional degree everything vanishes
        throw DegreeOverflow("dim: degree " + std::to_string(deg) +
                             " beyond truncation " + std::to_string(max_degree_));
    }

    // true once some degree has rank zero (degree-1 generation kills the rest)
    bool finite_within(int cutoff) {
        ensure_degree(cutoff);
        return zero_degree_.has_value() && *zero_degree_ <= cutoff;
    }
    std::optional<int> zero_degree() {
        ensure_degree(max_degree_);
        return zero_degree_;
    }

    std::vector<int> dims_up_to(int cutoff) {
        std::vector<int> d;
        for (int m = 0; m <= cutoff; ++m) {
            d.push_back(dim(m));
            if (d.back() == 0) break;
        }
        return d;
    }

    std::int64_t total_dim() {
        ensure_degree(max_degree_);
        if (!zero_degree_) throw BoundExceeded("total_dim: not finite within max_degree");
        std::int64_t t = 0;
        for (int m = 0; m < *zero_degree_; ++m) t += dims_[m];
        return t;
    }

    const std::vector<Word>& pivot_words(int deg) {
        ensure_degree(std::min(deg, max_degree_));
        if (deg > computed_) {
            static const std::vector<Word> empty;
            return empty;
        }
        return pivots_[deg];
    }

    // coordinates of a word over the pivot words of its degree
    std::vector<std::pair<Word, Cyc>> express(const Word& x) {
        int deg = static_cast<int>(x.size());
        ensure_degree(std::min(deg, max_degree_));
        if (zero_degree_ && deg >= *zero_degree_) return {};
        if (deg > computed_)
            throw DegreeOverflow("express: degree " + std::to_string(deg) +
                                 " beyond computed truncation " + std::to_string(computed_));
        const Block& blk = block_of(deg, multiset_key(x));
        std::vector<Cyc> v;
        v.reserve(blk.pivot_cols.size());
        for (const Word& y : blk.pivot_cols) v.push_back(tau_pure(x, y));
        std::vector<std::pair<Word, Cyc>> out;
        for (size_t r = 0; r < blk.pivot_rows.size(); ++r) {
            Cyc c = Cyc::zero(q_.root_order);
            for (size_t cidx = 0; cidx < v.size(); ++cidx)
                c += blk.inv.at(cidx, r) * v[cidx];
            if (!c.is_zero()) out.emplace_back(blk.pivot_rows[r], c);
        }
        return out;
    }

    // pairing matrix of a full degree in lexicographic word order
    CycMatrix pairing_matrix(int deg) {
        const auto& ws = words(deg);
        CycMatrix m(ws.size(), ws.size(), q_.root_order);
        for (size_t i = 0; i < ws.size(); ++i)
            for (size_t j = 0; j < ws.size(); ++j) m.at(i, j) = tau_pure(ws[i], ws[j]);
        return m;
    }

private:
    struct Block {
        std::vector<Word> rows;  // all words with this multiset, lex
        std::vector<Word> pivot_rows, pivot_cols;
        CycMatrix inv;  // inverse of the pivot submatrix
        int rank = 0;
    };

    void ensure_words(int deg) {
        while (static_cast<int>(words_.size()) <= deg) {
            int d = static_cast<int>(words_.size());
            std::vector<Word> ws;
            if (d == 0)
                ws.push_back({});
            else {
                const auto& prev = words_[d - 1];
                double count = static_cast<double>(prev.size()) * letters();
                if (count > static_cast<double>(config().max_words_per_degree))
                    throw BoundExceeded("word count at degree " + std::to_string(d) +
                                        " exceeds bound");
                for (const auto& w : prev)
                    for (size_t a = 0; a < letters(); ++a) {
                        Word nw = w;
                        nw.push_back(static_cast<int>(a));
                        ws.push_back(std::move(nw));
                    }
                std::sort(ws.begin(), ws.end());
            }
            words_.push_back(std::move(ws));
        }
    }

    const Block& block_of(int deg, const Word& mkey) {
        return blocks_[deg].at(mkey);
    }

    void ensure_degree(int deg) {
        if (deg > max_degree_) deg = max_degree_;
        while (computed_ < deg) {
            if (zero_degree_) return;  // everything beyond is zero
            int d = computed_ + 1;
            ensure_words(d);
            std::map<Word, std::vector<Word>> by_multiset;
            for (const Word& w : words_[d]) by_multiset[multiset_key(w)].push_back(w);
            int dimsum = 0;
            std::map<Word, Block> blocks;
            std::vector<Word> piv;
            for (auto& [mkey, rows] : by_multiset) {
                Block blk;
                blk.rows = rows;
                // lexicographically first independent rows
                RowSpace rowspace(rows.size(), q_.root_order);
                std::vector<std::vector<Cyc>> mat;
                for (const Word& x : rows) {
                    std::vector<Cyc> vec;
                    vec.reserve(rows.size());
                    for (const Word& y : rows) vec.push_back(tau_pure(x, y));
                    if (rowspace.insert(vec)) blk.pivot_rows.push_back(x);
                    mat.push_back(std::move(vec));
                }
                blk.rank = static_cast<int>(blk.pivot_rows.size());
                if (blk.rank > 0) {
                    // lexicographically first independent columns of the
                    // pivot-row submatrix
                    std::vector<size_t> prow_idx;
                    for (size_t i = 0; i < rows.size(); ++i)
                        if (std::binary_search(blk.pivot_rows.begin(), blk.pivot_rows.end(),
                                               rows[i]))
                            prow_idx.push_back(i);
                    RowSpace colspace(prow_idx.size(), q_.root_order);
                    std::vector<size_t> pcol_idx;
                    for (size_t j = 0; j < rows.size(); ++j) {
                        std::vector<Cyc> col;
                        col.reserve(prow_idx.size());
                        for (size_t i : prow_idx) col.push_back(mat[i][j]);
                        if (colspace.insert(col)) {
                            blk.pivot_cols.push_back(rows[j]);
                            pcol_idx.push_back(j);
                            if (pcol_idx.size() == prow_idx.size()) break;
                        }
                    }
                    CycMatrix sub(blk.rank, blk.rank, q_.root_order);
                    for (size_t i = 0; i < prow_idx.size(); ++i)
                        for (size_t j = 0; j < pcol_idx.size(); ++j)
                            sub.at(i, j) = mat[prow_idx[i]][pcol_idx[j]];
                    auto inv = sub.inverse();
                    if (!inv)
                        throw InternalInconsistency("pivot submatrix singular");
                    blk.inv = std::move(*inv);
                }
                dimsum += blk.rank;
                for (const Word& w : blk.pivot_rows) piv.push_back(w);
                blocks.emplace(mkey, std::move(blk));
            }
            std::sort(piv.begin(), piv.end());
            dims_.push_back(dimsum);
            pivots_.push_back(std::move(piv));
            blocks_.push_back(std::move(blocks));
            computed_ = d;
            if (dimsum == 0) zero_degree_ = d;
        }
    }

    BraidingMatrix q_;
    int max_degree_ = 12;
    int computed_ = -1;
    std::optional<int> zero_degree_;
    std::vector<std::vector<Word>> words_;
    std::vector<int> dims_;
    std::vector<std::vector<Word>> pivots_;
    std::vector<std::map<Word, Block>> blocks_;
    std::map<std::pair<Word, Word>, Cyc> tau_memo_;
};

// V-side and W-side braidings of a double datum, as plain matrices
inline BraidingMatrix v_braiding(const DoubleDatum& d) {
    BraidingMatrix q;
    q.root_order = d.root_order();
    size_t n = d.rank();
    q.exponents.assign(n, Exponents(n, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) q.exponents[i][j] = d.qv_exponent(i, j);
    return q;
}

inline BraidingMatrix w_braiding(const DoubleDatum& d) {
    BraidingMatrix q;
    q.root_order = d.root_order();
    size_t n = d.rank();
    q.exponents.assign(n, Exponents(n, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) q.exponents[i][j] = d.qw_exponent(i, j);
    return q;
}

struct NicholsDims {
    std::vector<int> dims;  // from degree 0
    bool finite = false;
    std::int64_t total = 0;  // only meaningful when finite
};

inline NicholsDims nichols_dims(const DoubleDatum& d, int max_degree) {
    DiagonalNichols nich(v_braiding(d), max_degree);
    NicholsDims out;
    out.dims = nich.dims_up_to(max_degree);
    out.finite = nich.finite_within(max_degree);
    if (out.finite)
        for (int v : out.dims) out.total += v;
    return out;
}

} // namespace nforge
