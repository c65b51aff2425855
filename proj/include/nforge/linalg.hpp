#pragma once

#include <optional>
#include <vector>

#include "nforge/cyclotomic.hpp"
#include "nforge/errors.hpp"

namespace nforge {

// Dense matrix over the cyclotomic field. Sizes here are desk scale; plain
// Gaussian elimination with exact arithmetic is enough.
class CycMatrix {
public:
    CycMatrix() : rows_(0), cols_(0), n_(1) {}
    CycMatrix(size_t r, size_t c, std::int64_t n)
        : rows_(r), cols_(c), n_(n), data_(r * c, Cyc::zero(n)) {}

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    std::int64_t root_order() const { return n_; }

    Cyc& at(size_t i, size_t j) { return data_[i * cols_ + j]; }
    const Cyc& at(size_t i, size_t j) const { return data_[i * cols_ + j]; }

    static CycMatrix identity(size_t n, std::int64_t order) {
        CycMatrix m(n, n, order);
        for (size_t i = 0; i < n; ++i) m.at(i, i) = Cyc::one(order);
        return m;
    }

    // Row-reduce in place; returns pivot (row, col) pairs in column order.
    // Pivot selection is deterministic: first unused row with a nonzero entry
    // in the leftmost unresolved column.
    std::vector<std::pair<size_t, size_t>> row_reduce() {
        std::vector<std::pair<size_t, size_t>> pivots;
        size_t prow = 0;
        for (size_t col = 0; col < cols_ && prow < rows_; ++col) {
            size_t sel = rows_;
            for (size_t r = prow; r < rows_; ++r)
                if (!at(r, col).is_zero()) {
                    sel = r;
                    break;
                }
            if (sel == rows_) continue;
            if (sel != prow)
                for (size_t j = 0; j < cols_; ++j) std::swap(at(prow, j), at(sel, j));
            Cyc inv = at(prow, col).inverse();
            for (size_t j = col; j < cols_; ++j) at(prow, j) *= inv;
            for (size_t r = 0; r < rows_; ++r) {
                if (r == prow || at(r, col).is_zero()) continue;
                Cyc f = at(r, col);
                for (size_t j = col; j < cols_; ++j) at(r, j) -= f * at(prow, j);
            }
            pivots.emplace_back(prow, col);
            ++prow;
        }
        return pivots;
    }

    size_t rank() const {
        CycMatrix tmp = *this;
        return tmp.row_reduce().size();
    }

    std::optional<CycMatrix> inverse() const {
        if (rows_ != cols_) return std::nullopt;
        CycMatrix aug(rows_, 2 * cols_, n_);
        for (size_t i = 0; i < rows_; ++i) {
            for (size_t j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
            aug.at(i, cols_ + i) = Cyc::one(n_);
        }
        auto piv = aug.row_reduce();
        if (piv.size() != rows_) return std::nullopt;
        for (size_t k = 0; k < piv.size(); ++k)
            if (piv[k].second != k) return std::nullopt;
        CycMatrix inv(rows_, cols_, n_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) inv.at(i, j) = aug.at(i, cols_ + j);
        return inv;
    }

    // Basis of the right null space, one column vector per basis element.
    std::vector<std::vector<Cyc>> nullspace() const {
        CycMatrix tmp = *this;
        auto pivots = tmp.row_reduce();
        std::vector<bool> is_pivot_col(cols_, false);
        for (auto& p : pivots) is_pivot_col[p.second] = true;
        std::vector<std::vector<Cyc>> basis;
        for (size_t free_col = 0; free_col < cols_; ++free_col) {
            if (is_pivot_col[free_col]) continue;
            std::vector<Cyc> v(cols_, Cyc::zero(n_));
            v[free_col] = Cyc::one(n_);
            for (auto& p : pivots)
                if (p.second < free_col) v[p.second] = -tmp.at(p.first, free_col);
            basis.push_back(std::move(v));
        }
        return basis;
    }

private:
    size_t rows_, cols_;
    std::int64_t n_;
    std::vector<Cyc> data_;
};

// Incremental row space with exact reduction, for span-growth fixpoints.
class RowSpace {
public:
    explicit RowSpace(size_t dim, std::int64_t order) : dim_(dim), n_(order) {}

    size_t rank() const { return rows_.size(); }

    // Returns true if v enlarged the span.
    bool insert(std::vector<Cyc> v) {
        reduce(v);
        size_t lead = dim_;
        for (size_t j = 0; j < dim_; ++j)
            if (!v[j].is_zero()) {
                lead = j;
                break;
            }
        if (lead == dim_) return false;
        Cyc inv = v[lead].inverse();
        for (size_t j = lead; j < dim_; ++j) v[j] *= inv;
        rows_.push_back({lead, std::move(v)});
        for (size_t k = rows_.size(); k-- > 1;) {
            if (rows_[k - 1].first > rows_[k].first) std::swap(rows_[k - 1], rows_[k]);
        }
        return true;
    }

    bool contains(std::vector<Cyc> v) const {
        reduce(v);
        for (const auto& c : v)
            if (!c.is_zero()) return false;
        return true;
    }

    const std::vector<std::pair<size_t, std::vector<Cyc>>>& rows() const { return rows_; }

private:
    void reduce(std::vector<Cyc>& v) const {
        for (const auto& [lead, row] : rows_) {
            if (v[lead].is_zero()) continue;
            Cyc f = v[lead];
            for (size_t j = lead; j < dim_; ++j) v[j] -= f * row[j];
        }
    }

    size_t dim_;
    std::int64_t n_;
    std::vector<std::pair<size_t, std::vector<Cyc>>> rows_;
};

// Smith normal form over Z. Returns diag entries d and unimodular S, Sinv with
// S * M * (col ops) diagonal; only the row transform is needed by callers
// (quotient presentations), so column operations are not tracked.
struct SmithResult {
    std::vector<Integer> diag;                  // size = rows of M
    std::vector<std::vector<Integer>> S;        // rows x rows
    std::vector<std::vector<Integer>> Sinv;     // rows x rows
};

inline SmithResult smith_normal_form(std::vector<std::vector<Integer>> m, size_t rows, size_t cols) {
    SmithResult res;
    res.S.assign(rows, std::vector<Integer>(rows, 0));
    res.Sinv.assign(rows, std::vector<Integer>(rows, 0));
    for (size_t i = 0; i < rows; ++i) res.S[i][i] = res.Sinv[i][i] = 1;

    auto row_swap = [&](size_t a, size_t b) {
        std::swap(m[a], m[b]);
        std::swap(res.S[a], res.S[b]);
        for (size_t i = 0; i < rows; ++i) std::swap(res.Sinv[i][a], res.Sinv[i][b]);
    };
    auto row_add = [&](size_t dst, size_t src, const Integer& f) {
        // row dst += f * row src ; Sinv gets the inverse column op
        for (size_t j = 0; j < cols; ++j) m[dst][j] += f * m[src][j];
        for (size_t j = 0; j < rows; ++j) res.S[dst][j] += f * res.S[src][j];
        for (size_t i = 0; i < rows; ++i) res.Sinv[i][src] -= f * res.Sinv[i][dst];
    };
    auto row_neg = [&](size_t a) {
        for (size_t j = 0; j < cols; ++j) m[a][j] = -m[a][j];
        for (size_t j = 0; j < rows; ++j) res.S[a][j] = -res.S[a][j];
        for (size_t i = 0; i < rows; ++i) res.Sinv[i][a] = -res.Sinv[i][a];
    };
    auto col_swap = [&](size_t a, size_t b) {
        for (size_t i = 0; i < rows; ++i) std::swap(m[i][a], m[i][b]);
    };
    auto col_add = [&](size_t dst, size_t src, const Integer& f) {
        for (size_t i = 0; i < rows; ++i) m[i][dst] += f * m[i][src];
    };

    size_t t = 0;
    while (t < rows && t < cols) {
        // find a pivot with minimal nonzero absolute value
        size_t pi = rows, pj = cols;
        Integer best;
        for (size_t i = t; i < rows; ++i)
            for (size_t j = t; j < cols; ++j) {
                if (m[i][j] == 0) continue;
                Integer a = abs(m[i][j]);
                if (pi == rows || a < best) {
                    best = a;
                    pi = i;
                    pj = j;
                }
            }
        if (pi == rows) break;
        if (pi != t) row_swap(t, pi);
        if (pj != t) col_swap(t, pj);
        bool dirty = false;
        for (size_t i = t + 1; i < rows; ++i) {
            if (m[i][t] == 0) continue;
            Integer q = m[i][t] / m[t][t];
            if (q != 0) row_add(i, t, -q);
            if (m[i][t] != 0) dirty = true;
        }
        for (size_t j = t + 1; j < cols; ++j) {
            if (m[t][j] == 0) continue;
            Integer q = m[t][j] / m[t][t];
            if (q != 0) col_add(j, t, -q);
            if (m[t][j] != 0) dirty = true;
        }
        if (dirty) continue;  // remainders left, repeat with smaller pivot
        if (m[t][t] < 0) row_neg(t);
        ++t;
    }

    res.diag.assign(rows, Integer(0));
    for (size_t i = 0; i < rows && i < cols; ++i) res.diag[i] = m[i][i];
    return res;
}

} // namespace nforge
