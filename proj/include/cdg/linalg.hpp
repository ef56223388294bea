#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "cdg/field.hpp"

namespace cdg {

template <class S>
using SparseMat = Eigen::SparseMatrix<S, Eigen::ColMajor, int>;

template <class S>
using DenseMat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

/// Sparse vector with ordered keys.  Used for accumulation everywhere a
/// result is built term by term.
template <class S>
using Vec = std::map<int, S>;

template <class S>
inline void axpy(Vec<S>& v, int k, const S& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = v.try_emplace(k, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) v.erase(it);
    }
}

template <class S>
inline void axpy(Vec<S>& v, const Vec<S>& w, const S& c) {
    if (c.is_zero()) return;
    for (const auto& [k, x] : w) axpy(v, k, x * c);
}

template <class S>
inline Vec<S> unit_vec(int k) { return Vec<S>{{k, S(1)}}; }

template <class S>
inline Vec<S> scaled(Vec<S> v, const S& c) {
    if (c.is_zero()) return {};
    for (auto& kv : v) kv.second *= c;
    return v;
}

template <class S>
inline Vec<S> operator+(Vec<S> a, const Vec<S>& b) { axpy(a, b, S(1)); return a; }

template <class S>
inline Vec<S> operator-(Vec<S> a, const Vec<S>& b) { axpy(a, b, S(-1)); return a; }

template <class S>
inline Vec<S> column(const SparseMat<S>& m, int j) {
    Vec<S> v;
    for (typename SparseMat<S>::InnerIterator it(m, j); it; ++it)
        if (!it.value().is_zero()) v.emplace(it.row(), it.value());
    return v;
}

/// m * v for a sparse vector v.
template <class S>
inline Vec<S> apply(const SparseMat<S>& m, const Vec<S>& v) {
    Vec<S> r;
    for (const auto& [j, c] : v)
        for (typename SparseMat<S>::InnerIterator it(m, j); it; ++it) axpy(r, static_cast<int>(it.row()), it.value() * c);
    return r;
}

/// Row functional applied to v, where the functional is stored as a Vec.
template <class S>
inline S pair(const Vec<S>& functional, const Vec<S>& v) {
    S r(0);
    auto a = functional.begin();
    auto b = v.begin();
    while (a != functional.end() && b != v.end()) {
        if (a->first < b->first) ++a;
        else if (b->first < a->first) ++b;
        else { r += a->second * b->second; ++a; ++b; }
    }
    return r;
}

template <class S>
class Triplets {
public:
    void add(int r, int c, const S& v) {
        if (!v.is_zero()) t_.emplace_back(r, c, v);
    }
    void add_column(int c, const Vec<S>& v, const S& scale = S(1)) {
        for (const auto& [r, x] : v) add(r, c, x * scale);
    }
    SparseMat<S> build(int rows, int cols) const {
        SparseMat<S> m(rows, cols);
        m.setFromTriplets(t_.begin(), t_.end());
        m.prune([](const int&, const int&, const S& x) { return !x.is_zero(); });
        m.makeCompressed();
        return m;
    }
    std::size_t size() const { return t_.size(); }

private:
    std::vector<Eigen::Triplet<S>> t_;
};

template <class S>
inline SparseMat<S> identity(int n) {
    Triplets<S> t;
    for (int i = 0; i < n; ++i) t.add(i, i, S(1));
    return t.build(n, n);
}

template <class S>
inline SparseMat<S> from_columns(int rows, const std::vector<Vec<S>>& cols) {
    Triplets<S> t;
    for (int j = 0; j < static_cast<int>(cols.size()); ++j) t.add_column(j, cols[j]);
    return t.build(rows, static_cast<int>(cols.size()));
}

template <class S>
inline SparseMat<S> pruned(SparseMat<S> m) {
    m.prune([](const int&, const int&, const S& x) { return !x.is_zero(); });
    m.makeCompressed();
    return m;
}

template <class S>
inline SparseMat<S> product(const SparseMat<S>& a, const SparseMat<S>& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("product: inner dimensions differ");
    return pruned<S>(SparseMat<S>(a * b));
}

template <class S>
inline bool is_zero(const SparseMat<S>& m) {
    for (int j = 0; j < m.outerSize(); ++j)
        for (typename SparseMat<S>::InnerIterator it(m, j); it; ++it)
            if (!it.value().is_zero()) return false;
    return true;
}

template <class S>
inline bool equal(const SparseMat<S>& a, const SparseMat<S>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    return is_zero<S>(SparseMat<S>(a - b));
}

template <class S>
inline DenseMat<S> to_dense(const SparseMat<S>& m) {
    DenseMat<S> d = DenseMat<S>::Constant(m.rows(), m.cols(), S(0));
    for (int j = 0; j < m.outerSize(); ++j)
        for (typename SparseMat<S>::InnerIterator it(m, j); it; ++it) d(it.row(), j) = it.value();
    return d;
}

template <class S>
inline SparseMat<S> to_sparse(const DenseMat<S>& d) {
    Triplets<S> t;
    for (int j = 0; j < d.cols(); ++j)
        for (int i = 0; i < d.rows(); ++i) t.add(i, j, d(i, j));
    return t.build(static_cast<int>(d.rows()), static_cast<int>(d.cols()));
}

/// Incremental row echelon form over an exact field.  Rows are kept with
/// leading coefficient one; finalize() brings the system to reduced form,
/// after which kernel, solve and quotient coordinates are available.
template <class S>
class Echelon {
public:
    explicit Echelon(int ncols) : ncols_(ncols), pivot_row_(static_cast<std::size_t>(ncols), -1) {}

    int ncols() const { return ncols_; }
    int rank() const { return static_cast<int>(rows_.size()); }

    /// Returns true when the row was independent of the rows seen so far.
    bool insert(const Vec<S>& row) {
        Vec<S> r = reduce_partial(row);
        if (r.empty()) return false;
        S lead = r.begin()->second;
        S inv = lead.inverse();
        std::vector<std::pair<int, S>> stored;
        stored.reserve(r.size());
        for (auto& [c, x] : r) stored.emplace_back(c, x * inv);
        pivot_row_[static_cast<std::size_t>(r.begin()->first)] = static_cast<int>(rows_.size());
        pivots_.push_back(r.begin()->first);
        rows_.push_back(std::move(stored));
        reduced_ = false;
        return true;
    }

    /// Back substitution to reduced row echelon form.
    void finalize() {
        if (reduced_) return;
        std::vector<int> order(rows_.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return pivots_[a] > pivots_[b]; });
        for (int ri : order) {
            auto& row = rows_[static_cast<std::size_t>(ri)];
            bool touched = false;
            for (std::size_t k = 1; k < row.size(); ++k)
                if (pivot_row_[static_cast<std::size_t>(row[k].first)] >= 0) { touched = true; break; }
            if (!touched) continue;
            Vec<S> acc(row.begin(), row.end());
            for (std::size_t k = 1; k < row.size(); ++k) {
                int c = row[k].first;
                int pr = pivot_row_[static_cast<std::size_t>(c)];
                if (pr < 0) continue;
                auto it = acc.find(c);
                if (it == acc.end()) continue;
                S f = it->second;
                for (const auto& [cc, x] : rows_[static_cast<std::size_t>(pr)]) axpy(acc, cc, -(f * x));
            }
            row.assign(acc.begin(), acc.end());
        }
        reduced_ = true;
    }

    bool is_pivot(int c) const { return pivot_row_[static_cast<std::size_t>(c)] >= 0; }
    const std::vector<int>& pivots() const { return pivots_; }

    std::vector<int> free_columns() const {
        std::vector<int> f;
        for (int c = 0; c < ncols_; ++c)
            if (pivot_row_[static_cast<std::size_t>(c)] < 0) f.push_back(c);
        return f;
    }

    /// v reduced against the row space; the result is supported on free
    /// columns after finalize().
    Vec<S> reduce(const Vec<S>& v) {
        finalize();
        Vec<S> r = v;
        for (const auto& [c, x] : v) {
            int pr = pivot_row_[static_cast<std::size_t>(c)];
            if (pr < 0) continue;
            for (const auto& [cc, y] : rows_[static_cast<std::size_t>(pr)]) axpy(r, cc, -(x * y));
        }
        return r;
    }

    bool in_row_space(const Vec<S>& v) { return reduce(v).empty(); }

    /// Kernel of the linear system whose rows were inserted.  Column j of
    /// the returned matrix is the kernel vector with a one in free column
    /// free[j]; the coordinates of a kernel element are its free entries.
    SparseMat<S> kernel_basis() {
        finalize();
        std::vector<int> freec = free_columns();
        std::vector<int> index(static_cast<std::size_t>(ncols_), -1);
        for (std::size_t j = 0; j < freec.size(); ++j) index[static_cast<std::size_t>(freec[j])] = static_cast<int>(j);
        Triplets<S> t;
        for (std::size_t j = 0; j < freec.size(); ++j) t.add(freec[j], static_cast<int>(j), S(1));
        for (std::size_t ri = 0; ri < rows_.size(); ++ri) {
            const auto& row = rows_[ri];
            int lead = row.front().first;
            for (std::size_t k = 1; k < row.size(); ++k) t.add(lead, index[static_cast<std::size_t>(row[k].first)], -row[k].second);
        }
        return t.build(ncols_, static_cast<int>(freec.size()));
    }

    /// Rows of the reduced echelon form.
    std::vector<Vec<S>> basis() {
        finalize();
        std::vector<Vec<S>> out;
        std::vector<int> order(rows_.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return pivots_[a] < pivots_[b]; });
        for (int ri : order) out.emplace_back(rows_[static_cast<std::size_t>(ri)].begin(), rows_[static_cast<std::size_t>(ri)].end());
        return out;
    }

    /// Row of the reduced form whose pivot is column c.
    Vec<S> pivot_row(int c) {
        finalize();
        int pr = pivot_row_[static_cast<std::size_t>(c)];
        if (pr < 0) return {};
        const auto& row = rows_[static_cast<std::size_t>(pr)];
        return Vec<S>(row.begin(), row.end());
    }

private:
    Vec<S> reduce_partial(const Vec<S>& row) const {
        Vec<S> r;
        for (const auto& [c, x] : row)
            if (!x.is_zero()) r.emplace(c, x);
        auto it = r.begin();
        while (it != r.end()) {
            int c = it->first;
            int pr = pivot_row_[static_cast<std::size_t>(c)];
            if (pr < 0 || it->second.is_zero()) {
                if (it->second.is_zero()) it = r.erase(it);
                else ++it;
                continue;
            }
            S f = it->second;
            const auto& prow = rows_[static_cast<std::size_t>(pr)];
            for (std::size_t k = 1; k < prow.size(); ++k) {
                auto [jt, fresh] = r.try_emplace(prow[k].first, S(0));
                jt->second -= f * prow[k].second;
            }
            it = r.erase(it);
        }
        for (auto jt = r.begin(); jt != r.end();) {
            if (jt->second.is_zero()) jt = r.erase(jt);
            else ++jt;
        }
        return r;
    }

    int ncols_;
    std::vector<int> pivot_row_;
    std::vector<int> pivots_;
    std::vector<std::vector<std::pair<int, S>>> rows_;
    bool reduced_ = true;
};

/// Rows of m as sparse vectors.
template <class S>
inline std::vector<Vec<S>> rows_of(const SparseMat<S>& m) {
    std::vector<Vec<S>> rows(static_cast<std::size_t>(m.rows()));
    for (int j = 0; j < m.outerSize(); ++j)
        for (typename SparseMat<S>::InnerIterator it(m, j); it; ++it)
            if (!it.value().is_zero()) rows[static_cast<std::size_t>(it.row())].emplace(j, it.value());
    return rows;
}

template <class S>
inline std::vector<Vec<S>> columns_of(const SparseMat<S>& m) {
    std::vector<Vec<S>> cols;
    cols.reserve(static_cast<std::size_t>(m.cols()));
    for (int j = 0; j < m.cols(); ++j) cols.push_back(column(m, j));
    return cols;
}

template <class S>
inline int rank(const SparseMat<S>& m) {
    Echelon<S> e(static_cast<int>(m.rows()));
    for (int j = 0; j < m.cols(); ++j) e.insert(column(m, j));
    return e.rank();
}

/// Kernel of m; columns of the result form a basis.
template <class S>
inline SparseMat<S> kernel(const SparseMat<S>& m) {
    Echelon<S> e(static_cast<int>(m.cols()));
    for (const auto& r : rows_of(m)) e.insert(r);
    return e.kernel_basis();
}

/// Some x with m x = b, or nothing when the system is inconsistent.
template <class S>
inline std::optional<Vec<S>> solve(const SparseMat<S>& m, const Vec<S>& b) {
    int n = static_cast<int>(m.cols());
    Echelon<S> e(n + 1);
    auto rows = rows_of(m);
    for (const auto& [i, x] : b) rows[static_cast<std::size_t>(i)].emplace(n, x);
    for (const auto& r : rows) e.insert(r);
    if (e.is_pivot(n)) return std::nullopt;
    e.finalize();
    Vec<S> x;
    for (int p : e.pivots()) {
        Vec<S> row = e.pivot_row(p);
        auto it = row.find(n);
        if (it != row.end()) x.emplace(p, it->second);
    }
    return x;
}

/// Span of a family of vectors with a canonical basis (reduced echelon
/// rows) and quotient coordinates on the complementary standard vectors.
template <class S>
class Subspace {
public:
    explicit Subspace(int ambient) : e_(ambient) {}
    Subspace(int ambient, const std::vector<Vec<S>>& gens) : e_(ambient) {
        for (const auto& g : gens) e_.insert(g);
    }
    bool add(const Vec<S>& v) { return e_.insert(v); }
    int dim() const { return e_.rank(); }
    int ambient() const { return e_.ncols(); }
    bool contains(const Vec<S>& v) { return e_.in_row_space(v); }
    std::vector<Vec<S>> basis() { return e_.basis(); }
    /// Coordinates of v in basis(); v must lie in the span.
    Vec<S> coordinates(const Vec<S>& v) {
        e_.finalize();
        std::vector<int> piv = e_.pivots();
        std::sort(piv.begin(), piv.end());
        Vec<S> c;
        for (std::size_t i = 0; i < piv.size(); ++i) {
            auto it = v.find(piv[i]);
            if (it != v.end()) c.emplace(static_cast<int>(i), it->second);
        }
        return c;
    }
    /// Standard basis indices spanning a complement.
    std::vector<int> complement() const { return e_.free_columns(); }
    /// Image of v in ambient / span, in coordinates indexed by complement().
    Vec<S> quotient(const Vec<S>& v) {
        Vec<S> r = e_.reduce(v);
        std::vector<int> comp = complement();
        Vec<S> q;
        for (const auto& [c, x] : r) {
            auto it = std::lower_bound(comp.begin(), comp.end(), c);
            q.emplace(static_cast<int>(it - comp.begin()), x);
        }
        return q;
    }

private:
    Echelon<S> e_;
};

}  // namespace cdg
