#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cdg/graded.hpp"
#include "cdg/report.hpp"

namespace cdg {

/// Finite-dimensional (or degree-truncated) CDG-algebra with basis vector
/// 0 the unit.  mult has column i*n+j equal to e_i e_j.
template <class S>
struct CDGAlgebra {
    std::string name;
    GradedSpace space;
    SparseMat<S> mult;
    SparseMat<S> d;
    Vec<S> h;

    int dim() const { return space.dim(); }
    int deg(int i) const { return space.degree(i); }
    const std::string& label(int i) const { return space.label(i); }

    Vec<S> mul(int i, int j) const { return column(mult, i * dim() + j); }
    Vec<S> mul(const Vec<S>& a, const Vec<S>& b) const {
        Vec<S> r;
        for (const auto& [i, x] : a)
            for (const auto& [j, y] : b)
                for (typename SparseMat<S>::InnerIterator it(mult, i * dim() + j); it; ++it)
                    axpy(r, static_cast<int>(it.row()), x * y * it.value());
        return r;
    }
    Vec<S> diff(const Vec<S>& a) const { return apply(d, a); }
    Vec<S> diff(int i) const { return column(d, i); }
    bool curved() const { return !h.empty(); }
};

template <class S>
using AlgebraPtr = std::shared_ptr<const CDGAlgebra<S>>;

namespace detail {

template <class S>
std::string vec_str(const Vec<S>& v, const GradedSpace& sp) {
    if (v.empty()) return "0";
    std::string out;
    for (const auto& [k, c] : v) {
        if (!out.empty()) out += " + ";
        out += "(" + c.str() + ")" + sp.label(k);
    }
    return out;
}

template <class S>
bool homogeneous(const SparseMat<S>& m, const std::function<int(int)>& src_deg, const GradedSpace& tgt, int degree, int& bad_col) {
    for (int j = 0; j < m.outerSize(); ++j)
        for (typename SparseMat<S>::InnerIterator it(m, j); it; ++it)
            if (!it.value().is_zero() && tgt.degree(static_cast<int>(it.row())) != src_deg(j) + degree) {
                bad_col = j;
                return false;
            }
    return true;
}

}  // namespace detail

template <class S>
AxiomReport check_cdg_algebra(const CDGAlgebra<S>& a) {
    AxiomReport rep;
    rep.subject = "CDG-algebra " + a.name;
    const int n = a.dim();
    const std::string scope = a.space.window.total ? "exact" : "exact on truncation " + a.space.window.str();
    auto L = [&](int i) { return a.label(i); };

    if (n == 0 || a.deg(0) != 0) {
        rep.fail("unit", "no degree-0 unit vector");
        return rep;
    }
    if (a.mult.rows() != n || a.mult.cols() != n * n || a.d.rows() != n || a.d.cols() != n) {
        rep.fail("shape", "structure matrices do not match the carrier");
        return rep;
    }

    int bad = -1;
    std::string w;
    if (!detail::homogeneous<S>(a.mult, [&](int c) { return a.deg(c / n) + a.deg(c % n); }, a.space, 0, bad))
        w = "mult(" + L(bad / n) + "," + L(bad % n) + ")";
    if (w.empty() && !detail::homogeneous<S>(a.d, [&](int c) { return a.deg(c); }, a.space, 1, bad)) w = "d(" + L(bad) + ")";
    if (w.empty())
        for (const auto& [k, c] : a.h)
            if (a.deg(k) != 2) { w = "h has component " + L(k); break; }
    rep.record("degrees", w, scope);

    w.clear();
    for (int i = 0; i < n && w.empty(); ++i) {
        if (a.mul(0, i) != unit_vec<S>(i)) w = "1*" + L(i);
        else if (a.mul(i, 0) != unit_vec<S>(i)) w = L(i) + "*1";
    }
    rep.record("unit", w, scope);

    w.clear();
    std::vector<Vec<S>> prod(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) prod[static_cast<std::size_t>(i * n + j)] = a.mul(i, j);
    for (int i = 0; i < n && w.empty(); ++i)
        for (int j = 0; j < n && w.empty(); ++j)
            for (int k = 0; k < n && w.empty(); ++k) {
                Vec<S> lhs = a.mul(prod[static_cast<std::size_t>(i * n + j)], unit_vec<S>(k));
                Vec<S> rhs = a.mul(unit_vec<S>(i), prod[static_cast<std::size_t>(j * n + k)]);
                if (lhs != rhs) w = "(" + L(i) + "," + L(j) + "," + L(k) + ")";
            }
    rep.record("associativity", w, scope);

    w.clear();
    for (int i = 0; i < n && w.empty(); ++i)
        for (int j = 0; j < n && w.empty(); ++j) {
            Vec<S> lhs = a.diff(prod[static_cast<std::size_t>(i * n + j)]);
            Vec<S> rhs = a.mul(a.diff(i), unit_vec<S>(j));
            axpy(rhs, a.mul(unit_vec<S>(i), a.diff(j)), sign<S>(a.deg(i)));
            if (lhs != rhs) w = "(" + L(i) + "," + L(j) + ")";
        }
    rep.record("leibniz", w, scope);

    w.clear();
    for (int i = 0; i < n && w.empty(); ++i) {
        Vec<S> lhs = a.diff(a.diff(i));
        Vec<S> rhs = a.mul(a.h, unit_vec<S>(i)) - a.mul(unit_vec<S>(i), a.h);
        if (lhs != rhs) w = L(i) + ": d^2 = " + detail::vec_str(lhs, a.space) + ", [h,-] = " + detail::vec_str(rhs, a.space);
    }
    rep.record("d^2 = [h,-]", w, scope);

    rep.record("d(h) = 0", a.diff(a.h).empty() ? "" : "d(h) = " + detail::vec_str(a.diff(a.h), a.space), scope);
    return rep;
}

/// Assembles an algebra from a product rule on basis indices.
template <class S>
CDGAlgebra<S> make_algebra(std::string name, GradedSpace space, const std::function<Vec<S>(int, int)>& product,
                           const std::vector<Vec<S>>& diff, Vec<S> h) {
    CDGAlgebra<S> a;
    a.name = std::move(name);
    a.space = std::move(space);
    const int n = a.dim();
    Triplets<S> t;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t.add_column(i * n + j, product(i, j));
    a.mult = t.build(n, n * n);
    std::vector<Vec<S>> dcols = diff;
    dcols.resize(static_cast<std::size_t>(n));
    a.d = from_columns<S>(n, dcols);
    a.h = std::move(h);
    return a;
}

/// The ground field k.
template <class S>
CDGAlgebra<S> ground_field() {
    GradedSpace sp;
    sp.add(0, "1");
    return make_algebra<S>("k", sp, [](int, int) { return unit_vec<S>(0); }, {}, {});
}

/// Monomial algebra: basis a factor-closed set of words in generators,
/// product is concatenation when the result is a basis word and zero
/// otherwise.  Words are vectors of generator indices; the empty word must
/// be present.  Labels spell the word with generator names.
template <class S>
CDGAlgebra<S> monomial_algebra(std::string name, const std::vector<std::string>& gen_names, const std::vector<int>& gen_degrees,
                               std::vector<std::vector<int>> words) {
    std::stable_sort(words.begin(), words.end(), [](const auto& x, const auto& y) { return x.size() < y.size(); });
    if (words.empty() || !words.front().empty()) throw std::invalid_argument("monomial algebra needs the empty word");
    std::map<std::vector<int>, int> index;
    GradedSpace sp;
    for (const auto& w : words) {
        int deg = 0;
        std::string label;
        for (std::size_t k = 0; k < w.size();) {
            std::size_t r = k;
            while (r < w.size() && w[r] == w[k]) ++r;
            label += gen_names.at(static_cast<std::size_t>(w[k]));
            if (r - k > 1) label += "^" + std::to_string(r - k);
            for (std::size_t m = k; m < r; ++m) deg += gen_degrees.at(static_cast<std::size_t>(w[m]));
            k = r;
        }
        index[w] = sp.add(deg, w.empty() ? "1" : label, static_cast<int>(w.size()));
    }
    auto product = [&](int i, int j) {
        std::vector<int> c = words[static_cast<std::size_t>(i)];
        c.insert(c.end(), words[static_cast<std::size_t>(j)].begin(), words[static_cast<std::size_t>(j)].end());
        auto it = index.find(c);
        return it == index.end() ? Vec<S>{} : unit_vec<S>(it->second);
    };
    return make_algebra<S>(std::move(name), sp, product, {}, {});
}

/// Extends values on generators (given on the length-one words) to the
/// unique derivation of a monomial algebra, word by word via Leibniz.
template <class S>
void set_derivation_on_words(CDGAlgebra<S>& a, const std::vector<std::vector<int>>& words, const std::vector<Vec<S>>& on_generator) {
    const int n = a.dim();
    std::map<std::vector<int>, int> index;
    for (int i = 0; i < n; ++i) index[words[static_cast<std::size_t>(i)]] = i;
    std::vector<Vec<S>> cols(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto& w = words[static_cast<std::size_t>(i)];
        Vec<S> r;
        int prefix_deg = 0;
        for (std::size_t k = 0; k < w.size(); ++k) {
            std::vector<int> pre(w.begin(), w.begin() + static_cast<long>(k));
            std::vector<int> post(w.begin() + static_cast<long>(k) + 1, w.end());
            auto ip = index.find(pre);
            auto iq = index.find(post);
            if (ip != index.end() && iq != index.end()) {
                Vec<S> term = a.mul(a.mul(unit_vec<S>(ip->second), on_generator.at(static_cast<std::size_t>(w[k]))), unit_vec<S>(iq->second));
                axpy(r, term, sign<S>(prefix_deg));
            }
            prefix_deg += a.deg(index.at({w[k]}));
        }
        cols[static_cast<std::size_t>(i)] = r;
    }
    a.d = from_columns<S>(n, cols);
}

/// Truncated polynomial algebra k[x]/(x^{top+1}) with d(x) = c x^2.  For
/// positive |x| this is the quotient by all degrees above top*|x|, so it is
/// an honest CDG-algebra approximating k[x] on the window.
template <class S>
CDGAlgebra<S> truncated_polynomial(const std::string& var, int degree, int top, const S& dcoef = S(0), bool mark_window = true) {
    std::vector<std::vector<int>> words;
    for (int p = 0; p <= top; ++p) words.push_back(std::vector<int>(static_cast<std::size_t>(p), 0));
    CDGAlgebra<S> a = monomial_algebra<S>("k[" + var + "]", {var}, {degree}, words);
    if (top >= 1 && !dcoef.is_zero()) {
        Vec<S> dx;
        if (top >= 2) dx = Vec<S>{{2, dcoef}};
        set_derivation_on_words(a, words, {dx});
    }
    if (mark_window && degree > 0) a.space.window = Window::upto(0, top * degree);
    if (mark_window && degree > 0) a.name = "k[" + var + "]/(" + var + "^" + std::to_string(top + 1) + ")";
    return a;
}

/// Exterior algebra k[e]/(e^2) on one generator of the given degree.
template <class S>
CDGAlgebra<S> exterior(const std::string& var, int degree) {
    CDGAlgebra<S> a = monomial_algebra<S>("k[" + var + "]/(" + var + "^2)", {var}, {degree}, {{}, {0}});
    return a;
}

/// Replace d by d + [a,-] and h by h + d(a) + a^2 for |a| = 1.
template <class S>
CDGAlgebra<S> inner_twist(const CDGAlgebra<S>& base, const Vec<S>& a) {
    for (const auto& [k, c] : a)
        if (base.deg(k) != 1) throw std::invalid_argument("inner twist needs a degree-one element");
    CDGAlgebra<S> r = base;
    const int n = base.dim();
    std::vector<Vec<S>> cols(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Vec<S> v = base.diff(i);
        axpy(v, base.mul(a, unit_vec<S>(i)), S(1));
        axpy(v, base.mul(unit_vec<S>(i), a), -sign<S>(base.deg(i)));
        cols[static_cast<std::size_t>(i)] = v;
    }
    r.d = from_columns<S>(n, cols);
    r.h = base.h;
    axpy(r.h, base.diff(a), S(1));
    axpy(r.h, base.mul(a, a), S(1));
    return r;
}

/// Change of basis e_i -> e_i - nu_i 1 for degree-0 basis vectors; changes
/// which complement of the unit line the coordinate retraction sees.
template <class S>
CDGAlgebra<S> rebase(const CDGAlgebra<S>& a, const Vec<S>& nu) {
    for (const auto& [k, c] : nu)
        if (k == 0 || a.deg(k) != 0) throw std::invalid_argument("rebase: nu must live on non-unit degree-0 vectors");
    auto old_of_new = [&](int i) {
        Vec<S> v = unit_vec<S>(i);
        auto it = nu.find(i);
        if (it != nu.end()) axpy(v, 0, -it->second);
        return v;
    };
    auto new_of_old = [&](const Vec<S>& v) {
        Vec<S> r;
        for (const auto& [i, c] : v) {
            axpy(r, i, c);
            auto it = nu.find(i);
            if (it != nu.end()) axpy(r, 0, c * it->second);
        }
        return r;
    };
    const int n = a.dim();
    std::vector<Vec<S>> dcols;
    for (int i = 0; i < n; ++i) dcols.push_back(new_of_old(a.diff(old_of_new(i))));
    CDGAlgebra<S> r = make_algebra<S>(a.name, a.space, [&](int i, int j) { return new_of_old(a.mul(old_of_new(i), old_of_new(j))); },
                                      dcols, new_of_old(a.h));
    return r;
}

/// Graded tensor product: (a⊗b)(a'⊗b') = (-1)^{|b||a'|} aa' ⊗ bb'.
template <class S>
CDGAlgebra<S> tensor_algebra(const CDGAlgebra<S>& a, const CDGAlgebra<S>& b) {
    const int na = a.dim(), nb = b.dim();
    GradedSpace sp = tensor_space(a.space, b.space);
    auto product = [&](int x, int y) {
        int i = x / nb, j = x % nb, k = y / nb, l = y % nb;
        Vec<S> ab = a.mul(i, k), bb = b.mul(j, l);
        S s = sign<S>(static_cast<long>(b.deg(j)) * a.deg(k));
        Vec<S> r;
        for (const auto& [p, c] : ab)
            for (const auto& [q, e] : bb) axpy(r, p * nb + q, s * c * e);
        return r;
    };
    std::vector<Vec<S>> dcols;
    for (int x = 0; x < na * nb; ++x) {
        int i = x / nb, j = x % nb;
        Vec<S> r;
        for (const auto& [p, c] : a.diff(i)) axpy(r, p * nb + j, c);
        for (const auto& [q, c] : b.diff(j)) axpy(r, i * nb + q, sign<S>(a.deg(i)) * c);
        dcols.push_back(r);
    }
    Vec<S> h;
    for (const auto& [p, c] : a.h) axpy(h, p * nb, c);
    for (const auto& [q, c] : b.h) axpy(h, q, c);
    return make_algebra<S>(a.name + "⊗" + b.name, sp, product, dcols, h);
}

/// B^op: a·b = (-1)^{|a||b|} ba, same d, curvature -h.
template <class S>
CDGAlgebra<S> opposite(const CDGAlgebra<S>& b) {
    auto product = [&](int i, int j) { return scaled(b.mul(j, i), sign<S>(static_cast<long>(b.deg(i)) * b.deg(j))); };
    std::vector<Vec<S>> dcols;
    for (int i = 0; i < b.dim(); ++i) dcols.push_back(b.diff(i));
    return make_algebra<S>(b.name + "^op", b.space, product, dcols, scaled(b.h, S(-1)));
}

/// A ⊗ B^op, whose left modules are the A-B-bimodules.
template <class S>
CDGAlgebra<S> bimodule_algebra(const CDGAlgebra<S>& a, const CDGAlgebra<S>& b) {
    return tensor_algebra(a, opposite(b));
}

}  // namespace cdg
