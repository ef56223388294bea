#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cdg/algebra.hpp"

namespace cdg {

class InvalidConnection : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotClosed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Left CDG-module.  action has column a*m + j equal to e_a · m_j.
template <class S>
struct CDGModule {
    std::string name;
    AlgebraPtr<S> algebra;
    GradedSpace space;
    SparseMat<S> action;
    SparseMat<S> d;

    int dim() const { return space.dim(); }
    int deg(int j) const { return space.degree(j); }
    const std::string& label(int j) const { return space.label(j); }

    Vec<S> act(int a, int j) const { return column(action, a * dim() + j); }
    Vec<S> act(const Vec<S>& a, const Vec<S>& m) const {
        Vec<S> r;
        for (const auto& [i, x] : a)
            for (const auto& [j, y] : m)
                for (typename SparseMat<S>::InnerIterator it(action, i * dim() + j); it; ++it)
                    axpy(r, static_cast<int>(it.row()), x * y * it.value());
        return r;
    }
    Vec<S> diff(const Vec<S>& m) const { return apply(d, m); }
    Vec<S> diff(int j) const { return column(d, j); }
};

template <class S>
using ModulePtr = std::shared_ptr<const CDGModule<S>>;

template <class S>
ModulePtr<S> share(CDGModule<S> m) { return std::make_shared<const CDGModule<S>>(std::move(m)); }

template <class S>
AlgebraPtr<S> share(CDGAlgebra<S> a) { return std::make_shared<const CDGAlgebra<S>>(std::move(a)); }

/// Graded A-linear map of fixed degree between modules over one algebra.
template <class S>
struct ModMap {
    ModulePtr<S> source;
    ModulePtr<S> target;
    int degree = 0;
    SparseMat<S> matrix;

    Vec<S> operator()(const Vec<S>& v) const { return apply(matrix, v); }
    Vec<S> operator()(int j) const { return column(matrix, j); }
};

template <class S>
CDGModule<S> assemble_module(std::string name, AlgebraPtr<S> alg, GradedSpace space, const std::function<Vec<S>(int, int)>& act,
                             const std::function<Vec<S>(int)>& diff) {
    CDGModule<S> m;
    m.name = std::move(name);
    m.algebra = std::move(alg);
    m.space = std::move(space);
    const int n = m.algebra->dim(), k = m.dim();
    Triplets<S> ta, td;
    for (int a = 0; a < n; ++a)
        for (int j = 0; j < k; ++j) ta.add_column(a * k + j, act(a, j));
    for (int j = 0; j < k; ++j) td.add_column(j, diff(j));
    m.action = ta.build(k, n * k);
    m.d = td.build(k, k);
    return m;
}

template <class S>
AxiomReport check_module(const CDGModule<S>& m) {
    AxiomReport rep;
    rep.subject = "CDG-module " + m.name + " over " + m.algebra->name;
    const CDGAlgebra<S>& a = *m.algebra;
    const int n = a.dim(), k = m.dim();
    const std::string scope = m.space.window.total && a.space.window.total ? "exact" : "exact on truncation " + m.space.window.meet(a.space.window).str();
    if (m.action.rows() != k || m.action.cols() != n * k || m.d.rows() != k || m.d.cols() != k) {
        rep.fail("shape", "structure matrices do not match carrier dimension " + std::to_string(k));
        return rep;
    }
    auto L = [&](int j) { return m.label(j); };
    auto AL = [&](int i) { return a.label(i); };

    int bad = -1;
    std::string w;
    if (!detail::homogeneous<S>(m.action, [&](int c) { return a.deg(c / k) + m.deg(c % k); }, m.space, 0, bad))
        w = "action(" + AL(bad / k) + "," + L(bad % k) + ")";
    if (w.empty() && !detail::homogeneous<S>(m.d, [&](int c) { return m.deg(c); }, m.space, 1, bad)) w = "d(" + L(bad) + ")";
    rep.record("degrees", w, scope);

    w.clear();
    for (int j = 0; j < k && w.empty(); ++j)
        if (m.act(0, j) != unit_vec<S>(j)) w = "1·" + L(j);
    rep.record("unit", w, scope);

    w.clear();
    for (int i = 0; i < n && w.empty(); ++i)
        for (int l = 0; l < n && w.empty(); ++l) {
            Vec<S> il = a.mul(i, l);
            for (int j = 0; j < k && w.empty(); ++j) {
                Vec<S> lhs = m.act(il, unit_vec<S>(j));
                Vec<S> rhs = m.act(unit_vec<S>(i), m.act(l, j));
                if (lhs != rhs) w = "(" + AL(i) + "," + AL(l) + "," + L(j) + ")";
            }
        }
    rep.record("associativity", w, scope);

    const Truncation& tr = m.space.truncation;
    const std::string dscope = tr.exact() ? scope : tr.str();
    auto keep = [&](const Vec<S>& v, int nd) {
        Vec<S> r;
        for (const auto& [i, x] : v)
            if (tr.output_ok(m.space.weight(i), nd)) r.emplace(i, x);
        return r;
    };
    w.clear();
    for (int i = 0; i < n && w.empty(); ++i)
        for (int j = 0; j < k && w.empty(); ++j) {
            if (!tr.input_ok(m.space.weight(j))) continue;
            Vec<S> lhs = m.diff(m.act(i, j));
            Vec<S> rhs = m.act(a.diff(i), unit_vec<S>(j));
            axpy(rhs, m.act(unit_vec<S>(i), m.diff(j)), sign<S>(a.deg(i)));
            if (keep(lhs, 1) != keep(rhs, 1)) w = "(" + AL(i) + "," + L(j) + ")";
        }
    rep.record("leibniz", w, dscope);

    w.clear();
    for (int j = 0; j < k && w.empty(); ++j) {
        if (!tr.input_ok(m.space.weight(j))) continue;
        Vec<S> lhs = keep(m.diff(m.diff(j)), 2);
        Vec<S> rhs = keep(m.act(a.h, unit_vec<S>(j)), 2);
        if (lhs != rhs) w = L(j) + ": d^2 = " + detail::vec_str(lhs, m.space) + ", h· = " + detail::vec_str(rhs, m.space);
    }
    rep.record("d^2 = h·", w, dscope);
    return rep;
}

/// D(f) = d_N f - (-1)^{|f|} f d_M.
template <class S>
ModMap<S> hom_differential(const ModMap<S>& f) {
    SparseMat<S> r = product(f.target->d, f.matrix);
    SparseMat<S> s = product(f.matrix, f.source->d);
    return {f.source, f.target, f.degree + 1, pruned<S>(SparseMat<S>(r - s * sign<S>(f.degree)))};
}

template <class S>
bool is_closed(const ModMap<S>& f) { return is_zero<S>(hom_differential(f).matrix); }

template <class S>
ModMap<S> compose(const ModMap<S>& g, const ModMap<S>& f) {
    return {f.source, g.target, f.degree + g.degree, product(g.matrix, f.matrix)};
}

template <class S>
ModMap<S> identity_map(const ModulePtr<S>& m) { return {m, m, 0, identity<S>(m->dim())}; }

template <class S>
ModMap<S> zero_map(const ModulePtr<S>& m, const ModulePtr<S>& n, int degree) {
    return {m, n, degree, SparseMat<S>(n->dim(), m->dim())};
}

template <class S>
ModMap<S> operator-(const ModMap<S>& f, const ModMap<S>& g) {
    return {f.source, f.target, f.degree, pruned<S>(SparseMat<S>(f.matrix - g.matrix))};
}

template <class S>
ModMap<S> operator+(const ModMap<S>& f, const ModMap<S>& g) {
    return {f.source, f.target, f.degree, pruned<S>(SparseMat<S>(f.matrix + g.matrix))};
}

/// Graded A-linearity f(am) = (-1)^{|f||a|} a f(m) and homogeneity.
template <class S>
AxiomReport check_modmap(const ModMap<S>& f) {
    AxiomReport rep;
    rep.subject = "map " + f.source->name + " -> " + f.target->name;
    const CDGModule<S>& m = *f.source;
    const CDGModule<S>& n = *f.target;
    std::string w;
    if (m.algebra->dim() != n.algebra->dim()) w = "modules over different algebras";
    if (w.empty() && (f.matrix.rows() != n.dim() || f.matrix.cols() != m.dim())) w = "matrix shape";
    int bad = -1;
    if (w.empty() && !detail::homogeneous<S>(f.matrix, [&](int c) { return m.deg(c); }, n.space, f.degree, bad)) w = "f(" + m.label(bad) + ")";
    rep.record("homogeneous", w);
    if (!w.empty()) return rep;
    w.clear();
    const CDGAlgebra<S>& a = *m.algebra;
    for (int i = 0; i < a.dim() && w.empty(); ++i)
        for (int j = 0; j < m.dim() && w.empty(); ++j) {
            Vec<S> lhs = f(m.act(i, j));
            Vec<S> rhs = scaled(n.act(unit_vec<S>(i), f(j)), sign<S>(static_cast<long>(f.degree) * a.deg(i)));
            if (lhs != rhs) w = "(" + a.label(i) + "," + m.label(j) + ")";
        }
    rep.record("A-linear", w);
    return rep;
}

/// M[n]: a·s^n m = (-1)^{n|a|} s^n(am), d = (-1)^n d.
template <class S>
CDGModule<S> shift_module(const CDGModule<S>& m, int n) {
    return assemble_module<S>(
        m.name + "[" + std::to_string(n) + "]", m.algebra, shift(m.space, n),
        [&](int a, int j) { return scaled(m.act(a, j), sign<S>(static_cast<long>(n) * m.algebra->deg(a))); },
        [&](int j) { return scaled(m.diff(j), sign<S>(n)); });
}

/// M ⊕ N with the basis of M first.
template <class S>
CDGModule<S> direct_sum(const CDGModule<S>& m, const CDGModule<S>& n, const std::string& name = "") {
    const int km = m.dim();
    GradedSpace sp;
    for (int j = 0; j < km; ++j) sp.add(m.deg(j), "L" + m.label(j), m.space.weight(j));
    for (int j = 0; j < n.dim(); ++j) sp.add(n.deg(j), "R" + n.label(j), n.space.weight(j));
    sp.window = m.space.window.meet(n.space.window);
    auto shift_idx = [](const Vec<S>& v, int off) {
        Vec<S> r;
        for (const auto& [k, c] : v) r.emplace(k + off, c);
        return r;
    };
    return assemble_module<S>(
        name.empty() ? m.name + "⊕" + n.name : name, m.algebra, sp,
        [&](int a, int j) { return j < km ? m.act(a, j) : shift_idx(n.act(a, j - km), km); },
        [&](int j) { return j < km ? m.diff(j) : shift_idx(n.diff(j - km), km); });
}

template <class S>
struct Cone {
    ModulePtr<S> module;
    ModMap<S> inclusion;   // N -> cone
    ModMap<S> projection;  // cone -> M[1], degree 0
};

/// Cone of a closed degree-0 map f: M -> N, carrier N ⊕ M[1], differential
/// d(n, sm) = (d n + f(m), -s dm).
template <class S>
Cone<S> cone(const ModMap<S>& f) {
    if (f.degree != 0) throw NotClosed("cone needs a degree-0 map");
    if (!is_closed(f)) throw NotClosed("cone of a map that is not closed");
    const CDGModule<S>& m = *f.source;
    const CDGModule<S>& n = *f.target;
    const int kn = n.dim(), km = m.dim();
    GradedSpace sp;
    for (int j = 0; j < kn; ++j) sp.add(n.deg(j), n.label(j), n.space.weight(j));
    for (int j = 0; j < km; ++j) sp.add_unique(m.deg(j) - 1, "s" + m.label(j), m.space.weight(j));
    sp.window = n.space.window.meet(shift(m.space, 1).window);
    auto up = [&](const Vec<S>& v, const S& c) {
        Vec<S> r;
        for (const auto& [k, x] : v) r.emplace(k + kn, x * c);
        return r;
    };
    auto mod = share(assemble_module<S>(
        "cone(" + m.name + "->" + n.name + ")", n.algebra, sp,
        [&](int a, int j) { return j < kn ? n.act(a, j) : up(m.act(a, j - kn), sign<S>(n.algebra->deg(a))); },
        [&](int j) {
            if (j < kn) return n.diff(j);
            Vec<S> r = f(j - kn);
            axpy(r, up(m.diff(j - kn), S(1)), S(-1));
            return r;
        }));
    auto sm = share(shift_module(m, 1));
    Triplets<S> ti, tp;
    for (int j = 0; j < kn; ++j) ti.add(j, j, S(1));
    for (int j = 0; j < km; ++j) tp.add(j, kn + j, S(1));
    return {mod, {f.target, mod, 0, ti.build(kn + km, kn)}, {mod, sm, 0, tp.build(km, kn + km)}};
}

template <class S>
struct Cylinder {
    ModulePtr<S> sum;       // X ⊕ X
    ModulePtr<S> module;    // X ⊕ X ⊕ X[1]
    ModMap<S> j;            // X ⊕ X -> Cyl
    ModMap<S> p;            // Cyl -> X
    ModMap<S> fold;         // X ⊕ X -> X
    ModMap<S> section;      // X -> Cyl, x -> (x, 0, 0)
};

/// Cyl(X) = X ⊕ X ⊕ X[1] with d(a,b,c) = (da + c, db - c, -dc).
template <class S>
Cylinder<S> cylinder(const ModulePtr<S>& x) {
    const CDGModule<S>& m = *x;
    const int k = m.dim();
    GradedSpace sp;
    for (int j = 0; j < k; ++j) sp.add(m.deg(j), "a:" + m.label(j));
    for (int j = 0; j < k; ++j) sp.add(m.deg(j), "b:" + m.label(j));
    for (int j = 0; j < k; ++j) sp.add(m.deg(j) - 1, "c:" + m.label(j));
    sp.window = m.space.window;
    auto block = [&](const Vec<S>& v, int b, const S& c) {
        Vec<S> r;
        for (const auto& [i, y] : v) r.emplace(i + b * k, y * c);
        return r;
    };
    Cylinder<S> out;
    out.module = share(assemble_module<S>(
        "Cyl(" + m.name + ")", m.algebra, sp,
        [&](int a, int j) {
            int b = j / k;
            S s = b == 2 ? sign<S>(m.algebra->deg(a)) : S(1);
            return block(m.act(a, j % k), b, s);
        },
        [&](int j) {
            int b = j / k, i = j % k;
            if (b == 0) return block(m.diff(i), 0, S(1));
            if (b == 1) return block(m.diff(i), 1, S(1));
            Vec<S> r{{i, S(1)}, {i + k, S(-1)}};
            axpy(r, block(m.diff(i), 2, S(-1)), S(1));
            return r;
        }));
    out.sum = share(direct_sum(m, m));
    Triplets<S> tj, tp, tf, ts;
    for (int i = 0; i < 2 * k; ++i) tj.add(i, i, S(1));
    for (int i = 0; i < k; ++i) {
        tp.add(i, i, S(1));
        tp.add(i, i + k, S(1));
        tf.add(i, i, S(1));
        tf.add(i, i + k, S(1));
        ts.add(i, i, S(1));
    }
    out.j = {out.sum, out.module, 0, tj.build(3 * k, 2 * k)};
    out.p = {out.module, x, 0, tp.build(k, 3 * k)};
    out.fold = {out.sum, x, 0, tf.build(k, 2 * k)};
    out.section = {x, out.module, 0, ts.build(3 * k, k)};
    return out;
}

/// Connection data for a finitely generated graded-free module A ⊗ V:
/// d(1 ⊗ v) = sum_w alpha[w][v] ⊗ w with alpha[w][v] in A of degree |v| + 1 - |w|.
template <class S>
struct Connection {
    std::vector<int> degrees;                  // generator degrees
    std::vector<std::vector<Vec<S>>> alpha;    // alpha[w][v]
};

/// Free module A ⊗ V with differential d(a ⊗ v) = d(a) ⊗ v + (-1)^{|a|} a·alpha(v);
/// basis e_i ⊗ v at index i * rank + v.
template <class S>
CDGModule<S> twisted_module_unchecked(const AlgebraPtr<S>& alg, const Connection<S>& c, const std::string& name) {
    const CDGAlgebra<S>& a = *alg;
    const int r = static_cast<int>(c.degrees.size());
    GradedSpace sp;
    for (int i = 0; i < a.dim(); ++i)
        for (int v = 0; v < r; ++v) sp.add(a.deg(i) + c.degrees[static_cast<std::size_t>(v)], r == 1 ? a.label(i) : a.label(i) + "·g" + std::to_string(v));
    sp.window = a.space.window;
    if (!sp.window.total) {
        int lo = *std::max_element(c.degrees.begin(), c.degrees.end());
        int hi = *std::min_element(c.degrees.begin(), c.degrees.end());
        sp.window.lo += lo;
        sp.window.hi += hi;
    }
    for (int w = 0; w < r; ++w)
        for (int v = 0; v < r; ++v)
            for (const auto& [k, x] : c.alpha[static_cast<std::size_t>(w)][static_cast<std::size_t>(v)])
                if (a.deg(k) != c.degrees[static_cast<std::size_t>(v)] + 1 - c.degrees[static_cast<std::size_t>(w)])
                    throw InvalidConnection("connection entry (" + std::to_string(w) + "," + std::to_string(v) + ") has a component of the wrong degree");
    auto tensor = [&](const Vec<S>& av, int v) {
        Vec<S> out;
        for (const auto& [k, x] : av) out.emplace(k * r + v, x);
        return out;
    };
    return assemble_module<S>(
        name, alg, sp,
        [&](int i, int j) { return tensor(a.mul(i, j / r), j % r); },
        [&](int j) {
            int i = j / r, v = j % r;
            Vec<S> out = tensor(a.diff(i), v);
            for (int w = 0; w < r; ++w) {
                const Vec<S>& aw = c.alpha[static_cast<std::size_t>(w)][static_cast<std::size_t>(v)];
                if (aw.empty()) continue;
                axpy(out, tensor(a.mul(unit_vec<S>(i), aw), w), sign<S>(a.deg(i)));
            }
            return out;
        });
}

/// A member of Tw(A); the squaring identity is checked and a failing
/// generator reported.
template <class S>
CDGModule<S> twisted_module(const AlgebraPtr<S>& alg, const Connection<S>& c, const std::string& name = "") {
    CDGModule<S> m = twisted_module_unchecked(alg, c, name.empty() ? "Tw" : name);
    const int r = static_cast<int>(c.degrees.size());
    // d^2 = h· on generators suffices by Leibniz.
    for (int v = 0; v < r; ++v) {
        Vec<S> lhs = m.diff(m.diff(v));
        Vec<S> rhs = m.act(alg->h, unit_vec<S>(v));
        if (lhs != rhs) throw InvalidConnection("(d + alpha)^2 != h· on generator " + m.label(v));
    }
    return m;
}

/// Free module of rank one on a generator of degree g with connection alpha.
template <class S>
CDGModule<S> rank_one(const AlgebraPtr<S>& alg, int g, const Vec<S>& alpha, const std::string& name) {
    Connection<S> c{{g}, {{alpha}}};
    return twisted_module(alg, c, name);
}

/// k in degree g with the non-unit basis acting by zero; valid when the
/// span of non-unit basis vectors is a d-stable ideal and h is in it.
template <class S>
CDGModule<S> trivial_module(const AlgebraPtr<S>& alg, int g = 0, const std::string& name = "k") {
    GradedSpace sp;
    sp.add(g, "1");
    return assemble_module<S>(
        name, alg, sp, [](int a, int) { return a == 0 ? unit_vec<S>(0) : Vec<S>{}; }, [](int) { return Vec<S>{}; });
}

/// Restriction of scalars along an algebra map phi: B -> A given as an
/// (dim A) x (dim B) matrix.
template <class S>
CDGModule<S> restrict_module(const CDGModule<S>& m, const AlgebraPtr<S>& b, const SparseMat<S>& phi, const std::string& name) {
    return assemble_module<S>(
        name, b, m.space, [&](int i, int j) { return m.act(column(phi, i), unit_vec<S>(j)); }, [&](int j) { return m.diff(j); });
}

/// A map between modules specified on all basis vectors.
template <class S>
ModMap<S> module_map(const ModulePtr<S>& m, const ModulePtr<S>& n, int degree, const std::vector<Vec<S>>& images) {
    return {m, n, degree, from_columns<S>(n->dim(), images)};
}

/// Enumeration bounds for Tw(A) test families.
template <class S>
struct TwistedBounds {
    int max_rank = 1;
    int deg_lo = 0;
    int deg_hi = 0;
    std::vector<S> coefficients;   // entries range over these on each basis vector
    long max_candidates = 200000;  // per degree pattern
};

/// All valid twisted modules within the bounds, in deterministic order.
template <class S>
std::vector<ModulePtr<S>> enumerate_twisted(const AlgebraPtr<S>& alg, const TwistedBounds<S>& b) {
    const CDGAlgebra<S>& a = *alg;
    std::vector<ModulePtr<S>> out;
    for (int r = 1; r <= b.max_rank; ++r) {
        std::vector<int> degs(static_cast<std::size_t>(r), b.deg_lo);
        while (true) {
            // slots: (w, v, basis index) with the right degree
            std::vector<std::tuple<int, int, int>> slots;
            for (int w = 0; w < r; ++w)
                for (int v = 0; v < r; ++v)
                    for (int k : a.space.component(degs[static_cast<std::size_t>(v)] + 1 - degs[static_cast<std::size_t>(w)])) slots.emplace_back(w, v, k);
            const long nc = static_cast<long>(b.coefficients.size());
            long total = 1;
            bool too_many = false;
            for (std::size_t s = 0; s < slots.size(); ++s) {
                if (total > b.max_candidates / std::max<long>(nc, 1)) { too_many = true; break; }
                total *= nc;
            }
            if (!too_many && nc > 0) {
                std::vector<long> digit(slots.size(), 0);
                for (long it = 0; it < total; ++it) {
                    long x = it;
                    for (std::size_t s = 0; s < slots.size(); ++s) { digit[s] = x % nc; x /= nc; }
                    Connection<S> c;
                    c.degrees = degs;
                    c.alpha.assign(static_cast<std::size_t>(r), std::vector<Vec<S>>(static_cast<std::size_t>(r)));
                    for (std::size_t s = 0; s < slots.size(); ++s) {
                        auto [w, v, k] = slots[s];
                        axpy(c.alpha[static_cast<std::size_t>(w)][static_cast<std::size_t>(v)], k, b.coefficients[static_cast<std::size_t>(digit[s])]);
                    }
                    std::string name = "T" + std::to_string(out.size());
                    try {
                        out.push_back(share(twisted_module(alg, c, name)));
                    } catch (const InvalidConnection&) {
                    }
                }
            }
            // next nondecreasing degree tuple
            int pos = r - 1;
            while (pos >= 0 && degs[static_cast<std::size_t>(pos)] == b.deg_hi) --pos;
            if (pos < 0) break;
            ++degs[static_cast<std::size_t>(pos)];
            for (int q = pos + 1; q < r; ++q) degs[static_cast<std::size_t>(q)] = degs[static_cast<std::size_t>(pos)];
        }
    }
    return out;
}

/// Degree of the highest generator: top degree of M / (span of non-unit
/// basis)·M.  Meaningful for connected nonnegatively graded algebras.
template <class S>
int generator_top(const CDGModule<S>& m) {
    Subspace<S> dec(m.dim());
    for (int a = 1; a < m.algebra->dim(); ++a)
        for (int j = 0; j < m.dim(); ++j) dec.add(m.act(a, j));
    int top = Window::kMin;
    for (int c : dec.complement()) top = std::max(top, m.deg(c));
    return top == Window::kMin ? 0 : top;
}

}  // namespace cdg
